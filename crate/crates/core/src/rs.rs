//! Full-length Reed–Solomon codes over `A = F`, single erasures and the
//! classical download-any-`k` repair.
//!
//! Positions are indexed globally: position 0 holds `f(0)` and position
//! `j ≥ 1` holds `f(ω^{j-1})`.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Felem, FieldCtx};

/// Field element stored at `pos`.
pub fn position_element(ctx: &FieldCtx, pos: usize) -> Felem {
    if pos == 0 {
        Felem::ZERO
    } else {
        ctx.exp(pos as u64 - 1)
    }
}

/// Inverse of [`position_element`].
pub fn element_position(ctx: &FieldCtx, x: Felem) -> usize {
    ctx.log(x).map_or(0, |e| e as usize + 1)
}

/// The information polynomial `f_0 + f_1 x + … + f_{k-1} x^{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    coeffs: Vec<Felem>,
}

impl Message {
    pub fn new(coeffs: Vec<Felem>) -> Self {
        Message { coeffs }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, k: usize, rng: &mut R) -> Self {
        let size = ctx.size() as u32;
        Message {
            coeffs: (0..k)
                .map(|_| ctx.element(rng.random_range(0..size)).expect("in range"))
                .collect(),
        }
    }

    /// The `idx`-th message in lexicographic order over element indices.
    /// Iterating `idx` over `[0, q^{tk})` enumerates every message.
    pub fn nth(ctx: &FieldCtx, k: usize, mut idx: u64) -> Self {
        let size = ctx.size();
        let coeffs = (0..k)
            .map(|_| {
                let x = ctx.element((idx % size) as u32).expect("in range");
                idx /= size;
                x
            })
            .collect();
        Message { coeffs }
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Felem] {
        &self.coeffs
    }

    /// Horner evaluation of `f(x)`.
    pub fn eval(&self, ctx: &FieldCtx, x: Felem) -> Felem {
        self.coeffs
            .iter()
            .rev()
            .fold(Felem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }
}

/// A codeword of `RS(F, k)` with an erasure mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    values: Vec<Felem>,
    erased: BTreeSet<usize>,
}

impl Codeword {
    /// Wraps raw symbols; no membership check is made.
    pub fn from_values(values: Vec<Felem>) -> Self {
        Codeword {
            values,
            erased: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn erased(&self) -> &BTreeSet<usize> {
        &self.erased
    }

    pub fn is_erased(&self, pos: usize) -> bool {
        self.erased.contains(&pos)
    }

    /// Reads a surviving symbol.
    pub fn get(&self, pos: usize) -> Result<Felem> {
        if pos >= self.values.len() {
            return Err(Error::PositionOutOfRange {
                pos,
                len: self.values.len(),
            });
        }
        if self.erased.contains(&pos) {
            return Err(Error::ErasedRead(pos));
        }
        Ok(self.values[pos])
    }

    pub fn erase(mut self, pos: usize) -> Result<Self> {
        if pos >= self.values.len() {
            return Err(Error::PositionOutOfRange {
                pos,
                len: self.values.len(),
            });
        }
        if !self.erased.insert(pos) {
            return Err(Error::AlreadyErased(pos));
        }
        Ok(self)
    }

    /// Marks position 0 (the symbol `f(0)`) as erased.
    pub fn erase_zero(self) -> Result<Self> {
        self.erase(0)
    }
}

fn check_k(ctx: &FieldCtx, k: usize) -> Result<()> {
    let max = ctx.size() as usize;
    if k == 0 || k > max {
        return Err(Error::KOutOfRange { k, max });
    }
    Ok(())
}

/// Evaluates the message at every position.
pub fn encode(ctx: &FieldCtx, msg: &Message) -> Result<Codeword> {
    check_k(ctx, msg.k())?;
    let values = (0..ctx.size() as usize)
        .map(|pos| msg.eval(ctx, position_element(ctx, pos)))
        .collect();
    Ok(Codeword::from_values(values))
}

/// `Σ_pos a[pos]·b[pos]` over full-length vectors.
pub fn inner_product(ctx: &FieldCtx, a: &[Felem], b: &[Felem]) -> Result<Felem> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "inner product of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(ctx.dot(a, b))
}

/// Result of a classical repair: the symbol and the `F`-symbols downloaded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalRepair {
    pub value: Felem,
    pub f_symbols: usize,
    pub b_symbols: usize,
}

/// Recovers the erased `f(0)` by Lagrange interpolation from `k` surviving
/// positions.
pub fn classical_repair(
    ctx: &FieldCtx,
    cw: &Codeword,
    k: usize,
    helper_positions: &[usize],
) -> Result<ClassicalRepair> {
    check_k(ctx, k)?;
    let unique: BTreeSet<usize> = helper_positions.iter().copied().collect();
    if unique.len() != helper_positions.len() {
        return Err(Error::DuplicatePositions);
    }
    if helper_positions.len() < k {
        return Err(Error::InsufficientHelpers {
            needed: k,
            got: helper_positions.len(),
        });
    }
    let helpers = &helper_positions[..k];
    let points: Vec<(Felem, Felem)> = helpers
        .iter()
        .map(|&pos| Ok((position_element(ctx, pos), cw.get(pos)?)))
        .collect::<Result<_>>()?;

    // f(0) = Σ_i y_i Π_{j≠i} x_j / (x_j - x_i)
    let mut value = Felem::ZERO;
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut term = yi;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                term = ctx.mul(term, ctx.div(xj, ctx.sub(xj, xi))?);
            }
        }
        value = ctx.add(value, term);
    }
    Ok(ClassicalRepair {
        value,
        f_symbols: k,
        b_symbols: k * ctx.t() as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_and_constant_messages() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let cw = encode(&ctx, &Message::new(vec![Felem::ZERO; 3])).unwrap();
        assert!((0..9).all(|p| cw.get(p).unwrap() == Felem::ZERO));
        let c = ctx.exp(5);
        let cw = encode(&ctx, &Message::new(vec![c])).unwrap();
        assert!((0..9).all(|p| cw.get(p).unwrap() == c));
    }

    #[test]
    fn square_map_in_gf9() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let msg = Message::new(vec![Felem::ZERO, Felem::ZERO, Felem::ONE]);
        let cw = encode(&ctx, &msg).unwrap();
        let pos = element_position(&ctx, ctx.exp(3));
        assert_eq!(pos, 4);
        assert_eq!(cw.get(pos).unwrap(), ctx.exp(6));
    }

    #[test]
    fn encode_rejects_bad_k() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        assert!(matches!(
            encode(&ctx, &Message::new(vec![])),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(encode(&ctx, &Message::new(vec![Felem::ONE; 5])).is_err());
    }

    #[test]
    fn erasure_contract() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let cw = encode(&ctx, &Message::new(vec![Felem::ONE, ctx.omega()])).unwrap();
        let cw = cw.erase_zero().unwrap();
        assert_eq!(cw.get(0), Err(Error::ErasedRead(0)));
        assert!(cw.get(1).is_ok());
        assert_eq!(cw.clone().erase_zero(), Err(Error::AlreadyErased(0)));
        assert!(matches!(cw.get(9), Err(Error::PositionOutOfRange { .. })));
    }

    #[test]
    fn classical_repair_constant_code() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let c = ctx.exp(2);
        let cw = encode(&ctx, &Message::new(vec![c]))
            .unwrap()
            .erase_zero()
            .unwrap();
        for pos in 1..9 {
            assert_eq!(classical_repair(&ctx, &cw, 1, &[pos]).unwrap().value, c);
        }
    }

    #[test]
    fn classical_repair_is_helper_invariant() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut positions: Vec<usize> = (1..9).collect();
        for _ in 0..200 {
            let msg = Message::random(&ctx, 3, &mut rng);
            let cw = encode(&ctx, &msg).unwrap().erase_zero().unwrap();
            let fixed = classical_repair(&ctx, &cw, 3, &[2, 3, 4]).unwrap();
            assert_eq!(fixed.value, msg.coeffs()[0]);
            assert_eq!(fixed.b_symbols, 6);
            positions.shuffle(&mut rng);
            let other = classical_repair(&ctx, &cw, 3, &positions[..3]).unwrap();
            assert_eq!(other.value, fixed.value);
        }
    }

    #[test]
    fn classical_repair_errors() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let cw = encode(&ctx, &Message::new(vec![Felem::ONE; 3]))
            .unwrap()
            .erase_zero()
            .unwrap();
        assert_eq!(
            classical_repair(&ctx, &cw, 3, &[1, 2]),
            Err(Error::InsufficientHelpers { needed: 3, got: 2 })
        );
        assert_eq!(
            classical_repair(&ctx, &cw, 3, &[1, 2, 2]),
            Err(Error::DuplicatePositions)
        );
        assert_eq!(
            classical_repair(&ctx, &cw, 3, &[0, 1, 2]),
            Err(Error::ErasedRead(0))
        );
    }

    #[test]
    fn message_enumeration_is_a_bijection() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let all: BTreeSet<Vec<Felem>> = (0..16)
            .map(|i| Message::nth(&ctx, 2, i).coeffs().to_vec())
            .collect();
        assert_eq!(all.len(), 16);
    }
}
