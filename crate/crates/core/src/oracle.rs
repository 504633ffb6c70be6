//! Brute-force checks that share nothing with the coset machinery.
//!
//! [`brute_dim`] computes `dim(W_k)` as the nullity of a `B`-linear system
//! written straight from the definition of `W_k`, and
//! [`brute_repair_check`] runs encode → erase → repair over every (or a
//! random sample of) message.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cosets::enumerate_cosets;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldParams};
use crate::linalg::Matrix;
use crate::repair::{build_plan, gw_max_k, repair_with_plan};
use crate::rs::{encode, Message};

/// Largest field the nullity oracle accepts.
pub const ORACLE_MAX_FIELD: u64 = 1 << 12;

/// Largest message space enumerated exhaustively.
pub const EXHAUSTIVE_MAX_MESSAGES: u64 = 1 << 20;

/// Trials used when a message space is too big to enumerate.
pub const DEFAULT_RANDOM_TRIALS: usize = 1000;

/// Rank over `B` of a matrix whose entries must all lie in `B`.
pub fn rank_over_b(ctx: &FieldCtx, mat: &Matrix) -> Result<usize> {
    if let Some((row, col, _)) = mat.entries().find(|&(_, _, x)| !ctx.in_subfield(x)) {
        return Err(Error::EntryNotInSubfield { row, col });
    }
    Ok(mat.rank(ctx))
}

/// The `(k·t) × (n-1)` system over `B` whose kernel is `W_k`.
///
/// Unknowns are `b_α ∈ B` for `α ≠ 0` (the entry of the dual word at `α` is
/// `b_α/α`). Annihilating `x^j` for `j < k` gives the `F`-valued conditions
/// `Σ b_α α^{j-1} = 0`; row `(j, l)` is coordinate `l` of each coefficient.
pub fn dual_system(ctx: &FieldCtx, k: usize) -> Result<Matrix> {
    let n = ctx.size();
    if n > ORACLE_MAX_FIELD {
        return Err(Error::FieldTooLarge {
            size: n,
            bound: ORACLE_MAX_FIELD,
        });
    }
    if k == 0 || k as u64 > n - 1 {
        return Err(Error::KOutOfRange {
            k,
            max: n as usize - 1,
        });
    }
    let t = ctx.t() as usize;
    let unknowns: Vec<_> = ctx.elements().filter(|x| !x.is_zero()).collect();
    let mut rows = vec![Vec::with_capacity(unknowns.len()); k * t];
    for &alpha in &unknowns {
        let alpha_inv = ctx.inv(alpha)?;
        let mut power = alpha_inv; // α^{j-1}, starting at j = 0
        for j in 0..k {
            for (l, c) in ctx.b_coordinates(power).into_iter().enumerate() {
                rows[j * t + l].push(c);
            }
            power = ctx.mul(power, alpha);
        }
    }
    Matrix::from_rows(rows)
}

/// `dim(W_k)` as the nullity of [`dual_system`].
pub fn brute_dim(ctx: &FieldCtx, k: usize) -> Result<usize> {
    let sys = dual_system(ctx, k)?;
    Ok(sys.cols() - rank_over_b(ctx, &sys)?)
}

/// How [`brute_repair_check`] picks messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Exhaustive when `q^{tk}` fits [`EXHAUSTIVE_MAX_MESSAGES`], otherwise
    /// [`DEFAULT_RANDOM_TRIALS`] random messages.
    Auto {
        seed: u64,
    },
    Exhaustive,
    Random {
        trials: usize,
        seed: u64,
    },
}

/// `q^{tk}`, if it fits in a `u64`.
fn message_space(ctx: &FieldCtx, k: usize) -> Option<u64> {
    ctx.size().checked_pow(k as u32)
}

/// True iff encode → erase `f(0)` → repair returns `f(0)` for every
/// selected message.
pub fn brute_repair_check(ctx: &FieldCtx, k: usize, r: u64, mode: CheckMode) -> Result<bool> {
    let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k)?;
    let plan = build_plan(ctx, &fc, r)?;
    let run = |msg: Message| -> Result<bool> {
        let expected = msg.coeffs()[0];
        let cw = encode(ctx, &msg)?.erase_zero()?;
        Ok(repair_with_plan(ctx, &plan, &cw)?.value == expected)
    };
    let space = message_space(ctx, k);
    let mode = match mode {
        CheckMode::Auto { seed } => match space {
            Some(s) if s <= EXHAUSTIVE_MAX_MESSAGES => CheckMode::Exhaustive,
            _ => CheckMode::Random {
                trials: DEFAULT_RANDOM_TRIALS,
                seed,
            },
        },
        m => m,
    };
    match mode {
        CheckMode::Exhaustive => {
            let total = space
                .filter(|&s| s <= EXHAUSTIVE_MAX_MESSAGES)
                .ok_or_else(|| {
                    Error::InvalidParameters(format!(
                        "message space of {} for k = {k} is too large to enumerate",
                        ctx.params()
                    ))
                })?;
            for idx in 0..total {
                if !run(Message::nth(ctx, k, idx))? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        CheckMode::Random { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                if !run(Message::random(ctx, k, &mut rng))? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        CheckMode::Auto { .. } => unreachable!("resolved above"),
    }
}

/// The fields cross-checked by default.
pub fn default_test_fields() -> Vec<FieldParams> {
    [
        (2, 1, 2),
        (3, 1, 2),
        (2, 2, 2),
        (2, 1, 3),
        (2, 1, 4),
        (5, 1, 2),
        (2, 3, 2),
    ]
    .into_iter()
    .map(|(p, m, t)| FieldParams { p, m, t })
    .collect()
}

/// One `(field, k)` cell of a verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub p: u32,
    pub m: u32,
    pub t: u32,
    pub k: usize,
    pub formula_d: usize,
    pub oracle_d: usize,
    /// `None` when `k` is beyond the trace-repair bound.
    pub repair_ok: Option<bool>,
}

impl VerifyRow {
    pub fn passed(&self) -> bool {
        self.formula_d == self.oracle_d && self.repair_ok != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(VerifyRow::passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random messages per `k` for the repair check.
    pub trials: usize,
    pub seed: u64,
    /// Test hook: adds one to the formula's `d` at this `k`.
    pub fault_at_k: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 100,
            seed: 0,
            fault_at_k: None,
        }
    }
}

/// Cross-checks the coset formula against [`brute_dim`] for every
/// `k ∈ [1, q^t - 1]` and runs a randomized repair check wherever repair is
/// defined.
pub fn verify_fields(fields: &[FieldParams], opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut rows = Vec::new();
    for params in fields {
        let ctx = FieldCtx::new(params.p, params.m, params.t)?;
        let cc = enumerate_cosets(ctx.q(), ctx.t());
        let gw_max = gw_max_k(&ctx);
        for k in 1..ctx.size() as usize {
            let mut formula_d = cc.dim_w(k)?;
            if opts.fault_at_k == Some(k) {
                formula_d += 1;
            }
            let oracle_d = brute_dim(&ctx, k)?;
            let repair_ok = if k <= gw_max {
                let mode = CheckMode::Random {
                    trials: opts.trials,
                    seed: opts.seed ^ k as u64,
                };
                Some(brute_repair_check(&ctx, k, 0, mode)?)
            } else {
                None
            };
            rows.push(VerifyRow {
                p: params.p,
                m: params.m,
                t: params.t,
                k,
                formula_d,
                oracle_d,
                repair_ok,
            });
        }
    }
    Ok(VerifyReport { rows })
}
