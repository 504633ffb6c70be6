//! Exact arithmetic for the tower `GF(p) ⊂ B = GF(q) ⊂ F = GF(q^t)`, `q = p^m`.
//!
//! Everything lives in `F`. The base field `B` is not a separate type: it is
//! the set of Frobenius-fixed elements `{x : x^q = x}`, which is closed under
//! the operations of `F`, so linear algebra over `B` simply runs `F`
//! arithmetic on `B`-valued entries.
//!
//! `F` is realised as `GF(p)[x] / (g)` where `g` is the lowest irreducible
//! monic polynomial of degree `m·t` (lower coefficients read as a base-`p`
//! integer, ascending). The primitive element `ω` is the smallest element
//! index of full multiplicative order. Both choices are deterministic, so a
//! context is fully determined by the triple `(p, m, t)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Largest supported field size `q^t` (full log/antilog tables).
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of `F`, stored as the base-`p` integer encoding of its
/// coefficient vector over `GF(p)` (coefficient of `x^i` is digit `i`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Felem(u32);

impl Felem {
    pub const ZERO: Felem = Felem(0);
    pub const ONE: Felem = Felem(1);

    /// Table index of this element, in `[0, q^t)`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The parameters that determine a [`FieldCtx`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub m: u32,
    pub t: u32,
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = (self.p as u64).pow(self.m);
        write!(f, "GF({}^{})/GF({})", q, self.t, q)
    }
}

/// Immutable context for the tower `GF(p) ⊂ B ⊂ F`.
#[derive(Clone)]
pub struct FieldCtx {
    params: FieldParams,
    q: u64,
    size: u64,
    /// Monic modulus over `GF(p)`, coefficients low to high, length `m·t + 1`.
    modulus: Vec<u32>,
    omega: Felem,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    /// `antilog[e] = ω^e` for `e` in `[0, 2(q^t - 1))`.
    antilog: Vec<Felem>,
    trace: Vec<Felem>,
    u_basis: Vec<Felem>,
    v_basis: Vec<Felem>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("params", &self.params)
            .field("modulus", &self.modulus)
            .field("omega", &self.omega)
            .finish_non_exhaustive()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- polynomial arithmetic over GF(p), used only while building tables ---

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo a nonzero polynomial `b`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &c) in b.iter().enumerate() {
            let sub = (factor as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(modulus.len() - 1, 0);
    r
}

fn poly_powmod(base: &[u32], mut exp: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut acc = vec![0u32; deg];
    acc[0] = 1;
    let mut base = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &base, modulus, p);
        }
        base = poly_mulmod(&base, &base, modulus, p);
        exp >>= 1;
    }
    acc
}

fn digits(mut value: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((value % p as u64) as u32);
        value /= p as u64;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter()
        .rev()
        .fold(0u64, |acc, &c| acc * p as u64 + c as u64) as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..(p as u64).pow(d as u32) {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn lowest_irreducible(p: u32, deg: usize) -> Vec<u32> {
    (0..(p as u64).pow(deg as u32))
        .map(|low| {
            let mut f = digits(low, p, deg);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial exists in every degree")
}

impl FieldCtx {
    /// Builds the tower `GF(p) ⊂ GF(p^m) ⊂ GF(p^{mt})`.
    pub fn new(p: u32, m: u32, t: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if m == 0 || t == 0 {
            return Err(Error::InvalidParameters(format!(
                "m and t must be positive (m = {m}, t = {t})"
            )));
        }
        let degree = m
            .checked_mul(t)
            .ok_or_else(|| Error::InvalidParameters("m·t overflows".into()))?;
        let size = (p as u64)
            .checked_pow(degree)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or(Error::TableTooLarge(
                (p as u64).checked_pow(degree).unwrap_or(u64::MAX),
            ))?;
        let q = (p as u64).pow(m);
        let deg = degree as usize;
        let order = size - 1;

        let modulus = lowest_irreducible(p, deg);
        assert!(is_irreducible(&modulus, p));

        let factors = prime_factors(order);
        let omega_digits = (1..size)
            .map(|idx| digits(idx, p, deg))
            .find(|g| {
                let one = poly_powmod(g, order, &modulus, p);
                undigits(&one, p) == 1
                    && factors
                        .iter()
                        .all(|&l| undigits(&poly_powmod(g, order / l, &modulus, p), p) != 1)
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let omega = Felem(undigits(&omega_digits, p));

        let mut log = vec![u32::MAX; size as usize];
        let mut antilog = vec![Felem::ZERO; 2 * order as usize];
        let mut cur = digits(1, p, deg);
        for e in 0..order as usize {
            let idx = undigits(&cur, p);
            assert_eq!(log[idx as usize], u32::MAX, "omega is not primitive");
            log[idx as usize] = e as u32;
            antilog[e] = Felem(idx);
            antilog[e + order as usize] = Felem(idx);
            cur = poly_mulmod(&cur, &omega_digits, &modulus, p);
        }
        assert_eq!(undigits(&cur, p), 1, "omega has the wrong order");

        let mut ctx = FieldCtx {
            params: FieldParams { p, m, t },
            q,
            size,
            modulus,
            omega,
            log,
            antilog,
            trace: Vec::new(),
            u_basis: Vec::new(),
            v_basis: Vec::new(),
        };
        ctx.trace = (0..size as u32)
            .map(|i| ctx.trace_by_conjugates(Felem(i)))
            .collect();
        ctx.u_basis = (0..t as u64).map(|l| ctx.exp(l)).collect();
        ctx.v_basis = dual_basis(&ctx, &ctx.u_basis)?;
        Ok(ctx)
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn m(&self) -> u32 {
        self.params.m
    }

    pub fn t(&self) -> u32 {
        self.params.t
    }

    /// Size of the base field, `q = p^m`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Size of the big field, `n = q^t`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Order of the multiplicative group, `q^t - 1`.
    pub fn group_order(&self) -> u64 {
        self.size - 1
    }

    /// `(q^t - 1)/(q - 1)`: `B* = <ω^s>`.
    pub fn subfield_step(&self) -> u64 {
        (self.size - 1) / (self.q - 1)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn omega(&self) -> Felem {
        self.omega
    }

    /// The `B`-basis `{1, ω, …, ω^{t-1}}` of `F`.
    pub fn u_basis(&self) -> &[Felem] {
        &self.u_basis
    }

    /// The trace-dual basis of [`u_basis`](Self::u_basis).
    pub fn v_basis(&self) -> &[Felem] {
        &self.v_basis
    }

    /// Builds an element from its coefficient vector over `GF(p)`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Felem> {
        let deg = (self.params.m * self.params.t) as usize;
        if coeffs.len() > deg {
            return Err(Error::InvalidParameters(format!(
                "{} coefficients for a degree-{deg} extension",
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.params.p) {
            return Err(Error::InvalidParameters(format!(
                "coefficient {c} is not in GF({})",
                self.params.p
            )));
        }
        Ok(Felem(undigits(coeffs, self.params.p)))
    }

    pub fn coeffs(&self, x: Felem) -> Vec<u32> {
        digits(
            x.0 as u64,
            self.params.p,
            (self.params.m * self.params.t) as usize,
        )
    }

    /// Element with the given table index, if it is in range.
    pub fn element(&self, index: u32) -> Option<Felem> {
        ((index as u64) < self.size).then_some(Felem(index))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Felem> + '_ {
        (0..self.size as u32).map(Felem)
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, c: u64) -> Felem {
        Felem((c % self.params.p as u64) as u32)
    }

    /// `ω^e`, with `e` reduced modulo `q^t - 1`.
    pub fn exp(&self, e: u64) -> Felem {
        self.antilog[(e % self.group_order()) as usize]
    }

    /// Discrete log to base `ω`; `None` for zero.
    pub fn log(&self, x: Felem) -> Option<u64> {
        (!x.is_zero()).then(|| self.log[x.0 as usize] as u64)
    }

    pub fn add(&self, x: Felem, y: Felem) -> Felem {
        let p = self.params.p;
        if p == 2 {
            return Felem(x.0 ^ y.0);
        }
        let (mut a, mut b) = (x.0, y.0);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        Felem(out)
    }

    pub fn neg(&self, x: Felem) -> Felem {
        let p = self.params.p;
        if p == 2 {
            return x;
        }
        let mut a = x.0;
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        Felem(out)
    }

    pub fn sub(&self, x: Felem, y: Felem) -> Felem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Felem, y: Felem) -> Felem {
        if x.is_zero() || y.is_zero() {
            return Felem::ZERO;
        }
        self.antilog[(self.log[x.0 as usize] + self.log[y.0 as usize]) as usize]
    }

    pub fn inv(&self, x: Felem) -> Result<Felem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.group_order() as u32;
        Ok(self.antilog[((order - self.log[x.0 as usize]) % order) as usize])
    }

    pub fn div(&self, x: Felem, y: Felem) -> Result<Felem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`, with `0^0 = 1`.
    pub fn pow(&self, x: Felem, e: u64) -> Felem {
        if e == 0 {
            return Felem::ONE;
        }
        match self.log(x) {
            None => Felem::ZERO,
            Some(l) => {
                let order = self.group_order();
                self.exp(((l as u128 * e as u128) % order as u128) as u64)
            }
        }
    }

    /// The Frobenius map `x ↦ x^q`.
    pub fn frobenius(&self, x: Felem) -> Felem {
        self.pow(x, self.q)
    }

    /// True iff `x ∈ B`, i.e. `x^q = x`.
    pub fn in_subfield(&self, x: Felem) -> bool {
        self.frobenius(x) == x
    }

    /// The elements of `B`: zero followed by `ω^{js}` for `j < q - 1`.
    pub fn subfield_elements(&self) -> Vec<Felem> {
        let s = self.subfield_step();
        std::iter::once(Felem::ZERO)
            .chain((0..self.q - 1).map(|j| self.exp(j * s)))
            .collect()
    }

    fn trace_by_conjugates(&self, x: Felem) -> Felem {
        let mut acc = Felem::ZERO;
        let mut conj = x;
        for _ in 0..self.params.t {
            acc = self.add(acc, conj);
            conj = self.frobenius(conj);
        }
        acc
    }

    /// `Tr(x) = Σ_{j<t} x^{q^j}`, the `B`-linear map `F → B`.
    pub fn trace(&self, x: Felem) -> Felem {
        self.trace[x.0 as usize]
    }

    /// Coordinates `(c_0, …, c_{t-1}) ∈ B^t` with `x = Σ c_l ω^l`.
    pub fn b_coordinates(&self, x: Felem) -> Vec<Felem> {
        self.v_basis
            .iter()
            .map(|&v| self.trace(self.mul(v, x)))
            .collect()
    }

    /// Inverse of [`b_coordinates`](Self::b_coordinates).
    pub fn from_b_coordinates(&self, coords: &[Felem]) -> Felem {
        coords
            .iter()
            .zip(&self.u_basis)
            .fold(Felem::ZERO, |acc, (&c, &u)| self.add(acc, self.mul(c, u)))
    }

    /// `Σ x_i y_i`.
    pub fn dot(&self, xs: &[Felem], ys: &[Felem]) -> Felem {
        xs.iter()
            .zip(ys)
            .fold(Felem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Human-readable form: `0` or `w^e`.
    pub fn display(&self, x: Felem) -> String {
        match self.log(x) {
            None => "0".to_string(),
            Some(e) => format!("w^{e}"),
        }
    }
}

/// Serialized form of a field element: its discrete log, or the string
/// `"zero"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LogRepr(pub Option<u64>);

impl Serialize for LogRepr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(e) => s.serialize_u64(e),
            None => s.serialize_str("zero"),
        }
    }
}

impl<'de> Deserialize<'de> for LogRepr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Exp(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Exp(e) => Ok(LogRepr(Some(e))),
            Raw::Word(w) if w == "zero" => Ok(LogRepr(None)),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "expected an exponent or \"zero\", got {w:?}"
            ))),
        }
    }
}

impl FieldCtx {
    pub fn to_repr(&self, x: Felem) -> LogRepr {
        LogRepr(self.log(x))
    }

    pub fn from_repr(&self, r: LogRepr) -> Result<Felem> {
        match r.0 {
            None => Ok(Felem::ZERO),
            Some(e) if e < self.group_order() => Ok(self.exp(e)),
            Some(e) => Err(Error::InvalidParameters(format!(
                "exponent {e} is not reduced modulo {}",
                self.group_order()
            ))),
        }
    }
}

/// Trace-dual basis of `basis`: the `v_j` with `Tr(u_i v_j) = δ_ij`.
///
/// Solves against the Gram matrix `G_ij = Tr(u_i u_j)`, which is invertible
/// over `B` whenever `basis` is a `B`-basis of `F`.
pub fn dual_basis(ctx: &FieldCtx, basis: &[Felem]) -> Result<Vec<Felem>> {
    let t = basis.len();
    if t != ctx.t() as usize {
        return Err(Error::DimensionMismatch(format!(
            "basis has {t} elements, extension degree is {}",
            ctx.t()
        )));
    }
    let gram = Matrix::from_fn(t, t, |i, j| ctx.trace(ctx.mul(basis[i], basis[j])));
    (0..t)
        .map(|j| {
            let mut rhs = vec![Felem::ZERO; t];
            rhs[j] = Felem::ONE;
            // G is symmetric, so column j of G^{-1} holds the coefficients of v_j.
            let coeffs = gram.solve(ctx, &rhs)?;
            Ok(ctx.dot(&coeffs, basis))
        })
        .collect()
}
