//! Low-bandwidth repair of the erased symbol `f(0)`.
//!
//! Every surviving node `α ≠ 0` can send the single `B`-symbol
//! `Tr(f(α)/α)`. Given all `n - 1` of these traces the trace-dual basis
//! recovers `f(0)` (the Guruswami–Wootters recombination). The `d` trace
//! polynomials `T_l^(i)` built from the surviving cosets are `B`-valued dual
//! codewords, so they give `d` independent `B`-linear relations among the
//! traces. A plan uses them to skip a window of `d` consecutive helpers
//! `ω^r, …, ω^{r+d-1}` and rebuild their traces from the others, which brings
//! the download to `n - d - 1` base-field symbols.
//!
//! The relations restricted to the window factor as `T_I = V·E`, with `V`
//! block diagonal (block `i` has entries `β_i^{l·q^j}`, see [`trace_poly`]) and `E` a row-scaled
//! Vandermonde matrix in the points `ω^{a·q^j}`. Both are invertible, so
//! `F_I = -E^{-1} V^{-1} T_rest F_rest`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cosets::{enumerate_cosets, Coset, FilteredCosets};
use crate::error::{Error, Result};
use crate::field::{Felem, FieldCtx, FieldParams, LogRepr};
use crate::linalg::{Lu, Matrix};
use crate::rs::{element_position, position_element, Codeword};

/// Largest `k` for which the trace recombination works: `q^t - q^{t-1}`.
///
/// The dual codeword `Tr(ux)/x` has degree `q^{t-1} - 1`, which must not
/// exceed `n - k - 1`.
pub fn gw_max_k(ctx: &FieldCtx) -> usize {
    (ctx.size() - ctx.size() / ctx.q()) as usize
}

fn check_gw_k(ctx: &FieldCtx, k: usize) -> Result<()> {
    let max = gw_max_k(ctx);
    if k == 0 {
        return Err(Error::KOutOfRange { k, max });
    }
    if k > max {
        return Err(Error::KTooLargeForGw { k, max });
    }
    Ok(())
}

/// `T_l^(i)(x) = Σ_{j<s_i} β_i^{l·q^j} x^{a^(i)·q^j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePoly {
    coset_index: usize,
    shift: usize,
    /// `(exponent, coefficient)` pairs in coset orbit order.
    terms: Vec<(u64, Felem)>,
}

impl TracePoly {
    pub fn coset_index(&self) -> usize {
        self.coset_index
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn terms(&self) -> &[(u64, Felem)] {
        &self.terms
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Felem) -> Felem {
        self.terms.iter().fold(Felem::ZERO, |acc, &(e, c)| {
            ctx.add(acc, ctx.mul(c, ctx.pow(x, e)))
        })
    }

    /// The full-length vector `(0, T(α)/α for α ≠ 0)` in position order.
    pub fn dual_codeword(&self, ctx: &FieldCtx) -> Vec<Felem> {
        (0..ctx.size() as usize)
            .map(|pos| match pos {
                0 => Felem::ZERO,
                _ => {
                    let alpha = position_element(ctx, pos);
                    ctx.div(self.eval(ctx, alpha), alpha)
                        .expect("alpha is nonzero")
                }
            })
            .collect()
    }
}

fn check_tower(ctx: &FieldCtx, fc: &FilteredCosets) -> Result<()> {
    if fc.q() != ctx.q() || fc.t() != ctx.t() {
        return Err(Error::InvalidParameters(format!(
            "cosets for q = {}, t = {} used with {}",
            fc.q(),
            fc.t(),
            ctx.params()
        )));
    }
    Ok(())
}

/// `(q^t - 1)/(q^s - 1)`: `ω` raised to this generates `GF(q^s)`.
fn coset_step(ctx: &FieldCtx, s: usize) -> u64 {
    ctx.group_order() / (ctx.q().pow(s as u32) - 1)
}

/// The trace polynomial for selected coset `i` and shift `l < s_i`:
/// `Σ_j β^{l q^j} x^{a q^j}` with `β = ω^{(q^t-1)/(q^s-1)}`, a generator of
/// `GF(q^s)`. For full-size cosets `β = ω`; a smaller coset needs its
/// coefficient in `GF(q^s)` for the sum to be a trace into `B`.
pub fn trace_poly(ctx: &FieldCtx, fc: &FilteredCosets, i: usize, l: usize) -> Result<TracePoly> {
    check_tower(ctx, fc)?;
    let coset = fc.selected().get(i).ok_or_else(|| {
        Error::IndexOutOfRange(format!(
            "coset {i} of {} selected cosets",
            fc.selected().len()
        ))
    })?;
    if l >= coset.size() {
        return Err(Error::IndexOutOfRange(format!(
            "shift {l} for a coset of size {}",
            coset.size()
        )));
    }
    let order = ctx.group_order();
    let step = coset_step(ctx, coset.size());
    let mut qj = 1u64;
    let mut terms = Vec::with_capacity(coset.size());
    for &e in coset.elements() {
        terms.push((e, ctx.exp(step * l as u64 % order * qj % order)));
        qj = qj * ctx.q() % order;
    }
    Ok(TracePoly {
        coset_index: i,
        shift: l,
        terms,
    })
}

/// All `d` trace polynomials, row order `(i, l)`.
pub fn trace_polys(ctx: &FieldCtx, fc: &FilteredCosets) -> Result<Vec<TracePoly>> {
    let mut out = Vec::with_capacity(fc.d());
    for (i, c) in fc.selected().iter().enumerate() {
        for l in 0..c.size() {
            out.push(trace_poly(ctx, fc, i, l)?);
        }
    }
    Ok(out)
}

/// The `d × (n-1)` matrix with entry `T_row(ω^e)` in column `e`.
pub fn evaluation_matrix(ctx: &FieldCtx, polys: &[TracePoly]) -> Matrix {
    Matrix::from_fn(polys.len(), ctx.group_order() as usize, |row, e| {
        polys[row].eval(ctx, ctx.exp(e as u64))
    })
}

/// Where a trace value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Downloaded,
    Recovered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub value: Felem,
    pub provenance: Provenance,
}

/// Traces `Tr(f(α)/α)` keyed by the exponent `e` of `α = ω^e`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceVector {
    entries: BTreeMap<u64, TraceEntry>,
}

impl TraceVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: u64, value: Felem, provenance: Provenance) {
        self.entries.insert(e, TraceEntry { value, provenance });
    }

    pub fn get(&self, e: u64) -> Option<Felem> {
        self.entries.get(&e).map(|t| t.value)
    }

    pub fn entry(&self, e: u64) -> Option<&TraceEntry> {
        self.entries.get(&e)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &TraceEntry)> {
        self.entries.iter().map(|(&e, t)| (e, t))
    }

    pub fn count(&self, provenance: Provenance) -> usize {
        self.entries
            .values()
            .filter(|t| t.provenance == provenance)
            .count()
    }

    /// Adds every entry of `other`, overwriting on collision.
    pub fn extend(&mut self, other: &TraceVector) {
        self.entries
            .extend(other.entries.iter().map(|(&e, &t)| (e, t)));
    }

    /// Computes every trace directly from a fully known codeword. Test and
    /// oracle use only; a repair never has this much access.
    pub fn from_values(ctx: &FieldCtx, values: &[Felem]) -> Self {
        let mut out = TraceVector::new();
        for e in 0..ctx.group_order() {
            let pos = e as usize + 1;
            out.insert(e, node_trace(ctx, values[pos], pos), Provenance::Downloaded);
        }
        out
    }
}

/// What the node at `pos` sends: `Tr(c_pos / α_pos)`.
pub fn node_trace(ctx: &FieldCtx, value: Felem, pos: usize) -> Felem {
    let alpha = position_element(ctx, pos);
    ctx.trace(ctx.div(value, alpha).expect("node position is nonzero"))
}

/// A repair plan for one `(k, r)`.
#[derive(Clone, Debug)]
pub struct RepairPlan {
    params: FieldParams,
    k: usize,
    r: u64,
    selected: Vec<Coset>,
    polys: Vec<TracePoly>,
    omitted: Vec<u64>,
    helpers: Vec<u64>,
    t_full: Matrix,
    v: Matrix,
    e: Matrix,
    v_lu: Lu,
    e_lu: Lu,
}

/// Builds the plan omitting the window `{ω^r, …, ω^{r+d-1}}`.
pub fn build_plan(ctx: &FieldCtx, fc: &FilteredCosets, r: u64) -> Result<RepairPlan> {
    check_tower(ctx, fc)?;
    check_gw_k(ctx, fc.k())?;
    let order = ctx.group_order();
    if r >= order {
        return Err(Error::ROutOfRange { r, max: order - 1 });
    }
    let d = fc.d();
    let polys = trace_polys(ctx, fc)?;
    let t_full = evaluation_matrix(ctx, &polys);

    let omitted: Vec<u64> = (0..d as u64).map(|c| (r + c) % order).collect();
    let mut skip = vec![false; order as usize];
    for &e in &omitted {
        skip[e as usize] = true;
    }
    let helpers: Vec<u64> = (0..order).filter(|&e| !skip[e as usize]).collect();

    let mut v = Matrix::zeros(d, d);
    let mut e_mat = Matrix::zeros(d, d);
    let mut offset = 0;
    for coset in fc.selected() {
        let s = coset.size();
        let step = coset_step(ctx, s);
        let mut qj = 1u64;
        for (j, &a) in coset.elements().iter().enumerate() {
            for l in 0..s {
                v.set(
                    offset + l,
                    offset + j,
                    ctx.exp(step * l as u64 % order * qj % order),
                );
            }
            for c in 0..d as u64 {
                e_mat.set(
                    offset + j,
                    c as usize,
                    ctx.exp(a * ((r + c) % order) % order),
                );
            }
            qj = qj * ctx.q() % order;
        }
        offset += s;
    }
    let v_lu = Lu::factor(ctx, &v)?;
    let e_lu = Lu::factor(ctx, &e_mat)?;

    Ok(RepairPlan {
        params: ctx.params(),
        k: fc.k(),
        r,
        selected: fc.selected().to_vec(),
        polys,
        omitted,
        helpers,
        t_full,
        v,
        e: e_mat,
        v_lu,
        e_lu,
    })
}

impl RepairPlan {
    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// `dim(W_k)`, the number of omitted helpers.
    pub fn d(&self) -> usize {
        self.omitted.len()
    }

    pub fn selected(&self) -> &[Coset] {
        &self.selected
    }

    pub fn trace_polys(&self) -> &[TracePoly] {
        &self.polys
    }

    /// Exponents `e` of the omitted points `ω^e`, in window order.
    pub fn omitted(&self) -> &[u64] {
        &self.omitted
    }

    /// Exponents of the helpers that are contacted, ascending.
    pub fn helpers(&self) -> &[u64] {
        &self.helpers
    }

    /// Codeword positions of the helpers.
    pub fn helper_positions(&self) -> Vec<usize> {
        self.helpers.iter().map(|&e| e as usize + 1).collect()
    }

    pub fn t_full(&self) -> &Matrix {
        &self.t_full
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn e(&self) -> &Matrix {
        &self.e
    }

    /// The columns of `T` at the omitted window.
    pub fn t_omitted(&self) -> Matrix {
        let cols: Vec<usize> = self.omitted.iter().map(|&e| e as usize).collect();
        self.t_full.select_columns(&cols)
    }

    /// Checks `T_I = V·E` exactly.
    pub fn factorization_holds(&self, ctx: &FieldCtx) -> Result<bool> {
        Ok(self.t_omitted() == self.v.mul(ctx, &self.e)?)
    }

    pub fn to_document(&self) -> PlanDocument {
        PlanDocument {
            p: self.params.p,
            m: self.params.m,
            t: self.params.t,
            k: self.k,
            r: self.r,
            d: self.d(),
            omitted: self.omitted.iter().map(|&e| LogRepr(Some(e))).collect(),
            helpers: self.helpers.iter().map(|&e| LogRepr(Some(e))).collect(),
            cosets: self
                .selected
                .iter()
                .map(|c| c.elements().to_vec())
                .collect(),
        }
    }
}

/// JSON form of a [`RepairPlan`]. Points are discrete-log exponents; the
/// `cosets` are the selected cosets in orbit order, which is also the row
/// order of `E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub p: u32,
    pub m: u32,
    pub t: u32,
    pub k: usize,
    pub r: u64,
    pub d: usize,
    pub omitted: Vec<LogRepr>,
    pub helpers: Vec<LogRepr>,
    pub cosets: Vec<Vec<u64>>,
}

impl PlanDocument {
    /// Rebuilds the field and the plan, rejecting documents that disagree
    /// with what `(p, m, t, k, r)` determine.
    pub fn into_plan(&self) -> Result<(FieldCtx, RepairPlan)> {
        let ctx = FieldCtx::new(self.p, self.m, self.t)?;
        let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(self.k)?;
        let plan = build_plan(&ctx, &fc, self.r)?;
        let expected = plan.to_document();
        let mismatch = |what: &str| Err(Error::MalformedPlan(format!("{what} does not match")));
        if self.d != expected.d {
            return mismatch("d");
        }
        if self.omitted != expected.omitted {
            return mismatch("omitted");
        }
        if self.helpers != expected.helpers {
            return mismatch("helpers");
        }
        if self.cosets != expected.cosets {
            return mismatch("cosets");
        }
        Ok((ctx, plan))
    }
}

/// Rebuilds the omitted traces `F_I = -E^{-1} V^{-1} T_rest F_rest`.
pub fn recover_missing_traces(
    ctx: &FieldCtx,
    plan: &RepairPlan,
    downloaded: &TraceVector,
) -> Result<TraceVector> {
    let d = plan.d();
    let mut rhs = vec![Felem::ZERO; d];
    for &e in &plan.helpers {
        let value = downloaded.get(e).ok_or(Error::IncompleteDownload(e))?;
        if value.is_zero() {
            continue;
        }
        for (row, acc) in rhs.iter_mut().enumerate() {
            *acc = ctx.add(*acc, ctx.mul(plan.t_full.get(row, e as usize), value));
        }
    }
    let x = plan.v_lu.solve(ctx, &rhs)?;
    let y = plan.e_lu.solve(ctx, &x)?;
    let mut out = TraceVector::new();
    for (&e, &val) in plan.omitted.iter().zip(&y) {
        out.insert(e, ctx.neg(val), Provenance::Recovered);
    }
    Ok(out)
}

/// Recovers `f(0)` from all `n - 1` traces.
///
/// For each basis element `u_i`, `Tr(u_i f(0)) = -Σ_{α≠0} Tr(u_i α)·Tr(f(α)/α)`;
/// then `f(0) = Σ_i Tr(u_i f(0))·v_i`.
pub fn gw_finish(ctx: &FieldCtx, k: usize, traces: &TraceVector) -> Result<Felem> {
    check_gw_k(ctx, k)?;
    let values: Vec<Felem> = (0..ctx.group_order())
        .map(|e| traces.get(e).ok_or(Error::IncompleteTraces(e)))
        .collect::<Result<_>>()?;
    let mut out = Felem::ZERO;
    for (&u, &v) in ctx.u_basis().iter().zip(ctx.v_basis()) {
        let mut acc = Felem::ZERO;
        for (e, &tr) in values.iter().enumerate() {
            let weight = ctx.trace(ctx.mul(u, ctx.exp(e as u64)));
            acc = ctx.add(acc, ctx.mul(weight, tr));
        }
        out = ctx.add(out, ctx.mul(ctx.neg(acc), v));
    }
    Ok(out)
}

/// Download accounting for one repair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandwidthReport {
    pub helpers_contacted: usize,
    pub b_symbols: usize,
    pub bits: usize,
}

/// `⌈log2 q⌉`, the bits charged per base-field symbol.
pub fn bits_per_symbol(q: u64) -> usize {
    (u64::BITS - (q - 1).leading_zeros()) as usize
}

impl BandwidthReport {
    pub fn for_symbols(ctx: &FieldCtx, b_symbols: usize) -> Self {
        BandwidthReport {
            helpers_contacted: b_symbols,
            b_symbols,
            bits: b_symbols * bits_per_symbol(ctx.q()),
        }
    }
}

/// Read access to a codeword restricted to a plan's helpers. Each read is
/// one downloaded base-field symbol.
pub struct HelperAccess<'a> {
    ctx: &'a FieldCtx,
    cw: &'a Codeword,
    allowed: Vec<bool>,
    downloads: usize,
}

impl<'a> HelperAccess<'a> {
    pub fn new(ctx: &'a FieldCtx, cw: &'a Codeword, plan: &RepairPlan) -> Self {
        let mut allowed = vec![false; ctx.size() as usize];
        for pos in plan.helper_positions() {
            allowed[pos] = true;
        }
        HelperAccess {
            ctx,
            cw,
            allowed,
            downloads: 0,
        }
    }

    /// Fetches `Tr(f(α)/α)` from the node at `α = ω^e`.
    pub fn download(&mut self, e: u64) -> Result<Felem> {
        let pos = e as usize + 1;
        if !self.allowed.get(pos).copied().unwrap_or(false) {
            return Err(Error::ForbiddenRead(pos));
        }
        let value = self.cw.get(pos)?;
        self.downloads += 1;
        Ok(node_trace(self.ctx, value, pos))
    }

    pub fn downloads(&self) -> usize {
        self.downloads
    }
}

/// Outcome of a plan-driven repair.
#[derive(Clone, Debug)]
pub struct RepairOutcome {
    pub value: Felem,
    pub report: BandwidthReport,
    pub traces: TraceVector,
}

/// Repairs `f(0)` of a codeword erased exactly at position 0.
pub fn repair_with_plan(ctx: &FieldCtx, plan: &RepairPlan, cw: &Codeword) -> Result<RepairOutcome> {
    let n = ctx.size() as usize;
    if cw.len() != n || cw.erased().len() != 1 || !cw.is_erased(0) {
        return Err(Error::BadErasure {
            expected: n,
            position: 0,
        });
    }
    let mut access = HelperAccess::new(ctx, cw, plan);
    let mut traces = TraceVector::new();
    for &e in plan.helpers() {
        traces.insert(e, access.download(e)?, Provenance::Downloaded);
    }
    let recovered = recover_missing_traces(ctx, plan, &traces)?;
    traces.extend(&recovered);
    let value = gw_finish(ctx, plan.k(), &traces)?;
    Ok(RepairOutcome {
        value,
        report: BandwidthReport::for_symbols(ctx, access.downloads()),
        traces,
    })
}

/// Builds the plan for `(k, r)` and repairs `f(0)`.
pub fn repair_pipeline(
    ctx: &FieldCtx,
    k: usize,
    r: u64,
    cw: &Codeword,
) -> Result<(Felem, BandwidthReport)> {
    check_gw_k(ctx, k)?;
    let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k)?;
    let plan = build_plan(ctx, &fc, r)?;
    let out = repair_with_plan(ctx, &plan, cw)?;
    Ok((out.value, out.report))
}

/// Repairs a single erasure at any position by translating the code so the
/// erased point becomes 0: `g(x) = f(x + α*)` has the same degree as `f`.
pub fn repair_erased_at(
    ctx: &FieldCtx,
    plan: &RepairPlan,
    cw: &Codeword,
    pos: usize,
) -> Result<RepairOutcome> {
    let n = ctx.size() as usize;
    if cw.len() != n || cw.erased().len() != 1 || !cw.is_erased(pos) {
        return Err(Error::BadErasure {
            expected: n,
            position: pos,
        });
    }
    let shift = position_element(ctx, pos);
    let values = (0..n)
        .map(|j| {
            let src = element_position(ctx, ctx.add(position_element(ctx, j), shift));
            if src == pos {
                Ok(Felem::ZERO)
            } else {
                cw.get(src)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let shifted = Codeword::from_values(values).erase_zero()?;
    repair_with_plan(ctx, plan, &shifted)
}

/// One row of the bandwidth comparison, in base-field symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandwidthRow {
    pub k: usize,
    pub classical: usize,
    pub gw: usize,
    pub ours: usize,
}

pub fn bandwidth_table(ctx: &FieldCtx, k_max: usize) -> Result<Vec<BandwidthRow>> {
    check_gw_k(ctx, k_max)?;
    let cc = enumerate_cosets(ctx.q(), ctx.t());
    let n1 = ctx.group_order() as usize;
    (1..=k_max)
        .map(|k| {
            Ok(BandwidthRow {
                k,
                classical: k * ctx.t() as usize,
                gw: n1,
                ours: n1 - cc.dim_w(k)?,
            })
        })
        .collect()
}
