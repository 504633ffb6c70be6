//! Trace repair of a single erased symbol of a full-length Reed–Solomon code
//! over `F = GF(q^t)`, downloading base-field symbols from `B = GF(q)`.
//!
//! The number of helpers a repair can skip equals `dim(W_k)`, which
//! [`cosets`] computes exactly from `q`-ary cyclotomic cosets. [`repair`]
//! turns that into an explicit plan: skip `d` consecutive powers of `ω`,
//! rebuild their traces, then finish with the trace-dual basis. [`oracle`]
//! re-derives `dim(W_k)` by brute-force linear algebra.
//!
//! ```
//! use cosetrepair::{encode, repair_pipeline, FieldCtx, Message};
//!
//! let ctx = FieldCtx::new(3, 1, 2)?; // GF(9) over GF(3)
//! let msg = Message::new(vec![ctx.exp(6), ctx.exp(1), ctx.exp(3)]);
//! let cw = encode(&ctx, &msg)?.erase_zero()?;
//! let (value, report) = repair_pipeline(&ctx, 3, 0, &cw)?;
//! assert_eq!(value, ctx.exp(6));
//! assert_eq!(report.b_symbols, 5);
//! # Ok::<(), cosetrepair::Error>(())
//! ```

pub mod cosets;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod repair;
pub mod rs;

pub use cosets::{enumerate_cosets, Coset, CosetCollection, FilteredCosets};
pub use error::{Error, Result};
pub use field::{dual_basis, Felem, FieldCtx, FieldParams, LogRepr};
pub use linalg::Matrix;
pub use oracle::{brute_dim, brute_repair_check, rank_over_b, CheckMode};
pub use repair::{
    bandwidth_table, build_plan, gw_finish, gw_max_k, recover_missing_traces, repair_pipeline,
    trace_poly, BandwidthReport, BandwidthRow, PlanDocument, RepairPlan, TracePoly, TraceVector,
};
pub use rs::{classical_repair, encode, Codeword, Message};
