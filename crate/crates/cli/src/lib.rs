//! Command-line front end for `cosetrepair`.
//!
//! Every command validates its inputs and renders its whole output into a
//! string before anything is written, so a rejected invocation produces no
//! partial output.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cosetrepair::oracle::{default_test_fields, verify_fields, VerifyOptions, VerifyReport};
use cosetrepair::repair::{bits_per_symbol, repair_with_plan};
use cosetrepair::{
    bandwidth_table, build_plan, encode, enumerate_cosets, gw_max_k, BandwidthRow, Coset, FieldCtx,
    FieldParams, LogRepr, Message,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cosetrepair",
    version,
    about = "Low-bandwidth trace repair for full-length Reed-Solomon codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u32,
    /// Degree of the base field over GF(p).
    #[arg(long)]
    pub m: u32,
    /// Degree of the code field over the base field.
    #[arg(long)]
    pub t: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the q-ary cyclotomic cosets of {0, ..., q^t - 2}.
    Cosets {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Number of helpers that can be skipped, with the surviving cosets.
    Dim {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    /// Emit the repair plan for (k, r).
    Plan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        r: u64,
    },
    /// Encode a random message, erase f(0) and repair it.
    Repair {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        r: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bandwidth of classical, plain trace and pruned trace repair per k.
    Bandwidth {
        #[command(flatten)]
        field: FieldArgs,
        /// Largest k (defaults to q^t - q^(t-1)).
        #[arg(long = "k-max")]
        k_max: Option<usize>,
    },
    /// Cross-check the coset formula against the brute-force oracle.
    Verify {
        #[arg(long, requires_all = ["m", "t"])]
        p: Option<u32>,
        #[arg(long, requires_all = ["p", "t"])]
        m: Option<u32>,
        #[arg(long, requires_all = ["p", "m"])]
        t: Option<u32>,
        /// Random messages per k for the repair check.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturb the formula's d at this k (harness self-test).
        #[arg(long, hide = true)]
        inject_fault: Option<usize>,
    },
}

/// A rendered command result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub exit: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output {
            body,
            exit: EXIT_OK,
        }
    }
}

/// Rejected input; maps to exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<cosetrepair::Error> for UsageError {
    fn from(e: cosetrepair::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Output, UsageError>;

fn field(args: &FieldArgs) -> Result<FieldCtx, UsageError> {
    Ok(FieldCtx::new(args.p, args.m, args.t)?)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn set_notation(cosets: &[Vec<u64>]) -> String {
    let inner: Vec<String> = cosets
        .iter()
        .map(|c| {
            let items: Vec<String> = c.iter().map(u64::to_string).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    format!("{{{}}}", inner.join(","))
}

fn sorted(cosets: &[Coset]) -> Vec<Vec<u64>> {
    cosets.iter().map(Coset::sorted).collect()
}

fn unsupported(cmd: &str, format: Format) -> UsageError {
    UsageError(format!("{cmd} does not support --format {format:?}").to_lowercase())
}

pub fn cmd_cosets(args: &FieldArgs, format: Format) -> CmdResult {
    let ctx = field(args)?;
    let cosets = sorted(enumerate_cosets(ctx.q(), ctx.t()).cosets());
    let body = match format {
        Format::Text => format!("{}\n", set_notation(&cosets)),
        Format::Json => json(&cosets),
        Format::Csv => {
            let mut s = String::from("rep,size,elements\n");
            for c in &cosets {
                let items: Vec<String> = c.iter().map(u64::to_string).collect();
                writeln!(s, "{},{},{}", c[0], c.len(), items.join(" ")).unwrap();
            }
            s
        }
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct DimReport {
    p: u32,
    m: u32,
    t: u32,
    k: usize,
    d: usize,
    selected: Vec<Vec<u64>>,
    removed: Vec<Vec<u64>>,
}

pub fn cmd_dim(args: &FieldArgs, k: usize, format: Format) -> CmdResult {
    let ctx = field(args)?;
    let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k)?;
    let report = DimReport {
        p: args.p,
        m: args.m,
        t: args.t,
        k,
        d: fc.d(),
        selected: sorted(fc.selected()),
        removed: sorted(fc.removed()),
    };
    let body = match format {
        Format::Text => format!(
            "d={}\nselected={}\nremoved={}\n",
            report.d,
            set_notation(&report.selected),
            set_notation(&report.removed)
        ),
        Format::Json => json(&report),
        Format::Csv => return Err(unsupported("dim", format)),
    };
    Ok(Output::ok(body))
}

pub fn cmd_plan(args: &FieldArgs, k: usize, r: u64, format: Format) -> CmdResult {
    let ctx = field(args)?;
    let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k)?;
    let plan = build_plan(&ctx, &fc, r)?;
    let doc = plan.to_document();
    let body = match format {
        Format::Json => json(&doc),
        Format::Text => {
            let pts = |xs: &[u64]| {
                let v: Vec<String> = xs.iter().map(|&e| ctx.display(ctx.exp(e))).collect();
                v.join(" ")
            };
            let cosets: Vec<Vec<u64>> = plan
                .selected()
                .iter()
                .map(|c| c.elements().to_vec())
                .collect();
            format!(
                "field={}\nk={}\nr={}\nd={}\ncosets={}\nomitted={}\nhelpers={}\n",
                ctx.params(),
                k,
                r,
                plan.d(),
                set_notation(&cosets),
                pts(plan.omitted()),
                pts(plan.helpers())
            )
        }
        Format::Csv => return Err(unsupported("plan", format)),
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct RepairReport {
    p: u32,
    m: u32,
    t: u32,
    k: usize,
    r: u64,
    d: usize,
    recovered: LogRepr,
    expected: LogRepr,
    #[serde(rename = "match")]
    matched: bool,
    helpers: usize,
    b_symbols: usize,
    bits: usize,
    classical_bits: usize,
    gw_bits: usize,
}

pub fn cmd_repair(args: &FieldArgs, k: usize, r: u64, seed: u64, format: Format) -> CmdResult {
    let ctx = field(args)?;
    let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k)?;
    let plan = build_plan(&ctx, &fc, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let msg = Message::random(&ctx, k, &mut rng);
    let expected = msg.coeffs()[0];
    let cw = encode(&ctx, &msg)?.erase_zero()?;
    let out = repair_with_plan(&ctx, &plan, &cw)?;
    let matched = out.value == expected;
    let report = RepairReport {
        p: args.p,
        m: args.m,
        t: args.t,
        k,
        r,
        d: plan.d(),
        recovered: ctx.to_repr(out.value),
        expected: ctx.to_repr(expected),
        matched,
        helpers: out.report.helpers_contacted,
        b_symbols: out.report.b_symbols,
        bits: out.report.bits,
        classical_bits: k * bits_per_symbol(ctx.size()),
        gw_bits: (ctx.size() as usize - 1) * bits_per_symbol(ctx.q()),
    };
    let body = match format {
        Format::Json => json(&report),
        Format::Text => format!(
            "recovered={}\nexpected={}\nmatch={}\nd={}\nhelpers={}\nb_symbols={}\nbits={}\nclassical_bits={}\ngw_bits={}\n",
            ctx.display(out.value),
            ctx.display(expected),
            matched,
            report.d,
            report.helpers,
            report.b_symbols,
            report.bits,
            report.classical_bits,
            report.gw_bits
        ),
        Format::Csv => return Err(unsupported("repair", format)),
    };
    Ok(Output {
        body,
        exit: if matched { EXIT_OK } else { EXIT_MISMATCH },
    })
}

/// `k,classical,gw,ours` with LF line endings.
pub fn bandwidth_csv(rows: &[BandwidthRow]) -> String {
    let mut s = String::from("k,classical,gw,ours\n");
    for r in rows {
        writeln!(s, "{},{},{},{}", r.k, r.classical, r.gw, r.ours).unwrap();
    }
    s
}

pub fn cmd_bandwidth(args: &FieldArgs, k_max: Option<usize>, format: Format) -> CmdResult {
    let ctx = field(args)?;
    let rows = bandwidth_table(&ctx, k_max.unwrap_or_else(|| gw_max_k(&ctx)))?;
    let body = match format {
        Format::Csv => bandwidth_csv(&rows),
        Format::Json => json(&rows),
        Format::Text => {
            let mut s = format!("{:>6} {:>10} {:>6} {:>6}\n", "k", "classical", "gw", "ours");
            for r in &rows {
                writeln!(
                    s,
                    "{:>6} {:>10} {:>6} {:>6}",
                    r.k, r.classical, r.gw, r.ours
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Output::ok(body))
}

fn render_verify(report: &VerifyReport, format: Format) -> String {
    let repair = |r: Option<bool>| match r {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "n/a",
    };
    let status = |pass: bool| if pass { "pass" } else { "FAIL" };
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut s = String::from("p,m,t,k,formula_d,oracle_d,repair,status\n");
            for r in &report.rows {
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.p,
                    r.m,
                    r.t,
                    r.k,
                    r.formula_d,
                    r.oracle_d,
                    repair(r.repair_ok),
                    status(r.passed())
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &report.rows {
                let params = FieldParams {
                    p: r.p,
                    m: r.m,
                    t: r.t,
                };
                writeln!(
                    s,
                    "{params} k={} formula_d={} oracle_d={} repair={} {}",
                    r.k,
                    r.formula_d,
                    r.oracle_d,
                    repair(r.repair_ok),
                    status(r.passed())
                )
                .unwrap();
            }
            let failed = report.rows.iter().filter(|r| !r.passed()).count();
            writeln!(s, "{} rows, {} failed", report.rows.len(), failed).unwrap();
            s
        }
    }
}

pub fn cmd_verify(params: Option<FieldParams>, opts: &VerifyOptions, format: Format) -> CmdResult {
    let fields = match params {
        Some(p) => {
            let ctx = FieldCtx::new(p.p, p.m, p.t)?;
            if ctx.size() > cosetrepair::oracle::ORACLE_MAX_FIELD {
                return Err(UsageError(format!(
                    "verify supports fields up to {} elements",
                    cosetrepair::oracle::ORACLE_MAX_FIELD
                )));
            }
            vec![p]
        }
        None => default_test_fields(),
    };
    let report = verify_fields(&fields, opts)?;
    Ok(Output {
        body: render_verify(&report, format),
        exit: if report.all_passed() {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        },
    })
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli) -> CmdResult {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Cosets { field } => cmd_cosets(field, fmt(Format::Text)),
        Command::Dim { field, k } => cmd_dim(field, *k, fmt(Format::Text)),
        Command::Plan { field, k, r } => cmd_plan(field, *k, *r, fmt(Format::Json)),
        Command::Repair { field, k, r, seed } => {
            cmd_repair(field, *k, *r, *seed, fmt(Format::Text))
        }
        Command::Bandwidth { field, k_max } => cmd_bandwidth(field, *k_max, fmt(Format::Csv)),
        Command::Verify {
            p,
            m,
            t,
            trials,
            seed,
            inject_fault,
        } => {
            let params = match (p, m, t) {
                (Some(p), Some(m), Some(t)) => Some(FieldParams {
                    p: *p,
                    m: *m,
                    t: *t,
                }),
                _ => None,
            };
            let opts = VerifyOptions {
                trials: *trials,
                seed: *seed,
                fault_at_k: *inject_fault,
            };
            cmd_verify(params, &opts, fmt(Format::Text))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(p: u32, m: u32, t: u32) -> FieldArgs {
        FieldArgs { p, m, t }
    }

    #[test]
    fn cosets_text_and_json() {
        let out = cmd_cosets(&args(3, 1, 2), Format::Text).unwrap();
        assert_eq!(out.body, "{{0},{1,3},{2,6},{4},{5,7}}\n");
        let out = cmd_cosets(&args(3, 1, 2), Format::Json).unwrap();
        assert_eq!(out.body, "[[0],[1,3],[2,6],[4],[5,7]]\n");
        let out = cmd_cosets(&args(2, 1, 3), Format::Text).unwrap();
        assert_eq!(out.body, "{{0},{1,2,4},{3,5,6}}\n");
    }

    #[test]
    fn dim_outputs() {
        let out = cmd_dim(&args(3, 1, 2), 3, Format::Text).unwrap();
        assert!(out.body.starts_with("d=3\nselected={{2,6},{4}}\n"));
        let out = cmd_dim(&args(3, 1, 2), 1, Format::Json).unwrap();
        assert!(out.body.contains("\"d\":6"));
        assert!(cmd_dim(&args(3, 1, 2), 9, Format::Text).is_err());
    }

    #[test]
    fn bad_field_is_usage_error() {
        assert!(cmd_cosets(&args(4, 1, 2), Format::Text).is_err());
        assert!(cmd_bandwidth(&args(3, 1, 2), Some(7), Format::Csv).is_err());
    }
}
