//! Argument handling and dispatch for the `skewlab` binary.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::Error;
use crate::exactfield::SkewContext;
use crate::grouplab::commutator;
use crate::skewseries::{SkewLaurentSeries, DEFAULT_PRECISION};

use super::bench::{run_bench, BenchConfig, DEFAULT_SIZES};
use super::config::build_context;
use super::eval::eval_str;
use super::verify::{run_verify, TrialCounts, VerifyConfig, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "skewlab", version, about = "Exact arithmetic in twisted Laurent series L((t, sigma))")]
pub struct Cli {
    /// Coefficient field: q, q-u, or gf:p:k:c0,...,ck (modulus low to high).
    #[arg(long, global = true, default_value = "q-u")]
    pub field: String,
    /// Automorphism: identity, shift:c, scale:c or frobenius. Defaults to
    /// shift:1 on q-u and frobenius on gf.
    #[arg(long, global = true)]
    pub sigma: Option<String>,
    /// Absolute precision P of evaluated series.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub prec: i64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression and print the series.
    Eval {
        expr: String,
        /// Print a JSON document instead of the series text.
        #[arg(long)]
        json: bool,
    },
    /// Print the inverse of an expression.
    Inv {
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the commutator x y x^-1 y^-1.
    Comm {
        x: String,
        y: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the property suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Time mul against mul_incremental.
    Bench {
        /// Coefficient counts, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
        sizes: Vec<i64>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Set every trial count at once; the specific flags below override it.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub trials_ring: Option<usize>,
    #[arg(long)]
    pub trials_valuation: Option<usize>,
    #[arg(long)]
    pub trials_inverse: Option<usize>,
    #[arg(long)]
    pub trials_comm: Option<usize>,
    #[arg(long)]
    pub trials_products: Option<usize>,
    #[arg(long)]
    pub trials_fcomb: Option<usize>,
    /// Generator budget of the codimension witness suite.
    #[arg(long)]
    pub trials_budget: Option<usize>,
    /// Random probes for the centre checks.
    #[arg(long)]
    pub trials_probes: Option<usize>,
    #[arg(long)]
    pub trials_diff: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub k_max: i64,
}

impl VerifyArgs {
    fn counts(&self) -> TrialCounts {
        let mut c = match self.trials {
            Some(n) => TrialCounts::all(n),
            None => TrialCounts::default(),
        };
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut c.ring, self.trials_ring);
        set(&mut c.valuation, self.trials_valuation);
        set(&mut c.inverse, self.trials_inverse);
        set(&mut c.commutator, self.trials_comm);
        set(&mut c.product, self.trials_products);
        set(&mut c.f_combination, self.trials_fcomb);
        set(&mut c.witness_budget, self.trials_budget);
        set(&mut c.probes, self.trials_probes);
        set(&mut c.differential, self.trials_diff);
        c
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Syntax { .. } => EXIT_USAGE,
        Error::Domain(_) => EXIT_FAILURE,
    }
}

fn series_json(s: &SkewLaurentSeries) -> serde_json::Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "context": s.context().describe(),
        "series": s.to_string(),
        "valuation": s.valuation().to_string(),
        "precision": s.precision(),
    })
}

fn emit_series(out: &mut dyn Write, s: &SkewLaurentSeries, as_json: bool) -> std::io::Result<()> {
    if as_json {
        writeln!(out, "{}", series_json(s))
    } else {
        writeln!(out, "{s}")
    }
}

fn dispatch(cli: &Cli, ctx: &std::sync::Arc<SkewContext>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let p = cli.prec;
    let io = |e: std::io::Error| Error::Usage(format!("write failed: {e}"));
    match &cli.command {
        Command::Eval { expr, json } => {
            let s = eval_str(expr, ctx, p)?;
            emit_series(out, &s, *json).map_err(io)?;
        }
        Command::Inv { expr, json } => {
            let s = eval_str(expr, ctx, p)?.inverse()?;
            emit_series(out, &s, *json).map_err(io)?;
        }
        Command::Comm { x, y, json } => {
            let x = eval_str(x, ctx, p)?;
            let y = eval_str(y, ctx, p)?;
            let rec = commutator(&x, &y)?;
            emit_series(out, &rec.value, *json).map_err(io)?;
        }
        Command::Verify(args) => {
            let mut cfg = VerifyConfig::new(ctx.clone());
            cfg.seed = args.seed;
            cfg.precision = p;
            cfg.k_max = args.k_max;
            cfg.trials = args.counts();
            let report = run_verify(&cfg)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json()).unwrap()).map_err(io)?;
            write!(err, "{}", report.summary()).map_err(io)?;
            return Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE });
        }
        Command::Bench { sizes, repeats, seed } => {
            let mut cfg = BenchConfig::new(ctx.clone());
            cfg.sizes = sizes.clone();
            cfg.repeats = *repeats;
            cfg.seed = *seed;
            let report = run_bench(&cfg)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).map_err(io)?;
            write!(err, "{}", report.table()).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = build_context(&cli.field, cli.sigma.as_deref())
        .and_then(|ctx| dispatch(&cli, &ctx, out, err));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "skewlab: {e}");
            exit_code(&e)
        }
    }
}
