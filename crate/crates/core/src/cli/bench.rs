//! `mul` versus `mul_incremental` timings on dense lead-0 series.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::SkewContext;
use crate::grouplab::{derive_seed, random_series, SeriesProfile};

pub const DEFAULT_SIZES: [i64; 3] = [32, 64, 128];

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ctx: Arc<SkewContext>,
    /// Coefficient counts; each size `n` uses series `a_0 + ... + a_{n-1} t^{n-1} + O(t^n)`.
    pub sizes: Vec<i64>,
    pub repeats: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(ctx: Arc<SkewContext>) -> Self {
        BenchConfig {
            ctx,
            sizes: DEFAULT_SIZES.to_vec(),
            repeats: 5,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub mean_ms: f64,
    pub stddev_ms: f64,
}

impl Timing {
    fn from_samples(ms: &[f64]) -> Self {
        let n = ms.len() as f64;
        let mean = ms.iter().sum::<f64>() / n;
        let var = if ms.len() > 1 {
            ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Timing {
            mean_ms: mean,
            stddev_ms: var.sqrt(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub size: i64,
    pub repeats: usize,
    pub mul: Timing,
    pub mul_incremental: Timing,
    /// `mul` mean over `mul_incremental` mean.
    pub ratio: f64,
    /// Outputs were structurally equal in every repeat.
    pub outputs_equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub context: String,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut out = format!("context: {}\n", self.context);
        out.push_str(&format!(
            "{:>6} {:>14} {:>10} {:>14} {:>10} {:>7} {:>6}\n",
            "size", "mul ms", "sd", "incr ms", "sd", "ratio", "equal"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:>6} {:>14.3} {:>10.3} {:>14.3} {:>10.3} {:>7.2} {:>6}\n",
                r.size,
                r.mul.mean_ms,
                r.mul.stddev_ms,
                r.mul_incremental.mean_ms,
                r.mul_incremental.stddev_ms,
                r.ratio,
                r.outputs_equal
            ));
        }
        out
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.sizes.iter().any(|&n| n < 1) {
        return Err(Error::usage("bench sizes must be positive"));
    }
    if cfg.repeats == 0 {
        return Err(Error::usage("bench needs at least one repeat"));
    }
    let mut rows = Vec::new();
    for &size in &cfg.sizes {
        let profile = SeriesProfile::dense(size);
        let mut t_mul = Vec::new();
        let mut t_inc = Vec::new();
        let mut equal = true;
        for r in 0..cfg.repeats {
            let x = random_series(&cfg.ctx, derive_seed(cfg.seed, size as u64, 2 * r as u64), &profile);
            let y = random_series(&cfg.ctx, derive_seed(cfg.seed, size as u64, 2 * r as u64 + 1), &profile);
            let start = Instant::now();
            let a = x.mul(&y)?;
            t_mul.push(start.elapsed().as_secs_f64() * 1e3);
            let start = Instant::now();
            let b = x.mul_incremental(&y)?;
            t_inc.push(start.elapsed().as_secs_f64() * 1e3);
            equal &= a == b;
        }
        let mul = Timing::from_samples(&t_mul);
        let mul_incremental = Timing::from_samples(&t_inc);
        let ratio = if mul_incremental.mean_ms > 0.0 {
            mul.mean_ms / mul_incremental.mean_ms
        } else {
            f64::NAN
        };
        rows.push(BenchRow {
            size,
            repeats: cfg.repeats,
            mul,
            mul_incremental,
            ratio,
            outputs_equal: equal,
        });
    }
    Ok(BenchReport {
        schema_version: super::verify::SCHEMA_VERSION,
        context: cfg.ctx.describe(),
        seed: cfg.seed,
        rows,
    })
}
