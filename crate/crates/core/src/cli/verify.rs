//! Batch verification harness.
//!
//! Every trial `i` of property stream `s` draws its inputs from
//! `derive_seed(seed, s, i)`, so results depend only on the configuration.
//! Pass/fail in the report is derived from the recorded counts alone.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{AutOrder, SkewContext};
use crate::grouplab::{
    centre_check, commutator, commutator_product, derive_seed, random_fixed_scalar,
    random_series_with, standard_probes, CommutatorRecord, SeriesProfile,
};
use crate::skewseries::{SkewLaurentSeries, Valuation, DEFAULT_PRECISION};
use crate::spanlab::{random_f_combination, run_witness_suite};

pub const SCHEMA_VERSION: u32 = 1;

/// Number of random trials per property family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialCounts {
    pub ring: usize,
    pub valuation: usize,
    pub inverse: usize,
    pub commutator: usize,
    pub product: usize,
    pub f_combination: usize,
    pub witness_budget: usize,
    pub probes: usize,
    pub differential: usize,
}

impl Default for TrialCounts {
    fn default() -> Self {
        TrialCounts {
            ring: 1000,
            valuation: 1000,
            inverse: 500,
            commutator: 200,
            product: 50,
            f_combination: 100,
            witness_budget: 200,
            probes: 200,
            differential: 500,
        }
    }
}

impl TrialCounts {
    pub fn all(n: usize) -> Self {
        TrialCounts {
            ring: n,
            valuation: n,
            inverse: n,
            commutator: n,
            product: n,
            f_combination: n,
            witness_budget: n,
            probes: n,
            differential: n,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub ctx: Arc<SkewContext>,
    pub seed: u64,
    pub precision: i64,
    pub trials: TrialCounts,
    pub k_max: i64,
    /// Longest commutator product drawn by the product-kernel check.
    pub max_product_len: usize,
}

impl VerifyConfig {
    pub fn new(ctx: Arc<SkewContext>) -> Self {
        VerifyConfig {
            ctx,
            seed: 42,
            precision: DEFAULT_PRECISION,
            trials: TrialCounts::default(),
            k_max: 3,
            max_product_len: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub status: PropertyStatus,
    pub first_counterexample: Option<Value>,
}

impl PropertyResult {
    fn status_of(trials: usize, failures: usize) -> PropertyStatus {
        if trials == 0 {
            PropertyStatus::Skipped
        } else if failures == 0 {
            PropertyStatus::Pass
        } else {
            PropertyStatus::Fail
        }
    }
}

struct Tally {
    name: String,
    trials: usize,
    failures: usize,
    first: Option<Value>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            trials: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }

    fn record_result(&mut self, trial: usize, r: Result<bool>, detail: impl FnOnce() -> Value) {
        match r {
            Ok(ok) => self.record(ok, detail),
            Err(e) => self.record(false, || json!({ "trial": trial, "error": e.to_string() })),
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            status: PropertyResult::status_of(self.trials, self.failures),
            name: self.name,
            trials: self.trials,
            failures: self.failures,
            first_counterexample: self.first,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanRecord {
    pub target: String,
    pub verdict: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentreRecord {
    pub candidate: String,
    pub expected_central: bool,
    pub verdict: String,
    pub probe_count: usize,
    pub precision: i64,
    pub witness_index: Option<usize>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub context: String,
    pub sigma_order: AutOrder,
    pub seed: u64,
    pub precision: i64,
    pub k_max: i64,
    pub trial_counts: TrialCounts,
    pub properties: Vec<PropertyResult>,
    pub span_verdicts: Vec<SpanRecord>,
    pub centre_reports: Vec<CentreRecord>,
    /// Wall-clock seconds per property group; the only nondeterministic field.
    pub timing: BTreeMap<String, f64>,
    pub overall: PropertyStatus,
}

impl VerificationReport {
    /// Overall status recomputed from the per-property counts.
    pub fn recompute_overall(&self) -> PropertyStatus {
        let statuses: Vec<PropertyStatus> = self
            .properties
            .iter()
            .map(|p| PropertyResult::status_of(p.trials, p.failures))
            .collect();
        if statuses.contains(&PropertyStatus::Fail) {
            PropertyStatus::Fail
        } else if statuses.contains(&PropertyStatus::Pass) {
            PropertyStatus::Pass
        } else {
            PropertyStatus::Skipped
        }
    }

    pub fn passed(&self) -> bool {
        self.overall != PropertyStatus::Fail
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "context: {}\nseed {}  precision {}\n",
            self.context, self.seed, self.precision
        );
        for p in &self.properties {
            let status = match p.status {
                PropertyStatus::Pass => "PASS",
                PropertyStatus::Fail => "FAIL",
                PropertyStatus::Skipped => "SKIP",
            };
            out.push_str(&format!(
                "  {status:<4} {:<34} {:>5} trials  {:>4} failures\n",
                p.name, p.trials, p.failures
            ));
        }
        for s in &self.span_verdicts {
            out.push_str(&format!("  span {}: {}\n", s.target, s.verdict["verdict"]));
        }
        let total: f64 = self.timing.values().sum();
        let overall = format!("{:?}", self.overall).to_uppercase();
        out.push_str(&format!("overall: {overall}  ({total:.1}s)\n"));
        out
    }
}

mod stream {
    pub const RING: u64 = 1;
    pub const VALUATION: u64 = 2;
    pub const INVERSE: u64 = 3;
    pub const COMMUTATOR: u64 = 4;
    pub const PRODUCT: u64 = 5;
    pub const F_COMBINATION: u64 = 6;
    pub const WITNESS: u64 = 7;
    pub const PROBES: u64 = 8;
    pub const CONSTANTS: u64 = 9;
    pub const DIFFERENTIAL: u64 = 10;
}

fn trial_rng(seed: u64, stream: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream, i as u64))
}

fn s(x: &SkewLaurentSeries) -> String {
    x.to_string()
}

struct Harness<'a> {
    cfg: &'a VerifyConfig,
    profile: SeriesProfile,
    properties: Vec<PropertyResult>,
    timing: BTreeMap<String, f64>,
}

impl Harness<'_> {
    fn ctx(&self) -> &Arc<SkewContext> {
        &self.cfg.ctx
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> SkewLaurentSeries {
        random_series_with(self.ctx(), rng, &self.profile)
    }

    fn timed<T>(&mut self, label: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timing.insert(label.to_string(), start.elapsed().as_secs_f64());
        out
    }

    fn ring_laws(&mut self) {
        let mut assoc = Tally::new("ring_associativity");
        let mut left = Tally::new("ring_left_distributivity");
        let mut right = Tally::new("ring_right_distributivity");
        for i in 0..self.cfg.trials.ring {
            let mut rng = trial_rng(self.cfg.seed, stream::RING, i);
            let (x, y, z) = (self.draw(&mut rng), self.draw(&mut rng), self.draw(&mut rng));
            let detail = || json!({ "trial": i, "x": s(&x), "y": s(&y), "z": s(&z) });
            let r = (|| Ok(x.mul(&y)?.mul(&z)?.equals_to_precision(&x.mul(&y.mul(&z)?)?)))();
            assoc.record_result(i, r, detail);
            let r = (|| Ok(x.mul(&y.add(&z)?)?.equals_to_precision(&x.mul(&y)?.add(&x.mul(&z)?)?)))();
            left.record_result(i, r, detail);
            let r = (|| Ok(x.add(&y)?.mul(&z)?.equals_to_precision(&x.mul(&z)?.add(&y.mul(&z)?)?)))();
            right.record_result(i, r, detail);
        }
        self.properties.extend([assoc.finish(), left.finish(), right.finish()]);
    }

    fn valuation_laws(&mut self) {
        let mut hom = Tally::new("valuation_homomorphism");
        let mut ultra = Tally::new("valuation_ultrametric");
        for i in 0..self.cfg.trials.valuation {
            let mut rng = trial_rng(self.cfg.seed, stream::VALUATION, i);
            let x = self.draw(&mut rng);
            // every third pair shares the lead term up to sign, to exercise cancellation
            let y = if i % 3 == 2 {
                let tail = self.draw(&mut rng);
                let lead = x.valuation().finite().unwrap();
                let head = SkewLaurentSeries::monomial(
                    self.ctx(),
                    x.leading_coeff().unwrap().neg(),
                    lead,
                    self.profile.precision,
                );
                match head.add(&tail) {
                    Ok(y) if !y.is_zero() => y,
                    _ => tail,
                }
            } else {
                self.draw(&mut rng)
            };
            let detail = || json!({ "trial": i, "x": s(&x), "y": s(&y) });
            let (vx, vy) = (x.valuation().finite().unwrap(), y.valuation().finite().unwrap());
            let r = x.mul(&y).map(|p| p.valuation() == Valuation::Finite(vx + vy));
            hom.record_result(i, r, detail);
            let r = x.add(&y).map(|sum| match sum.valuation() {
                Valuation::Zero => true,
                Valuation::Finite(v) => v >= vx.min(vy),
            });
            ultra.record_result(i, r, detail);
        }
        self.properties.extend([hom.finish(), ultra.finish()]);
    }

    fn inverses(&mut self) {
        let mut tally = Tally::new("inverse_two_sided");
        let p = self.profile.precision;
        for i in 0..self.cfg.trials.inverse {
            let mut rng = trial_rng(self.cfg.seed, stream::INVERSE, i);
            let x = self.draw(&mut rng);
            let r = (|| {
                let n = x.valuation().finite().unwrap();
                let guaranteed = p - 2 * n.abs();
                let inv = x.inverse()?;
                let one = SkewLaurentSeries::one(self.ctx(), guaranteed);
                let right = x.mul(&inv)?;
                let left = inv.mul(&x)?;
                Ok(right.precision() >= guaranteed
                    && left.precision() >= guaranteed
                    && right.equals_to_precision(&one)
                    && left.equals_to_precision(&one))
            })();
            tally.record_result(i, r, || json!({ "trial": i, "x": s(&x) }));
        }
        self.properties.push(tally.finish());
    }

    fn fresh_commutator(&self, stream: u64, i: usize) -> Result<CommutatorRecord> {
        let mut rng = trial_rng(self.cfg.seed, stream, i);
        let x = self.draw(&mut rng);
        let y = self.draw(&mut rng);
        commutator(&x, &y)
    }

    fn commutators(&mut self) -> Vec<CommutatorRecord> {
        let mut tally = Tally::new("commutator_kernel");
        let mut pool = Vec::new();
        for i in 0..self.cfg.trials.commutator {
            match self.fresh_commutator(stream::COMMUTATOR, i) {
                Ok(rec) => {
                    let ok = rec.valuation_of_value == Valuation::Finite(0);
                    tally.record(ok, || {
                        json!({
                            "trial": i,
                            "x": s(&rec.x),
                            "y": s(&rec.y),
                            "value": s(&rec.value),
                            "valuation": rec.valuation_of_value.to_string(),
                        })
                    });
                    pool.push(rec);
                }
                Err(e) => tally.record(false, || json!({ "trial": i, "error": e.to_string() })),
            }
        }
        self.properties.push(tally.finish());
        pool
    }

    /// Products are drawn from the commutator pool; with an empty pool a
    /// few commutators are generated on a separate stream.
    fn ensure_pool(&self, pool: &mut Vec<CommutatorRecord>, wanted: usize) -> Result<()> {
        let mut i = 0;
        while pool.len() < wanted {
            pool.push(self.fresh_commutator(stream::PRODUCT + 100, i)?);
            i += 1;
        }
        Ok(())
    }

    fn products(&mut self, pool: &mut Vec<CommutatorRecord>) {
        let mut tally = Tally::new("commutator_product_kernel");
        let n = self.cfg.trials.product;
        if n > 0 {
            if let Err(e) = self.ensure_pool(pool, 8) {
                tally.record(false, || json!({ "error": e.to_string() }));
            }
        }
        for i in 0..n {
            if pool.is_empty() {
                break;
            }
            let mut rng = trial_rng(self.cfg.seed, stream::PRODUCT, i);
            let len = rng.gen_range(1..=self.cfg.max_product_len.max(1));
            let picked: Vec<usize> = (0..len).map(|_| rng.gen_range(0..pool.len())).collect();
            let recs: Vec<CommutatorRecord> = picked.iter().map(|&k| pool[k].clone()).collect();
            let r = commutator_product(&recs).map(|p| p.valuation() == Valuation::Finite(0));
            tally.record_result(i, r, || json!({ "trial": i, "factors": picked }));
        }
        self.properties.push(tally.finish());
    }

    fn f_combinations(&mut self, pool: &mut Vec<CommutatorRecord>) {
        let mut tally = Tally::new("f_combination_nonnegative");
        let n = self.cfg.trials.f_combination;
        if n > 0 {
            if let Err(e) = self.ensure_pool(pool, 8) {
                tally.record(false, || json!({ "error": e.to_string() }));
            }
        }
        for i in 0..n {
            if pool.is_empty() {
                break;
            }
            let mut rng = trial_rng(self.cfg.seed, stream::F_COMBINATION, i);
            let len = rng.gen_range(1..=pool.len().min(8));
            let picked: Vec<usize> = (0..len).map(|_| rng.gen_range(0..pool.len())).collect();
            let gens: Vec<SkewLaurentSeries> = picked.iter().map(|&k| pool[k].value.clone()).collect();
            let r = random_f_combination(&gens, &mut rng).map(|c| match c.valuation() {
                Valuation::Zero => true,
                Valuation::Finite(v) => v >= 0,
            });
            tally.record_result(i, r, || json!({ "trial": i, "generators": picked }));
        }
        self.properties.push(tally.finish());
    }

    fn witness(&mut self) -> Vec<SpanRecord> {
        let mut tally = Tally::new("codimension_witness");
        let mut records = Vec::new();
        if self.cfg.trials.witness_budget > 0 && self.cfg.k_max >= 1 {
            let seed = derive_seed(self.cfg.seed, stream::WITNESS, 0);
            match run_witness_suite(
                self.ctx(),
                self.cfg.k_max,
                self.cfg.trials.witness_budget,
                seed,
                &self.profile,
            ) {
                Ok(suite) => {
                    for (target, verdict) in suite.targets.iter().zip(&suite.verdicts) {
                        let mut v = verdict.to_json();
                        v["generator_count"] = json!(suite.generators.len());
                        tally.record(verdict.is_obstruction(), || {
                            json!({ "target": s(target), "verdict": verdict.to_json() })
                        });
                        records.push(SpanRecord {
                            target: s(target),
                            verdict: v,
                        });
                    }
                }
                Err(e) => tally.record(false, || json!({ "error": e.to_string() })),
            }
        }
        self.properties.push(tally.finish());
        records
    }

    /// `t^k` is central iff `sigma^k = id`; when it is not, the field
    /// generator is the first probe that fails to commute. Fixed-field
    /// constants are central.
    fn centre(&mut self) -> Vec<CentreRecord> {
        let mut tally = Tally::new("centre_facts");
        let mut records = Vec::new();
        if self.cfg.trials.probes == 0 {
            self.properties.push(tally.finish());
            return records;
        }
        let ctx = self.ctx().clone();
        let p = self.profile.precision;
        let seed = derive_seed(self.cfg.seed, stream::PROBES, 0);
        let probes = standard_probes(&ctx, p, self.cfg.trials.probes, seed);
        let order = ctx.sigma_order();
        let mut ks: Vec<i64> = (1..=4).collect();
        if let AutOrder::Finite(n) = order {
            let n = n as i64;
            if !ks.contains(&n) {
                ks.push(n);
            }
        }
        let mut candidates: Vec<(String, SkewLaurentSeries, bool)> = ks
            .iter()
            .map(|&k| {
                let central = matches!(order, AutOrder::Finite(n) if k % n as i64 == 0);
                let c = SkewLaurentSeries::monomial(&ctx, ctx.one(), k, p);
                (format!("t^{k}"), c, central)
            })
            .collect();
        let mut rng = trial_rng(self.cfg.seed, stream::CONSTANTS, 0);
        for _ in 0..3 {
            let mut c = random_fixed_scalar(&ctx, &mut rng);
            if c.is_zero() {
                c = ctx.one();
            }
            candidates.push((c.to_string(), SkewLaurentSeries::constant(&ctx, c, p), true));
        }
        let generator_index = ctx.generator().map(|_| 1usize);
        for (label, cand, expected) in candidates {
            match centre_check(&cand, &probes) {
                Ok(rep) => {
                    let witness_index = rep.witness.as_ref().map(|(i, _)| *i);
                    let ok = rep.is_central() == expected
                        && (expected || generator_index.is_none() || witness_index == generator_index);
                    tally.record(ok, || {
                        json!({ "candidate": label, "expected_central": expected, "witness_index": witness_index })
                    });
                    records.push(CentreRecord {
                        candidate: label,
                        expected_central: expected,
                        verdict: if rep.is_central() {
                            "CENTRAL_TO_PRECISION".into()
                        } else {
                            "NON_CENTRAL".into()
                        },
                        probe_count: rep.probe_count,
                        precision: rep.precision,
                        witness_index,
                        witness: rep.witness.as_ref().map(|(_, g)| s(g)),
                    });
                }
                Err(e) => tally.record(false, || json!({ "candidate": label, "error": e.to_string() })),
            }
        }
        self.properties.push(tally.finish());
        records
    }

    fn differential(&mut self, precision: i64) {
        let mut tally = Tally::new(format!("mul_vs_mul_incremental_p{precision}"));
        let profile = SeriesProfile::with_precision(precision);
        for i in 0..self.cfg.trials.differential {
            let mut rng = trial_rng(self.cfg.seed, stream::DIFFERENTIAL + (precision as u64) * 16, i);
            let x = random_series_with(self.ctx(), &mut rng, &profile);
            let y = random_series_with(self.ctx(), &mut rng, &profile);
            let r = (|| Ok(x.mul(&y)? == x.mul_incremental(&y)?))();
            tally.record_result(i, r, || json!({ "trial": i, "x": s(&x), "y": s(&y) }));
        }
        self.properties.push(tally.finish());
    }
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerificationReport> {
    if cfg.precision < 8 {
        return Err(Error::usage("verify needs precision at least 8"));
    }
    if cfg.k_max < 0 {
        return Err(Error::usage("k_max must be nonnegative"));
    }
    let mut h = Harness {
        cfg,
        profile: SeriesProfile::with_precision(cfg.precision),
        properties: Vec::new(),
        timing: BTreeMap::new(),
    };
    h.timed("ring", |h| h.ring_laws());
    h.timed("valuation", |h| h.valuation_laws());
    h.timed("inverse", |h| h.inverses());
    let mut pool = h.timed("commutator", |h| h.commutators());
    h.timed("product", |h| h.products(&mut pool));
    h.timed("f_combination", |h| h.f_combinations(&mut pool));
    let span_verdicts = h.timed("witness", |h| h.witness());
    let centre_reports = h.timed("centre", |h| h.centre());
    h.timed("differential", |h| {
        h.differential(cfg.precision);
        h.differential(2 * cfg.precision);
    });
    let mut report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        context: cfg.ctx.describe(),
        sigma_order: cfg.ctx.sigma_order(),
        seed: cfg.seed,
        precision: cfg.precision,
        k_max: cfg.k_max,
        trial_counts: cfg.trials.clone(),
        properties: h.properties,
        span_verdicts,
        centre_reports,
        timing: h.timing,
        overall: PropertyStatus::Skipped,
    };
    report.overall = report.recompute_overall();
    Ok(report)
}
