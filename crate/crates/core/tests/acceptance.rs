//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs at the full stated trial counts.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use common::span_family::{grid_oracle, problems};
use common::{exprs, f4, fv, shift};
use skewlab::cli::bench::{run_bench, BenchConfig};
use skewlab::cli::parse_expr;
use skewlab::cli::verify::{run_verify, PropertyStatus, TrialCounts, VerificationReport, VerifyConfig};
use skewlab::exactfield::SkewContext;
use skewlab::grouplab::{centre_check, standard_probes, CentreReport};
use skewlab::skewseries::SkewLaurentSeries;
use skewlab::spanlab::{codimension_witness_suite, coefficient_matching_solve, residual, SpanVerdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn verify_with(ctx: Arc<SkewContext>, trials: TrialCounts) -> VerificationReport {
    let mut cfg = VerifyConfig::new(ctx);
    cfg.seed = 42;
    cfg.precision = 32;
    cfg.trials = trials;
    run_verify(&cfg).expect("valid configuration")
}

fn require(report: &VerificationReport, names: &[&str], trials: usize) -> Result<(), String> {
    for name in names {
        let p = report.property(name).ok_or_else(|| format!("{name} missing"))?;
        if p.status != PropertyStatus::Pass || p.trials != trials || p.failures != 0 {
            return Err(format!(
                "{name} in {}: {} trials, {} failures, first {:?}",
                report.context, p.trials, p.failures, p.first_counterexample
            ));
        }
    }
    Ok(())
}

fn none() -> TrialCounts {
    TrialCounts::all(0)
}

fn ring_laws() -> Outcome {
    let names = ["ring_associativity", "ring_left_distributivity", "ring_right_distributivity"];
    for ctx in [shift(), f4()] {
        let r = verify_with(ctx, TrialCounts { ring: 1000, ..none() });
        require(&r, &names, 1000)?;
    }
    Ok("1000 triples x 2 contexts, 0 failures".into())
}

fn valuation_laws() -> Outcome {
    for ctx in [shift(), f4()] {
        let r = verify_with(ctx, TrialCounts { valuation: 1000, ..none() });
        require(&r, &["valuation_homomorphism", "valuation_ultrametric"], 1000)?;
    }
    Ok("1000 pairs x 2 contexts, 0 failures".into())
}

fn inversion() -> Outcome {
    for ctx in [shift(), f4()] {
        let r = verify_with(ctx, TrialCounts { inverse: 500, ..none() });
        require(&r, &["inverse_two_sided"], 500)?;
    }
    Ok("500 inverses x 2 contexts, 0 failures".into())
}

fn counterexample_core() -> Outcome {
    let ctx = shift();
    let trials = TrialCounts {
        commutator: 200,
        product: 50,
        f_combination: 100,
        ..none()
    };
    let r = verify_with(ctx.clone(), trials);
    require(&r, &["commutator_kernel"], 200)?;
    require(&r, &["commutator_product_kernel"], 50)?;
    require(&r, &["f_combination_nonnegative"], 100)?;
    let verdicts = codimension_witness_suite(&ctx, 3, 200).map_err(|e| e.to_string())?;
    for (k, v) in verdicts.iter().enumerate() {
        let expected = SpanVerdict::NotInSpanObstruction {
            min_generator_valuation: 0,
            target_valuation: -(k as i64) - 1,
        };
        if *v != expected {
            return Err(format!("t^-{}: {v:?}", k + 1));
        }
    }
    Ok("200 commutators, 50 products, 100 F-combinations; t^-1, t^-2, t^-3 obstructed".into())
}

fn witness_is(rep: &CentreReport, probe: &SkewLaurentSeries) -> bool {
    matches!(&rep.witness, Some((_, g)) if g == probe)
}

fn centre_facts() -> Outcome {
    let g = f4();
    let probes = standard_probes(&g, 32, 200, 42);
    let t = SkewLaurentSeries::t(&g, 32);
    let w = SkewLaurentSeries::constant(&g, g.generator().unwrap(), 32);
    let t2 = t.power(2).map_err(|e| e.to_string())?;
    let rep = centre_check(&t2, &probes).map_err(|e| e.to_string())?;
    if !rep.is_central() || rep.probe_count != 202 {
        return Err(format!("t^2 in F_4 context: {:?}", rep.verdict));
    }
    let rep = centre_check(&t, &probes).map_err(|e| e.to_string())?;
    if rep.is_central() || !witness_is(&rep, &w) {
        return Err("t in F_4 context not refuted by w".into());
    }
    let c = SkewLaurentSeries::constant(&g, g.one(), 32);
    if !centre_check(&c, &probes).map_err(|e| e.to_string())?.is_central() {
        return Err("constant 1 in F_4 context".into());
    }

    let s = shift();
    let probes = standard_probes(&s, 32, 200, 42);
    let u = SkewLaurentSeries::constant(&s, s.generator().unwrap(), 32);
    for k in 1..=4 {
        let tk = SkewLaurentSeries::t(&s, 32).power(k).map_err(|e| e.to_string())?;
        let rep = centre_check(&tk, &probes).map_err(|e| e.to_string())?;
        if rep.is_central() || !witness_is(&rep, &u) {
            return Err(format!("t^{k} in shift context not refuted by u"));
        }
    }
    for text in ["1", "5/7", "-3"] {
        let c = SkewLaurentSeries::constant(&s, fv(&s, text), 32);
        if !centre_check(&c, &probes).map_err(|e| e.to_string())?.is_central() {
            return Err(format!("constant {text} in shift context"));
        }
    }
    Ok("F_4: t^2 central over 202 probes, t refuted by w; shift: t^1..t^4 refuted by u; constants central".into())
}

fn differential() -> Outcome {
    for ctx in [shift(), f4()] {
        let r = verify_with(ctx.clone(), TrialCounts { differential: 500, ..none() });
        require(&r, &["mul_vs_mul_incremental_p32", "mul_vs_mul_incremental_p64"], 500)?;
        let bench = run_bench(&BenchConfig::new(ctx)).map_err(|e| e.to_string())?;
        for line in bench.table().lines() {
            println!("    {line}");
        }
        if bench.rows.iter().any(|r| !r.outputs_equal) {
            return Err("bench cross-check found unequal products".into());
        }
    }
    Ok("500 pairs at P = 32 and 64 x 2 contexts structurally equal; bench table emitted".into())
}

fn span_oracle() -> Outcome {
    let ctx = shift();
    let family = problems(&ctx, 200);
    let (mut hits, mut in_span) = (0, 0);
    for (i, p) in family.iter().enumerate() {
        let verdict = coefficient_matching_solve(p).map_err(|e| e.to_string())?;
        if let SpanVerdict::InSpan { coefficients } = &verdict {
            in_span += 1;
            if !residual(p, coefficients).map_err(|e| e.to_string())?.is_zero() {
                return Err(format!("problem {i}: IN_SPAN residual is nonzero"));
            }
        }
        if grid_oracle(p).is_some() {
            hits += 1;
            if !matches!(verdict, SpanVerdict::InSpan { .. }) {
                return Err(format!("problem {i}: oracle found a solution, solver said {verdict:?}"));
            }
        }
    }
    Ok(format!("{} problems, {hits} grid solutions all matched, {in_span} IN_SPAN residuals ZERO", family.len()))
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {:?}", out.status.code()));
    }
    Ok(String::from_utf8_lossy(&out.stdout).trim_end().to_string())
}

fn cli_golden() -> Outcome {
    let a = run_cli(&["--field", "q-u", "--sigma", "shift:1", "eval", "t*u"])?;
    if a != "(u+1)*t + O(t^32)" {
        return Err(format!("eval t*u printed {a:?}"));
    }
    let b = run_cli(&["--field", "q-u", "--sigma", "shift:1", "comm", "t", "u"])?;
    if b != "(u+1)/u*t^0 + O(t^31)" {
        return Err(format!("comm t u printed {b:?}"));
    }
    for (i, e) in exprs::generate(42, 100).into_iter().enumerate() {
        let text = e.to_string();
        match parse_expr(&text) {
            Ok(back) if back == e => {}
            other => return Err(format!("expression {i} {text:?}: {other:?}")),
        }
    }
    Ok("eval and comm goldens match; 100 generated expressions round-trip".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 ring laws", ring_laws),
        ("2 valuation homomorphism", valuation_laws),
        ("3 inversion", inversion),
        ("4 commutators in ker(v), codimension witnesses", counterexample_core),
        ("5 centre facts", centre_facts),
        ("6 differential multiplication", differential),
        ("7 span solver vs grid oracle", span_oracle),
        ("8 CLI goldens and parse round trip", cli_golden),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
