//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::io::BufReader;
use std::time::{Duration, Instant};

use bellnoise::*;
use minilp::{MpsFile, OptimizationDirection};

type Outcome = Result<String, String>;

fn standard(n: usize) -> PhaseSettings<f64> {
    standard_settings(Dimension::new(n).unwrap())
}

fn fail_unless(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed(budget: Duration, detail: String, ok: bool, started: Instant) -> Outcome {
    let elapsed = started.elapsed();
    let detail = format!(
        "{detail}; {:.2} s (budget {} s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    fail_unless(ok && elapsed < budget, detail)
}

fn qubit_threshold() -> Outcome {
    let started = Instant::now();
    let expected = 1.0 - 1.0 / 2f64.sqrt();
    let s = standard(2);
    let lp = solve_threshold(&s).map_err(|e| e.to_string())?.f_threshold;
    let vertex = oracle_threshold(&s).map_err(|e| e.to_string())?.f_threshold;
    let chsh = 1.0 - chsh_analytic(&s).map_err(|e| e.to_string())?.v_crit;
    let worst = [lp, vertex, chsh]
        .iter()
        .map(|f| (f - expected).abs())
        .fold(0.0, f64::max);
    timed(
        Duration::from_secs(1),
        format!("simplex {lp:.9}, vertex {vertex:.9}, CHSH {chsh:.9}; worst |f − (1 − 1/√2)| = {worst:.1e}"),
        worst <= 1e-6,
        started,
    )
}

fn qutrit_threshold() -> Outcome {
    let started = Instant::now();
    let s = standard(3);
    let lp = solve_threshold(&s).map_err(|e| e.to_string())?.f_threshold;
    let vertex = oracle_threshold(&s).map_err(|e| e.to_string())?.f_threshold;
    let exact =
        exact_vertex_threshold::<Sqrt3Field>(&standard_settings_exact(Dimension::new(3).unwrap()))
            .map_err(|e| e.to_string())?
            .f_threshold;
    let exact_f = exact.to_f64();
    let ok = (lp - vertex).abs() <= 1e-7
        && (lp - exact_f).abs() <= 1e-3
        && (exact_f - 0.304).abs() <= 1e-3;
    timed(
        Duration::from_secs(5),
        format!(
            "simplex {lp:.9}, vertex {vertex:.9} (gap {:.1e}), exact {exact} = {exact_f:.9}",
            (lp - vertex).abs()
        ),
        ok,
        started,
    )
}

fn threshold_growth() -> Outcome {
    let started = Instant::now();
    let big = build_threshold_lp(&prediction_tables(&standard(16)).map_err(|e| e.to_string())?);
    let sized = big.num_vars() == 65_537 && big.num_constraints() == 1_025;
    drop(big);
    let mut values = Vec::new();
    for n in 2..=16 {
        let t = Instant::now();
        let f = solve_threshold(&standard(n))
            .map_err(|e| format!("n={n}: {e}"))?
            .f_threshold;
        println!(
            "    n={n:>2}  f_threshold={f:.9}  ({:.1} s)",
            t.elapsed().as_secs_f64()
        );
        values.push(f);
    }
    let worst_step = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    timed(
        Duration::from_secs(30 * 60),
        format!(
            "f(2)={:.7} … f(16)={:.7}; smallest step {worst_step:.2e}; n=16 program {}",
            values[0],
            values[14],
            if sized { "65,537 × 1,025" } else { "MISSIZED" }
        ),
        sized && worst_step >= -1e-7,
        started,
    )
}

fn qubit_efficiency() -> Outcome {
    let started = Instant::now();
    let s = standard(2);
    let exact = 2.0 * 2f64.sqrt() - 2.0;
    let bisect = bisect_critical_efficiency(&s, 1e-4)
        .map_err(|e| e.to_string())?
        .eta_critical;
    let scan = scan_critical_efficiency(&s, 0.01)
        .map_err(|e| e.to_string())?
        .eta_critical;
    timed(
        Duration::from_secs(30),
        format!("bisection {bisect:.6} vs 2√2 − 2 = {exact:.6}; 1% scan {scan}"),
        (bisect - exact).abs() <= 1e-3 && (scan - 0.82).abs() < 1e-12,
        started,
    )
}

fn efficiency_trend() -> Outcome {
    const TOL: f64 = 1e-5;
    let started = Instant::now();
    let mut values = Vec::new();
    for n in 2..=8 {
        let eta = bisect_critical_efficiency(&standard(n), TOL)
            .map_err(|e| format!("n={n}: {e}"))?
            .eta_critical;
        println!("    n={n}  eta_critical={eta:.5}");
        values.push(eta);
    }
    // consecutive estimates may differ by twice the bisection resolution without a real rise
    let worst_rise = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let drop = values[0] - values[6];
    fail_unless(
        worst_rise <= 2.0 * TOL && drop >= 0.005,
        format!(
            "eta(2)={:.5} … eta(8)={:.5}; largest rise {worst_rise:.1e}; total drop {drop:.4}; {:.1} s",
            values[0],
            values[6],
            started.elapsed().as_secs_f64()
        ),
    )
}

fn property_suites() -> Outcome {
    let mut rng = common::rng(0x5EED);
    let mut runs = 0usize;
    let mut run = |check: common::Check| -> Result<(), String> {
        runs += 1;
        check
    };
    for n in 2..=16 {
        run(common::unitarity(n))?;
        for _ in 0..8 {
            run(common::dual_forms(&mut rng, n))?;
        }
        for _ in 0..4 {
            run(common::uniform_marginals(&mut rng, n))?;
        }
    }
    for _ in 0..100 {
        run(common::efficiency_mass(&mut rng))?;
    }
    for n in 2..=3 {
        for _ in 0..5 {
            run(common::certificate_reconstruction(&mut rng, n))?;
            run(common::eta_one_limit(&mut rng, n))?;
        }
    }
    for n in 2..=4 {
        for _ in 0..3 {
            run(common::gauge_invariance(&mut rng, n))?;
            run(common::relabel_invariance(&mut rng, n))?;
        }
    }
    Ok(format!(
        "{runs} seeded checks: dual forms, unitarity, uniform marginals, efficiency mass, \
         certificate marginals, eta=1 limit, gauge, relabeling"
    ))
}

fn mps_round_trip() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for n in 2..=3 {
        let lp = build_threshold_lp(&prediction_tables(&standard(n)).map_err(|e| e.to_string())?);
        let internal = simplex_solve(&lp)
            .map_err(|e| e.to_string())?
            .objective_value;
        let text = export_mps(&lp, &format!("bell_n{n}"));
        let parsed = MpsFile::parse(
            BufReader::new(text.as_bytes()),
            OptimizationDirection::Maximize,
        )
        .map_err(|e| format!("n={n}: external reader rejected the file: {e}"))?;
        let external = parsed
            .problem
            .solve()
            .map_err(|e| format!("n={n}: external solve failed: {e}"))?
            .objective();
        ok &= (internal - external).abs() <= 1e-6;
        details.push(format!(
            "n={n} internal {internal:.9} external {external:.9}"
        ));
    }
    fail_unless(ok, details.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("n=2 threshold, triple-checked", qubit_threshold),
        (
            "n=3 threshold vs vertex and exact programs",
            qutrit_threshold,
        ),
        ("threshold nondecreasing for n=2..16", threshold_growth),
        ("n=2 critical efficiency", qubit_efficiency),
        (
            "critical efficiency nonincreasing for n=2..8",
            efficiency_trend,
        ),
        ("property suites", property_suites),
        ("MPS round trip through an external solver", mps_round_trip),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let (verdict, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {verdict}: {title} | {detail}", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
