//! Seeded property checks shared by the property suite and the acceptance gate.
#![allow(dead_code)]

use std::f64::consts::PI;

use bellnoise::bell_model::{certificate_marginals, marginal_row};
use bellnoise::multiport::Setting;
use bellnoise::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_phases(rng: &mut ChaCha8Rng, n: usize) -> PhaseVector<f64> {
    PhaseVector::new((0..n).map(|_| rng.gen_range(-PI..PI)).collect()).unwrap()
}

pub fn random_settings(rng: &mut ChaCha8Rng, n: usize) -> PhaseSettings<f64> {
    PhaseSettings::new(
        random_phases(rng, n),
        random_phases(rng, n),
        random_phases(rng, n),
        random_phases(rng, n),
    )
    .unwrap()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Amplitude and cosine forms agree on every cell.
pub fn dual_forms(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let u = bell_multiport::<f64>(Dimension::new(n).unwrap());
    let a = random_phases(rng, n);
    let b = random_phases(rng, n);
    for k in 0..n {
        for l in 0..n {
            let amp = joint_probability(&u, &a, &b, k, l).unwrap();
            let cos = joint_probability_cosine(&a, &b, k, l).unwrap();
            ensure((amp - cos).abs() <= 1e-12, || {
                format!("n={n} ({k},{l}): amplitude {amp:e} vs cosine {cos:e}")
            })?;
        }
    }
    Ok(())
}

pub fn unitarity(n: usize) -> Check {
    let u = bell_multiport::<f64>(Dimension::new(n).unwrap());
    let defect = u.unitarity_defect();
    ensure(defect <= 1e-12, || format!("n={n}: U†U − I = {defect:e}"))?;
    let modulus = 1.0 / (n as f64).sqrt();
    for j in 0..n {
        for i in 0..n {
            let e = (u.entry(j, i).norm() - modulus).abs();
            ensure(e <= 1e-12, || format!("n={n} entry ({j},{i}) off by {e:e}"))?;
        }
    }
    Ok(())
}

/// Rows and columns of every base table sum to `1/n`, whatever the phases.
pub fn uniform_marginals(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let tables = prediction_tables(&random_settings(rng, n)).unwrap();
    let target = 1.0 / n as f64;
    for t in &tables {
        for s in t.row_sums().iter().chain(&t.col_sums()) {
            ensure((s - target).abs() <= 1e-10, || {
                format!("n={n}: marginal {s} vs {target}")
            })?;
        }
        for q in t.base_cells() {
            ensure((0.0..=1.0 + 1e-12).contains(q), || {
                format!("cell {q} outside [0,1]")
            })?;
        }
    }
    Ok(())
}

/// Extended table with misses sums to one and stays nonnegative.
pub fn efficiency_mass(rng: &mut ChaCha8Rng) -> Check {
    let n = rng.gen_range(2..=6);
    let tables = prediction_tables(&random_settings(rng, n)).unwrap();
    let eta: f64 = rng.gen_range(0.0..=1.0);
    let v: f64 = rng.gen_range(0.0..=1.0);
    let table = efficiency_table(&tables[rng.gen_range(0..4)], eta).unwrap();
    let mut total = 0.0;
    for k in 0..=n {
        for l in 0..=n {
            let c = table.cell(k, l, &v);
            ensure(c >= 0.0, || {
                format!("negative cell {c} at eta={eta}, v={v}")
            })?;
            total += c;
        }
    }
    ensure((total - 1.0).abs() <= 1e-10, || {
        format!("n={n} eta={eta} v={v}: mass {total}")
    })
}

/// The certificate's pair marginals reproduce the tables at the optimal visibility.
pub fn certificate_reconstruction(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let tables = prediction_tables(&random_settings(rng, n)).unwrap();
    let r = solve_threshold_tables(&tables).map_err(|e| e.to_string())?;
    let marginals = certificate_marginals(&r.certificate, n);
    let mut worst = 0.0f64;
    for (pair, t) in tables.iter().enumerate() {
        for k in 0..n {
            for l in 0..n {
                let got = marginals[marginal_row(pair, k, l, n)];
                worst = worst.max((got - t.at_visibility(k, l, &r.v_crit)).abs());
            }
        }
    }
    ensure(worst <= 1e-7, || {
        format!("n={n}: worst marginal error {worst:e}")
    })
}

/// Perfect detectors reproduce the ideal threshold.
pub fn eta_one_limit(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let tables = prediction_tables(&random_settings(rng, n)).unwrap();
    let ideal = solve_threshold_tables(&tables).map_err(|e| e.to_string())?;
    let eff = solve_efficiency(&tables, 1.0).map_err(|e| e.to_string())?;
    let gap = (ideal.v_crit - eff.v_crit).abs();
    ensure(gap <= 1e-8, || {
        format!("n={n}: ideal {} vs eta=1 {}", ideal.v_crit, eff.v_crit)
    })
}

/// A common offset on one phase vector changes nothing observable.
pub fn gauge_invariance(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let s = random_settings(rng, n);
    let shift = |rng: &mut ChaCha8Rng, v: &PhaseVector<f64>| v.shifted(rng.gen_range(-PI..PI));
    let moved = PhaseSettings::new(
        shift(rng, &s.a1),
        shift(rng, &s.a2),
        shift(rng, &s.b1),
        shift(rng, &s.b2),
    )
    .unwrap();
    let t0 = prediction_tables(&s).unwrap();
    let t1 = prediction_tables(&moved).unwrap();
    for (a, b) in t0.iter().zip(&t1) {
        for (x, y) in a.base_cells().iter().zip(b.base_cells()) {
            ensure((x - y).abs() <= 1e-10, || {
                format!("n={n}: cell moved by {:e}", (x - y).abs())
            })?;
        }
    }
    let v0 = solve_threshold(&s).map_err(|e| e.to_string())?.v_crit;
    let v1 = solve_threshold(&moved).map_err(|e| e.to_string())?.v_crit;
    ensure((v0 - v1).abs() <= 1e-6, || {
        format!("n={n}: v_crit {v0} vs {v1}")
    })
}

/// Renaming Alice's outcomes leaves the threshold alone.
pub fn relabel_invariance(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let tables = prediction_tables(&random_settings(rng, n)).unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let relabeled = tables.clone().map(|t| t.relabel_alice(&perm));
    let v0 = solve_threshold_tables(&tables)
        .map_err(|e| e.to_string())?
        .v_crit;
    let v1 = solve_threshold_tables(&relabeled)
        .map_err(|e| e.to_string())?
        .v_crit;
    ensure((v0 - v1).abs() <= 1e-8, || {
        format!("n={n} perm {perm:?}: {v0} vs {v1}")
    })
}

/// Alice's first observable with every phase zero, as a quick sanity anchor.
pub fn zero_phase_table(n: usize) -> Vec<f64> {
    let zero = PhaseVector::new(vec![0.0; n]).unwrap();
    let s = PhaseSettings::new(zero.clone(), zero.clone(), zero.clone(), zero).unwrap();
    prediction_table(&s, Setting::First, Setting::First)
        .unwrap()
        .base_cells()
        .to_vec()
}
