//! Acceptance suite: one test per release criterion, each printing a
//! `criterion NN: ...` line (visible under `--nocapture`). The criteria pin
//! the library against published reference values, exhaustive enumeration,
//! closed forms, and its own Monte Carlo harness.

use std::time::Instant;

use kdominant::mc::{cumulative_cloud_curve, estimate_with, EstimateOptions};
use kdominant::{asym, estimate, exact, Dataset, Model, SamplerConfig, Statistic};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

fn config(model: Model, n: usize, seed: u64) -> SamplerConfig {
    SamplerConfig::new(model, n, seed).expect("valid sampler configuration")
}

#[test]
fn criterion_01_skyline_mean_reproduces_published_rows() {
    let started = Instant::now();
    let rows = [
        (10_000u64, [164.7f64, 426.3, 902.7, 1633.1, 2603.0]),
        (100_000, [304.9, 955.8, 2432.1, 5239.4, 9845.0]),
    ];
    for (n, reference) in rows {
        for (i, d) in (4..=8).enumerate() {
            let tol = if d == 8 { 1.0 } else { 0.1 };
            let got = exact::skyline_mean(n, d).unwrap();
            assert!(
                (got - reference[i]).abs() <= tol,
                "skyline mean at n = {n}, d = {d}: {got} vs reference {}",
                reference[i]
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "recurrence too slow: {elapsed:?}");
    println!(
        "criterion 01: pass - skyline means match both published rows \
         within 0.1 (1.0 at d = 8) in {elapsed:?}"
    );
}

/// The published predictor table prints two rows, one labeled as the
/// formula and one as simulation, and the labels are interchanged at the
/// source: exact evaluation of the formula truncates digit for digit onto
/// the simulation-labeled row in all ten entries, while no evaluation of it
/// comes near the formula-labeled row. The predictor is therefore pinned to
/// the row the formula provably produced, at the table's two-decimal
/// printing precision, and the interchange itself is asserted so that a
/// regression toward the mislabeled row also fails.
#[test]
fn criterion_02_predictor_rows_match_the_published_table() {
    let started = Instant::now();
    // (n, formula output as printed under the simulation label, simulation
    // data as printed under the formula label)
    let cases = [
        (1.0e4, [0.57, 4.82, 23.98, 83.89, 226.65], [0.61, 5.06, 24.85, 88.90, 243.96]),
        (1.0e5, [0.29, 3.61, 24.38, 111.79, 386.08], [0.31, 3.69, 24.94, 115.31, 404.7]),
    ];
    for (n, formula_row, simulation_row) in cases {
        for (i, d) in (4..=8).enumerate() {
            let got = asym::phi_minus_g(n, d).unwrap();
            println!(
                "criterion 02: n = {n:.0e} d = {d}: formula {got:.6}, published \
                 formula row {}, published simulation row {}",
                formula_row[i], simulation_row[i]
            );
            assert!(
                (got - formula_row[i]).abs() <= 0.01,
                "predictor at n = {n}, d = {d}: {got} vs published {}",
                formula_row[i]
            );
            // The printed row is the truncation of the formula value, exact
            // to the digit.
            let truncated = (got * 100.0).floor() / 100.0;
            assert!(
                (truncated - formula_row[i]).abs() < 1e-9,
                "formula value {got} does not truncate onto {}",
                formula_row[i]
            );
            // And the mislabeled row is provably not formula output.
            assert!(
                (got - simulation_row[i]).abs() > 0.01,
                "formula value {got} unexpectedly matches the simulation row {}",
                simulation_row[i]
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "predictor too slow: {elapsed:?}");
    println!(
        "criterion 02: pass - predictor reproduces its published row at \
         printing precision in {elapsed:?}; note the source table carries \
         the formula values under the simulation label and vice versa"
    );
}

#[test]
fn criterion_03_monte_carlo_brackets_the_near_critical_mean() {
    // E[M_{5,4}(10^4)]: published simulation 5.06, truncated predictor 4.82.
    let pruned_config = config(Model::Hypercube { d: 5 }, 10_000, 20_260_819);
    let options = EstimateOptions { work_limit: 1_000_000_000_000, ..Default::default() };
    let pruned = estimate_with(Statistic::KDominantCount { k: 4 }, &pruned_config, 400, options)
        .unwrap();
    assert!(
        pruned.mean >= 4.2 && pruned.mean <= 5.4,
        "pruned estimate {} +- {} outside [4.2, 5.4]",
        pruned.mean,
        pruned.stderr
    );

    // The exhaustive scan on fresh datasets must agree statistically.
    let exhaustive_config = config(Model::Hypercube { d: 5 }, 10_000, 514_229);
    let values: Vec<f64> = (0..30u64)
        .into_par_iter()
        .map(|t| {
            let ds = exhaustive_config.sample_stream(t);
            kdominant::k_dominant_skyline_exhaustive(&ds, 4).map(|s| s.len() as f64)
        })
        .collect::<kdominant::Result<_>>()
        .unwrap();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let stderr = (ss / (values.len() as f64 - 1.0)).sqrt() / (values.len() as f64).sqrt();
    let gap = (pruned.mean - mean).abs();
    let allowed = 4.0 * (pruned.stderr * pruned.stderr + stderr * stderr).sqrt();
    assert!(
        gap <= allowed,
        "pruned {} +- {} vs exhaustive {mean} +- {stderr}: gap {gap} > {allowed}",
        pruned.mean,
        pruned.stderr
    );
    println!(
        "criterion 03: pass - pruned {:.3} +- {:.3} in [4.2, 5.4]; \
         exhaustive {mean:.3} +- {stderr:.3} consistent",
        pruned.mean, pruned.stderr
    );
}

/// All ordered samples of n grid points are equally likely, so the exact
/// mean is (sum of skyline sizes over all u^n samples) / u^n. Enumerate by
/// odometer and demand exact rational equality, zero tolerance.
#[test]
fn criterion_04_categorical_mean_equals_exhaustive_enumeration() {
    let families: [&[u32]; 11] = [
        &[2],
        &[3],
        &[4],
        &[5],
        &[6],
        &[2, 2],
        &[2, 3],
        &[3, 3],
        &[2, 2, 2],
        &[2, 2, 3],
        &[2, 2, 2, 2],
    ];
    let mut cases = 0usize;
    for levels in families {
        let d = levels.len();
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for &u in levels {
            points = points
                .iter()
                .flat_map(|p| {
                    (1..=u).map(move |v| {
                        let mut q = p.clone();
                        q.push(f64::from(v));
                        q
                    })
                })
                .collect();
        }
        let u = points.len() as u64;
        for n in 1usize.. {
            let Some(datasets) = u.checked_pow(n as u32) else { break };
            if datasets * n as u64 > 100_000 {
                break;
            }
            for k in 1..=d {
                let mut digits = vec![0usize; n];
                let mut total = 0u64;
                'odometer: loop {
                    let mut flat = Vec::with_capacity(n * d);
                    for &i in &digits {
                        flat.extend_from_slice(&points[i]);
                    }
                    let ds = Dataset::from_flat(d, flat).unwrap();
                    total +=
                        kdominant::k_dominant_skyline_exhaustive(&ds, k).unwrap().len() as u64;
                    let mut pos = 0;
                    loop {
                        if pos == n {
                            break 'odometer;
                        }
                        digits[pos] += 1;
                        if digits[pos] < points.len() {
                            break;
                        }
                        digits[pos] = 0;
                        pos += 1;
                    }
                }
                let expected = BigRational::new(BigInt::from(total), BigInt::from(datasets));
                let got = exact::categorical_mean(n as u64, k, levels).unwrap();
                assert_eq!(
                    got.rational(),
                    &expected,
                    "levels {levels:?}, n = {n}, k = {k}: closed form disagrees \
                     with enumeration over {datasets} samples"
                );
                cases += 1;
            }
        }
    }
    // The smallest two-level case by hand: 16 samples, mean 9/8.
    let anchor = exact::categorical_mean(2, 1, &[2, 2]).unwrap();
    assert_eq!(anchor.rational(), &BigRational::new(BigInt::from(9), BigInt::from(8)));
    println!("criterion 04: pass - exact equality on {cases} enumerated (levels, n, k) cases");
}

#[test]
fn criterion_05_cycle_counts_match_the_closed_form() {
    // Mutually dominating pairs in the plane: E = n(n-1)/4 = 612.5 at n = 50.
    let pairs = estimate(
        Statistic::CycleCount { length: 2, k: 1 },
        &config(Model::Hypercube { d: 2 }, 50, 1009),
        2000,
    )
    .unwrap();
    let gap = (pairs.mean - 612.5).abs();
    assert!(
        gap <= 3.0 * pairs.stderr,
        "pair cycles: {} +- {} vs 612.5",
        pairs.mean,
        pairs.stderr
    );

    // Triangles under 2-dominance in 3 dimensions: E = 30*29*28/108.
    let triangle_mean = 30.0 * 29.0 * 28.0 / 108.0;
    let triangles = estimate(
        Statistic::CycleCount { length: 3, k: 2 },
        &config(Model::Hypercube { d: 3 }, 30, 2003),
        500,
    )
    .unwrap();
    let gap3 = (triangles.mean - triangle_mean).abs();
    assert!(
        gap3 <= 3.0 * triangles.stderr,
        "triangle cycles: {} +- {} vs {triangle_mean}",
        triangles.mean,
        triangles.stderr
    );
    println!(
        "criterion 05: pass - pair cycles {:.2} +- {:.2} (exact 612.5), \
         triangles {:.2} +- {:.2} (exact {:.2})",
        pairs.mean, pairs.stderr, triangles.mean, triangles.stderr, triangle_mean
    );
}

#[test]
fn criterion_06_threshold_boundaries_are_exact() {
    let d0_cases = [
        (15u64, 2u32),
        (16, 3),
        (19_682, 3),
        (19_683, 4),
        (4_294_967_295, 4),
        (4_294_967_296, 5),
    ];
    for (n, expected) in d0_cases {
        let got = asym::threshold_d0(n).unwrap();
        assert_eq!(got.value, expected, "first threshold at n = {n}");
    }
    let a = [3u64, 10, 49, 290, 2022, 16_165, 145_405, 1_453_435, 15_982_276];
    for (i, expected) in (4u32..=12).zip(a) {
        let got = asym::threshold_d1_boundary(i).unwrap();
        assert_eq!(got.to_string(), expected.to_string(), "cycle boundary index {i}");
    }
    println!(
        "criterion 06: pass - both threshold boundary sequences exact \
         (big-integer evaluation, indices up to 12)"
    );
}

#[test]
fn criterion_07_lambert_w_accuracy() {
    // Round trip over a 1000-point logarithmic grid spanning twelve decades.
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let x = 10f64.powf(-3.0 + 12.0 * i as f64 / 999.0);
        let w = asym::lambert_w(x).unwrap();
        let residual = (w * w.exp() - x).abs() / x;
        worst = worst.max(residual);
    }
    assert!(worst <= 1e-12, "worst relative round-trip residual {worst}");

    // W(2 i^2 ln i) = 2 ln i, since (2 ln i) e^(2 ln i) = 2 i^2 ln i.
    for i in 2u32..=12 {
        let li = f64::from(i).ln();
        let w = asym::lambert_w(2.0 * f64::from(i * i) * li).unwrap();
        assert!(
            (w - 2.0 * li).abs() <= 1e-10,
            "identity at i = {i}: W = {w}, expected {}",
            2.0 * li
        );
    }
    println!(
        "criterion 07: pass - round-trip residual {worst:.2e} on the log grid; \
         boundary identity holds for i = 2..12"
    );
}

#[test]
fn criterion_08_series_identities() {
    // The composition sum and the alternating binomial sum are the same
    // rational number for every order.
    for l in 0..=14 {
        for m in 0..=l {
            let a = asym::sigma_m(m, l);
            let b = asym::sigma_m_alternating(m, l);
            assert_eq!(a.rational(), b.rational(), "sigma at m = {m}, l = {l}");
        }
    }

    // Applying the correction operator zero times reproduces the plain
    // correction sum.
    for n in [1e2, 1e3, 1e4, 1e5, 1e6] {
        for d in 3..=8 {
            let a = asym::phi_operator_power_gd(0, n, d).unwrap();
            let b = asym::g_d(n, d).unwrap();
            assert!(
                (a - b).abs() <= 1e-12 * b.abs(),
                "operator power 0 at n = {n}, d = {d}: {a} vs {b}"
            );
        }
    }

    // The three-dimensional recurrence value at n = 10^6 sits near its
    // leading term 3 n^(-1/2): scaled by 10^3 it must land in [2.85, 3.15].
    let f3 = asym::f_d_numeric(1e6, 3).unwrap() * 1e3;
    assert!((2.85..=3.15).contains(&f3), "scaled f_3(10^6) = {f3}");
    println!(
        "criterion 08: pass - sigma identities exact through order 14, \
         operator consistency 1e-12, scaled f_3(10^6) = {f3:.4}"
    );
}

#[test]
fn criterion_09_property_suite() {
    // Structural corpus: 10^4 seeded datasets across the models, checking
    // the pruned/exhaustive agreement and the inclusion chain at every k.
    let corpus_errors: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|idx| {
            let n = 2 + (idx % 23) as usize;
            let model = match idx % 4 {
                0 => Model::Hypercube { d: 1 + (idx / 4 % 6) as usize },
                1 => Model::Simplex { d: 2 + (idx / 4 % 5) as usize },
                2 => {
                    let menu: [&[u32]; 6] =
                        [&[2], &[3], &[2, 2], &[3, 2], &[2, 2, 2], &[4, 3]];
                    Model::Categorical { levels: menu[(idx / 4 % 6) as usize].to_vec() }
                }
                _ => Model::LineA,
            };
            let ds = config(model, n, idx).sample();
            let mut prev: Option<Vec<usize>> = None;
            for k in 1..=ds.dim() {
                let fast = kdominant::k_dominant_skyline(&ds, k).unwrap();
                let slow = kdominant::k_dominant_skyline_exhaustive(&ds, k).unwrap();
                if fast != slow {
                    return Some(format!("dataset {idx}, k = {k}: pruned != exhaustive"));
                }
                if let Some(p) = &prev {
                    if !p.iter().all(|i| fast.contains(i)) {
                        return Some(format!("dataset {idx}, k = {k}: chain violated"));
                    }
                }
                prev = Some(fast);
            }
            None
        })
        .collect();
    assert!(corpus_errors.is_empty(), "corpus failures: {corpus_errors:?}");

    // The cumulative dominator curve is exactly n at cutoff n - 1: being
    // dominated by at most n - 1 points excludes nothing.
    let curve = cumulative_cloud_curve(
        &config(Model::Hypercube { d: 3 }, 30, 5),
        2,
        &[0, 5, 29],
        50,
        EstimateOptions::default(),
    )
    .unwrap();
    let last = curve.last().unwrap();
    assert_eq!(last.mean, 30.0);
    assert_eq!(last.stderr, 0.0);

    // The tail-integral lower bound stays below the simulated mean across
    // the high-dimensional grid. At k = 60 the bound (about 1e-11) and the
    // true mean (about 3e-10) both sit far below what 24 trials can detect,
    // so every trial counts zero; the 1e-9 term is the evaluation-error
    // allowance that makes the comparison meaningful in that regime.
    let grid_config = config(Model::Hypercube { d: 100 }, 1000, 41);
    for k in [60usize, 70, 80, 90] {
        let bound = exact::lower_bound(1000, 100, k).unwrap();
        let est = estimate(Statistic::KDominantCount { k }, &grid_config, 24).unwrap();
        assert!(
            bound <= est.mean + 4.0 * est.stderr + 1e-9,
            "k = {k}: bound {bound} vs estimate {} +- {}",
            est.mean,
            est.stderr
        );
    }
    println!(
        "criterion 09: pass - 10^4-dataset corpus clean, cumulative curve \
         saturates at n, lower bound below the simulated mean on the \
         d = 100 grid"
    );
}

#[test]
fn criterion_10_declared_out_of_scope() {
    // The limit laws and the oscillation between growth regimes only
    // manifest past sample sizes growing like i^(i^2); no desk-scale run
    // reaches them. Their finite fingerprints are covered instead by the
    // exact boundary sequences and the structural property suite. Assert
    // the super-exponential growth that makes direct reproduction hopeless.
    let mut previous = asym::threshold_d0_boundary(2).unwrap();
    for i in 3u32..=8 {
        let next = asym::threshold_d0_boundary(i).unwrap();
        assert!(next > &previous * 1000u32, "boundary growth at i = {i}");
        previous = next;
    }
    // The eighth boundary is 8^64 = 2^192, already a 58-digit sample size.
    assert_eq!(previous.to_string().len(), 58);
    assert_eq!(
        asym::threshold_d0_boundary(5).unwrap().to_string(),
        "298023223876953125"
    );
    println!(
        "criterion 10: declared - limit statements and between-threshold \
         oscillation need samples beyond i^(i^2) growth; covered indirectly \
         by criteria 06 and 09"
    );
}
