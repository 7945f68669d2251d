//! One test per acceptance criterion. Each prints a single
//! `criterion NN PASS/FAIL` line (visible under --nocapture) and asserts it.
//! Tolerances are pinned here, not read from anywhere else.

mod support;

use std::process::Command;
use std::time::Instant;

use latdim::covering::{covering_dimension_estimate, optimal_cover_1d, DEFAULT_RATIOS, DEFAULT_TAU};
use latdim::dimension::{
    counting_profile, extract_regular_subset, fit_dimension, mass_profile, measure_sup, top_half,
    ScaleGrid,
};
use latdim::generators::{
    generalized_ip, integer_cantor, parse_rational, perron_frobenius, polynomial_image,
    GeneratorSpec, IpSpec, TransitionMatrix,
};
use latdim::lattice::{product, DEFAULT_SIZE_CAP};
use latdim::montecarlo::{
    run_delta_experiment, sample_rng, ExperimentConfig, SetSource, DEFAULT_ENTRY_BOX, DEFAULT_SEED,
    DEFAULT_TOLERANCE,
};
use latdim::projection::{
    additive_energy, empirical_transversality, sumset, ProjectionMatrix, DEFAULT_SUMSET_CAP,
};
use latdim::{Cube, LatticeSet};
use rand::Rng;
use support::{
    brute_max_count, brute_min_cover_1d, brute_sup_1d, ls_slope, subsets_up_to, XorShift,
};

fn report(number: u32, label: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number:02} {verdict} {label}: {detail}");
    assert!(pass, "criterion {number:02} {label}: {detail}");
}

fn poly_set(coeffs: &[&str], n_lo: i64, n_hi: i64) -> LatticeSet {
    let coeffs: Vec<_> = coeffs.iter().map(|c| parse_rational(c).unwrap()).collect();
    polynomial_image(&coeffs, n_lo, n_hi).unwrap()
}

fn mass_slope(set: &LatticeSet) -> f64 {
    let grid = ScaleGrid::dyadic_for_set(set).unwrap();
    let profile = mass_profile(set, &grid).unwrap();
    fit_dimension(&profile, top_half(grid.len())).unwrap().slope
}

fn random_set(rng: &mut XorShift, d: usize, max_points: u64, range: i64) -> LatticeSet {
    loop {
        let n = 1 + rng.below(max_points);
        let pts: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.below(2 * range as u64) as i64 - range).collect())
            .collect();
        let set = LatticeSet::from_points(d, pts).unwrap();
        if set.enclosing_side().unwrap_or(0) >= 2 {
            return set;
        }
    }
}

#[test]
fn criterion_01_polynomial_slopes() {
    let start = Instant::now();
    let squares = poly_set(&["0", "0", "1"], 1, 1001);
    assert_eq!(squares.len(), 1000);
    let grid = ScaleGrid::dyadic_for_set(&squares).unwrap();
    let window = top_half(grid.len());
    let counting =
        fit_dimension(&counting_profile(&squares, &grid).unwrap(), window.clone()).unwrap();
    let mass = fit_dimension(&mass_profile(&squares, &grid).unwrap(), window).unwrap();
    let elapsed = start.elapsed();
    let pass = (0.45..=0.55).contains(&counting.slope)
        && (0.45..=0.55).contains(&mass.slope)
        && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        "squares to 10^6 fit dimension one half",
        pass,
        &format!("counting {:.4}, mass {:.4}, {:.2?}", counting.slope, mass.slope, elapsed),
    );
}

#[test]
fn criterion_02_cantor_mass_slope() {
    let tm = TransitionMatrix::on_digits(3, &[0, 1]).unwrap();
    let set = integer_cantor(&tm, 16).unwrap();
    assert_eq!(set.len(), 65_536);
    let slope = mass_slope(&set);
    let pass = (0.60..=0.66).contains(&slope);
    report(2, "base-3 digit set fits log 2 / log 3", pass, &format!("mass {slope:.4}"));
}

#[test]
fn criterion_03_transfer_matrix_pipeline() {
    let tm = TransitionMatrix::new(2, &[vec![1, 1], vec![1, 0]], None).unwrap();
    let radius = perron_frobenius(&tm).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let predicted = radius.log2();
    let set = integer_cantor(&tm, 20).unwrap();
    assert_eq!(set.len(), 17_711);
    let slope = mass_slope(&set);
    let pass = (radius - phi).abs() <= 1e-9 && (slope - predicted).abs() <= 0.05;
    report(
        3,
        "no-consecutive-ones set fits log phi / log 2",
        pass,
        &format!("radius {radius:.12}, predicted {predicted:.4}, mass {slope:.4}"),
    );
}

#[test]
fn criterion_04_ip_sum_slope() {
    let ks: Vec<u64> = (0..7).map(|i| 1u64 << i).collect();
    let ds: Vec<i64> = (0..7).map(|i: u32| 1i64 << (i * i)).collect();
    let spec = IpSpec::new(ks, ds).unwrap();
    let set = generalized_ip(&spec, 7).unwrap();
    assert_eq!(set.len(), 1 << 21);
    let slope = mass_slope(&set);
    let pass = (slope - 0.5).abs() <= 0.07;
    report(4, "doubling IP sums fit dimension one half", pass, &format!("mass {slope:.4}"));
}

#[test]
fn criterion_05_covering_matches_fit() {
    let alphas: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let tm = TransitionMatrix::on_digits(3, &[0, 1]).unwrap();
    let cantor = integer_cantor(&tm, 12).unwrap();
    let squares = poly_set(&["0", "0", "1"], 1, 317);
    let mut details = Vec::new();
    let mut pass = true;
    for (name, set) in [("cantor", &cantor), ("squares", &squares)] {
        let grid = ScaleGrid::dyadic_for_set(set).unwrap();
        let cov = covering_dimension_estimate(set, &grid, &DEFAULT_RATIOS, &alphas, DEFAULT_TAU)
            .unwrap();
        let fit =
            fit_dimension(&mass_profile(set, &grid).unwrap(), top_half(grid.len())).unwrap();
        pass &= cov.bracketed && (cov.estimate - fit.slope).abs() <= 0.1;
        details.push(format!("{name} cover {:.2} vs fit {:.4}", cov.estimate, fit.slope));
    }
    report(5, "covering estimate tracks the slope fit", pass, &details.join(", "));
}

#[test]
fn criterion_06_cover_dp_exact() {
    let start = Instant::now();
    let universe: Vec<i64> = (0..12).collect();
    let host = Cube::new(vec![0], 12).unwrap();
    let mut cases = 0u64;
    let mut violations = 0u64;
    for subset in subsets_up_to(&universe, 6) {
        let set = LatticeSet::from_values(subset.clone());
        for alpha in [0.5, 1.0, 2.0] {
            for r in [0.5, 1.0] {
                let sol = optimal_cover_1d(&set, &host, alpha, r).unwrap();
                let oracle = brute_min_cover_1d(&subset, 12, alpha, (r * 12.0) as i64);
                cases += 1;
                if (sol.cost - oracle).abs() > 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = violations == 0 && elapsed.as_secs_f64() < 60.0;
    report(
        6,
        "interval cover DP matches enumeration",
        pass,
        &format!("{cases} cases, {violations} mismatches, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_07_sumset_slope_quantiles() {
    let start = Instant::now();
    let squares = poly_set(&["0", "0", "1"], 1, 2001);
    let cubes = poly_set(&["0", "0", "0", "1"], 1, 171);
    let grid = ScaleGrid::dyadic(1, 21).unwrap();
    let window = 11..21;
    let target = 5.0 / 6.0;
    let mut slopes: Vec<f64> = (0..200u64)
        .map(|i| {
            let mut rng = sample_rng(DEFAULT_SEED, i);
            let l1 = 0.5 + 1.5 * rng.gen::<f64>();
            let l2 = 0.5 + 1.5 * rng.gen::<f64>();
            let s = sumset(&[squares.clone(), cubes.clone()], &[l1, l2], DEFAULT_SUMSET_CAP)
                .unwrap();
            let profile = mass_profile(&s, &grid).unwrap();
            fit_dimension(&profile, window.clone()).unwrap().slope
        })
        .collect();
    slopes.sort_by(f64::total_cmp);
    let median = (slopes[99] + slopes[100]) / 2.0;
    let at_least = slopes.iter().filter(|&&s| s >= target - 0.07).count();
    let elapsed = start.elapsed();
    let pass =
        at_least >= 180 && (median - target).abs() <= 0.07 && elapsed.as_secs_f64() < 300.0;
    report(
        7,
        "dilated sums of squares and cubes fit 5/6",
        pass,
        &format!("median {median:.4}, {at_least}/200 at least {:.4}, {elapsed:.2?}", target - 0.07),
    );
}

#[test]
fn criterion_08_cauchy_schwarz_exact() {
    let mut rng = XorShift(0xacce_5508);
    let mut violations = 0u64;
    for _ in 0..1000 {
        let d = 2 + rng.below(2) as usize;
        let k = 1 + rng.below(d as u64 - 1) as usize;
        let n = 1 + rng.below(10_000);
        let pts: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.below(1001) as i64 - 500).collect())
            .collect();
        let set = LatticeSet::from_points(d, pts).unwrap();
        let entries: Vec<f64> =
            (0..k * (d - k)).map(|_| rng.unit() * 4.0 - 2.0).collect();
        let m = ProjectionMatrix::new(k, d, entries).unwrap();
        let energy = additive_energy(&set, &m).unwrap();
        let lhs = energy.image_size as u128 * energy.energy;
        let rhs = (set.len() as u128) * (set.len() as u128);
        if lhs < rhs || energy.rep_counts.iter().sum::<u64>() as usize != set.len() {
            violations += 1;
        }
    }
    report(
        8,
        "image size times energy dominates the square",
        violations == 0,
        &format!("1000 cases, {violations} violations"),
    );
}

#[test]
fn criterion_09_transversality_scaling() {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut closed_form = 0.0;
    let mut dist = 2i64;
    while dist <= 1024 {
        let est =
            empirical_transversality(&[0, 0], &[0, dist], 1, (0.0, 1.0), 100_000, DEFAULT_SEED)
                .unwrap();
        assert!(est.hits > 0, "no collisions at distance {dist}");
        xs.push((dist as f64).ln());
        ys.push(est.probability.ln());
        if dist == 8 {
            closed_form = est.probability;
        }
        dist *= 2;
    }
    let slope = ls_slope(&xs, &ys);
    let pass = slope <= -0.8 && (closed_form - 0.125).abs() <= 0.01;
    report(
        9,
        "collision probability decays with separation",
        pass,
        &format!("slope {slope:.3}, probability at 8 = {closed_form:.4}"),
    );
}

#[test]
fn criterion_10_image_size_tail_linearity() {
    let tm = TransitionMatrix::on_digits(3, &[0, 1]).unwrap();
    let factor = integer_cantor(&tm, 10).unwrap();
    let set = product(&factor, &factor, DEFAULT_SIZE_CAP).unwrap();
    let spec = GeneratorSpec::Cantor {
        base: 3,
        rows: None,
        digits: Some(vec![0, 1]),
        forbid: vec![],
        start: None,
        depth: 10,
    };
    let source = SetSource::Generator { spec };
    let cfg = ExperimentConfig {
        source: SetSource::Product { factors: vec![source.clone(), source] },
        d: 2,
        k: 1,
        sample_count: 200,
        entry_box: DEFAULT_ENTRY_BOX,
        scales: None,
        fit_window: None,
        seed: DEFAULT_SEED,
        tolerance: DEFAULT_TOLERANCE,
    };
    let deltas: Vec<f64> = (1..=10).map(|i| i as f64 * 0.05).collect();
    let rep = run_delta_experiment(&set, 1.27, &deltas, &cfg).unwrap();
    let nondecreasing = rep.fractions.windows(2).all(|w| w[1] >= w[0]);
    let linear = rep.fractions.iter().zip(&rep.deltas).all(|(&f, &d)| f <= 5.0 * d);
    let pass = nondecreasing && linear && !rep.superlinear;
    report(
        10,
        "small-image fraction grows at most linearly",
        pass,
        &format!("fractions {:?}", rep.fractions),
    );
}

#[test]
fn criterion_11_regular_subset_postconditions() {
    let mut rng = XorShift(0x11aa_44ee);
    let mut done = 0u32;
    let mut violations = 0u64;
    while done < 100 {
        let side = 128 + rng.below(385) as i64;
        let alpha = 0.25 + 0.4 * rng.unit();
        let density = 6.05 + 0.95 * rng.unit();
        let target = (density * (side as f64).powf(alpha)).ceil() as i64;
        if target > 150 || target > side / 2 {
            continue;
        }
        let mut pool: Vec<i64> = (0..side).collect();
        for i in 0..target as usize {
            let j = i + rng.below((pool.len() - i) as u64) as usize;
            pool.swap(i, j);
        }
        let set = LatticeSet::from_values(pool[..target as usize].to_vec());
        let host = Cube::new(vec![0], side).unwrap();
        let big_s = set.len() as f64 / (side as f64).powf(alpha);
        let reg = extract_regular_subset(&set, &host, alpha).unwrap();
        let (oracle_sup, _, _) = brute_sup_1d(reg.subset.values(), side, alpha);
        let ok = (2.0..3.0).contains(&reg.sup_value)
            && (reg.cube.side() as f64) >= big_s / 6.0
            && (reg.sup_value - oracle_sup).abs() <= 1e-12;
        if !ok {
            violations += 1;
        }
        done += 1;
    }
    report(
        11,
        "regularized subsets land in the density band",
        violations == 0,
        &format!("100 cases, {violations} violations"),
    );
}

#[test]
fn criterion_12_exact_invariances() {
    let mut rng = XorShift(0xe12a_c700);
    let mut violations = 0u64;

    // Translation leaves extremal counts unchanged.
    for _ in 0..30 {
        let d = 1 + rng.below(2) as usize;
        let set = random_set(&mut rng, d, 40, 100);
        let shift: Vec<i64> = (0..d).map(|_| rng.below(201) as i64 - 100).collect();
        let moved = LatticeSet::from_points(
            d,
            set.points().map(|p| p.iter().zip(&shift).map(|(&c, &s)| c + s).collect()),
        )
        .unwrap();
        let grid = ScaleGrid::dyadic_for_set(&set).unwrap();
        let a = counting_profile(&set, &grid).unwrap();
        let b = counting_profile(&moved, &grid).unwrap();
        if a.entries.iter().zip(&b.entries).any(|(x, y)| x.count != y.count) {
            violations += 1;
        }
    }

    // Integer dilation scales both profiles exactly.
    for _ in 0..20 {
        let d = 1 + rng.below(2) as usize;
        let m = [2i64, 3, 5][rng.below(3) as usize];
        let set = random_set(&mut rng, d, 30, 60);
        let dilated = LatticeSet::from_points(
            d,
            set.points().map(|p| p.iter().map(|&c| c * m).collect()),
        )
        .unwrap();
        let grid = ScaleGrid::dyadic_for_set(&set).unwrap();
        let scaled = ScaleGrid::new(grid.sides().iter().map(|&s| s * m).collect()).unwrap();
        for profile in [counting_profile, mass_profile] {
            let a = profile(&set, &grid).unwrap();
            let b = profile(&dilated, &scaled).unwrap();
            if a.entries.iter().zip(&b.entries).any(|(x, y)| x.count != y.count) {
                violations += 1;
            }
        }
    }

    // The scale-supremum of count / side^alpha never rises with alpha.
    for _ in 0..20 {
        let d = 1 + rng.below(2) as usize;
        let set = random_set(&mut rng, d, 40, 100);
        let grid = ScaleGrid::dyadic_for_set(&set).unwrap();
        for profile in [counting_profile, mass_profile] {
            let p = profile(&set, &grid).unwrap();
            let sups: Vec<f64> = (0..=8).map(|i| measure_sup(&p, i as f64 * 0.25)).collect();
            if sups.windows(2).any(|w| w[1] > w[0]) {
                violations += 1;
            }
        }
    }

    // Counting and mass counts are subadditive under union, scale by scale.
    for _ in 0..20 {
        let d = 1 + rng.below(2) as usize;
        let a = random_set(&mut rng, d, 30, 80);
        let b = random_set(&mut rng, d, 30, 80);
        let union = LatticeSet::from_points(
            d,
            a.points().chain(b.points()).map(|p| p.to_vec()),
        )
        .unwrap();
        let grid = ScaleGrid::dyadic_for_set(&union).unwrap();
        for profile in [counting_profile, mass_profile] {
            let pu = profile(&union, &grid).unwrap();
            let pa = profile(&a, &grid).unwrap();
            let pb = profile(&b, &grid).unwrap();
            for i in 0..grid.len() {
                if pu.entries[i].count > pa.entries[i].count + pb.entries[i].count {
                    violations += 1;
                }
            }
        }
    }

    // Extremal counts agree with brute-force maxima on small sets.
    for _ in 0..40 {
        let d = 1 + rng.below(2) as usize;
        let set = random_set(&mut rng, d, 20, 50);
        let pts: Vec<Vec<i64>> = set.points().map(|p| p.to_vec()).collect();
        let grid = ScaleGrid::dyadic_for_set(&set).unwrap();
        let profile = counting_profile(&set, &grid).unwrap();
        for entry in &profile.entries {
            if entry.count != brute_max_count(&pts, entry.side) {
                violations += 1;
            }
        }
    }

    report(
        12,
        "profile invariances hold exactly",
        violations == 0,
        &format!("{violations} violations"),
    );
}

#[test]
fn criterion_13_thread_count_determinism() {
    let exe = env!("CARGO_BIN_EXE_latdim");
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(dir).unwrap();

    let poly_source = |coeffs: &[&str], n_lo: i64, n_hi: i64| SetSource::Generator {
        spec: GeneratorSpec::Polynomial {
            coeffs: coeffs.iter().map(|c| c.to_string()).collect(),
            n_lo,
            n_hi,
        },
    };
    let marstrand_cfg = ExperimentConfig {
        source: SetSource::Product {
            factors: vec![poly_source(&["0", "0", "1"], 1, 201), poly_source(&["0", "0", "0", "1"], 1, 41)],
        },
        d: 2,
        k: 1,
        sample_count: 16,
        entry_box: DEFAULT_ENTRY_BOX,
        scales: None,
        fit_window: None,
        seed: DEFAULT_SEED,
        tolerance: DEFAULT_TOLERANCE,
    };
    let cantor_source = SetSource::Generator {
        spec: GeneratorSpec::Cantor {
            base: 3,
            rows: None,
            digits: Some(vec![0, 1]),
            forbid: vec![],
            start: None,
            depth: 6,
        },
    };
    let delta_cfg = ExperimentConfig {
        source: SetSource::Product { factors: vec![cantor_source.clone(), cantor_source] },
        d: 2,
        k: 1,
        sample_count: 64,
        entry_box: DEFAULT_ENTRY_BOX,
        scales: None,
        fit_window: None,
        seed: DEFAULT_SEED,
        tolerance: DEFAULT_TOLERANCE,
    };
    let marstrand_path = dir.join("acc_marstrand_cfg.json");
    let delta_path = dir.join("acc_delta_cfg.json");
    std::fs::write(&marstrand_path, serde_json::to_vec_pretty(&marstrand_cfg).unwrap()).unwrap();
    std::fs::write(&delta_path, serde_json::to_vec_pretty(&delta_cfg).unwrap()).unwrap();

    let run = |threads: &str, args: &[&str], out: &std::path::Path| -> Vec<u8> {
        let status = Command::new(exe)
            .arg("--threads")
            .arg(threads)
            .args(args)
            .arg("-o")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success(), "{args:?} failed at {threads} threads");
        std::fs::read(out).unwrap()
    };

    let m_args =
        ["mc", "marstrand", "--config", marstrand_path.to_str().unwrap(), "--target", "0.8333333333333334"];
    let d_args =
        ["mc", "delta", "--config", delta_path.to_str().unwrap(), "--alpha", "1.27", "--deltas", "0.1,0.2,0.3"];
    let m1 = run("1", &m_args, &dir.join("acc_m1.json"));
    let m8 = run("8", &m_args, &dir.join("acc_m8.json"));
    let d1 = run("1", &d_args, &dir.join("acc_d1.json"));
    let d8 = run("8", &d_args, &dir.join("acc_d8.json"));
    let pass = !m1.is_empty() && m1 == m8 && !d1.is_empty() && d1 == d8;
    report(
        13,
        "reports are byte-identical across thread counts",
        pass,
        &format!("marstrand {} bytes, delta {} bytes", m1.len(), d1.len()),
    );
}
