//! Acceptance suite: closed-form consistency plus constructive sharpness
//! at desk scale. One pass/fail line per criterion; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use intrec::majorization::{karamata_gap, majorizes};
use intrec::modulus::Modulus;
use intrec::placement::{
    case_a_value, case_b_value, case_c_value, numeric_search, triggered_optimal,
};
use intrec::recovery::{optimal_weights, ostrowski_bound, recovery_error, OffsetSchedule};
use intrec::simulation::{
    empirical_error, extremal_process, generated_process, monte_carlo_upper_bound,
    sample_hw_function, within_class, GridFunction,
};
use intrec::stochastic::{Envelope, SimpleRandomVariable};

const GRID: usize = 4096;

fn report(criterion: &str, ok: bool, elapsed: Duration, detail: &str) {
    println!(
        "criterion {criterion}: {} ({elapsed:.2?}) {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn random_modulus(rng: &mut ChaCha8Rng) -> Modulus<f64> {
    match rng.gen_range(0..3) {
        0 => Modulus::linear(rng.gen_range(0.1..2.0)).unwrap(),
        1 => Modulus::hoelder(rng.gen_range(0.1..2.0), rng.gen_range(0.2..1.0)).unwrap(),
        _ => {
            let mut points = vec![(0.0, 0.0)];
            let mut slope: f64 = rng.gen_range(0.5..2.0);
            let (mut t, mut w) = (0.0, 0.0);
            for _ in 0..rng.gen_range(1..4) {
                let gap: f64 = rng.gen_range(0.2..0.8);
                t += gap;
                w += slope * gap;
                points.push((t, w));
                slope *= rng.gen_range(0.3..0.9);
            }
            Modulus::piecewise_linear(points).unwrap()
        }
    }
}

/// 1. The single-sample bound on [0, 2] with a pinned time x + 1 reduces
///    to the classical (1 + x^2) / 2 after normalizing by the length.
#[test]
fn criterion_1_classical_consistency() {
    let started = Instant::now();
    let omega = Modulus::linear(1.0).unwrap();
    let mut worst = 0.0f64;
    for x in [-1.0f64, -0.5, 0.0, 0.5, 1.0] {
        let tau = SimpleRandomVariable::deterministic(x + 1.0, 2.0).unwrap();
        let bound = ostrowski_bound(&omega, 2.0, &tau.envelope()).unwrap();
        worst = worst.max((bound / 2.0 - (1.0 + x * x) / 2.0).abs());
    }
    let elapsed = started.elapsed();
    report(
        "1",
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        elapsed,
        &format!("max deviation {worst:.3e}"),
    );
}

/// 2. The generated extremal process attains the single-sample bound
///    within 2 omega(1/N) across 20 configurations.
#[test]
fn criterion_2_single_sample_sharpness() {
    let started = Instant::now();
    let moduli = [
        Modulus::linear(1.0).unwrap(),
        Modulus::hoelder(1.0, 0.5).unwrap(),
    ];
    let times: Vec<SimpleRandomVariable<f64>> = vec![
        SimpleRandomVariable::deterministic(0.5, 1.0).unwrap(),
        SimpleRandomVariable::deterministic(0.3, 1.0).unwrap(),
        SimpleRandomVariable::deterministic(0.1, 1.0).unwrap(),
        SimpleRandomVariable::deterministic(0.75, 1.0).unwrap(),
        SimpleRandomVariable::deterministic(1.0, 1.0).unwrap(),
        SimpleRandomVariable::new(vec![(0.2, 0.5), (0.6, 0.5)], 1.0).unwrap(),
        SimpleRandomVariable::new(vec![(0.0, 0.3), (0.9, 0.7)], 1.0).unwrap(),
        SimpleRandomVariable::new(vec![(0.4, 0.25), (0.5, 0.75)], 1.0).unwrap(),
        SimpleRandomVariable::new(vec![(0.1, 0.9), (0.8, 0.1)], 1.0).unwrap(),
        SimpleRandomVariable::new(vec![(0.3, 0.5), (0.7, 0.5)], 1.0).unwrap(),
    ];
    let sched = OffsetSchedule::single();
    let weights = optimal_weights(&sched);
    let mut configs = 0;
    let mut worst_margin = f64::NEG_INFINITY;
    for omega in &moduli {
        let slack = 2.0 * omega.eval(1.0 / GRID as f64).unwrap();
        for tau in &times {
            let bound = ostrowski_bound(omega, 1.0, &tau.envelope()).unwrap();
            let process = extremal_process(omega, &sched, tau, GRID).unwrap();
            let empirical = empirical_error(&process, &sched, tau, &weights).unwrap();
            worst_margin = worst_margin.max((empirical - bound).abs() - slack);
            configs += 1;
        }
    }
    let elapsed = started.elapsed();
    report(
        "2",
        configs == 20 && worst_margin <= 0.0 && elapsed < Duration::from_secs(30),
        elapsed,
        &format!("{configs} configurations, worst slack margin {worst_margin:.3e}"),
    );
}

/// 3. Multi-sample sharpness and upper bound: the extremal process attains
///    the closed form within 2 omega(1/N), and 500 random atomwise class
///    members never beat it by more than 1e-3.
#[test]
fn criterion_3_multi_sample_sharpness_and_upper_bound() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let mut sharp_ok = true;
    let mut processes = 0usize;
    let mut worst_excess = f64::NEG_INFINITY;
    for config in 0..20 {
        let n = 1 + config % 3;
        let omega = if config % 2 == 0 {
            Modulus::linear(rng.gen_range(0.5..1.5)).unwrap()
        } else {
            Modulus::hoelder(rng.gen_range(0.5..1.5), rng.gen_range(0.3..1.0)).unwrap()
        };
        // Schedule with room left for the trigger.
        let mut offsets = vec![0.0];
        let mut t = 0.0;
        for _ in 1..n {
            t += rng.gen_range(0.05..0.3);
            offsets.push(t);
        }
        let sched = OffsetSchedule::new(offsets).unwrap();
        let cap = 1.0 - sched.last();
        let atoms = rng.gen_range(1..=3);
        let tau = {
            let mut vals: Vec<(f64, f64)> = (0..atoms)
                .map(|_| (rng.gen_range(0.0..cap), 1.0 / atoms as f64))
                .collect();
            vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            SimpleRandomVariable::new(vals, 1.0).unwrap()
        };
        let theory = recovery_error(&omega, &sched, &tau.envelope()).unwrap();

        // (a) sharpness of the extremal construction
        let p = extremal_process(&omega, &sched, &tau, GRID).unwrap();
        let emp = empirical_error(&p, &sched, &tau, &optimal_weights(&sched)).unwrap();
        let step_omega = omega.eval(1.0 / GRID as f64).unwrap();
        sharp_ok &= (emp - theory).abs() <= 2.0 * step_omega;
        // The extremal process vanishes at every sampling time, up to
        // interpolation error scaled by the atom probability.
        for ((f, &prob), &v) in p.atoms().iter().zip(p.probs()).zip(tau.values()) {
            for &tk in sched.offsets() {
                sharp_ok &= f.value_at(v + tk).abs() <= step_omega / prob + 1e-12;
            }
        }

        // (b) upper bound over random members
        let run =
            monte_carlo_upper_bound(&omega, &sched, &tau, GRID, 25, 300 + config as u64).unwrap();
        processes += run.empirical.len();
        worst_excess = worst_excess.max(run.max_empirical() - run.theoretical);
    }
    let elapsed = started.elapsed();
    report(
        "3",
        sharp_ok && processes == 500 && worst_excess <= 1e-3 && elapsed < Duration::from_secs(300),
        elapsed,
        &format!("{processes} random processes, worst excess {worst_excess:.3e}"),
    );
}

/// 4. Minimizing the searched error over both schedule and trigger on a
///    0.01 trigger grid recovers the uniform optimum 2n I(1/(2n)) and the
///    uniform times (2k-1)/(2n).
#[test]
fn criterion_4_uniform_optimum_via_search() {
    let started = Instant::now();
    let omega = Modulus::linear(1.0).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for n in 1..=3usize {
        let mut best: Option<(f64, f64, Vec<f64>)> = None;
        for j in 0..100 {
            let m = j as f64 / 100.0;
            let env = Envelope::new(m, m, 1.0).unwrap();
            let (sched, value) = numeric_search(&omega, n, &env, 0.01).unwrap();
            if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
                best = Some((value, m, sched.offsets().to_vec()));
            }
        }
        let (value, trigger, offsets) = best.unwrap();
        let target = 2.0 * n as f64 * omega.integral(1.0 / (2.0 * n as f64)).unwrap();
        let value_ok = (value - target).abs() <= 1e-4;
        let times_ok = offsets.iter().enumerate().all(|(k, &t)| {
            let uniform = (2 * (k + 1) - 1) as f64 / (2.0 * n as f64);
            (trigger + t - uniform).abs() <= 0.02
        });
        ok &= value_ok && times_ok;
        detail.push_str(&format!(
            "n={n}: |v - {target:.6}| = {:.2e}; ",
            (value - target).abs()
        ));
    }
    let elapsed = started.elapsed();
    report(
        "4",
        ok && elapsed < Duration::from_secs(120),
        elapsed,
        detail.trim_end(),
    );
}

/// 5. The numeric oracle certifies the three-case optimum on 50 random
///    instances, and the reported offsets reproduce the reported value
///    through the error formula.
#[test]
fn criterion_5_trigger_optimum_vs_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let resolution = 0.01;
    let mut ok = true;
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..50 {
        let omega = random_modulus(&mut rng);
        let n = rng.gen_range(2..=3usize);
        let lo: f64 = rng.gen_range(0.0..0.9);
        let hi: f64 = rng.gen_range(lo..0.95);
        let env = Envelope::new(lo, hi, 1.0).unwrap();
        let closed = triggered_optimal(&omega, n, &env).unwrap();
        let (_, searched) = numeric_search(&omega, n, &env, resolution).unwrap();
        let gap = (searched - closed.value).abs();
        worst_gap = worst_gap.max(gap);
        ok &= gap <= 5.0 * resolution * omega.eval(1.0).unwrap();
        let direct = recovery_error(&omega, &closed.offsets, &env).unwrap();
        ok &= (direct - closed.value).abs() <= 1e-12;
    }
    let elapsed = started.elapsed();
    report(
        "5",
        ok && elapsed < Duration::from_secs(300),
        elapsed,
        &format!("worst oracle gap {worst_gap:.3e}"),
    );
}

/// 6. The case formulas agree on both case boundaries.
#[test]
fn criterion_6_case_boundary_continuity() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let omega = random_modulus(&mut rng);
        let n = rng.gen_range(2..=3usize);
        let d = (2 * n - 1) as f64;
        // A/C boundary: (2n-1) m + M = 1, feasible for M >= 1/(2n).
        let hi: f64 = rng.gen_range(1.0 / (2.0 * n as f64)..0.99);
        let lo = (1.0 - hi) / d;
        let a = case_a_value(&omega, n, hi).unwrap();
        let c = case_c_value(&omega, n, lo, hi).unwrap();
        worst = worst.max((a - c).abs());
        // B/C boundary: (2n-1) M + m = 1, feasible for M in [1/(2n), 1/(2n-1)].
        let hi: f64 = rng.gen_range(1.0 / (2.0 * n as f64)..1.0 / d);
        let lo = 1.0 - d * hi;
        let b = case_b_value(&omega, n, lo).unwrap();
        let c = case_c_value(&omega, n, lo, hi).unwrap();
        worst = worst.max((b - c).abs());
    }
    let elapsed = started.elapsed();
    report(
        "6",
        worst <= 1e-10 && elapsed < Duration::from_secs(1),
        elapsed,
        &format!("worst boundary mismatch {worst:.3e}"),
    );
}

/// 7. Bulk property suites at the stated tolerances.
#[test]
fn criterion_7_property_suites() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let mut ok = true;

    // Weight normalization, 1000 random schedule/trigger pairs.
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let mut offsets = vec![0.0];
        let mut t = 0.0;
        for _ in 1..n {
            t += rng.gen_range(0.01..0.15);
            offsets.push(t);
        }
        let sched = OffsetSchedule::new(offsets).unwrap();
        let tau: f64 = rng.gen_range(0.0..(1.0 - sched.last()));
        let sum: f64 = optimal_weights(&sched).realize(tau).iter().sum();
        ok &= (sum - 1.0).abs() <= 1e-12;
    }

    // Karamata nonnegativity and the extension lemma, 1000 random pairs.
    for _ in 0..1000 {
        let d = rng.gen_range(2..8);
        let a: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut b = a.clone();
        for _ in 0..rng.gen_range(1..5) {
            let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
            if i != j {
                let lambda: f64 = rng.gen_range(0.0..0.5);
                let shift = lambda * (b[i] - b[j]);
                b[i] -= shift;
                b[j] += shift;
            }
        }
        let omega = random_modulus(&mut rng);
        let f = |t: f64| omega.integral(t.abs()).unwrap();
        ok &= karamata_gap(f, &a, &b).unwrap() >= -1e-10;
        let c: f64 = rng.gen_range(-2.0..2.0);
        let mut ea = a.clone();
        let mut eb = b.clone();
        ea.push(c);
        eb.push(c);
        ok &= majorizes(&ea, &eb).unwrap();
    }

    // Convexity of the antiderivative, 1000 random triples.
    for _ in 0..1000 {
        let omega = random_modulus(&mut rng);
        let t: f64 = rng.gen_range(0.0..2.0);
        let s: f64 = rng.gen_range(0.0..2.0);
        let mid = omega.integral((t + s) / 2.0).unwrap();
        let avg = (omega.integral(t).unwrap() + omega.integral(s).unwrap()) / 2.0;
        ok &= mid <= avg + 1e-12;
    }

    // Sampled class members pass the membership check, 1000 seeds.
    let moduli = [
        Modulus::linear(1.0).unwrap(),
        Modulus::hoelder(1.0, 0.5).unwrap(),
        Modulus::piecewise_linear(vec![(0.0, 0.0), (0.25, 0.4), (1.0, 0.9)]).unwrap(),
    ];
    for seed in 0..1000u64 {
        let m = &moduli[(seed % 3) as usize];
        let f = sample_hw_function(m, 100, seed).unwrap();
        ok &= within_class(m, &f);
    }

    // Expectation identity of generated processes, 200 random instances.
    for _ in 0..200 {
        let cells = rng.gen_range(2..40);
        let values: Vec<f64> = (0..=cells).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = GridFunction::new(1.0, values).unwrap();
        let atoms = rng.gen_range(1..5);
        let mut probs: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.1..1.0)).collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let pick = rng.gen_range(0..atoms);
        let p = generated_process(&x, pick, &probs).unwrap();
        ok &= p
            .mean_values()
            .iter()
            .zip(x.values())
            .all(|(got, want)| (got - want).abs() <= 1e-12);
    }

    let elapsed = started.elapsed();
    report(
        "7",
        ok && elapsed < Duration::from_secs(60),
        elapsed,
        "five suites",
    );
}
