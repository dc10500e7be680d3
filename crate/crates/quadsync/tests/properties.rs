//! Property tests for the metric axioms, the counting fast path, the
//! transform monotonicity, and trajectory confinement/determinism.

use proptest::prelude::*;

use quadsync::dimension::correlation_sum;
use quadsync::ergodic::{empirical_measure, wasserstein1, SampleSet};
use quadsync::maps::SkewSystem;
use quadsync::mfmodels::{legendre_dq, SingularitySpectrum};
use quadsync::randan::{iterate_noisy, NoiseSampler, NoiseVariant};
use quadsync::sync::{coupling_threshold, delta_series, w_infinity};

fn samples(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..max_len)
}

fn brute_force_corr_sum(values: &[f64], q: f64, r: f64) -> f64 {
    let n = values.len();
    let denom = (n - 1) as f64;
    let counts: Vec<u32> = (0..n)
        .map(|i| {
            let mut c = 0u32;
            for j in 0..n {
                if j != i && (values[i] - values[j]).abs() <= r {
                    c += 1;
                }
            }
            c
        })
        .collect();
    if q < 1.0 {
        let mut sum = 0.0;
        let mut included = 0usize;
        for &c in &counts {
            if c > 0 {
                sum += (c as f64 / denom).powf(q - 1.0);
                included += 1;
            }
        }
        if included > 0 {
            sum / included as f64
        } else {
            f64::NAN
        }
    } else {
        counts
            .iter()
            .map(|&c| (c as f64 / denom).powf(q - 1.0))
            .sum::<f64>()
            / n as f64
    }
}

proptest! {
    #[test]
    fn w1_identity(values in samples(200)) {
        let a = SampleSet::new(values).unwrap();
        prop_assert_eq!(wasserstein1(&a, &a), 0.0);
    }

    #[test]
    fn w1_symmetry(a in samples(200), b in samples(200)) {
        let a = SampleSet::new(a).unwrap();
        let b = SampleSet::new(b).unwrap();
        prop_assert_eq!(wasserstein1(&a, &b), wasserstein1(&b, &a));
    }

    #[test]
    fn w1_triangle_inequality(a in samples(100), b in samples(100), c in samples(100)) {
        let a = SampleSet::new(a).unwrap();
        let b = SampleSet::new(b).unwrap();
        let c = SampleSet::new(c).unwrap();
        let ab = wasserstein1(&a, &b);
        let bc = wasserstein1(&b, &c);
        let ac = wasserstein1(&a, &c);
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn w1_zero_iff_identical_multisets(a in samples(100), b in samples(100)) {
        let sa = SampleSet::new(a).unwrap();
        let sb = SampleSet::new(b).unwrap();
        let d = wasserstein1(&sa, &sb);
        if sa.values() == sb.values() {
            prop_assert_eq!(d, 0.0);
        } else {
            prop_assert!(d > 0.0);
        }
    }

    #[test]
    fn ball_counting_matches_brute_force(
        mut values in prop::collection::vec(-1.0f64..1.0, 2..200),
        dup in any::<bool>(),
        r_seed in 0.0f64..1.0,
        q in prop::sample::select(vec![-2.0, 0.0, 2.0, 3.0]),
    ) {
        if dup && values.len() >= 2 {
            values[0] = values[1];
        }
        let m = SampleSet::new(values.clone()).unwrap();
        // Mix of generic radii and exact pairwise distances.
        let mut radii = vec![r_seed.max(1e-9), 1e-9];
        let d = (values[0] - values[values.len() - 1]).abs();
        if d > 0.0 {
            radii.push(d);
        }
        for r in radii {
            let fast = correlation_sum(&m, q, r).unwrap();
            let slow = brute_force_corr_sum(m.values(), q, r);
            prop_assert!(fast == slow || (fast.is_nan() && slow.is_nan()),
                "q={} r={}: {} vs {}", q, r, fast, slow);
        }
    }

    #[test]
    fn legendre_transform_is_nonincreasing(
        raw in prop::collection::vec((0.05f64..1.5, 0.0f64..1.0), 1..12),
    ) {
        // Spectrum points with f <= min(alpha, 1), plus the (1, 1) point that
        // every model spectrum here carries.
        let mut points: Vec<(f64, f64)> = raw
            .into_iter()
            .map(|(alpha, frac)| (alpha, frac * alpha.min(1.0)))
            .collect();
        points.push((1.0, 1.0));
        let spec = SingularitySpectrum::new(points).unwrap();
        let qs: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.25).filter(|&q| q != 1.0).collect();
        let ds: Vec<f64> = qs.iter().map(|&q| legendre_dq(&spec, q)).collect();
        for pair in ds.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-12, "{} then {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn trajectories_confined_and_deterministic(
        c1 in 0.05f64..1.0,
        c2 in 0.05f64..1.0,
        k in 0.0f64..1.0,
        x0 in -1.0f64..1.0,
        y0 in -1.0f64..1.0,
    ) {
        let sys = SkewSystem::new(c1, c2, k).unwrap();
        let a = sys.iterate(x0, y0, 500, 20).unwrap();
        let b = sys.iterate(x0, y0, 500, 20).unwrap();
        prop_assert_eq!(&a, &b);
        for (&x, &y) in a.xs.iter().zip(&a.ys) {
            prop_assert!((-1.0..=1.0).contains(&x));
            prop_assert!((-1.0..=1.0).contains(&y));
        }
    }

    #[test]
    fn one_step_separation_bound(
        c1 in 0.05f64..1.0,
        c2 in 0.05f64..1.0,
        k in 0.0f64..1.0,
        x0 in -1.0f64..1.0,
        y0 in -1.0f64..1.0,
    ) {
        let sys = SkewSystem::new(c1, c2, k).unwrap();
        let traj = sys.iterate(x0, y0, 300, 0).unwrap();
        let dc = (c1 - c2).abs();
        let rho = 4.0 * c1 * (1.0 - k);
        let mut prev = (x0 - y0).abs();
        for d in delta_series(&traj) {
            prop_assert!(d <= (1.0 - k) * dc + rho * prev + 1e-12);
            prev = d;
        }
    }

    #[test]
    fn tail_bound_monotone_in_k(
        c1 in 0.3f64..1.0,
        c2 in 0.05f64..1.0,
        ka in 0.0f64..1.0,
        kb in 0.0f64..1.0,
    ) {
        let threshold = coupling_threshold(c1).unwrap();
        let lo = threshold.max(0.0) + 1e-6;
        prop_assume!(lo < 1.0 && c1 != c2);
        let (ka, kb) = (lo + (1.0 - lo) * ka, lo + (1.0 - lo) * kb);
        prop_assume!(ka < kb);
        let wa = w_infinity(c1, c2, ka).unwrap();
        let wb = w_infinity(c1, c2, kb).unwrap();
        prop_assert!(wb < wa);
    }

    #[test]
    fn empirical_measure_mass_and_order(orbit in samples(300)) {
        let m = empirical_measure(&orbit).unwrap();
        prop_assert_eq!(m.len(), orbit.len());
        for w in m.values().windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn noisy_runs_confined_and_seeded(
        k in 0.0f64..1.0,
        x0 in -1.0f64..1.0,
        seed in any::<u64>(),
        slave_form in any::<bool>(),
    ) {
        let variant = if slave_form { NoiseVariant::SlaveForm } else { NoiseVariant::Literal };
        let mut a = NoiseSampler::build(0.8373351, 2_000, 100, seed).unwrap();
        let mut b = NoiseSampler::build(0.8373351, 2_000, 100, seed).unwrap();
        let ra = iterate_noisy(&mut a, k, x0, 400, variant).unwrap();
        let rb = iterate_noisy(&mut b, k, x0, 400, variant).unwrap();
        prop_assert_eq!(&ra.orbit, &rb.orbit);
        for &v in &ra.orbit {
            prop_assert!((-1.0..=1.0).contains(&v));
        }
    }
}
