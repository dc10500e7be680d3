//! Correlation-integral estimators for generalized and local dimensions,
//! seeded oracle sample generators, and the closed-form spectrum for measures
//! whose density is bounded below with inverse-square-root poles.
//!
//! All samples live on the line, so ball masses reduce to range counts over a
//! sorted array: two binary searches per (point, radius) instead of an O(n^2)
//! pair enumeration. The searches test the exact predicate |x_i - x_j| <= r,
//! so the counts match a brute-force enumeration bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ergodic::SampleSet;
use crate::error::{Error, Result};

/// Fits with r^2 below this are flagged as poor.
pub const POOR_FIT_R2: f64 = 0.98;

/// For q < 1, more than this fraction of empty punctured balls flags the fit.
pub const MAX_EXCLUDED_FRAC: f64 = 0.01;

/// Correlation sums of one q over a decreasing ladder of radii.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSumCurve {
    pub q: f64,
    /// Decreasing radii.
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Per radius: points whose punctured ball was empty (only counted for q < 1).
    pub excluded: Vec<usize>,
}

/// One estimated generalized dimension with its fit diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DqEstimate {
    pub q: f64,
    pub dq: f64,
    pub fit_r2: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Largest per-radius excluded fraction seen during the fit.
    pub excluded_frac: f64,
    /// Set when the regression quality or the exclusions are unacceptable.
    pub poor_fit: bool,
}

/// Local scaling exponent of the empirical ball mass around one point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDimensionEstimate {
    pub x: f64,
    pub d: f64,
    pub radii: Vec<f64>,
}

/// Index range [lo, hi) of sorted values v satisfying |center - v| <= r.
///
/// The predicate region {v : |center - v| <= r} is a contiguous interval even
/// under rounding, because the rounded difference is monotone in v. Both
/// boundaries are located with partition_point over predicates phrased in
/// terms of the exact rounded distance, so counts match a brute-force
/// enumeration bit for bit. Searching on the keys center +- r instead would
/// disagree near the boundary, where (center - v) and (center - r) round
/// differently.
fn ball_range(sorted: &[f64], center: f64, r: f64) -> (usize, usize) {
    let lo = sorted.partition_point(|&v| v < center && (center - v).abs() > r);
    let hi = sorted.partition_point(|&v| v <= center || (v - center).abs() <= r);
    (lo, hi)
}

/// Per-point neighbor counts at radius r, self excluded.
fn punctured_counts(sorted: &[f64], r: f64) -> Vec<u32> {
    sorted
        .par_iter()
        .map(|&x| {
            let (lo, hi) = ball_range(sorted, x, r);
            (hi - lo - 1) as u32
        })
        .collect()
}

/// Fold the per-point ball masses m_i = count_i / (n-1) into the q-th
/// correlation sum. For q < 1 empty punctured balls are excluded from the
/// average and reported.
fn corr_sum_from_counts(counts: &[u32], q: f64) -> (f64, usize) {
    let n = counts.len();
    let denom = (n - 1) as f64;
    if q < 1.0 {
        let mut sum = 0.0;
        let mut excluded = 0usize;
        for &c in counts {
            if c == 0 {
                excluded += 1;
            } else {
                sum += (c as f64 / denom).powf(q - 1.0);
            }
        }
        let included = n - excluded;
        let value = if included > 0 {
            sum / included as f64
        } else {
            f64::NAN
        };
        (value, excluded)
    } else {
        let mut sum = 0.0;
        for &c in counts {
            sum += (c as f64 / denom).powf(q - 1.0);
        }
        (sum / n as f64, 0)
    }
}

/// The correlation sum (1/n) sum_i m_i(r)^(q-1) with punctured ball masses
/// m_i(r) = #{j != i : |x_i - x_j| <= r} / (n-1).
pub fn correlation_sum(m: &SampleSet, q: f64, r: f64) -> Result<f64> {
    if m.len() < 2 {
        return Err(Error::DegenerateSample { n: m.len(), min: 2 });
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "r",
            value: r,
            domain: "(0, inf)",
        });
    }
    let counts = punctured_counts(m.values(), r);
    Ok(corr_sum_from_counts(&counts, q).0)
}

/// Correlation sums over a decreasing ladder of radii.
pub fn correlation_sum_curve(m: &SampleSet, q: f64, radii: &[f64]) -> Result<CorrelationSumCurve> {
    if m.len() < 2 {
        return Err(Error::DegenerateSample { n: m.len(), min: 2 });
    }
    let mut values = Vec::with_capacity(radii.len());
    let mut excluded = Vec::with_capacity(radii.len());
    for &r in radii {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::OutOfDomain {
                name: "r",
                value: r,
                domain: "(0, inf)",
            });
        }
        let counts = punctured_counts(m.values(), r);
        let (v, e) = corr_sum_from_counts(&counts, q);
        values.push(v);
        excluded.push(e);
    }
    Ok(CorrelationSumCurve {
        q,
        radii: radii.to_vec(),
        values,
        excluded,
    })
}

/// Geometrically spaced radii from r_max down to r_min.
pub fn geometric_radii(r_min: f64, r_max: f64, n_radii: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_max > r_min) {
        return Err(Error::InvalidWindow(format!(
            "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    if n_radii < 2 {
        return Err(Error::InvalidWindow(format!(
            "need at least 2 radii, got {n_radii}"
        )));
    }
    let ratio = r_min / r_max;
    Ok((0..n_radii)
        .map(|j| {
            if j == n_radii - 1 {
                r_min
            } else {
                r_max * ratio.powf(j as f64 / (n_radii - 1) as f64)
            }
        })
        .collect())
}

/// Default scale window (n^-0.9 * span, 0.1 * span): below the lower end,
/// empirical balls are dominated by sample discreteness.
pub fn default_scale_window(m: &SampleSet) -> (f64, f64) {
    let span = m.span();
    ((m.len() as f64).powf(-0.9) * span, 0.1 * span)
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(a, b)| a * b).sum();
    let sxx: f64 = xs.iter().map(|a| a * a).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return (0.0, sy / n, 1.0);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let p = slope * x + intercept;
            (y - p) * (y - p)
        })
        .sum();
    let mean_y = sy / n;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y) * (y - mean_y)).sum();
    let r2 = if ss_tot > 1e-300 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (slope, intercept, r2)
}

fn fit_from_curve(curve: &CorrelationSumCurve, n: usize) -> DqEstimate {
    let q = curve.q;
    let mut xs = Vec::with_capacity(curve.radii.len());
    let mut ys = Vec::with_capacity(curve.radii.len());
    let mut max_excluded = 0usize;
    for ((&r, &v), &e) in curve.radii.iter().zip(&curve.values).zip(&curve.excluded) {
        max_excluded = max_excluded.max(e);
        if v.is_finite() && v > 0.0 {
            xs.push((q - 1.0) * r.ln());
            ys.push(v.ln());
        }
    }
    let r_min = *curve.radii.last().unwrap();
    let r_max = curve.radii[0];
    if xs.len() < 2 {
        return DqEstimate {
            q,
            dq: f64::NAN,
            fit_r2: 0.0,
            r_min,
            r_max,
            excluded_frac: max_excluded as f64 / n as f64,
            poor_fit: true,
        };
    }
    let (slope, _, r2) = least_squares(&xs, &ys);
    let excluded_frac = max_excluded as f64 / n as f64;
    DqEstimate {
        q,
        dq: slope,
        fit_r2: r2,
        r_min,
        r_max,
        excluded_frac,
        poor_fit: r2 < POOR_FIT_R2 || (q < 1.0 && excluded_frac > MAX_EXCLUDED_FRAC),
    }
}

/// Least-squares slope of log C_q(r) against (q-1) log r over geometrically
/// spaced radii. q = 1 is served by [`estimate_d1`] instead.
pub fn estimate_dq(
    m: &SampleSet,
    q: f64,
    scale_window: (f64, f64),
    n_radii: usize,
) -> Result<DqEstimate> {
    if q == 1.0 {
        return Err(Error::OutOfDomain {
            name: "q",
            value: q,
            domain: "q != 1 (use estimate_d1)",
        });
    }
    let radii = geometric_radii(scale_window.0, scale_window.1, n_radii)?;
    let curve = correlation_sum_curve(m, q, &radii)?;
    Ok(fit_from_curve(&curve, m.len()))
}

/// Estimate a whole spectrum, computing the ball counts once per radius and
/// reusing them across all q (the counts do not depend on q). q = 1 entries
/// are routed to the information-dimension estimator.
pub fn estimate_dq_spectrum(
    m: &SampleSet,
    qs: &[f64],
    scale_window: (f64, f64),
    n_radii: usize,
) -> Result<Vec<DqEstimate>> {
    if m.len() < 2 {
        return Err(Error::DegenerateSample { n: m.len(), min: 2 });
    }
    let radii = geometric_radii(scale_window.0, scale_window.1, n_radii)?;
    let mut curves: Vec<CorrelationSumCurve> = qs
        .iter()
        .map(|&q| CorrelationSumCurve {
            q,
            radii: radii.clone(),
            values: Vec::with_capacity(radii.len()),
            excluded: Vec::with_capacity(radii.len()),
        })
        .collect();
    let mut d1_points: Vec<(f64, f64, usize)> = Vec::new();
    for &r in &radii {
        let counts = punctured_counts(m.values(), r);
        for curve in curves.iter_mut() {
            if curve.q == 1.0 {
                continue;
            }
            let (v, e) = corr_sum_from_counts(&counts, curve.q);
            curve.values.push(v);
            curve.excluded.push(e);
        }
        if qs.contains(&1.0) {
            let (v, e) = mean_log_mass(&counts);
            d1_points.push((r, v, e));
        }
    }
    Ok(qs
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            if q == 1.0 {
                fit_d1(&d1_points, m.len())
            } else {
                let mut curve = CorrelationSumCurve {
                    q,
                    radii: radii.clone(),
                    values: Vec::new(),
                    excluded: Vec::new(),
                };
                std::mem::swap(&mut curve.values, &mut curves[i].values);
                std::mem::swap(&mut curve.excluded, &mut curves[i].excluded);
                fit_from_curve(&curve, m.len())
            }
        })
        .collect())
}

/// Mean of log m_i(r) over points with nonempty punctured balls.
fn mean_log_mass(counts: &[u32]) -> (f64, usize) {
    let n = counts.len();
    let denom = (n - 1) as f64;
    let mut sum = 0.0;
    let mut excluded = 0usize;
    for &c in counts {
        if c == 0 {
            excluded += 1;
        } else {
            sum += (c as f64 / denom).ln();
        }
    }
    let included = n - excluded;
    let value = if included > 0 {
        sum / included as f64
    } else {
        f64::NAN
    };
    (value, excluded)
}

fn fit_d1(points: &[(f64, f64, usize)], n: usize) -> DqEstimate {
    let r_max = points.first().map(|p| p.0).unwrap_or(f64::NAN);
    let r_min = points.last().map(|p| p.0).unwrap_or(f64::NAN);
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    let mut max_excluded = 0usize;
    for &(r, v, e) in points {
        max_excluded = max_excluded.max(e);
        if v.is_finite() {
            xs.push(r.ln());
            ys.push(v);
        }
    }
    if xs.len() < 2 {
        return DqEstimate {
            q: 1.0,
            dq: f64::NAN,
            fit_r2: 0.0,
            r_min,
            r_max,
            excluded_frac: max_excluded as f64 / n as f64,
            poor_fit: true,
        };
    }
    let (slope, _, r2) = least_squares(&xs, &ys);
    let excluded_frac = max_excluded as f64 / n as f64;
    DqEstimate {
        q: 1.0,
        dq: slope,
        fit_r2: r2,
        r_min,
        r_max,
        excluded_frac,
        poor_fit: r2 < POOR_FIT_R2 || excluded_frac > MAX_EXCLUDED_FRAC,
    }
}

/// Information dimension: slope of the averaged log ball mass against log r.
pub fn estimate_d1(
    m: &SampleSet,
    scale_window: (f64, f64),
    n_radii: usize,
) -> Result<DqEstimate> {
    if m.len() < 2 {
        return Err(Error::DegenerateSample { n: m.len(), min: 2 });
    }
    let radii = geometric_radii(scale_window.0, scale_window.1, n_radii)?;
    let points: Vec<(f64, f64, usize)> = radii
        .iter()
        .map(|&r| {
            let counts = punctured_counts(m.values(), r);
            let (v, e) = mean_log_mass(&counts);
            (r, v, e)
        })
        .collect();
    Ok(fit_d1(&points, m.len()))
}

/// Scaling exponent of the empirical mass of balls around a query point x
/// (x itself is not a sample, so nothing is excluded from the counts).
/// Radii must be positive and strictly decreasing.
pub fn local_dimension(m: &SampleSet, x: f64, radii: &[f64]) -> Result<LocalDimensionEstimate> {
    if radii.len() < 2 {
        return Err(Error::InvalidWindow(format!(
            "need at least 2 radii, got {}",
            radii.len()
        )));
    }
    for w in radii.windows(2) {
        if !(w[0] > w[1] && w[1] > 0.0) {
            return Err(Error::InvalidWindow(
                "radii must be positive and strictly decreasing".into(),
            ));
        }
    }
    let smallest = *radii.last().unwrap();
    let (lo, hi) = ball_range(m.values(), x, smallest);
    if hi == lo {
        return Err(Error::EmptyBall {
            center: x,
            radius: smallest,
        });
    }
    let n = m.len() as f64;
    let mut xs = Vec::with_capacity(radii.len());
    let mut ys = Vec::with_capacity(radii.len());
    for &r in radii {
        let (lo, hi) = ball_range(m.values(), x, r);
        xs.push(r.ln());
        ys.push(((hi - lo) as f64 / n).ln());
    }
    let (slope, _, _) = least_squares(&xs, &ys);
    Ok(LocalDimensionEstimate {
        x,
        d: slope,
        radii: radii.to_vec(),
    })
}

/// Closed-form generalized dimensions for an absolutely continuous measure
/// whose density is bounded away from zero with at most countably many
/// inverse-square-root poles: 1 below q = 2, then q / (2(q-1)).
pub fn dq_bc_analytic(q: f64) -> f64 {
    if q < 2.0 {
        1.0
    } else {
        q / (2.0 * (q - 1.0))
    }
}

/// Reference measures with known dimension spectra, for estimator tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Lebesgue on [0, 1].
    Uniform,
    /// A single atom, repeated.
    Dirac,
    /// Uniform self-similar measure on the middle-thirds set: 40 random
    /// base-3 digits drawn from {0, 2}.
    Cantor3,
    /// x = cos(pi U) with U uniform: density 1/(pi sqrt(1-x^2)).
    Arcsine,
}

impl OracleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleKind::Uniform => "uniform",
            OracleKind::Dirac => "dirac",
            OracleKind::Cantor3 => "cantor3",
            OracleKind::Arcsine => "arcsine",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "uniform" => Some(OracleKind::Uniform),
            "dirac" => Some(OracleKind::Dirac),
            "cantor3" => Some(OracleKind::Cantor3),
            "arcsine" => Some(OracleKind::Arcsine),
            _ => None,
        }
    }
}

/// Deterministic seeded samples from one of the oracle measures.
pub fn oracle_samples(kind: OracleKind, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::DegenerateSample { n: 0, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = match kind {
        OracleKind::Uniform => (0..n).map(|_| rng.gen::<f64>()).collect(),
        OracleKind::Dirac => {
            let atom = 2.0 * rng.gen::<f64>() - 1.0;
            vec![atom; n]
        }
        OracleKind::Cantor3 => (0..n)
            .map(|_| {
                let mut x = 0.0;
                for _ in 0..40 {
                    let digit = if rng.gen::<bool>() { 2.0 } else { 0.0 };
                    x = (x + digit) / 3.0;
                }
                x
            })
            .collect(),
        OracleKind::Arcsine => (0..n)
            .map(|_| (std::f64::consts::PI * rng.gen::<f64>()).cos())
            .collect(),
    };
    SampleSet::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn correlation_sum_hand_cases() {
        let two = SampleSet::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(correlation_sum(&two, 2.0, 0.5).unwrap(), 0.0);
        assert_eq!(correlation_sum(&two, 2.0, 1.0).unwrap(), 1.0);

        let three = SampleSet::new(vec![0.0, 0.5, 1.0]).unwrap();
        let v = correlation_sum(&three, 2.0, 0.6).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);

        let identical = SampleSet::new(vec![0.3; 50]).unwrap();
        for q in [-2.0, 0.0, 2.0, 5.0] {
            assert_eq!(correlation_sum(&identical, q, 0.1).unwrap(), 1.0);
        }

        let single = SampleSet::new(vec![0.3]).unwrap();
        assert!(correlation_sum(&single, 2.0, 0.1).is_err());
        assert!(correlation_sum(&two, 2.0, 0.0).is_err());
    }

    #[test]
    fn counts_match_brute_force_including_boundary_radii() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..30 {
            let n = rng.gen_range(2..120);
            let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // Inject duplicates.
            if n > 4 {
                values[1] = values[0];
                values[3] = values[2];
            }
            let m = SampleSet::new(values.clone()).unwrap();
            // Radii include exact pairwise distances to stress the boundary.
            let mut radii = vec![rng.gen_range(1e-6..2.0), 1e-9];
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                let d = (values[i] - values[j]).abs();
                if d > 0.0 {
                    radii.push(d);
                }
            }
            for r in radii {
                for q in [-2.0, 0.0, 2.0, 3.0] {
                    let fast = correlation_sum(&m, q, r).unwrap();
                    let slow = brute_force_corr_sum(m.values(), q, r);
                    assert!(
                        fast == slow || (fast.is_nan() && slow.is_nan()),
                        "q={q} r={r}: {fast} vs {slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn uniform_dimension_close_to_one() {
        let m = oracle_samples(OracleKind::Uniform, 100_000, 42).unwrap();
        let est = estimate_dq(&m, 2.0, default_scale_window(&m), 16).unwrap();
        assert!((est.dq - 1.0).abs() < 0.03, "{}", est.dq);
        assert!(!est.poor_fit);
    }

    #[test]
    fn cantor_dimension_close_to_log2_over_log3() {
        let target = 2f64.ln() / 3f64.ln();
        let m = oracle_samples(OracleKind::Cantor3, 100_000, 43).unwrap();
        let window = (1e-4 * m.span(), 0.1 * m.span());
        for q in [-2.0, 0.0, 2.0] {
            let est = estimate_dq(&m, q, window, 16).unwrap();
            assert!((est.dq - target).abs() < 0.05, "q={q}: {}", est.dq);
        }
    }

    #[test]
    fn arcsine_dimension_at_q_four() {
        let m = oracle_samples(OracleKind::Arcsine, 1_000_000, 44).unwrap();
        let window = (1e-4 * m.span(), 0.1 * m.span());
        let est = estimate_dq(&m, 4.0, window, 16).unwrap();
        assert!((est.dq - dq_bc_analytic(4.0)).abs() < 0.07, "{}", est.dq);
    }

    #[test]
    fn information_dimension_oracles() {
        let u = oracle_samples(OracleKind::Uniform, 100_000, 45).unwrap();
        let est = estimate_d1(&u, default_scale_window(&u), 16).unwrap();
        assert!((est.dq - 1.0).abs() < 0.03, "{}", est.dq);

        let c = oracle_samples(OracleKind::Cantor3, 100_000, 46).unwrap();
        let est = estimate_d1(&c, (1e-4 * c.span(), 0.1 * c.span()), 16).unwrap();
        assert!((est.dq - 2f64.ln() / 3f64.ln()).abs() < 0.05, "{}", est.dq);

        let d = oracle_samples(OracleKind::Dirac, 1_000, 47).unwrap();
        let est = estimate_d1(&d, (1e-3, 0.1), 8).unwrap();
        assert_eq!(est.dq, 0.0);
    }

    #[test]
    fn spectrum_shares_counts_and_matches_single_estimates() {
        let m = oracle_samples(OracleKind::Uniform, 20_000, 48).unwrap();
        let window = default_scale_window(&m);
        let spectrum = estimate_dq_spectrum(&m, &[-2.0, 0.0, 1.0, 2.0], window, 12).unwrap();
        for est in &spectrum {
            let alone = if est.q == 1.0 {
                estimate_d1(&m, window, 12).unwrap()
            } else {
                estimate_dq(&m, est.q, window, 12).unwrap()
            };
            assert_eq!(est.dq, alone.dq);
            assert_eq!(est.fit_r2, alone.fit_r2);
        }
        // Monotone in q within the estimation tolerance.
        for pair in spectrum.windows(2) {
            assert!(pair[1].dq <= pair[0].dq + 0.05);
        }
    }

    #[test]
    fn local_dimension_oracles() {
        let radii = geometric_radii(2e-4, 2e-2, 12).unwrap();

        let u = oracle_samples(OracleKind::Uniform, 1_000_000, 49).unwrap();
        let est = local_dimension(&u, 0.5, &radii).unwrap();
        assert!((est.d - 1.0).abs() < 0.05, "{}", est.d);

        let a = oracle_samples(OracleKind::Arcsine, 1_000_000, 50).unwrap();
        // Density pole at the edge: mass of B(1, r) scales like sqrt(r).
        let pole = local_dimension(&a, 1.0, &radii).unwrap();
        assert!((pole.d - 0.5).abs() < 0.05, "{}", pole.d);
        // Smooth positive density at the center.
        let smooth = local_dimension(&a, 0.0, &radii).unwrap();
        assert!((smooth.d - 1.0).abs() < 0.05, "{}", smooth.d);
    }

    #[test]
    fn local_dimension_empty_ball() {
        let m = SampleSet::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            local_dimension(&m, 0.5, &[0.2, 0.1]),
            Err(Error::EmptyBall { .. })
        ));
        assert!(local_dimension(&m, 0.5, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn bc_analytic_branch_values() {
        assert_eq!(dq_bc_analytic(0.0), 1.0);
        assert_eq!(dq_bc_analytic(2.0), 1.0);
        assert!((dq_bc_analytic(4.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn oracle_sampler_properties() {
        let d = oracle_samples(OracleKind::Dirac, 100, 1).unwrap();
        assert!(d.values().iter().all(|&v| v == d.values()[0]));

        let n = 100_000;
        let a = oracle_samples(OracleKind::Arcsine, n, 2).unwrap();
        assert!(a.mean().abs() < 3.0 / (n as f64).sqrt());

        let c = oracle_samples(OracleKind::Cantor3, 10_000, 3).unwrap();
        for &x in c.values() {
            assert!(
                x <= 1.0 / 3.0 + 1e-9 || x >= 2.0 / 3.0 - 1e-9,
                "sample {x} in the removed middle third"
            );
        }

        let s1 = oracle_samples(OracleKind::Uniform, 1_000, 7).unwrap();
        let s2 = oracle_samples(OracleKind::Uniform, 1_000, 7).unwrap();
        assert_eq!(s1.values(), s2.values());
    }

    #[test]
    fn q_one_is_rejected_by_the_power_law_estimator() {
        let m = oracle_samples(OracleKind::Uniform, 1_000, 5).unwrap();
        assert!(estimate_dq(&m, 1.0, (1e-3, 0.1), 8).is_err());
    }

    #[test]
    fn curve_values_bounded_and_monotone_for_q_at_least_one() {
        let m = oracle_samples(OracleKind::Arcsine, 5_000, 21).unwrap();
        let radii = geometric_radii(1e-4, 0.5, 12).unwrap();
        for q in [1.0, 2.0, 4.0] {
            let curve = correlation_sum_curve(&m, q, &radii).unwrap();
            for pair in curve.values.windows(2) {
                // Radii decrease, so values may only shrink.
                assert!(pair[1] <= pair[0]);
            }
            for &v in &curve.values {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn negative_q_exclusions_above_one_percent_flag_the_fit() {
        // Paired points plus 5% isolated singletons: at small radii every
        // singleton has an empty punctured ball, which a negative-q average
        // silently drops, so the estimate is flagged.
        let mut values = Vec::new();
        for i in 0..950 {
            let base = i as f64;
            values.push(base);
            values.push(base + 1e-6);
        }
        for i in 0..100 {
            values.push(2000.0 + 10.0 * i as f64);
        }
        let m = SampleSet::new(values).unwrap();
        let est = estimate_dq(&m, -2.0, (1e-5, 1e-3), 8).unwrap();
        assert!(est.excluded_frac > MAX_EXCLUDED_FRAC);
        assert!(est.poor_fit);
    }

    #[test]
    fn kinked_scaling_flags_a_poor_fit() {
        // Half the mass in a microscopic cluster, half spread out: the
        // correlation sum is flat at small radii and rises at large ones,
        // which no single power law fits.
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let mut values: Vec<f64> = (0..2_000).map(|_| rng.gen::<f64>() * 1e-6).collect();
        values.extend((0..2_000).map(|_| 0.5 + 0.5 * rng.gen::<f64>()));
        let m = SampleSet::new(values).unwrap();
        let est = estimate_dq(&m, 2.0, (1e-5, 0.3), 16).unwrap();
        assert!(est.fit_r2 < POOR_FIT_R2, "r2 = {}", est.fit_r2);
        assert!(est.poor_fit);
    }
}
