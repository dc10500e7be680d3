//! Empirical measures, Lyapunov-exponent estimators, bifurcation scans,
//! attractor classification, and master/slave measure-distance experiments.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::{QuadraticMap, SkewSystem};
use crate::sync::w_infinity;

/// Classification dead zone for the Lyapunov-exponent sign test.
pub const CLASSIFY_TOL: f64 = 0.01;

/// Two samples closer than this count as the same attractor point.
pub const DISTINCT_RESOLUTION: f64 = 1e-6;

/// Largest distinct-sample count still accepted as a periodic cycle.
pub const MAX_PERIODIC_POINTS: usize = 64;

/// An empirical measure: finitely many samples with equal weight 1/n,
/// kept sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    /// Sorts the input. Rejects empty input and non-finite entries.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DegenerateSample { n: 0, min: 1 });
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::OutOfDomain {
                    name: "sample",
                    value: v,
                    domain: "finite reals",
                });
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn span(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Interpret an orbit as a uniform atomic measure on its points.
pub fn empirical_measure(orbit: &[f64]) -> Result<SampleSet> {
    SampleSet::new(orbit.to_vec())
}

/// A finite-time Lyapunov-exponent estimate, in nats per iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    pub value: f64,
    pub n: usize,
    /// Running averages after each iterate, when recording was requested.
    pub partial_series: Option<Vec<f64>>,
}

/// Average log|T'| = log|-4 c x| over the given points, in order.
fn lyapunov_over(c: f64, points: &[f64], record: bool) -> Result<LyapunovEstimate> {
    if points.is_empty() {
        return Err(Error::DegenerateSample { n: 0, min: 1 });
    }
    let mut series = if record {
        Some(Vec::with_capacity(points.len()))
    } else {
        None
    };
    let mut sum = 0.0;
    for (i, &p) in points.iter().enumerate() {
        let d = (-4.0 * c * p).abs();
        if d < 1e-300 {
            return Err(Error::SingularOrbit { step: i });
        }
        sum += d.ln();
        if let Some(s) = series.as_mut() {
            s.push(sum / (i + 1) as f64);
        }
    }
    Ok(LyapunovEstimate {
        value: sum / points.len() as f64,
        n: points.len(),
        partial_series: series,
    })
}

/// Lyapunov exponent of the master map: the average of log|T'(x_i)| over the
/// post-burn-in orbit of x0.
pub fn lyapunov_master(
    map: &QuadraticMap,
    x0: f64,
    n: usize,
    burn_in: usize,
) -> Result<LyapunovEstimate> {
    let orbit = map.iterate(x0, n, burn_in)?;
    lyapunov_over(map.c(), &orbit, false)
}

/// Same as [`lyapunov_master`], also recording the running averages.
pub fn lyapunov_master_with_series(
    map: &QuadraticMap,
    x0: f64,
    n: usize,
    burn_in: usize,
) -> Result<LyapunovEstimate> {
    let orbit = map.iterate(x0, n, burn_in)?;
    lyapunov_over(map.c(), &orbit, true)
}

/// Empirical slave exponent: the average of log|T'(y_i)| with T' the MASTER
/// map's derivative, evaluated along the slave orbit.
pub fn lyapunov_slave(
    sys: &SkewSystem,
    x0: f64,
    y0: f64,
    n: usize,
    burn_in: usize,
) -> Result<LyapunovEstimate> {
    let traj = sys.iterate(x0, y0, n, burn_in)?;
    lyapunov_over(sys.c1(), &traj.ys, false)
}

/// Same as [`lyapunov_slave`], also recording the running averages.
pub fn lyapunov_slave_with_series(
    sys: &SkewSystem,
    x0: f64,
    y0: f64,
    n: usize,
    burn_in: usize,
) -> Result<LyapunovEstimate> {
    let traj = sys.iterate(x0, y0, n, burn_in)?;
    lyapunov_over(sys.c1(), &traj.ys, true)
}

/// 1-Wasserstein distance between two atomic uniform measures.
///
/// Equal sample counts use the exact sorted-pairing formula
/// (1/n) sum |a_(i) - b_(i)|; unequal counts fall back to integrating
/// |F_a - F_b| over the merged support.
pub fn wasserstein1(a: &SampleSet, b: &SampleSet) -> f64 {
    if a.len() == b.len() {
        let n = a.len() as f64;
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>()
            / n
    } else {
        cdf_area(a.values(), b.values())
    }
}

/// Area between the two empirical CDFs; both inputs sorted.
fn cdf_area(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut acc = 0.0;
    let mut prev = f64::NAN;
    while i < a.len() || j < b.len() {
        let t = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        if prev.is_finite() && t > prev {
            acc += (i as f64 / na - j as f64 / nb).abs() * (t - prev);
        }
        while i < a.len() && a[i] == t {
            i += 1;
        }
        while j < b.len() && b[j] == t {
            j += 1;
        }
        prev = t;
    }
    acc
}

/// One row of the coupling-strength scan: measure distance between the master
/// and slave empirical measures next to the closed-form tail bound. `w_inf`
/// is `None` when k sits below the coupling threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct KScanRow {
    pub k: f64,
    pub w1: f64,
    pub w_inf: Option<f64>,
}

/// For each coupling in `k_grid`, generate a coupled orbit and compare the
/// two marginal empirical measures in 1-Wasserstein distance.
pub fn sync_convergence_scan(
    c1: f64,
    c2: f64,
    k_grid: &[f64],
    x0: f64,
    y0: f64,
    n: usize,
    burn_in: usize,
) -> Result<Vec<KScanRow>> {
    k_grid
        .par_iter()
        .map(|&k| {
            let sys = SkewSystem::new(c1, c2, k)?;
            let traj = sys.iterate(x0, y0, n, burn_in)?;
            let mu = empirical_measure(&traj.xs)?;
            let nu = empirical_measure(&traj.ys)?;
            Ok(KScanRow {
                k,
                w1: wasserstein1(&mu, &nu),
                w_inf: w_infinity(c1, c2, k).ok(),
            })
        })
        .collect()
}

/// Attractor type read off a finite orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractorClass {
    Periodic,
    ChaoticInterval,
    Undetermined,
}

impl AttractorClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            AttractorClass::Periodic => "periodic",
            AttractorClass::ChaoticInterval => "chaotic_interval",
            AttractorClass::Undetermined => "undetermined",
        }
    }
}

/// One parameter value of a bifurcation scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationRow {
    pub c: f64,
    pub attractor_samples: Vec<f64>,
    pub lyapunov: f64,
    pub classification: AttractorClass,
}

/// Count samples that stay distinct at the given resolution (cluster count
/// after sorting).
pub fn distinct_count(samples: &[f64], resolution: f64) -> usize {
    if samples.is_empty() {
        return 0;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut count = 1;
    for w in sorted.windows(2) {
        if w[1] - w[0] > resolution {
            count += 1;
        }
    }
    count
}

/// Sign test on the exponent plus a sample-count check: negative exponent and
/// few distinct samples means a periodic cycle, positive exponent means an
/// interval attractor, anything near zero (including the Cantor case) is left
/// undetermined.
pub fn classify_attractor(lyapunov: f64, samples: &[f64], tol: f64) -> AttractorClass {
    if lyapunov < -tol && distinct_count(samples, DISTINCT_RESOLUTION) <= MAX_PERIODIC_POINTS {
        AttractorClass::Periodic
    } else if lyapunov > tol {
        AttractorClass::ChaoticInterval
    } else {
        AttractorClass::Undetermined
    }
}

/// Scan the parameter grid: per c, keep the last `keep` post-burn-in samples
/// and estimate the Lyapunov exponent from the whole retained orbit.
///
/// A superstable cycle can hit the critical point exactly; that is a genuine
/// periodic attractor, so the exponent is reported as -inf rather than as an
/// error.
pub fn bifurcation_scan(
    c_grid: &[f64],
    x0: f64,
    n: usize,
    burn_in: usize,
    keep: usize,
) -> Result<Vec<BifurcationRow>> {
    c_grid
        .par_iter()
        .map(|&c| {
            let map = QuadraticMap::new(c)?;
            let orbit = map.iterate(x0, n, burn_in)?;
            let lyapunov = match lyapunov_over(c, &orbit, false) {
                Ok(est) => est.value,
                Err(Error::SingularOrbit { .. }) => f64::NEG_INFINITY,
                Err(e) => return Err(e),
            };
            let tail_start = orbit.len().saturating_sub(keep);
            let attractor_samples = orbit[tail_start..].to_vec();
            let classification = classify_attractor(lyapunov, &attractor_samples, CLASSIFY_TOL);
            Ok(BifurcationRow {
                c,
                attractor_samples,
                lyapunov,
                classification,
            })
        })
        .collect()
}

/// Fixed-range histogram of an empirical measure. Masses are normalized by
/// the total sample count, so they sum to 1 exactly when nothing overflows.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub masses: Vec<f64>,
    /// Samples that fell outside [lo, hi].
    pub overflow: usize,
    pub n: usize,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.masses.len()
    }

    /// Left and right edge of bin i.
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let width = (self.hi - self.lo) / self.masses.len() as f64;
        (
            self.lo + width * i as f64,
            self.lo + width * (i + 1) as f64,
        )
    }
}

/// Bin the samples over [range.0, range.1]; the right edge belongs to the
/// last bin.
pub fn density_histogram(m: &SampleSet, bins: usize, range: (f64, f64)) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::OutOfDomain {
            name: "bins",
            value: 0.0,
            domain: "[1, ..)",
        });
    }
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidWindow(format!(
            "histogram range [{lo}, {hi}] is not a proper interval"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut overflow = 0usize;
    for &x in m.values() {
        if x < lo || x > hi {
            overflow += 1;
        } else {
            let idx = (((x - lo) / width) as usize).min(bins - 1);
            counts[idx] += 1;
        }
    }
    let n = m.len();
    Ok(Histogram {
        lo,
        hi,
        masses: counts.iter().map(|&c| c as f64 / n as f64).collect(),
        overflow,
        n,
    })
}
