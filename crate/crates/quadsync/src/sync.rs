//! Closed-form synchronization bounds for the coupled pair and their
//! empirical verification along generated trajectories.
//!
//! Writing D = |c1 - c2| and d_n = |x_n - y_n|, one step of the coupled
//! update gives d_{n+1} <= (1-k) D + 4 c1 (1-k) d_n. When 4 c1 (1-k) < 1 the
//! iterated bound converges to the tail bound
//! W_inf(k) = D (1-k) / (1 - 4 c1 (1-k)), while a single step alone already
//! yields the crude bound d_n <= (1-k)(c1 + c2) for every n >= 1.

use crate::error::{Error, Result};
use crate::maps::{CoupledTrajectory, SkewSystem};

/// Outcome of checking the tail bound along one generated trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncBoundReport {
    /// Smallest admissible coupling, 1 - 1/(4 c1).
    pub k_threshold: f64,
    /// Geometric tail bound W_inf(k).
    pub w_inf: f64,
    /// One-step bound (1-k)(c1 + c2).
    pub crude_bound: f64,
    /// Maximum of |x_n - y_n| over the tail n >= tail_start.
    pub empirical_limsup: f64,
    /// Number of tail samples the maximum was taken over.
    pub n_used: usize,
}

impl SyncBoundReport {
    /// Whether the observed tail maximum respects the bound up to `slack`.
    pub fn bound_holds(&self, slack: f64) -> bool {
        self.empirical_limsup <= self.w_inf + slack
    }
}

/// The coupling threshold 1 - 1/(4 c1). Below it the geometric series behind
/// the tail bound diverges. May be negative, in which case every k in [0, 1]
/// is admissible.
pub fn coupling_threshold(c1: f64) -> Result<f64> {
    if !(c1 > 0.0 && c1 <= 1.0) {
        return Err(Error::OutOfDomain {
            name: "c1",
            value: c1,
            domain: "(0, 1]",
        });
    }
    Ok(1.0 - 1.0 / (4.0 * c1))
}

/// The tail bound W_inf(k) = |c1 - c2| (1-k) / (1 - 4 c1 (1-k)).
///
/// Requires k strictly above [`coupling_threshold`]; otherwise the defining
/// series diverges and [`Error::BoundInvalid`] is returned.
pub fn w_infinity(c1: f64, c2: f64, k: f64) -> Result<f64> {
    if !(c2 > 0.0 && c2 <= 1.0) {
        return Err(Error::OutOfDomain {
            name: "c2",
            value: c2,
            domain: "(0, 1]",
        });
    }
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::OutOfDomain {
            name: "k",
            value: k,
            domain: "[0, 1]",
        });
    }
    let threshold = coupling_threshold(c1)?;
    if k <= threshold {
        return Err(Error::BoundInvalid { k, threshold });
    }
    Ok((c1 - c2).abs() * (1.0 - k) / (1.0 - (1.0 - k) * 4.0 * c1))
}

/// The one-step bound (1-k)(c1 + c2), valid for every n >= 1 and every k.
pub fn crude_bound(c1: f64, c2: f64, k: f64) -> f64 {
    (1.0 - k) * (c1 + c2)
}

/// Pointwise separation |x_n - y_n| along a trajectory.
pub fn delta_series(traj: &CoupledTrajectory) -> Vec<f64> {
    traj.xs
        .iter()
        .zip(&traj.ys)
        .map(|(x, y)| (x - y).abs())
        .collect()
}

/// Compare the tail maximum of |x_n - y_n| (n >= tail_start) against the
/// closed-form bounds. Fails with [`Error::BoundInvalid`] when k is below the
/// coupling threshold.
pub fn verify_limsup_bound(
    sys: &SkewSystem,
    traj: &CoupledTrajectory,
    tail_start: usize,
) -> Result<SyncBoundReport> {
    if traj.is_empty() || tail_start >= traj.len() {
        return Err(Error::OutOfDomain {
            name: "tail_start",
            value: tail_start as f64,
            domain: "[0, trajectory length)",
        });
    }
    let w_inf = w_infinity(sys.c1(), sys.c2(), sys.k())?;
    let tail_max = traj.xs[tail_start..]
        .iter()
        .zip(&traj.ys[tail_start..])
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    Ok(SyncBoundReport {
        k_threshold: coupling_threshold(sys.c1())?,
        w_inf,
        crude_bound: crude_bound(sys.c1(), sys.c2(), sys.k()),
        empirical_limsup: tail_max,
        n_used: traj.len() - tail_start,
    })
}
