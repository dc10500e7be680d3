//! Legendre-transform machinery for dimension spectra and a two-branch affine
//! Cantor model whose singularity spectrum is available in closed form.
//!
//! The model is a piecewise expanding map with two surviving affine branches
//! of slopes e^lambda0 and e^lambda2. The potential u = -log|T'| has pressure
//! p = log(e^-lambda0 + e^-lambda2) on the surviving Cantor set K, and a
//! density exponent alpha in (0, -p) turns the level sets of the Lyapunov
//! exponent into level sets of the local dimension.

use crate::error::{Error, Result};

/// Finite set of (alpha, f(alpha)) points: local dimension against the
/// Hausdorff dimension of its level set.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularitySpectrum {
    points: Vec<(f64, f64)>,
}

impl SingularitySpectrum {
    /// Requires at least one point, finite alpha > 0, and f in [0, 1].
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidModel(
                "singularity spectrum needs at least one point".into(),
            ));
        }
        for &(alpha, f) in &points {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::OutOfDomain {
                    name: "alpha",
                    value: alpha,
                    domain: "(0, inf)",
                });
            }
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::OutOfDomain {
                    name: "f",
                    value: f,
                    domain: "[0, 1]",
                });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// D_q from the spectrum: inf over points of (q alpha - f(alpha)), divided by
/// (q - 1). Undefined at q = 1.
pub fn legendre_dq(spec: &SingularitySpectrum, q: f64) -> f64 {
    assert!(q != 1.0, "the Legendre form of D_q is undefined at q = 1");
    let inf = spec
        .points
        .iter()
        .map(|&(alpha, f)| q * alpha - f)
        .fold(f64::INFINITY, f64::min);
    inf / (q - 1.0)
}

/// Pressure of u = -log|T'| on the two surviving branches:
/// log(e^-lambda0 + e^-lambda2). Must come out negative for the Cantor set to
/// carry a finite Gibbs measure of the kind the model needs.
pub fn pressure(lambda0: f64, lambda2: f64) -> Result<f64> {
    for (name, l) in [("lambda0", lambda0), ("lambda2", lambda2)] {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::OutOfDomain {
                name,
                value: l,
                domain: "(0, inf)",
            });
        }
    }
    let p = ((-lambda0).exp() + (-lambda2).exp()).ln();
    if p >= 0.0 {
        return Err(Error::InvalidModel(format!(
            "pressure {p} is not negative; the branch expansions are too weak"
        )));
    }
    Ok(p)
}

/// Two affine expanding branches with exponents lambda0, lambda2 > 0 and a
/// density exponent alpha in (0, -p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCantorModel {
    lambda0: f64,
    lambda2: f64,
    alpha: f64,
    p: f64,
}

impl AffineCantorModel {
    pub fn new(lambda0: f64, lambda2: f64, alpha: f64) -> Result<Self> {
        let p = pressure(lambda0, lambda2)?;
        if !(alpha > 0.0 && alpha < -p) {
            return Err(Error::InvalidModel(format!(
                "alpha = {alpha} must lie in (0, {})",
                -p
            )));
        }
        Ok(Self {
            lambda0,
            lambda2,
            alpha,
            p,
        })
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn pressure(&self) -> f64 {
        self.p
    }

    /// The reachable Lyapunov exponents [min, max] of the two branches.
    pub fn lambda_interval(&self) -> (f64, f64) {
        (
            self.lambda0.min(self.lambda2),
            self.lambda0.max(self.lambda2),
        )
    }

    fn check_lambda(&self, lambda: f64) -> Result<()> {
        let (lo, hi) = self.lambda_interval();
        if lambda >= lo && lambda <= hi {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                name: "lambda",
                value: lambda,
                domain: "[min(lambda0, lambda2), max(lambda0, lambda2)]",
            })
        }
    }

    /// Hausdorff dimension g(lambda) of the set of points with local
    /// exponent lambda: writing lambda = t lambda0 + (1-t) lambda2, the level
    /// set carries a Bernoulli measure of full dimension H(t)/lambda.
    pub fn lyapunov_spectrum_g(&self, lambda: f64) -> Result<f64> {
        self.check_lambda(lambda)?;
        if self.lambda0 == self.lambda2 {
            return Ok(std::f64::consts::LN_2 / self.lambda0);
        }
        let t = (lambda - self.lambda2) / (self.lambda0 - self.lambda2);
        Ok(binary_entropy(t) / lambda)
    }

    /// Local dimension 1 + (p + alpha)/lambda of the measure on the level set
    /// of lambda; strictly below 1 since alpha < -p.
    pub fn local_dimension(&self, lambda: f64) -> Result<f64> {
        self.check_lambda(lambda)?;
        Ok(1.0 + (self.p + self.alpha) / lambda)
    }

    /// The singularity spectrum on a lambda grid, plus the point (1, 1)
    /// contributed by the complement of the Cantor set, where the density is
    /// continuous.
    pub fn spectrum(&self, n_lambda: usize) -> Result<SingularitySpectrum> {
        if n_lambda == 0 {
            return Err(Error::OutOfDomain {
                name: "n_lambda",
                value: 0.0,
                domain: "[1, ..)",
            });
        }
        let (lo, hi) = self.lambda_interval();
        let lambdas: Vec<f64> = if lo == hi {
            vec![lo]
        } else if n_lambda == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..n_lambda)
                .map(|j| {
                    if j == n_lambda - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * j as f64 / (n_lambda - 1) as f64
                    }
                })
                .collect()
        };
        let mut points = Vec::with_capacity(lambdas.len() + 1);
        for lambda in lambdas {
            points.push((self.local_dimension(lambda)?, self.lyapunov_spectrum_g(lambda)?));
        }
        points.push((1.0, 1.0));
        SingularitySpectrum::new(points)
    }

    /// D_q over a grid of q values, through the Legendre transform of the
    /// model spectrum. Skips nothing: the caller keeps q = 1 out of the grid.
    pub fn dq_curve(&self, q_grid: &[f64], n_lambda: usize) -> Result<Vec<(f64, f64)>> {
        let spec = self.spectrum(n_lambda)?;
        Ok(q_grid
            .iter()
            .map(|&q| (q, legendre_dq(&spec, q)))
            .collect())
    }
}

fn binary_entropy(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        -t * t.ln() - (1.0 - t) * (1.0 - t).ln()
    }
}
