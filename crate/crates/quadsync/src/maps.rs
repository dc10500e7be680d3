//! The quadratic family T(x) = c(1 - 2x^2) on [-1, 1], its derivative, and
//! trajectory generation for the single map and the master/slave coupled pair.

use crate::error::{Error, Result};

/// Rounding slack tolerated before a trajectory value is declared out of range.
/// The mathematics confines every orbit to [-1, 1]; only floating-point noise
/// may leak past the boundary, and never by more than this.
pub const CONFINEMENT_SLACK: f64 = 1e-12;

/// Default number of leading iterates discarded as transient.
pub const DEFAULT_BURN_IN: usize = 10_000;

/// The map x -> c(1 - 2x^2) on [-1, 1] with parameter c in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticMap {
    c: f64,
}

impl QuadraticMap {
    pub fn new(c: f64) -> Result<Self> {
        if c > 0.0 && c <= 1.0 {
            Ok(Self { c })
        } else {
            Err(Error::OutOfDomain {
                name: "c",
                value: c,
                domain: "(0, 1]",
            })
        }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// One application of the map, no domain check. For x in [-1, 1] the
    /// result cannot leave [-1, 1] even after rounding.
    #[inline]
    pub(crate) fn step(&self, x: f64) -> f64 {
        self.c * (1.0 - 2.0 * x * x)
    }

    /// Evaluate T(x) = c(1 - 2x^2).
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit_interval("x", x)?;
        Ok(self.step(x))
    }

    /// Evaluate T'(x) = -4cx.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        check_unit_interval("x", x)?;
        Ok(-4.0 * self.c * x)
    }

    /// Iterate the map, discarding `burn_in` leading iterates, then return the
    /// next `n` iterates: [T^{b+1}(x0), ..., T^{b+n}(x0)].
    pub fn iterate(&self, x0: f64, n: usize, burn_in: usize) -> Result<Vec<f64>> {
        check_unit_interval("x0", x0)?;
        let mut x = x0;
        for step in 0..burn_in {
            x = confine(self.step(x), step)?;
        }
        let mut out = Vec::with_capacity(n);
        for step in 0..n {
            x = confine(self.step(x), burn_in + step)?;
            out.push(x);
        }
        Ok(out)
    }
}

/// The coupled pair: an autonomous master map driving a convexly coupled slave.
///
/// x_{n+1} = c1(1 - 2 x_n^2)
/// y_{n+1} = (1-k) c2(1 - 2 y_n^2) + k c1(1 - 2 x_n^2)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewSystem {
    c1: f64,
    c2: f64,
    k: f64,
}

impl SkewSystem {
    pub fn new(c1: f64, c2: f64, k: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1 <= 1.0) {
            return Err(Error::OutOfDomain {
                name: "c1",
                value: c1,
                domain: "(0, 1]",
            });
        }
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
        Ok(Self { c1, c2, k })
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn master(&self) -> QuadraticMap {
        QuadraticMap { c: self.c1 }
    }

    pub fn slave(&self) -> QuadraticMap {
        QuadraticMap { c: self.c2 }
    }

    /// Generate the coupled orbit, discarding `burn_in` leading steps and
    /// returning the next `n` pairs. The slave update reuses the freshly
    /// computed master image, so at k = 1 the two coordinates agree bit for
    /// bit from the first retained index onward.
    pub fn iterate(&self, x0: f64, y0: f64, n: usize, burn_in: usize) -> Result<CoupledTrajectory> {
        check_unit_interval("x0", x0)?;
        check_unit_interval("y0", y0)?;
        let t1 = self.master();
        let t2 = self.slave();
        let k = self.k;
        let mut x = x0;
        let mut y = y0;
        for step in 0..burn_in {
            let xn = t1.step(x);
            let yn = (1.0 - k) * t2.step(y) + k * xn;
            x = confine(xn, step)?;
            y = confine(yn, step)?;
        }
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for step in 0..n {
            let xn = t1.step(x);
            let yn = (1.0 - k) * t2.step(y) + k * xn;
            x = confine(xn, burn_in + step)?;
            y = confine(yn, burn_in + step)?;
            xs.push(x);
            ys.push(y);
        }
        Ok(CoupledTrajectory {
            xs,
            ys,
            x0,
            y0,
            burn_in,
        })
    }
}

/// A master/slave orbit after burn-in. `xs` and `ys` have equal length and
/// every entry lies in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledTrajectory {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub x0: f64,
    pub y0: f64,
    pub burn_in: usize,
}

impl CoupledTrajectory {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value: x,
            domain: "[-1, 1]",
        })
    }
}

/// Clamp rounding noise back onto the boundary; anything worse is a hard error.
#[inline]
pub(crate) fn confine(x: f64, step: usize) -> Result<f64> {
    if (-1.0..=1.0).contains(&x) {
        Ok(x)
    } else if x > 1.0 && x <= 1.0 + CONFINEMENT_SLACK {
        Ok(1.0)
    } else if (-1.0 - CONFINEMENT_SLACK..-1.0).contains(&x) {
        Ok(-1.0)
    } else {
        Err(Error::ConfinementViolated { value: x, step })
    }
}
