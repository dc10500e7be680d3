//! Additive-noise analog of the coupled pair: the driving signal is replaced
//! by i.i.d. draws from a reservoir orbit, giving a random dynamical system
//! with a stationary measure to compare against the deterministic one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ergodic::{density_histogram, Histogram, SampleSet};
use crate::error::{Error, Result};
use crate::maps::{confine, QuadraticMap};

/// Which recursion the noise feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseVariant {
    /// x_{n+1} = k x_n + (1-k) w_n. No map application: k = 1 freezes the
    /// orbit rather than recovering the deterministic dynamics.
    Literal,
    /// y_{n+1} = (1-k) T(y_n) + k w_n, the coupled-update shape with the
    /// driving signal replaced by noise.
    SlaveForm,
}

impl NoiseVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseVariant::Literal => "literal",
            NoiseVariant::SlaveForm => "slave_form",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "literal" => Some(NoiseVariant::Literal),
            "slave_form" => Some(NoiseVariant::SlaveForm),
            _ => None,
        }
    }
}

/// Seeded uniform-with-replacement draws from a reservoir of samples.
/// The reservoir is meant to be a long post-burn-in orbit, so draws are
/// distributed like the orbit's empirical measure but mutually independent.
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    map: QuadraticMap,
    reservoir: SampleSet,
    rng: ChaCha8Rng,
    seed: u64,
}

impl NoiseSampler {
    /// Reservoir = a post-burn-in orbit of the map with parameter c2, started
    /// from a seed-derived initial condition.
    pub fn build(c2: f64, n: usize, burn_in: usize, seed: u64) -> Result<Self> {
        let map = QuadraticMap::new(c2)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x0 = 2.0 * rng.gen::<f64>() - 1.0;
        let orbit = map.iterate(x0, n, burn_in)?;
        Ok(Self {
            map,
            reservoir: SampleSet::new(orbit)?,
            rng,
            seed,
        })
    }

    /// Wrap an arbitrary reservoir; `map` is the one the slave-form recursion
    /// applies.
    pub fn from_reservoir(map: QuadraticMap, reservoir: SampleSet, seed: u64) -> Self {
        Self {
            map,
            reservoir,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn reservoir(&self) -> &SampleSet {
        &self.reservoir
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// One independent draw from the reservoir.
    pub fn draw(&mut self) -> f64 {
        let i = self.rng.gen_range(0..self.reservoir.len());
        self.reservoir.values()[i]
    }
}

/// A noisy orbit together with the recursion that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyRun {
    pub variant: NoiseVariant,
    pub k: f64,
    pub orbit: Vec<f64>,
    pub seed: u64,
}

/// Drive the chosen recursion for n steps from x0. Every iterate is a convex
/// combination of points of [-1, 1], so the orbit stays confined.
pub fn iterate_noisy(
    sampler: &mut NoiseSampler,
    k: f64,
    x0: f64,
    n: usize,
    variant: NoiseVariant,
) -> Result<NoisyRun> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::OutOfDomain {
            name: "k",
            value: k,
            domain: "[0, 1]",
        });
    }
    if !(-1.0..=1.0).contains(&x0) {
        return Err(Error::OutOfDomain {
            name: "x0",
            value: x0,
            domain: "[-1, 1]",
        });
    }
    let mut orbit = Vec::with_capacity(n);
    let mut x = x0;
    for step in 0..n {
        let w = sampler.draw();
        let next = match variant {
            NoiseVariant::Literal => k * x + (1.0 - k) * w,
            NoiseVariant::SlaveForm => (1.0 - k) * sampler.map.step(x) + k * w,
        };
        x = confine(next, step)?;
        orbit.push(x);
    }
    Ok(NoisyRun {
        variant,
        k,
        orbit,
        seed: sampler.seed,
    })
}

/// Histogram of the post-burn-in part of a noisy orbit over [-1, 1].
pub fn stationary_histogram(run: &NoisyRun, bins: usize, burn_in: usize) -> Result<Histogram> {
    if burn_in >= run.orbit.len() {
        return Err(Error::OutOfDomain {
            name: "burn_in",
            value: burn_in as f64,
            domain: "[0, run length)",
        });
    }
    density_histogram(
        &SampleSet::new(run.orbit[burn_in..].to_vec())?,
        bins,
        (-1.0, 1.0),
    )
}
