//! The six experiment runners. Each takes a fully resolved configuration, so
//! a run is a pure function of that configuration; all randomness comes from
//! the seeded generator named in the output metadata.

use quadsync::dimension::{self, OracleKind};
use quadsync::ergodic::{bifurcation_scan, empirical_measure, lyapunov_master, lyapunov_slave};
use quadsync::maps::{QuadraticMap, SkewSystem};
use quadsync::randan::{iterate_noisy, stationary_histogram, NoiseSampler, NoiseVariant};
use quadsync::sync::{coupling_threshold, crude_bound, delta_series, w_infinity};

use crate::config::{run_err, setup_err, CliError};
use crate::output::{Cell, RunOutput, Table};

/// Generator identifier recorded in the metadata of every seeded run.
pub const RNG_ALGORITHM: &str = "chacha8";

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_list(vs: &[f64]) -> String {
    vs.iter().map(|&v| fmt(v)).collect::<Vec<_>>().join(",")
}

pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|j| {
            if j == steps - 1 {
                hi
            } else {
                lo + (hi - lo) * j as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

fn check_unit(name: &str, v: f64) -> Result<(), CliError> {
    if (-1.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {v} must lie in [-1, 1]")))
    }
}

// ---------------------------------------------------------------------------
// sync
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SyncConfig {
    pub n: usize,
    pub c1: f64,
    pub c2: f64,
    pub k_list: Vec<f64>,
    pub x0: f64,
    pub y0: f64,
    pub tail_start: usize,
}

/// One trajectory per coupling; the limsup surrogate is the maximum
/// separation over orbit indices >= tail_start. Couplings below the
/// threshold get an empty bound column and a BOUND_INVALID flag.
pub fn cmd_sync(cfg: &SyncConfig) -> Result<RunOutput, CliError> {
    check_unit("x0", cfg.x0)?;
    check_unit("y0", cfg.y0)?;
    if cfg.tail_start >= cfg.n {
        return Err(CliError::Config(format!(
            "tail_start = {} must be below n = {}",
            cfg.tail_start, cfg.n
        )));
    }
    let mut rows = Vec::new();
    for &k in &cfg.k_list {
        let sys = SkewSystem::new(cfg.c1, cfg.c2, k).map_err(setup_err)?;
        let traj = sys.iterate(cfg.x0, cfg.y0, cfg.n, 0).map_err(run_err)?;
        let deltas = delta_series(&traj);
        let tail_max = deltas[cfg.tail_start..]
            .iter()
            .fold(0.0f64, |m, &d| m.max(d));
        let threshold = coupling_threshold(cfg.c1).map_err(setup_err)?;
        let (w_cell, flag) = match w_infinity(cfg.c1, cfg.c2, k) {
            Ok(w) => (Cell::F(w), ""),
            Err(quadsync::Error::BoundInvalid { .. }) => (Cell::Empty, "BOUND_INVALID"),
            Err(e) => return Err(setup_err(e)),
        };
        rows.push(vec![
            Cell::F(cfg.c1),
            Cell::F(cfg.c2),
            Cell::F(k),
            Cell::F(threshold),
            w_cell,
            Cell::F(crude_bound(cfg.c1, cfg.c2, k)),
            Cell::F(tail_max),
            Cell::U((cfg.n - cfg.tail_start) as u64),
            Cell::Str(flag.to_string()),
        ]);
    }
    Ok(RunOutput {
        command: "sync",
        meta: vec![
            ("n", cfg.n.to_string()),
            ("c1", fmt(cfg.c1)),
            ("c2", fmt(cfg.c2)),
            ("k", fmt_list(&cfg.k_list)),
            ("x0", fmt(cfg.x0)),
            ("y0", fmt(cfg.y0)),
            ("tail_start", cfg.tail_start.to_string()),
        ],
        tables: vec![Table {
            name: "rows",
            columns: &[
                "c1",
                "c2",
                "k",
                "k_threshold",
                "w_inf",
                "crude_bound",
                "empirical_limsup",
                "n_used",
                "flag",
            ],
            rows,
        }],
    })
}

// ---------------------------------------------------------------------------
// lyapunov
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SlaveSpec {
    pub c1: f64,
    pub c2: f64,
    pub k_list: Vec<f64>,
    pub y0: f64,
}

#[derive(Debug, Clone)]
pub struct LyapunovConfig {
    pub n: usize,
    pub burn_in: usize,
    pub c_list: Vec<f64>,
    pub x0: f64,
    /// When present, slave exponents over the k grid are emitted instead of
    /// master exponents over the c grid.
    pub slave: Option<SlaveSpec>,
}

pub fn cmd_lyapunov(cfg: &LyapunovConfig) -> Result<RunOutput, CliError> {
    check_unit("x0", cfg.x0)?;
    let mut rows = Vec::new();
    let mut meta = vec![("n", cfg.n.to_string()), ("burn_in", cfg.burn_in.to_string())];
    match &cfg.slave {
        None => {
            meta.push(("c", fmt_list(&cfg.c_list)));
            meta.push(("x0", fmt(cfg.x0)));
            for &c in &cfg.c_list {
                let map = QuadraticMap::new(c).map_err(setup_err)?;
                let est = lyapunov_master(&map, cfg.x0, cfg.n, cfg.burn_in).map_err(run_err)?;
                rows.push(vec![
                    Cell::F(c),
                    Cell::Empty,
                    Cell::F(est.value),
                    Cell::U(est.n as u64),
                ]);
            }
        }
        Some(slave) => {
            check_unit("y0", slave.y0)?;
            meta.push(("c1", fmt(slave.c1)));
            meta.push(("c2", fmt(slave.c2)));
            meta.push(("k", fmt_list(&slave.k_list)));
            meta.push(("x0", fmt(cfg.x0)));
            meta.push(("y0", fmt(slave.y0)));
            for &k in &slave.k_list {
                let sys = SkewSystem::new(slave.c1, slave.c2, k).map_err(setup_err)?;
                let est =
                    lyapunov_slave(&sys, cfg.x0, slave.y0, cfg.n, cfg.burn_in).map_err(run_err)?;
                rows.push(vec![
                    Cell::F(slave.c1),
                    Cell::F(k),
                    Cell::F(est.value),
                    Cell::U(est.n as u64),
                ]);
            }
        }
    }
    Ok(RunOutput {
        command: "lyapunov",
        meta,
        tables: vec![Table {
            name: "rows",
            columns: &["c", "k", "lambda", "n"],
            rows,
        }],
    })
}

// ---------------------------------------------------------------------------
// bifurcation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BifurcationConfig {
    pub n: usize,
    pub burn_in: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub c_steps: usize,
    pub x0: f64,
    pub keep: usize,
}

pub fn cmd_bifurcation(cfg: &BifurcationConfig) -> Result<RunOutput, CliError> {
    check_unit("x0", cfg.x0)?;
    if !(cfg.c_min > 0.0 && cfg.c_min <= cfg.c_max && cfg.c_max <= 1.0) {
        return Err(CliError::Config(format!(
            "need 0 < c_min <= c_max <= 1, got [{}, {}]",
            cfg.c_min, cfg.c_max
        )));
    }
    if cfg.keep == 0 || cfg.keep > cfg.n {
        return Err(CliError::Config(format!(
            "keep = {} must lie in [1, n = {}]",
            cfg.keep, cfg.n
        )));
    }
    let grid = linspace(cfg.c_min, cfg.c_max, cfg.c_steps);
    let scan = bifurcation_scan(&grid, cfg.x0, cfg.n, cfg.burn_in, cfg.keep).map_err(run_err)?;
    let mut rows = Vec::new();
    for row in &scan {
        for (i, &sample) in row.attractor_samples.iter().enumerate() {
            rows.push(vec![
                Cell::F(row.c),
                Cell::U(i as u64),
                Cell::F(sample),
                Cell::F(row.lyapunov),
                Cell::Str(row.classification.as_str().to_string()),
            ]);
        }
    }
    Ok(RunOutput {
        command: "bifurcation",
        meta: vec![
            ("n", cfg.n.to_string()),
            ("burn_in", cfg.burn_in.to_string()),
            ("c_min", fmt(cfg.c_min)),
            ("c_max", fmt(cfg.c_max)),
            ("c_steps", cfg.c_steps.to_string()),
            ("x0", fmt(cfg.x0)),
            ("keep", cfg.keep.to_string()),
        ],
        tables: vec![Table {
            name: "rows",
            columns: &["c", "sample_idx", "sample", "lambda", "classification"],
            rows,
        }],
    })
}

// ---------------------------------------------------------------------------
// dq
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DqSource {
    Oracle,
    Master,
    Slave,
}

impl DqSource {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "oracle" => Some(DqSource::Oracle),
            "master" => Some(DqSource::Master),
            "slave" => Some(DqSource::Slave),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DqSource::Oracle => "oracle",
            DqSource::Master => "master",
            DqSource::Slave => "slave",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DqConfig {
    pub seed: u64,
    pub n: usize,
    pub burn_in: usize,
    pub source: DqSource,
    pub oracle: OracleKind,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub k: f64,
    pub x0: f64,
    pub y0: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
    /// Window as fractions of the sample span; r_min_frac defaults to n^-0.9.
    pub r_min_frac: Option<f64>,
    pub r_max_frac: f64,
    pub n_radii: usize,
}

pub fn cmd_dq(cfg: &DqConfig) -> Result<RunOutput, CliError> {
    let samples = match cfg.source {
        DqSource::Oracle => dimension::oracle_samples(cfg.oracle, cfg.n, cfg.seed).map_err(run_err)?,
        DqSource::Master => {
            check_unit("x0", cfg.x0)?;
            let map = QuadraticMap::new(cfg.c).map_err(setup_err)?;
            let orbit = map.iterate(cfg.x0, cfg.n, cfg.burn_in).map_err(run_err)?;
            empirical_measure(&orbit).map_err(run_err)?
        }
        DqSource::Slave => {
            check_unit("x0", cfg.x0)?;
            check_unit("y0", cfg.y0)?;
            let sys = SkewSystem::new(cfg.c1, cfg.c2, cfg.k).map_err(setup_err)?;
            let traj = sys
                .iterate(cfg.x0, cfg.y0, cfg.n, cfg.burn_in)
                .map_err(run_err)?;
            empirical_measure(&traj.ys).map_err(run_err)?
        }
    };
    let r_min_frac = cfg
        .r_min_frac
        .unwrap_or_else(|| (samples.len() as f64).powf(-0.9));
    let span = samples.span();
    let window = (r_min_frac * span, cfg.r_max_frac * span);
    let qs = linspace(cfg.q_min, cfg.q_max, cfg.q_steps);
    let estimates =
        dimension::estimate_dq_spectrum(&samples, &qs, window, cfg.n_radii).map_err(run_err)?;
    let rows = estimates
        .iter()
        .map(|e| {
            vec![
                Cell::F(e.q),
                Cell::F(e.dq),
                Cell::F(e.fit_r2),
                Cell::F(e.r_min),
                Cell::F(e.r_max),
                Cell::F(e.excluded_frac),
                Cell::Str(if e.poor_fit { "POOR_FIT".into() } else { String::new() }),
            ]
        })
        .collect();
    let mut meta = vec![
        ("seed", cfg.seed.to_string()),
        ("rng", RNG_ALGORITHM.to_string()),
        ("n", cfg.n.to_string()),
        ("burn_in", cfg.burn_in.to_string()),
        ("source", cfg.source.as_str().to_string()),
    ];
    match cfg.source {
        DqSource::Oracle => meta.push(("oracle", cfg.oracle.as_str().to_string())),
        DqSource::Master => {
            meta.push(("c", fmt(cfg.c)));
            meta.push(("x0", fmt(cfg.x0)));
        }
        DqSource::Slave => {
            meta.push(("c1", fmt(cfg.c1)));
            meta.push(("c2", fmt(cfg.c2)));
            meta.push(("k", fmt(cfg.k)));
            meta.push(("x0", fmt(cfg.x0)));
            meta.push(("y0", fmt(cfg.y0)));
        }
    }
    meta.push(("q_min", fmt(cfg.q_min)));
    meta.push(("q_max", fmt(cfg.q_max)));
    meta.push(("q_steps", cfg.q_steps.to_string()));
    meta.push(("r_min_frac", fmt(r_min_frac)));
    meta.push(("r_max_frac", fmt(cfg.r_max_frac)));
    meta.push(("n_radii", cfg.n_radii.to_string()));
    Ok(RunOutput {
        command: "dq",
        meta,
        tables: vec![Table {
            name: "rows",
            columns: &["q", "dq", "fit_r2", "r_min", "r_max", "excluded_frac", "flag"],
            rows,
        }],
    })
}

// ---------------------------------------------------------------------------
// randan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RandanConfig {
    pub seed: u64,
    pub n: usize,
    pub burn_in: usize,
    pub c2: f64,
    pub k_list: Vec<f64>,
    pub variants: Vec<NoiseVariant>,
    pub bins: usize,
    pub reservoir_n: usize,
    pub x0: f64,
}

pub fn cmd_randan(cfg: &RandanConfig) -> Result<RunOutput, CliError> {
    check_unit("x0", cfg.x0)?;
    if cfg.burn_in >= cfg.n {
        return Err(CliError::Config(format!(
            "burn_in = {} must be below n = {}",
            cfg.burn_in, cfg.n
        )));
    }
    for &k in &cfg.k_list {
        if !(0.0..=1.0).contains(&k) {
            return Err(CliError::Config(format!("k = {k} must lie in [0, 1]")));
        }
    }
    let mut rows = Vec::new();
    for &variant in &cfg.variants {
        for &k in &cfg.k_list {
            let mut sampler = NoiseSampler::build(cfg.c2, cfg.reservoir_n, cfg.burn_in, cfg.seed)
                .map_err(setup_err)?;
            let run = iterate_noisy(&mut sampler, k, cfg.x0, cfg.n, variant).map_err(run_err)?;
            let hist = stationary_histogram(&run, cfg.bins, cfg.burn_in).map_err(run_err)?;
            for i in 0..hist.bins() {
                let (left, right) = hist.bin_edges(i);
                rows.push(vec![
                    Cell::F(left),
                    Cell::F(right),
                    Cell::F(hist.masses[i]),
                    Cell::Str(variant.as_str().to_string()),
                    Cell::F(k),
                    Cell::U(cfg.seed),
                ]);
            }
        }
    }
    Ok(RunOutput {
        command: "randan",
        meta: vec![
            ("seed", cfg.seed.to_string()),
            ("rng", RNG_ALGORITHM.to_string()),
            ("n", cfg.n.to_string()),
            ("burn_in", cfg.burn_in.to_string()),
            ("c2", fmt(cfg.c2)),
            ("k", fmt_list(&cfg.k_list)),
            (
                "variant",
                cfg.variants
                    .iter()
                    .map(|v| v.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("bins", cfg.bins.to_string()),
            ("reservoir_n", cfg.reservoir_n.to_string()),
            ("x0", fmt(cfg.x0)),
        ],
        tables: vec![Table {
            name: "rows",
            columns: &["bin_left", "bin_right", "mass", "variant", "k", "seed"],
            rows,
        }],
    })
}

// ---------------------------------------------------------------------------
// toy
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ToyConfig {
    pub lambda0: f64,
    pub lambda2: f64,
    pub alpha: f64,
    pub n_lambda: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
}

/// Emits two tables: the singularity spectrum (alpha, f) and the D_q curve.
/// q = 1 is outside the Legendre form and is skipped when the grid hits it.
pub fn cmd_toy(cfg: &ToyConfig) -> Result<RunOutput, CliError> {
    let model = quadsync::mfmodels::AffineCantorModel::new(cfg.lambda0, cfg.lambda2, cfg.alpha)
        .map_err(setup_err)?;
    let spectrum = model.spectrum(cfg.n_lambda).map_err(run_err)?;
    let spectrum_rows = spectrum
        .points()
        .iter()
        .map(|&(alpha, f)| vec![Cell::F(alpha), Cell::F(f)])
        .collect();
    let qs: Vec<f64> = linspace(cfg.q_min, cfg.q_max, cfg.q_steps)
        .into_iter()
        .filter(|&q| q != 1.0)
        .collect();
    let dq_rows = model
        .dq_curve(&qs, cfg.n_lambda)
        .map_err(run_err)?
        .into_iter()
        .map(|(q, dq)| vec![Cell::F(q), Cell::F(dq)])
        .collect();
    Ok(RunOutput {
        command: "toy",
        meta: vec![
            ("lambda0", fmt(cfg.lambda0)),
            ("lambda2", fmt(cfg.lambda2)),
            ("alpha", fmt(cfg.alpha)),
            ("n_lambda", cfg.n_lambda.to_string()),
            ("q_min", fmt(cfg.q_min)),
            ("q_max", fmt(cfg.q_max)),
            ("q_steps", cfg.q_steps.to_string()),
        ],
        tables: vec![
            Table {
                name: "spectrum",
                columns: &["alpha", "f"],
                rows: spectrum_rows,
            },
            Table {
                name: "dq",
                columns: &["q", "dq"],
                rows: dq_rows,
            },
        ],
    })
}

