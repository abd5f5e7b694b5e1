//! Experiment configurations: convergence ladders, the entropy-stability
//! traces and the entropy/kinetic-energy preservation sweeps.

use crate::diagnostics::{entropy_trace, eoc, l2_error, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::problems::{density_wave_euler, manufactured_euler, shock_euler, ProblemSpec};
use crate::solver::march::march_with;
use crate::solver::{SolverConfig, SpatialFlux, TemporalState};

/// A refinement ladder on the manufactured problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder {
    pub name: &'static str,
    pub m: usize,
    pub n: usize,
    /// `(K_T, K_S)` per level, each level refining both by two.
    pub grids: Vec<(usize, usize)>,
}

pub const CONVERGENCE_PRESETS: [&str; 5] = ["table1", "table2", "table3", "table4", "table5"];

/// Looks up a named ladder.
pub fn convergence_preset(name: &str) -> Result<Ladder> {
    let same: Vec<(usize, usize)> = (1..=5).map(|e| (1 << e, 1 << e)).collect();
    let (m, n, grids) = match name {
        "table1" => (2, 2, same),
        "table2" => (2, 2, (1..=5).map(|e| (2 << e, 1 << e)).collect()),
        "table3" => (3, 3, same),
        "table4" => (3, 2, same),
        "table5" => (2, 3, same),
        other => {
            return Err(Error::Config(format!(
                "unknown convergence preset {other:?}, expected one of {CONVERGENCE_PRESETS:?}"
            )))
        }
    };
    let name = CONVERGENCE_PRESETS.iter().find(|p| **p == name).expect("matched above");
    Ok(Ladder { name, m, n, grids })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub k_t: usize,
    pub k_s: usize,
    /// Per-component L2 error, or the solver error of this level.
    pub l2: Result<[f64; 3]>,
    /// Order against the previous row; `None` on the first row or when
    /// either level failed.
    pub eoc: Option<[f64; 3]>,
}

/// Runs every level of `ladder` on `problem`, levels distributed by
/// `ladder_exec`. Rows come back in ladder order; a failed level does not
/// stop the others.
pub fn run_ladder(
    problem: &ProblemSpec,
    ladder: &Ladder,
    cfg: SolverConfig,
    ladder_exec: Execution,
) -> Vec<ConvergenceRow> {
    let results = ladder_exec.map(ladder.grids.len(), |j| {
        let (k_t, k_s) = ladder.grids[j];
        march_with(problem, ladder.m, ladder.n, k_s, k_t, cfg).map(|run| l2_error(&run))
    });
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(results.len());
    for (j, l2) in results.into_iter().enumerate() {
        let (k_t, k_s) = ladder.grids[j];
        let eoc = match (rows.last(), &l2) {
            (Some(prev), Ok(fine)) => prev.l2.as_ref().ok().map(|coarse| {
                let ratio = k_s as f64 / prev.k_s as f64;
                [0, 1, 2].map(|c| eoc(coarse[c], fine[c], ratio))
            }),
            _ => None,
        };
        rows.push(ConvergenceRow { k_t, k_s, l2, eoc });
    }
    rows
}

/// Runs a named ladder on the manufactured problem with default settings.
pub fn run_convergence(name: &str, ladder_exec: Execution) -> Result<Vec<ConvergenceRow>> {
    Ok(run_ladder(
        &manufactured_euler(),
        &convergence_preset(name)?,
        SolverConfig::default(),
        ladder_exec,
    ))
}

pub const ENTROPY_STABILITY_KT: [usize; 3] = [4, 16, 128];
pub const ENTROPY_STABILITY_KS: usize = 4;
pub const ENTROPY_STABILITY_DEGREES: (usize, usize) = (3, 2);

/// `(t, Delta_S(t))` at every slab boundary of the shock run, `t = 0`
/// included.
pub fn entropy_stability_trace(k_t: usize, k_s: usize, m: usize, n: usize) -> Result<Vec<(f64, f64)>> {
    let cfg = SolverConfig {
        spatial_flux: SpatialFlux::Es,
        ..Default::default()
    };
    let run = march_with(&shock_euler(), m, n, k_s, k_t, cfg)?;
    entropy_trace(&run)
}

/// One `(K_T, K_S, M, N)` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub k_t: usize,
    pub k_s: usize,
    pub m: usize,
    pub n: usize,
}

const fn sc(k_t: usize, k_s: usize, m: usize, n: usize) -> SweepConfig {
    SweepConfig { k_t, k_s, m, n }
}

/// The configurations of the entropy and kinetic-energy preservation sweeps.
pub const PRESERVATION_CONFIGS: [SweepConfig; 6] = [
    sc(5, 4, 3, 2),
    sc(4, 5, 2, 3),
    sc(2, 2, 3, 4),
    sc(2, 3, 6, 5),
    sc(2, 2, 5, 3),
    sc(1, 8, 6, 4),
];

/// Entropy-conservative temporal and spatial kernels throughout.
pub fn conservative_config() -> SolverConfig {
    SolverConfig {
        temporal_state: TemporalState::EntropyConservative,
        spatial_flux: SpatialFlux::Eckep,
        ..Default::default()
    }
}

/// Entropy preservation run on the shock problem.
pub fn entropy_conservation(c: SweepConfig) -> Result<DiagnosticsRecord> {
    let run = march_with(&shock_euler(), c.m, c.n, c.k_s, c.k_t, conservative_config())?;
    DiagnosticsRecord::from_run(&run)
}

/// Kinetic-energy preservation run on the density wave.
pub fn kep_check(c: SweepConfig) -> Result<DiagnosticsRecord> {
    let run = march_with(&density_wave_euler(), c.m, c.n, c.k_s, c.k_t, conservative_config())?;
    DiagnosticsRecord::from_run(&run)
}
