use super::newton::{newton, Coloring, NewtonReport, NonlinearSystem};
use super::residual::{assemble_residual, LowerFace, SlabContext, UpperFace};
use super::{Discretization, Layout, MeshConfig, SlabSolution, SolverConfig, TemporalState, MAX_GLOBAL_UNKNOWNS};
use crate::error::{Error, Result};
use crate::problems::ProblemSpec;
use crate::systems::euler1d::{Euler1D, State};

/// Result of time marching: the initial interpolant and every slab.
#[derive(Debug, Clone)]
pub struct Run {
    pub disc: Discretization,
    pub cfg: SolverConfig,
    pub problem: ProblemSpec,
    /// Nodal interpolant of the initial data, ordered by `(element, node)`.
    pub initial: Vec<State>,
    pub slabs: Vec<SlabSolution>,
    pub newton: Vec<NewtonReport>,
}

impl Run {
    pub fn final_state(&self) -> Vec<State> {
        self.slabs
            .last()
            .map(|s| s.end())
            .unwrap_or_else(|| self.initial.clone())
    }
}

fn level_of(layout: &Layout, u: &[f64], sigma: usize) -> Vec<State> {
    let start = layout.index(sigma, 0, 0, 0);
    u[start..start + layout.face_len() * Layout::P]
        .chunks_exact(Layout::P)
        .map(|c| [c[0], c[1], c[2]])
        .collect()
}

/// One slab with upwind coupling to the past states `prev`.
pub struct SlabSystem<'a> {
    pub disc: &'a Discretization,
    pub cfg: &'a SolverConfig,
    pub prev: &'a [State],
    pub slab: usize,
    pub t0: f64,
    pub problem: Option<&'a ProblemSpec>,
}

impl NonlinearSystem for SlabSystem<'_> {
    fn coloring(&self) -> Coloring {
        Coloring::new(self.disc.layout(), 1)
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let ctx = SlabContext {
            slab: self.slab,
            t0: self.t0,
            lower: LowerFace::Upwind(self.prev),
            upper: UpperFace::Upwind,
            problem: self.problem,
        };
        assemble_residual(self.disc, self.cfg, x, &ctx)
    }

    fn slab(&self) -> usize {
        self.slab
    }
}

/// All slabs coupled through entropy-conservative interior interfaces.
struct GlobalSystem<'a> {
    disc: &'a Discretization,
    cfg: &'a SolverConfig,
    initial: &'a [State],
    problem: Option<&'a ProblemSpec>,
}

impl NonlinearSystem for GlobalSystem<'_> {
    fn coloring(&self) -> Coloring {
        Coloring::new(self.disc.layout(), self.disc.mesh.k_t)
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let l = self.disc.layout();
        let n = l.len();
        let kt = self.disc.mesh.k_t;
        let mut out = Vec::with_capacity(x.len());
        for s in 0..kt {
            let u = &x[s * n..(s + 1) * n];
            let prev = (s > 0).then(|| level_of(&l, &x[(s - 1) * n..s * n], l.m1 - 1));
            let next = (s + 1 < kt).then(|| level_of(&l, &x[(s + 1) * n..(s + 2) * n], 0));
            let ctx = SlabContext {
                slab: s,
                t0: self.disc.slab_start(s),
                lower: match &prev {
                    Some(p) => LowerFace::EntropyConservative(p),
                    None => LowerFace::Upwind(self.initial),
                },
                upper: match &next {
                    Some(p) => UpperFace::EntropyConservative(p),
                    None => UpperFace::Upwind,
                },
                problem: self.problem,
            };
            out.extend(assemble_residual(self.disc, self.cfg, u, &ctx)?);
        }
        Ok(out)
    }
}

/// Solves one slab with upwind coupling to `prev_end` (past states at
/// `tau = -1`), starting Newton from `prev_end` at every temporal node.
pub fn solve_slab(
    disc: &Discretization,
    cfg: &SolverConfig,
    prev_end: &[State],
    slab: usize,
    problem: Option<&ProblemSpec>,
) -> Result<(SlabSolution, NewtonReport)> {
    cfg.validate()?;
    let l = disc.layout();
    let t0 = disc.slab_start(slab);
    let guess = SlabSolution::replicate(l, t0, disc.mesh.dt(), prev_end);
    let sys = SlabSystem {
        disc,
        cfg,
        prev: prev_end,
        slab,
        t0,
        problem,
    };
    let (u, report) = newton(&sys, guess.u, cfg)?;
    Ok((
        SlabSolution {
            layout: l,
            t0,
            dt: disc.mesh.dt(),
            u,
        },
        report,
    ))
}

/// Nodal interpolant of the initial data.
pub fn initial_nodal(disc: &Discretization, problem: &ProblemSpec) -> Vec<State> {
    let l = disc.layout();
    (0..l.k_s)
        .flat_map(|k| (0..l.n1).map(move |i| (k, i)))
        .map(|(k, i)| problem.initial(disc.x(k, i)))
        .collect()
}

/// Marches `problem` over all slabs of `disc`.
///
/// Upwind interfaces are solved slab by slab; entropy-conservative interior
/// interfaces couple all slabs into one Newton system.
pub fn march(problem: &ProblemSpec, disc: Discretization, cfg: SolverConfig) -> Result<Run> {
    cfg.validate()?;
    let initial = initial_nodal(&disc, problem);
    for (idx, s) in initial.iter().enumerate() {
        disc.euler
            .decode(s)
            .map_err(|e| Error::Config(format!("initial data inadmissible at node {idx}: {e}")))?;
    }
    let source = problem.has_source().then_some(problem);
    let l = disc.layout();
    let kt = disc.mesh.k_t;
    let (slabs, reports) = match cfg.temporal_state {
        TemporalState::Upwind => {
            let mut slabs = Vec::with_capacity(kt);
            let mut reports = Vec::with_capacity(kt);
            let mut prev = initial.clone();
            for n in 0..kt {
                let (slab, rep) = solve_slab(&disc, &cfg, &prev, n, source)?;
                prev = slab.end();
                slabs.push(slab);
                reports.push(rep);
            }
            (slabs, reports)
        }
        TemporalState::EntropyConservative => {
            let total = l.len() * kt;
            if total > MAX_GLOBAL_UNKNOWNS {
                return Err(Error::Config(format!(
                    "globally coupled solve needs {total} unknowns, limit is {MAX_GLOBAL_UNKNOWNS}"
                )));
            }
            let sys = GlobalSystem {
                disc: &disc,
                cfg: &cfg,
                initial: &initial,
                problem: source,
            };
            let guess: Vec<f64> = (0..kt)
                .flat_map(|_| SlabSolution::replicate(l, 0.0, 0.0, &initial).u)
                .collect();
            let (x, rep) = newton(&sys, guess, &cfg)?;
            let slabs = x
                .chunks_exact(l.len())
                .enumerate()
                .map(|(n, u)| SlabSolution {
                    layout: l,
                    t0: disc.slab_start(n),
                    dt: disc.mesh.dt(),
                    u: u.to_vec(),
                })
                .collect();
            (slabs, vec![rep])
        }
    };
    Ok(Run {
        disc,
        cfg,
        problem: problem.clone(),
        initial,
        slabs,
        newton: reports,
    })
}

/// Builds the discretization from the problem's domain and final time.
pub fn march_with(problem: &ProblemSpec, m: usize, n: usize, k_s: usize, k_t: usize, cfg: SolverConfig) -> Result<Run> {
    let mesh = MeshConfig::new(k_s, k_t, problem.domain, problem.t_final)?;
    let disc = Discretization::new(m, n, mesh, Euler1D::new(problem.system.gamma))?;
    march(problem, disc, cfg)
}
