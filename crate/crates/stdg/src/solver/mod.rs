//! Space-time DGSEM on a periodic 1D mesh with implicit slab solves.
//!
//! Each slab `[t_n, t_n + dt] x [x_lo, x_hi]` carries nodal unknowns
//! `U[sigma][k][i][c]`: temporal LGL node `sigma` (degree `M`), element `k`,
//! spatial LGL node `i` (degree `N`) and component `c`, flattened in that
//! order. Residual rows are the weak form tested with the nodal basis, so
//! every row carries its quadrature weights.

pub mod march;
pub mod newton;
pub mod residual;

pub use march::{march, march_with, solve_slab, Run};
pub use residual::{
    assemble_residual, decode_nodes, source_term, spatial_surface, spatial_volume, temporal_surface, temporal_volume,
    LowerFace, SlabContext, UpperFace,
};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sbp::{lgl_rule, SbpOperator};
use crate::systems::euler1d::{Euler1D, State};

/// Largest unknown count accepted for the globally coupled solve.
pub const MAX_GLOBAL_UNKNOWNS: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshConfig {
    pub k_s: usize,
    pub k_t: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_final: f64,
}

impl MeshConfig {
    pub fn new(k_s: usize, k_t: usize, domain: (f64, f64), t_final: f64) -> Result<Self> {
        if k_s == 0 || k_t == 0 {
            return Err(Error::Config(format!(
                "element counts must be positive, got K_S={k_s}, K_T={k_t}"
            )));
        }
        if !(domain.1 > domain.0) || !(t_final > 0.0) {
            return Err(Error::Config(format!(
                "need x_hi > x_lo and T > 0, got domain {domain:?}, T={t_final}"
            )));
        }
        Ok(Self {
            k_s,
            k_t,
            x_lo: domain.0,
            x_hi: domain.1,
            t_final,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.k_s as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.k_t as f64
    }

    /// Spatial Jacobian `J = dx / 2`.
    pub fn jac(&self) -> f64 {
        0.5 * self.dx()
    }
}

/// Interface state on temporal slab boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TemporalState {
    #[default]
    Upwind,
    EntropyConservative,
}

/// Numerical flux on spatial element interfaces. The volume term always
/// uses the ECKEP flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpatialFlux {
    Eckep,
    #[default]
    Es,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub temporal_state: TemporalState,
    pub spatial_flux: SpatialFlux,
    /// Tolerance on the max-norm of the weighted residual.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// The line search halves the step until it drops below this fraction.
    pub min_step: f64,
    /// Extra Newton steps taken after the tolerance is met, each kept only
    /// if it lowers the residual.
    pub polish_iterations: usize,
    pub execution: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            temporal_state: TemporalState::Upwind,
            spatial_flux: SpatialFlux::Es,
            newton_tol: 1e-12,
            newton_max_iter: 100,
            min_step: 1.0 / 1024.0,
            polish_iterations: 0,
            execution: Execution::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.newton_tol > 0.0) || self.newton_max_iter == 0 || !(self.min_step > 0.0 && self.min_step <= 1.0) {
            return Err(Error::Config(format!("invalid solver settings {self:?}")));
        }
        Ok(())
    }
}

/// Rules, mesh and equation of state of one run.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub euler: Euler1D,
    pub time: SbpOperator,
    pub space: SbpOperator,
    pub mesh: MeshConfig,
}

impl Discretization {
    pub fn new(m: usize, n: usize, mesh: MeshConfig, euler: Euler1D) -> Result<Self> {
        let time = lgl_rule(m).map_err(|e| Error::Config(format!("temporal degree: {e}")))?;
        let space = lgl_rule(n).map_err(|e| Error::Config(format!("spatial degree: {e}")))?;
        Ok(Self {
            euler,
            time,
            space,
            mesh,
        })
    }

    pub fn layout(&self) -> Layout {
        Layout {
            m1: self.time.len(),
            k_s: self.mesh.k_s,
            n1: self.space.len(),
        }
    }

    /// Physical coordinate of spatial node `i` in element `k`.
    pub fn x(&self, k: usize, i: usize) -> f64 {
        self.x_at(k, self.space.nodes()[i])
    }

    pub fn x_at(&self, k: usize, xi: f64) -> f64 {
        self.mesh.x_lo + (k as f64 + 0.5 * (xi + 1.0)) * self.mesh.dx()
    }

    /// Time of temporal node `sigma` in the slab starting at `t0`.
    pub fn t(&self, t0: f64, sigma: usize) -> f64 {
        t0 + 0.5 * (self.time.nodes()[sigma] + 1.0) * self.mesh.dt()
    }

    /// Start time of slab `n`.
    pub fn slab_start(&self, n: usize) -> f64 {
        n as f64 * self.mesh.dt()
    }
}

/// Index map of one slab's unknowns: `(sigma, element, node, component)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub m1: usize,
    pub k_s: usize,
    pub n1: usize,
}

impl Layout {
    pub const P: usize = 3;

    #[inline]
    pub fn node(&self, sigma: usize, k: usize, i: usize) -> usize {
        (sigma * self.k_s + k) * self.n1 + i
    }

    #[inline]
    pub fn index(&self, sigma: usize, k: usize, i: usize, c: usize) -> usize {
        self.node(sigma, k, i) * Self::P + c
    }

    pub fn nodes(&self) -> usize {
        self.m1 * self.k_s * self.n1
    }

    pub fn len(&self) -> usize {
        self.nodes() * Self::P
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unknowns owned by one element of one slab.
    pub fn element_block(&self) -> usize {
        self.m1 * self.n1 * Self::P
    }

    /// `(sigma, element, node, component)` of a flat index.
    pub fn decode(&self, idx: usize) -> (usize, usize, usize, usize) {
        let c = idx % Self::P;
        let node = idx / Self::P;
        let i = node % self.n1;
        let rest = node / self.n1;
        (rest / self.k_s, rest % self.k_s, i, c)
    }

    /// Spatial nodes per temporal level, `K_S (N+1)`.
    pub fn face_len(&self) -> usize {
        self.k_s * self.n1
    }
}

/// Converged nodal solution on one slab.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabSolution {
    pub layout: Layout,
    pub t0: f64,
    pub dt: f64,
    pub u: Vec<f64>,
}

impl SlabSolution {
    pub fn state(&self, sigma: usize, k: usize, i: usize) -> State {
        let base = self.layout.index(sigma, k, i, 0);
        [self.u[base], self.u[base + 1], self.u[base + 2]]
    }

    /// States at temporal node `sigma`, ordered by `(element, node)`.
    pub fn level(&self, sigma: usize) -> Vec<State> {
        let l = self.layout;
        (0..l.k_s)
            .flat_map(|k| (0..l.n1).map(move |i| (k, i)))
            .map(|(k, i)| self.state(sigma, k, i))
            .collect()
    }

    /// States at `tau = -1`.
    pub fn start(&self) -> Vec<State> {
        self.level(0)
    }

    /// States at `tau = +1`.
    pub fn end(&self) -> Vec<State> {
        self.level(self.layout.m1 - 1)
    }

    /// Slab filled with `face` at every temporal node.
    pub fn replicate(layout: Layout, t0: f64, dt: f64, face: &[State]) -> Self {
        let mut u = Vec::with_capacity(layout.len());
        for _ in 0..layout.m1 {
            for s in face {
                u.extend_from_slice(s);
            }
        }
        Self { layout, t0, dt, u }
    }
}
