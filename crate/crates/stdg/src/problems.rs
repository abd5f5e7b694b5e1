//! Canned 1D Euler problems on periodic domains.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::systems::euler1d::{Euler1D, State};
use crate::systems::SystemDescriptor;

type SpaceFn = Arc<dyn Fn(f64) -> State + Send + Sync>;
type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> State + Send + Sync>;

/// Initial data, optional exact solution and optional source for one run.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub system: SystemDescriptor,
    pub domain: (f64, f64),
    pub t_final: f64,
    initial: SpaceFn,
    exact: Option<SpaceTimeFn>,
    source: Option<SpaceTimeFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("system", &self.system)
            .field("domain", &self.domain)
            .field("t_final", &self.t_final)
            .field("has_exact", &self.exact.is_some())
            .field("has_source", &self.source.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn initial(&self, x: f64) -> State {
        (self.initial)(x)
    }

    pub fn exact(&self, x: f64, t: f64) -> Option<State> {
        self.exact.as_ref().map(|f| f(x, t))
    }

    pub fn source(&self, x: f64, t: f64) -> Option<State> {
        self.source.as_ref().map(|f| f(x, t))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn has_source(&self) -> bool {
        self.source.is_some()
    }

    pub fn euler(&self) -> Euler1D {
        Euler1D::new(self.system.gamma)
    }

    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }
}

/// Smooth manufactured solution `rho = rho v = phi`, `E = phi^2` with
/// `phi = 2 + sin(2 pi (x - t))` and the source that makes it exact.
pub fn manufactured_euler() -> ProblemSpec {
    manufactured_euler_with_amplitude(1.0)
}

/// [`manufactured_euler`] with `phi = 2 + a sin(2 pi (x - t))`.
pub fn manufactured_euler_with_amplitude(a: f64) -> ProblemSpec {
    let sys = SystemDescriptor::euler1d();
    let gamma = sys.gamma;
    let exact = move |x: f64, t: f64| {
        let phi = 2.0 + a * (2.0 * PI * (x - t)).sin();
        [phi, phi, phi * phi]
    };
    let source = move |x: f64, t: f64| {
        let arg = 2.0 * PI * (x - t);
        let phi = 2.0 + a * arg.sin();
        let px = (gamma - 1.0) * (2.0 * phi - 0.5) * 2.0 * PI * a * arg.cos();
        [0.0, px, px]
    };
    ProblemSpec {
        name: "manufactured",
        system: sys,
        domain: (0.0, 1.0),
        t_final: 1.0,
        initial: Arc::new(move |x| exact(x, 0.0)),
        exact: Some(Arc::new(exact)),
        source: Some(Arc::new(source)),
    }
}

/// Discontinuous density and pressure at `x = 0.3` with the fluid at rest;
/// the interface point takes the left value.
pub fn shock_euler() -> ProblemSpec {
    let sys = SystemDescriptor::euler1d();
    let euler = Euler1D::new(sys.gamma);
    ProblemSpec {
        name: "shock",
        system: sys,
        domain: (0.0, 1.0),
        t_final: 1.0,
        initial: Arc::new(move |x| {
            if x <= 0.3 {
                euler.from_primitive(1.0, 0.0, 1.0)
            } else {
                euler.from_primitive(1.125, 0.0, 1.1)
            }
        }),
        exact: None,
        source: None,
    }
}

/// Density wave `rho = 2 + sin(2 pi (x - t))` advected at `v = 1`, `p = 1`.
pub fn density_wave_euler() -> ProblemSpec {
    let sys = SystemDescriptor::euler1d();
    let euler = Euler1D::new(sys.gamma);
    let exact = move |x: f64, t: f64| euler.from_primitive(2.0 + (2.0 * PI * (x - t)).sin(), 1.0, 1.0);
    ProblemSpec {
        name: "density-wave",
        system: sys,
        domain: (0.0, 1.0),
        t_final: 1.0,
        initial: Arc::new(move |x| exact(x, 0.0)),
        exact: Some(Arc::new(exact)),
        source: None,
    }
}

/// Uniform state, the exact solution for all times.
pub fn constant_euler(u: State) -> ProblemSpec {
    ProblemSpec {
        name: "constant",
        system: SystemDescriptor::euler1d(),
        domain: (0.0, 1.0),
        t_final: 1.0,
        initial: Arc::new(move |_| u),
        exact: Some(Arc::new(move |_, _| u)),
        source: None,
    }
}
