use std::fmt;

/// Location of a nodal state inside a space-time slab.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeLocation {
    pub slab: usize,
    pub sigma: usize,
    pub element: usize,
    pub node: usize,
}

impl fmt::Display for NodeLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "slab {}, temporal node {}, element {}, spatial node {}",
            self.slab, self.sigma, self.element, self.node
        )
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("inadmissible state: {quantity} = {value:e}")]
    Admissibility { quantity: &'static str, value: f64 },

    #[error("operation not supported for {0}")]
    UnsupportedSystem(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("Newton solve did not converge in slab {slab} after {iterations} iterations (residual {residual_norm:e})")]
    NonConvergence {
        slab: usize,
        iterations: usize,
        residual_norm: f64,
    },

    #[error("admissibility lost at {location}")]
    AdmissibilityLoss { location: NodeLocation },
}

pub type Result<T> = std::result::Result<T, Error>;
