//! Fixed-size 1D Euler kernels used by the space-time solver.

use super::ADMISSIBILITY_FLOOR;
use crate::error::{Error, Result};

pub type State = [f64; 3];

/// Decoded nodal state with the derived quantities reused by every
/// two-point evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub rho: f64,
    pub v: f64,
    pub p: f64,
    pub e: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler1D {
    pub gamma: f64,
}

impl Default for Euler1D {
    fn default() -> Self {
        Self {
            gamma: super::DEFAULT_GAMMA,
        }
    }
}

impl Euler1D {
    pub fn new(gamma: f64) -> Self {
        Self { gamma }
    }

    pub fn decode(&self, u: &State) -> Result<Node> {
        let rho = u[0];
        if !(rho > ADMISSIBILITY_FLOOR) || !rho.is_finite() {
            return Err(Error::Admissibility {
                quantity: "density",
                value: rho,
            });
        }
        let v = u[1] / rho;
        let p = (self.gamma - 1.0) * (u[2] - 0.5 * rho * v * v);
        if !(p > ADMISSIBILITY_FLOOR) || !p.is_finite() {
            return Err(Error::Admissibility {
                quantity: "pressure",
                value: p,
            });
        }
        Ok(Node {
            rho,
            v,
            p,
            e: u[2],
            beta: rho / (2.0 * p),
        })
    }

    pub fn from_primitive(&self, rho: f64, v: f64, p: f64) -> State {
        [rho, rho * v, p / (self.gamma - 1.0) + 0.5 * rho * v * v]
    }

    #[inline]
    pub fn flux(&self, n: &Node) -> State {
        [n.rho * n.v, n.rho * n.v * n.v + n.p, n.v * (n.e + n.p)]
    }

    /// Mathematical entropy `s = -rho ln(p rho^-gamma) / (gamma - 1)`.
    #[inline]
    pub fn entropy(&self, n: &Node) -> f64 {
        -n.rho * (n.p.ln() - self.gamma * n.rho.ln()) / (self.gamma - 1.0)
    }

    #[inline]
    pub fn entropy_vars(&self, n: &Node) -> State {
        let varsigma = n.p.ln() - self.gamma * n.rho.ln();
        [
            (self.gamma - varsigma) / (self.gamma - 1.0) - n.beta * n.v * n.v,
            2.0 * n.beta * n.v,
            -2.0 * n.beta,
        ]
    }

    /// Entropy potential `Phi = rho`.
    #[inline]
    pub fn potential(&self, n: &Node) -> f64 {
        n.rho
    }

    #[inline]
    pub fn kinetic_vars(&self, n: &Node) -> State {
        [-0.5 * n.v * n.v, n.v, 0.0]
    }

    #[inline]
    pub fn kinetic_energy(&self, n: &Node) -> f64 {
        0.5 * n.rho * n.v * n.v
    }

    #[inline]
    pub fn wavespeed(&self, n: &Node) -> f64 {
        n.v.abs() + (self.gamma * n.p / n.rho).sqrt()
    }

    /// `H = du/dw`.
    pub fn entropy_jacobian(&self, n: &Node) -> [[f64; 3]; 3] {
        let enth = (n.e + n.p) / n.rho;
        let a2 = self.gamma * n.p / n.rho;
        let m = n.rho * n.v;
        [
            [n.rho, m, n.e],
            [m, m * n.v + n.p, m * enth],
            [n.e, m * enth, n.rho * enth * enth - a2 * n.p / (self.gamma - 1.0)],
        ]
    }
}
