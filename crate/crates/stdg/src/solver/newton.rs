//! Damped Newton iteration with a colored finite-difference Jacobian.
//!
//! A residual row of element `k` in slab `n` only depends on unknowns of
//! elements `k-1..=k+1` (periodic) in slabs `n-1..=n+1`. Columns whose
//! dependency stencils are disjoint share one color and are perturbed
//! together, so a Jacobian costs `colors x block` residual evaluations.

use nalgebra::{DMatrix, DVector};

use super::{Layout, SolverConfig};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Column coloring for `slabs` consecutive slabs sharing one layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coloring {
    pub layout: Layout,
    pub slabs: usize,
}

/// Periodic coloring of `count` cells in which equal colors are at cyclic
/// distance at least three.
fn periodic_color(k: usize, count: usize) -> usize {
    if count < 3 {
        return k;
    }
    let full = 3 * (count / 3);
    if k < full {
        k % 3
    } else {
        3 + (k - full)
    }
}

fn periodic_colors(count: usize) -> usize {
    if count < 3 {
        count
    } else {
        3 + count % 3
    }
}

impl Coloring {
    pub fn new(layout: Layout, slabs: usize) -> Self {
        Self { layout, slabs }
    }

    pub fn len(&self) -> usize {
        self.layout.len() * self.slabs
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn slab_colors(&self) -> usize {
        self.slabs.min(3)
    }

    fn elem_colors(&self) -> usize {
        periodic_colors(self.layout.k_s)
    }

    pub fn groups(&self) -> usize {
        self.slab_colors() * self.elem_colors() * self.layout.element_block()
    }

    fn split_group(&self, g: usize) -> (usize, usize, usize) {
        let block = self.layout.element_block();
        let local = g % block;
        let rest = g / block;
        (rest / self.elem_colors(), rest % self.elem_colors(), local)
    }

    /// Flat index of local block entry `local = (sigma, i, c)` in element `k`
    /// of slab `s`.
    fn column(&self, s: usize, k: usize, local: usize) -> usize {
        let l = self.layout;
        let c = local % Layout::P;
        let i = (local / Layout::P) % l.n1;
        let sigma = local / (Layout::P * l.n1);
        s * l.len() + l.index(sigma, k, i, c)
    }

    pub fn group_columns(&self, g: usize) -> Vec<usize> {
        let (sc, ec, local) = self.split_group(g);
        let ks = self.layout.k_s;
        (0..self.slabs)
            .filter(|&s| s % 3 == sc)
            .flat_map(|s| {
                (0..ks)
                    .filter(move |&k| periodic_color(k, ks) == ec)
                    .map(move |k| (s, k))
            })
            .map(|(s, k)| self.column(s, k, local))
            .collect()
    }

    /// The unique column of group `g` that can influence `row`.
    pub fn column_for(&self, row: usize, g: usize) -> Option<usize> {
        let (sc, ec, local) = self.split_group(g);
        let l = self.layout;
        let slab = row / l.len();
        let (_, k, _, _) = l.decode(row % l.len());
        let s = (slab.saturating_sub(1)..=(slab + 1).min(self.slabs - 1)).find(|&s| s % 3 == sc)?;
        let ks = l.k_s;
        let k = [(k + ks - 1) % ks, k, (k + 1) % ks]
            .into_iter()
            .find(|&kk| periodic_color(kk, ks) == ec)?;
        Some(self.column(s, k, local))
    }
}

pub trait NonlinearSystem: Sync {
    fn coloring(&self) -> Coloring;
    fn residual(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// Slab index reported in errors.
    fn slab(&self) -> usize {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub residual_norm: f64,
}

pub fn max_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Forward-difference step for unknown value `x`.
#[inline]
pub fn fd_step(x: f64) -> f64 {
    f64::EPSILON.sqrt() * (1.0 + x.abs())
}

/// Central-difference step for unknown value `x`.
#[inline]
pub fn central_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * (1.0 + x.abs())
}

/// Finite-difference rule for [`fd_jacobian_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Difference {
    #[default]
    Forward,
    Central,
}

/// Dense forward-difference Jacobian of `sys` at `x` with residual
/// `r0 = sys.residual(x)`.
pub fn fd_jacobian<S: NonlinearSystem>(sys: &S, x: &[f64], r0: &[f64], exec: Execution) -> Result<DMatrix<f64>> {
    fd_jacobian_with(sys, x, r0, exec, Difference::Forward)
}

fn shifted(x: &[f64], cols: &[usize], shift: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let mut xp = x.to_vec();
    let mut h = Vec::with_capacity(cols.len());
    for &j in cols {
        xp[j] = shift(x[j]);
        h.push(xp[j] - x[j]);
    }
    (xp, h)
}

/// Residual differences of one color group and `(column, step)` pairs.
type GroupDifference = (Vec<f64>, Vec<(usize, f64)>);

/// Dense Jacobian using `rule`. A perturbation that leaves the admissible
/// set falls back to the one-sided difference on the other side.
pub fn fd_jacobian_with<S: NonlinearSystem>(
    sys: &S,
    x: &[f64],
    r0: &[f64],
    exec: Execution,
    rule: Difference,
) -> Result<DMatrix<f64>> {
    let coloring = sys.coloring();
    let n = coloring.len();
    let groups = coloring.groups();
    let step = match rule {
        Difference::Forward => fd_step,
        Difference::Central => central_step,
    };
    // Each group yields the difference quotient numerator and, per column,
    // the actual denominator.
    let diffs = exec.map(groups, |g| -> Result<GroupDifference> {
        let cols = coloring.group_columns(g);
        let (xp, hp) = shifted(x, &cols, |v| v + step(v));
        let (xm, hm) = shifted(x, &cols, |v| v - step(v));
        let plus = sys.residual(&xp).ok();
        let (num, den): (Vec<f64>, Vec<f64>) = match (rule, plus) {
            (Difference::Central, Some(rp)) => match sys.residual(&xm) {
                Ok(rm) => (
                    rp.iter().zip(&rm).map(|(a, b)| a - b).collect(),
                    hp.iter().zip(&hm).map(|(a, b)| a - b).collect(),
                ),
                Err(_) => (rp.iter().zip(r0).map(|(a, b)| a - b).collect(), hp),
            },
            (Difference::Forward, Some(rp)) => (rp.iter().zip(r0).map(|(a, b)| a - b).collect(), hp),
            (_, None) => {
                let rm = sys.residual(&xm)?;
                (
                    r0.iter().zip(&rm).map(|(a, b)| a - b).collect(),
                    hm.iter().map(|h| -h).collect(),
                )
            }
        };
        Ok((num, cols.into_iter().zip(den).collect()))
    });
    let mut jac = DMatrix::zeros(n, n);
    for (g, diff) in diffs.into_iter().enumerate() {
        let (num, den) = diff?;
        for (row, d) in num.iter().enumerate() {
            if *d == 0.0 {
                continue;
            }
            if let Some(col) = coloring.column_for(row, g) {
                let h = den.iter().find(|(c, _)| *c == col).map(|(_, h)| *h).unwrap_or(f64::NAN);
                jac[(row, col)] = d / h;
            }
        }
    }
    Ok(jac)
}

/// Damped Newton from `x0`; the line search halves the step until the
/// residual is defined (all states admissible) and its max-norm decreases.
pub fn newton<S: NonlinearSystem>(sys: &S, x0: Vec<f64>, cfg: &SolverConfig) -> Result<(Vec<f64>, NewtonReport)> {
    let mut x = x0;
    let mut r = sys.residual(&x)?;
    let mut norm = max_norm(&r);
    let mut iterations = 0;
    let mut polish_left = cfg.polish_iterations;
    let fail = |iterations, residual_norm| Error::NonConvergence {
        slab: sys.slab(),
        iterations,
        residual_norm,
    };
    loop {
        let converged = norm <= cfg.newton_tol;
        if converged && polish_left == 0 {
            break;
        }
        if iterations >= cfg.newton_max_iter {
            if converged {
                break;
            }
            return Err(fail(iterations, norm));
        }
        let jac = fd_jacobian(sys, &x, &r, cfg.execution)?;
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|v| -v));
        let delta = match jac.lu().solve(&rhs) {
            Some(d) => d,
            None if converged => break,
            None => return Err(fail(iterations, norm)),
        };
        iterations += 1;
        let mut alpha = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(xi, di)| xi + alpha * di).collect();
            if let Ok(rt) = sys.residual(&trial) {
                let nt = max_norm(&rt);
                if nt < norm {
                    break Some((trial, rt, nt));
                }
            }
            alpha *= 0.5;
            if alpha < cfg.min_step {
                break None;
            }
        };
        match accepted {
            Some((xn, rn, nn)) => {
                x = xn;
                r = rn;
                norm = nn;
                if converged {
                    polish_left -= 1;
                }
            }
            None if converged => break,
            None => return Err(fail(iterations, norm)),
        }
    }
    Ok((
        x,
        NewtonReport {
            iterations,
            residual_norm: norm,
        },
    ))
}
