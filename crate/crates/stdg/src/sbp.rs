//! Legendre-Gauss-Lobatto quadrature and the collocated summation-by-parts
//! derivative operator.

use crate::error::{Error, Result};
use crate::sum::csum;

pub const MAX_DEGREE: usize = 20;

/// LGL nodes and weights with the nodal SBP matrices of one polynomial degree.
///
/// Matrices are dense and row-major; `M` and `B` are diagonal and therefore
/// exposed through [`SbpOperator::mass`] and [`SbpOperator::boundary`].
#[derive(Debug, Clone, PartialEq)]
pub struct SbpOperator {
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
    d: Vec<f64>,
    q: Vec<f64>,
}

/// Legendre polynomial `P_k(x)` and its derivative.
pub fn legendre(k: usize, x: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    let (mut dp0, mut dp1) = (0.0, 1.0);
    for n in 2..=k {
        let nf = n as f64;
        let p2 = ((2.0 * nf - 1.0) * x * p1 - (nf - 1.0) * p0) / nf;
        let dp2 = dp0 + (2.0 * nf - 1.0) * p1;
        p0 = p1;
        p1 = p2;
        dp0 = dp1;
        dp1 = dp2;
    }
    (p1, dp1)
}

/// Newton iteration on `q = P_{K+1} - P_{K-1}`, whose interior roots are
/// those of `P'_K`, with derivative `q' = (2K+1) P_K`.
fn interior_root(k: usize, guess: f64) -> f64 {
    let mut x = guess;
    for _ in 0..50 {
        let (pkp1, _) = legendre(k + 1, x);
        let (pkm1, _) = legendre(k - 1, x);
        let (pk, _) = legendre(k, x);
        let delta = -(pkp1 - pkm1) / ((2 * k + 1) as f64 * pk);
        x += delta;
        if delta.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Builds the LGL rule of degree `k` (`k + 1` nodes).
pub fn lgl_rule(k: usize) -> Result<SbpOperator> {
    if !(1..=MAX_DEGREE).contains(&k) {
        return Err(Error::Argument(format!(
            "LGL degree must lie in 1..={MAX_DEGREE}, got {k}"
        )));
    }
    let n = k + 1;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[k] = 1.0;
    for j in 1..n.div_ceil(2) {
        let guess = -(std::f64::consts::PI * j as f64 / k as f64).cos();
        let x = interior_root(k, guess);
        nodes[j] = x;
        nodes[k - j] = -x;
    }
    if k.is_multiple_of(2) {
        nodes[k / 2] = 0.0;
    }

    let kf = k as f64;
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (pk, _) = legendre(k, x);
            2.0 / (kf * (kf + 1.0) * pk * pk)
        })
        .collect();

    let bary: Vec<f64> = (0..n)
        .map(|j| {
            let prod: f64 = (0..n).filter(|&m| m != j).map(|m| nodes[j] - nodes[m]).product();
            1.0 / prod
        })
        .collect();

    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[i * n + j] = bary[j] / bary[i] / (nodes[i] - nodes[j]);
            }
        }
        d[i * n + i] = -csum((0..n).filter(|&j| j != i).map(|j| d[i * n + j]));
    }
    let q = (0..n * n).map(|idx| weights[idx / n] * d[idx]).collect();

    Ok(SbpOperator {
        degree: k,
        nodes,
        weights,
        bary,
        d,
        q,
    })
}

impl SbpOperator {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes, `degree + 1`.
    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn barycentric_weights(&self) -> &[f64] {
        &self.bary
    }

    /// Derivative matrix entry `D_ij = l_j'(xi_i)`.
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.len() + j]
    }

    /// `Q = M D`.
    #[inline]
    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.len() + j]
    }

    pub fn d_matrix(&self) -> &[f64] {
        &self.d
    }

    pub fn q_matrix(&self) -> &[f64] {
        &self.q
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.weights[i]
        } else {
            0.0
        }
    }

    /// `B = diag(-1, 0, ..., 0, 1)`.
    pub fn boundary(&self, i: usize, j: usize) -> f64 {
        match (i == j, i) {
            (true, 0) => -1.0,
            (true, i) if i == self.degree => 1.0,
            _ => 0.0,
        }
    }

    /// Quadrature of nodal values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        csum(values.iter().zip(&self.weights).map(|(v, w)| v * w))
    }

    /// Barycentric evaluation of the interpolant through `values` at `xi`.
    pub fn lagrange_eval(&self, values: &[f64], xi: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&x, &lam), &v) in self.nodes.iter().zip(&self.bary).zip(values) {
            let diff = xi - x;
            if diff == 0.0 {
                return v;
            }
            let t = lam / diff;
            num += t * v;
            den += t;
        }
        num / den
    }

    /// Row-major `targets.len() x len()` matrix of Lagrange basis values.
    pub fn interpolation_matrix(&self, targets: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; targets.len() * n];
        for (r, &xi) in targets.iter().enumerate() {
            let row = &mut out[r * n..(r + 1) * n];
            if let Some(j) = self.nodes.iter().position(|&x| x == xi) {
                row[j] = 1.0;
                continue;
            }
            let mut den = 0.0;
            for ((v, b), x) in row.iter_mut().zip(&self.bary).zip(&self.nodes) {
                *v = b / (xi - x);
                den += *v;
            }
            row.iter_mut().for_each(|v| *v /= den);
        }
        out
    }
}

/// Absolute residuals of the three split-form summation identities
/// `sum_ij Q_ij [[a]]_(i,j)`, `sum_ij Q_ij [[a]]{{b}}` and
/// `sum_ij Q_ij [[a]]{{b}}{{c}}` against their SBP-rewritten right-hand sides,
/// with `[[a]]_(i,j) = a_i - a_j` and `{{b}}_(i,j) = (b_i + b_j) / 2`.
///
/// Where an identity has two equivalent right-hand sides the larger residual
/// is reported.
pub fn split_form_identities(rule: &SbpOperator, a: &[f64], b: &[f64], c: &[f64]) -> Result<[f64; 3]> {
    let n = rule.len();
    if a.len() != n || b.len() != n || c.len() != n {
        return Err(Error::Argument(format!(
            "nodal vectors must have length {n}, got {}, {}, {}",
            a.len(),
            b.len(),
            c.len()
        )));
    }
    let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));
    let q = |i, j| rule.q(i, j);
    let avg = |v: &[f64], i: usize, j: usize| 0.5 * (v[i] + v[j]);

    let lhs1 = csum(pairs().map(|(i, j)| q(i, j) * (a[i] - a[j])));
    let rhs1a = -csum(pairs().map(|(i, j)| rule.boundary(i, j) * a[j]));
    let rhs1b = -(a[n - 1] - a[0]);
    let r1 = (lhs1 - rhs1a).abs().max((lhs1 - rhs1b).abs());

    let lhs2 = csum(pairs().map(|(i, j)| q(i, j) * (a[i] - a[j]) * avg(b, i, j)));
    let ab_jump = a[n - 1] * b[n - 1] - a[0] * b[0];
    let rhs2a = csum(pairs().map(|(i, j)| q(i, j) * a[i] * b[j])) - ab_jump;
    let rhs2b = -csum(pairs().map(|(i, j)| q(i, j) * a[j] * b[i]));
    let r2 = (lhs2 - rhs2a).abs().max((lhs2 - rhs2b).abs());

    let lhs3 = csum(pairs().map(|(i, j)| q(i, j) * (a[i] - a[j]) * avg(b, i, j) * avg(c, i, j)));
    let rhs3 = csum(pairs().flat_map(|(i, j)| {
        [
            -0.5 * q(i, j) * a[j] * b[i] * c[j],
            0.5 * q(i, j) * a[i] * b[i] * c[j],
            -0.5 * q(i, j) * a[j] * b[i] * c[i],
        ]
    }));
    let r3 = (lhs3 - rhs3).abs();

    Ok([r1, r2, r3])
}
