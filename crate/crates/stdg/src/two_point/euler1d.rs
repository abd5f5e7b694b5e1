//! Fixed-size 1D Euler two-point kernels on decoded nodes.

use super::{avg, log_mean_unchecked};
use crate::error::Result;
use crate::systems::euler1d::{Euler1D, Node, State};

#[inline]
pub fn ec_state(sys: &Euler1D, a: &Node, b: &Node) -> State {
    let rho_ln = log_mean_unchecked(a.rho, b.rho);
    let beta_ln = log_mean_unchecked(a.beta, b.beta);
    let vm = avg(a.v, b.v);
    let kin = vm * vm - 0.5 * avg(a.v * a.v, b.v * b.v);
    [
        rho_ln,
        rho_ln * vm,
        rho_ln / (2.0 * beta_ln * (sys.gamma - 1.0)) + rho_ln * kin,
    ]
}

#[inline]
pub fn eckep_flux(sys: &Euler1D, a: &Node, b: &Node) -> State {
    let rho_ln = log_mean_unchecked(a.rho, b.rho);
    let rho_p_ln = log_mean_unchecked(a.rho / a.p, b.rho / b.p);
    let p_avg = avg(a.p, b.p);
    let vm = avg(a.v, b.v);
    let mass = rho_ln * vm;
    let kin = vm * vm - 0.5 * avg(a.v * a.v, b.v * b.v);
    let thermal = rho_ln / ((sys.gamma - 1.0) * rho_p_ln);
    [
        mass,
        mass * vm + p_avg,
        (rho_ln * kin + thermal) * vm + 2.0 * p_avg * vm - avg(a.p * a.v, b.p * b.v),
    ]
}

/// `1/2 lambda_max H({{u}}) [[w]]`.
pub fn dissipation(sys: &Euler1D, a: &Node, b: &Node) -> Result<State> {
    let lam = sys.wavespeed(a).max(sys.wavespeed(b));
    let mean = sys.decode(&[avg(a.rho, b.rho), avg(a.rho * a.v, b.rho * b.v), avg(a.e, b.e)])?;
    let h = sys.entropy_jacobian(&mean);
    let wa = sys.entropy_vars(a);
    let wb = sys.entropy_vars(b);
    let dw = [wb[0] - wa[0], wb[1] - wa[1], wb[2] - wa[2]];
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(&h) {
        *o = 0.5 * lam * (row[0] * dw[0] + row[1] * dw[1] + row[2] * dw[2]);
    }
    Ok(out)
}

pub fn es_flux(sys: &Euler1D, a: &Node, b: &Node) -> Result<State> {
    let f = eckep_flux(sys, a, b);
    let d = dissipation(sys, a, b)?;
    Ok([f[0] - d[0], f[1] - d[1], f[2] - d[2]])
}
