//! Weighted residual of the space-time DGSEM on one slab.

use super::{Discretization, Layout, SolverConfig, SpatialFlux};
use crate::error::{Error, NodeLocation, Result};
use crate::problems::ProblemSpec;
use crate::systems::euler1d::{Node, State};
use crate::two_point::euler1d as tp;

/// Exterior data on the `tau = -1` face of a slab.
#[derive(Debug, Clone, Copy)]
pub enum LowerFace<'a> {
    /// `U* = U_-` with the given past states (previous slab end or initial data).
    Upwind(&'a [State]),
    /// `U^#(U_-, U)` with the given past states.
    EntropyConservative(&'a [State]),
}

/// Exterior data on the `tau = +1` face of a slab.
#[derive(Debug, Clone, Copy)]
pub enum UpperFace<'a> {
    /// `U* = U_-` is the slab's own trace: no contribution.
    Upwind,
    /// `U^#(U, U_+)` with the given future states (next slab start).
    EntropyConservative(&'a [State]),
}

#[derive(Debug, Clone, Copy)]
pub struct SlabContext<'a> {
    pub slab: usize,
    pub t0: f64,
    pub lower: LowerFace<'a>,
    pub upper: UpperFace<'a>,
    pub problem: Option<&'a ProblemSpec>,
}

/// Decodes every nodal state of a slab, reporting the first inadmissible node.
pub fn decode_nodes(disc: &Discretization, u: &[f64], slab: usize) -> Result<Vec<Node>> {
    let l = disc.layout();
    u.chunks_exact(Layout::P)
        .enumerate()
        .map(|(node, s)| {
            disc.euler.decode(&[s[0], s[1], s[2]]).map_err(|_| {
                let (sigma, k, i, _) = l.decode(node * Layout::P);
                Error::AdmissibilityLoss {
                    location: NodeLocation {
                        slab,
                        sigma,
                        element: k,
                        node: i,
                    },
                }
            })
        })
        .collect()
}

#[inline]
fn add(res: &mut [f64], at: usize, scale: f64, v: &State) {
    res[at] += scale * v[0];
    res[at + 1] += scale * v[1];
    res[at + 2] += scale * v[2];
}

/// Adds `J w_sigma w_i 2 sum_theta D_sigma,theta U^#(U_sigma,i, U_theta,i)`.
pub fn temporal_volume<F>(disc: &Discretization, nodes: &[Node], state_fn: F, res: &mut [f64])
where
    F: Fn(&Node, &Node) -> State,
{
    let l = disc.layout();
    let jac = disc.mesh.jac();
    let (rt, rs) = (&disc.time, &disc.space);
    for k in 0..l.k_s {
        for i in 0..l.n1 {
            let base = jac * rs.weights()[i];
            for s in 0..l.m1 {
                let ns = &nodes[l.node(s, k, i)];
                let diag = [ns.rho, ns.rho * ns.v, ns.e];
                add(
                    res,
                    l.index(s, k, i, 0),
                    2.0 * base * rt.weights()[s] * rt.d(s, s),
                    &diag,
                );
                for th in s + 1..l.m1 {
                    let ust = state_fn(ns, &nodes[l.node(th, k, i)]);
                    add(
                        res,
                        l.index(s, k, i, 0),
                        2.0 * base * rt.weights()[s] * rt.d(s, th),
                        &ust,
                    );
                    add(
                        res,
                        l.index(th, k, i, 0),
                        2.0 * base * rt.weights()[th] * rt.d(th, s),
                        &ust,
                    );
                }
            }
        }
    }
}

/// Adds `dt/2 w_sigma w_i 2 sum_m D_im F(U_sigma,i, U_sigma,m)` per element.
pub fn spatial_volume<F>(disc: &Discretization, nodes: &[Node], flux_fn: F, res: &mut [f64])
where
    F: Fn(&Node, &Node) -> State,
{
    let l = disc.layout();
    let half_dt = 0.5 * disc.mesh.dt();
    let (rt, rs) = (&disc.time, &disc.space);
    for s in 0..l.m1 {
        let base = half_dt * rt.weights()[s];
        for k in 0..l.k_s {
            for i in 0..l.n1 {
                let ni = &nodes[l.node(s, k, i)];
                let f = disc.euler.flux(ni);
                add(res, l.index(s, k, i, 0), 2.0 * base * rs.weights()[i] * rs.d(i, i), &f);
                for m in i + 1..l.n1 {
                    let fim = flux_fn(ni, &nodes[l.node(s, k, m)]);
                    add(
                        res,
                        l.index(s, k, i, 0),
                        2.0 * base * rs.weights()[i] * rs.d(i, m),
                        &fim,
                    );
                    add(
                        res,
                        l.index(s, k, m, 0),
                        2.0 * base * rs.weights()[m] * rs.d(m, i),
                        &fim,
                    );
                }
            }
        }
    }
}

/// Adds the temporal face terms `J w_i (U* - U)` at `tau = +1` minus the same
/// at `tau = -1`.
pub fn temporal_surface(
    disc: &Discretization,
    nodes: &[Node],
    lower: LowerFace,
    upper: UpperFace,
    res: &mut [f64],
) -> Result<()> {
    let l = disc.layout();
    let jac = disc.mesh.jac();
    let w = disc.space.weights();
    let face = |states: &[State]| -> Result<()> {
        if states.len() != l.face_len() {
            return Err(Error::Argument(format!(
                "face needs {} states, got {}",
                l.face_len(),
                states.len()
            )));
        }
        Ok(())
    };
    match lower {
        LowerFace::Upwind(prev) => {
            face(prev)?;
            for k in 0..l.k_s {
                for i in 0..l.n1 {
                    let own = &nodes[l.node(0, k, i)];
                    let ext = &prev[k * l.n1 + i];
                    let jump = [ext[0] - own.rho, ext[1] - own.rho * own.v, ext[2] - own.e];
                    add(res, l.index(0, k, i, 0), -jac * w[i], &jump);
                }
            }
        }
        LowerFace::EntropyConservative(prev) => {
            face(prev)?;
            for k in 0..l.k_s {
                for i in 0..l.n1 {
                    let own = &nodes[l.node(0, k, i)];
                    let ext = disc.euler.decode(&prev[k * l.n1 + i])?;
                    let st = tp::ec_state(&disc.euler, &ext, own);
                    let jump = [st[0] - own.rho, st[1] - own.rho * own.v, st[2] - own.e];
                    add(res, l.index(0, k, i, 0), -jac * w[i], &jump);
                }
            }
        }
    }
    if let UpperFace::EntropyConservative(next) = upper {
        face(next)?;
        let top = l.m1 - 1;
        for k in 0..l.k_s {
            for i in 0..l.n1 {
                let own = &nodes[l.node(top, k, i)];
                let ext = disc.euler.decode(&next[k * l.n1 + i])?;
                let st = tp::ec_state(&disc.euler, own, &ext);
                let jump = [st[0] - own.rho, st[1] - own.rho * own.v, st[2] - own.e];
                add(res, l.index(top, k, i, 0), jac * w[i], &jump);
            }
        }
    }
    Ok(())
}

/// Numerical flux at the interface between a left and a right trace.
pub fn interface_flux(disc: &Discretization, flux: SpatialFlux, left: &Node, right: &Node) -> Result<State> {
    Ok(match flux {
        SpatialFlux::Eckep => tp::eckep_flux(&disc.euler, left, right),
        SpatialFlux::Es => tp::es_flux(&disc.euler, left, right)?,
    })
}

/// Adds `dt/2 w_sigma (F* - f(U)) n` at both endpoints of every element,
/// with periodic coupling and outward normal `n = -1` on the left face.
pub fn spatial_surface(disc: &Discretization, nodes: &[Node], flux: SpatialFlux, res: &mut [f64]) -> Result<()> {
    let l = disc.layout();
    let half_dt = 0.5 * disc.mesh.dt();
    let last = l.n1 - 1;
    for s in 0..l.m1 {
        let scale = half_dt * disc.time.weights()[s];
        for k in 0..l.k_s {
            let kr = (k + 1) % l.k_s;
            let left = &nodes[l.node(s, k, last)];
            let right = &nodes[l.node(s, kr, 0)];
            let fs = interface_flux(disc, flux, left, right)?;
            let fl = disc.euler.flux(left);
            let fr = disc.euler.flux(right);
            let dl = [fs[0] - fl[0], fs[1] - fl[1], fs[2] - fl[2]];
            let dr = [fs[0] - fr[0], fs[1] - fr[1], fs[2] - fr[2]];
            add(res, l.index(s, k, last, 0), scale, &dl);
            add(res, l.index(s, kr, 0, 0), -scale, &dr);
        }
    }
    Ok(())
}

/// Subtracts the collocated source `dt/2 J w_sigma w_i Q(x_i, t_sigma)`.
pub fn source_term(disc: &Discretization, t0: f64, problem: &ProblemSpec, res: &mut [f64]) {
    if !problem.has_source() {
        return;
    }
    let l = disc.layout();
    let scale = 0.5 * disc.mesh.dt() * disc.mesh.jac();
    for s in 0..l.m1 {
        let t = disc.t(t0, s);
        for k in 0..l.k_s {
            for i in 0..l.n1 {
                let q = problem.source(disc.x(k, i), t).unwrap_or([0.0; 3]);
                let wgt = scale * disc.time.weights()[s] * disc.space.weights()[i];
                add(res, l.index(s, k, i, 0), -wgt, &q);
            }
        }
    }
}

/// Full slab residual `A_T + A_S - source`.
pub fn assemble_residual(disc: &Discretization, cfg: &SolverConfig, u: &[f64], ctx: &SlabContext) -> Result<Vec<f64>> {
    let l = disc.layout();
    if u.len() != l.len() {
        return Err(Error::Argument(format!(
            "slab needs {} unknowns, got {}",
            l.len(),
            u.len()
        )));
    }
    let nodes = decode_nodes(disc, u, ctx.slab)?;
    let mut res = vec![0.0; l.len()];
    let euler = disc.euler;
    temporal_volume(disc, &nodes, |a, b| tp::ec_state(&euler, a, b), &mut res);
    temporal_surface(disc, &nodes, ctx.lower, ctx.upper, &mut res)?;
    spatial_volume(disc, &nodes, |a, b| tp::eckep_flux(&euler, a, b), &mut res);
    spatial_surface(disc, &nodes, cfg.spatial_flux, &mut res)?;
    if let Some(problem) = ctx.problem {
        source_term(disc, ctx.t0, problem, &mut res);
    }
    Ok(res)
}
