//! Discrete entropy and kinetic-energy balances, errors and convergence
//! orders. Every sum is compensated.

use crate::error::Result;
use crate::sbp::{lgl_rule, SbpOperator};
use crate::solver::{Discretization, Run};
use crate::sum::CompensatedSum;
use crate::systems::euler1d::State;

/// Scalar functionals of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub s_initial: f64,
    pub s_final: f64,
    pub delta_s: f64,
    pub xi_s: f64,
    pub k_initial: f64,
    pub k_final: f64,
    pub theta_k: f64,
    pub pressure_work_volume: f64,
    pub pressure_work_surface: f64,
    pub initial_projection_term_s: f64,
    pub initial_projection_term_k: f64,
    pub l2_errors: Option<[f64; 3]>,
    pub eoc: Option<[f64; 3]>,
}

impl DiagnosticsRecord {
    pub fn from_run(run: &Run) -> Result<Self> {
        let s_initial = total_entropy(&run.disc, &run.initial)?;
        let s_final = total_entropy(&run.disc, &run.final_state())?;
        let initial_projection_term_s = entropy_projection_term(run)?;
        let k_initial = total_kinetic_energy(&run.disc, &run.initial)?;
        let k_final = total_kinetic_energy(&run.disc, &run.final_state())?;
        let pressure_work_volume = pressure_work_volume(run)?;
        let pressure_work_surface = pressure_work_surface(run)?;
        let initial_projection_term_k = kinetic_projection_term(run)?;
        let delta_s = s_final - s_initial;
        let theta_k = balance(&[
            k_final,
            -k_initial,
            -pressure_work_volume,
            -pressure_work_surface,
            -initial_projection_term_k,
        ]);
        Ok(Self {
            s_initial,
            s_final,
            delta_s,
            xi_s: delta_s + initial_projection_term_s,
            k_initial,
            k_final,
            theta_k,
            pressure_work_volume,
            pressure_work_surface,
            initial_projection_term_s,
            initial_projection_term_k,
            l2_errors: run.problem.has_exact().then(|| l2_error(run)),
            eoc: None,
        })
    }
}

fn balance(terms: &[f64]) -> f64 {
    terms.iter().copied().collect::<CompensatedSum>().value()
}

/// `sum_k sum_i w_i J g(U_ki)` over one temporal level.
fn face_integral<F>(disc: &Discretization, face: &[State], g: F) -> Result<f64>
where
    F: Fn(&State) -> Result<f64>,
{
    let n1 = disc.space.len();
    let jac = disc.mesh.jac();
    let mut acc = CompensatedSum::new();
    for (idx, u) in face.iter().enumerate() {
        acc.add(disc.space.weights()[idx % n1] * jac * g(u)?);
    }
    Ok(acc.value())
}

/// Discrete total entropy `sum_k <s(U), J>_N` of one temporal level.
pub fn total_entropy(disc: &Discretization, face: &[State]) -> Result<f64> {
    face_integral(disc, face, |u| Ok(disc.euler.entropy(&disc.euler.decode(u)?)))
}

/// Discrete total kinetic energy `sum_k <kappa(U), J>_N`.
pub fn total_kinetic_energy(disc: &Discretization, face: &[State]) -> Result<f64> {
    face_integral(disc, face, |u| Ok(disc.euler.kinetic_energy(&disc.euler.decode(u)?)))
}

/// `S(U(T)) - S(u(0))`.
pub fn delta_s(run: &Run) -> Result<f64> {
    Ok(total_entropy(&run.disc, &run.final_state())? - total_entropy(&run.disc, &run.initial)?)
}

/// `(t_n, S(U(t_n)) - S(u(0)))` at `t = 0` and at the end of every slab.
pub fn entropy_trace(run: &Run) -> Result<Vec<(f64, f64)>> {
    let s0 = total_entropy(&run.disc, &run.initial)?;
    let mut out = vec![(0.0, 0.0)];
    for slab in &run.slabs {
        out.push((slab.t0 + slab.dt, total_entropy(&run.disc, &slab.end())? - s0));
    }
    Ok(out)
}

fn first_start(run: &Run) -> Vec<State> {
    run.slabs
        .first()
        .map(|s| s.start())
        .unwrap_or_else(|| run.initial.clone())
}

/// `sum_k <[[Phi]] - [[w]]^T u, J>_N` at `tau = -1` of the first slab, with
/// the jump taken from the initial interpolant `u` to the slab trace.
pub fn entropy_projection_term(run: &Run) -> Result<f64> {
    let e = run.disc.euler;
    let start = first_start(run);
    let pairs: Vec<(State, State)> = run.initial.iter().copied().zip(start).collect();
    face_integral_pairs(&run.disc, &pairs, |u0, u1| {
        let (a, b) = (e.decode(u0)?, e.decode(u1)?);
        let (wa, wb) = (e.entropy_vars(&a), e.entropy_vars(&b));
        let dw_u: f64 = (0..3).map(|c| (wb[c] - wa[c]) * u0[c]).sum();
        Ok(e.potential(&b) - e.potential(&a) - dw_u)
    })
}

/// `sum_k <[[V]]^T u, J>_N` at `tau = -1` of the first slab.
pub fn kinetic_projection_term(run: &Run) -> Result<f64> {
    let e = run.disc.euler;
    let start = first_start(run);
    let pairs: Vec<(State, State)> = run.initial.iter().copied().zip(start).collect();
    face_integral_pairs(&run.disc, &pairs, |u0, u1| {
        let (va, vb) = (e.kinetic_vars(&e.decode(u0)?), e.kinetic_vars(&e.decode(u1)?));
        Ok((0..3).map(|c| (vb[c] - va[c]) * u0[c]).sum())
    })
}

fn face_integral_pairs<F>(disc: &Discretization, pairs: &[(State, State)], g: F) -> Result<f64>
where
    F: Fn(&State, &State) -> Result<f64>,
{
    let n1 = disc.space.len();
    let jac = disc.mesh.jac();
    let mut acc = CompensatedSum::new();
    for (idx, (a, b)) in pairs.iter().enumerate() {
        acc.add(disc.space.weights()[idx % n1] * jac * g(a, b)?);
    }
    Ok(acc.value())
}

/// Volume pressure work `sum_slabs sum_k dt/2 <d_xi I^N(v), p>_{NxM}`.
pub fn pressure_work_volume(run: &Run) -> Result<f64> {
    let disc = &run.disc;
    let l = disc.layout();
    let half_dt = 0.5 * disc.mesh.dt();
    let (rt, rs) = (&disc.time, &disc.space);
    let mut acc = CompensatedSum::new();
    for slab in &run.slabs {
        for s in 0..l.m1 {
            for k in 0..l.k_s {
                let nodes = (0..l.n1)
                    .map(|i| disc.euler.decode(&slab.state(s, k, i)))
                    .collect::<Result<Vec<_>>>()?;
                for i in 0..l.n1 {
                    let dv: f64 = (0..l.n1).map(|m| rs.d(i, m) * nodes[m].v).sum();
                    acc.add(half_dt * rt.weights()[s] * rs.weights()[i] * nodes[i].p * dv);
                }
            }
        }
    }
    Ok(acc.value())
}

/// Interface pressure work `sum_slabs sum_faces dt/2 sum_sigma w_sigma {{p}}[[v]]`
/// over all (periodic) element interfaces.
pub fn pressure_work_surface(run: &Run) -> Result<f64> {
    let disc = &run.disc;
    let l = disc.layout();
    let half_dt = 0.5 * disc.mesh.dt();
    let mut acc = CompensatedSum::new();
    for slab in &run.slabs {
        for s in 0..l.m1 {
            for k in 0..l.k_s {
                let a = disc.euler.decode(&slab.state(s, k, l.n1 - 1))?;
                let b = disc.euler.decode(&slab.state(s, (k + 1) % l.k_s, 0))?;
                acc.add(half_dt * disc.time.weights()[s] * 0.5 * (a.p + b.p) * (b.v - a.v));
            }
        }
    }
    Ok(acc.value())
}

/// `Xi_S = Delta_S + entropy projection term`.
pub fn xi_s(run: &Run) -> Result<f64> {
    Ok(delta_s(run)? + entropy_projection_term(run)?)
}

/// `Theta_K`; see [`DiagnosticsRecord::theta_k`].
pub fn theta_k(run: &Run) -> Result<f64> {
    Ok(DiagnosticsRecord::from_run(run)?.theta_k)
}

/// Per-component L2 error at the final time, measured by interpolating the
/// solution to a degree-`2N` LGL grid per element.
pub fn l2_error(run: &Run) -> [f64; 3] {
    let disc = &run.disc;
    let fine_degree = (2 * disc.space.degree()).min(crate::sbp::MAX_DEGREE);
    let fine: SbpOperator = lgl_rule(fine_degree).expect("degree within range");
    let t = run.slabs.last().map(|s| s.t0 + s.dt).unwrap_or(0.0);
    l2_error_on(disc, &fine, &run.final_state(), |x| {
        run.problem.exact(x, t).expect("exact solution required")
    })
}

/// L2 error of nodal `face` against `exact` with quadrature rule `fine`.
pub fn l2_error_on<F>(disc: &Discretization, fine: &SbpOperator, face: &[State], exact: F) -> [f64; 3]
where
    F: Fn(f64) -> State,
{
    let n1 = disc.space.len();
    let interp = disc.space.interpolation_matrix(fine.nodes());
    let jac = disc.mesh.jac();
    let mut acc = [CompensatedSum::new(); 3];
    for k in 0..disc.mesh.k_s {
        let elem = &face[k * n1..(k + 1) * n1];
        for (q, &xi) in fine.nodes().iter().enumerate() {
            let row = &interp[q * n1..(q + 1) * n1];
            let ue = exact(disc.x_at(k, xi));
            for c in 0..3 {
                let uh: f64 = row.iter().zip(elem).map(|(r, s)| r * s[c]).sum();
                let e = uh - ue[c];
                acc[c].add(fine.weights()[q] * jac * e * e);
            }
        }
    }
    [acc[0].value().sqrt(), acc[1].value().sqrt(), acc[2].value().sqrt()]
}

/// Experimental order of convergence between two levels refined by `ratio`.
pub fn eoc(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}

/// EOC between consecutive entries of a ladder refined by two.
pub fn eoc_ladder(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| eoc(w[0], w[1], 2.0)).collect()
}
