//! Two-point kernels: logarithmic mean, temporal interface states, the
//! entropy-conservative kinetic-energy-preserving (ECKEP) flux, the
//! entropy-stable surface flux and checkers for the discrete conditions.
//!
//! Orientation: `left` is the "-" (past or upstream) state, `right` the "+"
//! state, `[[a]] = a_+ - a_-` and `{{a}} = (a_+ + a_-) / 2`.

pub mod euler1d;

use crate::error::{Error, Result};
use crate::systems::{self, Primitive, SystemDescriptor, SystemId};

/// Branch threshold on `u = ((a - b) / (a + b))^2` for the series evaluation.
pub const LOG_MEAN_SERIES_THRESHOLD: f64 = 1e-4;

/// Logarithmic mean without argument validation.
#[inline]
pub fn log_mean_unchecked(a: f64, b: f64) -> f64 {
    let f = (a - b) / (a + b);
    let u = f * f;
    if u < LOG_MEAN_SERIES_THRESHOLD {
        let series = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0)));
        0.5 * (a + b) / series
    } else {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        (hi - lo) / (hi / lo).ln()
    }
}

/// `(a - b) / (ln a - ln b)`, evaluated by a truncated series near `a = b`.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Argument(format!(
            "logarithmic mean needs positive finite arguments, got {a}, {b}"
        )));
    }
    Ok(log_mean_unchecked(a, b))
}

#[inline]
pub fn avg(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}

#[derive(Debug, Clone, Copy)]
pub struct StatePair<'a> {
    pub left: &'a [f64],
    pub right: &'a [f64],
}

impl<'a> StatePair<'a> {
    pub fn new(left: &'a [f64], right: &'a [f64]) -> Self {
        Self { left, right }
    }

    pub fn swapped(&self) -> StatePair<'a> {
        StatePair {
            left: self.right,
            right: self.left,
        }
    }
}

/// Dissipation added to the entropy-conservative flux at element interfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DissipationSpec {
    None,
    /// `1/2 lambda_max H({{u}}) [[w]]` with `H = du/dw`.
    #[default]
    RusanovEntropy,
}

fn decode_pair(sys: &SystemDescriptor, pair: &StatePair) -> Result<(Primitive, Primitive)> {
    Ok((
        systems::primitive(sys, pair.left)?,
        systems::primitive(sys, pair.right)?,
    ))
}

/// Entropy-conservative temporal state `U^#` with `[[w]]^T U^# = [[Phi]]`.
pub fn temporal_state_ec(sys: &SystemDescriptor, pair: &StatePair) -> Result<Vec<f64>> {
    let (a, b) = decode_pair(sys, pair)?;
    let nv = sys.velocity_dim();
    match sys.id {
        SystemId::ShallowWater => {
            let h = avg(a.rho, b.rho);
            Ok(vec![h, h * avg(a.v[0], b.v[0]), h * avg(a.v[1], b.v[1])])
        }
        SystemId::Euler1D | SystemId::Euler3D | SystemId::Mhd => {
            let rho_ln = log_mean_unchecked(a.rho, b.rho);
            let beta_ln = log_mean_unchecked(a.beta(), b.beta());
            let mut out = Vec::with_capacity(sys.p());
            out.push(rho_ln);
            let mut kin = 0.0;
            for l in 0..nv {
                let vm = avg(a.v[l], b.v[l]);
                out.push(rho_ln * vm);
                kin += vm * vm - 0.5 * avg(a.v[l] * a.v[l], b.v[l] * b.v[l]);
            }
            let mut energy = rho_ln / (2.0 * beta_ln * (sys.gamma - 1.0)) + rho_ln * kin;
            if sys.id == SystemId::Mhd {
                let bm: [f64; 3] = std::array::from_fn(|l| avg(a.b[l], b.b[l]));
                let mag: f64 = (0..3)
                    .map(|l| bm[l] * bm[l] - 0.5 * avg(a.b[l] * a.b[l], b.b[l] * b.b[l]))
                    .sum();
                energy += mag;
                out.push(energy);
                out.extend_from_slice(&bm);
            } else {
                out.push(energy);
            }
            Ok(out)
        }
    }
}

/// Upwind temporal state `U* = U_-`.
pub fn temporal_state_upwind(pair: &StatePair) -> Vec<f64> {
    pair.left.to_vec()
}

/// ECKEP flux for Euler (1D or 3D) in direction `dir`.
pub fn flux_eckep_euler(sys: &SystemDescriptor, pair: &StatePair, dir: usize) -> Result<Vec<f64>> {
    if !sys.is_euler() {
        return Err(Error::UnsupportedSystem(sys.id.name()));
    }
    let nv = sys.velocity_dim();
    if dir >= nv {
        return Err(Error::Argument(format!(
            "direction {dir} out of range for {}",
            sys.id.name()
        )));
    }
    let (a, b) = decode_pair(sys, pair)?;
    let rho_ln = log_mean_unchecked(a.rho, b.rho);
    let rho_p_ln = log_mean_unchecked(a.rho / a.p, b.rho / b.p);
    let p_avg = avg(a.p, b.p);
    let vd = avg(a.v[dir], b.v[dir]);
    let mass = rho_ln * vd;
    let mut out = Vec::with_capacity(sys.p());
    out.push(mass);
    let mut kin = 0.0;
    for l in 0..nv {
        let vm = avg(a.v[l], b.v[l]);
        let pressure = if l == dir { p_avg } else { 0.0 };
        out.push(mass * vm + pressure);
        kin += vm * vm - 0.5 * avg(a.v[l] * a.v[l], b.v[l] * b.v[l]);
    }
    let thermal = rho_ln / ((sys.gamma - 1.0) * rho_p_ln);
    out.push((rho_ln * kin + thermal) * vd + 2.0 * p_avg * vd - avg(a.p * a.v[dir], b.p * b.v[dir]));
    Ok(out)
}

/// Entropy-stable flux `F^EC - 1/2 lambda_max H({{u}}) [[w]]` built on the
/// ECKEP flux.
pub fn flux_es(sys: &SystemDescriptor, pair: &StatePair, dir: usize, dis: DissipationSpec) -> Result<Vec<f64>> {
    let mut f = flux_eckep_euler(sys, pair, dir)?;
    if dis == DissipationSpec::None {
        return Ok(f);
    }
    let d = dissipation(sys, pair)?;
    f.iter_mut().zip(&d).for_each(|(fi, di)| *fi -= di);
    Ok(f)
}

/// The dissipation term `1/2 lambda_max H({{u}}) [[w]]` subtracted by
/// [`flux_es`].
pub fn dissipation(sys: &SystemDescriptor, pair: &StatePair) -> Result<Vec<f64>> {
    let n = sys.p();
    let lam = systems::max_wavespeed(sys, pair.left)?.max(systems::max_wavespeed(sys, pair.right)?);
    let mean: Vec<f64> = pair.left.iter().zip(pair.right).map(|(a, b)| avg(*a, *b)).collect();
    let h = systems::entropy_jacobian(sys, &mean)?;
    let dw = jump_entropy_vars(sys, pair)?;
    Ok((0..n)
        .map(|i| 0.5 * lam * (0..n).map(|j| h[i * n + j] * dw[j]).sum::<f64>())
        .collect())
}

/// `[[w]]` across the pair.
pub fn jump_entropy_vars(sys: &SystemDescriptor, pair: &StatePair) -> Result<Vec<f64>> {
    let wl = systems::entropy_quantities(sys, pair.left)?.w;
    let wr = systems::entropy_quantities(sys, pair.right)?.w;
    Ok(wr.iter().zip(&wl).map(|(r, l)| r - l).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Terms of a condition `[[w]]^T X - [[target]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionResidual {
    /// `[[w]]^T X - [[target]]`.
    pub value: f64,
    /// `|[[target]]|`.
    pub target: f64,
    /// `sum_c |[[w_c]] X_c|`: the size of the cancelling terms.
    pub scale: f64,
}

impl ConditionResidual {
    /// Residual relative to the larger of the target and the summed terms.
    pub fn relative(&self) -> f64 {
        let denom = self.target.max(self.scale);
        if denom == 0.0 {
            self.value.abs()
        } else {
            self.value.abs() / denom
        }
    }
}

fn condition(dw: &[f64], x: &[f64], target_jump: f64) -> ConditionResidual {
    ConditionResidual {
        value: dot(dw, x) - target_jump,
        target: target_jump.abs(),
        scale: dw.iter().zip(x).map(|(a, b)| (a * b).abs()).sum(),
    }
}

/// Temporal condition `[[w]]^T state - [[Phi]]`: zero for `U^#`,
/// non-positive for entropy-stable states such as `U*`.
pub fn temporal_condition(sys: &SystemDescriptor, pair: &StatePair, state: &[f64]) -> Result<ConditionResidual> {
    let ql = systems::entropy_quantities(sys, pair.left)?;
    let qr = systems::entropy_quantities(sys, pair.right)?;
    let dw: Vec<f64> = qr.w.iter().zip(&ql.w).map(|(r, l)| r - l).collect();
    Ok(condition(&dw, state, qr.phi - ql.phi))
}

/// Tadmor condition `[[w]]^T F - [[Psi_dir]]` for a spatial two-point flux.
pub fn spatial_condition(
    sys: &SystemDescriptor,
    pair: &StatePair,
    flux: &[f64],
    dir: usize,
) -> Result<ConditionResidual> {
    let ql = systems::entropy_quantities(sys, pair.left)?;
    let qr = systems::entropy_quantities(sys, pair.right)?;
    let dw: Vec<f64> = qr.w.iter().zip(&ql.w).map(|(r, l)| r - l).collect();
    Ok(condition(&dw, flux, qr.psi[dir] - ql.psi[dir]))
}

/// Residuals of the kinetic-energy-preserving temporal relations
/// `U_{1+l} - {{v_l}} U_1`, one per velocity component.
pub fn check_kep_temporal(sys: &SystemDescriptor, pair: &StatePair, state: &[f64]) -> Result<Vec<f64>> {
    if !sys.is_euler() {
        return Err(Error::UnsupportedSystem(sys.id.name()));
    }
    let (a, b) = decode_pair(sys, pair)?;
    Ok((0..sys.velocity_dim())
        .map(|l| state[1 + l] - avg(a.v[l], b.v[l]) * state[0])
        .collect())
}

/// Jameson's relations `F_{1+l} - ({{v_l}} F_1 + delta_{l,dir} {{p}})` for a
/// spatial flux in direction `dir`.
pub fn jameson_residuals(sys: &SystemDescriptor, pair: &StatePair, flux: &[f64], dir: usize) -> Result<Vec<f64>> {
    if !sys.is_euler() {
        return Err(Error::UnsupportedSystem(sys.id.name()));
    }
    let (a, b) = decode_pair(sys, pair)?;
    let p_avg = avg(a.p, b.p);
    Ok((0..sys.velocity_dim())
        .map(|l| {
            let pressure = if l == dir { p_avg } else { 0.0 };
            flux[1 + l] - (avg(a.v[l], b.v[l]) * flux[0] + pressure)
        })
        .collect())
}

/// `[[V]]^T state` with kinetic variables `V`; equals
/// `-1/2 rho_- sum_l [[v_l]]^2` for the upwind state.
pub fn kinetic_contraction(sys: &SystemDescriptor, pair: &StatePair, state: &[f64]) -> Result<f64> {
    let vl = systems::kinetic_quantities(sys, pair.left)?.v;
    let vr = systems::kinetic_quantities(sys, pair.right)?.v;
    Ok(vr.iter().zip(&vl).zip(state).map(|((r, l), s)| (r - l) * s).sum())
}
