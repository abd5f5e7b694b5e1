//! Conservation-law systems: state maps, physical fluxes, entropy pairs,
//! potentials, kinetic-energy variables and wavespeeds.
//!
//! States are plain slices in the component order
//!
//! | system        | components                        |
//! |---------------|-----------------------------------|
//! | `Euler1D`     | `rho, rho v, E`                   |
//! | `Euler3D`     | `rho, rho v1, rho v2, rho v3, E`  |
//! | `ShallowWater`| `h, h v1, h v2`                   |
//! | `Mhd`         | `rho, rho v (3), E, B (3)`        |
//!
//! The time-marching solver works on [`euler1d`] directly with fixed-size
//! arrays; the slice API here serves property tests across all systems.

pub mod euler1d;

use crate::error::{Error, Result};

/// States with density, depth or pressure at or below this value are rejected.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemId {
    Euler1D,
    Euler3D,
    ShallowWater,
    Mhd,
}

impl SystemId {
    pub fn name(self) -> &'static str {
        match self {
            SystemId::Euler1D => "Euler1D",
            SystemId::Euler3D => "Euler3D",
            SystemId::ShallowWater => "SW1D",
            SystemId::Mhd => "MHD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemDescriptor {
    pub id: SystemId,
    pub gamma: f64,
    pub g: f64,
}

pub const DEFAULT_GAMMA: f64 = 1.4;
pub const DEFAULT_GRAVITY: f64 = 1.0;

impl SystemDescriptor {
    pub fn new(id: SystemId, gamma: f64, g: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Argument(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(g > 0.0) {
            return Err(Error::Argument(format!("g must be positive, got {g}")));
        }
        Ok(Self { id, gamma, g })
    }

    fn with_defaults(id: SystemId) -> Self {
        Self {
            id,
            gamma: DEFAULT_GAMMA,
            g: DEFAULT_GRAVITY,
        }
    }

    pub fn euler1d() -> Self {
        Self::with_defaults(SystemId::Euler1D)
    }

    pub fn euler3d() -> Self {
        Self::with_defaults(SystemId::Euler3D)
    }

    pub fn shallow_water() -> Self {
        Self::with_defaults(SystemId::ShallowWater)
    }

    pub fn mhd() -> Self {
        Self::with_defaults(SystemId::Mhd)
    }

    /// Number of conserved components.
    pub fn p(&self) -> usize {
        match self.id {
            SystemId::Euler1D | SystemId::ShallowWater => 3,
            SystemId::Euler3D => 5,
            SystemId::Mhd => 8,
        }
    }

    /// Number of velocity components carried by the state.
    pub fn velocity_dim(&self) -> usize {
        match self.id {
            SystemId::Euler1D => 1,
            SystemId::ShallowWater => 2,
            SystemId::Euler3D | SystemId::Mhd => 3,
        }
    }

    pub fn is_euler(&self) -> bool {
        matches!(self.id, SystemId::Euler1D | SystemId::Euler3D)
    }

    fn index_of_energy(&self) -> Option<usize> {
        match self.id {
            SystemId::Euler1D => Some(2),
            SystemId::Euler3D | SystemId::Mhd => Some(4),
            SystemId::ShallowWater => None,
        }
    }
}

/// Entropy variables, entropy and potentials of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyQuantities {
    pub w: Vec<f64>,
    pub s: f64,
    pub phi: f64,
    /// Entropy-flux potential per spatial direction carried by the system.
    pub psi: Vec<f64>,
    /// `rho / (2 p)`; absent for shallow water.
    pub beta: Option<f64>,
    /// Physical specific entropy `ln(p rho^-gamma)`; absent for shallow water.
    pub varsigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticQuantities {
    pub v: Vec<f64>,
    pub kappa: f64,
    /// Kinetic flux `1/2 rho v_d |v|^2` per direction.
    pub fkappa: Vec<f64>,
}

/// Decoded primitive view of a state with unused slots set to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    /// Density, or water depth for shallow water.
    pub rho: f64,
    pub v: [f64; 3],
    /// Pressure; zero for shallow water.
    pub p: f64,
    pub b: [f64; 3],
}

impl Primitive {
    pub fn speed2(&self) -> f64 {
        dot(&self.v, &self.v)
    }

    pub fn b2(&self) -> f64 {
        dot(&self.b, &self.b)
    }

    pub fn beta(&self) -> f64 {
        self.rho / (2.0 * self.p)
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn check_len(sys: &SystemDescriptor, u: &[f64]) -> Result<()> {
    if u.len() != sys.p() {
        return Err(Error::Argument(format!(
            "{} state needs {} components, got {}",
            sys.id.name(),
            sys.p(),
            u.len()
        )));
    }
    if let Some(bad) = u.iter().find(|x| !x.is_finite()) {
        return Err(Error::Admissibility {
            quantity: "non-finite component",
            value: *bad,
        });
    }
    Ok(())
}

fn check_axis(sys: &SystemDescriptor, dir: usize) -> Result<()> {
    let dims = match sys.id {
        SystemId::Euler1D => 1,
        SystemId::ShallowWater => 2,
        SystemId::Euler3D | SystemId::Mhd => 3,
    };
    if dir >= dims {
        return Err(Error::Argument(format!(
            "direction {dir} out of range for {}",
            sys.id.name()
        )));
    }
    Ok(())
}

/// Decodes `u` and checks admissibility.
pub fn primitive(sys: &SystemDescriptor, u: &[f64]) -> Result<Primitive> {
    check_len(sys, u)?;
    let rho = u[0];
    let density_name = if sys.id == SystemId::ShallowWater {
        "depth"
    } else {
        "density"
    };
    if rho <= ADMISSIBILITY_FLOOR {
        return Err(Error::Admissibility {
            quantity: density_name,
            value: rho,
        });
    }
    let nv = sys.velocity_dim();
    let mut v = [0.0; 3];
    for l in 0..nv {
        v[l] = u[1 + l] / rho;
    }
    let mut b = [0.0; 3];
    if sys.id == SystemId::Mhd {
        b.copy_from_slice(&u[5..8]);
    }
    let p = match sys.index_of_energy() {
        Some(ie) => {
            let p = (sys.gamma - 1.0) * (u[ie] - 0.5 * rho * dot(&v, &v) - 0.5 * dot(&b, &b));
            if p <= ADMISSIBILITY_FLOOR {
                return Err(Error::Admissibility {
                    quantity: "pressure",
                    value: p,
                });
            }
            p
        }
        None => 0.0,
    };
    Ok(Primitive { rho, v, p, b })
}

/// Primitive vector: `(rho, v.., p)` for Euler, `(h, v1, v2)` for shallow
/// water and `(rho, v (3), p, B (3))` for MHD.
pub fn to_primitive(sys: &SystemDescriptor, u: &[f64]) -> Result<Vec<f64>> {
    let q = primitive(sys, u)?;
    let nv = sys.velocity_dim();
    let mut out = Vec::with_capacity(sys.p());
    out.push(q.rho);
    out.extend_from_slice(&q.v[..nv]);
    if sys.id != SystemId::ShallowWater {
        out.push(q.p);
    }
    if sys.id == SystemId::Mhd {
        out.extend_from_slice(&q.b);
    }
    Ok(out)
}

/// Inverse of [`to_primitive`].
pub fn from_primitive(sys: &SystemDescriptor, prim: &[f64]) -> Result<Vec<f64>> {
    check_len(sys, prim)?;
    let nv = sys.velocity_dim();
    let rho = prim[0];
    let v = &prim[1..1 + nv];
    let mut u = Vec::with_capacity(sys.p());
    u.push(rho);
    u.extend(v.iter().map(|vl| rho * vl));
    if sys.id != SystemId::ShallowWater {
        let p = prim[1 + nv];
        let b2: f64 = if sys.id == SystemId::Mhd {
            prim[5..8].iter().map(|x| x * x).sum()
        } else {
            0.0
        };
        let v2: f64 = v.iter().map(|x| x * x).sum();
        u.push(p / (sys.gamma - 1.0) + 0.5 * rho * v2 + 0.5 * b2);
    }
    if sys.id == SystemId::Mhd {
        u.extend_from_slice(&prim[5..8]);
    }
    primitive(sys, &u)?;
    Ok(u)
}

/// Physical flux in direction `dir` (0-based: x, y, z).
pub fn physical_flux(sys: &SystemDescriptor, u: &[f64], dir: usize) -> Result<Vec<f64>> {
    check_axis(sys, dir)?;
    let q = primitive(sys, u)?;
    let vd = q.v[dir];
    let nv = sys.velocity_dim();
    let mut f = vec![0.0; sys.p()];
    match sys.id {
        SystemId::Euler1D | SystemId::Euler3D => {
            let ie = nv + 1;
            f[0] = q.rho * vd;
            for l in 0..nv {
                f[1 + l] = q.rho * q.v[l] * vd;
            }
            f[1 + dir] += q.p;
            f[ie] = vd * (u[ie] + q.p);
        }
        SystemId::ShallowWater => {
            f[0] = q.rho * vd;
            for l in 0..2 {
                f[1 + l] = q.rho * q.v[l] * vd;
            }
            f[1 + dir] += 0.5 * sys.g * q.rho * q.rho;
        }
        SystemId::Mhd => {
            let ptot = q.p + 0.5 * q.b2();
            let bd = q.b[dir];
            let vb = dot(&q.v, &q.b);
            f[0] = q.rho * vd;
            for l in 0..3 {
                f[1 + l] = q.rho * q.v[l] * vd - q.b[l] * bd;
            }
            f[1 + dir] += ptot;
            f[4] = vd * (u[4] + ptot) - bd * vb;
            for l in 0..3 {
                f[5 + l] = vd * q.b[l] - bd * q.v[l];
            }
        }
    }
    Ok(f)
}

pub fn pressure(sys: &SystemDescriptor, u: &[f64]) -> Result<f64> {
    Ok(primitive(sys, u)?.p)
}

pub fn entropy_quantities(sys: &SystemDescriptor, u: &[f64]) -> Result<EntropyQuantities> {
    let q = primitive(sys, u)?;
    let dims = match sys.id {
        SystemId::Euler1D => 1,
        SystemId::ShallowWater => 2,
        SystemId::Euler3D | SystemId::Mhd => 3,
    };
    let nv = sys.velocity_dim();
    match sys.id {
        SystemId::ShallowWater => {
            let g = sys.g;
            let h = q.rho;
            let v2 = q.speed2();
            let w = vec![g * h - 0.5 * v2, q.v[0], q.v[1]];
            let s = 0.5 * h * v2 + 0.5 * g * h * h;
            let phi = 0.5 * g * h * h;
            let psi = (0..dims).map(|d| 0.5 * g * h * h * q.v[d]).collect();
            Ok(EntropyQuantities {
                w,
                s,
                phi,
                psi,
                beta: None,
                varsigma: None,
            })
        }
        _ => {
            let gm1 = sys.gamma - 1.0;
            let beta = q.beta();
            let varsigma = q.p.ln() - sys.gamma * q.rho.ln();
            let s = -q.rho * varsigma / gm1;
            let mut w = Vec::with_capacity(sys.p());
            w.push((sys.gamma - varsigma) / gm1 - beta * q.speed2());
            w.extend(q.v[..nv].iter().map(|vl| 2.0 * beta * vl));
            w.push(-2.0 * beta);
            let (phi, psi) = if sys.id == SystemId::Mhd {
                w.extend(q.b.iter().map(|bl| 2.0 * beta * bl));
                let b2 = q.b2();
                (
                    q.rho + beta * b2,
                    (0..dims).map(|d| q.rho * q.v[d] + beta * q.v[d] * b2).collect(),
                )
            } else {
                (q.rho, (0..dims).map(|d| q.rho * q.v[d]).collect())
            };
            Ok(EntropyQuantities {
                w,
                s,
                phi,
                psi,
                beta: Some(beta),
                varsigma: Some(varsigma),
            })
        }
    }
}

/// Entropy flux `f^s` in direction `dir`.
pub fn entropy_flux(sys: &SystemDescriptor, u: &[f64], dir: usize) -> Result<f64> {
    check_axis(sys, dir)?;
    let q = primitive(sys, u)?;
    let s = entropy_quantities(sys, u)?.s;
    Ok(match sys.id {
        SystemId::ShallowWater => (s + 0.5 * sys.g * q.rho * q.rho) * q.v[dir],
        _ => s * q.v[dir],
    })
}

pub fn sound_speed(sys: &SystemDescriptor, q: &Primitive) -> f64 {
    (sys.gamma * q.p / q.rho).sqrt()
}

/// Upper bound of the characteristic speeds over all directions.
pub fn max_wavespeed(sys: &SystemDescriptor, u: &[f64]) -> Result<f64> {
    let q = primitive(sys, u)?;
    let vmag = q.speed2().sqrt();
    Ok(match sys.id {
        SystemId::Euler1D | SystemId::Euler3D => vmag + sound_speed(sys, &q),
        SystemId::ShallowWater => vmag + (sys.g * q.rho).sqrt(),
        SystemId::Mhd => {
            let a2 = sys.gamma * q.p / q.rho;
            vmag + (a2 + q.b2() / q.rho).sqrt()
        }
    })
}

/// Kinetic-energy variables `(-|v|^2 / 2, v, 0)` and kinetic energy.
pub fn kinetic_quantities(sys: &SystemDescriptor, u: &[f64]) -> Result<KineticQuantities> {
    if !sys.is_euler() {
        return Err(Error::UnsupportedSystem(sys.id.name()));
    }
    let q = primitive(sys, u)?;
    let nv = sys.velocity_dim();
    let v2 = q.speed2();
    let mut v = Vec::with_capacity(sys.p());
    v.push(-0.5 * v2);
    v.extend_from_slice(&q.v[..nv]);
    v.push(0.0);
    let kappa = 0.5 * q.rho * v2;
    let fkappa = (0..nv).map(|d| kappa * q.v[d]).collect();
    Ok(KineticQuantities { v, kappa, fkappa })
}

/// `theta = w^T Upsilon = 2 beta (v . B)` and `Upsilon = (0, B, v . B, v)`.
pub fn mhd_theta_upsilon(sys: &SystemDescriptor, u: &[f64]) -> Result<(f64, Vec<f64>)> {
    if sys.id != SystemId::Mhd {
        return Err(Error::UnsupportedSystem(sys.id.name()));
    }
    let q = primitive(sys, u)?;
    let vb = dot(&q.v, &q.b);
    let mut ups = Vec::with_capacity(8);
    ups.push(0.0);
    ups.extend_from_slice(&q.b);
    ups.push(vb);
    ups.extend_from_slice(&q.v);
    Ok((2.0 * q.beta() * vb, ups))
}

/// Row-major `p x p` matrix `H = du/dw`, symmetric positive definite.
///
/// Available for Euler and shallow water.
pub fn entropy_jacobian(sys: &SystemDescriptor, u: &[f64]) -> Result<Vec<f64>> {
    let q = primitive(sys, u)?;
    let n = sys.p();
    let mut h = vec![0.0; n * n];
    match sys.id {
        SystemId::Euler1D | SystemId::Euler3D => {
            let nv = sys.velocity_dim();
            let ie = nv + 1;
            let e = u[ie];
            let a2 = sys.gamma * q.p / q.rho;
            let enth = (e + q.p) / q.rho;
            let mut set = |i: usize, j: usize, x: f64| {
                h[i * n + j] = x;
                h[j * n + i] = x;
            };
            set(0, 0, q.rho);
            for l in 0..nv {
                set(0, 1 + l, q.rho * q.v[l]);
                for m in l..nv {
                    let diag = if l == m { q.p } else { 0.0 };
                    set(1 + l, 1 + m, q.rho * q.v[l] * q.v[m] + diag);
                }
                set(1 + l, ie, q.rho * enth * q.v[l]);
            }
            set(0, ie, e);
            set(ie, ie, q.rho * enth * enth - a2 * q.p / (sys.gamma - 1.0));
        }
        SystemId::ShallowWater => {
            let g = sys.g;
            let gh = g * q.rho;
            let v = [q.v[0], q.v[1]];
            let rows = [
                [1.0, v[0], v[1]],
                [v[0], v[0] * v[0] + gh, v[0] * v[1]],
                [v[1], v[0] * v[1], v[1] * v[1] + gh],
            ];
            for i in 0..3 {
                for j in 0..3 {
                    h[i * 3 + j] = rows[i][j] / g;
                }
            }
        }
        SystemId::Mhd => return Err(Error::UnsupportedSystem(sys.id.name())),
    }
    Ok(h)
}
