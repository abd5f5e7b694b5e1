//! Seeded random admissible states shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use stdg::systems::{from_primitive, SystemDescriptor, SystemId};

pub const ALL_SYSTEMS: [SystemId; 4] = [
    SystemId::Euler1D,
    SystemId::Euler3D,
    SystemId::ShallowWater,
    SystemId::Mhd,
];

pub fn descriptor(id: SystemId) -> SystemDescriptor {
    match id {
        SystemId::Euler1D => SystemDescriptor::euler1d(),
        SystemId::Euler3D => SystemDescriptor::euler3d(),
        SystemId::ShallowWater => SystemDescriptor::shallow_water(),
        SystemId::Mhd => SystemDescriptor::mhd(),
    }
}

/// Density, pressure and depth in [0.1, 10], velocities in [-5, 5] and
/// magnetic field components in [-3, 3].
pub fn random_state<R: Rng>(sys: &SystemDescriptor, rng: &mut R) -> Vec<f64> {
    let mut prim = vec![rng.gen_range(0.1..10.0)];
    let nv = sys.velocity_dim();
    prim.extend((0..nv).map(|_| rng.gen_range(-5.0..5.0)));
    if sys.id != SystemId::ShallowWater {
        prim.push(rng.gen_range(0.1..10.0));
    }
    if sys.id == SystemId::Mhd {
        prim.extend((0..3).map(|_| rng.gen_range(-3.0..3.0)));
    }
    from_primitive(sys, &prim).expect("sampled primitive state is admissible")
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
