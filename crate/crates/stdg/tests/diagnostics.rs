use approx::assert_abs_diff_eq;
use stdg::diagnostics::*;
use stdg::presets::{conservative_config, entropy_conservation, kep_check, SweepConfig};
use stdg::problems::*;
use stdg::sbp::lgl_rule;
use stdg::solver::march::march_with;
use stdg::solver::*;
use stdg::systems::euler1d::Euler1D;

fn disc(n: usize, k_s: usize, domain: (f64, f64)) -> Discretization {
    Discretization::new(1, n, MeshConfig::new(k_s, 1, domain, 1.0).unwrap(), Euler1D::default()).unwrap()
}

#[test]
fn uniform_reference_gas_has_zero_total_entropy() {
    let d = disc(3, 4, (0.0, 1.0));
    let u = d.euler.from_primitive(1.0, 0.0, 1.0);
    let face = vec![u; 16];
    assert_abs_diff_eq!(total_entropy(&d, &face).unwrap(), 0.0, epsilon = 1e-15);
}

#[test]
fn total_entropy_scales_with_the_jacobian() {
    let e = Euler1D::default();
    let u = e.from_primitive(1.3, 0.4, 0.7);
    let face = vec![u; 12];
    let a = total_entropy(&disc(2, 4, (0.0, 1.0)), &face).unwrap();
    let b = total_entropy(&disc(2, 4, (0.0, 2.0)), &face).unwrap();
    assert_abs_diff_eq!(b, 2.0 * a, epsilon = 1e-14);
}

#[test]
fn single_element_constant_entropy_integrates_to_length() {
    let d = disc(1, 1, (0.0, 0.75));
    let u = d.euler.from_primitive(0.8, -0.3, 1.9);
    let c = d.euler.entropy(&d.euler.decode(&u).unwrap());
    assert_abs_diff_eq!(total_entropy(&d, &[u, u]).unwrap(), 0.75 * c, epsilon = 1e-15);
    let kappa = 0.5 * 0.8 * 0.09;
    assert_abs_diff_eq!(
        total_kinetic_energy(&d, &[u, u]).unwrap(),
        0.75 * kappa,
        epsilon = 1e-15
    );
}

#[test]
fn eoc_examples() {
    assert!((eoc(6.27e-3, 7.79e-4, 2.0) - 3.0).abs() < 0.05);
    assert_eq!(eoc(1.0, 0.5, 2.0), 1.0);
    let ladder = eoc_ladder(&[1.0, 0.125, 0.015625]);
    assert_eq!(ladder.len(), 2);
    assert!(ladder.iter().all(|v| (v - 3.0).abs() < 1e-14));
}

#[test]
fn l2_error_vanishes_on_polynomial_data() {
    let d = disc(3, 5, (0.0, 1.0));
    let fine = lgl_rule(6).unwrap();
    let profile = |x: f64| [1.0 + x, 0.5 - x * x, 2.0 + x * x * x];
    let face: Vec<_> = (0..5)
        .flat_map(|k| (0..4).map(move |i| (k, i)))
        .map(|(k, i)| profile(d.x(k, i)))
        .collect();
    let err = l2_error_on(&d, &fine, &face, profile);
    assert!(err.iter().all(|e| *e <= 1e-13), "{err:?}");
}

#[test]
fn l2_error_of_a_constant_offset() {
    let d = disc(2, 3, (0.0, 4.0));
    let fine = lgl_rule(4).unwrap();
    let face = vec![[0.0; 3]; 9];
    let err = l2_error_on(&d, &fine, &face, |_| [1.0, -2.0, 0.5]);
    // sqrt(integral of c^2 over a domain of length 4) = 2|c|.
    for (e, want) in err.iter().zip([2.0, 4.0, 1.0]) {
        assert_abs_diff_eq!(*e, want, epsilon = 1e-14);
    }
}

#[test]
fn constant_state_run_has_vanishing_balances() {
    let u = Euler1D::default().from_primitive(1.2, 0.6, 0.9);
    for cfg in [SolverConfig::default(), conservative_config()] {
        let run = march_with(&constant_euler(u), 2, 2, 3, 2, cfg).unwrap();
        let rec = DiagnosticsRecord::from_run(&run).unwrap();
        assert!(rec.delta_s.abs() <= 1e-14);
        assert_eq!(rec.delta_s, rec.s_final - rec.s_initial);
        for t in [
            rec.initial_projection_term_s,
            rec.initial_projection_term_k,
            rec.pressure_work_volume,
            rec.pressure_work_surface,
            rec.xi_s,
            rec.theta_k,
        ] {
            assert!(t.abs() <= 1e-13, "{rec:?}");
        }
        assert!(rec.l2_errors.unwrap().iter().all(|e| *e <= 1e-13));
        assert_eq!(delta_s(&run).unwrap(), rec.delta_s);
        assert_eq!(xi_s(&run).unwrap(), rec.xi_s);
        assert_eq!(theta_k(&run).unwrap(), rec.theta_k);
        assert_eq!(entropy_trace(&run).unwrap().len(), 3);
    }
}

#[test]
fn entropy_preservation_on_first_and_last_configs() {
    for (c, paper) in [
        (
            SweepConfig {
                k_t: 5,
                k_s: 4,
                m: 3,
                n: 2,
            },
            -2.54e-15_f64,
        ),
        (
            SweepConfig {
                k_t: 1,
                k_s: 8,
                m: 6,
                n: 4,
            },
            1.34e-15,
        ),
    ] {
        let rec = entropy_conservation(c).unwrap();
        assert!(rec.xi_s.abs() <= 1e-11, "{c:?}: {}", rec.xi_s);
        assert!(paper.abs() <= 1e-11);
        // The balance is nontrivial: both terms are far from round-off.
        assert!(rec.delta_s.abs() > 1e-6 && rec.initial_projection_term_s.abs() > 1e-6);
    }
}

#[test]
fn kinetic_energy_preservation_on_first_and_last_configs() {
    for (c, paper) in [
        (
            SweepConfig {
                k_t: 5,
                k_s: 4,
                m: 3,
                n: 2,
            },
            1.04e-15_f64,
        ),
        (
            SweepConfig {
                k_t: 1,
                k_s: 8,
                m: 6,
                n: 4,
            },
            -5.20e-15,
        ),
    ] {
        let rec = kep_check(c).unwrap();
        assert!(rec.theta_k.abs() <= 1e-11, "{c:?}: {}", rec.theta_k);
        assert!(paper.abs() <= 1e-11);
    }
}

/// With upwind temporal interfaces the kinetic-energy balance becomes an
/// inequality. The shock data has a velocity field that develops, unlike the
/// density wave, so the upwind dissipation is visible.
#[test]
fn upwind_kinetic_energy_balance_is_an_inequality() {
    let cfg = SolverConfig {
        spatial_flux: SpatialFlux::Eckep,
        ..Default::default()
    };
    let run = march_with(&shock_euler(), 3, 2, 4, 5, cfg).unwrap();
    let rec = DiagnosticsRecord::from_run(&run).unwrap();
    assert!(rec.theta_k <= 1e-11, "{rec:?}");
    assert!(
        rec.theta_k < -1e-8,
        "the upwind dissipation should be visible: {}",
        rec.theta_k
    );
}

#[test]
fn shock_run_entropy_trace_is_monotone() {
    let run = march_with(&shock_euler(), 3, 2, 4, 4, SolverConfig::default()).unwrap();
    let trace = entropy_trace(&run).unwrap();
    assert_eq!(trace.len(), 5);
    assert_eq!(trace[0], (0.0, 0.0));
    assert!(trace.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12));
    assert!(trace.iter().all(|(_, d)| *d <= 1e-12));
    assert_abs_diff_eq!(trace[4].0, 1.0, epsilon = 1e-15);
}
