use chafee_core::connections::{connect_mode1, connect_mode_j, no_homoclinic_probe, ConnectionConfig, ProbeConfig};
use chafee_core::equilibria::{solve_equilibrium, ShootingConfig, Sign};
use chafee_core::{Forcing64, Grid64};

fn grid() -> Grid64 {
    Grid64::new(255).unwrap()
}

fn sinusoidal() -> Forcing64 {
    Forcing64::sinusoidal(2.0, 0.5, 1.0).unwrap()
}

#[test]
fn mode_one_under_constant_forcing_reaches_phi() {
    let g = grid();
    let f = Forcing64::constant(1.0).unwrap();
    let c = connect_mode1(&g, Sign::Plus, 2.0, &f, &ConnectionConfig::default()).unwrap();
    assert!(c.certificate.certified, "{:?}", c.certificate);
    let phi = solve_equilibrium(&g, 2.0, 1.0, 1, Sign::Plus, &ShootingConfig::default()).unwrap();
    assert!(c.trajectory.final_state().sup_distance(&phi.profile) < 1e-4);
    assert!(c.trajectory.states.iter().all(|u| u.values().iter().all(|&v| v >= -1e-10)));
}

#[test]
fn mode_one_negation() {
    let g = grid();
    let f = sinusoidal();
    let cfg = ConnectionConfig::default();
    let plus = connect_mode1(&g, Sign::Plus, 2.0, &f, &cfg).unwrap();
    let minus = connect_mode1(&g, Sign::Minus, 2.0, &f, &cfg).unwrap();
    assert!(plus.certificate.certified && minus.certificate.certified);
    for (a, b) in plus.trajectory.states.iter().zip(&minus.trajectory.states) {
        assert!(a.add(b).sup_norm() < 1e-12);
    }
    assert!(*plus.forward_distance.last().unwrap() < 1e-4);
    assert!(plus.backward_norms.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn mode_two_is_glued_and_pinned() {
    let g = grid();
    let c = connect_mode_j(&g, 2, Sign::Plus, 5.0, &sinusoidal(), &ConnectionConfig::default()).unwrap();
    let cert = &c.certificate;
    assert!(cert.certified, "{cert:?}");
    assert!(cert.gluing_error.unwrap() < 1e-8);
    assert!(cert.zero_error < 1e-5);
    assert!(c.lap_sequence.iter().all(|&l| l == 5));
}

#[test]
fn mode_three_zeros() {
    let g = grid();
    let f = Forcing64::constant(1.0).unwrap();
    let c = connect_mode_j(&g, 3, Sign::Minus, 10.0, &f, &ConnectionConfig::default()).unwrap();
    assert!(c.certificate.certified, "{:?}", c.certificate);
    assert!(c.certificate.zero_error < 1e-5);
}

#[test]
fn probe_finds_no_return() {
    let g = grid();
    for lambda in [2.0, 5.0] {
        let cfg = ProbeConfig {
            random_trials: 2,
            seed: 7,
            ..ProbeConfig::default()
        };
        let r = no_homoclinic_probe(&g, lambda, &sinusoidal(), &cfg).unwrap();
        assert!(r.all_clear(), "{r:?}");
        assert_eq!(r.trials.len(), 2 * if lambda < 4.0 { 1 } else { 2 } + 2);
    }
}
