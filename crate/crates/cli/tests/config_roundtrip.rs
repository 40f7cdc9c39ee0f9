use chafee_cli::config::{ExperimentConfig, ForcingName};
use chafee_cli::CliError;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3..1e3f64, Just(0.0), Just(0.1), Just(1e-7)]
}

prop_compose! {
    fn arb_config()(
        seed in any::<u64>(),
        kind in prop_oneof![
            Just(ForcingName::Constant),
            Just(ForcingName::Sinusoidal),
            Just(ForcingName::AsymptoticallyAutonomous),
            Just(ForcingName::Quasiperiodic),
        ],
        beta0 in finite(),
        amplitude in finite(),
        beta1 in proptest::option::of(finite()),
        n_modes in 3usize..2000,
        dt in finite(),
        lambdas in proptest::collection::vec(finite(), 0..6),
        coefficients in proptest::collection::vec(finite(), 0..8),
        modes in proptest::option::of(proptest::collection::vec(1usize..6, 0..4)),
        runs in 0usize..500,
        antisymmetric in any::<bool>(),
        initial in proptest::option::of("[a-z/]{1,12}\\.csv"),
    ) -> ExperimentConfig {
        let mut c = ExperimentConfig { seed, ..ExperimentConfig::default() };
        c.forcing.kind = kind;
        c.forcing.beta0 = beta0;
        c.forcing.amplitude = amplitude;
        c.forcing.beta1 = beta1;
        c.solver.n_modes = n_modes;
        c.solver.dt = dt;
        c.equilibria.lambdas = lambdas;
        c.evolve.coefficients = coefficients;
        c.evolve.initial_csv = initial;
        c.pullback.modes = modes.clone();
        c.connect.modes = modes;
        c.omega.runs = runs;
        c.omega.antisymmetric = antisymmetric;
        c
    }
}

proptest! {
    #[test]
    fn toml_round_trip_is_lossless(c in arb_config()) {
        let text = c.to_toml().unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        prop_assert_eq!(back, c);
    }
}

#[test]
fn partial_config_keeps_defaults() {
    let c = ExperimentConfig::from_toml("seed = 7\n[omega]\nruns = 3\n").unwrap();
    assert_eq!(c.seed, 7);
    assert_eq!(c.omega.runs, 3);
    assert_eq!(c.solver, ExperimentConfig::default().solver);
}

#[test]
fn unknown_keys_are_config_errors() {
    let err = ExperimentConfig::from_toml("[solver]\nn_mode = 10\n").unwrap_err();
    assert!(matches!(err, CliError::Config(_)));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn tanh_alias_selects_asymptotic_forcing() {
    let c = ExperimentConfig::from_toml("[forcing]\nkind = \"tanh\"\n").unwrap();
    assert_eq!(c.forcing.kind, ForcingName::AsymptoticallyAutonomous);
    assert!(c.forcing.build().is_ok());
}
