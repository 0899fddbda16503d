use antisway_core::{
    run, sweep_lengths, Engine, EngineOptions, ExperimentConfig, PlantParams, RunConfig,
};

fn engine() -> Engine {
    ExperimentConfig::default().engine().unwrap()
}

#[test]
fn shipped_config_matches_builtin_defaults() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.json");
    let shipped = ExperimentConfig::load(path).unwrap();
    let defaults = ExperimentConfig {
        sweep: shipped.sweep.clone(),
        ..ExperimentConfig::default()
    };
    assert_eq!(shipped, defaults);
}

#[test]
fn mirrored_start_gives_mirrored_run() {
    let e = engine();
    let base = RunConfig {
        horizon_periods: 4.0,
        phidot0: 0.02,
        ..RunConfig::default()
    };
    let mirrored = RunConfig {
        phi0: -base.phi0,
        phidot0: -base.phidot0,
        ..base
    };
    let a = run(&base, Some(&e)).unwrap();
    let b = run(&mirrored, Some(&e)).unwrap();
    for k in 0..a.times.len() {
        assert!((a.phis[k] + b.phis[k]).abs() < 1e-9);
        assert!((a.controls[k] + b.controls[k]).abs() < 1e-9);
    }
    assert_eq!(a.amplitude, b.amplitude);
}

#[test]
fn controller_is_inert_at_rest() {
    let cfg = RunConfig {
        phi0: 0.0,
        phidot0: 0.0,
        ..RunConfig::default()
    };
    let r = run(&cfg, Some(&engine())).unwrap();
    assert!(r.controls.iter().all(|u| u.abs() < 1e-9));
    assert_eq!(r.settle_time, Some(0.0));
}

#[test]
fn open_loop_never_settles_at_any_length() {
    for l in [0.1, 0.3, 1.0, 2.5, 4.8] {
        let cfg = RunConfig {
            plant: PlantParams::default().with_length(l),
            ..RunConfig::default()
        };
        assert_eq!(run(&cfg, None).unwrap().settle_time, None, "l = {l}");
    }
}

#[test]
fn damping_shortens_open_loop_swing() {
    let cfg = RunConfig {
        plant: PlantParams {
            damping: 0.5,
            ..PlantParams::default()
        },
        ..RunConfig::default()
    };
    let r = run(&cfg, None).unwrap();
    assert!(r.amplitude < 0.1);
    assert!(r.settle_time.is_some());
}

#[test]
fn sweep_is_deterministic_and_input_ordered() {
    let e = Engine::principles_3x3(EngineOptions {
        clamp_inputs: true,
        ..EngineOptions::default()
    });
    let base = RunConfig {
        horizon_periods: 5.0,
        ..RunConfig::default()
    };
    let lengths = [2.0, 0.5, 1.0];
    let a = sweep_lengths(&base, &e, &lengths).unwrap();
    let b = sweep_lengths(&base, &e, &lengths).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lengths, lengths);
    let single = sweep_lengths(&base, &e, &[0.5]).unwrap();
    assert_eq!(single.v[0], a.v[1]);
}
