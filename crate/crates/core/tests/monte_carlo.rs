use plcrf_core::analytic::*;
use plcrf_core::channel::*;
use plcrf_core::montecarlo::*;

fn setup() -> (PlcParams, RfParams) {
    let g = 10.0;
    let plc = PlcParams::from_mean_snr(g, 8, 8, 0.2, 5.0, 0.23).unwrap();
    let rf = RfParams::with_default_order(db_to_linear(6.0), g, 1e3 * g).unwrap();
    (plc, rf)
}

fn mc(n: u64) -> McConfig {
    McConfig {
        n_samples: n,
        seed: 99,
        plc_mode: PlcMode::GammaMixture,
        workers: 2,
    }
}

#[test]
fn analytic_values_within_three_standard_errors() {
    let (plc, rf) = setup();
    let cfg = AnalyticConfig::default();
    let j = estimate_joint(&plc, &rf, 1.2, 1.0, &mc(1_000_000)).unwrap();
    let checks = [
        ("df op", op_df(&plc, &rf, 1.0, &cfg).unwrap(), j.df.op),
        ("df ber", ber_df(&plc, &rf, &cfg).unwrap(), j.df.ber),
        ("df acc", acc_df(&plc, &rf, &cfg).unwrap(), j.df.acc),
        ("af op", op_af(&plc, &rf, 1.2, 1.0, &cfg).unwrap(), j.af.op),
        ("af ber", ber_af(&plc, &rf, 1.2, &cfg).unwrap(), j.af.ber),
    ];
    for (name, value, est) in checks {
        assert!(est.covers(value, 3.0), "{name}: {value} vs {} ± {}", est.mean, est.std_error);
        assert_eq!(est.n, 1_000_000);
    }
}

#[test]
fn single_metric_wrappers_agree_with_joint_run() {
    let (plc, rf) = setup();
    let cfg = mc(100_000);
    let relay = RelayConfig::new(Protocol::Af, 1.2).unwrap();
    let j = estimate_joint(&plc, &rf, 1.2, 1.0, &cfg).unwrap();
    assert_eq!(estimate_op(&plc, &rf, &relay, 1.0, &cfg).unwrap(), j.af.op);
    assert_eq!(estimate_ber(&plc, &rf, &relay, &cfg).unwrap(), j.af.ber);
    assert_eq!(estimate_acc(&plc, &rf, &relay, &cfg).unwrap(), j.af.acc);
}

#[test]
fn same_seed_same_bits_and_new_seed_new_bits() {
    let (plc, rf) = setup();
    let a = estimate_joint(&plc, &rf, 1.2, 1.0, &mc(200_000)).unwrap();
    let b = estimate_joint(&plc, &rf, 1.2, 1.0, &mc(200_000)).unwrap();
    assert_eq!(a, b);
    let other = McConfig { seed: 100, ..mc(200_000) };
    let c = estimate_joint(&plc, &rf, 1.2, 1.0, &other).unwrap();
    assert_ne!(a.df.acc.mean, c.df.acc.mean);
}

#[test]
fn generative_mode_runs_and_differs() {
    let (plc, rf) = setup();
    let cfg = McConfig {
        plc_mode: PlcMode::GenerativeLn,
        ..mc(200_000)
    };
    let g = estimate_joint(&plc, &rf, 1.2, 1.0, &cfg).unwrap();
    assert!(g.df.op.mean > 0.0 && g.df.op.mean < 1.0);
    assert!(g.af.acc.mean > 0.0);
}

#[test]
fn rejects_invalid_config() {
    let (plc, rf) = setup();
    let bad = McConfig { workers: 0, ..mc(1000) };
    assert!(estimate_joint(&plc, &rf, 1.2, 1.0, &bad).is_err());
    assert!(estimate_joint(&plc, &rf, -1.0, 1.0, &mc(1000)).is_err());
}
