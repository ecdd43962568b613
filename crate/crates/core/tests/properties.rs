use plcrf_core::analytic::*;
use plcrf_core::channel::*;
use plcrf_core::montecarlo::{estimate_joint, McConfig, PlcMode, CHUNK_SIZE};
use plcrf_core::specfun::{hyp1f1, marcum_q1_pair};
use proptest::prelude::*;

fn params(gbar_db: f64, p_i: f64, k_db: f64) -> (PlcParams, RfParams) {
    let g = db_to_linear(gbar_db);
    let plc = PlcParams::from_mean_snr(g, 8, 8, p_i, 5.0, 0.23).unwrap();
    let rf = RfParams::with_default_order(db_to_linear(k_db), g, 1e3 * g).unwrap();
    (plc, rf)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn db_round_trip(x in -60.0f64..60.0) {
        prop_assert!((linear_to_db(db_to_linear(x)) - x).abs() < 1e-12);
    }

    #[test]
    fn hyp1f1_diagonal(z in -50.0f64..50.0) {
        let v = hyp1f1(1.0, 1.0, z).unwrap();
        prop_assert!(((v - z.exp()) / z.exp()).abs() < 1e-12);
    }

    #[test]
    fn marcum_pair_complementary(a in 0.0f64..30.0, b in 0.0f64..30.0) {
        let (q, p) = marcum_q1_pair(a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&q) && (0.0..=1.0).contains(&p));
        prop_assert!((q + p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mass_defect_shrinks_with_order(k in 0.1f64..20.0, order in 5u32..200) {
        let a = mass_defect(k, order);
        let b = mass_defect(k, order * 2);
        prop_assert!(a >= 0.0 && b <= a + 1e-15);
    }

    #[test]
    fn mixture_cdf_bounded_and_monotone(gbar_db in -5.0f64..35.0, p_i in 0.0f64..1.0, x in 1e-3f64..1e3) {
        let (plc, _) = params(gbar_db, p_i, 6.0);
        let f1 = gamma_sr_cdf(&plc, x).unwrap();
        let f2 = gamma_sr_cdf(&plc, 1.5 * x).unwrap();
        prop_assert!((0.0..=1.0).contains(&f1) && f2 >= f1);
        prop_assert!((f1 + gamma_sr_sf(&plc, x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn df_outage_dominates_each_hop(gbar_db in -5.0f64..35.0, p_i in 0.0f64..1.0, k_db in -5.0f64..12.0, th_db in -10.0f64..10.0) {
        let (plc, rf) = params(gbar_db, p_i, k_db);
        let th = db_to_linear(th_db);
        let op = op_df(&plc, &rf, th, &AnalyticConfig::default()).unwrap();
        let f_sr = gamma_sr_cdf(&plc, th).unwrap();
        let f_rd = rician_cdf_exact(&rf, th).unwrap();
        prop_assert!(op <= 1.0 + 1e-12);
        prop_assert!(op >= f_sr.max(f_rd) - 1e-12);
    }

    #[test]
    fn df_error_rate_in_range(gbar_db in -5.0f64..35.0, p_i in 0.0f64..1.0, k_db in -5.0f64..12.0) {
        let (plc, rf) = params(gbar_db, p_i, k_db);
        let cfg = AnalyticConfig::default();
        let b = ber_df(&plc, &rf, &cfg).unwrap();
        let p1 = hop_ber_plc(&plc, &cfg.univariate).unwrap();
        let p2 = hop_ber_rf_elementary(&rf);
        prop_assert!(b > 0.0 && b <= 0.5);
        prop_assert!(b >= p1.max(p2) - 1e-12);
    }

    #[test]
    fn rf_error_rate_forms_agree(k_db in -10.0f64..15.0, gbar_db in -5.0f64..40.0) {
        let rf = RfParams::new(db_to_linear(k_db), db_to_linear(gbar_db), 40).unwrap();
        let a = hop_ber_rf(&rf).unwrap();
        let b = hop_ber_rf_elementary(&rf);
        prop_assert!(((a - b) / b).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn af_outage_between_first_hop_and_one(gbar_db in 0.0f64..30.0, p_i in 0.0f64..1.0, th_db in -5.0f64..5.0) {
        let (plc, rf) = params(gbar_db, p_i, 6.0);
        let th = db_to_linear(th_db);
        let op = op_af(&plc, &rf, 1.2, th, &AnalyticConfig::default()).unwrap();
        let f_sr = gamma_sr_cdf(&plc, th).unwrap();
        prop_assert!(op >= f_sr - 1e-12 && op <= 1.0 + 1e-12);
    }

    #[test]
    fn monte_carlo_independent_of_workers(seed in any::<u64>(), workers in 2usize..5) {
        let (plc, rf) = params(10.0, 0.2, 6.0);
        let mut mc = McConfig { n_samples: 2 * CHUNK_SIZE + 17, seed, plc_mode: PlcMode::GammaMixture, workers: 1 };
        let a = estimate_joint(&plc, &rf, 1.2, 1.0, &mc).unwrap();
        mc.workers = workers;
        let b = estimate_joint(&plc, &rf, 1.2, 1.0, &mc).unwrap();
        prop_assert_eq!(a, b);
    }
}
