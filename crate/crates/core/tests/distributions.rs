use plcrf_core::analytic::{af_snr_cdf, AnalyticConfig};
use plcrf_core::channel::*;
use plcrf_core::montecarlo::{hop_samples, ks_distance, sample_gamma_rd, sample_gamma_sr, PlcMode};
use plcrf_core::oracles::{af_pdf_quadrature, df_pdf, mass_quadrature, QuadratureConfig, RicianLaw};

fn defaults(gbar_db: f64) -> (PlcParams, RfParams) {
    let g = db_to_linear(gbar_db);
    let plc = PlcParams::from_mean_snr(g, 8, 8, 0.2, 5.0, 0.23).unwrap();
    let rf = RfParams::with_default_order(db_to_linear(6.0), g, 1e3 * g).unwrap();
    (plc, rf)
}

#[test]
fn hop_densities_normalize() {
    let q = QuadratureConfig::default();
    for db in [0.0, 15.0, 30.0] {
        let (plc, rf) = defaults(db);
        let m = mass_quadrature(|g| gamma_sr_pdf(&plc, g), plc.mean(), &q).unwrap().value;
        assert!((m - 1.0).abs() < 1e-5, "power-line mass {m} at {db} dB");
        let m = mass_quadrature(|g| rician_pdf_exact(&rf, g), rf.gamma_bar_rd, &q).unwrap().value;
        assert!((m - 1.0).abs() < 1e-5, "radio mass {m} at {db} dB");
        let m = mass_quadrature(|g| rician_pdf_trunc(&rf, g), rf.gamma_bar_rd, &q).unwrap().value;
        assert!((m - 1.0).abs() < 1e-5, "series mass {m} at {db} dB");
        let m = mass_quadrature(|g| df_pdf(&plc, &rf, g, RicianLaw::Exact), plc.mean(), &q)
            .unwrap()
            .value;
        assert!((m - 1.0).abs() < 1e-5, "min-SNR mass {m} at {db} dB");
    }
}

#[test]
fn series_mass_matches_defect() {
    let rf = RfParams::new(db_to_linear(6.0), 10.0, 20).unwrap();
    let q = QuadratureConfig::default();
    let series = RicianSeries::new(&rf);
    let m = mass_quadrature(|g| Ok(series.pdf(g)), 10.0, &q).unwrap().value;
    let defect = mass_defect(rf.k_factor, rf.trunc_k);
    assert!((1.0 - m - defect).abs() < 1e-9, "mass {m}, defect {defect}");
}

#[test]
fn relayed_density_normalizes() {
    let (plc, rf) = defaults(10.0);
    let q = QuadratureConfig {
        rel_tol: 1e-8,
        ..QuadratureConfig::default()
    };
    let m = mass_quadrature(
        |g| Ok(af_pdf_quadrature(&plc, &rf, 1.2, g, RicianLaw::Exact, &q)?.value),
        plc.mean(),
        &q,
    )
    .unwrap()
    .value;
    assert!((m - 1.0).abs() < 1e-5, "mass {m}");
}

fn assert_monotone_cdf<F: Fn(f64) -> f64>(name: &str, cdf: F, scale: f64, origin_tol: f64) {
    assert!(cdf(0.0).abs() <= origin_tol, "{name} at the origin");
    let mut prev = 0.0;
    for i in 0..=60 {
        let x = scale * 10f64.powf(-4.0 + 7.0 * i as f64 / 60.0);
        let f = cdf(x);
        assert!(f >= prev - 1e-15, "{name} decreases at {x}: {f} < {prev}");
        assert!(f <= 1.0 + 1e-12, "{name} exceeds one at {x}");
        prev = f;
    }
    assert!((prev - 1.0).abs() < 1e-9, "{name} upper limit {prev}");
}

#[test]
fn cdfs_monotone_with_limits() {
    let (plc, rf) = defaults(10.0);
    assert_monotone_cdf("power line", |g| gamma_sr_cdf(&plc, g).unwrap(), plc.mean(), 0.0);
    assert_monotone_cdf("rician", |g| rician_cdf_exact(&rf, g).unwrap(), rf.gamma_bar_rd, 0.0);
    // One minus the series survival function starts at the mass defect.
    let defect = mass_defect(rf.k_factor, rf.trunc_k);
    assert_monotone_cdf("rician series", |g| rician_cdf_trunc(&rf, g).unwrap(), rf.gamma_bar_rd, defect);
    assert_monotone_cdf(
        "rician series integral",
        |g| rician_cdf_trunc_integral(&rf, g).unwrap(),
        rf.gamma_bar_rd,
        0.0,
    );
}

#[test]
fn relayed_cdf_monotone() {
    let (plc, rf) = defaults(10.0);
    let cfg = AnalyticConfig::default();
    let mut prev = 0.0;
    for x in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 30.0, 100.0] {
        let f = af_snr_cdf(&plc, &rf, 1.2, x, &cfg).unwrap();
        assert!(f > prev && f <= 1.0 + 1e-12, "at {x}: {f}");
        prev = f;
    }
    assert!(prev > 0.999_999);
}

#[test]
fn hop_samples_pass_ks() {
    let n = 100_000;
    let bound = 4.0 / (n as f64).sqrt();
    let (plc, rf) = defaults(10.0);
    let mut s = hop_samples(n, 11, |r| sample_gamma_sr(&plc, PlcMode::GammaMixture, r));
    let d = ks_distance(&mut s, |g| gamma_sr_cdf(&plc, g)).unwrap();
    assert!(d < bound, "power-line KS {d}");
    let mut s = hop_samples(n, 12, |r| sample_gamma_rd(&rf, r));
    let d = ks_distance(&mut s, |g| rician_cdf_exact(&rf, g)).unwrap();
    assert!(d < bound, "radio KS {d}");
}

#[test]
fn sample_means() {
    let n = 1_000_000;
    let plc = PlcParams::from_mean_snr(10.0, 8, 8, 0.0, 5.0, 0.23).unwrap();
    let s = hop_samples(n, 21, |r| sample_gamma_sr(&plc, PlcMode::GammaMixture, r));
    let (mean, se) = mean_se(&s);
    assert!((mean - plc.omega1).abs() < 3.0 * se, "{mean} ± {se}");

    let s = hop_samples(n, 22, |r| sample_gamma_sr(&plc, PlcMode::GenerativeLn, r));
    let logs: Vec<f64> = s.iter().map(|g| (g / plc.gamma_bar_sr1).ln()).collect();
    let (mean, se) = mean_se(&logs);
    assert!((mean - 2.0 * plc.mu_sr).abs() < 3.0 * se, "{mean} ± {se}");

    let rf = RfParams::new(0.0, 7.0, 20).unwrap();
    let s = hop_samples(n, 23, |r| sample_gamma_rd(&rf, r));
    let (mean, se) = mean_se(&s);
    assert!((mean - 7.0).abs() < 3.0 * se, "{mean} ± {se}");
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
