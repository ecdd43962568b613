use std::f64::consts::LN_2;

use super::{ln_meijer, par_try_map, sum_exp, AnalyticConfig, TruncationCoefficients};
use crate::channel::{gamma_sr_cdf, rician_cdf_exact, rician_cdf_trunc, PlcParams, RfParams, RicianLaw};
use crate::error::{Error, Result};
use crate::specfun::{bivariate_meijer_g_log, hyp1f1, lgamma, BivariateMeijerGSpec, Precision};

fn check_threshold(gamma_th: f64) -> Result<()> {
    if !(gamma_th >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold {gamma_th} must be non-negative")));
    }
    Ok(())
}

/// Outage probability F_SR + F_RD − F_SR·F_RD of min(γ_SR, γ_RD).
pub fn op_df(plc: &PlcParams, rf: &RfParams, gamma_th: f64, cfg: &AnalyticConfig) -> Result<f64> {
    check_threshold(gamma_th)?;
    let f_sr = gamma_sr_cdf(plc, gamma_th)?;
    let f_rd = match cfg.df_rician {
        RicianLaw::Exact => rician_cdf_exact(rf, gamma_th)?,
        RicianLaw::Truncated => rician_cdf_trunc(rf, gamma_th)?,
    };
    Ok(f_sr + f_rd - f_sr * f_rd)
}

/// High-SNR outage: leading power terms of both hop CDFs.
pub fn op_df_asymptotic(plc: &PlcParams, rf: &RfParams, gamma_th: f64) -> Result<f64> {
    check_threshold(gamma_th)?;
    let plc_term: f64 = plc
        .components()
        .iter()
        .filter(|c| c.weight > 0.0)
        .map(|c| {
            let m = c.mf();
            c.weight * (m * (c.beta() * gamma_th).ln() - lgamma(m + 1.0)).exp()
        })
        .sum();
    let k = rf.k_factor;
    Ok(plc_term + (1.0 + k) * gamma_th / (rf.gamma_bar_rd * k.exp()))
}

/// DBPSK error rate of the power-line hop, Σ w/(2Γ(m)) G^{1,2}_{2,2}[β | 0,1; m,0].
pub fn hop_ber_plc(plc: &PlcParams, prec: &Precision) -> Result<f64> {
    let mut total = 0.0;
    for c in plc.components().iter().filter(|c| c.weight > 0.0) {
        let m = c.mf();
        let g = ln_meijer(1, 2, &[0.0, 1.0], &[m, 0.0], c.beta(), prec)?;
        total += 0.5 * c.weight * (g - lgamma(m)).exp();
    }
    Ok(total)
}

/// DBPSK error rate of the Rician hop through the confluent hypergeometric form.
pub fn hop_ber_rf(rf: &RfParams) -> Result<f64> {
    let k = rf.k_factor;
    let d = 1.0 + k + rf.gamma_bar_rd;
    let f = hyp1f1(1.0, 1.0, k * (k + 1.0) / d)?;
    Ok((1.0 + k) / (2.0 * d) * (-k).exp() * f)
}

/// The same error rate with ₁F₁(1; 1; z) = e^z applied:
/// (1+K)/(2(1+K+γ̄)) · e^{−Kγ̄/(1+K+γ̄)}.
pub fn hop_ber_rf_elementary(rf: &RfParams) -> f64 {
    let k = rf.k_factor;
    let d = 1.0 + k + rf.gamma_bar_rd;
    (1.0 + k) / (2.0 * d) * (-k * rf.gamma_bar_rd / d).exp()
}

/// DBPSK error rate of the decode-and-forward link, P₁ + P₂ − 2P₁P₂.
pub fn ber_df(plc: &PlcParams, rf: &RfParams, cfg: &AnalyticConfig) -> Result<f64> {
    let p1 = hop_ber_plc(plc, &cfg.univariate)?;
    let p2 = hop_ber_rf(rf)?;
    Ok(p1 + p2 - 2.0 * p1 * p2)
}

/// High-SNR error rate P₁ᴬ + P₂ᴬ.
pub fn ber_df_asymptotic(plc: &PlcParams, rf: &RfParams) -> Result<f64> {
    let p1: f64 = plc
        .components()
        .iter()
        .filter(|c| c.weight > 0.0)
        .map(|c| 0.5 * c.weight * (c.mf() * c.beta().ln()).exp())
        .sum();
    let k = rf.k_factor;
    Ok(p1 + (1.0 + k) / (2.0 * rf.gamma_bar_rd * k.exp()))
}

/// The four integrals ∫ ln(1+γ)·(·) dγ making up the decode-and-forward
/// capacity: C₁ against f_SR, C₂ against f_RD, C₃ against f_SR·F_RD and C₄
/// against F_SR·f_RD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfCapacityTerms {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// C₁ − C₃, summed directly.
    pub c1_minus_c3: f64,
}

impl DfCapacityTerms {
    /// (C₁ + C₂ − C₃ − C₄)/(2 ln 2).
    pub fn capacity(&self) -> f64 {
        (self.c1_minus_c3 + self.c2 - self.c4) / (2.0 * LN_2)
    }
}

/// T_r = Σ_{l≥r} l! B_l in log form.
fn ln_tail_weights(co: &TruncationCoefficients) -> Vec<f64> {
    let l_max = co.l_max();
    let mut out = vec![f64::NEG_INFINITY; l_max + 1];
    let mut acc = 0.0;
    let scale = co.k_factor();
    for r in (0..=l_max).rev() {
        // Stored scaled by e^{−K} to stay in range.
        acc += (co.ln_b(r) + lgamma(r as f64 + 1.0) - scale).exp();
        out[r] = acc.ln() + scale;
    }
    out
}

pub fn acc_df_terms(plc: &PlcParams, rf: &RfParams, cfg: &AnalyticConfig) -> Result<DfCapacityTerms> {
    let co = TruncationCoefficients::new(plc, rf);
    let prec = &cfg.univariate;
    let alpha = co.alpha();
    let k = co.k_factor();
    let tails = ln_tail_weights(&co);

    let mut c1 = 0.0;
    let mut c1_minus_c3 = 0.0;
    let mut c4 = 0.0;
    for cc in &co.components {
        let c = &cc.component;
        let (m, beta) = (c.mf(), c.beta());
        let g1 = ln_meijer(1, 3, &[1.0 - m, 1.0, 1.0], &[1.0, 0.0], 1.0 / beta, prec)?;
        c1 += c.weight * (g1 - lgamma(m)).exp();

        let front = c.weight.ln() + m * beta.ln() - lgamma(m) - k;
        let mut terms = Vec::with_capacity(co.l_max() + 1);
        for r in 0..=co.l_max() {
            let g = ln_meijer(1, 3, &cc.varsigma[r], &[1.0, 0.0], 1.0 / (beta + alpha), prec)?;
            terms.push((1.0, front + tails[r] + co.ln_theta[r] + cc.ln_w[r] + g));
        }
        c1_minus_c3 += sum_exp(terms);

        let terms = par_try_map((0..=co.l_max()).collect(), |l| {
            let spec = BivariateMeijerGSpec::lower_gamma(-(l as f64), m, 1.0 / alpha, beta / alpha)?;
            let g = bivariate_meijer_g_log(&spec, &cfg.bivariate)?;
            Ok((g.sign, c.weight.ln() - lgamma(m) - k + co.ln_b(l) + g.ln_abs))
        })?;
        c4 += sum_exp(terms);
    }

    let mut terms = Vec::with_capacity(co.l_max() + 1);
    for l in 0..=co.l_max() {
        let g = ln_meijer(1, 3, &[-(l as f64), 1.0, 1.0], &[1.0, 0.0], 1.0 / alpha, prec)?;
        terms.push((1.0, -k + co.ln_b(l) + g));
    }
    let c2 = sum_exp(terms);

    Ok(DfCapacityTerms {
        c1,
        c2,
        c3: c1 - c1_minus_c3,
        c4,
        c1_minus_c3,
    })
}

/// Ergodic capacity of the decode-and-forward link in bit/s/Hz.
pub fn acc_df(plc: &PlcParams, rf: &RfParams, cfg: &AnalyticConfig) -> Result<f64> {
    Ok(acc_df_terms(plc, rf, cfg)?.capacity())
}

/// Mean of min(γ_SR, γ_RD) under the series Rician law.
pub fn mean_df(plc: &PlcParams, rf: &RfParams, cfg: &AnalyticConfig) -> Result<f64> {
    let co = TruncationCoefficients::new(plc, rf);
    let alpha = co.alpha();
    let k = co.k_factor();
    let tails = ln_tail_weights(&co);
    let mut terms = Vec::new();
    // ∫ γ f_RD
    for l in 0..=co.l_max() {
        terms.push((1.0, -alpha.ln() - k + co.ln_b(l) + lgamma(l as f64 + 2.0)));
    }
    for cc in &co.components {
        let c = &cc.component;
        let (m, beta) = (c.mf(), c.beta());
        // ∫ γ f_SR (1 − F_RD)
        let front = c.weight.ln() + m * beta.ln() - lgamma(m) - k;
        for r in 0..=co.l_max() {
            let rf_ = r as f64;
            let ln_g = lgamma(m + rf_ + 1.0) - (m + rf_ + 1.0) * (beta + alpha).ln();
            terms.push((1.0, front + tails[r] + co.ln_theta[r] + ln_g));
        }
        // −∫ γ F_SR f_RD
        for l in 0..=co.l_max() {
            let g = ln_meijer(1, 2, &[-(l as f64) - 1.0, 1.0], &[m, 0.0], beta / alpha, &cfg.univariate)?;
            terms.push((-1.0, c.weight.ln() - alpha.ln() - lgamma(m) - k + co.ln_b(l) + g));
        }
    }
    Ok(sum_exp(terms))
}

/// Jensen bound ½ log₂(1 + E[min(γ_SR, γ_RD)]).
pub fn acc_df_upper(plc: &PlcParams, rf: &RfParams, cfg: &AnalyticConfig) -> Result<f64> {
    Ok(0.5 * mean_df(plc, rf, cfg)?.ln_1p() / LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::db_to_linear;
    use approx::assert_relative_eq;

    fn setup(gbar: f64, p_i: f64) -> (PlcParams, RfParams) {
        let plc = PlcParams::from_mean_snr(gbar, 8, 8, p_i, 5.0, 0.23).unwrap();
        let rf = RfParams::with_default_order(db_to_linear(6.0), gbar, 10.0 * gbar).unwrap();
        (plc, rf)
    }

    #[test]
    fn outage_vanishes_at_zero_threshold() {
        let (plc, rf) = setup(10.0, 0.2);
        assert_eq!(op_df(&plc, &rf, 0.0, &AnalyticConfig::default()).unwrap(), 0.0);
        assert_eq!(op_df_asymptotic(&plc, &rf, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn outage_saturates_with_first_hop() {
        let (plc, rf) = setup(1.0, 0.2);
        let op = op_df(&plc, &rf, 1e4, &AnalyticConfig::default()).unwrap();
        assert_relative_eq!(op, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn outage_truncated_switch_agrees_at_default_order() {
        let (plc, rf) = setup(10.0, 0.2);
        let exact = op_df(&plc, &rf, 1.0, &AnalyticConfig::default()).unwrap();
        let cfg = AnalyticConfig {
            df_rician: RicianLaw::Truncated,
            ..Default::default()
        };
        assert_relative_eq!(op_df(&plc, &rf, 1.0, &cfg).unwrap(), exact, max_relative = 1e-10);
    }

    #[test]
    fn asymptotic_outage_single_component() {
        let (plc, rf) = setup(100.0, 0.0);
        let th = 1.0;
        let expect = (8.0 * th / 100.0f64).powi(8) / 40320.0 + (1.0 + rf.k_factor) * th / (100.0 * rf.k_factor.exp());
        assert_relative_eq!(op_df_asymptotic(&plc, &rf, th).unwrap(), expect, max_relative = 1e-13);
        let rf0 = RfParams::new(0.0, 100.0, 20).unwrap();
        let plc_term = (8.0 * th / 100.0f64).powi(8) / 40320.0;
        assert_relative_eq!(
            op_df_asymptotic(&plc, &rf0, th).unwrap() - plc_term,
            th / 100.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn rf_hop_ber_paths_agree() {
        for &(k, g) in &[(0.0, 1.0), (3.98, 10.0), (10.0, 1000.0), (1.0, 0.1)] {
            let rf = RfParams::new(k, g, 20).unwrap();
            assert_relative_eq!(hop_ber_rf(&rf).unwrap(), hop_ber_rf_elementary(&rf), max_relative = 1e-12);
        }
    }

    #[test]
    fn plc_hop_ber_closed_form() {
        // ½Σ w (β/(1+β))^m
        let (plc, _) = setup(10.0, 0.2);
        let expect: f64 = plc
            .components()
            .iter()
            .map(|c| 0.5 * c.weight * (c.beta() / (1.0 + c.beta())).powi(c.m as i32))
            .sum();
        assert_relative_eq!(hop_ber_plc(&plc, &Precision::default()).unwrap(), expect, max_relative = 1e-10);
    }

    #[test]
    fn asymptotic_ber_rayleigh_exponential() {
        let g = 50.0;
        let plc = PlcParams::new(1, 1, g, g, 0.0, 0.0, 0.0, 0.23, g).unwrap();
        let rf = RfParams::new(0.0, g, 20).unwrap();
        assert_relative_eq!(ber_df_asymptotic(&plc, &rf).unwrap(), 1.0 / g, max_relative = 1e-14);
    }

    #[test]
    fn capacity_terms_collapse_without_impulses() {
        let (plc, rf) = setup(10.0, 0.0);
        let t = acc_df_terms(&plc, &rf, &AnalyticConfig::default()).unwrap();
        assert!(t.c1 > 0.0 && t.c2 > 0.0 && t.c3 > 0.0 && t.c4 > 0.0);
        assert_relative_eq!(t.c1 - t.c3, t.c1_minus_c3, max_relative = 1e-9);
    }

    #[test]
    fn jensen_bound_holds() {
        let cfg = AnalyticConfig::default();
        for &g in &[1.0, 100.0] {
            let (plc, rf) = setup(g, 0.2);
            assert!(acc_df(&plc, &rf, &cfg).unwrap() <= acc_df_upper(&plc, &rf, &cfg).unwrap());
        }
    }
}
