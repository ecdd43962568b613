use std::f64::consts::LN_2;

use super::df::hop_ber_plc;
use super::{ln_meijer, par_try_map, sum_exp, AnalyticConfig, TruncationCoefficients};
use crate::channel::{gamma_sr_cdf, PlcParams, RfParams};
use crate::error::{Error, Result};
use crate::specfun::{bivariate_meijer_g_log, lgamma, ln_binomial, BivariateMeijerGSpec};

fn check_gain(c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("relay constant C = {c} must be positive")));
    }
    Ok(())
}

/// (component index, l) pairs over which the double sums run.
fn index_pairs(co: &TruncationCoefficients) -> Vec<(usize, usize)> {
    (0..co.components.len())
        .flat_map(|i| (0..=co.l_max()).map(move |l| (i, l)))
        .collect()
}

/// Density of the end-to-end SNR γ_SRγ_RD/(C + γ_RD), as a sum of
/// G^{2,0}_{0,2}[αβCγ | r−l−1, 0] terms.
pub fn af_snr_pdf(plc: &PlcParams, rf: &RfParams, c: f64, gamma: f64, cfg: &AnalyticConfig) -> Result<f64> {
    check_gain(c)?;
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be positive")));
    }
    let co = TruncationCoefficients::new(plc, rf);
    let ln_ac = (co.alpha() * c).ln();
    let k = co.k_factor();
    let mut terms = Vec::new();
    for cc in &co.components {
        let comp = &cc.component;
        let (m, beta) = (comp.m, comp.beta());
        let mf = m as f64;
        let z = beta * co.alpha() * c * gamma;
        let front = comp.weight.ln() + beta.ln() - beta * gamma - lgamma(mf) - k;
        for l in 0..=co.l_max() {
            let lf = l as f64;
            for r in 0..=m {
                let rf_ = r as f64;
                let g = ln_meijer(2, 0, &[], &[rf_ - lf - 1.0, 0.0], z, &cfg.univariate)?;
                let ln = front
                    + ln_binomial(m as u64, r as u64)
                    + (lf + mf - rf_) * (beta * gamma).ln()
                    + co.ln_b(l)
                    + (lf + 1.0) * ln_ac
                    + g;
                terms.push((1.0, ln));
            }
        }
    }
    Ok(sum_exp(terms))
}

/// CDF of the end-to-end SNR: F_SR(γ) plus G^{2,1}_{1,3}[αβCγ | 1; 1+r, 1+l, 0]
/// correction sums.
pub fn af_snr_cdf(plc: &PlcParams, rf: &RfParams, c: f64, gamma: f64, cfg: &AnalyticConfig) -> Result<f64> {
    check_gain(c)?;
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be non-negative")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let co = TruncationCoefficients::new(plc, rf);
    let k = co.k_factor();
    let blocks = par_try_map(index_pairs(&co), |(i, l)| {
        let comp = &co.components[i].component;
        let (m, beta) = (comp.m, comp.beta());
        let z = beta * co.alpha() * c * gamma;
        let front = comp.weight.ln() - beta * gamma - lgamma(m as f64) - k + co.ln_b(l);
        let mut terms = Vec::with_capacity(m as usize);
        for r in 0..m {
            let rf_ = r as f64;
            let g = ln_meijer(2, 1, &[1.0], &[1.0 + rf_, 1.0 + l as f64, 0.0], z, &cfg.univariate)?;
            let ln = front
                + ln_binomial(m as u64 - 1, r as u64)
                + (m as f64 - 1.0 - rf_) * (beta * gamma).ln()
                + g;
            terms.push((1.0, ln));
        }
        Ok(terms)
    })?;
    Ok(gamma_sr_cdf(plc, gamma)? + sum_exp(blocks.into_iter().flatten()))
}

/// Amplify-and-forward outage probability F_o(γ_th).
pub fn op_af(plc: &PlcParams, rf: &RfParams, c: f64, gamma_th: f64, cfg: &AnalyticConfig) -> Result<f64> {
    af_snr_cdf(plc, rf, c, gamma_th, cfg)
}

/// DBPSK error rate ½∫e^{−γ}F_o(γ)dγ: the power-line hop term plus
/// G^{2,2}_{2,3} correction sums.
pub fn ber_af(plc: &PlcParams, rf: &RfParams, c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    check_gain(c)?;
    let co = TruncationCoefficients::new(plc, rf);
    let k = co.k_factor();
    let blocks = par_try_map(index_pairs(&co), |(i, l)| {
        let comp = &co.components[i].component;
        let (m, omega) = (comp.m, comp.omega);
        let mf = m as f64;
        let z = c * mf * co.alpha() / (mf + omega);
        let front = comp.weight.ln() + omega.ln() - LN_2 - lgamma(mf + 1.0) - k + co.ln_b(l);
        let mut terms = Vec::with_capacity(m as usize);
        for r in 0..m {
            let rf_ = r as f64;
            let g = ln_meijer(
                2,
                2,
                &[1.0 + rf_ - mf, 1.0],
                &[1.0 + rf_, 1.0 + l as f64, 0.0],
                z,
                &cfg.univariate,
            )?;
            let ln = front + ln_binomial(m as u64 - 1, r as u64) + (rf_ - mf) * ((mf + omega) / mf).ln() + g;
            terms.push((1.0, ln));
        }
        Ok(terms)
    })?;
    Ok(hop_ber_plc(plc, &cfg.univariate)? + sum_exp(blocks.into_iter().flatten()))
}

/// Ergodic capacity of the amplify-and-forward link in bit/s/Hz, as sums of
/// two-variable G-functions.
///
/// For each mixture component the l-blocks are unimodal in magnitude, so the
/// sum over l stops once two consecutive blocks fall below e^{−41} of the
/// largest term seen.
pub fn acc_af(plc: &PlcParams, rf: &RfParams, c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    check_gain(c)?;
    let co = TruncationCoefficients::new(plc, rf);
    let k = co.k_factor();
    let ac = co.alpha() * c;
    let blocks = par_try_map((0..co.components.len()).collect(), |i| {
        let comp = &co.components[i].component;
        let (m, beta) = (comp.m, comp.beta());
        let mf = m as f64;
        let mut terms = Vec::new();
        let mut peak = f64::NEG_INFINITY;
        let mut quiet = 0;
        for l in 0..=co.l_max() {
            let lf = l as f64;
            let front = comp.weight.ln() - lgamma(mf) - k + co.ln_b(l) + (lf + 1.0) * ac.ln();
            let mut block_max = f64::NEG_INFINITY;
            for r in 0..=m {
                let rf_ = r as f64;
                let spec = BivariateMeijerGSpec::bessel_k(rf_ - mf - lf, rf_ - lf - 1.0, 1.0 / beta, ac)?;
                let g = bivariate_meijer_g_log(&spec, &cfg.bivariate)?;
                let ln = front + ln_binomial(m as u64, r as u64) + g.ln_abs;
                block_max = block_max.max(ln);
                terms.push((g.sign, ln));
            }
            peak = peak.max(block_max);
            quiet = if block_max < peak - 41.0 { quiet + 1 } else { 0 };
            if quiet >= 2 {
                break;
            }
        }
        Ok(terms)
    })?;
    Ok(sum_exp(blocks.into_iter().flatten()) / (2.0 * LN_2))
}

/// Mean end-to-end SNR, as sums of G^{2,1}_{1,2}[αC | r−m−l−1; r−l−1, 0].
pub fn mean_af(plc: &PlcParams, rf: &RfParams, c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    check_gain(c)?;
    let co = TruncationCoefficients::new(plc, rf);
    let k = co.k_factor();
    let ac = co.alpha() * c;
    let mut terms = Vec::new();
    for cc in &co.components {
        let comp = &cc.component;
        let m = comp.m;
        let mf = m as f64;
        let front = comp.weight.ln() + comp.omega.ln() - k - lgamma(mf + 1.0);
        for l in 0..=co.l_max() {
            let lf = l as f64;
            for r in 0..=m {
                let rf_ = r as f64;
                let g = ln_meijer(2, 1, &[rf_ - mf - lf - 1.0], &[rf_ - lf - 1.0, 0.0], ac, &cfg.univariate)?;
                let ln = front + ln_binomial(m as u64, r as u64) + (lf + 1.0) * ac.ln() + co.ln_b(l) + g;
                terms.push((1.0, ln));
            }
        }
    }
    Ok(sum_exp(terms))
}

/// Jensen bound ½ log₂(1 + E[γ_o]).
pub fn acc_af_upper(plc: &PlcParams, rf: &RfParams, c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    Ok(0.5 * mean_af(plc, rf, c, cfg)?.ln_1p() / LN_2)
}
