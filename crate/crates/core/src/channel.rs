//! Statistical models of the two hops.
//!
//! Source→relay is a power-line link: log-normal amplitude fading with
//! Bernoulli–Gaussian impulsive noise, whose SNR is modelled as a two-component
//! Gamma mixture. Relay→destination is a Rician radio link, available both in
//! exact form and as the finite Bessel-series approximation the amplify-and-
//! forward closed forms are built on.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{
    gamma_p, gamma_q, lgamma, ln_bessel_i, marcum_q1_pair, meijer_g_contour, MeijerGSpec, Precision,
};

/// Converts a decibel value to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear value to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Gamma-mixture model of the power-line SNR plus the log-normal parameters
/// of the underlying fading amplitude.
///
/// Component 1 (weight 1 − p_i) is background noise only; component 2
/// (weight p_i) is background plus impulsive noise.
#[derive(Debug, Clone, PartialEq)]
pub struct PlcParams {
    pub m1: u32,
    pub m2: u32,
    pub omega1: f64,
    pub omega2: f64,
    pub p_i: f64,
    pub eta: f64,
    pub mu_sr: f64,
    pub sigma_sr: f64,
    pub gamma_bar_sr1: f64,
}

impl PlcParams {
    /// Validated constructor.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m1: u32,
        m2: u32,
        omega1: f64,
        omega2: f64,
        p_i: f64,
        eta: f64,
        mu_sr: f64,
        sigma_sr: f64,
        gamma_bar_sr1: f64,
    ) -> Result<Self> {
        let p = Self {
            m1,
            m2,
            omega1,
            omega2,
            p_i,
            eta,
            mu_sr,
            sigma_sr,
            gamma_bar_sr1,
        };
        p.validate()?;
        Ok(p)
    }

    /// Mixture with mean SNR `gamma_bar` (linear) in the background-noise state,
    /// Ω₁ = γ̄, Ω₂ = γ̄/(1+η), and log-normal parameters normalized so that
    /// E|h|² = 1.
    pub fn from_mean_snr(gamma_bar: f64, m1: u32, m2: u32, p_i: f64, eta: f64, sigma_sr: f64) -> Result<Self> {
        Self::new(
            m1,
            m2,
            gamma_bar,
            gamma_bar / (1.0 + eta),
            p_i,
            eta,
            -sigma_sr * sigma_sr,
            sigma_sr,
            gamma_bar,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.m1 < 1 || self.m2 < 1 {
            return bad(format!("shape parameters must be at least 1 (m1 = {}, m2 = {})", self.m1, self.m2));
        }
        if !(self.omega1 > 0.0 && self.omega1.is_finite() && self.omega2 > 0.0 && self.omega2.is_finite()) {
            return bad(format!("mean powers must be positive (omega1 = {}, omega2 = {})", self.omega1, self.omega2));
        }
        if !(0.0..=1.0).contains(&self.p_i) {
            return bad(format!("impulse probability {} outside [0, 1]", self.p_i));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return bad(format!("impulse-to-background ratio {} must be non-negative", self.eta));
        }
        if !(self.sigma_sr > 0.0 && self.sigma_sr.is_finite() && self.mu_sr.is_finite()) {
            return bad(format!("log-normal parameters invalid (mu = {}, sigma = {})", self.mu_sr, self.sigma_sr));
        }
        if !(self.gamma_bar_sr1 > 0.0 && self.gamma_bar_sr1.is_finite()) {
            return bad(format!("mean SNR {} must be positive", self.gamma_bar_sr1));
        }
        Ok(())
    }

    /// Mean SNR in the impulsive state, γ̄_SR1/(1+η).
    pub fn gamma_bar_sr2(&self) -> f64 {
        self.gamma_bar_sr1 / (1.0 + self.eta)
    }

    /// The two mixture components as (weight, shape m, rate β = m/Ω).
    pub fn components(&self) -> [MixtureComponent; 2] {
        [
            MixtureComponent {
                weight: 1.0 - self.p_i,
                m: self.m1,
                omega: self.omega1,
            },
            MixtureComponent {
                weight: self.p_i,
                m: self.m2,
                omega: self.omega2,
            },
        ]
    }

    /// Mean of the mixture, (1 − p_i)Ω₁ + p_iΩ₂.
    pub fn mean(&self) -> f64 {
        (1.0 - self.p_i) * self.omega1 + self.p_i * self.omega2
    }
}

/// One Gamma component of the power-line SNR mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub m: u32,
    pub omega: f64,
}

impl MixtureComponent {
    pub fn mf(&self) -> f64 {
        self.m as f64
    }

    /// Rate parameter m/Ω.
    pub fn beta(&self) -> f64 {
        self.m as f64 / self.omega
    }
}

/// Rician radio link.
#[derive(Debug, Clone, PartialEq)]
pub struct RfParams {
    pub k_factor: f64,
    pub gamma_bar_rd: f64,
    pub trunc_k: u32,
}

impl RfParams {
    pub fn new(k_factor: f64, gamma_bar_rd: f64, trunc_k: u32) -> Result<Self> {
        let p = Self {
            k_factor,
            gamma_bar_rd,
            trunc_k,
        };
        p.validate()?;
        Ok(p)
    }

    /// Uses [`default_truncation_order`] for a sweep reaching `gamma_max`.
    pub fn with_default_order(k_factor: f64, gamma_bar_rd: f64, gamma_max: f64) -> Result<Self> {
        Self::new(k_factor, gamma_bar_rd, 1)?;
        Self::new(k_factor, gamma_bar_rd, default_truncation_order(k_factor, gamma_bar_rd, gamma_max))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_factor >= 0.0 && self.k_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!("Rician factor {} must be non-negative", self.k_factor)));
        }
        if !(self.gamma_bar_rd > 0.0 && self.gamma_bar_rd.is_finite()) {
            return Err(Error::InvalidParameter(format!("mean SNR {} must be positive", self.gamma_bar_rd)));
        }
        if self.trunc_k < 1 {
            return Err(Error::InvalidParameter("truncation order must be at least 1".into()));
        }
        Ok(())
    }

    /// (K+1)/γ̄_RD.
    pub fn alpha(&self) -> f64 {
        (self.k_factor + 1.0) / self.gamma_bar_rd
    }

    /// Argument 2√(K(K+1)γ/γ̄) of the Bessel function in the Rician density.
    pub fn bessel_argument(&self, gamma: f64) -> f64 {
        2.0 * (self.k_factor * self.alpha() * gamma).sqrt()
    }
}

/// Relaying protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    #[serde(alias = "DF")]
    Df,
    #[serde(alias = "AF")]
    Af,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Df => "df",
            Protocol::Af => "af",
        }
    }
}

/// Relay protocol and the fixed-gain constant C of γ_o = γ_SRγ_RD/(C + γ_RD).
/// The amplifier gain itself never enters a formula and is kept only as a label.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayConfig {
    pub protocol: Protocol,
    pub c_const: f64,
    pub gain: Option<f64>,
}

impl RelayConfig {
    pub fn new(protocol: Protocol, c_const: f64) -> Result<Self> {
        if protocol == Protocol::Af && !(c_const > 0.0 && c_const.is_finite()) {
            return Err(Error::InvalidParameter(format!("relay constant C = {c_const} must be positive")));
        }
        Ok(Self {
            protocol,
            c_const,
            gain: None,
        })
    }
}

/// Log-normal density of the power-line fading amplitude.
pub fn plc_fading_pdf(params: &PlcParams, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(domain("plc_fading_pdf", format!("h = {h} must be positive")));
    }
    let s2 = params.sigma_sr * params.sigma_sr;
    let z = h.ln() - params.mu_sr;
    Ok((-z * z / (2.0 * s2)).exp() / (h * (2.0 * PI * s2).sqrt()))
}

/// Bernoulli–Gaussian noise density (real part): background variance σ_b²
/// with probability 1 − p_i, σ_b²(1+η) with probability p_i.
pub fn plc_noise_pdf(params: &PlcParams, n: f64, sigma_b: f64) -> Result<f64> {
    if !(sigma_b > 0.0) {
        return Err(domain("plc_noise_pdf", format!("sigma_b = {sigma_b} must be positive")));
    }
    let gauss = |var: f64| (-n * n / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
    let v = sigma_b * sigma_b;
    Ok((1.0 - params.p_i) * gauss(v) + params.p_i * gauss(v * (1.0 + params.eta)))
}

/// Density of the power-line SNR.
pub fn gamma_sr_pdf(params: &PlcParams, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(domain("gamma_sr_pdf", format!("gamma = {gamma} must be positive")));
    }
    Ok(params
        .components()
        .iter()
        .filter(|c| c.weight > 0.0)
        .map(|c| {
            let (m, b) = (c.mf(), c.beta());
            c.weight * (m * b.ln() + (m - 1.0) * gamma.ln() - b * gamma - lgamma(m)).exp()
        })
        .sum())
}

/// CDF of the power-line SNR: mixture of regularized lower incomplete gammas.
pub fn gamma_sr_cdf(params: &PlcParams, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(domain("gamma_sr_cdf", format!("gamma = {gamma} must be non-negative")));
    }
    Ok(params
        .components()
        .iter()
        .map(|c| c.weight * gamma_p(c.mf(), c.beta() * gamma))
        .sum())
}

/// Survival function 1 − F of the power-line SNR, accurate in the far tail.
pub fn gamma_sr_sf(params: &PlcParams, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(domain("gamma_sr_sf", format!("gamma = {gamma} must be non-negative")));
    }
    Ok(params
        .components()
        .iter()
        .map(|c| c.weight * gamma_q(c.mf(), c.beta() * gamma))
        .sum())
}

/// The same CDF evaluated through G^{1,1}_{1,2}[βγ | 1; m, 0] / Γ(m) by contour
/// quadrature, bypassing the incomplete-gamma reduction.
pub fn gamma_sr_cdf_via_meijer(params: &PlcParams, gamma: f64, prec: &Precision) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(domain("gamma_sr_cdf", format!("gamma = {gamma} must be non-negative")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for c in params.components() {
        if c.weight == 0.0 {
            continue;
        }
        let spec = MeijerGSpec::new(1, 1, vec![1.0], vec![c.mf(), 0.0], c.beta() * gamma)?;
        total += c.weight * meijer_g_contour(&spec, prec)?.scale(-lgamma(c.mf()));
    }
    Ok(total)
}

/// Exact Rician SNR density.
pub fn rician_pdf_exact(params: &RfParams, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(domain("rician_pdf_exact", format!("gamma = {gamma} must be positive")));
    }
    let a = params.alpha();
    let ln_i0 = ln_bessel_i(0, params.bessel_argument(gamma))?;
    Ok((a.ln() - params.k_factor - a * gamma + ln_i0).exp())
}

/// Exact Rician SNR CDF, 1 − Q₁(√(2K), √(2(K+1)γ/γ̄)).
pub fn rician_cdf_exact(params: &RfParams, gamma: f64) -> Result<f64> {
    rician_tails(params, gamma).map(|(cdf, _)| cdf)
}

/// Exact Rician survival function Q₁(√(2K), √(2(K+1)γ/γ̄)).
pub fn rician_sf_exact(params: &RfParams, gamma: f64) -> Result<f64> {
    rician_tails(params, gamma).map(|(_, sf)| sf)
}

fn rician_tails(params: &RfParams, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma >= 0.0) {
        return Err(domain("rician_cdf_exact", format!("gamma = {gamma} must be non-negative")));
    }
    let a = (2.0 * params.k_factor).sqrt();
    let b = (2.0 * params.alpha() * gamma).sqrt();
    let (q, p) = marcum_q1_pair(a, b)?;
    Ok((p, q))
}

/// Which radio-hop law a computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RicianLaw {
    /// Bessel-I density and Marcum-Q CDF.
    #[default]
    Exact,
    /// Finite Bessel-series density at the order stored in the parameters.
    /// Its CDF is the integral of that density for the relayed link and one
    /// minus the series survival function for the min-SNR link, matching the
    /// respective closed-form derivations.
    Truncated,
}

/// Coefficients of the finite Bessel-series form of the Rician law,
/// B_l = K^l/(l!)² Π_{j=1}^{l−1}(1 − j²/k²), stored in log form.
///
/// Terms whose Poisson-like weight e^{−K}B_l l! has dropped below 1e−22 past
/// the mode are omitted, so the length stays near K + O(√K) however large the
/// truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct RicianSeries {
    pub k_factor: f64,
    pub alpha: f64,
    pub trunc_k: u32,
    /// ln B_l for l = 0..ln_b.len().
    pub ln_b: Vec<f64>,
}

impl RicianSeries {
    pub fn new(params: &RfParams) -> Self {
        let k = params.k_factor;
        let kk = params.trunc_k as f64;
        let mut ln_b = vec![0.0];
        if k > 0.0 {
            let ln_k = k.ln();
            let mut ln_prod = 0.0;
            for l in 1..=params.trunc_k {
                let lf = l as f64;
                if l >= 2 {
                    let j = lf - 1.0;
                    ln_prod += (-(j * j) / (kk * kk)).ln_1p();
                }
                let lb = lf * ln_k - 2.0 * lgamma(lf + 1.0) + ln_prod;
                ln_b.push(lb);
                // Poisson-like weight e^{-K} B_l l!.
                if lf > k && -k + lb + lgamma(lf + 1.0) < (1e-22f64).ln() {
                    break;
                }
            }
        }
        Self {
            k_factor: k,
            alpha: params.alpha(),
            trunc_k: params.trunc_k,
            ln_b,
        }
    }

    /// Highest retained index.
    pub fn l_max(&self) -> usize {
        self.ln_b.len() - 1
    }

    /// ln of the probability weight e^{−K} B_l l! of term l.
    pub fn ln_weight(&self, l: usize) -> f64 {
        -self.k_factor + self.ln_b[l] + lgamma(l as f64 + 1.0)
    }

    /// Total mass Σ_l e^{−K} B_l l! of the truncated density.
    pub fn mass(&self) -> f64 {
        (0..=self.l_max()).map(|l| self.ln_weight(l).exp()).sum()
    }

    /// 1 − mass, computed without cancellation.
    pub fn mass_defect(&self) -> f64 {
        mass_defect(self.k_factor, self.trunc_k)
    }

    /// Series density at γ > 0, without the validity-region check.
    pub fn pdf(&self, gamma: f64) -> f64 {
        let a = self.alpha;
        let ln_ag = (a * gamma).ln();
        self.ln_b
            .iter()
            .enumerate()
            .map(|(l, lb)| (lb + l as f64 * ln_ag + a.ln() - a * gamma - self.k_factor).exp())
            .sum()
    }

    /// Series survival function e^{−αγ−K} Σ_l Σ_{r≤l} l! B_l (αγ)^r/r!,
    /// without the validity-region check.
    pub fn sf(&self, gamma: f64) -> f64 {
        let x = self.alpha * gamma;
        (0..=self.l_max())
            .map(|l| self.ln_weight(l).exp() * gamma_q(l as f64 + 1.0, x))
            .sum()
    }

    /// ∫_0^γ of the series density, without the validity-region check.
    pub fn cdf_integral(&self, gamma: f64) -> f64 {
        let x = self.alpha * gamma;
        (0..=self.l_max())
            .map(|l| self.ln_weight(l).exp() * gamma_p(l as f64 + 1.0, x))
            .sum()
    }

    pub(crate) fn check_validity(&self, gamma: f64) -> Result<()> {
        let x = 2.0 * (self.k_factor * self.alpha * gamma).sqrt();
        let two_k = 2.0 * self.trunc_k as f64;
        if x >= two_k {
            return Err(Error::OutsideValidity { x, two_k });
        }
        Ok(())
    }
}

/// 1 − e^{−K} Σ_{l≤k} B_l l! for truncation order k.
pub fn mass_defect(k_factor: f64, trunc_k: u32) -> f64 {
    if k_factor == 0.0 {
        return 0.0;
    }
    let kk = trunc_k as f64;
    let ln_k = k_factor.ln();
    let mut defect = 0.0;
    let mut ln_prod = 0.0;
    let mut l = 0u32;
    loop {
        let lf = l as f64;
        if l >= 2 {
            let j = lf - 1.0;
            ln_prod += (-(j * j) / (kk * kk)).ln_1p();
        }
        let ln_pois = -k_factor + lf * ln_k - lgamma(lf + 1.0);
        defect += ln_pois.exp() * -ln_prod.exp_m1();
        if l == trunc_k {
            // Everything above the truncation order is missing entirely.
            defect += gamma_p(lf + 1.0, k_factor);
            break;
        }
        if lf > k_factor && ln_pois < -60.0 {
            break;
        }
        l += 1;
    }
    defect
}

/// Default truncation order for a sweep reaching SNR `gamma_max`:
/// max(20, ⌈x_max⌉, k_mass) with x_max the largest Bessel argument on the
/// grid and k_mass the smallest order whose mass defect is at most 1e−12.
pub fn default_truncation_order(k_factor: f64, gamma_bar_rd: f64, gamma_max: f64) -> u32 {
    let x_max = 2.0 * (k_factor * (k_factor + 1.0) * gamma_max.max(0.0) / gamma_bar_rd).sqrt();
    let base = 20u32.max(x_max.ceil().min(u32::MAX as f64) as u32);
    if mass_defect(k_factor, base) <= 1e-12 {
        return base;
    }
    let mut hi = base;
    while mass_defect(k_factor, hi) > 1e-12 {
        hi = hi.saturating_mul(2);
        if hi == u32::MAX {
            return hi;
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mass_defect(k_factor, mid) <= 1e-12 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Truncated-series Rician density e^{−K} Σ_l B_l α^{l+1} γ^l e^{−αγ}.
pub fn rician_pdf_trunc(params: &RfParams, gamma: f64) -> Result<f64> {
    rician_pdf_series(&RicianSeries::new(params), gamma)
}

pub(crate) fn rician_pdf_series(series: &RicianSeries, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(domain("rician_pdf_trunc", format!("gamma = {gamma} must be positive")));
    }
    series.check_validity(gamma)?;
    Ok(series.pdf(gamma))
}

/// Truncated-series Rician CDF
/// 1 − e^{−αγ−K} Σ_l Σ_{r≤l} l! B_l (αγ)^r/r!.
///
/// This is 1 minus the truncated survival function, so at γ = 0 it equals the
/// mass defect of the series rather than zero.
pub fn rician_cdf_trunc(params: &RfParams, gamma: f64) -> Result<f64> {
    let series = RicianSeries::new(params);
    if !(gamma >= 0.0) {
        return Err(domain("rician_cdf_trunc", format!("gamma = {gamma} must be non-negative")));
    }
    series.check_validity(gamma)?;
    Ok(1.0 - series.sf(gamma))
}

/// Integral of the truncated density from 0 to γ,
/// e^{−K} Σ_l B_l l! P(l+1, αγ). Zero at the origin, tends to the series mass.
pub fn rician_cdf_trunc_integral(params: &RfParams, gamma: f64) -> Result<f64> {
    let series = RicianSeries::new(params);
    if !(gamma >= 0.0) {
        return Err(domain("rician_cdf_trunc", format!("gamma = {gamma} must be non-negative")));
    }
    series.check_validity(gamma)?;
    Ok(series.cdf_integral(gamma))
}

/// Gamma shape and mean matching the first two moments of γ̄|h|² for
/// |h|² ~ LN(2μ, 4σ²): Ω = γ̄e^{2μ+2σ²}, m = 1/(e^{4σ²} − 1) rounded to the
/// nearest integer, at least 1.
pub fn moment_match_ln_to_gamma(mu: f64, sigma: f64, gamma_bar: f64) -> Result<(u32, f64)> {
    if !(sigma > 0.0) || !(gamma_bar > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need sigma > 0 and mean SNR > 0 (sigma = {sigma}, mean = {gamma_bar})"
        )));
    }
    let omega = gamma_bar * (2.0 * mu + 2.0 * sigma * sigma).exp();
    let m = (1.0 / (4.0 * sigma * sigma).exp_m1()).round().max(1.0);
    Ok((m.min(u32::MAX as f64) as u32, omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn plc(gamma_bar: f64) -> PlcParams {
        PlcParams::from_mean_snr(gamma_bar, 8, 8, 0.2, 5.0, 0.23).unwrap()
    }

    #[test]
    fn db_conversion() {
        assert_relative_eq!(db_to_linear(6.0), 3.981_071_705_534_972, max_relative = 1e-15);
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_relative_eq!(linear_to_db(db_to_linear(13.0)), 13.0, max_relative = 1e-15);
    }

    #[test]
    fn fading_pdf_at_mode_of_exponent() {
        let p = PlcParams::new(8, 8, 1.0, 1.0, 0.2, 5.0, 0.0, 0.23, 1.0).unwrap();
        let want = 1.0 / (2.0 * PI * 0.0529f64).sqrt();
        assert_relative_eq!(plc_fading_pdf(&p, 1.0).unwrap(), want, max_relative = 1e-14);
        let p = plc(1.0);
        let h = p.mu_sr.exp();
        let want = 1.0 / (h * (2.0 * PI * 0.0529f64).sqrt());
        assert_relative_eq!(plc_fading_pdf(&p, h).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn noise_pdf_collapses() {
        let gauss = |n: f64| (-n * n / 2.0).exp() / (2.0 * PI).sqrt();
        let mut p = plc(1.0);
        p.p_i = 0.0;
        assert_relative_eq!(plc_noise_pdf(&p, 0.7, 1.0).unwrap(), gauss(0.7), max_relative = 1e-15);
        p.p_i = 1.0;
        p.eta = 0.0;
        assert_relative_eq!(plc_noise_pdf(&p, 0.7, 1.0).unwrap(), gauss(0.7), max_relative = 1e-15);
        let p = plc(1.0);
        let sb: f64 = 0.4;
        let want = 0.8 / (2.0 * PI * sb * sb).sqrt() + 0.2 / (12.0 * PI * sb * sb).sqrt();
        assert_relative_eq!(plc_noise_pdf(&p, 0.0, sb).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn exponential_component() {
        let p = PlcParams::new(1, 8, 1.0, 1.0, 0.0, 5.0, 0.0, 0.23, 1.0).unwrap();
        for &g in &[0.1, 1.0, 4.0] {
            assert_relative_eq!(gamma_sr_pdf(&p, g).unwrap(), (-g).exp(), max_relative = 1e-14);
        }
        assert_relative_eq!(gamma_sr_cdf(&p, 1.0).unwrap(), 0.632_120_558_828_557_7, max_relative = 1e-14);
        assert_eq!(gamma_sr_cdf(&p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn cdf_paths_agree() {
        let p = plc(10.0);
        let prec = Precision::default();
        for &g in &[1e-3, 0.1, 1.0, 5.0, 30.0, 200.0] {
            let a = gamma_sr_cdf(&p, g).unwrap();
            let b = gamma_sr_cdf_via_meijer(&p, g, &prec).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn rayleigh_reductions() {
        let rf = RfParams::new(0.0, 10.0, 3).unwrap();
        for g in [0.5f64, 5.0, 40.0] {
            let pdf = 0.1 * (-g / 10.0).exp();
            let cdf = -(-g / 10.0).exp_m1();
            assert_relative_eq!(rician_pdf_exact(&rf, g).unwrap(), pdf, max_relative = 1e-14);
            assert_relative_eq!(rician_cdf_exact(&rf, g).unwrap(), cdf, max_relative = 1e-13);
            assert_relative_eq!(rician_pdf_trunc(&rf, g).unwrap(), pdf, max_relative = 1e-14);
            assert_relative_eq!(rician_cdf_trunc(&rf, g).unwrap(), cdf, max_relative = 1e-13);
        }
        assert_eq!(rician_cdf_exact(&rf, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rician_reference_point() {
        // K = 10^{0.6}, γ̄ = 10, γ = 5; 30-digit density and its quadrature.
        let rf = RfParams::new(db_to_linear(6.0), 10.0, 20).unwrap();
        assert_relative_eq!(rician_pdf_exact(&rf, 5.0).unwrap(), 0.068_005_804_540_435_565, max_relative = 1e-12);
        assert_relative_eq!(rician_cdf_exact(&rf, 5.0).unwrap(), 0.213_408_484_740_554_49, max_relative = 1e-12);
    }

    #[test]
    fn truncated_cdf_forms_differ_by_mass_defect() {
        let rf = RfParams::new(db_to_linear(6.0), 10.0, 20).unwrap();
        let defect = mass_defect(rf.k_factor, 20);
        assert_relative_eq!(RicianSeries::new(&rf).mass_defect(), defect);
        assert_relative_eq!(rician_cdf_trunc(&rf, 0.0).unwrap(), defect, max_relative = 1e-12);
        assert_eq!(rician_cdf_trunc_integral(&rf, 0.0).unwrap(), 0.0);
        for &g in &[0.3, 3.0, 12.0] {
            let a = rician_cdf_trunc(&rf, g).unwrap();
            let b = rician_cdf_trunc_integral(&rf, g).unwrap();
            assert_relative_eq!(a - b, defect, max_relative = 1e-9);
        }
        assert_relative_eq!(1.0 - RicianSeries::new(&rf).mass(), defect, max_relative = 1e-9);
    }

    #[test]
    fn truncation_validity_enforced() {
        let rf = RfParams::new(db_to_linear(6.0), 1.0, 20).unwrap();
        // 2√(K(K+1)γ) ≥ 40 once γ ≥ 400/(K(K+1)).
        let g = 400.0 / (rf.k_factor * (rf.k_factor + 1.0)) * 1.01;
        assert!(matches!(rician_pdf_trunc(&rf, g), Err(Error::OutsideValidity { .. })));
        assert!(matches!(rician_cdf_trunc(&rf, g), Err(Error::OutsideValidity { .. })));
    }

    #[test]
    fn default_order_controls_mass_defect() {
        let k = db_to_linear(6.0);
        let order = default_truncation_order(k, 10.0, 100.0);
        assert!(order >= 20);
        assert!(mass_defect(k, order) <= 1e-12);
        assert!(mass_defect(k, order - 1) > 1e-12);
        // Rayleigh has nothing to truncate.
        assert_eq!(default_truncation_order(0.0, 10.0, 100.0), 20);
        // The grid bound dominates for extreme arguments.
        assert!(default_truncation_order(k, 1.0, 1e6) as f64 >= 2.0 * (k * (k + 1.0) * 1e6).sqrt());
    }

    #[test]
    fn moment_matching() {
        let (m, omega) = moment_match_ln_to_gamma(-0.0529, 0.23, 10.0).unwrap();
        assert_eq!(m, 4);
        assert_relative_eq!(omega, 10.0, max_relative = 1e-14);
        let (m, _) = moment_match_ln_to_gamma(0.0, 3.0, 1.0).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn parameter_validation() {
        assert!(PlcParams::new(0, 8, 1.0, 1.0, 0.2, 5.0, 0.0, 0.23, 1.0).is_err());
        assert!(PlcParams::new(8, 8, 1.0, 1.0, 1.2, 5.0, 0.0, 0.23, 1.0).is_err());
        assert!(PlcParams::new(8, 8, 1.0, 1.0, 0.2, -1.0, 0.0, 0.23, 1.0).is_err());
        assert!(RfParams::new(-1.0, 1.0, 20).is_err());
        assert!(RfParams::new(1.0, 1.0, 0).is_err());
        assert!(RelayConfig::new(Protocol::Af, 0.0).is_err());
        assert!(RelayConfig::new(Protocol::Df, 0.0).is_ok());
        let p = plc(10.0);
        assert_relative_eq!(p.gamma_bar_sr2(), 10.0 / 6.0);
        assert_relative_eq!(p.omega2, p.omega1 / 6.0);
    }
}
