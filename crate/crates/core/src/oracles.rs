//! Brute-force references: adaptive quadrature of the defining integrals.
//!
//! Nothing here uses a Meijer G-function. The amplify-and-forward density and
//! CDF are computed from the two hop laws through the substitution t = x − γ,
//! which removes the singular factor at the lower limit.

use std::f64::consts::LN_2;

use crate::channel::{
    gamma_sr_cdf, gamma_sr_pdf, gamma_sr_sf, rician_cdf_exact, rician_pdf_exact, rician_sf_exact, PlcParams,
    RfParams, RicianSeries,
};
pub use crate::channel::RicianLaw;
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_breakpoints, integrate_semi_infinite};
use crate::specfun::{lgamma, BivariateMeijerGSpec, BivariateShape};

pub use crate::quad::{QuadResult, QuadratureConfig};

struct RdLaw {
    rf: RfParams,
    series: Option<RicianSeries>,
}

impl RdLaw {
    fn new(rf: &RfParams, law: RicianLaw) -> Self {
        Self {
            rf: rf.clone(),
            series: (law == RicianLaw::Truncated).then(|| RicianSeries::new(rf)),
        }
    }

    fn pdf(&self, g: f64) -> Result<f64> {
        match &self.series {
            None => rician_pdf_exact(&self.rf, g),
            Some(s) => Ok(s.pdf(g)),
        }
    }

    /// CDF in the form used by the relayed-link derivation.
    fn cdf_integral(&self, g: f64) -> Result<f64> {
        match &self.series {
            None => rician_cdf_exact(&self.rf, g),
            Some(s) => Ok(s.cdf_integral(g)),
        }
    }

    fn sf(&self, g: f64) -> Result<f64> {
        match &self.series {
            None => rician_sf_exact(&self.rf, g),
            Some(s) => Ok(s.sf(g)),
        }
    }
}

fn check_gain(c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("relay constant C = {c} must be positive")));
    }
    Ok(())
}

fn af_scale(plc: &PlcParams, rf: &RfParams, c: f64, gamma: f64) -> (f64, Vec<f64>) {
    // The radio factor switches on around t ≈ Cγ/γ̄_RD; the power-line factor
    // lives on the scale of its mean.
    let knee = c * gamma / rf.gamma_bar_rd;
    (plc.mean(), vec![knee, 0.1 * knee, 10.0 * knee])
}

/// Density of γ_SRγ_RD/(C + γ_RD) at γ > 0:
/// ∫_0^∞ f_RD(Cγ/t) · C(t+γ)/t² · f_SR(t+γ) dt.
pub fn af_pdf_quadrature(
    plc: &PlcParams,
    rf: &RfParams,
    c: f64,
    gamma: f64,
    law: RicianLaw,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    check_gain(c)?;
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be positive")));
    }
    let rd = RdLaw::new(rf, law);
    let (scale, extra) = af_scale(plc, rf, c, gamma);
    integrate_semi_infinite(
        |t| {
            let x = t + gamma;
            let y = c * gamma / t;
            if !y.is_finite() {
                return Ok(0.0);
            }
            let fr = rd.pdf(y)?;
            if fr == 0.0 {
                return Ok(0.0);
            }
            Ok(fr * (c * x / (t * t)) * gamma_sr_pdf(plc, x)?)
        },
        0.0,
        scale,
        &extra,
        cfg,
    )
}

/// CDF of γ_SRγ_RD/(C + γ_RD): F_SR(γ) + ∫_0^∞ F_RD(Cγ/t) f_SR(t+γ) dt.
pub fn af_cdf_quadrature(
    plc: &PlcParams,
    rf: &RfParams,
    c: f64,
    gamma: f64,
    law: RicianLaw,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    check_gain(c)?;
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be non-negative")));
    }
    if gamma == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let rd = RdLaw::new(rf, law);
    let (scale, extra) = af_scale(plc, rf, c, gamma);
    let r = integrate_semi_infinite(
        |t| {
            let y = c * gamma / t;
            let fr = if y.is_finite() { rd.cdf_integral(y)? } else { rd.cdf_integral(f64::MAX)? };
            Ok(fr * gamma_sr_pdf(plc, t + gamma)?)
        },
        0.0,
        scale,
        &extra,
        cfg,
    )?;
    Ok(QuadResult {
        value: gamma_sr_cdf(plc, gamma)? + r.value,
        ..r
    })
}

/// Average bit error rate (q^p / 2Γ(p)) ∫_0^∞ e^{−qγ} γ^{p−1} F(γ) dγ.
pub fn ber_quadrature<F>(cdf: F, p: f64, q: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::InvalidParameter(format!("modulation constants p = {p}, q = {q} must be positive")));
    }
    let ln_front = p * q.ln() - LN_2 - lgamma(p);
    integrate_semi_infinite(
        |g| {
            let f = cdf(g)?;
            if f == 0.0 {
                return Ok(0.0);
            }
            Ok((ln_front - q * g + (p - 1.0) * g.ln()).exp() * f)
        },
        0.0,
        p / q,
        &[],
        cfg,
    )
}

/// Ergodic capacity (1/(2 ln 2)) ∫_0^∞ ln(1+γ) f(γ) dγ for a density with
/// characteristic scale `scale`.
pub fn acc_quadrature<F>(pdf: F, scale: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = integrate_semi_infinite(|g| Ok(g.ln_1p() * pdf(g)?), 0.0, scale, &[], cfg)?;
    let k = 0.5 / LN_2;
    Ok(QuadResult {
        value: k * r.value,
        error: k * r.error,
        ..r
    })
}

/// Total mass ∫_0^∞ f(γ) dγ.
pub fn mass_quadrature<F>(pdf: F, scale: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_semi_infinite(|g| if g > 0.0 { pdf(g) } else { Ok(0.0) }, 0.0, scale, &[], cfg)
}

/// First moment ∫_0^∞ γ f(γ) dγ.
pub fn mean_quadrature<F>(pdf: F, scale: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_semi_infinite(|g| Ok(g * pdf(g)?), 0.0, scale, &[], cfg)
}

fn cdf_by_quadrature<F>(pdf: F, x: f64, scale: f64, cfg: &QuadratureConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut points = vec![0.0];
    let mut p = 1e-4 * scale;
    while p < x {
        points.push(p);
        p *= 4.0;
    }
    points.push(x);
    integrate_breakpoints(|g| if g > 0.0 { pdf(g) } else { Ok(0.0) }, &points, cfg)
}

fn combine_min(a: &QuadResult, b: &QuadResult) -> QuadResult {
    QuadResult {
        value: a.value + b.value - a.value * b.value,
        error: a.error + b.error,
        evaluations: a.evaluations + b.evaluations,
    }
}

/// Outage probability of min(γ_SR, γ_RD) below γ_th with both hop CDFs
/// obtained by integrating the exact densities.
pub fn op_df_quadrature(plc: &PlcParams, rf: &RfParams, gamma_th: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if !(gamma_th >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold {gamma_th} must be non-negative")));
    }
    let f_sr = cdf_by_quadrature(|g| gamma_sr_pdf(plc, g), gamma_th, plc.mean(), cfg)?;
    let f_rd = cdf_by_quadrature(|g| rician_pdf_exact(rf, g), gamma_th, rf.gamma_bar_rd, cfg)?;
    Ok(combine_min(&f_sr, &f_rd))
}

/// DBPSK error rate of the decode-and-forward link: P₁ + P₂ − 2P₁P₂ with
/// P₁ from the power-line CDF and P₂ = ∫ ½e^{−γ} f_RD(γ) dγ.
pub fn ber_df_quadrature(plc: &PlcParams, rf: &RfParams, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let p1 = ber_quadrature(|g| gamma_sr_cdf(plc, g), 1.0, 1.0, cfg)?;
    let p2 = integrate_semi_infinite(
        |g| Ok(0.5 * (-g).exp() * rician_pdf_exact(rf, g)?),
        0.0,
        1.0f64.min(rf.gamma_bar_rd),
        &[rf.gamma_bar_rd],
        cfg,
    )?;
    Ok(QuadResult {
        value: p1.value + p2.value - 2.0 * p1.value * p2.value,
        error: p1.error + p2.error,
        evaluations: p1.evaluations + p2.evaluations,
    })
}

/// Density of min(γ_SR, γ_RD): f_SR(1 − F_RD) + f_RD(1 − F_SR).
pub fn df_pdf(plc: &PlcParams, rf: &RfParams, gamma: f64, law: RicianLaw) -> Result<f64> {
    df_pdf_with(plc, &RdLaw::new(rf, law), gamma)
}

fn df_pdf_with(plc: &PlcParams, rd: &RdLaw, g: f64) -> Result<f64> {
    Ok(gamma_sr_pdf(plc, g)? * rd.sf(g)? + rd.pdf(g)? * gamma_sr_sf(plc, g)?)
}

fn df_scale(plc: &PlcParams, rf: &RfParams) -> f64 {
    plc.mean().min(rf.gamma_bar_rd)
}

/// Ergodic capacity of the decode-and-forward link.
pub fn acc_df_quadrature(plc: &PlcParams, rf: &RfParams, law: RicianLaw, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let rd = RdLaw::new(rf, law);
    acc_quadrature(|g| df_pdf_with(plc, &rd, g), df_scale(plc, rf), cfg)
}

/// Mean of min(γ_SR, γ_RD).
pub fn mean_df_quadrature(plc: &PlcParams, rf: &RfParams, law: RicianLaw, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let rd = RdLaw::new(rf, law);
    mean_quadrature(|g| df_pdf_with(plc, &rd, g), df_scale(plc, rf), cfg)
}

fn af_outer_scale(plc: &PlcParams, rf: &RfParams, c: f64) -> f64 {
    // γ_o ≤ γ_SR and γ_o ≤ γ_SR γ_RD / C.
    plc.mean().min(plc.mean() * rf.gamma_bar_rd / c)
}

/// Ergodic capacity of the amplify-and-forward link, integrating the density
/// obtained from [`af_pdf_quadrature`].
pub fn acc_af_quadrature(
    plc: &PlcParams,
    rf: &RfParams,
    c: f64,
    law: RicianLaw,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    acc_quadrature(
        |g| Ok(af_pdf_quadrature(plc, rf, c, g, law, cfg)?.value),
        af_outer_scale(plc, rf, c),
        cfg,
    )
}

/// Mean of γ_SRγ_RD/(C + γ_RD) from the quadrature density.
pub fn mean_af_quadrature(
    plc: &PlcParams,
    rf: &RfParams,
    c: f64,
    law: RicianLaw,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    mean_quadrature(
        |g| Ok(af_pdf_quadrature(plc, rf, c, g, law, cfg)?.value),
        af_outer_scale(plc, rf, c),
        cfg,
    )
}

/// Two-variable Meijer G of the supported shapes as the nested integral
/// ∫_0^∞ u^{−a} e^{−u} ln(1 + xu) G₃(yu) du, where the inner function
/// G₃(z) = ∫_0^z t^{m−1}e^{−t} dt or ∫_0^∞ t^{ν−1} e^{−t−z/t} dt is itself
/// computed by quadrature.
pub fn bivariate_g_quadrature(spec: &BivariateMeijerGSpec, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let a = spec.outer_a();
    let (x, y) = (spec.x, spec.y);
    let shape = spec.shape()?;
    let inner = |z: f64| -> Result<f64> {
        match shape {
            BivariateShape::LowerGamma { m } => {
                if z == 0.0 {
                    return Ok(0.0);
                }
                // Scaled by the integrand's maximum on [0, z] to keep the
                // quadrature in range.
                let ln_peak = if m > 1.0 {
                    let peak = (m - 1.0).min(z);
                    (m - 1.0) * peak.ln() - peak
                } else {
                    0.0
                };
                let r = integrate(
                    |t: f64| Ok(((m - 1.0) * t.ln() - t - ln_peak).exp()),
                    0.0,
                    z,
                    cfg,
                )?;
                Ok(r.value * ln_peak.exp())
            }
            BivariateShape::BesselK { nu } => {
                let b = nu - 1.0;
                let t_star = (b + (b * b + 4.0 * z).sqrt()) / 2.0;
                let t_star = if t_star > 0.0 { t_star } else { z / (1.0 - b) };
                let ln_peak = b * t_star.ln() - t_star - z / t_star;
                let r = integrate_semi_infinite(
                    |t: f64| Ok((b * t.ln() - t - z / t - ln_peak).exp()),
                    0.0,
                    t_star.max(1e-300),
                    &[t_star],
                    cfg,
                )?;
                Ok(r.value * ln_peak.exp())
            }
        }
    };
    let scale = 1.0f64.max(-a).max(1.0 / y.max(1e-300)).min(1e3 * 1.0f64.max(-a));
    integrate_semi_infinite(
        |u: f64| {
            let g3 = inner(y * u)?;
            if g3 == 0.0 {
                return Ok(0.0);
            }
            Ok((-a * u.ln() - u).exp() * (x * u).ln_1p() * g3)
        },
        0.0,
        scale,
        &[1.0f64.max(-a)],
        cfg,
    )
}
