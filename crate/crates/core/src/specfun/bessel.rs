//! Modified Bessel functions of the first and second kind.

use super::gamma::lgamma;
use crate::error::{domain, Error, Result};

/// ln I_v(x) for integer order v and x >= 0.
///
/// The power series is summed outward from its largest term, so the result
/// stays accurate for arguments where I_v itself overflows.
pub fn ln_bessel_i(v: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel_i", format!("x = {x} must be finite and non-negative")));
    }
    if x == 0.0 {
        return Ok(if v == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let vf = v as f64;
    let q = 0.25 * x * x;
    // Index of the peak term: (l+1)(v+l+1) ~ x^2/4.
    let root = 0.5 * ((vf * vf + x * x).sqrt() - vf);
    let peak = (root.ceil() - 1.0).max(0.0);
    let ln_peak = (vf + 2.0 * peak) * (0.5 * x).ln() - lgamma(peak + 1.0) - lgamma(vf + peak + 1.0);

    let mut sum = 1.0;
    let mut term = 1.0;
    let mut l = peak;
    loop {
        term *= q / ((l + 1.0) * (vf + l + 1.0));
        sum += term;
        l += 1.0;
        if term < 1e-17 * sum {
            break;
        }
    }
    term = 1.0;
    l = peak;
    while l > 0.0 {
        term *= (l * (vf + l)) / q;
        sum += term;
        l -= 1.0;
        if term < 1e-17 * sum {
            break;
        }
    }
    Ok(ln_peak + sum.ln())
}

/// I_v(x) for integer order v and x >= 0.
pub fn bessel_i(v: u32, x: f64) -> Result<f64> {
    ln_bessel_i(v, x).map(f64::exp)
}

/// The k-term approximant of I_v(x) used to truncate the Rician density:
/// sum over l = 0..=k of Γ(k+l) k^{1-2l} / (l! Γ(k-l+1) Γ(v+l+1)) (x/2)^{v+2l}.
///
/// Only defined for 0 <= x < 2k.
pub fn bessel_i_truncated(v: u32, x: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("truncation order k must be at least 1".into()));
    }
    if !(x >= 0.0) {
        return Err(domain("bessel_i_truncated", format!("x = {x} must be non-negative")));
    }
    let two_k = 2.0 * k as f64;
    if x >= two_k {
        return Err(Error::OutsideValidity { x, two_k });
    }
    if x == 0.0 {
        return Ok(if v == 0 { 1.0 } else { 0.0 });
    }
    let kf = k as f64;
    let vf = v as f64;
    let ln_half = (0.5 * x).ln();
    let mut coeff = 1.0;
    let mut sum = 0.0;
    for l in 0..=k {
        let lf = l as f64;
        if l >= 2 {
            let j = lf - 1.0;
            coeff *= 1.0 - j * j / (kf * kf);
        }
        sum += coeff * ((vf + 2.0 * lf) * ln_half - lgamma(lf + 1.0) - lgamma(vf + lf + 1.0)).exp();
    }
    Ok(sum)
}

/// ln K_ν(x) for real order ν and x > 0.
///
/// Trapezoidal rule on K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt; the
/// integrand is entire and even, so the rule converges geometrically.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("bessel_k", format!("x = {x} must be positive and finite")));
    }
    if !nu.is_finite() {
        return Err(domain("bessel_k", format!("order {nu} must be finite")));
    }
    let nu = nu.abs();
    let lt = |t: f64| -> f64 {
        // ln cosh(νt) without overflow.
        let nt = nu * t;
        let ln_cosh = nt + (-2.0 * nt).exp().ln_1p() - std::f64::consts::LN_2;
        -x * (t.cosh() - 1.0) + ln_cosh
    };
    let h = (0.5 / (x * x + nu * nu).powf(0.25)).min(0.1);
    let t_peak = (nu / x).asinh();
    let l_ref = lt(t_peak);
    let mut sum = 0.5 * (lt(0.0) - l_ref).exp();
    let mut j = 1u64;
    let mut below = 0;
    loop {
        let t = j as f64 * h;
        let l = lt(t) - l_ref;
        sum += l.exp();
        if t > t_peak && l < -40.0 {
            below += 1;
            if below >= 3 {
                break;
            }
        }
        j += 1;
        if j > 10_000_000 {
            return Err(Error::NonConvergent {
                what: "bessel_k",
                diagnostics: format!("nu = {nu}, x = {x}"),
            });
        }
    }
    Ok(-x + l_ref + (h * sum).ln())
}

/// K_ν(x) for real order ν and x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    ln_bessel_k(nu, x).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn i_at_origin() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn i_reference_values() {
        // Direct series summation in 50-digit arithmetic.
        let cases = [
            (0, 2.0, 2.279_585_302_336_067_3),
            (0, 1.0, 1.266_065_877_752_008_4),
            (1, 1.0, 0.565_159_103_992_485_0),
            (3, 7.5, 142.061_442_363_591_68),
            (0, 50.0, 2.932_553_783_849_336e20),
        ];
        for (v, x, want) in cases {
            assert_relative_eq!(bessel_i(v, x).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn i_recurrence_large_argument() {
        // I_{v-1}(x) - I_{v+1}(x) = (2v/x) I_v(x)
        for &(x, tol) in &[(0.3, 1e-12), (12.0, 1e-12), (300.0, 1e-12), (2000.0, 1e-10)] {
            for v in 1..6u32 {
                let lm = ln_bessel_i(v - 1, x).unwrap();
                let l0 = ln_bessel_i(v, x).unwrap();
                let lp = ln_bessel_i(v + 1, x).unwrap();
                // Both ratios are O(1); compare on that scale.
                let lhs = (lm - l0).exp() - (lp - l0).exp();
                assert!((lhs - 2.0 * v as f64 / x).abs() < tol, "v = {v}, x = {x}");
            }
        }
    }

    #[test]
    fn truncated_near_origin() {
        for k in [1, 5, 20] {
            assert_relative_eq!(bessel_i_truncated(0, 1e-9, k).unwrap(), 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn truncated_validity_region() {
        assert!(matches!(
            bessel_i_truncated(0, 40.0, 20),
            Err(Error::OutsideValidity { .. })
        ));
        assert!(bessel_i_truncated(0, 39.9, 20).is_ok());
    }

    #[test]
    fn truncated_error_decays_with_order() {
        let exact = bessel_i(0, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=20 {
            let err = (bessel_i_truncated(0, 1.0, k).unwrap() - exact).abs();
            assert!(err <= prev, "k = {k}: {err} > {prev}");
            prev = err;
        }
        assert!(prev / exact < 1e-3);
    }

    #[test]
    fn k_reference_values() {
        let cases = [
            (0.0, 1.0, 0.421_024_438_240_708_3),
            (1.0, 1.0, 0.601_907_230_197_234_6),
            (0.0, 1e-3, 7.023_688_800_562_381),
            (5.0, 0.5, 12_097.979_476_096_393),
            (2.0, 30.0, 2.276_992_963_255_826e-14),
        ];
        for (nu, x, want) in cases {
            assert_relative_eq!(bessel_k(nu, x).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn k_half_order_closed_form() {
        for &x in &[1e-3, 0.2, 1.0, 9.0, 250.0] {
            let want = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
            assert_relative_eq!(bessel_k(0.5, x).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn k_recurrence_high_order() {
        // K_{v+1}(x) = K_{v-1}(x) + (2v/x) K_v(x)
        for &x in &[1e-3, 0.05, 4.0, 80.0] {
            for v in 1..40 {
                let vf = v as f64;
                let lm = ln_bessel_k(vf - 1.0, x).unwrap();
                let l0 = ln_bessel_k(vf, x).unwrap();
                let lp = ln_bessel_k(vf + 1.0, x).unwrap();
                let rhs = (lm - l0).exp() + 2.0 * vf / x;
                assert_relative_eq!((lp - l0).exp(), rhs, max_relative = 1e-11);
            }
        }
    }
}
