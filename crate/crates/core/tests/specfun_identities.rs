//! Meijer G reductions and special-function boundary values checked against
//! elementary references written out in this file.

use plcrf_core::specfun::*;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn g(m: usize, n: usize, a: &[f64], b: &[f64], x: f64) -> f64 {
    let spec = MeijerGSpec::new(m, n, a.to_vec(), b.to_vec(), x).unwrap();
    meijer_g(&spec, &Precision::univariate()).unwrap()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// γ(a, x) = x^a e^{−x} Σ_k x^k / (a(a+1)⋯(a+k)).
fn lower_gamma_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= x / (a + k);
        sum += term;
        k += 1.0;
    }
    x.powf(a) * (-x).exp() * sum
}

/// Γ(n, x) for integer n.
fn upper_gamma_int(n: u32, x: f64) -> f64 {
    let tail: f64 = (0..n).map(|k| x.powi(k as i32) / factorial(k)).sum();
    factorial(n - 1) * (-x).exp() * tail
}

/// K_ν(z) = ∫_0^∞ e^{−z cosh t} cosh(νt) dt by the trapezoidal rule, which
/// converges geometrically for this integrand.
fn bessel_k_trapezoid(nu: f64, z: f64) -> f64 {
    let h: f64 = 0.01;
    let mut s = 0.5 * (-z).exp();
    let mut t = h;
    loop {
        let term = (-z * t.cosh()).exp() * (nu * t).cosh();
        s += term;
        if term < 1e-300 || t > 60.0 {
            break;
        }
        t += h;
    }
    s * h
}

#[test]
fn exponential_reduction() {
    for x in log_grid(1e-3, 50.0, 25) {
        assert!(rel(g(1, 0, &[], &[0.0], x), (-x).exp()) < 1e-8, "x = {x}");
    }
}

#[test]
fn lower_incomplete_gamma_reduction() {
    for n in [1u32, 2, 5, 8] {
        for x in log_grid(1e-2, 40.0, 20) {
            let want = lower_gamma_series(n as f64, x);
            if want < 1e-250 {
                continue;
            }
            let got = g(1, 1, &[1.0], &[n as f64, 0.0], x);
            assert!(rel(got, want) < 1e-8, "n = {n}, x = {x}: {got} vs {want}");
        }
    }
}

#[test]
fn lower_incomplete_gamma_by_contour() {
    let prec = Precision::univariate();
    for a in [0.5, 3.0, 8.0] {
        for x in log_grid(1e-2, 40.0, 12) {
            let spec = MeijerGSpec::new(1, 1, vec![1.0], vec![a, 0.0], x).unwrap();
            let got = meijer_g_contour(&spec, &prec).unwrap().value();
            let want = lower_gamma_series(a, x);
            assert!(rel(got, want) < 1e-8, "a = {a}, x = {x}: {got} vs {want}");
        }
    }
}

#[test]
fn regularized_incomplete_gamma_matches_series() {
    for n in [1u32, 4, 8] {
        for x in log_grid(1e-2, 40.0, 15) {
            let p = lower_inc_gamma_reg(n as f64, x).unwrap();
            let q = upper_inc_gamma_reg(n as f64, x).unwrap();
            assert!((p + q - 1.0).abs() < 1e-13);
            let want = upper_gamma_int(n, x) / factorial(n - 1);
            assert!(rel(q, want) < 1e-10, "n = {n}, x = {x}");
        }
    }
}

#[test]
fn bessel_k_reduction() {
    // G^{2,0}_{0,2}[x | ν/2, −ν/2] = 2 K_ν(2√x).
    for nu in [0.0, 0.5, 1.0, 2.5, 4.0] {
        for x in log_grid(1e-3, 100.0, 20) {
            let z = 2.0 * x.sqrt();
            let want = 2.0 * bessel_k_trapezoid(nu, z);
            let got = g(2, 0, &[], &[nu / 2.0, -nu / 2.0], x);
            assert!(rel(got, want) < 1e-8, "nu = {nu}, x = {x}: {got} vs {want}");
        }
    }
}

#[test]
fn bessel_k_half_order_is_elementary() {
    for z in log_grid(1e-2, 200.0, 30) {
        let k_half = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp();
        assert!(rel(bessel_k(0.5, z).unwrap(), k_half) < 1e-10);
        assert!(rel(bessel_k(1.5, z).unwrap(), k_half * (1.0 + 1.0 / z)) < 1e-10);
    }
}

#[test]
fn bessel_i_zero_order_series() {
    for z in log_grid(1e-3, 20.0, 20) {
        let want: f64 = (0..80u32)
            .map(|k| (0.25 * z * z).powi(k as i32) / (factorial(k) * factorial(k)))
            .sum();
        assert!(rel(bessel_i(0, z).unwrap(), want) < 1e-12, "z = {z}");
    }
}

#[test]
fn confluent_hypergeometric_diagonal_is_exponential() {
    for z in [-30.0, -5.0, -0.1, 0.0, 0.3, 4.0, 25.0, 200.0] {
        let v = hyp1f1(1.0, 1.0, z).unwrap();
        assert!(rel(v, z.exp()) < 1e-12, "z = {z}: {v}");
    }
}

#[test]
fn confluent_hypergeometric_kummer_transformation() {
    // ₁F₁(a; b; z) = e^z ₁F₁(b − a; b; −z).
    for &(a, b, z) in &[(0.5, 2.0, 3.0), (2.0, 3.5, -4.0), (1.0, 5.0, 10.0)] {
        let lhs = hyp1f1(a, b, z).unwrap();
        let rhs = z.exp() * hyp1f1(b - a, b, -z).unwrap();
        assert!(rel(lhs, rhs) < 1e-10);
    }
}

#[test]
fn marcum_q_boundary_values() {
    for b in [0.0, 0.5, 2.0, 6.0] {
        assert!(rel(marcum_q1(0.0, b).unwrap(), (-b * b / 2.0).exp()) < 1e-13, "b = {b}");
    }
    for a in [0.0, 0.3, 3.0, 20.0] {
        assert_eq!(marcum_q1(a, 0.0).unwrap(), 1.0);
    }
    assert!(marcum_q1(1.0, 60.0).unwrap() < 1e-300);
    assert!(marcum_q1(60.0, 1.0).unwrap() > 1.0 - 1e-15);
}

#[test]
fn marcum_q_pair_is_complementary() {
    for &(a, b) in &[(0.5, 0.5), (3.0, 2.0), (3.0, 5.0), (40.0, 41.0)] {
        let (q, p) = marcum_q1_pair(a, b).unwrap();
        assert!((q + p - 1.0).abs() < 1e-13);
        assert!(rel(marcum_q1(a, b).unwrap(), q) < 1e-14);
    }
}

#[test]
fn contour_and_default_evaluators_agree() {
    let prec = Precision::univariate();
    for x in log_grid(1e-2, 30.0, 10) {
        let spec = MeijerGSpec::new(2, 1, vec![-2.5], vec![-1.0, 0.0], x).unwrap();
        let a = meijer_g_log(&spec, &prec).unwrap();
        let b = meijer_g_contour(&spec, &prec).unwrap();
        assert_eq!(a.sign, b.sign);
        assert!((a.ln_abs - b.ln_abs).abs() < 1e-8, "x = {x}");
    }
}
