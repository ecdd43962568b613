//! Two-variable Meijer G-function of the two shapes the capacity closed forms
//! need:
//!
//!   G(x, y) = (1/2πi)² ∫∫ Γ(1 − a + s + t) Φ₂(s) Φ₃(t) x^s y^t ds dt,
//!
//! where Φ₂ is the Mellin–Barnes kernel of G^{1,2}_{2,2}[· | 1, 1; 1, 0]
//! (that is ln(1 + ·)) and Φ₃ that of either G^{1,1}_{1,2}[· | 1; m, 0] or
//! G^{2,0}_{0,2}[· | −; ν, 0]. Equivalently
//! G(x, y) = ∫_0^∞ u^{−a} e^{−u} ln(1 + xu) G₃(yu) du.
//!
//! The double integral is evaluated with a product trapezoidal rule on a
//! square lattice. The outer gamma depends on the lattice only through j + k,
//! so the sum factorizes into a discrete convolution.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{lgamma, ln_gamma_complex};
use super::meijer::{choose_abscissa, step_size, MeijerGSpec};
use super::{Precision, SignedLog};
use crate::error::{Error, Result};

/// The supported inner-group combinations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BivariateShape {
    /// Second inner group G^{1,1}_{1,2}[· | 1; m, 0].
    LowerGamma { m: f64 },
    /// Second inner group G^{2,0}_{0,2}[· | −; ν, 0].
    BesselK { nu: f64 },
}

/// Parameter group of a bivariate Meijer G: orders and the two parameter lists.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGroup {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// G^{0,1;1,2;·,·}_{1,0;2,2;·,·}[x, y] with its three parameter groups.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateMeijerGSpec {
    pub outer: MeijerGroup,
    pub first: MeijerGroup,
    pub second: MeijerGroup,
    pub x: f64,
    pub y: f64,
}

impl BivariateMeijerGSpec {
    /// Builds a spec from explicit groups, rejecting anything but the two
    /// supported shapes.
    pub fn new(outer: MeijerGroup, first: MeijerGroup, second: MeijerGroup, x: f64, y: f64) -> Result<Self> {
        let spec = Self { outer, first, second, x, y };
        spec.shape()?;
        if !(x > 0.0 && x.is_finite() && y > 0.0 && y.is_finite()) {
            return Err(Error::InvalidParameter(format!("arguments x = {x}, y = {y} must be positive")));
        }
        Ok(spec)
    }

    /// Outer parameter a with the lower-incomplete-gamma second group.
    pub fn lower_gamma(a: f64, m: f64, x: f64, y: f64) -> Result<Self> {
        Self::new(
            outer(a),
            log1p_group(),
            MeijerGroup {
                m: 1,
                n: 1,
                a: vec![1.0],
                b: vec![m, 0.0],
            },
            x,
            y,
        )
    }

    /// Outer parameter a with the Bessel-K second group.
    pub fn bessel_k(a: f64, nu: f64, x: f64, y: f64) -> Result<Self> {
        Self::new(
            outer(a),
            log1p_group(),
            MeijerGroup {
                m: 2,
                n: 0,
                a: vec![],
                b: vec![nu, 0.0],
            },
            x,
            y,
        )
    }

    /// The outer upper parameter a.
    pub fn outer_a(&self) -> f64 {
        self.outer.a[0]
    }

    pub fn shape(&self) -> Result<BivariateShape> {
        let bad = |what: &str| Err(Error::UnsupportedClass(format!("bivariate G: {what}")));
        let o = &self.outer;
        if !(o.m == 0 && o.n == 1 && o.a.len() == 1 && o.b.is_empty() && o.a[0].is_finite()) {
            return bad("outer group must be (0,1;1,0) with one finite parameter");
        }
        if self.first != log1p_group() {
            return bad("first inner group must be G^{1,2}_{2,2}[1,1;1,0]");
        }
        let s = &self.second;
        if s.b.len() != 2 || s.b[1] != 0.0 || !s.b[0].is_finite() {
            return bad("second inner group must have lower parameters (b, 0)");
        }
        match (s.m, s.n, s.a.as_slice()) {
            (1, 1, [a]) if *a == 1.0 && s.b[0] > 0.0 => Ok(BivariateShape::LowerGamma { m: s.b[0] }),
            (2, 0, []) => Ok(BivariateShape::BesselK { nu: s.b[0] }),
            _ => bad("second inner group must be G^{1,1}_{1,2}[1;m,0] or G^{2,0}_{0,2}[-;nu,0]"),
        }
    }
}

fn outer(a: f64) -> MeijerGroup {
    MeijerGroup {
        m: 0,
        n: 1,
        a: vec![a],
        b: vec![],
    }
}

fn log1p_group() -> MeijerGroup {
    MeijerGroup {
        m: 1,
        n: 2,
        a: vec![1.0, 1.0],
        b: vec![1.0, 0.0],
    }
}

fn as_univariate(g: &MeijerGroup, x: f64) -> MeijerGSpec {
    MeijerGSpec {
        m: g.m,
        n: g.n,
        a: g.a.clone(),
        b: g.b.clone(),
        x,
    }
}

/// The bivariate G as a real number.
pub fn bivariate_meijer_g(spec: &BivariateMeijerGSpec, prec: &Precision) -> Result<f64> {
    bivariate_meijer_g_log(spec, prec).map(SignedLog::value)
}

/// The bivariate G in sign/log-magnitude form.
pub fn bivariate_meijer_g_log(spec: &BivariateMeijerGSpec, prec: &Precision) -> Result<SignedLog> {
    spec.shape()?;
    let a = spec.outer_a();
    let first = as_univariate(&spec.first, spec.x);
    let second = as_univariate(&spec.second, spec.y);
    let (ln_x, ln_y) = (spec.x.ln(), spec.y.ln());
    let ln_p = |s: Complex64| first.ln_phi(s) + s * ln_x;
    let ln_q = |t: Complex64| second.ln_phi(t) + t * ln_y;
    let ln_a = |u: Complex64| ln_gamma_complex(1.0 - a + u);
    let real = |v: Complex64| if v.re.is_nan() { f64::INFINITY } else { v.re };
    let psi_s = |c: f64| real(ln_p(Complex64::new(c, 0.0)));
    let psi_t = |c: f64| real(ln_q(Complex64::new(c, 0.0)));
    let psi_outer = |u: f64| if 1.0 - a + u > 0.0 { lgamma(1.0 - a + u) } else { f64::INFINITY };

    // Abscissae: coarse scan over c_s, best c_t for each.
    let (lo_s, hi_s) = first.pole_gap();
    let (lo_t, hi_t) = second.pole_gap();
    let margin_s = (0.25 * (hi_s - lo_s)).min(0.5);
    let mut best: Option<(f64, f64, f64)> = None;
    const NS: usize = 16;
    for i in 0..=NS {
        let cs = lo_s + margin_s + (hi_s - lo_s - 2.0 * margin_s) * i as f64 / NS as f64;
        let lo = lo_t.max(a - 1.0 - cs);
        let f = |ct: f64| psi_t(ct) + psi_outer(cs + ct);
        let Ok(ct) = choose_abscissa(lo, hi_t, &f) else {
            continue;
        };
        let v = psi_s(cs) + f(ct);
        if v.is_finite() && best.is_none_or(|b| v < b.0) {
            best = Some((v, cs, ct));
        }
    }
    let Some((psi_c, cs, ct)) = best else {
        return Err(Error::UnsupportedClass(format!(
            "bivariate G: no admissible contour pair (a = {a}, gaps [{lo_s}, {hi_s}] and [{lo_t}, {hi_t}])"
        )));
    };

    let d_outer = cs + ct - (a - 1.0);
    let dist = (cs - lo_s).min(hi_s - cs).min(ct - lo_t).min(hi_t - ct).min(d_outer).min(10.0);
    let (_, y) = step_size(dist, 0.0);
    let corner = |ds: f64, dt: f64| psi_s(cs + ds) + psi_t(ct + dt) + psi_outer(cs + ct + ds + dt);
    let growth = [(-y, 0.0), (y, 0.0), (0.0, -y), (0.0, y)]
        .iter()
        .map(|&(ds, dt)| corner(ds, dt))
        .fold(f64::NEG_INFINITY, f64::max)
        - psi_c;
    let (mut h, _) = step_size(dist, growth);

    let ps = psi_s(cs);
    let pt = psi_t(ct);
    let po = psi_outer(cs + ct);
    let mut last: Option<f64> = None;
    loop {
        let p = half_line(|t| ln_p(Complex64::new(cs, t)) - ps, h, prec.max_nodes)?;
        let q = half_line(|t| ln_q(Complex64::new(ct, t)) - pt, h, prec.max_nodes)?;
        let (n1, n2) = (p.len() - 1, q.len() - 1);
        let outer_vals = (0..=n1 + n2)
            .map(|u| {
                let l = ln_a(Complex64::new(cs + ct, u as f64 * h)) - po;
                if l.re < -745.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    l.exp()
                }
            })
            .collect::<Vec<_>>();
        let (fine, coarse, mass) = lattice_sum(&p, &q, &outer_vals);
        let scale = h * h / (4.0 * PI * PI);
        let g_h = scale * fine;
        let g_2h = 4.0 * scale * coarse;
        let round = 1e-15 * scale * mass;
        let err = match last {
            Some(prev) => (g_h - prev).abs().min((g_h - g_2h).abs()),
            None => (g_h - g_2h).abs(),
        };
        if err <= prec.rel_tol * g_h.abs() + round {
            if g_h == 0.0 {
                return Ok(SignedLog::ZERO);
            }
            return Ok(SignedLog {
                ln_abs: psi_c + g_h.abs().ln(),
                sign: g_h.signum(),
            });
        }
        if 2 * (n1.max(n2) + 1) > prec.max_nodes {
            return Err(Error::NonConvergent {
                what: "bivariate Meijer G",
                diagnostics: format!(
                    "a = {a}, x = {}, y = {}, contour ({cs:.4}, {ct:.4}), h = {h:.3e}, estimate {g_h:e}, error {err:e}",
                    spec.x, spec.y
                ),
            });
        }
        last = Some(g_h);
        h *= 0.5;
    }
}

/// Values e^{ln f(jh)} for j = 0, 1, ... until the integrand has decayed by
/// e^{-45} past its peak.
fn half_line(ln_f: impl Fn(f64) -> Complex64, h: f64, max_nodes: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    let mut quiet = 0;
    for j in 0..=max_nodes {
        let l = ln_f(j as f64 * h);
        let v = if l.re.is_finite() && l.re > -745.0 {
            l.exp()
        } else {
            Complex64::new(0.0, 0.0)
        };
        out.push(v);
        if l.re > peak {
            peak = l.re;
            quiet = 0;
        } else if !(l.re >= peak - 45.0) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(out);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergent {
        what: "bivariate Meijer G",
        diagnostics: format!("inner integrand has not decayed after {max_nodes} nodes (h = {h:.3e})"),
    })
}

/// Σ_{j,k} P_j Q_k A_{j+k} over the full symmetric lattice, using
/// P_{-j} = conj(P_j) and likewise for Q and A. Returns the full sum, the sum
/// over even (j, k) only, and the sum of magnitudes.
fn lattice_sum(p: &[Complex64], q: &[Complex64], outer: &[Complex64]) -> (f64, f64, f64) {
    let get = |v: &[Complex64], i: i64| -> Complex64 {
        if i >= 0 {
            v[i as usize]
        } else {
            v[(-i) as usize].conj()
        }
    };
    let (n1, n2) = (p.len() as i64 - 1, q.len() as i64 - 1);
    let mut fine = 0.0;
    let mut coarse = 0.0;
    let mut mass = 0.0;
    // Only j >= 0 rows are needed: the j < 0 rows are complex conjugates of
    // the j > 0 rows with k negated.
    for j in 0..=n1 {
        let pj = p[j as usize];
        let weight = if j == 0 { 1.0 } else { 2.0 };
        let mut row = Complex64::new(0.0, 0.0);
        let mut row_even = Complex64::new(0.0, 0.0);
        let mut row_mass = 0.0;
        for k in -n2..=n2 {
            let term = get(q, k) * get(outer, j + k);
            row += term;
            row_mass += term.norm();
            if j % 2 == 0 && k % 2 == 0 {
                row_even += term;
            }
        }
        fine += weight * (pj * row).re;
        coarse += weight * (pj * row_even).re;
        mass += weight * pj.norm() * row_mass;
    }
    (fine, coarse, mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::meijer_g;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_other_shapes() {
        let bad = MeijerGroup {
            m: 1,
            n: 0,
            a: vec![],
            b: vec![0.0],
        };
        assert!(BivariateMeijerGSpec::new(outer(0.0), log1p_group(), bad, 1.0, 1.0).is_err());
        assert!(BivariateMeijerGSpec::lower_gamma(0.0, 8.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn lower_gamma_reference_values() {
        // ∫ u^{-a} e^{-u} ln(1 + xu) γ(m, yu) du in 30-digit arithmetic.
        let cases = [
            (0.0, 8.0, 0.2, 1.6, 60.508_955_399_452_145),
            (-3.0, 8.0, 2.0, 9.6, 63_027.221_975_174_033),
            (-12.0, 8.0, 200.0, 1.6, 1.863_241_938_580_421_5e13),
        ];
        for (a, m, x, y, want) in cases {
            let spec = BivariateMeijerGSpec::lower_gamma(a, m, x, y).unwrap();
            let got = bivariate_meijer_g(&spec, &Precision::bivariate()).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn bessel_k_reference_values() {
        // ∫ u^{-a} e^{-u} ln(1 + xu) 2 (yu)^{ν/2} K_ν(2√(yu)) du in 30-digit arithmetic.
        let cases = [
            (0.0, -1.0, 1.0, 0.5, 0.872_253_712_974_566_4),
            (-8.0, 7.0, 125.0, 0.006, 2.005_016_994_673_782_1e8),
            (-20.0, -13.0, 0.75, 5.0, 251.786_020_339_612_22),
        ];
        for (a, nu, x, y, want) in cases {
            let spec = BivariateMeijerGSpec::bessel_k(a, nu, x, y).unwrap();
            let got = bivariate_meijer_g(&spec, &Precision::bivariate()).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-6);
        }
    }

    fn log_family(a: f64, x: f64) -> f64 {
        let spec = MeijerGSpec::new(1, 3, vec![a, 1.0, 1.0], vec![1.0, 0.0], x).unwrap();
        meijer_g(&spec, &Precision::default()).unwrap()
    }

    #[test]
    fn lower_gamma_small_y_limit() {
        // G → (y^m / m) G^{1,3}_{3,2}[x | a − m, 1, 1; 1, 0] as y → 0.
        let (a, m, x) = (-2.0, 3.0, 1.7);
        let limit = log_family(a - m, x) / m;
        let y = 1e-5;
        let spec = BivariateMeijerGSpec::lower_gamma(a, m, x, y).unwrap();
        let got = bivariate_meijer_g(&spec, &Precision::bivariate()).unwrap() / y.powf(m);
        assert_relative_eq!(got, limit, max_relative = 1e-3);
    }

    #[test]
    fn bessel_k_small_y_limit() {
        let x = 0.9;
        let y = 1e-6;
        // ν > 0: G → Γ(ν) G^{1,3}_{3,2}[x | a, 1, 1; 1, 0]
        let (a, nu) = (-4.0, 3.0);
        let spec = BivariateMeijerGSpec::bessel_k(a, nu, x, y).unwrap();
        let got = bivariate_meijer_g(&spec, &Precision::bivariate()).unwrap();
        assert_relative_eq!(got, lgamma(nu).exp() * log_family(a, x), max_relative = 1e-3);
        // ν < 0: G → Γ(−ν) y^ν G^{1,3}_{3,2}[x | a − ν, 1, 1; 1, 0]
        let (a, nu) = (-9.0, -3.0);
        let spec = BivariateMeijerGSpec::bessel_k(a, nu, x, y).unwrap();
        let got = bivariate_meijer_g(&spec, &Precision::bivariate()).unwrap() / y.powf(nu);
        assert_relative_eq!(got, lgamma(-nu).exp() * log_family(a - nu, x), max_relative = 1e-3);
    }
}
