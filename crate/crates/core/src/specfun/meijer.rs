//! Univariate Meijer G-function.
//!
//! Values come from closed-form reductions where one exists and otherwise from
//! trapezoidal quadrature of the Mellin–Barnes integral along a vertical line
//!
//!   G(x) = (1/2πi) ∫ Φ(s) x^s ds,
//!   Φ(s) = Π_{j<m} Γ(b_j − s) Π_{j<n} Γ(1 − a_j + s)
//!          / (Π_{j≥m} Γ(1 − b_j + s) Π_{j≥n} Γ(a_j − s)).
//!
//! The line Re s = c sits strictly between the left pole family (from the
//! a-gammas) and the right one (from the b-gammas), so coincident poles inside
//! either family need no special treatment. The integrand is analytic in a
//! strip around the line and decays exponentially, which makes the trapezoidal
//! rule converge geometrically in the step size.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::bessel::ln_bessel_k;
use super::gamma::{ln_gamma_complex, ln_lower_gamma};
use super::{Precision, SignedLog};
use crate::error::{Error, Result};

/// Parameter classes (m, n, p, q) accepted by [`meijer_g`].
const SUPPORTED: [(usize, usize, usize, usize); 9] = [
    (1, 0, 0, 1),
    (1, 1, 1, 2),
    (2, 0, 0, 2),
    (2, 1, 1, 3),
    (1, 2, 2, 2),
    (1, 3, 3, 2),
    (2, 2, 2, 3),
    (1, 2, 2, 1),
    (2, 1, 1, 2),
];

/// G^{m,n}_{p,q}[x | a; b] with p = a.len(), q = b.len().
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub x: f64,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>, x: f64) -> Result<Self> {
        let spec = Self { m, n, a, b, x };
        spec.validate()?;
        Ok(spec)
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    fn validate(&self) -> Result<()> {
        if self.m > self.q() || self.n > self.p() {
            return Err(Error::InvalidParameter(format!(
                "orders m = {}, n = {} exceed list lengths q = {}, p = {}",
                self.m,
                self.n,
                self.q(),
                self.p()
            )));
        }
        if !(self.x > 0.0) || !self.x.is_finite() {
            return Err(Error::InvalidParameter(format!("argument x = {} must be positive", self.x)));
        }
        if self.a.iter().chain(&self.b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        let class = (self.m, self.n, self.p(), self.q());
        if !SUPPORTED.contains(&class) {
            return Err(Error::UnsupportedClass(format!("G^{{{},{}}}_{{{},{}}}", class.0, class.1, class.2, class.3)));
        }
        Ok(())
    }

    /// Left and right edges of the strip separating the two pole families.
    pub(crate) fn pole_gap(&self) -> (f64, f64) {
        let lo = self.a[..self.n].iter().map(|a| a - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let hi = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    pub(crate) fn ln_phi(&self, s: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &b) in self.b.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_complex(b - s);
            } else {
                acc -= ln_gamma_complex(one - b + s);
            }
        }
        for (j, &a) in self.a.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_complex(one - a + s);
            } else {
                acc -= ln_gamma_complex(a - s);
            }
        }
        acc
    }
}

/// G^{m,n}_{p,q}[x] as a real number.
pub fn meijer_g(spec: &MeijerGSpec, prec: &Precision) -> Result<f64> {
    meijer_g_log(spec, prec).map(SignedLog::value)
}

/// G^{m,n}_{p,q}[x] in sign/log-magnitude form.
pub fn meijer_g_log(spec: &MeijerGSpec, prec: &Precision) -> Result<SignedLog> {
    spec.validate()?;
    if let Some(v) = reduction(spec)? {
        return Ok(v);
    }
    contour(spec, prec)
}

/// Evaluates by contour quadrature even when a reduction identity applies.
pub fn meijer_g_contour(spec: &MeijerGSpec, prec: &Precision) -> Result<SignedLog> {
    spec.validate()?;
    contour(spec, prec)
}

fn reduction(spec: &MeijerGSpec) -> Result<Option<SignedLog>> {
    let x = spec.x;
    let positive = |ln_abs: f64| Some(SignedLog { ln_abs, sign: 1.0 });
    let out = match (spec.m, spec.n, spec.p(), spec.q()) {
        // x^b e^{-x}
        (1, 0, 0, 1) => positive(spec.b[0] * x.ln() - x),
        // γ(b, x)
        (1, 1, 1, 2) if spec.a[0] == 1.0 && spec.b[1] == 0.0 && spec.b[0] > 0.0 => {
            positive(ln_lower_gamma(spec.b[0], x))
        }
        // 2 x^{(b1+b2)/2} K_{b1-b2}(2√x)
        (2, 0, 0, 2) => {
            let (b1, b2) = (spec.b[0], spec.b[1]);
            positive(LN_2 + 0.5 * (b1 + b2) * x.ln() + ln_bessel_k(b1 - b2, 2.0 * x.sqrt())?)
        }
        // ln(1 + x)
        (1, 2, 2, 2) if spec.a == [1.0, 1.0] && spec.b == [1.0, 0.0] => positive(x.ln_1p().ln()),
        _ => None,
    };
    Ok(out)
}

/// Picks the abscissa c of the vertical line that minimizes the real-axis
/// magnitude bound ψ(c) = ln|Φ(c) x^c| inside [lo + margin, hi − margin].
pub(crate) fn choose_abscissa(lo: f64, hi: f64, psi: &dyn Fn(f64) -> f64) -> Result<f64> {
    if !(hi - lo > 1e-9) {
        return Err(Error::UnsupportedClass(format!(
            "pole families are not separable (left edge {lo}, right edge {hi})"
        )));
    }
    let margin = if (hi - lo).is_finite() { (0.25 * (hi - lo)).min(0.5) } else { 0.5 };
    let (mut left, mut right) = (lo + margin, hi - margin);
    // Open-ended strips: walk outward until ψ stops decreasing.
    if left.is_infinite() && right.is_infinite() {
        left = -0.5;
        right = 0.5;
    }
    if left.is_infinite() {
        let mut c = right;
        let mut step = 1.0;
        for _ in 0..60 {
            if psi(c - step) < psi(c) {
                c -= step;
                step *= 2.0;
            } else {
                break;
            }
        }
        left = c - step;
    }
    if right.is_infinite() {
        let mut c = left;
        let mut step = 1.0;
        for _ in 0..60 {
            if psi(c + step) < psi(c) {
                c += step;
                step *= 2.0;
            } else {
                break;
            }
        }
        right = c + step;
    }
    const N: usize = 48;
    let width = right - left;
    let mut best = (f64::INFINITY, 0.5 * (left + right));
    for i in 0..=N {
        let c = left + width * i as f64 / N as f64;
        let v = psi(c);
        if v.is_finite() && v < best.0 {
            best = (v, c);
        }
    }
    // Golden-section polish around the best grid point.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = (best.1 - width / N as f64).max(left);
    let mut b = (best.1 + width / N as f64).min(right);
    for _ in 0..30 {
        let c1 = b - g * (b - a);
        let c2 = a + g * (b - a);
        let (v1, v2) = (psi(c1), psi(c2));
        if !(v1.is_finite() && v2.is_finite()) {
            break;
        }
        if v1 < v2 {
            b = c2;
        } else {
            a = c1;
        }
    }
    let polished = 0.5 * (a + b);
    let v = psi(polished);
    if v.is_finite() && v <= best.0 {
        best = (v, polished);
    }
    if !best.0.is_finite() {
        return Err(Error::NonConvergent {
            what: "Meijer G contour placement",
            diagnostics: format!("no finite integrand bound in [{left}, {right}]"),
        });
    }
    Ok(best.1)
}

/// Trapezoid-rule step for a line at distance `dist` from the nearest pole,
/// given the log-growth `growth` of the integrand bound at the strip edges.
pub(crate) fn step_size(dist: f64, growth: f64) -> (f64, f64) {
    let y = (0.7 * dist).min(3.0);
    (2.0 * PI * y / (40.0 + growth.max(0.0)), y)
}

fn contour(spec: &MeijerGSpec, prec: &Precision) -> Result<SignedLog> {
    let ln_x = spec.x.ln();
    let ln_f = |s: Complex64| spec.ln_phi(s) + s * ln_x;
    let psi = |c: f64| {
        let v = ln_f(Complex64::new(c, 0.0)).re;
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let (lo, hi) = spec.pole_gap();
    let c = choose_abscissa(lo, hi, &psi)?;
    let psi_c = psi(c);
    let dist = (c - lo).min(hi - c).min(10.0);
    let (_, y) = step_size(dist, 0.0);
    let growth = psi(c - y).max(psi(c + y)) - psi_c;
    let (mut h, _) = step_size(dist, growth);

    // Scaled integrand value at t: Re and |.| of Φ(c+it) x^{c+it} e^{-ψ(c)}.
    let node = |t: f64| -> (f64, f64) {
        let l = ln_f(Complex64::new(c, t)) - psi_c;
        if !l.re.is_finite() || l.re < -745.0 {
            return (0.0, 0.0);
        }
        let v = l.exp();
        (v.re, v.norm())
    };

    // Sum of the integrand over t = offset + j h, j >= 0, until it has decayed
    // by e^{-45} past its peak.
    let sweep = |offset: f64, h: f64, budget: usize| -> Result<(f64, f64, usize)> {
        let mut re = 0.0;
        let mut abs = 0.0;
        let mut peak = f64::NEG_INFINITY;
        let mut quiet = 0;
        let mut j = 0usize;
        loop {
            let t = offset + j as f64 * h;
            let (v, a) = node(t);
            let w = if j == 0 && offset == 0.0 { 0.5 } else { 1.0 };
            re += w * v;
            abs += w * a;
            let la = a.ln();
            if la > peak {
                peak = la;
                quiet = 0;
            } else if la < peak - 45.0 || a == 0.0 {
                quiet += 1;
                if quiet >= 3 {
                    return Ok((re, abs, j + 1));
                }
            } else {
                quiet = 0;
            }
            j += 1;
            if j > budget {
                return Err(Error::NonConvergent {
                    what: "Meijer G contour",
                    diagnostics: format!(
                        "integrand has not decayed after {budget} nodes (c = {c}, h = {h}, G^{{{},{}}}_{{{},{}}}, x = {})",
                        spec.m,
                        spec.n,
                        spec.p(),
                        spec.q(),
                        spec.x
                    ),
                });
            }
        }
    };

    let mut used = 0usize;
    let (mut re, mut abs, n0) = sweep(0.0, h, prec.max_nodes)?;
    used += n0;
    let mut total = h * re / PI;
    loop {
        let (re_mid, abs_mid, n1) = sweep(0.5 * h, h, prec.max_nodes.saturating_sub(used))?;
        used += n1;
        re += re_mid;
        abs += abs_mid;
        h *= 0.5;
        let refined = h * re / PI;
        let err = (refined - total).abs();
        let round = 1e-15 * h * abs / PI;
        total = refined;
        if err <= prec.rel_tol * refined.abs() + round {
            if round > 100.0 * prec.rel_tol * refined.abs() {
                return Err(Error::NonConvergent {
                    what: "Meijer G contour",
                    diagnostics: format!(
                        "cancellation: result {refined:e} against integrand mass {:e} (x = {})",
                        h * abs / PI,
                        spec.x
                    ),
                });
            }
            break;
        }
        if used >= prec.max_nodes {
            return Err(Error::NonConvergent {
                what: "Meijer G contour",
                diagnostics: format!("step refinement stalled at h = {h}, error estimate {err:e}"),
            });
        }
    }
    if total == 0.0 {
        return Ok(SignedLog::ZERO);
    }
    Ok(SignedLog {
        ln_abs: psi_c + total.abs().ln(),
        sign: total.signum(),
    })
}
