//! Special functions used by the closed forms.
//!
//! Everything here is a pure function of its arguments. Values that can
//! overflow or underflow across the parameter ranges of interest are also
//! available in log form.

mod bessel;
mod bivariate;
mod gamma;
mod hypergeometric;
mod marcum;
mod meijer;

pub use bessel::{bessel_i, bessel_i_truncated, bessel_k, ln_bessel_i, ln_bessel_k};
pub use bivariate::{bivariate_meijer_g, bivariate_meijer_g_log, BivariateMeijerGSpec, BivariateShape, MeijerGroup};
pub use gamma::{ln_gamma, ln_gamma_complex, lower_inc_gamma_reg, upper_inc_gamma_reg};
pub use hypergeometric::hyp1f1;
pub use marcum::{marcum_q1, marcum_q1_pair};
pub use meijer::{meijer_g, meijer_g_contour, meijer_g_log, MeijerGSpec};

pub(crate) use gamma::{gamma_p, gamma_q, lgamma, ln_binomial};

/// Accuracy controls for the Meijer G evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub max_nodes: usize,
}

impl Precision {
    pub const fn univariate() -> Self {
        Self {
            rel_tol: 1e-10,
            max_terms: 10_000,
            max_nodes: 100_000,
        }
    }

    pub const fn bivariate() -> Self {
        Self {
            rel_tol: 1e-6,
            max_terms: 10_000,
            max_nodes: 4_000,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::univariate()
    }
}

/// A real number stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub ln_abs: f64,
    pub sign: f64,
}

impl SignedLog {
    pub const ZERO: Self = Self {
        ln_abs: f64::NEG_INFINITY,
        sign: 0.0,
    };

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            Self {
                ln_abs: v.abs().ln(),
                sign: v.signum(),
            }
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    /// Multiplies by e^{ln_factor}.
    pub fn scale(self, ln_factor: f64) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * (self.ln_abs + ln_factor).exp()
        }
    }
}
