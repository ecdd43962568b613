//! Kummer's confluent hypergeometric function ₁F₁.

use crate::error::{domain, Error, Result};

const MAX_TERMS: usize = 100_000;

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// ₁F₁(a; b; z) for real arguments.
///
/// Negative z goes through Kummer's transformation e^z ₁F₁(b−a; b; −z) so the
/// series has no alternating cancellation.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(domain("hyp1f1", format!("b = {b} is a non-positive integer")));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(domain("hyp1f1", "arguments must be finite"));
    }
    if z < 0.0 && !is_nonpositive_integer(a) {
        return Ok(z.exp() * series(b - a, b, -z)?);
    }
    series(a, b, z)
}

fn series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        sum += term;
        if term == 0.0 || (term.abs() < 1e-17 * sum.abs() && nf > a.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergent {
        what: "hyp1f1 series",
        diagnostics: format!("a = {a}, b = {b}, z = {z}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trivial_reductions() {
        assert_eq!(hyp1f1(0.7, 2.3, 0.0).unwrap(), 1.0);
        for i in 0..=40 {
            let z = -10.0 + 0.5 * i as f64;
            assert_relative_eq!(hyp1f1(1.0, 1.0, z).unwrap(), z.exp(), max_relative = 1e-12);
            if z != 0.0 {
                assert_relative_eq!(
                    hyp1f1(1.0, 2.0, z).unwrap(),
                    z.exp_m1() / z,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn reference_values() {
        // 40-digit reference evaluations.
        assert_relative_eq!(hyp1f1(0.5, 1.5, -3.0).unwrap(), 0.504_343_560_231_438_81, max_relative = 1e-12);
        assert_relative_eq!(hyp1f1(2.5, 3.2, 7.1).unwrap(), 482.904_857_866_551_30, max_relative = 1e-12);
        assert_relative_eq!(hyp1f1(-2.2, 1.7, -12.0).unwrap(), 64.223_356_132_692_151, max_relative = 1e-12);
    }

    #[test]
    fn rejects_pole_in_b() {
        assert!(hyp1f1(1.0, -2.0, 1.0).is_err());
        assert!(hyp1f1(1.0, 0.0, 1.0).is_err());
    }
}
