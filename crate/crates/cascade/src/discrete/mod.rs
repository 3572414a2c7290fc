//! Closed-form amplitudes, probabilities, spectra, and radiated power for the
//! discrete regimes: one driven atom, an atom pair, and N atoms in a
//! subwavelength volume.

pub mod single;
pub mod small_system;
pub mod two_atom;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RegimeError {
    #[error("operation not defined for n_atoms = {n_atoms} in this regime")]
    RegimeMismatch { n_atoms: usize },
}

/// `expm1(x·t)/x`, continued through `x = 0` where it equals `t`.
///
/// Every removable-singular ratio in the closed forms (degenerate subradiant
/// rate, the N → 2 limit) reduces to this primitive, so no explicit Taylor
/// switching is needed: `expm1` is uniformly accurate.
#[inline]
pub(crate) fn ratio_expm1(x: f64, t: f64) -> f64 {
    if x == 0.0 {
        t
    } else {
        (x * t).exp_m1() / x
    }
}

#[cfg(test)]
mod tests {
    use super::ratio_expm1;
    use approx::assert_relative_eq;

    #[test]
    fn ratio_expm1_limits() {
        assert_eq!(ratio_expm1(0.0, 3.5), 3.5);
        // Smooth through tiny x, where direct evaluation would cancel: the
        // quadratic series is exact to rounding here.
        let t = 7.0;
        for &x in &[1e-300, 1e-18, 1e-9] {
            let v = ratio_expm1(x, t);
            let expect = t * (1.0 + x * t / 2.0 + x * x * t * t / 6.0);
            assert_relative_eq!(v, expect, max_relative = 1e-12);
        }
        // Moderate x agrees with the cubic series to its own truncation.
        let v = ratio_expm1(1e-3, t);
        let xt: f64 = 1e-3 * t;
        let expect = t * (1.0 + xt / 2.0 + xt * xt / 6.0 + xt * xt * xt / 24.0);
        assert_relative_eq!(v, expect, max_relative = 1e-9);
        assert_relative_eq!(ratio_expm1(2.0, 1.5), (3.0f64.exp() - 1.0) / 2.0, max_relative = 1e-15);
    }
}
