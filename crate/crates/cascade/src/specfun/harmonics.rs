//! Complex spherical harmonics with the Condon–Shortley phase.

use num_complex::Complex64 as C64;

/// `Y_lm(θ, φ)`.
///
/// Satisfies `Y*_lm = (-1)^m Y_{l,-m}` and is orthonormal over the sphere.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> C64 {
    assert!(m.unsigned_abs() <= l, "spherical_harmonic: |m| = {} exceeds l = {l}", m.abs());
    let am = m.unsigned_abs();
    let p = normalized_legendre(l, am, theta.cos(), theta.sin());
    let phase = C64::new(0.0, m as f64 * phi).exp();
    if m >= 0 || am % 2 == 0 {
        p * phase
    } else {
        -p * phase
    }
}

/// Fully normalized associated Legendre function
/// `P̄_l^m(cosθ) = sqrt((2l+1)/(4π) (l-m)!/(l+m)!) P_l^m(cosθ)` for `m ≥ 0`,
/// Condon–Shortley phase included. Built by the standard stable diagonal +
/// upward recurrence.
fn normalized_legendre(l: u32, m: u32, cos_t: f64, sin_t: f64) -> f64 {
    use std::f64::consts::PI;
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        pmm *= -(((2 * k + 1) as f64) / ((2 * k) as f64)).sqrt() * sin_t;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = pmm;
    let mut p = ((2 * m + 3) as f64).sqrt() * cos_t * pmm;
    for ll in (m + 2)..=l {
        let ll = ll as f64;
        let mf = m as f64;
        let a = ((4.0 * ll * ll - 1.0) / (ll * ll - mf * mf)).sqrt();
        let b = (((ll - 1.0).powi(2) - mf * mf) / (4.0 * (ll - 1.0).powi(2) - 1.0)).sqrt();
        let next = a * (cos_t * p - b * pm1);
        pm1 = p;
        p = next;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::gauss_legendre;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn s_wave_is_constant() {
        let v = spherical_harmonic(0, 0, 0.7, 2.1);
        assert_abs_diff_eq!(v.re, 0.28209479177387814, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn p_wave_at_pole() {
        let v = spherical_harmonic(1, 0, 0.0, 0.0);
        assert_abs_diff_eq!(v.re, (3.0 / (4.0 * PI)).sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(v.re, 0.4886025119029199, epsilon = 1e-12);
    }

    #[test]
    fn conjugation_identity() {
        for l in 0..=6u32 {
            for m in -(l as i32)..=(l as i32) {
                let y = spherical_harmonic(l, m, 1.1, 0.9);
                let ym = spherical_harmonic(l, -m, 1.1, 0.9);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let diff = y.conj() - sign * ym;
                assert_abs_diff_eq!(diff.norm(), 0.0, epsilon = 1e-13);
            }
        }
    }

    /// Gram matrix over the sphere up to l = 8 must be the identity.
    /// Gauss–Legendre in cosθ is exact for these polynomial integrands; the
    /// trapezoid rule in φ is exact for the finite Fourier content.
    #[test]
    fn orthonormality_gram_matrix() {
        let lmax = 8u32;
        let (nodes, weights) = gauss_legendre(24);
        let nphi = 40usize;
        let dphi = 2.0 * PI / nphi as f64;

        let mut idx = Vec::new();
        for l in 0..=lmax {
            for m in -(l as i32)..=(l as i32) {
                idx.push((l, m));
            }
        }
        for (a, &(l1, m1)) in idx.iter().enumerate() {
            for &(l2, m2) in idx.iter().skip(a) {
                let mut acc = C64::ZERO;
                for (&x, &w) in nodes.iter().zip(&weights) {
                    let theta = x.acos();
                    for jp in 0..nphi {
                        let phi = jp as f64 * dphi;
                        let y1 = spherical_harmonic(l1, m1, theta, phi);
                        let y2 = spherical_harmonic(l2, m2, theta, phi);
                        acc += w * dphi * y1 * y2.conj();
                    }
                }
                let expect = if l1 == l2 && m1 == m2 { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(acc.re, expect, epsilon = 1e-8);
                assert_abs_diff_eq!(acc.im, 0.0, epsilon = 1e-8);
            }
        }
    }
}
