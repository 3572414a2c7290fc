//! Partial-wave eigenvalues and couplings of the uniform-density sphere.

use super::bessel::spherical_bessel_j;
use super::quad::integrate_oscillatory;

/// Eigenvalue `λ_l` of the sphere's interaction kernel for `N` atoms at
/// dimensionless radius `k₀R`, by the closed form
/// `(3N/2)(j_l²(k₀R) − j_{l−1}(k₀R) j_{l+1}(k₀R))`.
///
/// Limits: `λ_0 → N` as `k₀R → 0`, and `λ_l ~ 3N/(2(k₀R)²)` for `k₀R ≫ l`.
pub fn lambda_l(l: u32, n_atoms: usize, k0_radius: f64) -> f64 {
    assert!(k0_radius > 0.0, "lambda_l: k0R must be positive");
    let x = k0_radius;
    let jl = spherical_bessel_j(l as i32, x);
    let jm = spherical_bessel_j(l as i32 - 1, x);
    let jp = spherical_bessel_j(l as i32 + 1, x);
    1.5 * n_atoms as f64 * (jl * jl - jm * jp)
}

/// `λ_l` by direct radial quadrature `4πρ₀ ∫₀^R r² j_l²(k₀r) dr`; the
/// independent cross-check of [`lambda_l`].
pub fn lambda_l_quadrature(l: u32, n_atoms: usize, k0_radius: f64) -> f64 {
    beta_l(l, 1.0, n_atoms, k0_radius)
}

/// Radial overlap `β_l(k) = 4πρ₀ ∫₀^R r² j_l(k₀r) j_l(kr) dr` with the
/// photon wavenumber given as `k/k₀`. On shell, `β_l(k₀) = λ_l`.
pub fn beta_l(l: u32, k_over_k0: f64, n_atoms: usize, k0_radius: f64) -> f64 {
    assert!(k_over_k0 > 0.0, "beta_l: k must be positive");
    assert!(k0_radius > 0.0, "beta_l: k0R must be positive");
    let x = k0_radius;
    // In u = k₀r the prefactor becomes 3N/x³ and both Bessel factors
    // oscillate on a scale of at most 2π/max(1, k/k₀).
    let wavelength = 2.0 * std::f64::consts::PI / k_over_k0.max(1.0);
    let integral = integrate_oscillatory(
        |u| {
            u * u * spherical_bessel_j(l as i32, u) * spherical_bessel_j(l as i32, k_over_k0 * u)
        },
        0.0,
        x,
        wavelength,
        64,
    );
    3.0 * n_atoms as f64 / (x * x * x) * integral
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn small_sphere_limit_is_atom_number() {
        assert_relative_eq!(lambda_l(0, 100, 1e-4), 100.0, max_relative = 1e-7);
        // 1% agreement already at k0R = 0.05.
        assert_relative_eq!(lambda_l(0, 100, 0.05), 100.0, max_relative = 1e-2);
    }

    #[test]
    fn reference_eigenvalue() {
        // 150 (j_0(4)² − j_{-1}(4) j_1(4)) from independent Bessel values.
        let (s4, c4) = (4.0f64.sin(), 4.0f64.cos());
        let j0 = s4 / 4.0;
        let jm1 = c4 / 4.0;
        let j1 = s4 / 16.0 - c4 / 4.0;
        let expected = 150.0 * (j0 * j0 - jm1 * j1);
        assert_relative_eq!(lambda_l(0, 100, 4.0), expected, max_relative = 1e-14);
        assert_abs_diff_eq!(lambda_l(0, 100, 4.0), 8.2157, epsilon = 1e-3);
    }

    #[test]
    fn large_sphere_asymptotic() {
        // λ_l ~ 3N/(2 (k0R)^2) for k0R >> l.
        let asym = 3.0 * 100.0 / (2.0 * 40.0 * 40.0);
        let v = lambda_l(0, 100, 40.0);
        assert!((v - asym).abs() / asym < 0.15, "λ₀ = {v}, asymptote = {asym}");
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for l in 0..=10u32 {
            for &x in &[0.5, 2.0, 8.0, 20.0] {
                let closed = lambda_l(l, 50, x);
                let quad = lambda_l_quadrature(l, 50, x);
                let scale = closed.abs().max(1e-30);
                assert!(
                    ((closed - quad) / scale).abs() < 1e-8,
                    "l={l} x={x}: closed {closed} vs quadrature {quad}"
                );
            }
        }
    }

    #[test]
    fn beta_on_shell_identity() {
        for l in [0u32, 1, 3] {
            let lam = lambda_l(l, 100, 4.0);
            let beta = beta_l(l, 1.0, 100, 4.0);
            assert_relative_eq!(beta, lam, max_relative = 1e-8);
        }
    }

    #[test]
    fn beta_bounded_at_small_k() {
        let v = beta_l(0, 1e-6, 100, 4.0);
        assert!(v.is_finite() && v > 0.0);
    }
}
