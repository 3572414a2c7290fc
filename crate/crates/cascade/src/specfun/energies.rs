//! Self-energy and two-atom interaction-energy diagnostics.
//!
//! The real parts (level shifts) require a short-wavelength cutoff and are
//! exposed for inspection only; no dynamical formula in this crate includes
//! them, matching the convention that shifts are absorbed into `Ω`.

use thiserror::Error;

use super::bessel::sinc;
use crate::params::PhysicalParams;

/// Short-wavelength cutoff `Λ`, in units of `1/k₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub lambda_cut: f64,
}

impl CutoffSpec {
    pub fn new(lambda_cut: f64) -> Self {
        Self { lambda_cut }
    }

    /// Cutoff wavenumber `2π/Λ` in units of `k₀`.
    pub fn k_cut_over_k0(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.lambda_cut
    }
}

/// `Σ = δω − iΓ/2` split into its real shift and decay rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfEnergy {
    pub delta_omega: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CutoffError {
    #[error("cutoff wavenumber 2π/Λ = {k_cut} k₀ does not exceed the resonance k₀")]
    CutoffBelowResonance { k_cut: f64 },
}

/// Single-atom self-energy at the pole. The decay rate is the input `Γ`
/// itself (the volume factor is absorbed into `Γ`); the shift carries the
/// explicit cutoff dependence
/// `δω = −(Γ/2π) [2π²/Λ̂² + 2π/Λ̂ + ln(2π/Λ̂ − 1)]` with `Λ̂ = k₀Λ`.
pub fn self_energy(params: &PhysicalParams, cutoff: &CutoffSpec) -> Result<SelfEnergy, CutoffError> {
    let kc = cutoff.k_cut_over_k0();
    if kc <= 1.0 {
        return Err(CutoffError::CutoffBelowResonance { k_cut: kc });
    }
    let lam = cutoff.lambda_cut;
    let pi = std::f64::consts::PI;
    // -ln(k₀/(2π/Λ − k₀)) = +ln(2π/Λ̂ − 1) in units of k₀.
    let bracket = 2.0 * pi * pi / (lam * lam) + 2.0 * pi / lam + (kc - 1.0).ln();
    Ok(SelfEnergy { delta_omega: -params.gamma / (2.0 * pi) * bracket, gamma: params.gamma })
}

/// Two-atom interaction energy `Δ = δω_r − iΓ·sinc(k₀r)/2` at separation
/// `k₀r`, reported as the pair (shift, pair decay rate `Γ_r = Γ·sinc(k₀r)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionEnergy {
    pub delta_omega_r: f64,
    /// The small-separation expansion behind `delta_omega_r` is only
    /// controlled for `k₀r ≪ 1`; false means the value is extrapolation.
    pub delta_omega_valid: bool,
    pub gamma_r: f64,
}

/// Largest `k₀r` for which the small-separation shift expansion is reported
/// as trustworthy.
pub const SHIFT_VALIDITY_LIMIT: f64 = 0.3;

/// Interaction energy between two atoms at dimensionless separation `k₀r`.
///
/// `gamma_r = Γ sinc(k₀r)` holds for all separations; the shift uses the
/// small-`k₀r` expression
/// `δω_r = (Γ/2π)[(cos(2πr/Λ) − 1)/(k₀r)² + π/(2k₀r) + ln(k₀r)]`.
pub fn interaction_energy(
    k0r: f64,
    params: &PhysicalParams,
    cutoff: &CutoffSpec,
) -> InteractionEnergy {
    let gamma_r = params.gamma * sinc(k0r);
    if k0r <= 0.0 || !k0r.is_finite() {
        return InteractionEnergy { delta_omega_r: f64::NAN, delta_omega_valid: false, gamma_r };
    }
    let pi = std::f64::consts::PI;
    // 2πr/Λ = (2π/Λ̂)·(k₀r) with Λ̂ = k₀Λ.
    let arg = 2.0 * pi * k0r / cutoff.lambda_cut;
    let bracket = (arg.cos() - 1.0) / (k0r * k0r) + pi / (2.0 * k0r) + k0r.ln();
    InteractionEnergy {
        delta_omega_r: params.gamma / (2.0 * pi) * bracket,
        delta_omega_valid: k0r <= SHIFT_VALIDITY_LIMIT,
        gamma_r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn gamma_passthrough() {
        let se = self_energy(&params(), &CutoffSpec::new(0.5)).unwrap();
        assert_eq!(se.gamma, 0.1);
    }

    #[test]
    fn shift_negative_for_large_cutoff() {
        // 2π/Λ ≫ k₀ means Λ̂ small.
        let se = self_energy(&params(), &CutoffSpec::new(1e-3)).unwrap();
        assert!(se.delta_omega < 0.0);
    }

    #[test]
    fn cutoff_below_resonance_rejected() {
        // 2π/Λ = 0.5 k₀ ⇒ Λ̂ = 4π.
        let err = self_energy(&params(), &CutoffSpec::new(4.0 * std::f64::consts::PI));
        assert!(matches!(err, Err(CutoffError::CutoffBelowResonance { .. })));
    }

    #[test]
    fn pair_rate_follows_sinc() {
        let cut = CutoffSpec::new(0.1);
        assert_abs_diff_eq!(interaction_energy(1e-14, &params(), &cut).gamma_r, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(
            interaction_energy(std::f64::consts::PI, &params(), &cut).gamma_r,
            0.0,
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(
            interaction_energy(1.0, &params(), &cut).gamma_r,
            0.08414709848078965,
            epsilon = 1e-15
        );
    }

    #[test]
    fn shift_validity_flag() {
        let cut = CutoffSpec::new(0.1);
        assert!(interaction_energy(0.05, &params(), &cut).delta_omega_valid);
        assert!(!interaction_energy(1.0, &params(), &cut).delta_omega_valid);
    }
}
