//! N atoms in a volume small compared to the resonant wavelength: position
//! phases dropped, every atom pair initially excited with equal amplitude.

use super::{ratio_expm1, RegimeError};
use crate::params::PhysicalParams;
use crate::state::ModeProbabilities;

/// Mode- and atom-independent probabilities for `N ≥ 2` atoms. The `N = 2`
/// point is the analytic limit of the general formulas and coincides with the
/// two-atom regime at zero separation.
pub fn small_system_probabilities(
    t: f64,
    n_atoms: usize,
    params: &PhysicalParams,
) -> Result<ModeProbabilities, RegimeError> {
    if n_atoms < 2 {
        return Err(RegimeError::RegimeMismatch { n_atoms });
    }
    let n = n_atoms as f64;
    let gamma = params.gamma;
    let rate_a = 2.0 * (n - 1.0) * gamma;
    let prob_a = (-rate_a * t).exp();
    // 2 (N-1)/(N-2) (e^{-NΓt} - e^{-2(N-1)Γt}), stable through N = 2.
    let s_b = 2.0 * (n - 1.0) * gamma * prob_a * ratio_expm1((n - 2.0) * gamma, t);
    let prob_c = 1.0 - prob_a - s_b;
    Ok(ModeProbabilities { prob_a, prob_b: s_b, prob_c, p_total: prob_a + s_b + prob_c })
}

/// Two-photon spectral density for `N ≥ 3` atoms, unit total mass.
/// `N = 2` is served by the two-atom regime at `k₀r = 0`.
pub fn small_system_spectrum(
    omega_k: f64,
    omega_p: f64,
    n_atoms: usize,
    params: &PhysicalParams,
) -> Result<f64, RegimeError> {
    if n_atoms < 3 {
        return Err(RegimeError::RegimeMismatch { n_atoms });
    }
    let n = n_atoms as f64;
    let gamma = params.gamma;
    let s = 2.0 * params.omega - omega_k - omega_p;
    let dk = params.omega - omega_k;
    let dp = params.omega - omega_p;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok(n * (n - 1.0) * gamma * gamma * (s * s + n * n * gamma * gamma)
        / (4.0
            * pi2
            * (s * s + (n - 1.0) * (n - 1.0) * gamma * gamma)
            * (dk * dk + n * n * gamma * gamma / 4.0)
            * (dp * dp + n * n * gamma * gamma / 4.0)))
}

/// Total radiated power in units of `ħΩΓ` for `N ≥ 3` atoms:
/// `2(N−1)/(N−2) [N e^{−NΓt} − 2 e^{−2(N−1)Γt}]`, peaking at `2(N−1)` at
/// `t = 0` and approaching the giant-atom form `2N e^{−NΓt}` for large `N`.
pub fn small_system_power(
    t: f64,
    n_atoms: usize,
    params: &PhysicalParams,
) -> Result<f64, RegimeError> {
    if n_atoms < 3 {
        return Err(RegimeError::RegimeMismatch { n_atoms });
    }
    let n = n_atoms as f64;
    let gamma = params.gamma;
    Ok(2.0 * (n - 1.0) / (n - 2.0)
        * (n * (-n * gamma * t).exp() - 2.0 * (-2.0 * (n - 1.0) * gamma * t).exp()))
}
