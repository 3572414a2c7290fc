//! Large atomic systems: a constant density of atoms in a sphere, expanded in
//! partial-wave modes with eigenvalues `λ_l`. Covers mode dynamics, the
//! two-photon spectrum, Schmidt weights, the von Neumann entanglement entropy
//! of the emitted pair, and radiated power.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::params::{InitialCoeff, PhysicalParams};
use crate::specfun::{lambda_l, spherical_harmonic};
use crate::state::ModeProbabilities;

/// Tolerance on the normalization sum `Σ λ² |a(0)|² / 8π² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Modes with `λ_l` below this fraction of the largest retained eigenvalue
/// are dropped (they decay so slowly that they are numerically inert over any
/// run and would otherwise dominate the l-truncation budget).
pub const LAMBDA_DROP_RATIO: f64 = 1e-6;

/// One partial-wave mode of the sphere with its eigenvalue and (normalized)
/// initial coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumMode {
    pub l: u32,
    pub m: i32,
    pub a0: C64,
    pub lam: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContinuumError {
    #[error("initial state not normalized: Σ λ²|a0|²/8π² = {sum}")]
    UnnormalizedInitialState { sum: f64 },
    #[error("no retained modes: {0}")]
    Empty(String),
}

fn weight_sum(modes: &[ContinuumMode]) -> f64 {
    modes.iter().map(|m| m.lam * m.lam * m.a0.norm_sqr()).sum::<f64>()
        / (8.0 * std::f64::consts::PI * std::f64::consts::PI)
}

fn check_normalized(modes: &[ContinuumMode]) -> Result<(), ContinuumError> {
    let sum = weight_sum(modes);
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        Err(ContinuumError::UnnormalizedInitialState { sum })
    } else {
        Ok(())
    }
}

/// Schmidt weight of a mode: `σ_lm = |√2 λ_l a_lm(0) / 4π|²`.
fn schmidt_weight(m: &ContinuumMode) -> f64 {
    m.lam * m.lam * m.a0.norm_sqr() / (8.0 * std::f64::consts::PI * std::f64::consts::PI)
}

/// A validated, globally rescaled continuum configuration.
///
/// The published normalization statements conflict: setting `a_00(0) = 1`
/// does not in general satisfy `Σ λ²|a(0)|²/8π² = 1`. Inputs are therefore
/// rescaled by one global factor so the probability sum is exactly one, and
/// both the raw and rescaled coefficients are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumSystem {
    pub n_atoms: usize,
    pub k0_radius: f64,
    modes: Vec<ContinuumMode>,
    raw: Vec<InitialCoeff>,
    scale: f64,
    dropped: Vec<(u32, i32, f64)>,
}

impl ContinuumSystem {
    pub fn new(
        n_atoms: usize,
        k0_radius: f64,
        coeffs: &[InitialCoeff],
        _params: &PhysicalParams,
    ) -> Result<Self, ContinuumError> {
        let mut modes: Vec<ContinuumMode> = coeffs
            .iter()
            .map(|c| ContinuumMode {
                l: c.l,
                m: c.m,
                a0: c.a0(),
                lam: lambda_l(c.l, n_atoms, k0_radius),
            })
            .collect();
        let lam_max = modes.iter().map(|m| m.lam).fold(0.0f64, f64::max);
        if lam_max <= 0.0 {
            return Err(ContinuumError::Empty("all eigenvalues vanish".into()));
        }
        let mut dropped = Vec::new();
        modes.retain(|m| {
            if m.lam < LAMBDA_DROP_RATIO * lam_max {
                dropped.push((m.l, m.m, m.lam));
                false
            } else {
                true
            }
        });
        let sum = weight_sum(&modes);
        if sum <= 0.0 {
            return Err(ContinuumError::Empty("zero total weight".into()));
        }
        let scale = sum.sqrt().recip();
        for m in &mut modes {
            m.a0 *= scale;
        }
        Ok(Self { n_atoms, k0_radius, modes, raw: coeffs.to_vec(), scale, dropped })
    }

    /// Normalized modes, ordered as given (ascending `l`, then `m`, when the
    /// caller follows the conventional ordering).
    pub fn modes(&self) -> &[ContinuumMode] {
        &self.modes
    }

    pub fn raw_coeffs(&self) -> &[InitialCoeff] {
        &self.raw
    }

    /// The global factor applied to the raw coefficients.
    pub fn scale_factor(&self) -> f64 {
        self.scale
    }

    /// Modes removed by the eigenvalue cut, as `(l, m, λ_l)`.
    pub fn dropped_modes(&self) -> &[(u32, i32, f64)] {
        &self.dropped
    }

    pub fn probabilities(&self, t: f64, params: &PhysicalParams) -> ModeProbabilities {
        continuum_probabilities(t, &self.modes, params).expect("system is normalized")
    }

    pub fn spectrum(&self, omega_k: f64, omega_p: f64, params: &PhysicalParams) -> f64 {
        continuum_spectrum(omega_k, omega_p, &self.modes, params).expect("system is normalized")
    }

    pub fn schmidt(&self) -> SchmidtSpectrum {
        schmidt_spectrum(&self.modes).expect("system is normalized")
    }

    pub fn power(&self, t: f64, params: &PhysicalParams) -> f64 {
        continuum_power(t, &self.modes, params)
    }
}

/// Mode-independent probabilities, Eq.-style per-mode sums
/// (`u = e^{−λΓt}`; per mode the three sectors carry `u²`, `2u(1−u)`,
/// `(1−u)²` of its Schmidt weight). The total is conserved identically.
pub fn continuum_probabilities(
    t: f64,
    modes: &[ContinuumMode],
    params: &PhysicalParams,
) -> Result<ModeProbabilities, ContinuumError> {
    check_normalized(modes)?;
    let mut prob_a = 0.0;
    let mut prob_b = 0.0;
    let mut prob_c = 0.0;
    for m in modes {
        let w = schmidt_weight(m);
        let u = (-m.lam * params.gamma * t).exp();
        let one_minus_u = -(-m.lam * params.gamma * t).exp_m1();
        prob_a += w * u * u;
        prob_b += 2.0 * w * u * one_minus_u;
        prob_c += w * one_minus_u * one_minus_u;
    }
    Ok(ModeProbabilities { prob_a, prob_b, prob_c, p_total: prob_a + prob_b + prob_c })
}

/// Long-time two-photon spectral density: a sum of Lorentzian products with
/// per-mode widths `λ_l Γ / 2`, unit total mass.
pub fn continuum_spectrum(
    omega_k: f64,
    omega_p: f64,
    modes: &[ContinuumMode],
    params: &PhysicalParams,
) -> Result<f64, ContinuumError> {
    check_normalized(modes)?;
    let dk = params.omega - omega_k;
    let dp = params.omega - omega_p;
    let gamma = params.gamma;
    let pi4 = std::f64::consts::PI.powi(4);
    let mut rho = 0.0;
    for m in modes {
        let half_width2 = m.lam * m.lam * gamma * gamma / 4.0;
        rho += m.lam.powi(4) * m.a0.norm_sqr()
            / ((dk * dk + half_width2) * (dp * dp + half_width2));
    }
    Ok(gamma * gamma / (32.0 * pi4) * rho)
}

/// Schmidt weights `σ_lm` of the final two-photon state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    pub entries: Vec<(u32, i32, f64)>,
}

impl SchmidtSpectrum {
    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.2).collect()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }
}

pub fn schmidt_spectrum(modes: &[ContinuumMode]) -> Result<SchmidtSpectrum, ContinuumError> {
    check_normalized(modes)?;
    Ok(SchmidtSpectrum {
        entries: modes.iter().map(|m| (m.l, m.m, schmidt_weight(m))).collect(),
    })
}

/// Von Neumann entropy `S = −Σ σ ln σ` with `0·ln 0 = 0`.
pub fn von_neumann_entropy(spectrum: &SchmidtSpectrum) -> f64 {
    entropy_of_weights(&spectrum.weights())
}

pub fn entropy_of_weights(weights: &[f64]) -> f64 {
    weights.iter().map(|&s| if s > 0.0 { -s * s.ln() } else { 0.0 }).sum()
}

/// The two-mode entropy family `S(σ) = −σ ln σ − (1−σ) ln(1−σ)` sampled on
/// `points` values of the first weight in `[0, 1]`.
pub fn two_mode_entropy_sweep(points: usize) -> Vec<(f64, f64)> {
    (0..points)
        .map(|i| {
            let s = i as f64 / (points - 1) as f64;
            (s, entropy_of_weights(&[s, 1.0 - s]))
        })
        .collect()
}

/// Radiated power in units of `ħΩΓ`:
/// `(1/4π²) Σ λ³ |a(0)|² e^{−λΓt}`, monotone decreasing.
pub fn continuum_power(t: f64, modes: &[ContinuumMode], params: &PhysicalParams) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    modes
        .iter()
        .map(|m| m.lam.powi(3) * m.a0.norm_sqr() * (-m.lam * params.gamma * t).exp())
        .sum::<f64>()
        / (4.0 * pi2)
}

impl ContinuumMode {
    /// Schmidt basis amplitudes `(ψ_lm, φ_lm)` of the two single-photon
    /// factors at frequency `omega`, direction `(theta, phi)`, and time `t`.
    /// `ψ` carries `e^{+iωt}`; `φ` carries `e^{−iωt}`.
    pub fn basis_amplitudes(
        &self,
        omega: f64,
        theta: f64,
        phi: f64,
        t: f64,
        params: &PhysicalParams,
    ) -> (C64, C64) {
        let ylm = spherical_harmonic(self.l, self.m, theta, phi);
        let norm = (4.0 * std::f64::consts::PI * self.lam).sqrt() * params.g;
        let il = C64::new(0.0, 1.0).powu(self.l);
        let half = self.lam * params.gamma / 2.0;
        let psi = norm * il.conj() * C64::new(0.0, omega * t).exp()
            / C64::new(omega - params.omega, -half)
            * ylm;
        let phi_amp = norm * il * C64::new(0.0, -omega * t).exp()
            / C64::new(omega - params.omega, half)
            * ylm;
        (psi, phi_amp)
    }
}
