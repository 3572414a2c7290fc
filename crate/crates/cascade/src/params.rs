//! Physical parameters, geometry selection, and input validation.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `g/Ω` for which the weak-coupling closed forms are trusted.
pub const MAX_COUPLING_RATIO: f64 = 0.05;

/// Atomic and field parameters shared by every regime.
///
/// `omega` is the atomic transition frequency `Ω` and sets the frequency unit;
/// `gamma` is the single-atom spontaneous decay rate `Γ`; `g` is the atom-field
/// coupling, used only for perturbative bookkeeping (the decay physics is
/// parameterized by `Γ` alone).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub omega: f64,
    pub gamma: f64,
    pub g: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self { omega: 1.0, gamma: 0.1, g: 0.005 }
    }
}

impl PhysicalParams {
    pub fn new(omega: f64, gamma: f64, g: f64) -> Self {
        Self { omega, gamma, g }
    }

    /// Resonant wavenumber `k₀ = Ω/c` (with `c = 1`).
    pub fn k0(&self) -> f64 {
        self.omega
    }
}

/// Initial partial-wave coefficient `a_lm(0)` for the continuum regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialCoeff {
    pub l: u32,
    pub m: i32,
    pub re: f64,
    pub im: f64,
}

impl InitialCoeff {
    pub fn new(l: u32, m: i32, a0: C64) -> Self {
        Self { l, m, re: a0.re, im: a0.im }
    }

    pub fn a0(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// Which physical regime a calculation runs in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    /// One atom, initially excited, with a single incident photon at `ω_k1`.
    SingleAtom { omega_k1: f64 },
    /// Two atoms at dimensionless separation `k₀·|r₁ − r₂|`, both excited.
    TwoAtom { k0r: f64 },
    /// `N ≥ 2` atoms within a volume small compared to the resonant
    /// wavelength; position phases are dropped entirely.
    SmallSystem { n_atoms: usize },
    /// `N` atoms at constant density in a sphere of dimensionless radius
    /// `k₀R`, prepared in the partial-wave state given by `initial_coeffs`.
    Continuum { n_atoms: usize, k0_radius: f64, initial_coeffs: Vec<InitialCoeff> },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("non-positive frequency: {name} = {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },
    #[error("coupling too strong: g/omega = {ratio} exceeds {MAX_COUPLING_RATIO}")]
    CouplingTooStrong { ratio: f64 },
    #[error("bad geometry: {0}")]
    BadGeometry(String),
    #[error("asymmetric initial coefficients: a({l},{m}) must equal a({l},-{m})")]
    AsymmetricInitialCoeffs { l: u32, m: i32 },
}

/// A parameter/geometry pair that has passed [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub params: PhysicalParams,
    pub geometry: Geometry,
}

/// Check every invariant on the inputs and return the normalized configuration.
pub fn validate(params: PhysicalParams, geometry: Geometry) -> Result<Validated, ValidationError> {
    if !(params.omega > 0.0) || !params.omega.is_finite() {
        return Err(ValidationError::NonPositiveFrequency { name: "omega", value: params.omega });
    }
    if !(params.gamma > 0.0) || !params.gamma.is_finite() {
        return Err(ValidationError::NonPositiveFrequency { name: "gamma", value: params.gamma });
    }
    if !(params.g >= 0.0) || !params.g.is_finite() {
        return Err(ValidationError::NonPositiveFrequency { name: "g", value: params.g });
    }
    let ratio = params.g / params.omega;
    if ratio > MAX_COUPLING_RATIO {
        return Err(ValidationError::CouplingTooStrong { ratio });
    }
    match &geometry {
        Geometry::SingleAtom { omega_k1 } => {
            if !(*omega_k1 > 0.0) || !omega_k1.is_finite() {
                return Err(ValidationError::NonPositiveFrequency {
                    name: "omega_k1",
                    value: *omega_k1,
                });
            }
        }
        Geometry::TwoAtom { k0r } => {
            if !(*k0r >= 0.0) {
                return Err(ValidationError::BadGeometry(format!("k0r = {k0r} must be >= 0")));
            }
        }
        Geometry::SmallSystem { n_atoms } => {
            if *n_atoms < 2 {
                return Err(ValidationError::BadGeometry(format!(
                    "small system needs at least 2 atoms, got {n_atoms}"
                )));
            }
        }
        Geometry::Continuum { n_atoms, k0_radius, initial_coeffs } => {
            if *n_atoms < 2 {
                return Err(ValidationError::BadGeometry(format!(
                    "continuum sphere needs at least 2 atoms, got {n_atoms}"
                )));
            }
            if !(*k0_radius > 0.0) || !k0_radius.is_finite() {
                return Err(ValidationError::BadGeometry(format!("k0R = {k0_radius} must be > 0")));
            }
            if initial_coeffs.is_empty() {
                return Err(ValidationError::BadGeometry(
                    "continuum regime needs at least one initial coefficient".into(),
                ));
            }
            for c in initial_coeffs {
                if c.m.unsigned_abs() > c.l {
                    return Err(ValidationError::BadGeometry(format!(
                        "coefficient ({}, {}) violates |m| <= l",
                        c.l, c.m
                    )));
                }
                let dup = initial_coeffs.iter().filter(|d| d.l == c.l && d.m == c.m).count();
                if dup > 1 {
                    return Err(ValidationError::BadGeometry(format!(
                        "duplicate coefficient ({}, {})",
                        c.l, c.m
                    )));
                }
            }
            // Bosonic symmetry of the pair state demands a(l,-m) = a(l,m).
            for c in initial_coeffs {
                if c.m != 0 {
                    let partner = initial_coeffs.iter().find(|d| d.l == c.l && d.m == -c.m);
                    match partner {
                        Some(p) if p.a0() == c.a0() => {}
                        _ => {
                            return Err(ValidationError::AsymmetricInitialCoeffs {
                                l: c.l,
                                m: c.m,
                            })
                        }
                    }
                }
            }
        }
    }
    Ok(Validated { params, geometry })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_figure_parameters_validate() {
        let v = validate(PhysicalParams::default(), Geometry::SingleAtom { omega_k1: 1.0 });
        assert!(v.is_ok());
    }

    #[test]
    fn strong_coupling_rejected() {
        let p = PhysicalParams::new(1.0, 0.1, 0.2);
        let err = validate(p, Geometry::SingleAtom { omega_k1: 1.0 }).unwrap_err();
        assert!(matches!(err, ValidationError::CouplingTooStrong { .. }));
    }

    #[test]
    fn one_atom_small_system_rejected() {
        let err =
            validate(PhysicalParams::default(), Geometry::SmallSystem { n_atoms: 1 }).unwrap_err();
        assert!(matches!(err, ValidationError::BadGeometry(_)));
    }

    #[test]
    fn continuum_coefficients_must_be_symmetric() {
        let geom = Geometry::Continuum {
            n_atoms: 100,
            k0_radius: 4.0,
            initial_coeffs: vec![InitialCoeff { l: 1, m: 1, re: 1.0, im: 0.0 }],
        };
        let err = validate(PhysicalParams::default(), geom).unwrap_err();
        assert!(matches!(err, ValidationError::AsymmetricInitialCoeffs { .. }));

        let geom = Geometry::Continuum {
            n_atoms: 100,
            k0_radius: 4.0,
            initial_coeffs: vec![
                InitialCoeff { l: 1, m: 1, re: 1.0, im: 0.0 },
                InitialCoeff { l: 1, m: -1, re: 1.0, im: 0.0 },
            ],
        };
        assert!(validate(PhysicalParams::default(), geom).is_ok());
    }

    #[test]
    fn negative_gamma_rejected() {
        let p = PhysicalParams::new(1.0, -0.1, 0.005);
        let err = validate(p, Geometry::TwoAtom { k0r: 1.0 }).unwrap_err();
        assert!(matches!(err, ValidationError::NonPositiveFrequency { name: "gamma", .. }));
    }
}
