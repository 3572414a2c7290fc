//! Special functions and geometry factors: `sinc`, spherical Bessel
//! functions, spherical harmonics, the sphere eigenvalues `λ_l` and radial
//! couplings `β_l`, level-shift diagnostics, and quadrature utilities.

pub mod bessel;
pub mod energies;
pub mod harmonics;
pub mod quad;
pub mod sphere;

pub use bessel::{sinc, spherical_bessel_j, spherical_bessel_j_array};
pub use energies::{
    interaction_energy, self_energy, CutoffError, CutoffSpec, InteractionEnergy, SelfEnergy,
};
pub use harmonics::spherical_harmonic;
pub use sphere::{beta_l, lambda_l, lambda_l_quadrature};
