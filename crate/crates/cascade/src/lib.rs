//! Two-photon collective emission in systems of two-level atoms.
//!
//! This crate models the decay of two excitations shared between a collection
//! of identical two-level atoms and a scalar photon field, in the rotating-wave
//! regime. It provides:
//!
//! - closed-form probabilities, two-photon spectral densities, and radiated
//!   power for a single driven atom ([`discrete::single`]), an atom pair with
//!   superradiant/subradiant splitting ([`discrete::two_atom`]), and N atoms in
//!   a subwavelength volume ([`discrete::small_system`]);
//! - the continuum-sphere regime with partial-wave eigenvalues, Schmidt
//!   weights, and the von Neumann entanglement entropy of the emitted photon
//!   pair ([`continuum`]);
//! - an independent brute-force check: exact integration of the two-excitation
//!   Schrödinger equations on a discretized photon-mode set ([`oracle`]);
//! - a CLI layer that exports every regime's data as CSV with a digest-carrying
//!   JSON manifest ([`cli`], driven by the `cascade` binary).
//!
//! Units: `ħ = c = 1`; the atomic transition frequency `Ω` sets the frequency
//! scale (default 1), times are in `1/Ω`, and radiated power is reported in
//! units of `ħΩΓ`.

pub mod cli;
pub mod continuum;
pub mod discrete;
pub mod oracle;
pub mod params;
pub mod specfun;
pub mod state;

pub use params::{Geometry, PhysicalParams, ValidationError};
pub use state::{ModeProbabilities, SpectralGrid, TimeSeries, TwoExcitationState};
