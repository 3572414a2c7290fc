//! Schmidt weights and the von Neumann entropy of the emitted photon pair.
//! Entangled photons require an entangled initial atomic state: a lone
//! partial wave gives a product pair, a balanced s/p_z mix gives ln 2.

use cascade::continuum::{two_mode_entropy_sweep, von_neumann_entropy, ContinuumSystem};
use cascade::params::{InitialCoeff, PhysicalParams};
use cascade::specfun::lambda_l;
use num_complex::Complex64 as C64;

fn main() {
    let params = PhysicalParams::default();
    let (n_atoms, k0_radius) = (100, 4.0);
    let lam0 = lambda_l(0, n_atoms, k0_radius);
    let lam1 = lambda_l(1, n_atoms, k0_radius);

    for (label, coeffs) in [
        ("pure s-wave", vec![InitialCoeff::new(0, 0, C64::new(1.0, 0.0))]),
        (
            "balanced s + p_z",
            vec![
                InitialCoeff::new(0, 0, C64::new(1.0 / lam0, 0.0)),
                InitialCoeff::new(1, 0, C64::new(1.0 / lam1, 0.0)),
            ],
        ),
        (
            "lopsided s + p_z + d",
            vec![
                InitialCoeff::new(0, 0, C64::new(1.0, 0.0)),
                InitialCoeff::new(1, 0, C64::new(0.8, 0.2)),
                InitialCoeff::new(2, 0, C64::new(0.0, 0.5)),
            ],
        ),
    ] {
        let sys = ContinuumSystem::new(n_atoms, k0_radius, &coeffs, &params).unwrap();
        let schmidt = sys.schmidt();
        print!("{label}: σ =");
        for (l, m, s) in &schmidt.entries {
            print!(" ({l},{m}): {s:.4}");
        }
        println!("  →  S = {:.6}", von_neumann_entropy(&schmidt));
    }

    println!("\ntwo-mode family S(σ₀₀): maximal entanglement at equal weights");
    for (s, e) in two_mode_entropy_sweep(11) {
        let bar = "#".repeat((e / std::f64::consts::LN_2 * 30.0).round() as usize);
        println!("  σ₀₀ = {s:.1}  S = {e:.4}  {bar}");
    }
}
