//! A constant density of atoms in a sphere: partial-wave eigenvalues λ_l,
//! per-mode collective decay, and maximum radiated power versus radius.

use cascade::continuum::ContinuumSystem;
use cascade::params::{InitialCoeff, PhysicalParams};
use cascade::specfun::lambda_l;
use num_complex::Complex64 as C64;

fn main() {
    let params = PhysicalParams::default();
    let n_atoms = 100;
    let k0_radius = 4.0;

    println!("eigenvalues λ_l for N = {n_atoms}, k₀R = {k0_radius}:");
    for l in 0..=6u32 {
        println!("  λ_{l} = {:.6}", lambda_l(l, n_atoms, k0_radius));
    }
    println!("  (λ₀ → N as k₀R → 0: λ₀(0.05) = {:.3})", lambda_l(0, n_atoms, 0.05));

    let coeffs = [InitialCoeff::new(0, 0, C64::new(1.0, 0.0))];
    let sys = ContinuumSystem::new(n_atoms, k0_radius, &coeffs, &params).unwrap();
    let lam0 = sys.modes()[0].lam;
    println!(
        "\ns-wave dynamics (coefficients rescaled by {:.4} to normalize the state):",
        sys.scale_factor()
    );
    println!("{:>9} {:>10} {:>10} {:>10} {:>10}", "t·λ₀Γ", "|a|²", "|b|²", "|c|²", "P/ħΩΓ");
    for i in 0..=10 {
        let t = i as f64 * 5.0 / (lam0 * params.gamma) / 10.0;
        let v = sys.probabilities(t, &params);
        println!(
            "{:>9.2} {:>10.5} {:>10.5} {:>10.5} {:>10.4}",
            t * lam0 * params.gamma,
            v.prob_a,
            v.prob_b,
            v.prob_c,
            sys.power(t, &params)
        );
    }

    println!("\nmaximum power falls with radius (per-mode rates λ_lΓ shrink):");
    println!("{:>8} {:>10} {:>12}", "k₀R", "λ₀", "P(0)/ħΩΓ");
    for &radius in &[0.5, 1.0, 2.0, 4.0, 8.0] {
        let sys = ContinuumSystem::new(n_atoms, radius, &coeffs, &params).unwrap();
        println!(
            "{:>8.1} {:>10.4} {:>12.4}",
            radius,
            sys.modes()[0].lam,
            sys.power(0.0, &params)
        );
    }
}
