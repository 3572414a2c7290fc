//! Cutoff-dependent level-shift diagnostics: the single-atom Lamb shift and
//! the two-atom interaction energy. Shifts are reported only — no dynamical
//! formula in this crate includes them.

use cascade::params::PhysicalParams;
use cascade::specfun::{interaction_energy, self_energy, CutoffSpec};

fn main() {
    let params = PhysicalParams::default();

    println!("self-energy Σ = δω − iΓ/2 versus short-wavelength cutoff Λ (units 1/k₀):");
    println!("{:>10} {:>14} {:>8}", "Λ·k₀", "δω/Γ", "Γ");
    for &lam in &[2.0, 1.0, 0.5, 0.1, 0.01] {
        let se = self_energy(&params, &CutoffSpec::new(lam)).unwrap();
        println!("{:>10.2} {:>14.4} {:>8.3}", lam, se.delta_omega / params.gamma, se.gamma);
    }
    let err = self_energy(&params, &CutoffSpec::new(4.0 * std::f64::consts::PI));
    println!("cutoff below resonance is rejected: {err:?}");

    println!("\ntwo-atom interaction energy Δ = δω_r − iΓ_r/2 at Λ·k₀ = 0.1:");
    println!("{:>8} {:>14} {:>10} {:>8}", "k₀r", "δω_r/Γ", "Γ_r/Γ", "valid");
    let cutoff = CutoffSpec::new(0.1);
    for &k0r in &[0.05, 0.1, 0.2, 0.5, 1.0, std::f64::consts::PI] {
        let ie = interaction_energy(k0r, &params, &cutoff);
        println!(
            "{:>8.3} {:>14.4} {:>10.5} {:>8}",
            k0r,
            ie.delta_omega_r / params.gamma,
            ie.gamma_r / params.gamma,
            ie.delta_omega_valid
        );
    }
    println!("(the shift expansion holds for k₀r ≪ 1; outside it only Γ_r = Γ sinc(k₀r) is exact)");
}
