//! Stimulated emission of one excited atom with a resonant incident photon:
//! sector probabilities, the non-conserved total, and the radiated power.

use cascade::discrete::single::{single_energy_power, single_probabilities};
use cascade::params::{validate, Geometry, PhysicalParams};

fn main() {
    let params = PhysicalParams::default();
    let omega_k1 = 1.0;
    validate(params, Geometry::SingleAtom { omega_k1 }).expect("valid configuration");

    println!("single atom, Ω = 1, Γ = {}, g = {}, ω_k1 = {omega_k1}", params.gamma, params.g);
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "t·Γ", "|b|²", "|c|²", "p", "P/ħΩΓ");
    for i in 0..=10 {
        let t = i as f64 * 5.0 / params.gamma / 10.0;
        let v = single_probabilities(t, omega_k1, &params);
        let (_, power) = single_energy_power(t, omega_k1, &params);
        println!(
            "{:>8.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            t * params.gamma,
            v.prob_b,
            v.prob_c,
            v.p_total,
            power
        );
    }
    let v = single_probabilities(1e4, omega_k1, &params);
    println!(
        "\nlong-time |c|² = {:.6}: the total exceeds one by 4g²/Γ² = {:.4} —\n\
         the on-shell replacement does not conserve probability for one atom.",
        v.prob_c,
        4.0 * params.g * params.g / (params.gamma * params.gamma)
    );
}
