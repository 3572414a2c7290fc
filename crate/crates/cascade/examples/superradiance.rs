//! Two-atom collective decay: the superradiant/subradiant rate split versus
//! separation, the population transfer through the collective states, and
//! the universal initial power 2ħΩΓ.

use cascade::discrete::two_atom::{
    superradiant_populations, two_atom_power, two_atom_probabilities, TwoAtomRates,
};
use cascade::params::PhysicalParams;

fn main() {
    let params = PhysicalParams::default();

    println!("rate split Γ± = Γ(1 ± sinc(k₀r)):");
    println!("{:>8} {:>12} {:>12} {:>10}", "k₀r", "Γ₊", "Γ₋", "P(0)/ħΩΓ");
    for &k0r in &[0.0, 0.5, 1.0, 2.0, std::f64::consts::PI, 10.0, f64::INFINITY] {
        let r = TwoAtomRates::new(k0r, &params);
        let p0 = two_atom_power(0.0, k0r, &params).p_total;
        println!("{:>8.3} {:>12.6} {:>12.6} {:>10.6}", k0r, r.gamma_plus, r.gamma_minus, p0);
    }

    let k0r = 1.0;
    println!("\ncascade through the collective states at k₀r = {k0r}:");
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "t·Γ", "|a|²", "|b₊|²", "|b₋|²", "|c|²", "p"
    );
    for i in 0..=12 {
        let t = i as f64 * 6.0 / params.gamma / 12.0;
        let v = two_atom_probabilities(t, k0r, &params);
        let (bp, bm) = superradiant_populations(t, k0r, &params);
        println!(
            "{:>8.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.6}",
            t * params.gamma,
            v.prob_a,
            bp,
            bm,
            v.prob_c,
            v.p_total
        );
    }
    println!("\nthe subradiant tail outlives the superradiant burst: a dark state forms.");
}
