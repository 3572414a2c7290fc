//! N atoms in a subwavelength volume: collective decay N times faster than a
//! lone atom, peak power linear in N (not the N² of full inversion), and the
//! giant-atom limit.

use cascade::discrete::small_system::{small_system_power, small_system_probabilities};
use cascade::params::PhysicalParams;

fn main() {
    let params = PhysicalParams::default();

    println!("peak power scaling P(0) = 2ħΩΓ(N−1):");
    println!("{:>6} {:>12} {:>16}", "N", "P(0)/ħΩΓ", "decay rate of |a|²");
    for &n in &[3usize, 5, 10, 30, 100] {
        let p0 = small_system_power(0.0, n, &params).unwrap();
        println!("{:>6} {:>12.3} {:>16.3}", n, p0, 2.0 * (n as f64 - 1.0) * params.gamma);
    }

    let n = 10;
    println!("\ndynamics for N = {n}:");
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "t·NΓ", "|a|²", "|b|²", "|c|²", "P/ħΩΓ");
    for i in 0..=10 {
        let t = i as f64 * 5.0 / (n as f64 * params.gamma) / 10.0;
        let v = small_system_probabilities(t, n, &params).unwrap();
        let w = small_system_power(t, n, &params).unwrap();
        println!(
            "{:>8.2} {:>10.5} {:>10.5} {:>10.5} {:>10.4}",
            t * n as f64 * params.gamma,
            v.prob_a,
            v.prob_b,
            v.prob_c,
            w
        );
    }

    let n = 100;
    let t = 1.0 / (n as f64 * params.gamma);
    let exact = small_system_power(t, n, &params).unwrap();
    let giant = 2.0 * n as f64 * (-(n as f64) * params.gamma * t).exp();
    println!(
        "\ngiant-atom check at N = {n}, t = 1/(NΓ): exact {exact:.4}, 2N e^(-NΓt) = {giant:.4}"
    );
}
