//! Cross-check a closed form against the exact discrete-mode integration:
//! a single excited atom with a resonant photon, on a coupling-matched grid.

use cascade::discrete::single::single_probabilities;
use cascade::oracle::{
    build_mode_set, initial_state, integrate, GridSpec, IntegratorConfig, ModeReduction,
};
use cascade::params::{Geometry, PhysicalParams};

fn main() {
    let params = PhysicalParams::default();
    let geom = Geometry::SingleAtom { omega_k1: 1.0 };
    // Δω = 2πg²/Γ gives every mode the physical coupling g, so even the
    // O(g²) stimulated corrections carry their analytic size.
    let matched = 2.0 * std::f64::consts::PI * params.g * params.g / params.gamma;
    let grid = GridSpec {
        window: 20.0 * params.gamma,
        delta_omega: matched,
        reduction: ModeReduction::Reduced1D,
    };
    let mode_set = build_mode_set(&geom, &params, &grid).unwrap();
    println!(
        "integrating {} modes, window ±{}Γ, Δω = {:.2e}",
        mode_set.n_modes(),
        20.0,
        matched
    );

    let cfg = IntegratorConfig::new(0.04, 20.0, 50);
    let run = integrate(initial_state(&geom, &mode_set).unwrap(), &cfg, &mode_set, &params)
        .expect("integration");

    println!("{:>8} {:>12} {:>12} {:>10}", "t", "|b|² oracle", "|b|² closed", "diff");
    let mut worst = 0.0f64;
    for (i, &t) in run.series.times.iter().enumerate() {
        let oracle = run.series.rows[i].prob_b;
        let closed = single_probabilities(t, 1.0, &params).prob_b;
        worst = worst.max((oracle - closed).abs());
        if i % 2 == 0 {
            println!("{t:>8.2} {oracle:>12.6} {closed:>12.6} {:>10.2e}", oracle - closed);
        }
    }
    println!("\nmax |oracle − closed form| = {worst:.2e}");
    println!("norm drift over the run: {:.2e}", run.series.rows.last().unwrap().p_total - 1.0);
}
