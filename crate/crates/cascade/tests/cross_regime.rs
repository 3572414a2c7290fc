//! Cross-regime consistency: the continuum sphere reduces to the
//! small-system forms for small radii, and the sampled spectra obey their
//! structural invariants.

use cascade::continuum::ContinuumSystem;
use cascade::discrete::small_system::small_system_probabilities;
use cascade::discrete::two_atom::two_atom_spectrum;
use cascade::params::{InitialCoeff, PhysicalParams};
use cascade::state::SpectralGrid;
use num_complex::Complex64 as C64;

fn params() -> PhysicalParams {
    PhysicalParams::default()
}

/// s-wave continuum probabilities at k0R = 0.05 track the N = 100
/// small-system curves within 2% of each curve's scale over t ≤ 5/(NΓ).
#[test]
fn small_sphere_reduces_to_small_system() {
    let p = params();
    let n = 100usize;
    let coeffs = [InitialCoeff::new(0, 0, C64::new(1.0, 0.0))];
    let sys = ContinuumSystem::new(n, 0.05, &coeffs, &p).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=200 {
        let t = i as f64 / 200.0 * 5.0 / (n as f64 * p.gamma);
        let cont = sys.probabilities(t, &p);
        let small = small_system_probabilities(t, n, &p).unwrap();
        worst = worst.max((cont.prob_a - small.prob_a).abs());
        worst = worst.max((cont.prob_b - small.prob_b).abs());
        worst = worst.max((cont.prob_c - small.prob_c).abs());
    }
    assert!(worst <= 0.02, "continuum vs small-system deviation {worst}");
}

#[test]
fn sampled_two_atom_spectrum_invariants() {
    let p = params();
    let n = 61;
    let axis: Vec<f64> = (0..n).map(|i| 0.4 + 1.2 * i as f64 / (n - 1) as f64).collect();
    let mut rho = Vec::with_capacity(n * n);
    for &wk in &axis {
        for &wp in &axis {
            rho.push(two_atom_spectrum(wk, wp, 1.0, &p));
        }
    }
    let grid = SpectralGrid { omega_k: axis.clone(), omega_p: axis, rho };
    assert!(grid.min_value() >= 0.0);
    assert!(grid.symmetry_residual() <= 1e-12);
}

/// The continuum spectrum inherits positivity and interchange symmetry for
/// any admissible coefficient mix.
#[test]
fn sampled_continuum_spectrum_invariants() {
    let p = params();
    let coeffs = [
        InitialCoeff::new(0, 0, C64::new(0.8, 0.0)),
        InitialCoeff::new(1, 0, C64::new(0.0, 0.6)),
        InitialCoeff::new(3, 0, C64::new(-0.2, 0.1)),
    ];
    let sys = ContinuumSystem::new(100, 4.0, &coeffs, &p).unwrap();
    let n = 41;
    let axis: Vec<f64> = (0..n).map(|i| 0.7 + 0.6 * i as f64 / (n - 1) as f64).collect();
    let mut rho = Vec::with_capacity(n * n);
    for &wk in &axis {
        for &wp in &axis {
            rho.push(sys.spectrum(wk, wp, &p));
        }
    }
    let grid = SpectralGrid { omega_k: axis.clone(), omega_p: axis, rho };
    assert!(grid.min_value() >= 0.0);
    assert!(grid.symmetry_residual() <= 1e-14);
}

/// Monotonicity across the analytic regimes: the pair-excitation population
/// never grows and the two-photon population never shrinks.
#[test]
fn sector_monotonicity() {
    let p = params();
    let grid = cascade::state::log_time_grid(p.gamma, 500, 1e-3, 50.0);
    let mut last_a = f64::INFINITY;
    let mut last_c = -1.0;
    for &t in &grid {
        let v = cascade::discrete::two_atom::two_atom_probabilities(t, 1.0, &p);
        assert!(v.prob_a <= last_a + 1e-14);
        assert!(v.prob_c >= last_c - 1e-14);
        last_a = v.prob_a;
        last_c = v.prob_c;
    }
    let mut last_a = f64::INFINITY;
    let mut last_c = -1.0;
    for &t in &grid {
        let v = small_system_probabilities(t, 10, &p).unwrap();
        assert!(v.prob_a <= last_a + 1e-14);
        assert!(v.prob_c >= last_c - 1e-14);
        last_a = v.prob_a;
        last_c = v.prob_c;
    }
}
