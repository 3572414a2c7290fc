//! Canned run configurations reproducing each published figure's data at its
//! stated parameters.

use num_complex::Complex64 as C64;

use super::config::{OracleOpts, RunConfig, Task};
use crate::params::{Geometry, InitialCoeff, PhysicalParams};
use crate::specfun::lambda_l;

#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    pub config: RunConfig,
}

fn base(geometry: Geometry, task: Task, out: &str) -> RunConfig {
    RunConfig {
        params: PhysicalParams::default(),
        geometry,
        task,
        t_max: None,
        grid_points: None,
        spectral_window: None,
        oracle: OracleOpts::default(),
        out: out.into(),
    }
}

fn s_wave() -> Vec<InitialCoeff> {
    vec![InitialCoeff::new(0, 0, C64::new(1.0, 0.0))]
}

/// Two equal-weight modes (s and p_z) for the entropy family.
fn s_and_pz(n_atoms: usize, k0_radius: f64) -> Vec<InitialCoeff> {
    let lam0 = lambda_l(0, n_atoms, k0_radius);
    let lam1 = lambda_l(1, n_atoms, k0_radius);
    vec![
        InitialCoeff::new(0, 0, C64::new(1.0 / lam0, 0.0)),
        InitialCoeff::new(1, 0, C64::new(1.0 / lam1, 0.0)),
    ]
}

/// The full recipe list. Names ending in a letter are panels of one figure.
pub fn figure_recipes() -> Vec<Recipe> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, description: &'static str, config: RunConfig| {
        out.push(Recipe { name, description, config });
    };

    push(
        "fig1",
        "single-atom probabilities vs time (resonant incident photon)",
        base(Geometry::SingleAtom { omega_k1: 1.0 }, Task::Timeseries, "fig1.csv"),
    );
    push(
        "fig2a",
        "single-atom two-photon spectral density",
        base(Geometry::SingleAtom { omega_k1: 1.0 }, Task::Spectrum, "fig2a.csv"),
    );
    push(
        "fig2b",
        "single-atom radiated power vs time",
        base(Geometry::SingleAtom { omega_k1: 1.0 }, Task::Power, "fig2b.csv"),
    );
    push(
        "fig3",
        "two-atom probabilities vs time at k0r = 1",
        base(Geometry::TwoAtom { k0r: 1.0 }, Task::Timeseries, "fig3.csv"),
    );
    for (name, k0r) in
        [("fig4a", 0.0), ("fig4b", 1.0), ("fig4c", 10.0), ("fig4d", 100.0)]
    {
        push(
            name,
            "two-atom two-photon spectral density (separation sweep)",
            base(Geometry::TwoAtom { k0r }, Task::Spectrum, &format!("{name}.csv")),
        );
    }
    push(
        "fig6",
        "superradiant/subradiant populations and channel powers at k0r = 1",
        base(Geometry::TwoAtom { k0r: 1.0 }, Task::Power, "fig6.csv"),
    );
    for (name, k0r) in [("fig7a", 0.0), ("fig7b", 1.0), ("fig7c", 2.0), ("fig7d", 10.0)] {
        push(
            name,
            "two-atom radiated power (separation sweep)",
            base(Geometry::TwoAtom { k0r }, Task::Power, &format!("{name}.csv")),
        );
    }
    push(
        "fig8",
        "small-system probabilities vs time, N = 10",
        base(Geometry::SmallSystem { n_atoms: 10 }, Task::Timeseries, "fig8.csv"),
    );
    for (name, n) in [("fig9a", 3), ("fig9b", 5), ("fig9c", 7), ("fig9d", 10)] {
        push(
            name,
            "small-system two-photon spectral density (atom-number sweep)",
            base(Geometry::SmallSystem { n_atoms: n }, Task::Spectrum, &format!("{name}.csv")),
        );
    }
    for (name, n) in [("fig10a", 10), ("fig10b", 50), ("fig10c", 100)] {
        push(
            name,
            "small-system radiated power (atom-number sweep)",
            base(Geometry::SmallSystem { n_atoms: n }, Task::Power, &format!("{name}.csv")),
        );
    }
    push(
        "fig11",
        "continuum-sphere probabilities vs time (s-wave, N = 100, k0R = 4)",
        base(
            Geometry::Continuum { n_atoms: 100, k0_radius: 4.0, initial_coeffs: s_wave() },
            Task::Timeseries,
            "fig11.csv",
        ),
    );
    for (name, radius) in [("fig12a", 0.5), ("fig12b", 1.0), ("fig12c", 2.0), ("fig12d", 4.0)] {
        push(
            name,
            "continuum-sphere radiated power (radius sweep, s-wave, N = 100)",
            base(
                Geometry::Continuum { n_atoms: 100, k0_radius: radius, initial_coeffs: s_wave() },
                Task::Power,
                &format!("{name}.csv"),
            ),
        );
    }
    push(
        "fig13a",
        "continuum-sphere two-photon spectral density (s-wave, N = 100, k0R = 4)",
        base(
            Geometry::Continuum { n_atoms: 100, k0_radius: 4.0, initial_coeffs: s_wave() },
            Task::Spectrum,
            "fig13a.csv",
        ),
    );
    let mut fig13b = base(
        Geometry::Continuum { n_atoms: 100, k0_radius: 4.0, initial_coeffs: s_and_pz(100, 4.0) },
        Task::Entropy,
        "fig13b.csv",
    );
    fig13b.grid_points = Some(101);
    push("fig13b", "von Neumann entropy sweep of the s/p_z two-mode family", fig13b);

    out
}

pub fn find(name: &str) -> Option<Recipe> {
    figure_recipes().into_iter().find(|r| r.name == name)
}
