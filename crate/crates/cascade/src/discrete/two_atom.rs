//! Two excited atoms: superradiant/subradiant splitting, probabilities,
//! two-photon spectral density, and radiated power.

use super::ratio_expm1;
use crate::params::PhysicalParams;
use crate::specfun::sinc;
use crate::state::ModeProbabilities;

/// Collective decay rates `Γ± = Γ(1 ± sinc(k₀r))` of the symmetric and
/// antisymmetric single-excitation states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomRates {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub gamma: f64,
    pub k0r: f64,
}

impl TwoAtomRates {
    /// The sum rule `Γ₊ + Γ₋ = 2Γ` is made exact in floating point by
    /// deriving the smaller rate from the larger via `2Γ − Γ_big`, which is
    /// an exact subtraction (Sterbenz) whenever the rates straddle `Γ`.
    pub fn new(k0r: f64, params: &PhysicalParams) -> Self {
        let gamma = params.gamma;
        let s = sinc(k0r);
        let (gamma_plus, gamma_minus) = if s >= 0.0 {
            let plus = gamma * (1.0 + s);
            (plus, 2.0 * gamma - plus)
        } else {
            let minus = gamma * (1.0 - s);
            (2.0 * gamma - minus, minus)
        };
        debug_assert_eq!(gamma_plus + gamma_minus, 2.0 * gamma);
        Self { gamma_plus, gamma_minus, gamma, k0r }
    }
}

/// `|b±(t)|² = (Γ±/Γ∓)(e^{−Γ±t} − e^{−2Γt})`, in the uniformly stable
/// `ratio_expm1` form (the degenerate `Γ∓ → 0` limit needs no special case).
fn collective_population(gamma_this: f64, gamma_other: f64, two_gamma: f64, t: f64) -> f64 {
    gamma_this * (-two_gamma * t).exp() * ratio_expm1(gamma_other, t)
}

/// Populations of the superradiant and subradiant states.
pub fn superradiant_populations(t: f64, k0r: f64, params: &PhysicalParams) -> (f64, f64) {
    let r = TwoAtomRates::new(k0r, params);
    let two_gamma = 2.0 * r.gamma;
    (
        collective_population(r.gamma_plus, r.gamma_minus, two_gamma, t),
        collective_population(r.gamma_minus, r.gamma_plus, two_gamma, t),
    )
}

/// Mode-independent probabilities of the two-atom cascade. The total is
/// conserved identically.
pub fn two_atom_probabilities(t: f64, k0r: f64, params: &PhysicalParams) -> ModeProbabilities {
    let r = TwoAtomRates::new(k0r, params);
    let two_gamma = 2.0 * r.gamma;
    let prob_a = (-two_gamma * t).exp();
    let s_plus = collective_population(r.gamma_plus, r.gamma_minus, two_gamma, t);
    let s_minus = collective_population(r.gamma_minus, r.gamma_plus, two_gamma, t);
    let prob_b = s_plus + s_minus;
    let prob_c = 1.0 - prob_a - s_plus - s_minus;
    ModeProbabilities { prob_a, prob_b, prob_c, p_total: prob_a + prob_b + prob_c }
}

/// Two-photon spectral density `ρ(ω_k, ω_p)`, normalized so its double
/// integral over all frequencies is one.
pub fn two_atom_spectrum(omega_k: f64, omega_p: f64, k0r: f64, params: &PhysicalParams) -> f64 {
    let r = TwoAtomRates::new(k0r, params);
    let s = 2.0 * params.omega - omega_k - omega_p;
    let dk = params.omega - omega_k;
    let dp = params.omega - omega_p;
    spectrum_term(s, dk, dp, r.gamma_plus, r.gamma)
        + spectrum_term(s, dk, dp, r.gamma_minus, r.gamma)
}

fn spectrum_term(s: f64, dk: f64, dp: f64, g_pm: f64, gamma: f64) -> f64 {
    if g_pm == 0.0 {
        // The channel carries no spectral weight when its rate vanishes.
        return 0.0;
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    g_pm * g_pm * (s * s + g_pm * g_pm)
        / (8.0
            * pi2
            * (s * s + gamma * gamma)
            * (dk * dk + g_pm * g_pm / 4.0)
            * (dp * dp + g_pm * g_pm / 4.0))
}

/// Radiated power split into the superradiant, subradiant, and two-photon
/// channels, in units of `ħΩΓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomPower {
    pub p_plus: f64,
    pub p_minus: f64,
    pub p_c: f64,
    pub p_total: f64,
}

/// `P±(t) = ħΩ d|b±|²/dt` and `P_c(t) = 2ħΩ d|c|²/dt`. The total reaches
/// `2ħΩΓ` at `t = 0` for every separation.
pub fn two_atom_power(t: f64, k0r: f64, params: &PhysicalParams) -> TwoAtomPower {
    let r = TwoAtomRates::new(k0r, params);
    let two_gamma = 2.0 * r.gamma;
    let e2 = (-two_gamma * t).exp();
    let rate = |g_this: f64, g_other: f64| {
        g_this * ((-g_this * t).exp() - two_gamma * e2 * ratio_expm1(g_other, t))
    };
    let p_plus = rate(r.gamma_plus, r.gamma_minus);
    let p_minus = rate(r.gamma_minus, r.gamma_plus);
    // Probability conservation fixes the two-photon channel:
    // d|c|²/dt = -d(|a|² + |b|²)/dt and P_c carries the 2ħΩ photon pair.
    let p_c = 2.0 * (two_gamma * e2 - p_plus - p_minus);
    let p_total = p_plus + p_minus + p_c;
    let scale = params.gamma;
    TwoAtomPower {
        p_plus: p_plus / scale,
        p_minus: p_minus / scale,
        p_c: p_c / scale,
        p_total: p_total / scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn rates_at_reference_separations() {
        let r = TwoAtomRates::new(0.0, &params());
        assert_eq!(r.gamma_plus, 0.2);
        assert_eq!(r.gamma_minus, 0.0);
        let r = TwoAtomRates::new(1.0, &params());
        assert_abs_diff_eq!(r.gamma_plus, 0.18414709848078965, epsilon = 1e-15);
        assert_abs_diff_eq!(r.gamma_minus, 0.015852901519210358, epsilon = 1e-15);
        let r = TwoAtomRates::new(f64::INFINITY, &params());
        assert_eq!((r.gamma_plus, r.gamma_minus), (0.1, 0.1));
    }

    #[test]
    fn rate_sum_rule_exact() {
        for &k0r in &[0.0, 0.3, 1.0, 2.0, 4.0, 5.5, 10.0, 123.4, f64::INFINITY] {
            let r = TwoAtomRates::new(k0r, &params());
            assert_eq!(r.gamma_plus + r.gamma_minus, 2.0 * r.gamma, "k0r = {k0r}");
            assert!((r.gamma_plus >= r.gamma_minus) == (sinc(k0r) >= 0.0));
        }
    }

    #[test]
    fn probabilities_against_direct_formulas() {
        // Direct evaluation of the published closed forms is stable at
        // k0r = 1; pin the implementation to it.
        let p = params();
        let r = TwoAtomRates::new(1.0, &p);
        let (gp, gm, g2) = (r.gamma_plus, r.gamma_minus, 0.2);
        for &t in &[0.3, 1.0, 5.0, 17.0, 80.0] {
            let direct_b = gp / gm * ((-gp * t).exp() - (-g2 * t).exp())
                + gm / gp * ((-gm * t).exp() - (-g2 * t).exp());
            let direct_c = 1.0
                - (1.0 - (gp * gp + gm * gm) / (gp * gm)) * (-g2 * t).exp()
                - gp / gm * (-gp * t).exp()
                - gm / gp * (-gm * t).exp();
            let v = two_atom_probabilities(t, 1.0, &p);
            assert_relative_eq!(v.prob_b, direct_b, max_relative = 1e-12);
            assert_relative_eq!(v.prob_c, direct_c, max_relative = 1e-10);
            assert_abs_diff_eq!(v.p_total, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn initial_conditions() {
        let v = two_atom_probabilities(0.0, 1.0, &params());
        assert_eq!((v.prob_a, v.prob_b, v.prob_c, v.p_total), (1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn coincident_limit_matches_lhopital() {
        // k0r → 0: |b(t)|² → 2Γt e^{-2Γt}.
        let p = params();
        for &t in &[0.5, 3.0, 12.0] {
            let v = two_atom_probabilities(t, 0.0, &p);
            assert_relative_eq!(v.prob_b, 0.2 * t * (-0.2 * t).exp(), max_relative = 1e-13);
        }
    }

    #[test]
    fn superradiant_population_behavior() {
        let p = params();
        let (bp0, bm0) = superradiant_populations(0.0, 1.0, &p);
        assert_eq!((bp0, bm0), (0.0, 0.0));
        // r → ∞: each collective state holds half of |b|².
        let (bp, bm) = superradiant_populations(4.0, f64::INFINITY, &p);
        let v = two_atom_probabilities(4.0, f64::INFINITY, &p);
        assert_relative_eq!(bp, v.prob_b / 2.0, max_relative = 1e-12);
        assert_relative_eq!(bm, v.prob_b / 2.0, max_relative = 1e-12);
        // Superradiant channel peaks earlier and higher.
        let grid: Vec<f64> = (1..4000).map(|i| i as f64 * 0.05).collect();
        let peak = |vals: &[(f64, f64)]| {
            vals.iter().cloned().fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc })
        };
        let plus: Vec<_> =
            grid.iter().map(|&t| (t, superradiant_populations(t, 1.0, &p).0)).collect();
        let minus: Vec<_> =
            grid.iter().map(|&t| (t, superradiant_populations(t, 1.0, &p).1)).collect();
        let (t_plus, v_plus) = peak(&plus);
        let (t_minus, v_minus) = peak(&minus);
        assert!(t_plus < t_minus);
        assert!(v_plus > v_minus);
    }

    #[test]
    fn spectrum_symmetry_and_ridge() {
        let p = params();
        let (wk, wp) = (1.13, 0.94);
        assert_relative_eq!(
            two_atom_spectrum(wk, wp, 1.0, &p),
            two_atom_spectrum(wp, wk, 1.0, &p),
            max_relative = 1e-14
        );
        // Energy-conserving ridge: ρ(Ω+δ, Ω−δ) > ρ(Ω+δ, Ω+δ) at δ = 2Γ.
        let d = 2.0 * p.gamma;
        assert!(
            two_atom_spectrum(1.0 + d, 1.0 - d, 1.0, &p)
                > two_atom_spectrum(1.0 + d, 1.0 + d, 1.0, &p)
        );
    }

    #[test]
    fn power_identities() {
        let p = params();
        // P(0) = 2ħΩΓ at every separation.
        for &k0r in &[0.0, 0.5, 1.0, 2.0, 10.0] {
            let v = two_atom_power(0.0, k0r, &p);
            assert_abs_diff_eq!(v.p_total, 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(v.p_c, 0.0, epsilon = 1e-12);
        }
        // Coincident atoms: P(t) = 2ħΩΓ e^{-2Γt}(1 + 2Γt).
        for &t in &[0.0, 1.0, 7.0, 40.0] {
            let v = two_atom_power(t, 0.0, &p);
            let expect = 2.0 * (-0.2 * t).exp() * (1.0 + 0.2 * t);
            assert_relative_eq!(v.p_total, expect, max_relative = 1e-12);
        }
        // Distant atoms: two independent emitters, P(t) = 2ħΩΓ e^{-Γt}.
        for &t in &[0.0, 1.0, 7.0, 40.0] {
            let v = two_atom_power(t, f64::INFINITY, &p);
            assert_relative_eq!(v.p_total, 2.0 * (-0.1 * t).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn power_components_against_direct_formulas() {
        let p = params();
        let r = TwoAtomRates::new(1.0, &p);
        let (gp, gm, g) = (r.gamma_plus, r.gamma_minus, p.gamma);
        for &t in &[0.2, 2.0, 9.0] {
            let v = two_atom_power(t, 1.0, &p);
            let direct_plus = gp / gm * (2.0 * g * (-2.0 * g * t).exp() - gp * (-gp * t).exp());
            let direct_minus = gm / gp * (2.0 * g * (-2.0 * g * t).exp() - gm * (-gm * t).exp());
            let direct_c = 2.0
                * (2.0 * g * (1.0 - (gp * gp + gm * gm) / (gp * gm)) * (-2.0 * g * t).exp()
                    + gp * gp / gm * (-gp * t).exp()
                    + gm * gm / gp * (-gm * t).exp());
            let direct_total = -2.0 * g * (gp - gm).powi(2) / (gp * gm) * (-2.0 * g * t).exp()
                + gp * gp / gm * (-gp * t).exp()
                + gm * gm / gp * (-gm * t).exp();
            assert_relative_eq!(v.p_plus * g, direct_plus, max_relative = 1e-11);
            assert_relative_eq!(v.p_minus * g, direct_minus, max_relative = 1e-11);
            assert_relative_eq!(v.p_c * g, direct_c, max_relative = 1e-9);
            assert_relative_eq!(v.p_total * g, direct_total, max_relative = 1e-9);
        }
    }
}
