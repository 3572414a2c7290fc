//! The exact discrete equations of motion and a plain stage-by-stage RK4
//! stepper used for complex-coupling mode sets and as a cross-check of the
//! fused engines.

use num_complex::Complex64 as C64;

use super::mode_set::ModeSet;
use super::{IntegratorConfig, OracleError, OracleRun, Sample};
use crate::params::PhysicalParams;
use crate::state::{pair_index, TwoExcitationState};

fn coupling_at(mode_set: &ModeSet, atom: usize, mode: usize) -> C64 {
    C64::new(
        mode_set.coupling(atom)[mode],
        mode_set.coupling_im(atom).map(|im| im[mode]).unwrap_or(0.0),
    )
}

/// Derivative of a state in the rotating frame (global `e^{-2iΩt}` removed;
/// mode phases are detunings `Δ_c = ω_c − Ω`).
///
/// This is the direct transcription of the two-excitation equations of
/// motion, including the `δ_ij` correction that keeps `a_ii = 0` and both
/// symmetrization terms of the pair-amplitude equation. It preserves the
/// `a`- and `c`-symmetry constraints exactly.
pub fn rhs(
    state: &TwoExcitationState,
    mode_set: &ModeSet,
    params: &PhysicalParams,
) -> TwoExcitationState {
    let mut out = TwoExcitationState::new(state.n_atoms(), state.n_modes());
    rhs_into(state, &mut out, mode_set, params);
    out
}

pub(crate) fn rhs_into(
    state: &TwoExcitationState,
    out: &mut TwoExcitationState,
    mode_set: &ModeSet,
    params: &PhysicalParams,
) {
    let n = state.n_atoms();
    let m = state.n_modes();
    let i_unit = C64::new(0.0, 1.0);

    // a-sector.
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::ZERO;
            for c in 0..m {
                acc += coupling_at(mode_set, j, c) * state.b_at(i, c)
                    + coupling_at(mode_set, i, c) * state.b_at(j, c);
            }
            let mut da = -i_unit * 0.5 * acc;
            if i == j {
                let mut diag = C64::ZERO;
                for c in 0..m {
                    diag += coupling_at(mode_set, i, c) * state.b_at(i, c);
                }
                da += i_unit * diag;
            }
            out.set_a(i, j, da);
        }
    }

    // b-sector: detuning phase, drive from a, feedback from c.
    for i in 0..n {
        for c in 0..m {
            let delta = mode_set.frequencies()[c] - params.omega;
            let mut acc = -i_unit * delta * state.b_at(i, c);
            let mut drive = C64::ZERO;
            for j in 0..n {
                drive += state.a_at(i, j) * coupling_at(mode_set, j, c).conj();
            }
            let mut feedback = C64::ZERO;
            for cp in 0..m {
                feedback += state.c_at(c, cp) * coupling_at(mode_set, i, cp);
            }
            acc += -i_unit * 2.0 * (drive + feedback);
            out.set_b(i, c, acc);
        }
    }

    // c-sector, packed upper triangle.
    for k in 0..m {
        let dk = mode_set.frequencies()[k] - params.omega;
        for p in k..m {
            let dp = mode_set.frequencies()[p] - params.omega;
            let mut src = C64::ZERO;
            for i in 0..n {
                src += coupling_at(mode_set, i, p).conj() * state.b_at(i, k)
                    + coupling_at(mode_set, i, k).conj() * state.b_at(i, p);
            }
            let dc = -i_unit * ((dk + dp) * state.c_at(k, p) + 0.5 * src);
            out.set_c(k, p, dc);
        }
    }
}

/// Rate of change of the total probability implied by a (state, derivative)
/// pair; vanishes identically for the Hermitian dynamics.
pub fn norm_rate(state: &TwoExcitationState, deriv: &TwoExcitationState) -> f64 {
    let mut rate = 0.0;
    for (y, d) in state.a.iter().zip(&deriv.a) {
        rate += 4.0 * (y.conj() * d).re;
    }
    for (y, d) in state.b.iter().zip(&deriv.b) {
        rate += 2.0 * (y.conj() * d).re;
    }
    let m = state.n_modes();
    for k in 0..m {
        for p in k..m {
            let idx = pair_index(m, k, p);
            let term = 4.0 * (state.c[idx].conj() * deriv.c[idx]).re;
            rate += if k == p { term } else { 2.0 * term };
        }
    }
    rate
}

pub(crate) fn sample_state(
    t: f64,
    state: &TwoExcitationState,
    mode_set: &ModeSet,
    params: &PhysicalParams,
) -> Sample {
    let probs = state.mode_probabilities();
    let m = state.n_modes();
    let mut energy = 0.0;
    for i in 0..state.n_atoms() {
        for c in 0..m {
            energy += mode_set.frequencies()[c] * state.b_at(i, c).norm_sqr();
        }
    }
    let mut pair_energy = 0.0;
    for k in 0..m {
        let wk = mode_set.frequencies()[k];
        for p in k..m {
            let wp = mode_set.frequencies()[p];
            let mult = if k == p { 1.0 } else { 2.0 };
            pair_energy += mult * (wk + wp) * state.c[pair_index(m, k, p)].norm_sqr();
        }
    }
    energy += 2.0 * pair_energy;
    let (mut even, mut odd) = (0.0, 0.0);
    let band = super::DETECTION_BAND_LINEWIDTHS * params.gamma;
    for c in 0..m {
        if (mode_set.frequencies()[c] - params.omega).abs() > band {
            continue;
        }
        let pop: f64 = (0..state.n_atoms()).map(|i| state.b_at(i, c).norm_sqr()).sum();
        if mode_set.channel_l()[c] % 2 == 0 {
            even += pop;
        } else {
            odd += pop;
        }
    }
    Sample { t, prob_a: probs.prob_a, prob_b: probs.prob_b, prob_c: probs.prob_c, energy, even, odd }
}

fn axpy(y: &mut TwoExcitationState, alpha: f64, x: &TwoExcitationState) {
    for (a, b) in y.a.iter_mut().zip(&x.a) {
        *a += alpha * b;
    }
    for (a, b) in y.b.iter_mut().zip(&x.b) {
        *a += alpha * b;
    }
    for (a, b) in y.c.iter_mut().zip(&x.c) {
        *a += alpha * b;
    }
}

fn copy_axpy(dst: &mut TwoExcitationState, y: &TwoExcitationState, alpha: f64, x: &TwoExcitationState) {
    for ((d, a), b) in dst.a.iter_mut().zip(&y.a).zip(&x.a) {
        *d = a + alpha * b;
    }
    for ((d, a), b) in dst.b.iter_mut().zip(&y.b).zip(&x.b) {
        *d = a + alpha * b;
    }
    for ((d, a), b) in dst.c.iter_mut().zip(&y.c).zip(&x.c) {
        *d = a + alpha * b;
    }
}

/// Plain classical RK4 built on four `rhs` evaluations per step. Correct for
/// every mode set (including complex couplings) but with no structural
/// speedups; the fused engines are checked against it.
pub(crate) fn integrate_reference(
    initial: &TwoExcitationState,
    config: &IntegratorConfig,
    mode_set: &ModeSet,
    params: &PhysicalParams,
) -> Result<OracleRun, OracleError> {
    let n_steps = (config.t_max / config.dt).ceil() as usize;
    let dt = config.dt;
    let mut y = initial.clone();
    let mut k = TwoExcitationState::new(y.n_atoms(), y.n_modes());
    let mut stage = y.clone();
    let mut acc = TwoExcitationState::new(y.n_atoms(), y.n_modes());

    let mut samples = vec![sample_state(0.0, &y, mode_set, params)];
    for step in 0..n_steps {
        // k1
        rhs_into(&y, &mut k, mode_set, params);
        acc.a.iter_mut().for_each(|v| *v = C64::ZERO);
        acc.b.iter_mut().for_each(|v| *v = C64::ZERO);
        acc.c.iter_mut().for_each(|v| *v = C64::ZERO);
        axpy(&mut acc, dt / 6.0, &k);
        // k2
        copy_axpy(&mut stage, &y, dt / 2.0, &k);
        rhs_into(&stage, &mut k, mode_set, params);
        axpy(&mut acc, dt / 3.0, &k);
        // k3
        copy_axpy(&mut stage, &y, dt / 2.0, &k);
        rhs_into(&stage, &mut k, mode_set, params);
        axpy(&mut acc, dt / 3.0, &k);
        // k4
        copy_axpy(&mut stage, &y, dt, &k);
        rhs_into(&stage, &mut k, mode_set, params);
        axpy(&mut acc, dt / 6.0, &k);

        axpy(&mut y, 1.0, &acc);
        if (step + 1) % config.sample_every == 0 || step + 1 == n_steps {
            samples.push(sample_state((step + 1) as f64 * dt, &y, mode_set, params));
        }
    }
    let with_channels = mode_set.parity_boundary().is_some();
    super::run_from_samples(samples, y, params, with_channels)
}
