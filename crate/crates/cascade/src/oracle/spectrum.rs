//! Binning the final two-photon amplitudes into a spectral density.

use super::mode_set::ModeSet;
use super::OracleError;
use crate::state::{pair_index, SpectralGrid, TwoExcitationState};

/// Residual atom population above which the state is not yet a two-photon
/// state and the spectrum is refused.
pub const CONVERGENCE_LIMIT: f64 = 1e-3;

/// Bin `|c_kp|²` onto the `(ω_k, ω_p)` frequency grid as a density (weights
/// divided by `Δω²`). The grid mass equals the run's `|c|²` exactly.
pub fn extract_spectrum(
    state: &TwoExcitationState,
    mode_set: &ModeSet,
) -> Result<SpectralGrid, OracleError> {
    let probs = state.mode_probabilities();
    let remaining = probs.prob_a + probs.prob_b;
    if remaining >= CONVERGENCE_LIMIT {
        return Err(OracleError::NotConverged { remaining });
    }
    let axis = mode_set.frequency_axis();
    let nf = axis.len;
    let bins = mode_set.freq_bin();
    let m = state.n_modes();
    let mut rho = vec![0.0; nf * nf];
    for k in 0..m {
        let bk = bins[k];
        for p in k..m {
            let bp = bins[p];
            let mass = 2.0 * state.c[pair_index(m, k, p)].norm_sqr();
            rho[bk * nf + bp] += mass;
            if k != p {
                rho[bp * nf + bk] += mass;
            }
        }
    }
    let dw2 = axis.step * axis.step;
    for v in rho.iter_mut() {
        *v /= dw2;
    }
    Ok(SpectralGrid { omega_k: axis.values(), omega_p: axis.values(), rho })
}
