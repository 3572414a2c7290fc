//! The two-excitation state vector and the sampled result containers.

use num_complex::Complex64 as C64;

/// Amplitudes of a two-excitation state over `n_atoms` atoms and `n_modes`
/// photon modes.
///
/// The three sectors are the doubly-excited-atom amplitudes `a_ij`, the mixed
/// atom-photon amplitudes `b_ik`, and the two-photon amplitudes `c_kp`. The
/// `a` matrix is stored dense (its symmetry `a_ij = a_ji`, `a_ii = 0` is a
/// dynamical invariant, not a storage constraint); `c` is stored as the packed
/// upper triangle since `c_kp = c_pk` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoExcitationState {
    n_atoms: usize,
    n_modes: usize,
    /// `a_ij`, row-major `n_atoms × n_atoms`.
    pub a: Vec<C64>,
    /// `b_ik`, row-major `n_atoms × n_modes`.
    pub b: Vec<C64>,
    /// Packed upper triangle of `c_kp` (`k ≤ p`), row-major.
    pub c: Vec<C64>,
}

/// Number of packed entries in the upper triangle of an `m × m` symmetric
/// matrix, diagonal included.
pub fn pair_count(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Index of `(k, p)` with `k ≤ p` in the packed upper triangle.
#[inline]
pub fn pair_index(n_modes: usize, k: usize, p: usize) -> usize {
    debug_assert!(k <= p && p < n_modes);
    k * n_modes - k * (k + 1) / 2 + p
}

impl TwoExcitationState {
    /// Zero state.
    pub fn new(n_atoms: usize, n_modes: usize) -> Self {
        Self {
            n_atoms,
            n_modes,
            a: vec![C64::ZERO; n_atoms * n_atoms],
            b: vec![C64::ZERO; n_atoms * n_modes],
            c: vec![C64::ZERO; pair_count(n_modes)],
        }
    }

    pub(crate) fn from_parts(n_atoms: usize, n_modes: usize, a: Vec<C64>, b: Vec<C64>, c: Vec<C64>) -> Self {
        assert_eq!(a.len(), n_atoms * n_atoms);
        assert_eq!(b.len(), n_atoms * n_modes);
        assert_eq!(c.len(), pair_count(n_modes));
        Self { n_atoms, n_modes, a, b, c }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    #[inline]
    pub fn a_at(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n_atoms + j]
    }

    pub fn set_a(&mut self, i: usize, j: usize, v: C64) {
        self.a[i * self.n_atoms + j] = v;
    }

    #[inline]
    pub fn b_at(&self, i: usize, k: usize) -> C64 {
        self.b[i * self.n_modes + k]
    }

    pub fn set_b(&mut self, i: usize, k: usize, v: C64) {
        self.b[i * self.n_modes + k] = v;
    }

    /// `c_kp` for any ordering of the pair.
    #[inline]
    pub fn c_at(&self, k: usize, p: usize) -> C64 {
        let (k, p) = if k <= p { (k, p) } else { (p, k) };
        self.c[pair_index(self.n_modes, k, p)]
    }

    pub fn set_c(&mut self, k: usize, p: usize, v: C64) {
        let (k, p) = if k <= p { (k, p) } else { (p, k) };
        self.c[pair_index(self.n_modes, k, p)] = v;
    }

    /// Mode-independent probabilities: `|a|² = 2Σ|a_ij|²`, `|b|² = Σ|b_ik|²`,
    /// `|c|² = 2Σ|c_kp|²` with the pair sums running over ordered index pairs.
    pub fn mode_probabilities(&self) -> ModeProbabilities {
        let prob_a = 2.0 * self.a.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let prob_b = self.b.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let mut diag = 0.0;
        for k in 0..self.n_modes {
            diag += self.c[pair_index(self.n_modes, k, k)].norm_sqr();
        }
        let upper: f64 = self.c.iter().map(|z| z.norm_sqr()).sum();
        // Ordered sum counts off-diagonal entries twice.
        let prob_c = 2.0 * (2.0 * (upper - diag) + diag);
        ModeProbabilities { prob_a, prob_b, prob_c, p_total: prob_a + prob_b + prob_c }
    }

    /// Force `a_ij = a_ji` and `a_ii = 0` by averaging. Idempotent.
    pub fn symmetrize(&mut self) {
        let n = self.n_atoms;
        for i in 0..n {
            self.a[i * n + i] = C64::ZERO;
            for j in (i + 1)..n {
                let avg = 0.5 * (self.a[i * n + j] + self.a[j * n + i]);
                self.a[i * n + j] = avg;
                self.a[j * n + i] = avg;
            }
        }
    }

    /// Largest violation of the `a`-sector symmetry constraints. The packed
    /// `c` storage satisfies its constraint identically.
    pub fn a_symmetry_residual(&self) -> f64 {
        let n = self.n_atoms;
        let mut worst = 0.0f64;
        for i in 0..n {
            worst = worst.max(self.a[i * n + i].norm());
            for j in (i + 1)..n {
                worst = worst.max((self.a[i * n + j] - self.a[j * n + i]).norm());
            }
        }
        worst
    }
}

/// The Eq.-(7)-style sector probabilities of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProbabilities {
    pub prob_a: f64,
    pub prob_b: f64,
    pub prob_c: f64,
    pub p_total: f64,
}

/// One sampled row of a time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSeriesRow {
    pub prob_a: f64,
    pub prob_b: f64,
    pub prob_c: f64,
    pub p_total: f64,
    /// Radiated power in units of `ħΩΓ`.
    pub power: f64,
}

/// Sampled probabilities and power versus time (times in units of `1/Ω`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub rows: Vec<TimeSeriesRow>,
}

impl TimeSeries {
    pub fn push(&mut self, t: f64, row: TimeSeriesRow) {
        if let Some(&last) = self.times.last() {
            assert!(t > last, "time samples must be strictly increasing");
        }
        self.rows.push(row);
        self.times.push(t);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Default time grid for the analytic regimes: 400 log-spaced points over
/// `[1e-3/Γ, 50/Γ]` plus `t = 0`, resolving both the fast collective decay and
/// the slow subradiant tail.
pub fn default_time_grid(gamma: f64) -> Vec<f64> {
    log_time_grid(gamma, 400, 1e-3, 50.0)
}

/// `n` log-spaced points over `[lo/Γ, hi/Γ]`, prepended with `t = 0`.
pub fn log_time_grid(gamma: f64, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut ts = Vec::with_capacity(n + 1);
    ts.push(0.0);
    let (la, lb) = (lo.ln(), hi.ln());
    for i in 0..n {
        let f = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
        ts.push((la + f * (lb - la)).exp() / gamma);
    }
    ts
}

/// An evenly spaced frequency axis used for spectral grids and the discrete
/// photon-mode construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyAxis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl FrequencyAxis {
    /// Axis of `len` points centered on `center`.
    pub fn centered(center: f64, step: f64, len: usize) -> Self {
        assert!(len >= 1 && step > 0.0);
        let start = center - step * ((len - 1) as f64) / 2.0;
        Self { start, step, len }
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.value(i)).collect()
    }

    /// Index of the grid point nearest `omega`, clamped to the axis.
    pub fn nearest(&self, omega: f64) -> usize {
        let raw = ((omega - self.start) / self.step).round();
        raw.clamp(0.0, (self.len - 1) as f64) as usize
    }
}

/// Two-photon spectral density sampled on a rectangular frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    pub omega_k: Vec<f64>,
    pub omega_p: Vec<f64>,
    /// Row-major: `rho[i * omega_p.len() + j]` is `ρ(omega_k[i], omega_p[j])`.
    pub rho: Vec<f64>,
}

impl SpectralGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.rho[i * self.omega_p.len() + j]
    }

    /// Largest asymmetry `|ρ(ω,ω') − ρ(ω',ω)|` when both axes coincide.
    pub fn symmetry_residual(&self) -> f64 {
        assert_eq!(self.omega_k, self.omega_p);
        let n = self.omega_k.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    pub fn min_value(&self) -> f64 {
        self.rho.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Total mass `Σ ρ Δω_k Δω_p` for uniformly spaced axes.
    pub fn grid_mass(&self) -> f64 {
        let dk = if self.omega_k.len() > 1 { self.omega_k[1] - self.omega_k[0] } else { 1.0 };
        let dp = if self.omega_p.len() > 1 { self.omega_p[1] - self.omega_p[0] } else { 1.0 };
        self.rho.iter().sum::<f64>() * dk * dp
    }
}

/// Deterministic random-state builders shared by unit tests across modules.
#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    fn splitmix(seed: &mut u64) -> f64 {
        // Deterministic pseudo-random doubles in [-0.5, 0.5).
        *seed = seed.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *seed;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    pub(crate) fn random_symmetric_state(
        n_atoms: usize,
        n_modes: usize,
        seed: u64,
    ) -> TwoExcitationState {
        let mut s = TwoExcitationState::new(n_atoms, n_modes);
        let mut rng = seed;
        for i in 0..n_atoms {
            for j in (i + 1)..n_atoms {
                let v = C64::new(splitmix(&mut rng), splitmix(&mut rng));
                s.set_a(i, j, v);
                s.set_a(j, i, v);
            }
        }
        for i in 0..n_atoms {
            for k in 0..n_modes {
                s.set_b(i, k, C64::new(splitmix(&mut rng), splitmix(&mut rng)));
            }
        }
        for k in 0..n_modes {
            for p in k..n_modes {
                s.set_c(k, p, C64::new(splitmix(&mut rng), splitmix(&mut rng)));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::random_symmetric_state;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn initial_two_atom_state_probabilities() {
        let mut s = TwoExcitationState::new(2, 4);
        s.set_a(0, 1, C64::new(0.5, 0.0));
        s.set_a(1, 0, C64::new(0.5, 0.0));
        let p = s.mode_probabilities();
        assert_eq!(p.prob_a, 1.0);
        assert_eq!(p.prob_b, 0.0);
        assert_eq!(p.prob_c, 0.0);
        assert_eq!(p.p_total, 1.0);
    }

    #[test]
    fn zero_state_probabilities() {
        let s = TwoExcitationState::new(3, 5);
        let p = s.mode_probabilities();
        assert_eq!((p.prob_a, p.prob_b, p.prob_c, p.p_total), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn single_off_diagonal_c_pair() {
        let mut s = TwoExcitationState::new(1, 4);
        s.set_c(1, 3, C64::new(0.5, 0.0));
        let p = s.mode_probabilities();
        // 2 * (|c_13|^2 + |c_31|^2) = 2 * (1/4 + 1/4) = 1.
        assert_abs_diff_eq!(p.prob_c, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let mut s = random_symmetric_state(3, 6, 7);
        s.set_a(0, 1, s.a_at(0, 1) + C64::new(1e-3, 0.0)); // break symmetry
        s.set_a(2, 2, C64::new(0.1, 0.0));
        s.symmetrize();
        let once = s.clone();
        s.symmetrize();
        assert_eq!(s, once);
        assert_eq!(s.a_symmetry_residual(), 0.0);
    }

    /// `p_total` from the sector sums must equal the squared norm of the ket
    /// under the two-excitation ansatz, evaluated by direct enumeration of the
    /// orthonormal basis (distinct atom pairs, atom-mode pairs, and unordered
    /// photon pairs with the bosonic √2 on the diagonal).
    #[test]
    fn probabilities_match_direct_inner_product() {
        for seed in [1u64, 2, 3] {
            let s = random_symmetric_state(3, 5, seed);
            let p = s.mode_probabilities();

            let mut norm2 = 0.0;
            for i in 0..3 {
                for j in (i + 1)..3 {
                    norm2 += (2.0 * s.a_at(i, j)).norm_sqr();
                }
            }
            norm2 += s.b.iter().map(|z| z.norm_sqr()).sum::<f64>();
            for k in 0..5 {
                for pp in k..5 {
                    if k == pp {
                        norm2 += (C64::new(2.0f64.sqrt(), 0.0) * s.c_at(k, k)).norm_sqr();
                    } else {
                        norm2 += (2.0 * s.c_at(k, pp)).norm_sqr();
                    }
                }
            }
            assert_abs_diff_eq!(p.p_total, norm2, epsilon = 1e-12);
        }
    }
}
