//! Discretized photon-mode sets reproducing the continuum coupling density.
//!
//! Every construction pins the local density `2π Σ g²/Δω = Γ` near resonance.
//! Regimes without position phases use the plain 1D frequency reduction; the
//! two-atom regime expands the plane-wave phases in `m = 0` partial waves
//! about the interatomic axis (atoms at `±r/2` on the polar axis), with
//! per-channel weights `(2l+1) j_l²(kr/2)` whose sums reproduce `Γ` and
//! `Γ·sinc(k₀r)` by the addition theorem. A coarse Fibonacci-sphere 3D set is
//! retained as a cross-check.

use super::OracleError;
use crate::params::{Geometry, PhysicalParams};
use crate::specfun::spherical_bessel_j_array;
use crate::state::FrequencyAxis;

/// How the 3D mode sum is reduced to a finite set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeReduction {
    /// Frequency grid only; exact when all atomic phase factors are 1.
    Reduced1D,
    /// Frequency grid × angular-momentum channels `l = 0..=l_max`, `m = 0`.
    PartialWave { l_max: u32 },
    /// Frequency grid × Fibonacci-lattice directions (complex couplings).
    Fibonacci3D { n_directions: usize },
}

/// Frequency window and resolution of the discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Half-width `W` of the window `[Ω − W, Ω + W]`, absolute units.
    pub window: f64,
    pub delta_omega: f64,
    pub reduction: ModeReduction,
}

impl GridSpec {
    /// The standard verification grid: `W = 40Γ`, `Δω = Γ/10`.
    pub fn standard(params: &PhysicalParams, reduction: ModeReduction) -> Self {
        Self { window: 40.0 * params.gamma, delta_omega: params.gamma / 10.0, reduction }
    }
}

/// A flattened set of photon modes with per-atom couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    n_atoms: usize,
    frequencies: Vec<f64>,
    channel_l: Vec<u32>,
    /// `couplings[atom][mode]`, real part.
    coupling_re: Vec<Vec<f64>>,
    /// Imaginary parts, present only for the Fibonacci reduction.
    coupling_im: Option<Vec<Vec<f64>>>,
    /// For two-atom partial waves: modes `[0, b)` carry even `l`, `[b, M)`
    /// odd `l`; cross-parity photon-pair amplitudes vanish identically.
    parity_boundary: Option<usize>,
    axis: FrequencyAxis,
    freq_bin: Vec<usize>,
    delta_omega: f64,
    window: f64,
}

impl ModeSet {
    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn channel_l(&self) -> &[u32] {
        &self.channel_l
    }

    pub fn coupling(&self, atom: usize) -> &[f64] {
        &self.coupling_re[atom]
    }

    pub fn coupling_im(&self, atom: usize) -> Option<&[f64]> {
        self.coupling_im.as_ref().map(|c| c[atom].as_slice())
    }

    pub fn has_complex_couplings(&self) -> bool {
        self.coupling_im.is_some()
    }

    pub fn parity_boundary(&self) -> Option<usize> {
        self.parity_boundary
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    /// The distinct frequency grid (modes of several channels share it).
    pub fn frequency_axis(&self) -> &FrequencyAxis {
        &self.axis
    }

    /// Frequency-bin index of each mode.
    pub fn freq_bin(&self) -> &[usize] {
        &self.freq_bin
    }

    /// Index of the mode nearest `omega` (first channel for layered sets).
    pub fn nearest_mode(&self, omega: f64) -> usize {
        let bin = self.axis.nearest(omega);
        self.freq_bin.iter().position(|&b| b == bin).expect("bin exists")
    }

    /// A copy of this set with every coupling zeroed: the decoupled-oscillator
    /// diagnostic (`g = 0`), under which each amplitude evolves by a pure
    /// phase and every sector norm is constant.
    pub fn zeroed_couplings(&self) -> ModeSet {
        let mut out = self.clone();
        for row in &mut out.coupling_re {
            row.iter_mut().for_each(|g| *g = 0.0);
        }
        if let Some(im) = &mut out.coupling_im {
            for row in im {
                row.iter_mut().for_each(|g| *g = 0.0);
            }
        }
        out
    }

    /// Smoothed coupling density `2π Σ_modes-at-bin g² / Δω`; equals `Γ` on
    /// every interior bin by construction.
    pub fn coupling_density(&self, bin: usize) -> f64 {
        let mut sum = 0.0;
        for (m, &b) in self.freq_bin.iter().enumerate() {
            if b == bin {
                let re = self.coupling_re[0][m];
                let im = self.coupling_im.as_ref().map(|c| c[0][m]).unwrap_or(0.0);
                sum += re * re + im * im;
            }
        }
        2.0 * std::f64::consts::PI * sum / self.delta_omega
    }

    /// Per-frequency channel sums `Σ_l g_l²` and `Σ_l (±1)^l g_l²` scaled to
    /// rates: `(2π/Δω)(total, alternating)`; the pair `(Γ, Γ·sinc(k r))` for
    /// the partial-wave set.
    pub fn channel_rate_sums(&self, bin: usize) -> (f64, f64) {
        let mut total = 0.0;
        let mut alternating = 0.0;
        for (m, &b) in self.freq_bin.iter().enumerate() {
            if b == bin {
                let g2 = self.coupling_re[0][m] * self.coupling_re[0][m];
                total += g2;
                alternating += if self.channel_l[m] % 2 == 0 { g2 } else { -g2 };
            }
        }
        let scale = 2.0 * std::f64::consts::PI / self.delta_omega;
        (scale * total, scale * alternating)
    }
}

/// Discretize the mode sums for a regime.
pub fn build_mode_set(
    geometry: &Geometry,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<ModeSet, OracleError> {
    let gamma = params.gamma;
    if grid.window < 20.0 * gamma {
        return Err(OracleError::WindowTooNarrow { window: grid.window, min: 20.0 * gamma });
    }
    if grid.delta_omega > gamma / 8.0 {
        return Err(OracleError::GridTooCoarse {
            delta_omega: grid.delta_omega,
            max: gamma / 8.0,
        });
    }
    let n_half = (grid.window / grid.delta_omega).round() as usize;
    let axis = FrequencyAxis::centered(params.omega, grid.delta_omega, 2 * n_half + 1);
    let base = (gamma * grid.delta_omega / (2.0 * std::f64::consts::PI)).sqrt();

    match geometry {
        Geometry::SingleAtom { .. } | Geometry::SmallSystem { .. } => {
            // Position phases are exactly 1 in these regimes: plain 1D set.
            let n_atoms = match geometry {
                Geometry::SingleAtom { .. } => 1,
                Geometry::SmallSystem { n_atoms } => *n_atoms,
                _ => unreachable!(),
            };
            let frequencies = axis.values();
            let m = frequencies.len();
            let coupling = vec![vec![base; m]; n_atoms];
            Ok(ModeSet {
                n_atoms,
                frequencies,
                channel_l: vec![0; m],
                coupling_re: coupling,
                coupling_im: None,
                parity_boundary: None,
                freq_bin: (0..m).collect(),
                axis,
                delta_omega: grid.delta_omega,
                window: grid.window,
            })
        }
        Geometry::TwoAtom { k0r } => match grid.reduction {
            ModeReduction::PartialWave { l_max } => {
                Ok(partial_wave_set(*k0r, l_max, params, grid, axis, base))
            }
            ModeReduction::Fibonacci3D { n_directions } => {
                Ok(fibonacci_set(*k0r, n_directions, params, grid, axis))
            }
            ModeReduction::Reduced1D => Err(OracleError::UnsupportedRegime(
                "two-atom geometry needs angular structure; use PartialWave or Fibonacci3D".into(),
            )),
        },
        Geometry::Continuum { .. } => Err(OracleError::UnsupportedRegime(
            "no continuum-sphere oracle; its identities are checked analytically".into(),
        )),
    }
}

fn partial_wave_set(
    k0r: f64,
    l_max: u32,
    params: &PhysicalParams,
    grid: &GridSpec,
    axis: FrequencyAxis,
    base: f64,
) -> ModeSet {
    // Atoms at ±(r/2) on the polar axis; only m = 0 channels couple. The
    // channel coupling of atom 1 is g √(2l+1) j_l(k r/2); atom 2 carries the
    // parity sign (-1)^l. Even-l modes first, so the two-photon matrix
    // splits into two parity blocks.
    let freqs = axis.values();
    let order: Vec<u32> = (0..=l_max)
        .filter(|l| l % 2 == 0)
        .chain((0..=l_max).filter(|l| l % 2 == 1))
        .collect();
    let n_even = (0..=l_max).filter(|l| l % 2 == 0).count();
    let boundary = n_even * freqs.len();

    let mut frequencies = Vec::with_capacity(order.len() * freqs.len());
    let mut channel_l = Vec::with_capacity(order.len() * freqs.len());
    let mut g1 = Vec::with_capacity(order.len() * freqs.len());
    let mut g2 = Vec::with_capacity(order.len() * freqs.len());
    let mut freq_bin = Vec::with_capacity(order.len() * freqs.len());
    for &l in &order {
        for (j, &w) in freqs.iter().enumerate() {
            // Half-separation argument k·r/2 = (ω/Ω)(k₀r/2); negative
            // frequencies continue through j_l(-x) = (-1)^l j_l(x).
            let x = w / params.omega * k0r / 2.0;
            let jl = spherical_bessel_j_array(l, x.abs())[l as usize]
                * if x < 0.0 && l % 2 == 1 { -1.0 } else { 1.0 };
            let g = base * ((2 * l + 1) as f64).sqrt() * jl;
            frequencies.push(w);
            channel_l.push(l);
            g1.push(g);
            g2.push(if l % 2 == 0 { g } else { -g });
            freq_bin.push(j);
        }
    }
    ModeSet {
        n_atoms: 2,
        frequencies,
        channel_l,
        coupling_re: vec![g1, g2],
        coupling_im: None,
        parity_boundary: Some(boundary),
        freq_bin,
        axis,
        delta_omega: grid.delta_omega,
        window: grid.window,
    }
}

fn fibonacci_set(
    k0r: f64,
    n_directions: usize,
    params: &PhysicalParams,
    grid: &GridSpec,
    axis: FrequencyAxis,
) -> ModeSet {
    let freqs = axis.values();
    let f = n_directions.max(1);
    let mag =
        (params.gamma * grid.delta_omega / (2.0 * std::f64::consts::PI * f as f64)).sqrt();
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut frequencies = Vec::with_capacity(f * freqs.len());
    let mut re1 = Vec::with_capacity(f * freqs.len());
    let mut im1 = Vec::with_capacity(f * freqs.len());
    let mut re2 = Vec::with_capacity(f * freqs.len());
    let mut im2 = Vec::with_capacity(f * freqs.len());
    let mut freq_bin = Vec::with_capacity(f * freqs.len());
    for d in 0..f {
        let cos_theta = 1.0 - 2.0 * (d as f64 + 0.5) / f as f64;
        let _phi = 2.0 * std::f64::consts::PI * d as f64 / golden;
        for (j, &w) in freqs.iter().enumerate() {
            // e^{i k·r_atom} with atoms at ±(r/2) ẑ.
            let phase = w / params.omega * k0r / 2.0 * cos_theta;
            frequencies.push(w);
            re1.push(mag * phase.cos());
            im1.push(mag * phase.sin());
            re2.push(mag * phase.cos());
            im2.push(-mag * phase.sin());
            freq_bin.push(j);
        }
    }
    ModeSet {
        n_atoms: 2,
        frequencies,
        channel_l: vec![0; f * freqs.len()],
        coupling_re: vec![re1, re2],
        coupling_im: Some(vec![im1, im2]),
        parity_boundary: None,
        freq_bin,
        axis,
        delta_omega: grid.delta_omega,
        window: grid.window,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::sinc;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn single_atom_standard_grid() {
        let p = params();
        let grid = GridSpec { window: 2.0, delta_omega: 0.01, reduction: ModeReduction::Reduced1D };
        let ms = build_mode_set(&Geometry::SingleAtom { omega_k1: 1.0 }, &p, &grid).unwrap();
        assert_eq!(ms.n_modes(), 401);
        // Coupling density reproduces Γ on every bin.
        for bin in [0, 100, 200, 400] {
            assert_relative_eq!(ms.coupling_density(bin), p.gamma, max_relative = 1e-12);
        }
        // The resonant mode sits exactly at the center.
        assert_eq!(ms.nearest_mode(1.0), 200);
        assert_eq!(ms.frequencies()[200], 1.0);
    }

    #[test]
    fn too_coarse_grid_rejected() {
        let p = params();
        let grid =
            GridSpec { window: 2.0, delta_omega: p.gamma, reduction: ModeReduction::Reduced1D };
        let err = build_mode_set(&Geometry::SingleAtom { omega_k1: 1.0 }, &p, &grid).unwrap_err();
        assert!(matches!(err, OracleError::GridTooCoarse { .. }));
    }

    #[test]
    fn too_narrow_window_rejected() {
        let p = params();
        let grid =
            GridSpec { window: 1.0, delta_omega: 0.01, reduction: ModeReduction::Reduced1D };
        let err = build_mode_set(&Geometry::SingleAtom { omega_k1: 1.0 }, &p, &grid).unwrap_err();
        assert!(matches!(err, OracleError::WindowTooNarrow { .. }));
    }

    #[test]
    fn partial_wave_channel_sums() {
        let p = params();
        let grid = GridSpec {
            window: 4.0,
            delta_omega: 0.01,
            reduction: ModeReduction::PartialWave { l_max: 12 },
        };
        let ms = build_mode_set(&Geometry::TwoAtom { k0r: 1.0 }, &p, &grid).unwrap();
        assert_eq!(ms.n_modes(), 13 * 801);
        assert_eq!(ms.parity_boundary(), Some(7 * 801));
        // At the resonant bin: total Γ, alternating Γ sinc(k₀r), both within
        // the l_max = 12 truncation error.
        let bin = ms.frequency_axis().nearest(1.0);
        let (total, alt) = ms.channel_rate_sums(bin);
        assert_abs_diff_eq!(total, p.gamma, epsilon = 1e-12);
        assert_abs_diff_eq!(alt, p.gamma * sinc(1.0), epsilon = 1e-4 * p.gamma);
        // Parity ordering: even block first.
        for m in 0..ms.n_modes() {
            let even = ms.channel_l()[m] % 2 == 0;
            assert_eq!(even, m < 7 * 801);
        }
        // Atom-2 couplings carry the parity sign.
        for m in (0..ms.n_modes()).step_by(37) {
            let sign = if ms.channel_l()[m] % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(ms.coupling(1)[m], sign * ms.coupling(0)[m]);
        }
    }

    #[test]
    fn fibonacci_density() {
        let p = params();
        let grid = GridSpec {
            window: 2.0,
            delta_omega: 0.0125,
            reduction: ModeReduction::Fibonacci3D { n_directions: 16 },
        };
        let ms = build_mode_set(&Geometry::TwoAtom { k0r: 1.0 }, &p, &grid).unwrap();
        assert!(ms.has_complex_couplings());
        let bin = ms.frequency_axis().nearest(1.0);
        assert_relative_eq!(ms.coupling_density(bin), p.gamma, max_relative = 1e-12);
    }

    #[test]
    fn two_atom_needs_angular_channels() {
        let p = params();
        let grid = GridSpec { window: 2.0, delta_omega: 0.01, reduction: ModeReduction::Reduced1D };
        let err = build_mode_set(&Geometry::TwoAtom { k0r: 1.0 }, &p, &grid).unwrap_err();
        assert!(matches!(err, OracleError::UnsupportedRegime(_)));
    }
}
