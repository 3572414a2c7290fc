//! Fused classical-RK4 stepper for real-coupling mode sets.
//!
//! In the rotating frame the system is linear and autonomous, so the
//! classical RK4 update equals the degree-4 Taylor polynomial of the
//! generator. The two-photon sector's derivative is local in its own entry
//! plus the small atom/mixed sector, which lets the whole step run as one
//! in-place pass over the pair matrix: each entry is advanced by the exact
//! stage polynomial, and the mode reductions the next step needs (moments of
//! the pair matrix against `Δ^q`-weighted couplings, `q ≤ 3`) are accumulated
//! in the same pass. Stage algebra for the small sector is exact, so the
//! result is classical RK4 to rounding.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::mode_set::ModeSet;
use super::{row_chunks, IntegratorConfig, OracleError, OracleRun, Sample};
use crate::params::PhysicalParams;
use crate::state::TwoExcitationState;

/// Source-propagation coefficients `γ_{m,q}`: the stage-`m` source enters the
/// step update as `dt^{m+1} Σ_q γ_{m,q} (−iφ)^q S(b^{(m)})`.
pub(crate) const GAMMA_TABLE: [[f64; 4]; 4] = [
    [1.0, 1.0 / 2.0, 1.0 / 6.0, 1.0 / 24.0],
    [1.0 / 2.0, 1.0 / 6.0, 1.0 / 24.0, 0.0],
    [1.0 / 6.0, 1.0 / 24.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 0.0, 0.0],
];

/// Taylor factors 1, dt, dt²/2, dt³/6, dt⁴/24.
pub(crate) fn taylor_factors(dt: f64) -> [f64; 5] {
    [1.0, dt, dt * dt / 2.0, dt * dt * dt / 6.0, dt * dt * dt * dt / 24.0]
}

/// `(−i)^j` for `j = 0..=3`.
pub(crate) const MINUS_I_POW: [C64; 4] = [
    C64::new(1.0, 0.0),
    C64::new(0.0, -1.0),
    C64::new(-1.0, 0.0),
    C64::new(0.0, 1.0),
];

pub(crate) const BINOMIAL: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

struct ChunkScratch {
    /// Partial moments, layout `[(q·n + i)·m + c]`.
    moments: Vec<C64>,
    prob_c: f64,
    pair_energy: f64,
}

struct Engine<'a> {
    ms: &'a ModeSet,
    n: usize,
    m: usize,
    dt: f64,
    delta: Vec<f64>,
    dd: Vec<f64>,
    /// `Δ^q G_i`, layout `[(q·n + i)·m + c]`.
    wg: Vec<f64>,
    /// `κ^{(q)}_{ii'} = Σ_c Δ^q G_i G_i'`, layout `[(q·n + i)·n + i']`.
    kappa: Vec<f64>,
    a: Vec<C64>,
    b: Vec<C64>,
    c: Vec<C64>,
    moments: Vec<C64>,
    a_gen: [Vec<C64>; 5],
    b_gen: [Vec<C64>; 5],
    nu_gen: [Vec<C64>; 4],
    /// Combined per-q source vectors `W^{(q)}_i`, same layout as moments.
    w_src: Vec<C64>,
    chunks: Vec<(usize, usize)>,
    row_offsets: Vec<usize>,
    scratch: Vec<ChunkScratch>,
    omega: f64,
    band: f64,
}

impl<'a> Engine<'a> {
    fn new(state: TwoExcitationState, ms: &'a ModeSet, params: &PhysicalParams, dt: f64) -> Self {
        let n = state.n_atoms();
        let m = state.n_modes();
        let delta: Vec<f64> = ms.frequencies().iter().map(|w| w - params.omega).collect();
        let dd: Vec<f64> = delta.iter().map(|d| d * dt).collect();
        let mut wg = vec![0.0; 4 * n * m];
        for q in 0..4usize {
            for i in 0..n {
                let g = ms.coupling(i);
                let row = &mut wg[(q * n + i) * m..(q * n + i + 1) * m];
                for c in 0..m {
                    row[c] = delta[c].powi(q as i32) * g[c];
                }
            }
        }
        let mut kappa = vec![0.0; 4 * n * n];
        for q in 0..4usize {
            for i in 0..n {
                for ip in 0..n {
                    let mut s = 0.0;
                    for c in 0..m {
                        s += delta[c].powi(q as i32) * ms.coupling(i)[c] * ms.coupling(ip)[c];
                    }
                    kappa[(q * n + i) * n + ip] = s;
                }
            }
        }
        let chunks = row_chunks(m);
        let mut row_offsets = Vec::with_capacity(m + 1);
        let mut off = 0;
        for k in 0..m {
            row_offsets.push(off);
            off += m - k;
        }
        row_offsets.push(off);
        let scratch = chunks
            .iter()
            .map(|_| ChunkScratch {
                moments: vec![C64::ZERO; 4 * n * m],
                prob_c: 0.0,
                pair_energy: 0.0,
            })
            .collect();
        let (a, b, c) = (state.a, state.b, state.c);
        Self {
            ms,
            n,
            m,
            dt,
            delta,
            dd,
            wg,
            kappa,
            a,
            b,
            c,
            moments: vec![C64::ZERO; 4 * n * m],
            a_gen: std::array::from_fn(|_| vec![C64::ZERO; n * n]),
            b_gen: std::array::from_fn(|_| vec![C64::ZERO; n * m]),
            nu_gen: std::array::from_fn(|_| vec![C64::ZERO; 4 * n * n]),
            w_src: vec![C64::ZERO; 4 * n * m],
            chunks,
            row_offsets,
            scratch,
            omega: params.omega,
            band: super::DETECTION_BAND_LINEWIDTHS * params.gamma,
        }
    }

    /// Recompute the pair-matrix moments and pair metrics from the current
    /// `c` without advancing.
    fn refresh_moments(&mut self) -> (f64, f64) {
        let n = self.n;
        let m = self.m;
        let wg = &self.wg;
        let c = &self.c;
        let freq = self.ms.frequencies();
        let row_offsets = &self.row_offsets;
        let results: Vec<(Vec<C64>, f64, f64)> = super::pool().install(|| {
            self.chunks
                .par_iter()
                .map(|&(r0, r1)| {
                    let mut mom = vec![C64::ZERO; 4 * n * m];
                    let mut pc = 0.0;
                    let mut pe = 0.0;
                    for k in r0..r1 {
                        let base = row_offsets[k];
                        for p in k..m {
                            let v = c[base + p - k];
                            let mult = if k == p { 1.0 } else { 2.0 };
                            let n2 = v.norm_sqr();
                            pc += mult * n2;
                            pe += mult * (freq[k] + freq[p]) * n2;
                            for qi in 0..4 * n {
                                let row = qi * m;
                                mom[row + p] += wg[row + k] * v;
                                if k != p {
                                    mom[row + k] += wg[row + p] * v;
                                }
                            }
                        }
                    }
                    (mom, pc, pe)
                })
                .collect()
        });
        self.moments.iter_mut().for_each(|z| *z = C64::ZERO);
        let mut pc = 0.0;
        let mut pe = 0.0;
        for (mom, c_part, e_part) in results {
            for (dst, src) in self.moments.iter_mut().zip(&mom) {
                *dst += src;
            }
            pc += c_part;
            pe += e_part;
        }
        (pc, pe)
    }

    /// `R^{(j)}_{ic}` for the current stage, assembled from the stored-c
    /// moments (T part) and the already-computed earlier generations
    /// (source-propagated U parts).
    fn assemble_r(&self, j: usize, r: &mut [C64]) {
        let n = self.n;
        let m = self.m;
        r.iter_mut().for_each(|z| *z = C64::ZERO);
        let phase = MINUS_I_POW[j];
        for i in 0..n {
            let dst = &mut r[i * m..(i + 1) * m];
            for (q, &bi) in BINOMIAL[j].iter().take(j + 1).enumerate() {
                let mom = &self.moments[(q * n + i) * m..(q * n + i + 1) * m];
                let pw = (j - q) as i32;
                for c in 0..m {
                    dst[c] += phase * (bi * self.delta[c].powi(pw)) * mom[c];
                }
            }
        }
        for mm in 0..j {
            let p = j - 1 - mm;
            let pref = C64::new(0.0, -0.5) * MINUS_I_POW[p];
            let b_m = &self.b_gen[mm];
            let nu_m = &self.nu_gen[mm];
            for i in 0..n {
                let dst = &mut r[i * m..(i + 1) * m];
                for (q, &bi) in BINOMIAL[p].iter().take(p + 1).enumerate() {
                    let pw = (p - q) as i32;
                    for ip in 0..n {
                        let kap = self.kappa[(q * n + i) * n + ip];
                        let nu = nu_m[(q * n + i) * n + ip];
                        let g_ip = self.ms.coupling(ip);
                        let b_row = &b_m[ip * m..(ip + 1) * m];
                        for c in 0..m {
                            let inner = b_row[c] * kap + g_ip[c] * nu;
                            dst[c] += pref * (bi * self.delta[c].powi(pw)) * inner;
                        }
                    }
                }
            }
        }
    }

    /// One RK4 step; returns `(prob_c, pair_energy)` of the new state when
    /// `sampling` (zeros otherwise).
    fn step(&mut self, sampling: bool) -> (f64, f64) {
        let n = self.n;
        let m = self.m;
        let mi = C64::new(0.0, -1.0);
        let dt = self.dt;

        self.a_gen[0].copy_from_slice(&self.a);
        self.b_gen[0].copy_from_slice(&self.b);
        let mut r = vec![C64::ZERO; n * m];

        for j in 0..4 {
            // ν^{(q)} dots of generation j, needed by later stages.
            {
                let b_j = &self.b_gen[j];
                let nu = &mut self.nu_gen[j];
                for q in 0..4usize {
                    for i in 0..n {
                        let w = &self.wg[(q * n + i) * m..(q * n + i + 1) * m];
                        for ip in 0..n {
                            let b_row = &b_j[ip * m..(ip + 1) * m];
                            let mut acc = C64::ZERO;
                            for c in 0..m {
                                acc += w[c] * b_row[c];
                            }
                            nu[(q * n + i) * n + ip] = acc;
                        }
                    }
                }
            }
            self.assemble_r(j, &mut r);

            // d_{ik} = Σ_c G_{kc} b^{(j)}_{ic}.
            let mut d = vec![C64::ZERO; n * n];
            {
                let b_j = &self.b_gen[j];
                for i in 0..n {
                    for k in 0..n {
                        let g = self.ms.coupling(k);
                        let b_row = &b_j[i * m..(i + 1) * m];
                        let mut acc = C64::ZERO;
                        for c in 0..m {
                            acc += g[c] * b_row[c];
                        }
                        d[i * n + k] = acc;
                    }
                }
            }

            let (lo, hi) = self.a_gen.split_at_mut(j + 1);
            let a_j = &lo[j];
            let a_next = &mut hi[0];
            for i in 0..n {
                for jj in 0..n {
                    let mut v = mi * 0.5 * (d[i * n + jj] + d[jj * n + i]);
                    if i == jj {
                        v += C64::new(0.0, 1.0) * d[i * n + i];
                    }
                    a_next[i * n + jj] = v;
                }
            }
            let (lo_b, hi_b) = self.b_gen.split_at_mut(j + 1);
            let b_j = &lo_b[j];
            let b_next = &mut hi_b[0];
            for i in 0..n {
                let b_row = &b_j[i * m..(i + 1) * m];
                let dst = &mut b_next[i * m..(i + 1) * m];
                let r_row = &r[i * m..(i + 1) * m];
                let mut drive_g: Vec<(C64, &[f64])> = Vec::with_capacity(n);
                for jj in 0..n {
                    drive_g.push((a_j[i * n + jj], self.ms.coupling(jj)));
                }
                for c in 0..m {
                    let mut drive = C64::ZERO;
                    for (amp, g) in &drive_g {
                        drive += amp * g[c];
                    }
                    dst[c] = mi * (self.delta[c] * b_row[c] + 2.0 * (drive + r_row[c]));
                }
            }
        }

        // Combined per-q source vectors W^{(q)} = -(i/2) Σ_m dt^{m+1} γ b^{(m)}.
        self.w_src.iter_mut().for_each(|z| *z = C64::ZERO);
        let mut dt_pow = dt;
        for mm in 0..4usize {
            for q in 0..4usize {
                let coeff = GAMMA_TABLE[mm][q] * dt_pow;
                if coeff == 0.0 {
                    continue;
                }
                let pref = C64::new(0.0, -0.5 * coeff);
                for i in 0..n {
                    let src = &self.b_gen[mm][i * m..(i + 1) * m];
                    let dst = &mut self.w_src[(q * n + i) * m..(q * n + i + 1) * m];
                    for c in 0..m {
                        dst[c] += pref * src[c];
                    }
                }
            }
            dt_pow *= dt;
        }

        let (pc, pe) = self.c_sweep(sampling);

        let tf = taylor_factors(dt);
        for e in 0..n * n {
            let mut v = C64::ZERO;
            for (j, f) in tf.iter().enumerate() {
                v += f * self.a_gen[j][e];
            }
            self.a[e] = v;
        }
        for e in 0..n * m {
            let mut v = C64::ZERO;
            for (j, f) in tf.iter().enumerate() {
                v += f * self.b_gen[j][e];
            }
            self.b[e] = v;
        }
        (pc, pe)
    }

    fn c_sweep(&mut self, sampling: bool) -> (f64, f64) {
        let n = self.n;
        let m = self.m;
        let dd = &self.dd;
        let wg = &self.wg;
        let w_src = &self.w_src;
        let freq = self.ms.frequencies();
        let couplings: Vec<&[f64]> = (0..n).map(|i| self.ms.coupling(i)).collect();

        // Hand each chunk a disjoint mutable slice of the packed triangle.
        let mut slices: Vec<&mut [C64]> = Vec::with_capacity(self.chunks.len());
        let mut rest: &mut [C64] = &mut self.c;
        for &(r0, r1) in &self.chunks {
            let len = self.row_offsets[r1] - self.row_offsets[r0];
            let (head, tail) = rest.split_at_mut(len);
            slices.push(head);
            rest = tail;
        }

        let chunks = &self.chunks;
        let couplings = &couplings;
        super::pool().install(|| {
            slices
                .into_par_iter()
                .zip(self.scratch.par_iter_mut())
                .zip(chunks.par_iter())
                .for_each(|((slice, scratch), &(r0, r1))| {
                    scratch.moments.iter_mut().for_each(|z| *z = C64::ZERO);
                    scratch.prob_c = 0.0;
                    scratch.pair_energy = 0.0;
                    let mut off = 0usize;
                    // Row-resident accumulators for the M^q[k] side; 4n of them.
                    let mut row_acc = vec![C64::ZERO; 4 * n];
                    for k in r0..r1 {
                        let len = m - k;
                        let row = &mut slice[off..off + len];
                        off += len;
                        let ddk = dd[k];
                        let wk = freq[k];
                        // Row constants.
                        let gk: Vec<f64> = couplings.iter().map(|g| g[k]).collect();
                        let wsk: Vec<C64> =
                            (0..4 * n).map(|qi| w_src[qi * m + k]).collect();
                        let wgk: Vec<f64> = (0..4 * n).map(|qi| wg[qi * m + k]).collect();
                        row_acc.iter_mut().for_each(|z| *z = C64::ZERO);

                        for (idx, v) in row.iter_mut().enumerate() {
                            let p = k + idx;
                            let phi = ddk + dd[p];
                            let phi2 = phi * phi;
                            let r4 = C64::new(
                                1.0 - 0.5 * phi2 + phi2 * phi2 / 24.0,
                                -phi * (1.0 - phi2 / 6.0),
                            );
                            // Σ_q (-iφ)^q Σ_i [G_i(p) W^q_i(k) + G_i(k) W^q_i(p)]
                            let mut src = C64::ZERO;
                            let mut pow = C64::new(1.0, 0.0);
                            for q in 0..4 {
                                let mut zq = C64::ZERO;
                                for i in 0..n {
                                    zq += couplings[i][p] * wsk[q * n + i]
                                        + gk[i] * w_src[(q * n + i) * m + p];
                                }
                                src += pow * zq;
                                pow *= C64::new(0.0, -phi);
                            }
                            let new = r4 * *v + src;
                            *v = new;
                            if sampling {
                                let mult = if idx == 0 { 1.0 } else { 2.0 };
                                let n2 = new.norm_sqr();
                                scratch.prob_c += mult * n2;
                                scratch.pair_energy += mult * (wk + freq[p]) * n2;
                            }
                            for qi in 0..4 * n {
                                scratch.moments[qi * m + p] += wgk[qi] * new;
                                if idx != 0 {
                                    row_acc[qi] += wg[qi * m + p] * new;
                                }
                            }
                        }
                        for qi in 0..4 * n {
                            scratch.moments[qi * m + k] += row_acc[qi];
                        }
                    }
                });
        });

        // Sequential, chunk-ordered combination keeps runs bit-identical.
        self.moments.iter_mut().for_each(|z| *z = C64::ZERO);
        let mut pc = 0.0;
        let mut pe = 0.0;
        for scratch in &self.scratch {
            for (dst, src) in self.moments.iter_mut().zip(&scratch.moments) {
                *dst += src;
            }
            pc += scratch.prob_c;
            pe += scratch.pair_energy;
        }
        (pc, pe)
    }

    fn sample(&self, t: f64, pair_metrics: (f64, f64)) -> Sample {
        let (pc_raw, pe_raw) = pair_metrics;
        let n = self.n;
        let m = self.m;
        let prob_a = 2.0 * self.a.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let prob_b: f64 = self.b.iter().map(|z| z.norm_sqr()).sum();
        let freq = self.ms.frequencies();
        let mut energy = 0.0;
        let (mut even, mut odd) = (0.0, 0.0);
        for i in 0..n {
            for c in 0..m {
                let n2 = self.b[i * m + c].norm_sqr();
                energy += freq[c] * n2;
                if (freq[c] - self.omega).abs() <= self.band {
                    if self.ms.channel_l()[c] % 2 == 0 {
                        even += n2;
                    } else {
                        odd += n2;
                    }
                }
            }
        }
        energy += 2.0 * pe_raw;
        Sample { t, prob_a, prob_b, prob_c: 2.0 * pc_raw, energy, even, odd }
    }
}

pub(crate) fn integrate_taylor(
    initial: TwoExcitationState,
    config: &IntegratorConfig,
    mode_set: &ModeSet,
    params: &PhysicalParams,
) -> Result<OracleRun, OracleError> {
    let n_steps = (config.t_max / config.dt).ceil() as usize;
    let mut engine = Engine::new(initial, mode_set, params, config.dt);
    let metrics0 = engine.refresh_moments();
    let mut samples = vec![engine.sample(0.0, metrics0)];
    for step in 1..=n_steps {
        let sampling = step % config.sample_every == 0 || step == n_steps;
        let metrics = engine.step(sampling);
        if sampling {
            samples.push(engine.sample(step as f64 * config.dt, metrics));
        }
    }
    let n = engine.n;
    let m = engine.m;
    let final_state = TwoExcitationState::from_parts(
        n,
        m,
        std::mem::take(&mut engine.a),
        std::mem::take(&mut engine.b),
        std::mem::take(&mut engine.c),
    );
    let with_channels = mode_set.parity_boundary().is_some();
    super::run_from_samples(samples, final_state, params, with_channels)
}
