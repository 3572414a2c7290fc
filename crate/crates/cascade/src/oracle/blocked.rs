//! Two-atom partial-wave fast path.
//!
//! With atoms at `±r/2` on the polar axis, the coupling of atom 2 to channel
//! `l` is `(−1)^l` times atom 1's. Starting from the exchange-symmetric state
//! `a₁₂ = a₂₁`, `b = c = 0`, the dynamics then preserves `b_{2c} = π_c b_{1c}`
//! and keeps every cross-parity pair amplitude `c_{cc'}` (one even-`l`, one
//! odd-`l` mode) *identically* zero — the source terms cancel exactly, in
//! floating point too. The engine therefore stores one atom's mixed
//! amplitudes and only the two same-parity blocks of the pair matrix, halving
//! both memory and work relative to the generic sweep, with bit-identical
//! results on the retained entries.
//!
//! The step itself is the same fused Taylor form of classical RK4 as
//! [`super::taylor`], specialized to this structure and laid out as split
//! real/imaginary arrays for vectorization.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::mode_set::ModeSet;
use super::taylor::{taylor_factors, GAMMA_TABLE};
use super::{IntegratorConfig, OracleError, OracleRun, Sample};
use crate::params::PhysicalParams;
use crate::state::{pair_count, TwoExcitationState};

/// `(−i)^j` as (re, im) pairs.
const MJ: [(f64, f64); 4] = [(1.0, 0.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 1.0)];

const BINOMIAL: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// The fast path handles the standard two-atom initial condition on a
/// parity-ordered partial-wave set.
pub(crate) fn fast_path_applies(initial: &TwoExcitationState, ms: &ModeSet) -> bool {
    if ms.n_atoms() != 2 || ms.has_complex_couplings() || ms.parity_boundary().is_none() {
        return false;
    }
    if initial.n_atoms() != 2 {
        return false;
    }
    let symmetric = initial.a_at(0, 1) == initial.a_at(1, 0)
        && initial.a_at(0, 0) == C64::ZERO
        && initial.a_at(1, 1) == C64::ZERO;
    symmetric
        && initial.b.iter().all(|z| *z == C64::ZERO)
        && initial.c.iter().all(|z| *z == C64::ZERO)
}

struct ChunkMeta {
    /// Global mode index of the block start.
    block_start: usize,
    /// Block-local row range.
    r0: usize,
    r1: usize,
    /// Block size in modes.
    bm: usize,
    /// Entry count of the chunk in the unified pair storage.
    len: usize,
}

struct ChunkScratch {
    mom_re: Vec<f64>,
    mom_im: Vec<f64>,
    prob_c: f64,
    pair_energy: f64,
}

struct Blocked<'a> {
    ms: &'a ModeSet,
    m: usize,
    nb: usize,
    dt: f64,
    delta: Vec<f64>,
    dd: Vec<f64>,
    g: Vec<f64>,
    parity: Vec<f64>,
    /// `Δ^q G`, layout `[q·m + c]`.
    wgq: Vec<f64>,
    /// `κ^{(q)}` per parity, `[q][parity]`.
    kappa: [[f64; 2]; 4],
    alpha: C64,
    b_re: Vec<f64>,
    b_im: Vec<f64>,
    c_re: Vec<f64>,
    c_im: Vec<f64>,
    mom_re: Vec<f64>,
    mom_im: Vec<f64>,
    a_gen: [C64; 5],
    bg_re: [Vec<f64>; 5],
    bg_im: [Vec<f64>; 5],
    /// `ν^{(q)}_parity` per generation, `[gen][q][parity]`.
    nu: [[[C64; 2]; 4]; 4],
    w_re: Vec<f64>,
    w_im: Vec<f64>,
    chunks: Vec<ChunkMeta>,
    scratch: Vec<ChunkScratch>,
    omega: f64,
    band: f64,
}

fn block_row_offset(bm: usize, k: usize) -> usize {
    k * (2 * bm - k + 1) / 2
}

/// Dot product with eight partial accumulators so the reduction vectorizes.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let chunks = a.len() / 8;
    for i in 0..chunks {
        for l in 0..8 {
            acc[l] += a[8 * i + l] * b[8 * i + l];
        }
    }
    let mut tail = 0.0;
    for i in 8 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    acc.iter().sum::<f64>() + tail
}

/// `Σ (w_k + freq_p) (re² + im²)` with vector-friendly accumulation.
#[inline]
fn weighted_norm(re: &[f64], im: &[f64], freq_p: &[f64], wk: f64) -> f64 {
    let mut acc = [0.0f64; 8];
    let chunks = re.len() / 8;
    for i in 0..chunks {
        for l in 0..8 {
            let j = 8 * i + l;
            acc[l] += (wk + freq_p[j]) * (re[j] * re[j] + im[j] * im[j]);
        }
    }
    let mut tail = 0.0;
    for j in 8 * chunks..re.len() {
        tail += (wk + freq_p[j]) * (re[j] * re[j] + im[j] * im[j]);
    }
    acc.iter().sum::<f64>() + tail
}

impl<'a> Blocked<'a> {
    fn new(alpha: C64, ms: &'a ModeSet, params: &PhysicalParams, dt: f64) -> Self {
        let m = ms.n_modes();
        let nb = ms.parity_boundary().expect("parity-ordered set");
        let delta: Vec<f64> = ms.frequencies().iter().map(|w| w - params.omega).collect();
        let dd: Vec<f64> = delta.iter().map(|d| d * dt).collect();
        let g = ms.coupling(0).to_vec();
        let parity: Vec<f64> =
            ms.channel_l().iter().map(|l| if l % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut wgq = vec![0.0; 4 * m];
        for q in 0..4usize {
            for c in 0..m {
                wgq[q * m + c] = delta[c].powi(q as i32) * g[c];
            }
        }
        let mut kappa = [[0.0; 2]; 4];
        for (q, kq) in kappa.iter_mut().enumerate() {
            for c in 0..m {
                let par = usize::from(c >= nb);
                kq[par] += delta[c].powi(q as i32) * g[c] * g[c];
            }
        }
        let pairs = pair_count(nb) + pair_count(m - nb);
        // Fixed entry-balanced row chunks across both blocks (independent of
        // thread count, so reductions stay reproducible). Row lengths shrink
        // down the triangle; balancing by entries keeps the workers busy.
        const TARGET_CHUNKS: usize = 24;
        let per_chunk = pairs.div_ceil(TARGET_CHUNKS).max(1);
        let mut chunks = Vec::new();
        for (block_start, bm) in [(0usize, nb), (nb, m - nb)] {
            let mut r = 0;
            while r < bm {
                let start_off = block_row_offset(bm, r);
                let mut r1 = r;
                while r1 < bm && block_row_offset(bm, r1 + 1) - start_off < per_chunk {
                    r1 += 1;
                }
                let r1 = (r1 + 1).min(bm);
                chunks.push(ChunkMeta {
                    block_start,
                    r0: r,
                    r1,
                    bm,
                    len: block_row_offset(bm, r1) - start_off,
                });
                r = r1;
            }
        }
        let scratch = chunks
            .iter()
            .map(|_| ChunkScratch {
                mom_re: vec![0.0; 4 * m],
                mom_im: vec![0.0; 4 * m],
                prob_c: 0.0,
                pair_energy: 0.0,
            })
            .collect();
        Self {
            ms,
            m,
            nb,
            dt,
            delta,
            dd,
            g,
            parity,
            wgq,
            kappa,
            alpha,
            b_re: vec![0.0; m],
            b_im: vec![0.0; m],
            c_re: vec![0.0; pairs],
            c_im: vec![0.0; pairs],
            mom_re: vec![0.0; 4 * m],
            mom_im: vec![0.0; 4 * m],
            a_gen: [C64::ZERO; 5],
            bg_re: std::array::from_fn(|_| vec![0.0; m]),
            bg_im: std::array::from_fn(|_| vec![0.0; m]),
            nu: [[[C64::ZERO; 2]; 4]; 4],
            w_re: vec![0.0; 4 * m],
            w_im: vec![0.0; 4 * m],
            chunks,
            scratch,
            omega: params.omega,
            band: super::DETECTION_BAND_LINEWIDTHS * params.gamma,
        }
    }

    fn parity_index(&self, c: usize) -> usize {
        usize::from(c >= self.nb)
    }

    /// One fused RK4 step.
    fn step(&mut self, sampling: bool) -> (f64, f64) {
        let m = self.m;
        let dt = self.dt;

        self.a_gen[0] = self.alpha;
        self.bg_re[0].copy_from_slice(&self.b_re);
        self.bg_im[0].copy_from_slice(&self.b_im);

        let mut r_re = vec![0.0; m];
        let mut r_im = vec![0.0; m];

        for j in 0..4 {
            // ν^{(q)}_par of generation j.
            for q in 0..4usize {
                let w = &self.wgq[q * m..(q + 1) * m];
                let mut acc = [C64::ZERO; 2];
                for c in 0..m {
                    let par = usize::from(c >= self.nb);
                    acc[par] += C64::new(w[c] * self.bg_re[j][c], w[c] * self.bg_im[j][c]);
                }
                self.nu[j][q] = acc;
            }

            // R^{(j)}: stored-c moments plus source-propagated pieces.
            self.assemble_r(j, &mut r_re, &mut r_im);

            // α^{(j+1)} = −i Σ_c π G b^{(j)}.
            let mut dot = C64::ZERO;
            for c in 0..m {
                let w = self.parity[c] * self.g[c];
                dot += C64::new(w * self.bg_re[j][c], w * self.bg_im[j][c]);
            }
            self.a_gen[j + 1] = C64::new(0.0, -1.0) * dot;

            // b^{(j+1)} = −i(Δ b + 2απG + 2R).
            let alpha_j = self.a_gen[j];
            let (lo_re, hi_re) = self.bg_re.split_at_mut(j + 1);
            let (lo_im, hi_im) = self.bg_im.split_at_mut(j + 1);
            let (bjr, bji) = (&lo_re[j], &lo_im[j]);
            let (next_re, next_im) = (&mut hi_re[0], &mut hi_im[0]);
            for c in 0..m {
                let drive = self.parity[c] * self.g[c];
                let xre = self.delta[c] * bjr[c] + 2.0 * (alpha_j.re * drive + r_re[c]);
                let xim = self.delta[c] * bji[c] + 2.0 * (alpha_j.im * drive + r_im[c]);
                // −i(x) = (x.im, −x.re)
                next_re[c] = xim;
                next_im[c] = -xre;
            }
        }

        // Combined sources W^{(q)} = −i Σ_mm dt^{mm+1} γ b^{(mm)}.
        self.w_re.iter_mut().for_each(|v| *v = 0.0);
        self.w_im.iter_mut().for_each(|v| *v = 0.0);
        let mut dt_pow = dt;
        for mm in 0..4usize {
            for q in 0..4usize {
                let coeff = GAMMA_TABLE[mm][q] * dt_pow;
                if coeff == 0.0 {
                    continue;
                }
                let src_re = &self.bg_re[mm];
                let src_im = &self.bg_im[mm];
                let wr = &mut self.w_re[q * m..(q + 1) * m];
                for c in 0..m {
                    // −i·coeff·b = (coeff·b.im, −coeff·b.re)
                    wr[c] += coeff * src_im[c];
                }
                let wi = &mut self.w_im[q * m..(q + 1) * m];
                for c in 0..m {
                    wi[c] -= coeff * src_re[c];
                }
            }
            dt_pow *= dt;
        }

        let (pc, pe) = self.c_sweep(sampling);

        // Final Taylor sums for the small sector.
        let tf = taylor_factors(dt);
        let mut alpha = C64::ZERO;
        for (j, f) in tf.iter().enumerate() {
            alpha += f * self.a_gen[j];
        }
        self.alpha = alpha;
        for c in 0..m {
            let mut vre = 0.0;
            let mut vim = 0.0;
            for (j, f) in tf.iter().enumerate() {
                vre += f * self.bg_re[j][c];
                vim += f * self.bg_im[j][c];
            }
            self.b_re[c] = vre;
            self.b_im[c] = vim;
        }
        (pc, pe)
    }

    fn assemble_r(&self, j: usize, r_re: &mut [f64], r_im: &mut [f64]) {
        let m = self.m;
        // T^{(j)} = (−i)^j Σ_q binom Δ^{j−q} M^{(q)}.
        let (pr, pi) = MJ[j];
        for c in 0..m {
            let mut tre = 0.0;
            let mut tim = 0.0;
            for (q, &bi) in BINOMIAL[j].iter().take(j + 1).enumerate() {
                let w = bi * self.delta[c].powi((j - q) as i32);
                tre += w * self.mom_re[q * m + c];
                tim += w * self.mom_im[q * m + c];
            }
            r_re[c] = pr * tre - pi * tim;
            r_im[c] = pr * tim + pi * tre;
        }
        // U^{(p)}(b^{(mm)}) with p = j−1−mm, prefactor −i(−i)^p.
        for mm in 0..j {
            let p = j - 1 - mm;
            let (qr, qi) = MJ[p];
            // −i·(qr + i qi) = qi − i qr
            let (ur, ui) = (qi, -qr);
            for c in 0..m {
                let par = self.parity_index(c);
                let mut acc_re = 0.0;
                let mut acc_im = 0.0;
                for (q, &bi) in BINOMIAL[p].iter().take(p + 1).enumerate() {
                    let w = bi * self.delta[c].powi((p - q) as i32);
                    let nu = self.nu[mm][q][par];
                    let inner_re =
                        self.bg_re[mm][c] * self.kappa[q][par] + self.g[c] * nu.re;
                    let inner_im =
                        self.bg_im[mm][c] * self.kappa[q][par] + self.g[c] * nu.im;
                    acc_re += w * inner_re;
                    acc_im += w * inner_im;
                }
                r_re[c] += ur * acc_re - ui * acc_im;
                r_im[c] += ur * acc_im + ui * acc_re;
            }
        }
    }

    fn c_sweep(&mut self, sampling: bool) -> (f64, f64) {
        let m = self.m;
        let dd = &self.dd;
        let g = &self.g;
        let wgq = &self.wgq;
        let w_re = &self.w_re;
        let w_im = &self.w_im;
        let freq = self.ms.frequencies();

        let mut re_slices: Vec<&mut [f64]> = Vec::with_capacity(self.chunks.len());
        let mut im_slices: Vec<&mut [f64]> = Vec::with_capacity(self.chunks.len());
        let mut rest_re: &mut [f64] = &mut self.c_re;
        let mut rest_im: &mut [f64] = &mut self.c_im;
        for meta in &self.chunks {
            let (hr, tr) = rest_re.split_at_mut(meta.len);
            let (hi, ti) = rest_im.split_at_mut(meta.len);
            re_slices.push(hr);
            im_slices.push(hi);
            rest_re = tr;
            rest_im = ti;
        }

        let chunks = &self.chunks;
        super::pool().install(|| {
            re_slices
                .into_par_iter()
                .zip(im_slices.into_par_iter())
                .zip(self.scratch.par_iter_mut())
                .zip(chunks.par_iter())
                .for_each(|(((cre, cim), scratch), meta)| {
                    scratch.mom_re.iter_mut().for_each(|v| *v = 0.0);
                    scratch.mom_im.iter_mut().for_each(|v| *v = 0.0);
                    scratch.prob_c = 0.0;
                    scratch.pair_energy = 0.0;

                    let n_rows = meta.r1 - meta.r0;
                    // Row starts within this chunk's slice.
                    let mut row_off = Vec::with_capacity(n_rows);
                    let mut off = 0usize;
                    for row in meta.r0..meta.r1 {
                        row_off.push(off);
                        off += meta.bm - row;
                    }
                    // Per-row dot accumulators for the row-side moments.
                    let mut racc_re = vec![0.0f64; 4 * n_rows];
                    let mut racc_im = vec![0.0f64; 4 * n_rows];
                    let mut s_norm = 0.0f64;
                    let mut s_weighted = 0.0f64;

                    // Column tiles run outermost so the per-mode operand
                    // tiles (phases, couplings, sources, moment outputs)
                    // stay cache-resident while every row streams past;
                    // the machine is DRAM-bound and the pair matrix itself
                    // is the only stream that must touch memory.
                    const TILE: usize = 512;
                    let block_end = meta.block_start + meta.bm;
                    let tile0 = meta.block_start + meta.r0;
                    let mut tb0 = tile0;
                    while tb0 < block_end {
                        let tb1 = (tb0 + TILE).min(block_end);
                        for row in meta.r0..meta.r1 {
                            let k = meta.block_start + row;
                            if k >= tb1 {
                                break;
                            }
                            let p_lo = k.max(tb0);
                            let seg = tb1 - p_lo;
                            let base = row_off[row - meta.r0] + (p_lo - k);
                            let row_re = &mut cre[base..base + seg];
                            let row_im = &mut cim[base..base + seg];
                            let dd_p = &dd[p_lo..tb1];
                            let g_p = &g[p_lo..tb1];
                            let ddk = dd[k];
                            let gk = g[k];

                            // Phase rotation by R4(−iφ).
                            for idx in 0..seg {
                                let phi = ddk + dd_p[idx];
                                let phi2 = phi * phi;
                                let r4re = 1.0 - 0.5 * phi2 + phi2 * phi2 / 24.0;
                                let r4im = -phi * (1.0 - phi2 / 6.0);
                                let or = row_re[idx];
                                let oi = row_im[idx];
                                row_re[idx] = r4re * or - r4im * oi;
                                row_im[idx] = r4re * oi + r4im * or;
                            }
                            // Sources src = Σ_q (−iφ)^q (G_p W^q_k + G_k W^q_p).
                            {
                                let wr = &w_re[p_lo..tb1];
                                let wi = &w_im[p_lo..tb1];
                                let (wkr, wki) = (w_re[k], w_im[k]);
                                for idx in 0..seg {
                                    row_re[idx] += g_p[idx] * wkr + gk * wr[idx];
                                    row_im[idx] += g_p[idx] * wki + gk * wi[idx];
                                }
                            }
                            {
                                let wr = &w_re[m + p_lo..m + tb1];
                                let wi = &w_im[m + p_lo..m + tb1];
                                let (wkr, wki) = (w_re[m + k], w_im[m + k]);
                                for idx in 0..seg {
                                    let phi = ddk + dd_p[idx];
                                    let sr = g_p[idx] * wkr + gk * wr[idx];
                                    let si = g_p[idx] * wki + gk * wi[idx];
                                    row_re[idx] += phi * si;
                                    row_im[idx] -= phi * sr;
                                }
                            }
                            {
                                let wr = &w_re[2 * m + p_lo..2 * m + tb1];
                                let wi = &w_im[2 * m + p_lo..2 * m + tb1];
                                let (wkr, wki) = (w_re[2 * m + k], w_im[2 * m + k]);
                                for idx in 0..seg {
                                    let phi = ddk + dd_p[idx];
                                    let phi2 = phi * phi;
                                    row_re[idx] -= phi2 * (g_p[idx] * wkr + gk * wr[idx]);
                                    row_im[idx] -= phi2 * (g_p[idx] * wki + gk * wi[idx]);
                                }
                            }
                            {
                                let wr = &w_re[3 * m + p_lo..3 * m + tb1];
                                let wi = &w_im[3 * m + p_lo..3 * m + tb1];
                                let (wkr, wki) = (w_re[3 * m + k], w_im[3 * m + k]);
                                for idx in 0..seg {
                                    let phi = ddk + dd_p[idx];
                                    let phi3 = phi * phi * phi;
                                    row_re[idx] -= phi3 * (g_p[idx] * wki + gk * wi[idx]);
                                    row_im[idx] += phi3 * (g_p[idx] * wkr + gk * wr[idx]);
                                }
                            }

                            // Moments of the freshly written segment.
                            for q in 0..4 {
                                let wgkq = wgq[q * m + k];
                                let wg_p = &wgq[q * m + p_lo..q * m + tb1];
                                let mr = &mut scratch.mom_re[q * m + p_lo..q * m + tb1];
                                let mi = &mut scratch.mom_im[q * m + p_lo..q * m + tb1];
                                for idx in 0..seg {
                                    mr[idx] += wgkq * row_re[idx];
                                    mi[idx] += wgkq * row_im[idx];
                                }
                                racc_re[4 * (row - meta.r0) + q] += dot(wg_p, row_re);
                                racc_im[4 * (row - meta.r0) + q] += dot(wg_p, row_im);
                            }

                            if sampling {
                                let freq_p = &freq[p_lo..tb1];
                                s_norm += dot(row_re, row_re) + dot(row_im, row_im);
                                s_weighted += weighted_norm(row_re, row_im, freq_p, freq[k]);
                            }
                        }
                        tb0 = tb1;
                    }

                    // Row-side totals: diagonal contributes to the column
                    // side only, and is counted once in the sampled metrics.
                    for row in meta.r0..meta.r1 {
                        let k = meta.block_start + row;
                        let base = row_off[row - meta.r0];
                        let d_re = cre[base];
                        let d_im = cim[base];
                        for q in 0..4 {
                            let wgkq = wgq[q * m + k];
                            scratch.mom_re[q * m + k] +=
                                racc_re[4 * (row - meta.r0) + q] - wgkq * d_re;
                            scratch.mom_im[q * m + k] +=
                                racc_im[4 * (row - meta.r0) + q] - wgkq * d_im;
                        }
                        if sampling {
                            let n2 = d_re * d_re + d_im * d_im;
                            s_norm -= 0.5 * n2;
                            s_weighted -= freq[k] * n2;
                        }
                    }
                    if sampling {
                        scratch.prob_c = 2.0 * s_norm;
                        scratch.pair_energy = 2.0 * s_weighted;
                    }
                });
        });

        // Combine chunk partials. Fixed segment boundaries and in-order
        // chunk accumulation keep the result independent of scheduling.
        let scratch = &self.scratch;
        let total = 4 * m;
        let seg = total.div_ceil(16).max(1);
        let mom_re = &mut self.mom_re;
        let mom_im = &mut self.mom_im;
        super::pool().install(|| {
            mom_re
                .par_chunks_mut(seg)
                .zip(mom_im.par_chunks_mut(seg))
                .enumerate()
                .for_each(|(si, (dst_re, dst_im))| {
                    let lo = si * seg;
                    dst_re.iter_mut().for_each(|v| *v = 0.0);
                    dst_im.iter_mut().for_each(|v| *v = 0.0);
                    for ch in scratch {
                        let src_re = &ch.mom_re[lo..lo + dst_re.len()];
                        let src_im = &ch.mom_im[lo..lo + dst_im.len()];
                        for (d, s) in dst_re.iter_mut().zip(src_re) {
                            *d += s;
                        }
                        for (d, s) in dst_im.iter_mut().zip(src_im) {
                            *d += s;
                        }
                    }
                });
        });
        let mut pc = 0.0;
        let mut pe = 0.0;
        for ch in scratch {
            pc += ch.prob_c;
            pe += ch.pair_energy;
        }
        (pc, pe)
    }

    fn sample(&self, t: f64, pair_metrics: (f64, f64)) -> Sample {
        let (pc_raw, pe_raw) = pair_metrics;
        let freq = self.ms.frequencies();
        let prob_a = 4.0 * self.alpha.norm_sqr();
        let mut prob_b = 0.0;
        let mut b_energy = 0.0;
        let (mut even, mut odd) = (0.0, 0.0);
        for c in 0..self.m {
            let n2 = self.b_re[c] * self.b_re[c] + self.b_im[c] * self.b_im[c];
            prob_b += n2;
            b_energy += freq[c] * n2;
            if (freq[c] - self.omega).abs() <= self.band {
                if c < self.nb {
                    even += n2;
                } else {
                    odd += n2;
                }
            }
        }
        // Atom 2's amplitudes mirror atom 1's.
        Sample {
            t,
            prob_a,
            prob_b: 2.0 * prob_b,
            prob_c: 2.0 * pc_raw,
            energy: 2.0 * b_energy + 2.0 * pe_raw,
            even: 2.0 * even,
            odd: 2.0 * odd,
        }
    }

    /// Expand the blocked storage back into a full packed state.
    fn export(&self) -> TwoExcitationState {
        let m = self.m;
        let mut state = TwoExcitationState::new(2, m);
        state.set_a(0, 1, self.alpha);
        state.set_a(1, 0, self.alpha);
        for c in 0..m {
            let b = C64::new(self.b_re[c], self.b_im[c]);
            state.set_b(0, c, b);
            state.set_b(1, c, self.parity[c] * b);
        }
        let mut src = 0usize;
        for (start, bm) in [(0usize, self.nb), (self.nb, m - self.nb)] {
            for row in 0..bm {
                for idx in 0..(bm - row) {
                    let k = start + row;
                    let p = start + row + idx;
                    state.set_c(k, p, C64::new(self.c_re[src], self.c_im[src]));
                    src += 1;
                }
            }
        }
        state
    }
}

pub(crate) fn integrate_blocked(
    initial: &TwoExcitationState,
    config: &IntegratorConfig,
    mode_set: &ModeSet,
    params: &PhysicalParams,
) -> Result<OracleRun, OracleError> {
    let n_steps = (config.t_max / config.dt).ceil() as usize;
    let mut engine = Blocked::new(initial.a_at(0, 1), mode_set, params, config.dt);
    let mut samples = vec![engine.sample(0.0, (0.0, 0.0))];
    for step in 1..=n_steps {
        let sampling = step % config.sample_every == 0 || step == n_steps;
        let metrics = engine.step(sampling);
        if sampling {
            samples.push(engine.sample(step as f64 * config.dt, metrics));
        }
    }
    let final_state = engine.export();
    super::run_from_samples(samples, final_state, params, true)
}
