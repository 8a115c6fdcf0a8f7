//! Three-dimensional transforms with the mean normalization.
//!
//! Coefficients are `u_k = N^-1 sum_j u(x_j) exp(-i xi.x_j)` with
//! `x_j = -pi L + j h`. Relative to a plain DFT this is a factor
//! `(-1)^(k1+k2+k3)`, which is applied on both sides.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

type C = Complex64;

struct Plan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plan(n: usize) -> Arc<Plan> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Plan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plan { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
        })
        .clone()
}

impl Plan {
    fn run(&self, data: &mut [C], forward: bool) {
        let n = self.n;
        let fft = if forward { &self.forward } else { &self.inverse };
        let mut scratch = vec![C::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(data, &mut scratch);

        let mut line = vec![C::new(0.0, 0.0); n];
        for a in 0..n {
            for c in 0..n {
                for b in 0..n {
                    line[b] = data[(a * n + b) * n + c];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for b in 0..n {
                    data[(a * n + b) * n + c] = line[b];
                }
            }
        }
        for b in 0..n {
            for c in 0..n {
                for a in 0..n {
                    line[a] = data[(a * n + b) * n + c];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for a in 0..n {
                    data[(a * n + b) * n + c] = line[a];
                }
            }
        }
    }
}

fn apply_phase(n: usize, data: &mut [C], scale: f64) {
    for a in 0..n {
        for b in 0..n {
            let row = &mut data[(a * n + b) * n..(a * n + b + 1) * n];
            let parity = (a + b) % 2;
            for (c, v) in row.iter_mut().enumerate() {
                *v *= if (parity + c) % 2 == 0 { scale } else { -scale };
            }
        }
    }
}

/// In-place physical samples to coefficients.
pub(crate) fn forward_in_place(n: usize, data: &mut [C]) {
    plan(n).run(data, true);
    apply_phase(n, data, 1.0 / (n * n * n) as f64);
}

/// In-place coefficients to physical samples.
pub(crate) fn inverse_in_place(n: usize, data: &mut [C]) {
    apply_phase(n, data, 1.0);
    plan(n).run(data, false);
}

pub(crate) fn zero_nyquist(n: usize, data: &mut [C]) {
    let h = n / 2;
    for a in 0..n {
        for b in 0..n {
            let base = (a * n + b) * n;
            if a == h || b == h {
                data[base..base + n].fill(C::new(0.0, 0.0));
            } else {
                data[base + h] = C::new(0.0, 0.0);
            }
        }
    }
}

pub(crate) fn real_to_spectral(n: usize, values: &[f64]) -> Vec<C> {
    let mut data: Vec<C> = values.iter().map(|&v| C::new(v, 0.0)).collect();
    forward_in_place(n, &mut data);
    zero_nyquist(n, &mut data);
    data
}

pub(crate) fn spectral_to_real(n: usize, coeffs: &[C]) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    inverse_in_place(n, &mut data);
    data.into_iter().map(|z| z.re).collect()
}

/// Two real fields through one complex transform.
pub(crate) fn spectral_to_real_pair(n: usize, a: &[C], b: &[C]) -> (Vec<f64>, Vec<f64>) {
    let i = C::new(0.0, 1.0);
    let mut data: Vec<C> = a.iter().zip(b).map(|(&x, &y)| x + i * y).collect();
    inverse_in_place(n, &mut data);
    data.into_iter().map(|z| (z.re, z.im)).unzip()
}

/// Two real fields through one complex transform; Nyquist zeroed.
pub(crate) fn real_to_spectral_pair(n: usize, a: &[f64], b: &[f64]) -> (Vec<C>, Vec<C>) {
    let mut data: Vec<C> = a.iter().zip(b).map(|(&x, &y)| C::new(x, y)).collect();
    forward_in_place(n, &mut data);
    let mut ha = vec![C::new(0.0, 0.0); data.len()];
    let mut hb = vec![C::new(0.0, 0.0); data.len()];
    let neg = |i: usize| (n - i) % n;
    for a in 0..n {
        for b in 0..n {
            let row = (a * n + b) * n;
            let mirror = (neg(a) * n + neg(b)) * n;
            for c in 0..n {
                let z = data[row + c];
                let zc = data[mirror + neg(c)].conj();
                ha[row + c] = (z + zc) * 0.5;
                hb[row + c] = (z - zc) * C::new(0.0, -0.5);
            }
        }
    }
    zero_nyquist(n, &mut ha);
    zero_nyquist(n, &mut hb);
    (ha, hb)
}

/// Inverse transforms of several real fields, paired two per transform.
pub(crate) fn to_real_many(n: usize, fields: &[&[C]]) -> Vec<Vec<f64>> {
    let chunks: Vec<Vec<Vec<f64>>> = fields
        .par_chunks(2)
        .map(|pair| match pair {
            [a, b] => {
                let (x, y) = spectral_to_real_pair(n, a, b);
                vec![x, y]
            }
            [a] => vec![spectral_to_real(n, a)],
            _ => unreachable!(),
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Forward transforms of several real fields, paired two per transform.
pub(crate) fn to_spectral_many(n: usize, fields: &[Vec<f64>]) -> Vec<Vec<C>> {
    let chunks: Vec<Vec<Vec<C>>> = fields
        .par_chunks(2)
        .map(|pair| match pair {
            [a, b] => {
                let (x, y) = real_to_spectral_pair(n, a, b);
                vec![x, y]
            }
            [a] => vec![real_to_spectral(n, a)],
            _ => unreachable!(),
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Inverse transforms one field at a time (no cross-talk between fields).
pub(crate) fn to_real_each(n: usize, fields: &[&[C]]) -> Vec<Vec<f64>> {
    fields.par_iter().map(|c| spectral_to_real(n, c)).collect()
}

/// Forward transforms one field at a time (no cross-talk between fields).
pub(crate) fn to_spectral_each(n: usize, fields: &[Vec<f64>]) -> Vec<Vec<C>> {
    fields.par_iter().map(|v| real_to_spectral(n, v)).collect()
}

fn embed_index(i: usize, from: usize, to: usize) -> Option<usize> {
    let k = if i <= from / 2 { i as i64 } else { i as i64 - from as i64 };
    if 2 * k.unsigned_abs() as usize >= from.min(to) {
        return None;
    }
    Some(k.rem_euclid(to as i64) as usize)
}

/// Zero-pads coefficients from an `n`-grid onto an `m`-grid (`m >= n`).
pub(crate) fn pad(coeffs: &[C], n: usize, m: usize) -> Vec<C> {
    if m == n {
        let mut out = coeffs.to_vec();
        zero_nyquist(n, &mut out);
        return out;
    }
    let map: Vec<Option<usize>> = (0..n).map(|i| embed_index(i, n, m)).collect();
    let mut out = vec![C::new(0.0, 0.0); m * m * m];
    for a in 0..n {
        let Some(fa) = map[a] else { continue };
        for b in 0..n {
            let Some(fb) = map[b] else { continue };
            for c in 0..n {
                let Some(fc) = map[c] else { continue };
                out[(fa * m + fb) * m + fc] = coeffs[(a * n + b) * n + c];
            }
        }
    }
    out
}

/// Keeps the coefficients of an `m`-grid array that exist on an `n`-grid.
pub(crate) fn truncate(coeffs: &[C], m: usize, n: usize) -> Vec<C> {
    if m == n {
        let mut out = coeffs.to_vec();
        zero_nyquist(n, &mut out);
        return out;
    }
    let map: Vec<Option<usize>> = (0..n).map(|i| embed_index(i, n, m)).collect();
    let mut out = vec![C::new(0.0, 0.0); n * n * n];
    for a in 0..n {
        let Some(fa) = map[a] else { continue };
        for b in 0..n {
            let Some(fb) = map[b] else { continue };
            for c in 0..n {
                let Some(fc) = map[c] else { continue };
                out[(a * n + b) * n + c] = coeffs[(fa * m + fb) * m + fc];
            }
        }
    }
    out
}
