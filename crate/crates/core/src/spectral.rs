//! FFT plumbing shared by the field, translation and evolution modules.
//!
//! Fields are stored row-major with the `x` index as row and the `p` index
//! as column, so "row" transforms act along `p` and "column" transforms along `x`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::par;

#[derive(Clone)]
pub(crate) struct Plans {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
}

impl Plans {
    pub fn scratch(&self) -> Vec<Complex64> {
        let len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        vec![Complex64::new(0.0, 0.0); len]
    }
}

pub(crate) fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<usize, Plans>)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let (planner, map) = &mut *guard;
    if let Some(p) = map.get(&n) {
        return p.clone();
    }
    let p = Plans {
        forward: planner.plan_fft_forward(n),
        inverse: planner.plan_fft_inverse(n),
    };
    map.insert(n, p.clone());
    p
}

/// For every row `r`: FFT, multiply bin `m` by `mult(r, m)`, inverse FFT, normalize.
pub(crate) fn transform_rows<F>(values: &mut [Complex64], n: usize, mult: F)
where
    F: Fn(usize, usize) -> Complex64 + Sync + Send,
{
    let plans = plans(n);
    let scale = 1.0 / n as f64;
    par::for_each_chunk_init(
        values,
        n,
        || plans.scratch(),
        |scratch, r, row| {
            plans.forward.process_with_scratch(row, scratch);
            for (m, v) in row.iter_mut().enumerate() {
                *v *= mult(r, m) * scale;
            }
            plans.inverse.process_with_scratch(row, scratch);
        },
    );
}

/// Column version of [`transform_rows`]: `mult(c, m)` for column `c`, bin `m`.
pub(crate) fn transform_cols<F>(values: &mut [Complex64], n: usize, mult: F)
where
    F: Fn(usize, usize) -> Complex64 + Sync + Send,
{
    let mut t = transpose(values, n);
    transform_rows(&mut t, n, mult);
    let back = transpose(&t, n);
    values.copy_from_slice(&back);
}

pub(crate) fn transpose(values: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    par::for_each_chunk(&mut out, n, |r, row| {
        for (c, v) in row.iter_mut().enumerate() {
            *v = values[c * n + r];
        }
    });
    out
}

/// One-dimensional version of [`transform_rows`].
pub(crate) fn transform_vec<F>(values: &mut [Complex64], mult: F)
where
    F: Fn(usize) -> Complex64,
{
    let n = values.len();
    let plans = plans(n);
    let mut scratch = plans.scratch();
    let scale = 1.0 / n as f64;
    plans.forward.process_with_scratch(values, &mut scratch);
    for (m, v) in values.iter_mut().enumerate() {
        *v *= mult(m) * scale;
    }
    plans.inverse.process_with_scratch(values, &mut scratch);
}

/// Exact DFT between two reciprocal uniform grids,
/// `out_b = sum_a exp(sign * i u_a v_b / hbar) f_a`,
/// with `u_a = u0 + a du`, `v_b = v0 + b dv` and `du dv = 2 pi hbar / N`.
///
/// The product `u_a v_b / hbar` splits into `2 pi a b / N` plus terms that
/// depend on only one index, so the sum is one FFT between two phase ramps.
pub(crate) struct CenteredDft {
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
}

impl CenteredDft {
    pub fn new(n: usize, u0: f64, du: f64, v0: f64, dv: f64, hbar: f64, sign: f64) -> Self {
        let pre = (0..n)
            .map(|a| Complex64::from_polar(1.0, sign * a as f64 * du * v0 / hbar))
            .collect();
        let post = (0..n)
            .map(|b| Complex64::from_polar(1.0, sign * u0 * (v0 + b as f64 * dv) / hbar))
            .collect();
        let p = plans(n);
        let fft = if sign < 0.0 { p.forward } else { p.inverse };
        Self { pre, post, fft }
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()]
    }

    pub fn apply(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        for (v, w) in buf.iter_mut().zip(&self.pre) {
            *v *= w;
        }
        self.fft.process_with_scratch(buf, scratch);
        for (v, w) in buf.iter_mut().zip(&self.post) {
            *v *= w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_dft_matches_direct_sum() {
        let n = 16;
        let hbar = 0.7;
        let lx = 5.0;
        let dx = lx / n as f64;
        let dp = std::f64::consts::TAU * hbar / (n as f64 * dx);
        let (x0, p0) = (-0.5 * lx, -0.5 * dp * n as f64);
        let f: Vec<Complex64> = (0..n)
            .map(|a| Complex64::new((a as f64 * 0.37).sin(), (a as f64 * 1.1).cos()))
            .collect();
        for sign in [-1.0, 1.0] {
            let dft = CenteredDft::new(n, x0, dx, p0, dp, hbar, sign);
            let mut buf = f.clone();
            let mut scratch = dft.scratch();
            dft.apply(&mut buf, &mut scratch);
            for b in 0..n {
                let v = p0 + b as f64 * dp;
                let direct: Complex64 = (0..n)
                    .map(|a| {
                        let u = x0 + a as f64 * dx;
                        f[a] * Complex64::from_polar(1.0, sign * u * v / hbar)
                    })
                    .sum();
                assert!((direct - buf[b]).norm() < 1e-12, "sign {sign} bin {b}");
            }
        }
    }

    #[test]
    fn identity_multiplier_round_trips() {
        let n = 8;
        let data: Vec<Complex64> = (0..n * n).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let mut rows = data.clone();
        transform_rows(&mut rows, n, |_, _| Complex64::new(1.0, 0.0));
        let mut cols = data.clone();
        transform_cols(&mut cols, n, |_, _| Complex64::new(1.0, 0.0));
        for i in 0..n * n {
            assert!((rows[i] - data[i]).norm() < 1e-12);
            assert!((cols[i] - data[i]).norm() < 1e-12);
        }
    }
}
