//! Wavepacket (FBI) transform between configuration and phase space.
//!
//! For a normalized window `phi`,
//!
//! ```text
//! W psi(z) = (2 pi hbar)^{-1/2} exp(i p x / (2 hbar)) <T(z) phi, psi>
//! ```
//!
//! The prefactor `exp(i p x / (2 hbar))` is what makes `W` intertwine the two
//! translation families, `W T_config(z0) = T_phase(z0) W`. Expanding
//! `T(z)^{-1} T(z0) = exp(-i sigma(z, z0) / (2 hbar)) T(z0 - z)` shows the
//! leftover phase is `exp(i (x p0 - p x0) / (2 hbar))`, which is exactly the
//! difference between `exp(i p x / 2 hbar)` at `z` and at `z - z0` plus the
//! translation phase. Any other `exp(i theta(z))` breaks the identity.
//!
//! On the grid the window is shifted by whole cells with periodic wrap and
//! the `x'` sum is an exact DFT, so `W` is an isometry up to rounding and its
//! adjoint is a left inverse.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::field::{ConfigField, Field, PhaseField};
use crate::grid::GridSpec;
use crate::spectral::CenteredDft;
use crate::{par, Error, Result};

/// Allowed deviation of `||phi||` from one.
pub const WINDOW_NORM_TOL: f64 = 1e-10;

/// `(pi hbar)^{-1/4} exp(-x^2 / (2 hbar))`, the harmonic ground state; the
/// coherent-state choice of window.
pub fn gaussian_window(grid: GridSpec) -> ConfigField {
    let h = grid.hbar();
    let c = (PI * h).powf(-0.25);
    ConfigField::from_fn(grid, |x| Complex64::new(c * (-x * x / (2.0 * h)).exp(), 0.0))
}

fn check(psi_grid: &GridSpec, window: &ConfigField) -> Result<()> {
    if !psi_grid.same_as(window.grid()) {
        return Err(Error::GridMismatch);
    }
    let norm = window.l2_norm();
    if (norm - 1.0).abs() > WINDOW_NORM_TOL {
        return Err(Error::UnnormalizedWindow { norm });
    }
    Ok(())
}

/// Index of `phi(x_a - x_j)` on the periodic grid.
fn wrap(a: usize, j: usize, n: usize) -> usize {
    (a + n + n / 2 - j) % n
}

/// `W_phi psi` on every grid point.
pub fn wavepacket_forward(psi: &ConfigField, window: &ConfigField) -> Result<PhaseField> {
    let g = *psi.grid();
    check(&g, window)?;
    let n = g.n();
    let h = g.hbar();
    let dft = CenteredDft::new(n, g.x(0), g.dx(), g.p(0), g.dp(), h, -1.0);
    let pref = (TAU * h).powf(-0.5) * g.dx();
    let phi = window.values();
    let src = psi.values();
    let mut out = PhaseField::zeros(g);
    par::for_each_chunk_init(
        out.values_mut(),
        n,
        || dft.scratch(),
        |scratch, j, row| {
            for (a, v) in row.iter_mut().enumerate() {
                *v = phi[wrap(a, j, n)].conj() * src[a];
            }
            dft.apply(row, scratch);
            let x = g.x(j);
            for (k, v) in row.iter_mut().enumerate() {
                *v *= Complex64::from_polar(pref, g.p(k) * x / h);
            }
        },
    );
    Ok(out)
}

/// Adjoint of [`wavepacket_forward`] for the weights `dx dp` and `dx`.
pub fn wavepacket_adjoint(psi: &PhaseField, window: &ConfigField) -> Result<ConfigField> {
    let g = *psi.grid();
    check(&g, window)?;
    let n = g.n();
    let h = g.hbar();
    let dft = CenteredDft::new(n, g.p(0), g.dp(), g.x(0), g.dx(), h, 1.0);
    // rows[j][a] = sum_k exp(i p_k (x_a - x_j) / hbar) Psi[j][k]
    let mut rows = psi.values().to_vec();
    par::for_each_chunk_init(&mut rows, n, || dft.scratch(), |scratch, j, row| {
        let x = g.x(j);
        for (k, v) in row.iter_mut().enumerate() {
            *v *= Complex64::from_polar(1.0, -g.p(k) * x / h);
        }
        dft.apply(row, scratch);
    });
    let pref = (TAU * h).powf(-0.5) * g.dx() * g.dp();
    let phi = window.values();
    let mut out = ConfigField::zeros(g);
    par::for_each_chunk(out.values_mut(), 1, |a, slot| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += phi[wrap(a, j, n)] * rows[j * n + a];
        }
        slot[0] = acc * pref;
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(128, 20.0, 1.0).unwrap()
    }

    #[test]
    fn gaussian_overlap_modulus() {
        let g = grid();
        let phi = gaussian_window(g);
        let w = wavepacket_forward(&phi, &phi).unwrap();
        for j in (0..g.n()).step_by(3) {
            for k in (0..g.n()).step_by(3) {
                let (x, p) = (g.x(j), g.p(k));
                let expect = (TAU).powf(-0.5) * (-(x * x + p * p) / 4.0).exp();
                if expect > 1e-6 {
                    assert!((w.get(j, k).norm() - expect).abs() <= 1e-6 * expect);
                }
            }
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let g = grid();
        let phi = gaussian_window(g);
        let w = wavepacket_forward(&ConfigField::zeros(g), &phi).unwrap();
        assert_eq!(w.max_abs(), 0.0);
        let back = wavepacket_adjoint(&PhaseField::zeros(g), &phi).unwrap();
        assert_eq!(back.max_abs(), 0.0);
    }

    #[test]
    fn isometry_and_reconstruction() {
        let g = grid();
        let phi = gaussian_window(g);
        let psi = ConfigField::from_fn(g, |x| {
            Complex64::new((-(x - 1.0).powi(2) / 1.5).exp(), 0.3 * x * (-x * x / 2.0).exp())
        });
        let w = wavepacket_forward(&psi, &phi).unwrap();
        assert!((w.l2_norm() - psi.l2_norm()).abs() < 1e-6);
        let back = wavepacket_adjoint(&w, &phi).unwrap();
        assert!(back.distance(&psi) < 1e-6);
    }

    #[test]
    fn rejects_bad_windows() {
        let g = grid();
        let phi = gaussian_window(g).scaled(Complex64::new(1.1, 0.0));
        assert!(matches!(
            wavepacket_forward(&phi, &phi),
            Err(Error::UnnormalizedWindow { .. })
        ));
        let other = gaussian_window(GridSpec::new(64, 20.0, 1.0).unwrap());
        assert!(matches!(
            wavepacket_forward(&gaussian_window(g), &other),
            Err(Error::GridMismatch)
        ));
    }
}
