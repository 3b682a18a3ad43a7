//! Closed-form states used as initial data and as exact references.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::field::{ConfigField, PhaseField};
use crate::grid::GridSpec;
use crate::symplectic::{flow_matrix, PhasePoint, QuadraticHamiltonian};
use crate::wavepacket::{gaussian_window, wavepacket_forward};
use crate::Result;

/// `T(zc) phi_w` evaluated analytically, with
/// `phi_w(x) = (pi hbar w^2)^{-1/4} exp(-x^2 / (2 hbar w^2))`.
pub fn coherent_config(grid: GridSpec, xc: f64, pc: f64, width: f64) -> ConfigField {
    let h = grid.hbar();
    let s2 = h * width * width;
    let c = (PI * s2).powf(-0.25);
    ConfigField::from_fn(grid, |x| {
        let amp = c * (-(x - xc).powi(2) / (2.0 * s2)).exp();
        Complex64::from_polar(amp, (pc * x - 0.5 * pc * xc) / h)
    })
}

/// Wavepacket image of the width-one coherent state centred at `(xc, pc)`.
pub fn coherent_phase(grid: GridSpec, xc: f64, pc: f64) -> Result<PhaseField> {
    wavepacket_forward(&coherent_config(grid, xc, pc, 1.0), &gaussian_window(grid))
}

/// Normalized `(pi hbar)^{-1/2} exp(-|z - zc|^2 / (2 hbar))`, real and not in
/// the image of the wavepacket transform.
pub fn gaussian_phase(grid: GridSpec, xc: f64, pc: f64) -> PhaseField {
    let h = grid.hbar();
    let c = (PI * h).powf(-0.5);
    PhaseField::from_fn(grid, |x, p| {
        Complex64::new(c * (-((x - xc).powi(2) + (p - pc).powi(2)) / (2.0 * h)).exp(), 0.0)
    })
}

/// Exact solution of `i hbar psi' = 1/2 (x^2 + p^2) psi` from `T(zc) phi`:
/// `exp(-i t / 2) T(S_t zc) phi`.
pub fn harmonic_config_solution(grid: GridSpec, xc: f64, pc: f64, t: f64) -> Result<ConfigField> {
    let s = flow_matrix(&QuadraticHamiltonian::harmonic(), t)?;
    let (x, p) = s.apply(&PhasePoint::planar(xc, pc))?.as_planar()?;
    let mut psi = coherent_config(grid, x, p, 1.0);
    let ph = Complex64::from_polar(1.0, -0.5 * t);
    for v in crate::field::Field::values_mut(&mut psi) {
        *v *= ph;
    }
    Ok(psi)
}

/// Exact solution of `i hbar psi' = p^2 / 2 psi` from `T(zc) phi`:
/// `T(S_t zc) U_t phi` with the spreading Gaussian
/// `U_t phi = (pi hbar)^{-1/4} (1 + i t)^{-1/2} exp(-x^2 / (2 hbar (1 + i t)))`.
pub fn free_config_solution(grid: GridSpec, xc: f64, pc: f64, t: f64) -> ConfigField {
    let h = grid.hbar();
    let (x1, p1) = (xc + t * pc, pc);
    let denom = Complex64::new(1.0, t);
    let c = (PI * h).powf(-0.25) / denom.sqrt();
    ConfigField::from_fn(grid, |x| {
        let y = x - x1;
        let spread = c * (-(y * y) / (2.0 * h * denom)).exp();
        spread * Complex64::from_polar(1.0, (p1 * x - 0.5 * p1 * x1) / h)
    })
}
