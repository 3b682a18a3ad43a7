#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tfps_core::{Complex64, GridSpec, PhaseField, PhasePoint};

/// The reference grid: N = 128, Lx = 20, hbar = 1.
pub fn reference_grid() -> GridSpec {
    GridSpec::new(128, 20.0, 1.0).unwrap()
}

/// A cheaper grid for the slower operator tests.
pub fn small_grid() -> GridSpec {
    GridSpec::new(64, 16.0, 1.0).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform point in the disc of radius `r`.
pub fn random_point(rng: &mut StdRng, r: f64) -> PhasePoint {
    let rho = r * rng.random::<f64>().sqrt();
    let th = rng.random_range(0.0..std::f64::consts::TAU);
    PhasePoint::planar(rho * th.cos(), rho * th.sin())
}

/// A smooth, rapidly decaying field: a few random Gaussians with plane-wave phases.
pub fn random_bump(rng: &mut StdRng, grid: GridSpec) -> PhaseField {
    let terms: Vec<[f64; 6]> = (0..3)
        .map(|_| {
            [
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(0.7..1.5),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ]
        })
        .collect();
    PhaseField::from_fn(grid, move |x, p| {
        terms
            .iter()
            .map(|[xc, pc, w, kx, kp, amp]| {
                let r2 = ((x - xc).powi(2) + (p - pc).powi(2)) / (w * w);
                Complex64::from_polar(amp * (-r2 / 2.0).exp(), kx * x + kp * p)
            })
            .sum()
    })
}

/// `(pi hbar)^{-1/2} exp(-|z|^2 / (2 hbar))` times a random plane wave `|k| <= 0.5`.
///
/// Centered so that translated copies stay far from the periodic boundary,
/// where momentum kicks off the `dp` lattice are not exactly periodic.
pub fn modulated_gaussian(rng: &mut StdRng, grid: GridSpec) -> PhaseField {
    let kx = rng.random_range(-0.5..0.5);
    let kp = rng.random_range(-0.5..0.5);
    let h = grid.hbar();
    let c = (std::f64::consts::PI * h).powf(-0.5);
    PhaseField::from_fn(grid, move |x, p| {
        Complex64::from_polar(c * (-(x * x + p * p) / (2.0 * h)).exp(), kx * x + kp * p)
    })
}
