//! Complex fields on the phase-space grid and on its configuration axis.

use num_complex::Complex64;

use crate::grid::GridSpec;
use crate::spectral::{self, CenteredDft};
use crate::{par, Error, Result};

/// Relative boundary amplitude above which spectral operations warn that the
/// periodic model is being stretched.
pub const BOUNDARY_WARN: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    P,
}

/// Vector-space operations shared by [`PhaseField`] and [`ConfigField`].
pub trait Field: Clone + Send + Sync {
    fn grid(&self) -> &GridSpec;
    fn values(&self) -> &[Complex64];
    fn values_mut(&mut self) -> &mut [Complex64];
    /// Quadrature weight of one sample (`dx dp` or `dx`).
    fn weight(&self) -> f64;

    fn zeros_like(&self) -> Self {
        let mut out = self.clone();
        out.values_mut().fill(ZERO);
        out
    }

    fn l2_norm(&self) -> f64 {
        (self.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * self.weight()).sqrt()
    }

    /// `<self, other>`, conjugate-linear in `self`.
    fn inner(&self, other: &Self) -> Result<Complex64> {
        if !self.grid().same_as(other.grid()) {
            return Err(Error::GridMismatch);
        }
        let s: Complex64 = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.weight())
    }

    /// `self += a * other`.
    fn axpy(&mut self, a: Complex64, other: &Self) {
        for (v, w) in self.values_mut().iter_mut().zip(other.values()) {
            *v += a * w;
        }
    }

    fn scale(&mut self, a: Complex64) {
        for v in self.values_mut() {
            *v *= a;
        }
    }

    fn scaled(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `||self - other||`.
    fn distance(&self, other: &Self) -> f64 {
        let s: f64 = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (s * self.weight()).sqrt()
    }

    fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// `Psi(x_j, p_k)` stored row-major at `values[j * N + k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl PhaseField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            values: vec![ZERO; grid.n() * grid.n()],
            grid,
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() * grid.n() {
            return Err(Error::DimensionMismatch {
                expected: grid.n() * grid.n(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64 + Sync + Send) -> Self {
        let mut out = Self::zeros(grid);
        let n = grid.n();
        par::for_each_chunk(&mut out.values, n, |j, row| {
            let x = grid.x(j);
            for (k, v) in row.iter_mut().enumerate() {
                *v = f(x, grid.p(k));
            }
        });
        out
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.grid.n() + k]
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Largest modulus on the outermost rows and columns relative to the global maximum.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.grid.n();
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let mut edge: f64 = 0.0;
        for i in 0..n {
            for (j, k) in [(0, i), (n - 1, i), (i, 0), (i, n - 1)] {
                edge = edge.max(self.get(j, k).norm());
            }
        }
        edge / max
    }

    /// Spectral derivative along one axis (FFT, multiply by `i k`, inverse FFT).
    /// The Nyquist bin is dropped.
    pub fn derivative(&self, axis: Axis) -> PhaseField {
        warn_if_not_periodic(self.boundary_ratio());
        let g = self.grid;
        let n = g.n();
        let mut out = self.clone();
        let mult = move |_: usize, m: usize| {
            if g.is_nyquist(m) {
                ZERO
            } else {
                match axis {
                    Axis::X => Complex64::new(0.0, g.kx(m)),
                    Axis::P => Complex64::new(0.0, g.kp(m)),
                }
            }
        };
        match axis {
            Axis::X => spectral::transform_cols(&mut out.values, n, mult),
            Axis::P => spectral::transform_rows(&mut out.values, n, mult),
        }
        out
    }

    /// Multiplies row `j` by `f(x_j)`.
    pub fn multiply_by_x(&self, f: impl Fn(f64) -> Complex64 + Sync + Send) -> PhaseField {
        let mut out = self.clone();
        let g = self.grid;
        par::for_each_chunk(&mut out.values, g.n(), |j, row| {
            let w = f(g.x(j));
            for v in row {
                *v *= w;
            }
        });
        out
    }
}

impl Field for PhaseField {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }
    fn values(&self) -> &[Complex64] {
        &self.values
    }
    fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }
    fn weight(&self) -> f64 {
        self.grid.cell()
    }
}

/// `psi(x_j)` on the configuration axis of a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ConfigField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            values: vec![ZERO; grid.n()],
            grid,
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::DimensionMismatch {
                expected: grid.n(),
                found: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            values: (0..grid.n()).map(|j| f(grid.x(j))).collect(),
            grid,
        }
    }

    pub fn get(&self, j: usize) -> Complex64 {
        self.values[j]
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let n = self.values.len();
        self.values[0].norm().max(self.values[n - 1].norm()) / max
    }

    pub fn derivative(&self) -> ConfigField {
        warn_if_not_periodic(self.boundary_ratio());
        let g = self.grid;
        let mut out = self.clone();
        spectral::transform_vec(&mut out.values, |m| {
            if g.is_nyquist(m) {
                ZERO
            } else {
                Complex64::new(0.0, g.kx(m))
            }
        });
        out
    }

    pub fn multiply_by_x(&self, f: impl Fn(f64) -> Complex64) -> ConfigField {
        let mut out = self.clone();
        for (j, v) in out.values.iter_mut().enumerate() {
            *v *= f(self.grid.x(j));
        }
        out
    }
}

impl Field for ConfigField {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }
    fn values(&self) -> &[Complex64] {
        &self.values
    }
    fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }
    fn weight(&self) -> f64 {
        self.grid.dx()
    }
}

fn warn_if_not_periodic(ratio: f64) {
    if ratio >= BOUNDARY_WARN {
        log::warn!(
            "field is not negligible on the grid boundary (ratio {ratio:.3e}); spectral derivative assumes periodicity"
        );
    }
}

/// `||Psi||` with cell weight `dx dp`.
pub fn l2_norm(psi: &PhaseField) -> f64 {
    psi.l2_norm()
}

/// `<Psi, Phi>`, conjugate-linear in the first slot.
pub fn inner(psi: &PhaseField, phi: &PhaseField) -> Result<Complex64> {
    psi.inner(phi)
}

pub fn spectral_derivative(psi: &PhaseField, axis: Axis) -> PhaseField {
    psi.derivative(axis)
}

/// Symplectic Fourier transform
/// `F_sigma a(z) = (2 pi hbar)^{-1} int exp(-i sigma(z, z') / hbar) a(z') dz'`
/// sampled on the same grid.
///
/// With `sigma(z, z') = x' p - p' x`, the `p'` sum pairs with the output `x`
/// and the `x'` sum with the output `p`. On a Fourier-compatible grid both
/// sums are exact DFTs, so the transform is unitary and an involution up to
/// rounding.
pub fn symplectic_fourier(a: &PhaseField) -> PhaseField {
    let g = *a.grid();
    let n = g.n();
    let h = g.hbar();
    let (x0, p0) = (g.x(0), g.p(0));
    // Row j' of `a`: sum over p' with exp(+i p' x / hbar), indexed by output x.
    let p_to_x = CenteredDft::new(n, p0, g.dp(), x0, g.dx(), h, 1.0);
    let mut b = a.values.clone();
    par::for_each_chunk_init(&mut b, n, || p_to_x.scratch(), |s, _, row| p_to_x.apply(row, s));
    // b[j'][j] -> bt[j][j'], then sum over x' with exp(-i x' p / hbar).
    let mut bt = spectral::transpose(&b, n);
    let x_to_p = CenteredDft::new(n, x0, g.dx(), p0, g.dp(), h, -1.0);
    let scale = 1.0 / n as f64;
    par::for_each_chunk_init(&mut bt, n, || x_to_p.scratch(), |s, _, row| {
        x_to_p.apply(row, s);
        for v in row.iter_mut() {
            *v *= scale;
        }
    });
    PhaseField {
        grid: g,
        values: bt,
    }
}
