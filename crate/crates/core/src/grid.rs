use std::f64::consts::TAU;

use crate::{Error, Result};

/// Relative tolerance of the Fourier-compatibility condition `Lx Lp = 2 pi hbar N`.
pub const COMPAT_TOL: f64 = 1e-9;

/// Uniform periodic discretization of the phase plane.
///
/// Grid points are `x_j = -Lx/2 + j Lx/N` and `p_k = -Lp/2 + k Lp/N` for
/// `j, k in 0..N`. The windows satisfy `Lx Lp = 2 pi hbar N`, which makes
/// `dx dp = 2 pi hbar / N` and turns the symplectic Fourier transform into an
/// exact automorphism of the grid. `N` must be even so that differences of
/// grid points are again grid points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    n: usize,
    lx: f64,
    lp: f64,
    hbar: f64,
}

impl GridSpec {
    /// Derives `Lp = 2 pi hbar N / Lx`.
    pub fn new(n: usize, lx: f64, hbar: f64) -> Result<Self> {
        validate(n, lx, hbar)?;
        Ok(Self {
            n,
            lx,
            lp: TAU * hbar * n as f64 / lx,
            hbar,
        })
    }

    /// Accepts an explicit `Lp` (as read back from a dump) after checking compatibility.
    pub fn from_parts(n: usize, lx: f64, lp: f64, hbar: f64) -> Result<Self> {
        validate(n, lx, hbar)?;
        if !(lp.is_finite() && lp > 0.0) {
            return Err(Error::InvalidGrid(format!("Lp must be positive, got {lp}")));
        }
        let area = lx * lp;
        if (area - TAU * hbar * n as f64).abs() > COMPAT_TOL * area {
            return Err(Error::InvalidGrid(format!(
                "Lx*Lp = {area} differs from 2*pi*hbar*N = {}",
                TAU * hbar * n as f64
            )));
        }
        Ok(Self { n, lx, lp, hbar })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn lp(&self) -> f64 {
        self.lp
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.n as f64
    }

    pub fn dp(&self) -> f64 {
        self.lp / self.n as f64
    }

    /// Phase-space cell area `dx dp`.
    pub fn cell(&self) -> f64 {
        self.dx() * self.dp()
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.lx + j as f64 * self.dx()
    }

    pub fn p(&self, k: usize) -> f64 {
        -0.5 * self.lp + k as f64 * self.dp()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.p(k)).collect()
    }

    /// Angular wavenumber conjugate to `x` for FFT bin `m`.
    pub fn kx(&self, m: usize) -> f64 {
        TAU * signed_bin(m, self.n) as f64 / self.lx
    }

    /// Angular wavenumber conjugate to `p` for FFT bin `m`.
    pub fn kp(&self, m: usize) -> f64 {
        TAU * signed_bin(m, self.n) as f64 / self.lp
    }

    pub fn is_nyquist(&self, m: usize) -> bool {
        m == self.n / 2
    }

    /// Same `N`, `Lx`, `hbar` (and therefore the same `Lp` up to rounding).
    pub fn same_as(&self, other: &GridSpec) -> bool {
        self.n == other.n
            && self.lx == other.lx
            && self.hbar == other.hbar
            && (self.lp - other.lp).abs() <= COMPAT_TOL * self.lp
    }
}

fn validate(n: usize, lx: f64, hbar: f64) -> Result<()> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidGrid(format!("N must be even and >= 2, got {n}")));
    }
    if !(lx.is_finite() && lx > 0.0) {
        return Err(Error::InvalidGrid(format!("Lx must be positive, got {lx}")));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidGrid(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

/// FFT bin `m` as a signed frequency index in `[-N/2, N/2)`.
pub(crate) fn signed_bin(m: usize, n: usize) -> isize {
    if m < n / 2 {
        m as isize
    } else {
        m as isize - n as isize
    }
}
