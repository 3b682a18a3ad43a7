//! Heisenberg-Weyl translations.
//!
//! Both families share the phase `exp(i/hbar (p0 x - p0 x0 / 2))`:
//!
//! * on configuration space, `T(z0) psi(x) = e^{...} psi(x - x0)`;
//! * on phase space, `T(z0) Psi(x, p) = e^{...} Psi(x - x0, p - p0)`.
//!
//! Shifts are applied spectrally (a phase ramp on the conjugate FFT bins), so
//! they are exactly unitary on the periodic grid and valid for offsets that
//! are not multiples of the grid spacing. Both families obey the Weyl relation
//! `T(z1) T(z2) = exp(i sigma(z1, z2) / (2 hbar)) T(z1 + z2)`.

use num_complex::Complex64;

use crate::field::{ConfigField, Field, PhaseField};
use crate::symplectic::{symplectic_form, PhasePoint};
use crate::{par, spectral, Result};

/// A translation operator `T(z0)` for one degree of freedom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeisenbergWeyl {
    pub x0: f64,
    pub p0: f64,
}

impl HeisenbergWeyl {
    pub fn new(z0: &PhasePoint) -> Result<Self> {
        let (x0, p0) = z0.as_planar()?;
        Ok(Self { x0, p0 })
    }

    pub fn planar(x0: f64, p0: f64) -> Self {
        Self { x0, p0 }
    }

    pub fn point(&self) -> PhasePoint {
        PhasePoint::planar(self.x0, self.p0)
    }

    /// `T(z0)^{-1} = T(-z0)`.
    pub fn inverse(&self) -> Self {
        Self::planar(-self.x0, -self.p0)
    }

    /// `T(self) T(other) = c T(self + other)`; returns `(c, T(self + other))`.
    pub fn compose(&self, other: &Self, hbar: f64) -> (Complex64, Self) {
        let sigma = symplectic_form(&self.point(), &other.point()).expect("planar points");
        (
            phase(sigma / (2.0 * hbar)),
            Self::planar(self.x0 + other.x0, self.p0 + other.p0),
        )
    }

    fn phase_at(&self, x: f64, hbar: f64) -> Complex64 {
        phase((self.p0 * x - 0.5 * self.p0 * self.x0) / hbar)
    }

    pub fn apply_config(&self, psi: &ConfigField) -> ConfigField {
        let g = *psi.grid();
        let mut out = psi.clone();
        if self.x0 != 0.0 {
            let x0 = self.x0;
            spectral::transform_vec(out.values_mut(), |m| phase(-g.kx(m) * x0));
        }
        if self.p0 != 0.0 {
            for (j, v) in out.values_mut().iter_mut().enumerate() {
                *v *= self.phase_at(g.x(j), g.hbar());
            }
        }
        out
    }

    pub fn apply_phase(&self, psi: &PhaseField) -> PhaseField {
        let g = *psi.grid();
        let n = g.n();
        let mut out = psi.clone();
        if self.x0 != 0.0 {
            let x0 = self.x0;
            spectral::transform_cols(out.values_mut(), n, |_, m| phase(-g.kx(m) * x0));
        }
        if self.p0 != 0.0 {
            let p0 = self.p0;
            spectral::transform_rows(out.values_mut(), n, |_, m| phase(-g.kp(m) * p0));
            let op = *self;
            par::for_each_chunk(out.values_mut(), n, |j, row| {
                let w = op.phase_at(g.x(j), g.hbar());
                for v in row {
                    *v *= w;
                }
            });
        }
        out
    }
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Translation family acting on a field type; lets Weyl quantization run the
/// same code in both pictures.
pub trait Translate: Field {
    fn translate(&self, op: &HeisenbergWeyl) -> Self;
}

impl Translate for ConfigField {
    fn translate(&self, op: &HeisenbergWeyl) -> Self {
        op.apply_config(self)
    }
}

impl Translate for PhaseField {
    fn translate(&self, op: &HeisenbergWeyl) -> Self {
        op.apply_phase(self)
    }
}

/// Standard Heisenberg-Weyl operator on `psi(x)`.
pub fn hw_config(z0: &PhasePoint, psi: &ConfigField) -> Result<ConfigField> {
    Ok(HeisenbergWeyl::new(z0)?.apply_config(psi))
}

/// Extended Heisenberg-Weyl operator on `Psi(x, p)`.
pub fn hw_phase(z0: &PhasePoint, psi: &PhaseField) -> Result<PhaseField> {
    Ok(HeisenbergWeyl::new(z0)?.apply_phase(psi))
}

/// `T(z0)^{-1}`, which is `T(-z0)` with no extra phase.
pub fn hw_inverse(z0: &PhasePoint) -> Result<HeisenbergWeyl> {
    Ok(HeisenbergWeyl::new(z0)?.inverse())
}
