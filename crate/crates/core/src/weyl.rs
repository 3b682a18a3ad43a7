//! Weyl quantization in the configuration and the phase-space picture.
//!
//! The Weyl operator of a symbol `a` is the superposition
//!
//! ```text
//! A = (2 pi hbar)^{-1} int F_sigma a(z0) T(z0) dz0
//! ```
//!
//! of Heisenberg-Weyl translations. Letting `T` act on phase-space fields
//! instead of wavefunctions yields the extended calculus, where the
//! coordinate symbols quantize to `X = x + i hbar d/dp` and `P = -i hbar d/dx`.
//!
//! Two symbol classes are admitted:
//!
//! * **Polynomial** symbols of degree at most two. Their `F_sigma a` is a
//!   derivative of a delta at the origin, so the integral collapses to
//!   derivatives of `s -> T(s d) Psi` at `s = 0`. Those are evaluated here by
//!   Richardson-extrapolated central differences in the translation
//!   parameter, a route independent of the spectral realization in
//!   [`tf_operator`].
//! * **Sampled** symbols that decay on the grid. `F_sigma a` is computed with
//!   [`symplectic_fourier`] and the integral is a Riemann sum over the grid.
//!   Grid translations are exact index shifts, which makes the sum a twisted
//!   convolution costing `O(N^4)`.

use num_complex::Complex64;

use crate::field::{symplectic_fourier, Axis, ConfigField, Field, PhaseField};
use crate::grid::GridSpec;
use crate::heisenberg::{HeisenbergWeyl, Translate};
use crate::symplectic::{LinearHamiltonian, QuadraticHamiltonian, SymplecticMatrix};
use crate::{par, Error, Result};

/// Sampled symbols (and their symplectic Fourier transforms) must fall below
/// this fraction of their maximum on the grid boundary.
pub const ADMISSIBLE_DECAY: f64 = 1e-8;

/// Translation step of the difference stencil, in units of `sqrt(hbar) / |d|`.
const STENCIL_STEP: f64 = 0.02;

/// Entries of `F_sigma a` below this fraction of its maximum are skipped.
const QUADRATURE_PRUNE: f64 = 1e-18;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `a(z) = c + l . z + 1/2 z^T M z` with real coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PolynomialSymbol {
    pub constant: f64,
    /// `(l_x, l_p)`.
    pub linear: [f64; 2],
    /// Symmetric `M`.
    pub quadratic: [[f64; 2]; 2],
}

impl PolynomialSymbol {
    pub fn evaluate(&self, x: f64, p: f64) -> f64 {
        let [[m11, m12], [_, m22]] = self.quadratic;
        self.constant
            + self.linear[0] * x
            + self.linear[1] * p
            + 0.5 * (m11 * x * x + 2.0 * m12 * x * p + m22 * p * p)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(1.0, other, 1.0)
    }

    pub fn scale(&self, a: f64) -> Self {
        self.combine(a, &Self::default(), 0.0)
    }

    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let q = |r: usize, c: usize| a * self.quadratic[r][c] + b * other.quadratic[r][c];
        Self {
            constant: a * self.constant + b * other.constant,
            linear: [
                a * self.linear[0] + b * other.linear[0],
                a * self.linear[1] + b * other.linear[1],
            ],
            quadratic: [[q(0, 0), q(0, 1)], [q(1, 0), q(1, 1)]],
        }
    }

    /// `z -> a(S z)`.
    pub fn pullback(&self, s: &SymplecticMatrix) -> Result<Self> {
        let [[a, b], [c, d]] = s.as_planar()?;
        let [lx, lp] = self.linear;
        let [[m11, m12], [_, m22]] = self.quadratic;
        // S^T l and S^T M S.
        let linear = [a * lx + c * lp, b * lx + d * lp];
        let ms = [
            [m11 * a + m12 * c, m11 * b + m12 * d],
            [m12 * a + m22 * c, m12 * b + m22 * d],
        ];
        let q11 = a * ms[0][0] + c * ms[1][0];
        let q12 = a * ms[0][1] + c * ms[1][1];
        let q22 = b * ms[0][1] + d * ms[1][1];
        Ok(Self {
            constant: self.constant,
            linear,
            quadratic: [[q11, q12], [q12, q22]],
        })
    }

    fn is_zero_quadratic(&self) -> bool {
        self.quadratic.iter().flatten().all(|&v| v == 0.0)
    }
}

/// A Weyl symbol: polynomial (analytic) or sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub enum WeylSymbol {
    Polynomial(PolynomialSymbol),
    Sampled(PhaseField),
}

impl WeylSymbol {
    pub fn x() -> Self {
        Self::linear(1.0, 0.0)
    }

    pub fn p() -> Self {
        Self::linear(0.0, 1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::Polynomial(PolynomialSymbol {
            constant: c,
            ..Default::default()
        })
    }

    /// `a(z) = l_x x + l_p p`.
    pub fn linear(lx: f64, lp: f64) -> Self {
        Self::Polynomial(PolynomialSymbol {
            linear: [lx, lp],
            ..Default::default()
        })
    }

    /// `a(z) = sigma(z, z0) = x0 p - p0 x`.
    pub fn from_linear(h: &LinearHamiltonian) -> Result<Self> {
        let (x0, p0) = h.z0().as_planar()?;
        Ok(Self::linear(-p0, x0))
    }

    /// `a(z) = 1/2 z^T M z`.
    pub fn from_quadratic(h: &QuadraticHamiltonian) -> Result<Self> {
        let [m11, m12, m22] = h.as_planar()?;
        Ok(Self::quadratic(m11, m12, m22))
    }

    /// `a(z) = 1/2 (m11 x^2 + 2 m12 x p + m22 p^2)`.
    pub fn quadratic(m11: f64, m12: f64, m22: f64) -> Self {
        Self::Polynomial(PolynomialSymbol {
            quadratic: [[m11, m12], [m12, m22]],
            ..Default::default()
        })
    }

    pub fn sampled(values: PhaseField) -> Self {
        Self::Sampled(values)
    }

    /// `z -> a(S z)`; `pullback(S^{-1})` is the symbol `a o S^{-1}`.
    pub fn pullback(&self, s: &SymplecticMatrix) -> Result<Self> {
        match self {
            Self::Polynomial(p) => Ok(Self::Polynomial(p.pullback(s)?)),
            Self::Sampled(_) => Err(Error::UnsupportedSymbol(
                "pullback of sampled symbols (would require interpolation)",
            )),
        }
    }

    pub fn as_polynomial(&self) -> Option<&PolynomialSymbol> {
        match self {
            Self::Polynomial(p) => Some(p),
            Self::Sampled(_) => None,
        }
    }
}

/// Weyl operator (configuration picture) applied to `psi`.
pub fn apply_weyl_config(a: &WeylSymbol, psi: &ConfigField) -> Result<ConfigField> {
    match a {
        WeylSymbol::Polynomial(poly) => Ok(apply_polynomial(poly, psi)),
        WeylSymbol::Sampled(samples) => {
            let ft = admissible_transform(samples, psi.grid())?;
            Ok(quadrature_config(&ft, psi))
        }
    }
}

/// Weyl operator (extended, phase-space picture) applied to `Psi`.
pub fn apply_weyl_phase(a: &WeylSymbol, psi: &PhaseField) -> Result<PhaseField> {
    match a {
        WeylSymbol::Polynomial(poly) => Ok(apply_polynomial(poly, psi)),
        WeylSymbol::Sampled(samples) => {
            let ft = admissible_transform(samples, psi.grid())?;
            Ok(quadrature_phase(&ft, psi))
        }
    }
}

fn admissible_transform(samples: &PhaseField, grid: &GridSpec) -> Result<PhaseField> {
    if !samples.grid().same_as(grid) {
        return Err(Error::GridMismatch);
    }
    if !samples.is_finite() {
        return Err(Error::InadmissibleSymbol("non-finite samples".into()));
    }
    let edge = samples.boundary_ratio();
    if edge > ADMISSIBLE_DECAY {
        return Err(Error::InadmissibleSymbol(format!(
            "symbol does not decay on the grid boundary (ratio {edge:.3e})"
        )));
    }
    let ft = symplectic_fourier(samples);
    let edge = ft.boundary_ratio();
    if edge > ADMISSIBLE_DECAY {
        return Err(Error::InadmissibleSymbol(format!(
            "symplectic Fourier transform does not decay (ratio {edge:.3e})"
        )));
    }
    Ok(ft)
}

/// Central-difference derivatives of `s -> T(s d) psi` at `s = 0`.
struct Stencil<'a, F> {
    psi: &'a F,
    hbar: f64,
}

impl<F: Translate> Stencil<'_, F> {
    fn samples(&self, d: [f64; 2], h: f64) -> (F, F) {
        let fwd = self.psi.translate(&HeisenbergWeyl::planar(h * d[0], h * d[1]));
        let bwd = self.psi.translate(&HeisenbergWeyl::planar(-h * d[0], -h * d[1]));
        (fwd, bwd)
    }

    fn step(&self, d: [f64; 2]) -> f64 {
        STENCIL_STEP * self.hbar.sqrt() / d[0].hypot(d[1])
    }

    /// `l(Z) psi = -i hbar f'(0)` for translations along `d = (-l_p, l_x)`.
    fn first(&self, d: [f64; 2]) -> F {
        let h = self.step(d);
        let diff = |h: f64| {
            let (mut f, b) = self.samples(d, h);
            f.axpy(Complex64::new(-1.0, 0.0), &b);
            f.scaled(Complex64::new(1.0 / (2.0 * h), 0.0))
        };
        let coarse = diff(h);
        let mut fine = diff(0.5 * h).scaled(Complex64::new(4.0 / 3.0, 0.0));
        fine.axpy(Complex64::new(-1.0 / 3.0, 0.0), &coarse);
        fine.scaled(-I * self.hbar)
    }

    /// `l(Z)^2 psi = -hbar^2 f''(0)`.
    fn second(&self, d: [f64; 2]) -> F {
        let h = self.step(d);
        let diff = |h: f64| {
            let (mut f, b) = self.samples(d, h);
            f.axpy(Complex64::new(1.0, 0.0), &b);
            f.axpy(Complex64::new(-2.0, 0.0), self.psi);
            f.scaled(Complex64::new(1.0 / (h * h), 0.0))
        };
        let coarse = diff(h);
        let mut fine = diff(0.5 * h).scaled(Complex64::new(4.0 / 3.0, 0.0));
        fine.axpy(Complex64::new(-1.0 / 3.0, 0.0), &coarse);
        fine.scaled(Complex64::new(-self.hbar * self.hbar, 0.0))
    }
}

/// `exp(i s l(Z) / hbar) = T(s d)` with `d = (-l_p, l_x)`.
fn direction(lx: f64, lp: f64) -> [f64; 2] {
    [-lp, lx]
}

fn apply_polynomial<F: Translate>(poly: &PolynomialSymbol, psi: &F) -> F {
    let st = Stencil {
        psi,
        hbar: psi.grid().hbar(),
    };
    let mut out = psi.scaled(Complex64::new(poly.constant, 0.0));
    let [lx, lp] = poly.linear;
    if lx != 0.0 || lp != 0.0 {
        out.axpy(Complex64::new(1.0, 0.0), &st.first(direction(lx, lp)));
    }
    if !poly.is_zero_quadratic() {
        // 1/2 (m11 X^2 + m22 P^2 + m12 ((X + P)^2 - (X - P)^2) / 2): Weyl ordering.
        let [[m11, m12], [_, m22]] = poly.quadratic;
        let terms = [
            (0.5 * m11, direction(1.0, 0.0)),
            (0.5 * m22, direction(0.0, 1.0)),
            (0.25 * m12, direction(1.0, 1.0)),
            (-0.25 * m12, direction(1.0, -1.0)),
        ];
        for (c, d) in terms {
            if c != 0.0 {
                out.axpy(Complex64::new(c, 0.0), &st.second(d));
            }
        }
    }
    out
}

/// Phase tables `E[k][i] = exp(i p_k x_i / hbar)` and `Eh[k][j] = exp(-i p_k x_j / (2 hbar))`.
fn twist_tables(g: &GridSpec) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = g.n();
    let h = g.hbar();
    let mut e = vec![ZERO; n * n];
    let mut eh = vec![ZERO; n * n];
    for k in 0..n {
        for i in 0..n {
            let t = g.p(k) * g.x(i) / h;
            e[k * n + i] = Complex64::from_polar(1.0, t);
            eh[k * n + i] = Complex64::from_polar(1.0, -0.5 * t);
        }
    }
    (e, eh)
}

/// Rows of `F_sigma a` as lists of `(k, value)` above the pruning threshold.
fn pruned_rows(ft: &PhaseField) -> Vec<Vec<(usize, Complex64)>> {
    let n = ft.grid().n();
    let cut = QUADRATURE_PRUNE * ft.max_abs();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| (k, ft.get(j, k)))
                .filter(|(_, v)| v.norm() > cut)
                .collect()
        })
        .collect()
}

/// `(A psi)(x_i) = (2 pi hbar)^{-1} dx dp sum_{j,k} a~(x_j, p_k) T(x_j, p_k) psi (x_i)`,
/// with `psi` extended by zero outside the window.
fn quadrature_config(ft: &PhaseField, psi: &ConfigField) -> ConfigField {
    let g = *psi.grid();
    let n = g.n();
    let half = n / 2;
    let (e, eh) = twist_tables(&g);
    let rows = pruned_rows(ft);
    let pref = g.cell() / (std::f64::consts::TAU * g.hbar());
    let mut out = psi.zeros_like();
    par::for_each_chunk(out.values_mut(), 1, |i, slot| {
        let mut acc = ZERO;
        for (j, row) in rows.iter().enumerate() {
            let src = i + half;
            if src < j || src - j >= n {
                continue;
            }
            let mut weight = ZERO;
            for &(k, v) in row {
                weight += v * e[k * n + i] * eh[k * n + j];
            }
            acc += weight * psi.get(src - j);
        }
        slot[0] = acc * pref;
    });
    out
}

/// Phase-picture version of [`quadrature_config`]: grid translations shift
/// both indices, `T(x_j, p_k) Psi (x_i, p_l) = e^{...} Psi[i - j + N/2][l - k + N/2]`.
fn quadrature_phase(ft: &PhaseField, psi: &PhaseField) -> PhaseField {
    let g = *psi.grid();
    let n = g.n();
    let half = n / 2;
    let (e, eh) = twist_tables(&g);
    let rows = pruned_rows(ft);
    let pref = Complex64::new(g.cell() / (std::f64::consts::TAU * g.hbar()), 0.0);
    let src_vals = psi.values();
    let mut out = psi.zeros_like();
    par::for_each_chunk(out.values_mut(), n, |i, out_row| {
        for (j, row) in rows.iter().enumerate() {
            let src = i + half;
            if src < j || src - j >= n {
                continue;
            }
            let m = src - j;
            let psi_row = &src_vals[m * n..(m + 1) * n];
            for &(k, v) in row {
                let coef = v * e[k * n + i] * eh[k * n + j];
                // l - k + N/2 in [0, N)
                let lo = k.saturating_sub(half);
                let hi = (k + half).min(n);
                let offset = half as isize - k as isize;
                for l in lo..hi {
                    out_row[l] += coef * psi_row[(l as isize + offset) as usize];
                }
            }
        }
        for v in out_row.iter_mut() {
            *v *= pref;
        }
    });
    out
}

/// `X = x + i hbar d/dp`.
pub fn x_hat(psi: &PhaseField) -> PhaseField {
    let h = psi.grid().hbar();
    let mut out = psi.multiply_by_x(|x| Complex64::new(x, 0.0));
    out.axpy(I * h, &psi.derivative(Axis::P));
    out
}

/// `P = -i hbar d/dx`.
pub fn p_hat(psi: &PhaseField) -> PhaseField {
    psi.derivative(Axis::X).scaled(-I * psi.grid().hbar())
}

/// `H(x + i hbar d/dp, -i hbar d/dx)` for a polynomial symbol, Weyl ordered,
/// with derivatives applied spectrally.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfOperator {
    symbol: PolynomialSymbol,
}

impl TfOperator {
    pub fn symbol(&self) -> &PolynomialSymbol {
        &self.symbol
    }

    pub fn apply(&self, psi: &PhaseField) -> PhaseField {
        let s = &self.symbol;
        let mut out = psi.scaled(Complex64::new(s.constant, 0.0));
        let [lx, lp] = s.linear;
        let [[m11, m12], [_, m22]] = s.quadratic;
        let need_x = lx != 0.0 || m11 != 0.0 || m12 != 0.0;
        let need_p = lp != 0.0 || m22 != 0.0 || m12 != 0.0;
        let xp = need_x.then(|| x_hat(psi));
        let pp = need_p.then(|| p_hat(psi));
        let c = |v: f64| Complex64::new(v, 0.0);
        if let Some(xp) = &xp {
            if lx != 0.0 {
                out.axpy(c(lx), xp);
            }
            if m11 != 0.0 {
                out.axpy(c(0.5 * m11), &x_hat(xp));
            }
        }
        if let Some(pp) = &pp {
            if lp != 0.0 {
                out.axpy(c(lp), pp);
            }
            if m22 != 0.0 {
                out.axpy(c(0.5 * m22), &p_hat(pp));
            }
        }
        if m12 != 0.0 {
            let (xp, pp) = (xp.as_ref().unwrap(), pp.as_ref().unwrap());
            // 1/2 * 2 m12 * (XP + PX) / 2
            out.axpy(c(0.5 * m12), &x_hat(pp));
            out.axpy(c(0.5 * m12), &p_hat(xp));
        }
        out
    }
}

/// The phase-space differential operator of a polynomial symbol.
pub fn tf_operator(a: &WeylSymbol) -> Result<TfOperator> {
    match a {
        WeylSymbol::Polynomial(symbol) => Ok(TfOperator { symbol: *symbol }),
        WeylSymbol::Sampled(_) => Err(Error::UnsupportedSymbol(
            "differential realization needs a polynomial symbol",
        )),
    }
}
