//! Metaplectic operators on phase-space fields via the Mehlig-Wilkinson integral.
//!
//! For `det(S - I) != 0`,
//!
//! ```text
//! S Psi = c (2 pi hbar)^{-1} |det(S - I)|^{-1/2} ∫ exp(i uᵀQu / (2 hbar)) T(u) Psi du
//! ```
//!
//! with `Q = cayley_chirp(S)` and `c` a unit phase. Writing `w = z - u` the
//! integrand factorizes as
//!
//! ```text
//! A(z) exp(i (x alpha(w) + p beta(w)) / hbar) B(w) Psi(w)
//! ```
//!
//! so the grid sum is a product of two dense `N x W` exponential tables,
//! where `W` counts the non-negligible samples of `Psi`. `Psi` is extended by
//! zero outside the window, so `u` is not wrapped.
//!
//! The sum is only accurate when the phase of the integrand, as a function of
//! `w`, is resolved by the grid. A factor whose chirp is too steep for the
//! current state is refined at apply time into `S_f R(theta)^{-1}` and
//! `R(theta)`, using the composition law of the raw sums
//! `raw(S1) raw(S2) = exp(i pi sgn(Q1 + Q2) / 4) raw(S1 S2)`, so the applied
//! operator does not depend on how it was refined.
//!
//! The overall phase of the integral is not determined by `S` alone (the
//! operator is double-valued and the raw integral carries an `i^nu`); it is
//! fitted against a numerical evolution in [`calibrate_phase`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::evolve::{propagate, Hamiltonian, Method};
use crate::field::{Field, PhaseField};
use crate::grid::GridSpec;
use crate::symplectic::{
    cayley_chirp, flow_matrix, split_for_singular, QuadraticHamiltonian, SymplecticMatrix,
    SPLIT_ANGLES, SPLIT_DET_MIN,
};
use crate::{par, spectral, Error, Result};

/// Samples with `|Psi| <= PRUNE * max|Psi|` are skipped in the sum.
pub const PRUNE: f64 = 1e-15;
/// Smallest relative aliasing margin accepted before a factor is refined.
pub const RESOLVE_MARGIN: f64 = 0.05;
/// Cap on apply-time refinements per application.
pub const MAX_REFINE: usize = 8;
/// Tolerance on the distance of the fitted phase from a fourth root of unity.
pub const SNAP_TOL: f64 = 1e-2;
/// Relative residual allowed after phase alignment.
pub const CALIBRATION_TOL: f64 = 1e-2;
/// Time step of the reference evolution used for calibration.
pub const CALIBRATION_DT: f64 = 1e-3;
/// Smallest usable probe norm.
pub const PROBE_MIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Factor {
    pub s: SymplecticMatrix,
    pub q: DMatrix<f64>,
    pub phase: Complex64,
}

/// Outcome of a phase fit: `phase = i^nu exp(i delta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    pub nu: u8,
    pub delta: f64,
    /// `||phase * raw - reference|| / ||probe||`.
    pub residual: f64,
}

/// A metaplectic operator stored as chirp factors, applied right to left.
#[derive(Clone, Debug)]
pub struct MetaplecticOp {
    s: SymplecticMatrix,
    factors: Vec<Factor>,
    phase: Complex64,
    calibration: Option<Calibration>,
}

impl MetaplecticOp {
    pub fn matrix(&self) -> &SymplecticMatrix {
        &self.s
    }

    /// Factors in application order reversed: `S = S_0 S_1 ...`.
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Overall unit phase multiplying the raw factor product.
    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn calibration(&self) -> Option<Calibration> {
        self.calibration
    }

    pub fn is_calibrated(&self) -> bool {
        self.calibration.is_some()
    }

    /// The same factors with a caller-chosen overall phase.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        Self {
            phase: phase / phase.norm(),
            calibration: None,
            ..self.clone()
        }
    }

    /// Product of the factor matrices.
    pub fn factor_product(&self) -> Result<SymplecticMatrix> {
        let mut acc = SymplecticMatrix::identity(self.s.dim());
        for f in &self.factors {
            acc = acc.compose(&f.s)?;
        }
        Ok(acc)
    }
}

/// Factors `S`, splitting off a rotation when `S - I` is nearly singular.
pub fn build_metaplectic(s: &SymplecticMatrix) -> Result<MetaplecticOp> {
    s.as_planar()?;
    let one = Complex64::new(1.0, 0.0);
    let factors = if s.det_minus_identity().abs() > SPLIT_DET_MIN {
        vec![Factor { s: s.clone(), q: cayley_chirp(s)?, phase: one }]
    } else {
        let (s1, s2) = split_for_singular(s)?;
        let mut out = Vec::with_capacity(2);
        for si in [s1, s2] {
            let q = cayley_chirp(&si)?;
            out.push(Factor { s: si, q, phase: one });
        }
        out
    };
    let op = MetaplecticOp {
        s: s.clone(),
        factors,
        phase: one,
        calibration: None,
    };
    debug_assert!(op.factor_product()?.distance(s) <= 1e-10);
    Ok(op)
}

/// An operator for `S` from an explicit factorization `S = S_0 S_1 ...`.
///
/// Different factorizations of the same `S` agree up to a global unit phase.
pub fn with_factors(s: &SymplecticMatrix, parts: &[SymplecticMatrix]) -> Result<MetaplecticOp> {
    s.as_planar()?;
    let one = Complex64::new(1.0, 0.0);
    let mut factors = Vec::with_capacity(parts.len());
    for si in parts {
        let det = si.det_minus_identity();
        if det.abs() <= SPLIT_DET_MIN {
            return Err(Error::SingularCayley { det });
        }
        factors.push(Factor { s: si.clone(), q: cayley_chirp(si)?, phase: one });
    }
    let op = MetaplecticOp { s: s.clone(), factors, phase: one, calibration: None };
    let gap = op.factor_product()?.distance(s);
    if gap > 1e-10 {
        return Err(Error::FactorMismatch { gap });
    }
    Ok(op)
}

/// One Mehlig-Wilkinson sum for `S` with `|det(S - I)| > 1e-6`.
pub fn mw_apply_regular(s: &SymplecticMatrix, psi: &PhaseField, phase: Complex64) -> Result<PhaseField> {
    let det = s.det_minus_identity();
    if det.abs() <= SPLIT_DET_MIN {
        return Err(Error::SingularCayley { det });
    }
    let q = cayley_chirp(s)?;
    Ok(chirp_sum(&q, det, psi, phase))
}

fn chirp_sum(q: &DMatrix<f64>, det: f64, psi: &PhaseField, phase: Complex64) -> PhaseField {
    let g = *psi.grid();
    let n = g.n();
    let h = g.hbar();
    let (q11, q12, q21, q22) = (q[(0, 0)], q[(0, 1)], q[(1, 0)], q[(1, 1)]);
    let quad = |x: f64, p: f64| 0.5 * (q11 * x * x + (q12 + q21) * x * p + q22 * p * p);

    let cut = PRUNE * psi.max_abs();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut weight = Vec::new();
    for (idx, v) in psi.values().iter().enumerate() {
        if v.norm() <= cut || *v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (xw, pw) = (g.x(idx / n), g.p(idx % n));
        alpha.push(-q11 * xw - (q12 + 0.5) * pw);
        beta.push((0.5 - q21) * xw - q22 * pw);
        weight.push(v * Complex64::from_polar(1.0, (quad(xw, pw) - 0.5 * pw * xw) / h));
    }
    let w = weight.len();
    let mut out = PhaseField::zeros(g);
    if w == 0 {
        return out;
    }

    let mut ep = vec![Complex64::new(0.0, 0.0); n * w];
    par::for_each_chunk(&mut ep, w, |k, row| {
        let p = g.p(k);
        for (v, b) in row.iter_mut().zip(&beta) {
            *v = Complex64::from_polar(1.0, p * b / h);
        }
    });

    let pref = phase * (TAU * h).recip() * det.abs().powf(-0.5) * g.cell();
    par::for_each_chunk_init(
        out.values_mut(),
        n,
        || vec![Complex64::new(0.0, 0.0); w],
        |tmp, i, row| {
            let x = g.x(i);
            for ((t, a), c) in tmp.iter_mut().zip(&alpha).zip(&weight) {
                *t = Complex64::from_polar(1.0, x * a / h) * c;
            }
            for (k, slot) in row.iter_mut().enumerate() {
                let e = &ep[k * w..(k + 1) * w];
                let s: Complex64 = e.iter().zip(tmp.iter()).map(|(a, b)| a * b).sum();
                let p = g.p(k);
                *slot = s * pref * Complex64::from_polar(1.0, (quad(x, p) + 0.5 * p * x) / h);
            }
        },
    );
    out
}

/// Where a state lives: a box holding most of its mass and the half-width of
/// its spectrum along each axis, in the units of the conjugate variable.
#[derive(Clone, Copy, Debug)]
struct Spread {
    x: [f64; 2],
    p: [f64; 2],
    band_x: f64,
    band_p: f64,
}

const SPREAD_SIGMAS: f64 = 3.0;

impl Spread {
    fn of(psi: &PhaseField) -> Option<Self> {
        let g = *psi.grid();
        let n = g.n();
        let h = g.hbar();
        let vals = psi.values();
        let total: f64 = vals.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 || !total.is_finite() {
            return None;
        }
        let moments = |f: &dyn Fn(usize) -> f64, weights: &[f64]| {
            let w: f64 = weights.iter().sum();
            let mean = weights.iter().enumerate().map(|(i, a)| a * f(i)).sum::<f64>() / w;
            let var = weights.iter().enumerate().map(|(i, a)| a * (f(i) - mean).powi(2)).sum::<f64>() / w;
            (mean, var.sqrt())
        };
        let interval = |(m, s): (f64, f64)| [m - SPREAD_SIGMAS * s, m + SPREAD_SIGMAS * s];
        let band = |(m, s): (f64, f64)| m.abs() + SPREAD_SIGMAS * s;

        let mut wx = vec![0.0; n];
        let mut wp = vec![0.0; n];
        for (idx, v) in vals.iter().enumerate() {
            wx[idx / n] += v.norm_sqr();
            wp[idx % n] += v.norm_sqr();
        }
        let x = interval(moments(&|j| g.x(j), &wx));
        let p = interval(moments(&|k| g.p(k), &wp));

        let plans = spectral::plans(n);
        let mut scratch = plans.scratch();
        let mut sx = vec![0.0; n];
        let mut sp = vec![0.0; n];
        let mut buf = spectral::transpose(vals, n);
        for row in buf.chunks_mut(n) {
            plans.forward.process_with_scratch(row, &mut scratch);
            for (m, v) in row.iter().enumerate() {
                sx[m] += v.norm_sqr();
            }
        }
        buf.copy_from_slice(vals);
        for row in buf.chunks_mut(n) {
            plans.forward.process_with_scratch(row, &mut scratch);
            for (m, v) in row.iter().enumerate() {
                sp[m] += v.norm_sqr();
            }
        }
        Some(Self {
            x,
            p,
            band_x: band(moments(&|m| h * g.kx(m), &sx)),
            band_p: band(moments(&|m| h * g.kp(m), &sp)),
        })
    }

    /// Conservative spread of the state after the linear map `s`.
    fn mapped(&self, s: &SymplecticMatrix) -> Self {
        let m = s.matrix();
        let mut x = [f64::INFINITY, f64::NEG_INFINITY];
        let mut p = x;
        for a in self.x {
            for b in self.p {
                let (u, v) = (m[(0, 0)] * a + m[(0, 1)] * b, m[(1, 0)] * a + m[(1, 1)] * b);
                x = [x[0].min(u), x[1].max(u)];
                p = [p[0].min(v), p[1].max(v)];
            }
        }
        let band = self.band_x.max(self.band_p);
        Self { x, p, band_x: band, band_p: band }
    }
}

/// `1 - (largest phase frequency of the summand) / (alias frequency)`, the
/// worse of the two axes. Negative means the sum aliases.
fn resolve_margin(q: &DMatrix<f64>, g: &GridSpec, sp: &Spread) -> f64 {
    let (q11, q12, q21, q22) = (q[(0, 0)], q[(0, 1)], q[(1, 0)], q[(1, 1)]);
    let zx = [g.x(0), g.x(g.n() - 1)];
    let zp = [g.p(0), g.p(g.n() - 1)];
    let (mut gx, mut gp) = (0.0f64, 0.0f64);
    for x in zx {
        for p in zp {
            for xw in sp.x {
                for pw in sp.p {
                    let (dx, dp) = (x - xw, p - pw);
                    gx = gx.max((-q11 * dx - (q12 - 0.5) * dp).abs());
                    gp = gp.max((-q21 * dx - q22 * dp - 0.5 * (x + xw)).abs());
                }
            }
        }
    }
    // Alias frequencies along x_w and p_w, times hbar: 2 pi hbar / dx = Lp, 2 pi hbar / dp = Lx.
    let mx = 1.0 - (gx + sp.band_x) / g.lp();
    let mp = 1.0 - (gp + sp.band_p) / g.lx();
    mx.min(mp)
}

/// `e^{-i pi sgn(Q1 + Q2) / 4}`, so that `raw(S1) raw(S2)` times it is `raw(S1 S2)`.
fn composition_phase(q1: &DMatrix<f64>, q2: &DMatrix<f64>) -> Complex64 {
    let sum = q1 + q2;
    let sgn: f64 = sum
        .symmetric_eigenvalues()
        .iter()
        .map(|e| if *e > 0.0 { 1.0 } else if *e < 0.0 { -1.0 } else { 0.0 })
        .sum();
    Complex64::from_polar(1.0, -FRAC_PI_4 * sgn)
}

/// Splits `s` as `(s R^{-1}) R` with the rotation chosen to leave both sums
/// best resolved for a state with spread `sp`.
fn refine(s: &SymplecticMatrix, g: &GridSpec, sp: &Spread) -> Result<(Factor, Factor, f64)> {
    let mut best: Option<(f64, Factor, Factor)> = None;
    for k in 0..SPLIT_ANGLES {
        let theta = TAU * (k as f64 + 0.5) / SPLIT_ANGLES as f64;
        let r = SymplecticMatrix::rotation(1, theta);
        let s1 = s.compose(&r.inverse())?;
        if s1.det_minus_identity().abs() <= SPLIT_DET_MIN || r.det_minus_identity().abs() <= SPLIT_DET_MIN {
            continue;
        }
        let (q1, q2) = (cayley_chirp(&s1)?, cayley_chirp(&r)?);
        let score = resolve_margin(&q2, g, sp).min(resolve_margin(&q1, g, &sp.mapped(&r)));
        if best.as_ref().is_none_or(|(b, _, _)| score > *b) {
            let phase = composition_phase(&q1, &q2);
            best = Some((score, Factor { s: s1, q: q1, phase }, Factor { s: r, q: q2, phase: Complex64::new(1.0, 0.0) }));
        }
    }
    let (score, outer, inner) = best.ok_or(Error::SplitFailed { best: 0.0 })?;
    Ok((outer, inner, score))
}

/// Applies the factors right to left, then the overall phase.
///
/// Factors whose chirp the grid cannot resolve for the current state are
/// refined first; the composition phase keeps the result independent of the
/// refinement.
pub fn metaplectic_apply(op: &MetaplecticOp, psi: &PhaseField) -> Result<PhaseField> {
    let g = *psi.grid();
    let mut pending: Vec<Factor> = op.factors.clone();
    let mut cur = psi.clone();
    let mut refinements = 0;
    while let Some(f) = pending.pop() {
        let Some(sp) = Spread::of(&cur) else {
            break;
        };
        let margin = resolve_margin(&f.q, &g, &sp);
        if margin < RESOLVE_MARGIN && refinements < MAX_REFINE {
            let (outer, inner, score) = refine(&f.s, &g, &sp)?;
            log::debug!("refining factor: margin {margin:.3} -> {score:.3}");
            refinements += 1;
            pending.push(Factor { phase: outer.phase * f.phase, ..outer });
            pending.push(inner);
            continue;
        }
        if margin < RESOLVE_MARGIN {
            log::warn!("metaplectic factor under-resolved on this grid (margin {margin:.3})");
        }
        cur = chirp_sum(&f.q, f.s.det_minus_identity(), &cur, f.phase);
    }
    cur.scale(op.phase);
    Ok(cur)
}

/// Fits the overall phase of `op` against a numerical evolution of `probe`
/// under `h` for time `t`.
///
/// The fitted phase is reported as `i^nu exp(i delta)`; `delta` stays in the
/// operator because it is the smooth quadrature phase error, not part of the
/// discrete label.
pub fn calibrate_phase(
    op: &MetaplecticOp,
    h: &QuadraticHamiltonian,
    t: f64,
    probe: &PhaseField,
) -> Result<MetaplecticOp> {
    let norm = probe.l2_norm();
    if norm < PROBE_MIN {
        return Err(Error::ProbeTooSmall { norm });
    }
    let flow = flow_matrix(h, t)?;
    let gap = flow.distance(&op.s);
    if gap > 1e-8 {
        return Err(Error::CalibrationFailed(format!(
            "operator matrix differs from the flow by {gap:.3e}"
        )));
    }
    let method = if h.is_separable() { Method::SplitStep } else { Method::Rk4 };
    let steps = (t.abs() / CALIBRATION_DT).ceil().max(1.0);
    let reference = propagate(&Hamiltonian::Quadratic(h.clone()), method, t, t / steps, probe)?;
    let raw = metaplectic_apply(&op.with_phase(Complex64::new(1.0, 0.0)), probe)?;

    let c = raw.inner(&reference)? / raw.inner(&raw)?.re;
    if !c.is_finite() || c.norm() == 0.0 {
        return Err(Error::CalibrationFailed("raw operator annihilated the probe".into()));
    }
    let phase = c / c.norm();
    let arg = phase.arg();
    let quarter = (arg / FRAC_PI_2).round();
    let delta = arg - quarter * FRAC_PI_2;
    let nu = (quarter as i64).rem_euclid(4) as u8;
    let residual = raw.scaled(phase).distance(&reference) / norm;
    log::debug!("calibration t={t}: nu={nu} delta={delta:.3e} residual={residual:.3e}");
    if delta.abs() > SNAP_TOL {
        return Err(Error::CalibrationFailed(format!(
            "phase {arg:.6} is {delta:.3e} away from a fourth root of unity"
        )));
    }
    if residual > CALIBRATION_TOL {
        return Err(Error::CalibrationFailed(format!(
            "residual {residual:.3e} after phase alignment"
        )));
    }
    Ok(MetaplecticOp {
        phase,
        calibration: Some(Calibration { nu, delta, residual }),
        ..op.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::coherent_phase;

    fn grid() -> GridSpec {
        GridSpec::new(64, 16.0, 1.0).unwrap()
    }

    #[test]
    fn build_examples() {
        let shear = SymplecticMatrix::planar(1.0, 1.0, 0.0, 1.0).unwrap();
        let op = build_metaplectic(&shear).unwrap();
        assert_eq!(op.factors().len(), 2);
        assert!(op.factor_product().unwrap().distance(&shear) <= 1e-10);
        assert_eq!(build_metaplectic(&SymplecticMatrix::rotation(1, 1.0)).unwrap().factors().len(), 1);
        let id = build_metaplectic(&SymplecticMatrix::identity(1)).unwrap();
        assert_eq!(id.factors().len(), 2);
        assert!(!id.is_calibrated());
        for f in id.factors() {
            assert!(f.s.det_minus_identity().abs() > 1e-6);
        }
    }

    #[test]
    fn identity_is_excluded_from_regular_sum() {
        let psi = coherent_phase(grid(), 0.0, 0.0).unwrap();
        assert!(matches!(
            mw_apply_regular(&SymplecticMatrix::identity(1), &psi, Complex64::new(1.0, 0.0)),
            Err(Error::SingularCayley { .. })
        ));
    }

    #[test]
    fn reflection_matches_direct_quadrature() {
        // S = -I has Q = 0, so the sum is a plain average of translates.
        let g = GridSpec::new(32, 12.0, 1.0).unwrap();
        let psi = coherent_phase(g, 1.0, -0.5).unwrap();
        let s = SymplecticMatrix::planar(-1.0, 0.0, 0.0, -1.0).unwrap();
        let fast = mw_apply_regular(&s, &psi, Complex64::new(1.0, 0.0)).unwrap();
        let n = g.n();
        let pts = [(3, 5), (16, 16), (12, 20), (20, 11), (8, 8), (17, 14), (14, 18), (25, 2), (19, 19), (10, 22)];
        // Direct: (2 pi hbar)^-1 |det|^-1/2 sum_u T(u) Psi(z), with T(u) written out
        // and Psi extended by zero.
        for &(j, k) in &pts {
            let (x, p) = (g.x(j), g.p(k));
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    let (xu, pu) = (x - g.x(a), p - g.p(b));
                    let ph = Complex64::from_polar(1.0, pu * x - 0.5 * pu * xu);
                    acc += ph * psi.get(a, b);
                }
            }
            let direct = acc * g.cell() / (TAU * 2.0);
            assert!((direct - fast.get(j, k)).norm() < 1e-12, "{j},{k}");
        }
    }

    #[test]
    fn reflection_modulus_and_square() {
        let g = grid();
        let psi = coherent_phase(g, 1.5, 0.5).unwrap();
        let s = SymplecticMatrix::planar(-1.0, 0.0, 0.0, -1.0).unwrap();
        let op = build_metaplectic(&s).unwrap();
        let out = metaplectic_apply(&op, &psi).unwrap();
        let n = g.n();
        let mut err = 0.0f64;
        for j in 1..n {
            for k in 1..n {
                err = err.max((out.get(j, k).norm() - psi.get(n - j, n - k).norm()).abs());
            }
        }
        assert!(err <= 1e-4, "{err}");
        let twice = metaplectic_apply(&op, &out).unwrap();
        let c = psi.inner(&twice).unwrap();
        assert!((c.norm() - 1.0).abs() < 1e-3);
        assert!(twice.distance(&psi.scaled(c)) <= 1e-3);
    }

    #[test]
    fn rotation_is_unitary_and_invertible() {
        let g = GridSpec::new(128, 20.0, 1.0).unwrap();
        let psi = coherent_phase(g, 1.0, -1.0).unwrap();
        let fwd = build_metaplectic(&SymplecticMatrix::rotation(1, 1.0)).unwrap();
        let out = metaplectic_apply(&fwd, &psi).unwrap();
        assert!((out.l2_norm() - 1.0).abs() <= 1e-3, "{}", out.l2_norm());
        let back = build_metaplectic(&SymplecticMatrix::rotation(1, -1.0)).unwrap();
        let again = metaplectic_apply(&back, &out).unwrap();
        let c = psi.inner(&again).unwrap();
        assert!(again.distance(&psi.scaled(c / c.norm())) <= 1e-3);
    }

    #[test]
    fn identity_factored_op() {
        let psi = coherent_phase(grid(), -1.0, 0.5).unwrap();
        let op = build_metaplectic(&SymplecticMatrix::identity(1)).unwrap();
        let out = metaplectic_apply(&op, &psi).unwrap();
        let c = psi.inner(&out).unwrap();
        assert!(out.distance(&psi.scaled(c / c.norm())) <= 1e-3);
    }

    #[test]
    fn calibration_matches_split_step() {
        let g = GridSpec::new(64, 16.0, 1.0).unwrap();
        let h = QuadraticHamiltonian::harmonic();
        let t = FRAC_PI_2;
        let op = build_metaplectic(&flow_matrix(&h, t).unwrap()).unwrap();
        let a = calibrate_phase(&op, &h, t, &coherent_phase(g, 0.5, 0.0).unwrap()).unwrap();
        let b = calibrate_phase(&op, &h, t, &coherent_phase(g, -1.0, 1.0).unwrap()).unwrap();
        assert!((a.phase() - b.phase()).norm() <= 1e-3);
        assert!(a.calibration().unwrap().residual <= 1e-3);
    }

    #[test]
    fn calibration_rejects_tiny_probe() {
        let h = QuadraticHamiltonian::harmonic();
        let op = build_metaplectic(&flow_matrix(&h, 1.0).unwrap()).unwrap();
        assert!(matches!(
            calibrate_phase(&op, &h, 1.0, &PhaseField::zeros(grid())),
            Err(Error::ProbeTooSmall { .. })
        ));
    }
}
