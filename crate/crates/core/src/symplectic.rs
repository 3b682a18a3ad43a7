//! Linear symplectic algebra on `R^{2n}` in the `(x, p)` block convention.
//!
//! The symplectic form is `sigma(z, z') = z'^T J z` with `J = [[0, I], [-I, 0]]`,
//! i.e. `sigma(z, z') = x'.p - p'.x`. Every other module takes the form from
//! [`symplectic_form`] so the sign convention lives in exactly one place.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Tolerance used by [`SymplecticMatrix::new`].
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Tolerance used by [`QuadraticHamiltonian::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest `|det(S - I)|` accepted by [`cayley_chirp`].
pub const CAYLEY_DET_MIN: f64 = 1e-9;
/// Both factors returned by [`split_for_singular`] satisfy `|det(S_i - I)| > SPLIT_DET_MIN`.
pub const SPLIT_DET_MIN: f64 = 1e-6;
/// Number of rotation angles scanned by [`split_for_singular`].
pub const SPLIT_ANGLES: usize = 64;

/// A point `z = (x, p)` of phase space `R^{2n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    x: Vec<f64>,
    p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if x.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: p.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self { x, p })
    }

    /// One degree of freedom.
    pub fn planar(x: f64, p: f64) -> Self {
        Self {
            x: vec![x],
            p: vec![p],
        }
    }

    pub fn origin(n: usize) -> Self {
        Self {
            x: vec![0.0; n.max(1)],
            p: vec![0.0; n.max(1)],
        }
    }

    /// Builds a point from the stacked vector `(x_1..x_n, p_1..p_n)`.
    pub fn from_vector(v: &DVector<f64>) -> Result<Self> {
        if v.len() % 2 != 0 || v.is_empty() {
            return Err(Error::OddDimension {
                rows: v.len(),
                cols: 1,
            });
        }
        let n = v.len() / 2;
        Ok(Self {
            x: v.rows(0, n).iter().copied().collect(),
            p: v.rows(n, n).iter().copied().collect(),
        })
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_iterator(2 * self.dim(), self.x.iter().chain(&self.p).copied())
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// `(x, p)` for a one-degree-of-freedom point.
    pub fn as_planar(&self) -> Result<(f64, f64)> {
        if self.dim() != 1 {
            return Err(Error::RequiresPlanar(self.dim()));
        }
        Ok((self.x[0], self.p[0]))
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            x: self.x.iter().map(|v| v * t).collect(),
            p: self.p.iter().map(|v| v * t).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            p: self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect(),
        })
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `sigma(z, z') = (z')^T J z = x'.p - p'.x`.
pub fn symplectic_form(z: &PhasePoint, zp: &PhasePoint) -> Result<f64> {
    check_dims(z.dim(), zp.dim())?;
    let xp: f64 = zp.x.iter().zip(&z.p).map(|(a, b)| a * b).sum();
    let px: f64 = zp.p.iter().zip(&z.x).map(|(a, b)| a * b).sum();
    Ok(xp - px)
}

/// The standard symplectic matrix `J = [[0, I], [-I, 0]]` of size `2n`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

fn even_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
        return Err(Error::OddDimension {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows() / 2)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn symplectic_defect(m: &DMatrix<f64>, n: usize) -> f64 {
    let j = standard_j(n);
    max_abs(&(m.transpose() * &j * m - j))
}

/// `true` iff `|S^T J S - J|_max <= tol`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = even_square(m)?;
    Ok(symplectic_defect(m, n) <= tol)
}

/// Phase-plane rotation `[[cos t I, sin t I], [-sin t I, cos t I]]`; the
/// harmonic-oscillator flow at time `theta`.
pub fn rotation_matrix(n: usize, theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        r[(i, i)] = c;
        r[(n + i, n + i)] = c;
        r[(i, n + i)] = s;
        r[(n + i, i)] = -s;
    }
    r
}

/// A validated element of `Sp(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    m: DMatrix<f64>,
    n: usize,
}

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = even_square(&m)?;
        let defect = symplectic_defect(&m, n);
        if defect > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(Self { m, n })
    }

    /// Row-major `2x2` constructor for one degree of freedom.
    pub fn planar(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(2, 2, &[a, b, c, d]))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(2 * n, 2 * n),
            n,
        }
    }

    pub fn rotation(n: usize, theta: f64) -> Self {
        Self {
            m: rotation_matrix(n, theta),
            n,
        }
    }

    /// Products and inverses of validated matrices are symplectic up to
    /// roundoff; they skip the check.
    fn from_trusted(m: DMatrix<f64>, n: usize) -> Self {
        Self { m, n }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `S^{-1} = -J S^T J`.
    pub fn inverse(&self) -> Self {
        let j = standard_j(self.n);
        Self::from_trusted(-(&j * self.m.transpose() * &j), self.n)
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dims(self.n, other.n)?;
        Ok(Self::from_trusted(&self.m * &other.m, self.n))
    }

    pub fn apply(&self, z: &PhasePoint) -> Result<PhasePoint> {
        check_dims(self.n, z.dim())?;
        PhasePoint::from_vector(&(&self.m * z.to_vector()))
    }

    pub fn det_minus_identity(&self) -> f64 {
        (&self.m - DMatrix::identity(2 * self.n, 2 * self.n)).determinant()
    }

    pub fn defect(&self) -> f64 {
        symplectic_defect(&self.m, self.n)
    }

    /// Largest entrywise difference to another matrix.
    pub fn distance(&self, other: &Self) -> f64 {
        max_abs(&(&self.m - &other.m))
    }

    /// Entries of a `2x2` matrix as `[[a, b], [c, d]]`.
    pub fn as_planar(&self) -> Result<[[f64; 2]; 2]> {
        if self.n != 1 {
            return Err(Error::RequiresPlanar(self.n));
        }
        Ok([[self.m[(0, 0)], self.m[(0, 1)]], [self.m[(1, 0)], self.m[(1, 1)]]])
    }
}

/// `H(z) = 1/2 z^T M z` with `M` symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticHamiltonian {
    m: DMatrix<f64>,
    n: usize,
}

impl QuadraticHamiltonian {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = even_square(&m)?;
        let defect = max_abs(&(&m - m.transpose()));
        if defect > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self { m, n })
    }

    /// `H = 1/2 (m11 x^2 + 2 m12 x p + m22 p^2)`.
    pub fn planar(m11: f64, m12: f64, m22: f64) -> Self {
        Self {
            m: DMatrix::from_row_slice(2, 2, &[m11, m12, m12, m22]),
            n: 1,
        }
    }

    /// `H = 1/2 (x^2 + p^2)`.
    pub fn harmonic() -> Self {
        Self::planar(1.0, 0.0, 1.0)
    }

    /// `H = p^2 / 2`.
    pub fn free_particle() -> Self {
        Self::planar(0.0, 0.0, 1.0)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn negated(&self) -> Self {
        Self {
            m: -&self.m,
            n: self.n,
        }
    }

    pub fn evaluate(&self, z: &PhasePoint) -> Result<f64> {
        check_dims(self.n, z.dim())?;
        let v = z.to_vector();
        Ok(0.5 * v.dot(&(&self.m * &v)))
    }

    /// No `x p` cross terms: `H = T(p) + V(x)`.
    pub fn is_separable(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|k| self.m[(i, n + k)] == 0.0))
    }

    /// `[m11, m12, m22]` for one degree of freedom.
    pub fn as_planar(&self) -> Result<[f64; 3]> {
        if self.n != 1 {
            return Err(Error::RequiresPlanar(self.n));
        }
        Ok([self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 1)]])
    }
}

/// `H_{z0}(z) = sigma(z, z0)`; its flow is the translation `z -> z + t z0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearHamiltonian {
    z0: PhasePoint,
}

impl LinearHamiltonian {
    pub fn new(z0: PhasePoint) -> Self {
        Self { z0 }
    }

    pub fn z0(&self) -> &PhasePoint {
        &self.z0
    }

    pub fn evaluate(&self, z: &PhasePoint) -> Result<f64> {
        symplectic_form(z, &self.z0)
    }
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = a.nrows();
    let norm = a.column_iter().map(|c| c.lp_norm(1)).fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = a / 2f64.powi(squarings);
    let mut sum = DMatrix::identity(dim, dim);
    let mut term = DMatrix::identity(dim, dim);
    // ||b|| <= 1/2, so 30 terms are far below double precision.
    for k in 1..=30 {
        term = &term * &b / k as f64;
        sum += &term;
        if max_abs(&term) < 1e-18 * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Flow `S_t = exp(t J M)` of the quadratic Hamiltonian.
pub fn flow_matrix(h: &QuadraticHamiltonian, t: f64) -> Result<SymplecticMatrix> {
    let generator = standard_j(h.n) * &h.m * t;
    SymplecticMatrix::new(expm(&generator))
}

/// The symmetric matrix `Q` with
/// `1/2 u^T Q u = -1/2 sigma(S (S-I)^{-1} u, (S-I)^{-1} u)`,
/// i.e. the phase of `T(S z0) T(-z0)` written in `u = (S - I) z0`.
pub fn cayley_chirp(s: &SymplecticMatrix) -> Result<DMatrix<f64>> {
    let n = s.n;
    let dim = 2 * n;
    let shifted = &s.m - DMatrix::identity(dim, dim);
    let det = shifted.determinant();
    if det.abs() <= CAYLEY_DET_MIN {
        return Err(Error::SingularCayley { det });
    }
    let a = shifted
        .try_inverse()
        .ok_or(Error::SingularCayley { det })?;
    let j = standard_j(n);
    // sigma(S A u, A u) = u^T A^T J S A u; J S - S^T J is the symmetric part times two.
    let k = &j * &s.m - s.m.transpose() * &j;
    Ok(a.transpose() * k * a * -0.5)
}

/// Writes `S = S1 S2` with `S2` a phase-plane rotation and both
/// `|det(S_i - I)|` bounded away from zero.
///
/// The angle is chosen from `theta_k = 2 pi (k + 1/2) / 64` by maximizing
/// `min(|det(S R(theta)^{-1} - I)|, |det(R(theta) - I)|)`; the first maximum wins.
pub fn split_for_singular(s: &SymplecticMatrix) -> Result<(SymplecticMatrix, SymplecticMatrix)> {
    let n = s.n;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..SPLIT_ANGLES {
        let theta = std::f64::consts::TAU * (k as f64 + 0.5) / SPLIT_ANGLES as f64;
        let r = SymplecticMatrix::rotation(n, theta);
        let s1 = s.compose(&r.inverse())?;
        let score = s1.det_minus_identity().abs().min(r.det_minus_identity().abs());
        if best.is_none_or(|(b, _)| score > b) {
            best = Some((score, theta));
        }
    }
    let (score, theta) = best.expect("angle grid is non-empty");
    if score <= SPLIT_DET_MIN {
        return Err(Error::SplitFailed { best: score });
    }
    let r = SymplecticMatrix::rotation(n, theta);
    Ok((s.compose(&r.inverse())?, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mat(rows: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, rows, v)
    }

    #[test]
    fn symplectic_form_examples() {
        let a = PhasePoint::planar(1.0, 0.0);
        let b = PhasePoint::planar(0.0, 1.0);
        assert_eq!(symplectic_form(&a, &b).unwrap(), -1.0);
        assert_eq!(symplectic_form(&a, &a).unwrap(), 0.0);
        let c = PhasePoint::new(vec![1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            symplectic_form(&a, &c),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn symplectic_predicate() {
        assert!(is_symplectic(&DMatrix::identity(2, 2), 1e-12).unwrap());
        assert!(is_symplectic(&standard_j(1), 1e-12).unwrap());
        assert!(is_symplectic(&standard_j(3), 1e-12).unwrap());
        assert!(!is_symplectic(&mat(2, &[2.0, 0.0, 0.0, 2.0]), 1e-12).unwrap());
        let odd = DMatrix::<f64>::identity(3, 3);
        assert!(matches!(
            is_symplectic(&odd, 1e-12),
            Err(Error::OddDimension { .. })
        ));
        assert!(SymplecticMatrix::planar(2.0, 0.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn harmonic_flow_is_rotation() {
        let h = QuadraticHamiltonian::harmonic();
        for &t in &[0.0, 0.3, 1.0, 2.5, -4.0] {
            let s = flow_matrix(&h, t).unwrap();
            let (sn, cs) = f64::sin_cos(t);
            let expect = mat(2, &[cs, sn, -sn, cs]);
            assert!(max_abs(&(s.matrix() - expect)) < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn free_flow_is_shear() {
        let s = flow_matrix(&QuadraticHamiltonian::free_particle(), 1.7).unwrap();
        assert!(max_abs(&(s.matrix() - mat(2, &[1.0, 1.7, 0.0, 1.0]))) < 1e-14);
    }

    #[test]
    fn zero_time_flow_is_identity() {
        let h = QuadraticHamiltonian::planar(0.3, -1.2, 2.0);
        let s = flow_matrix(&h, 0.0).unwrap();
        assert_eq!(s.matrix(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn nonsymmetric_hamiltonian_rejected() {
        let m = mat(2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(
            QuadraticHamiltonian::new(m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    fn chirp_direct(s: &SymplecticMatrix, u: &PhasePoint) -> f64 {
        let shifted = s.matrix() - DMatrix::identity(2, 2);
        let z0 = PhasePoint::from_vector(&(shifted.try_inverse().unwrap() * u.to_vector())).unwrap();
        let sz0 = s.apply(&z0).unwrap();
        -0.5 * symplectic_form(&sz0, &z0).unwrap()
    }

    #[test]
    fn chirp_of_minus_identity_vanishes() {
        let s = SymplecticMatrix::planar(-1.0, 0.0, 0.0, -1.0).unwrap();
        let q = cayley_chirp(&s).unwrap();
        assert!(max_abs(&q) < 1e-15);
    }

    #[test]
    fn chirp_matches_direct_formula_for_quarter_turn() {
        let s = SymplecticMatrix::rotation(1, std::f64::consts::FRAC_PI_2);
        let q = cayley_chirp(&s).unwrap();
        let mut state = 0x2545f4914f6cdd1d_u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state as f64 / u64::MAX as f64) * 8.0 - 4.0
        };
        for _ in 0..100 {
            let u = PhasePoint::planar(next(), next());
            let v = u.to_vector();
            let quad = 0.5 * v.dot(&(&q * &v));
            assert_abs_diff_eq!(quad, chirp_direct(&s, &u), epsilon = 1e-12);
        }
        // Rotation chirp is 1/2 cot(theta / 2) I.
        assert_abs_diff_eq!(q[(0, 0)], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(q[(0, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn chirp_rejects_identity() {
        let err = cayley_chirp(&SymplecticMatrix::identity(1)).unwrap_err();
        assert!(err.to_string().contains("split_for_singular"));
    }

    #[test]
    fn split_shear() {
        let s = SymplecticMatrix::planar(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(s.det_minus_identity(), 0.0);
        let (s1, s2) = split_for_singular(&s).unwrap();
        assert!(s1.compose(&s2).unwrap().distance(&s) < 1e-12);
        assert!(s1.det_minus_identity().abs() > 1e-6);
        assert!(s2.det_minus_identity().abs() > 1e-6);
        // S2 is a rotation.
        let [[a, b], [c, d]] = s2.as_planar().unwrap();
        assert_abs_diff_eq!(a, d, epsilon = 1e-15);
        assert_abs_diff_eq!(b, -c, epsilon = 1e-15);
        assert_abs_diff_eq!(a * a + b * b, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn split_minus_identity_and_regular() {
        for s in [
            SymplecticMatrix::planar(-1.0, 0.0, 0.0, -1.0).unwrap(),
            SymplecticMatrix::rotation(1, 1.0),
            SymplecticMatrix::identity(1),
            SymplecticMatrix::identity(2),
        ] {
            let (s1, s2) = split_for_singular(&s).unwrap();
            assert!(s1.compose(&s2).unwrap().distance(&s) < 1e-12);
            assert!(s1.det_minus_identity().abs() > 1e-6);
            assert!(s2.det_minus_identity().abs() > 1e-6);
        }
    }

    #[test]
    fn inverse_is_exact_for_symplectic() {
        let s = flow_matrix(&QuadraticHamiltonian::planar(0.7, 0.2, 1.3), 0.9).unwrap();
        let prod = s.compose(&s.inverse()).unwrap();
        assert!(prod.distance(&SymplecticMatrix::identity(1)) < 1e-14);
    }

    #[test]
    fn two_degree_of_freedom_flow() {
        let m = DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 + i as f64 } else { 0.1 });
        let h = QuadraticHamiltonian::new(m).unwrap();
        let s = flow_matrix(&h, 1.3).unwrap();
        assert!(s.defect() < 1e-12);
        let z = PhasePoint::new(vec![0.2, -0.1], vec![0.4, 1.0]).unwrap();
        // Energy is conserved by the flow.
        let e0 = h.evaluate(&z).unwrap();
        let e1 = h.evaluate(&s.apply(&z).unwrap()).unwrap();
        assert_abs_diff_eq!(e0, e1, epsilon = 1e-12);
    }
}
