//! Solvers for `i hbar dPsi/dt = H(X, P) Psi` on phase space, with
//! `X = x + i hbar d/dp` and `P = -i hbar d/dx`.
//!
//! `P` is diagonal after a transform along `x` and `X` after a transform
//! along `p` (where it multiplies by `x - hbar zeta`), so every separable
//! Hamiltonian `T(P) + V(X)` splits into two exactly unitary diagonal factors.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::field::{Axis, Field, PhaseField};
use crate::grid::GridSpec;
use crate::heisenberg::HeisenbergWeyl;
use crate::metaplectic::{build_metaplectic, calibrate_phase, metaplectic_apply, MetaplecticOp};
use crate::states::coherent_phase;
use crate::symplectic::{flow_matrix, LinearHamiltonian, PhasePoint, QuadraticHamiltonian};
use crate::weyl::{tf_operator, TfOperator, WeylSymbol};
use crate::{spectral, Error, Result};

/// A real function of one variable, used for separable kinetic and potential terms.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Hamiltonian {
    /// `H(z) = sigma(z, z0) = x0 p - p0 x`.
    Linear(LinearHamiltonian),
    Quadratic(QuadraticHamiltonian),
    /// `T(p) + V(x)`.
    Separable { kinetic: ScalarFn, potential: ScalarFn },
}

impl fmt::Debug for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear(h) => f.debug_tuple("Linear").field(h).finish(),
            Self::Quadratic(h) => f.debug_tuple("Quadratic").field(h).finish(),
            Self::Separable { .. } => f.write_str("Separable { .. }"),
        }
    }
}

impl Hamiltonian {
    pub fn separable(
        kinetic: impl Fn(f64) -> f64 + Send + Sync + 'static,
        potential: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::Separable {
            kinetic: Arc::new(kinetic),
            potential: Arc::new(potential),
        }
    }

    /// `-H`, for time-reversal checks.
    pub fn negated(&self) -> Self {
        match self {
            Self::Linear(h) => Self::Linear(LinearHamiltonian::new(h.z0().neg())),
            Self::Quadratic(h) => Self::Quadratic(h.negated()),
            Self::Separable { kinetic, potential } => {
                let (t, v) = (kinetic.clone(), potential.clone());
                Self::separable(move |p| -t(p), move |x| -v(x))
            }
        }
    }

    /// `(T, V)` when the Hamiltonian has no `xp` cross term.
    pub fn split_parts(&self) -> Option<(ScalarFn, ScalarFn)> {
        match self {
            Self::Linear(h) => {
                let (x0, p0) = h.z0().as_planar().ok()?;
                Some((Arc::new(move |p| x0 * p), Arc::new(move |x| -p0 * x)))
            }
            Self::Quadratic(h) if h.is_separable() => {
                let [m11, _, m22] = h.as_planar().ok()?;
                Some((Arc::new(move |p| 0.5 * m22 * p * p), Arc::new(move |x| 0.5 * m11 * x * x)))
            }
            Self::Quadratic(_) => None,
            Self::Separable { kinetic, potential } => Some((kinetic.clone(), potential.clone())),
        }
    }

    fn symbol(&self) -> Result<Option<WeylSymbol>> {
        Ok(match self {
            Self::Linear(h) => Some(WeylSymbol::from_linear(h)?),
            Self::Quadratic(h) => Some(WeylSymbol::from_quadratic(h)?),
            Self::Separable { .. } => None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    SplitStep,
    Rk4,
}

#[derive(Clone, Debug)]
pub struct EvolutionPlan {
    pub hamiltonian: Hamiltonian,
    pub t_final: f64,
    pub dt: f64,
    pub method: Method,
    pub record_every: usize,
}

impl EvolutionPlan {
    pub fn new(
        hamiltonian: Hamiltonian,
        t_final: f64,
        dt: f64,
        method: Method,
        record_every: usize,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidPlan(format!("dt must be positive, got {dt}")));
        }
        if !(t_final.is_finite() && dt <= t_final) {
            return Err(Error::InvalidPlan(format!("need dt <= t_final, got dt={dt} t_final={t_final}")));
        }
        if record_every == 0 {
            return Err(Error::InvalidPlan("record_every must be at least 1".into()));
        }
        match (&hamiltonian, method) {
            (Hamiltonian::Separable { .. }, Method::Exact) => {
                return Err(Error::InvalidPlan("exact evolution needs a linear or quadratic Hamiltonian".into()))
            }
            (h, Method::SplitStep) if h.split_parts().is_none() => {
                return Err(Error::InvalidPlan("split-step cannot handle an xp cross term".into()))
            }
            _ => {}
        }
        Ok(Self { hamiltonian, t_final, dt, method, record_every })
    }

    /// Number of steps; `dt` is shrunk slightly so they tile `[0, t_final]`.
    pub fn steps(&self) -> usize {
        ((self.t_final / self.dt) - 1e-9).ceil().max(1.0) as usize
    }
}

/// `Psi(t) = T(t z0) Psi0`.
pub fn evolve_linear_exact(z0: &PhasePoint, t: f64, psi0: &PhaseField) -> Result<PhaseField> {
    let (x0, p0) = z0.as_planar()?;
    Ok(HeisenbergWeyl::planar(t * x0, t * p0).apply_phase(psi0))
}

/// The generator `-p0 x - i hbar (x0 d/dx + p0 d/dp)` of [`evolve_linear_exact`].
pub fn generator_linear(z0: &PhasePoint) -> Result<impl Fn(&PhaseField) -> PhaseField> {
    let (x0, p0) = z0.as_planar()?;
    Ok(move |psi: &PhaseField| {
        let mi_h = Complex64::new(0.0, -psi.grid().hbar());
        let mut out = psi.multiply_by_x(|x| Complex64::new(-p0 * x, 0.0));
        if x0 != 0.0 {
            out.axpy(mi_h * x0, &psi.derivative(Axis::X));
        }
        if p0 != 0.0 {
            out.axpy(mi_h * p0, &psi.derivative(Axis::P));
        }
        out
    })
}

/// The metaplectic propagator `S_t` for `h`, with its phase calibrated
/// against split-step (or RK4) evolution of a Gaussian probe on `grid`.
pub fn quadratic_propagator(h: &QuadraticHamiltonian, t: f64, grid: GridSpec) -> Result<MetaplecticOp> {
    let op = build_metaplectic(&flow_matrix(h, t)?)?;
    calibrate_phase(&op, h, t, &coherent_phase(grid, 0.0, 0.0)?)
}

/// `Psi(t) = S_t Psi0` for a quadratic Hamiltonian.
pub fn evolve_quadratic_exact(h: &QuadraticHamiltonian, t: f64, psi0: &PhaseField) -> Result<PhaseField> {
    h.as_planar()?;
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    metaplectic_apply(&quadratic_propagator(h, t, *psi0.grid())?, psi0)
}

/// Strang splitting `V/2, T, V/2` with precomputed diagonal factors.
struct SplitStep {
    n: usize,
    kinetic: Vec<Complex64>,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl SplitStep {
    fn new(grid: GridSpec, t: &ScalarFn, v: &ScalarFn, dt: f64) -> Self {
        let n = grid.n();
        let h = grid.hbar();
        let kinetic = (0..n)
            .map(|m| Complex64::from_polar(1.0, -dt * t(h * grid.kx(m)) / h))
            .collect();
        let mut half = Vec::with_capacity(n * n);
        let mut full = Vec::with_capacity(n * n);
        for j in 0..n {
            for m in 0..n {
                let e = v(grid.x(j) - h * grid.kp(m));
                half.push(Complex64::from_polar(1.0, -0.5 * dt * e / h));
                full.push(Complex64::from_polar(1.0, -dt * e / h));
            }
        }
        Self { n, kinetic, half, full }
    }

    fn potential(&self, psi: &mut PhaseField, table: &[Complex64]) {
        let n = self.n;
        spectral::transform_rows(psi.values_mut(), n, |j, m| table[j * n + m]);
    }

    fn kinetic(&self, psi: &mut PhaseField) {
        spectral::transform_cols(psi.values_mut(), self.n, |_, m| self.kinetic[m]);
    }
}

/// `H Psi` for the right-hand side of RK4.
enum Generator {
    Symbol(TfOperator),
    Separable { t: Vec<f64>, v: Vec<f64> },
}

impl Generator {
    fn new(h: &Hamiltonian, grid: GridSpec) -> Result<Self> {
        if let Some(sym) = h.symbol()? {
            return Ok(Self::Symbol(tf_operator(&sym)?));
        }
        let (t, v) = h.split_parts().expect("separable Hamiltonian");
        let n = grid.n();
        let hb = grid.hbar();
        let tt = (0..n).map(|m| t(hb * grid.kx(m))).collect();
        let mut vv = Vec::with_capacity(n * n);
        for j in 0..n {
            for m in 0..n {
                vv.push(v(grid.x(j) - hb * grid.kp(m)));
            }
        }
        Ok(Self::Separable { t: tt, v: vv })
    }

    fn apply(&self, psi: &PhaseField) -> PhaseField {
        match self {
            Self::Symbol(op) => op.apply(psi),
            Self::Separable { t, v } => {
                let n = psi.grid().n();
                let mut a = psi.clone();
                spectral::transform_cols(a.values_mut(), n, |_, m| Complex64::new(t[m], 0.0));
                let mut b = psi.clone();
                spectral::transform_rows(b.values_mut(), n, |j, m| Complex64::new(v[j * n + m], 0.0));
                a.axpy(Complex64::new(1.0, 0.0), &b);
                a
            }
        }
    }

    /// `-(i/hbar) H Psi`.
    fn rhs(&self, psi: &PhaseField) -> PhaseField {
        let c = Complex64::new(0.0, -1.0 / psi.grid().hbar());
        self.apply(psi).scaled(c)
    }
}

fn rk4_step(gen: &Generator, psi: &PhaseField, dt: f64) -> PhaseField {
    let k1 = gen.rhs(psi);
    let mut y = psi.clone();
    y.axpy(Complex64::new(0.5 * dt, 0.0), &k1);
    let k2 = gen.rhs(&y);
    let mut y = psi.clone();
    y.axpy(Complex64::new(0.5 * dt, 0.0), &k2);
    let k3 = gen.rhs(&y);
    let mut y = psi.clone();
    y.axpy(Complex64::new(dt, 0.0), &k3);
    let k4 = gen.rhs(&y);
    let mut out = psi.clone();
    out.axpy(Complex64::new(dt / 6.0, 0.0), &k1);
    out.axpy(Complex64::new(dt / 3.0, 0.0), &k2);
    out.axpy(Complex64::new(dt / 3.0, 0.0), &k3);
    out.axpy(Complex64::new(dt / 6.0, 0.0), &k4);
    out
}

fn exact_at(h: &Hamiltonian, t: f64, psi0: &PhaseField) -> Result<PhaseField> {
    match h {
        Hamiltonian::Linear(l) => evolve_linear_exact(l.z0(), t, psi0),
        Hamiltonian::Quadratic(q) => evolve_quadratic_exact(q, t, psi0),
        Hamiltonian::Separable { .. } => Err(Error::InvalidPlan("no exact propagator".into())),
    }
}

/// Runs `plan` from `psi0`, returning snapshots at `t = 0`, every
/// `record_every` steps, and at `t_final`.
pub fn evolve_numeric(plan: &EvolutionPlan, psi0: &PhaseField) -> Result<Vec<(f64, PhaseField)>> {
    let steps = plan.steps();
    let dt = plan.t_final / steps as f64;
    let record = |s: usize| s % plan.record_every == 0 || s == steps;
    let mut history = vec![(0.0, psi0.clone())];
    match plan.method {
        Method::Exact => {
            for s in (1..=steps).filter(|&s| record(s)) {
                let t = s as f64 * dt;
                history.push((t, exact_at(&plan.hamiltonian, t, psi0)?));
            }
        }
        Method::SplitStep => {
            let (t, v) = plan
                .hamiltonian
                .split_parts()
                .ok_or_else(|| Error::InvalidPlan("split-step cannot handle an xp cross term".into()))?;
            let stepper = SplitStep::new(*psi0.grid(), &t, &v, dt);
            let mut psi = psi0.clone();
            // A trailing half potential step is merged with the next leading one
            // unless a snapshot is taken in between.
            let mut open = false;
            for s in 1..=steps {
                if !open {
                    stepper.potential(&mut psi, &stepper.half);
                }
                stepper.kinetic(&mut psi);
                if record(s) {
                    stepper.potential(&mut psi, &stepper.half);
                    open = false;
                    history.push((s as f64 * dt, psi.clone()));
                } else {
                    stepper.potential(&mut psi, &stepper.full);
                    open = true;
                }
            }
        }
        Method::Rk4 => {
            let gen = Generator::new(&plan.hamiltonian, *psi0.grid())?;
            let mut psi = psi0.clone();
            for s in 1..=steps {
                psi = rk4_step(&gen, &psi, dt);
                if record(s) {
                    history.push((s as f64 * dt, psi.clone()));
                }
            }
        }
    }
    Ok(history)
}

/// Final state of a numerical run without intermediate snapshots.
pub fn propagate(h: &Hamiltonian, method: Method, t: f64, dt: f64, psi0: &PhaseField) -> Result<PhaseField> {
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let plan = EvolutionPlan::new(h.clone(), t.abs(), dt.abs().min(t.abs()), method, usize::MAX)?;
    let plan = if t < 0.0 {
        EvolutionPlan { hamiltonian: h.negated(), ..plan }
    } else {
        plan
    };
    let mut history = evolve_numeric(&plan, psi0)?;
    Ok(history.pop().expect("history holds the final state").1)
}

/// `||Psi(t)|| / ||Psi(0)|| - 1` for every snapshot.
pub fn norm_drift(history: &[(f64, PhaseField)]) -> Result<Vec<(f64, f64)>> {
    let (_, first) = history.first().ok_or(Error::EmptyHistory)?;
    let n0 = first.l2_norm();
    Ok(history.iter().map(|(t, psi)| (*t, psi.l2_norm() / n0 - 1.0)).collect())
}
