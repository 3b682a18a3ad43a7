//! Invariant suites behind `tfps verify`.
//!
//! Every check is deterministic: sample points come from a golden-angle
//! spiral instead of a random generator.

use std::f64::consts::PI;

use clap::ValueEnum;
use num_complex::Complex64;
use tfps_core::field::symplectic_fourier;
use tfps_core::heisenberg::{hw_inverse, HeisenbergWeyl};
use tfps_core::metaplectic::{build_metaplectic, metaplectic_apply};
use tfps_core::states::{coherent_config, coherent_phase, gaussian_phase};
use tfps_core::symplectic::{flow_matrix, symplectic_form};
use tfps_core::wavepacket::{gaussian_window, wavepacket_adjoint, wavepacket_forward};
use tfps_core::weyl::{apply_weyl_phase, p_hat, tf_operator, x_hat, WeylSymbol};
use tfps_core::{
    ConfigField, Field, GridSpec, PhaseField, PhasePoint, QuadraticHamiltonian, Result, SymplecticMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    GroupLaw,
    Quantization,
    Covariance,
    Fourier,
    Wavepacket,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::GroupLaw,
                Suite::Quantization,
                Suite::Covariance,
                Suite::Fourier,
                Suite::Wavepacket,
            ],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::GroupLaw => "group-law",
            Suite::Quantization => "quantization",
            Suite::Covariance => "covariance",
            Suite::Fourier => "fourier",
            Suite::Wavepacket => "wavepacket",
            Suite::All => "all",
        }
    }
}

pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tol
    }
}

pub fn run(suite: Suite, grid: GridSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in suite.members() {
        let checks = match s {
            Suite::GroupLaw => group_law(grid)?,
            Suite::Quantization => quantization(grid)?,
            Suite::Covariance => covariance(grid)?,
            Suite::Fourier => fourier(grid),
            Suite::Wavepacket => wavepacket(grid)?,
            Suite::All => unreachable!(),
        };
        out.extend(checks.into_iter().map(|(name, error, tol)| Check {
            suite: s.name(),
            name,
            error,
            tol,
        }));
    }
    Ok(out)
}

pub fn print_table(checks: &[Check]) {
    println!("{:<13} {:<44} {:>11} {:>9}  status", "suite", "check", "error", "tol");
    for c in checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("{:<13} {:<44} {:>11.3e} {:>9.0e}  {status}", c.suite, c.name, c.error, c.tol);
    }
}

/// `count` points on a golden-angle spiral filling the disc of radius `r`.
fn spiral(count: usize, r: f64) -> Vec<PhasePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let rho = r * ((k as f64 + 0.5) / count as f64).sqrt();
            let th = golden * k as f64;
            PhasePoint::planar(rho * th.cos(), rho * th.sin())
        })
        .collect()
}

/// Translation radius keeping a pair of shifted Gaussians `7.5 sqrt(hbar)`
/// away from the window edge, where off-lattice momentum kicks stop being
/// exactly periodic.
fn pair_radius(g: &GridSpec) -> f64 {
    (0.5 * (0.5 * g.lx() - 7.5 * g.hbar().sqrt())).max(0.0)
}

fn plane_wave_gaussian(g: GridSpec) -> PhaseField {
    let h = g.hbar();
    let c = (PI * h).powf(-0.5);
    PhaseField::from_fn(g, move |x, p| {
        Complex64::from_polar(c * (-(x * x + p * p) / (2.0 * h)).exp(), 0.3 * x - 0.2 * p)
    })
}

type Row = (&'static str, f64, f64);

fn group_law(g: GridSpec) -> Result<Vec<Row>> {
    let h = g.hbar();
    let psi = plane_wave_gaussian(g);
    let phi = coherent_config(g, 0.0, 0.0, 1.0);
    let pts = spiral(20, pair_radius(&g));
    let (mut phase_err, mut config_err, mut comm_err, mut inv_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (k, z1) in pts.iter().enumerate() {
        let z2 = &pts[(7 * k + 3) % pts.len()];
        let (t1, t2) = (HeisenbergWeyl::new(z1)?, HeisenbergWeyl::new(z2)?);
        let (c, t12) = t1.compose(&t2, h);
        phase_err = phase_err.max(t1.apply_phase(&t2.apply_phase(&psi)).distance(&t12.apply_phase(&psi).scaled(c)));
        config_err =
            config_err.max(t1.apply_config(&t2.apply_config(&phi)).distance(&t12.apply_config(&phi).scaled(c)));
        let loop_ = t1.apply_phase(&t2.apply_phase(&t1.inverse().apply_phase(&t2.inverse().apply_phase(&psi))));
        let sigma = symplectic_form(z1, z2)?;
        comm_err = comm_err.max(loop_.distance(&psi.scaled(Complex64::from_polar(1.0, sigma / h))));
        inv_err = inv_err.max(hw_inverse(z1)?.apply_phase(&t1.apply_phase(&psi)).distance(&psi));
    }
    let ham = QuadraticHamiltonian::planar(1.0, 0.3, 0.5);
    let (mut flow_law, mut flow_defect) = (0.0f64, 0.0f64);
    for (t, s) in [(0.3, 0.5), (1.0, -0.4), (2.0, 1.7)] {
        let st = flow_matrix(&ham, t)?;
        let both = st.compose(&flow_matrix(&ham, s)?)?;
        flow_law = flow_law.max(both.distance(&flow_matrix(&ham, t + s)?));
        flow_defect = flow_defect.max(st.defect());
    }
    Ok(vec![
        ("phase-space Weyl relations (20 pairs)", phase_err, 1e-10),
        ("configuration Weyl relations (20 pairs)", config_err, 1e-10),
        ("commutator phase exp(i sigma / hbar)", comm_err, 1e-10),
        ("inverse round trip", inv_err, 1e-11),
        ("flow group law S_t S_s = S_(t+s)", flow_law, 1e-10),
        ("flow symplecticity", flow_defect, 1e-10),
    ])
}

fn quantization(g: GridSpec) -> Result<Vec<Row>> {
    let h = g.hbar();
    let states = [gaussian_phase(g, 0.0, 0.0), plane_wave_gaussian(g), coherent_phase(g, 0.5, -0.5)?];
    let symbols = [
        WeylSymbol::x(),
        WeylSymbol::p(),
        WeylSymbol::quadratic(2.0, 0.0, 0.0),
        WeylSymbol::quadratic(0.0, 0.0, 2.0),
        WeylSymbol::quadratic(0.0, 1.0, 0.0),
        WeylSymbol::quadratic(1.0, 0.0, 1.0),
    ];
    let (mut rules, mut pipeline, mut commutator, mut symmetric) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for psi in &states {
        let n = psi.l2_norm();
        let x = apply_weyl_phase(&WeylSymbol::x(), psi)?.distance(&x_hat(psi));
        let p = apply_weyl_phase(&WeylSymbol::p(), psi)?.distance(&p_hat(psi));
        rules = rules.max(x.max(p) / n);
        for a in &symbols {
            let op = tf_operator(a)?;
            pipeline = pipeline.max(apply_weyl_phase(a, psi)?.distance(&op.apply(psi)) / n);
            for phi in &states {
                let d = (psi.inner(&op.apply(phi))? - op.apply(psi).inner(phi)?).norm();
                symmetric = symmetric.max(d);
            }
        }
    }
    // x Psi must decay as fast as Psi for the spectral derivative, so use the
    // two states with exp(-|z|^2 / 2 hbar) tails.
    for psi in &states[..2] {
        let mut c = x_hat(&p_hat(psi));
        c.axpy(Complex64::new(-1.0, 0.0), &p_hat(&x_hat(psi)));
        commutator = commutator.max(c.distance(&psi.scaled(Complex64::new(0.0, h))) / psi.l2_norm());
    }
    Ok(vec![
        ("X = x + i hbar d/dp, P = -i hbar d/dx", rules, 1e-5),
        ("quadrature vs differential (6 symbols)", pipeline, 1e-5),
        ("[X, P] = i hbar", commutator, 1e-10),
        ("self-adjointness", symmetric, 1e-8),
    ])
}

fn covariance(g: GridSpec) -> Result<Vec<Row>> {
    let psi = coherent_phase(g, 0.0, 0.0)?;
    let n = psi.l2_norm();
    let pts = spiral(6, pair_radius(&g));
    let shear = SymplecticMatrix::planar(1.0, 1.0, 0.0, 1.0)?;
    let mut rows = Vec::new();
    let cases = [
        (
            SymplecticMatrix::rotation(1, 0.8),
            "S T(z0) = T(S z0) S, rotation",
            "(a o S^-1)^w S = S a^w, rotation",
        ),
        (shear, "S T(z0) = T(S z0) S, shear", "(a o S^-1)^w S = S a^w, shear"),
    ];
    for (s, conj_name, sym_name) in cases {
        let op = build_metaplectic(&s)?;
        let s_psi = metaplectic_apply(&op, &psi)?;
        let (mut conj, mut sym) = (0.0f64, 0.0f64);
        for (k, z0) in pts.iter().enumerate() {
            let moved = HeisenbergWeyl::new(z0)?.apply_phase(&psi);
            let lhs = metaplectic_apply(&op, &moved)?;
            let rhs = HeisenbergWeyl::new(&s.apply(z0)?)?.apply_phase(&s_psi);
            conj = conj.max(lhs.distance(&rhs) / n);
            let a = if k % 2 == 0 { WeylSymbol::x() } else { WeylSymbol::p() };
            let left = apply_weyl_phase(&a.pullback(&s.inverse())?, &lhs)?;
            let right = metaplectic_apply(&op, &apply_weyl_phase(&a, &moved)?)?;
            sym = sym.max(left.distance(&right) / n);
        }
        rows.push((conj_name, conj, 1e-3));
        rows.push((sym_name, sym, 1e-3));
    }
    let r = build_metaplectic(&SymplecticMatrix::planar(-1.0, 0.0, 0.0, -1.0)?)?;
    let twice = metaplectic_apply(&r, &metaplectic_apply(&r, &psi)?)?;
    let c = psi.inner(&twice)?;
    rows.push(("(-I)^2 proportional to identity", twice.distance(&psi.scaled(c / c.norm())) / n, 1e-3));
    Ok(rows)
}

fn bump(g: GridSpec, terms: &[[f64; 5]]) -> PhaseField {
    let terms = terms.to_vec();
    PhaseField::from_fn(g, move |x, p| {
        terms
            .iter()
            .map(|[xc, pc, w, kx, kp]| {
                let r2 = ((x - xc).powi(2) + (p - pc).powi(2)) / (w * w);
                Complex64::from_polar((-r2 / 2.0).exp(), kx * x + kp * p)
            })
            .sum()
    })
}

fn fourier(g: GridSpec) -> Vec<Row> {
    let a = bump(g, &[[0.5, -0.5, 1.0, 0.3, -0.2], [-1.0, 0.8, 0.8, 0.0, 0.5]]);
    let b = bump(g, &[[-0.3, 0.2, 1.1, -0.4, 0.1]]);
    let (fa, fb) = (symplectic_fourier(&a), symplectic_fourier(&b));
    let involution = symplectic_fourier(&fa).distance(&a) / a.l2_norm();
    let parseval = (fa.inner(&fb).unwrap_or_default() - a.inner(&b).unwrap_or_default()).norm()
        / (a.l2_norm() * b.l2_norm());
    let gauss = gaussian_phase(g, 0.0, 0.0);
    let fixed = symplectic_fourier(&gauss).distance(&gauss) / gauss.l2_norm();
    vec![
        ("involution F F = Id", involution, 1e-10),
        ("Parseval", parseval, 1e-10),
        ("Gaussian fixed point", fixed, 1e-8),
    ]
}

fn wavepacket(g: GridSpec) -> Result<Vec<Row>> {
    let w = gaussian_window(g);
    let states: Vec<ConfigField> = [(0.0, 0.0, 1.0), (1.0, -0.5, 0.8), (-0.5, 1.0, 1.3)]
        .iter()
        .map(|&(x, p, s)| coherent_config(g, x, p, s))
        .collect();
    let (mut iso, mut round, mut adj, mut inter) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let probe = plane_wave_gaussian(g);
    for psi in &states {
        let img = wavepacket_forward(psi, &w)?;
        iso = iso.max((img.l2_norm() - psi.l2_norm()).abs());
        round = round.max(wavepacket_adjoint(&img, &w)?.distance(psi));
        adj = adj.max((img.inner(&probe)? - psi.inner(&wavepacket_adjoint(&probe, &w)?)?).norm());
    }
    // Translations stay inside the periodic-safe disc, so only the centred
    // state is shifted.
    let psi = &states[0];
    let img = wavepacket_forward(psi, &w)?;
    for z0 in spiral(5, pair_radius(&g)) {
        let t = HeisenbergWeyl::new(&z0)?;
        let lhs = wavepacket_forward(&t.apply_config(psi), &w)?;
        inter = inter.max(lhs.distance(&t.apply_phase(&img)) / psi.l2_norm());
    }
    Ok(vec![
        ("isometry", iso, 1e-6),
        ("adjoint round trip", round, 1e-6),
        ("adjointness", adj, 1e-8),
        ("translation intertwining", inter, 1e-6),
    ])
}
