mod common;

use std::f64::consts::{FRAC_PI_2, TAU};

use tfps_core::evolve::{evolve_numeric, evolve_quadratic_exact, norm_drift, propagate};
use tfps_core::states::{coherent_phase, free_config_solution, harmonic_config_solution};
use tfps_core::wavepacket::{gaussian_window, wavepacket_forward};
use tfps_core::{ConfigField, EvolutionPlan, Field, Hamiltonian, Method, PhaseField, QuadraticHamiltonian};

use common::reference_grid;

const START: (f64, f64) = (1.0, -0.5);

fn image(psi: &ConfigField) -> PhaseField {
    wavepacket_forward(psi, &gaussian_window(*psi.grid())).unwrap()
}

fn harmonic() -> Hamiltonian {
    Hamiltonian::Quadratic(QuadraticHamiltonian::harmonic())
}

#[test]
fn harmonic_three_way_agreement() {
    let g = reference_grid();
    let (xc, pc) = START;
    let psi0 = coherent_phase(g, xc, pc).unwrap();
    let n0 = psi0.l2_norm();
    for t in [0.5, 1.0, FRAC_PI_2] {
        let split = &propagate(&harmonic(), Method::SplitStep, t, 1e-3, &psi0).unwrap();
        let exact = evolve_quadratic_exact(&QuadraticHamiltonian::harmonic(), t, &psi0).unwrap();
        let closed = image(&harmonic_config_solution(g, xc, pc, t).unwrap());
        for (name, d) in [
            ("exact/split", exact.distance(split)),
            ("exact/closed", exact.distance(&closed)),
            ("split/closed", split.distance(&closed)),
        ] {
            assert!(d <= 1e-3 * n0, "t = {t} {name}: {d:e}");
        }
    }
}

#[test]
fn split_step_is_second_order() {
    let g = reference_grid();
    let (xc, pc) = START;
    let psi0 = coherent_phase(g, xc, pc).unwrap();
    let t = 1.0;
    let closed = image(&harmonic_config_solution(g, xc, pc, t).unwrap());
    let err = |dt: f64| propagate(&harmonic(), Method::SplitStep, t, dt, &psi0).unwrap().distance(&closed);
    let (coarse, fine) = (err(0.1), err(0.05));
    let ratio = coarse / fine;
    assert!((ratio - 4.0).abs() <= 0.8, "ratio {ratio} ({coarse:e} / {fine:e})");
}

#[test]
fn free_particle_matches_spreading_packet() {
    // The free flow is a shear, so this exercises the two-factor split.
    let g = reference_grid();
    let (xc, pc) = (-1.0, 0.5);
    let psi0 = image(&free_config_solution(g, xc, pc, 0.0));
    for t in [0.5, 1.0] {
        let exact = evolve_quadratic_exact(&QuadraticHamiltonian::free_particle(), t, &psi0).unwrap();
        let closed = image(&free_config_solution(g, xc, pc, t));
        let d = exact.distance(&closed);
        assert!(d <= 1e-3, "t = {t}: {d:e}");
    }
}

#[test]
fn ground_state_modulus_is_stationary() {
    let g = reference_grid();
    let psi0 = coherent_phase(g, 0.0, 0.0).unwrap();
    for t in [0.7, 2.0] {
        let psi = evolve_quadratic_exact(&QuadraticHamiltonian::harmonic(), t, &psi0).unwrap();
        let err = psi
            .values()
            .iter()
            .zip(psi0.values())
            .map(|(a, b)| (a.norm() - b.norm()).powi(2))
            .sum::<f64>()
            * g.cell();
        assert!(err.sqrt() <= 1e-3, "t = {t}: {:e}", err.sqrt());
    }
}

#[test]
fn full_period_returns_up_to_phase() {
    let g = reference_grid();
    let psi0 = coherent_phase(g, 0.5, 1.0).unwrap();
    let psi = evolve_quadratic_exact(&QuadraticHamiltonian::harmonic(), TAU, &psi0).unwrap();
    let c = psi0.inner(&psi).unwrap();
    assert!((c.norm() - 1.0).abs() <= 1e-3);
    assert!(psi.distance(&psi0.scaled(c)) <= 1e-3);
    // The propagator is the image of exp(-i t H) and H has ground energy 1/2.
    assert!((c + 1.0).norm() <= 1e-3, "{c}");
}

#[test]
fn norm_drift_bounds() {
    let g = reference_grid();
    let psi0 = coherent_phase(g, START.0, START.1).unwrap();
    let plan = EvolutionPlan::new(harmonic(), 1.0, 1e-3, Method::SplitStep, 100).unwrap();
    let split = evolve_numeric(&plan, &psi0).unwrap();
    assert_eq!(split.len(), 11);
    for (_, d) in norm_drift(&split).unwrap() {
        assert!(d.abs() <= 1e-10, "{d:e}");
    }
    let plan = EvolutionPlan { method: Method::Rk4, ..plan };
    let rk4 = evolve_numeric(&plan, &psi0).unwrap();
    for (_, d) in norm_drift(&rk4).unwrap() {
        assert!(d.abs() <= 1e-6, "{d:e}");
    }
    let (_, a) = split.last().unwrap();
    let (_, b) = rk4.last().unwrap();
    assert!(a.distance(b) <= 1e-5);
}

#[test]
fn anharmonic_split_step_converges() {
    let g = reference_grid();
    let psi0 = coherent_phase(g, 0.5, 0.0).unwrap();
    let h = Hamiltonian::separable(|p| 0.5 * p * p, |x| 0.5 * x * x + 0.05 * x.powi(4));
    let run = |dt: f64| propagate(&h, Method::SplitStep, 0.8, dt, &psi0).unwrap();
    let (a, b, c) = (run(0.04), run(0.02), run(0.01));
    let ratio = a.distance(&b) / b.distance(&c);
    assert!((ratio - 4.0).abs() <= 0.8, "{ratio}");
    assert!((c.l2_norm() - psi0.l2_norm()).abs() <= 1e-10);
}
