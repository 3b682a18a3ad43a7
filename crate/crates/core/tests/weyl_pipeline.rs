mod common;

use tfps_core::states::{coherent_phase, gaussian_phase};
use tfps_core::weyl::{apply_weyl_phase, p_hat, tf_operator, x_hat, PolynomialSymbol, WeylSymbol};
use tfps_core::{Complex64, Field, PhaseField};

use common::{modulated_gaussian, reference_grid, rng};

fn states() -> Vec<PhaseField> {
    let g = reference_grid();
    let mut r = rng(11);
    vec![
        gaussian_phase(g, 0.0, 0.0),
        gaussian_phase(g, 1.0, -0.5),
        coherent_phase(g, -0.5, 1.0).unwrap(),
        modulated_gaussian(&mut r, g),
    ]
}

fn symbols() -> Vec<(&'static str, WeylSymbol)> {
    vec![
        ("X", WeylSymbol::x()),
        ("P", WeylSymbol::p()),
        ("X^2", WeylSymbol::quadratic(2.0, 0.0, 0.0)),
        ("P^2", WeylSymbol::quadratic(0.0, 0.0, 2.0)),
        ("XP", WeylSymbol::quadratic(0.0, 1.0, 0.0)),
        ("(X^2+P^2)/2", WeylSymbol::quadratic(1.0, 0.0, 1.0)),
    ]
}

#[test]
fn quantization_rules() {
    for psi in states() {
        let n = psi.l2_norm();
        let x = apply_weyl_phase(&WeylSymbol::x(), &psi).unwrap();
        let p = apply_weyl_phase(&WeylSymbol::p(), &psi).unwrap();
        assert!(x.distance(&x_hat(&psi)) <= 1e-5 * n);
        assert!(p.distance(&p_hat(&psi)) <= 1e-5 * n);
    }
}

#[test]
fn position_on_centered_gaussian_is_x_minus_ip() {
    let psi = gaussian_phase(reference_grid(), 0.0, 0.0);
    let want = PhaseField::from_fn(*psi.grid(), |x, p| {
        Complex64::new(x, -p) * Complex64::new((-(x * x + p * p) / 2.0).exp() / std::f64::consts::PI.sqrt(), 0.0)
    });
    let got = tf_operator(&WeylSymbol::x()).unwrap().apply(&psi);
    assert!(got.distance(&want) <= 1e-10);
}

#[test]
fn pipeline_equivalence() {
    for psi in states() {
        let n = psi.l2_norm();
        for (name, a) in symbols() {
            let quad = apply_weyl_phase(&a, &psi).unwrap();
            let diff = tf_operator(&a).unwrap().apply(&psi);
            let err = quad.distance(&diff) / n;
            assert!(err <= 1e-5, "{name}: {err:e}");
        }
    }
}

#[test]
fn canonical_commutator() {
    // Multiplication by x is not periodic, so the spectral derivative of x Psi
    // sees the boundary tail of x Psi; use states that decay like exp(-|z|^2/2).
    let g = reference_grid();
    let mut r = rng(5);
    for psi in [gaussian_phase(g, 0.0, 0.0), gaussian_phase(g, 1.0, -0.5), modulated_gaussian(&mut r, g)] {
        let mut c = x_hat(&p_hat(&psi));
        c.axpy(Complex64::new(-1.0, 0.0), &p_hat(&x_hat(&psi)));
        let h = psi.grid().hbar();
        let err = c.distance(&psi.scaled(Complex64::new(0.0, h)));
        assert!(err <= 1e-10 * psi.l2_norm(), "{err:e}");
    }
}

#[test]
fn real_symbols_are_symmetric() {
    let st = states();
    for (name, a) in symbols() {
        let op = tf_operator(&a).unwrap();
        for psi in &st {
            for phi in &st {
                let lhs = psi.inner(&op.apply(phi)).unwrap();
                let rhs = op.apply(psi).inner(phi).unwrap();
                assert!((lhs - rhs).norm() <= 1e-8, "{name}: {:e}", (lhs - rhs).norm());
            }
        }
    }
}

#[test]
fn quantization_is_linear() {
    let a = PolynomialSymbol {
        constant: 0.5,
        linear: [1.0, -2.0],
        quadratic: [[1.0, 0.3], [0.3, 2.0]],
    };
    let b = PolynomialSymbol {
        constant: -1.0,
        linear: [0.25, 0.5],
        quadratic: [[0.0, -1.0], [-1.0, 0.5]],
    };
    let mix = a.add(&b.scale(-3.0));
    for psi in states() {
        let apply = |s: &PolynomialSymbol| apply_weyl_phase(&WeylSymbol::Polynomial(*s), &psi).unwrap();
        let mut want = apply(&a);
        want.axpy(Complex64::new(-3.0, 0.0), &apply(&b));
        // The stencil step depends on the symbol, so linearity holds to its accuracy.
        assert!(apply(&mix).distance(&want) <= 1e-6 * want.l2_norm());
        let tf = |s: &PolynomialSymbol| tf_operator(&WeylSymbol::Polynomial(*s)).unwrap().apply(&psi);
        let mut want = tf(&a);
        want.axpy(Complex64::new(-3.0, 0.0), &tf(&b));
        assert!(tf(&mix).distance(&want) <= 1e-12 * want.l2_norm());
    }
}

#[test]
fn constant_symbol_is_scalar() {
    for psi in states() {
        let out = apply_weyl_phase(&WeylSymbol::constant(2.5), &psi).unwrap();
        assert!(out.distance(&psi.scaled(Complex64::new(2.5, 0.0))) <= 1e-12);
    }
}
