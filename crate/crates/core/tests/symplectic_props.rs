use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use tfps_core::symplectic::{
    cayley_chirp, flow_matrix, is_symplectic, split_for_singular, standard_j, symplectic_form,
};
use tfps_core::{PhasePoint, QuadraticHamiltonian, SymplecticMatrix};

fn hamiltonian() -> impl Strategy<Value = QuadraticHamiltonian> {
    (-2.0..2.0f64, -1.0..1.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| QuadraticHamiltonian::planar(a, b, c))
}

fn shear(a: f64, b: f64) -> SymplecticMatrix {
    SymplecticMatrix::planar(1.0, a, 0.0, 1.0)
        .unwrap()
        .compose(&SymplecticMatrix::planar(1.0, 0.0, b, 1.0).unwrap())
        .unwrap()
}

fn symplectic() -> impl Strategy<Value = SymplecticMatrix> {
    (-1.5..1.5f64, -1.5..1.5f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(a, b, th)| shear(a, b).compose(&SymplecticMatrix::rotation(1, th)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flows_are_symplectic(h in hamiltonian(), t in -3.0..3.0f64) {
        let s = flow_matrix(&h, t).unwrap();
        prop_assert!(s.defect() <= 1e-10);
        prop_assert!(is_symplectic(s.matrix(), 1e-10).unwrap());
    }

    #[test]
    fn flows_form_a_group(h in hamiltonian(), t in -2.0..2.0f64, u in -2.0..2.0f64) {
        let st = flow_matrix(&h, t).unwrap();
        let su = flow_matrix(&h, u).unwrap();
        let stu = flow_matrix(&h, t + u).unwrap();
        prop_assert!(st.compose(&su).unwrap().distance(&stu) <= 1e-9);
        prop_assert!(st.compose(&st.inverse()).unwrap().distance(&SymplecticMatrix::identity(1)) <= 1e-10);
    }

    #[test]
    fn symplectic_maps_preserve_sigma(s in symplectic(), a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64) {
        let z = PhasePoint::planar(a, b);
        let w = PhasePoint::planar(c, d);
        let lhs = symplectic_form(&s.apply(&z).unwrap(), &s.apply(&w).unwrap()).unwrap();
        prop_assert!((lhs - symplectic_form(&z, &w).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn chirp_matches_its_definition(s in symplectic(), u1 in -3.0..3.0f64, u2 in -3.0..3.0f64) {
        prop_assume!(s.det_minus_identity().abs() > 1e-3);
        let q = cayley_chirp(&s).unwrap();
        prop_assert!((&q - q.transpose()).amax() <= 1e-9 * (1.0 + q.amax()));
        let u = DVector::from_vec(vec![u1, u2]);
        let a = (s.matrix() - DMatrix::identity(2, 2)).try_inverse().unwrap();
        let z0 = &a * &u;
        let sz0 = s.matrix() * &z0;
        let sigma = symplectic_form(&PhasePoint::from_vector(&sz0).unwrap(), &PhasePoint::from_vector(&z0).unwrap()).unwrap();
        let lhs = 0.5 * (u.transpose() * &q * &u)[(0, 0)];
        prop_assert!((lhs + 0.5 * sigma).abs() <= 1e-8 * (1.0 + lhs.abs()));
    }

    #[test]
    fn splits_reproduce_the_matrix(s in symplectic()) {
        let (s1, s2) = split_for_singular(&s).unwrap();
        prop_assert!(s1.compose(&s2).unwrap().distance(&s) <= 1e-10);
        prop_assert!(s1.det_minus_identity().abs() > 1e-6);
        prop_assert!(s2.det_minus_identity().abs() > 1e-6);
    }
}

#[test]
fn higher_dimensional_flow() {
    // Two uncoupled oscillators plus a coupling term, n = 2.
    let m = DMatrix::from_row_slice(4, 4, &[
        1.0, 0.2, 0.0, 0.0,
        0.2, 2.0, 0.0, 0.1,
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.1, 0.0, 0.5,
    ]);
    let h = QuadraticHamiltonian::new(m).unwrap();
    let s = flow_matrix(&h, 1.7).unwrap();
    assert!(s.defect() <= 1e-10);
    let j = standard_j(2);
    assert!((s.matrix().transpose() * &j * s.matrix() - &j).amax() <= 1e-10);
    let z = PhasePoint::new(vec![0.3, -1.0], vec![0.5, 0.2]).unwrap();
    let e0 = h.evaluate(&z).unwrap();
    let e1 = h.evaluate(&s.apply(&z).unwrap()).unwrap();
    assert!((e0 - e1).abs() <= 1e-10);
}
