use proptest::prelude::*;

use quatcs::integrate::{resolution_of_identity, MeasureVariant, QuadratureGrid};
use quatcs::observables::ci_series;
use quatcs::qop::{ladder_a, ladder_adag};
use quatcs::quat::star_exp;
use quatcs::states::{displacement, fermion_exponential, fermion_generator};
use quatcs::{Execution, FockOperator, FockVector, Quaternion};

fn quat(radius: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-radius..radius).prop_map(Quaternion::from)
}

fn unit_axis() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            Quaternion::imaginary([v[0] / n, v[1] / n, v[2] / n])
        })
}

fn vector(n: usize) -> impl Strategy<Value = FockVector> {
    prop::collection::vec(quat(2.0), n).prop_map(FockVector::new)
}

fn operator(n: usize) -> impl Strategy<Value = FockOperator> {
    prop::collection::vec(quat(1.0), n * n).prop_map(move |e| FockOperator::from_entries(n, e))
}

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a - b).max_abs() <= tol
}

proptest! {
    #[test]
    fn norm_is_multiplicative(p in quat(3.0), q in quat(3.0)) {
        let lhs = (p * q).norm();
        prop_assert!((lhs - p.norm() * q.norm()).abs() <= 1e-12 * (1.0 + lhs));
    }

    #[test]
    fn product_is_associative_and_distributive(p in quat(2.0), q in quat(2.0), r in quat(2.0)) {
        prop_assert!(close((p * q) * r, p * (q * r), 1e-12));
        prop_assert!(close(p * (q + r), p * q + p * r, 1e-12));
        prop_assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-12));
    }

    #[test]
    fn matrix_image_is_a_star_homomorphism(p in quat(2.0), q in quat(2.0)) {
        let pq = (p * q).to_matrix();
        prop_assert!(pq.max_abs_diff(&(p.to_matrix() * q.to_matrix())) <= 1e-12);
        prop_assert!(p.conj().to_matrix().max_abs_diff(&p.to_matrix().adjoint()) <= 1e-15);
        let back = Quaternion::from_matrix(&p.to_matrix()).unwrap();
        prop_assert!(close(back, p, 1e-15));
    }

    #[test]
    fn polar_form_reconstructs(q in quat(3.0)) {
        let pf = q.polar();
        prop_assert!(close(pf.reconstruct(), q, 1e-12));
        prop_assert!(pf.reconstruct_matrix().max_abs_diff(&q.to_matrix()) <= 1e-12);
    }

    #[test]
    fn display_parse_round_trip(q in quat(10.0)) {
        let back: Quaternion = q.to_string().parse().unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn same_slice_commutes_and_star_exp_collapses(x in -1.0..1.0f64, y in -1.0..1.0f64,
                                                   u in -1.0..1.0f64, v in -1.0..1.0f64,
                                                   axis in unit_axis()) {
        let p = Quaternion::real(x) + axis.scale(y);
        let q = Quaternion::real(u) + axis.scale(v);
        prop_assert!(close(p * q, q * p, 1e-14));
        prop_assert!(close(star_exp(p, q), (p * q).exp(), 1e-12));
    }

    #[test]
    fn inner_product_axioms(phi in vector(6), psi in vector(6), chi in vector(6), q in quat(2.0)) {
        let ip = |a: &FockVector, b: &FockVector| a.inner(b).unwrap();
        prop_assert!(close(ip(&phi, &psi), ip(&psi, &phi).conj(), 1e-13));
        let nn = ip(&phi, &phi);
        prop_assert!(nn.q0 >= 0.0 && nn.vector_norm() <= 1e-13);
        prop_assert!(close(ip(&phi, &(&psi + &chi)), ip(&phi, &psi) + ip(&phi, &chi), 1e-12));
        prop_assert!(close(ip(&phi, &psi.right_scale(q)), ip(&phi, &psi) * q, 1e-12));
        prop_assert!(close(ip(&phi.right_scale(q), &psi), q.conj() * ip(&phi, &psi), 1e-12));
    }

    #[test]
    fn left_scaling_laws(phi in vector(6), psi in vector(6), p in quat(2.0), q in quat(2.0)) {
        let sum = phi.left_scale(p + q);
        prop_assert!(sum.max_abs_diff(&(&phi.left_scale(p) + &phi.left_scale(q))) <= 1e-13);
        prop_assert!(phi.left_scale(p).left_scale(q).max_abs_diff(&phi.left_scale(q * p)) <= 1e-12);
        let lhs = phi.left_scale(q.conj()).inner(&psi).unwrap();
        let rhs = phi.inner(&psi.left_scale(q)).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn operator_left_scaling(a in operator(4), b in operator(4), q in quat(1.0)) {
        let lhs = a.left_scale(q).compose(&b).unwrap();
        let rhs = a.compose(&b).unwrap().left_scale(q);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        // The adjoint turns left scaling into right scaling by the conjugate.
        prop_assert!(a.left_scale(q).adjoint().max_abs_diff(&a.adjoint().right_scale(q.conj())) <= 1e-15);
    }

    #[test]
    fn ladder_commutes_with_scalars(q in quat(3.0)) {
        let a = ladder_a(10);
        prop_assert_eq!(a.left_scale(q), a.right_scale(q));
        let ad = ladder_adag(10);
        prop_assert_eq!(ad.left_scale(q), ad.right_scale(q));
    }

    #[test]
    fn embedding_is_multiplicative(a in operator(3), b in operator(3)) {
        let lhs = a.compose(&b).unwrap().embed();
        prop_assert!(lhs.max_abs_diff(&a.embed().matmul(&b.embed())) <= 1e-12);
        prop_assert!(a.adjoint().embed().max_abs_diff(&a.embed().adjoint()) == 0.0);
        prop_assert_eq!(a.embed().unembed().unwrap(), a);
    }

    #[test]
    fn fermion_closed_form_matches_expm(q in quat(4.0)) {
        let closed = fermion_exponential(q);
        let direct = fermion_generator(q).expm().unwrap();
        prop_assert!(closed.max_abs_diff(&direct) <= 1e-13);
    }

    #[test]
    fn ci_is_imaginary_and_bounded(q in quat(1.7), axis in unit_axis()) {
        let ci = ci_series(q, axis).unwrap();
        prop_assert!(close(ci.value.conj(), -ci.value, 1e-15));
        prop_assert!(ci.value.norm() <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn displacement_is_unitary(q in quat(1.0)) {
        prop_assume!(q.norm() <= 2.0);
        prop_assert!(displacement(q, 64).unwrap().unitarity_defect() <= 1e-8);
    }
}

#[test]
fn resolution_is_self_adjoint_and_bit_stable() {
    let grid = QuadratureGrid::new(MeasureVariant::Plain, 12, 6, 5, 6).unwrap();
    let seq = resolution_of_identity(5, &grid, 12, Execution::Sequential).unwrap();
    let par = resolution_of_identity(5, &grid, 12, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert!(seq.operator.is_self_adjoint(1e-12));
}

#[test]
fn radial_refinement_converges_until_rounding() {
    // Doubling n_r gains well over 10x until the rounding floor is reached.
    let diag = |n_r| {
        let grid = QuadratureGrid::new(MeasureVariant::Plain, n_r, 16, 12, 16).unwrap();
        resolution_of_identity(7, &grid, 7, Execution::default())
            .unwrap()
            .diagonal_dev
    };
    let (d6, d12, d24) = (diag(6), diag(12), diag(24));
    assert!(d6 / d12 >= 10.0, "{d6:e} -> {d12:e}");
    assert!(d12 / d24 >= 10.0, "{d12:e} -> {d24:e}");
}
