//! Independent references for the operator exponentials and the squeezed
//! vacuum: a Hermitian eigendecomposition of the complex embedding and the
//! textbook coefficient formula.

use nalgebra::DMatrix;
use num_complex::Complex64;

use quatcs::observables::{expectation, photon_stats};
use quatcs::qop::ladder_a;
use quatcs::quat::star_exp;
use quatcs::slicekit::test_axes;
use quatcs::states::{
    displacement, displacement_generator, pure_squeezed, squeeze, squeeze_generator, squeezed_sd,
};
use quatcs::{EmbeddedOperator, FockOperator, Quaternion};

/// `e^G` for anti-Hermitian `G` via `G = -iH`, `H = V Λ V†`.
fn expm_by_eigen(g: &FockOperator) -> FockOperator {
    let e = g.embed();
    let m = e.dim();
    let i = Complex64::new(0.0, 1.0);
    let h = DMatrix::from_row_slice(m, m, e.entries()).map(|z| z * i);
    let eig = h.symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l)));
    let u = v * phases * v.adjoint();
    let entries: Vec<Complex64> = (0..m * m).map(|k| u[(k / m, k % m)]).collect();
    EmbeddedOperator::from_entries(m, entries)
        .unembed()
        .unwrap()
}

#[test]
fn displacement_matches_eigen_oracle() {
    for q in [
        Quaternion::new(0.3, 0.4, 0.0, 0.0),
        Quaternion::new(-0.2, 0.5, -0.7, 0.3),
        Quaternion::new(1.1, 0.0, 0.9, -0.6),
    ] {
        let n = 40;
        let direct = displacement(q, n).unwrap();
        let oracle = expm_by_eigen(&displacement_generator(q, n));
        let dev = direct.max_abs_diff(&oracle);
        assert!(dev <= 1e-11, "q = {q}: {dev:e}");
    }
}

#[test]
fn squeeze_matches_eigen_oracle() {
    for p in [
        Quaternion::new(0.5, 0.0, 0.0, 0.0),
        Quaternion::new(0.1, -0.4, 0.3, 0.2),
        Quaternion::new(-0.6, 0.0, 0.0, 0.9),
    ] {
        let n = 40;
        let direct = squeeze(p, n).unwrap();
        let oracle = expm_by_eigen(&squeeze_generator(p, n));
        let dev = direct.max_abs_diff(&oracle);
        assert!(dev <= 1e-11, "p = {p}: {dev:e}");
    }
}

/// `c_{2m} = (e^{iθσ} tanh r)^m √(2m)!/(2^m m!)/√cosh r`.
fn squeezed_vacuum_closed(p: Quaternion, n: usize) -> Vec<Quaternion> {
    let r = p.norm();
    let u = if r > 0.0 {
        p.scale(1.0 / r)
    } else {
        Quaternion::ONE
    };
    let t = r.tanh();
    let mut out = vec![Quaternion::ZERO; n];
    let mut c = Quaternion::real(1.0 / r.cosh().sqrt());
    for m in 0..n.div_ceil(2) {
        if m > 0 {
            let k = 2.0 * m as f64;
            c = u * c.scale(t * ((k - 1.0) * k).sqrt() / k);
        }
        out[2 * m] = c;
    }
    out
}

#[test]
fn squeezed_vacuum_matches_closed_form_on_slices() {
    // The truncated exponential departs from the exact state near the top
    // levels, so only the leading 40 of 64 levels are compared.
    let n = 64;
    for axis in test_axes() {
        for (r, theta) in [(0.3, 0.0f64), (0.5, 1.1), (0.5, -2.4)] {
            let p = (Quaternion::real(theta.cos()) + axis.scale(theta.sin())).scale(r);
            let eta = pure_squeezed(p, n).unwrap();
            let closed = squeezed_vacuum_closed(p, n);
            for (k, c) in closed.iter().enumerate().take(40) {
                let dev = (eta.coeff(k) - *c).max_abs();
                assert!(dev <= 1e-10, "axis {axis}, p = {p}, level {k}: {dev:e}");
            }
        }
    }
}

#[test]
fn two_photon_first_moment_at_the_vacuum() {
    let n = 64;
    for axis in test_axes() {
        let p = (Quaternion::real(0.6f64.cos()) + axis.scale(0.6f64.sin())).scale(0.5);
        let q = Quaternion::real(0.4) + axis.scale(0.3);
        let eta = squeezed_sd(q, p, n).unwrap();
        let mean = expectation(&eta, &ladder_a(n)).unwrap();
        let u = p.scale(1.0 / p.norm());
        let expected = q.scale(0.5f64.cosh()) + u * q.conj().scale(0.5f64.sinh());
        assert!(
            (mean - expected).max_abs() <= 1e-9,
            "axis {axis}: {mean} vs {expected}"
        );
    }
}

#[test]
fn mandel_q_is_one_plus_twice_the_mean() {
    for r in [0.25, 0.5, 0.75] {
        let s = photon_stats(Quaternion::new(0.0, 0.0, r, 0.0), 64).unwrap();
        assert!((s.mandel_q().unwrap() - (1.0 + 2.0 * s.mean_n)).abs() <= 1e-6);
    }
}

#[test]
fn non_commutativity_witnesses() {
    let (i, j) = (Quaternion::I, Quaternion::J);
    assert!((i * j - j * i).max_abs() > 1.0);
    // Star exponential and the ordinary exponential of the product differ off a slice.
    let (p, q) = (
        Quaternion::new(0.2, 0.7, 0.0, 0.0),
        Quaternion::new(0.1, 0.0, 0.8, 0.0),
    );
    assert!((star_exp(p, q) - (p * q).exp()).max_abs() > 1e-2);
    // A(q·B) ≠ q·(AB) once A has non-real entries.
    let a = ladder_a(4).left_scale(j);
    let b = ladder_a(4).plus_scalar(Quaternion::ONE);
    let lhs = a.compose(&b.left_scale(i)).unwrap();
    let rhs = a.compose(&b).unwrap().left_scale(i);
    assert!(lhs.max_abs_diff(&rhs) > 1.0);
}
