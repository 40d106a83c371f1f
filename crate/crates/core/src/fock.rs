//! Truncated right quaternionic Fock space over the monomial basis
//! `Φ_n(q) = qⁿ/√n!`.
//!
//! Vectors are dense coefficient lists `φ = Σ Φ_n c_n`. Scalars act from the
//! right; the left action `q·φ = Σ Φ_n q c_n` is defined relative to the fixed
//! basis, which is why every vector carries a [`BasisTag`].

use std::ops::{Add, Sub};

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

pub const DEFAULT_TRUNCATION: usize = 64;

/// Identifies the Hilbert basis that left multiplication refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisTag {
    /// Bargmann monomials `Φ_n`, truncated at some order.
    Monomial,
    /// The fermionic pair `|0⟩, |1⟩`.
    TwoLevel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Quaternion>,
    basis: BasisTag,
}

impl FockVector {
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        FockVector {
            coeffs,
            basis: BasisTag::Monomial,
        }
    }

    pub fn with_basis(coeffs: Vec<Quaternion>, basis: BasisTag) -> Self {
        FockVector { coeffs, basis }
    }

    pub fn zeros(n: usize) -> Self {
        FockVector::new(vec![Quaternion::ZERO; n])
    }

    /// `Φ_k` in a space of truncation order `n`.
    pub fn basis_vector(n: usize, k: usize) -> Self {
        let mut v = FockVector::zeros(n);
        v.coeffs[k] = Quaternion::ONE;
        v
    }

    pub fn vacuum(n: usize) -> Self {
        FockVector::basis_vector(n, 0)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Quaternion {
        self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<Quaternion> {
        self.coeffs
    }

    pub(crate) fn check_compatible(&self, other: &FockVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        Ok(())
    }

    /// `⟨f|g⟩ = Σ conj(f_n) g_n`: conjugate-linear on the left, right-linear
    /// on the right.
    pub fn inner(&self, other: &FockVector) -> Result<Quaternion> {
        self.check_compatible(other)?;
        Ok(inner_unchecked(&self.coeffs, &other.coeffs))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `q·φ`, coefficients `q c_k`.
    pub fn left_scale(&self, q: Quaternion) -> FockVector {
        FockVector::with_basis(self.coeffs.iter().map(|&c| q * c).collect(), self.basis)
    }

    /// `φq`, coefficients `c_k q`.
    pub fn right_scale(&self, q: Quaternion) -> FockVector {
        FockVector::with_basis(self.coeffs.iter().map(|&c| c * q).collect(), self.basis)
    }

    /// Largest componentwise difference; `∞` on dimension mismatch.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (*a - *b).max_abs())
            .fold(0.0, f64::max)
    }

    /// `‖f - g‖`.
    pub fn distance(&self, other: &FockVector) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

pub(crate) fn inner_unchecked(f: &[Quaternion], g: &[Quaternion]) -> Quaternion {
    f.iter().zip(g).map(|(a, b)| a.conj() * *b).sum()
}

impl Add for &FockVector {
    type Output = FockVector;
    fn add(self, o: &FockVector) -> FockVector {
        assert_eq!(
            self.len(),
            o.len(),
            "adding Fock vectors of different length"
        );
        FockVector::with_basis(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| *a + *b)
                .collect(),
            self.basis,
        )
    }
}

impl Sub for &FockVector {
    type Output = FockVector;
    fn sub(self, o: &FockVector) -> FockVector {
        assert_eq!(
            self.len(),
            o.len(),
            "subtracting Fock vectors of different length"
        );
        FockVector::with_basis(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| *a - *b)
                .collect(),
            self.basis,
        )
    }
}

/// Serialized as the bare coefficient list `[[q0, q1, q2, q3], ...]`.
impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

/// Deserialized vectors are taken to be in the monomial basis.
impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Vec::<Quaternion>::deserialize(deserializer).map(FockVector::new)
    }
}

/// `Φ_n(q) = qⁿ / √n!`.
pub fn monomial(q: Quaternion, n: u32) -> Quaternion {
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    q.powi(n).scale((-0.5 * log_fact).exp())
}

/// Partial sum `Σ_{n < n_terms} qⁿ conj(p)ⁿ / n!` of the reproducing kernel.
pub fn bargmann_kernel(q: Quaternion, p: Quaternion, n_terms: usize) -> Result<Quaternion> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("n_terms must be at least 1".into()));
    }
    let pb = p.conj();
    let mut qn = Quaternion::ONE;
    let mut pn = Quaternion::ONE;
    let mut inv_fact = 1.0;
    let mut sum = Quaternion::ZERO;
    for n in 0..n_terms {
        if n > 0 {
            qn *= q;
            pn *= pb;
            inv_fact /= n as f64;
        }
        sum += (qn * pn).scale(inv_fact);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::star_exp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rq(rng: &mut ChaCha8Rng) -> Quaternion {
        Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    fn rv(rng: &mut ChaCha8Rng, n: usize) -> FockVector {
        FockVector::new((0..n).map(|_| rq(rng)).collect())
    }

    #[test]
    fn basis_is_orthonormal() {
        for m in 0..6 {
            for n in 0..6 {
                let ip = FockVector::basis_vector(6, m)
                    .inner(&FockVector::basis_vector(6, n))
                    .unwrap();
                let want = if m == n { 1.0 } else { 0.0 };
                assert_eq!(ip, Quaternion::real(want));
            }
        }
    }

    #[test]
    fn inner_product_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (f, g, h) = (rv(&mut rng, 9), rv(&mut rng, 9), rv(&mut rng, 9));
            let q = rq(&mut rng);
            let fg = f.inner(&g).unwrap();
            // (i)
            assert!((fg.conj() - g.inner(&f).unwrap()).max_abs() < 1e-13);
            // (ii)
            let ff = f.inner(&f).unwrap();
            assert!(ff.vector_norm() < 1e-13 && ff.q0 > 0.0);
            // (iii)
            let lhs = f.inner(&(&g + &h)).unwrap();
            assert!((lhs - fg - f.inner(&h).unwrap()).max_abs() < 1e-13);
            // (iv)
            assert!((f.inner(&g.right_scale(q)).unwrap() - fg * q).max_abs() < 1e-13);
            // (v)
            assert!((f.right_scale(q).inner(&g).unwrap() - q.conj() * fg).max_abs() < 1e-13);
        }
    }

    #[test]
    fn dimension_and_basis_mismatch() {
        let a = FockVector::zeros(3);
        assert!(matches!(
            a.inner(&FockVector::zeros(4)),
            Err(Error::DimensionMismatch { .. })
        ));
        let b = FockVector::with_basis(vec![Quaternion::ZERO; 3], BasisTag::TwoLevel);
        assert!(matches!(a.inner(&b), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn left_scale_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (phi, psi) = (rv(&mut rng, 7), rv(&mut rng, 7));
            let (p, q) = (rq(&mut rng), rq(&mut rng));
            // (a)
            assert!(
                (phi.right_scale(p).left_scale(q)).max_abs_diff(&phi.left_scale(q).right_scale(p))
                    < 1e-14
            );
            assert!(
                (&phi + &psi)
                    .left_scale(q)
                    .max_abs_diff(&(&phi.left_scale(q) + &psi.left_scale(q)))
                    < 1e-14
            );
            // (b)
            assert!((phi.left_scale(q).norm() - q.norm() * phi.norm()).abs() < 1e-13);
            // (c)
            assert!(
                phi.left_scale(p)
                    .left_scale(q)
                    .max_abs_diff(&phi.left_scale(q * p))
                    < 1e-14
            );
            // (d)
            let lhs = phi.left_scale(q.conj()).inner(&psi).unwrap();
            let rhs = phi.inner(&psi.left_scale(q)).unwrap();
            assert!((lhs - rhs).max_abs() < 1e-13);
            // additivity in the scalar
            assert!(
                phi.left_scale(p + q)
                    .max_abs_diff(&(&phi.left_scale(p) + &phi.left_scale(q)))
                    < 1e-14
            );
        }
    }

    #[test]
    fn left_scale_exact_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = rq(&mut rng);
        for k in 0..5 {
            let e = FockVector::basis_vector(5, k);
            assert_eq!(e.left_scale(q), e.right_scale(q));
        }
        let phi = rv(&mut rng, 5);
        assert_eq!(
            phi.left_scale(Quaternion::real(-1.7)),
            phi.right_scale(Quaternion::real(-1.7))
        );
    }

    #[test]
    fn right_scale_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi = rv(&mut rng, 4);
        assert_eq!(phi.right_scale(Quaternion::ONE), phi);
        let (p, q) = (rq(&mut rng), rq(&mut rng));
        assert!(
            phi.right_scale(p)
                .right_scale(q)
                .max_abs_diff(&phi.right_scale(p * q))
                < 1e-15
        );
        let v = FockVector::vacuum(3).right_scale(Quaternion::J);
        assert_eq!(
            v.coeffs(),
            &[Quaternion::J, Quaternion::ZERO, Quaternion::ZERO]
        );
        assert!((phi.right_scale(q).norm() - phi.norm() * q.norm()).abs() < 1e-14);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            bargmann_kernel(Quaternion::ZERO, Quaternion::ZERO, 10).unwrap(),
            Quaternion::ONE
        );
        let p = Quaternion::new(0.3, -0.8, 0.2, 0.5);
        let x = Quaternion::real(1.3);
        let k = bargmann_kernel(x, p, 60).unwrap();
        assert!((k - (x * p.conj()).exp()).max_abs() < 1e-13);
        let q = Quaternion::new(0.9, 1.1, -0.7, 0.8);
        let k = bargmann_kernel(q, q, 60).unwrap();
        assert!((k - Quaternion::real(q.norm_sqr().exp())).max_abs() < 1e-10);
        let r = Quaternion::new(0.2, 0.5, 0.1, -0.4);
        assert!((bargmann_kernel(q, r, 80).unwrap() - star_exp(q, r.conj())).max_abs() < 1e-13);
        assert!(bargmann_kernel(q, r, 0).is_err());
    }

    #[test]
    fn json_is_flat_tuple_list() {
        let v = FockVector::new(vec![Quaternion::new(1.0, 2.0, 3.0, 4.0), Quaternion::J]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[[1.0,2.0,3.0,4.0],[0.0,0.0,1.0,0.0]]");
        let back: FockVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn monomials() {
        let q = Quaternion::new(0.5, 0.1, 0.2, -0.3);
        assert_eq!(monomial(q, 0), Quaternion::ONE);
        assert!((monomial(q, 3) - q * q * q / 6f64.sqrt()).max_abs() < 1e-15);
    }
}
