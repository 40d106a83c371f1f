//! Right-linear operators on the truncated Fock space, stored as dense
//! quaternion matrices in the fixed basis, and their complex embedding.
//!
//! `(Mφ)_k = Σ_n M_{kn} c_n`, so every matrix commutes with right scalar
//! multiplication. Left scaling of an operator, `(q·A)φ = q·(Aφ)`, multiplies
//! every entry on the left; right scaling, `(A·q)φ = A(q·φ)`, on the right.
//!
//! The matrix exponential works on the 2N×2N complex embedding, where every
//! quaternion entry is replaced by its 2×2 image. That image is closed under
//! sums, products and limits, so the result maps back exactly up to roundoff.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::{BasisTag, FockVector};
use crate::quat::{ComplexMatrix2, Quaternion};

/// Shape tolerance for [`EmbeddedOperator::unembed`].
pub const UNEMBED_TOL: f64 = 1e-10;
/// Drift tolerated after exponentiation before reporting `NotInImage`.
pub const EXPM_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    n: usize,
    entries: Vec<Quaternion>,
    basis: BasisTag,
}

impl FockOperator {
    pub fn zeros(n: usize) -> Self {
        FockOperator {
            n,
            entries: vec![Quaternion::ZERO; n * n],
            basis: BasisTag::Monomial,
        }
    }

    pub fn identity(n: usize) -> Self {
        FockOperator::from_fn(n, |r, c| {
            if r == c {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Quaternion) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        FockOperator {
            n,
            entries,
            basis: BasisTag::Monomial,
        }
    }

    /// Row-major entries; panics unless `entries.len() == n * n`.
    pub fn from_entries(n: usize, entries: Vec<Quaternion>) -> Self {
        assert_eq!(entries.len(), n * n, "operator needs n*n entries");
        FockOperator {
            n,
            entries,
            basis: BasisTag::Monomial,
        }
    }

    pub fn with_basis(mut self, basis: BasisTag) -> Self {
        self.basis = basis;
        self
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.entries[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, q: Quaternion) {
        self.entries[r * self.n + c] = q;
    }

    fn check_same_shape(&self, other: &FockOperator) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
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

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        if v.basis() != self.basis {
            return Err(Error::BasisMismatch {
                left: self.basis,
                right: v.basis(),
            });
        }
        let c = v.coeffs();
        let out = (0..self.n)
            .map(|r| {
                let row = &self.entries[r * self.n..(r + 1) * self.n];
                row.iter().zip(c).map(|(m, x)| *m * *x).sum()
            })
            .collect();
        Ok(FockVector::with_basis(out, self.basis))
    }

    /// Matrix product `AB`.
    pub fn compose(&self, other: &FockOperator) -> Result<FockOperator> {
        self.compose_with(other, Execution::default())
    }

    pub fn compose_with(&self, other: &FockOperator, exec: Execution) -> Result<FockOperator> {
        self.check_same_shape(other)?;
        let n = self.n;
        let mut out = vec![Quaternion::ZERO; n * n];
        if n > 0 {
            exec.for_each_chunk(&mut out, n, |r, row| {
                for k in 0..n {
                    let a = self.entries[r * n + k];
                    if a == Quaternion::ZERO {
                        continue;
                    }
                    let brow = &other.entries[k * n..(k + 1) * n];
                    for (o, b) in row.iter_mut().zip(brow) {
                        *o += a * *b;
                    }
                }
            });
        }
        Ok(FockOperator {
            n,
            entries: out,
            basis: self.basis,
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> FockOperator {
        let n = self.n;
        FockOperator {
            n,
            entries: (0..n * n)
                .map(|i| self.entries[(i % n) * n + i / n].conj())
                .collect(),
            basis: self.basis,
        }
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &FockOperator) -> Result<FockOperator> {
        Ok(&self.compose(other)? - &other.compose(self)?)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &FockOperator) -> Result<FockOperator> {
        Ok(&self.compose(other)? + &other.compose(self)?)
    }

    /// `q·A`: entries `q A_{kn}`.
    pub fn left_scale(&self, q: Quaternion) -> FockOperator {
        self.map(|a| q * a)
    }

    /// `A·q`: entries `A_{kn} q`.
    pub fn right_scale(&self, q: Quaternion) -> FockOperator {
        self.map(|a| a * q)
    }

    pub fn scale_real(&self, s: f64) -> FockOperator {
        self.map(|a| a.scale(s))
    }

    fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> FockOperator {
        FockOperator {
            n: self.n,
            entries: self.entries.iter().map(|&a| f(a)).collect(),
            basis: self.basis,
        }
    }

    /// `A + q·I`.
    pub fn plus_scalar(&self, q: Quaternion) -> FockOperator {
        let mut out = self.clone();
        for k in 0..self.n {
            out.entries[k * self.n + k] += q;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &FockOperator) -> f64 {
        self.max_abs_diff_block(other, self.n.max(other.n))
    }

    /// Max entrywise difference over the leading `d×d` block, i.e. on the
    /// span of `Φ_0..Φ_{d-1}`. Infinite when the dimensions differ.
    pub fn max_abs_diff_block(&self, other: &FockOperator, d: usize) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let d = d.min(self.n);
        let mut m: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                m = m.max((self.get(r, c) - other.get(r, c)).max_abs());
            }
        }
        m
    }

    /// Frobenius norm `(Σ |A_{kn}|²)^{1/2}`; invariant under unitary conjugation.
    pub fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|q| q.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Leading `d×d` block as a new operator.
    pub fn block(&self, d: usize) -> FockOperator {
        let d = d.min(self.n);
        FockOperator::from_fn(d, |r, c| self.get(r, c)).with_basis(self.basis)
    }

    /// `‖A†A - I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .compose(self)
            .map(|p| p.max_abs_diff(&FockOperator::identity(self.n).with_basis(self.basis)))
            .unwrap_or(f64::INFINITY)
    }

    /// `‖A† + A‖_max ≤ tol`.
    pub fn is_antihermitian(&self, tol: f64) -> bool {
        (&self.adjoint() + self).max_abs() <= tol
    }

    /// `‖A† - A‖_max ≤ tol`.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.adjoint().max_abs_diff(self) <= tol
    }

    pub fn embed(&self) -> EmbeddedOperator {
        let n = self.n;
        let m = 2 * n;
        let mut entries = vec![Complex64::new(0.0, 0.0); m * m];
        for r in 0..n {
            for c in 0..n {
                let img = self.get(r, c).to_matrix().entries;
                entries[(2 * r) * m + 2 * c] = img[0];
                entries[(2 * r) * m + 2 * c + 1] = img[1];
                entries[(2 * r + 1) * m + 2 * c] = img[2];
                entries[(2 * r + 1) * m + 2 * c + 1] = img[3];
            }
        }
        EmbeddedOperator {
            dim: m,
            entries,
            basis: self.basis,
        }
    }

    /// `e^A`, computed on the complex embedding and mapped back.
    pub fn expm(&self) -> Result<FockOperator> {
        self.expm_with(Execution::default())
    }

    pub fn expm_with(&self, exec: Execution) -> Result<FockOperator> {
        self.embed()
            .expm_with(exec)
            .unembed_with_tol(EXPM_DRIFT_TOL)
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, o: &FockOperator) -> FockOperator {
        assert_eq!(self.n, o.n, "adding operators of different dimension");
        FockOperator {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| *a + *b)
                .collect(),
            basis: self.basis,
        }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, o: &FockOperator) -> FockOperator {
        assert_eq!(self.n, o.n, "subtracting operators of different dimension");
        FockOperator {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&o.entries)
                .map(|(a, b)| *a - *b)
                .collect(),
            basis: self.basis,
        }
    }
}

/// Levels at the top of the truncated space that a column may not reach.
pub const TAIL_MARGIN: usize = 8;

/// Size `d` of the leading block on which conjugation by `u` is unaffected by
/// the truncation, to within about `tol`: every column `c < d` of `u` keeps
/// at most `tol` of its weight in the top [`TAIL_MARGIN`] levels, and `d`
/// leaves `degree + TAIL_MARGIN` levels free at the top.
pub fn safe_dimension(u: &FockOperator, degree: usize, tol: f64) -> usize {
    let cap = u.dim().saturating_sub(degree + TAIL_MARGIN);
    (0..cap).take_while(|&c| top_leakage(u, c) <= tol).count()
}

/// Weight of column `c` of `u` in the top [`TAIL_MARGIN`] levels.
pub fn top_leakage(u: &FockOperator, c: usize) -> f64 {
    let n = u.dim();
    (n.saturating_sub(TAIL_MARGIN)..n)
        .map(|k| u.get(k, c).norm_sqr())
        .sum()
}

/// Annihilation operator: `a Φ_n = √n Φ_{n-1}`, `a Φ_0 = 0`.
pub fn ladder_a(n: usize) -> FockOperator {
    FockOperator::from_fn(n, |r, c| {
        if c == r + 1 {
            Quaternion::real((c as f64).sqrt())
        } else {
            Quaternion::ZERO
        }
    })
}

/// Creation operator: `a† Φ_n = √(n+1) Φ_{n+1}`. The truncation forces
/// `a† Φ_{N-1} = 0`.
pub fn ladder_adag(n: usize) -> FockOperator {
    FockOperator::from_fn(n, |r, c| {
        if r == c + 1 {
            Quaternion::real((r as f64).sqrt())
        } else {
            Quaternion::ZERO
        }
    })
}

/// `N = a†a`, diagonal `0, 1, …, N-1`.
pub fn number_op(n: usize) -> FockOperator {
    FockOperator::from_fn(n, |r, c| {
        if r == c {
            Quaternion::real(r as f64)
        } else {
            Quaternion::ZERO
        }
    })
}

/// `H = N + ½ I`.
pub fn hamiltonian(n: usize) -> FockOperator {
    number_op(n).plus_scalar(Quaternion::real(0.5))
}

/// Row-major 2N×2N complex matrix made of 2×2 quaternion images.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedOperator {
    dim: usize,
    entries: Vec<Complex64>,
    basis: BasisTag,
}

impl EmbeddedOperator {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        EmbeddedOperator {
            dim,
            entries,
            basis: BasisTag::Monomial,
        }
    }

    /// Row-major complex entries; panics unless `entries.len() == dim²`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        EmbeddedOperator {
            dim,
            entries,
            basis: BasisTag::Monomial,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn adjoint(&self) -> EmbeddedOperator {
        let d = self.dim;
        EmbeddedOperator {
            dim: d,
            entries: (0..d * d)
                .map(|i| self.entries[(i % d) * d + i / d].conj())
                .collect(),
            basis: self.basis,
        }
    }

    pub fn matmul(&self, other: &EmbeddedOperator) -> EmbeddedOperator {
        self.matmul_with(other, Execution::default())
    }

    pub fn matmul_with(&self, other: &EmbeddedOperator, exec: Execution) -> EmbeddedOperator {
        assert_eq!(self.dim, other.dim, "embedded dimension mismatch");
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        if d > 0 {
            exec.for_each_chunk(&mut out, d, |r, row| {
                for k in 0..d {
                    let a = self.entries[r * d + k];
                    if a.re == 0.0 && a.im == 0.0 {
                        continue;
                    }
                    let brow = &other.entries[k * d..(k + 1) * d];
                    for (o, b) in row.iter_mut().zip(brow) {
                        *o += a * *b;
                    }
                }
            });
        }
        EmbeddedOperator {
            dim: d,
            entries: out,
            basis: self.basis,
        }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let d = self.dim;
        (0..d)
            .map(|c| (0..d).map(|r| self.entries[r * d + c].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &EmbeddedOperator) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Scaling and squaring with a Taylor kernel: `A` is scaled by `2^{-s}`
    /// until `‖A‖₁ < ½`, the series is summed to machine precision, and the
    /// result is squared `s` times.
    pub fn expm_with(&self, exec: Execution) -> EmbeddedOperator {
        const MAX_TERMS: usize = 40;
        let d = self.dim;
        let norm = self.norm1();
        let mut squarings = 0u32;
        while norm / 2f64.powi(squarings as i32) >= 0.5 {
            squarings += 1;
        }
        let scale = 0.5f64.powi(squarings as i32);
        let x = EmbeddedOperator {
            dim: d,
            entries: self.entries.iter().map(|z| z * scale).collect(),
            basis: self.basis,
        };
        let mut sum = EmbeddedOperator::identity(d);
        sum.basis = self.basis;
        let mut term = sum.clone();
        for k in 1..=MAX_TERMS {
            term = term.matmul_with(&x, exec);
            let inv = 1.0 / k as f64;
            term.entries.iter_mut().for_each(|z| *z *= inv);
            for (s, t) in sum.entries.iter_mut().zip(&term.entries) {
                *s += *t;
            }
            if term.norm1() <= f64::EPSILON * 1e-2 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.matmul_with(&sum, exec);
        }
        sum
    }

    pub fn unembed(&self) -> Result<FockOperator> {
        self.unembed_with_tol(UNEMBED_TOL)
    }

    /// Maps back to quaternion entries, rejecting blocks whose distance from
    /// the quaternion image exceeds `tol`.
    pub fn unembed_with_tol(&self, tol: f64) -> Result<FockOperator> {
        if !self.dim.is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                found: self.dim,
            });
        }
        let n = self.dim / 2;
        let m = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let block = ComplexMatrix2::new([
                    self.entries[(2 * r) * m + 2 * c],
                    self.entries[(2 * r) * m + 2 * c + 1],
                    self.entries[(2 * r + 1) * m + 2 * c],
                    self.entries[(2 * r + 1) * m + 2 * c + 1],
                ]);
                let violation = block.quaternion_shape_violation();
                if violation > tol {
                    return Err(Error::NotInImage {
                        row: r,
                        col: c,
                        violation,
                    });
                }
                entries.push(Quaternion::from_matrix_unchecked(&block));
            }
        }
        Ok(FockOperator {
            n,
            entries,
            basis: self.basis,
        })
    }
}
