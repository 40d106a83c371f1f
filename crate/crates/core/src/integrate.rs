//! Quadrature over ℍ in the polar coordinates `q = r e^{θ·n̂(φ,ψ)}`:
//! Gram matrices of the monomials `qⁿ/√n!` and the coherent-state
//! resolution of the identity.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::qop::FockOperator;
use crate::quat::{PolarForm, Quaternion};
use crate::states::coherent_coefficients;

/// Default upper end of the radial interval.
pub const RADIAL_CUTOFF: f64 = 8.0;

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureVariant {
    /// `(1/4π²) r e^{-r²} sin φ dr dθ dφ dψ`; a probability measure under
    /// which the monomials `qⁿ/√n!` are orthonormal.
    GaussianWeighted,
    /// `(1/4π²) r sin φ dr dθ dφ dψ`, for normalized coherent states.
    Plain,
    /// `(1/4π) e^{-r²} sin φ dr dθ dφ dψ`, kept for comparison.
    Printed,
}

/// Tensor-product rule: Gauss–Legendre in `r ∈ [0, R]` and in `cos φ`,
/// uniform nodes in `θ, ψ ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureGrid {
    pub variant: MeasureVariant,
    pub cutoff: f64,
    pub radial: Vec<(f64, f64)>,
    pub theta: Vec<f64>,
    pub phi: Vec<(f64, f64)>,
    pub psi: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(
        variant: MeasureVariant,
        n_r: usize,
        n_theta: usize,
        n_phi: usize,
        n_psi: usize,
    ) -> Result<Self> {
        QuadratureGrid::with_cutoff(variant, RADIAL_CUTOFF, n_r, n_theta, n_phi, n_psi)
    }

    pub fn with_cutoff(
        variant: MeasureVariant,
        cutoff: f64,
        n_r: usize,
        n_theta: usize,
        n_phi: usize,
        n_psi: usize,
    ) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::BadGrid(format!(
                "radial cutoff must be positive, got {cutoff}"
            )));
        }
        if [n_r, n_theta, n_phi, n_psi].contains(&0) {
            return Err(Error::BadGrid(format!(
                "every node count must be positive (got {n_r}, {n_theta}, {n_phi}, {n_psi})"
            )));
        }
        let c = match variant {
            MeasureVariant::Printed => 1.0 / (4.0 * PI),
            _ => 1.0 / (4.0 * PI * PI),
        };
        let (xr, wr) = gauss_legendre(n_r);
        let half = 0.5 * cutoff;
        let radial = xr
            .iter()
            .zip(&wr)
            .map(|(&x, &w)| {
                let r = half * (x + 1.0);
                let density = match variant {
                    MeasureVariant::GaussianWeighted => r * (-r * r).exp(),
                    MeasureVariant::Plain => r,
                    MeasureVariant::Printed => (-r * r).exp(),
                };
                (r, c * half * w * density)
            })
            .collect();
        let (xp, wp) = gauss_legendre(n_phi);
        // ∫ f(φ) sin φ dφ = ∫ f(acos t) dt.
        let phi = xp.iter().zip(&wp).map(|(&t, &w)| (t.acos(), w)).collect();
        let uniform = |m: usize| {
            (0..m)
                .map(|k| TAU * k as f64 / m as f64)
                .collect::<Vec<_>>()
        };
        Ok(QuadratureGrid {
            variant,
            cutoff,
            radial,
            theta: uniform(n_theta),
            phi,
            psi: uniform(n_psi),
        })
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.theta.len() * self.phi.len() * self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node_counts(&self) -> [usize; 4] {
        [
            self.radial.len(),
            self.theta.len(),
            self.phi.len(),
            self.psi.len(),
        ]
    }

    /// Total weight; 1 for the Gaussian-weighted variant up to the radial
    /// cutoff tail.
    pub fn total_weight(&self) -> f64 {
        let radial: f64 = self.radial.iter().map(|p| p.1).sum();
        let phi: f64 = self.phi.iter().map(|p| p.1).sum();
        radial * TAU * phi * TAU
    }

    /// Points and weights for radial node `i`, in a fixed order.
    fn shell(&self, i: usize) -> impl Iterator<Item = (Quaternion, f64)> + '_ {
        let (r, wr) = self.radial[i];
        let dth = TAU / self.theta.len() as f64;
        let dps = TAU / self.psi.len() as f64;
        self.theta.iter().flat_map(move |&th| {
            self.phi.iter().flat_map(move |&(ph, wp)| {
                self.psi.iter().map(move |&ps| {
                    let q = PolarForm::from_angles(r, th, ph, ps).reconstruct();
                    (q, wr * dth * wp * dps)
                })
            })
        })
    }

    /// `Σ_i f(shell i)` with each shell summed on its own and the partial
    /// sums folded in radial order, so the result does not depend on `exec`.
    fn accumulate<T, F>(&self, exec: Execution, zero: T, f: F) -> T
    where
        T: Send + Sync + Clone + std::ops::AddAssign,
        F: Fn(Quaternion, f64, &mut T) + Sync + Send,
    {
        let parts = exec.map(self.radial.len(), |i| {
            let mut acc = zero.clone();
            for (q, w) in self.shell(i) {
                f(q, w, &mut acc);
            }
            acc
        });
        let mut total = zero;
        for p in parts {
            total += p;
        }
        total
    }
}

/// Square quaternion matrix accumulator.
#[derive(Debug, Clone, PartialEq)]
struct Acc(Vec<Quaternion>);

impl std::ops::AddAssign for Acc {
    fn add_assign(&mut self, rhs: Acc) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

/// `G_{mn} = ∫ conj(Φ_m(q)) Φ_n(q) dζ` for `m, n < nmax`, `Φ_n(q) = qⁿ/√n!`.
pub fn gram_matrix(nmax: usize, grid: &QuadratureGrid, exec: Execution) -> FockOperator {
    let acc = grid.accumulate(
        exec,
        Acc(vec![Quaternion::ZERO; nmax * nmax]),
        |q, w, acc| {
            let mut phi = Vec::with_capacity(nmax);
            let mut c = Quaternion::ONE;
            for k in 0..nmax {
                if k > 0 {
                    c = c * q / (k as f64).sqrt();
                }
                phi.push(c);
            }
            for (row, pm) in acc.0.chunks_exact_mut(nmax).zip(&phi) {
                let cm = pm.conj().scale(w);
                for (e, pn) in row.iter_mut().zip(&phi) {
                    *e += cm * *pn;
                }
            }
        },
    );
    FockOperator::from_entries(nmax, acc.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    /// `∫ |η_q⟩⟨η_q| dζ` on the truncated space.
    pub operator: FockOperator,
    /// Leading `nmax × nmax` block.
    pub block: FockOperator,
    /// `max |block - I|`.
    pub max_dev: f64,
    /// `max |block_{nn} - 1|`.
    pub diagonal_dev: f64,
    /// Largest off-diagonal entry of the block.
    pub off_diagonal_dev: f64,
}

/// Accumulates the rank-one operators `|η_q⟩⟨η_q|` over the grid on an
/// `n`-level truncation and compares the leading `nmax` block with `I`.
pub fn resolution_of_identity(
    nmax: usize,
    grid: &QuadratureGrid,
    n: usize,
    exec: Execution,
) -> Result<Resolution> {
    if nmax > n {
        return Err(Error::InvalidArgument(format!(
            "block size {nmax} exceeds truncation {n}"
        )));
    }
    let acc = grid.accumulate(exec, Acc(vec![Quaternion::ZERO; n * n]), |q, w, acc| {
        let c = coherent_coefficients(q, n);
        for (row, ck) in acc.0.chunks_exact_mut(n).zip(&c) {
            let ck = ck.scale(w);
            for (e, cl) in row.iter_mut().zip(&c) {
                *e += ck * cl.conj();
            }
        }
    });
    let operator = FockOperator::from_entries(n, acc.0);
    let block = operator.block(nmax);
    let mut diagonal_dev: f64 = 0.0;
    let mut off_diagonal_dev: f64 = 0.0;
    for i in 0..nmax {
        for j in 0..nmax {
            let e = block.get(i, j);
            if i == j {
                diagonal_dev = diagonal_dev.max((e - Quaternion::ONE).max_abs());
            } else {
                off_diagonal_dev = off_diagonal_dev.max(e.max_abs());
            }
        }
    }
    Ok(Resolution {
        operator,
        block,
        max_dev: diagonal_dev.max(off_diagonal_dev),
        diagonal_dev,
        off_diagonal_dev,
    })
}

/// `‖R - I‖_F`, invariant under unitary conjugation of `R`.
pub fn frobenius_deviation(r: &FockOperator) -> f64 {
    (r - &FockOperator::identity(r.dim())).frobenius()
}

/// `π Γ(n + ½)/n!`, the diagonal Gram entry under the printed measure.
pub fn printed_gram_diagonal(n: usize) -> f64 {
    // Γ(n + ½) = √π (2n)!/(4ⁿ n!), so the ratio is π^{3/2} (2n)!/(4ⁿ n!²).
    let mut c = 1.0;
    for k in 1..=n {
        c *= (2 * k - 1) as f64 / (2 * k) as f64;
    }
    PI.powf(1.5) * c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        for deg in 0..20 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 0 {
                2.0 / (deg + 1) as f64
            } else {
                0.0
            };
            assert!((got - want).abs() < 1e-14, "{deg}");
        }
        let (x, w) = gauss_legendre(7);
        assert_eq!(x[3], 0.0);
        assert!(w.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn rejects_empty_grid() {
        assert!(matches!(
            QuadratureGrid::new(MeasureVariant::Plain, 0, 4, 4, 4),
            Err(Error::BadGrid(_))
        ));
    }

    #[test]
    fn gaussian_variant_is_a_probability_measure() {
        let g = QuadratureGrid::new(MeasureVariant::GaussianWeighted, 40, 4, 3, 4).unwrap();
        assert!((g.total_weight() - 1.0).abs() < 1e-10);
        assert!(g.radial.iter().all(|p| p.1 > 0.0));
    }

    #[test]
    fn gram_is_identity() {
        let g = QuadratureGrid::new(MeasureVariant::GaussianWeighted, 40, 20, 10, 20).unwrap();
        let gram = gram_matrix(9, &g, Execution::default());
        assert!(gram.max_abs_diff(&FockOperator::identity(9)) < 1e-8);
        assert!((gram.get(0, 0) - Quaternion::ONE).max_abs() < 1e-12);
    }

    #[test]
    fn printed_measure_misnormalizes() {
        let g = QuadratureGrid::new(MeasureVariant::Printed, 40, 20, 10, 20).unwrap();
        let gram = gram_matrix(4, &g, Execution::default());
        for n in 0..4 {
            assert!((gram.get(n, n).q0 - printed_gram_diagonal(n)).abs() < 1e-8);
        }
        assert!((printed_gram_diagonal(0) - PI.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn resolution_block_and_symmetry() {
        let g = QuadratureGrid::new(MeasureVariant::Plain, 48, 16, 12, 16).unwrap();
        let res = resolution_of_identity(7, &g, 10, Execution::default()).unwrap();
        assert!(res.diagonal_dev < 1e-3);
        assert!(res.off_diagonal_dev < 1e-6);
        assert!(res.operator.max_abs_diff(&res.operator.adjoint()) < 1e-12);
    }

    #[test]
    fn accumulation_is_execution_independent() {
        let g = QuadratureGrid::new(MeasureVariant::Plain, 8, 4, 3, 4).unwrap();
        let a = resolution_of_identity(4, &g, 6, Execution::Sequential).unwrap();
        let b = resolution_of_identity(4, &g, 6, Execution::Parallel).unwrap();
        assert_eq!(a.operator, b.operator);
    }
}
