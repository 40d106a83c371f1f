//! State families: canonical coherent states, the displacement and squeeze
//! operators, pure squeezed states, squeezed states in both operator orders,
//! and the one-mode fermionic pair.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BasisTag, FockVector};
use crate::qop::{ladder_a, ladder_adag, number_op, FockOperator, TAIL_MARGIN};
use crate::quat::{sinc, PolarForm, Quaternion};

/// Largest tail mass `Σ_{n≥N} |c_n|²` a coherent state may drop.
pub const COHERENT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentState {
    pub label: Quaternion,
    pub vector: FockVector,
}

/// A squeeze parameter with its polar data, `p = |p| e^{iθσ(n̂)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeParams {
    pub p: Quaternion,
    pub polar: PolarForm,
}

impl SqueezeParams {
    pub fn new(p: Quaternion) -> Self {
        SqueezeParams {
            p,
            polar: p.polar(),
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.polar.r
    }

    /// The unit quaternion `e^{iθσ(n̂)}`.
    pub fn phase(&self) -> Quaternion {
        self.polar.phase()
    }
}

/// `e^{-λ} Σ_{n≥N} λⁿ/n!` for `λ = |q|²`, summed directly from `n = N`.
pub fn poisson_tail(lambda: f64, n: usize) -> f64 {
    if lambda == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
    let mut log_term = -lambda + n as f64 * lambda.ln() - log_fact;
    let mut sum = 0.0;
    let mut k = n;
    loop {
        let t = log_term.exp();
        sum += t;
        k += 1;
        log_term += lambda.ln() - (k as f64).ln();
        if (k as f64) > lambda && t < sum * 1e-17 || k > n + 100_000 {
            break;
        }
    }
    sum.min(1.0)
}

/// Closed-form coefficients `e^{-|q|²/2} qⁿ/√n!` without a tail check.
pub fn coherent_coefficients(q: Quaternion, n: usize) -> Vec<Quaternion> {
    let mut out = Vec::with_capacity(n);
    let mut c = Quaternion::real((-0.5 * q.norm_sqr()).exp());
    for k in 0..n {
        if k > 0 {
            c = c * q / (k as f64).sqrt();
        }
        out.push(c);
    }
    out
}

/// `η_q = e^{-|q|²/2} Σ Φ_n qⁿ/√n!`; fails if more than
/// [`COHERENT_TAIL_TOL`] of the norm lies beyond the truncation.
pub fn coherent(q: Quaternion, n: usize) -> Result<CoherentState> {
    let tail = poisson_tail(q.norm_sqr(), n);
    if tail > COHERENT_TAIL_TOL {
        return Err(Error::TruncationTooSmall {
            truncation: n,
            tail,
        });
    }
    Ok(CoherentState {
        label: q,
        vector: FockVector::new(coherent_coefficients(q, n)),
    })
}

/// `q·a† - q̄·a`.
pub fn displacement_generator(q: Quaternion, n: usize) -> FockOperator {
    &ladder_adag(n).left_scale(q) - &ladder_a(n).left_scale(q.conj())
}

/// `D(q) = e^{q·a† - q̄·a}`.
pub fn displacement(q: Quaternion, n: usize) -> Result<FockOperator> {
    displacement_generator(q, n).expm()
}

/// `½(p·(a†)² - p̄·a²)`.
pub fn squeeze_generator(p: Quaternion, n: usize) -> FockOperator {
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    let a2 = a.compose(&a).expect("same dimension");
    let ad2 = ad.compose(&ad).expect("same dimension");
    (&ad2.left_scale(p) - &a2.left_scale(p.conj())).scale_real(0.5)
}

/// `S(p) = e^{½(p·(a†)² - p̄·a²)}`.
pub fn squeeze(p: Quaternion, n: usize) -> Result<FockOperator> {
    squeeze_generator(p, n).expm()
}

/// `S(p) = e^{p·K₊ - p̄·K₋}`, built from the su(1,1) generators.
pub fn squeeze_su11(p: Quaternion, n: usize) -> Result<FockOperator> {
    let k = su11_generators(n)?;
    (&k.k_plus.left_scale(p) - &k.k_minus.left_scale(p.conj())).expm()
}

/// `η_p = S(p)Φ_0`.
pub fn pure_squeezed(p: Quaternion, n: usize) -> Result<FockVector> {
    squeeze(p, n)?.apply(&FockVector::vacuum(n))
}

/// Largest weight the exact squeezed vacuum may keep above the top
/// [`TAIL_MARGIN`] levels of the truncation.
pub const SQUEEZE_TAIL_TOL: f64 = 1e-10;

/// `Σ_{2m ≥ from} |c_{2m}|²` for the exact squeezed vacuum of magnitude `r`,
/// where `|c_{2m}|² = tanh^{2m} r · (2m)!/(4^m (m!)²) / cosh r`.
pub fn squeezed_vacuum_tail(r: f64, from: usize) -> f64 {
    let t2 = r.tanh().powi(2);
    if t2 == 0.0 {
        return if from == 0 { 1.0 } else { 0.0 };
    }
    let mut w = 1.0 / r.cosh();
    let mut sum = 0.0;
    let mut m = 0usize;
    loop {
        if 2 * m >= from {
            sum += w;
            if w < sum * 1e-17 || w == 0.0 {
                break;
            }
        }
        m += 1;
        w *= t2 * (2 * m - 1) as f64 / (2 * m) as f64;
        if m > 1_000_000 {
            break;
        }
    }
    sum.min(1.0)
}

/// Smallest even truncation `≥ min_n` whose top [`TAIL_MARGIN`] levels hold
/// at most [`SQUEEZE_TAIL_TOL`] of the squeezed vacuum of magnitude `r`.
pub fn squeeze_truncation(r: f64, min_n: usize) -> usize {
    let mut n = min_n + min_n % 2;
    while squeezed_vacuum_tail(r, n.saturating_sub(TAIL_MARGIN)) > SQUEEZE_TAIL_TOL {
        n += 2;
    }
    n
}

/// Fails unless truncation `n` keeps the squeezed vacuum of magnitude `r`
/// clear of its top levels.
pub fn check_squeeze_truncation(r: f64, n: usize) -> Result<()> {
    let tail = squeezed_vacuum_tail(r, n.saturating_sub(TAIL_MARGIN));
    if tail > SQUEEZE_TAIL_TOL {
        return Err(Error::TruncationTooSmall {
            truncation: n,
            tail,
        });
    }
    Ok(())
}

/// `S(p)D(q)Φ_0 = S(p)η_q`.
pub fn squeezed_sd(q: Quaternion, p: Quaternion, n: usize) -> Result<FockVector> {
    let eta = coherent(q, n)?;
    if p == Quaternion::ZERO {
        return Ok(eta.vector);
    }
    squeeze(p, n)?.apply(&eta.vector)
}

/// `D(q)S(p)Φ_0`.
pub fn squeezed_ds(q: Quaternion, p: Quaternion, n: usize) -> Result<FockVector> {
    let eta_p = pure_squeezed(p, n)?;
    displacement(q, n)?.apply(&eta_p)
}

/// Coefficients of the alternative series
/// `e^{|p|²/4} Σ_m e^{m|p|²} p^m √(2m)!/(2^m m!) Φ_{2m}` on `n` levels.
/// They grow like `(|p| e^{|p|²})^m`, so unlike `S(p)Φ_0` this series is
/// not normalized and diverges once `|p| e^{|p|²} ≥ 1`.
pub fn alternative_squeezed_series(p: Quaternion, n: usize) -> Vec<Quaternion> {
    let r2 = p.norm_sqr();
    let mut out = vec![Quaternion::ZERO; n];
    let mut c = Quaternion::real((0.25 * r2).exp());
    for m in 0..n.div_ceil(2) {
        if m > 0 {
            // √(2m)!/(2^m m!) grows by √((2m-1)(2m))/(2m).
            let k = (2 * m) as f64;
            c = c * p * (r2.exp() * ((k - 1.0) * k).sqrt() / k);
        }
        out[2 * m] = c;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su11 {
    pub k_plus: FockOperator,
    pub k_minus: FockOperator,
    pub k_zero: FockOperator,
}

/// `K₊ = ½(a†)²`, `K₋ = ½a²`, `K₀ = ½(a†a + ½I)`.
pub fn su11_generators(n: usize) -> Result<Su11> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "su(1,1) generators need truncation >= 4, got {n}"
        )));
    }
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    Ok(Su11 {
        k_plus: ad.compose(&ad)?.scale_real(0.5),
        k_minus: a.compose(&a)?.scale_real(0.5),
        k_zero: number_op(n)
            .plus_scalar(Quaternion::real(0.5))
            .scale_real(0.5),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FermionicPair {
    pub eta0: FockVector,
    pub eta1: FockVector,
}

/// Two-level ladder operators: `a|1⟩ = |0⟩`, `a†|0⟩ = |1⟩`.
pub fn fermion_ladder() -> (FockOperator, FockOperator) {
    (
        ladder_a(2).with_basis(BasisTag::TwoLevel),
        ladder_adag(2).with_basis(BasisTag::TwoLevel),
    )
}

/// `q·a† - q̄·a` on the two-level space; it squares to `-|q|² I`.
pub fn fermion_generator(q: Quaternion) -> FockOperator {
    let (a, ad) = fermion_ladder();
    &ad.left_scale(q) - &a.left_scale(q.conj())
}

/// `e^{q·a† - q̄·a} = cos|q| I + (q/|q|) sin|q|·a† - (q̄/|q|) sin|q|·a`.
pub fn fermion_exponential(q: Quaternion) -> FockOperator {
    let r = q.norm();
    let s = sinc(r);
    let (a, ad) = fermion_ladder();
    let id = FockOperator::identity(2)
        .with_basis(BasisTag::TwoLevel)
        .scale_real(r.cos());
    &(&id + &ad.left_scale(q.scale(s))) - &a.left_scale(q.conj().scale(s))
}

/// `η_0 = cos|q| |0⟩ + (q/|q|) sin|q|·|1⟩`,
/// `η_1 = cos|q| |1⟩ - (q̄/|q|) sin|q|·|0⟩`.
pub fn fermionic(q: Quaternion) -> FermionicPair {
    let r = q.norm();
    let c = Quaternion::real(r.cos());
    let s = sinc(r);
    FermionicPair {
        eta0: FockVector::with_basis(vec![c, q.scale(s)], BasisTag::TwoLevel),
        eta1: FockVector::with_basis(vec![-q.conj().scale(s), c], BasisTag::TwoLevel),
    }
}
