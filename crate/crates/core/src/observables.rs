//! Expectation values, quadratures, photon statistics and the uncertainty
//! quantities of coherent and squeezed states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::qop::{ladder_a, ladder_adag, number_op, FockOperator, TAIL_MARGIN};
use crate::quat::{ComplexMatrix2, Quaternion};
use crate::states::{check_squeeze_truncation, coherent, pure_squeezed};

/// Largest `|axis² + 1|` accepted for a unit imaginary axis.
pub const AXIS_TOL: f64 = 1e-12;
/// Tolerance for scalar renderings, commuting moments and canonical pairs.
pub const REPORT_TOL: f64 = 1e-9;

/// `⟨φ|A φ⟩`.
pub fn expectation(phi: &FockVector, a: &FockOperator) -> Result<Quaternion> {
    phi.inner(&a.apply(phi)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationReport {
    pub mean: Quaternion,
    pub second_moment: Quaternion,
    /// `⟨A²⟩ - ⟨A⟩²`, present only when the mean is real or commutes with the
    /// second moment.
    pub variance: Option<Quaternion>,
}

impl ExpectationReport {
    pub fn new(phi: &FockVector, a: &FockOperator) -> Result<Self> {
        let av = a.apply(phi)?;
        let mean = phi.inner(&av)?;
        let second_moment = phi.inner(&a.apply(&av)?)?;
        let variance =
            if mean.vector_norm() <= REPORT_TOL || mean.commutes_with(second_moment, REPORT_TOL) {
                Some(second_moment - mean * mean)
            } else {
                None
            };
        Ok(ExpectationReport {
            mean,
            second_moment,
            variance,
        })
    }

    /// Matrix images of mean, second moment and (if present) variance.
    pub fn as_matrix(&self) -> Vec<ComplexMatrix2> {
        let mut out = vec![self.mean.to_matrix(), self.second_moment.to_matrix()];
        out.extend(self.variance.map(Quaternion::to_matrix));
        out
    }

    /// The variance as a real scalar.
    pub fn scalar_variance(&self) -> Result<f64> {
        let v = self.variance.ok_or_else(|| {
            Error::InvalidArgument("variance is undefined for these moments".into())
        })?;
        scalar(v)
    }
}

/// A quaternion known to be a real multiple of the identity, as a scalar.
pub fn scalar(q: Quaternion) -> Result<f64> {
    if q.vector_norm() > REPORT_TOL {
        return Err(Error::InvalidArgument(format!(
            "expected a real value, found {q}"
        )));
    }
    Ok(q.q0)
}

pub fn check_axis(axis: Quaternion) -> Result<()> {
    let defect = axis.axis_defect();
    if defect > AXIS_TOL {
        return Err(Error::BadAxis { defect });
    }
    Ok(())
}

/// `X = ½(a + a†)`, `Y = -(axis/2)·(a - a†)`.
pub fn quadratures(n: usize, axis: Quaternion) -> Result<(FockOperator, FockOperator)> {
    check_axis(axis)?;
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    let x = (&a + &ad).scale_real(0.5);
    let y = (&a - &ad).left_scale(axis.scale(-0.5));
    Ok((x, y))
}

/// `Q = (a + a†)/√2`, `P = -(axis/√2)·(a - a†)`.
pub fn position_momentum(n: usize, axis: Quaternion) -> Result<(FockOperator, FockOperator)> {
    check_axis(axis)?;
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &ad).scale_real(s);
    let p = (&a - &ad).left_scale(axis.scale(-s));
    Ok((q, p))
}

fn variance(phi: &FockVector, a: &FockOperator) -> Result<f64> {
    ExpectationReport::new(phi, a)?.scalar_variance()
}

/// `⟨ΔX⟩²⟨ΔY⟩²` on the pure squeezed state `S(p)Φ_0`, with `Y` built on `i`.
pub fn squeeze_variance_product(p: Quaternion, n: usize) -> Result<f64> {
    check_squeeze_truncation(p.norm(), n)?;
    let eta = pure_squeezed(p, n)?;
    let (x, y) = quadratures(n, Quaternion::I)?;
    Ok(variance(&eta, &x)? * variance(&eta, &y)?)
}

/// `(1 + sinh²(2|p|) sin²θ)/16`.
pub fn squeeze_variance_product_closed(p: Quaternion) -> f64 {
    let pol = p.polar();
    (1.0 + (2.0 * pol.r).sinh().powi(2) * pol.theta.sin().powi(2)) / 16.0
}

/// `U = ½(w̄·a + w·a†)` and `V = -(n̂/2)·(w̄·a - w·a†)` with `w = e^{iθσ(n̂)/2}`
/// taken from the polar form of `p`; `[U, V] = (n̂/2)·I`.
pub fn rotated_quadratures(p: Quaternion, n: usize) -> (FockOperator, FockOperator) {
    let pol = p.polar();
    let w = pol.phase_scaled(0.5);
    let axis = pol.axis();
    let wa = ladder_a(n).left_scale(w.conj());
    let wad = ladder_adag(n).left_scale(w);
    let u = (&wa + &wad).scale_real(0.5);
    let v = (&wa - &wad).left_scale(axis.scale(-0.5));
    (u, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatedReport {
    pub mean_u: Quaternion,
    pub mean_v: Quaternion,
    pub var_u: f64,
    pub var_v: f64,
    /// `⟨ΔU⟩⟨ΔV⟩`.
    pub product: f64,
}

/// Rotated-quadrature uncertainties of `S(p)Φ_0`; `var_u = ¼e^{2|p|}`,
/// `var_v = ¼e^{-2|p|}`.
pub fn rotated_quadrature_product(p: Quaternion, n: usize) -> Result<RotatedReport> {
    check_squeeze_truncation(p.norm(), n)?;
    let eta = pure_squeezed(p, n)?;
    let (u, v) = rotated_quadratures(p, n);
    let ru = ExpectationReport::new(&eta, &u)?;
    let rv = ExpectationReport::new(&eta, &v)?;
    let var_u = ru.scalar_variance()?;
    let var_v = rv.scalar_variance()?;
    Ok(RotatedReport {
        mean_u: ru.mean,
        mean_v: rv.mean,
        var_u,
        var_v,
        product: (var_u * var_v).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonStats {
    pub mean_n: f64,
    pub second_moment: f64,
    pub var_n: f64,
    /// `⟨ΔN⟩²/⟨N⟩ - 1`; `None` when `⟨N⟩ = 0`.
    pub mandel_q: Option<f64>,
}

impl PhotonStats {
    pub fn mandel_q(&self) -> Result<f64> {
        self.mandel_q.ok_or(Error::MeanZero)
    }
}

/// Photon-number statistics of `S(p)Φ_0`.
pub fn photon_stats(p: Quaternion, n: usize) -> Result<PhotonStats> {
    check_squeeze_truncation(p.norm(), n)?;
    let eta = pure_squeezed(p, n)?;
    let r = ExpectationReport::new(&eta, &number_op(n))?;
    let mean_n = scalar(r.mean)?;
    let second_moment = scalar(r.second_moment)?;
    let var_n = second_moment - mean_n * mean_n;
    let mandel_q = (mean_n.abs() > f64::EPSILON).then(|| var_n / mean_n - 1.0);
    Ok(PhotonStats {
        mean_n,
        second_moment,
        var_n,
        mandel_q,
    })
}

/// Closed forms `(⟨N⟩, ⟨ΔN⟩², Q_M)` for magnitude `r`.
pub fn photon_stats_closed(r: f64) -> (f64, f64, f64) {
    let s2 = r.sinh().powi(2);
    (s2, 2.0 * s2 * (1.0 + s2), 1.0 + 2.0 * s2)
}

/// The series `e^{-|q|²} Σ q̄ⁿ·axis·qⁿ/n!`, written as `r·axis′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiValue {
    pub value: Quaternion,
    pub r: f64,
    pub axis: Quaternion,
    pub terms_used: usize,
}

pub fn ci_series(q: Quaternion, axis: Quaternion) -> Result<CiValue> {
    check_axis(axis)?;
    let x = q.norm_sqr();
    let mut qn = Quaternion::ONE;
    let mut weight = (-x).exp();
    // e^{-|q|²}|q|^{2n}/n!, the size of the n-th term.
    let mut bound = weight;
    let mut sum = Quaternion::ZERO;
    let mut n = 0usize;
    loop {
        sum += (qn.conj() * axis * qn).scale(weight);
        n += 1;
        if bound < 1e-16 && n as f64 > x {
            break;
        }
        qn *= q;
        weight /= n as f64;
        bound *= x / n as f64;
        if bound == 0.0 {
            break;
        }
    }
    // The series is purely imaginary term by term; drop rounding in the real part.
    let value = sum.vector();
    let r = value.norm();
    let axis_out = if r > 0.0 { value.scale(1.0 / r) } else { axis };
    Ok(CiValue {
        value,
        r,
        axis: axis_out,
        terms_used: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeisenbergReport {
    pub var_q: f64,
    pub var_p: f64,
    /// `⟨ΔQ⟩²⟨ΔP⟩²`.
    pub product: f64,
    /// `|product - ¼|`, bounded by `|q|²`.
    pub bound_gap: f64,
    pub bound_holds: bool,
    /// `½|⟨[Q, P]⟩|`.
    pub commutator_half: f64,
    pub ci: CiValue,
    pub mean_p: Quaternion,
    /// `-(Ci·q - q̄·Ci)/√2`.
    pub mean_p_series: Quaternion,
}

/// Uncertainty quantities of `Q`, `P` (built on `axis`) on the coherent state `η_q`.
pub fn heisenberg_bounds(q: Quaternion, n: usize, axis: Quaternion) -> Result<HeisenbergReport> {
    let (qo, po) = position_momentum(n, axis)?;
    let eta = coherent(q, n)?.vector;
    let var_q = variance(&eta, &qo)?;
    let rp = ExpectationReport::new(&eta, &po)?;
    let var_p = scalar(rp.second_moment)? - rp.mean.q0 * rp.mean.q0;
    let product = var_q * var_p;
    let bound_gap = (product - 0.25).abs();
    let comm = qo.commutator(&po)?;
    let commutator_half = 0.5 * expectation(&eta, &comm)?.norm();
    let ci = ci_series(q, axis)?;
    let mean_p_series =
        (ci.value * q - q.conj() * ci.value).scale(-std::f64::consts::FRAC_1_SQRT_2);
    Ok(HeisenbergReport {
        var_q,
        var_p,
        product,
        bound_gap,
        bound_holds: bound_gap <= q.norm_sqr() + REPORT_TOL,
        commutator_half,
        ci,
        mean_p: rp.mean,
        mean_p_series,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeVerdict {
    pub var_a: f64,
    pub var_b: f64,
    /// `½|⟨C⟩|` for `[A, B] = axis·C`.
    pub half_c: f64,
    pub axis: Quaternion,
    pub squeezed: bool,
    pub ideally_squeezed: bool,
}

/// Squeezing of `φ` with respect to the pair `(A, B)`, whose commutator must
/// be `axis·C` with `C` self-adjoint below the top truncation levels.
pub fn is_squeezed(phi: &FockVector, a: &FockOperator, b: &FockOperator) -> Result<SqueezeVerdict> {
    let n = a.dim();
    let d = n.saturating_sub(TAIL_MARGIN);
    let comm = a.commutator(b)?.block(d);
    let pivot = comm
        .entries()
        .iter()
        .copied()
        .max_by(|x, y| x.vector_norm().total_cmp(&y.vector_norm()))
        .filter(|x| x.vector_norm() > REPORT_TOL)
        .ok_or(Error::NotCanonicalPair { defect: 0.0 })?;
    let axis = pivot.vector().scale(1.0 / pivot.vector_norm());
    let c = comm.left_scale(-axis);
    let defect = c
        .max_abs_diff(&c.adjoint())
        .max(comm.max_abs_diff(&c.left_scale(axis)));
    if defect > REPORT_TOL {
        return Err(Error::NotCanonicalPair { defect });
    }
    let head = FockVector::with_basis(phi.coeffs()[..d.min(phi.len())].to_vec(), phi.basis());
    let half_c = 0.5 * expectation(&head, &c)?.norm();
    let var_a = variance(phi, a)?;
    let var_b = variance(phi, b)?;
    let squeezed = var_a < half_c - REPORT_TOL || var_b < half_c - REPORT_TOL;
    let ideally_squeezed = squeezed && ((var_a * var_b).sqrt() - half_c).abs() <= REPORT_TOL;
    Ok(SqueezeVerdict {
        var_a,
        var_b,
        half_c,
        axis,
        squeezed,
        ideally_squeezed,
    })
}
