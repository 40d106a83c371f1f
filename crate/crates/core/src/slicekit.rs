//! Conjugation identities for squeeze and displacement parameters lying on a
//! common slice `ℝ + Iℝ`, where they commute.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::observables::check_axis;
use crate::qop::{ladder_a, ladder_adag, number_op, safe_dimension, FockOperator};
use crate::quat::Quaternion;
use crate::states::{displacement, squeeze};

/// Largest off-slice component accepted for `p` and `q`.
pub const SLICE_TOL: f64 = 1e-12;
/// Top-level leakage allowed for the conjugating unitary on the safe block.
pub const SAFE_LEAK_TOL: f64 = 1e-9;
/// Smallest safe block a table row must certify.
pub const MIN_SAFE_DIM: usize = 8;
/// Truncation increment when a row's safe block is too small.
pub const TRUNCATION_STEP: usize = 32;
pub const MAX_TRUNCATION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    A,
    Adag,
    N,
}

impl Which {
    pub const ALL: [Which; 3] = [Which::A, Which::Adag, Which::N];

    pub fn name(self) -> &'static str {
        match self {
            Which::A => "a",
            Which::Adag => "adag",
            Which::N => "N",
        }
    }

    fn operator(self, n: usize) -> FockOperator {
        match self {
            Which::A => ladder_a(n),
            Which::Adag => ladder_adag(n),
            Which::N => number_op(n),
        }
    }

    fn degree(self) -> usize {
        match self {
            Which::N => 2,
            _ => 1,
        }
    }
}

/// Squeeze and displacement parameters on the slice through `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlicePair {
    pub axis: Quaternion,
    pub p: Quaternion,
    pub q: Quaternion,
    /// `p/|p|` (1 for `p = 0`).
    pub i_p: Quaternion,
    /// `q/|q|` (1 for `q = 0`).
    pub i_q: Quaternion,
}

fn off_slice(x: Quaternion, axis: Quaternion) -> f64 {
    let v = x.vector();
    let along = v.q1 * axis.q1 + v.q2 * axis.q2 + v.q3 * axis.q3;
    (v - axis.scale(along)).norm()
}

fn phase_of(x: Quaternion) -> Quaternion {
    x.unit().unwrap_or(Quaternion::ONE)
}

impl SlicePair {
    pub fn new(axis: Quaternion, p: Quaternion, q: Quaternion) -> Result<Self> {
        check_axis(axis)?;
        let defect = off_slice(p, axis).max(off_slice(q, axis));
        if defect > SLICE_TOL {
            return Err(Error::SliceMismatch { defect });
        }
        Ok(SlicePair {
            axis,
            p,
            q,
            i_p: phase_of(p),
            i_q: phase_of(q),
        })
    }

    /// `p = |p| e^{θ·axis}`.
    pub fn from_polar(axis: Quaternion, p_abs: f64, theta: f64, q: Quaternion) -> Result<Self> {
        check_axis(axis)?;
        let p = (Quaternion::real(theta.cos()) + axis.scale(theta.sin())).scale(p_abs);
        SlicePair::new(axis, p, q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conjugation {
    pub lhs: FockOperator,
    pub rhs: FockOperator,
    /// Largest entrywise deviation on the leading `safe_dim` block.
    pub max_dev: f64,
    pub safe_dim: usize,
}

fn conjugate(u: &FockOperator, which: Which, rhs: FockOperator) -> Result<Conjugation> {
    let a = which.operator(u.dim());
    let lhs = u.adjoint().compose(&a)?.compose(u)?;
    let safe_dim = safe_dimension(u, which.degree(), SAFE_LEAK_TOL);
    let max_dev = lhs.max_abs_diff_block(&rhs, safe_dim);
    Ok(Conjugation {
        lhs,
        rhs,
        max_dev,
        safe_dim,
    })
}

fn id(n: usize, c: Quaternion) -> FockOperator {
    FockOperator::identity(n).left_scale(c)
}

/// Closed form of `D(q)†S(p)†·A·S(p)D(q)` for slice parameters, with
/// `c = cosh|p|`, `s = sinh|p|`, `u = p/|p|`.
pub fn two_photon_rhs(p: Quaternion, q: Quaternion, which: Which, n: usize) -> FockOperator {
    let r = p.norm();
    let (c, s) = (r.cosh(), r.sinh());
    let u = phase_of(p);
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    match which {
        Which::A => {
            &(&a.scale_real(c) + &ad.left_scale(u.scale(s)))
                + &id(n, q.scale(c) + u.scale(s) * q.conj())
        }
        Which::Adag => {
            &(&ad.scale_real(c) + &a.left_scale(u.conj().scale(s)))
                + &id(n, q.conj().scale(c) + u.conj().scale(s) * q)
        }
        Which::N => {
            let q2 = q.norm_sqr();
            let a2 = a.compose(&a).expect("same dimension");
            let ad2 = ad.compose(&ad).expect("same dimension");
            let aad = a.compose(&ad).expect("same dimension");
            let sh2 = (2.0 * r).sinh();
            let g1 = &(&(&number_op(n) + &ad.left_scale(q)) + &a.left_scale(q.conj()))
                + &id(n, Quaternion::real(q2));
            let g2 = &(&a2 + &a.left_scale(q.scale(2.0))) + &id(n, q * q);
            let g3 = &(&ad2 + &ad.left_scale(q.conj().scale(2.0))) + &id(n, q.conj() * q.conj());
            let g4 = &(&(&aad + &a.left_scale(q.conj())) + &ad.left_scale(q))
                + &id(n, Quaternion::real(q2));
            let t1 = g1.scale_real(c * c);
            let t2 = g2.left_scale(u.conj().scale(0.5 * sh2));
            let t3 = g3.left_scale(u.scale(0.5 * sh2));
            let t4 = g4.scale_real(s * s);
            &(&(&t1 + &t2) + &t3) + &t4
        }
    }
}

/// Closed form of `S(p)†D(q)†·A·D(q)S(p)` for slice parameters.
pub fn squeezed_coherent_rhs(p: Quaternion, q: Quaternion, which: Which, n: usize) -> FockOperator {
    let r = p.norm();
    let (c, s) = (r.cosh(), r.sinh());
    let u = phase_of(p);
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    match which {
        Which::A => &(&a.scale_real(c) + &ad.left_scale(u.scale(s))) + &id(n, q),
        Which::Adag => &(&ad.scale_real(c) + &a.left_scale(u.conj().scale(s))) + &id(n, q.conj()),
        Which::N => {
            let a2 = a.compose(&a).expect("same dimension");
            let ad2 = ad.compose(&ad).expect("same dimension");
            let aad = a.compose(&ad).expect("same dimension");
            let terms = [
                number_op(n).scale_real(c * c),
                ad2.left_scale(u.scale(s * c)),
                ad.left_scale(q.scale(c)),
                a2.left_scale(u.conj().scale(s * c)),
                aad.scale_real(s * s),
                a.left_scale(u.conj().scale(s) * q),
                a.left_scale(q.conj().scale(c)),
                ad.left_scale(q.conj() * u.scale(s)),
                id(n, Quaternion::real(q.norm_sqr())),
            ];
            terms
                .iter()
                .skip(1)
                .fold(terms[0].clone(), |acc, t| &acc + t)
        }
    }
}

fn two_photon_unchecked(
    p: Quaternion,
    q: Quaternion,
    which: Which,
    n: usize,
) -> Result<Conjugation> {
    let u = squeeze(p, n)?.compose(&displacement(q, n)?)?;
    conjugate(&u, which, two_photon_rhs(p, q, which, n))
}

/// `D(q)†S(p)†·A·S(p)D(q)` against its slice closed form.
pub fn two_photon_conjugation(sp: &SlicePair, which: Which, n: usize) -> Result<Conjugation> {
    two_photon_unchecked(sp.p, sp.q, which, n)
}

/// `S(p)†D(q)†·A·D(q)S(p)` against its slice closed form.
pub fn squeezed_coherent_conjugation(
    sp: &SlicePair,
    which: Which,
    n: usize,
) -> Result<Conjugation> {
    let u = displacement(sp.q, n)?.compose(&squeeze(sp.p, n)?)?;
    conjugate(&u, which, squeezed_coherent_rhs(sp.p, sp.q, which, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub p: Quaternion,
    pub q: Quaternion,
    pub dev: f64,
    pub safe_dim: usize,
}

/// Evaluates the two-photon closed form for `A = a` at arbitrary `p`, `q`.
pub fn two_photon_deviation(p: Quaternion, q: Quaternion, n: usize) -> Result<Witness> {
    let c = two_photon_unchecked(p, q, Which::A, n)?;
    Ok(Witness {
        p,
        q,
        dev: c.max_dev,
        safe_dim: c.safe_dim,
    })
}

/// `p = 0.4i`, `q = 0.7j`: off a common slice the two-photon closed form fails.
pub fn noncommutativity_witness(n: usize) -> Result<Witness> {
    two_photon_deviation(
        Quaternion::new(0.0, 0.4, 0.0, 0.0),
        Quaternion::new(0.0, 0.0, 0.7, 0.0),
        n,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TwoPhoton,
    SqueezedCoherent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub family: Family,
    pub axis: Quaternion,
    pub p_abs: f64,
    pub theta_p: f64,
    pub q: Quaternion,
    pub which: Which,
    pub truncation: usize,
    pub max_dev: f64,
    pub safe_dim: usize,
}

/// The four test axes `i, j, k, (i+j+k)/√3`.
pub fn test_axes() -> [Quaternion; 4] {
    let d = 1.0 / 3f64.sqrt();
    [
        Quaternion::I,
        Quaternion::J,
        Quaternion::K,
        Quaternion::imaginary([d, d, d]),
    ]
}

fn table_point(axis: Quaternion, r: f64, t: f64, n_min: usize) -> Result<Vec<TableRow>> {
    let q = Quaternion::real(0.7) + axis.scale(0.2);
    let sp = SlicePair::from_polar(axis, r, t, q)?;
    let mut n = n_min;
    loop {
        let mut out = Vec::with_capacity(6);
        for family in [Family::TwoPhoton, Family::SqueezedCoherent] {
            for which in Which::ALL {
                let c = match family {
                    Family::TwoPhoton => two_photon_conjugation(&sp, which, n)?,
                    Family::SqueezedCoherent => squeezed_coherent_conjugation(&sp, which, n)?,
                };
                out.push(TableRow {
                    family,
                    axis,
                    p_abs: r,
                    theta_p: t,
                    q,
                    which,
                    truncation: n,
                    max_dev: c.max_dev,
                    safe_dim: c.safe_dim,
                });
            }
        }
        let small = out.iter().any(|row| row.safe_dim < MIN_SAFE_DIM);
        if !small || n + TRUNCATION_STEP > MAX_TRUNCATION {
            return Ok(out);
        }
        n += TRUNCATION_STEP;
    }
}

/// Every slice identity over `axes × p_abs × theta` with `q = 0.7 + 0.2·axis`.
/// Each grid point starts at truncation `n` and grows it by
/// [`TRUNCATION_STEP`] until every safe block has [`MIN_SAFE_DIM`] levels.
pub fn verification_table(
    axes: &[Quaternion],
    p_abs: &[f64],
    theta: &[f64],
    n: usize,
    exec: Execution,
) -> Result<Vec<TableRow>> {
    let mut points = Vec::new();
    for &axis in axes {
        for &r in p_abs {
            for &t in theta {
                points.push((axis, r, t));
            }
        }
    }
    let rows = exec.map(points.len(), |k| {
        let (axis, r, t) = points[k];
        table_point(axis, r, t, n)
    });
    let mut table = Vec::new();
    for r in rows {
        table.extend(r?);
    }
    Ok(table)
}
