//! Named identity checks at a fixed truncation and tolerance.
//!
//! Every check reports the largest deviation it measured and passes iff that
//! deviation is at most the configured tolerance. Identities that only hold
//! below the truncation edge fail outright when the safe block is smaller
//! than [`MIN_SAFE_DIM`], rather than passing on an empty block.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::{BasisTag, FockVector};
use crate::integrate::{gram_matrix, resolution_of_identity, MeasureVariant, QuadratureGrid};
use crate::observables::{
    ci_series, expectation, heisenberg_bounds, photon_stats, photon_stats_closed,
    position_momentum, rotated_quadrature_product, squeeze_variance_product,
    squeeze_variance_product_closed, ExpectationReport,
};
use crate::qop::{hamiltonian, ladder_a, ladder_adag, number_op, safe_dimension, FockOperator};
use crate::quat::Quaternion;
use crate::slicekit::{
    squeezed_coherent_conjugation, test_axes, two_photon_conjugation, SlicePair, Which,
    MIN_SAFE_DIM, SAFE_LEAK_TOL,
};
use crate::states::{
    check_squeeze_truncation, coherent, displacement, fermion_exponential, fermion_generator,
    fermion_ladder, fermionic, pure_squeezed, squeeze, squeeze_su11, squeezed_ds, squeezed_sd,
    su11_generators,
};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_TOL: f64 = 1e-7;
pub const MIN_TRUNCATION: usize = 8;
/// Random samples per randomized check.
pub const SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub truncation: usize,
    pub tol: f64,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            truncation: crate::fock::DEFAULT_TRUNCATION,
            tol: DEFAULT_TOL,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

impl VerifyConfig {
    pub fn new(truncation: usize, tol: f64, seed: u64) -> Result<Self> {
        if truncation < MIN_TRUNCATION {
            return Err(Error::InvalidArgument(format!(
                "truncation must be at least {MIN_TRUNCATION}, got {truncation}"
            )));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(VerifyConfig {
            truncation,
            tol,
            seed,
            exec: Execution::default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// `None` when the check could not be evaluated.
    pub max_dev: Option<f64>,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub truncation: usize,
    pub tol: f64,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

type Check = fn(&VerifyConfig, &mut ChaCha8Rng) -> Result<f64>;

/// Every check, in report order.
pub const CHECKS: &[(&str, Check)] = &[
    ("quaternion.algebra", quaternion_algebra),
    ("quaternion.matrix_homomorphism", matrix_homomorphism),
    ("quaternion.polar_reconstruction", polar_reconstruction),
    ("left_scaling.vector_laws", vector_laws),
    ("left_scaling.exact_cases", exact_cases),
    ("left_scaling.operator_laws", operator_laws),
    ("ladder.canonical_commutator", canonical_commutator),
    ("ladder.adjoint_pair", adjoint_pair),
    ("ladder.commute_with_scalars", ladder_scalars),
    ("su11.commutators", su11_commutators),
    ("hamiltonian.number_plus_half", number_plus_half),
    ("displacement.unitarity", displacement_unitarity),
    ("displacement.conjugate_a", displacement_conjugate_a),
    ("displacement.conjugate_adag", displacement_conjugate_adag),
    ("displacement.vacuum_orbit", displacement_vacuum),
    ("coherent.eigenvector", coherent_eigenvector),
    ("coherent.expectation_table", coherent_table),
    ("coherent.position_variance", position_variance),
    ("coherent.uncertainty_bound", uncertainty_bound),
    ("ci.antihermitian_bounded", ci_bounded),
    ("ci.slice_collapse", ci_slice),
    ("ci.j_value", ci_j),
    ("squeeze.unitarity", squeeze_unitarity),
    ("squeeze.adjoint_is_negation", squeeze_adjoint),
    ("squeeze.conjugate_a", squeeze_conjugate_a),
    ("squeeze.conjugate_adag", squeeze_conjugate_adag),
    ("squeeze.conjugate_number", squeeze_conjugate_number),
    ("squeeze.su11_form", squeeze_su11_form),
    ("squeezed_vacuum.moments", squeezed_moments),
    ("squeezed_vacuum.variance_product", variance_product),
    ("squeezed_vacuum.rotated_product", rotated_product),
    ("squeezed_vacuum.photon_statistics", photon_statistics),
    ("squeezed.norms", squeezed_norms),
    ("slice.two_photon", slice_two_photon),
    ("slice.squeezed_coherent", slice_squeezed_coherent),
    ("fermion.closed_form", fermion_closed_form),
    ("fermion.anticommutators", fermion_anticommutators),
    ("fermion.usual_commutators", fermion_usual),
    ("fermion.orthonormal", fermion_orthonormal),
    ("quadrature.gram", quadrature_gram),
    ("quadrature.resolution", quadrature_resolution),
];

pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let mut checks = Vec::with_capacity(CHECKS.len());
    for (k, &(name, f)) in CHECKS.iter().enumerate() {
        // One stream per check, so results do not depend on check order.
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k as u64);
        checks.push(match f(cfg, &mut rng) {
            Ok(dev) => CheckResult {
                name,
                max_dev: Some(dev),
                passed: dev <= cfg.tol,
                detail: None,
            },
            Err(e) => CheckResult {
                name,
                max_dev: None,
                passed: false,
                detail: Some(e.to_string()),
            },
        });
    }
    VerifyReport {
        schema: SCHEMA,
        truncation: cfg.truncation,
        tol: cfg.tol,
        seed: cfg.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

pub fn random_quaternion(rng: &mut ChaCha8Rng, radius: f64) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-radius..radius),
        rng.gen_range(-radius..radius),
        rng.gen_range(-radius..radius),
        rng.gen_range(-radius..radius),
    )
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> FockVector {
    FockVector::new((0..n).map(|_| random_quaternion(rng, 1.0)).collect())
}

/// Quaternion `r e^{θ·axis}`.
fn on_axis(r: f64, theta: f64, axis: Quaternion) -> Quaternion {
    (Quaternion::real(theta.cos()) + axis.scale(theta.sin())).scale(r)
}

/// Squeeze parameters: magnitudes × test axes × phases.
fn squeeze_grid(mags: &[f64]) -> Vec<Quaternion> {
    let mut out = Vec::new();
    for &r in mags {
        for axis in test_axes() {
            for theta in [PI / 6.0, FRAC_PI_2, 5.0 * PI / 6.0] {
                out.push(on_axis(r, theta, axis));
            }
        }
    }
    out
}

/// Compares `u†·A·u` with `rhs` on the safe block of `u`, failing when that
/// block is smaller than [`MIN_SAFE_DIM`].
fn conjugation_dev(
    u: &FockOperator,
    a: &FockOperator,
    rhs: &FockOperator,
    degree: usize,
) -> Result<f64> {
    let d = safe_dimension(u, degree, SAFE_LEAK_TOL);
    if d < MIN_SAFE_DIM {
        return Err(Error::SafeBlockTooSmall {
            truncation: u.dim(),
            safe_dim: d,
            required: MIN_SAFE_DIM,
        });
    }
    let lhs = u.adjoint().compose(a)?.compose(u)?;
    Ok(lhs.max_abs_diff_block(rhs, d))
}

fn quaternion_algebra(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES {
        let (p, q, r) = (
            random_quaternion(rng, 2.0),
            random_quaternion(rng, 2.0),
            random_quaternion(rng, 2.0),
        );
        dev = dev
            .max(((p * q) * r - p * (q * r)).max_abs())
            .max((p * (q + r) - (p * q + p * r)).max_abs())
            .max(((p * q).norm() - p.norm() * q.norm()).abs())
            .max(((p * q).conj() - q.conj() * p.conj()).max_abs());
        if let Some(inv) = p.inverse() {
            dev = dev.max((p * inv - Quaternion::ONE).max_abs());
        }
    }
    Ok(dev)
}

fn matrix_homomorphism(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES {
        let (p, q) = (random_quaternion(rng, 2.0), random_quaternion(rng, 2.0));
        let m = (p * q).to_matrix();
        dev = dev
            .max(m.max_abs_diff(&(p.to_matrix() * q.to_matrix())))
            .max((Quaternion::from_matrix(&p.to_matrix())? - p).max_abs())
            .max(p.conj().to_matrix().max_abs_diff(&p.to_matrix().adjoint()));
    }
    Ok(dev)
}

fn polar_reconstruction(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES {
        let q = random_quaternion(rng, 2.0);
        let pol = q.polar();
        dev = dev
            .max((pol.reconstruct() - q).max_abs())
            .max(pol.reconstruct_matrix().max_abs_diff(&q.to_matrix()));
    }
    Ok(dev)
}

fn vector_laws(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES / 10 {
        let (phi, psi) = (random_vector(rng, n), random_vector(rng, n));
        let (p, q) = (random_quaternion(rng, 1.0), random_quaternion(rng, 1.0));
        dev = dev
            .max(
                phi.right_scale(p)
                    .left_scale(q)
                    .max_abs_diff(&phi.left_scale(q).right_scale(p)),
            )
            .max(
                (&phi + &psi)
                    .left_scale(q)
                    .max_abs_diff(&(&phi.left_scale(q) + &psi.left_scale(q))),
            )
            .max((phi.left_scale(q).norm() - q.norm() * phi.norm()).abs())
            .max(
                phi.left_scale(p)
                    .left_scale(q)
                    .max_abs_diff(&phi.left_scale(q * p)),
            )
            .max((phi.left_scale(q.conj()).inner(&psi)? - phi.inner(&psi.left_scale(q))?).max_abs())
            .max(
                phi.left_scale(p + q)
                    .max_abs_diff(&(&phi.left_scale(p) + &phi.left_scale(q))),
            );
    }
    Ok(dev)
}

fn exact_cases(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES / 10 {
        let q = random_quaternion(rng, 2.0);
        let x = Quaternion::real(q.q0);
        let phi = random_vector(rng, n);
        dev = dev.max(phi.left_scale(x).max_abs_diff(&phi.right_scale(x)));
        let e = FockVector::basis_vector(n, rng.gen_range(0..n));
        dev = dev.max(e.left_scale(q).max_abs_diff(&e.right_scale(q)));
    }
    Ok(dev)
}

fn operator_laws(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation.min(16);
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES / 50 {
        let entries = (0..n * n).map(|_| random_quaternion(rng, 1.0)).collect();
        let a = FockOperator::from_entries(n, entries);
        let phi = random_vector(rng, n);
        let q = random_quaternion(rng, 1.0);
        dev = dev
            .max(
                a.left_scale(q)
                    .apply(&phi)?
                    .max_abs_diff(&a.apply(&phi)?.left_scale(q)),
            )
            .max(
                a.right_scale(q)
                    .apply(&phi)?
                    .max_abs_diff(&a.apply(&phi.left_scale(q))?),
            )
            .max(
                a.left_scale(q)
                    .adjoint()
                    .max_abs_diff(&a.adjoint().right_scale(q.conj())),
            )
            .max(
                a.right_scale(q)
                    .adjoint()
                    .max_abs_diff(&a.adjoint().left_scale(q.conj())),
            );
    }
    Ok(dev)
}

fn canonical_commutator(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let c = ladder_a(n).commutator(&ladder_adag(n))?;
    Ok(c.max_abs_diff_block(&FockOperator::identity(n), n - 1))
}

fn adjoint_pair(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    Ok(ladder_adag(n).adjoint().max_abs_diff(&ladder_a(n)))
}

fn ladder_scalars(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES / 100 {
        let q = random_quaternion(rng, 2.0);
        for op in [ladder_a(n), ladder_adag(n)] {
            dev = dev.max(op.left_scale(q).max_abs_diff(&op.right_scale(q)));
        }
    }
    Ok(dev)
}

fn su11_commutators(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let k = su11_generators(n)?;
    let d = n - 2;
    let c1 = k
        .k_zero
        .commutator(&k.k_plus)?
        .max_abs_diff_block(&k.k_plus, d);
    let c2 = k
        .k_zero
        .commutator(&k.k_minus)?
        .max_abs_diff_block(&k.k_minus.scale_real(-1.0), d);
    let c3 = k
        .k_plus
        .commutator(&k.k_minus)?
        .max_abs_diff_block(&k.k_zero.scale_real(-2.0), d);
    Ok(c1.max(c2).max(c3))
}

fn number_plus_half(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    let sym = (&a.compose(&ad)? + &ad.compose(&a)?).scale_real(0.5);
    let (q, p) = position_momentum(n, Quaternion::I)?;
    let qp = (&q.compose(&q)? + &p.compose(&p)?).scale_real(0.5);
    Ok(sym
        .max_abs_diff_block(&hamiltonian(n), n - 1)
        .max(qp.max_abs_diff_block(&hamiltonian(n), n - 1)))
}

fn displacement_params(rng: &mut ChaCha8Rng, count: usize, radius: f64) -> Vec<Quaternion> {
    (0..count)
        .map(|_| {
            let q = random_quaternion(rng, 1.0);
            q.unit()
                .unwrap_or(Quaternion::ONE)
                .scale(rng.gen_range(0.0..radius))
        })
        .collect()
}

fn displacement_unitarity(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for q in displacement_params(rng, 8, 2.0) {
        dev = dev.max(displacement(q, cfg.truncation)?.unitarity_defect());
    }
    Ok(dev)
}

fn displacement_conjugate(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, dagger: bool) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for q in displacement_params(rng, 6, 1.5) {
        let d = displacement(q, n)?;
        let (op, shift) = if dagger {
            (ladder_adag(n), q.conj())
        } else {
            (ladder_a(n), q)
        };
        let rhs = op.plus_scalar(shift);
        dev = dev.max(conjugation_dev(&d, &op, &rhs, 1)?);
    }
    Ok(dev)
}

fn displacement_conjugate_a(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    displacement_conjugate(cfg, rng, false)
}

fn displacement_conjugate_adag(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    displacement_conjugate(cfg, rng, true)
}

fn displacement_vacuum(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for q in displacement_params(rng, 6, 1.5) {
        let got = displacement(q, n)?.apply(&FockVector::vacuum(n))?;
        let want = coherent(q, n)?.vector;
        dev = dev.max(got.max_abs_diff(&want));
    }
    Ok(dev)
}

fn coherent_eigenvector(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for q in displacement_params(rng, 8, 2.0) {
        let eta = coherent(q, n)?.vector;
        let aeta = ladder_a(n).apply(&eta)?;
        dev = dev.max(aeta.max_abs_diff(&eta.left_scale(q)));
    }
    Ok(dev)
}

fn coherent_table(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    let ops = [
        a.clone(),
        ad.clone(),
        a.compose(&a)?,
        ad.compose(&ad)?,
        a.compose(&ad)?,
        ad.compose(&a)?,
    ];
    let mut dev: f64 = 0.0;
    for q in displacement_params(rng, 6, 1.5) {
        let eta = coherent(q, n)?.vector;
        let want = [
            q,
            q.conj(),
            q * q,
            q.conj() * q.conj(),
            Quaternion::real(1.0 + q.norm_sqr()),
            Quaternion::real(q.norm_sqr()),
        ];
        for (op, w) in ops.iter().zip(want) {
            let got = expectation(&eta, op)?;
            dev = dev.max((got - w).max_abs());
        }
    }
    Ok(dev)
}

fn position_variance(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for axis in test_axes() {
        let (q_op, _) = position_momentum(n, axis)?;
        for q in displacement_params(rng, 3, 1.5) {
            let eta = coherent(q, n)?.vector;
            let var = ExpectationReport::new(&eta, &q_op)?.scalar_variance()?;
            dev = dev.max((var - 0.5).abs());
        }
    }
    Ok(dev)
}

/// Amount by which `|⟨ΔQ⟩²⟨ΔP⟩² - ¼| ≤ |q|²` is violated over the grid.
fn uncertainty_bound(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for mag in [0.0, 0.3, 0.6, 1.0, 1.5] {
        for axis in test_axes() {
            let q = on_axis(mag, 0.7, axis);
            let h = heisenberg_bounds(q, cfg.truncation, Quaternion::I)?;
            dev = dev
                .max(h.bound_gap - q.norm_sqr())
                .max((h.commutator_half - 0.5 * h.ci.r).abs());
        }
    }
    Ok(dev.max(0.0))
}

fn ci_bounded(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES {
        let q = random_quaternion(rng, 1.0);
        let q = q
            .unit()
            .unwrap_or(Quaternion::ONE)
            .scale(rng.gen_range(0.0..3.0));
        let c = ci_series(q, Quaternion::I)?;
        dev = dev
            .max((c.value.conj() + c.value).max_abs())
            .max(c.value.norm() - 1.0)
            .max((c.axis.scale(c.r) - c.value).max_abs());
    }
    Ok(dev)
}

fn ci_slice(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES / 10 {
        let q = Quaternion::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), 0.0, 0.0);
        dev = dev.max((ci_series(q, Quaternion::I)?.value - Quaternion::I).max_abs());
    }
    Ok(dev)
}

fn ci_j(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    // q̄ⁿ i qⁿ = i for every n when q = j (j i j = i), so Ci = e^{-1}·e^{-1}·i.
    let mut oracle = Quaternion::ZERO;
    let mut qn = Quaternion::ONE;
    let mut fact = 1.0;
    for k in 0..60 {
        if k > 0 {
            qn *= Quaternion::J;
            fact *= k as f64;
        }
        oracle += (qn.conj() * Quaternion::I * qn).scale((-1.0f64).exp() / fact);
    }
    let got = ci_series(Quaternion::J, Quaternion::I)?.value;
    Ok((got - oracle)
        .max_abs()
        .max((got - Quaternion::I.scale((-2.0f64).exp())).max_abs()))
}

fn squeeze_unitarity(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&[0.5, 1.25]) {
        dev = dev.max(squeeze(p, cfg.truncation)?.unitarity_defect());
    }
    Ok(dev)
}

fn squeeze_adjoint(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&[0.5, 1.0]) {
        let n = cfg.truncation;
        dev = dev.max(squeeze(p, n)?.adjoint().max_abs_diff(&squeeze(-p, n)?));
    }
    Ok(dev)
}

fn squeeze_conjugate(cfg: &VerifyConfig, which: Which) -> Result<f64> {
    let n = cfg.truncation;
    let a = ladder_a(n);
    let ad = ladder_adag(n);
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&[0.25, 0.4]) {
        let s = squeeze(p, n)?;
        let r = p.norm();
        let (c, sh) = (r.cosh(), r.sinh());
        let u = p.polar().phase();
        let (op, rhs, degree) = match which {
            Which::A => (a.clone(), &a.scale_real(c) + &ad.left_scale(u.scale(sh)), 1),
            Which::Adag => (
                ad.clone(),
                &ad.scale_real(c) + &a.left_scale(u.conj().scale(sh)),
                1,
            ),
            Which::N => {
                let rhs = &(&(&number_op(n).scale_real(c * c)
                    + &a.compose(&a)?.left_scale(u.conj().scale(sh * c)))
                    + &ad.compose(&ad)?.left_scale(u.scale(sh * c)))
                    + &a.compose(&ad)?.scale_real(sh * sh);
                (number_op(n), rhs, 2)
            }
        };
        dev = dev.max(conjugation_dev(&s, &op, &rhs, degree)?);
    }
    Ok(dev)
}

fn squeeze_conjugate_a(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    squeeze_conjugate(cfg, Which::A)
}

fn squeeze_conjugate_adag(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    squeeze_conjugate(cfg, Which::Adag)
}

fn squeeze_conjugate_number(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    squeeze_conjugate(cfg, Which::N)
}

fn squeeze_su11_form(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&[0.5, 1.0]) {
        let n = cfg.truncation;
        dev = dev.max(squeeze(p, n)?.max_abs_diff(&squeeze_su11(p, n)?));
    }
    Ok(dev)
}

const VACUUM_MAGNITUDES: [f64; 3] = [0.25, 0.5, 0.75];

fn squeezed_moments(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let a = ladder_a(n);
    let a2 = a.compose(&a)?;
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&VACUUM_MAGNITUDES) {
        check_squeeze_truncation(p.norm(), n)?;
        let eta = pure_squeezed(p, n)?;
        let r = p.norm();
        dev = dev
            .max(expectation(&eta, &a)?.max_abs())
            .max((expectation(&eta, &number_op(n))? - Quaternion::real(r.sinh().powi(2))).max_abs())
            .max(
                (expectation(&eta, &a2)? - p.polar().phase().scale(r.cosh() * r.sinh())).max_abs(),
            );
    }
    Ok(dev)
}

fn variance_product(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&VACUUM_MAGNITUDES) {
        let got = squeeze_variance_product(p, cfg.truncation)?;
        dev = dev.max((got - squeeze_variance_product_closed(p)).abs());
    }
    Ok(dev)
}

fn rotated_product(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&VACUUM_MAGNITUDES) {
        let rep = rotated_quadrature_product(p, cfg.truncation)?;
        let r = p.norm();
        dev = dev
            .max((rep.product - 0.25).abs())
            .max((rep.var_u - 0.25 * (2.0 * r).exp()).abs())
            .max((rep.var_v - 0.25 * (-2.0 * r).exp()).abs())
            .max(rep.mean_u.max_abs())
            .max(rep.mean_v.max_abs());
    }
    Ok(dev)
}

fn photon_statistics(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&VACUUM_MAGNITUDES) {
        let st = photon_stats(p, cfg.truncation)?;
        let (mean, var, q) = photon_stats_closed(p.norm());
        dev = dev
            .max((st.mean_n - mean).abs())
            .max((st.var_n - var).abs())
            .max((st.mandel_q()? - q).abs())
            .max((st.mandel_q()? - (1.0 + 2.0 * st.mean_n)).abs());
    }
    Ok(dev)
}

fn squeezed_norms(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for p in squeeze_grid(&[0.25, 0.5]) {
        let q = displacement_params(rng, 1, 1.0)[0];
        dev = dev
            .max((squeezed_sd(q, p, n)?.norm() - 1.0).abs())
            .max((squeezed_ds(q, p, n)?.norm() - 1.0).abs());
    }
    Ok(dev)
}

fn slice_check(cfg: &VerifyConfig, two_photon: bool) -> Result<f64> {
    let n = cfg.truncation;
    let mut dev: f64 = 0.0;
    for axis in test_axes() {
        for r in [0.15, 0.3] {
            let q = Quaternion::real(0.4) + axis.scale(0.2);
            let sp = SlicePair::from_polar(axis, r, 1.0, q)?;
            for which in Which::ALL {
                let c = if two_photon {
                    two_photon_conjugation(&sp, which, n)?
                } else {
                    squeezed_coherent_conjugation(&sp, which, n)?
                };
                if c.safe_dim < MIN_SAFE_DIM {
                    return Err(Error::SafeBlockTooSmall {
                        truncation: n,
                        safe_dim: c.safe_dim,
                        required: MIN_SAFE_DIM,
                    });
                }
                dev = dev.max(c.max_dev);
            }
        }
    }
    Ok(dev)
}

fn slice_two_photon(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    slice_check(cfg, true)
}

fn slice_squeezed_coherent(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    slice_check(cfg, false)
}

fn fermion_closed_form(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES / 10 {
        let q = random_quaternion(rng, 2.0);
        dev = dev.max(fermion_exponential(q).max_abs_diff(&fermion_generator(q).expm()?));
    }
    Ok(dev)
}

fn fermion_anticommutators(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let (a, ad) = fermion_ladder();
    let id = FockOperator::identity(2).with_basis(BasisTag::TwoLevel);
    let zero = FockOperator::zeros(2).with_basis(BasisTag::TwoLevel);
    Ok(a.anticommutator(&ad)?
        .max_abs_diff(&id)
        .max(a.anticommutator(&a)?.max_abs_diff(&zero))
        .max(ad.anticommutator(&ad)?.max_abs_diff(&zero)))
}

fn fermion_usual(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let (a, ad) = fermion_ladder();
    let half = Quaternion::real(-0.5);
    let j = ad.compose(&a)?.plus_scalar(half);
    Ok(ad
        .commutator(&a)?
        .max_abs_diff(&j.scale_real(2.0))
        .max(j.commutator(&a)?.max_abs_diff(&a.scale_real(-1.0)))
        .max(j.commutator(&ad)?.max_abs_diff(&ad)))
}

fn fermion_orthonormal(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut dev: f64 = 0.0;
    for _ in 0..SAMPLES / 10 {
        let q = random_quaternion(rng, 2.0);
        let pair = fermionic(q);
        let u = fermion_exponential(q);
        let e0 =
            FockVector::with_basis(vec![Quaternion::ONE, Quaternion::ZERO], BasisTag::TwoLevel);
        let e1 =
            FockVector::with_basis(vec![Quaternion::ZERO, Quaternion::ONE], BasisTag::TwoLevel);
        dev = dev
            .max((pair.eta0.inner(&pair.eta0)? - Quaternion::ONE).max_abs())
            .max((pair.eta1.inner(&pair.eta1)? - Quaternion::ONE).max_abs())
            .max(pair.eta0.inner(&pair.eta1)?.max_abs())
            .max(u.apply(&e0)?.max_abs_diff(&pair.eta0))
            .max(u.apply(&e1)?.max_abs_diff(&pair.eta1));
    }
    Ok(dev)
}

fn quadrature_gram(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let grid = QuadratureGrid::new(MeasureVariant::GaussianWeighted, 40, 20, 10, 20)?;
    let g = gram_matrix(9, &grid, cfg.exec);
    Ok(g.max_abs_diff(&FockOperator::identity(9)))
}

fn quadrature_resolution(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let grid = QuadratureGrid::new(MeasureVariant::Plain, 48, 16, 12, 16)?;
    Ok(resolution_of_identity(7, &grid, 7, cfg.exec)?.max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_passes() {
        let rep = run(&VerifyConfig::default());
        let failed: Vec<_> = rep
            .failures()
            .map(|c| (c.name, c.max_dev, c.detail.clone()))
            .collect();
        assert!(rep.passed, "{failed:?}");
        assert_eq!(rep.checks.len(), CHECKS.len());
    }

    #[test]
    fn tiny_truncation_fails_named_checks() {
        let rep = run(&VerifyConfig::new(8, DEFAULT_TOL, 0).unwrap());
        let failed: Vec<_> = rep.failures().map(|c| c.name).collect();
        assert!(!rep.passed);
        for name in [
            "coherent.eigenvector",
            "squeeze.conjugate_a",
            "squeezed_vacuum.photon_statistics",
        ] {
            assert!(failed.contains(&name), "{failed:?}");
        }
        assert!(!failed.contains(&"quaternion.algebra"));
    }

    #[test]
    fn impossible_tolerance_fails() {
        let rep = run(&VerifyConfig::new(16, 1e-30, 0).unwrap());
        assert!(!rep.passed);
    }

    #[test]
    fn config_validation() {
        assert!(VerifyConfig::new(7, 1e-7, 0).is_err());
        assert!(VerifyConfig::new(8, 0.0, 0).is_err());
        assert!(VerifyConfig::new(8, f64::NAN, 0).is_err());
    }
}
