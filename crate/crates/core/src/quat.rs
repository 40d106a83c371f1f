//! Real quaternions `q0 + q1 i + q2 j + q3 k`, their 2×2 complex matrix
//! image, polar and slice decompositions, and scalar series.
//!
//! The matrix image is
//!
//! ```text
//!     ( q0 + i q3   -q2 + i q1 )
//!     ( q2 + i q1    q0 - i q3 )
//! ```
//!
//! which identifies `i = √-1 σ1`, `j = -√-1 σ2`, `k = √-1 σ3`. It is an
//! injective ring homomorphism, and quaternion conjugation maps to the matrix
//! adjoint.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by [`Quaternion::from_matrix`] for the shape check.
pub const MATRIX_SHAPE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.q0, q.q1, q.q2, q.q3]
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Quaternion::real(x)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Quaternion { q0, q1, q2, q3 }
    }

    #[inline]
    pub const fn real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }

    /// Pure imaginary quaternion with vector part `v`.
    #[inline]
    pub const fn imaginary(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    #[inline]
    pub fn components(self) -> [f64; 4] {
        self.into()
    }

    #[inline]
    pub fn conj(self) -> Self {
        Quaternion::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    /// `|q|`, computed with `hypot` to avoid overflow for huge components.
    #[inline]
    pub fn norm(self) -> f64 {
        self.q0.hypot(self.q1).hypot(self.q2.hypot(self.q3))
    }

    /// Largest absolute component; the entrywise distance used by tolerance checks.
    #[inline]
    pub fn max_abs(self) -> f64 {
        self.q0
            .abs()
            .max(self.q1.abs())
            .max(self.q2.abs())
            .max(self.q3.abs())
    }

    #[inline]
    pub fn vector(self) -> Quaternion {
        Quaternion::new(0.0, self.q1, self.q2, self.q3)
    }

    #[inline]
    pub fn vector_norm(self) -> f64 {
        self.q1.hypot(self.q2).hypot(self.q3)
    }

    #[inline]
    pub fn is_real(self) -> bool {
        self.q1 == 0.0 && self.q2 == 0.0 && self.q3 == 0.0
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        (n2 > 0.0).then(|| self.conj().scale(1.0 / n2))
    }

    /// `q / |q|`, or `None` for zero.
    pub fn unit(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Quaternion::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn commutes_with(self, other: Quaternion, tol: f64) -> bool {
        (self * other - other * self).max_abs() <= tol
    }

    /// `|q² + 1|`; zero exactly for unit imaginary quaternions.
    pub fn axis_defect(self) -> f64 {
        (self * self + Quaternion::ONE).norm()
    }

    /// Image under the 2×2 complex representation.
    pub fn to_matrix(self) -> ComplexMatrix2 {
        ComplexMatrix2::new([
            Complex64::new(self.q0, self.q3),
            Complex64::new(-self.q2, self.q1),
            Complex64::new(self.q2, self.q1),
            Complex64::new(self.q0, -self.q3),
        ])
    }

    /// Inverse of [`Quaternion::to_matrix`]; rejects matrices off the image.
    pub fn from_matrix(m: &ComplexMatrix2) -> Result<Self> {
        let violation = m.quaternion_shape_violation();
        if violation > MATRIX_SHAPE_TOL {
            return Err(Error::MalformedMatrix { violation });
        }
        Ok(Quaternion::from_matrix_unchecked(m))
    }

    /// Projection onto the quaternion image (averages the redundant entries).
    pub fn from_matrix_unchecked(m: &ComplexMatrix2) -> Self {
        let [a, b, c, d] = m.entries;
        Quaternion::new(
            0.5 * (a.re + d.re),
            0.5 * (b.im + c.im),
            0.5 * (c.re - b.re),
            0.5 * (a.im - d.im),
        )
    }

    /// `(r, θ, φ, ψ)` with `q0 = r cos θ`, `q1 = r sin θ sin φ cos ψ`,
    /// `q2 = r sin θ sin φ sin ψ`, `q3 = r sin θ cos φ`.
    ///
    /// Degenerate directions are fixed deterministically: all angles are zero
    /// for `q = 0`; `φ = ψ = 0` when the vector part vanishes; `ψ = 0` when the
    /// vector part lies on the `k` axis.
    pub fn polar(self) -> PolarForm {
        let r = self.norm();
        if r == 0.0 {
            return PolarForm::from_angles(0.0, 0.0, 0.0, 0.0);
        }
        let v = self.vector_norm();
        let theta = v.atan2(self.q0);
        let (phi, psi) = if v == 0.0 {
            (0.0, 0.0)
        } else {
            let phi = (self.q3 / v).clamp(-1.0, 1.0).acos();
            let rho = self.q1.hypot(self.q2);
            let psi = if rho == 0.0 {
                0.0
            } else {
                let a = self.q2.atan2(self.q1);
                if a < 0.0 {
                    a + std::f64::consts::TAU
                } else {
                    a
                }
            };
            (phi, psi)
        };
        PolarForm::from_angles(r, theta, phi, psi)
    }

    /// `q = x + axis·y` with `y ≥ 0` and `axis` a unit imaginary quaternion;
    /// real quaternions get `axis = i`.
    pub fn slice(self) -> SliceElement {
        let y = self.vector_norm();
        let axis = if y == 0.0 {
            Quaternion::I
        } else {
            self.vector().scale(1.0 / y)
        };
        SliceElement {
            x: self.q0,
            y,
            axis,
        }
    }

    /// `e^q = e^x (cos y + I sin y)` for `q = x + I y`.
    pub fn exp(self) -> Self {
        let y = self.vector_norm();
        let ex = self.q0.exp();
        let s = ex * sinc(y);
        Quaternion::new(ex * y.cos(), self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

/// `sin x / x`, with the removable singularity at 0 handled by its series.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Star exponential `Σ_m p^m q^m / m!`.
///
/// Summation stops once `e^{|p||q|} (|p||q|)^m / m!`, which bounds the
/// remainder of the dominating real series, drops below `1e-16`.
pub fn star_exp(p: Quaternion, q: Quaternion) -> Quaternion {
    star_exp_with_terms(p, q).0
}

/// [`star_exp`] together with the number of terms summed.
pub fn star_exp_with_terms(p: Quaternion, q: Quaternion) -> (Quaternion, usize) {
    const CUTOFF: f64 = 1e-16;
    const MAX_TERMS: usize = 100_000;
    let x = p.norm() * q.norm();
    let envelope = x.exp();
    let mut pm = Quaternion::ONE;
    let mut qm = Quaternion::ONE;
    let mut bound = 1.0; // x^m / m!
    let mut sum = Quaternion::ZERO;
    let mut inv_fact = 1.0;
    let mut m = 0usize;
    loop {
        sum += (pm * qm).scale(inv_fact);
        m += 1;
        bound *= x / m as f64;
        if (envelope * bound < CUTOFF && m as f64 > x) || m >= MAX_TERMS {
            break;
        }
        pm *= p;
        qm *= q;
        inv_fact /= m as f64;
    }
    (sum, m)
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.q0 + o.q0,
            self.q1 + o.q1,
            self.q2 + o.q2,
            self.q3 + o.q3,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.q0 - o.q0,
            self.q1 - o.q1,
            self.q2 - o.q2,
            self.q3 - o.q3,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

/// Hamilton product: `ij = -ji = k`, `jk = -kj = i`, `ki = -ik = j`.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (o.q0, o.q1, o.q2, o.q3);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        self.scale(1.0 / s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q0)?;
        for (c, unit) in [(self.q1, 'i'), (self.q2, 'j'), (self.q3, 'k')] {
            if c.is_sign_negative() {
                write!(f, "{c}{unit}")?;
            } else {
                write!(f, "+{c}{unit}")?;
            }
        }
        Ok(())
    }
}

/// Parses literals of the form `a+bi+cj+dk`. Every term is optional, a bare
/// unit means coefficient 1 (`-j` is `-1j`), and whitespace is rejected.
/// Errors report the 1-based column of the offending token.
impl FromStr for Quaternion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let err = |start: usize, end: usize, reason: &str| Error::Parse {
            token: s.get(start..end.min(s.len())).unwrap_or("").to_string(),
            column: start + 1,
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(err(0, 0, "empty quaternion literal"));
        }
        let mut comps = [None::<f64>; 4];
        let mut pos = 0;
        while pos < bytes.len() {
            let start = pos;
            let mut sign = 1.0;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1.0;
                }
                pos += 1;
            } else if start != 0 {
                return Err(err(start, start + 1, "expected '+' or '-' between terms"));
            }
            let num_start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                pos += 1;
            }
            if pos < bytes.len() && pos > num_start && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                let mut look = pos + 1;
                if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                    look += 1;
                }
                let digits = look;
                while look < bytes.len() && bytes[look].is_ascii_digit() {
                    look += 1;
                }
                if look > digits {
                    pos = look;
                }
            }
            let magnitude = if pos > num_start {
                s[num_start..pos]
                    .parse::<f64>()
                    .map_err(|_| err(num_start, pos, "malformed number"))?
            } else {
                1.0
            };
            let slot = match bytes.get(pos) {
                Some(b'i') => {
                    pos += 1;
                    1
                }
                Some(b'j') => {
                    pos += 1;
                    2
                }
                Some(b'k') => {
                    pos += 1;
                    3
                }
                Some(b'+') | Some(b'-') | None => {
                    if pos == num_start {
                        return Err(err(start, pos.max(start + 1), "missing coefficient"));
                    }
                    0
                }
                Some(_) => return Err(err(pos, pos + 1, "unexpected character")),
            };
            if comps[slot].is_some() {
                return Err(err(start, pos, "component given twice"));
            }
            comps[slot] = Some(sign * magnitude);
        }
        let c = comps.map(|x| x.unwrap_or(0.0));
        Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix2 {
    pub entries: [Complex64; 4],
}

impl ComplexMatrix2 {
    pub const fn new(entries: [Complex64; 4]) -> Self {
        ComplexMatrix2 { entries }
    }

    pub fn identity() -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        ComplexMatrix2::new([o, z, z, o])
    }

    /// Pauli matrices σ1, σ2, σ3 (index 1..=3); σ0 for index 0.
    pub fn pauli(index: usize) -> Self {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let im = Complex64::new(0.0, 1.0);
        match index {
            0 => ComplexMatrix2::identity(),
            1 => ComplexMatrix2::new([z, o, o, z]),
            2 => ComplexMatrix2::new([z, -im, im, z]),
            3 => ComplexMatrix2::new([o, z, z, -o]),
            _ => panic!("pauli index out of range: {index}"),
        }
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.entries;
        ComplexMatrix2::new([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix2::new(self.entries.map(|x| x * s))
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix2) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Distance from the quaternion image: `m11 = conj(m00)`, `m10 = -conj(m01)`.
    pub fn quaternion_shape_violation(&self) -> f64 {
        let [a, b, c, d] = self.entries;
        (d - a.conj()).norm().max((c + b.conj()).norm())
    }
}

impl Add for ComplexMatrix2 {
    type Output = ComplexMatrix2;
    fn add(self, o: ComplexMatrix2) -> ComplexMatrix2 {
        let mut e = self.entries;
        for (x, y) in e.iter_mut().zip(o.entries) {
            *x += y;
        }
        ComplexMatrix2::new(e)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = ComplexMatrix2;
    fn mul(self, o: ComplexMatrix2) -> ComplexMatrix2 {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = o.entries;
        ComplexMatrix2::new([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

/// Polar coordinates of a quaternion together with the self-adjoint,
/// involutive direction matrix
///
/// ```text
///     σ(n̂) = ( cos φ          sin φ e^{iψ} )
///            ( sin φ e^{-iψ}  -cos φ       )
/// ```
///
/// so that the matrix image equals `r (cos θ σ0 + i sin θ σ(n̂))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarForm {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
    pub sigma_n: ComplexMatrix2,
}

impl PolarForm {
    pub fn from_angles(r: f64, theta: f64, phi: f64, psi: f64) -> Self {
        let (sp, cp) = phi.sin_cos();
        let e = Complex64::from_polar(sp, psi);
        let sigma_n = ComplexMatrix2::new([
            Complex64::new(cp, 0.0),
            e,
            e.conj(),
            Complex64::new(-cp, 0.0),
        ]);
        PolarForm {
            r,
            theta,
            phi,
            psi,
            sigma_n,
        }
    }

    /// Unit imaginary quaternion whose image is `√-1 σ(n̂)`.
    pub fn axis(&self) -> Quaternion {
        let (sp, cp) = self.phi.sin_cos();
        let (ss, cs) = self.psi.sin_cos();
        Quaternion::imaginary([sp * cs, sp * ss, cp])
    }

    /// `e^{iθσ(n̂)}` as a unit quaternion: `cos θ + sin θ · axis`.
    pub fn phase(&self) -> Quaternion {
        self.phase_scaled(1.0)
    }

    /// `e^{i s θ σ(n̂)}`, e.g. `s = ±1/2` for the rotated quadratures.
    pub fn phase_scaled(&self, s: f64) -> Quaternion {
        let (st, ct) = (s * self.theta).sin_cos();
        Quaternion::real(ct) + self.axis().scale(st)
    }

    /// `A(r) e^{iθσ(n̂)} = r (cos θ σ0 + i sin θ σ(n̂))`.
    pub fn reconstruct_matrix(&self) -> ComplexMatrix2 {
        let (st, ct) = self.theta.sin_cos();
        let id = ComplexMatrix2::identity().scale(Complex64::new(self.r * ct, 0.0));
        id + self.sigma_n.scale(Complex64::new(0.0, self.r * st))
    }

    pub fn reconstruct(&self) -> Quaternion {
        self.phase().scale(self.r)
    }
}

/// `x + axis·y` with `y ≥ 0` on the commutative slice through `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceElement {
    pub x: f64,
    pub y: f64,
    pub axis: Quaternion,
}

impl SliceElement {
    pub fn value(&self) -> Quaternion {
        Quaternion::real(self.x) + self.axis.scale(self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Left-multiplication matrix of `p` acting on `(q0, q1, q2, q3)`; an
    /// oracle for the Hamilton product that never calls `Mul`.
    fn left_matrix(p: Quaternion) -> [[f64; 4]; 4] {
        let [a, b, c, d] = p.components();
        [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]]
    }

    fn oracle_mul(p: Quaternion, q: Quaternion) -> Quaternion {
        let m = left_matrix(p);
        let v = q.components();
        let mut out = [0.0; 4];
        for r in 0..4 {
            out[r] = (0..4).map(|c| m[r][c] * v[c]).sum();
        }
        out.into()
    }

    #[test]
    fn unit_products() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::I * Q::I, -Q::ONE);
        let q = Q::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(Q::ONE * q, q);
    }

    #[test]
    fn product_matches_real_matrix_oracle() {
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let q = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(oracle_mul(p, q), Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_eq!(p * q, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        let a = Quaternion::new(0.7, -0.2, 1.3, -2.1);
        let b = Quaternion::new(-1.1, 0.4, 0.9, 0.25);
        assert!((a * b - oracle_mul(a, b)).max_abs() < 1e-15);
    }

    #[test]
    fn norms() {
        assert_eq!(Quaternion::I.norm(), 1.0);
        assert_eq!(Quaternion::new(1.0, 1.0, 1.0, 1.0).norm(), 2.0);
        assert_eq!(Quaternion::ZERO.norm(), 0.0);
    }

    #[test]
    fn matrix_image_of_units() {
        let m = Quaternion::I.to_matrix();
        let z = Complex64::new(0.0, 0.0);
        let im = Complex64::new(0.0, 1.0);
        assert_eq!(m, ComplexMatrix2::new([z, im, im, z]));
        assert_eq!(Quaternion::ONE.to_matrix(), ComplexMatrix2::identity());
        // i = √-1 σ1, j = -√-1 σ2, k = √-1 σ3
        assert_eq!(
            Quaternion::J.to_matrix(),
            ComplexMatrix2::pauli(2).scale(Complex64::new(0.0, -1.0))
        );
        assert_eq!(
            Quaternion::K.to_matrix(),
            ComplexMatrix2::pauli(3).scale(Complex64::new(0.0, 1.0))
        );
    }

    #[test]
    fn from_matrix_rejects_off_image() {
        let mut m = Quaternion::new(1.0, 2.0, 3.0, 4.0).to_matrix();
        assert_eq!(
            Quaternion::from_matrix(&m).unwrap(),
            Quaternion::new(1.0, 2.0, 3.0, 4.0)
        );
        m.entries[3] += Complex64::new(1e-3, 0.0);
        assert!(matches!(
            Quaternion::from_matrix(&m),
            Err(Error::MalformedMatrix { .. })
        ));
    }

    #[test]
    fn polar_examples() {
        let p = Quaternion::ONE.polar();
        assert_eq!((p.r, p.theta), (1.0, 0.0));
        let p = Quaternion::I.polar();
        assert_eq!(p.r, 1.0);
        assert!((p.theta - FRAC_PI_2).abs() < 1e-15);
        assert!((p.phi - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(p.psi, 0.0);
        let z = Quaternion::ZERO.polar();
        assert_eq!((z.r, z.theta, z.phi, z.psi), (0.0, 0.0, 0.0, 0.0));
        // real negative: θ = π, direction falls back to σ3
        let m = Quaternion::real(-2.0).polar();
        assert!((m.theta - PI).abs() < 1e-15);
        assert_eq!(m.sigma_n, ComplexMatrix2::pauli(3));
        assert!((m.reconstruct() - Quaternion::real(-2.0)).max_abs() < 1e-15);
    }

    #[test]
    fn sigma_n_is_involutive_and_self_adjoint() {
        let p = Quaternion::new(0.3, -0.4, 1.2, -0.7).polar();
        let s = p.sigma_n;
        assert!((s * s).max_abs_diff(&ComplexMatrix2::identity()) < 1e-15);
        assert!(s.adjoint().max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn exp_examples() {
        assert_eq!(Quaternion::ZERO.exp(), Quaternion::ONE);
        let e = Quaternion::new(0.0, PI, 0.0, 0.0).exp();
        assert!((e + Quaternion::ONE).max_abs() < 1e-15);
        // series oracle for e^{jπ/2}
        let q = Quaternion::J.scale(FRAC_PI_2);
        let mut term = Quaternion::ONE;
        let mut sum = Quaternion::ONE;
        for n in 1..40 {
            term = term * q / n as f64;
            sum += term;
        }
        assert!((q.exp() - sum).max_abs() < 1e-14);
        assert!((q.exp() - Quaternion::J).max_abs() < 1e-15);
    }

    fn brute_star_exp(p: Quaternion, q: Quaternion, terms: usize) -> Quaternion {
        let mut sum = Quaternion::ZERO;
        for m in 0..terms {
            let mut t = Quaternion::ONE;
            for _ in 0..m {
                t *= p;
            }
            for _ in 0..m {
                t *= q;
            }
            let fact: f64 = (1..=m).map(|x| x as f64).product();
            sum += t / fact;
        }
        sum
    }

    #[test]
    fn star_exp_examples() {
        let p = Quaternion::real(0.7);
        let q = Quaternion::new(0.1, 0.4, -0.3, 0.2);
        assert!((star_exp(p, q) - (p * q).exp()).max_abs() < 1e-14);

        let axis = Quaternion::new(0.0, 1.0, 1.0, 1.0).unit().unwrap();
        let p = Quaternion::real(0.2) + axis.scale(0.9);
        let q = Quaternion::real(-0.5) + axis.scale(0.3);
        assert!((star_exp(p, q) - (p * q).exp()).max_abs() < 1e-14);

        let s = star_exp(Quaternion::I, Quaternion::J);
        assert!((s - brute_star_exp(Quaternion::I, Quaternion::J, 30)).max_abs() < 1e-14);
        assert!(s.norm() <= 1f64.exp());
        // noncommuting witness: the star exponential is not exp(pq)
        assert!((s - (Quaternion::I * Quaternion::J).exp()).max_abs() > 1e-2);
    }

    #[test]
    fn slice_examples() {
        let s = Quaternion::new(3.0, 4.0, 0.0, 0.0).slice();
        assert_eq!((s.x, s.y, s.axis), (3.0, 4.0, Quaternion::I));
        let q = Quaternion::new(1.0, 0.0, 1.0, 1.0);
        let s = q.slice();
        assert!((s.y - 2f64.sqrt()).abs() < 1e-15);
        let h = 1.0 / 2f64.sqrt();
        assert!((s.axis - Quaternion::new(0.0, 0.0, h, h)).max_abs() < 1e-15);
        assert!((s.value() - q).max_abs() < 1e-15);
        let r = Quaternion::real(-2.5).slice();
        assert_eq!((r.y, r.axis), (0.0, Quaternion::I));
    }

    #[test]
    fn slices_commute_only_when_aligned() {
        let axis = Quaternion::new(0.0, 0.3, -0.4, 1.2).unit().unwrap();
        let a = Quaternion::real(0.4) + axis.scale(1.1);
        let b = Quaternion::real(-2.0) + axis.scale(0.25);
        assert!(a.commutes_with(b, 1e-15));
        assert!(!Quaternion::I.commutes_with(Quaternion::J, 1e-3));
    }

    #[test]
    fn parse_literals() {
        let q: Quaternion = "1+2i-3j+4k".parse().unwrap();
        assert_eq!(q, Quaternion::new(1.0, 2.0, -3.0, 4.0));
        assert_eq!("j".parse::<Quaternion>().unwrap(), Quaternion::J);
        assert_eq!("-k".parse::<Quaternion>().unwrap(), -Quaternion::K);
        assert_eq!("0".parse::<Quaternion>().unwrap(), Quaternion::ZERO);
        assert_eq!(
            "1.5e-1i+2".parse::<Quaternion>().unwrap(),
            Quaternion::new(2.0, 0.15, 0.0, 0.0)
        );
        assert_eq!(
            "0.5+0.2i".parse::<Quaternion>().unwrap(),
            Quaternion::new(0.5, 0.2, 0.0, 0.0)
        );
    }

    #[test]
    fn parse_errors_cite_column() {
        match "1+2x".parse::<Quaternion>() {
            Err(Error::Parse { column, token, .. }) => {
                assert_eq!(column, 4);
                assert_eq!(token, "x");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!("".parse::<Quaternion>(), Err(Error::Parse { .. })));
        assert!(matches!(
            "1i+2i".parse::<Quaternion>(),
            Err(Error::Parse { column: 3, .. })
        ));
        assert!(matches!(
            "1 + i".parse::<Quaternion>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "+".parse::<Quaternion>(),
            Err(Error::Parse { column: 1, .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        let q = Quaternion::new(0.25, -1.5, 3.0, -0.125);
        assert_eq!(q.to_string().parse::<Quaternion>().unwrap(), q);
    }
}
