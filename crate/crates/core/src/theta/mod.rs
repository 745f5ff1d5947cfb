//! Theta constants, gradients at `z = 0` and Jacobian determinants with rigorous error bounds.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chars::{Char2, EVEN, ODD};
use crate::error::{Error, Result};
use crate::jacobi::OddPair;
use crate::numeric::{Dd, Precision};
use crate::sympl::SpMatrix;

mod series;
pub mod verify;

use series::{bundle, general_series, tail_bound, BundleOut};

/// Relative half-ulp of an `f64` result, applied when rounding a value for output.
pub(crate) const F64_ROUND: f64 = 1.2e-16;

/// A point `τ` of the genus-2 Siegel upper half space.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SiegelPoint {
    pub t11: Complex64,
    pub t12: Complex64,
    pub t22: Complex64,
}

impl SiegelPoint {
    pub fn new(t11: Complex64, t12: Complex64, t22: Complex64) -> Result<SiegelPoint> {
        let p = SiegelPoint { t11, t12, t22 };
        let finite = [t11, t12, t22].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite || !(t11.im > 0.0) || !(p.im_det() > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(p)
    }

    /// From `re11, im11, re12, im12, re22, im22`.
    pub fn from_reals(r: [f64; 6]) -> Result<SiegelPoint> {
        SiegelPoint::new(
            Complex64::new(r[0], r[1]),
            Complex64::new(r[2], r[3]),
            Complex64::new(r[4], r[5]),
        )
    }

    pub fn to_reals(&self) -> [f64; 6] {
        [self.t11.re, self.t11.im, self.t12.re, self.t12.im, self.t22.re, self.t22.im]
    }

    pub fn diagonal(t1: Complex64, t2: Complex64) -> Result<SiegelPoint> {
        SiegelPoint::new(t1, Complex64::new(0.0, 0.0), t2)
    }

    /// `τ = i·1₂`.
    pub fn i_identity() -> SiegelPoint {
        SiegelPoint::diagonal(Complex64::i(), Complex64::i()).expect("i is in the upper half plane")
    }

    fn im_det(&self) -> f64 {
        self.t11.im * self.t22.im - self.t12.im * self.t12.im
    }

    /// Smallest eigenvalue of `Im τ`.
    pub fn im_min_eigenvalue(&self) -> f64 {
        let (a, b, c) = (self.t11.im, self.t12.im, self.t22.im);
        let tr = a + c;
        let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
        // the smaller root via det/larger root keeps relative accuracy
        self.im_det() / (0.5 * (tr + disc))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.t11.norm().max(self.t12.norm()).max(self.t22.norm())
    }

    fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.t11, self.t12], [self.t12, self.t22]]
    }

    /// `c τ + d`.
    fn ctd(&self, gamma: &SpMatrix) -> [[Complex64; 2]; 2] {
        let (_, _, c, d) = gamma.blocks();
        let t = self.matrix();
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = Complex64::from(d[i][j] as f64)
                    + t[0][j] * c[i][0] as f64
                    + t[1][j] * c[i][1] as f64;
            }
        }
        out
    }

    pub fn det_ctd(&self, gamma: &SpMatrix) -> Complex64 {
        let m = self.ctd(gamma);
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// `γτ = (aτ + b)(cτ + d)⁻¹`, symmetrized.
    pub fn act(&self, gamma: &SpMatrix) -> Result<SiegelPoint> {
        let (a, b, _, _) = gamma.blocks();
        let t = self.matrix();
        let mut num = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                num[i][j] = Complex64::from(b[i][j] as f64)
                    + t[0][j] * a[i][0] as f64
                    + t[1][j] * a[i][1] as f64;
            }
        }
        let den = self.ctd(gamma);
        let det = den[0][0] * den[1][1] - den[0][1] * den[1][0];
        let inv = [[den[1][1] / det, -den[0][1] / det], [-den[1][0] / det, den[0][0] / det]];
        let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = num[i][0] * inv[0][j] + num[i][1] * inv[1][j];
            }
        }
        SiegelPoint::new(r[0][0], (r[0][1] + r[1][0]) * 0.5, r[1][1])
    }

    /// `X + iY` with `X` symmetric uniform in `[-1, 1]` and `Y = QᵀQ + shift·1₂`.
    pub fn random<R: Rng>(rng: &mut R, shift: f64) -> SiegelPoint {
        let mut u = || rng.gen_range(-1.0..=1.0);
        let x = [u(), u(), u()];
        let q = [[u(), u()], [u(), u()]];
        let y11 = q[0][0] * q[0][0] + q[1][0] * q[1][0] + shift;
        let y12 = q[0][0] * q[0][1] + q[1][0] * q[1][1];
        let y22 = q[0][1] * q[0][1] + q[1][1] * q[1][1] + shift;
        SiegelPoint::from_reals([x[0], y11, x[1], y12, x[2], y22]).expect("shifted Gram matrix is positive definite")
    }
}

impl fmt::Display for SiegelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_reals();
        write!(f, "{},{},{},{},{},{}", r[0], r[1], r[2], r[3], r[4], r[5])
    }
}

impl std::str::FromStr for SiegelPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<SiegelPoint> {
        let v: Vec<f64> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad real {t:?}"))))
            .collect::<Result<_>>()?;
        let arr: [f64; 6] = v
            .try_into()
            .map_err(|v: Vec<f64>| Error::Parse(format!("expected 6 reals, got {}", v.len())))?;
        SiegelPoint::from_reals(arr)
    }
}

impl Serialize for SiegelPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_reals().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SiegelPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SiegelPoint, D::Error> {
        let r = <[f64; 6]>::deserialize(d)?;
        SiegelPoint::from_reals(r).map_err(serde::de::Error::custom)
    }
}

/// A complex value with an absolute error bound.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxValue {
    pub value: Complex64,
    pub abs_error: f64,
}

impl ApproxValue {
    pub fn exact(value: Complex64) -> ApproxValue {
        ApproxValue { value, abs_error: 0.0 }
    }

    pub fn zero() -> ApproxValue {
        ApproxValue::exact(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> ApproxValue {
        ApproxValue::exact(Complex64::new(1.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    /// Whether `|value| <= abs_error`, i.e. zero is not excluded.
    pub fn contains_zero(&self) -> bool {
        self.value.norm() <= self.abs_error
    }

    pub fn mul(&self, o: &ApproxValue) -> ApproxValue {
        let (a, b) = (self.norm(), o.norm());
        let value = self.value * o.value;
        let abs_error = a * o.abs_error + b * self.abs_error + self.abs_error * o.abs_error
            + 2.0 * F64_ROUND * a * b;
        ApproxValue { value, abs_error }
    }

    pub fn add(&self, o: &ApproxValue) -> ApproxValue {
        let value = self.value + o.value;
        ApproxValue { value, abs_error: self.abs_error + o.abs_error + F64_ROUND * value.norm() }
    }

    pub fn neg(&self) -> ApproxValue {
        ApproxValue { value: -self.value, abs_error: self.abs_error }
    }

    /// Multiplication by an exactly known scalar.
    pub fn scale(&self, s: Complex64) -> ApproxValue {
        let value = self.value * s;
        ApproxValue { value, abs_error: self.abs_error * s.norm() + 2.0 * F64_ROUND * value.norm() }
    }

    pub fn pow(&self, k: u32) -> ApproxValue {
        (0..k).fold(ApproxValue::one(), |acc, _| acc.mul(self))
    }
}

/// The two partial derivatives `∂/∂z₁`, `∂/∂z₂` at `z = 0`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradientValue {
    pub g1: ApproxValue,
    pub g2: ApproxValue,
}

/// All theta constants, gradients and determinants at one point.
#[derive(Clone, Debug)]
pub struct ThetaSnapshot {
    pub tau: SiegelPoint,
    /// Indexed by `Char2::bits`.
    pub theta: [ApproxValue; 16],
    /// Indexed by `Char2::bits`.
    pub grad: [GradientValue; 16],
    /// Lexicographic pair order.
    pub det: [ApproxValue; 15],
    pub radius: f64,
}

impl ThetaSnapshot {
    /// `θ_{m_i}` for a zero-based even index.
    pub fn even(&self, i: usize) -> ApproxValue {
        self.theta[EVEN[i].bits() as usize]
    }

    pub fn odd_grad(&self, k: usize) -> GradientValue {
        self.grad[ODD[k].bits() as usize]
    }

    pub fn det(&self, p: OddPair) -> ApproxValue {
        self.det[p.lex_index()]
    }
}

/// Series evaluator with a target absolute accuracy and a working precision.
#[derive(Clone, Copy, Debug)]
pub struct ThetaEvaluator {
    pub eps: f64,
    pub precision: Precision,
    /// Multiplies the truncation radius chosen from `eps`.
    pub radius_scale: f64,
}

impl ThetaEvaluator {
    pub fn new(eps: f64, precision: Precision) -> Result<ThetaEvaluator> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        Ok(ThetaEvaluator { eps, precision, radius_scale: 1.0 })
    }

    pub fn with_radius_scale(mut self, scale: f64) -> ThetaEvaluator {
        self.radius_scale = scale;
        self
    }

    /// Smallest integer radius whose tail meets half of `eps`, then scaled.
    fn radius(&self, tau: &SiegelPoint, deriv: u32, im_z: f64) -> Result<(f64, f64)> {
        let lambda = tau.im_min_eigenvalue();
        if !(lambda > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let target = 0.5 * self.eps;
        let mut r = 1.0f64;
        while tail_bound(lambda, r, deriv, im_z) > target {
            r += 1.0;
            if r > 1e5 {
                return Err(Error::InvalidArgument("truncation radius exceeds 1e5".into()));
            }
        }
        let r = r * self.radius_scale;
        Ok((r, tail_bound(lambda, r, deriv, im_z)))
    }

    fn check_floor(&self, internal: f64) -> Result<()> {
        if internal > 0.5 * self.eps {
            Err(Error::PrecisionExhausted {
                eps: self.eps,
                digits: self.precision.digits(),
                floor: 2.0 * internal,
            })
        } else {
            Ok(())
        }
    }

    /// Theta series with an arbitrary integer characteristic `(m'₁, m'₂, m''₁, m''₂)` at `z`.
    pub fn theta_series(&self, chr: [i64; 4], tau: &SiegelPoint, z: [Complex64; 2]) -> Result<ApproxValue> {
        let im_z = (z[0].im * z[0].im + z[1].im * z[1].im).sqrt();
        let (radius, tail) = self.radius(tau, 0, im_z)?;
        let out = match self.precision {
            Precision::Double => general_series::<f64>(chr, tau, z, radius),
            Precision::DoubleDouble => general_series::<Dd>(chr, tau, z, radius),
        };
        self.check_floor(out.rounding)?;
        let value = out.value;
        Ok(ApproxValue { value, abs_error: tail + out.rounding + 2.0 * F64_ROUND * value.norm() })
    }

    /// `θ_m(τ)` at `z = 0`.
    pub fn theta_constant(&self, m: Char2, tau: &SiegelPoint) -> Result<ApproxValue> {
        let p = m.mprime();
        let q = m.mdprime();
        let zero = Complex64::new(0.0, 0.0);
        self.theta_series([p[0] as i64, p[1] as i64, q[0] as i64, q[1] as i64], tau, [zero, zero])
    }

    /// Everything at once, by one pass per `m'` coset.
    pub fn snapshot(&self, tau: &SiegelPoint) -> Result<ThetaSnapshot> {
        let (radius, tail0) = self.radius(tau, 0, 0.0)?;
        let (r1, _) = self.radius(tau, 1, 0.0)?;
        let radius = radius.max(r1);
        let lambda = tau.im_min_eigenvalue();
        let tail0 = tail0.min(tail_bound(lambda, radius, 0, 0.0));
        let tail1 = tail_bound(lambda, radius, 1, 0.0);
        let out: BundleOut = match self.precision {
            Precision::Double => bundle::<f64>(tau, radius),
            Precision::DoubleDouble => bundle::<Dd>(tau, radius),
        };
        self.check_floor(out.max_rounding())?;
        let mut theta = [ApproxValue::zero(); 16];
        let mut grad = [GradientValue { g1: ApproxValue::zero(), g2: ApproxValue::zero() }; 16];
        for c in 0..16 {
            let v = out.theta[c];
            theta[c] = ApproxValue { value: v, abs_error: tail0 + out.theta_rounding[c] + 2.0 * F64_ROUND * v.norm() };
            let g = out.grad[c];
            let e = tail1 + out.grad_rounding[c];
            grad[c] = GradientValue {
                g1: ApproxValue { value: g[0], abs_error: e + 2.0 * F64_ROUND * g[0].norm() },
                g2: ApproxValue { value: g[1], abs_error: e + 2.0 * F64_ROUND * g[1].norm() },
            };
        }
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let mut det = [ApproxValue::zero(); 15];
        for p in OddPair::lex() {
            let gi = grad[ODD[p.i as usize].bits() as usize];
            let gj = grad[ODD[p.j as usize].bits() as usize];
            let v = out.det[p.lex_index()];
            let e = (gi.g2.norm() * gj.g1.abs_error
                + gj.g1.norm() * gi.g2.abs_error
                + gi.g2.abs_error * gj.g1.abs_error
                + gi.g1.norm() * gj.g2.abs_error
                + gj.g2.norm() * gi.g1.abs_error
                + gi.g1.abs_error * gj.g2.abs_error)
                / pi2;
            det[p.lex_index()] = ApproxValue { value: v, abs_error: e + out.det_rounding[p.lex_index()] + 2.0 * F64_ROUND * v.norm() };
        }
        Ok(ThetaSnapshot { tau: *tau, theta, grad, det, radius })
    }

    /// Gradient of `θ_n(τ, z)` at `z = 0` for odd `n`.
    pub fn theta_gradient(&self, n: Char2, tau: &SiegelPoint) -> Result<GradientValue> {
        if n.is_even() {
            return Err(Error::EvenCharacteristic(n));
        }
        Ok(self.snapshot(tau)?.grad[n.bits() as usize])
    }

    /// `D(a, b)`, antisymmetric in its arguments; `D(n, n) = 0`.
    pub fn jacobian_det(&self, a: Char2, b: Char2, tau: &SiegelPoint) -> Result<ApproxValue> {
        for c in [a, b] {
            if c.is_even() {
                return Err(Error::EvenCharacteristic(c));
            }
        }
        if a == b {
            return Ok(ApproxValue::zero());
        }
        let (i, j) = (a.odd_index().expect("odd"), b.odd_index().expect("odd"));
        let d = self.snapshot(tau)?.det(OddPair::new(i, j));
        Ok(if i < j { d } else { d.neg() })
    }
}

#[cfg(test)]
mod tests;
