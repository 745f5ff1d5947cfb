use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::{Complex, Complex64};

use super::SiegelPoint;
use crate::chars::ODD;
use crate::jacobi::OddPair;
use crate::numeric::Real;

/// Bound on `Σ_{‖x‖>r} (2π‖x‖)^deriv · exp(-πλ‖x‖² + 2π‖x‖ζ)` over a shifted unit lattice.
///
/// Shells `[s, s+1)` hold at most `π(s + 1 + 1/√2)²` points.
pub fn tail_bound(lambda: f64, r: f64, deriv: u32, im_z: f64) -> f64 {
    let mut total = 0.0;
    for k in 0..200_000 {
        let s = r + k as f64;
        let count = PI * (s + 1.0 + FRAC_1_SQRT_2).powi(2);
        let growth = (2.0 * PI * (s + 1.0)).powi(deriv as i32);
        let expo = -PI * lambda * s * s + 2.0 * PI * (s + 1.0) * im_z;
        let term = count * growth * expo.exp();
        total += term;
        let decreasing = lambda * s > im_z + 1.0;
        if decreasing && (term <= total * 1e-18 || term == 0.0) {
            break;
        }
    }
    total
}

fn to_c64<R: Real>(z: Complex<R>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

/// Multiply by `i^k`.
fn rot<R: Real>(z: Complex<R>, k: i64) -> Complex<R> {
    match k.rem_euclid(4) {
        0 => z,
        1 => Complex::new(-z.im, z.re),
        2 => Complex::new(-z.re, -z.im),
        _ => Complex::new(z.im, -z.re),
    }
}

struct Entries<R> {
    x: [R; 3],
    y: [R; 3],
    scale: f64,
}

fn entries<R: Real>(tau: &SiegelPoint) -> Entries<R> {
    let r = tau.to_reals();
    let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Entries {
        x: [R::from_f64(r[0]), R::from_f64(r[2]), R::from_f64(r[4])],
        y: [R::from_f64(r[1]), R::from_f64(r[3]), R::from_f64(r[5])],
        scale,
    }
}

pub struct BundleOut {
    pub theta: [Complex64; 16],
    pub grad: [[Complex64; 2]; 16],
    pub det: [Complex64; 15],
    pub theta_rounding: [f64; 16],
    pub grad_rounding: [f64; 16],
    pub det_rounding: [f64; 15],
}

impl BundleOut {
    pub fn max_rounding(&self) -> f64 {
        self.theta_rounding.iter().chain(&self.grad_rounding).fold(0.0, |m, &v| m.max(v))
    }
}

/// Theta constants and `z`-gradients at `z = 0` for all sixteen characteristics.
///
/// For a fixed `m'` the sum `Σ_n (-1)^{n·m''} exp(πi xᵀτx)` is shared by the four `m''`,
/// and `exp(πi xᵀm'') = (-1)^{n·m''} i^{m'·m''}`.
pub fn bundle<R: Real>(tau: &SiegelPoint, radius: f64) -> BundleOut {
    let e = entries::<R>(tau);
    let two = R::from_f64(2.0);
    let pi = R::pi();
    let nmax = radius.ceil() as i64 + 1;
    let zero = Complex::new(R::zero(), R::zero());

    let mut theta_r = [zero; 16];
    let mut grad_r = [[zero; 2]; 16];
    let mut theta_rounding = [0.0; 16];
    let mut grad_rounding = [0.0; 16];

    for mp in 0..4u8 {
        let half = [f64::from(mp >> 1) * 0.5, f64::from(mp & 1) * 0.5];
        let mut s = [zero; 4];
        let mut g = [[zero; 2]; 4];
        let (mut abs_sum, mut abs_grad, mut count, mut arg_max) = (0.0f64, 0.0f64, 0usize, 0.0f64);
        for n1 in -nmax..=nmax {
            for n2 in -nmax..=nmax {
                let xf = [n1 as f64 + half[0], n2 as f64 + half[1]];
                let norm2 = xf[0] * xf[0] + xf[1] * xf[1];
                if norm2 > radius * radius {
                    continue;
                }
                let (a, b) = (R::from_f64(xf[0]), R::from_f64(xf[1]));
                let (aa, ab, bb) = (a * a, two * a * b, b * b);
                let re = e.x[0] * aa + e.x[1] * ab + e.x[2] * bb;
                let im = e.y[0] * aa + e.y[1] * ab + e.y[2] * bb;
                let mag = (-(pi * im)).exp();
                let (sn, cs) = re.sin_cos_pi();
                let t = Complex::new(mag * cs, mag * sn);
                let tx = [t * a, t * b];
                for k in 0..4usize {
                    let odd = ((n1 * (k as i64 >> 1)) + (n2 * (k as i64 & 1))).rem_euclid(2) == 1;
                    if odd {
                        s[k] = s[k] - t;
                        g[k][0] = g[k][0] - tx[0];
                        g[k][1] = g[k][1] - tx[1];
                    } else {
                        s[k] = s[k] + t;
                        g[k][0] = g[k][0] + tx[0];
                        g[k][1] = g[k][1] + tx[1];
                    }
                }
                let m = mag.to_f64();
                abs_sum += m;
                abs_grad += m * norm2.sqrt();
                count += 1;
                arg_max = arg_max.max(4.0 * PI * e.scale * norm2);
            }
        }
        let rel = R::ROUNDOFF * (count as f64 + 40.0 + arg_max);
        let two_pi_i = Complex::new(R::zero(), two * pi);
        for k in 0..4u8 {
            let c = ((mp << 2) | k) as usize;
            let phase = i64::from((mp >> 1) * (k >> 1) + (mp & 1) * (k & 1));
            theta_r[c] = rot(s[k as usize], phase);
            grad_r[c] = [
                rot(g[k as usize][0], phase) * two_pi_i,
                rot(g[k as usize][1], phase) * two_pi_i,
            ];
            theta_rounding[c] = rel * abs_sum;
            grad_rounding[c] = rel * 2.0 * PI * abs_grad;
        }
    }

    let pi2 = pi * pi;
    let mut det = [Complex64::new(0.0, 0.0); 15];
    let mut det_rounding = [0.0; 15];
    for p in OddPair::lex() {
        let gi = grad_r[ODD[p.i as usize].bits() as usize];
        let gj = grad_r[ODD[p.j as usize].bits() as usize];
        let d = (gi[1] * gj[0] - gi[0] * gj[1]) / Complex::new(pi2, R::zero());
        det[p.lex_index()] = to_c64(d);
        let mag = to_c64(gi[1]).norm() * to_c64(gj[0]).norm() + to_c64(gi[0]).norm() * to_c64(gj[1]).norm();
        det_rounding[p.lex_index()] = 16.0 * R::ROUNDOFF * mag / (PI * PI);
    }

    BundleOut {
        theta: theta_r.map(to_c64),
        grad: grad_r.map(|g| g.map(to_c64)),
        det,
        theta_rounding,
        grad_rounding,
        det_rounding,
    }
}

pub struct SeriesOut {
    pub value: Complex64,
    pub rounding: f64,
}

/// `Σ_n exp(πi(xᵀτx + 2xᵀ(z + m''/2)))`, `x = n + m'/2`, for any integer characteristic.
pub fn general_series<R: Real>(chr: [i64; 4], tau: &SiegelPoint, z: [Complex64; 2], radius: f64) -> SeriesOut {
    let e = entries::<R>(tau);
    let two = R::from_f64(2.0);
    let pi = R::pi();
    let off = [chr[0] as f64 * 0.5, chr[1] as f64 * 0.5];
    let mdp = [R::from_f64(chr[2] as f64), R::from_f64(chr[3] as f64)];
    let zr = [R::from_f64(z[0].re), R::from_f64(z[1].re)];
    let zi = [R::from_f64(z[0].im), R::from_f64(z[1].im)];
    let zscale = z[0].norm().max(z[1].norm()) + (chr[2].abs().max(chr[3].abs())) as f64;
    let range = |o: f64| ((-o - radius).floor() as i64 - 1)..=((-o + radius).ceil() as i64 + 1);
    let mut sum = Complex::new(R::zero(), R::zero());
    let (mut abs_sum, mut count, mut arg_max) = (0.0f64, 0usize, 0.0f64);
    for n1 in range(off[0]) {
        for n2 in range(off[1]) {
            let xf = [n1 as f64 + off[0], n2 as f64 + off[1]];
            let norm2 = xf[0] * xf[0] + xf[1] * xf[1];
            if norm2 > radius * radius {
                continue;
            }
            let (a, b) = (R::from_f64(xf[0]), R::from_f64(xf[1]));
            let (aa, ab, bb) = (a * a, two * a * b, b * b);
            let re = e.x[0] * aa + e.x[1] * ab + e.x[2] * bb
                + two * (a * zr[0] + b * zr[1])
                + a * mdp[0]
                + b * mdp[1];
            let im = e.y[0] * aa + e.y[1] * ab + e.y[2] * bb + two * (a * zi[0] + b * zi[1]);
            let mag = (-(pi * im)).exp();
            let (sn, cs) = re.sin_cos_pi();
            sum = sum + Complex::new(mag * cs, mag * sn);
            abs_sum += mag.to_f64();
            count += 1;
            let n = norm2.sqrt();
            arg_max = arg_max.max(4.0 * PI * (e.scale * norm2 + zscale * n));
        }
    }
    let rounding = R::ROUNDOFF * (count as f64 + 40.0 + arg_max) * abs_sum;
    SeriesOut { value: to_c64(sum), rounding }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bound_decreases_in_radius() {
        let a = tail_bound(0.5, 3.0, 0, 0.0);
        let b = tail_bound(0.5, 4.0, 0, 0.0);
        assert!(b < a && b > 0.0);
        assert!(tail_bound(0.5, 4.0, 1, 0.0) > b);
        assert!(tail_bound(0.5, 4.0, 0, 0.1) > b);
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        // Genus-2 tail for τ = i·1₂ against the exact lattice sum beyond r.
        let r = 2.0;
        let mut actual = 0.0;
        for n1 in -30i64..=30 {
            for n2 in -30i64..=30 {
                let x2 = (n1 * n1 + n2 * n2) as f64;
                if x2 > r * r {
                    actual += (-PI * x2).exp();
                }
            }
        }
        assert!(tail_bound(1.0, r, 0, 0.0) >= actual);
    }
}
