//! Double-double floating point: an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, One, Zero};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const PI: Dd = Dd { hi: 3.141_592_653_589_793_1, lo: 1.224_646_799_147_353_2e-16 };
    pub const LN2: Dd = Dd { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };
    pub const E: Dd = Dd { hi: 2.718_281_828_459_045, lo: 1.445_646_891_729_250_2e-16 };

    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn new(hi: f64, lo: f64) -> Dd {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let (h, l) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi: h, lo: l }
    }

    /// Exact scaling by a power of two.
    pub fn ldexp(self, k: i32) -> Dd {
        let scale = |x: f64| {
            if (-1000..=1000).contains(&k) {
                x * 2f64.powi(k)
            } else {
                x * 2f64.powi(k / 2) * 2f64.powi(k - k / 2)
            }
        };
        Dd { hi: scale(self.hi), lo: scale(self.lo) }
    }

    /// Nearest integer (ties may go either way).
    pub fn round(self) -> Dd {
        let r = self.hi.round();
        if r == self.hi {
            let (h, l) = quick_two_sum(r, self.lo.round());
            Dd { hi: h, lo: l }
        } else {
            let d = (self - Dd::from_f64(r)).to_f64();
            Dd::from_f64(r + d.round())
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::zero();
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = (self - Dd::LN2.mul_f64(k)).ldexp(-10);
        // expm1 by Taylor series on |r| < 4e-4, then doubled ten times.
        let mut s = r;
        let mut term = r;
        for i in 2..20 {
            term = (term * r) / Dd::from_f64(i as f64);
            s = s + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            s = s * (s + Dd::from_f64(2.0));
        }
        (s + Dd::one()).ldexp(k as i32)
    }

    /// `(sin πx, cos πx)`, with the argument reduced modulo 2 in double-double.
    pub fn sin_cos_pi(self) -> (Dd, Dd) {
        let t = self - (self.ldexp(-1).round()).ldexp(1);
        let q = t.ldexp(1).round().to_f64();
        let r = t - Dd::from_f64(q * 0.5);
        let x = Dd::PI * r;
        let x2 = x * x;
        let mut s = x;
        let mut c = Dd::one();
        let mut ts = x;
        let mut tc = Dd::one();
        let mut k = 1.0;
        loop {
            ts = -(ts * x2) / Dd::from_f64((k + 1.0) * (k + 2.0));
            tc = -(tc * x2) / Dd::from_f64(k * (k + 1.0));
            s = s + ts;
            c = c + tc;
            k += 2.0;
            if ts.hi.abs() < 1e-36 && tc.hi.abs() < 1e-36 {
                break;
            }
        }
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&o.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (h, l) = quick_two_sum(s1, s2 + t2);
        Dd { hi: h, lo: l }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let (h, l) = quick_two_sum(p1, p2 + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi: h, lo: l }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + Dd::from_f64(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        let q = self / b;
        let t = if q.hi < 0.0 { -((-q).floor_pos()) } else { q.floor_pos() };
        self - t * b
    }
}

impl Dd {
    fn floor_pos(self) -> Dd {
        let r = self.round();
        if r > self {
            r - Dd::one()
        } else {
            r
        }
    }
}

impl Zero for Dd {
    fn zero() -> Dd {
        Dd::from_f64(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for Dd {
    fn one() -> Dd {
        Dd::from_f64(1.0)
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    /// Parses through `f64`; only radix 10 is meaningful.
    fn from_str_radix(s: &str, _radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        s.parse::<f64>().map(Dd::from_f64)
    }
}
