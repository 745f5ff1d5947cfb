//! Floating-point backends for the series kernels.

use std::fmt::Debug;

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod dd;

pub use dd::Dd;

pub trait Real: Num + Copy + PartialOrd + Debug + Send + Sync + std::ops::Neg<Output = Self> + 'static {
    /// Relative accuracy assumed for every arithmetic and elementary operation.
    const ROUNDOFF: f64;
    const DIGITS: u32;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    /// `(sin πx, cos πx)`.
    fn sin_cos_pi(self) -> (Self, Self);
    fn pi() -> Self;
}

impl Real for f64 {
    const ROUNDOFF: f64 = 2.3e-16;
    const DIGITS: u32 = 15;
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    fn sin_cos_pi(self) -> (f64, f64) {
        let t = self - 2.0 * (self * 0.5).round();
        (std::f64::consts::PI * t).sin_cos()
    }
    fn pi() -> f64 {
        std::f64::consts::PI
    }
}

impl Real for Dd {
    const ROUNDOFF: f64 = 1e-30;
    const DIGITS: u32 = 31;
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn exp(self) -> Dd {
        Dd::exp(self)
    }
    fn sin_cos_pi(self) -> (Dd, Dd) {
        Dd::sin_cos_pi(self)
    }
    fn pi() -> Dd {
        Dd::PI
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    DoubleDouble,
}

impl Precision {
    /// Smallest backend carrying at least `digits` decimal digits.
    pub fn for_digits(digits: u32) -> Result<Precision> {
        if digits <= f64::DIGITS {
            Ok(Precision::Double)
        } else if digits <= Dd::DIGITS {
            Ok(Precision::DoubleDouble)
        } else {
            Err(Error::InvalidArgument(format!(
                "{digits} digits requested; the widest backend carries {}",
                Dd::DIGITS
            )))
        }
    }

    pub fn digits(self) -> u32 {
        match self {
            Precision::Double => f64::DIGITS,
            Precision::DoubleDouble => Dd::DIGITS,
        }
    }

    pub fn roundoff(self) -> f64 {
        match self {
            Precision::Double => f64::ROUNDOFF,
            Precision::DoubleDouble => Dd::ROUNDOFF,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_selection() {
        assert_eq!(Precision::for_digits(10).unwrap(), Precision::Double);
        assert_eq!(Precision::for_digits(28).unwrap(), Precision::DoubleDouble);
        assert!(Precision::for_digits(40).is_err());
    }

    #[test]
    fn f64_trig_reduction() {
        let (s, c) = 1e6f64.sin_cos_pi();
        assert!(s.abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
        let (s, _) = 0.5f64.sin_cos_pi();
        assert!((s - 1.0).abs() < 1e-16);
    }
}
