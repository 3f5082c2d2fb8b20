//! Coefficient fields.
//!
//! The symbolic layer is generic over the coefficient field. Exact work
//! uses [`BigRational`]; `f64` is supported for quick numeric experiments,
//! where zero tests are exact comparisons and therefore only indicative.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, Num, Signed, ToPrimitive};

/// A field usable as polynomial coefficient.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn to_f64(&self) -> f64;

    /// Square root when it lies in the field.
    fn sqrt_exact(&self) -> Option<Self>;

    fn is_negative(&self) -> bool;
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let isqrt = |v: i64| {
            let r = (v as f64).sqrt().round() as i64;
            (r.saturating_sub(1)..=r + 1).find(|c| c * c == v)
        };
        Some(Rational64::new(isqrt(*self.numer())?, isqrt(*self.denom())?))
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }
}

/// Converts an `f64` into any float type without silently losing `NaN`.
pub(crate) fn float_from<F: Float>(v: f64) -> F {
    F::from(v).unwrap_or_else(F::nan)
}
