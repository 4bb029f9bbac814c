//! Scalar abstractions: exact integers backing rationals, and IEEE floats.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

/// Integer types usable as the backing of an exact `Ratio`.
///
/// The crate-root alias `Rational = Ratio<BigInt>` is what every decision
/// path uses; `i64`/`i128` instantiations exist for tests and for callers
/// who accept overflow risk in exchange for speed.
pub trait ExactInt:
    Integer + Signed + Clone + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static
{
}

impl ExactInt for i64 {}
impl ExactInt for i128 {}
impl ExactInt for num_bigint::BigInt {}

/// Floating-point scalar usable on the numerical side (FFTs, quadrature,
/// time stepping). Implemented by `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + rustfft::FftNum + Display + Send + Sync + 'static
{
    /// Shorthand for lossy conversion from `f64` constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }
    /// Lossy conversion to `f64` for reporting.
    fn to_f64x(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Rational `num/den` over any exact integer backing.
pub fn rat<I: ExactInt>(num: i64, den: i64) -> Ratio<I> {
    assert!(den != 0, "zero denominator");
    Ratio::new(
        I::from_i64(num).expect("i64 fits"),
        I::from_i64(den).expect("i64 fits"),
    )
}

/// Rational from an integer.
pub fn rint<I: ExactInt>(n: i64) -> Ratio<I> {
    Ratio::from_integer(I::from_i64(n).expect("i64 fits"))
}

/// Rational from an unsigned dimension-like quantity.
pub fn rdim<I: ExactInt>(n: u32) -> Ratio<I> {
    rint(n as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rational_constructors_agree_across_backings() {
        let a: Ratio<i64> = rat(3, 20);
        let b: Ratio<BigInt> = rat(3, 20);
        assert_eq!(a.to_string(), "3/20");
        assert_eq!(b.to_string(), "3/20");
        assert_eq!(rint::<i128>(7).to_string(), "7");
    }

    #[test]
    fn real_roundtrip() {
        assert_eq!(<f64 as Real>::of(0.5), 0.5);
        assert_eq!(<f32 as Real>::of(0.25), 0.25f32);
    }
}
