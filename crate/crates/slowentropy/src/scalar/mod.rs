//! Scalar backends for cover values.
//!
//! Cover optimization only ever adds ball weights `(1/n)^s` and compares the
//! sums, so the engine is generic over the scalar. Two backends are provided:
//! plain floats for schedule sweeps and bisection, and [`Radical`] for the
//! checks that must hold in exact arithmetic.

mod radical;

pub use radical::Radical;

use num::rational::Ratio;
use num::BigRational;
use num_traits::{Float, FromPrimitive, ToPrimitive, Zero};

/// Exponent `s` as an exact nonnegative rational.
pub type SRatio = Ratio<u64>;

pub fn sratio_to_f64(s: SRatio) -> f64 {
    *s.numer() as f64 / *s.denom() as f64
}

/// Scalar usable as a cover value: nonnegative, ordered, additive, and
/// constructible from a ball weight `(1/order)^s`.
pub trait CoverScalar: Clone + PartialOrd + Zero {
    fn ball_weight(order: u64, s: SRatio) -> Self;
    fn from_big_rational(r: &BigRational) -> Self;
    /// `a - b`, clamped at zero; callers only subtract smaller from larger.
    fn sub_clamped(a: &Self, b: &Self) -> Self;
    fn approx(&self) -> f64;
}

impl CoverScalar for f64 {
    fn ball_weight(order: u64, s: SRatio) -> Self {
        (order as f64).powf(-sratio_to_f64(s))
    }

    fn from_big_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn sub_clamped(a: &Self, b: &Self) -> Self {
        (a - b).max(0.0)
    }

    fn approx(&self) -> f64 {
        *self
    }
}

impl CoverScalar for f32 {
    fn ball_weight(order: u64, s: SRatio) -> Self {
        (order as f32).powf(-sratio_to_f64(s) as f32)
    }

    fn from_big_rational(r: &BigRational) -> Self {
        r.to_f64().map(|v| v as f32).unwrap_or(f32::NAN)
    }

    fn sub_clamped(a: &Self, b: &Self) -> Self {
        (a - b).max(0.0)
    }

    fn approx(&self) -> f64 {
        *self as f64
    }
}

impl CoverScalar for Radical {
    fn ball_weight(order: u64, s: SRatio) -> Self {
        Radical::ball_weight(order, s)
    }

    fn from_big_rational(r: &BigRational) -> Self {
        Radical::from_big_rational(r.clone())
    }

    fn sub_clamped(a: &Self, b: &Self) -> Self {
        if b >= a {
            Radical::zero()
        } else {
            a.sub(b)
        }
    }

    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

/// Generic helper used by float backends elsewhere.
pub fn float_ball_weight<T: Float + FromPrimitive>(order: u64, s: SRatio) -> T {
    let o = T::from_u64(order).unwrap();
    o.powf(-T::from_f64(sratio_to_f64(s)).unwrap())
}
