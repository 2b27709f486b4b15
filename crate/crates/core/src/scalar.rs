//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::distr::{Open01, StandardUniform};
use rand::Rng;
use rand_distr::StandardNormal;

/// Floating-point scalar the solvers are generic over (`f32` or `f64`).
///
/// Random draws are routed through the trait so generic code never needs
/// `Distribution<Self>` bounds at every call site.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion of an `f64` literal.
    fn c(v: f64) -> Self;

    fn from_usize_lossy(n: usize) -> Self {
        Self::c(n as f64)
    }

    fn as_f64(self) -> f64;

    /// Uniform on `[0, 1)`.
    fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform on `(0, 1)`.
    fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Complementary error function.
    fn erfc(self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn c(v: f64) -> Self {
        v
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
    #[inline]
    fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardUniform)
    }
    #[inline]
    fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(Open01)
    }
    #[inline]
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

impl Real for f32 {
    #[inline]
    fn c(v: f64) -> Self {
        v as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardUniform)
    }
    #[inline]
    fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(Open01)
    }
    #[inline]
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

/// Closed interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi, "interval with lo > hi");
        Self { lo, hi }
    }

    pub fn clamp(&self, v: T) -> T {
        v.max(self.lo).min(self.hi)
    }

    pub fn contains(&self, v: T) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    /// `n` evenly spaced points including both ends (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<T> {
        assert!(n >= 2);
        let step = self.width() / T::from_usize_lossy(n - 1);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.hi
                } else {
                    self.lo + step * T::from_usize_lossy(i)
                }
            })
            .collect()
    }
}
