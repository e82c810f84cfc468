//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};
use serde::{Deserialize, Serialize};

/// Real floating-point type the boundary operators are generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssignOps + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + NumAssignOps + Debug + Display + Send + Sync + 'static
{
}

/// Point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Clockwise quarter turn, `(y, -x)`.
    #[inline]
    pub fn perp_cw(self) -> Self {
        Self::new(self.y, -self.x)
    }

    #[inline]
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn cast<U: Scalar>(self) -> Vec2<U> {
        Vec2::new(
            U::from(self.x).expect("castable"),
            U::from(self.y).expect("castable"),
        )
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Vec2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Scalar> From<[T; 2]> for Vec2<T> {
    fn from(a: [T; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}
