//! Scalar abstraction shared by every state, operator and engine.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the simulator is generic over (`f32`, `f64`).
pub trait Real: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Send + Sync + 'static {}

impl<T> Real for T where T: RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Send + Sync + 'static {}

pub type Cplx<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("scalar representable as f64")
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{iθ}`
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_two_pi<T: Real>(theta: T) -> T {
    let two_pi = T::two_pi();
    let mut w = theta % two_pi;
    if w < T::zero() {
        w += two_pi;
    }
    if w >= two_pi {
        w -= two_pi;
    }
    w
}

/// Reduces an angle into `(-π, π]`.
pub fn wrap_pi<T: Real>(theta: T) -> T {
    let w = wrap_two_pi(theta);
    if w > T::pi() {
        w - T::two_pi()
    } else {
        w
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
