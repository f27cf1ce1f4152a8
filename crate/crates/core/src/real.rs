//! Scalar abstraction for the numeric core.
//!
//! Every solver module is generic over [`Real`], so the same code runs in
//! `f32` and `f64`. Concrete aliases for the main types live at the crate
//! root.

use std::fmt;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the solver is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `re + i*im` from `f64` literals.
pub(crate) fn complex_lit<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::lit(re), R::lit(im))
}
