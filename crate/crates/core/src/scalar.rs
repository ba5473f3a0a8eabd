//! Scalar abstraction shared by the probability, feasibility and
//! overwritability layers.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar the channel algebra is generic over.
///
/// The two tolerances are expressed in the scalar's own precision: `INPUT_TOL`
/// bounds how far a user-supplied stochastic row may drift from summing to one,
/// `DERIVED_TOL` bounds rounding on quantities computed from validated inputs.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static {
    const INPUT_TOL: f64;
    const DERIVED_TOL: f64;

    /// Converts an `f64` literal into the scalar type.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn input_tol() -> Self {
        Self::lit(Self::INPUT_TOL)
    }

    fn derived_tol() -> Self {
        Self::lit(Self::DERIVED_TOL)
    }
}

impl Real for f64 {
    const INPUT_TOL: f64 = 1e-9;
    const DERIVED_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const INPUT_TOL: f64 = 1e-5;
    const DERIVED_TOL: f64 = 1e-5;
}
