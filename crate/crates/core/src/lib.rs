//! Keyless authentication over arbitrarily-varying channels.
//!
//! The crate is layered: [`prob`] holds finite distributions and channels,
//! [`lp`] decides linear feasibility problems, [`overwrite`] phrases the
//! overwritability, symmetrizability and degradation tests as such problems,
//! [`authsim`] simulates and exactly evaluates codes against adversaries, and
//! [`mbac`] instantiates everything for binary channels whose state flips the
//! input.
//!
//! The channel algebra is generic over [`Real`]; the aliases at the crate
//! root fix the scalar to `f64` (and `f32` for the `*32` variants).

pub mod authsim;
pub mod channels;
pub mod error;
pub mod lp;
pub mod mbac;
pub mod overwrite;
pub mod prob;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Dist = prob::Dist<f64>;
pub type Dmc = prob::Dmc<f64>;
pub type Avc = prob::Avc<f64>;
pub type JointDist = prob::JointDist<f64>;

pub type Dist32 = prob::Dist<f32>;
pub type Dmc32 = prob::Dmc<f32>;
pub type Avc32 = prob::Avc<f32>;
