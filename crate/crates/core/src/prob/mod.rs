//! Finite probability primitives: distributions, memoryless channels,
//! arbitrarily-varying channels, seeded sampling and type classes.

mod avc;
mod dist;
mod dmc;
mod sample;
mod types;

pub use avc::Avc;
pub use dist::{binary_entropy, entropy_bits, Dist};
pub use dmc::Dmc;
pub use sample::{mix64, sample_channel, sample_index, stream_rng, StreamRng};
pub use types::{conditional_type_at_distance, is_typical, joint_type, ConditionalType, JointDist, JointType};
