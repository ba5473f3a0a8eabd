//! Named channel families used throughout the analysis and the simulations.
//!
//! Binary erasure outputs are always symbol `2`.

use crate::error::{Error, Result};
use crate::prob::Avc;
use crate::scalar::Real;

pub const ERASURE: u8 = 2;

fn check_prob<T: Real>(name: &str, p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("{name} = {p} is not a probability")))
    }
}

/// Binary channel whose state `1` flips the input before a BSC(p):
/// `S = {0 = s0, 1 = flip}`.
pub fn mbac_avc<T: Real>(p: T) -> Result<Avc<T>> {
    check_prob("p", p)?;
    Avc::from_fn(2, 2, 2, 0, |x, s, y| if y == x ^ s { T::one() - p } else { p })
}

/// States `{0 = s0, 1 = "0", 2 = "1"}`, outputs `{0, 1, erasure}`. Without
/// the adversary the channel is a BSC(p); a state matching the input turns it
/// into a BSC(1-p), a mismatching one erases.
pub fn flip_erasure_avc<T: Real>(p: T) -> Result<Avc<T>> {
    check_prob("p", p)?;
    Avc::from_fn(2, 3, 3, 0, |x, s, y| {
        let q = T::one() - p;
        match s {
            0 if y < 2 => {
                if y == x {
                    q
                } else {
                    p
                }
            }
            0 => T::zero(),
            _ if s - 1 == x => match y {
                2 => T::zero(),
                _ if y == x => p,
                _ => q,
            },
            _ => {
                if y == 2 {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    })
}

/// States `{0, 1, 2 = s0}` select the erasure probability of a BEC: state
/// `0` is noiseless, state `1` always erases and `s0` erases with
/// probability `p`.
pub fn erasure_state_avc<T: Real>(p: T) -> Result<Avc<T>> {
    check_prob("p", p)?;
    Avc::from_fn(2, 3, 3, 2, |x, s, y| {
        let e = match s {
            0 => T::zero(),
            1 => T::one(),
            _ => p,
        };
        if y == 2 {
            e
        } else if y == x {
            T::one() - e
        } else {
            T::zero()
        }
    })
}

/// `S = {0 = s0, 1, 2}`: without the adversary the output copies the input,
/// state `1 + b` replaces it by the bit `b`.
pub fn replacement_avc<T: Real>() -> Avc<T> {
    Avc::from_fn(2, 3, 2, 0, |x, s, y| {
        let out = if s == 0 { x } else { s - 1 };
        if y == out {
            T::one()
        } else {
            T::zero()
        }
    })
    .expect("deterministic rows")
}
