use rand::Rng;

use crate::authsim::{random_constant_composition_codebook, Codebook, DecoderConfig};
use crate::error::{Error, Result};
use crate::mbac::capacity::{bac_capacity, z_then_bsc_crossover};
use crate::prob::{Dist, Dmc, JointDist};

/// Largest message count a preset will construct.
pub const MAX_MESSAGES: usize = 1 << 16;

/// Slack of the typicality decoder when none is given.
pub const DEFAULT_TYPICALITY_EPS: f64 = 0.5;

/// Parameters of the flip channel family and of its coding schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbacParams {
    /// Crossover of the main channel.
    pub p: f64,
    /// Crossover of the adversary's observation channel.
    pub q: f64,
    /// Probability that the randomizer turns a `1` into a `0`.
    pub gamma: f64,
    /// Fraction of ones in every base word.
    pub alpha: f64,
    pub n: usize,
    /// Bits per channel use.
    pub rate: f64,
}

impl MbacParams {
    /// Parameters with `alpha` set to the capacity-achieving bias of the
    /// channel seen by the base words: Z(`gamma`) followed by BSC(`p`).
    pub fn new(p: f64, q: f64, gamma: f64, n: usize, rate: f64) -> Result<Self> {
        check_range("gamma", gamma, 0.0, 1.0, false)?;
        let alpha = if p < 0.5 {
            bac_capacity(p, z_then_bsc_crossover(p, gamma))?.1.prob(1)
        } else {
            0.5
        };
        let params = Self {
            p,
            q,
            gamma,
            alpha,
            n,
            rate,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_range("p", self.p, 0.0, 0.5, true)?;
        check_range("q", self.q, 0.0, 0.5, true)?;
        check_range("gamma", self.gamma, 0.0, 1.0, false)?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha = {} must lie in (0, 1)",
                self.alpha
            )));
        }
        if !(self.rate > 0.0) {
            return Err(Error::InvalidParams(format!("rate = {} must be positive", self.rate)));
        }
        if self.n == 0 {
            return Err(Error::InvalidParams("blocklength must be positive".into()));
        }
        Ok(())
    }

    /// `2^{nR}` rounded down, clamped to `[2, MAX_MESSAGES]`.
    pub fn messages(&self) -> usize {
        messages_for_rate(self.n, self.rate)
    }

    /// Per-symbol law from base symbol to receiver output without the
    /// adversary.
    pub fn composed_channel(&self) -> Result<Dmc> {
        Dmc::bac(self.p, z_then_bsc_crossover(self.p, self.gamma))
    }
}

fn check_range(name: &str, v: f64, lo: f64, hi: f64, hi_inclusive: bool) -> Result<()> {
    let ok = v >= lo && if hi_inclusive { v <= hi } else { v < hi };
    if ok {
        Ok(())
    } else {
        let close = if hi_inclusive { ']' } else { ')' };
        Err(Error::InvalidParams(format!(
            "{name} = {v} must lie in [{lo}, {hi}{close}"
        )))
    }
}

pub fn messages_for_rate(n: usize, rate: f64) -> usize {
    let bits = n as f64 * rate;
    if bits >= 16.0 {
        MAX_MESSAGES
    } else {
        ((bits + 1e-9).exp2().floor() as usize).clamp(2, MAX_MESSAGES)
    }
}

/// Nearest realisable type with `round(n * alpha)` ones.
pub fn realisable_bias(n: usize, alpha: f64) -> Result<Dist> {
    let ones = (n as f64 * alpha).round() as usize;
    Dist::bernoulli(ones as f64 / n as f64)
}

/// The stochastic scheme for the flip channel: constant-composition base
/// words at bias `alpha`, each symbol passed through a Z(`gamma`) channel,
/// and a typicality decoder for the composed law BAC(`p`, `gamma + p - 2 gamma p`).
///
/// With `gamma = 0` no randomizer is attached and the code is deterministic.
pub fn build_thm5_scheme<R: Rng + ?Sized>(params: &MbacParams, rng: &mut R) -> Result<(Codebook, DecoderConfig)> {
    build_thm5_scheme_with(params, params.messages(), DEFAULT_TYPICALITY_EPS, rng)
}

pub fn build_thm5_scheme_with<R: Rng + ?Sized>(
    params: &MbacParams,
    messages: usize,
    eps: f64,
    rng: &mut R,
) -> Result<(Codebook, DecoderConfig)> {
    params.validate()?;
    let composed = params.composed_channel()?;
    let capacity = if params.p < 0.5 {
        bac_capacity(params.p, z_then_bsc_crossover(params.p, params.gamma))?.0
    } else {
        0.0
    };
    if params.rate >= capacity {
        return Err(Error::RateTooHigh {
            rate: params.rate,
            capacity,
        });
    }
    let bias = realisable_bias(params.n, params.alpha)?;
    let base = random_constant_composition_codebook(params.n, messages, &bias, rng)?;
    let cb = if params.gamma > 0.0 {
        base.with_randomizer(Dmc::z_channel(params.gamma)?)?
    } else {
        base
    };
    let reference = JointDist::from_input_and_channel(&bias, &composed)?;
    Ok((cb, DecoderConfig::Typicality { reference, eps }))
}
