use rayon::prelude::*;

use crate::authsim::adversary::{adversary_act, AdversaryStrategy, AttackContext, SideInfo};
use crate::authsim::codebook::{encode, Codebook};
use crate::authsim::decoder::DecoderConfig;
use crate::authsim::report::ErrorReport;
use crate::error::{Error, Result};
use crate::prob::{sample_channel, stream_rng, Avc, Dmc, StreamRng};

/// Trials drawn from one generator stream.
const CHUNK: usize = 1024;

/// One transmission of message `i`: encode, observe, attack, receive.
/// Returns whether it ended in an authentication error.
pub fn simulate_once(ctx: &AttackContext, strategy: &AdversaryStrategy, i: usize, rng: &mut StreamRng) -> Result<bool> {
    let cb = ctx.codebook;
    let x = encode(cb, i, rng)?;
    let z = sample_channel(ctx.u, &x, rng)?;
    let side = SideInfo::reveal(strategy.grants(), cb, i, &x, &z);
    let s = adversary_act(strategy, ctx, &z, &side, rng)?;
    let y = ctx.avc.sample(&x, &s, rng)?;
    let out = ctx.decoder.decode(cb, &y);
    let silent = s.iter().all(|&v| v as usize == ctx.avc.s0());
    Ok(if silent {
        out != Some(i)
    } else {
        out.is_some() && out != Some(i)
    })
}

/// Estimates `e(i, J)` from `trials` transmissions of every message.
///
/// Trials are split into chunks of fixed size, each with its own stream
/// derived from `(seed, message, chunk)`, so the result does not depend on
/// the number of worker threads.
pub fn monte_carlo_error(
    avc: &Avc,
    u: &Dmc,
    cb: &Codebook,
    decoder: &DecoderConfig,
    strategy: &AdversaryStrategy,
    trials: usize,
    seed: u64,
) -> Result<ErrorReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let ctx = AttackContext {
        avc,
        u,
        codebook: cb,
        decoder,
    };
    ctx.validate(strategy)?;
    let chunks = trials.div_ceil(CHUNK);
    let jobs: Vec<(usize, usize)> = (0..cb.len()).flat_map(|i| (0..chunks).map(move |c| (i, c))).collect();
    let counts: Vec<(usize, u64)> = jobs
        .par_iter()
        .map(|&(i, c)| {
            let mut rng = stream_rng(seed, ((i as u64) << 32) | c as u64);
            let len = CHUNK.min(trials - c * CHUNK);
            let mut errors = 0u64;
            for _ in 0..len {
                if simulate_once(&ctx, strategy, i, &mut rng)? {
                    errors += 1;
                }
            }
            Ok((i, errors))
        })
        .collect::<Result<_>>()?;
    let mut per_message = vec![0u64; cb.len()];
    for (i, e) in counts {
        per_message[i] += e;
    }
    Ok(ErrorReport::from_counts(&per_message, trials, seed))
}
