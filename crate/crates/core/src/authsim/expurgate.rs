use crate::authsim::codebook::Codebook;
use crate::authsim::decoder::DecoderConfig;
use crate::authsim::exact::clean_word_errors;
use crate::error::{Error, Result};
use crate::prob::{joint_type, Dmc};

#[derive(Debug, Clone, PartialEq)]
pub struct Expurgation {
    pub codebook: Codebook,
    /// Original indices of the surviving messages.
    pub kept: Vec<usize>,
    /// Average clean error of the code left after the entropy pruning.
    pub pruned_average: f64,
    /// Clean error of each survivor, evaluated in the final code.
    pub survivor_errors: Vec<f64>,
}

/// Empirical `H(T_i | T_j)` in bits.
pub fn conditional_entropy_of_words(a: &[u8], b: &[u8]) -> Result<f64> {
    Ok(joint_type(&[a, b])?.conditional_entropy_bits(&[0], &[1]))
}

/// Drops, greedily in index order, every word whose empirical conditional
/// entropy against an already kept word falls below `eps` in either
/// direction; then keeps the half of the remaining words with the smallest
/// exact error over `channel`.
pub fn expurgate_codebook(cb: &Codebook, eps: f64, channel: &Dmc, decoder: &DecoderConfig) -> Result<Expurgation> {
    if cb.len() < 4 {
        return Err(Error::InvalidParams(format!(
            "expurgation needs at least 4 codewords, got {}",
            cb.len()
        )));
    }
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..cb.len() {
        let mut ok = true;
        for &j in &kept {
            let (a, b) = (cb.word(i), cb.word(j));
            if conditional_entropy_of_words(a, b)? < eps || conditional_entropy_of_words(b, a)? < eps {
                ok = false;
                break;
            }
        }
        if ok {
            kept.push(i);
        }
    }
    if kept.len() < 2 {
        return Err(Error::Exhausted { survivors: kept.len() });
    }
    let pruned = cb.select(&kept)?;
    let errors = clean_word_errors(channel, &pruned, decoder)?;
    let pruned_average = errors.iter().sum::<f64>() / errors.len() as f64;

    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by(|&a, &b| errors[a].total_cmp(&errors[b]).then(a.cmp(&b)));
    let keep_count = kept.len().div_ceil(2);
    if keep_count < 2 {
        return Err(Error::Exhausted { survivors: keep_count });
    }
    let mut chosen: Vec<usize> = order[..keep_count].to_vec();
    chosen.sort_unstable();
    let codebook = pruned.select(&chosen)?;
    let survivor_errors = clean_word_errors(channel, &codebook, decoder)?;
    Ok(Expurgation {
        kept: chosen.iter().map(|&k| kept[k]).collect(),
        codebook,
        pruned_average,
        survivor_errors,
    })
}
