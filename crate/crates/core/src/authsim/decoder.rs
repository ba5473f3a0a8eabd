use crate::authsim::bits::PackedWord;
use crate::authsim::codebook::Codebook;
use crate::prob::JointDist;

/// Receiver rules. Every rule returns `Some(i)` only when message `i` is the
/// unique candidate and `None` (declare interference) otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum DecoderConfig {
    /// Unique `i` with `|y + t_i| < radius`. If `erasure` is set, any
    /// occurrence of that symbol in `y` is treated as evidence of tampering.
    Distance { radius: f64, erasure: Option<u8> },
    /// Unique `i` with `(t_i, y)` jointly `eps`-typical for `reference`.
    Typicality { reference: JointDist, eps: f64 },
    /// Unique `i` agreeing with `y` on every unerased position.
    ErasureConsistency { erasure: u8 },
}

/// The default slack `log2(n) / sqrt(n)` over the crossover probability.
pub fn default_delta(n: usize) -> f64 {
    let n = n as f64;
    n.log2() / n.sqrt()
}

/// Threshold `n (p + delta)`.
pub fn distance_radius(n: usize, p: f64, delta: f64) -> f64 {
    n as f64 * (p + delta)
}

impl DecoderConfig {
    pub fn distance(radius: f64) -> Self {
        Self::Distance { radius, erasure: None }
    }

    pub fn decode(&self, cb: &Codebook, y: &[u8]) -> Option<usize> {
        match self {
            Self::Distance { radius, erasure } => decode_distance(cb, y, *radius, *erasure),
            Self::Typicality { reference, eps } => decode_typicality(cb, y, reference, *eps),
            Self::ErasureConsistency { erasure } => decode_erasure_consistency(cb, y, *erasure),
        }
    }
}

fn unique(mut candidates: impl Iterator<Item = usize>) -> Option<usize> {
    let first = candidates.next()?;
    candidates.next().is_none().then_some(first)
}

pub fn decode_distance(cb: &Codebook, y: &[u8], radius: f64, erasure: Option<u8>) -> Option<usize> {
    if y.len() != cb.n() {
        return None;
    }
    if let Some(e) = erasure {
        if y.contains(&e) {
            return None;
        }
    }
    match (cb.packed(), PackedWord::from_bits(y)) {
        (Some(words), Some(py)) => unique((0..words.len()).filter(|&i| (words[i].distance(&py) as f64) < radius)),
        _ => unique((0..cb.len()).filter(|&i| {
            let d = cb.word(i).iter().zip(y).filter(|(a, b)| a != b).count();
            (d as f64) < radius
        })),
    }
}

pub fn decode_typicality(cb: &Codebook, y: &[u8], reference: &JointDist, eps: f64) -> Option<usize> {
    let dims = reference.dims();
    if dims.len() != 2 || y.len() != cb.n() {
        return None;
    }
    let (nt, ny) = (dims[0], dims[1]);
    if y.iter().any(|&b| b as usize >= ny) {
        return None;
    }
    let mut counts = vec![0usize; nt * ny];
    unique((0..cb.len()).filter(|&i| {
        counts.iter_mut().for_each(|c| *c = 0);
        for (&t, &b) in cb.word(i).iter().zip(y) {
            if t as usize >= nt {
                return false;
            }
            counts[t as usize * ny + b as usize] += 1;
        }
        reference.counts_are_typical(&counts, y.len(), eps)
    }))
}

pub fn decode_erasure_consistency(cb: &Codebook, y: &[u8], erasure: u8) -> Option<usize> {
    if y.len() != cb.n() {
        return None;
    }
    unique((0..cb.len()).filter(|&i| cb.word(i).iter().zip(y).all(|(&t, &b)| b == erasure || b == t)))
}
