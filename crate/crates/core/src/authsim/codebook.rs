use rand::seq::SliceRandom;
use rand::Rng;

use crate::authsim::bits::PackedWord;
use crate::error::{Error, Result};
use crate::prob::{sample_channel, Dist, Dmc};

/// Blocklength-`n` code for `M` messages. Base words are sent as they are
/// unless a randomizer is attached, in which case every base symbol is passed
/// independently through it (a stochastic encoder).
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    words: Vec<Vec<u8>>,
    packed: Option<Vec<PackedWord>>,
    randomizer: Option<Dmc>,
    /// Identity when the encoder is deterministic.
    encoder: Dmc,
}

impl Codebook {
    /// A deterministic code over the smallest alphabet containing every symbol
    /// (at least binary).
    pub fn new(words: Vec<Vec<u8>>) -> Result<Self> {
        let n = words.first().map_or(0, |w| w.len());
        if words.is_empty() || n == 0 {
            return Err(Error::InvalidParams(
                "codebook needs at least one non-empty word".into(),
            ));
        }
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
        }
        let alphabet = words
            .iter()
            .flatten()
            .map(|&b| b as usize + 1)
            .max()
            .unwrap_or(2)
            .max(2);
        let packed = words.iter().map(|w| PackedWord::from_bits(w)).collect();
        Ok(Self {
            n,
            words,
            packed,
            randomizer: None,
            encoder: Dmc::identity(alphabet),
        })
    }

    /// Attaches a per-symbol randomizer taking base symbols to channel inputs.
    pub fn with_randomizer(mut self, randomizer: Dmc) -> Result<Self> {
        if let Some(&b) = self
            .words
            .iter()
            .flatten()
            .find(|&&b| b as usize >= randomizer.in_size())
        {
            return Err(Error::SymbolOutOfRange {
                symbol: b as usize,
                size: randomizer.in_size(),
            });
        }
        self.encoder = randomizer.clone();
        self.randomizer = Some(randomizer);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of messages `M`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    /// Packed base words, present when the base alphabet is binary.
    pub fn packed(&self) -> Option<&[PackedWord]> {
        self.packed.as_deref()
    }

    pub fn randomizer(&self) -> Option<&Dmc> {
        self.randomizer.as_ref()
    }

    pub fn is_deterministic(&self) -> bool {
        self.randomizer.is_none()
    }

    /// Per-symbol law of the channel input given the base symbol.
    pub fn encoder_channel(&self) -> &Dmc {
        &self.encoder
    }

    pub fn base_alphabet(&self) -> usize {
        self.encoder.in_size()
    }

    pub fn input_alphabet(&self) -> usize {
        self.encoder.out_size()
    }

    /// Number of base words equal to an earlier one.
    pub fn duplicate_count(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        self.words.iter().filter(|w| !seen.insert(w.as_slice())).count()
    }

    /// Keeps the listed messages, in the given order.
    pub fn select(&self, keep: &[usize]) -> Result<Codebook> {
        let words = keep.iter().map(|&i| self.words[i].clone()).collect();
        let cb = Codebook::new(words)?;
        match &self.randomizer {
            Some(v) => cb.with_randomizer(v.clone()),
            None => Ok(Codebook {
                encoder: self.encoder.clone(),
                ..cb
            }),
        }
    }
}

/// Draws `m` words independently and uniformly from the type class of `px`.
pub fn random_constant_composition_codebook<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    px: &Dist,
    rng: &mut R,
) -> Result<Codebook> {
    if m == 0 {
        return Err(Error::InvalidParams("codebook needs at least one message".into()));
    }
    if px.len() > 256 {
        return Err(Error::Unsupported("alphabets above 256 symbols".into()));
    }
    let counts = px.type_counts(n)?;
    let template: Vec<u8> = counts
        .iter()
        .enumerate()
        .flat_map(|(a, &c)| std::iter::repeat_n(a as u8, c))
        .collect();
    let words = (0..m)
        .map(|_| {
            let mut w = template.clone();
            w.shuffle(rng);
            w
        })
        .collect();
    let cb = Codebook::new(words)?;
    // keep the declared alphabet even if some symbol has zero count
    Ok(Codebook {
        encoder: Dmc::identity(px.len().max(2)),
        ..cb
    })
}

/// Channel input for message `i`.
pub fn encode<R: Rng + ?Sized>(cb: &Codebook, i: usize, rng: &mut R) -> Result<Vec<u8>> {
    if i >= cb.len() {
        return Err(Error::MessageOutOfRange {
            index: i,
            messages: cb.len(),
        });
    }
    match &cb.randomizer {
        None => Ok(cb.words[i].clone()),
        Some(v) => sample_channel(v, &cb.words[i], rng),
    }
}

fn packed_or_err(cb: &Codebook) -> Result<&[PackedWord]> {
    cb.packed()
        .ok_or_else(|| Error::Unsupported("distance counting needs a binary codebook".into()))
}

fn pack(seq: &[u8], n: usize) -> Result<PackedWord> {
    if seq.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: seq.len(),
        });
    }
    PackedWord::from_bits(seq).ok_or_else(|| Error::Unsupported("non-binary sequence".into()))
}

/// `|S(z, d)|`: messages whose base word is at Hamming distance `d` from `z`.
pub fn count_at_distance(cb: &Codebook, z: &[u8], d: usize) -> Result<usize> {
    let z = pack(z, cb.n())?;
    Ok(packed_or_err(cb)?.iter().filter(|w| w.distance(&z) == d).count())
}

/// `|E(s)|`: messages `i` for which some `j != i` has
/// `|x_i + s + x_j| < radius`.
pub fn count_confusable(cb: &Codebook, s: &[u8], radius: f64) -> Result<usize> {
    let s = pack(s, cb.n())?;
    let words = packed_or_err(cb)?;
    let shifted: Vec<PackedWord> = words.iter().map(|w| w.xor(&s)).collect();
    Ok((0..words.len())
        .filter(|&i| (0..words.len()).any(|j| j != i && (shifted[i].distance(&words[j]) as f64) < radius))
        .count())
}
