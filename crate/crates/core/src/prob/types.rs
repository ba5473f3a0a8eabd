//! Method-of-types helpers: joint types, joint typicality and the
//! conditional type of binary word pairs at a given Hamming distance.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::prob::dist::{entropy_bits, Dist};
use crate::prob::dmc::Dmc;
use crate::scalar::Real;

/// Empirical joint distribution of a tuple of equal-length sequences, kept as
/// integer counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointType {
    n: usize,
    arity: usize,
    counts: BTreeMap<Vec<u8>, usize>,
}

impl JointType {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Nonzero counts keyed by symbol tuple.
    pub fn counts(&self) -> &BTreeMap<Vec<u8>, usize> {
        &self.counts
    }

    pub fn count(&self, tuple: &[u8]) -> usize {
        self.counts.get(tuple).copied().unwrap_or(0)
    }

    pub fn freq(&self, tuple: &[u8]) -> f64 {
        self.count(tuple) as f64 / self.n as f64
    }

    /// Projects onto the listed coordinates.
    pub fn marginal(&self, coords: &[usize]) -> JointType {
        let mut counts = BTreeMap::new();
        for (tuple, &c) in &self.counts {
            let key: Vec<u8> = coords.iter().map(|&k| tuple[k]).collect();
            *counts.entry(key).or_insert(0) += c;
        }
        JointType {
            n: self.n,
            arity: coords.len(),
            counts,
        }
    }

    /// Empirical entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        let probs: Vec<f64> = self.counts.values().map(|&c| c as f64 / self.n as f64).collect();
        entropy_bits(&probs)
    }

    /// Empirical `H(coords_a | coords_b)` in bits.
    pub fn conditional_entropy_bits(&self, target: &[usize], given: &[usize]) -> f64 {
        let both: Vec<usize> = target.iter().chain(given).copied().collect();
        (self.marginal(&both).entropy_bits() - self.marginal(given).entropy_bits()).max(0.0)
    }
}

/// Counts, for every symbol tuple, the positions where the sequences carry it.
pub fn joint_type(seqs: &[&[u8]]) -> Result<JointType> {
    let n = seqs.first().map_or(0, |s| s.len());
    if n == 0 {
        return Err(Error::LengthMismatch { expected: 1, found: 0 });
    }
    for s in seqs {
        if s.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: s.len(),
            });
        }
    }
    let mut counts = BTreeMap::new();
    for k in 0..n {
        let key: Vec<u8> = seqs.iter().map(|s| s[k]).collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(JointType {
        n,
        arity: seqs.len(),
        counts,
    })
}

/// A distribution over a product alphabet, stored row-major (the last
/// coordinate varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist<T = f64> {
    dims: Vec<usize>,
    dist: Dist<T>,
}

impl<T: Real> JointDist<T> {
    pub fn new(dims: Vec<usize>, probs: Vec<T>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if size != probs.len() || dims.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for a product alphabet of size {size}",
                probs.len()
            )));
        }
        Ok(Self {
            dims,
            dist: Dist::new(probs)?,
        })
    }

    /// `P(t, y) = P_T(t) * channel(y | t)`.
    pub fn from_input_and_channel(input: &Dist<T>, channel: &Dmc<T>) -> Result<Self> {
        if input.len() != channel.in_size() {
            return Err(Error::DimensionMismatch(
                "input distribution and channel disagree on alphabet".into(),
            ));
        }
        let probs = (0..channel.in_size())
            .flat_map(|t| {
                let pt = input.prob(t);
                channel.row(t).iter().map(move |&w| pt * w)
            })
            .collect();
        Self::new(vec![channel.in_size(), channel.out_size()], probs)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[T] {
        self.dist.probs()
    }

    /// Row-major index of a symbol tuple, or `None` if it leaves the alphabet.
    pub fn index(&self, tuple: &[u8]) -> Option<usize> {
        if tuple.len() != self.dims.len() {
            return None;
        }
        let mut idx = 0;
        for (&a, &d) in tuple.iter().zip(&self.dims) {
            if a as usize >= d {
                return None;
            }
            idx = idx * d + a as usize;
        }
        Some(idx)
    }

    pub fn prob(&self, tuple: &[u8]) -> T {
        self.index(tuple).map_or_else(T::zero, |i| self.dist.prob(i))
    }

    /// Typicality test on a dense count table laid out like `probs()`.
    pub fn counts_are_typical(&self, counts: &[usize], n: usize, eps: f64) -> bool {
        let nf = n as f64;
        counts.iter().zip(self.probs()).all(|(&c, p)| {
            let p = p.as_f64();
            let f = c as f64 / nf;
            if p > 0.0 {
                (f - p).abs() <= eps * p + 1e-12
            } else {
                c == 0
            }
        })
    }
}

/// Joint `eps`-typicality of `seqs` with respect to `reference`: every tuple
/// of positive reference mass has empirical frequency within `eps * P(a)` of
/// `P(a)`, and tuples of zero mass never occur.
pub fn is_typical<T: Real>(seqs: &[&[u8]], reference: &JointDist<T>, eps: f64) -> bool {
    if seqs.len() != reference.dims().len() {
        return false;
    }
    let Ok(jt) = joint_type(seqs) else {
        return false;
    };
    let mut dense = vec![0usize; reference.probs().len()];
    for (tuple, &c) in jt.counts() {
        match reference.index(tuple) {
            Some(i) => dense[i] = c,
            None => return false,
        }
    }
    reference.counts_are_typical(&dense, jt.n(), eps)
}

/// Conditional type shared by every binary word of type `p_x` lying at
/// Hamming distance `d` from a fixed word of type `p_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalType<T = f64> {
    /// `kernel.get(z, x) = p_{X|Z}(x | z)`.
    pub kernel: Dmc<T>,
    /// Positions where `z = 0` and `x = 1`.
    pub d0: usize,
    /// Positions where `z = 1` and `x = 0`.
    pub d1: usize,
}

pub fn conditional_type_at_distance<T: Real>(
    p_x: &Dist<T>,
    p_z: &Dist<T>,
    d: usize,
    n: usize,
) -> Result<ConditionalType<T>> {
    if p_x.len() != 2 || p_z.len() != 2 {
        return Err(Error::DimensionMismatch("binary types required".into()));
    }
    if d > n {
        return Err(Error::InfeasibleDistance { d, n });
    }
    let cx = p_x.type_counts(n)?;
    let cz = p_z.type_counts(n)?;
    // d0 = (d + n[pZ(0) - pX(0)]) / 2 and d1 = (d + n[pZ(1) - pX(1)]) / 2
    let twice_d0 = d as i64 + cz[0] as i64 - cx[0] as i64;
    let twice_d1 = d as i64 + cz[1] as i64 - cx[1] as i64;
    if twice_d0 < 0 || twice_d1 < 0 || twice_d0 % 2 != 0 || twice_d1 % 2 != 0 {
        return Err(Error::InfeasibleDistance { d, n });
    }
    let (d0, d1) = ((twice_d0 / 2) as usize, (twice_d1 / 2) as usize);
    if d0 > cz[0] || d0 > cx[1] || d1 > cz[1] || d1 > cx[0] {
        return Err(Error::InfeasibleDistance { d, n });
    }
    let nf = T::lit(n as f64);
    let half = T::lit(0.5);
    let df = T::lit(d as f64);
    let two = T::lit(2.0);
    let row = |z: usize| -> Vec<T> {
        let pz = p_z.prob(z);
        if cz[z] == 0 {
            // no position carries z; the row is never used
            let mut r = vec![T::zero(); 2];
            r[z] = T::one();
            return r;
        }
        let cross = df / (two * nf * pz) + half - p_x.prob(z) / (two * pz);
        let cross = cross.max(T::zero()).min(T::one());
        if z == 0 {
            vec![T::one() - cross, cross]
        } else {
            vec![cross, T::one() - cross]
        }
    };
    let kernel = Dmc::from_raw_normalized(2, 2, [row(0), row(1)].concat());
    Ok(ConditionalType { kernel, d0, d1 })
}
