use crate::error::{Error, Result};
use crate::scalar::Real;

/// A probability distribution over a finite alphabet `{0, .., len-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist<T = f64> {
    probs: Vec<T>,
}

impl<T: Real> Dist<T> {
    /// Validates that the entries are nonnegative and sum to one within
    /// [`Real::INPUT_TOL`].
    pub fn new(probs: Vec<T>) -> Result<Self> {
        check_row(&probs, 0)?;
        Ok(Self { probs })
    }

    /// Uniform distribution on `size` symbols.
    pub fn uniform(size: usize) -> Self {
        let p = T::one() / T::lit(size as f64);
        Self { probs: vec![p; size] }
    }

    /// Distribution of a Bernoulli variable: `P(1) = p`.
    pub fn bernoulli(p: T) -> Result<Self> {
        Self::new(vec![T::one() - p, p])
    }

    /// Point mass on `symbol`.
    pub fn point(size: usize, symbol: usize) -> Self {
        let mut probs = vec![T::zero(); size];
        probs[symbol] = T::one();
        Self { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, symbol: usize) -> T {
        self.probs.get(symbol).copied().unwrap_or_else(T::zero)
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> T {
        entropy_bits(&self.probs)
    }

    /// Symbol counts `n * P(x)` when every one of them is an integer (within
    /// `1e-9 * n`).
    pub fn type_counts(&self, n: usize) -> Result<Vec<usize>> {
        let nf = n as f64;
        let mut counts = Vec::with_capacity(self.probs.len());
        for p in &self.probs {
            let c = p.as_f64() * nf;
            let r = c.round();
            if (c - r).abs() > 1e-9 * nf.max(1.0) || r < 0.0 {
                return Err(Error::NonIntegralType(self.probs.iter().map(|p| p.as_f64()).collect()));
            }
            counts.push(r as usize);
        }
        if counts.iter().sum::<usize>() != n {
            return Err(Error::NonIntegralType(self.probs.iter().map(|p| p.as_f64()).collect()));
        }
        Ok(counts)
    }
}

/// Entropy in bits of a (possibly unnormalised) nonnegative vector.
pub fn entropy_bits<T: Real>(probs: &[T]) -> T {
    probs.iter().filter(|p| **p > T::zero()).map(|&p| -p * p.log2()).sum()
}

/// Binary entropy function in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

pub(crate) fn check_row<T: Real>(row: &[T], index: usize) -> Result<()> {
    let mut sum = T::zero();
    for (col, &v) in row.iter().enumerate() {
        if !v.is_finite() || v < T::zero() {
            return Err(Error::NegativeEntry {
                row: index,
                col,
                value: v.as_f64(),
            });
        }
        sum = sum + v;
    }
    if (sum - T::one()).abs() > T::input_tol() {
        return Err(Error::NonStochasticRow {
            index,
            sum: sum.as_f64(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_and_entropy() {
        let d = Dist::bernoulli(0.5f64).unwrap();
        assert!((d.entropy_bits() - 1.0).abs() < 1e-12);
        assert_eq!(Dist::<f64>::point(3, 1).entropy_bits(), 0.0);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            Dist::new(vec![0.5f64, 0.4]),
            Err(Error::NonStochasticRow { index: 0, .. })
        ));
        assert!(matches!(
            Dist::new(vec![1.5f64, -0.5]),
            Err(Error::NegativeEntry { col: 1, .. })
        ));
    }

    #[test]
    fn type_counts_need_integral_mass() {
        let d = Dist::bernoulli(0.5f64).unwrap();
        assert_eq!(d.type_counts(10).unwrap(), vec![5, 5]);
        assert!(matches!(d.type_counts(7), Err(Error::NonIntegralType(_))));
    }
}
