use rand::Rng;

use crate::error::{Error, Result};
use crate::prob::dist::check_row;
use crate::prob::dmc::Dmc;
use crate::prob::sample::sample_index;
use crate::scalar::Real;

/// Arbitrarily-varying channel `W(y | x, s)` with a designated no-adversary
/// state `s0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Avc<T = f64> {
    x_size: usize,
    s_size: usize,
    y_size: usize,
    s0: usize,
    data: Vec<T>,
}

impl<T: Real> Avc<T> {
    /// Validates a `[x][s][y]` tensor.
    pub fn new(kernel: Vec<Vec<Vec<T>>>, s0: usize) -> Result<Self> {
        let x_size = kernel.len();
        let s_size = kernel.first().map_or(0, |k| k.len());
        let y_size = kernel.first().and_then(|k| k.first()).map_or(0, |k| k.len());
        if x_size == 0 || s_size == 0 || y_size == 0 {
            return Err(Error::DimensionMismatch("empty channel tensor".into()));
        }
        if s0 >= s_size {
            return Err(Error::SymbolOutOfRange {
                symbol: s0,
                size: s_size,
            });
        }
        let mut data = Vec::with_capacity(x_size * s_size * y_size);
        for (x, slice) in kernel.iter().enumerate() {
            if slice.len() != s_size {
                return Err(Error::DimensionMismatch(format!(
                    "input {x} has {} states, expected {s_size}",
                    slice.len()
                )));
            }
            for (s, row) in slice.iter().enumerate() {
                if row.len() != y_size {
                    return Err(Error::DimensionMismatch(format!(
                        "W[{x}][{s}] has {} outputs, expected {y_size}",
                        row.len()
                    )));
                }
                check_row(row, x * s_size + s)?;
                data.extend_from_slice(row);
            }
        }
        Ok(Self {
            x_size,
            s_size,
            y_size,
            s0,
            data,
        })
    }

    pub fn from_fn(
        x_size: usize,
        s_size: usize,
        y_size: usize,
        s0: usize,
        f: impl Fn(usize, usize, usize) -> T,
    ) -> Result<Self> {
        Self::new(
            (0..x_size)
                .map(|x| (0..s_size).map(|s| (0..y_size).map(|y| f(x, s, y)).collect()).collect())
                .collect(),
            s0,
        )
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn s_size(&self) -> usize {
        self.s_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn s0(&self) -> usize {
        self.s0
    }

    #[inline]
    pub fn w(&self, x: usize, s: usize, y: usize) -> T {
        self.data[(x * self.s_size + s) * self.y_size + y]
    }

    #[inline]
    pub fn row(&self, x: usize, s: usize) -> &[T] {
        let start = (x * self.s_size + s) * self.y_size;
        &self.data[start..start + self.y_size]
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<T>>> {
        (0..self.x_size)
            .map(|x| (0..self.s_size).map(|s| self.row(x, s).to_vec()).collect())
            .collect()
    }

    /// The channel seen when the state is held at `s`.
    pub fn fix_state(&self, s: usize) -> Result<Dmc<T>> {
        if s >= self.s_size {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                size: self.s_size,
            });
        }
        let data = (0..self.x_size).flat_map(|x| self.row(x, s).iter().copied()).collect();
        Ok(Dmc::from_raw_normalized(self.x_size, self.y_size, data))
    }

    /// The legitimate channel `W(. | ., s0)`.
    pub fn clean_channel(&self) -> Dmc<T> {
        self.fix_state(self.s0).expect("s0 is validated")
    }

    /// Draws the product-channel output for input `x` under state sequence `s`.
    pub fn sample<R: Rng + ?Sized>(&self, x: &[u8], s: &[u8], rng: &mut R) -> Result<Vec<u8>> {
        if x.len() != s.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: s.len(),
            });
        }
        x.iter()
            .zip(s)
            .map(|(&xi, &si)| {
                let (xi, si) = (xi as usize, si as usize);
                if xi >= self.x_size {
                    return Err(Error::SymbolOutOfRange {
                        symbol: xi,
                        size: self.x_size,
                    });
                }
                if si >= self.s_size {
                    return Err(Error::SymbolOutOfRange {
                        symbol: si,
                        size: self.s_size,
                    });
                }
                Ok(sample_index(self.row(xi, si), rng) as u8)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_avc(p: f64) -> Avc {
        Avc::from_fn(2, 2, 2, 0, |x, s, y| if y == x ^ s { 1.0 - p } else { p }).unwrap()
    }

    #[test]
    fn fix_state_slices() {
        let avc = xor_avc(0.25);
        assert_eq!(avc.fix_state(0).unwrap(), Dmc::bsc(0.25).unwrap());
        let flipped = avc.fix_state(1).unwrap();
        let bsc = Dmc::bsc(0.25).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(flipped.get(x, y), bsc.get(x ^ 1, y));
            }
        }
        assert!(matches!(avc.fix_state(2), Err(Error::SymbolOutOfRange { .. })));
    }

    #[test]
    fn rejects_invalid_tensors() {
        assert!(Avc::<f64>::new(vec![vec![vec![1.0, 0.0]]], 1).is_err());
        assert!(matches!(
            Avc::<f64>::new(vec![vec![vec![0.5, 0.4]]], 0),
            Err(Error::NonStochasticRow { .. })
        ));
    }
}
