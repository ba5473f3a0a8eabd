use crate::error::{Error, Result};
use crate::prob::dist::check_row;
use crate::scalar::Real;

/// A discrete memoryless channel: a row-stochastic matrix with
/// `kernel[x][y] = P(y | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc<T = f64> {
    in_size: usize,
    out_size: usize,
    data: Vec<T>,
}

impl<T: Real> Dmc<T> {
    /// Validates a rectangular, nonnegative, row-stochastic matrix.
    pub fn new(kernel: Vec<Vec<T>>) -> Result<Self> {
        let in_size = kernel.len();
        if in_size == 0 {
            return Err(Error::DimensionMismatch("channel has no input symbols".into()));
        }
        let out_size = kernel[0].len();
        if out_size == 0 {
            return Err(Error::DimensionMismatch("channel has no output symbols".into()));
        }
        let mut data = Vec::with_capacity(in_size * out_size);
        for (x, row) in kernel.iter().enumerate() {
            if row.len() != out_size {
                return Err(Error::DimensionMismatch(format!(
                    "row {x} has {} entries, expected {out_size}",
                    row.len()
                )));
            }
            check_row(row, x)?;
            data.extend_from_slice(row);
        }
        Ok(Self {
            in_size,
            out_size,
            data,
        })
    }

    /// Builds a channel from `f(x, y)`, validating the result.
    pub fn from_fn(in_size: usize, out_size: usize, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        Self::new((0..in_size).map(|x| (0..out_size).map(|y| f(x, y)).collect()).collect())
    }

    /// Wraps rows produced by a solver or by composition. Entries are clamped
    /// to be nonnegative and each row is rescaled to sum to one; rows with no
    /// mass become uniform.
    pub(crate) fn from_raw_normalized(in_size: usize, out_size: usize, mut data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), in_size * out_size);
        for row in data.chunks_mut(out_size) {
            for v in row.iter_mut() {
                if !(*v > T::zero()) {
                    *v = T::zero();
                }
            }
            let sum: T = row.iter().copied().sum();
            if sum > T::zero() {
                for v in row.iter_mut() {
                    *v = *v / sum;
                }
            } else {
                let u = T::one() / T::lit(out_size as f64);
                row.iter_mut().for_each(|v| *v = u);
            }
        }
        Self {
            in_size,
            out_size,
            data,
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_raw_normalized(
            size,
            size,
            (0..size * size)
                .map(|k| if k / size == k % size { T::one() } else { T::zero() })
                .collect(),
        )
    }

    /// Channel whose output is uniform and independent of the input.
    pub fn uniform(in_size: usize, out_size: usize) -> Self {
        let u = T::one() / T::lit(out_size as f64);
        Self {
            in_size,
            out_size,
            data: vec![u; in_size * out_size],
        }
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: T) -> Result<Self> {
        let q = T::one() - p;
        Self::new(vec![vec![q, p], vec![p, q]])
    }

    /// Binary asymmetric channel with `P(1|0) = p0` and `P(0|1) = p1`.
    pub fn bac(p0: T, p1: T) -> Result<Self> {
        Self::new(vec![vec![T::one() - p0, p0], vec![p1, T::one() - p1]])
    }

    /// Z-channel that maps a `1` to `0` with probability `gamma` and never
    /// disturbs a `0`.
    pub fn z_channel(gamma: T) -> Result<Self> {
        Self::bac(T::zero(), gamma)
    }

    /// Binary erasure channel; output `2` is the erasure symbol.
    pub fn bec(p: T) -> Result<Self> {
        let q = T::one() - p;
        Self::new(vec![vec![q, T::zero(), p], vec![T::zero(), q, p]])
    }

    pub fn in_size(&self) -> usize {
        self.in_size
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[x * self.out_size + y]
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[T] {
        &self.data[x * self.out_size..(x + 1) * self.out_size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.out_size)
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// Cascade `self` (X -> Z) followed by `second` (Z -> Y).
    pub fn compose(&self, second: &Dmc<T>) -> Result<Dmc<T>> {
        if self.out_size != second.in_size {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose a channel with {} outputs with one taking {} inputs",
                self.out_size, second.in_size
            )));
        }
        let mut data = vec![T::zero(); self.in_size * second.out_size];
        for x in 0..self.in_size {
            for z in 0..self.out_size {
                let a = self.get(x, z);
                if a == T::zero() {
                    continue;
                }
                for y in 0..second.out_size {
                    let cell = &mut data[x * second.out_size + y];
                    *cell = *cell + a * second.get(z, y);
                }
            }
        }
        Ok(Dmc {
            in_size: self.in_size,
            out_size: second.out_size,
            data,
        })
    }

    /// Largest entrywise absolute difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Dmc<T>) -> T {
        if self.in_size != other.in_size || self.out_size != other.out_size {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// Whether every row is a point mass.
    pub fn is_deterministic(&self) -> bool {
        self.rows().all(|r| r.iter().any(|&v| v == T::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_dmc_examples() {
        let id = Dmc::new(vec![vec![1.0f64, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(id, Dmc::identity(2));
        let bsc = Dmc::new(vec![vec![0.75f64, 0.25], vec![0.25, 0.75]]).unwrap();
        assert_eq!(bsc, Dmc::bsc(0.25).unwrap());
        match Dmc::new(vec![vec![0.5f64, 0.4], vec![0.2, 0.8]]) {
            Err(Error::NonStochasticRow { index, sum }) => {
                assert_eq!(index, 0);
                assert!((sum - 0.9).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        assert!(matches!(
            Dmc::new(vec![vec![1.0f64], vec![0.5, 0.5]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn bsc_cascade() {
        let (a, b) = (0.1f64, 0.2f64);
        let c = Dmc::bsc(a).unwrap().compose(&Dmc::bsc(b).unwrap()).unwrap();
        // direct 2x2 product: off-diagonal is a(1-b) + (1-a)b
        let off = a * (1.0 - b) + (1.0 - a) * b;
        assert!((c.get(0, 1) - off).abs() < 1e-15);
        assert!((c.get(0, 1) - (a + b - 2.0 * a * b)).abs() < 1e-15);
        assert!(c.max_abs_diff(&Dmc::bsc(a + b - 2.0 * a * b).unwrap()) < 1e-15);
    }

    #[test]
    fn z_then_bsc_is_bac() {
        let (g, p) = (0.1f64, 0.25f64);
        let c = Dmc::z_channel(g).unwrap().compose(&Dmc::bsc(p).unwrap()).unwrap();
        let bac = Dmc::bac(p, g + p - 2.0 * g * p).unwrap();
        assert!(c.max_abs_diff(&bac) < 1e-15);
    }

    #[test]
    fn identity_is_neutral() {
        let d = Dmc::new(vec![vec![0.2f64, 0.3, 0.5], vec![0.6, 0.1, 0.3]]).unwrap();
        assert_eq!(d.compose(&Dmc::identity(3)).unwrap(), d);
        assert_eq!(Dmc::identity(2).compose(&d).unwrap(), d);
        assert!(matches!(d.compose(&Dmc::identity(2)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let c = Dmc::bsc(0.1f32).unwrap().compose(&Dmc::bsc(0.2f32).unwrap()).unwrap();
        assert!((c.get(1, 0) - 0.26).abs() < 1e-6);
    }
}
