//! Feasibility of linear systems over row-stochastic kernel unknowns.
//!
//! A [`FeasibilitySystem`] declares blocks of unknowns, each a kernel whose
//! rows must be probability vectors, together with linear equalities over
//! their entries. [`solve_feasibility`] minimises the largest absolute
//! equality violation with a dense two-phase simplex method and declares the
//! system feasible when that minimum is within a tolerance.

use crate::error::{Error, Result};
use crate::prob::Dmc;
use crate::scalar::Real;

pub const DEFAULT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpec {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    offset: usize,
}

impl BlockSpec {
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `sum(coef * var) = target`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEquality<T> {
    pub terms: Vec<(usize, T)>,
    pub target: T,
}

impl<T: Real> LinearEquality<T> {
    pub fn eval(&self, values: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, &(v, c)| acc + c * values[v])
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilitySystem<T = f64> {
    blocks: Vec<BlockSpec>,
    equalities: Vec<LinearEquality<T>>,
    num_vars: usize,
}

impl<T: Real> FeasibilitySystem<T> {
    pub fn new() -> Self {
        Self {
            blocks: Vec::new(),
            equalities: Vec::new(),
            num_vars: 0,
        }
    }

    /// Declares a `rows x cols` kernel of unknowns.
    pub fn add_block(&mut self, name: impl Into<String>, rows: usize, cols: usize) -> Result<BlockId> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "kernel block must be non-empty, got {rows}x{cols}"
            )));
        }
        let id = BlockId(self.blocks.len());
        self.blocks.push(BlockSpec {
            name: name.into(),
            rows,
            cols,
            offset: self.num_vars,
        });
        self.num_vars += rows * cols;
        Ok(id)
    }

    /// Global index of entry `(row, col)` of a block.
    pub fn var(&self, block: BlockId, row: usize, col: usize) -> usize {
        let b = &self.blocks[block.0];
        debug_assert!(row < b.rows && col < b.cols);
        b.offset + row * b.cols + col
    }

    /// Adds `sum(coef * var) = target`. Repeated variables are merged and
    /// zero coefficients dropped.
    pub fn add_equality(&mut self, terms: impl IntoIterator<Item = (usize, T)>, target: T) -> Result<()> {
        if !target.is_finite() {
            return Err(Error::InvalidParams(format!("non-finite target {target}")));
        }
        let mut merged: Vec<(usize, T)> = Vec::new();
        for (v, c) in terms {
            if v >= self.num_vars {
                return Err(Error::DimensionMismatch(format!(
                    "variable {v} does not belong to any block ({} declared)",
                    self.num_vars
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParams(format!("non-finite coefficient {c}")));
            }
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 = slot.1 + c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != T::zero());
        merged.sort_by_key(|&(v, _)| v);
        self.equalities.push(LinearEquality { terms: merged, target });
        Ok(())
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn equalities(&self) -> &[LinearEquality<T>] {
        &self.equalities
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Flattens kernels laid out like the blocks into one variable vector.
    pub fn flatten(&self, kernels: &[Dmc<T>]) -> Result<Vec<T>> {
        if kernels.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} kernels for {} blocks",
                kernels.len(),
                self.blocks.len()
            )));
        }
        let mut values = Vec::with_capacity(self.num_vars);
        for (k, b) in kernels.iter().zip(&self.blocks) {
            if k.in_size() != b.rows || k.out_size() != b.cols {
                return Err(Error::DimensionMismatch(format!(
                    "block {} expects {}x{}, got {}x{}",
                    b.name,
                    b.rows,
                    b.cols,
                    k.in_size(),
                    k.out_size()
                )));
            }
            values.extend(k.rows().flatten().copied());
        }
        Ok(values)
    }

    /// Largest absolute equality violation of the given kernels.
    pub fn max_residual(&self, kernels: &[Dmc<T>]) -> Result<T> {
        let values = self.flatten(kernels)?;
        Ok(self
            .equalities
            .iter()
            .map(|e| (e.eval(&values) - e.target).abs())
            .fold(T::zero(), T::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult<T = f64> {
    pub feasible: bool,
    /// Best L-infinity approximation found, one kernel per block. These are
    /// reported whatever the verdict; [`FeasibilityResult::witness`] exposes
    /// them only for feasible systems.
    pub blocks: Vec<Dmc<T>>,
    /// Largest equality violation of `blocks`.
    pub max_residual: T,
    pub tol: T,
    /// Violation within a factor of ten of `tol` either way.
    pub borderline: bool,
}

impl<T: Real> FeasibilityResult<T> {
    pub fn witness(&self) -> Option<&[Dmc<T>]> {
        self.feasible.then_some(self.blocks.as_slice())
    }

    /// Smallest achievable violation, reported for infeasible systems.
    pub fn min_violation(&self) -> Option<T> {
        (!self.feasible).then_some(self.max_residual)
    }
}

/// Minimises the L-infinity violation of `system` over stochastic kernels.
pub fn solve_feasibility<T: Real>(system: &FeasibilitySystem<T>, tol: T) -> Result<FeasibilityResult<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let values = MinMaxLp::build(system).solve()?;

    let blocks: Vec<Dmc<T>> = system
        .blocks
        .iter()
        .map(|b| Dmc::from_raw_normalized(b.rows, b.cols, values[b.offset..b.offset + b.len()].to_vec()))
        .collect();
    let max_residual = system.max_residual(&blocks)?;
    let ten = T::lit(10.0);
    Ok(FeasibilityResult {
        feasible: max_residual <= tol,
        borderline: max_residual >= tol / ten && max_residual <= tol * ten,
        blocks,
        max_residual,
        tol,
    })
}

/// Dense tableau for
///
/// ```text
/// min t  s.t.   A v - t <= b,  -A v - t <= -b,  kernel rows of v sum to 1,
///               v >= 0, t >= 0.
/// ```
struct MinMaxLp<T> {
    rows: usize,
    cols: usize,
    /// `(rows + 1) x (cols + 1)`, last column is the right-hand side and the
    /// last row holds reduced costs.
    tab: Vec<T>,
    basis: Vec<usize>,
    num_vars: usize,
    first_artificial: usize,
}

impl<T: Real> MinMaxLp<T> {
    fn t_col(&self) -> usize {
        self.num_vars
    }

    fn build(system: &FeasibilitySystem<T>) -> Self {
        let nv = system.num_vars;
        let ne = system.equalities.len();
        let kernel_rows: usize = system.blocks.iter().map(|b| b.rows).sum();
        let rows = 2 * ne + kernel_rows;
        let slack0 = nv + 1;
        let first_artificial = slack0 + 2 * ne;

        // every kernel row and one row of each inequality pair needs an artificial
        let artificials = ne + kernel_rows;
        let cols = first_artificial + artificials;
        let width = cols + 1;
        let mut tab = vec![T::zero(); (rows + 1) * width];
        let mut basis = vec![0; rows];
        let mut next_art = first_artificial;

        for (e, eq) in system.equalities.iter().enumerate() {
            for (k, sign) in [(0, T::one()), (1, -T::one())] {
                let r = 2 * e + k;
                let rhs = sign * eq.target;
                let flip = if rhs < T::zero() { -T::one() } else { T::one() };
                let row = &mut tab[r * width..(r + 1) * width];
                for &(v, c) in &eq.terms {
                    row[v] = flip * sign * c;
                }
                row[nv] = -flip;
                row[slack0 + r] = flip;
                row[cols] = flip * rhs;
                if flip > T::zero() {
                    basis[r] = slack0 + r;
                } else {
                    row[next_art] = T::one();
                    basis[r] = next_art;
                    next_art += 1;
                }
            }
        }
        let mut r = 2 * ne;
        for b in &system.blocks {
            for i in 0..b.rows {
                let row = &mut tab[r * width..(r + 1) * width];
                for j in 0..b.cols {
                    row[b.offset + i * b.cols + j] = T::one();
                }
                row[next_art] = T::one();
                row[cols] = T::one();
                basis[r] = next_art;
                next_art += 1;
                r += 1;
            }
        }
        // rows whose artificial went unused keep the column empty; shrink
        let cols_used = next_art;
        let mut lp = Self {
            rows,
            cols,
            tab,
            basis,
            num_vars: nv,
            first_artificial,
        };
        if cols_used < cols {
            lp.truncate_cols(cols_used);
        }
        lp
    }

    fn truncate_cols(&mut self, new_cols: usize) {
        let old_w = self.cols + 1;
        let new_w = new_cols + 1;
        let mut tab = vec![T::zero(); (self.rows + 1) * new_w];
        for r in 0..=self.rows {
            tab[r * new_w..r * new_w + new_cols].copy_from_slice(&self.tab[r * old_w..r * old_w + new_cols]);
            tab[r * new_w + new_cols] = self.tab[r * old_w + self.cols];
        }
        self.tab = tab;
        self.cols = new_cols;
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> T {
        self.tab[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> T {
        self.at(r, self.cols)
    }

    fn set_objective(&mut self, cost: &[T]) {
        let w = self.cols + 1;
        let obj = self.rows * w;
        for c in 0..w {
            self.tab[obj + c] = if c < self.cols { cost[c] } else { T::zero() };
        }
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != T::zero() {
                for c in 0..w {
                    let v = self.tab[r * w + c];
                    self.tab[obj + c] = self.tab[obj + c] - cb * v;
                }
            }
        }
    }

    fn objective_value(&self) -> T {
        -self.rhs(self.rows)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.tab[pr * w + pc];
        for c in 0..w {
            self.tab[pr * w + c] = self.tab[pr * w + c] / p;
        }
        self.tab[pr * w + pc] = T::one();
        let pivot_row: Vec<T> = self.tab[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.tab[r * w + pc];
            if f == T::zero() {
                continue;
            }
            let row = &mut self.tab[r * w..(r + 1) * w];
            for (cell, &pv) in row.iter_mut().zip(&pivot_row) {
                if pv != T::zero() {
                    *cell = *cell - f * pv;
                }
            }
            row[pc] = T::zero();
        }
        self.basis[pr] = pc;
    }

    /// Primal simplex on the current objective row over columns `< limit`.
    fn optimize(&mut self, limit: usize) -> Result<()> {
        let eps_cost = T::lit(1e3) * T::epsilon();
        let eps_pivot = T::lit(1e4) * T::epsilon();
        let max_iter = 50 * (self.rows + self.cols) + 10_000;
        let mut degenerate_streak = 0usize;

        for _ in 0..max_iter {
            let bland = degenerate_streak > 25;
            let mut enter = None;
            let mut best = -eps_cost;
            for c in 0..limit {
                let rc = self.at(self.rows, c);
                if rc < best {
                    enter = Some(c);
                    if bland {
                        break;
                    }
                    best = rc;
                }
            }
            let Some(pc) = enter else {
                return Ok(());
            };

            let mut leave: Option<(usize, T, T)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a <= eps_pivot {
                    continue;
                }
                let ratio = self.rhs(r).max(T::zero()) / a;
                leave = match leave {
                    None => Some((r, ratio, a)),
                    Some((lr, lratio, la)) => {
                        let slack = eps_pivot * (T::one() + lratio.abs());
                        if ratio < lratio - slack {
                            Some((r, ratio, a))
                        } else if ratio <= lratio + slack {
                            let better = if bland { self.basis[r] < self.basis[lr] } else { a > la };
                            if better {
                                Some((r, ratio, a))
                            } else {
                                Some((lr, lratio, la))
                            }
                        } else {
                            Some((lr, lratio, la))
                        }
                    }
                };
            }
            let Some((pr, ratio, _)) = leave else {
                return Err(Error::NumericFailure("unbounded direction in a bounded program".into()));
            };
            if ratio <= eps_pivot {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }
            self.pivot(pr, pc);
        }
        Err(Error::NumericFailure(format!(
            "simplex did not converge within {max_iter} pivots"
        )))
    }

    fn solve(mut self) -> Result<Vec<T>> {
        // phase one: reach a basic feasible point
        let mut cost = vec![T::zero(); self.cols];
        for c in cost.iter_mut().skip(self.first_artificial) {
            *c = T::one();
        }
        self.set_objective(&cost);
        self.optimize(self.cols)?;
        let infeasibility = self.objective_value();
        let scale = T::one() + T::lit(self.rows as f64);
        if infeasibility > T::epsilon().sqrt() * scale {
            return Err(Error::NumericFailure(format!(
                "phase one stalled at artificial mass {infeasibility}"
            )));
        }

        // drive artificials out of the basis where possible
        let eps_pivot = T::lit(1e4) * T::epsilon();
        for r in 0..self.rows {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            let mut best: Option<(usize, T)> = None;
            for c in 0..self.first_artificial {
                let a = self.at(r, c).abs();
                if a > eps_pivot && best.is_none_or(|(_, b)| a > b) {
                    best = Some((c, a));
                }
            }
            if let Some((c, _)) = best {
                self.pivot(r, c);
            }
        }

        // phase two: minimise t with artificials barred from entering
        let mut cost = vec![T::zero(); self.cols];
        cost[self.t_col()] = T::one();
        self.set_objective(&cost);
        self.optimize(self.first_artificial)?;

        let mut values = vec![T::zero(); self.num_vars];
        for r in 0..self.rows {
            let b = self.basis[r];
            if b < self.num_vars {
                values[b] = self.rhs(r);
            }
        }
        Ok(values)
    }
}
