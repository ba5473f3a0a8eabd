//! Overwritability, symmetrizability and stochastic degradation, each decided
//! as a linear feasibility problem over the kernel that would witness it.

use crate::error::{Error, Result};
use crate::lp::{solve_feasibility, FeasibilityResult, FeasibilitySystem};
use crate::prob::{Avc, Dmc};
use crate::scalar::Real;

/// A state kernel `P(s | x', z)` stored with rows indexed by `x' * Z + z`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateKernel<T = f64> {
    x_size: usize,
    z_size: usize,
    rows: Dmc<T>,
}

impl<T: Real> StateKernel<T> {
    pub fn new(x_size: usize, z_size: usize, rows: Dmc<T>) -> Result<Self> {
        if rows.in_size() != x_size * z_size {
            return Err(Error::DimensionMismatch(format!(
                "state kernel needs {} rows, got {}",
                x_size * z_size,
                rows.in_size()
            )));
        }
        Ok(Self { x_size, z_size, rows })
    }

    pub fn from_fn(x_size: usize, z_size: usize, s_size: usize, f: impl Fn(usize, usize, usize) -> T) -> Result<Self> {
        let rows = Dmc::from_fn(x_size * z_size, s_size, |r, s| f(r / z_size, r % z_size, s))?;
        Self::new(x_size, z_size, rows)
    }

    /// Lifts `P(s | x')` to a kernel that ignores the observation.
    pub fn ignoring_observation(p: &Dmc<T>, z_size: usize) -> Self {
        let data = (0..p.in_size() * z_size)
            .flat_map(|r| p.row(r / z_size).to_vec())
            .collect();
        Self {
            x_size: p.in_size(),
            z_size,
            rows: Dmc::from_raw_normalized(p.in_size() * z_size, p.out_size(), data),
        }
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn z_size(&self) -> usize {
        self.z_size
    }

    pub fn s_size(&self) -> usize {
        self.rows.out_size()
    }

    #[inline]
    pub fn get(&self, x_prime: usize, z: usize, s: usize) -> T {
        self.rows.get(x_prime * self.z_size + z, s)
    }

    #[inline]
    pub fn row(&self, x_prime: usize, z: usize) -> &[T] {
        self.rows.row(x_prime * self.z_size + z)
    }

    pub fn as_dmc(&self) -> &Dmc<T> {
        &self.rows
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.x_size != other.x_size || self.z_size != other.z_size {
            return T::infinity();
        }
        self.rows.max_abs_diff(&other.rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Overwritable,
    UOverwritable,
    IOverwritable,
    Symmetrizable,
    Degraded,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Overwritable => "overwritable",
            Self::UOverwritable => "u_overwritable",
            Self::IOverwritable => "i_overwritable",
            Self::Symmetrizable => "symmetrizable",
            Self::Degraded => "degraded",
        }
    }
}

/// Shape of the kernel that certifies a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness<T = f64> {
    /// `P(s | x')`, for overwritability and symmetrizability.
    StateGivenInput(Dmc<T>),
    /// `P(s | x', z)`; for I-overwritability `z` is the transmitted symbol.
    StateGivenObservation(StateKernel<T>),
    /// `P(y | z)` with `candidate = reference ∘ P`.
    Degradation(Dmc<T>),
}

impl<T: Real> Witness<T> {
    pub fn as_state_kernel(&self) -> Option<&StateKernel<T>> {
        match self {
            Self::StateGivenObservation(k) => Some(k),
            _ => None,
        }
    }

    pub fn as_dmc(&self) -> &Dmc<T> {
        match self {
            Self::StateGivenInput(d) | Self::Degradation(d) => d,
            Self::StateGivenObservation(k) => k.as_dmc(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverwriteVerdict<T = f64> {
    pub kind: VerdictKind,
    pub result: FeasibilityResult<T>,
    /// Best approximation whatever the verdict.
    pub best: Witness<T>,
}

impl<T: Real> OverwriteVerdict<T> {
    pub fn holds(&self) -> bool {
        self.result.feasible
    }

    pub fn witness(&self) -> Option<&Witness<T>> {
        self.holds().then_some(&self.best)
    }
}

fn single_block_verdict<T: Real>(
    kind: VerdictKind,
    sys: &FeasibilitySystem<T>,
    tol: T,
    wrap: impl FnOnce(Dmc<T>) -> Result<Witness<T>>,
) -> Result<OverwriteVerdict<T>> {
    let result = solve_feasibility(sys, tol)?;
    let best = wrap(result.blocks[0].clone())?;
    Ok(OverwriteVerdict { kind, result, best })
}

/// Is there `P(s | x')` with `sum_s P(s|x') W(y|x,s) = W(y|x',s0)`?
pub fn is_overwritable<T: Real>(avc: &Avc<T>, tol: T) -> Result<OverwriteVerdict<T>> {
    let (nx, ns, ny) = (avc.x_size(), avc.s_size(), avc.y_size());
    let mut sys = FeasibilitySystem::new();
    let p = sys.add_block("P(s|x')", nx, ns)?;
    for x in 0..nx {
        for xp in 0..nx {
            for y in 0..ny {
                let terms: Vec<_> = (0..ns).map(|s| (sys.var(p, xp, s), avc.w(x, s, y))).collect();
                sys.add_equality(terms, avc.w(xp, avc.s0(), y))?;
            }
        }
    }
    single_block_verdict(VerdictKind::Overwritable, &sys, tol, |d| {
        Ok(Witness::StateGivenInput(d))
    })
}

fn u_system<T: Real>(avc: &Avc<T>, u: &Dmc<T>) -> Result<FeasibilitySystem<T>> {
    if u.in_size() != avc.x_size() {
        return Err(Error::DimensionMismatch(format!(
            "observation channel takes {} inputs, channel has {}",
            u.in_size(),
            avc.x_size()
        )));
    }
    let (nx, ns, ny, nz) = (avc.x_size(), avc.s_size(), avc.y_size(), u.out_size());
    let mut sys = FeasibilitySystem::new();
    let p = sys.add_block("P(s|x',z)", nx * nz, ns)?;
    for x in 0..nx {
        for xp in 0..nx {
            for y in 0..ny {
                let mut terms = Vec::with_capacity(nz * ns);
                for z in 0..nz {
                    let uz = u.get(x, z);
                    if uz == T::zero() {
                        continue;
                    }
                    for s in 0..ns {
                        terms.push((sys.var(p, xp * nz + z, s), uz * avc.w(x, s, y)));
                    }
                }
                sys.add_equality(terms, avc.w(xp, avc.s0(), y))?;
            }
        }
    }
    Ok(sys)
}

/// Is there `P(s | x', z)` with
/// `sum_{s,z} U(z|x) P(s|x',z) W(y|x,s) = W(y|x',s0)`?
pub fn is_u_overwritable<T: Real>(avc: &Avc<T>, u: &Dmc<T>, tol: T) -> Result<OverwriteVerdict<T>> {
    let sys = u_system(avc, u)?;
    let nz = u.out_size();
    single_block_verdict(VerdictKind::UOverwritable, &sys, tol, |d| {
        Ok(Witness::StateGivenObservation(StateKernel::new(avc.x_size(), nz, d)?))
    })
}

/// U-overwritability with a noiseless observation of the input.
pub fn is_i_overwritable<T: Real>(avc: &Avc<T>, tol: T) -> Result<OverwriteVerdict<T>> {
    let mut v = is_u_overwritable(avc, &Dmc::identity(avc.x_size()), tol)?;
    v.kind = VerdictKind::IOverwritable;
    Ok(v)
}

/// Is there `P(s | x')` with
/// `sum_s P(s|x') W(y|x,s) = sum_s P(s|x) W(y|x',s)`?
pub fn is_symmetrizable<T: Real>(avc: &Avc<T>, tol: T) -> Result<OverwriteVerdict<T>> {
    let (nx, ns, ny) = (avc.x_size(), avc.s_size(), avc.y_size());
    let mut sys = FeasibilitySystem::new();
    let p = sys.add_block("P(s|x')", nx, ns)?;
    for x in 0..nx {
        for xp in 0..nx {
            for y in 0..ny {
                let terms = (0..ns)
                    .map(|s| (sys.var(p, xp, s), avc.w(x, s, y)))
                    .chain((0..ns).map(|s| (sys.var(p, x, s), -avc.w(xp, s, y))))
                    .collect::<Vec<_>>();
                sys.add_equality(terms, T::zero())?;
            }
        }
    }
    single_block_verdict(VerdictKind::Symmetrizable, &sys, tol, |d| {
        Ok(Witness::StateGivenInput(d))
    })
}

/// Is `candidate` (X -> Y) a degraded version of `reference` (X -> Z), i.e.
/// is there `P(y|z)` with `candidate = reference ∘ P`?
pub fn is_degraded<T: Real>(candidate: &Dmc<T>, reference: &Dmc<T>, tol: T) -> Result<OverwriteVerdict<T>> {
    if candidate.in_size() != reference.in_size() {
        return Err(Error::DimensionMismatch(format!(
            "channels take {} and {} inputs",
            candidate.in_size(),
            reference.in_size()
        )));
    }
    let (nx, nz, ny) = (reference.in_size(), reference.out_size(), candidate.out_size());
    let mut sys = FeasibilitySystem::new();
    let q = sys.add_block("P(y|z)", nz, ny)?;
    for x in 0..nx {
        for y in 0..ny {
            let terms: Vec<_> = (0..nz).map(|z| (sys.var(q, z, y), reference.get(x, z))).collect();
            sys.add_equality(terms, candidate.get(x, y))?;
        }
    }
    single_block_verdict(VerdictKind::Degraded, &sys, tol, |d| Ok(Witness::Degradation(d)))
}

/// Position of two observation channels in the degradation preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegradationOrder {
    Equivalent,
    /// The first channel is a degraded version of the second.
    Less,
    Greater,
    Incomparable,
}

pub fn degradation_order<T: Real>(a: &Dmc<T>, b: &Dmc<T>, tol: T) -> Result<DegradationOrder> {
    let a_le_b = is_degraded(a, b, tol)?.holds();
    let b_le_a = is_degraded(b, a, tol)?.holds();
    Ok(match (a_le_b, b_le_a) {
        (true, true) => DegradationOrder::Equivalent,
        (true, false) => DegradationOrder::Less,
        (false, true) => DegradationOrder::Greater,
        (false, false) => DegradationOrder::Incomparable,
    })
}

/// `P(s | x', z) = sum_{z'} P(s | x', z') D(z' | z)`, turning a witness for
/// the observation `U¹ ∘ D` into one for `U¹`.
pub fn compose_witness<T: Real>(inner: &StateKernel<T>, degr: &Dmc<T>) -> Result<StateKernel<T>> {
    if degr.out_size() != inner.z_size() {
        return Err(Error::DimensionMismatch(format!(
            "degradation emits {} symbols, witness observes {}",
            degr.out_size(),
            inner.z_size()
        )));
    }
    let (nx, nz, ns) = (inner.x_size(), degr.in_size(), inner.s_size());
    let mut data = vec![T::zero(); nx * nz * ns];
    for xp in 0..nx {
        for z in 0..nz {
            let out = &mut data[(xp * nz + z) * ns..(xp * nz + z + 1) * ns];
            for zp in 0..inner.z_size() {
                let d = degr.get(z, zp);
                if d == T::zero() {
                    continue;
                }
                for (o, &p) in out.iter_mut().zip(inner.row(xp, zp)) {
                    *o = *o + d * p;
                }
            }
        }
    }
    StateKernel::new(nx, nz, Dmc::from_raw_normalized(nx * nz, ns, data))
}

/// `V(y | x, x')`: the law of the output when `x` is sent and the adversary
/// impersonates `x'` through a state kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionChannel<T = f64> {
    x_size: usize,
    y_size: usize,
    data: Vec<T>,
}

impl<T: Real> SubstitutionChannel<T> {
    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    #[inline]
    pub fn get(&self, x: usize, x_prime: usize, y: usize) -> T {
        self.data[(x * self.x_size + x_prime) * self.y_size + y]
    }

    pub fn row(&self, x: usize, x_prime: usize) -> &[T] {
        let start = (x * self.x_size + x_prime) * self.y_size;
        &self.data[start..start + self.y_size]
    }

    /// Largest deviation from the clean law `W(y | x', s0)`.
    pub fn deviation_from_clean(&self, avc: &Avc<T>) -> T {
        let mut worst = T::zero();
        for x in 0..self.x_size {
            for xp in 0..self.x_size {
                for y in 0..self.y_size {
                    worst = worst.max((self.get(x, xp, y) - avc.w(xp, avc.s0(), y)).abs());
                }
            }
        }
        worst
    }
}

/// `V(y|x,x') = sum_{s,z} U(z|x) P(s|x',z) W(y|x,s)`.
pub fn effective_substitution_channel<T: Real>(
    u: &Dmc<T>,
    witness: &StateKernel<T>,
    avc: &Avc<T>,
) -> Result<SubstitutionChannel<T>> {
    let (nx, ns, ny) = (avc.x_size(), avc.s_size(), avc.y_size());
    if u.in_size() != nx || witness.x_size() != nx || witness.z_size() != u.out_size() || witness.s_size() != ns {
        return Err(Error::DimensionMismatch(format!(
            "observation {}x{}, witness {}x{}x{}, channel with {nx} inputs and {ns} states",
            u.in_size(),
            u.out_size(),
            witness.x_size(),
            witness.z_size(),
            witness.s_size()
        )));
    }
    let mut data = vec![T::zero(); nx * nx * ny];
    for x in 0..nx {
        for xp in 0..nx {
            let out = &mut data[(x * nx + xp) * ny..(x * nx + xp + 1) * ny];
            for z in 0..u.out_size() {
                let uz = u.get(x, z);
                if uz == T::zero() {
                    continue;
                }
                for s in 0..ns {
                    let m = uz * witness.get(xp, z, s);
                    if m == T::zero() {
                        continue;
                    }
                    for (o, &w) in out.iter_mut().zip(avc.row(x, s)) {
                        *o = *o + m * w;
                    }
                }
            }
        }
    }
    Ok(SubstitutionChannel {
        x_size: nx,
        y_size: ny,
        data,
    })
}

/// Largest violation of the U-overwritability equalities by `witness`.
pub fn u_overwrite_residual<T: Real>(avc: &Avc<T>, u: &Dmc<T>, witness: &StateKernel<T>) -> Result<T> {
    Ok(effective_substitution_channel(u, witness, avc)?.deviation_from_clean(avc))
}
