//! Exact evaluation of the authentication error at small blocklengths.
//!
//! The receiver's rule is tabulated once over every output word. For a
//! strategy whose state, given the two codewords involved, is drawn
//! independently per symbol, the output is itself a product law and its
//! decoder-outcome masses are summed over the table. Strategies that act on
//! the whole observation (decode-and-forge) are evaluated by enumerating the
//! channel input and the observation.

use std::collections::HashMap;

use crate::authsim::adversary::{
    adversary_estimate, forge_state, AdversaryStrategy, AttackContext, ForgeRule, SideInfo,
};
use crate::authsim::codebook::Codebook;
use crate::authsim::decoder::DecoderConfig;
use crate::authsim::report::ErrorReport;
use crate::error::{Error, Result};
use crate::prob::{Avc, Dmc};

/// Rough operation count above which exact evaluation is refused.
pub const DEFAULT_BUDGET: f64 = 2e9;

/// Decoder outcome for every output word, indexed with the first position as
/// the most significant digit. Outcome `M` stands for "interference".
pub(crate) struct DecoderTable {
    n: usize,
    y_size: usize,
    messages: usize,
    outcome: Vec<u32>,
}

impl DecoderTable {
    pub(crate) fn build(cb: &Codebook, decoder: &DecoderConfig, y_size: usize) -> Self {
        let n = cb.n();
        let size = y_size.pow(n as u32);
        let mut y = vec![0u8; n];
        let mut outcome = Vec::with_capacity(size);
        for _ in 0..size {
            outcome.push(decoder.decode(cb, &y).map_or(cb.len(), |m| m) as u32);
            // odometer, last position fastest
            for k in (0..n).rev() {
                y[k] += 1;
                if (y[k] as usize) < y_size {
                    break;
                }
                y[k] = 0;
            }
        }
        Self {
            n,
            y_size,
            messages: cb.len(),
            outcome,
        }
    }

    pub(crate) fn cost(cb: &Codebook, y_size: usize) -> f64 {
        (y_size as f64).powi(cb.n() as i32) * (cb.len() * cb.n() + cb.n()) as f64
    }

    fn leaves(&self) -> f64 {
        (self.y_size as f64).powi(self.n as i32)
    }

    /// Mass of each decoder outcome under the product of the per-position
    /// (possibly sub-stochastic) laws.
    pub(crate) fn masses(&self, laws: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; self.messages + 1];
        self.descend(0, 0, 1.0, laws, &mut out);
        out
    }

    fn descend(&self, k: usize, idx: usize, prob: f64, laws: &[Vec<f64>], out: &mut [f64]) {
        if k == self.n {
            out[self.outcome[idx] as usize] += prob;
            return;
        }
        for (y, &p) in laws[k].iter().enumerate() {
            let q = prob * p;
            if q != 0.0 {
                self.descend(k + 1, idx * self.y_size + y, q, laws, out);
            }
        }
    }
}

/// `P(phi(y) != i)` for every base word when `y` is drawn from the product of
/// `channel` applied to that word.
pub fn clean_word_errors(channel: &Dmc, cb: &Codebook, decoder: &DecoderConfig) -> Result<Vec<f64>> {
    if let Some(&b) = cb.words().iter().flatten().find(|&&b| b as usize >= channel.in_size()) {
        return Err(Error::SymbolOutOfRange {
            symbol: b as usize,
            size: channel.in_size(),
        });
    }
    check_budget(DecoderTable::cost(cb, channel.out_size()) * 2.0, DEFAULT_BUDGET)?;
    let table = DecoderTable::build(cb, decoder, channel.out_size());
    Ok((0..cb.len())
        .map(|i| {
            let laws: Vec<Vec<f64>> = cb.word(i).iter().map(|&t| channel.row(t as usize).to_vec()).collect();
            (1.0 - table.masses(&laws)[i]).clamp(0.0, 1.0)
        })
        .collect())
}

fn check_budget(required: f64, budget: f64) -> Result<()> {
    if required > budget {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// Exact `e(i, J)` for every message, with the default budget.
pub fn exact_error(
    avc: &Avc,
    u: &Dmc,
    cb: &Codebook,
    decoder: &DecoderConfig,
    strategy: &AdversaryStrategy,
) -> Result<ErrorReport> {
    exact_error_with_budget(avc, u, cb, decoder, strategy, DEFAULT_BUDGET)
}

pub fn exact_error_with_budget(
    avc: &Avc,
    u: &Dmc,
    cb: &Codebook,
    decoder: &DecoderConfig,
    strategy: &AdversaryStrategy,
    budget: f64,
) -> Result<ErrorReport> {
    let ctx = AttackContext {
        avc,
        u,
        codebook: cb,
        decoder,
    };
    ctx.validate(strategy)?;
    let ny = avc.y_size();
    let m = cb.len();
    let leaves = (ny as f64).powi(cb.n() as i32);
    let table_cost = DecoderTable::cost(cb, ny);
    let mf = m as f64;
    let eval_cost = match strategy {
        AdversaryStrategy::Absent | AdversaryStrategy::ConstantState(_) => mf * leaves,
        AdversaryStrategy::Impersonation { .. } => mf * mf * leaves,
        AdversaryStrategy::DegradationImpersonation { .. } => mf * mf * mf * leaves,
        AdversaryStrategy::DecodeAndForge { rule, .. } => {
            let supp_x = input_support_size(cb);
            let supp_z = (u.out_size() as f64).powi(cb.n() as i32);
            let per_xz = mf * cb.n() as f64;
            let evals = match rule {
                ForgeRule::Xor => (mf * (mf - 1.0)).min(supp_z * (mf - 1.0)),
                ForgeRule::MatchOrErase { .. } => supp_z * (mf - 1.0),
            };
            mf * supp_x * (supp_z * per_xz + evals * leaves)
        }
    };
    check_budget(table_cost + eval_cost, budget)?;

    let table = DecoderTable::build(cb, decoder, ny);
    let per_message = match strategy {
        AdversaryStrategy::Absent => {
            let s0 = vec![avc.s0() as u8; cb.n()];
            (0..m).map(|i| constant_state_error(&table, avc, cb, i, &s0)).collect()
        }
        AdversaryStrategy::ConstantState(s) => (0..m).map(|i| constant_state_error(&table, avc, cb, i, s)).collect(),
        AdversaryStrategy::Impersonation { witness } => impersonation_errors(&table, &ctx, witness),
        AdversaryStrategy::DegradationImpersonation { post, witness } => {
            degradation_errors(&table, &ctx, post, witness)?
        }
        AdversaryStrategy::DecodeAndForge { grants, rule } => forge_errors(&table, &ctx, *grants, rule)?,
    };
    debug_assert!(table.leaves() == leaves);
    Ok(ErrorReport::exact(
        per_message.into_iter().map(|e: f64| e.clamp(0.0, 1.0)).collect(),
    ))
}

fn input_support_size(cb: &Codebook) -> f64 {
    let v = cb.encoder_channel();
    let mut worst: f64 = 1.0;
    for i in 0..cb.len() {
        let size: f64 = cb
            .word(i)
            .iter()
            .map(|&t| v.row(t as usize).iter().filter(|&&p| p > 0.0).count() as f64)
            .product();
        worst = worst.max(size);
    }
    worst
}

/// Error for a realized state sequence given the outcome masses: when the
/// adversary stayed silent only the correct message counts as success,
/// otherwise declaring interference does too.
fn error_given(masses: &[f64], i: usize, silent: bool) -> f64 {
    let reject = masses[masses.len() - 1];
    if silent {
        1.0 - masses[i]
    } else {
        1.0 - masses[i] - reject
    }
}

fn constant_state_error(table: &DecoderTable, avc: &Avc, cb: &Codebook, i: usize, s: &[u8]) -> f64 {
    let v = cb.encoder_channel();
    let laws: Vec<Vec<f64>> = cb
        .word(i)
        .iter()
        .zip(s)
        .map(|(&t, &sk)| {
            (0..avc.y_size())
                .map(|y| {
                    (0..avc.x_size())
                        .map(|x| v.get(t as usize, x) * avc.w(x, sk as usize, y))
                        .sum()
                })
                .collect()
        })
        .collect();
    let silent = s.iter().all(|&sk| sk as usize == avc.s0());
    error_given(&table.masses(&laws), i, silent)
}

fn impersonation_errors(
    table: &DecoderTable,
    ctx: &AttackContext,
    witness: &crate::overwrite::StateKernel,
) -> Vec<f64> {
    let (avc, u, cb) = (ctx.avc, ctx.u, ctx.codebook);
    let v = cb.encoder_channel();
    let (nb, nx, ns, ny, nz) = (v.in_size(), avc.x_size(), avc.s_size(), avc.y_size(), u.out_size());
    let s0 = avc.s0();
    // full[t][t'][y] and silent[t][t'][y], the latter restricted to s = s0
    let mut full = vec![vec![vec![0.0; ny]; nb]; nb];
    let mut silent = vec![vec![vec![0.0; ny]; nb]; nb];
    for t in 0..nb {
        for tp in 0..nb {
            for x in 0..nx {
                let px = v.get(t, x);
                if px == 0.0 {
                    continue;
                }
                for xp in 0..nx {
                    let pxp = v.get(tp, xp);
                    if pxp == 0.0 {
                        continue;
                    }
                    for z in 0..nz {
                        let pz = px * pxp * u.get(x, z);
                        if pz == 0.0 {
                            continue;
                        }
                        for s in 0..ns {
                            let ps = pz * witness.get(xp, z, s);
                            if ps == 0.0 {
                                continue;
                            }
                            for y in 0..ny {
                                let w = ps * avc.w(x, s, y);
                                full[t][tp][y] += w;
                                if s == s0 {
                                    silent[t][tp][y] += w;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let m = cb.len();
    (0..m)
        .map(|i| {
            let total: f64 = (0..m)
                .map(|j| {
                    let pairs = cb.word(i).iter().zip(cb.word(j));
                    let lf: Vec<Vec<f64>> = pairs
                        .clone()
                        .map(|(&a, &b)| full[a as usize][b as usize].clone())
                        .collect();
                    let ls: Vec<Vec<f64>> = pairs.map(|(&a, &b)| silent[a as usize][b as usize].clone()).collect();
                    let mf = table.masses(&lf);
                    let ms = table.masses(&ls);
                    1.0 - mf[i] - mf[m] + ms[m]
                })
                .sum();
            total / m as f64
        })
        .collect()
}

fn degradation_errors(
    table: &DecoderTable,
    ctx: &AttackContext,
    post: &Dmc,
    witness: &crate::overwrite::StateKernel,
) -> Result<Vec<f64>> {
    let (avc, u, cb) = (ctx.avc, ctx.u, ctx.codebook);
    if !cb.is_deterministic() {
        return Err(Error::Unsupported(
            "exact degradation impersonation needs a deterministic encoder".into(),
        ));
    }
    if post.out_size() != avc.y_size() {
        return Err(Error::DimensionMismatch(format!(
            "post-processing emits {} symbols, the receiver reads {}",
            post.out_size(),
            avc.y_size()
        )));
    }
    let sim = u.compose(post)?;
    let (ns, ny, s0, m) = (avc.s_size(), avc.y_size(), avc.s0(), cb.len());
    let silent_seq = vec![s0 as u8; cb.n()];
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let xi = cb.word(i);
        let sim_laws: Vec<Vec<f64>> = xi.iter().map(|&x| sim.row(x as usize).to_vec()).collect();
        let q = table.masses(&sim_laws);
        let mut e = q[m] * constant_state_error(table, avc, cb, i, &silent_seq);
        for (mh, &qm) in q.iter().enumerate().take(m) {
            if qm == 0.0 {
                continue;
            }
            let x_hat = cb.word(mh);
            let mut acc = 0.0;
            for j in 0..m {
                let xj = cb.word(j);
                let mut lf = Vec::with_capacity(cb.n());
                let mut ls = Vec::with_capacity(cb.n());
                for k in 0..cb.n() {
                    let (x, xp, xh) = (xi[k] as usize, xj[k] as usize, x_hat[k] as usize);
                    let row: Vec<f64> = (0..ny)
                        .map(|y| (0..ns).map(|s| witness.get(xp, xh, s) * avc.w(x, s, y)).sum())
                        .collect();
                    let p0 = witness.get(xp, xh, s0);
                    lf.push(row);
                    ls.push((0..ny).map(|y| p0 * avc.w(x, s0, y)).collect());
                }
                let mf = table.masses(&lf);
                let ms = table.masses(&ls);
                acc += 1.0 - mf[i] - mf[m] + ms[m];
            }
            e += qm * acc / m as f64;
        }
        out.push(e);
    }
    Ok(out)
}

/// Visits every sequence in the product of per-position supports with its
/// probability.
fn for_each_sequence(supports: &[Vec<(u8, f64)>], f: &mut dyn FnMut(&[u8], f64)) {
    fn rec(k: usize, supports: &[Vec<(u8, f64)>], buf: &mut Vec<u8>, prob: f64, f: &mut dyn FnMut(&[u8], f64)) {
        if k == supports.len() {
            f(buf, prob);
            return;
        }
        for &(a, p) in &supports[k] {
            buf.push(a);
            rec(k + 1, supports, buf, prob * p, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(supports.len());
    rec(0, supports, &mut buf, 1.0, f);
}

fn support(row: &[f64]) -> Vec<(u8, f64)> {
    row.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(a, &p)| (a as u8, p))
        .collect()
}

fn forge_errors(
    table: &DecoderTable,
    ctx: &AttackContext,
    grants: crate::authsim::adversary::Grants,
    rule: &ForgeRule,
) -> Result<Vec<f64>> {
    let (avc, u, cb) = (ctx.avc, ctx.u, ctx.codebook);
    let m = cb.len();
    let s0 = avc.s0() as u8;
    let v = cb.encoder_channel();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let x_supports: Vec<Vec<(u8, f64)>> = cb.word(i).iter().map(|&t| support(v.row(t as usize))).collect();
        let mut e = 0.0;
        let mut failure = None;
        for_each_sequence(&x_supports, &mut |x, px| {
            if failure.is_some() {
                return;
            }
            let law_cache: Vec<Vec<Vec<f64>>> = x
                .iter()
                .map(|&xk| (0..avc.s_size()).map(|s| avc.row(xk as usize, s).to_vec()).collect())
                .collect();
            let mut cache: HashMap<Vec<u8>, f64> = HashMap::new();
            let mut err_of = |s: Vec<u8>| -> f64 {
                if let Some(&v) = cache.get(&s) {
                    return v;
                }
                let laws: Vec<Vec<f64>> = s
                    .iter()
                    .enumerate()
                    .map(|(k, &sk)| law_cache[k][sk as usize].clone())
                    .collect();
                let silent = s.iter().all(|&sk| sk == s0);
                let val = error_given(&table.masses(&laws), i, silent);
                cache.insert(s, val);
                val
            };
            if m < 2 {
                e += px * err_of(vec![s0; cb.n()]);
                return;
            }
            let z_supports: Vec<Vec<(u8, f64)>> = x.iter().map(|&xk| support(u.row(xk as usize))).collect();
            for_each_sequence(&z_supports, &mut |z, pz| {
                if failure.is_some() {
                    return;
                }
                let side = SideInfo::reveal(grants, cb, i, x, z);
                let m_hat = match adversary_estimate(cb, z, &side, grants) {
                    Ok(h) => h,
                    Err(err) => {
                        failure = Some(err);
                        return;
                    }
                };
                let w = px * pz / (m - 1) as f64;
                for j in (0..m).filter(|&j| j != m_hat) {
                    e += w * err_of(forge_state(rule, ctx, z, m_hat, j));
                }
            });
        });
        if let Some(err) = failure {
            return Err(err);
        }
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::authsim::adversary::Grants;
    use crate::channels::{mbac_avc, replacement_avc};
    use crate::overwrite::StateKernel;

    fn rep3() -> Codebook {
        Codebook::new(vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap()
    }

    #[test]
    fn noiseless_absent_is_error_free() {
        let avc = mbac_avc(0.0).unwrap();
        let cb = rep3();
        let r = exact_error(
            &avc,
            &Dmc::identity(2),
            &cb,
            &DecoderConfig::distance(1.0),
            &AdversaryStrategy::Absent,
        )
        .unwrap();
        assert_eq!(r.per_message, vec![0.0, 0.0]);
    }

    #[test]
    fn repetition_code_over_bsc() {
        // majority decoding of a length-3 repetition code fails w.p. 3p^2 - 2p^3
        let p: f64 = 0.1;
        let avc = mbac_avc(p).unwrap();
        let r = exact_error(
            &avc,
            &Dmc::identity(2),
            &rep3(),
            &DecoderConfig::distance(2.0),
            &AdversaryStrategy::Absent,
        )
        .unwrap();
        let expected = 3.0 * p * p - 2.0 * p * p * p;
        assert!((r.average - expected).abs() < 1e-15);
    }

    #[test]
    fn constant_flip_counts_rejection_as_success() {
        let avc = mbac_avc(0.0).unwrap();
        let cb = rep3();
        // flipping one symbol makes the strict radius-1 decoder reject
        let strategy = AdversaryStrategy::ConstantState(vec![1, 0, 0]);
        let r = exact_error(&avc, &Dmc::identity(2), &cb, &DecoderConfig::distance(1.0), &strategy).unwrap();
        assert_eq!(r.per_message, vec![0.0, 0.0]);
        let strategy = AdversaryStrategy::ConstantState(vec![1, 1, 1]);
        let r = exact_error(&avc, &Dmc::identity(2), &cb, &DecoderConfig::distance(1.0), &strategy).unwrap();
        assert_eq!(r.per_message, vec![1.0, 1.0]);
    }

    #[test]
    fn replacement_impersonation_hits_m_minus_one_over_m() {
        let avc = replacement_avc::<f64>();
        let cb = Codebook::new(vec![
            vec![0, 0, 1, 1],
            vec![0, 1, 0, 1],
            vec![1, 0, 0, 1],
            vec![1, 1, 1, 0],
        ])
        .unwrap();
        let p = Dmc::from_fn(2, 3, |xp, s| if s == 1 + xp { 1.0 } else { 0.0 }).unwrap();
        let witness = StateKernel::ignoring_observation(&p, 2);
        let u = Dmc::bsc(0.3).unwrap();
        let dec = DecoderConfig::distance(1.0);
        let clean = exact_error(&avc, &u, &cb, &dec, &AdversaryStrategy::Absent).unwrap();
        assert_eq!(clean.average, 0.0);
        let r = exact_error(&avc, &u, &cb, &dec, &AdversaryStrategy::Impersonation { witness }).unwrap();
        for e in r.per_message {
            assert!((e - 0.75).abs() < 1e-12);
        }
    }

    #[test]
    fn omniscient_forgery_matches_clean_acceptance() {
        // with q = 0 the xor forgery reproduces the clean law of x_j
        let avc = mbac_avc(0.2).unwrap();
        let cb = Codebook::new(vec![vec![0, 0, 0, 0, 0], vec![1, 1, 1, 0, 0], vec![0, 0, 1, 1, 1]]).unwrap();
        let dec = DecoderConfig::distance(2.0);
        let u = Dmc::identity(2);
        let table = DecoderTable::build(&cb, &dec, 2);
        let strategy = AdversaryStrategy::DecodeAndForge {
            grants: Grants::NONE,
            rule: ForgeRule::Xor,
        };
        let r = exact_error(&avc, &u, &cb, &dec, &strategy).unwrap();
        let bsc = Dmc::bsc(0.2).unwrap();
        for i in 0..3 {
            // average over j != i of P(neither i nor a rejection | clean x_j sent)
            let accept: f64 = (0..3)
                .filter(|&j| j != i)
                .map(|j| {
                    let laws: Vec<Vec<f64>> = cb.word(j).iter().map(|&t| bsc.row(t as usize).to_vec()).collect();
                    let m = table.masses(&laws);
                    1.0 - m[i] - m[3]
                })
                .sum::<f64>()
                / 2.0;
            assert!((r.per_message[i] - accept).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let cb = Codebook::new(vec![vec![0; 12], vec![1; 12]]).unwrap();
        let avc = mbac_avc(0.1).unwrap();
        let r = exact_error_with_budget(
            &avc,
            &Dmc::identity(2),
            &cb,
            &DecoderConfig::distance(3.0),
            &AdversaryStrategy::Absent,
            1e3,
        );
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn clean_errors_of_repetition_code() {
        let p: f64 = 0.25;
        let e = clean_word_errors(&Dmc::bsc(p).unwrap(), &rep3(), &DecoderConfig::distance(2.0)).unwrap();
        let expected = 3.0 * p * p - 2.0 * p * p * p;
        assert!((e[0] - expected).abs() < 1e-15 && (e[1] - expected).abs() < 1e-15);
    }
}
