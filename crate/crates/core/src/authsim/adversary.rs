use rand::Rng;

use crate::authsim::bits::PackedWord;
use crate::authsim::codebook::{encode, Codebook};
use crate::authsim::decoder::DecoderConfig;
use crate::error::{Error, Result};
use crate::overwrite::StateKernel;
use crate::prob::{joint_type, sample_channel, sample_index, Avc, Dmc, JointType};

/// Side information an attack may be handed on top of its observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Grants {
    /// The transmitted message.
    pub message: bool,
    /// `|x + z|`, the number of positions the observation channel flipped.
    pub distance: bool,
    /// The joint type of the base word, the channel input and the observation.
    pub joint_type: bool,
}

impl Grants {
    pub const NONE: Grants = Grants {
        message: false,
        distance: false,
        joint_type: false,
    };
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SideInfo {
    pub message: Option<usize>,
    pub distance: Option<usize>,
    pub joint_type: Option<JointType>,
}

impl SideInfo {
    /// What `grants` reveals about a transmission of message `i` as input `x`
    /// observed as `z`.
    pub fn reveal(grants: Grants, cb: &Codebook, i: usize, x: &[u8], z: &[u8]) -> SideInfo {
        SideInfo {
            message: grants.message.then_some(i),
            distance: grants.distance.then(|| x.iter().zip(z).filter(|(a, b)| a != b).count()),
            joint_type: if grants.joint_type {
                joint_type(&[cb.word(i), x, z]).ok()
            } else {
                None
            },
        }
    }
}

/// How a decode-and-forge adversary turns its estimate into a state sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum ForgeRule {
    /// Binary states xored onto the input: `s = t_hat + t_j`.
    Xor,
    /// On the positions where `t_hat` and `t_j` differ, play the state that
    /// matches the adversary's maximum-likelihood guess of the input symbol;
    /// leave the channel alone elsewhere.
    MatchOrErase { state_for_input: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdversaryStrategy {
    Absent,
    ConstantState(Vec<u8>),
    /// Pick `j` uniformly among all messages, encode it as `x'` and draw
    /// `s_k ~ P(. | x'_k, z_k)`.
    Impersonation {
        witness: StateKernel,
    },
    /// Pass `z` through `post`, decode the result with the receiver's own rule
    /// to a codeword `x_hat`, pick `j` uniformly and draw
    /// `s_k ~ P(. | x_{j,k}, x_hat_k)`. A failed decoding leaves the channel
    /// alone.
    DegradationImpersonation {
        post: Dmc,
        witness: StateKernel,
    },
    /// Decode `z` to the nearest base word, pick a different message `j`
    /// uniformly and forge it.
    DecodeAndForge {
        grants: Grants,
        rule: ForgeRule,
    },
}

impl AdversaryStrategy {
    pub fn grants(&self) -> Grants {
        match self {
            Self::DecodeAndForge { grants, .. } => *grants,
            _ => Grants::NONE,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Absent => "absent",
            Self::ConstantState(_) => "constant_state",
            Self::Impersonation { .. } => "impersonation",
            Self::DegradationImpersonation { .. } => "degradation_impersonation",
            Self::DecodeAndForge { .. } => "decode_and_forge",
        }
    }
}

/// Everything an attack may consult besides its own parameters.
#[derive(Debug, Clone, Copy)]
pub struct AttackContext<'a> {
    pub avc: &'a Avc,
    pub u: &'a Dmc,
    pub codebook: &'a Codebook,
    pub decoder: &'a DecoderConfig,
}

impl AttackContext<'_> {
    /// Checks that the strategy's kernels and state symbols fit the setup.
    pub fn validate(&self, strategy: &AdversaryStrategy) -> Result<()> {
        let (avc, u, cb) = (self.avc, self.u, self.codebook);
        if u.in_size() != avc.x_size() {
            return Err(Error::DimensionMismatch(format!(
                "observation channel takes {} inputs, channel has {}",
                u.in_size(),
                avc.x_size()
            )));
        }
        if cb.input_alphabet() != avc.x_size() {
            return Err(Error::DimensionMismatch(format!(
                "encoder emits {} symbols, channel takes {}",
                cb.input_alphabet(),
                avc.x_size()
            )));
        }
        let check_kernel = |w: &StateKernel, z_size: usize| {
            if w.x_size() != avc.x_size() || w.z_size() != z_size || w.s_size() != avc.s_size() {
                Err(Error::DimensionMismatch(format!(
                    "state kernel is {}x{}->{}, expected {}x{}->{}",
                    w.x_size(),
                    w.z_size(),
                    w.s_size(),
                    avc.x_size(),
                    z_size,
                    avc.s_size()
                )))
            } else {
                Ok(())
            }
        };
        match strategy {
            AdversaryStrategy::Absent => Ok(()),
            AdversaryStrategy::ConstantState(s) => {
                if s.len() != cb.n() {
                    return Err(Error::LengthMismatch {
                        expected: cb.n(),
                        found: s.len(),
                    });
                }
                match s.iter().find(|&&v| v as usize >= avc.s_size()) {
                    Some(&v) => Err(Error::SymbolOutOfRange {
                        symbol: v as usize,
                        size: avc.s_size(),
                    }),
                    None => Ok(()),
                }
            }
            AdversaryStrategy::Impersonation { witness } => check_kernel(witness, u.out_size()),
            AdversaryStrategy::DegradationImpersonation { post, witness } => {
                if post.in_size() != u.out_size() {
                    return Err(Error::DimensionMismatch(
                        "post-processing channel must read the observation".into(),
                    ));
                }
                check_kernel(witness, avc.x_size())
            }
            AdversaryStrategy::DecodeAndForge { rule, .. } => match rule {
                ForgeRule::Xor => {
                    if avc.s_size() != 2 || avc.s0() != 0 || cb.base_alphabet() != 2 {
                        Err(Error::Unsupported(
                            "xor forging needs binary base words and states {0 = s0, 1}".into(),
                        ))
                    } else {
                        Ok(())
                    }
                }
                ForgeRule::MatchOrErase { state_for_input } => {
                    if state_for_input.len() != avc.x_size() || state_for_input.iter().any(|&s| s >= avc.s_size()) {
                        Err(Error::DimensionMismatch(
                            "match-or-erase needs one valid state per input symbol".into(),
                        ))
                    } else {
                        Ok(())
                    }
                }
            },
        }
    }
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// The decode-and-forge adversary's estimate of the transmitted message.
pub(crate) fn adversary_estimate(cb: &Codebook, z: &[u8], side: &SideInfo, grants: Grants) -> Result<usize> {
    if grants.message {
        return side.message.ok_or(Error::MissingSideInfo("message"));
    }
    let packed_z = cb.packed().and_then(|_| PackedWord::from_bits(z));
    let dist = |m: usize| match (&packed_z, cb.packed()) {
        (Some(pz), Some(words)) => words[m].distance(pz),
        _ => hamming(cb.word(m), z),
    };
    if grants.distance {
        let d = side.distance.ok_or(Error::MissingSideInfo("distance"))?;
        if let Some(m) = (0..cb.len()).find(|&m| dist(m) == d) {
            return Ok(m);
        }
    }
    let mut best = (usize::MAX, 0);
    for m in 0..cb.len() {
        let d = dist(m);
        if d < best.0 {
            best = (d, m);
        }
    }
    Ok(best.1)
}

/// The state sequence forging message `j` from the estimate `m_hat`.
pub(crate) fn forge_state(rule: &ForgeRule, ctx: &AttackContext, z: &[u8], m_hat: usize, j: usize) -> Vec<u8> {
    let (t_hat, t_j) = (ctx.codebook.word(m_hat), ctx.codebook.word(j));
    let s0 = ctx.avc.s0() as u8;
    match rule {
        ForgeRule::Xor => t_hat.iter().zip(t_j).map(|(a, b)| a ^ b).collect(),
        ForgeRule::MatchOrErase { state_for_input } => {
            let v = ctx.codebook.encoder_channel();
            let u = ctx.u;
            (0..t_hat.len())
                .map(|k| {
                    if t_hat[k] == t_j[k] {
                        return s0;
                    }
                    let t = t_hat[k] as usize;
                    let zk = z[k] as usize;
                    let mut guess = t.min(v.out_size() - 1);
                    let mut best = v.get(t, guess) * u.get(guess, zk);
                    for x in 0..v.out_size() {
                        let like = v.get(t, x) * u.get(x, zk);
                        if like > best {
                            best = like;
                            guess = x;
                        }
                    }
                    state_for_input[guess] as u8
                })
                .collect()
        }
    }
}

/// Draws `j` uniformly from the messages other than `m_hat`.
fn other_message<R: Rng + ?Sized>(m: usize, m_hat: usize, rng: &mut R) -> usize {
    let j = rng.gen_range(0..m - 1);
    if j >= m_hat {
        j + 1
    } else {
        j
    }
}

fn draw_states<R: Rng + ?Sized>(witness: &StateKernel, x_prime: &[u8], obs: &[u8], rng: &mut R) -> Vec<u8> {
    x_prime
        .iter()
        .zip(obs)
        .map(|(&a, &b)| sample_index(witness.row(a as usize, b as usize), rng) as u8)
        .collect()
}

/// The state sequence chosen by `strategy` after observing `z`.
pub fn adversary_act<R: Rng + ?Sized>(
    strategy: &AdversaryStrategy,
    ctx: &AttackContext,
    z: &[u8],
    side: &SideInfo,
    rng: &mut R,
) -> Result<Vec<u8>> {
    let cb = ctx.codebook;
    if z.len() != cb.n() {
        return Err(Error::LengthMismatch {
            expected: cb.n(),
            found: z.len(),
        });
    }
    let passive = || vec![ctx.avc.s0() as u8; cb.n()];
    match strategy {
        AdversaryStrategy::Absent => Ok(passive()),
        AdversaryStrategy::ConstantState(s) => Ok(s.clone()),
        AdversaryStrategy::Impersonation { witness } => {
            let j = rng.gen_range(0..cb.len());
            let x_prime = encode(cb, j, rng)?;
            Ok(draw_states(witness, &x_prime, z, rng))
        }
        AdversaryStrategy::DegradationImpersonation { post, witness } => {
            let y_sim = sample_channel(post, z, rng)?;
            let Some(m_hat) = ctx.decoder.decode(cb, &y_sim) else {
                return Ok(passive());
            };
            let j = rng.gen_range(0..cb.len());
            let x_j = encode(cb, j, rng)?;
            Ok(draw_states(witness, &x_j, cb.word(m_hat), rng))
        }
        AdversaryStrategy::DecodeAndForge { grants, rule } => {
            if cb.len() < 2 {
                return Ok(passive());
            }
            let m_hat = adversary_estimate(cb, z, side, *grants)?;
            let j = other_message(cb.len(), m_hat, rng);
            Ok(forge_state(rule, ctx, z, m_hat, j))
        }
    }
}
