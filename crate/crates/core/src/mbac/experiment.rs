use std::fmt::Write as _;

use rayon::prelude::*;

use crate::authsim::{
    exact_error, monte_carlo_error, random_constant_composition_codebook, AdversaryStrategy, Codebook, DecoderConfig,
    ErrorReport, ForgeRule, Grants,
};
use crate::channels::{flip_erasure_avc, mbac_avc, ERASURE};
use crate::error::{Error, Result};
use crate::mbac::scheme::{build_thm5_scheme_with, messages_for_rate, MbacParams, DEFAULT_TYPICALITY_EPS};
use crate::overwrite::{is_degraded, is_i_overwritable, StateKernel};
use crate::prob::{mix64, stream_rng, Avc, Dist, Dmc};

pub const CSV_HEADER: &str = "n,rate,M,strategy,estimator,e_avg,e_max,ci_half,seed";

const LP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Deterministic code against a decode-and-forge adversary with a worse
    /// observation channel than the receiver's.
    Thm4,
    /// Z-randomized constant-composition code with a typicality decoder.
    Thm5,
    /// Deterministic code attacked through a degraded copy of the receiver.
    Thm2,
    /// Flip-or-erase channel, BSC-randomized encoder, match-or-erase forgery.
    Example1,
    Custom,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::Thm4 => "thm4",
            Self::Thm5 => "thm5",
            Self::Thm2 => "thm2",
            Self::Example1 => "example1",
            Self::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "thm4" => Self::Thm4,
            "thm5" => Self::Thm5,
            "thm2" => Self::Thm2,
            "example1" => Self::Example1,
            "custom" => Self::Custom,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoderKind {
    Deterministic,
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackKind {
    Absent,
    /// Plays the input-overwriting kernel on the observation as if it were
    /// the input.
    Impersonation,
    DegradationImpersonation,
    DecodeAndForge,
    MatchOrErase,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Absent => "absent",
            Self::Impersonation => "impersonation",
            Self::DegradationImpersonation => "degradation_impersonation",
            Self::DecodeAndForge => "decode_and_forge",
            Self::MatchOrErase => "match_or_erase",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "absent" | "none" => Self::Absent,
            "impersonation" => Self::Impersonation,
            "degradation_impersonation" => Self::DegradationImpersonation,
            "decode_and_forge" => Self::DecodeAndForge,
            "match_or_erase" => Self::MatchOrErase,
            _ => return None,
        })
    }
}

/// A sweep over blocklengths for one scenario. Every `(n, attack)` pair is
/// an independent job; the codebook at each `n` is shared by all attacks.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub ns: Vec<usize>,
    /// Message count; derived from `rate` when absent.
    pub messages: Option<usize>,
    pub rate: Option<f64>,
    pub encoder: EncoderKind,
    pub attacks: Vec<AttackKind>,
    pub grants: Grants,
    /// Trials per message (Monte Carlo only).
    pub trials: usize,
    pub seed: u64,
    pub exact: bool,
    /// Decoder slack over the crossover; `(1/2 - p) / 3` when absent.
    pub delta: Option<f64>,
    /// Typicality slack.
    pub eps: f64,
}

impl ExperimentConfig {
    pub fn preset(scenario: Scenario) -> Self {
        let base = Self {
            scenario,
            p: 0.05,
            q: 0.25,
            gamma: 0.0,
            ns: vec![16, 24, 32],
            messages: Some(16),
            rate: None,
            encoder: EncoderKind::Deterministic,
            attacks: vec![AttackKind::Absent, AttackKind::DecodeAndForge],
            grants: Grants {
                distance: true,
                ..Grants::NONE
            },
            trials: 10_000,
            seed: 1,
            exact: false,
            delta: None,
            eps: DEFAULT_TYPICALITY_EPS,
        };
        match scenario {
            Scenario::Thm4 | Scenario::Custom => base,
            Scenario::Thm5 => Self {
                p: 0.25,
                q: 0.1,
                gamma: 0.1,
                ns: vec![32],
                encoder: EncoderKind::Stochastic,
                grants: Grants {
                    message: true,
                    ..Grants::NONE
                },
                ..base
            },
            Scenario::Thm2 => Self {
                p: 0.25,
                q: 0.1,
                ns: vec![8],
                messages: Some(4),
                attacks: vec![AttackKind::Absent, AttackKind::DegradationImpersonation],
                grants: Grants::NONE,
                exact: true,
                ..base
            },
            Scenario::Example1 => Self {
                p: 0.05,
                q: 0.1,
                gamma: 0.1,
                ns: vec![16, 24, 32],
                encoder: EncoderKind::Stochastic,
                attacks: vec![AttackKind::Absent, AttackKind::MatchOrErase],
                grants: Grants {
                    message: true,
                    ..Grants::NONE
                },
                ..base
            },
        }
    }

    /// Crossover from base word to receiver output; sets the decoder radius.
    fn effective_crossover(&self) -> f64 {
        match (self.scenario, self.encoder) {
            (Scenario::Example1, EncoderKind::Stochastic) => self.gamma + self.p - 2.0 * self.gamma * self.p,
            _ => self.p,
        }
    }

    fn delta(&self) -> f64 {
        self.delta.unwrap_or((0.5 - self.effective_crossover()) / 3.0)
    }

    fn messages_at(&self, n: usize) -> Result<usize> {
        match (self.messages, self.rate) {
            (Some(m), _) => Ok(m),
            (None, Some(r)) => Ok(messages_for_rate(n, r)),
            (None, None) => Err(Error::InvalidParams("either M or a rate is required".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(Error::InvalidParams("no blocklengths given".into()));
        }
        if self.attacks.is_empty() {
            return Err(Error::InvalidParams("no attacks given".into()));
        }
        if !self.exact && self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if !(0.0..=0.5).contains(&self.p) || !(0.0..=0.5).contains(&self.q) {
            return Err(Error::InvalidParams("p and q must lie in [0, 1/2]".into()));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::InvalidParams("gamma must lie in [0, 1)".into()));
        }
        if let Some(m) = self.messages {
            if m < 2 {
                return Err(Error::InvalidParams("at least two messages are needed".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub rate: f64,
    pub messages: usize,
    pub strategy: String,
    pub estimator: String,
    pub e_avg: f64,
    pub e_max: f64,
    pub ci_half: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub scenario: Scenario,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentRecord {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.n, r.rate, r.messages, r.strategy, r.estimator, r.e_avg, r.e_max, r.ci_half, r.seed
            );
        }
        out
    }

    /// First row at blocklength `n` for `strategy`.
    pub fn row(&self, n: usize, strategy: &str) -> Option<&ExperimentRow> {
        self.rows.iter().find(|r| r.n == n && r.strategy == strategy)
    }
}

/// Channel, observation channel, code and receiver of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub avc: Avc,
    pub u: Dmc,
    pub cb: Codebook,
    pub decoder: DecoderConfig,
}

fn codebook_seed(seed: u64, n: usize) -> u64 {
    mix64(seed ^ mix64(n as u64 ^ 0xC0DE_B00C))
}

/// The grid point at blocklength `n`; the codebook is drawn from a stream
/// derived from `(cfg.seed, n)` only.
pub fn build_instance(cfg: &ExperimentConfig, n: usize) -> Result<Instance> {
    let messages = cfg.messages_at(n)?;
    let mut rng = stream_rng(codebook_seed(cfg.seed, n), u64::MAX);
    let u = Dmc::bsc(cfg.q)?;
    let radius = n as f64 * (cfg.effective_crossover() + cfg.delta());
    let half = Dist::bernoulli(0.5)?;
    match cfg.scenario {
        Scenario::Thm5 => {
            let gamma = match cfg.encoder {
                EncoderKind::Stochastic => cfg.gamma,
                EncoderKind::Deterministic => 0.0,
            };
            let rate = (messages as f64).log2() / n as f64;
            let params = MbacParams::new(cfg.p, cfg.q, gamma, n, rate)?;
            let (cb, decoder) = build_thm5_scheme_with(&params, messages, cfg.eps, &mut rng)?;
            Ok(Instance {
                avc: mbac_avc(cfg.p)?,
                u,
                cb,
                decoder,
            })
        }
        Scenario::Example1 => {
            let mut cb = random_constant_composition_codebook(n, messages, &half, &mut rng)?;
            if cfg.encoder == EncoderKind::Stochastic && cfg.gamma > 0.0 {
                cb = cb.with_randomizer(Dmc::bsc(cfg.gamma)?)?;
            }
            Ok(Instance {
                avc: flip_erasure_avc(cfg.p)?,
                u,
                cb,
                decoder: DecoderConfig::Distance {
                    radius,
                    erasure: Some(ERASURE),
                },
            })
        }
        Scenario::Thm4 | Scenario::Thm2 | Scenario::Custom => {
            let mut cb = random_constant_composition_codebook(n, messages, &half, &mut rng)?;
            if cfg.encoder == EncoderKind::Stochastic && cfg.gamma > 0.0 {
                cb = cb.with_randomizer(Dmc::z_channel(cfg.gamma)?)?;
            }
            Ok(Instance {
                avc: mbac_avc(cfg.p)?,
                u,
                cb,
                decoder: DecoderConfig::distance(radius),
            })
        }
    }
}

pub fn input_witness(avc: &Avc) -> Result<StateKernel> {
    let v = is_i_overwritable(avc, LP_TOL)?;
    match v.witness().and_then(|w| w.as_state_kernel()) {
        Some(k) => Ok(k.clone()),
        None => Err(Error::InvalidParams(
            "the channel is not input-overwritable, so there is no impersonation kernel".into(),
        )),
    }
}

pub fn attack_strategy(kind: AttackKind, cfg: &ExperimentConfig, inst: &Instance) -> Result<AdversaryStrategy> {
    Ok(match kind {
        AttackKind::Absent => AdversaryStrategy::Absent,
        AttackKind::Impersonation => {
            if inst.u.out_size() != inst.avc.x_size() {
                return Err(Error::Unsupported(
                    "impersonation reads the observation as an input symbol".into(),
                ));
            }
            AdversaryStrategy::Impersonation {
                witness: input_witness(&inst.avc)?,
            }
        }
        AttackKind::DegradationImpersonation => {
            let clean = inst.avc.clean_channel();
            let verdict = is_degraded(&clean, &inst.u, LP_TOL)?;
            let post = match verdict.witness() {
                Some(w) if verdict.holds() => w.as_dmc().clone(),
                _ => {
                    return Err(Error::InvalidParams(
                        "the receiver's channel is not a degraded version of the observation channel".into(),
                    ))
                }
            };
            AdversaryStrategy::DegradationImpersonation {
                post,
                witness: input_witness(&inst.avc)?,
            }
        }
        AttackKind::DecodeAndForge => AdversaryStrategy::DecodeAndForge {
            grants: cfg.grants,
            rule: ForgeRule::Xor,
        },
        AttackKind::MatchOrErase => {
            if inst.avc.s_size() != 3 {
                return Err(Error::Unsupported(
                    "match-or-erase needs the flip-or-erase channel".into(),
                ));
            }
            AdversaryStrategy::DecodeAndForge {
                grants: cfg.grants,
                rule: ForgeRule::MatchOrErase {
                    state_for_input: vec![1, 2],
                },
            }
        }
    })
}

fn row_from(report: &ErrorReport, n: usize, messages: usize, strategy: &str, seed: u64) -> ExperimentRow {
    ExperimentRow {
        n,
        rate: (messages as f64).log2() / n as f64,
        messages,
        strategy: strategy.to_string(),
        estimator: report.estimator.name().to_string(),
        e_avg: report.average,
        e_max: report.maximum,
        ci_half: report.pooled_ci_half_width.unwrap_or(0.0),
        seed,
    }
}

/// Runs every `(n, attack)` job of the sweep. Rows come out ordered by `n`,
/// then by the order of `cfg.attacks`; the Thm2 scenario appends the bound
/// `(1 - e_clean)^2 - 1/M` after each blocklength.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let setups: Vec<Instance> = cfg
        .ns
        .par_iter()
        .map(|&n| build_instance(cfg, n))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, AttackKind)> = (0..setups.len())
        .flat_map(|k| cfg.attacks.iter().map(move |&a| (k, a)))
        .collect();
    let reports: Vec<ErrorReport> = jobs
        .par_iter()
        .map(|&(k, kind)| {
            let s = &setups[k];
            let strategy = attack_strategy(kind, cfg, s)?;
            if cfg.exact {
                exact_error(&s.avc, &s.u, &s.cb, &s.decoder, &strategy)
            } else {
                monte_carlo_error(&s.avc, &s.u, &s.cb, &s.decoder, &strategy, cfg.trials, cfg.seed)
            }
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(jobs.len() + setups.len());
    for (k, &n) in cfg.ns.iter().enumerate() {
        let m = setups[k].cb.len();
        for (job, report) in jobs.iter().zip(&reports).filter(|((j, _), _)| *j == k) {
            rows.push(row_from(report, n, m, job.1.name(), cfg.seed));
        }
        if cfg.scenario == Scenario::Thm2 {
            let clean = jobs
                .iter()
                .zip(&reports)
                .find(|((j, a), _)| *j == k && *a == AttackKind::Absent)
                .map(|(_, r)| r);
            if let Some(r) = clean {
                let bound = (1.0 - r.average).powi(2) - 1.0 / m as f64;
                rows.push(ExperimentRow {
                    strategy: "thm2_bound".into(),
                    e_avg: bound,
                    e_max: bound,
                    ci_half: 0.0,
                    ..row_from(r, n, m, "", cfg.seed)
                });
            }
        }
    }
    Ok(ExperimentRecord {
        scenario: cfg.scenario,
        rows,
    })
}
