use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use avcauth::authsim::{
    exact_error, random_constant_composition_codebook, AdversaryStrategy, Codebook, DecoderConfig, ForgeRule, Grants,
};
use avcauth::channels::{erasure_state_avc, flip_erasure_avc, mbac_avc, replacement_avc};
use avcauth::mbac::{
    attack_strategy, build_instance, input_witness, run_experiment, AttackKind, EncoderKind, ExperimentConfig,
    Instance, Scenario,
};
use avcauth::overwrite::{
    degradation_order, is_degraded, is_i_overwritable, is_overwritable, is_symmetrizable, is_u_overwritable,
    DegradationOrder, OverwriteVerdict, StateKernel, Witness,
};
use avcauth::prob::stream_rng;
use avcauth::{Avc, Dist, Dmc};

use crate::args::{AnalyzeArgs, ChannelPreset, DegradeArgs, EncoderArg, ExactArgs, ExportArgs, GrantArg, SimulateArgs};
use crate::error::CliError;
use crate::files::{ChannelFile, DmcFile};

type Out<'a> = &'a mut dyn Write;

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Formats `v` with `digits` significant digits in positional notation.
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.prec$}", prec = digits.saturating_sub(1));
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Serialize)]
struct VerdictJson {
    property: &'static str,
    holds: bool,
    /// Largest equality violation of the best kernel found.
    residual: f64,
    borderline: bool,
    witness: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize)]
struct AnalysisJson {
    name: String,
    tol: f64,
    verdicts: Vec<VerdictJson>,
}

fn verdict_json(label: &'static str, v: &OverwriteVerdict) -> VerdictJson {
    VerdictJson {
        property: label,
        holds: v.holds(),
        residual: v.result.max_residual,
        borderline: v.result.borderline,
        witness: v.witness().map(|w| w.as_dmc().to_rows()),
    }
}

fn witness_rows(w: &Witness) -> Vec<(String, Vec<f64>)> {
    match w {
        Witness::StateGivenInput(d) => (0..d.in_size())
            .map(|x| (format!("P(s|x'={x})"), d.row(x).to_vec()))
            .collect(),
        Witness::StateGivenObservation(k) => (0..k.x_size())
            .flat_map(|x| (0..k.z_size()).map(move |z| (x, z)))
            .map(|(x, z)| (format!("P(s|x'={x},z={z})"), k.row(x, z).to_vec()))
            .collect(),
        Witness::Degradation(d) => (0..d.in_size())
            .map(|z| (format!("P(.|{z})"), d.row(z).to_vec()))
            .collect(),
    }
}

fn join(row: &[f64]) -> String {
    row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn analyze(args: &AnalyzeArgs, out: Out) -> Result<(), CliError> {
    let file = ChannelFile::read(&args.path)?;
    let avc = file.avc()?;
    let mut verdicts = vec![
        ("overwritable", "Overwritable", is_overwritable(&avc, args.tol)?),
        ("symmetrizable", "Symmetrizable", is_symmetrizable(&avc, args.tol)?),
        ("i_overwritable", "I-overwritable", is_i_overwritable(&avc, args.tol)?),
    ];
    if let Some(u) = file.observation()? {
        verdicts.push((
            "u_overwritable",
            "U-overwritable",
            is_u_overwritable(&avc, &u, args.tol)?,
        ));
    }
    if args.json {
        let doc = AnalysisJson {
            name: file.name.clone(),
            tol: args.tol,
            verdicts: verdicts.iter().map(|(key, _, v)| verdict_json(key, v)).collect(),
        };
        let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out, "{text}").map_err(io)?;
        return Ok(());
    }
    let a = file.alphabets;
    writeln!(
        out,
        "channel {}: |X|={} |S|={} |Y|={}{} s0={}",
        file.name,
        a.x,
        a.s,
        a.y,
        a.z.map_or(String::new(), |z| format!(" |Z|={z}")),
        file.s0
    )
    .map_err(io)?;
    for (_, label, v) in &verdicts {
        let r = v.result.max_residual;
        let flag = if v.result.borderline { ", borderline" } else { "" };
        if v.holds() {
            writeln!(out, "{label}: YES (residual {r}{flag})").map_err(io)?;
            for (name, row) in witness_rows(&v.best) {
                writeln!(out, "    {name} = [{}]", join(&row)).map_err(io)?;
            }
        } else {
            writeln!(out, "{label}: NO (violation {r}{flag})").map_err(io)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- degrade

pub fn degrade(args: &DegradeArgs, out: Out) -> Result<(), CliError> {
    let f1 = DmcFile::read(&args.u1)?;
    let f2 = DmcFile::read(&args.u2)?;
    let (u1, u2) = (f1.dmc()?, f2.dmc()?);
    if u1.in_size() != u2.in_size() {
        return Err(avcauth::Error::DimensionMismatch(format!(
            "{} takes {} inputs, {} takes {}",
            f1.name,
            u1.in_size(),
            f2.name,
            u2.in_size()
        ))
        .into());
    }
    let order = degradation_order(&u1, &u2, args.tol)?;
    let (a, b) = (&f1.name, &f2.name);
    let line = match order {
        DegradationOrder::Equivalent => format!("{a} and {b} are equivalent"),
        DegradationOrder::Less => format!("{a} ≤ {b}"),
        DegradationOrder::Greater => format!("{b} ≤ {a}"),
        DegradationOrder::Incomparable => format!("{a} and {b} are incomparable"),
    };
    writeln!(out, "{line}").map_err(io)?;
    for (cand, cname, reference, rname) in [(&u1, a, &u2, b), (&u2, b, &u1, a)] {
        let v = is_degraded(cand, reference, args.tol)?;
        if v.holds() {
            writeln!(out, "  {cname} = {rname} followed by:").map_err(io)?;
            for (name, row) in witness_rows(&v.best) {
                writeln!(out, "    {name} = [{}]", join(&row)).map_err(io)?;
            }
        } else {
            writeln!(
                out,
                "  {cname} is not {rname} followed by a channel (violation {})",
                v.result.max_residual
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- simulate

fn grants_from(list: &[GrantArg]) -> Grants {
    let mut g = Grants::NONE;
    for a in list {
        match a {
            GrantArg::None => {}
            GrantArg::Message => g.message = true,
            GrantArg::Distance => g.distance = true,
            GrantArg::Type => g.joint_type = true,
        }
    }
    g
}

/// The experiment described by the flags, starting from the scenario's preset.
pub fn simulate_config(args: &SimulateArgs) -> Result<ExperimentConfig, CliError> {
    let scenario: Scenario = args.scenario.into();
    let mut cfg = ExperimentConfig::preset(scenario);
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(g) = args.gamma {
        cfg.gamma = g;
    }
    if !args.n.is_empty() {
        cfg.ns = args.n.clone();
    }
    match (args.messages, args.rate) {
        (Some(m), _) => cfg.messages = Some(m),
        (None, Some(r)) => {
            cfg.messages = None;
            cfg.rate = Some(r);
        }
        (None, None) => {}
    }
    if let Some(e) = args.encoder {
        cfg.encoder = e.into();
    }
    if !args.attack.is_empty() {
        cfg.attacks = args.attack.iter().map(|&a| a.into()).collect();
    }
    if !args.grant.is_empty() {
        cfg.grants = grants_from(&args.grant);
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.exact {
        cfg.exact = true;
    }
    if args.delta.is_some() {
        cfg.delta = args.delta;
    }
    if let Some(e) = args.eps {
        cfg.eps = e;
    }
    if !cfg.exact && cfg.trials == 0 {
        return Err(CliError::InvalidParams("--trials must be at least 1".into()));
    }
    if scenario == Scenario::Thm5 && args.encoder == Some(EncoderArg::Det) && cfg.gamma > 0.0 {
        eprintln!(
            "warning: thm5 with --encoder det ignores --gamma {} and runs the deterministic code",
            cfg.gamma
        );
        cfg.gamma = 0.0;
    }
    if cfg.encoder == EncoderKind::Deterministic {
        cfg.gamma = 0.0;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn simulate(args: &SimulateArgs, out: Out) -> Result<(), CliError> {
    let cfg = simulate_config(args)?;
    let record = run_experiment(&cfg)?;
    let csv = record.to_csv();
    let Some(path) = &args.out else {
        out.write_all(csv.as_bytes()).map_err(io)?;
        return Ok(());
    };
    fs::write(path, csv.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    writeln!(
        out,
        "{:>5} {:>8} {:>6} {:<26} {:<5} {:>10} {:>10} {:>10}",
        "n", "rate", "M", "strategy", "est", "e_avg", "e_max", "ci_half"
    )
    .map_err(io)?;
    for r in &record.rows {
        writeln!(
            out,
            "{:>5} {:>8.4} {:>6} {:<26} {:<5} {:>10.6} {:>10.6} {:>10.6}",
            r.n, r.rate, r.messages, r.strategy, r.estimator, r.e_avg, r.e_max, r.ci_half
        )
        .map_err(io)?;
    }
    if cfg.scenario == Scenario::Thm2 {
        for &n in &cfg.ns {
            let attack = record.row(n, AttackKind::DegradationImpersonation.name());
            if let (Some(a), Some(b)) = (attack, record.row(n, "thm2_bound")) {
                let verdict = if a.e_avg >= b.e_avg - 1e-12 {
                    "holds"
                } else {
                    "VIOLATED"
                };
                writeln!(
                    out,
                    "n={n}: e(J~) = {}  vs  (1 - e(J_s0))^2 - 1/M = {}  [{verdict}]",
                    significant(a.e_avg, 12),
                    significant(b.e_avg, 12)
                )
                .map_err(io)?;
            }
        }
    }
    writeln!(out, "wrote {} rows to {}", record.rows.len(), path.display()).map_err(io)?;
    Ok(())
}

// ---------------------------------------------------------------- exact

/// Largest probability that the no-adversary channel changes an input
/// symbol, treating outputs beyond the input alphabet as changes.
fn clean_crossover(avc: &Avc) -> f64 {
    (0..avc.x_size())
        .map(|x| 1.0 - if x < avc.y_size() { avc.w(x, avc.s0(), x) } else { 0.0 })
        .fold(0.0, f64::max)
}

const DISTINCT_ATTEMPTS: usize = 64;

fn file_instance(file: &ChannelFile, args: &ExactArgs) -> Result<Instance, CliError> {
    let avc = file.avc()?;
    // without an observation channel the adversary is blind
    let u = file.observation()?.unwrap_or_else(|| Dmc::uniform(avc.x_size(), 1));
    let nx = avc.x_size();
    if nx > 256 {
        return Err(CliError::InvalidParams(
            "input alphabets above 256 symbols are not supported".into(),
        ));
    }
    let mut rng = stream_rng(args.seed, 0);
    let mut draw = || -> Result<Codebook, CliError> {
        if args.n.is_multiple_of(nx) {
            Ok(random_constant_composition_codebook(
                args.n,
                args.messages,
                &Dist::uniform(nx),
                &mut rng,
            )?)
        } else {
            use rand::Rng;
            let words = (0..args.messages)
                .map(|_| (0..args.n).map(|_| rng.gen_range(0..nx) as u8).collect())
                .collect();
            Ok(Codebook::new(words)?)
        }
    };
    // repeated codewords can never be told apart, so redraw a few times
    let mut cb = draw()?;
    for _ in 0..DISTINCT_ATTEMPTS {
        if cb.duplicate_count() == 0 {
            break;
        }
        cb = draw()?;
    }
    let radius = args.radius.unwrap_or_else(|| {
        let c = clean_crossover(&avc);
        let delta = args.delta.unwrap_or(((0.5 - c) / 3.0).max(0.0));
        args.n as f64 * (c + delta)
    });
    Ok(Instance {
        avc,
        u,
        cb,
        decoder: DecoderConfig::distance(radius),
    })
}

fn file_strategy(kind: AttackKind, inst: &Instance, grants: Grants) -> Result<AdversaryStrategy, CliError> {
    Ok(match kind {
        AttackKind::Absent => AdversaryStrategy::Absent,
        AttackKind::Impersonation => {
            let tol = 1e-9;
            let v = is_u_overwritable(&inst.avc, &inst.u, tol)?;
            if let Some(k) = v.witness().and_then(|w| w.as_state_kernel()) {
                AdversaryStrategy::Impersonation { witness: k.clone() }
            } else {
                let v = is_overwritable(&inst.avc, tol)?;
                match v.witness() {
                    Some(w) => AdversaryStrategy::Impersonation {
                        witness: StateKernel::ignoring_observation(w.as_dmc(), inst.u.out_size()),
                    },
                    None => return Err(CliError::InvalidParams(
                        "the channel is neither U-overwritable nor overwritable, so there is no impersonation kernel"
                            .into(),
                    )),
                }
            }
        }
        AttackKind::DegradationImpersonation => {
            let v = is_degraded(&inst.avc.clean_channel(), &inst.u, 1e-9)?;
            let post = v
                .witness()
                .map(|w| w.as_dmc().clone())
                .ok_or_else(|| CliError::InvalidParams("the receiver's channel is not degraded w.r.t. U".into()))?;
            AdversaryStrategy::DegradationImpersonation {
                post,
                witness: input_witness(&inst.avc)?,
            }
        }
        AttackKind::DecodeAndForge => AdversaryStrategy::DecodeAndForge {
            grants,
            rule: ForgeRule::Xor,
        },
        AttackKind::MatchOrErase => {
            return Err(CliError::InvalidParams(
                "match_or_erase is only available with --preset example1".into(),
            ))
        }
    })
}

pub fn exact(args: &ExactArgs, out: Out) -> Result<(), CliError> {
    let (label, inst, strategy, kind) = match (&args.path, args.preset) {
        (Some(path), None) => {
            let file = ChannelFile::read(path)?;
            let inst = file_instance(&file, args)?;
            let kind = args.attack.map_or(AttackKind::Impersonation, Into::into);
            let strategy = file_strategy(kind, &inst, grants_from(&args.grant))?;
            (file.name.clone(), inst, strategy, kind)
        }
        (None, Some(preset)) => {
            let scenario: Scenario = preset.into();
            let mut cfg = ExperimentConfig::preset(scenario);
            cfg.ns = vec![args.n];
            cfg.messages = Some(args.messages);
            cfg.seed = args.seed;
            cfg.exact = true;
            if let Some(p) = args.p {
                cfg.p = p;
            }
            if let Some(q) = args.q {
                cfg.q = q;
            }
            if args.delta.is_some() {
                cfg.delta = args.delta;
            }
            if !args.grant.is_empty() {
                cfg.grants = grants_from(&args.grant);
            }
            cfg.validate()?;
            let kind = args.attack.map(Into::into).unwrap_or_else(|| {
                cfg.attacks
                    .iter()
                    .copied()
                    .find(|&a| a != AttackKind::Absent)
                    .unwrap_or(AttackKind::Absent)
            });
            let inst = build_instance(&cfg, args.n)?;
            let strategy = attack_strategy(kind, &cfg, &inst)?;
            (scenario.name().to_string(), inst, strategy, kind)
        }
        _ => return Err(CliError::InvalidParams("give either a channel file or --preset".into())),
    };
    let report = exact_error(&inst.avc, &inst.u, &inst.cb, &inst.decoder, &strategy)?;
    writeln!(
        out,
        "{label}: n={} M={} attack={} seed={}",
        inst.cb.n(),
        inst.cb.len(),
        kind.name(),
        args.seed
    )
    .map_err(io)?;
    writeln!(out, "{:>8}  e(i,J)", "message").map_err(io)?;
    for (i, e) in report.per_message.iter().enumerate() {
        writeln!(out, "{:>8}  {}", i + 1, significant(*e, 12)).map_err(io)?;
    }
    writeln!(out, "{:>8}  {}", "e(J)", significant(report.average, 12)).map_err(io)?;
    writeln!(out, "{:>8}  {}", "e_max(J)", significant(report.maximum, 12)).map_err(io)?;
    Ok(())
}

// ---------------------------------------------------------------- export

pub fn export(args: &ExportArgs, out: Out) -> Result<(), CliError> {
    let p = args.p;
    let observation = args.q.map(Dmc::bsc).transpose()?;
    let named = |default: String| args.name.clone().unwrap_or(default);
    let text = match args.preset {
        ChannelPreset::Mbac | ChannelPreset::FlipErasure | ChannelPreset::ErasureState | ChannelPreset::Replacement => {
            let (avc, base) = match args.preset {
                ChannelPreset::Mbac => (mbac_avc(p)?, format!("mbac_p{p}")),
                ChannelPreset::FlipErasure => (flip_erasure_avc(p)?, format!("flip_erasure_p{p}")),
                ChannelPreset::ErasureState => (erasure_state_avc(p)?, format!("erasure_state_p{p}")),
                _ => (replacement_avc(), "replacement".to_string()),
            };
            let base = match args.q {
                Some(q) => format!("{base}_q{q}"),
                None => base,
            };
            ChannelFile::from_channel(named(base), &avc, observation.as_ref()).to_json()
        }
        ChannelPreset::Bsc => DmcFile::from_dmc(named(format!("BSC({p})")), &Dmc::bsc(p)?).to_json(),
        ChannelPreset::Z => DmcFile::from_dmc(named(format!("Z({p})")), &Dmc::z_channel(p)?).to_json(),
        ChannelPreset::Bec => DmcFile::from_dmc(named(format!("BEC({p})")), &Dmc::bec(p)?).to_json(),
        ChannelPreset::Identity => DmcFile::from_dmc(named("identity".into()), &Dmc::identity(2)).to_json(),
    };
    match &args.out {
        Some(path) => write_file(path, &text),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
