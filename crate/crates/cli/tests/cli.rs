use std::path::Path;
use std::process::{Command, Output};

use avcauth::overwrite::{degradation_order, DegradationOrder};
use avcauth::prob::stream_rng;
use avcauth::Dmc;
use avcauth_cli::{ChannelFile, DmcFile};
use rand::Rng;
use tempfile::TempDir;

fn avcauth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avcauth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn export(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut full = vec!["export"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let o = avcauth(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn exported_channel_reads_back() {
    let dir = TempDir::new().unwrap();
    let path = export(dir.path(), "m.json", &["--preset", "mbac", "--p", "0.25", "--q", "0.1"]);
    let file = ChannelFile::read(Path::new(&path)).unwrap();
    assert_eq!(file.alphabets.z, Some(2));
    let again = ChannelFile::from_json(&file.to_json()).unwrap();
    assert_eq!(again.to_json(), file.to_json());
    assert_eq!(file.avc().unwrap().w(1, 1, 0), 0.75);
}

#[test]
fn mbac_report() {
    let dir = TempDir::new().unwrap();
    let path = export(
        dir.path(),
        "mbac_p25_q10.json",
        &["--preset", "mbac", "--p", "0.25", "--q", "0.1"],
    );
    let o = avcauth(&["analyze", &path]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("I-overwritable: YES"), "{text}");
    assert!(text.contains("Overwritable: NO"), "{text}");
    let line = text.lines().find(|l| l.starts_with("U-overwritable:")).unwrap();
    assert!(line.starts_with("U-overwritable: NO (violation "), "{line}");
    let v: f64 = line
        .trim_start_matches("U-overwritable: NO (violation ")
        .trim_end_matches(')')
        .parse()
        .unwrap();
    // best flip error is 0.1 per input, halved by the (1 - 2p) smoothing
    assert!((v - 0.05).abs() < 1e-9, "{v}");
}

#[test]
fn analyze_json_matches_text() {
    let dir = TempDir::new().unwrap();
    let path = export(dir.path(), "m.json", &["--preset", "mbac", "--p", "0.25", "--q", "0.1"]);
    let o = avcauth(&["analyze", &path, "--json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let verdicts = doc["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 4);
    let u = verdicts.iter().find(|v| v["property"] == "u_overwritable").unwrap();
    assert_eq!(u["holds"], false);
    assert!(u["witness"].is_null());
    let i = verdicts.iter().find(|v| v["property"] == "i_overwritable").unwrap();
    assert_eq!(i["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn replacement_is_overwritable() {
    let dir = TempDir::new().unwrap();
    let path = export(dir.path(), "replacement.json", &["--preset", "replacement"]);
    let text = stdout(&avcauth(&["analyze", &path]));
    assert!(text.contains("Overwritable: YES (residual 0)"), "{text}");
    assert!(text.contains("P(s|x'=0) = [0 1 0]"), "{text}");
    assert!(text.contains("P(s|x'=1) = [0 0 1]"), "{text}");
    assert!(!text.contains("U-overwritable"));
}

#[test]
fn malformed_row_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"name":"bad","alphabets":{"x":2,"s":1,"y":2},"W":[[[0.5,0.6]],[[1,0]]],"s0":0}"#,
    )
    .unwrap();
    let o = avcauth(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("W[0][0]"), "{err}");
}

#[test]
fn missing_file_exits_2() {
    let o = avcauth(&["analyze", "/nonexistent/channel.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bsc_chain_order() {
    let dir = TempDir::new().unwrap();
    let a = export(dir.path(), "b1.json", &["--preset", "bsc", "--p", "0.1"]);
    let b = export(dir.path(), "b3.json", &["--preset", "bsc", "--p", "0.3"]);
    let text = stdout(&avcauth(&["degrade", &a, &b]));
    assert!(text.starts_with("BSC(0.3) ≤ BSC(0.1)"), "{text}");
    assert!(text.contains("P(.|0) = [0.75 0.25]"), "{text}");
}

#[test]
fn identity_dominates() {
    let dir = TempDir::new().unwrap();
    let id = export(dir.path(), "id.json", &["--preset", "identity"]);
    for (preset, p) in [("bsc", "0.2"), ("z", "0.4"), ("bec", "0.3")] {
        let other = export(dir.path(), &format!("{preset}.json"), &["--preset", preset, "--p", p]);
        let text = stdout(&avcauth(&["degrade", &id, &other]));
        let first = text.lines().next().unwrap();
        assert!(first.ends_with("≤ identity"), "{first}");
    }
}

#[test]
fn incomparable_pair() {
    let dir = TempDir::new().unwrap();
    let mut rng = stream_rng(11, 0);
    let random = |rng: &mut avcauth::prob::StreamRng| {
        let rows = (0..2)
            .map(|_| {
                let raw: Vec<f64> = (0..3).map(|_| rng.gen_range(0.01..1.0)).collect();
                let t: f64 = raw.iter().sum();
                raw.into_iter().map(|v| v / t).collect()
            })
            .collect();
        Dmc::new(rows).unwrap()
    };
    let (a, b) = loop {
        let (a, b) = (random(&mut rng), random(&mut rng));
        if degradation_order(&a, &b, 1e-7).unwrap() == DegradationOrder::Incomparable {
            break (a, b);
        }
    };
    let pa = dir.path().join("a.json");
    let pb = dir.path().join("b.json");
    std::fs::write(&pa, DmcFile::from_dmc("A", &a).to_json()).unwrap();
    std::fs::write(&pb, DmcFile::from_dmc("B", &b).to_json()).unwrap();
    let text = stdout(&avcauth(&["degrade", pa.to_str().unwrap(), pb.to_str().unwrap()]));
    assert!(text.starts_with("A and B are incomparable"), "{text}");
}

#[test]
fn zero_trials_rejected() {
    let o = avcauth(&["simulate", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn replacement_impersonation_is_three_quarters() {
    let dir = TempDir::new().unwrap();
    let path = export(dir.path(), "r.json", &["--preset", "replacement"]);
    let text = stdout(&avcauth(&["exact", &path, "--n", "8", "--M", "4"]));
    assert!(text.contains("    e(J)  0.750000000000"), "{text}");
    assert!(text.contains("e_max(J)  0.750000000000"), "{text}");
}

#[test]
fn simulate_to_stdout_is_csv() {
    let o = avcauth(&["simulate", "--n", "12", "--trials", "50", "--attack", "absent"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,rate,M,strategy,estimator,e_avg,e_max,ci_half,seed")
    );
    assert!(lines.next().unwrap().starts_with("12,0.3333333333333333,16,absent,mc,"));
}

#[test]
fn thm2_summary() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t2.csv");
    let o = avcauth(&["simulate", "--scenario", "thm2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("[holds]"), "{text}");
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains(",thm2_bound,"));
}

#[test]
fn exact_preset_runs() {
    let o = avcauth(&["exact", "--preset", "thm4", "--n", "8", "--M", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("attack=decode_and_forge"));
}

#[test]
fn noiseless_channel_has_no_clean_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("clear.json");
    std::fs::write(
        &path,
        r#"{"name":"clear","alphabets":{"x":2,"s":1,"y":2},"W":[[[1,0]],[[0,1]]],"s0":0}"#,
    )
    .unwrap();
    let o = avcauth(&[
        "exact",
        path.to_str().unwrap(),
        "--n",
        "6",
        "--M",
        "4",
        "--attack",
        "absent",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for line in text.lines().skip(2) {
        assert!(line.trim_end().ends_with("0.00000000000"), "{line}");
    }
}

#[test]
fn mbac_exact_table_is_pinned() {
    let o = avcauth(&["exact", "--preset", "thm4", "--n", "8", "--M", "4"]);
    let expected = "\
thm4: n=8 M=4 attack=decode_and_forge seed=1
 message  e(i,J)
       1  0.943019549180
       2  0.820660031602
       3  0.778748950884
       4  0.747174755284
    e(J)  0.822400821737
e_max(J)  0.943019549180
";
    assert_eq!(stdout(&o), expected);
}
