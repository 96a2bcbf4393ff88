use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interval-explore"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("inst.json");
    let out = bin(&[
        "gen",
        "--n",
        "12",
        "--m",
        "30",
        "--T",
        "10",
        "--horizon",
        "80",
        "--churn",
        "0.6",
        "--hard",
        "--out",
        s(&file),
    ]);
    assert_eq!(code(&out), 0);
    let ok = bin(&["verify", s(&file)]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok).trim(), "ok");
}

#[test]
fn verify_reports_the_first_violation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c4.json");
    // Edge 0 absent at even steps, edge 2 at odd steps.
    let absences: Vec<String> = (0..6)
        .map(|t| {
            format!(
                "{{\"edge\":{},\"from\":{t},\"to\":{t}}}",
                if t % 2 == 0 { 0 } else { 2 }
            )
        })
        .collect();
    let json = format!(
        "{{\"n\":4,\"edges\":[{{\"u\":0,\"v\":1,\"pu\":1,\"pv\":1}},{{\"u\":1,\"v\":2,\"pu\":2,\"pv\":1}},{{\"u\":2,\"v\":3,\"pu\":2,\"pv\":1}},{{\"u\":3,\"v\":0,\"pu\":2,\"pv\":2}}],\"absent\":[{}],\"horizon\":6}}",
        absences.join(",")
    );
    std::fs::write(&file, json).unwrap();
    assert_eq!(code(&bin(&["verify", s(&file), "--T", "1"])), 0);
    let out = bin(&["verify", s(&file), "--T", "2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("[0..1]"));
}

#[test]
fn truncated_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\"n\":4,\"edges\":[{\"u\":0").unwrap();
    assert_eq!(code(&bin(&["verify", s(&file), "--T", "2"])), 2);
    assert_eq!(
        code(&bin(&[
            "verify",
            s(&dir.path().join("missing.json")),
            "--T",
            "2"
        ])),
        2
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        code(&bin(&[
            "explore", "--n", "10", "--m", "20", "--algo", "ge1", "--model", "kt0"
        ])),
        2
    );
    assert_eq!(
        code(&bin(&[
            "adversary",
            "--attack",
            "kt0-time",
            "--n",
            "30",
            "--m",
            "100",
            "--algo",
            "ge0",
            "--model",
            "kt1"
        ])),
        2
    );
    assert_eq!(code(&bin(&["explore", "--n", "10"])), 2);
    assert_eq!(code(&bin(&["frobnicate"])), 2);
}

#[test]
fn explore_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&[
        "explore",
        "--n",
        "10",
        "--m",
        "25",
        "--reps",
        "4",
        "--jobs",
        "2",
        "--algo",
        "ge0",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "run,n,m,c,algo,model,steps,terminated,visited,sum_iota_v,sum_iota_e,redundant_moves,tau,bound_ratio"
    );
    assert_eq!(csv.lines().count(), 5);
    assert!(dir.path().join("traces/run_3.jsonl").exists());
    assert_eq!(code(&bin(&["replay", "--out", s(dir.path())])), 0);

    let row = dir.path().join("summary.csv");
    std::fs::write(&row, csv.replacen(",true,10,", ",true,9,", 1)).unwrap();
    assert_eq!(code(&bin(&["replay", "--out", s(dir.path())])), 1);
}

#[test]
fn adversary_writes_a_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&[
        "adversary",
        "--attack",
        "clique",
        "--n",
        "10",
        "--algo",
        "ge1",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    let verdict: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(verdict["guaranteed"], 21);
    assert_eq!(verdict["oracle_T_ok"], true);
    assert!(verdict["steps_until_forbidden"]
        .as_u64()
        .is_none_or(|t| t >= 21));
    let dump = dir.path().join("schedule.json");
    assert_eq!(code(&bin(&["verify", s(&dump)])), 0);
}

#[test]
fn bench_prints_both_explorers() {
    let out = bin(&["bench", "--n", "10", "--m", "20", "--reps", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("\nge1,") && text.contains("\nge0,"));
}
