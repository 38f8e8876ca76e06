use std::path::Path;
use std::process::Command;

use pubcfr_cli::strategy::{read_strategy, write_strategy};
use pubcfr_core::{build_public_tree, make_game, strategy_distance};

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
fn pubcfr(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("pubcfr").chain(args.iter().copied());
    let code = pubcfr_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(stdout: &'a str, prefix: &str) -> &'a str {
    stdout.lines().find_map(|l| l.strip_prefix(prefix)).unwrap_or_else(|| panic!("no {prefix:?} in\n{stdout}"))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn info_reports_sizes_and_verdict() {
    let (code, out, _) = pubcfr(&["info", "--game", "rps_efg"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "histories=13"));
    let (_, out, _) = pubcfr(&["info", "--game", "kuhn"]);
    assert!(out.lines().any(|l| l.starts_with("decision infostates=12 ")));
    assert!(out.contains("SBG: pass"));
    let (_, out, _) = pubcfr(&["info", "--game", "mp_seq"]);
    assert!(out.contains("SBG: fail(iii)"));
}

#[test]
fn check_sbg_prints_witnesses() {
    let (code, out, _) = pubcfr(&["check-sbg", "--game", "mp_seq"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("condition iii") && l.contains("fail, witness")));
    assert_eq!(out.matches(": pass").count(), 2);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["info", "--game", "kuhnn"],
        vec!["info", "--game", "kuhn", "--extra", "1"],
        vec!["solve", "--game", "kuhn", "--iters", "0"],
        vec!["solve", "--game", "kuhn", "--algo", "cfr+"],
        vec!["transform", "--game", "chess", "--out", "x.json"],
        vec!["frobnicate"],
    ] {
        let (code, out, err) = pubcfr(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
    let (code, out, _) = pubcfr(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("compare"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pubcfr");
    let ok = Command::new(bin).args(["info", "--game", "kuhn"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["info", "--game", "river:deck=6"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("deck"));
    let unknown = Command::new(bin).args(["info", "--game", "kuhn", "--verbose"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn kuhn_solvers_write_matching_strategy_files() {
    let dir = tempfile::tempdir().unwrap();
    let (v_txt, v_csv, p_txt) = (path(dir.path(), "v.txt"), path(dir.path(), "v.csv"), path(dir.path(), "p.txt"));
    let (code, out, _) = pubcfr(&[
        "solve", "--game", "kuhn", "--algo", "vanilla", "--iters", "10000", "--strategy-out", &v_txt, "--csv-out", &v_csv,
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&v_csv).unwrap();
    let last = csv.lines().last().unwrap();
    let expl: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!(expl <= 1e-3, "{last}");
    let printed: f64 = field(&out, "exploitability: ").parse().unwrap();
    assert!((printed - expl).abs() <= 1e-6 * expl, "{printed} vs {expl}");

    let (code, _, _) = pubcfr(&["solve", "--game", "kuhn", "--algo", "ps", "--iters", "10000", "--strategy-out", &p_txt]);
    assert_eq!(code, 0);
    let (a, b) = (std::fs::read_to_string(&v_txt).unwrap(), std::fs::read_to_string(&p_txt).unwrap());
    let schema = |s: &str| s.lines().map(|l| l.rsplit_once('\t').unwrap().0.to_string()).collect::<Vec<_>>();
    assert_eq!(schema(&a), schema(&b));
    let (pa, pb) = (read_strategy(&a).unwrap(), read_strategy(&b).unwrap());
    assert!(strategy_distance(&pa, &pb) <= 1e-9);
    assert_eq!(write_strategy(&pa), a);
}

#[test]
fn outputs_are_deterministic_without_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let (txt, csv) = (path(dir.path(), &format!("{run}.txt")), path(dir.path(), &format!("{run}.csv")));
        let args = ["solve", "--game", "leduc", "--algo", "ps", "--iters", "50", "--cadence", "10", "--no-wall-time"];
        let (code, _, _) = pubcfr(&[&args[..], &["--strategy-out", &txt, "--csv-out", &csv]].concat());
        assert_eq!(code, 0);
        files.push((std::fs::read(&txt).unwrap(), std::fs::read(&csv).unwrap()));
        let bench_dir = path(dir.path(), &format!("bench-{run}"));
        let (code, _, _) =
            pubcfr(&["bench", "--game", "kuhn", "--iters", "64", "--out-dir", &bench_dir, "--no-wall-time"]);
        assert_eq!(code, 0);
    }
    assert_eq!(files[0], files[1]);
    for name in ["run.csv", "timing.csv", "convergence.svg", "updates.svg"] {
        let read = |run: &str| std::fs::read(dir.path().join(format!("bench-{run}")).join(name)).unwrap();
        assert_eq!(read("a"), read("b"), "{name}");
    }
}

#[test]
fn river_ps_domain_respects_the_linear_bound() {
    let spec = "river:deck=20,hand=1,pot=200,stack=1000,abs=fcpa";
    let (code, out, _) = pubcfr(&["solve", "--game", spec, "--algo", "ps-domain", "--iters", "1000"]);
    assert_eq!(code, 0);
    let ops: u64 = field(&out, "terminal eval ops: ").parse().unwrap();
    let tree = build_public_tree(&make_game(&spec.parse().unwrap()).unwrap()).unwrap();
    assert!(ops <= 4 * tree.terminal_private_sum() as u64 * 1000);
}

#[test]
fn invalid_pairings_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let txt = path(dir.path(), "s.txt");
    let (code, _, err) = pubcfr(&["solve", "--game", "kuhn", "--algo", "ps-domain", "--strategy-out", &txt]);
    assert_eq!(code, 1);
    assert!(err.contains("unsupported"));
    assert!(!Path::new(&txt).exists());

    let out_dir = path(dir.path(), "bench");
    let (code, _, _) = pubcfr(&["bench", "--game", "leduc", "--algos", "ps,ps-domain", "--out-dir", &out_dir]);
    assert_eq!(code, 1);
    assert!(!Path::new(&out_dir).exists());

    let missing = path(dir.path(), "no/such/dir.txt");
    let (code, _, _) = pubcfr(&["solve", "--game", "kuhn", "--strategy-out", &missing]);
    assert_eq!(code, 1);
}

#[test]
fn compare_passes_on_small_games() {
    for (game, iters) in [("kuhn", "100"), ("leduc", "100"), ("liars_dice:d=1,f=4", "50")] {
        let (code, out, _) = pubcfr(&["compare", "--game", game, "--iters", iters]);
        assert_eq!(code, 0, "{out}");
        let distance: f64 = field(&out, "max strategy distance: ").parse().unwrap();
        assert!(distance <= 1e-9);
        assert!(out.contains("result: PASS"));
    }
}

#[test]
fn bench_writes_tables_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = path(dir.path(), "mp");
    let (code, out, _) = pubcfr(&["bench", "--game", "mp_sb", "--algos", "vanilla,ps", "--iters", "1000", "--out-dir", &out_dir]);
    assert_eq!(code, 0);
    for line in out.lines().filter(|l| l.starts_with("vanilla ") || l.starts_with("ps ")) {
        let value: f64 = line.split_whitespace().last().unwrap().parse().unwrap();
        assert!(value.abs() <= 1e-3, "{line}");
    }
    let timing = std::fs::read_to_string(dir.path().join("mp/timing.csv")).unwrap();
    assert_eq!(timing.lines().count(), 3);
    let run = std::fs::read_to_string(dir.path().join("mp/run.csv")).unwrap();
    assert_eq!(run.lines().count(), 1 + 2 * 1000);
    let svg = std::fs::read_to_string(dir.path().join("mp/updates.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn transform_writes_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for (game, books) in [("mp", 2), ("rps", 6)] {
        let json = path(dir.path(), &format!("{game}.json"));
        let (code, out, _) = pubcfr(&["transform", "--game", game, "--out", &json]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("SBG: pass"));
        assert!(out.contains("parity: PASS"));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(v["books"].as_array().unwrap().len(), books);
    }
    let (code, _, _) = pubcfr(&["transform", "--game", "mp", "--out", &path(dir.path(), "missing/x.json")]);
    assert_eq!(code, 1);
}
