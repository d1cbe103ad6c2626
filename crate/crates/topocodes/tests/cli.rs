use std::process::Command;
use topocodes::cli::main_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["topocodes".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn info_prints_parameters() {
    let (code, out, _) = run(&["info", "--family", "toric", "--size", "8"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("[[128,2,8]]"), "{out}");
    let (code, out, _) = run(&["info", "--family", "planar-toric", "--size", "7", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(85), Some(1)));
    assert_eq!(v["distance"]["distance"], 7);
}

#[test]
fn large_color_distance_is_an_upper_bound() {
    let (code, out, _) = run(&["info", "--family", "triangular-488", "--size", "9"]);
    assert_eq!(code, 0);
    assert!(out.contains("[[73,1,9]]") && out.contains("upper bound 9"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["info", "--family", "moebius"]).0, 2);
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["sweep", "--sizes", "4", "--p", "0.2:0.1:0.01", "--trials", "10", "--seed", "1"]).0, 2);
    assert_eq!(run(&["ising-verify", "--family", "toric", "--size", "2", "--p", "0.1", "--chain", "nope"]).0, 2);
}

#[test]
fn invalid_sizes_fail() {
    let (code, _, err) = run(&["info", "--family", "honeycomb-torus", "--size", "3"]);
    assert_ne!(code, 0);
    assert!(!err.is_empty());
}

#[test]
fn build_emits_lattice_json() {
    let (code, out, _) = run(&["build", "--family", "toric", "--size", "3"]);
    assert_eq!(code, 0);
    let c = topocodes::CellComplex2D::from_json(out.trim()).unwrap();
    assert_eq!((c.nv(), c.ne(), c.nf()), (9, 18, 9));
}

#[test]
fn decode_lines_are_json() {
    let args = ["decode", "--family", "toric", "--size", "4", "--p", "0.05", "--trials", "20", "--seed", "3"];
    let (code, out, _) = run(&args);
    assert_eq!(code, 0);
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 21);
    assert_eq!(lines[20]["summary"]["trials"], 20);
    // same seed, same output
    assert_eq!(run(&args).1, out);
}

#[test]
fn sweep_csv_is_reproducible() {
    let args = ["sweep", "--family", "toric", "--sizes", "3,4", "--p", "0.05,0.1", "--trials", "200", "--seed", "9"];
    let (code, out, err) = run(&args);
    assert_eq!(code, 0);
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["d", "p", "trials", "failures", "rate", "lo95", "hi95"]);
    assert_eq!(rd.records().count(), 4);
    let line = err.lines().find_map(|l| l.strip_prefix("crossing: ")).unwrap();
    let crossing: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(crossing["note"], "no crossing in grid");

    let (_, again, _) = run(&["--workers", "2"].iter().chain(args.iter()).copied().collect::<Vec<_>>());
    assert_eq!(again, out);
}

#[test]
fn sweep_json_and_out_file() {
    let dir = std::env::temp_dir().join(format!("topocodes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.json");
    let p = path.to_str().unwrap();
    let args = ["--out", p, "sweep", "--sizes", "3", "--p", "0.1", "--trials", "50", "--seed", "1", "--format", "json"];
    let (code, _, _) = run(&args);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ising_verify_passes() {
    for chain in ["zero", "random:4"] {
        let (code, out, _) = run(&["ising-verify", "--family", "toric", "--size", "2", "--p", "0.1", "--chain", chain]);
        assert_eq!(code, 0, "{out}");
    }
}

#[test]
fn exhaustive_distance() {
    let (code, out, _) = run(&["distance", "--family", "triangular-666", "--size", "3", "--exhaustive"]);
    assert_eq!(code, 0);
    assert!(out.contains('3'), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_topocodes");
    let ok = Command::new(bin).args(["info", "--family", "toric", "--size", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("[[8,2,2]]"));
    let bad = Command::new(bin).args(["info", "--family", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
