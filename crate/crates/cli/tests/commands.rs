use std::fs;
use std::path::{Path, PathBuf};

use matchcolor::multigraph::{validate_coloring, ListAssignment, Multigraph, PartialColoring};
use matchcolor_cli::{parse_args, run, Command};
use serde_json::Value;
use tempfile::TempDir;

const K3: &str = "p 3 3\ne 0 1\ne 1 2\ne 0 2\n";

// Circulant on 8 vertices, offsets 1 and 2, multiplicities 1..3.
const CIRC: &str = "p 8 20
e 0 1
e 0 1
e 0 2
e 1 2
e 1 3
e 1 3
e 2 3
e 2 4
e 3 4
e 3 4
e 3 5
e 4 5
e 4 6
e 5 6
e 5 7
e 5 7
e 6 7
e 6 0
e 7 0
e 7 1
";

// Same skeleton with heavier multiplicities.
const DENSE: &str = "p 8 34
e 0 1
e 0 2
e 0 2
e 0 2
e 1 2
e 1 2
e 1 2
e 1 3
e 2 3
e 2 3
e 2 4
e 2 4
e 2 4
e 3 4
e 3 4
e 3 5
e 3 5
e 3 5
e 4 5
e 4 5
e 4 5
e 4 6
e 5 6
e 5 6
e 5 6
e 5 7
e 6 7
e 6 7
e 6 0
e 6 0
e 7 0
e 7 0
e 7 0
e 7 1
";

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

fn call(args: &[String]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("matchcolor".to_string()).chain(args.iter().cloned());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

macro_rules! args {
    ($($x:expr),* $(,)?) => { vec![$($x.to_string()),*] };
}

#[test]
fn parse_chi_star_defaults() {
    let cli = parse_args(["matchcolor", "chi-star", "g.txt"]).unwrap();
    match cli.command {
        Command::ChiStar(a) => {
            assert_eq!(a.graph, PathBuf::from("g.txt"));
            assert_eq!(a.odd_set_cap, None);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_rejects_large_epsilon() {
    let err = parse_args(["matchcolor", "color", "g.txt", "--epsilon", "0.5"]).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("--epsilon"), "{msg}");
    assert!(msg.contains("ε must be in (0, 0.1]"), "{msg}");
}

#[test]
fn parse_list_color_seed() {
    let cli = parse_args(["matchcolor", "list-color", "g.txt", "--lists", "l.json", "--seed", "7"]).unwrap();
    match cli.command {
        Command::ListColor(a) => {
            assert_eq!(a.seed, 7);
            assert_eq!(a.lists, PathBuf::from("l.json"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_names_offending_flag() {
    for (argv, flag) in [
        (vec!["color", "g", "--radius-t", "0"], "--radius-t"),
        (vec!["color", "g", "--odd-set-cap", "2"], "--odd-set-cap"),
        (vec!["list-color", "g", "--lists", "l", "--alpha", "1.5"], "--alpha"),
        (vec!["calibrate", "g", "--target", "1"], "--target"),
        (vec!["sample", "g", "--lambda", "0"], "--lambda"),
        (vec!["bench", "g", "--seeds", "0"], "--seeds"),
    ] {
        let err = parse_args(std::iter::once("matchcolor").chain(argv)).unwrap_err();
        assert!(err.to_string().contains(flag), "{flag}: {err}");
    }
    assert!(parse_args(["matchcolor", "list-color", "g"]).is_err());
    assert!(parse_args(["matchcolor", "color", "g", "--bogus"]).is_err());
}

#[test]
fn color_k3_uses_three_colors() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let out = dir.path().join("c.json");
    let stats = dir.path().join("s.json");
    let (code, _, err) = call(&args!["color", s(&g), "--out", s(&out), "--stats", s(&stats)]);
    assert_eq!(code, 0, "{err}");
    let col = PartialColoring::from_json(&serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap(), 3).unwrap();
    let graph = Multigraph::parse(K3).unwrap();
    assert!(validate_coloring(&graph, &col, None).is_clean());
    assert_eq!(col.distinct_colors(), 3);
    let st: Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(st["colors_used"], 3);
    assert_eq!(st["chi_star"], "3/1");
}

#[test]
fn color_epsilon_out_of_range_exits_2() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let (code, _, err) = call(&args!["color", s(&g), "--epsilon", "0.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("ε must be in (0, 0.1]"));
}

#[test]
fn missing_and_malformed_input_exit_2() {
    let dir = TempDir::new().unwrap();
    let (code, _, _) = call(&args!["color", s(&dir.path().join("nope.txt"))]);
    assert_eq!(code, 2);
    let bad = write(&dir, "bad.txt", "p 2 1\ne 0 5\n");
    let (code, _, _) = call(&args!["chi-star", s(&bad)]);
    assert_eq!(code, 2);
}

#[test]
fn list_color_empty_list_exits_2() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let l = write(&dir, "l.json", r#"{"0": [0, 1, 2], "1": [], "2": [0, 1, 2]}"#);
    let (code, _, err) = call(&args!["list-color", s(&g), "--lists", s(&l)]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn list_color_k3_respects_lists() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let body = r#"{"0": [0, 1, 2], "1": [1, 2, 5], "2": [0, 2, 5]}"#;
    let l = write(&dir, "l.json", body);
    let out = dir.path().join("c.json");
    let (code, _, err) = call(&args!["list-color", s(&g), "--lists", s(&l), "--out", s(&out)]);
    assert_eq!(code, 0, "{err}");
    let graph = Multigraph::parse(K3).unwrap();
    let lists = ListAssignment::from_json_str(body, 3).unwrap();
    let col = PartialColoring::from_json(&serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap(), 3).unwrap();
    assert!(validate_coloring(&graph, &col, Some(&lists)).is_clean());
}

#[test]
fn chi_star_reports_fraction() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let (code, out, _) = call(&args!["chi-star", s(&g)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "3/1");
    assert_eq!(v["witness"]["kind"], "odd_set");
}

#[test]
fn calibrate_outputs_activity_per_edge() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let (code, out, err) = call(&args!["calibrate", s(&g), "--target", "0.3"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    // K3 with uniform λ: marginal λ/(1+3λ) = 0.3 gives λ = 3.
    for e in ["0", "1", "2"] {
        assert!((v["activities"][e].as_f64().unwrap() - 3.0).abs() < 1e-3);
    }
    assert!(v["max_error"].as_f64().unwrap() < 1e-5);
    assert!(v["K_hat"].as_f64().is_some());
}

#[test]
fn calibrate_infeasible_target_exits_2() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    // Three edges pairwise adjacent: marginals sum to at most 1.
    let (code, _, _) = call(&args!["calibrate", s(&g), "--target", "0.4"]);
    assert_eq!(code, 2);
}

#[test]
fn sample_emits_matchings() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "circ.txt", CIRC);
    let graph = Multigraph::parse(CIRC).unwrap();
    for method in ["exact", "mcmc", "auto"] {
        let (code, out, err) = call(&args!["sample", s(&g), "--count", "25", "--method", method, "--seed", "4"]);
        assert_eq!(code, 0, "{err}");
        let v: Vec<Vec<usize>> = serde_json::from_str(&out).unwrap();
        assert_eq!(v.len(), 25);
        for m in v {
            let mut seen = std::collections::HashSet::new();
            for e in m {
                let (a, b) = graph.endpoints(e);
                assert!(seen.insert(a) && seen.insert(b), "not a matching");
            }
        }
    }
}

#[test]
fn sample_activity_length_mismatch_exits_2() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let a = write(&dir, "a.json", "[1.0, 2.0]");
    let (code, _, _) = call(&args!["sample", s(&g), "--activities", s(&a)]);
    assert_eq!(code, 2);
}

#[test]
fn verify_commands() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let (code, out, _) = call(&args!["verify", "chi-e", s(&g)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["chromatic_index"], 3);

    let l = write(&dir, "l.json", r#"{"0": [0, 1], "1": [0, 1], "2": [0, 1]}"#);
    let (code, out, _) = call(&args!["verify", "chi-e", s(&g), "--lists", s(&l)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["colorable"], false);

    let (code, out, _) = call(&args!["verify", "dist", s(&g), "--lambda", "2"]);
    assert_eq!(code, 0);
    let dist = write(&dir, "d.json", &out);
    let v: Vec<Value> = serde_json::from_str(&out).unwrap();
    // Z = 1 + 3·2 = 7.
    assert_eq!(v.len(), 4);
    let total: f64 = v.iter().map(|x| x["probability"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);

    let (code, out, _) = call(&args!["verify", "tv", s(&dist), s(&dist)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["tv"].as_f64().unwrap().abs() < 1e-12);

    // Point mass on the empty matching has TV 1 - 1/7 from the law above.
    let samples = write(&dir, "s.json", "[[], [], []]");
    let (code, out, _) = call(&args!["verify", "tv", s(&dist), s(&samples)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["tv"].as_f64().unwrap() - 6.0 / 7.0).abs() < 1e-12);
}

fn bench_args(g: &Path, out: &Path) -> Vec<String> {
    args![
        "bench", s(g), "--chi0", "4", "--radius-t", "2", "--odd-set-cap", "7", "--seeds", "20", "--seed-base", "100",
        "--out", s(out),
    ]
}

#[test]
fn bench_twenty_rows_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "circ.txt", CIRC);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(call(&bench_args(&g, &a)).0, 0);
    assert_eq!(call(&bench_args(&g, &b)).0, 0);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "seed,status,steps,colors,ratio");
    assert_eq!(lines.len(), 21);
    for (k, row) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], (100 + k).to_string());
        assert_eq!(cols.len(), 5);
    }
}

#[test]
fn bench_timing_adds_column() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", K3);
    let (code, out, _) = call(&args!["bench", s(&g), "--seeds", "3", "--timing"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "seed,status,steps,colors,ratio,wall_ms");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
}

#[test]
fn identical_inputs_give_identical_files() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "circ.txt", CIRC);
    let mut outs = Vec::new();
    for k in 0..2 {
        let c = dir.path().join(format!("c{k}.json"));
        let st = dir.path().join(format!("s{k}.json"));
        let (code, _, err) = call(&args![
            "color", s(&g), "--chi0", "4", "--radius-t", "2", "--odd-set-cap", "7", "--seed", "9", "--out", s(&c),
            "--stats", s(&st),
        ]);
        assert_eq!(code, 0, "{err}");
        outs.push((fs::read(&c).unwrap(), fs::read(&st).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn exhausted_retries_exit_1() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "dense.txt", DENSE);
    let (code, _, err) = call(&args![
        "color", s(&g), "--chi0", "4", "--radius-t", "2", "--odd-set-cap", "7", "--step-cap", "1", "--retries", "1",
    ]);
    assert_eq!(code, 1, "{err}");
}
