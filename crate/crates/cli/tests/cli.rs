use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use geocurrents::currents::{intersection, parse_current, LiftSearch};
use geocurrents::group::{enumerate_elements, standard_genus2, ConjClass};
use geocurrents::hyperbolic::DiskPoint;
use geocurrents_cli::render::{ball_membership, ball_samples};
use serde_json::Value;
use tempfile::TempDir;

const FIXTURE: &str = "1 a\n1 b\n1 c\n1 d\n1 abcd\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geocurrents")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn records(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.cur", "1.0 a\n");
    let out = run(&["intersect", s(&a), "a"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "0"));

    let bad = file(&dir, "bad.cur", "1.0 a\nweight b\n");
    assert_eq!(code(&run(&["intersect", s(&bad), "a"])), 2);
    assert_eq!(code(&run(&["intersect", s(&dir.path().join("missing.cur")), "a"])), 2);
    assert_eq!(code(&run(&["intersect", s(&a), "aq"])), 2);
    assert_eq!(code(&run(&["--depth", "0", "exponent", s(&a)])), 2);
    assert_eq!(code(&run(&["render", s(&a), "tiles"])), 2);
    assert_eq!(code(&run(&["dist", s(&a), "0,0", "2,0"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);

    let cfg = file(&dir, "run.cfg", "colour = red\n");
    assert_eq!(code(&run(&["--config", s(&cfg), "intersect", s(&a), "a"])), 2);
}

#[test]
fn intersect_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "fixture.cur", FIXTURE);
    let p = standard_genus2().unwrap();
    let eta = parse_current(FIXTURE, &p).unwrap();
    for word in ["b", "ab", "aBcD", "abAB"] {
        let out = run(&["intersect", s(&path), word]);
        assert_eq!(code(&out), 0);
        let c = ConjClass::from_word(&word.parse().unwrap(), &p).unwrap();
        let expected = intersection(&eta, &c, &p).unwrap();
        assert_eq!(stdout(&out).trim().parse::<f64>().unwrap(), expected, "{word}");
    }
    let out = run(&["dist", s(&path), "0,0", "0,0"]);
    assert_eq!(stdout(&out).trim(), "0");
}

fn slopes(path: &Path) -> (f64, f64) {
    let out = run(&["--depth", "4", "exponent", s(path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&stdout(&out));
    assert_eq!(recs[0]["record"], "header");
    assert_eq!(recs[0]["depth"], 4);
    let theorem = recs.iter().find(|r| r["record"] == "theorem").unwrap();
    (theorem["orbit_slope"].as_f64().unwrap(), theorem["class_slope"].as_f64().unwrap())
}

#[test]
fn exponent_slopes_scale_inversely() {
    let dir = TempDir::new().unwrap();
    let (orbit, class) = slopes(&file(&dir, "fixture.cur", FIXTURE));
    assert!(orbit > 0.0 && class > 0.0);
    let scaled = FIXTURE.replace("1 ", "2 ");
    let (orbit2, class2) = slopes(&file(&dir, "scaled.cur", &scaled));
    assert!((orbit2 - orbit / 2.0).abs() <= 1e-9);
    assert!((class2 - class / 2.0).abs() <= 1e-9);
}

#[test]
fn verify_reports_a_witness_for_a_simple_curve() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.cur", "1.0 a\n");
    let out = run(&["--depth", "3", "verify", s(&a), "--samples", "20"]);
    assert_eq!(code(&out), 1);
    let recs = records(&stdout(&out));
    let probe = recs.iter().find(|r| r["name"] == "filling_probe").unwrap();
    assert_eq!(probe["passed"], false);
    assert_eq!(probe["detail"]["witness"]["class"], "[c]");
    let summary = recs.last().unwrap();
    assert_eq!(summary["record"], "summary");
    assert_eq!(summary["passed"], false);
}

#[test]
fn verify_is_deterministic_and_writes_atomically() {
    let dir = TempDir::new().unwrap();
    let path = file(&dir, "fixture.cur", FIXTURE);
    let (first, second) = (dir.path().join("one.jsonl"), dir.path().join("two.jsonl"));
    for out in [&first, &second] {
        run(&["--depth", "3", "--seed", "5", "--out", s(out), "verify", s(&path), "--samples", "20"]);
    }
    let bytes = fs::read(&first).unwrap();
    assert!(!bytes.is_empty());
    assert_eq!(bytes, fs::read(&second).unwrap());
    assert_eq!(records(std::str::from_utf8(&bytes).unwrap())[0]["seed"], 5);

    let bad = file(&dir, "bad.cur", "-1 a\n");
    let target = dir.path().join("never.jsonl");
    assert_eq!(code(&run(&["--out", s(&target), "verify", s(&bad)])), 2);
    assert!(!target.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 4);
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = file(&dir, "run.cfg", "seed = 5\ndepth = 2\nenumerate.depth = 1\n");
    let listing = |extra: &[&str]| {
        let mut args = vec!["--config", s(&cfg)];
        args.extend_from_slice(extra);
        args.push("enumerate");
        records(&stdout(&run(&args)))
    };
    let recs = listing(&[]);
    assert_eq!((recs[0]["seed"].as_u64(), recs[0]["depth"].as_u64()), (Some(5), Some(1)));
    assert_eq!(recs.len(), 1 + 9);
    let recs = listing(&["--seed", "9", "--depth", "2"]);
    assert_eq!((recs[0]["seed"].as_u64(), recs[0]["depth"].as_u64()), (Some(9), Some(2)));
}

#[test]
fn enumerate_uses_the_cache() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("elements.bin");
    let first = stdout(&run(&["--depth", "3", "--cache", s(&cache), "enumerate", "elements"]));
    assert!(cache.exists());
    let second = stdout(&run(&["--depth", "3", "--cache", s(&cache), "enumerate", "elements"]));
    assert_eq!(first, second);
    let p = standard_genus2().unwrap();
    assert_eq!(records(&first).len(), 1 + enumerate_elements(&p, 3).len());
    let classes = records(&stdout(&run(&["--depth", "2", "enumerate", "classes"])));
    assert!(classes[1..].iter().all(|r| r["record"] == "class" && r["length"].as_f64().unwrap() > 2.0));
}

#[test]
fn render_counts_and_format() {
    let dir = TempDir::new().unwrap();
    let gens = file(&dir, "gens.cur", "1 a\n1 b\n1 c\n1 d\n");
    let out = run(&["render", s(&gens), "axes"]);
    assert_eq!(code(&out), 0);
    let svg = stdout(&out);
    assert!(svg.starts_with("<?xml") && svg.contains(r#"version="1.1""#) && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"class="geodesic""#).count(), 4);
    let paths: Vec<&str> = svg.lines().filter(|l| l.contains(r#"class="geodesic""#)).collect();
    for (i, x) in paths.iter().enumerate() {
        assert!(paths[i + 1..].iter().all(|y| y != x));
    }

    let lifts = stdout(&run(&["render", s(&gens), "lifts", "--radius", "1.5"]));
    assert!(lifts.matches(r#"class="geodesic""#).count() >= 4);

    let ball = stdout(&run(&["--seed", "3", "render", s(&gens), "ball", "--samples", "50", "--radius", "3"]));
    assert_eq!(ball.matches(r#"class="in""#).count() + ball.matches(r#"class="out""#).count(), 50);
    assert!(ball.contains("seed 3"));
}

#[test]
fn ball_is_invariant_under_a_generator() {
    let p = standard_genus2().unwrap();
    let eta = parse_current(FIXTURE, &p).unwrap();
    let search = LiftSearch::default();
    let points = ball_samples(7, 200);
    let inside = ball_membership(&eta, DiskPoint::ORIGIN, &points, 2.0, &p, &search).unwrap();
    assert!(inside.iter().any(|&b| b) && inside.iter().any(|&b| !b));
    for g in p.generators() {
        let moved: Vec<DiskPoint> = points.iter().map(|&x| g.apply(x)).collect();
        let again = ball_membership(&eta, g.apply(DiskPoint::ORIGIN), &moved, 2.0, &p, &search).unwrap();
        let mismatches = inside.iter().zip(&again).filter(|(a, b)| a != b).count();
        assert!(mismatches <= 2, "{mismatches} of {}", points.len());
    }
}
