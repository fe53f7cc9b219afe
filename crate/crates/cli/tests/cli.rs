use std::path::PathBuf;
use std::process::{Command, Output};

use asram_cli::exit;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_asram"));
    cmd.env_remove("ASRAM_ENUM_CAP");
    cmd
}

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("asram-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn jump_along_a_jet() {
    let o = run(&["jump", "--cover", &corpus("01_simple_pole.cover"), "--jet", "x:1,0"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "h=1"), "{out}");
    assert!(out.contains("reduced=(1,0)*t^-1"));
}

#[test]
fn jump_json_is_valid() {
    let o = run(&["--format", "json", "jump", "--cover", &corpus("01_simple_pole.cover"), "--jet", "x:1,0"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["h"], 1);
    assert_eq!(v["jet"], "x:1,0");
}

#[test]
fn jump_along_a_curve_equation() {
    // T = U^2 + T U meets T = 0 with multiplicity 2
    let curve = scratch("tangent.curve", "term 1 0 1,0\nterm 0 2 1,0\nterm 1 1 1,0\n");
    let o = run(&["jump", "--cover", &corpus("01_simple_pole.cover"), "--curve", &curve]);
    assert_eq!(o.status.code(), Some(exit::OK), "{}", String::from_utf8_lossy(&o.stderr));
    let direct = run(&["jump", "--cover", &corpus("01_simple_pole.cover"), "--jet", "t:2:1,0,1,0"]);
    let h = |o: &Output| stdout(o).lines().find(|l| l.starts_with("h=")).unwrap().to_string();
    assert_eq!(h(&o), h(&direct));
}

#[test]
fn generic_exhaustive_agrees_with_closed_form() {
    let o = run(&["generic", "--cover", &corpus("01_simple_pole.cover"), "-r", "4", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let out = stdout(&o);
    assert!(out.contains("h=3\n"));
    assert!(out.contains("exhaustive=3\n"));
    assert!(out.contains("closed_form=true"));
}

#[test]
fn verify_passes_on_the_corpus_sample() {
    for theorem in ["usu", "semicont", "gener", "asymp"] {
        let o = run(&["verify", "--cover", &corpus("16_cross.cover"), "--theorem", theorem]);
        let out = stdout(&o);
        assert_eq!(o.status.code(), Some(exit::OK), "{theorem}: {out}");
        assert_eq!(out.lines().last(), Some("violations\t0"));
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--seed", "17", "asymptote", "--cover", &corpus("05_pivot_two.cover"), "--rmax", "6", "--trials", "300",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(exit::OK));
    assert_eq!(a.stdout, b.stdout);
    let args = ["enumerate", "--cover", &corpus("16_cross.cover"), "-r", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn enumerate_lists_every_jet() {
    let o = run(&["enumerate", "--cover", &corpus("01_simple_pole.cover"), "-r", "2"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    // beta_2 != 0, beta_3 free over F_4
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("t:2:")).count(), 3 * 4);
}

#[test]
fn reducible_modulus_is_a_parse_error_at_its_line() {
    let cover = scratch("reducible.cover", "p 2\ne 2\nmodulus 1 0 1\nd 1\nterm -1 0 1,0\nprec 8 8\n");
    let o = run(&["jump", "--cover", &cover, "--jet", "x:1,0"]);
    assert_eq!(o.status.code(), Some(exit::PARSE));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn exit_codes_by_category() {
    let cover = corpus("01_simple_pole.cover");
    assert_eq!(run(&["jump", "--cover", "/nonexistent/x.cover", "--jet", "x:1"]).status.code(), Some(exit::USAGE));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(exit::USAGE));
    assert_eq!(run(&["--help"]).status.code(), Some(exit::OK));
    // beta_r = 0 is not a curve of the family
    assert_eq!(run(&["jump", "--cover", &cover, "--jet", "t:2:0,0,1,0"]).status.code(), Some(exit::DOMAIN));
    // jet too short for r = 3, m = 1
    assert_eq!(run(&["jump", "--cover", &cover, "--jet", "t:3:1,0"]).status.code(), Some(exit::PRECISION));
    // exhaustive scan over the cap
    let o = run(&["--cap", "4", "enumerate", "--cover", &cover, "-r", "3"]);
    assert_ne!(o.status.code(), Some(exit::OK));
    let bad = scratch("bad.cover", "p 2\ne 2\nmodulus 1 1 1\nd 3\n");
    assert_eq!(run(&["jump", "--cover", &bad, "--jet", "x:1,0"]).status.code(), Some(exit::PARSE));
}

#[test]
fn cap_can_come_from_the_environment() {
    let cover = corpus("01_simple_pole.cover");
    let o = bin()
        .args(["enumerate", "--cover", &cover, "-r", "3"])
        .env("ASRAM_ENUM_CAP", "4")
        .output()
        .unwrap();
    assert_ne!(o.status.code(), Some(exit::OK));
}
