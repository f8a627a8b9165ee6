use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("timelike-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(out: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timelike")).arg("--out").arg(out).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn closed_curve_parameters() {
    let d = workdir("closed");
    let v = json(&run(&d, &["closed", "--psi", "3/4", "2/3"]));
    let r = &v["results"];
    assert!((r["e1"].as_f64().unwrap() + 1.986377).abs() < 1e-5);
    assert!((r["e2"].as_f64().unwrap() - 0.027511).abs() < 1e-5);
    assert!(r["curve_gap"].as_f64().unwrap() < 1e-5);
    assert_eq!(r["periods"].as_u64().unwrap(), 12);
    assert!(d.join("curve.csv").exists());
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn link_of_generated_torus_knots() {
    let d = workdir("link");
    for kind in ["standard", "starred"] {
        json(&run(&d, &["--samples", "2048", "knot", "torus", "--kind", kind, "--p", "3", "--q", "7"]));
    }
    let (a, b) = (d.join("standard_3_7.csv"), d.join("starred_3_7.csv"));
    let o = run(&d, &["knot", "link", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(String::from_utf8_lossy(&o.stderr).trim(), "21");
    assert_eq!(json(&o)["results"]["linking"].as_i64().unwrap(), 21);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn exit_codes() {
    let d = workdir("codes");
    assert_eq!(run(&d, &["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&d, &["critical", "--e1", "2", "--e2", "1"]).status.code(), Some(2));
    assert_eq!(run(&d, &["homogeneous", "--class", "C2i", "--a", "0.5", "--b", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&d, &["--help"]).status.code(), Some(0));
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn runs_are_reproducible() {
    let d = workdir("seed");
    let args = ["--seed", "11", "directrix", "--a", "0.7", "--b", "1/3"];
    let first = json(&run(&d, &args));
    let second = json(&run(&d, &args));
    assert_eq!(first["results"], second["results"]);
    std::fs::remove_dir_all(&d).unwrap();
}
