use std::path::{Path, PathBuf};
use std::process::Command;

use critplace::io::{ResultFile, Scene};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_critplace"))
}

fn scenes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

fn run(args: &[&str]) -> i32 {
    let out = bin().args(args).output().unwrap();
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn genlb_critical_oracle_render() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("lb.scene");
    let result = dir.path().join("r.json");
    assert_eq!(run(&["genlb", "--n", "4", "--eps", "0.25", "--out", s(&scene)]), 0);
    assert_eq!(run(&["critical", "--shape", "square", "--eps", "0.25", "--in", s(&scene), "--out", s(&result)]), 0);
    let r = ResultFile::from_json(&std::fs::read_to_string(&result).unwrap()).unwrap();
    assert!(!r.placement.unwrap().curves.is_empty());
    let check = ["oracle-check", "--eps", "0.25", "--resolution", "0.0125", "--in", s(&scene), "--curves", s(&result)];
    assert_eq!(run(&check), 0);

    let svg = dir.path().join("r.svg");
    assert_eq!(run(&["render", "--in", s(&result), "--out", s(&svg), "--overlay", s(&scene)]), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"id="curves""#) && text.contains(r#"id="scene""#));
}

#[test]
fn oracle_check_rejects_tampered_curves() {
    let dir = tempfile::tempdir().unwrap();
    let scene = scenes().join("four_lines.scene");
    let result = dir.path().join("r.json");
    assert_eq!(run(&["critical", "--shape", "circle", "--eps", "0.5", "--in", s(&scene), "--out", s(&result)]), 0);
    let mut r = ResultFile::from_json(&std::fs::read_to_string(&result).unwrap()).unwrap();
    let p = r.placement.as_mut().unwrap();
    let n = p.curves.len();
    p.curves.truncate(n / 2);
    std::fs::write(&result, r.to_json().unwrap()).unwrap();
    let code = run(&["oracle-check", "--eps", "0.5", "--resolution", "0.025", "--in", s(&scene), "--curves", s(&result)]);
    assert_eq!(code, 2);
}

#[test]
fn results_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let scene = scenes().join("segments.scene");
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        assert_eq!(run(&["critical", "--shape", "square", "--eps", "0.3", "--in", s(&scene), "--out", s(out)]), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn junctions_on_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("j.json");
    let scene = scenes().join("crossing.scene");
    let spacing = 0.1;
    assert_eq!(run(&["junctions", "--eps", "0.2", "--spacing", "0.1", "--k", "1", "--in", s(&scene), "--out", s(&out)]), 0);
    let r = ResultFile::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let j = r.junctions.unwrap();
    assert_eq!(j.top_k.len(), 1);
    assert!(j.top_k[0].point.norm() <= spacing + 1e-9, "{:?}", j.top_k[0].point);
    assert_eq!(j.significance.len(), j.rows);
    let svg = dir.path().join("j.svg");
    assert_eq!(run(&["render", "--in", s(&out), "--out", s(&svg)]), 0);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.scene");
    std::fs::write(&bad, "L 0 0 1\n").unwrap();
    let out = dir.path().join("o.json");
    assert_eq!(run(&["critical", "--shape", "square", "--eps", "0.5", "--in", s(&bad), "--out", s(&out)]), 1);
    assert_eq!(run(&["critical", "--shape", "triangle", "--eps", "0.5", "--in", s(&bad), "--out", s(&out)]), 1);
    assert_eq!(run(&["critical", "--shape", "circle", "--eps", "0.5", "--in", "/nonexistent", "--out", s(&out)]), 1);
    assert_eq!(run(&["genlb", "--n", "5", "--eps", "0.25", "--out", s(&out)]), 1);
    assert_eq!(run(&["frobnicate"]), 1);
    assert_eq!(run(&["critical", "--bogus"]), 1);
    assert_eq!(run(&["--help"]), 0);
}

#[test]
fn shipped_scenes_round_trip() {
    let mut seen = 0;
    for e in std::fs::read_dir(scenes()).unwrap() {
        let p = e.unwrap().path();
        if p.extension().and_then(|x| x.to_str()) != Some("scene") {
            continue;
        }
        let text = std::fs::read_to_string(&p).unwrap();
        let a = Scene::parse(&text).unwrap();
        let b = Scene::parse(&a.emit()).unwrap();
        assert_eq!(a, b, "{}", p.display());
        seen += 1;
    }
    assert!(seen >= 4);
}
