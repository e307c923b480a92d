use std::path::PathBuf;
use std::process::Command;

use pvakit::cli::{render, run, Cli};
use pvakit::syntax::{parse_source, print_source};
use clap::Parser;

const BUNDLED: &[&str] = &["kdv.pva", "affine-sl2.pva", "freeboson.va", "nls.dirac", "sugawara-sl2.va"];

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn pvakit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pvakit")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut a = vec!["--emit", "json"];
    a.extend_from_slice(args);
    let (code, out, err) = pvakit(&a);
    assert!(code != 2, "{err}");
    (code, serde_json::from_str(&out).unwrap())
}

fn expr<'a>(v: &'a serde_json::Value, kind: &str, idx: &[usize]) -> &'a str {
    v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["kind"] == kind && e["indices"] == serde_json::json!(idx))
        .unwrap_or_else(|| panic!("no entry {kind}{idx:?}"))["expr"]
        .as_str()
        .unwrap()
}

#[test]
fn bundled_files_round_trip() {
    for f in BUNDLED {
        let text = std::fs::read_to_string(data(f)).unwrap();
        let spec = parse_source(&text).unwrap();
        let printed = print_source(&spec);
        assert_eq!(parse_source(&printed).unwrap(), spec, "{f}");
        assert_eq!(print_source(&parse_source(&printed).unwrap()), printed, "{f}");
        let (code, out, _) = pvakit(&["print", data(f).to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(out, printed);
    }
}

#[test]
fn check_is_green_on_bundled_brackets() {
    for f in ["kdv.pva", "affine-sl2.pva", "nls.dirac", "freeboson.va"] {
        let (code, v) = json(&["check", data(f).to_str().unwrap()]);
        assert_eq!(code, 0, "{f}: {v}");
    }
    let (_, v) = json(&["check", data("kdv.pva").to_str().unwrap()]);
    assert_eq!(expr(&v, "compatibility(H,K)", &[]), "Jacobi holds for H + t*K");
}

#[test]
fn hierarchy_table() {
    let (code, v) = json(&["hierarchy", data("kdv.pva").to_str().unwrap(), "--steps", "3"]);
    assert_eq!(code, 0);
    assert_eq!(expr(&v, "density", &[2]), "1/2*u^3 + 1/2*c*u*u''");
    assert_eq!(expr(&v, "xi", &[2]), "3/2*u^2 + c*u''");
    assert_eq!(v["version"], 1);
    assert_eq!(v["command"], "hierarchy");
}

#[test]
fn va_bracket_factored() {
    let (code, out, _) = pvakit(&["va", data("freeboson.va").to_str().unwrap(), "bracket", "L", "L"]);
    assert_eq!(code, 0);
    assert!(out.contains("ok   bracket: (T + 2*l)*L + 1/12*l^3*vac"), "{out}");
}

#[test]
fn emitters_agree() {
    let path = data("kdv.pva");
    let args = ["hierarchy", path.to_str().unwrap(), "--steps", "2"];
    let (_, v) = json(&args);
    let (_, text, _) = pvakit(&args);
    for e in v["entries"].as_array().unwrap() {
        assert!(text.contains(e["expr"].as_str().unwrap()), "{e}");
    }
    let (_, latex, _) = pvakit(&["--emit", "latex", args[0], args[1], args[2], args[3]]);
    assert!(latex.starts_with("\\begin{itemize}"));
    assert_eq!(latex.matches("\\item").count(), v["entries"].as_array().unwrap().len());
}

#[test]
fn exit_status_tracks_failures() {
    let dir = std::env::temp_dir().join(format!("pvakit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.pva");
    std::fs::write(&bad, "generators u, v;\nbracket {u,v} = l;\nbracket {v,u} = 1;\n").unwrap();
    let (code, v) = json(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(expr(&v, "skewsymmetry", &[0, 1]), "l + 1");

    let undeclared = dir.join("undeclared.pva");
    std::fs::write(&undeclared, "generators u, v;\nbracket {u,v} = l*w;\n").unwrap();
    let (code, _, err) = pvakit(&["check", undeclared.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("2:19: undeclared identifier 'w'"), "{err}");

    let out = dir.join("report.json");
    let (code, stdout, _) = pvakit(&["--emit", "json", "--out", out.to_str().unwrap(), "check", data("kdv.pva").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], "check");
}

#[test]
fn in_process_matches_binary() {
    let path = data("nls.dirac");
    let args = ["pvakit", "dirac", path.to_str().unwrap(), "--trunc", "6"];
    let cli = Cli::try_parse_from(args).unwrap();
    let report = run(&cli).unwrap();
    let (code, out, _) = pvakit(&args[1..]);
    assert_eq!(code, if report.passed() { 0 } else { 1 });
    assert_eq!(render(&cli, &report), out);
}

#[test]
fn dirac_overrides() {
    let path = data("nls.dirac");
    let (code, v) = json(&["dirac", path.to_str().unwrap(), "--label", "K", "--constraints", "s"]);
    assert_eq!(code, 0);
    assert_eq!(expr(&v, "constant-matrix(K)", &[]), "[[0, -1], [1, 0]]");
    assert!(v["entries"].as_array().unwrap().iter().all(|e| !e["kind"].as_str().unwrap().ends_with("(H)")));
}

#[test]
fn builtins() {
    let (code, out, _) = pvakit(&["va", "builtin:fermion", "bracket", "phi", "phi"]);
    assert_eq!(code, 0);
    assert!(out.contains("ok   bracket: vac"));
    let (code, _, err) = pvakit(&["va", "builtin:nothing", "check"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown builtin"));
}
