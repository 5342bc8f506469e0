mod common;

use clap::Parser as _;

use common::corpus_path;
use rtg::cli::{run, Cli};

/// Exit status, stdout and stderr of one invocation.
fn rtg(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("rtg".to_string()).chain(args.iter().map(|a| {
        let path = corpus_path(a);
        if path.exists() {
            path.display().to_string()
        } else {
            a.to_string()
        }
    }));
    let cli = Cli::try_parse_from(argv).expect("valid arguments");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn parse_exit_codes() {
    assert_eq!(rtg(&["parse", "g1.rtg", "p1.pic"]).0, 0);
    assert_eq!(rtg(&["parse", "g1.rtg", "all_a_3x3.pic"]).0, 1);
    let (code, _, err) = rtg(&["parse", "g1.rtg", "missing.pic"]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.pic"), "{err}");
}

#[test]
fn parse_reports_derivation_matrix_and_oracle() {
    let (code, out, _) = rtg(&["parse", "g2.rtg", "p2.pic", "--show-derivation", "--show-matrix", "--oracle"]);
    assert_eq!(code, 0);
    assert!(out.contains("member"));
    assert!(out.contains("oracle: agrees"));
    assert!(out.contains("S_P (1,1;3,4)"), "{out}");
    assert!(out.contains("(1,1;3,4) {"), "{out}");
}

#[test]
fn parse_rejects_non_regional_grammars() {
    let (code, _, err) = rtg(&["parse", "g3.rtg", "all_a_3x3.pic"]);
    assert_eq!(code, 2);
    assert!(err.contains("not regional") || err.contains("RTG-invalid"), "{err}");
}

#[test]
fn validate_verdicts() {
    let (code, out, _) = rtg(&["validate", "g1.rtg"]);
    assert_eq!(code, 0);
    assert!(out.contains("RTG-valid"));
    assert_eq!(rtg(&["validate", "g3.rtg"]).0, 1);
    let (code, out, _) = rtg(&["validate", "t3.ts"]);
    assert_eq!(code, 1);
    assert!(out.contains("converted from ts"));
    assert_eq!(rtg(&["validate", "g7.matrix"]).0, 0);
}

#[test]
fn convert_then_parse() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.rtg");
    let out = out.to_str().unwrap();
    assert_eq!(rtg(&["convert", "--to", "rtg", "g7.matrix", out]).0, 0);
    assert_eq!(rtg(&["parse", out, "p7.pic"]).0, 0);
    assert_eq!(rtg(&["parse", out, "p1.pic"]).0, 1);

    let k = dir.path().join("ex7.kolam");
    let k = k.to_str().unwrap();
    assert_eq!(rtg(&["convert", "--to", "kolam", "ex7.grid", k]).0, 0);
    assert_eq!(rtg(&["parse", k, "fig11.pic"]).0, 0);
}

#[test]
fn convert_to_stdout_and_failures() {
    let (code, out, _) = rtg(&["convert", "--to", "tg", "t3.ts", "-"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("%format"));
    let (code, _, err) = rtg(&["convert", "--to", "rtg", "t3.ts", "-"]);
    assert_eq!(code, 2);
    assert!(err.contains("not a regional tile grammar"), "{err}");
    assert_eq!(rtg(&["convert", "--to", "kolam", "g1.rtg", "-"]).0, 2);
}

#[test]
fn generate_lists_pictures_in_order() {
    let (code, out, _) = rtg(&["generate", "g2.rtg", "--max-rows", "2", "--max-cols", "2"]);
    assert_eq!(code, 0);
    // Size first, then cell content.
    assert_eq!(out, "aa\n\nbb\n\naa\naa\n\naa\nbb\n\nbb\naa\n\nbb\nbb\n");
    let (code, out, _) = rtg(&["generate", "ex7.grid", "--max-rows", "3", "--max-cols", "3"]);
    assert_eq!(code, 0);
    assert!(out.split("\n\n").any(|p| p.trim_end() == "aba\nbbb\naba"), "{out}");
    assert_eq!(rtg(&["generate", "g1.rtg", "--max-rows", "0"]).0, 2);
}

#[test]
fn analyze_tileset_reports_cycles() {
    let (code, out, _) = rtg(&["analyze-tileset", "t3.ts"]);
    assert_eq!(code, 0);
    assert!(out.contains("cycle"), "{out}");
    assert!(out.contains("not simple regional") || out.contains("not regional"), "{out}");
    let (code, out, _) = rtg(&["analyze-tileset", "g1.rtg"]);
    assert_eq!(code, 0);
    assert!(out.contains("simple regional"));
    assert_eq!(rtg(&["analyze-tileset", "g5.kolam"]).0, 2);
}

#[test]
fn syntax_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rtg");
    std::fs::write(&bad, "%format rtg\n%start S\nS -> { A B / A B }\nA -> 'a'\nB -> 'b'\n").unwrap();
    let (code, _, err) = rtg(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}
