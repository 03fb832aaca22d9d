use std::process::{Command, Output};

fn effseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effseq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn query_finds_the_image_of_j_class_in_stem_seven() {
    let out = effseq(&["query", "--object", "L_C", "--stem", "7", "--weight", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("pi_(7,4) = Z/16, generator iv1^4"), "{}", stdout(&out));
}

#[test]
fn compute_lists_ko_c_generators() {
    let out = effseq(&["compute", "--object", "ko_C", "--pages", "1..inf", "--stems", "0..24"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let last: Vec<&str> = text.lines().filter(|l| l.starts_with("page 2 |")).collect();
    for label in ["| 1 |", "| h1 |", "| 2v1^2 |", "| v1^4 |"] {
        assert!(last.iter().any(|l| l.contains(label)), "missing {label}");
    }
    assert!(text.trim_end().ends_with("# E_infinity = E_2"));
}

#[test]
fn valuation_suite_passes() {
    let out = effseq(&["verify", "--suite", "valuation"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn malformed_flags_exit_with_two() {
    assert_eq!(effseq(&["compute", "--object", "ko_C", "--stems", "ten"]).status.code(), Some(2));
    assert_eq!(effseq(&["query", "--object", "KO", "--stem", "1", "--weight", "0"]).status.code(), Some(2));
    assert_eq!(effseq(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(effseq(&["frobnicate"]).status.code(), Some(2));
    let bad_modulus = ["chart", "--object", "L", "--stems", "0..4", "--coweights", "0..4", "--modulus", "3"];
    assert_eq!(effseq(&bad_modulus).status.code(), Some(2));
}

#[test]
fn chart_writes_svg_and_sidecar_to_the_env_directory() {
    let dir = std::env::temp_dir().join(format!("effseq-cli-{}", std::process::id()));
    let args = ["chart", "--object", "ko_C", "--stems", "0..8", "--coweights", "0..4", "--max-filtration", "6", "--name", "t"];
    let run = || Command::new(env!("CARGO_BIN_EXE_effseq")).args(args).env("EFFSEQ_OUT_DIR", &dir).output().unwrap();
    assert_eq!(run().status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.join("t.svg")).unwrap();
    let tsv = std::fs::read_to_string(dir.join("t.tsv")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("<svg"));
    assert!(tsv.starts_with("# s\tf\tglyph\tcolor\tlabel\tlines"));
    assert!(tsv.lines().count() > 1);
    run();
    assert_eq!(std::fs::read_to_string(dir.join("t.svg")).unwrap(), svg);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dump_presentation_is_json() {
    let out = effseq(&["dump-presentation", "--object", "ko"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"name\": \"ko\""));
}
