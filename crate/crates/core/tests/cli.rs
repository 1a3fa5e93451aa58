use std::fs;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_cumulants");
const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/semicircle_moments.toml");

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn convert_semicircle_to_free() {
    let (code, out, _) = run(&["convert", "-i", FIXTURE, "--from", "moments", "--to", "free"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "generators = [\"a\"]\nkind = \"free\"\nmax_degree = 6\n\n[values]\na = \"0\"\naa = \"1\"\naaa = \"0\"\naaaa = \"0\"\naaaaa = \"0\"\naaaaaa = \"0\"\n"
    );
}

#[test]
fn output_is_deterministic() {
    let args = ["convert", "-i", FIXTURE, "--from", "moments", "--to", "monotone"];
    let (first, second) = (run(&args), run(&args));
    assert_eq!(first, second);
    assert!(first.1.contains("aaaa = \"1/2\""));
}

#[test]
fn max_degree_truncates() {
    let (code, out, _) = run(&["convert", "-i", FIXTURE, "--from", "moments", "--to", "boolean", "--max-degree", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("max_degree = 4"));
    assert!(!out.contains("aaaaa"));
    assert_eq!(run(&["convert", "-i", FIXTURE, "--from", "moments", "--to", "boolean", "--max-degree", "7"]).0, 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.toml");
    fs::write(&partial, "generators = [\"a\", \"b\"]\nkind = \"moment\"\nmax_degree = 2\n\n[values]\na = \"1\"\nb = \"0\"\naa = \"1\"\n").unwrap();
    let p = partial.to_str().unwrap();
    assert_eq!(run(&["convert", "-i", p, "--from", "moments", "--to", "free"]).0, 2);

    let garbled = dir.path().join("garbled.toml");
    fs::write(&garbled, "generators = [\"a\"]\nkind = \"moment\"\nmax_degree = 1\n\n[values]\na = \"0.25\"\n").unwrap();
    let g = garbled.to_str().unwrap();
    assert_eq!(run(&["convert", "-i", g, "--from", "moments", "--to", "free"]).0, 1);

    assert_eq!(run(&["convert", "-i", FIXTURE, "--from", "free", "--to", "boolean"]).0, 1);
    let (code, _, err) = run(&["convert", "-i", FIXTURE, "--from", "free", "--to", "free"]);
    assert_eq!(code, 1);
    assert!(err.contains("usage"));
    assert_eq!(run(&["convert", "-i", "/nonexistent.toml", "--from", "moments", "--to", "free"]).0, 1);
    assert_eq!(run(&["verify", "--generators", "0"]).0, 1);
    assert_eq!(run(&["partitions", "--n", "0"]).0, 1);
}

#[test]
fn multi_letter_generators_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("xy.toml");
    let text = "generators = [\"x1\", \"x2\"]\nkind = \"free\"\nmax_degree = 2\n\n[values]\nx1 = \"1\"\nx2 = \"-1/2\"\n\"x1.x1\" = \"2\"\n\"x1.x2\" = \"0\"\n\"x2.x1\" = \"3/4\"\n\"x2.x2\" = \"1\"\n";
    fs::write(&input, text).unwrap();
    let mid = dir.path().join("m.toml");
    let back = dir.path().join("back.toml");
    let (i, m, b) = (input.to_str().unwrap(), mid.to_str().unwrap(), back.to_str().unwrap());
    assert_eq!(run(&["convert", "-i", i, "-o", m, "--from", "free", "--to", "moments"]).0, 0);
    assert_eq!(run(&["convert", "-i", m, "-o", b, "--from", "moments", "--to", "free"]).0, 0);
    assert_eq!(fs::read_to_string(b).unwrap(), text);
}

#[test]
fn verify_reports() {
    let (code, out, _) = run(&["verify", "--degree", "4", "--generators", "1", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(out.lines().filter(|l| l.starts_with("PASS")).count() >= 12);
    let (code, out, _) = run(&["verify", "--degree", "3", "--generators", "2", "--seed", "7", "--format", "structured"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.starts_with("config ") || l.starts_with("check ") || l.starts_with("summary ")));
    assert!(out.contains("check name=route-equivalence-free status=pass checked=14"));
}

#[test]
fn partition_listings() {
    let (code, out, _) = run(&["partitions", "--n", "4", "--family", "irr-nc"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
    let (_, out, _) = run(&["partitions", "--n", "3", "--family", "monotone", "--stats", "--format", "structured"]);
    assert!(out.contains("partition blocks={1,3}<{2} tau=2 m=1"));
    assert!(out.ends_with("total count=12\n"));
}
