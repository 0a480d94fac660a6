//! Golden tests for the `ppdrec` binary: output bytes and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use ppdrec::field::Field;
use ppdrec::format::write_group;
use ppdrec::groups::{Family, FormData, GroupCase, GroupInput};
use ppdrec::matrix::MatrixQ;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ppdrec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ppdrec-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn gen_emits_the_canonical_sl32_file() {
    let out = run(&["gen", "--case", "linear", "--d", "3", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = "\
ppdgrp 1
2 1 3 2 linear

mat
1 1 0
0 1 0
0 0 1

mat
0 1 0
0 0 1
1 0 0
";
    assert_eq!(stdout(&out), golden);
}

#[test]
fn classify_inline_companion_matrix() {
    let out = run(&[
        "classify", "--q", "2", "--d", "3", "--matrix", "0 1 0;0 0 1;1 1 0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "e=3 ppd=true large=true basic=true factor=1 1 0 1\n");

    let id = run(&["classify", "--q", "2", "--d", "3", "--matrix", "1 0 0;0 1 0;0 0 1"]);
    assert_eq!(id.status.code(), Some(0));
    assert_eq!(stdout(&id), "none\n");
}

#[test]
fn tables_for_gf2_are_pinned() {
    let out = run(&["tables", "--q", "2", "--max-e", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = "\
1 2 1 1 1 -
2 2 3 1 3 3^1:B
3 2 7 7 7 7^1:LB
4 2 5 1 5 5^1:B
5 2 31 31 31 31^1:LB
6 2 1 1 1 -
7 2 127 127 127 127^1:LB
8 2 17 17 17 17^1:LB
";
    assert_eq!(stdout(&out), golden);
}

#[test]
fn gen_file_feeds_oracle_with_singer_check() {
    let path = temp_path("gl32.grp");
    let gen = run(&[
        "gen", "--case", "linear", "--d", "3", "--q", "2", "--level", "delta",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));

    let out = run(&["oracle", "--file", path.to_str().unwrap(), "--singer-u", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = "\
order 168
ppd e=2 count=56 large=0 basic=56
ppd e=3 count=48 large=48 basic=48
singer u=3 ok=true
";
    assert_eq!(stdout(&out), golden);
    std::fs::remove_file(path).ok();
}

#[test]
fn estimate_is_deterministic_and_merges_jobs() {
    let path = temp_path("sl32.grp");
    run(&["gen", "--case", "linear", "--d", "3", "--q", "2", "--out", path.to_str().unwrap()]);

    let one = run(&[
        "estimate", "--file", path.to_str().unwrap(), "--samples", "200", "--seed", "9",
    ]);
    assert_eq!(one.status.code(), Some(0));
    let golden = "\
samples 200 seed 9 jobs 1
e=2 count=70 fraction=0.350000
e=3 count=61 fraction=0.305000
none count=69 fraction=0.345000
";
    assert_eq!(stdout(&one), golden);

    let four = run(&[
        "estimate", "--file", path.to_str().unwrap(), "--samples", "200", "--seed", "9",
        "--jobs", "4",
    ]);
    let four_again = run(&[
        "estimate", "--file", path.to_str().unwrap(), "--samples", "200", "--seed", "9",
        "--jobs", "4",
    ]);
    assert_eq!(stdout(&four), stdout(&four_again));
    let counts: u64 = stdout(&four)
        .lines()
        .skip(1)
        .map(|l| {
            let c = l.split(' ').nth(1).unwrap();
            c.strip_prefix("count=").unwrap().parse::<u64>().unwrap()
        })
        .sum();
    assert_eq!(counts, 200);
    std::fs::remove_file(path).ok();
}

#[test]
fn recognize_exit_codes_follow_the_verdict() {
    // CONTAINS_OMEGA -> 0, with the transcript on stdout.
    let sl82 = temp_path("sl82.grp");
    run(&["gen", "--case", "linear", "--d", "8", "--q", "2", "--out", sl82.to_str().unwrap()]);
    let pos = run(&[
        "recognize", "--file", sl82.to_str().unwrap(), "--epsilon", "1/10", "--seed", "5",
    ]);
    assert_eq!(pos.status.code(), Some(0));
    let text = stdout(&pos);
    assert!(text.starts_with("precondition irreducible"));
    assert!(text.contains("plan d=8 q=2 case=linear epsilon=1/10 allowed=5,7,8 n1=15 n2=2:10 n3=29"));
    assert!(text.ends_with("verdict CONTAINS_OMEGA epsilon=1/10 seed=5\n"));
    std::fs::remove_file(sl82).ok();

    // UNSUPPORTED_DIMENSION -> 2.
    let sp63 = temp_path("sp63.grp");
    run(&["gen", "--case", "sp", "--d", "6", "--q", "3", "--out", sp63.to_str().unwrap()]);
    let unsupported = run(&[
        "recognize", "--file", sp63.to_str().unwrap(), "--epsilon", "1/10", "--seed", "1",
    ]);
    assert_eq!(unsupported.status.code(), Some(2));
    assert!(stdout(&unsupported).ends_with("verdict UNSUPPORTED_DIMENSION epsilon=1/10 seed=1\n"));
    std::fs::remove_file(sp63).ok();

    // LIKELY_NOT_OMEGA -> 1, on a subfield subgroup written out by hand:
    // GL(8,2) with GF(4) scalars adjoined, inside GL(8,4).
    let f4 = Field::new(2, 2).unwrap();
    let f2 = Field::new(2, 1).unwrap();
    let case2 = GroupCase::new(Family::Linear, 8, f2).unwrap();
    let mut gens: Vec<MatrixQ> = Vec::new();
    for g in ppdrec::groups::standard_generators(&case2, ppdrec::groups::Level::Omega).unwrap() {
        let mut lift = MatrixQ::zero(&f4, 8);
        for i in 0..8 {
            for j in 0..8 {
                lift.set(i, j, g.get(i, j));
            }
        }
        gens.push(lift);
    }
    gens.push(MatrixQ::scalar(&f4, 8, f4.generator()));
    let group = GroupInput::new(
        GroupCase::new(Family::Linear, 8, f4).unwrap(),
        FormData::None,
        gens,
    )
    .unwrap();
    let sub = temp_path("subfield.grp");
    std::fs::write(&sub, write_group(&group)).unwrap();
    let neg = run(&[
        "recognize", "--file", sub.to_str().unwrap(), "--epsilon", "1/10", "--seed", "1",
    ]);
    assert_eq!(neg.status.code(), Some(1));
    assert!(stdout(&neg).ends_with("verdict LIKELY_NOT_OMEGA epsilon=1/10 seed=1\n"));
    std::fs::remove_file(sub).ok();
}

#[test]
fn errors_use_exit_codes_two_and_three() {
    // Usage error: unknown flag.
    let usage = run(&["classify", "--bogus"]);
    assert_eq!(usage.status.code(), Some(3));
    assert!(!usage.stderr.is_empty());

    // Run error: malformed group file.
    let path = temp_path("broken.grp");
    std::fs::write(&path, "ppdgrp 1\n2 1 3 2 linear\n\nmat\n1 1\n").unwrap();
    let broken = run(&["recognize", "--file", path.to_str().unwrap(), "--epsilon", "1/10", "--seed", "0"]);
    assert_eq!(broken.status.code(), Some(2));
    let err = String::from_utf8(broken.stderr).unwrap();
    assert!(err.starts_with("error: "), "stderr was {err:?}");
    std::fs::remove_file(path).ok();

    // Run error: unknown case token.
    let case = run(&["gen", "--case", "foo", "--d", "3", "--q", "2"]);
    assert_eq!(case.status.code(), Some(2));

    // Bad epsilon text.
    let sl32 = temp_path("sl32b.grp");
    run(&["gen", "--case", "linear", "--d", "3", "--q", "2", "--out", sl32.to_str().unwrap()]);
    let eps = run(&["recognize", "--file", sl32.to_str().unwrap(), "--epsilon", "0.1", "--seed", "0"]);
    assert_eq!(eps.status.code(), Some(2));
    std::fs::remove_file(sl32).ok();
}
