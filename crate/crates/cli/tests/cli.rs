use std::path::Path;
use std::process::{Command, Output};

fn unital(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unital")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Moves the first block of class 1 into class 0 and the first block of
/// class 0 into class 1.
fn swap_first_blocks(text: &str) -> String {
    let mut lines: Vec<&str> = text.lines().collect();
    let c0 = lines.iter().position(|l| *l == "class 0:").unwrap() + 1;
    let c1 = lines.iter().position(|l| *l == "class 1:").unwrap() + 1;
    lines.swap(c0, c1);
    lines.join("\n") + "\n"
}

#[test]
fn field_and_group_info() {
    let dir = tempfile::tempdir().unwrap();
    let o = unital(&["field", "info", "--p", "3", "--e", "2"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("q=9 p=3 e=2"));
    let o = unital(&["group", "info", "--q", "4"], dir.path());
    assert!(stdout(&o).contains("order=60"));
    assert!(stdout(&o).contains("short blocks: 75"));
}

#[test]
fn corrupted_parallelism_reports_meeting_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let o = unital(&["para", "gen", "--q", "4", "--kind", "flat", "-o", "flat.para"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(code(&unital(&["para", "verify", "flat.para"], dir.path())), 0);
    let text = std::fs::read_to_string(dir.path().join("flat.para")).unwrap();
    std::fs::write(dir.path().join("bad.para"), swap_first_blocks(&text)).unwrap();
    let o = unital(&["para", "verify", "bad.para"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("meet in point"), "{}", stdout(&o));
}

#[test]
fn close_verify_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&unital(&["unital", "search", "--q", "4", "--out", "u"], p)), 0);
    assert_eq!(code(&unital(&["para", "gen", "--q", "4", "--kind", "natural", "-o", "nat.para"], p)), 0);
    assert_eq!(code(&unital(&["para", "gen", "--q", "4", "--kind", "flat", "-o", "flat.para"], p)), 0);
    assert_eq!(code(&unital(&["close", "u/type-1.unital", "nat.para", "-o", "a.blocks"], p)), 0);
    assert_eq!(code(&unital(&["close", "u/type-1.unital", "flat.para", "-o", "b.blocks"], p)), 0);
    let o = unital(&["design", "verify", "a.blocks", "--n", "4"], p);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("v=65 b=208"));
    let o = unital(&["iso", "blockfix", "a.blocks", "--block", "last"], p);
    assert!(stdout(&o).contains("fixed: true"));
    assert_eq!(code(&unital(&["iso", "cmp", "a.blocks", "a.blocks"], p)), 0);
    let o = unital(&["iso", "cmp", "a.blocks", "b.blocks"], p);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("isomorphic: false"));
    let o = unital(&["trans", "report", "u/type-1.unital", "nat.para"], p);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("translation_center=true").count(), 5);
}

#[test]
fn design_verify_rejects_a_broken_design() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.blocks"), "#format 1\nv=9 b=2\n0 1 2\n0 1 3\n").unwrap();
    let o = unital(&["design", "verify", "x.blocks", "--n", "2"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("violation"));
}

#[test]
fn repro_counts_order_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = unital(&["repro", "counts", "--q", "4"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("parallelisms: 182 PASS"));
}

#[test]
fn repro_table2() {
    let dir = tempfile::tempdir().unwrap();
    let o = unital(&["repro", "table2"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("PASS").count(), 24);
}

#[test]
fn exit_codes_for_usage_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&unital(&["para", "gen", "--q", "4", "--kind", "odd"], p)), 2);
    assert_eq!(code(&unital(&["para", "verify", "missing.para"], p)), 2);
    assert_eq!(code(&unital(&["no-such-command"], p)), 2);
    std::fs::write(p.join("junk.para"), "q=4\n").unwrap();
    assert_eq!(code(&unital(&["para", "verify", "junk.para"], p)), 2);
    assert_eq!(code(&unital(&["para", "enum", "--q", "4", "--budget", "10"], p)), 3);
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_unital"))
            .args(["repro", "table1"])
            .env("UNITAL_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    assert_eq!(run("1"), run("3"));
}
