use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gerechte"))
        .args(args)
        .output()
        .unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn realize_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let square = dir.path().join("square.txt");
    let mixed = fixture("mixed_2x6.txt");
    let out = run(&[
        "realize",
        "--input",
        mixed.to_str().unwrap(),
        "--output",
        square.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("method: mixed"));
    let out = run(&[
        "verify",
        "--framework",
        mixed.to_str().unwrap(),
        "--square",
        square.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
}

#[test]
fn realize_writes_square_to_stdout() {
    let tree = fixture("tree_12.txt");
    let out = run(&["realize", "--input", tree.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(text(&out.stderr).contains("method: tree"));
    assert_eq!(text(&out.stdout).lines().count(), 12);
}

#[test]
fn realize_is_repeatable() {
    let columns = fixture("columns_12.txt");
    let a = run(&[
        "realize",
        "--input",
        columns.to_str().unwrap(),
        "--seed",
        "4",
    ]);
    let b = run(&[
        "realize",
        "--input",
        columns.to_str().unwrap(),
        "--seed",
        "4",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn uniform_on_a_tree_is_unsupported() {
    let tree = fixture("tree_12.txt");
    let out = run(&[
        "realize",
        "--input",
        tree.to_str().unwrap(),
        "--method",
        "uniform",
    ]);
    assert_eq!(code(&out), 3);
    assert!(text(&out.stderr).contains("does not apply"));
}

#[test]
fn tiny_budget_is_reported_as_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bricks.txt");
    std::fs::write(
        &f,
        "6\n1 1 1 2 2 2\n1 1 1 2 2 2\n3 3 4 4 5 5\n3 3 4 4 5 5\n3 3 4 4 5 5\n6 6 6 6 6 6\n",
    )
    .unwrap();
    let out = run(&["realize", "--input", f.to_str().unwrap(), "--budget", "3"]);
    assert_eq!(code(&out), 3);
    let out = run(&["realize", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(text(&out.stderr).contains("method: brute"));
}

#[test]
fn verify_reports_region_violations() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("boxes.txt");
    let sq = dir.path().join("cyclic.txt");
    std::fs::write(&f, "4\n1 1 2 2\n1 1 2 2\n3 3 4 4\n3 3 4 4\n").unwrap();
    std::fs::write(&sq, "1 2 3 4\n2 3 4 1\n3 4 1 2\n4 1 2 3\n").unwrap();
    let out = run(&[
        "verify",
        "--framework",
        f.to_str().unwrap(),
        "--square",
        sq.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(text(&out.stderr).contains("region"));
}

#[test]
fn verify_rejects_mismatched_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("small.txt");
    std::fs::write(&sq, "1 2\n2 1\n").unwrap();
    let mixed = fixture("mixed_2x6.txt");
    let out = run(&[
        "verify",
        "--framework",
        mixed.to_str().unwrap(),
        "--square",
        sq.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "2\n1 1\n1 x\n").unwrap();
    assert_eq!(code(&run(&["classify", "--input", f.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["realize", "--input", "/nonexistent/file"])), 2);
}

#[test]
fn classify_columns_example() {
    let out = run(&[
        "classify",
        "--input",
        fixture("columns_12.txt").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(text(&out.stdout), "columns tree\n");
}

#[test]
fn reduce_matches_reduced_fixture() {
    let out = run(&[
        "reduce",
        "--input",
        fixture("mixed_2x6.txt").to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let expected = std::fs::read_to_string(fixture("mixed_2x6_reduced.txt")).unwrap();
    assert_eq!(text(&out.stdout), expected);
    let out = run(&[
        "reduce",
        "--input",
        fixture("mixed_2x6.txt").to_str().unwrap(),
        "--k",
        "5",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn generate_is_seeded_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("f.txt");
    let args = [
        "generate", "--kind", "mixed", "--s", "4", "--t", "6", "--seed", "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(&grid, &a.stdout).unwrap();
    let out = run(&["classify", "--input", grid.to_str().unwrap()]);
    assert!(text(&out.stdout).contains("mixed"));

    let rects = run(&[
        "generate", "--kind", "tree", "--n", "12", "--format", "rects",
    ]);
    assert!(text(&rects.stdout).starts_with("rects 12\n"));
    assert_eq!(code(&run(&["generate", "--kind", "columns"])), 2);
}

#[test]
fn census_of_order_four() {
    let out = run(&["census", "--n", "4"]);
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("n\tframeworks\trealized\tclass_counts"));
    let row: Vec<&str> = lines.next().unwrap().split('\t').collect();
    assert_eq!(&row[..3], &["4", "9", "9"]);
    assert!(text(&out.stderr).contains("all realizable: yes"));
    assert_eq!(code(&run(&["census", "--n", "7"])), 2);
}

#[test]
fn order_fifty_four_realizes() {
    let big = fixture("mixed_6x9.txt");
    let dir = tempfile::tempdir().unwrap();
    let square = dir.path().join("square.txt");
    let start = std::time::Instant::now();
    let out = run(&[
        "realize",
        "--input",
        big.to_str().unwrap(),
        "--output",
        square.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", text(&out.stderr));
    assert!(start.elapsed().as_secs() < 10);
    assert!(text(&out.stderr).contains("method: mixed"));
    let out = run(&[
        "verify",
        "--framework",
        big.to_str().unwrap(),
        "--square",
        square.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
}
