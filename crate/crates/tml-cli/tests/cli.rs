use std::process::{Command, Output};

fn tml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tml"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn check_duplex_witness_model() {
    let out = tml(&["check", "--model", "ex_2to11", "--formula", "[2]p & ~[][]p"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("s: true"), "stdout: {}", stdout(&out));
}

#[test]
fn check_majority_box() {
    let out = tml(&["check", "--model", "ex_sim", "--formula", "[]p"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("s: true"));
    // per-world verdicts for every world; the box is vacuous at dead ends
    assert!(text.contains("t_neg: true"));
    assert!(text.contains("t_pos: true"));
}

#[test]
fn check_det_balanced_case() {
    let out = tml(&[
        "check",
        "--model",
        "ex_det(1,1)",
        "--formula",
        "~[2]~p & ~[2]p",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn check_false_formula_exits_two() {
    let out = tml(&["check", "--model", "ex_11to2", "--formula", "[2]p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("s: false"));
}

#[test]
fn check_single_world_flag() {
    let out = tml(&[
        "check",
        "--model",
        "ex_sim",
        "--formula",
        "p",
        "--world",
        "t_pos",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "t_pos: true");
}

#[test]
fn explain_prints_rank_traces() {
    let out = tml(&[
        "check",
        "--model",
        "ex_fix",
        "--formula",
        "[2]p",
        "--explain",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[2]-trace at s"), "missing trace: {text}");
    assert!(text.contains("rank+=2 rank-=1"), "unexpected ranks: {text}");
    assert!(
        text.contains("Sum h+ = aleph_0^2"),
        "missing ordinal sums: {text}"
    );
}

#[test]
fn parse_reports_degree_and_rejects_big_boxes() {
    let out = tml(&["parse", "--formula", "[2]p & ~[][]p"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("degree: 2"));

    let out = tml(&["parse", "--formula", "[3]p"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("out of scope"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn examples_list_and_emit_loadable_documents() {
    let out = tml(&["examples"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ex_fix"));

    let out = tml(&["examples", "ex_fix"]);
    assert_eq!(out.status.code(), Some(0));
    let m = tml::model::KripkeModel::from_document(&stdout(&out)).unwrap();
    let f = tml::logic::Formula::parse("[2]p").unwrap();
    assert!(tml::checker::eval(&m, "s", &f).unwrap());

    let out = tml(&["examples", "ex_nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unravel_emits_tree_document() {
    let out = tml(&["unravel", "--model", "ex_fin", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let m = tml::model::KripkeModel::from_document(&stdout(&out)).unwrap();
    assert_eq!(m.world_count(), 7);
}

#[test]
fn compress_emits_document_and_plan() {
    let out = tml(&[
        "compress",
        "--model",
        "ex_fix",
        "--degree",
        "2",
        "--index",
        "6",
        "--explain",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let m = tml::model::KripkeModel::from_document(&stdout(&out)).unwrap();
    let f = tml::logic::Formula::parse("[2]p & [][]p").unwrap();
    let root = m.world_id(m.root().unwrap());
    assert!(tml::checker::eval(&m, root, &f).unwrap());
    assert!(stderr(&out).contains("alpha="), "plan report missing");

    // below the floor: clean error
    let out = tml(&[
        "compress", "--model", "ex_fix", "--degree", "2", "--index", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("floor"));
}

#[test]
fn equiv_distinguishes_the_witness_pair() {
    let out = tml(&[
        "equiv", "--model", "ex_2to11", "--model", "ex_11to2", "--degree", "2", "--index", "0",
        "--index", "0", "--bound", "6",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("not equivalent"));

    let out = tml(&[
        "equiv", "--model", "ex_sim", "--model", "ex_sim", "--degree", "1", "--index", "0",
        "--index", "0", "--bound", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("equivalent up to bound"));
}

#[test]
fn selftest_reports_oracle_agreement() {
    let out = tml(&["selftest", "ordinal", "--seed", "5", "--instances", "60"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("level-0 oracle: 600/600 agree"),
        "got: {text}"
    );
    assert!(text.contains("selftest: PASS"));

    // identical seeds give byte-identical reports
    let again = tml(&["selftest", "ordinal", "--seed", "5", "--instances", "60"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn missing_model_file_is_an_error() {
    let out = tml(&["check", "--model", "/no/such/file.json", "--formula", "p"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("file"));
}
