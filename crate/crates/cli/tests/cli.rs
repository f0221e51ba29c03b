use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn wordsys_env(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wordsys"))
        .args(args)
        .env_remove("WORDSYS_BUDGET")
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn wordsys");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn wordsys(args: &[&str], stdin: &str) -> Run {
    wordsys_env(args, stdin, &[])
}

fn ok(args: &[&str], stdin: &str) -> Run {
    let run = wordsys(args, stdin);
    assert_eq!(run.code, 0, "{args:?} failed: {}", run.stderr);
    run
}

#[test]
fn star_graph_pipeline() {
    let system = ok(&["from-graph", &fixture("star10.json"), "--n", "3"], "");
    let seq = ok(&["seq"], &system.stdout);
    assert_eq!(seq.stdout, "{\"v\":1,\"counts\":[1,11,20,110]}\n");
    let direct = ok(&["graph-seq", &fixture("star10.json"), "--n", "3"], "");
    assert_eq!(direct.stdout, seq.stdout);
}

#[test]
fn csv_report() {
    let run = ok(
        &[
            "series",
            "--d",
            "2",
            "--exclude",
            "[[1,1]]",
            "--n",
            "4",
            "--csv",
        ],
        "",
    );
    assert_eq!(run.stdout, "n,count\n0,1\n1,2\n2,3\n3,5\n4,8\n");
}

#[test]
fn fibonacci_series() {
    let run = ok(
        &["series", "--d", "2", "--exclude", "[[1,1]]", "--n", "6"],
        "",
    );
    assert_eq!(
        run.json()["counts"],
        serde_json::json!([1, 2, 3, 5, 8, 13, 21])
    );
    let from_doc = ok(&["series", &fixture("fibonacci.json"), "--n", "6"], "");
    assert_eq!(from_doc.stdout, run.stdout);
}

#[test]
fn long_series_keeps_every_digit() {
    let run = ok(
        &["series", "--d", "2", "--exclude", "[[1,1]]", "--n", "200"],
        "",
    );
    let last = run
        .stdout
        .trim_end_matches("]}\n")
        .rsplit(',')
        .next()
        .unwrap();
    // F(202), from a two-line Python loop
    assert_eq!(last, "734544867157818093234908902110449296423351");
}

#[test]
fn search_verdicts() {
    let run = ok(&["search", "--target", "3,7,18"], "");
    assert_eq!(run.json()["verdict"], "UNREALIZABLE");
    let run = ok(&["search", "--target", "3,7,17"], "");
    let out = run.json();
    assert_eq!(out["verdict"], "REALIZABLE");
    let witness = serde_json::to_string(&out["witness"]).unwrap();
    let counts = ok(&["seq"], &witness).json();
    assert_eq!(counts["counts"], serde_json::json!([1, 3, 7, 17]));
    assert_eq!(ok(&["validate"], &witness).json()["valid"], true);
}

#[test]
fn search_budget_from_environment() {
    let run = wordsys_env(
        &["search", "--target", "4,16,60,200"],
        "",
        &[("WORDSYS_BUDGET", "3")],
    );
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.json()["verdict"], "BUDGET_EXCEEDED");
    let bad = wordsys_env(
        &["search", "--target", "3,7"],
        "",
        &[("WORDSYS_BUDGET", "lots")],
    );
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("WORDSYS_BUDGET"));
}

#[test]
fn check_and_construct() {
    let run = ok(&["check", "--target", "2,1,2"], "");
    let out = run.json();
    assert_eq!(out["passes"], false);
    assert_eq!(out["violations"][0]["kind"], "submultiplicativity");

    let built = ok(&["construct", "--target", "5,16,27"], "");
    let counts = ok(&["seq"], &built.stdout).json();
    assert_eq!(counts["counts"], serde_json::json!([1, 5, 16, 27]));

    let failed = wordsys(&["construct", "--target", "2,5"], "");
    assert_eq!(failed.code, 1);
    assert!(
        failed.stderr.contains("PreconditionViolated"),
        "{}",
        failed.stderr
    );
}

#[test]
fn max_paths_report() {
    let out = ok(&["max-paths", "--vertices", "3", "--edges", "7"], "").json();
    assert_eq!(out["maximum"], 17);
    let witness = serde_json::to_string(&out["witness"]).unwrap();
    let seq = ok(&["graph-seq", "--n", "3"], &witness).json();
    assert_eq!(seq["counts"][3], 17);
}

#[test]
fn antidictionary_roundtrip() {
    let system = read_fixture("fibonacci_system.json");
    let anti = ok(&["antidict"], &system);
    assert_eq!(anti.stdout, read_fixture("fibonacci.json"));
    let rebuilt = ok(&["from-exclusions", "--n", "4"], &anti.stdout);
    assert_eq!(rebuilt.stdout, system);
}

#[test]
fn reduce_drops_superwords() {
    let doc = r#"{"v":1,"alphabet":2,"words":[[1,1],[0,1,1],[1,0,1]]}"#;
    let out = ok(&["reduce"], doc).json();
    assert_eq!(out["words"], serde_json::json!([[1, 1], [1, 0, 1]]));
}

#[test]
fn cartesian_commands() {
    let cart = fixture("cartesian.json");
    assert_eq!(
        ok(&["seq", &cart], "").json()["counts"],
        serde_json::json!([1, 2, 3])
    );
    let standard = ok(&["standardize", &cart], "").json();
    assert_eq!(
        standard["levels"][2],
        serde_json::json!([[0, 0], [0, 1], [1, 0]])
    );
    // stride 1 is the identity
    let same = ok(&["thin", &cart, "--mode", "stride", "--k", "1"], "");
    assert_eq!(same.stdout, read_fixture("cartesian.json"));
    let overlap = ok(&["thin", &cart, "--mode", "overlap", "--k", "1"], "").json();
    assert_eq!(overlap["horizon"], 1);
    assert_eq!(overlap["levels"][1].as_array().unwrap().len(), 3);
    let too_far = wordsys(&["thin", &cart, "--mode", "overlap", "--k", "2"], "");
    assert_eq!(too_far.code, 1);
    assert!(too_far.stderr.contains("HorizonTooSmall"));
}

#[test]
fn word_system_accepted_where_cartesian_expected() {
    let system = read_fixture("fibonacci_system.json");
    let thinned = ok(&["thin", "--mode", "stride", "--k", "2"], &system).json();
    assert_eq!(thinned["horizon"], 2);
    let seq = ok(&["seq"], &serde_json::to_string(&thinned).unwrap()).json();
    assert_eq!(seq["counts"], serde_json::json!([1, 3, 8]));
}

#[test]
fn projector_commands() {
    let sym = ok(&["symmetric", "--d", "2", "--n", "2"], "");
    assert_eq!(sym.stdout, read_fixture("symmetric_2_2.json"));
    let extracted = ok(&["extract"], &sym.stdout).json();
    assert_eq!(
        extracted["levels"][2],
        serde_json::json!([[0, 0], [0, 1], [1, 1]])
    );
    let family = ok(&["standard-form", &fixture("twisted.json")], "");
    assert_eq!(ok(&["validate"], &family.stdout).json()["valid"], true);
    let dims = ok(&["extract"], &family.stdout);
    assert_eq!(
        ok(&["seq"], &dims.stdout).json()["counts"],
        serde_json::json!([1, 2, 3])
    );
}

#[test]
fn autocorr_and_compare() {
    let out = ok(&["autocorr", "--word", "[0,1,0]"], "").json();
    assert_eq!(out["autocorrelation"], serde_json::json!([1, 0, 1]));
    let out = ok(
        &[
            "compare", "--d", "2", "--r", "[0,0,0]", "--s", "[0,1,0]", "--n", "8",
        ],
        "",
    )
    .json();
    assert_eq!(out["r_dominates"], true);
    assert_eq!(out["s_dominates"], false);
    let mismatch = wordsys(
        &[
            "compare", "--d", "2", "--r", "[0,0]", "--s", "[0,1,0]", "--n", "3",
        ],
        "",
    );
    assert_eq!(mismatch.code, 1);
    assert!(mismatch.stderr.contains("LengthMismatch"));
}

#[test]
fn recurrence_report() {
    let out = ok(&["recurrence", "--d", "2", "--exclude", "[[1,1]]"], "").json();
    assert_eq!(out["coefficients"], serde_json::json!(["1", "1"]));
    let growth = out["growth"]["value"].as_f64().unwrap();
    assert!((growth - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-6);
}

#[test]
fn validate_agrees_with_library() {
    for name in [
        "fibonacci.json",
        "fibonacci_system.json",
        "star10.json",
        "cartesian.json",
        "symmetric_2_2.json",
        "twisted.json",
        "sequence.json",
    ] {
        let run = ok(&["validate", &fixture(name)], "");
        assert_eq!(run.json()["valid"], true, "{name}");
    }
    let bad = wordsys(&["validate", &fixture("not_closed.json")], "");
    assert_eq!(bad.code, 1);
    let out = bad.json();
    assert_eq!(out["valid"], false);
    assert_eq!(out["error"], "NotClosed");
}

#[test]
fn validate_rejects_broken_documents() {
    let not_injective = r#"{"v":1,"horizon":2,"levels":[["e"],["a"],["x","y"]],"injections":{"1,1":{"x":["a","a"],"y":["a","a"]}}}"#;
    let run = wordsys(&["validate"], not_injective);
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["valid"], false);

    let not_projector = r#"{"v":1,"dim":1,"horizon":1,"projectors":[[["1/2"]]]}"#;
    let run = wordsys(&["validate"], not_projector);
    assert_eq!(run.code, 1);
    assert!(run.json()["message"]
        .as_str()
        .unwrap()
        .contains("idempotent"));

    let not_coisometric = r#"{"v":1,"dims":[1,1],"products":{"1,1":[["1/2"]]}}"#;
    let run = wordsys(&["validate"], not_coisometric);
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["error"], "NotCoisometric");

    let bad_vertex = r#"{"v":1,"vertices":2,"edges":[[0,2]]}"#;
    assert_eq!(
        wordsys(&["validate"], bad_vertex).json()["error"],
        "VertexOutOfRange"
    );
}

#[test]
fn fixtures_roundtrip_byte_for_byte() {
    let cases = [
        (vec!["reduce"], "fibonacci.json"),
        (vec!["from-exclusions", "--n", "4"], "fibonacci.json"),
        (
            vec!["thin", "--mode", "stride", "--k", "1"],
            "cartesian.json",
        ),
        (vec!["seq"], "sequence.json"),
    ];
    for (args, name) in cases {
        let mut args = args.clone();
        let path = fixture(name);
        args.push(&path);
        let first = ok(&args, "");
        let again = ok(&args, "");
        assert_eq!(first.stdout, again.stdout, "{name} is not deterministic");
    }
    assert_eq!(
        ok(&["reduce", &fixture("fibonacci.json")], "").stdout,
        read_fixture("fibonacci.json")
    );
    assert_eq!(
        ok(&["seq", &fixture("sequence.json")], "").stdout,
        read_fixture("sequence.json")
    );
}

#[test]
fn schema_errors_point_at_the_problem() {
    let run = wordsys(
        &["extract"],
        r#"{"v":1,"dim":1,"horizon":1,"projectors":[[["2/4"]]]}"#,
    );
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("SchemaError"), "{}", run.stderr);
    assert!(run.stderr.contains("/projectors/0/0/0"), "{}", run.stderr);

    let run = wordsys(&["seq"], r#"{"alphabet":2,"horizon":0,"levels":[[[]]]}"#);
    assert!(run.stderr.contains("(at /v)"), "{}", run.stderr);

    let run = wordsys(
        &["from-graph", "--n", "2"],
        r#"{"v":1,"alphabet":2,"words":[]}"#,
    );
    assert_eq!(run.code, 1);
    assert!(
        run.stderr.contains("expected a graph document"),
        "{}",
        run.stderr
    );

    let run = wordsys(&["seq"], "not json");
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("invalid JSON"));
}

#[test]
fn unknown_fields_are_ignored_with_a_warning() {
    let run = ok(
        &["reduce"],
        r#"{"v":1,"alphabet":2,"words":[[1,1]],"comment":"hi"}"#,
    );
    assert!(run
        .stderr
        .contains("warning: ignoring unknown field /comment"));
    assert_eq!(run.stdout, read_fixture("fibonacci.json"));
}

#[test]
fn domain_errors_carry_the_error_name() {
    let run = wordsys(&["seq", &fixture("not_closed.json")], "");
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("error[NotClosed]"), "{}", run.stderr);

    let run = wordsys(
        &["series", "--d", "2", "--exclude", "[[2]]", "--n", "3"],
        "",
    );
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("InvalidLetter"));
}

#[test]
fn usage_errors_exit_two() {
    let run = wordsys(&["thin", "--mode", "sideways", "--k", "1"], "");
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--mode"));

    let run = wordsys(&["series", "--d", "2", "--exclude", "[[1,", "--n", "3"], "");
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--exclude"));

    let run = wordsys(&["frobnicate"], "");
    assert_eq!(run.code, 2);

    let run = wordsys(&["search", "--target", "3,x"], "");
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--target"));
}
