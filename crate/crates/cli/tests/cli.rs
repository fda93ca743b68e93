//! End-to-end tests of the `sconv` binary: command output, exit codes, and
//! the machine-readable formats.

use std::io::Write;
use std::process::{Command, Stdio};

use sconv_cli::json::{BijectionJson, ChecksJson, DigraphJson, GammaJson, MaxAcyclicJson};

fn sconv(args: &[&str], stdin: &str) -> (String, String, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sconv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn sconv");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().expect("wait for sconv");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

const BALANCED7: &str =
    "v 1\nv 2\nv 3\nv 4\na a 1 2\na b 2 1\na c 2 3\na d 3 4\na e 4 2\na f 1 4\na g 4 1\n";

#[test]
fn gamma_table_output_on_the_example() {
    let (stdout, stderr, code) = sconv(&["gamma", "--input", &data("balanced7.graph")], "");
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("balanced: true"));
    assert!(stdout.contains("uniform: true"));
    for line in [
        "1    0    0    0    3    2    0    0    0",
        "4    0    0    0    3    2    0    0    0",
    ] {
        assert!(stdout.contains(line), "missing row in:\n{stdout}");
    }
}

#[test]
fn gamma_reads_stdin_and_emits_json() {
    let (stdout, _, code) = sconv(&["gamma", "--format", "json"], BALANCED7);
    assert_eq!(code, 0);
    let parsed: GammaJson = serde_json::from_str(&stdout).unwrap();
    assert_eq!(parsed.vertices, vec!["1", "2", "3", "4"]);
    assert_eq!(parsed.max_k, 7);
    assert_eq!(parsed.gamma[0], vec![0, 0, 0, 3, 2, 0, 0, 0]);
    assert!(parsed.uniform_columns.iter().all(|&u| u));
}

#[test]
fn gamma_csv() {
    let (stdout, _, code) = sconv(&["gamma", "--format", "csv"], BALANCED7);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "vertex,k0,k1,k2,k3,k4,k5,k6,k7");
    assert_eq!(lines.next().unwrap(), "1,0,0,0,3,2,0,0,0");
}

#[test]
fn gamma_warns_on_unbalanced_but_exits_zero() {
    let (stdout, stderr, code) = sconv(&["gamma"], "v 1\nv 2\na x 1 2\n");
    assert_eq!(code, 0);
    assert!(stdout.contains("uniform: false"));
    assert!(stderr.contains("not balanced"));
}

#[test]
fn gamma_empty_digraph() {
    let (stdout, _, code) = sconv(&["gamma"], "");
    assert_eq!(code, 0);
    assert!(stdout.contains("empty digraph"));
}

#[test]
fn parse_error_exits_2_with_line_number() {
    let (_, stderr, code) = sconv(&["gamma"], "v 1\nv 1\n");
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    let (_, stderr, code) = sconv(&["gamma"], "a x 1 2\nv 1\nv 2\n");
    assert_eq!(code, 2);
    assert!(stderr.contains("line 1"));
    assert!(stderr.contains("undeclared vertex"));
}

#[test]
fn missing_file_exits_2() {
    let (_, _, code) = sconv(&["gamma", "--input", "/nonexistent/место.graph"], "");
    assert_eq!(code, 2);
}

#[test]
fn budget_exceeded_exits_3() {
    let (_, stderr, code) = sconv(&["gamma", "--budget", "5"], BALANCED7);
    assert_eq!(code, 3);
    assert!(stderr.contains("budget"));
}

#[test]
fn bijection_golden_json() {
    let (stdout, _, code) = sconv(
        &[
            "bijection",
            "--from",
            "1",
            "--to",
            "2",
            "--k",
            "3",
            "--trace",
            "--format",
            "json",
        ],
        BALANCED7,
    );
    assert_eq!(code, 0);
    let parsed: BijectionJson = serde_json::from_str(&stdout).unwrap();
    assert_eq!(
        (parsed.s.as_str(), parsed.t.as_str(), parsed.k),
        ("1", "2", 3)
    );
    assert_eq!(parsed.pairs.len(), 3);
    let mut image: Vec<Vec<String>> = parsed.pairs.iter().map(|p| p.to.clone()).collect();
    image.sort();
    assert_eq!(
        image,
        vec![
            vec!["a".to_string(), "d".to_string(), "e".to_string()],
            vec!["a".to_string(), "d".to_string(), "g".to_string()],
            vec!["d".to_string(), "e".to_string(), "f".to_string()],
        ]
    );
    // every pair carries its trace
    assert!(parsed.pairs.iter().all(|p| !p.trace.is_empty()));
}

#[test]
fn bijection_identity_when_s_equals_t() {
    let (stdout, _, code) = sconv(
        &["bijection", "--from", "1", "--to", "1", "--k", "3"],
        BALANCED7,
    );
    assert_eq!(code, 0);
    assert!(stdout.contains("{b,d,e} -> {b,d,e}"));
    assert!(stdout.contains("{c,d,g} -> {c,d,g}"));
}

#[test]
fn bijection_empty_when_gamma_is_zero() {
    let (stdout, _, code) = sconv(
        &["bijection", "--from", "1", "--to", "2", "--k", "6"],
        BALANCED7,
    );
    assert_eq!(code, 0);
    assert!(stdout.contains("0 convergence(s)"));
}

#[test]
fn bijection_unknown_vertex_exits_2() {
    let (_, stderr, code) = sconv(
        &["bijection", "--from", "9", "--to", "2", "--k", "3"],
        BALANCED7,
    );
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown vertex"));
}

#[test]
fn bijection_on_unbalanced_input_fails() {
    let (_, stderr, code) = sconv(
        &["bijection", "--from", "1", "--to", "2", "--k", "1"],
        "v 1\nv 2\na x 1 2\na y 1 2\n",
    );
    assert_eq!(code, 1);
    assert!(stderr.contains("not balanced"));
}

#[test]
fn gen_is_deterministic_and_balanced() {
    let (a, _, code_a) = sconv(
        &["gen", "--vertices", "5", "--circuits", "3", "--seed", "7"],
        "",
    );
    let (b, _, code_b) = sconv(
        &["gen", "--vertices", "5", "--circuits", "3", "--seed", "7"],
        "",
    );
    assert_eq!((code_a, code_b), (0, 0));
    assert_eq!(a, b, "same seed must give identical bytes");
    let (stdout, _, code) = sconv(&["gamma"], &a);
    assert_eq!(code, 0);
    assert!(stdout.contains("balanced: true"));
}

#[test]
fn gen_rejects_bad_parameters() {
    let (_, stderr, code) = sconv(&["gen", "--vertices", "0"], "");
    assert_eq!(code, 2);
    assert!(stderr.contains("invalid parameters"));
}

#[test]
fn verify_passes_on_example_and_generated_input() {
    let (stdout, _, code) = sconv(&["verify", "--input", &data("balanced7.graph")], "");
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("result: pass"));
    let (gen, _, _) = sconv(
        &["gen", "--vertices", "4", "--circuits", "2", "--seed", "42"],
        "",
    );
    let (stdout, _, code) = sconv(&["verify"], &gen);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.ends_with("result: pass\n"));
}

#[test]
fn verify_json_shape() {
    let (stdout, _, code) = sconv(&["verify", "--format", "json"], BALANCED7);
    assert_eq!(code, 0);
    let parsed: ChecksJson = serde_json::from_str(&stdout).unwrap();
    assert!(parsed.pass);
    assert!(parsed
        .checks
        .iter()
        .any(|c| c.name == "counting-identities" && c.status == "pass"));
}

#[test]
fn verify_sabotage_fails_with_counterexample() {
    let (stdout, _, code) = sconv(&["verify", "--sabotage-beta"], BALANCED7);
    assert_eq!(code, 1);
    assert!(stdout.contains("[FAIL] crossing-bijection"));
    assert!(
        stdout.contains("digraph:"),
        "counterexample echoes the digraph"
    );
    assert!(stdout.contains("result: fail"));
}

#[test]
fn maxacyclic_golden() {
    let (stdout, _, code) = sconv(&["maxacyclic", "--format", "json"], BALANCED7);
    assert_eq!(code, 0);
    let parsed: MaxAcyclicJson = serde_json::from_str(&stdout).unwrap();
    assert_eq!(parsed.arcs, 7);
    assert_eq!(parsed.max_acyclic_size, 4);
    assert_eq!(parsed.count_at_max, 9);
    assert_eq!(parsed.min_feedback_arc_set_size, 3);
    assert_eq!(parsed.min_feedback_arc_set_count, 9);
}

#[test]
fn crosscheck_digraph_and_undirected() {
    let (stdout, _, code) = sconv(&["crosscheck"], BALANCED7);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("[PASS] matrix-tree"));
    assert!(stdout.contains("[PASS] max-acyclic"));
    let (stdout, _, code) = sconv(&["crosscheck", "--input", &data("k3.ugraph")], "");
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("[PASS] orientations"));
}

#[test]
fn json_round_trips() {
    // digraph: parse(render(x)) == x
    let d = sconv::Multidigraph::parse(BALANCED7).unwrap();
    let dto = DigraphJson::from(&d);
    let text = serde_json::to_string(&dto).unwrap();
    let back: DigraphJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, dto);
    let d2 = sconv::Multidigraph::try_from(&back).unwrap();
    assert_eq!(d, d2);

    // gamma table DTO survives serialization unchanged
    let table = sconv::gamma_table(&d, &sconv::EnumOptions::default()).unwrap();
    let dto = GammaJson::new(&d, &table);
    let text = serde_json::to_string(&dto).unwrap();
    let back: GammaJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back, dto);
}
