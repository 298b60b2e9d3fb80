//! CLI goldens: each invocation's stdout and exit code.

use arbor_cli::run;
use serde_json::Value;

fn arbor(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("arbor").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_lines(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).expect("one JSON value per line")).collect()
}

#[test]
fn decompose_359_json() {
    let (code, out, _) = arbor("decompose 359 --json");
    assert_eq!(code, 0);
    assert_eq!(out, "{\"n\":3,\"N\":5,\"h\":5}\n");
}

#[test]
fn mc_row_three() {
    assert_eq!(arbor("mc 5 1,3,1"), (0, "369\n".into(), String::new()));
    let (_, out, _) = arbor("--json mc 5 1,3,1");
    let v = &json_lines(&out)[0];
    assert_eq!(v["b"], serde_json::json!([3, 6, 2]));
    assert_eq!(v["closed_form"], 369);
    assert_eq!(v["descends"], true);
}

#[test]
fn diophantine_window_60() {
    let (code, out, _) = arbor("cycles diophantine --bmax 60 --nmax 60");
    assert_eq!(code, 0);
    let solutions: Vec<&str> = out.lines().filter(|l| l.starts_with("b=")).collect();
    assert_eq!(solutions, vec!["b=1 n=1 k=1 D=1 T=2"]);

    let (_, out, _) = arbor("--json cycles diophantine --bmax 40 --nmax 40");
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["positive_denominators"], 1140);
}

#[test]
fn step_and_trajectory() {
    assert_eq!(arbor("step 15").1, "23\n");
    assert_eq!(arbor("step 27 --variant classic").1, "82\n");
    assert_eq!(arbor("step 31 --times 5").1, "242\n");
    let (code, out, _) = arbor("--json trajectory 27");
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!((v["steps"].as_u64(), v["peak"].as_u64()), (Some(70), Some(4616)));
    let (code, _, _) = arbor("trajectory 27 --step-limit 5");
    assert_eq!(code, 2);
}

#[test]
fn decompose_modes() {
    assert_eq!(arbor("--json decompose 404").1, "{\"N\":4,\"h\":5}\n");
    assert_eq!(arbor("--json decompose 4").1, "{\"parent_capable\":false}\n");
    assert_eq!(
        arbor("--json decompose 842 --as classify").1,
        "{\"class\":\"M5\",\"a\":71,\"b\":1,\"parent_capable\":true}\n"
    );
    assert_eq!(arbor("--json decompose 21 --as classify").1, "{\"class\":\"M3\",\"a\":4}\n");
    let (code, _, err) = arbor("decompose 8 --as odd");
    assert_eq!(code, 1);
    assert!(err.contains("expected an odd integer"));
}

#[test]
fn subtrees() {
    let (_, out, _) = arbor("--json subtree even 80");
    let v = &json_lines(&out)[0];
    assert_eq!(v["children"], serde_json::json!([53, 35, 23, 15]));
    assert_eq!(v["chain_ok"], true);
    let (_, out, _) = arbor("--json subtree odd 21 --count 3");
    assert_eq!(json_lines(&out)[0]["productive"], serde_json::json!([false, false, false]));
    assert_eq!(arbor("subtree even 4").0, 1);
}

#[test]
fn grandchild_block() {
    let (_, out, _) = arbor("--json block 1 --count 4");
    let values: Vec<u64> = json_lines(&out).iter().map(|v| v["value"].as_u64().unwrap()).collect();
    assert_eq!(values, vec![1, 5, 3, 21, 85]);
    assert_eq!(arbor("block 21").0, 1);
}

#[test]
fn tree_outputs() {
    let (code, out, err) = arbor("tree --value-bound 2 --format dot");
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph collatz {\n"));
    assert!(out.contains("n1 -> n2 [style=dashed];"));
    assert!(err.contains("nodes=2 edges=2"));

    let (_, a, _) = arbor("tree --value-bound 500 --format json");
    let (_, b, _) = arbor("tree --value-bound 500 --format json");
    assert_eq!(a, b);
    let graph: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(graph["nodes"][0]["value"], 1);

    let (code, out, _) = arbor("--json tree --coverage 100");
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["coverage"]["missing"], serde_json::json!([]));
    assert_eq!(v["value_bound"], 4616);

    let (code, out, _) = arbor("--json tree --coverage 100 --value-bound 100");
    assert_eq!(code, 2);
    let v = &json_lines(&out)[0];
    assert_eq!(v["coverage"]["precondition_met"], false);
    assert!(v["coverage"]["missing"].as_array().unwrap().contains(&Value::from(27)));
}

#[test]
fn tree_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("arbor-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tree.dot");
    let (code, out, _) = arbor(&format!("tree --value-bound 100 --format dot --output {}", path.display()));
    assert_eq!(code, 0);
    assert!(out.starts_with("nodes="));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.contains("n8 [label=\"8\", fillcolor=black, fontcolor=white];"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_reports() {
    let (code, out, _) = arbor("--json verify 27 27 --shards 1");
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["max_steps"], serde_json::json!({"value": 27, "steps": 70}));
    assert_eq!(v["max_peak"], serde_json::json!({"value": 27, "peak": 4616}));
    assert_eq!(v["all_converged"], true);
    let (code, _, _) = arbor("verify 1 100 --step-limit 10");
    assert_eq!(code, 2);
}

#[test]
fn empirical_scan() {
    let (code, out, _) = arbor("--json cycles empirical --limit 10000 --step-limit 100000");
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["cycles"], 0);
}

#[test]
fn bigint_switch() {
    let max = u128::MAX.to_string();
    let (code, _, err) = arbor(&format!("step {max}"));
    assert_eq!(code, 1);
    assert!(err.contains("--bigint"));
    let (code, out, _) = arbor(&format!("--bigint step {max}"));
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "510423550381407695195061911147652317183");
    let (code, out, _) = arbor("--bigint cycles diophantine --bmax 70 --nmax 70");
    assert_eq!(code, 0);
    assert!(out.starts_with("b=1 n=1 k=1 D=1 T=2\n"));
    assert_eq!(arbor("cycles diophantine --bmax 70 --nmax 70").0, 1);
}

#[test]
fn usage_errors() {
    assert_eq!(arbor("frobnicate").0, 1);
    assert_eq!(arbor("step banana").0, 1);
    assert_eq!(arbor("mc 5 1,x").0, 1);
    assert_eq!(arbor("mc 21 1").0, 1);
    assert_eq!(arbor("--help").0, 0);
}

#[test]
fn json_is_stable_across_runs() {
    for args in ["--json trajectory 97", "--json subtree even 359", "--json cycles diophantine --bmax 20 --nmax 20"] {
        assert_eq!(arbor(args), arbor(args));
    }
}
