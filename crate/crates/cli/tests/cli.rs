use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use unitrace_cli::formats::{group_hash, GroupSpec};
use unitrace_cli::{CliError, EXIT_BUDGET, EXIT_USAGE, EXIT_VIOLATION};

fn data(rel: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    root.join(rel).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_unitrace")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, stderr)
}

fn ok(args: &[&str]) -> Value {
    let (code, json, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    json["result"].clone()
}

#[test]
fn group_info_examples() {
    let q8 = ok(&["group-info", "--group", &data("groups/q8.json")]);
    assert_eq!(q8["bna"], false);
    assert_eq!(q8["G0_order"], 2);
    assert_eq!(q8["essential_characters"], 4);
    assert_eq!(q8["dim_U"], 4);
    assert_eq!(ok(&["group-info", "--group", &data("groups/s3.json")])["bna"], true);
    assert_eq!(ok(&["group-info", "--group", &data("groups/c1.json")])["dim_U"], 0);
    let c4 = ok(&["group-info", "--group", &data("groups/c4.json")]);
    assert_eq!(c4["order"], 4);
    assert_eq!(c4["G2_order"], 2);
}

#[test]
fn count_examples() {
    let r = ok(&["count", "--group", &data("groups/q8.json"), "--field", "gf2"]);
    assert_eq!(r["N"], 64);
    assert_eq!(r["c"], 2);
    assert_eq!(r["method"], "dfs-linear-tail");
    assert_eq!(ok(&["count", "--group", &data("groups/c2.json"), "--field", "gf2^3/0xb"])["N"], 8);
    let (code, out, err) = run(&["count", "--group", &data("groups/q8.json"), "--field", "gf2^3", "--budget", "1000"]);
    assert_eq!(code, EXIT_BUDGET);
    assert_eq!(out, Value::Null);
    let err: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(err["error"]["kind"], "budget");
    assert_eq!(err["error"]["details"]["required_nodes"], 299_593);
}

#[test]
fn components_examples() {
    let bound = |g: &str| ok(&["components", "--group", &data(g), "--field", "gf2,gf2^2"])["estimate"]["component_order_bound"].clone();
    assert_eq!(bound("groups/q8.json"), 4);
    assert_eq!(bound("groups/d4.json"), 1);
    assert_eq!(bound("groups/c8.json"), 2);
    let s3hat = ok(&["components", "--group", &data("groups/s3hat.json"), "--field", "gf2"]);
    assert_eq!(s3hat["reports"][0]["N"], 384);
    assert!(s3hat["estimate"]["unavailable"].is_string());
}

#[test]
fn herm_examples() {
    let classes = ok(&["herm", "classes", "--group", &data("groups/q8.json"), "--field", "gf2"]);
    assert_eq!(classes["class_sizes"], serde_json::json!([2, 2, 2, 2]));
    assert_eq!(classes["agree"], true);
    assert_eq!(classes["invariant"]["agreements"], 64);

    let e = ok(&["herm", "equiv", "--lhs", &data("hermitians/q8_one.json"), "--rhs", &data("hermitians/q8_one_plus_u.json")]);
    assert_eq!(e["equivalent"], false);
    assert_eq!(e["search"]["status"], "inequivalent (exhaustive)");
    assert_eq!(e["agree"], true);
    let same = ok(&["herm", "equiv", "--lhs", &data("hermitians/q8_one_plus_u.json"), "--rhs", &data("hermitians/q8_one_plus_u.json"), "--assume-eg-trivial"]);
    assert_eq!(same["equivalent"], true);
    assert_eq!(same["search"]["status"], "witness");
    assert_eq!(same["invariant"]["evidence"]["kind"], "user-assertion");

    let inv = ok(&["herm", "invariants", "--in", &data("hermitians/q8_one_plus_u.json")]);
    let chars = inv["characters"].as_array().unwrap();
    assert_eq!(chars.len(), 3);
    // u lies outside exactly two of the three index-2 kernels
    assert_eq!(chars.iter().filter(|c| c["class"] == 1).count(), 2);
}

#[test]
fn trace_form_examples() {
    let bna = ok(&["trace-form", "--alg", &data("algebras/c4_s.json"), "bna"]);
    assert_eq!(bna["exists"], false);
    assert_eq!(bna["reason"], "image of Frobenius ∉ G₀");
    let bna = ok(&["trace-form", "--alg", &data("algebras/c2_c.json"), "bna"]);
    assert_eq!(bna["exists"], true);
    assert!(bna["generator"].is_array());
    let iso = ok(&["trace-form", "--lhs", &data("algebras/c4_s2.json"), "--rhs", &data("algebras/split.json"), "iso"]);
    assert_eq!(iso["isomorphic"], true);
    assert_eq!(iso["witness"]["status"], "found");
    assert_eq!(iso["method"], "criterion+witness");
    let c = ok(&["trace-form", "--alg", &data("algebras/c4_s.json"), "construct732"]);
    assert_eq!(c["gram_row"], serde_json::json!([1, 1, 0, 1]));
    assert_eq!(c["z"], 1);
    assert_eq!(c["recheck"], true);
    let g = ok(&["trace-form", "--alg", &data("algebras/c4_s.json"), "gram"]);
    assert_eq!(g["properties"]["all_pass"], true);
    assert_eq!(ok(&["trace-form", "--alg", &data("algebras/c4_s.json"), "invariants"])["coincide"], true);
}

#[test]
fn verify_suites() {
    for s in ["dimension", "smoothness", "coincidence"] {
        assert_eq!(ok(&["verify", s])["passed"], true);
    }
    let t = ok(&["verify", "transform", "--samples", "50", "--seed", "9"]);
    assert!(t["suites"][0]["checks"].as_u64().unwrap() > 0);
    let (code, _, _) = run(&["verify", "nonsense"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn reports_carry_provenance() {
    let (_, json, _) = run(&["count", "--group", &data("groups/c4.json"), "--field", "gf2^2"]);
    assert_eq!(json["tool"], "unitrace");
    assert_eq!(json["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(json["inputs"][0]["group"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(json["inputs"][0]["field"]["spec"], "gf2^2/0x7");
    assert!(json["budget"]["nodes"].is_u64());
    assert!(json.get("elapsed_ms").is_none());
    let (_, timed, _) = run(&["count", "--group", &data("groups/c4.json"), "--field", "gf2^2", "--timing"]);
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "2", "5"] {
        let path = dir.path().join(format!("out{jobs}.json"));
        let p = path.to_string_lossy().into_owned();
        for args in [
            vec!["count", "--group", &data("groups/q8.json"), "--field", "gf2^2", "--prefix-depth", "3"],
            vec!["herm", "classes", "--group", &data("groups/c8.json"), "--field", "gf2"],
        ] {
            let mut a = args.clone();
            a.extend(["--jobs", jobs, "--out", &p]);
            assert_eq!(run(&a).0, 0);
            outputs.push((args[0].to_string(), std::fs::read(&path).unwrap()));
        }
    }
    for (name, bytes) in &outputs[2..] {
        let first = outputs.iter().find(|(n, _)| n == name).unwrap();
        assert_eq!(&first.1, bytes, "{name}");
    }
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["count", "--group", "/nonexistent.json", "--field", "gf2"]).0, EXIT_USAGE);
    assert_eq!(run(&["count", "--group", &data("groups/q8.json"), "--field", "gf3"]).0, EXIT_USAGE);
    assert_eq!(run(&["count", "--group", &data("groups/q8.json"), "--field", "gf2", "--jobs", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["trace-form", "--alg", &data("algebras/c4_s.json"), "iso"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn exit_code_mapping() {
    let violation = CliError::Core(unitrace_core::Error::TheoremViolation("x".into()));
    assert_eq!(violation.exit_code(), EXIT_VIOLATION);
    let budget = CliError::Core(unitrace_core::Error::BudgetExceeded {
        what: "x",
        required: 2,
        budget: 1,
    });
    assert_eq!(budget.exit_code(), EXIT_BUDGET);
    assert_eq!(CliError::Input("x".into()).exit_code(), EXIT_USAGE);
}

fn cycles_strategy() -> impl Strategy<Value = Vec<Vec<Vec<usize>>>> {
    // up to two generators on 5 points, each a random permutation written as cycles
    prop::collection::vec(Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(), 1..=2).prop_map(|perms| {
        perms
            .into_iter()
            .map(|p| {
                let mut seen = [false; 5];
                let mut cycles = Vec::new();
                for s in 0..5 {
                    if seen[s] {
                        continue;
                    }
                    let mut c = vec![s];
                    seen[s] = true;
                    let mut x = p[s];
                    while x != s {
                        seen[x] = true;
                        c.push(x);
                        x = p[x];
                    }
                    cycles.push(c);
                }
                cycles
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_groups_round_trip_through_tables(gens in cycles_strategy()) {
        let spec = GroupSpec {
            name: Some("P".into()),
            order: None,
            table: None,
            degree: Some(5),
            generators: Some(gens),
            catalog: None,
            element_names: None,
        };
        // S5 has order 120; skip closures beyond the supported order
        let Ok(g) = spec.build() else { return Ok(()); };
        let again = GroupSpec {
            name: Some("P".into()),
            order: Some(g.order()),
            table: Some(g.table_rows()),
            degree: None,
            generators: None,
            catalog: None,
            element_names: None,
        }
        .build()
        .unwrap();
        prop_assert_eq!(group_hash(&g), group_hash(&again));
        prop_assert_eq!(g.unitary_dim(), again.unitary_dim());
        prop_assert_eq!(2 * (g.unitary_dim() + 1), g.order() + g.involutions().len());
        prop_assert!(g.order() % g.g0_index() == 0 && g.g0_index().is_power_of_two());
    }
}
