use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn maglab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maglab"));
    cmd.env_clear().args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = maglab(args, &[]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn assert_valid(schema_file: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

const SQUARE: &str = r#"{"vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}"#;

#[test]
fn one_point_space_has_magnitude_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "pt.json", r#"{"points": [[0.25, -1.0]]}"#);
    let v = json(&["mag", "--input", p(&f)]);
    assert_eq!(v["magnitude"], 1.0);
    assert_valid("magnitude.schema.json", &v);
}

#[test]
fn two_points_at_ln3_have_magnitude_three_halves() {
    let dir = TempDir::new().unwrap();
    let d = 3f64.ln();
    let f = write(&dir, "two.json", &format!(r#"{{"n": 2, "d": [[0, {d}], [{d}, 0]]}}"#));
    let v = json(&["mag", "--input", p(&f)]);
    assert!((v["magnitude"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert_valid("magnitude.schema.json", &v);

    let f = write(&dir, "two.csv", &format!("# two points\n0,{d}\n{d},0\n"));
    let w = json(&["mag", "--input", p(&f)]);
    assert_eq!(v, w);
}

#[test]
fn point_clouds_honor_the_metric_flag() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c.json", r#"{"points": [[0, 0], [1, 1]], "metric": "l2"}"#);
    let l2 = json(&["mag", "--input", p(&f)])["magnitude"].as_f64().unwrap();
    let l1 = json(&["mag", "--input", p(&f), "--metric", "l1"])["magnitude"].as_f64().unwrap();
    assert!((l2 - 2.0 / (1.0 + (-(2f64).sqrt()).exp())).abs() < 1e-12);
    assert!((l1 - 2.0 / (1.0 + (-2f64).exp())).abs() < 1e-12);
}

#[test]
fn duplicate_points_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "dup.json", r#"{"points": [[1, 2], [0, 0], [1, 2]]}"#);
    let out = maglab(&["mag", "--input", p(&f)], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coincide"));
}

#[test]
fn non_positive_definite_spaces_exit_with_code_two() {
    // K_{3,2} path metric scaled by ln(2)/2: sides {0,1,2} and {3,4}
    let dir = TempDir::new().unwrap();
    let t = 2f64.ln() / 2.0;
    let side = |i: usize| usize::from(i >= 3);
    let rows: Vec<String> = (0..5)
        .map(|i| {
            let row: Vec<String> = (0..5)
                .map(|j| {
                    let d = if i == j { 0.0 } else if side(i) == side(j) { 2.0 } else { 1.0 };
                    (t * d).to_string()
                })
                .collect();
            row.join(",")
        })
        .collect();
    let f = write(&dir, "k32.csv", &rows.join("\n"));
    let out = maglab(&["mag", "--input", p(&f)], &[]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_input_exits_with_code_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", r#"{"vertices": [[0, 0], [1]]}"#);
    assert_eq!(maglab(&["ivol", "--input", p(&f)], &[]).status.code(), Some(1));
    let f = write(&dir, "worse.json", "{not json");
    assert_eq!(maglab(&["convex-mag", "--input", p(&f)], &[]).status.code(), Some(1));
    assert_eq!(maglab(&["mag"], &[]).status.code(), Some(1));
    assert_eq!(maglab(&["check", "--tol", "-1"], &[]).status.code(), Some(1));
    let f = write(&dir, "asym.csv", "0,1\n2,0\n");
    assert_eq!(maglab(&["mag", "--input", p(&f)], &[]).status.code(), Some(1));
    let f = write(&dir, "tri.csv", "0,1,5\n1,0,1\n5,1,0\n");
    assert_eq!(maglab(&["mag", "--input", p(&f)], &[]).status.code(), Some(0));
    assert_eq!(maglab(&["mag", "--check-triangle", "--input", p(&f)], &[]).status.code(), Some(1));
}

#[test]
fn square_and_point_intrinsic_volumes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sq.json", SQUARE);
    let v = json(&["ivol", "--input", p(&f)]);
    assert_eq!(v["V"], serde_json::json!([1.0, 2.0, 1.0]));
    assert_eq!(v["exact"], true);
    assert_valid("intrinsic_volumes.schema.json", &v);

    let f = write(&dir, "pt.json", r#"{"vertices": [[0.5, 0.5, 0.5]]}"#);
    let v = json(&["ivol", "--input", p(&f)]);
    assert_eq!(v["V"][0], 1.0);
    assert!(v["V"].as_array().unwrap()[1..].iter().all(|x| x == 0.0));
}

fn skewed_polytope(n: usize) -> String {
    let verts: Vec<String> = (0..=n)
        .map(|i| {
            let coords: Vec<String> = (0..n)
                .map(|j| {
                    let x = if i == j + 1 { 1.0 } else { 0.0 } + 0.01 * ((i * 7 + j * 3) % 5) as f64;
                    x.to_string()
                })
                .collect();
            format!("[{}]", coords.join(","))
        })
        .collect();
    format!(r#"{{"vertices": [{}]}}"#, verts.join(","))
}

#[test]
fn dimensions_above_the_cap_exit_with_code_three() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "big.json", &skewed_polytope(13));
    let out = maglab(&["ivol", "--input", p(&f)], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(maglab(&["ivol", "--cap", "4", "--input", p(&f)], &[]).status.code(), Some(3));

    let v = json(&["ivol", "--cap", "4", "--mc-samples", "20", "--input", p(&f)]);
    assert_eq!(v["method"], "monte_carlo");
    assert_eq!(v["exact"], false);
    assert_valid("intrinsic_volumes.schema.json", &v);

    let sides = vec!["0.5"; 13].join(",");
    let cube_vertices: Vec<String> = (0..1u32 << 13)
        .map(|m| {
            let c: Vec<&str> = (0..13).map(|j| if m & (1 << j) != 0 { "0.5" } else { "0" }).collect();
            format!("[{}]", c.join(","))
        })
        .collect();
    let f = write(&dir, "cube.json", &format!(r#"{{"vertices": [{}]}}"#, cube_vertices.join(",")));
    let v = json(&["convex-mag", "--input", p(&f)]);
    let expected = 1.25f64.powi(13);
    assert!((v["value"].as_f64().unwrap() - expected).abs() < 1e-10 * expected, "{sides}");
}

#[test]
fn convex_magnitude_of_square_segment_and_point() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sq.json", SQUARE);
    let v = json(&["convex-mag", "--input", p(&f)]);
    assert_eq!(v["value"], 2.25);
    assert_eq!(v["exact"], true);
    assert_valid("convex_magnitude.schema.json", &v);

    let f = write(&dir, "seg.json", r#"{"vertices": [[0, 0], [0.75, 0]]}"#);
    let v = json(&["convex-mag", "--input", p(&f)]);
    assert!((v["value"].as_f64().unwrap() - 1.375).abs() < 1e-12);
    assert_eq!(v["exact"], false);

    let f = write(&dir, "pt.json", r#"{"vertices": [[3, 1]]}"#);
    assert_eq!(json(&["convex-mag", "--input", p(&f)])["value"], 1.0);
}

#[test]
fn sweep_writes_csv_and_a_json_twin() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sq.json", SQUARE);
    let out = dir.path().join("tables/sweep.csv");
    ok_stdout(&["sweep", "--input", p(&f), "--t-list", "1,0.1,0.01", "--output", p(&out)]);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("param,n_points,sample_magnitude,formula_value,upper_bound,flag\n"));
    let formula = column(&csv, "formula_value");
    for (got, want) in formula.iter().zip([1.5f64.powi(2), 1.05f64.powi(2), 1.005f64.powi(2)]) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    let twin: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("tables/sweep.json")).unwrap())
        .unwrap();
    assert_valid("sweep_table.schema.json", &twin);
    assert_eq!(twin["rows"].as_array().unwrap().len(), 3);
    assert_eq!(twin["rows"][2]["formula_value"].as_f64().unwrap(), formula[2]);

    let point = write(&dir, "pt.json", r#"{"vertices": [[1, 1]]}"#);
    let csv = ok_stdout(&["sweep", "--input", p(&point), "--t-list", "1,0.5"]);
    for name in ["sample_magnitude", "formula_value", "upper_bound"] {
        assert!(column(&csv, name).iter().all(|&x| x == 1.0));
    }
}

#[test]
fn diverge_reports_harmonic_half_sums() {
    let csv = ok_stdout(&["diverge", "--spec", "harmonic", "--n-list", "10,100"]);
    let half = column(&csv, "half_sum");
    assert!((half[0] - 1.4645).abs() < 1e-4);
    assert!((half[1] - 2.5937).abs() < 1e-4);
    let formula = column(&csv, "formula_value");
    assert!(formula[1] > formula[0] && formula[0] >= half[0] && formula[1] >= half[1]);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("div.csv");
    ok_stdout(&["diverge", "--spec", "geometric:0.5", "--n-list", "1,5,30", "--output", p(&out)]);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("div.json")).unwrap()).unwrap();
    assert_valid("divergence_report.schema.json", &report);
    assert_eq!(report["summability"], "convergent");
    for row in report["table"]["rows"].as_array().unwrap() {
        assert!(row["formula_value"].as_f64().unwrap() <= 0.5f64.exp());
    }
}

#[test]
fn sequence_files_are_accepted() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "seq.json", r#"{"kind": "explicit", "values": [1.0, 0.5]}"#);
    let csv = ok_stdout(&["diverge", "--spec", p(&f), "--n-list", "2"]);
    assert!((column(&csv, "formula_value")[0] - 1.8125).abs() < 1e-12);
    assert_eq!(maglab(&["diverge", "--spec", p(&f), "--n-list", "3"], &[]).status.code(), Some(1));
    assert_eq!(maglab(&["diverge", "--spec", "power:x"], &[]).status.code(), Some(1));
}

#[test]
fn check_with_seed_zero_is_clean() {
    let v = json(&["check", "--seed", "0", "--count", "100"]);
    assert_valid("suite_report.schema.json", &v);
    assert_eq!(v["polytopes"], 100);
    assert!(v["violations"].as_array().unwrap().is_empty());
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["failed"], 0);
        assert!(c["passed"].as_u64().unwrap() > 0);
    }
}

#[test]
fn config_file_env_and_flags_layer_in_order() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "cfg.json", r#"{"seed": 3, "budget": 10, "count": 7, "spec": {"kind": "power", "p": 0.5}}"#);
    let base = json(&["check", "--config", p(&f), "--print-config"]);
    assert_valid("run_config.schema.json", &base);
    assert_eq!((base["seed"].as_u64(), base["budget"].as_u64(), base["count"].as_u64()), (Some(3), Some(10), Some(7)));
    assert_eq!(base["command"], "check");

    let out = maglab(
        &["check", "--config", p(&f), "--budget", "20", "--print-config"],
        &[("MAGLAB_SEED", "4"), ("MAGLAB_BUDGET", "15")],
    );
    let layered: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(layered["seed"], 4);
    assert_eq!(layered["budget"], 20);
    assert_eq!(layered["count"], 7);
    assert_eq!(layered["spec"]["kind"], "power");

    let env_cfg = maglab(&["sweep", "--print-config"], &[("MAGLAB_CONFIG", p(&f)), ("MAGLAB_T_LIST", "0.5,0.25")]);
    let v: Value = serde_json::from_slice(&env_cfg.stdout).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["t_list"], serde_json::json!([0.5, 0.25]));

    // the printed configuration is itself a valid config file
    let again = write(&dir, "again.json", &serde_json::to_string(&layered).unwrap());
    let reread = json(&["check", "--config", p(&again), "--print-config"]);
    assert_eq!(reread, layered);

    let bad = write(&dir, "bad.json", r#"{"seeed": 1}"#);
    assert_eq!(maglab(&["check", "--config", p(&bad)], &[]).status.code(), Some(1));
}

#[test]
fn outputs_are_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "sq.json", SQUARE);
    for args in [
        vec!["sweep", "--input", p(&f), "--budget", "64"],
        vec!["diverge", "--n-list", "5,50", "--interior-samples", "10"],
        vec!["check", "--count", "20", "--seed", "9"],
    ] {
        let one = ok_stdout(&[args.as_slice(), &["--threads", "1"]].concat());
        let four = ok_stdout(&[args.as_slice(), &["--threads", "4"]].concat());
        assert_eq!(one, four, "{args:?}");
    }
}
