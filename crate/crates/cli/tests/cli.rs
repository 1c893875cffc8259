use std::path::Path;
use std::process::{Command, Output};

use circdeg_cli::{cache_append, cache_read, ResultEnvelope};
use serde_json::json;

fn circdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circdeg"))
        .args(args)
        .env_remove("CIRCDEG_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn deg_examples() {
    let o = circdeg(&["deg", "13:1,3,4,9,10,12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "degree"), "2");
    assert_eq!(field(&stdout(&o), "fix_order"), "6");

    let o = circdeg(&["deg", "5:1,4", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "degree"), "2");
    assert_eq!(field(&stdout(&o), "oracle"), "2 (agree)");

    let o = circdeg(&["deg", "6:1,2,3,4,5"]);
    assert_eq!(field(&stdout(&o), "integral"), "yes (6|1,2,3)");

    for bad in ["6:0,1", "6:1,2", "banana", "6:1,5,5"] {
        assert_eq!(circdeg(&["deg", bad]).status.code(), Some(2), "{bad}");
    }
}

#[test]
fn table_examples() {
    let o = circdeg(&["table", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("d,C(d),p_d,strict,witness\n"));
    assert!(!text.contains('\r'));

    assert_eq!(circdeg(&["table", "0"]).status.code(), Some(2));
    assert_eq!(circdeg(&["table", "100", "--check"]).status.code(), Some(0));

    let json = stdout(&circdeg(&["table", "5", "--format", "json"]));
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 5);
    assert_eq!(rows[3]["c_of_d"], json!(15));
    assert_eq!(rows[3]["witness"].as_str().unwrap().split(':').next(), Some("15"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = circdeg(&["table", "10", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&circdeg(&["table", "10"])));
}

#[test]
fn table_output_is_byte_stable() {
    let a = circdeg(&["table", "40"]).stdout;
    let b = circdeg(&["table", "40"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn census_examples() {
    let o = circdeg(&["census", "11", "5", "--witnesses"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "count"), "6");
    assert_eq!(text.lines().filter(|l| l.starts_with("11:")).count(), 6);

    assert_eq!(field(&stdout(&circdeg(&["census", "19", "3"])), "count"), "2");
    assert_eq!(field(&stdout(&circdeg(&["census", "17", "4"])), "count"), "3");

    assert_eq!(circdeg(&["census", "13", "4"]).status.code(), Some(2));
    assert_eq!(circdeg(&["census", "15", "2"]).status.code(), Some(2));

    let o = circdeg(&["census", "21", "6", "--bounds"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "kind"), "lower_bound");
    assert_eq!(field(&stdout(&o), "count"), "4");

    let o = circdeg(&["census", "7", "3", "--naive"]);
    assert_eq!(field(&stdout(&o), "count"), "2");
    assert_eq!(circdeg(&["census", "40", "2", "--naive"]).status.code(), Some(2));
}

#[test]
fn integral_examples() {
    let o = circdeg(&["integral", "6", "--brute"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "count"), "5");
    assert_eq!(field(&stdout(&o), "brute_force"), "5");
    assert_eq!(field(&stdout(&circdeg(&["integral", "13"])), "count"), "1");
    assert_eq!(field(&stdout(&circdeg(&["integral", "8"])), "count"), "4");
    assert_eq!(circdeg(&["integral", "0"]).status.code(), Some(2));
}

#[test]
fn json_envelope() {
    let o = circdeg(&["--json", "deg", "19:1,2,3,5,7,8,11,12,14,16,17,18"]);
    let env: ResultEnvelope = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(env.command, "deg");
    assert_eq!(env.output["degree"], json!(3));
    assert_eq!(env.library_version, circdeg::VERSION);
}

fn envelope(tag: u64) -> ResultEnvelope {
    ResultEnvelope::new(
        "integral",
        [("n".to_string(), json!(tag))].into_iter().collect(),
        json!({ "count": tag, "witnesses": ["13:1,3,4,9,10,12"] }),
    )
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    assert!(cache_read(&path).unwrap().is_empty());
    let a = envelope(1);
    let b = envelope(2);
    cache_append(&path, &a).unwrap();
    cache_append(&path, &b).unwrap();
    assert_eq!(cache_read(&path).unwrap(), vec![a, b]);
}

#[test]
fn cache_tolerates_unknown_fields_and_corrupt_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let good = envelope(7);
    let mut with_extra = serde_json::to_value(&good).unwrap();
    with_extra["extra"] = json!("ignored");
    let content = format!(
        "{}\n{{not json\n\n{}\n",
        serde_json::to_string(&with_extra).unwrap(),
        serde_json::to_string(&good).unwrap()
    );
    std::fs::write(&path, content).unwrap();
    assert_eq!(cache_read(&path).unwrap(), vec![good.clone(), good]);
}

#[test]
fn cache_unwritable_path_reports_context() {
    let err = cache_append(Path::new("/nonexistent-dir/x/cache.jsonl"), &envelope(1)).unwrap_err();
    assert!(err.to_string().contains("/nonexistent-dir/x/cache.jsonl"));
}

#[test]
fn commands_append_to_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let status = Command::new(env!("CARGO_BIN_EXE_circdeg"))
        .args(["census", "13", "2", "--witnesses"])
        .env("CIRCDEG_CACHE", &path)
        .status()
        .unwrap();
    assert!(status.success());
    let status = Command::new(env!("CARGO_BIN_EXE_circdeg"))
        .args(["--cache", path.to_str().unwrap(), "integral", "12"])
        .status()
        .unwrap();
    assert!(status.success());
    let entries = cache_read(&path).unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0].command, "census");
    assert_eq!(entries[0].output["witnesses"], json!(["13:1,3,4,9,10,12"]));
    assert_eq!(entries[1].output["count"], json!(circdeg::integral::count_connected_integral(12).unwrap() as u64));
}

#[test]
fn concurrent_appends_keep_whole_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let per_process = 40;
    let children: Vec<_> = (0..2)
        .map(|_| {
            let script = format!(
                "for i in $(seq 1 {per_process}); do \"{}\" integral $i >/dev/null || exit 1; done",
                env!("CARGO_BIN_EXE_circdeg")
            );
            Command::new("sh")
                .args(["-c", &script])
                .env("CIRCDEG_CACHE", &path)
                .spawn()
                .unwrap()
        })
        .collect();
    for mut c in children {
        assert!(c.wait().unwrap().success());
    }
    let raw = std::fs::read_to_string(&path).unwrap();
    assert_eq!(raw.lines().count(), 2 * per_process);
    let entries = cache_read(&path).unwrap();
    assert_eq!(entries.len(), 2 * per_process);
    for n in 1..=per_process as u64 {
        assert_eq!(entries.iter().filter(|e| e.inputs["n"] == json!(n)).count(), 2);
    }
}

#[test]
fn verify_fault_injection_fails() {
    let o = circdeg(&["verify", "fast", "--inject-fault", "totient"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("FAIL table-d-le-30"));
    assert!(err.contains("failing properties"));
}
