use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lineorder"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(job: &Path, extra: &[&str]) -> (i32, String) {
    let out = bin().arg("run").arg("--input").arg(job).args(extra).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn verify(cert: &Path) -> (i32, String) {
    let out = bin().arg("verify").arg(cert).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const Z: &str = "[group]\nbackend = \"free_abelian\"\nrank = 1\n";

#[test]
fn integer_cone_exits_zero() {
    let dir = TempDir::new().unwrap();
    let job = write(dir.path(), "z.toml", &format!("task = \"cone-search\"\nradius = 3\n{Z}"));
    let cert = dir.path().join("z.json");
    let (code, _) = run(&job, &["--out", cert.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["outcome"], "found");
    let members: Vec<i64> = v["result"]["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["vector"][0].as_i64().unwrap())
        .collect();
    assert_eq!(members, vec![1, 2, 3]);
    assert_eq!(verify(&cert).0, 0);
}

#[test]
fn cyclic_four_exits_two_with_replayable_trace() {
    let dir = TempDir::new().unwrap();
    let job = write(
        dir.path(),
        "c4.json",
        r#"{"task": "cone-search", "radius": 4, "group": {"backend": "named", "name": "C4"}}"#,
    );
    let cert = dir.path().join("c4.cert.json");
    let (code, _) = run(&job, &["--out", cert.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["outcome"], "impossible_on_window");
    assert!(v["result"]["refutation"].is_object());
    assert_eq!(verify(&cert).0, 0);
}

#[test]
fn klein_bottle_bi_witness_exits_two_with_crossing() {
    let dir = TempDir::new().unwrap();
    let job = write(
        dir.path(),
        "k.toml",
        "task = \"witness\"\n[group]\nbackend = \"semidirect\"\ntwist = \"minus\"\n",
    );
    let cert = dir.path().join("k.json");
    let plot = dir.path().join("k.csv");
    let (code, _) = run(
        &job,
        &["--mode", "bi", "--out", cert.to_str().unwrap(), "--plot", plot.to_str().unwrap()],
    );
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let pair = v["result"]["verdict"]["crossing"].as_array().unwrap();
    assert_eq!(pair[0]["label"], pair[1]["label"]);
    assert_eq!(verify(&cert).0, 0);
    let csv = std::fs::read_to_string(&plot).unwrap();
    let marked = csv.lines().filter(|l| l.starts_with("edge,") && l.ends_with(",1")).count();
    assert_eq!(marked, 2);
}

#[test]
fn flipped_height_is_rejected_with_named_check() {
    let dir = TempDir::new().unwrap();
    let job = write(dir.path(), "z.toml", &format!("task = \"witness\"\n{Z}"));
    let cert = dir.path().join("w.json");
    assert_eq!(run(&job, &["--out", cert.to_str().unwrap()]).0, 0);
    assert_eq!(verify(&cert).0, 0);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let h = &mut v["result"]["placement"]["heights"][2]["num"];
    let n: i64 = h.as_str().unwrap().parse().unwrap();
    *h = Value::String((n ^ 1).to_string());
    std::fs::write(&cert, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let (code, err) = verify(&cert);
    assert_ne!(code, 0);
    assert!(err.contains("rejected by "), "{err}");
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = TempDir::new().unwrap();
    let job = write(dir.path(), "bad.toml", &format!("task = \"cone-search\"\nradus = 3\n{Z}"));
    let (code, err) = run(&job, &[]);
    assert_eq!(code, 1);
    assert!(err.contains("radus"), "{err}");

    let job = write(dir.path(), "cap.toml", "task = \"cone-search\"\nradius = 8\n[group]\nbackend = \"free\"\nrank = 2\n");
    let (code, err) = run(&job, &["--max-ball", "100"]);
    assert_eq!(code, 1);
    assert!(err.contains("cap"), "{err}");

    let junk = write(dir.path(), "junk.json", "{\"format\": \"lineorder-certificate/1\"}");
    assert_eq!(verify(&junk).0, 1);
}

#[test]
fn exhausted_search_exits_three() {
    let dir = TempDir::new().unwrap();
    let job = write(
        dir.path(),
        "k.toml",
        "task = \"cone-search\"\nradius = 3\nmax_nodes = 1\n[group]\nbackend = \"named\"\nname = \"F2\"\n",
    );
    let cert = dir.path().join("k.json");
    let (code, _) = run(&job, &["--out", cert.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(verify(&cert).0, 0);
}

#[test]
fn stdout_certificate_matches_file_and_flags_override() {
    let dir = TempDir::new().unwrap();
    let job = write(dir.path(), "z.toml", &format!("task = \"embed\"\n{Z}"));
    let out = bin()
        .args(["run", "--input"])
        .arg(&job)
        .args(["--task", "witness", "--radius", "3", "--seed-enumeration", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["task"], "witness");
    assert_eq!(v["result"]["graph"]["vertices"], 7);
    let enumeration: Vec<u64> = v["result"]["placement"]["enumeration"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_ne!(enumeration, (0..7).collect::<Vec<_>>());

    let cert = dir.path().join("again.json");
    run(
        &job,
        &["--task", "witness", "--radius", "3", "--seed-enumeration", "5", "--out", cert.to_str().unwrap()],
    );
    assert_eq!(std::fs::read(&cert).unwrap(), out.stdout);
}
