use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_theta-doubler"))
        .env("THETA_DOUBLER_CACHE", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

#[test]
fn basis_writes_then_reads_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["basis", "--p", "5", "--N", "23", "--k", "5", "--chi", "23:11"];
    let first = run(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let a = json(&first);
    assert_eq!(a["schema_version"], 1);
    assert_eq!(a["result"]["dim"], 9);
    assert_eq!(a["provenance"]["cache_writes"].as_array().unwrap().len(), 1);
    let second = json(&run(dir.path(), &args));
    assert_eq!(second["provenance"]["cache_hits"].as_array().unwrap().len(), 1);
    assert_eq!(second["result"], a["result"]);
}

#[test]
fn damaged_cache_entry_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["basis", "--p", "7", "--N", "1", "--k", "12"];
    run(dir.path(), &args);
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, b"TDBC garbage").unwrap();
    let o = run(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["result"]["dim"], 2);
    assert_eq!(r["provenance"]["cache_hits"].as_array().unwrap().len(), 0);
}

#[test]
fn field_degree_is_raised_on_demand() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["hecke", "--p", "5", "--N", "23", "--k", "5", "--chi", "23:11", "--primes", "2", "--decompose", "3"],
    );
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["provenance"]["r_raised_from"], 1);
    assert_eq!(r["result"]["space"]["r"], 3);
    let dims: u64 = r["result"]["components"].as_array().unwrap().iter().map(|c| c["dim"].as_u64().unwrap()).sum();
    assert_eq!(dims, 9);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["basis", "--p", "5"],
        vec!["basis", "--p", "2", "--N", "23", "--k", "5"],
        vec!["basis", "--p", "5", "--N", "25", "--k", "4"],
        vec!["basis", "--p", "5", "--N", "23", "--k", "5", "--chi", "nonsense"],
        vec!["hecke", "--p", "5", "--N", "23", "--k", "4", "--primes", "9"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(dir.path(), &args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn eisenstein_component_needs_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let refused = run(dir.path(), &["doubling", "--p", "5", "--D", "-47"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("EisensteinComponent"));
    let allowed = run(dir.path(), &["doubling", "--p", "5", "--D", "-47", "--allow-eisenstein"]);
    assert_eq!(allowed.status.code(), Some(0));
    assert_eq!(json(&allowed)["result"]["count"]["verdict"], true);
}

#[test]
fn weight_one_report_at_23() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["weightone", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["result"]["dim"], 1);
    // q − q² − q³ + q⁶ + ... reduced mod 7
    let b: Vec<&str> =
        r["result"]["basis"][0].as_array().unwrap().iter().take(7).map(|x| x.as_str().unwrap()).collect();
    assert_eq!(b, ["0", "1", "6", "6", "0", "0", "1"]);
}

#[test]
fn nonlift_without_candidates_is_negative() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["nonlift", "--p", "5", "--limit", "100"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(json(&o)["result"]["certified_ell"], serde_json::Value::Null);
    let sieve_only = run(dir.path(), &["nonlift", "--p", "5", "--budget", "0"]);
    assert_eq!(sieve_only.status.code(), Some(0));
}

#[test]
fn primes_report_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("primes.json");
    let o = run(dir.path(), &["primes", "--p", "5", "--count", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let ells: Vec<u64> =
        r["result"]["candidates"].as_array().unwrap().iter().map(|c| c["ell"].as_u64().unwrap()).collect();
    assert_eq!(ells, [101, 211, 271]);
    assert_eq!(r["result"]["candidates"][0]["status"], "candidate");
}
