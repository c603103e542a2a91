use std::path::Path;
use std::process::{Command, Output};

use secsel::output::CSV_HEADER;

fn secsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secsel")).args(args).output().expect("binary runs")
}

fn secsel_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secsel"))
        .env("RAYON_NUM_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SCENARIO: &str = r#"
[scenario]
n_transmitters = 3
backhaul_reliability = 0.7
dest_snr_db = 10.0
eave_snr_db = [6.0, 9.0, 13.0]
threshold_rate = 1.0
"#;

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn preset_sweep_writes_csv() {
    let o = secsel(&["sweep", "--preset", "fig3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
    // 2 families × 31 points × 6 specs × 1 metric.
    assert_eq!(rows.len(), 2 * 31 * 6);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 8, "{row}");
        assert_eq!(cols[3], "sop");
        assert!(cols[4].parse::<f64>().is_ok() && cols[5].parse::<f64>().is_ok());
        assert!(cols[6].is_empty() && cols[7].is_empty());
    }
}

#[test]
fn csv_is_byte_stable_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        &format!(
            "{SCENARIO}\n[sweep]\nvariable = \"dest_snr_db\"\nstart = 0.0\nstop = 20.0\nstep = 10.0\n\
             outputs = [\"sop\", \"nzsr\", \"esr\", \"asymptote\", \"mc\"]\n\n[mc]\ntrials = 20000\nseed = 42\nbatch_size = 4096\n"
        ),
    );
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4", "4"].iter().enumerate() {
        let out = dir.path().join(format!("out{i}.csv"));
        let o = secsel_threads(threads, &["sweep", "--scenario", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3 * 6 * 3);
    assert!(rows.iter().all(|r| !r.ends_with(",,")));

    let other_seed = dir.path().join("other.csv");
    let o = secsel(&["sweep", "--scenario", &cfg, "--seed", "43", "--out", other_seed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(std::fs::read(other_seed).unwrap(), outputs[0]);
}

#[test]
fn json_output_parses() {
    let o = secsel(&["sweep", "--preset", "fig7", "--format", "json", "--metrics", "esr,nzsr"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let families = doc.as_array().unwrap();
    assert_eq!(families.len(), 2);
    let records = families[0]["records"].as_array().unwrap();
    assert_eq!(records.len(), 31 * 6 * 2);
    assert_eq!(records[0]["metric"], "nzsr");
    assert!(records[0]["mc_mean"].is_null());
}

#[test]
fn empty_range_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        &format!("{SCENARIO}\n[sweep]\nvariable = \"dest_snr_db\"\nstart = 30.0\nstop = 10.0\nstep = 5.0\n"),
    );
    let o = secsel(&["sweep", "--scenario", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty sweep range"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "[scenario]\nn_transmitters = 3\nbackhaul_reliability = \n");
    let o = secsel(&["verify", "--scenario", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let cfg = write_config(dir.path(), "unknown.toml", &format!("{SCENARIO}colour = 1\n"));
    let o = secsel(&["report", "--scenario", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn duplicate_rates_come_with_a_hint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "dup.toml", &SCENARIO.replace("[6.0, 9.0, 13.0]", "[9.0, 9.0]"));
    let o = secsel(&["verify", "--scenario", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("not distinct") && err.contains("jitter_duplicate_rates"), "{err}");

    let jittered = format!("{}jitter_duplicate_rates = true\n", SCENARIO.replace("[6.0, 9.0, 13.0]", "[9.0, 9.0]"));
    let cfg = write_config(dir.path(), "jit.toml", &jittered);
    let o = secsel(&["report", "--scenario", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn too_few_trials_refused() {
    let o = secsel(&["verify", "--trials", "9999"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 10000"), "{}", stderr(&o));
    let o = secsel(&["sweep", "--preset", "fig2", "--trials", "500"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(secsel(&["sweep"]).status.code(), Some(1));
    assert_eq!(secsel(&["sweep", "--preset", "fig1"]).status.code(), Some(1));
    assert_eq!(secsel(&["sweep", "--preset", "fig2", "--metrics", "snr"]).status.code(), Some(1));
    assert_eq!(secsel(&["sweep", "--preset", "fig2", "--scenario", "x.toml"]).status.code(), Some(1));
    assert_eq!(secsel(&["--help"]).status.code(), Some(0));
}

#[test]
fn failing_rows_do_not_abort_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        &format!("{SCENARIO}\n[sweep]\nvariable = \"s\"\nstart = 0.0\nstop = 1.0\nstep = 0.5\nspecs = [\"TTS-BKA\"]\n"),
    );
    let o = secsel(&["sweep", "--scenario", &cfg]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("# error at x = 0, TTS-BKA sop"));
    let rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3 * 3);
    assert!(rows[0].starts_with("0,TTS,BKA,sop,,"));
    assert!(rows[3].starts_with("0.5,TTS,BKA,sop,0."));
}

#[test]
fn n_transmitters_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        &format!(
            "{SCENARIO}\n[sweep]\nvariable = \"n_transmitters\"\nstart = 1\nstop = 6\nstep = 1\n\
             specs = [\"ots-bku\", \"OTS_BKA\"]\noutputs = [\"sop\"]\n"
        ),
    );
    let o = secsel(&["sweep", "--scenario", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let sops: Vec<f64> = text
        .lines()
        .filter(|l| l.contains(",OTS,BKA,"))
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(sops.len(), 6);
    assert!(sops.windows(2).all(|w| w[1] < w[0]), "{sops:?}");
}

#[test]
fn verify_default_scenario_passes() {
    let o = secsel(&["verify", "--trials", "200000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("18/18 checks passed"));
}

#[test]
fn report_lists_all_specs() {
    let o = secsel(&["report", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[4]["esr_method"], "quadrature");
    assert!(rows[4]["esr_slope"].is_null());
    assert!(rows[0]["esr_slope"].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes_by_error_kind() {
    use secsel::CliError;
    use secsel_core::Error;
    assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    assert_eq!(CliError::Core(Error::McConfig("x".into())).exit_code(), 1);
    assert_eq!(CliError::Core(Error::Pole).exit_code(), 2);
    assert_eq!(CliError::PartialSweep(3).exit_code(), 2);
    assert_eq!(CliError::Verification("x".into()).exit_code(), 3);
}
