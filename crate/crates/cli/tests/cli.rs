use std::fs;
use std::process::{Command, Output};

fn distill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distill"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn distill_writes_csv_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = distill(&[
        "distill",
        "--p-in",
        "0.05",
        "--p-in",
        "0.1",
        "--shots",
        "2000",
        "--seed",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "protocol,d,p_circuit,p_in,shots,accepted,errors,p_out,ci_lo,ci_hi,discard_ratio,seed"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("7to1,3,0.0,0.05,2000,"));
    let plot = fs::read_to_string(dir.path().join("run.plot.csv")).unwrap();
    assert!(plot.starts_with("p_in,analytic,d3\n"));
}

#[test]
fn fixed_seed_output_is_byte_identical() {
    let args = [
        "distill",
        "--p-in",
        "0.1",
        "--p-circuit",
        "0.002",
        "--shots",
        "3000",
        "--seed",
        "9",
    ];
    assert_eq!(distill(&args).stdout, distill(&args).stdout);
}

#[test]
fn json_embeds_config() {
    let o = distill(&[
        "logical",
        "--protocol",
        "15to1",
        "--p-in",
        "0.1",
        "--shots",
        "500",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["protocol"], "FifteenToOne");
    assert_eq!(v["results"][0]["protocol"], "15to1");
    assert_eq!(v["results"][0]["shots"], 500);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# sweep\nprotocol = 15to1\nshots = 700\np_in = 0.01, 0.2\nseed = 3\n",
    )
    .unwrap();
    let o = distill(&[
        "logical",
        "--config",
        cfg.to_str().unwrap(),
        "--shots",
        "400",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("15to1,3,0.0,0.01,400,"), "{}", rows[0]);
    assert!(rows[1].ends_with(",3"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "colour = blue\n").unwrap();
    for args in [
        vec!["distill", "--config", cfg.to_str().unwrap()],
        vec!["distill", "--d", "4"],
        vec!["distill", "--p-in", "1.5"],
        vec!["logical", "--protocol", "9to1"],
        vec!["memory", "--shots", "0"],
        vec!["cost", "--nonsense"],
        vec!["distill", "--config", "/nonexistent/file"],
    ] {
        assert_eq!(distill(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn oracle_check_passes() {
    let o = distill(&["oracle", "--protocol", "7to1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("protocol,weight,patterns,accepted,accepted_errors\n"));
    // weight-3 patterns: the seven Hamming codewords are accepted with an error
    assert!(text.contains("7to1,3,35,7,7\n"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn analytic_and_cost_tables() {
    let o = distill(&["analytic", "--p-in", "0.01"]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "7to1");
    assert!((row[2].parse::<f64>().unwrap() - 7.2142e-6).abs() < 1e-9);
    let o = distill(&["cost", "--protocol", "15to1", "--d", "3"]);
    assert_eq!(stdout(&o), "protocol,d,qubit_cycles\n15to1,3,999\n");
}

#[test]
fn subcircuit_reports_both_bases_and_combined() {
    let o = distill(&["subcircuit", "--p-circuit", "0.001", "--shots", "1000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let bases: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(bases, ["X", "Z", "XZ"]);
}
