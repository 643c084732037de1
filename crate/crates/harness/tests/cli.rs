use std::process::Command;

fn qperc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qperc"))
        .args(args)
        .env("QPERC_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn scratch_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qperc-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn rows(csv: &[u8]) -> Vec<Vec<String>> {
    let text = String::from_utf8(csv.to_vec()).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn census_of_the_empty_graph() {
    let out = qperc(&["census", "--d", "8", "--p", "0", "--trials", "1"]);
    assert!(out.status.success());
    let rows = rows(&out.stdout);
    let fraction = rows.iter().find(|r| r[6] == "giant_fraction").unwrap();
    assert_eq!(fraction[7].parse::<f64>().unwrap(), 2f64.powi(-8));
    assert_eq!(fraction[9], "2");
    assert_eq!(fraction[8], "");
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["expansion", "--d", "8", "--trials", "3", "--seed", "9"];
    assert_eq!(qperc(&args).stdout, qperc(&args).stdout);
}

#[test]
fn flags_override_the_config_file() {
    let dir = scratch_dir("cfg");
    let cfg = dir.join("exp.cfg");
    std::fs::write(&cfg, "# census at d=7\nd = 7\np = 0.5\ntrials = 4\n").unwrap();
    let out = qperc(&["census", "--config", cfg.to_str().unwrap(), "--trials", "2"]);
    assert!(out.status.success());
    let rows = rows(&out.stdout);
    assert!(rows.iter().all(|r| r[1] == "7" && r[2] == "0.5"));
    let trials: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[4].as_str()).collect();
    assert_eq!(trials.len(), 2);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = scratch_dir("bad");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "d = 7\n\nq2 = 3\n").unwrap();
    let out = qperc(&["census", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.cfg:3") && err.contains("q2"), "{err}");
    assert_eq!(qperc(&["census", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(qperc(&["census", "--d", "40"]).status.code(), Some(2));
}

#[test]
fn exceeding_the_exact_cap_exits_with_four() {
    let out = qperc(&["expansion", "--d", "8", "--cap-exact", "100000"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_file_plot_script_and_summary() {
    let dir = scratch_dir("out");
    let csv = dir.join("census.csv");
    let out = qperc(&["census", "--d", "9", "--trials", "5", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let script = std::fs::read_to_string(dir.join("census.gp")).unwrap();
    assert!(script.contains("plot 'census.csv'"));
    let json_path = dir.join("summary.json");
    let out = qperc(&["summarize", csv.to_str().unwrap(), "--out", json_path.to_str().unwrap()]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
    let giant = summary
        .as_array()
        .unwrap()
        .iter()
        .find(|g| g["metric"] == "giant_size")
        .unwrap();
    assert_eq!(giant["count"], 5);
    assert!(giant["ci95_low"].as_f64().unwrap() <= giant["mean"].as_f64().unwrap());
}

#[test]
fn sweep_over_dimensions() {
    let out = qperc(&["sweep", "--d", "10,12,14", "--epsilon", "1", "--trials", "20"]);
    assert!(out.status.success());
    let rows = rows(&out.stdout);
    let giants: Vec<(u32, f64)> = rows
        .iter()
        .filter(|r| r[6] == "giant_size")
        .map(|r| (r[1].parse().unwrap(), r[7].parse().unwrap()))
        .collect();
    assert_eq!(giants.len(), 60);
    let mean = |d: u32| giants.iter().filter(|g| g.0 == d).map(|g| g.1).sum::<f64>() / 20.0;
    assert!(mean(10) < mean(12) && mean(12) < mean(14));
}
