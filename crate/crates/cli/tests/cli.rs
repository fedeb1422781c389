use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sidsim"))
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(here(&format!("tests/golden/{name}"))).unwrap()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn figures_match_golden() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig4", "fig6"] {
        let out = dir.path().join(format!("{name}.csv"));
        let status = run(&["figure", name, "--out", path(&out)]).status;
        assert_eq!(status.code(), Some(0));
        assert_eq!(
            std::fs::read_to_string(&out).unwrap(),
            golden(&format!("{name}.csv")),
            "{name}"
        );
    }
}

#[test]
fn preset_files_reproduce_figures() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig4", "fig6"] {
        let out = dir.path().join("sweep.csv");
        let file = here(&format!("../core/presets/{name}.toml"));
        let status = run(&["sweep", path(&file), "--out", path(&out)]).status;
        assert_eq!(status.code(), Some(0));
        assert_eq!(
            std::fs::read_to_string(&out).unwrap(),
            golden(&format!("{name}.csv")),
            "{name}"
        );
    }
}

#[test]
fn sweep_matches_golden_and_repeats() {
    let dir = tempfile::tempdir().unwrap();
    let file = here("tests/data/short_sweep.toml");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.csv"));
        assert!(run(&["sweep", path(&file), "--out", path(&out)]).status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(
        String::from_utf8(outputs[0].clone()).unwrap(),
        golden("short_sweep.csv")
    );
}

#[test]
fn simulate_matches_golden() {
    let file = here("tests/data/network.toml");
    assert_eq!(stdout_ok(&["simulate", path(&file)]), golden("network_simulate.csv"));
    // the file's own seed is 11
    assert_eq!(
        stdout_ok(&["--seed", "11", "simulate", path(&file)]),
        golden("network_simulate.csv")
    );
    assert_ne!(
        stdout_ok(&["simulate", path(&file), "--seed", "12"]),
        golden("network_simulate.csv")
    );
    assert_eq!(
        stdout_ok(&["--format", "csv", "simulate", path(&file)]),
        golden("network_simulate.csv")
    );
}

#[test]
fn optimize_matches_golden() {
    let file = here("tests/data/network.toml");
    assert_eq!(
        stdout_ok(&["optimize", path(&file), "--objective", "max-eav-rate"]),
        golden("network_max_eav.csv")
    );
    assert_eq!(
        stdout_ok(&["optimize", path(&file), "--objective", "min-malicious-rate"]),
        golden("network_min_malicious.csv")
    );
}

#[test]
fn simulate_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let file = here("tests/data/network.toml");
    let o = run(&["simulate", path(&file), "--out", path(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(out).unwrap(), golden("network_simulate.csv"));
}

#[test]
fn validation_errors_exit_2() {
    let o = run(&["simulate", path(&here("tests/data/unknown_key.toml"))]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("gain_dbi") && err.contains("line 8"), "{err}");

    let o = run(&["simulate", path(&here("tests/data/dangling.toml"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ghost"));

    let file = here("tests/data/network.toml");
    let o = run(&["optimize", path(&file), "--objective", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));

    // no sweep section
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep", path(&file), "--out", path(&dir.path().join("x.csv"))]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(run(&["figure", "fig5", "--out", "x.csv"]).status.code(), Some(2));
    assert_eq!(
        run(&["--format", "json", "simulate", path(&file)]).status.code(),
        Some(2)
    );
}

#[test]
fn io_errors_exit_1() {
    let o = run(&["simulate", "/nonexistent/scenario.toml"]);
    assert_eq!(o.status.code(), Some(1));
    let file = here("tests/data/short_sweep.toml");
    let o = run(&["sweep", path(&file), "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(1));
}
