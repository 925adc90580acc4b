//! End-to-end CLI tests: the library pipeline against real PNG files on
//! disk, and the compiled binary's exit codes and output conventions.

use std::fs;
use std::path::Path;
use std::process::Command;

use rotor_cli::{echoed_config, execute, load_config, parse_config_str, resolve, Overrides};
use rotor_core::{load_png, save_png, GridDims, ImageBuffer};

const RUN_TOML: &str = r#"
mode = "transition"
t_max = 200
start = "start.png"
target = "target.png"
frames_at = [0, 50, 200]

[[agent]]
sequence = "RDLU"
position = "m/2, n/2"
"#;

/// Writes a 16x16 start/target pair plus `run.toml` into `dir`.
fn stage_inputs(dir: &Path) {
    let dims = GridDims::new(16, 16).unwrap();
    let start = ImageBuffer::from_fn(dims, |p| [(p.row * 16) as u8, (p.col * 16) as u8, 0]);
    let target = ImageBuffer::from_fn(dims, |p| [0, 255 - (p.row * 16) as u8, (p.col * 16) as u8]);
    save_png(&start, dir.join("start.png")).unwrap();
    save_png(&target, dir.join("target.png")).unwrap();
    fs::write(dir.join("run.toml"), RUN_TOML).unwrap();
}

fn rotor() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rotor"))
}

#[test]
fn pipeline_writes_frames_features_and_a_replayable_report() {
    let dir = tempfile::tempdir().unwrap();
    stage_inputs(dir.path());
    let out_dir = dir.path().join("out");

    let overrides = Overrides {
        out: Some(out_dir.clone()),
        ..Overrides::default()
    };
    let config = load_config(&dir.path().join("run.toml"), &overrides).unwrap();
    assert_eq!(
        config.dims,
        GridDims::new(16, 16).unwrap(),
        "inferred from start.png"
    );
    let outcome = execute(&config).unwrap();
    assert_eq!(outcome.frames, 3);
    assert_eq!(outcome.report.steps, 200);

    let mut names: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        vec![
            "features.csv",
            "frame_000000000.png",
            "frame_000000050.png",
            "frame_000000200.png",
            "report.txt",
        ]
    );

    for name in &names {
        if name.ends_with(".png") {
            let frame = load_png(out_dir.join(name)).unwrap();
            assert_eq!(frame.dims(), config.dims);
        }
    }

    let csv = fs::read_to_string(out_dir.join("features.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "step,benford,gcf,colorfulness,mean_hue");
    assert_eq!(lines.len(), 4);
    let steps: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(steps, vec!["0", "50", "200"]);
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 5, "row {line}");
    }

    let report = fs::read_to_string(out_dir.join("report.txt")).unwrap();
    assert!(report.starts_with("# rotor run report\n"));
    assert!(report.contains("mode: transition\n"));
    assert!(report.contains("steps: 200\n"));
    assert!(report.contains("snapshots: 3\n"));
    assert!(report.contains("census: agent=1 "));

    // The echoed config resolves back to the exact same run, even from an
    // unrelated directory, so a report alone reproduces its run.
    let echo = echoed_config(&report).expect("report carries a config echo");
    let refile = parse_config_str(echo).unwrap();
    let elsewhere = tempfile::tempdir().unwrap();
    let replayed = resolve(refile, elsewhere.path(), &Overrides::default()).unwrap();
    assert_eq!(replayed, config);
}

#[test]
fn binary_runs_and_reports_frame_count_and_coverage() {
    let dir = tempfile::tempdir().unwrap();
    stage_inputs(dir.path());
    let output = rotor()
        .args(["run", "run.toml", "--out", "frames"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("wrote 3 frames to frames"), "{stdout}");
    assert!(stdout.contains("coverage: 0."), "{stdout}");
    assert!(dir.path().join("frames/frame_000000200.png").exists());
}

#[test]
fn frames_every_flag_replaces_the_config_schedule() {
    let dir = tempfile::tempdir().unwrap();
    stage_inputs(dir.path());
    let output = rotor()
        .args(["run", "run.toml", "--out", "f", "--frames-every", "40"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("wrote 6 frames"), "{stdout}");
    assert!(dir.path().join("f/frame_000000040.png").exists());
}

#[test]
fn validate_only_prints_a_summary_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    stage_inputs(dir.path());
    let output = rotor()
        .args(["run", "run.toml", "--out", "unused", "--validate-only"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(
        stdout,
        "config ok: transition mode, 16x16 grid, 1 agent(s), t_max 200\n"
    );
    assert!(!dir.path().join("unused").exists());
}

#[test]
fn preset_flag_expands_a_minimal_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("min.toml"),
        "start = \"color:#112233\"\ntarget = \"color:#aabbcc\"\n",
    )
    .unwrap();
    let output = rotor()
        .args([
            "run",
            "min.toml",
            "--preset",
            "transition-2-symmetric",
            "--t-max",
            "100",
            "--out",
            "p",
        ])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("wrote 2 frames"), "{stdout}");
    let frame = load_png(dir.path().join("p/frame_000000000.png")).unwrap();
    assert_eq!(frame.dims(), GridDims::new(400, 400).unwrap());
}

#[test]
fn config_errors_exit_2_with_a_labeled_message() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "speling = 1\n").unwrap();
    let output = rotor()
        .args(["run", "bad.toml", "--out", "x"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.starts_with("error[CONFIG]:"), "{stderr}");
    assert!(stderr.contains("line 1"), "{stderr}");
}

#[test]
fn missing_start_image_exits_2_naming_the_file() {
    let dir = tempfile::tempdir().unwrap();
    stage_inputs(dir.path());
    fs::remove_file(dir.path().join("start.png")).unwrap();
    let output = rotor()
        .args(["run", "run.toml", "--out", "x"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.starts_with("error[CONFIG]:"), "{stderr}");
    assert!(stderr.contains("start.png"), "{stderr}");
}

#[test]
fn blocked_output_directory_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    stage_inputs(dir.path());
    fs::write(dir.path().join("blocked"), b"a file, not a directory").unwrap();
    let output = rotor()
        .args(["run", "run.toml", "--out", "blocked/sub"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3), "{output:?}");
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.starts_with("error[IO]:"), "{stderr}");
}

#[test]
fn seed_without_baseline_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    stage_inputs(dir.path());
    let output = rotor()
        .args(["run", "run.toml", "--out", "x", "--seed", "5"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.starts_with("error[CONFIG]:"), "{stderr}");
    assert!(stderr.contains("baseline"), "{stderr}");
}
