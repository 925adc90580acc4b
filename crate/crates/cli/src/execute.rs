//! Drives a validated [`RunConfig`] end to end: builds the engine state,
//! writes scheduled frames, `features.csv`, and `report.txt`.
//!
//! All outputs are written atomically (temporary file, then rename), so a
//! crash or full disk never leaves a partial artifact under its final
//! name.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rotor_core::{
    save_png, write_csv, AgentSpec, AnimationState, FeatureRecord, ImageBuffer, Mode, RunReport,
    TransitionAgentSpec, VERSION,
};

use crate::config::RunConfig;
use crate::error::CliError;

/// RNG identifier recorded in baseline run reports.
pub const BASELINE_RNG: &str = "chacha8";

/// Header line separating run metadata from the config echo in
/// `report.txt`.
pub const CONFIG_ECHO_HEADER: &str = "# config echo (toml)";

/// What [`execute`] produced.
#[derive(Debug)]
pub struct ExecOutcome {
    pub report: RunReport,
    pub frames: usize,
    pub out_dir: PathBuf,
}

/// Runs the simulation: creates the output directory, writes one
/// `frame_<step>.png` per scheduled snapshot (step zero-padded to 9
/// digits), scores every snapshot, and writes `features.csv` and
/// `report.txt`.
pub fn execute(config: &RunConfig) -> Result<ExecOutcome, CliError> {
    if config.agents.is_empty() {
        return Err(CliError::config("at least one [[agent]] block is required"));
    }
    fs::create_dir_all(&config.out_dir)
        .map_err(|err| CliError::io(format!("{}: {err}", config.out_dir.display())))?;

    let start = config.start.load(config.dims)?;
    let mut state = build_state(config, start)?;

    let mut records: Vec<FeatureRecord> = Vec::new();
    let out_dir = config.out_dir.clone();
    let sink = |step: u64, canvas: &ImageBuffer| -> Result<(), CliError> {
        let path = out_dir.join(format!("frame_{step:09}.png"));
        save_png(canvas, &path).map_err(|err| CliError::io(err.to_string()))?;
        records.push(FeatureRecord::compute(step, canvas));
        Ok(())
    };
    let result = match config.baseline {
        None => state.run(&config.schedule, sink),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            state.run_random(&config.schedule, &mut rng, sink)
        }
    };
    let report = result.map_err(|aborted| aborted.error)?;

    let mut csv = Vec::new();
    write_csv(&mut csv, &records)
        .map_err(|err| CliError::internal(format!("csv rendering failed: {err}")))?;
    atomic_write(&config.out_dir.join("features.csv"), &csv)?;
    atomic_write(
        &config.out_dir.join("report.txt"),
        render_report(config, &report).as_bytes(),
    )?;

    Ok(ExecOutcome {
        report,
        frames: records.len(),
        out_dir: config.out_dir.clone(),
    })
}

fn build_state(config: &RunConfig, start: ImageBuffer) -> Result<AnimationState, CliError> {
    let state = match config.mode {
        Mode::Transition => {
            let target = config
                .target
                .as_ref()
                .ok_or_else(|| CliError::internal("transition config lost its target"))?
                .load(config.dims)?;
            let specs = config
                .agents
                .iter()
                .map(|agent| {
                    TransitionAgentSpec::new(agent.id, agent.sequence.clone(), agent.position)
                })
                .collect();
            AnimationState::transition(start, target, specs, config.t_max)
        }
        Mode::Animation => {
            let mut specs = Vec::with_capacity(config.agents.len());
            for agent in &config.agents {
                let target = agent
                    .target
                    .as_ref()
                    .ok_or_else(|| {
                        CliError::internal(format!("agent {} lost its target", agent.id))
                    })?
                    .load(config.dims)?;
                specs.push(AgentSpec::new(
                    agent.id,
                    Arc::new(target),
                    agent.sequence.clone(),
                    agent.position,
                ));
            }
            AnimationState::new(start, specs, config.t_max)
        }
    };
    // The config was validated, so construction failures are engine
    // invariant violations, not user errors.
    state.map_err(|err| CliError::internal(err.to_string()))
}

/// Renders `report.txt`: run metadata first, then the canonical config
/// echo (which re-parses to an equivalent config).
pub fn render_report(config: &RunConfig, report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str("# rotor run report\n");
    out.push_str(&format!("engine: rotor-core {VERSION}\n"));
    out.push_str(&format!("mode: {}\n", config.mode));
    if let Some(seed) = config.baseline {
        out.push_str(&format!("baseline_rng: {BASELINE_RNG}\n"));
        out.push_str(&format!("baseline_seed: {seed}\n"));
    }
    out.push_str(&report.render_text());
    out.push('\n');
    out.push_str(CONFIG_ECHO_HEADER);
    out.push('\n');
    out.push_str(&config.canonical_toml());
    out
}

/// Extracts the config echo section from a report, for round-trip checks.
pub fn echoed_config(report_text: &str) -> Option<&str> {
    let start = report_text.find(CONFIG_ECHO_HEADER)?;
    Some(&report_text[start + CONFIG_ECHO_HEADER.len()..])
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp_name = path.as_os_str().to_os_string();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, bytes).map_err(|err| CliError::io(format!("{}: {err}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|err| CliError::io(format!("{}: {err}", path.display())))
}
