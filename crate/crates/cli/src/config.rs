//! Run configuration: the TOML schema, CLI flag overrides, preset
//! expansion, validation, and the canonical echo written into reports.
//!
//! Image paths in a config file are interpreted relative to the file's
//! directory and stored absolute; the output directory is taken as given
//! (relative to the working directory, as usual for CLI tools).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use rotor_core::{
    load_png, png_dimensions, recolor, GridDims, HueShiftSpec, ImageBuffer, Mode, Pixel, Position,
    RotorSequence, SnapshotSchedule,
};

use crate::error::CliError;

/// The raw TOML schema. Unknown keys are rejected so typos surface
/// immediately instead of being silently ignored.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Name of a built-in preset supplying defaults for everything below.
    pub preset: Option<String>,
    /// `"transition"` or `"animation"`.
    pub mode: Option<String>,
    /// Grid size as `[rows, cols]`; inferred from the start PNG if absent.
    pub size: Option<[usize; 2]>,
    /// Step budget.
    pub t_max: Option<u64>,
    /// Start image source (see [`ImageSource`]).
    pub start: Option<String>,
    /// Shared target for transition mode.
    pub target: Option<String>,
    /// Snapshot every N steps (mutually exclusive with `frames_at`).
    pub frames_every: Option<u64>,
    /// Explicit snapshot steps, strictly increasing.
    pub frames_at: Option<Vec<u64>>,
    /// Output directory.
    pub out: Option<PathBuf>,
    /// Replace rotor stepping with seeded uniform random moves.
    pub baseline: Option<bool>,
    /// Seed for baseline runs.
    pub seed: Option<u64>,
    #[serde(default, rename = "agent")]
    pub agents: Vec<AgentBlock>,
}

/// One `[[agent]]` block.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentBlock {
    /// Rotor sequence string such as `"RDLU"`.
    pub sequence: Option<String>,
    /// `"<row>,<col>"`, absolute or fractional like `"m/4,3n/4"`.
    pub position: Option<String>,
    /// Per-agent target source for animation mode.
    pub target: Option<String>,
}

/// Command-line flags that override config keys.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub frames_every: Option<u64>,
    pub t_max: Option<u64>,
    pub preset: Option<String>,
    pub baseline: bool,
    pub seed: Option<u64>,
}

/// Parses config text, rejecting unknown keys and reporting the location
/// of the offending span.
pub fn parse_config_str(text: &str) -> Result<ConfigFile, CliError> {
    toml::from_str(text).map_err(|err| {
        let message = err.message().to_string();
        let location = err
            .span()
            .map(|span| {
                let line = text[..span.start.min(text.len())]
                    .bytes()
                    .filter(|&b| b == b'\n')
                    .count()
                    + 1;
                format!(" (line {line})")
            })
            .unwrap_or_default();
        CliError::config(format!("config parse failed{location}: {message}"))
    })
}

/// Where pixels come from: a PNG file, a solid color, or a hue-rotated
/// copy of another source.
///
/// String forms: `<path>` | `color:#RRGGBB` | `recolor:<degrees>:<source>`.
#[derive(Clone, Debug, PartialEq)]
pub enum ImageSource {
    Png(PathBuf),
    Solid(Pixel),
    Recolor {
        degrees: f64,
        inner: Box<ImageSource>,
    },
}

impl ImageSource {
    pub fn parse(text: &str) -> Result<Self, String> {
        if let Some(hex) = text.strip_prefix("color:") {
            return parse_hex_color(hex).map(ImageSource::Solid);
        }
        if let Some(rest) = text.strip_prefix("recolor:") {
            let (degrees_text, inner_text) = rest.split_once(':').ok_or_else(|| {
                format!("recolor source must look like `recolor:<degrees>:<source>`, got `{text}`")
            })?;
            let degrees: f64 = degrees_text
                .trim()
                .parse()
                .map_err(|_| format!("invalid rotation `{degrees_text}`"))?;
            if !degrees.is_finite() {
                return Err(format!("rotation must be finite, got `{degrees_text}`"));
            }
            let inner = ImageSource::parse(inner_text)?;
            return Ok(ImageSource::Recolor {
                degrees,
                inner: Box::new(inner),
            });
        }
        if text.is_empty() {
            return Err("empty image source".to_string());
        }
        Ok(ImageSource::Png(PathBuf::from(text)))
    }

    /// Canonical string form; parsing it back yields an equal source.
    pub fn canonical(&self) -> String {
        match self {
            ImageSource::Png(path) => path.display().to_string(),
            ImageSource::Solid([r, g, b]) => format!("color:#{r:02x}{g:02x}{b:02x}"),
            ImageSource::Recolor { degrees, inner } => {
                format!("recolor:{degrees}:{}", inner.canonical())
            }
        }
    }

    /// Resolves any relative PNG path against `base` and makes it
    /// absolute, so the canonical form re-parses identically from any
    /// working directory.
    fn anchored(self, base: &Path) -> Result<Self, CliError> {
        match self {
            ImageSource::Png(path) => {
                let joined = if path.is_relative() {
                    base.join(path)
                } else {
                    path
                };
                let absolute = std::path::absolute(&joined)
                    .map_err(|err| CliError::config(format!("{}: {err}", joined.display())))?;
                Ok(ImageSource::Png(absolute))
            }
            ImageSource::Recolor { degrees, inner } => Ok(ImageSource::Recolor {
                degrees,
                inner: Box::new(inner.anchored(base)?),
            }),
            solid => Ok(solid),
        }
    }

    /// The PNG dimensions this source is pinned to, if any; solid colors
    /// adapt to any grid.
    pub fn probe_dims(&self) -> Result<Option<GridDims>, CliError> {
        match self {
            ImageSource::Png(path) => png_dimensions(path)
                .map(Some)
                .map_err(|err| CliError::config(err.to_string())),
            ImageSource::Solid(_) => Ok(None),
            ImageSource::Recolor { inner, .. } => inner.probe_dims(),
        }
    }

    /// Loads the pixels at the configured grid size. PNG dimensions were
    /// checked at validation; a mismatch here means the file changed
    /// underneath us and is reported as an I/O error.
    pub fn load(&self, dims: GridDims) -> Result<ImageBuffer, CliError> {
        match self {
            ImageSource::Png(path) => {
                let img = load_png(path).map_err(|err| CliError::io(err.to_string()))?;
                if img.dims() != dims {
                    return Err(CliError::io(format!(
                        "{}: image is {}, expected {dims}",
                        path.display(),
                        img.dims()
                    )));
                }
                Ok(img)
            }
            ImageSource::Solid(pixel) => Ok(ImageBuffer::solid(dims, *pixel)),
            ImageSource::Recolor { degrees, inner } => {
                Ok(recolor(&inner.load(dims)?, HueShiftSpec::new(*degrees)))
            }
        }
    }
}

fn parse_hex_color(text: &str) -> Result<Pixel, String> {
    let hex = text
        .strip_prefix('#')
        .ok_or_else(|| format!("color must look like `color:#RRGGBB`, got `color:{text}`"))?;
    if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(format!("expected six hex digits, got `#{hex}`"));
    }
    let channel = |range: std::ops::Range<usize>| u8::from_str_radix(&hex[range], 16).unwrap();
    Ok([channel(0..2), channel(2..4), channel(4..6)])
}

/// Parses `"<row>,<col>"` where each coordinate is an absolute integer or
/// a fraction of the grid extent (`m` = rows, `n` = cols) like `m/2` or
/// `3n/4`, resolved by integer division. Surrounding parentheses are
/// accepted.
pub fn parse_position(text: &str, dims: GridDims) -> Result<Position, String> {
    let trimmed = text.trim();
    let trimmed = trimmed
        .strip_prefix('(')
        .and_then(|rest| rest.strip_suffix(')'))
        .unwrap_or(trimmed);
    let (row_text, col_text) = trimmed
        .split_once(',')
        .ok_or_else(|| format!("expected `<row>,<col>`, got `{text}`"))?;
    let row = parse_extent(row_text.trim(), dims)?;
    let col = parse_extent(col_text.trim(), dims)?;
    let pos = Position::new(row, col);
    if !dims.contains(pos) {
        return Err(format!("{pos} is out of bounds for a {dims} grid"));
    }
    Ok(pos)
}

fn parse_extent(text: &str, dims: GridDims) -> Result<usize, String> {
    if let Ok(value) = text.parse::<usize>() {
        return Ok(value);
    }
    let letter_at = text.find(['m', 'n', 'M', 'N']).ok_or_else(|| {
        format!("expected an integer or a fraction like `m/4` or `3n/4`, got `{text}`")
    })?;
    let letter = text.as_bytes()[letter_at].to_ascii_lowercase();
    let extent = if letter == b'm' {
        dims.rows()
    } else {
        dims.cols()
    };
    let numerator_text = &text[..letter_at];
    let numerator: u64 = if numerator_text.is_empty() {
        1
    } else {
        numerator_text
            .parse()
            .map_err(|_| format!("invalid numerator `{numerator_text}` in `{text}`"))?
    };
    let rest = &text[letter_at + 1..];
    let denominator: u64 = if rest.is_empty() {
        1
    } else {
        let denominator_text = rest.strip_prefix('/').ok_or_else(|| {
            format!("expected `/<denominator>` after the extent letter in `{text}`")
        })?;
        let value: u64 = denominator_text
            .parse()
            .map_err(|_| format!("invalid denominator `{denominator_text}` in `{text}`"))?;
        if value == 0 {
            return Err(format!("denominator must be nonzero in `{text}`"));
        }
        value
    };
    Ok((numerator * extent as u64 / denominator) as usize)
}

/// One fully resolved agent.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedAgent {
    pub id: u32,
    pub sequence: RotorSequence,
    pub position: Position,
    /// Per-agent target; `None` in transition mode.
    pub target: Option<ImageSource>,
}

/// A validated, fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub dims: GridDims,
    pub t_max: u64,
    pub start: ImageSource,
    /// The shared target in transition mode.
    pub target: Option<ImageSource>,
    pub agents: Vec<ResolvedAgent>,
    pub schedule: SnapshotSchedule,
    pub out_dir: PathBuf,
    /// Baseline seed; `Some` turns rotor stepping into seeded random moves.
    pub baseline: Option<u64>,
}

/// Applies overrides, expands the preset, fills defaults, and validates
/// everything that can be checked without running: key presence, grammar,
/// bounds, schedule shape, file existence, and image dimensions.
pub fn resolve(
    mut file: ConfigFile,
    base_dir: &Path,
    overrides: &Overrides,
) -> Result<RunConfig, CliError> {
    if let Some(preset) = &overrides.preset {
        file.preset = Some(preset.clone());
    }
    if let Some(t_max) = overrides.t_max {
        file.t_max = Some(t_max);
    }
    if let Some(frames_every) = overrides.frames_every {
        file.frames_every = Some(frames_every);
        file.frames_at = None;
    }
    if let Some(out) = &overrides.out {
        file.out = Some(out.clone());
    }
    if overrides.baseline {
        file.baseline = Some(true);
    }
    if let Some(seed) = overrides.seed {
        file.seed = Some(seed);
    }

    let preset = file
        .preset
        .as_deref()
        .map(rotor_core::preset)
        .transpose()
        .map_err(|err| CliError::config(err.to_string()))?;

    let mode: Mode = match (&file.mode, &preset) {
        (Some(text), _) => text.parse().map_err(CliError::config)?,
        (None, Some(p)) => p.mode,
        (None, None) => {
            return Err(CliError::config(
                "missing key `mode` (or name a `preset` that implies one)",
            ))
        }
    };

    let start_text = file
        .start
        .ok_or_else(|| CliError::config("missing key `start`"))?;
    let start = ImageSource::parse(&start_text)
        .map_err(|err| CliError::config(format!("key `start`: {err}")))?
        .anchored(base_dir)?;

    let dims = if let Some([rows, cols]) = file.size {
        GridDims::new(rows, cols).map_err(|err| CliError::config(err.to_string()))?
    } else if let Some(probed) = start.probe_dims()? {
        probed
    } else if let Some(p) = &preset {
        p.dims
    } else {
        return Err(CliError::config(
            "missing key `size` (dimensions cannot be inferred from a solid-color start)",
        ));
    };

    let t_max = file
        .t_max
        .or(preset.as_ref().map(|p| p.step_budget))
        .ok_or_else(|| CliError::config("missing key `t_max`"))?;

    let preset_agents: &[rotor_core::PresetAgent] =
        preset.as_ref().map(|p| p.agents.as_slice()).unwrap_or(&[]);
    if !file.agents.is_empty()
        && !preset_agents.is_empty()
        && file.agents.len() != preset_agents.len()
    {
        return Err(CliError::config(format!(
            "preset `{}` defines {} agents but the config has {} [[agent]] blocks",
            preset.as_ref().map(|p| p.name).unwrap_or_default(),
            preset_agents.len(),
            file.agents.len()
        )));
    }
    let agent_count = file.agents.len().max(preset_agents.len());

    let mut agents = Vec::with_capacity(agent_count);
    for index in 0..agent_count {
        let id = index as u32 + 1;
        let block = file.agents.get(index);
        let sequence = match block.and_then(|b| b.sequence.as_deref()) {
            Some(text) => text
                .parse::<RotorSequence>()
                .map_err(|err| CliError::config(format!("agent {id}: sequence: {err}")))?,
            None => preset_agents
                .get(index)
                .map(|a| a.sequence.clone())
                .ok_or_else(|| CliError::config(format!("agent {id}: missing `sequence`")))?,
        };
        let position = match block.and_then(|b| b.position.as_deref()) {
            Some(text) => parse_position(text, dims)
                .map_err(|err| CliError::config(format!("agent {id}: position: {err}")))?,
            None => preset_agents
                .get(index)
                .map(|a| a.start.resolve(dims))
                .transpose()
                .map_err(|err| CliError::config(format!("agent {id}: {err}")))?
                .ok_or_else(|| CliError::config(format!("agent {id}: missing `position`")))?,
        };
        let target = block
            .and_then(|b| b.target.as_deref())
            .map(|text| {
                ImageSource::parse(text)
                    .map_err(|err| CliError::config(format!("agent {id}: target: {err}")))
                    .and_then(|source| source.anchored(base_dir))
            })
            .transpose()?;
        agents.push(ResolvedAgent {
            id,
            sequence,
            position,
            target,
        });
    }

    let target = file
        .target
        .as_deref()
        .map(|text| {
            ImageSource::parse(text)
                .map_err(|err| CliError::config(format!("key `target`: {err}")))
                .and_then(|source| source.anchored(base_dir))
        })
        .transpose()?;
    match mode {
        Mode::Transition => {
            if target.is_none() {
                return Err(CliError::config(
                    "transition mode requires the top-level `target` key",
                ));
            }
            if let Some(agent) = agents.iter().find(|a| a.target.is_some()) {
                return Err(CliError::config(format!(
                    "agent {}: transition mode paints the shared top-level `target`; remove the per-agent target",
                    agent.id
                )));
            }
        }
        Mode::Animation => {
            if target.is_some() {
                return Err(CliError::config(
                    "animation mode uses per-agent targets; remove the top-level `target` key",
                ));
            }
            if let Some(agent) = agents.iter().find(|a| a.target.is_none()) {
                return Err(CliError::config(format!(
                    "agent {}: animation mode requires a per-agent `target`",
                    agent.id
                )));
            }
        }
    }

    let schedule = match (file.frames_every, file.frames_at) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "`frames_every` and `frames_at` are mutually exclusive",
            ))
        }
        (Some(every), None) => {
            SnapshotSchedule::every(every).map_err(|err| CliError::config(err.to_string()))?
        }
        (None, Some(steps)) => {
            SnapshotSchedule::at(steps, t_max).map_err(|err| CliError::config(err.to_string()))?
        }
        (None, None) => {
            let default = if t_max == 0 { vec![0] } else { vec![0, t_max] };
            SnapshotSchedule::at(default, t_max).expect("default schedule is valid")
        }
    };

    let out_dir = file
        .out
        .ok_or_else(|| CliError::config("missing key `out` (or pass --out)"))?;

    let baseline = match (file.baseline.unwrap_or(false), file.seed) {
        (true, Some(seed)) => Some(seed),
        (true, None) => {
            return Err(CliError::config(
                "baseline runs require a `seed` (config key or --seed)",
            ))
        }
        (false, Some(_)) => {
            return Err(CliError::config(
                "`seed` is only meaningful with `baseline = true` (or --baseline)",
            ))
        }
        (false, None) => None,
    };

    let config = RunConfig {
        mode,
        dims,
        t_max,
        start,
        target,
        agents,
        schedule,
        out_dir,
        baseline,
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Checks that every referenced image exists and matches the
    /// configured grid dimensions.
    pub fn validate(&self) -> Result<(), CliError> {
        self.check_source("key `start`", &self.start)?;
        if let Some(target) = &self.target {
            self.check_source("key `target`", target)?;
        }
        for agent in &self.agents {
            if let Some(target) = &agent.target {
                self.check_source(&format!("agent {} target", agent.id), target)?;
            }
        }
        Ok(())
    }

    fn check_source(&self, label: &str, source: &ImageSource) -> Result<(), CliError> {
        let probed = source.probe_dims().map_err(|err| match err {
            CliError::Config(message) => CliError::config(format!("{label}: {message}")),
            other => other,
        })?;
        if let Some(found) = probed {
            if found != self.dims {
                return Err(CliError::config(format!(
                    "{label}: image is {found}, expected {}",
                    self.dims
                )));
            }
        }
        Ok(())
    }

    /// Canonical TOML form of this config. Parsing and resolving the text
    /// reproduces this exact `RunConfig`; presets are echoed fully
    /// expanded.
    pub fn canonical_toml(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode = \"{}\"", self.mode);
        let _ = writeln!(out, "size = [{}, {}]", self.dims.rows(), self.dims.cols());
        let _ = writeln!(out, "t_max = {}", self.t_max);
        let _ = writeln!(out, "start = \"{}\"", toml_escape(&self.start.canonical()));
        if let Some(target) = &self.target {
            let _ = writeln!(out, "target = \"{}\"", toml_escape(&target.canonical()));
        }
        match &self.schedule {
            SnapshotSchedule::EveryK(every) => {
                let _ = writeln!(out, "frames_every = {every}");
            }
            SnapshotSchedule::At(steps) => {
                let list = steps
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(out, "frames_at = [{list}]");
            }
        }
        let _ = writeln!(
            out,
            "out = \"{}\"",
            toml_escape(&self.out_dir.display().to_string())
        );
        if let Some(seed) = self.baseline {
            let _ = writeln!(out, "baseline = true");
            let _ = writeln!(out, "seed = {seed}");
        }
        for agent in &self.agents {
            let _ = writeln!(out, "\n[[agent]]");
            let _ = writeln!(out, "sequence = \"{}\"", agent.sequence);
            let _ = writeln!(
                out,
                "position = \"{},{}\"",
                agent.position.row, agent.position.col
            );
            if let Some(target) = &agent.target {
                let _ = writeln!(out, "target = \"{}\"", toml_escape(&target.canonical()));
            }
        }
        out
    }
}

fn toml_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}
