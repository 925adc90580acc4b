//! Deterministic multi-agent rotor-router walks that paint images.
//!
//! Agents walk a pixel torus following per-pixel rotor sequences and paint
//! every pixel they enter from their own target image. Because the walk is
//! deterministic, runs replay exactly; because rotor walks spread their
//! moves evenly, the painted region grows like a diffusion front instead
//! of the lumpy trace of a true random walk.
//!
//! The crate is organized as:
//!
//! - [`walk`]: directions, rotor sequences, torus neighborhood, counters,
//!   and the stepping agent.
//! - [`animation`]: the multi-agent engine, transitions (one shared
//!   target) and animations (per-agent targets), snapshot schedules, and
//!   run reports.
//! - [`presets`]: the named built-in experiment configurations.
//! - [`imaging`]: RGB buffers, PNG I/O, hue-rotation recoloring, and
//!   coverage tracking.
//! - [`color`]: RGB/HSV conversion.
//! - [`features`]: per-snapshot aesthetic metrics (Benford deviation,
//!   Global Contrast Factor, colorfulness, mean hue) and their CSV form.

pub mod animation;
pub mod color;
pub mod error;
pub mod features;
pub mod imaging;
pub mod presets;
pub mod walk;

pub use animation::{
    AgentCensus, AgentSpec, AnimationState, Mode, RunAborted, RunReport, SnapshotSchedule,
    TransitionAgentSpec,
};
pub use error::{Error, Result};
pub use features::{feature_series, write_csv, FeatureRecord};
pub use imaging::{
    load_png, png_dimensions, recolor, save_png, HueShiftSpec, ImageBuffer, PaintedBitmap, Pixel,
};
pub use presets::{preset, ExperimentPreset, Frac, FracPos, PresetAgent, PRESET_NAMES};
pub use walk::{
    direction_census, neighbor, Agent, Direction, DirectionCensus, GridDims, Position,
    RotorCounterGrid, RotorSequence,
};

/// Engine version recorded in run reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
