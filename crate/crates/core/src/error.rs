use std::path::PathBuf;

use crate::walk::{GridDims, Position};

/// Errors produced while building or driving simulations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("rotor sequence must contain at least one direction")]
    EmptySequence,

    #[error("invalid direction character `{found}` at index {index} (expected one of R, D, L, U)")]
    InvalidDirectionChar { index: usize, found: char },

    #[error("grid dimensions must be at least 1x1, got {rows}x{cols}")]
    EmptyGrid { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: GridDims, got: GridDims },

    #[error("position {pos} is out of bounds for a {dims} grid")]
    OutOfBounds { pos: Position, dims: GridDims },

    #[error("duplicate agent id {0}")]
    DuplicateAgentId(u32),

    #[error("data length {got} does not match a {dims} grid ({expected} cells)")]
    DataLength {
        dims: GridDims,
        expected: usize,
        got: usize,
    },

    #[error("rotor counter {value} at {pos} is out of range for a length-{len} sequence")]
    CounterOutOfRange {
        pos: Position,
        value: u32,
        len: usize,
    },

    #[error("snapshot interval must be at least 1")]
    ZeroSnapshotInterval,

    #[error("snapshot steps must be strictly increasing (offender: {0})")]
    UnsortedSchedule(u64),

    #[error("snapshot step {step} exceeds the step budget {budget}")]
    ScheduleBeyondBudget { step: u64, budget: u64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}: file not found")]
    ImageNotFound { path: PathBuf },

    #[error(
        "{path}: unsupported pixel format {format} (only 8-bit gray/RGB/RGBA PNG is accepted)"
    )]
    UnsupportedPixelFormat { path: PathBuf, format: String },

    #[error("{path}: failed to decode PNG: {source}")]
    Decode {
        path: PathBuf,
        source: image::ImageError,
    },

    #[error("{path}: failed to encode PNG: {source}")]
    Encode {
        path: PathBuf,
        source: image::ImageError,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
