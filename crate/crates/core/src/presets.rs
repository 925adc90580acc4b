//! Built-in experiment presets: canonical agent counts, start positions,
//! and rotor sequences for the transition and animation setups the engine
//! was designed around, all at 400x400 with a five-million-step budget.
//!
//! Start positions are stored as fractions of the grid extent (`m` rows,
//! `n` cols) and resolve by integer division, so presets scale cleanly to
//! other grid sizes, including odd ones.

use crate::animation::Mode;
use crate::error::{Error, Result};
use crate::walk::{GridDims, Position, RotorSequence};

/// A fraction `num/den` of one grid extent, resolved by integer division.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: u64,
    pub den: u64,
}

impl Frac {
    pub const fn new(num: u64, den: u64) -> Self {
        Frac { num, den }
    }

    pub fn resolve(self, extent: usize) -> usize {
        (self.num * extent as u64 / self.den) as usize
    }
}

/// A start position as fractions of the row and column extents,
/// e.g. `(m/4, 3n/4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FracPos {
    pub row: Frac,
    pub col: Frac,
}

impl FracPos {
    pub const fn new(row: Frac, col: Frac) -> Self {
        FracPos { row, col }
    }

    pub fn resolve(self, dims: GridDims) -> Result<Position> {
        let pos = Position::new(self.row.resolve(dims.rows()), self.col.resolve(dims.cols()));
        if !dims.contains(pos) {
            return Err(Error::OutOfBounds { pos, dims });
        }
        Ok(pos)
    }
}

/// One preset agent: its rotor sequence and fractional start position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresetAgent {
    pub sequence: RotorSequence,
    pub start: FracPos,
}

/// A complete named experiment configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentPreset {
    pub name: &'static str,
    pub mode: Mode,
    pub dims: GridDims,
    pub step_budget: u64,
    pub agents: Vec<PresetAgent>,
}

/// All preset names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 12] = [
    "transition-1-symmetric",
    "transition-1-asymmetric",
    "transition-2-symmetric",
    "transition-2-asymmetric",
    "animation-2-symmetric",
    "animation-2-asymmetric",
    "animation-4-symmetric",
    "animation-4-asymmetric",
    "long-2",
    "long-4",
    "repetitive-2",
    "repetitive-4",
];

const DEFAULT_ROWS: usize = 400;
const DEFAULT_COLS: usize = 400;
const DEFAULT_BUDGET: u64 = 5_000_000;

/// The symmetric permutation sequence and its reverse.
const SYMMETRIC: &str = "RDLU";
const SYMMETRIC_REVERSED: &str = "ULDR";
/// Asymmetric variants with one extra Right / Up entry.
const ASYMMETRIC: &str = "RDLUR";
const ASYMMETRIC_REVERSED: &str = "ULDRU";
/// Four rounds of the permutation followed by Right, Up; Right and Up each
/// occur five times, Down and Left four.
const LONG: &str = "RDLURDLURDLURDLURU";
/// Repetitive sequences dominated by Right, drifting up or down.
const REPETITIVE_UP: &str = "URRR";
const REPETITIVE_DOWN: &str = "DRRR";

const CENTER: FracPos = FracPos::new(Frac::new(1, 2), Frac::new(1, 2));
const QUARTER: FracPos = FracPos::new(Frac::new(1, 4), Frac::new(1, 4));
const THREE_QUARTER: FracPos = FracPos::new(Frac::new(3, 4), Frac::new(3, 4));
/// The four quarter points in row-major order.
const QUARTER_POINTS: [FracPos; 4] = [
    QUARTER,
    FracPos::new(Frac::new(1, 4), Frac::new(3, 4)),
    FracPos::new(Frac::new(3, 4), Frac::new(1, 4)),
    THREE_QUARTER,
];

/// Looks up a named preset.
pub fn preset(name: &str) -> Result<ExperimentPreset> {
    let (mode, agents): (Mode, Vec<(&str, FracPos)>) = match name {
        "transition-1-symmetric" => (Mode::Transition, vec![(SYMMETRIC, CENTER)]),
        "transition-1-asymmetric" => (Mode::Transition, vec![(ASYMMETRIC, CENTER)]),
        "transition-2-symmetric" => (
            Mode::Transition,
            vec![(SYMMETRIC, QUARTER), (SYMMETRIC_REVERSED, THREE_QUARTER)],
        ),
        "transition-2-asymmetric" => (
            Mode::Transition,
            vec![(ASYMMETRIC, QUARTER), (ASYMMETRIC_REVERSED, THREE_QUARTER)],
        ),
        "animation-2-symmetric" => (
            Mode::Animation,
            vec![(SYMMETRIC, QUARTER), (SYMMETRIC_REVERSED, THREE_QUARTER)],
        ),
        "animation-2-asymmetric" => (
            Mode::Animation,
            vec![(ASYMMETRIC, QUARTER), (ASYMMETRIC_REVERSED, THREE_QUARTER)],
        ),
        "animation-4-symmetric" => (
            Mode::Animation,
            alternating(&QUARTER_POINTS, SYMMETRIC, SYMMETRIC_REVERSED),
        ),
        "animation-4-asymmetric" => (
            Mode::Animation,
            alternating(&QUARTER_POINTS, ASYMMETRIC, ASYMMETRIC_REVERSED),
        ),
        "long-2" => (
            Mode::Animation,
            vec![(SYMMETRIC, QUARTER), (LONG, THREE_QUARTER)],
        ),
        "long-4" => (
            Mode::Animation,
            alternating(&QUARTER_POINTS, SYMMETRIC, LONG),
        ),
        "repetitive-2" => (
            Mode::Animation,
            vec![(REPETITIVE_UP, QUARTER), (REPETITIVE_DOWN, THREE_QUARTER)],
        ),
        "repetitive-4" => (
            Mode::Animation,
            alternating(&QUARTER_POINTS, REPETITIVE_UP, REPETITIVE_DOWN),
        ),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(ExperimentPreset {
        name: PRESET_NAMES
            .iter()
            .find(|&&known| known == name)
            .expect("matched names are known"),
        mode,
        dims: GridDims::new(DEFAULT_ROWS, DEFAULT_COLS).expect("default dims are non-empty"),
        step_budget: DEFAULT_BUDGET,
        agents: agents
            .into_iter()
            .map(|(sequence, start)| PresetAgent {
                sequence: sequence.parse().expect("preset sequences parse"),
                start,
            })
            .collect(),
    })
}

fn alternating(
    starts: &[FracPos],
    first: &'static str,
    second: &'static str,
) -> Vec<(&'static str, FracPos)> {
    starts
        .iter()
        .enumerate()
        .map(|(i, &start)| {
            let sequence = if i % 2 == 0 { first } else { second };
            (sequence, start)
        })
        .collect()
}
