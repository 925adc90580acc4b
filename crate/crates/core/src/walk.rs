//! Rotor-router walk mechanics: directions, rotor sequences, the torus
//! neighborhood, per-pixel rotor counters, and the painting agents built
//! on top of them.
//!
//! Every pixel of the grid carries a rotor counter. When an agent leaves a
//! pixel it exits in the direction the local rotor sequence dictates at the
//! current counter value, then the counter advances by one (wrapping at the
//! sequence length). Repeated visits to a pixel therefore cycle through the
//! sequence entries in order, which is what makes the walk quasi-random:
//! over time the exits from each pixel are spread across the directions in
//! proportion to how often each direction occurs in the sequence.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::imaging::ImageBuffer;

/// One of the four cardinal moves on the pixel grid.
///
/// Positions are `(row, col)` with the row axis growing downward, matching
/// image memory order: `Down` is `row + 1` and `Right` is `col + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Right,
    Down,
    Left,
    Up,
}

impl Direction {
    /// All four directions in canonical `R, D, L, U` order.
    pub const ALL: [Direction; 4] = [
        Direction::Right,
        Direction::Down,
        Direction::Left,
        Direction::Up,
    ];

    /// The opposite direction.
    pub fn inverse(self) -> Direction {
        match self {
            Direction::Right => Direction::Left,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Up => Direction::Down,
        }
    }

    /// Index of this direction in [`Direction::ALL`], used for census and
    /// multiplicity arrays.
    pub fn index(self) -> usize {
        match self {
            Direction::Right => 0,
            Direction::Down => 1,
            Direction::Left => 2,
            Direction::Up => 3,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Direction::Right => 'R',
            Direction::Down => 'D',
            Direction::Left => 'L',
            Direction::Up => 'U',
        }
    }

    /// Parses a single direction letter, case-insensitively.
    pub fn from_char(ch: char) -> Option<Direction> {
        match ch.to_ascii_uppercase() {
            'R' => Some(Direction::Right),
            'D' => Some(Direction::Down),
            'L' => Some(Direction::Left),
            'U' => Some(Direction::Up),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Grid size as `rows x cols`; both extents are at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridDims {
    rows: usize,
    cols: usize,
}

impl GridDims {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyGrid { rows, cols });
        }
        Ok(GridDims { rows, cols })
    }

    pub fn rows(self) -> usize {
        self.rows
    }

    pub fn cols(self) -> usize {
        self.cols
    }

    pub fn cell_count(self) -> usize {
        self.rows * self.cols
    }

    pub fn contains(self, pos: Position) -> bool {
        pos.row < self.rows && pos.col < self.cols
    }

    /// All positions in row-major order.
    pub fn positions(self) -> impl Iterator<Item = Position> {
        (0..self.rows).flat_map(move |row| (0..self.cols).map(move |col| Position { row, col }))
    }

    pub(crate) fn index_of(self, pos: Position) -> usize {
        debug_assert!(self.contains(pos));
        pos.row * self.cols + pos.col
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

/// A pixel coordinate, `(row, col)`, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// The grid cell reached by moving one step from `pos` in `dir`, wrapping
/// at the borders so the grid behaves as a torus.
pub fn neighbor(pos: Position, dir: Direction, dims: GridDims) -> Position {
    debug_assert!(dims.contains(pos));
    let (rows, cols) = (dims.rows, dims.cols);
    match dir {
        Direction::Right => Position {
            row: pos.row,
            col: if pos.col + 1 == cols { 0 } else { pos.col + 1 },
        },
        Direction::Down => Position {
            row: if pos.row + 1 == rows { 0 } else { pos.row + 1 },
            col: pos.col,
        },
        Direction::Left => Position {
            row: pos.row,
            col: if pos.col == 0 { cols - 1 } else { pos.col - 1 },
        },
        Direction::Up => Position {
            row: if pos.row == 0 { rows - 1 } else { pos.row - 1 },
            col: pos.col,
        },
    }
}

/// A non-empty list of exit directions shared by every pixel of an agent's
/// grid. The rotor counter of a pixel indexes into this sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotorSequence {
    entries: Vec<Direction>,
}

impl RotorSequence {
    pub fn new(entries: Vec<Direction>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(RotorSequence { entries })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> Direction {
        self.entries[index]
    }

    pub fn entries(&self) -> &[Direction] {
        &self.entries
    }

    /// Occurrence count of each direction, in [`Direction::ALL`] order.
    pub fn multiplicities(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for dir in &self.entries {
            counts[dir.index()] += 1;
        }
        counts
    }

    /// True when every direction occurs equally often, so the walk has no
    /// directional drift.
    pub fn is_symmetric(&self) -> bool {
        let counts = self.multiplicities();
        counts.iter().all(|&c| c == counts[0])
    }
}

impl FromStr for RotorSequence {
    type Err = Error;

    /// Parses strings such as `"RDLU"` or `"rdlur"`. Parsing is
    /// case-insensitive and skips ASCII whitespace; any other character is
    /// rejected with its byte index.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::with_capacity(s.len());
        for (index, ch) in s.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            match Direction::from_char(ch) {
                Some(dir) => entries.push(dir),
                None => return Err(Error::InvalidDirectionChar { index, found: ch }),
            }
        }
        RotorSequence::new(entries)
    }
}

impl fmt::Display for RotorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for dir in &self.entries {
            write!(f, "{dir}")?;
        }
        Ok(())
    }
}

/// Per-pixel rotor counters for one agent, stored row-major.
///
/// Every counter is strictly below the length of the agent's rotor
/// sequence; the sequence length is fixed per agent, so the bound is
/// enforced on construction and preserved by stepping.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotorCounterGrid {
    dims: GridDims,
    counters: Vec<u32>,
}

impl RotorCounterGrid {
    /// All counters start at the first sequence entry.
    pub fn zeros(dims: GridDims) -> Self {
        RotorCounterGrid {
            dims,
            counters: vec![0; dims.cell_count()],
        }
    }

    /// Builds a grid from explicit values, validating each against the
    /// sequence length it will index into.
    pub fn from_values(dims: GridDims, values: Vec<u32>, sequence_len: usize) -> Result<Self> {
        if values.len() != dims.cell_count() {
            return Err(Error::DataLength {
                dims,
                expected: dims.cell_count(),
                got: values.len(),
            });
        }
        let grid = RotorCounterGrid {
            dims,
            counters: values,
        };
        grid.check_below(sequence_len)?;
        Ok(grid)
    }

    pub(crate) fn check_below(&self, sequence_len: usize) -> Result<()> {
        for pos in self.dims.positions() {
            let value = self.get(pos);
            if value as usize >= sequence_len {
                return Err(Error::CounterOutOfRange {
                    pos,
                    value,
                    len: sequence_len,
                });
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn get(&self, pos: Position) -> u32 {
        self.counters[self.dims.index_of(pos)]
    }

    pub fn values(&self) -> &[u32] {
        &self.counters
    }

    fn advance_at(&mut self, pos: Position, modulus: u32) {
        let counter = &mut self.counters[self.dims.index_of(pos)];
        *counter += 1;
        if *counter == modulus {
            *counter = 0;
        }
    }
}

/// How many moves an agent has taken in each direction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DirectionCensus {
    counts: [u64; 4],
}

impl DirectionCensus {
    pub fn record(&mut self, dir: Direction) {
        self.counts[dir.index()] += 1;
    }

    pub fn count(&self, dir: Direction) -> u64 {
        self.counts[dir.index()]
    }

    /// Counts in [`Direction::ALL`] order.
    pub fn counts(&self) -> [u64; 4] {
        self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Tallies a recorded direction trace.
pub fn direction_census(trace: &[Direction]) -> DirectionCensus {
    let mut census = DirectionCensus::default();
    for &dir in trace {
        census.record(dir);
    }
    census
}

/// A walker that owns its target image, rotor sequence, per-pixel counters,
/// current position, and a census of the moves it has made.
///
/// The target is shared behind an [`Arc`] so transition runs, where every
/// agent paints toward the same image, do not duplicate pixel data.
#[derive(Clone, Debug)]
pub struct Agent {
    id: u32,
    target: Arc<ImageBuffer>,
    sequence: RotorSequence,
    pos: Position,
    counters: RotorCounterGrid,
    census: DirectionCensus,
}

impl Agent {
    /// Creates an agent at `start` with all rotor counters at zero.
    pub fn new(
        id: u32,
        target: Arc<ImageBuffer>,
        sequence: RotorSequence,
        start: Position,
    ) -> Result<Self> {
        let counters = RotorCounterGrid::zeros(target.dims());
        Agent::with_counters(id, target, sequence, start, counters)
    }

    /// Creates an agent with explicit initial counters, for experiments
    /// that do not start from the all-zero rotor state.
    pub fn with_counters(
        id: u32,
        target: Arc<ImageBuffer>,
        sequence: RotorSequence,
        start: Position,
        counters: RotorCounterGrid,
    ) -> Result<Self> {
        let dims = target.dims();
        if counters.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: counters.dims(),
            });
        }
        if !dims.contains(start) {
            return Err(Error::OutOfBounds { pos: start, dims });
        }
        counters.check_below(sequence.len())?;
        Ok(Agent {
            id,
            target,
            sequence,
            pos: start,
            counters,
            census: DirectionCensus::default(),
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn dims(&self) -> GridDims {
        self.target.dims()
    }

    pub fn pos(&self) -> Position {
        self.pos
    }

    pub fn target(&self) -> &ImageBuffer {
        &self.target
    }

    pub fn sequence(&self) -> &RotorSequence {
        &self.sequence
    }

    pub fn counters(&self) -> &RotorCounterGrid {
        &self.counters
    }

    pub fn census(&self) -> DirectionCensus {
        self.census
    }

    /// The exit direction the next [`Agent::step`] call will take from the
    /// current pixel.
    pub fn peek_direction(&self) -> Direction {
        self.sequence.get(self.counters.get(self.pos) as usize)
    }

    /// One rotor move: exit the current pixel in the direction its rotor
    /// dictates, paint the destination pixel from the target image, and
    /// advance the rotor of the pixel just left.
    ///
    /// Returns the pixel that was painted. The walk itself never reads the
    /// canvas, so trajectories depend only on the start position, the
    /// sequence, and the counters.
    pub fn step(&mut self, canvas: &mut ImageBuffer) -> Position {
        debug_assert_eq!(canvas.dims(), self.dims());
        let dir = self.peek_direction();
        let dest = neighbor(self.pos, dir, self.dims());
        canvas.set(dest, self.target.get(dest));
        self.counters
            .advance_at(self.pos, self.sequence.len() as u32);
        self.census.record(dir);
        self.pos = dest;
        dest
    }

    /// One uniformly random move with the same painting contract as
    /// [`Agent::step`]. Rotor counters are left untouched, so baseline and
    /// rotor stepping can be compared from identical initial states.
    pub fn random_step<R: Rng + ?Sized>(
        &mut self,
        canvas: &mut ImageBuffer,
        rng: &mut R,
    ) -> Position {
        debug_assert_eq!(canvas.dims(), self.dims());
        let dir = Direction::ALL[rng.random_range(0..4)];
        let dest = neighbor(self.pos, dir, self.dims());
        canvas.set(dest, self.target.get(dest));
        self.census.record(dir);
        self.pos = dest;
        dest
    }
}
