//! The multi-agent engine: state construction for transitions and
//! animations, lock-step advancement, snapshot schedules, and run reports.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{Error, Result};
use crate::imaging::{ImageBuffer, PaintedBitmap};
use crate::walk::{Agent, DirectionCensus, GridDims, Position, RotorCounterGrid, RotorSequence};

/// Whether all agents paint toward one shared target image (a transition)
/// or each agent carries its own target (an animation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Transition,
    Animation,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Transition => "transition",
            Mode::Animation => "animation",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "transition" => Ok(Mode::Transition),
            "animation" => Ok(Mode::Animation),
            other => Err(format!(
                "unknown mode `{other}` (expected `transition` or `animation`)"
            )),
        }
    }
}

/// Everything needed to place one agent in a simulation.
#[derive(Clone, Debug)]
pub struct AgentSpec {
    pub id: u32,
    pub target: Arc<ImageBuffer>,
    pub sequence: RotorSequence,
    pub start: Position,
    /// Explicit rotor state for experiments that do not begin from all-zero
    /// counters; `None` means all counters start at zero.
    pub initial_counters: Option<RotorCounterGrid>,
}

impl AgentSpec {
    pub fn new(
        id: u32,
        target: Arc<ImageBuffer>,
        sequence: RotorSequence,
        start: Position,
    ) -> Self {
        AgentSpec {
            id,
            target,
            sequence,
            start,
            initial_counters: None,
        }
    }
}

/// An [`AgentSpec`] without a target image, for transition runs where the
/// shared target is supplied once.
#[derive(Clone, Debug)]
pub struct TransitionAgentSpec {
    pub id: u32,
    pub sequence: RotorSequence,
    pub start: Position,
}

impl TransitionAgentSpec {
    pub fn new(id: u32, sequence: RotorSequence, start: Position) -> Self {
        TransitionAgentSpec {
            id,
            sequence,
            start,
        }
    }
}

/// Which steps of a run get a canvas snapshot. Step 0 is the initial
/// canvas (start image with the agents' start pixels already painted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SnapshotSchedule {
    /// Every multiple of `k`, including step 0.
    EveryK(u64),
    /// An explicit strictly increasing list of steps.
    At(Vec<u64>),
}

impl SnapshotSchedule {
    pub fn every(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroSnapshotInterval);
        }
        Ok(SnapshotSchedule::EveryK(k))
    }

    /// Validates that `steps` is strictly increasing and within `budget`.
    pub fn at(steps: Vec<u64>, budget: u64) -> Result<Self> {
        for pair in steps.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::UnsortedSchedule(pair[1]));
            }
        }
        if let Some(&last) = steps.last() {
            if last > budget {
                return Err(Error::ScheduleBeyondBudget { step: last, budget });
            }
        }
        Ok(SnapshotSchedule::At(steps))
    }

    pub fn contains(&self, step: u64) -> bool {
        match self {
            SnapshotSchedule::EveryK(k) => step.is_multiple_of(*k),
            SnapshotSchedule::At(steps) => steps.binary_search(&step).is_ok(),
        }
    }

    /// Number of snapshots a run of `budget` steps will produce.
    pub fn count_within(&self, budget: u64) -> usize {
        match self {
            SnapshotSchedule::EveryK(k) => (budget / k + 1) as usize,
            SnapshotSchedule::At(steps) => steps.iter().filter(|&&s| s <= budget).count(),
        }
    }
}

/// Direction census of one agent, labeled with its id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AgentCensus {
    pub id: u32,
    pub census: DirectionCensus,
}

/// What a finished (or aborted) run did.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub steps: u64,
    pub coverage: f64,
    pub censuses: Vec<AgentCensus>,
    pub snapshots: usize,
    pub wall: Duration,
}

impl RunReport {
    /// Key/value rendering used in run reports; one census line per agent.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "steps: {}", self.steps);
        let _ = writeln!(out, "coverage: {:.6}", self.coverage);
        let _ = writeln!(out, "snapshots: {}", self.snapshots);
        let _ = writeln!(out, "wall_ms: {}", self.wall.as_millis());
        for agent in &self.censuses {
            let [right, down, left, up] = agent.census.counts();
            let _ = writeln!(
                out,
                "census: agent={} right={} down={} left={} up={} total={}",
                agent.id,
                right,
                down,
                left,
                up,
                agent.census.total()
            );
        }
        out
    }
}

/// A run that stopped early because the snapshot sink failed. Carries the
/// report of the work completed before the failure.
#[derive(Debug)]
pub struct RunAborted<E> {
    pub report: RunReport,
    pub error: E,
}

/// Full simulation state: the canvas being painted, the untouched start
/// image, the agents in ascending id order, the step count, the step
/// budget, and which pixels have been painted so far.
#[derive(Clone, Debug)]
pub struct AnimationState {
    canvas: ImageBuffer,
    start: ImageBuffer,
    agents: Vec<Agent>,
    step: u64,
    budget: u64,
    painted: PaintedBitmap,
}

impl AnimationState {
    /// Builds an animation: every agent has its own target. All targets
    /// must match the start image's dimensions and agent ids must be
    /// unique. Each agent's start pixel is painted immediately, in
    /// ascending id order.
    pub fn new(start: ImageBuffer, specs: Vec<AgentSpec>, budget: u64) -> Result<Self> {
        let dims = start.dims();
        let mut agents = Vec::with_capacity(specs.len());
        for spec in specs {
            if spec.target.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    got: spec.target.dims(),
                });
            }
            let agent = match spec.initial_counters {
                Some(counters) => {
                    Agent::with_counters(spec.id, spec.target, spec.sequence, spec.start, counters)?
                }
                None => Agent::new(spec.id, spec.target, spec.sequence, spec.start)?,
            };
            agents.push(agent);
        }
        agents.sort_by_key(Agent::id);
        for pair in agents.windows(2) {
            if pair[0].id() == pair[1].id() {
                return Err(Error::DuplicateAgentId(pair[0].id()));
            }
        }

        let mut canvas = start.clone();
        let mut painted = PaintedBitmap::new(dims);
        for agent in &agents {
            canvas.set(agent.pos(), agent.target().get(agent.pos()));
            painted.mark(agent.pos());
        }
        Ok(AnimationState {
            canvas,
            start,
            agents,
            step: 0,
            budget,
            painted,
        })
    }

    /// Builds a transition: every agent paints toward the one shared
    /// target, which is stored once and shared by reference.
    pub fn transition(
        start: ImageBuffer,
        target: ImageBuffer,
        specs: Vec<TransitionAgentSpec>,
        budget: u64,
    ) -> Result<Self> {
        if target.dims() != start.dims() {
            return Err(Error::DimensionMismatch {
                expected: start.dims(),
                got: target.dims(),
            });
        }
        let shared = Arc::new(target);
        let specs = specs
            .into_iter()
            .map(|spec| AgentSpec::new(spec.id, Arc::clone(&shared), spec.sequence, spec.start))
            .collect();
        AnimationState::new(start, specs, budget)
    }

    pub fn canvas(&self) -> &ImageBuffer {
        &self.canvas
    }

    pub fn start_image(&self) -> &ImageBuffer {
        &self.start
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn dims(&self) -> GridDims {
        self.start.dims()
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn painted(&self) -> &PaintedBitmap {
        &self.painted
    }

    pub fn coverage(&self) -> f64 {
        self.painted.fraction()
    }

    /// Advances every agent one rotor move, in ascending id order, so on a
    /// shared destination the highest id paints last and wins. Returns
    /// false (and does nothing) once the step budget is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.step == self.budget {
            return false;
        }
        for agent in &mut self.agents {
            let dest = agent.step(&mut self.canvas);
            self.painted.mark(dest);
        }
        self.step += 1;
        true
    }

    /// Baseline counterpart of [`AnimationState::advance`]: every agent
    /// draws a uniformly random direction from `rng` instead of consulting
    /// its rotor, in the same ascending id order.
    pub fn advance_random<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        if self.step == self.budget {
            return false;
        }
        for agent in &mut self.agents {
            let dest = agent.random_step(&mut self.canvas, rng);
            self.painted.mark(dest);
        }
        self.step += 1;
        true
    }

    /// Runs the rotor walk to the step budget, handing scheduled canvas
    /// snapshots to `sink`. A sink failure aborts the run and returns the
    /// partial report alongside the error.
    pub fn run<F, E>(
        &mut self,
        schedule: &SnapshotSchedule,
        mut sink: F,
    ) -> std::result::Result<RunReport, RunAborted<E>>
    where
        F: FnMut(u64, &ImageBuffer) -> std::result::Result<(), E>,
    {
        let started = Instant::now();
        let mut snapshots = 0usize;
        self.emit(schedule, &mut sink, &mut snapshots, started)?;
        while self.advance() {
            self.emit(schedule, &mut sink, &mut snapshots, started)?;
        }
        Ok(self.report(snapshots, started.elapsed()))
    }

    /// Baseline counterpart of [`AnimationState::run`] using uniformly
    /// random moves drawn from `rng`.
    pub fn run_random<R, F, E>(
        &mut self,
        schedule: &SnapshotSchedule,
        rng: &mut R,
        mut sink: F,
    ) -> std::result::Result<RunReport, RunAborted<E>>
    where
        R: Rng + ?Sized,
        F: FnMut(u64, &ImageBuffer) -> std::result::Result<(), E>,
    {
        let started = Instant::now();
        let mut snapshots = 0usize;
        self.emit(schedule, &mut sink, &mut snapshots, started)?;
        while self.advance_random(rng) {
            self.emit(schedule, &mut sink, &mut snapshots, started)?;
        }
        Ok(self.report(snapshots, started.elapsed()))
    }

    fn emit<F, E>(
        &self,
        schedule: &SnapshotSchedule,
        sink: &mut F,
        snapshots: &mut usize,
        started: Instant,
    ) -> std::result::Result<(), RunAborted<E>>
    where
        F: FnMut(u64, &ImageBuffer) -> std::result::Result<(), E>,
    {
        if !schedule.contains(self.step) {
            return Ok(());
        }
        match sink(self.step, &self.canvas) {
            Ok(()) => {
                *snapshots += 1;
                Ok(())
            }
            Err(error) => Err(RunAborted {
                report: self.report(*snapshots, started.elapsed()),
                error,
            }),
        }
    }

    fn report(&self, snapshots: usize, wall: Duration) -> RunReport {
        RunReport {
            steps: self.step,
            coverage: self.coverage(),
            censuses: self
                .agents
                .iter()
                .map(|agent| AgentCensus {
                    id: agent.id(),
                    census: agent.census(),
                })
                .collect(),
            snapshots,
            wall,
        }
    }
}
