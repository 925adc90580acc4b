//! Engine integration tests: rotor-walk periodicity, full-coverage
//! transitions, and run/schedule semantics at realistic sizes.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rotor_core::{
    Agent, AgentSpec, AnimationState, Direction, GridDims, ImageBuffer, Position, RotorSequence,
    SnapshotSchedule, TransitionAgentSpec,
};

fn gradient(dims: GridDims) -> ImageBuffer {
    ImageBuffer::from_fn(dims, |p| {
        [
            (p.row * 255 / dims.rows().max(2).saturating_sub(1)) as u8,
            (p.col * 255 / dims.cols().max(2).saturating_sub(1)) as u8,
            128,
        ]
    })
}

/// Finds the first revisited (position, counters) state of a lone agent
/// and returns (steps until the revisit, cycle period).
fn first_recurrence(agent: &mut Agent, canvas: &mut ImageBuffer, limit: u64) -> (u64, u64) {
    let mut seen: HashMap<(Position, Vec<u32>), u64> = HashMap::new();
    for step in 0..=limit {
        let state = (agent.pos(), agent.counters().values().to_vec());
        if let Some(&first) = seen.get(&state) {
            return (step, step - first);
        }
        seen.insert(state, step);
        agent.step(canvas);
    }
    panic!("no recurrent state within {limit} steps");
}

/// A symmetric rotor walk settles into an Eulerian circuit of the torus:
/// the combined (position, counters) state recurs with period 4mn, and one
/// period traverses every directed edge exactly once.
fn assert_eulerian_cycle(rows: usize, cols: usize) {
    let dims = GridDims::new(rows, cols).unwrap();
    let target = Arc::new(ImageBuffer::solid(dims, [255, 0, 0]));
    let sequence: RotorSequence = "RDLU".parse().unwrap();
    let mut canvas = ImageBuffer::solid(dims, [0, 0, 0]);
    let mut agent = Agent::new(1, target, sequence, Position::new(0, 0)).unwrap();

    let edges_in_torus = (4 * rows * cols) as u64;
    let (_, period) = first_recurrence(&mut agent, &mut canvas, 100_000);
    assert_eq!(period, edges_in_torus, "period on the {rows}x{cols} torus");

    // `agent` now sits in a recurrent state; one period covers each
    // directed edge (pixel, direction) exactly once.
    let mut edges: HashSet<(Position, Direction)> = HashSet::new();
    for _ in 0..period {
        assert!(edges.insert((agent.pos(), agent.peek_direction())));
        agent.step(&mut canvas);
    }
    assert_eq!(edges.len() as u64, edges_in_torus);
}

#[test]
fn symmetric_walk_cycles_through_every_edge_4x4() {
    assert_eulerian_cycle(4, 4);
}

#[test]
fn symmetric_walk_cycles_through_every_edge_3x5() {
    assert_eulerian_cycle(3, 5);
}

#[test]
fn transition_covers_and_then_never_deviates() {
    let dims = GridDims::new(16, 16).unwrap();
    let start = gradient(dims);
    let target = ImageBuffer::from_fn(dims, |p| [10, (p.row * 16) as u8, (p.col * 16) as u8]);
    let specs = vec![TransitionAgentSpec::new(
        1,
        "RDLU".parse().unwrap(),
        Position::new(8, 8),
    )];
    let mut state = AnimationState::transition(start, target.clone(), specs, u64::MAX).unwrap();
    while !state.painted().is_full() {
        assert!(state.advance(), "budget exhausted before full coverage");
    }
    assert_eq!(state.canvas(), &target);

    for _ in 0..5_000 {
        state.advance();
    }
    assert_eq!(state.canvas(), &target, "full coverage must be a fixpoint");
}

#[test]
fn animation_pixels_come_from_start_or_some_target() {
    let dims = GridDims::new(12, 12).unwrap();
    let start = ImageBuffer::solid(dims, [1, 2, 3]);
    let targets = [[200, 0, 0], [0, 200, 0], [0, 0, 200]];
    let specs: Vec<AgentSpec> = targets
        .iter()
        .enumerate()
        .map(|(i, &px)| {
            AgentSpec::new(
                i as u32 + 1,
                Arc::new(ImageBuffer::solid(dims, px)),
                "RDLUR".parse().unwrap(),
                Position::new(i * 4, i * 4),
            )
        })
        .collect();
    let mut state = AnimationState::new(start, specs, 3_000).unwrap();
    while state.advance() {}
    for pos in dims.positions() {
        let px = state.canvas().get(pos);
        if state.painted().is_painted(pos) {
            assert!(targets.contains(&px), "painted {pos} has foreign {px:?}");
        } else {
            assert_eq!(px, [1, 2, 3], "unpainted {pos} lost the start color");
        }
    }
}

#[test]
fn zero_budget_run_emits_the_initialized_canvas_once() {
    let dims = GridDims::new(5, 5).unwrap();
    let start = ImageBuffer::solid(dims, [7, 7, 7]);
    let target = ImageBuffer::solid(dims, [250, 0, 0]);
    let specs = vec![TransitionAgentSpec::new(
        1,
        "RDLU".parse().unwrap(),
        Position::new(2, 2),
    )];
    let mut state = AnimationState::transition(start, target, specs, 0).unwrap();
    let schedule = SnapshotSchedule::at(vec![0], 0).unwrap();
    let mut snapshots = Vec::new();
    let report = state
        .run(&schedule, |step, canvas| {
            snapshots.push((step, canvas.clone()));
            Ok::<(), std::convert::Infallible>(())
        })
        .unwrap();

    assert_eq!(report.steps, 0);
    assert_eq!(report.snapshots, 1);
    assert_eq!(snapshots.len(), 1);
    let (step, canvas) = &snapshots[0];
    assert_eq!(*step, 0);
    // Only the start pixel is painted at step 0.
    assert_eq!(canvas.get(Position::new(2, 2)), [250, 0, 0]);
    assert_eq!(canvas.get(Position::new(0, 0)), [7, 7, 7]);
    assert!((report.coverage - 1.0 / 25.0).abs() < 1e-12);
}

#[test]
fn every_k_schedule_counts_match_over_a_real_run() {
    let dims = GridDims::new(10, 10).unwrap();
    let start = ImageBuffer::solid(dims, [0, 0, 0]);
    let target = ImageBuffer::solid(dims, [9, 9, 9]);
    let specs = vec![
        TransitionAgentSpec::new(1, "RDLU".parse().unwrap(), Position::new(2, 2)),
        TransitionAgentSpec::new(2, "ULDR".parse().unwrap(), Position::new(7, 7)),
    ];
    let mut state = AnimationState::transition(start, target, specs, 1_000).unwrap();
    let schedule = SnapshotSchedule::every(100).unwrap();
    let mut steps_seen = Vec::new();
    let report = state
        .run(&schedule, |step, _| {
            steps_seen.push(step);
            Ok::<(), std::convert::Infallible>(())
        })
        .unwrap();

    assert_eq!(report.steps, 1_000);
    assert_eq!(report.snapshots, schedule.count_within(1_000));
    let expected: Vec<u64> = (0..=10).map(|k| k * 100).collect();
    assert_eq!(steps_seen, expected);
    let move_total: u64 = report.censuses.iter().map(|c| c.census.total()).sum();
    assert_eq!(move_total, 2_000);
}
