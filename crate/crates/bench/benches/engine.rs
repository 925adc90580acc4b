use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use rotor_bench::{checkerboard, gradient};
use rotor_core::{
    AnimationState, FeatureRecord, GridDims, ImageBuffer, SnapshotSchedule, TransitionAgentSpec,
};

fn dims(rows: usize, cols: usize) -> GridDims {
    GridDims::new(rows, cols).unwrap()
}

fn transition_state(d: GridDims, sequences: &[&str], budget: u64) -> AnimationState {
    let specs = sequences
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let start = rotor_core::Position::new(
                d.rows() * (i + 1) / (sequences.len() + 1),
                d.cols() * (i + 1) / (sequences.len() + 1),
            );
            TransitionAgentSpec::new(i as u32 + 1, s.parse().unwrap(), start)
        })
        .collect();
    AnimationState::transition(
        ImageBuffer::solid(d, [255, 255, 255]),
        gradient(d),
        specs,
        budget,
    )
    .unwrap()
}

fn bench_stepping(c: &mut Criterion) {
    let mut group = c.benchmark_group("stepping");
    let steps = 100_000u64;
    group.throughput(Throughput::Elements(steps));

    group.bench_function("single_agent_400x400", |b| {
        b.iter_batched(
            || transition_state(dims(400, 400), &["RDLU"], steps),
            |mut state| {
                while state.advance() {}
                black_box(state.canvas().pixels()[0])
            },
            criterion::BatchSize::LargeInput,
        )
    });

    group.bench_function("four_agents_400x400", |b| {
        b.iter_batched(
            || transition_state(dims(400, 400), &["RDLU", "ULDR", "RDLUR", "ULDRU"], steps),
            |mut state| {
                while state.advance() {}
                black_box(state.canvas().pixels()[0])
            },
            criterion::BatchSize::LargeInput,
        )
    });

    group.finish();
}

fn bench_run_with_snapshots(c: &mut Criterion) {
    c.bench_function("run_200x200_snapshots_every_10k", |b| {
        b.iter_batched(
            || transition_state(dims(200, 200), &["RDLU"], 100_000),
            |mut state| {
                let schedule = SnapshotSchedule::every(10_000).unwrap();
                let mut snapshots = 0usize;
                let _ = state.run(&schedule, |_, canvas| {
                    snapshots += 1;
                    black_box(canvas.pixels()[0]);
                    Ok::<(), std::convert::Infallible>(())
                });
                black_box(snapshots)
            },
            criterion::BatchSize::LargeInput,
        )
    });
}

fn bench_features(c: &mut Criterion) {
    let mut group = c.benchmark_group("features");
    let img = checkerboard(dims(400, 400), 8);
    group.bench_function("all_metrics_400x400", |b| {
        b.iter(|| black_box(FeatureRecord::compute(0, black_box(&img))))
    });
    group.bench_function("gcf_400x400", |b| {
        b.iter(|| {
            black_box(rotor_core::features::global_contrast_factor(black_box(
                &img,
            )))
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_stepping,
    bench_run_with_snapshots,
    bench_features
);
criterion_main!(benches);
