use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kennelgrid_core::fitness::{evaluate_population, evaluate_population_serial};
use kennelgrid_core::ga::{init_population, GaConfig, IdCounter};
use kennelgrid_core::{CageSpec, DoorSpec, Shelter, ShelterSpec, StrategyMix, Wall};

fn dog_shelter() -> Shelter {
    let doors = (0..6)
        .map(|k| DoorSpec {
            wall: if k % 2 == 0 { Wall::South } else { Wall::North },
            offset_m: 8.4 + 25.2 * (k / 2) as f64,
            width_m: 2.8,
        })
        .collect();
    Shelter::new(ShelterSpec {
        length_m: 81.2,
        width_m: 36.4,
        resolution_m: 1.4,
        doors,
        columns: vec![],
        cage: CageSpec {
            length_m: 4.2,
            width_m: 1.4,
            clearance_m: 1.4,
        },
        requested_cages: 280,
    })
    .unwrap()
}

fn bench_evaluation(c: &mut Criterion) {
    let shelter = dog_shelter();
    let cfg = GaConfig {
        strategy_mix: StrategyMix::from_weights([0.05, 0.0, 0.35, 0.3, 0.3]),
        ..Default::default()
    };
    let population = init_population(&shelter, &cfg, &mut IdCounter::default());

    let mut group = c.benchmark_group("evaluate_population");
    group.sample_size(20);
    group.bench_function("serial", |b| {
        b.iter(|| evaluate_population_serial(black_box(&shelter), black_box(&population)))
    });
    // resolves to the serial path when built without the `parallel` feature
    group.bench_function("parallel", |b| {
        b.iter(|| evaluate_population(black_box(&shelter), black_box(&population)))
    });
    group.finish();
}

fn bench_init(c: &mut Criterion) {
    let shelter = dog_shelter();
    let cfg = GaConfig {
        strategy_mix: StrategyMix::from_weights([0.05, 0.0, 0.35, 0.3, 0.3]),
        ..Default::default()
    };
    let mut group = c.benchmark_group("init_population");
    group.sample_size(10);
    group.bench_function("dog_shelter", |b| {
        b.iter(|| init_population(black_box(&shelter), &cfg, &mut IdCounter::default()))
    });
    group.finish();
}

criterion_group!(benches, bench_evaluation, bench_init);
criterion_main!(benches);
