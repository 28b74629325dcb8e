use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flcc::flcc::{BuiltinJob, FlccDims};
use flcc::frs::{list_decode, FrsParams};
use flcc::prune::{prune, select_points_deterministic, select_points_random};
use flcc::sim::{run_trial, AdversaryKind, AdversaryModel, ModeKind, SimConfig};
use flcc::PrimeField;
use flcc_bench::{noisy_word, random_coords, random_subspace, side_info};

fn bench_list_decode(c: &mut Criterion) {
    let f = PrimeField::new(257).unwrap();
    let mut g = c.benchmark_group("list_decode");
    for (n, m, k, s, errors) in [(32, 4, 4, 2, 4), (160, 4, 23, 2, 15), (160, 4, 23, 4, 9)] {
        let p = FrsParams::new(f, n, m, k).unwrap();
        let y = noisy_word(&p, errors, 1);
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("n{n}_k{k}_s{s}")),
            &y,
            |b, y| b.iter(|| list_decode(black_box(y), s, &p).unwrap()),
        );
    }
    g.finish();
}

fn bench_prune(c: &mut Criterion) {
    let f = PrimeField::new(257).unwrap();
    let mut g = c.benchmark_group("prune");
    for l in [1, 3] {
        let d = random_subspace(&f, 23, l, 2);
        let x = random_coords(&f, l, 3);
        let det = select_points_deterministic(&f, &d).unwrap();
        let det_vals = side_info(&f, &d, &x, &det.points);
        g.bench_function(format!("deterministic_l{l}"), |b| {
            b.iter(|| prune(&f, black_box(&d), &det, &det_vals).unwrap())
        });
        let rnd = select_points_random(6, 4, &f).unwrap();
        let rnd_vals = side_info(&f, &d, &x, &rnd.points);
        g.bench_function(format!("random_t6_l{l}"), |b| {
            b.iter(|| prune(&f, black_box(&d), &rnd, &rnd_vals).unwrap())
        });
    }
    g.finish();
}

fn bench_protocol(c: &mut Criterion) {
    let dims = FlccDims {
        workers: 40,
        batch: 2,
        privacy: 1,
        stragglers: 2,
        adversaries: 19,
        fold: 4,
        degree: 2,
    };
    let mut g = c.benchmark_group("protocol_trial");
    g.sample_size(20);
    for (name, mode) in [
        ("deterministic", ModeKind::Deterministic),
        ("probabilistic_t3", ModeKind::Probabilistic { t: 3 }),
    ] {
        let cfg = SimConfig {
            q: 257,
            dims,
            job: BuiltinJob::EntrywiseSquare,
            mode,
            adversary: AdversaryModel {
                kind: AdversaryKind::Aliasing,
                count: 19,
            },
            shape: (2, 2),
            consistency_check: false,
        };
        let params = cfg.params().unwrap();
        g.bench_function(name, |b| {
            b.iter(|| run_trial(&cfg, &params, black_box(7)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_list_decode, bench_prune, bench_protocol);
criterion_main!(benches);
