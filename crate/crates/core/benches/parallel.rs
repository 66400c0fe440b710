//! Parallel core against the sequential fallback on the heavier searches.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hdx::generators::{complete_complex, random_pure, torus7};
use hdx::matroid::{self, Matroid};
use hdx::par;
use hdx::spectral::{self, WeightedGraph};
use hdx::topology;
use hdx::walks::{self, WalkKind};

fn compare<R>(c: &mut Criterion, name: &str, mut f: impl FnMut() -> R) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| black_box(f())));
    group.bench_function("sequential", |b| b.iter(|| par::sequential(|| black_box(f()))));
    group.finish();
}

fn benches(c: &mut Criterion) {
    let torus = torus7();
    compare(c, "torus7 expansion", || topology::expansion_constants(&torus, topology::DEFAULT_ENUM_CAP).unwrap());

    let g = WeightedGraph::from_complex(&random_pure(18, 1, 0.4, 1).unwrap()).unwrap();
    compare(c, "cheeger 18 vertices", || g.cheeger(spectral::DEFAULT_CUT_CAP).unwrap());

    let x = complete_complex(9, 3).unwrap();
    compare(c, "certify complete(9,3)", || spectral::certify_local_spectral(&x, 0.0, 1e-9).unwrap());

    let k8 = complete_complex(8, 2).unwrap();
    let start = k8.faces(2)[0].clone();
    compare(c, "sampler 20k chains", || {
        walks::empirical_distribution(&k8, 2, WalkKind::DownUp, &start, 10, 20_000, 3).unwrap()
    });

    let m = Matroid::uniform(12, 4).unwrap();
    compare(c, "base chains", || matroid::sample_bases(&m, &[0, 1, 2, 3], 200, 5, 2_000).unwrap());
}

criterion_group!(parallel, benches);
criterion_main!(parallel);
