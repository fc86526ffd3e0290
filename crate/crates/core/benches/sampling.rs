use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spaceform::calculus::JetConfig;
use spaceform::catalog::{self, VerifyOptions};
use spaceform::exec::Exec;

const SCHEDULES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sample(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    group.sample_size(10);
    for (id, counts) in [("bicons_r3", 65), ("small_hypersphere_m3", 25)] {
        let entry = if id == "small_hypersphere_m3" {
            catalog::instantiate("small_hypersphere", &BTreeMap::from([("m".to_string(), 3.0)]))
        } else {
            catalog::instantiate(id, &BTreeMap::new())
        }
        .unwrap()
        .with_counts(&[counts])
        .unwrap();
        for (name, exec) in SCHEDULES {
            group.bench_with_input(BenchmarkId::new(name, id), &entry, |b, e| {
                b.iter(|| black_box(e.surface.sample(JetConfig::default(), exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    let entry = catalog::instantiate("bicons_r3", &BTreeMap::new()).unwrap();
    for (name, exec) in SCHEDULES {
        let opts = VerifyOptions { exec, ..VerifyOptions::default() };
        group.bench_function(BenchmarkId::new(name, "bicons_r3"), |b| {
            b.iter(|| black_box(catalog::verify(&entry, &opts).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, sample, verify);
criterion_main!(benches);
