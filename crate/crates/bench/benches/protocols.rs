use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxcard_bench::coverage_instance;
use maxcard_core::nlp::grid_search;
use maxcard_core::protocol::{run_two_player, ProtocolKind};
use maxcard_core::robust::{build_summary, query_summary};

fn two_player(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_player");
    let inst = coverage_instance(16, 3);
    let part = inst.partition().unwrap();
    let o = inst.oracle(None).unwrap();
    for kind in [
        ProtocolKind::P1,
        ProtocolKind::P1Grouped { eps: 0.1 },
        ProtocolKind::P3,
        ProtocolKind::Half,
        ProtocolKind::Sieve { eps: 0.1 },
    ] {
        let proto = kind.build().unwrap();
        group.bench_function(BenchmarkId::new(kind.short_name(), 16), |b| {
            b.iter(|| run_two_player(proto.as_ref(), &part, &o, 3).unwrap())
        });
    }
    group.finish();
}

fn robust(c: &mut Criterion) {
    let inst = coverage_instance(14, 4);
    let o = inst.oracle(None).unwrap();
    let ground: Vec<usize> = (0..14).collect();
    c.bench_function("robust_build_p3_d3", |b| b.iter(|| build_summary(&o, &ground, 3, 3, ProtocolKind::P3).unwrap()));
    let s = build_summary(&o, &ground, 3, 3, ProtocolKind::P3).unwrap();
    let deleted = s.copies[0].elements.clone();
    c.bench_function("robust_query_p3_d3", |b| b.iter(|| query_summary(&s, &o, &deleted).unwrap()));
}

fn nlp(c: &mut Criterion) {
    c.bench_function("nlp_grid_0.01", |b| b.iter(|| grid_search(0.01, 10.0)));
}

criterion_group!(benches, two_player, robust, nlp);
criterion_main!(benches);
