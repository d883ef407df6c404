use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use msc_skos::entail::{builtin_ruleset, expand};
use msc_skos::query::{evaluate, parse_query};
use msc_skos::sample::{self, synthetic_source};
use msc_skos::serial::{parse_ntriples, split_per_concept, to_ntriples, to_rdfxml};
use msc_skos::skos::{build_graph, Auxiliary, SchemeConfig};
use msc_skos::source::parse_source;
use msc_skos::validate::{validate, Phase};
use msc_skos_bench::{expanded, master, records, shape};

fn stages(c: &mut Criterion) {
    let mut group = c.benchmark_group("stages");
    group.sample_size(10);
    for leaves in [5, 20] {
        let shape = shape(leaves);
        let text = synthetic_source(shape);
        let recs = records(shape);
        let m = master(shape);
        let e = expanded(shape);
        let nt = to_ntriples(&e);
        let n = shape.total();
        group.bench_with_input(BenchmarkId::new("parse", n), &text, |b, t| b.iter(|| parse_source("bench", t)));
        group.bench_with_input(BenchmarkId::new("build", n), &recs, |b, r| {
            b.iter(|| build_graph(r, &Auxiliary::default(), &SchemeConfig::default()))
        });
        let rules = builtin_ruleset();
        group.bench_with_input(BenchmarkId::new("expand", n), &m, |b, g| b.iter(|| expand(g, &rules).unwrap()));
        group.bench_with_input(BenchmarkId::new("to_ntriples", n), &e, |b, g| b.iter(|| to_ntriples(g)));
        group.bench_with_input(BenchmarkId::new("parse_ntriples", n), &nt, |b, t| {
            b.iter(|| parse_ntriples(t).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("to_rdfxml", n), &e, |b, g| b.iter(|| to_rdfxml(g)));
        group.bench_with_input(BenchmarkId::new("split", n), &e, |b, g| b.iter(|| split_per_concept(g)));
        group.bench_with_input(BenchmarkId::new("validate", n), &e, |b, g| {
            b.iter(|| validate(g, Phase::Expanded))
        });
    }
    group.finish();
}

fn listing(c: &mut Criterion) {
    let mut g = sample::expanded();
    g.extend(sample::articles().iter().cloned());
    let q = parse_query(sample::LISTING).unwrap();
    c.bench_function("listing query", |b| b.iter(|| evaluate(black_box(&g), &q)));
    c.bench_function("listing parse", |b| b.iter(|| parse_query(black_box(sample::LISTING)).unwrap()));
}

criterion_group!(benches, stages, listing);
criterion_main!(benches);
