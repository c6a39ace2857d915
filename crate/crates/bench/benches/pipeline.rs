use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use leadrel_core::classify3::{classify, normalize, sample_line, Tag};
use leadrel_core::jvdk::decompose2;
use leadrel_core::relations::relation_report;
use leadrel_core::sample::{case_rng, random_word, WordShape};
use leadrel_core::WeightVector;

fn plane_maps(count: usize) -> Vec<leadrel_core::PolyMap> {
    (0..count).map(|i| random_word(&mut case_rng(1, i), &WordShape::plane()).expand()).collect()
}

fn bench_decompose(c: &mut Criterion) {
    let maps = plane_maps(16);
    c.bench_function("decompose2/plane16", |b| {
        b.iter(|| maps.iter().for_each(|m| drop(black_box(decompose2(m).unwrap()))))
    });
}

fn bench_relations(c: &mut Criterion) {
    let maps = plane_maps(8);
    let w = WeightVector::standard(2);
    c.bench_function("relation_report/plane8", |b| {
        b.iter(|| maps.iter().for_each(|m| drop(black_box(relation_report(m, &w).unwrap()))))
    });
}

fn bench_classify(c: &mut Criterion) {
    let samples: Vec<_> = Tag::NONZERO.iter().map(|&t| sample_line(t, &mut case_rng(2, t as usize))).collect();
    c.bench_function("classify3/all-lines", |b| {
        b.iter(|| {
            for s in &samples {
                let out = classify(&s.r, &s.weights()).unwrap();
                black_box(normalize(out.relation_type().unwrap()).unwrap());
            }
        })
    });
}

criterion_group!(benches, bench_decompose, bench_relations, bench_classify);
criterion_main!(benches);
