use criterion::{criterion_group, criterion_main, Criterion};

use formstr_core::batch;
use formstr_core::strength::{astr, str_exact_finite_field};
use formstr_core::verify::{gf2_cubic_corpus, gf2_form, Gf2Space, EXACT_BUDGET};

fn corpus_strength(c: &mut Criterion) {
    let space = Gf2Space::new(3, 3);
    let forms: Vec<_> = gf2_cubic_corpus().iter().map(|&m| gf2_form(&space, m)).collect();
    let work = |f: &formstr_core::strength::Form| {
        let s = str_exact_finite_field(f, EXACT_BUDGET).unwrap().value();
        (s, astr(f).unwrap().value)
    };
    let mut group = c.benchmark_group("gf2_cubic_corpus");
    group.sample_size(10);
    group.bench_function("sequential", |b| b.iter(|| batch::map_sequential(&forms, work)));
    group.bench_function(if batch::is_parallel() { "parallel" } else { "parallel (feature off)" }, |b| {
        b.iter(|| batch::map(&forms, work))
    });
    group.finish();
}

criterion_group!(benches, corpus_strength);
criterion_main!(benches);
