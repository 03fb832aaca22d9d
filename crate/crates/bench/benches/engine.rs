use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use effseq_core::fiber::val_3n_minus_1;
use effseq_core::objects::Catalog;
use effseq_core::ss::{SpectralSequence, Window};
use effseq_core::verify::{golden_charts, render_chart_text};
use effseq_core::TriDegree;

fn valuation(c: &mut Criterion) {
    c.bench_function("val_3n_minus_1 up to 2^16", |b| {
        b.iter(|| (1..=1i64 << 16).map(|n| val_3n_minus_1(black_box(n)).unwrap()).sum::<u32>())
    });
}

fn e1_basis(c: &mut Criterion) {
    let ko = Catalog::global().presentation("ko").unwrap();
    c.bench_function("basis_at ko, 45 x 21 x 45 degrees", |b| {
        b.iter(|| {
            let mut n = 0;
            for s in -4..=40 {
                for f in 0..=20 {
                    for w in -20..=24 {
                        n += ko.basis_at(black_box(TriDegree::new(s, f, w))).len();
                    }
                }
            }
            n
        })
    });
}

fn spectral_sequences(c: &mut Criterion) {
    let mut group = c.benchmark_group("run");
    group.sample_size(10);
    for (name, stems, coweights) in [("ko_C", (0, 24), (0, 16)), ("ko", (-4, 24), (0, 24)), ("L", (-2, 24), (0, 24))] {
        let obj = Catalog::global().object(name).unwrap();
        let window = Window::new(stems, (0, 16)).with_coweights(coweights.0, coweights.1);
        group.bench_function(name, |b| b.iter(|| SpectralSequence::run(obj.clone(), black_box(window), None).unwrap()));
    }
    group.finish();
}

fn charts(c: &mut Criterion) {
    let mut group = c.benchmark_group("chart");
    group.sample_size(10);
    for g in golden_charts() {
        group.bench_function(g.name, |b| b.iter(|| render_chart_text(black_box(&g.spec)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, valuation, e1_basis, spectral_sequences, charts);
criterion_main!(benches);
