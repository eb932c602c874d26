use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use paraosp::redmat::{id2_sweep, ParsingVariant};
use paraosp::symfunc::char_vp;
use paraosp::verma::{gram_blocks, FactorOrder, VermaModule};
use paraosp::{Dims, Exec, Q};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("gram_blocks");
    g.sample_size(10);
    for (m, n, level) in [(1, 1, 5), (2, 1, 4), (2, 2, 3)] {
        for (name, exec) in MODES {
            g.bench_with_input(
                BenchmarkId::new(name, format!("{m}|{n} L{level}")),
                &exec,
                |b, &exec| {
                    b.iter(|| {
                        // A fresh module each time, so the memo tables start empty.
                        let module = VermaModule::new(
                            Dims::new(m, n).unwrap(),
                            Q::from_integer(2.into()),
                            FactorOrder::default(),
                        )
                        .unwrap();
                        black_box(gram_blocks(&module, level, exec))
                    })
                },
            );
        }
    }
    g.finish();
}

fn id2(c: &mut Criterion) {
    let mut g = c.benchmark_group("id2_sweep");
    g.sample_size(10);
    for (m, n) in [(1, 2), (2, 2)] {
        for (name, exec) in MODES {
            g.bench_with_input(
                BenchmarkId::new(name, format!("{m}|{n}")),
                &exec,
                |b, &exec| {
                    b.iter(|| {
                        black_box(id2_sweep(
                            m,
                            n,
                            &[1, 2, 3, 4],
                            6,
                            ParsingVariant::CANONICAL,
                            exec,
                        ))
                    })
                },
            );
        }
    }
    g.finish();
}

fn character(c: &mut Criterion) {
    let mut g = c.benchmark_group("char_vp");
    g.sample_size(10);
    for (m, n, degree) in [(2, 2, 8), (3, 2, 7)] {
        for (name, exec) in MODES {
            g.bench_with_input(
                BenchmarkId::new(name, format!("{m}|{n} D{degree}")),
                &exec,
                |b, &exec| b.iter(|| black_box(char_vp(m, n, 2, degree, exec))),
            );
        }
    }
    g.finish();
}

criterion_group!(benches, gram, id2, character);
criterion_main!(benches);
