use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use lzsuf::batch::{factorize_all, Parallelism};
use lzsuf::{Algorithm, Epsilon, TextBuffer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_texts(count: usize, len: usize, sigma: u8, seed: u64) -> Vec<TextBuffer> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let s: Vec<u8> = (0..len).map(|_| rng.gen_range(0..sigma)).collect();
            TextBuffer::from_bytes(&s)
        })
        .collect()
}

fn batch(c: &mut Criterion) {
    let texts = random_texts(32, 1 << 14, 4, 1);
    let symbols: usize = texts.iter().map(TextBuffer::len).sum();
    let mut group = c.benchmark_group("batch");
    group.throughput(Throughput::Elements(symbols as u64));
    group.sample_size(10);
    for algo in Algorithm::ALL {
        for (name, mode) in [
            ("sequential", Parallelism::Sequential),
            ("parallel", Parallelism::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(algo.name(), name), &mode, |b, &mode| {
                b.iter(|| factorize_all(black_box(&texts), algo, Epsilon::ONE, mode))
            });
        }
    }
    group.finish();
}

fn single(c: &mut Criterion) {
    let mut group = c.benchmark_group("single");
    group.sample_size(10);
    for len in [1 << 12, 1 << 16] {
        let text = &random_texts(1, len, 2, 2)[0];
        group.throughput(Throughput::Elements(len as u64));
        for eps in [Epsilon::new(1, 8).unwrap(), Epsilon::ONE] {
            for algo in Algorithm::ALL {
                let id = BenchmarkId::new(format!("{algo}/eps={eps}"), len);
                group.bench_function(id, |b| b.iter(|| algo.factorize(black_box(text), eps).unwrap()));
            }
        }
    }
    group.finish();
}

criterion_group!(benches, batch, single);
criterion_main!(benches);
