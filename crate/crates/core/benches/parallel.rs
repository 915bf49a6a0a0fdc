//! Single-threaded vs default rayon pool on the data-parallel kernels.
//!
//! Without the `parallel` feature only the sequential variant runs.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use normclust::ballhull::build_tree;
use normclust::clustering::{avis_min_max_2cluster, k_cluster_minimize, Objective};
use normclust::separation::separate_clusters;
use normclust::{NormedPlane, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn points(seed: u64, n: usize, span: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.random_range(-span..span), rng.random_range(-span..span)))
        .collect()
}

/// Where a benchmark body runs: a 1-thread pool or the default pool.
#[cfg(feature = "parallel")]
struct Runner(rayon::ThreadPool);

#[cfg(feature = "parallel")]
impl Runner {
    fn new(threads: usize) -> Self {
        Runner(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool"),
        )
    }

    fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.0.install(f)
    }
}

#[cfg(not(feature = "parallel"))]
struct Runner;

#[cfg(not(feature = "parallel"))]
impl Runner {
    fn new(_threads: usize) -> Self {
        Runner
    }

    fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        f()
    }
}

/// `(name, runner)`; thread count 0 means the rayon default.
fn variants() -> Vec<(&'static str, Runner)> {
    if cfg!(feature = "parallel") {
        vec![("sequential", Runner::new(1)), ("parallel", Runner::new(0))]
    } else {
        vec![("sequential", Runner::new(1))]
    }
}

fn kernels(c: &mut Criterion) {
    let euclid = NormedPlane::euclidean();
    let l1 = NormedPlane::l1();

    let tree_pts = points(1, 20_000, 0.5);
    let mut g = c.benchmark_group("build_tree_20k");
    for (name, pool) in variants() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.run(|| build_tree(&euclid, black_box(&tree_pts), 1.0).unwrap()))
        });
    }
    g.finish();

    let avis_pts = points(2, 300, 10.0);
    let mut g = c.benchmark_group("avis_2cluster_300");
    for (name, pool) in variants() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.run(|| avis_min_max_2cluster(&l1, black_box(&avis_pts)).unwrap()))
        });
    }
    g.finish();

    let k_pts = points(3, 24, 10.0);
    let mut g = c.benchmark_group("k_cluster_3_of_24");
    for (name, pool) in variants() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                pool.run(|| {
                    k_cluster_minimize(&euclid, black_box(&k_pts), 3, Objective::MAX_DIAMETER).unwrap()
                })
            })
        });
    }
    g.finish();

    // collinear clusters take the exhaustive line search
    let a: Vec<Point> = (0..12).map(|i| Point::new(i as f64, 0.0)).collect();
    let b: Vec<Point> = (0..12).map(|i| Point::new(i as f64 + 0.5, 0.0)).collect();
    let mut g = c.benchmark_group("separate_collinear");
    for (name, pool) in variants() {
        g.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| pool.run(|| separate_clusters(&euclid, black_box(&a), black_box(&b)).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(3));
    targets = kernels
);
criterion_main!(benches);
