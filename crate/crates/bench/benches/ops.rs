use criterion::{black_box, criterion_group, criterion_main, Criterion};

use gslrel::grouprep::close_group;
use gslrel::linalg::{Mat, Subspace};
use gslrel::sample::ModelSpec;
use gslrel::wwcat::lemma4_normal_form;
use gslrel_bench::{composable_pair, space, word};

fn bench_rref(c: &mut Criterion) {
    // a dense 12x12 rational matrix with mixed denominators
    let m = Mat::from_fn(12, 12, |r, cidx| {
        gslrel::linalg::ratq((r * cidx) as i64 % 7 - 3, (r + cidx + 1) as i64)
    });
    c.bench_function("rref_12x12", |b| b.iter(|| black_box(&m).rref_canonical()));
}

fn bench_kernel(c: &mut Criterion) {
    let m = Mat::from_fn(8, 16, |r, cidx| {
        gslrel::linalg::rat(((r * 5 + cidx * 3) % 7) as i64 - 3)
    });
    c.bench_function("kernel_8x16", |b| {
        b.iter(|| Subspace::kernel(black_box(&m)))
    });
}

fn bench_group_closure(c: &mut Criterion) {
    let r = Mat::from_int_rows(2, &[&[0, -1], &[1, -1]]);
    let s = Mat::from_int_rows(2, &[&[0, 1], &[1, 0]]);
    c.bench_function("close_s3", |b| {
        b.iter(|| close_group(black_box(&[r.clone(), s.clone()])).unwrap())
    });
}

fn bench_compose(c: &mut Criterion) {
    let (f, g) = composable_pair(ModelSpec::S3, 11);
    c.bench_function("compose_s3", |b| {
        b.iter(|| f.compose(black_box(&g)).unwrap())
    });
    c.bench_function("pair_excess_s3", |b| {
        b.iter(|| f.pair_excess(black_box(&g)).unwrap())
    });
}

fn bench_normalize(c: &mut Criterion) {
    let w = word(ModelSpec::Z4, 3, 13);
    c.bench_function("normalize_word3_z4", |b| {
        b.iter(|| black_box(&w).normalize())
    });
}

fn bench_lemma4(c: &mut Criterion) {
    let mut s = gslrel_bench::sampler(ModelSpec::Z2, 17);
    let sp = space(ModelSpec::Z2, 17);
    let l = s.lagrangian(&sp);
    let i = s.isotropic(&sp);
    c.bench_function("lemma4_normal_form_z2", |b| {
        b.iter(|| lemma4_normal_form(black_box(&sp.space), &l, &i).unwrap())
    });
}

criterion_group!(
    benches,
    bench_rref,
    bench_kernel,
    bench_group_closure,
    bench_compose,
    bench_normalize,
    bench_lemma4
);
criterion_main!(benches);
