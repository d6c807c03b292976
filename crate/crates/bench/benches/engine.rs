use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use twc_core::check::{self, Config};
use twc_core::examples;
use twc_core::gen::Gen;
use twc_core::hat;
use twc_core::scalar::Field;
use twc_core::tri;
use twc_core::tw::{self, star};

fn stasheff(c: &mut Criterion) {
    let z = examples::e3(Field::Q);
    c.bench_function("e3 stasheff n<=5", |b| {
        b.iter(|| (1..=5).map(|n| z.check_stasheff(n).len()).sum::<usize>())
    });
    c.bench_function("e3 hat-stasheff window 1", |b| {
        b.iter(|| {
            let mut bad = 0;
            for base in z.chains(4) {
                for p in hat::profiles(4, 1) {
                    bad += usize::from(!hat::hat_stasheff_residue(&z, &hat::lift(&base, &p)).is_empty());
                }
            }
            bad
        })
    });
}

fn twisted(c: &mut Criterion) {
    let z = examples::e3(Field::Q);
    let mut g = Gen::new(&z, 7, 4);
    let (x, y, w) = (g.object(), g.object(), g.object());
    let (f, h) = (g.cocycle(&x, &y), g.cocycle(&y, &w));
    c.bench_function("star dims 4", |b| b.iter(|| star(&z, black_box(&h), black_box(&f))));
    let d = star(&z, &h, &f);
    c.bench_function("coboundary witness dims 4", |b| {
        b.iter(|| {
            tw::clear_cache();
            tw::coboundary_witness(&z, black_box(&d)).unwrap()
        })
    });
}

fn triangles(c: &mut Criterion) {
    let z = examples::e3(Field::Q);
    let inst = tri::fuzz_instances(&z, 11, 1, 3).remove(0);
    c.bench_function("cone triangle", |b| b.iter(|| tri::cone_of(&z, black_box(&inst.u)).unwrap()));
    c.bench_function("octahedron", |b| {
        b.iter(|| {
            let t1 = tri::cone_of(&z, &inst.u).unwrap();
            let t2 = tri::cone_of(&z, &inst.v).unwrap();
            let t3 = tri::cone_of(&z, &star(&z, &inst.v, &inst.u)).unwrap();
            tri::octahedron(&z, &t1, &t2, &t3).unwrap()
        })
    });
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    let cfg = Config { cases: 10, ..Config::default() };
    group.bench_function("tri suite 10 cases", |b| b.iter(|| check::tri_suite(&cfg)));
    group.finish();
}

criterion_group!(benches, stasheff, twisted, triangles);
criterion_main!(benches);
