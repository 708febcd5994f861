use criterion::{criterion_group, criterion_main, Criterion};
use lensmassey::chaincore::{CoefficientRing, Rationals};
use lensmassey::confspaces::{quaternion_split_test, split_model_sweep};
use lensmassey::cupmassey::{heisenberg, massey_sweep, Cohomology, SweepPattern};
use lensmassey::cyclosolve::DEFAULT_BUDGET;
use lensmassey::dualcalc::{
    intersection_pattern, lemma_report, massey_via_intersection, Geometry, IntersectionTriple,
    MasseyOptions,
};
use lensmassey::simplicial::lens_space;

fn homology(c: &mut Criterion) {
    let l = lens_space(7, 2).unwrap().complex;
    c.bench_function("lens (7,2) homology over Z", |b| {
        b.iter(|| l.homology(CoefficientRing::Integers))
    });
}

fn massey(c: &mut Criterion) {
    let h = Cohomology::new(heisenberg(Rationals));
    c.bench_function("heisenberg sweep (1,1,1)", |b| {
        b.iter(|| massey_sweep(&h, [1, 1, 1], SweepPattern::Basis, usize::MAX).unwrap())
    });
    let mut g = c.benchmark_group("split sweep m=7");
    g.sample_size(10);
    g.bench_function("basis", |b| {
        b.iter(|| split_model_sweep(7, SweepPattern::Basis, usize::MAX).unwrap())
    });
    g.finish();
}

fn intersection(c: &mut Criterion) {
    let geometry = Geometry::new(7, 2).unwrap();
    let triple = IntersectionTriple {
        x: 4,
        y: 1,
        z: vec![(2, 1), (6, 1)],
    };
    c.bench_function("pattern (7,2)", |b| {
        b.iter(|| intersection_pattern(7, 2).unwrap())
    });
    c.bench_function("lemma report", |b| {
        b.iter(|| lemma_report(1, DEFAULT_BUDGET).unwrap())
    });
    let mut g = c.benchmark_group("intersection massey");
    g.sample_size(10);
    g.bench_function("<a4, a1, a2+a6>", |b| {
        b.iter(|| massey_via_intersection(&geometry, &triple, &MasseyOptions::default()).unwrap())
    });
    g.bench_function("quaternion split 1000", |b| {
        b.iter(|| quaternion_split_test(7, 1000, 0))
    });
    g.finish();
}

criterion_group!(benches, homology, massey, intersection);
criterion_main!(benches);
