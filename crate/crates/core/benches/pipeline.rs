//! Benchmarks of the data-parallel hot paths: occurrence scans, operator
//! assembly, spectra, and the decoration round trip.
//!
//! Run `cargo bench` for the rayon build and
//! `cargo bench --no-default-features` for the sequential fallback; the
//! harness and inputs are identical, so the two reports compare directly.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use delone_ids::geometry::{generate, GeneratorSpec, VanHoveSequence, Window};
use delone_ids::mld::{build_gfin, decorate, underive};
use delone_ids::operators::{assemble, decorated_rule, nn_adjacency_rule};
use delone_ids::patterns::{enumerate_ball_classes, occurrences, PatternClass};
use delone_ids::spectra::{converse_diagnostic, ids_curve};

fn bench_occurrence_scan(c: &mut Criterion) {
    let omega = generate(
        &GeneratorSpec::CutProjectOctagonal,
        &Window::centered_box(2, 24.0),
        1,
    )
    .unwrap();
    let class = PatternClass::singleton(2, 0.3);
    let q = Window::centered_box(2, 20.0);
    c.bench_function("occurrences/ab-singleton-L20", |b| {
        b.iter(|| occurrences(&omega, &class, &q).unwrap().len())
    });
}

fn bench_class_enumeration(c: &mut Criterion) {
    let omega = generate(
        &GeneratorSpec::CutProjectOctagonal,
        &Window::centered_box(2, 20.0),
        1,
    )
    .unwrap();
    let s = 1.2 * omega.mean_nn_distance();
    let q = Window::centered_box(2, 16.0);
    c.bench_function("enumerate_ball_classes/ab-L16", |b| {
        b.iter(|| enumerate_ball_classes(&omega, s, &q).unwrap().len())
    });
}

fn bench_assembly(c: &mut Criterion) {
    let base = generate(
        &GeneratorSpec::SquareLattice { spacing: 1.0 },
        &Window::centered_box(2, 14.0),
        0,
    )
    .unwrap();
    let g = build_gfin(0.42).unwrap();
    let omega = decorate(&base, &PatternClass::singleton(2, 0.4), &g).unwrap();
    let rule = decorated_rule(&g, 1.0).unwrap();
    let mut group = c.benchmark_group("assemble/decorated");
    for half in [6.0, 10.0] {
        group.bench_with_input(BenchmarkId::from_parameter(half), &half, |b, &half| {
            let q = Window::centered_box(2, half);
            b.iter(|| assemble(&rule, &omega, &q).unwrap().dim())
        });
    }
    group.finish();
}

fn bench_decoration_round_trip(c: &mut Criterion) {
    let base = generate(
        &GeneratorSpec::SquareLattice { spacing: 1.0 },
        &Window::centered_box(2, 12.0),
        0,
    )
    .unwrap();
    let g = build_gfin(0.42).unwrap();
    let class = PatternClass::singleton(2, 0.4);
    c.bench_function("decorate+underive/z2-L12", |b| {
        b.iter(|| {
            let d = decorate(&base, &class, &g).unwrap();
            underive(&d, 0.42).unwrap().len()
        })
    });
}

fn bench_spectra(c: &mut Criterion) {
    let base = generate(
        &GeneratorSpec::SquareLattice { spacing: 1.0 },
        &Window::centered_box(2, 10.0),
        0,
    )
    .unwrap();
    let g = build_gfin(0.42).unwrap();
    let omega = decorate(&base, &PatternClass::singleton(2, 0.4), &g).unwrap();
    let rule = decorated_rule(&g, 1.0).unwrap();
    c.bench_function("ids_curve/decorated-L6", |b| {
        let q = Window::centered_box(2, 6.0);
        b.iter(|| ids_curve(&rule, &omega, &q).unwrap().total_mass())
    });
    // windows of the sweep run in parallel with the feature on; the
    // eigensolves themselves stay single-threaded either way
    c.bench_function("converse_diagnostic/decorated-L4-6", |b| {
        let seq = VanHoveSequence::new(2, vec![4.0, 6.0]).unwrap();
        b.iter(|| converse_diagnostic(&rule, &omega, &seq, 0.0).unwrap().len())
    });
}

fn bench_generation(c: &mut Criterion) {
    let rule = nn_adjacency_rule(1.0).unwrap();
    c.bench_function("generate/ab-L16", |b| {
        b.iter(|| {
            generate(
                &GeneratorSpec::CutProjectOctagonal,
                &Window::centered_box(2, 16.0),
                1,
            )
            .unwrap()
            .len()
        })
    });
    let omega = generate(
        &GeneratorSpec::SquareLattice { spacing: 1.0 },
        &Window::centered_box(2, 18.0),
        0,
    )
    .unwrap();
    c.bench_function("assemble/nn-z2-L16", |b| {
        let q = Window::centered_box(2, 16.0);
        b.iter(|| assemble(&rule, &omega, &q).unwrap().dim())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_occurrence_scan,
        bench_class_enumeration,
        bench_assembly,
        bench_decoration_round_trip,
        bench_spectra,
        bench_generation
}
criterion_main!(benches);
