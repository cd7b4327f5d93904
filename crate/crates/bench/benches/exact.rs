use std::hint::black_box;

use bispectra::family::{verify_bispectrality, FamilyConfig, PolyFamily};
use bispectra::moments::verify_d_orthogonality;
use bispectra::sato::{plane_from_family, tau_series};
use bispectra::second_kind::{asymptotic_expansion, eval_nu, ContourSpec};
use bispectra::toda::{dth_root, flow_rhs, lax_operator};
use bispectra::virasoro::{build_virasoro, check_commutation};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

fn families(c: &mut Criterion) {
    let mut g = c.benchmark_group("family");
    for d in [1usize, 3, 5] {
        let cfg = FamilyConfig::gould_hopper(d);
        g.bench_with_input(BenchmarkId::new("polys_40", d), &cfg, |b, cfg| {
            b.iter(|| PolyFamily::new(black_box(cfg), 40))
        });
        g.bench_with_input(BenchmarkId::new("bispectrality_40", d), &cfg, |b, cfg| {
            b.iter(|| verify_bispectrality(black_box(cfg), 40))
        });
    }
    let gh = FamilyConfig::gould_hopper(2);
    g.bench_function("d_orthogonality_20", |b| {
        b.iter(|| verify_d_orthogonality(black_box(&gh), 20))
    });
    g.finish();
}

fn weights(c: &mut Criterion) {
    let gh = FamilyConfig::gould_hopper(2);
    let spec = ContourSpec::for_config(&gh).unwrap();
    c.bench_function("eval_nu_airy", |b| {
        b.iter(|| {
            eval_nu(
                &gh,
                Complex64::new(-1.0, 0.0),
                black_box(Complex64::new(0.7, 0.1)),
                &spec,
            )
        })
    });
    c.bench_function("expansion_order_12", |b| {
        b.iter(|| asymptotic_expansion(&gh, black_box(-1), 12))
    });
}

fn tau(c: &mut Criterion) {
    let gh = FamilyConfig::gould_hopper(2);
    let mut g = c.benchmark_group("tau");
    g.sample_size(10);
    for w in [6u32, 10] {
        let plane = plane_from_family(&gh, -1, w as usize + 4).unwrap();
        g.bench_with_input(BenchmarkId::new("tau_series", w), &plane, |b, p| {
            b.iter(|| tau_series(black_box(p), w))
        });
    }
    let fam = build_virasoro(2, -1, 12, 2).unwrap();
    g.bench_function("virasoro_commutators_w4", |b| {
        b.iter(|| check_commutation(black_box(&fam), 2, 4))
    });
    g.finish();
}

fn toda(c: &mut Criterion) {
    let mut g = c.benchmark_group("toda");
    for d in [2usize, 3] {
        let dop = lax_operator(&FamilyConfig::gould_hopper(d));
        g.bench_with_input(BenchmarkId::new("dth_root_12", d), &dop, |b, dop| {
            b.iter(|| dth_root(black_box(dop), d, 12))
        });
        g.bench_with_input(BenchmarkId::new("flow_k1_12", d), &dop, |b, dop| {
            b.iter(|| flow_rhs(black_box(dop), 1, d, 12))
        });
    }
    g.finish();
}

criterion_group!(benches, families, weights, tau, toda);
criterion_main!(benches);
