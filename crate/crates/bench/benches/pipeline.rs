use criterion::{black_box, criterion_group, criterion_main, Criterion};
use mincut::{generate, run_all_stages, run_full_pipeline, Family, GenParams, PipelineConfig};

fn small_stages(c: &mut Criterion) {
    let config = PipelineConfig { max_size: 2, ..Default::default() };
    for (family, n) in [(Family::Cycle, 64), (Family::Grid, 64)] {
        let g = generate(family, &GenParams::new(n)).unwrap();
        c.bench_function(&format!("size1-2/{family}/{n}"), |b| b.iter(|| run_full_pipeline(black_box(&g), &config).unwrap()));
    }
}

fn size3_battery(c: &mut Criterion) {
    let config = PipelineConfig::default();
    for (family, n) in [(Family::Prism, 16), (Family::Grid, 16)] {
        let g = generate(family, &GenParams::new(n)).unwrap();
        c.bench_function(&format!("all/{family}/{n}"), |b| b.iter(|| run_all_stages(black_box(&g), &config).unwrap()));
    }
}

criterion_group!(benches, small_stages, size3_battery);
criterion_main!(benches);
