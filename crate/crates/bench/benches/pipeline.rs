//! End-to-end benchmarks: solver at case-study scale, model fitting,
//! F-distribution evaluation, and power-trace integration.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use wattroute::{
    f_cdf, generate_workload, integrate_cpu_energy, ols_fit_no_intercept, solve_offline, Fleet,
    ModelProfile, PowerSample, ResidencyInterval, RoutingConstraints, TokenDistribution,
};

fn fleet() -> Fleet {
    let profile = |name: &str, acc, e: [f64; 3], r: [f64; 3], frac| ModelProfile {
        name: name.to_owned(),
        accuracy_const: acc,
        energy_coeffs: e,
        runtime_coeffs: r,
        capacity_fraction: frac,
    };
    Fleet::new(vec![
        profile(
            "small",
            50.97,
            [0.16, 12.0, 5e-5],
            [4e-4, 3e-2, 1.2e-7],
            Some(0.05),
        ),
        profile(
            "medium",
            55.69,
            [0.30, 22.0, 9e-5],
            [7.5e-4, 5.5e-2, 2.2e-7],
            Some(0.2),
        ),
        profile(
            "large",
            64.52,
            [1.10, 80.0, 3.2e-4],
            [2.8e-3, 2e-1, 8e-7],
            Some(0.75),
        ),
    ])
    .expect("static fleet is valid")
}

fn bench_solver(c: &mut Criterion) {
    let fleet = fleet();
    let dist = TokenDistribution::lognormal(5.0, 0.8, 2048).unwrap();
    let workload = generate_workload(500, dist, 7).unwrap();
    let constraints = RoutingConstraints::default();
    c.bench_function("solve_offline/500q_3models", |b| {
        b.iter(|| solve_offline(&fleet, &workload, black_box(0.5), &constraints).unwrap())
    });
}

fn bench_fit(c: &mut Criterion) {
    let mut rows = Vec::new();
    for ti in (64..=1024).step_by(120) {
        for to in (64..=1024).step_by(120) {
            for trial in 0..3 {
                let y = 0.3 * f64::from(ti)
                    + 22.0 * f64::from(to)
                    + 9e-5 * f64::from(ti) * f64::from(to)
                    + 0.01 * f64::from(trial);
                rows.push((ti, to, y));
            }
        }
    }
    c.bench_function("ols_fit/243rows", |b| {
        b.iter(|| ols_fit_no_intercept(black_box(&rows)).unwrap())
    });
}

fn bench_f_cdf(c: &mut Criterion) {
    c.bench_function("f_cdf/mixed_dof", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for d in 1..=20 {
                acc += f_cdf(black_box(2.5), 3, d).unwrap();
            }
            acc
        })
    });
}

fn bench_power(c: &mut Criterion) {
    let mut samples = Vec::new();
    for i in 0..10_000u32 {
        for core in 0..4 {
            samples.push(PowerSample {
                time_s: f64::from(i) * 0.25,
                core_id: core,
                power_w: 20.0 + f64::from(core) + f64::from(i % 7),
            });
        }
    }
    let residency: Vec<ResidencyInterval> = (0..4)
        .map(|core| ResidencyInterval {
            core_id: core,
            start_s: 100.0,
            end_s: 2_300.0,
        })
        .collect();
    c.bench_function("integrate_cpu_energy/40k_samples", |b| {
        b.iter(|| integrate_cpu_energy(black_box(&samples), black_box(&residency)).unwrap())
    });
}

criterion_group!(benches, bench_solver, bench_fit, bench_f_cdf, bench_power);
criterion_main!(benches);
