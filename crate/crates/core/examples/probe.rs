// scratch calibration probe; not part of the deliverable
use mixcub_core::*;
use std::time::Instant;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "witness" => probe_witness(),
        "budget" => probe_budget(),
        "stability" => probe_stability(),
        "chi" => probe_chi(),
        "rates" => probe_rates(),
        _ => println!("usage: probe witness|budget|stability|chi|rates"),
    }
}

fn probe_witness() {
    let params = BesovParams::new(2.0, 2.0, 2.0).unwrap();
    let config = FoolingConfig::new(2, 3, params).unwrap();
    let mut qs = vec![];
    for n in 8..=20u32 {
        let t = Instant::now();
        let nodes: Vec<Vec<Rat>> = fibonacci_lattice(n)
            .unwrap()
            .into_iter()
            .map(|p| vec![p.x, p.y])
            .collect();
        let m = witness_level_for(nodes.len());
        let w = build_gstar(&nodes, m, config).unwrap();
        let bound = witness_lower_bound(&nodes, &w).unwrap();
        let b = fibonacci(n).unwrap().b as f64;
        let q = b.powi(2) * bound / b.ln().sqrt();
        println!(
            "n={n} b={b} m={m} I={bound:.3e} Q={q:.4} [{:?}]",
            t.elapsed()
        );
        qs.push(q);
    }
    let mut sorted = qs.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = sorted.last().unwrap();
    let min = sorted[0];
    println!("median={median:.4} max/median={:.3} median/min={:.3} max/min={:.3}",
        max / median, median / min, max / min);
}

fn probe_budget() {
    let t = Instant::now();
    let budgets = [1000u64, 3162, 10000, 31623, 100000];
    let rows = compare_budget("korobov:r=2,K=4096", &budgets).unwrap();
    for r in &rows {
        println!(
            "budget={} fib n={} ({} nodes) err={:.4e} | smolyak m={} ({} nodes) err={:.4e} | ratio={:.3}",
            r.budget, r.fib_n, r.fib_nodes, r.fib_error, r.smolyak_m, r.smolyak_nodes, r.smolyak_error, r.ratio
        );
    }
    println!("elapsed {:?}", t.elapsed());
}

fn probe_stability() {
    use rand::{Rng, SeedableRng};
    let t = Instant::now();
    for r in [2u32, 3, 4] {
        for p in [1.0, 2.0, f64::INFINITY] {
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1000 + r as u64);
            for total in 0..=12u32 {
                let ks: Vec<[u32; 2]> = if total <= 8 {
                    (0..=total).map(|a| [a, total - a]).collect()
                } else {
                    vec![[total, 0], [total / 2, total - total / 2], [0, total]]
                };
                for k in ks {
                    let dims = [
                        mixcub_core::splines::shift_count(k[0], r),
                        mixcub_core::splines::shift_count(k[1], r),
                    ];
                    let len = dims[0] * dims[1];
                    for pattern in 0..2 {
                        let coeffs: Vec<f64> = match pattern {
                            0 => vec![1.0; len],
                            _ => (0..len).map(|_| rng.gen_range(-1.0..1.0f64)).collect(),
                        };
                        let (lhs, rhs) = stability_check(r, &k, &coeffs, p);
                        let ratio = lhs / rhs;
                        lo = lo.min(ratio);
                        hi = hi.max(ratio);
                    }
                }
            }
            println!("r={r} p={p}: ratio in [{lo:.4}, {hi:.4}]");
        }
    }
    println!("elapsed {:?}", t.elapsed());
}

fn probe_chi() {
    let t = Instant::now();
    let mut worst_full = (0.0f64, 0u32, (0u32, 0u32), 0.0f64);
    let mut worst_band = (0.0f64, 0u32, (0u32, 0u32), 0.0f64);
    for n in 8..=18u32 {
        let b = fibonacci(n).unwrap().b as f64;
        for s1 in 0..=10u32 {
            for s2 in 0..=(10 - s1) {
                let poly = build_chi_s(n, (s1, s2)).unwrap();
                let vals = mixcub_core::fourier::poly_grid_values(&poly);
                // band part: remove the zero-frequency coefficient
                let mut band = poly.clone();
                band.add((0, 0), -band.coeff((0, 0)));
                let band_vals = mixcub_core::fourier::poly_grid_values(&band);
                for p in [1.0, 2.0, f64::INFINITY] {
                    let expo: f64 = if p.is_finite() { 1.0 - 1.0 / p } else { 1.0 };
                    let rhs = (2f64.powi((s1 + s2) as i32) / b).powf(expo);
                    let full = vals.norm(p).unwrap() / rhs;
                    let bandr = band_vals.norm(p).unwrap() / rhs;
                    if full > worst_full.0 {
                        worst_full = (full, n, (s1, s2), p);
                    }
                    if bandr > worst_band.0 {
                        worst_band = (bandr, n, (s1, s2), p);
                    }
                }
            }
        }
    }
    println!("worst full ratio {:?}", worst_full);
    println!("worst band ratio {:?}", worst_band);
    println!("elapsed {:?}", t.elapsed());
}

fn probe_rates() {
    // criterion 5 analogue
    let t = Instant::now();
    let rows: Vec<(f64, f64)> = (10..=28u32)
        .map(|n| {
            let e = korobov_fib_error(n, 2, 4096).unwrap();
            let b = fibonacci(n).unwrap().b as f64;
            (b, e)
        })
        .collect();
    for (n, e) in &rows {
        println!("N={n} err={e:.4e}");
    }
    let fit = fit_rate(&rows, Some(0.0)).unwrap();
    println!("fib korobov alpha_hat={:.4} rms={:.3} [{:?}]", fit.alpha_hat, fit.residual_rms, t.elapsed());

    // criterion 6 analogue
    let t = Instant::now();
    let f = mixcub_core::harness::expsum_integrand();
    let rows: Vec<(f64, f64)> = (6..=24u32)
        .map(|n| {
            let rule = fibonacci_nonperiodic(n).unwrap();
            let e = qmc_error(&rule, &f).unwrap().norm();
            (rule.len() as f64, e)
        })
        .collect();
    for (n, e) in &rows {
        println!("N={n} err={e:.4e}");
    }
    let fit = fit_rate(&rows, Some(0.0)).unwrap();
    println!("fibnp expsum alpha_hat={:.4} rms={:.3} [{:?}]", fit.alpha_hat, fit.residual_rms, t.elapsed());
}
