//! Calibration driver: runs the candidate-set algorithms and the
//! brute-force oracle over the published random suites and prints the worst
//! observed ratios. The acceptance suite freezes its assertion constants at
//! 2× the values printed here.
//!
//! Run with: cargo run --release -p spherex --example calibrate

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use spherex::decompose::multilinear_parts;
use spherex::oracle::{brute_norm2, BruteOpts};
use spherex::poly::{HomogPoly, MultiIndex};
use spherex::rounding::{optimize, Method, OptimizeOpts};
use spherex::Capacity;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn random_poly(seed: u64, n: usize, d: u32, nonneg: bool) -> HomogPoly<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = MultiIndex::enumerate(n, d).into_iter().map(|a| {
        let v = uniform(&mut rng);
        (a, if nonneg { v } else { 2.0 * v - 1.0 })
    });
    HomogPoly::from_terms(n, d, terms).unwrap()
}

fn main() {
    let cap = Capacity::default();
    let opts = OptimizeOpts::default();
    let n = 5;
    let d = 4;

    // Criterion-8 suite: 50 nnc at q ∈ {4, 8}; 50 general at q = 8.
    let mut worst_nnc = (0.0f64, 0u64, 0u32);
    for seed in 1..=50u64 {
        let f = random_poly(1000 + seed, n, d, true);
        for q in [4u32, 8] {
            let r = optimize(&f, q, Method::Nnc, &opts, &cap).unwrap();
            let ratio = r.upper.value / r.value;
            if ratio > worst_nnc.0 {
                worst_nnc = (ratio, seed, q);
            }
        }
    }
    println!(
        "nnc worst ratio: {:.6} (seed {} q {})",
        worst_nnc.0, worst_nnc.1, worst_nnc.2
    );

    let mut worst_gen = (0.0f64, 0u64, 0u32);
    let t0 = std::time::Instant::now();
    for seed in 1..=50u64 {
        let f = random_poly(2000 + seed, n, d, false);
        let q = 8u32;
        let r = optimize(&f, q, Method::General, &opts, &cap).unwrap();
        let ratio = r.upper.value / r.value;
        if ratio > worst_gen.0 {
            worst_gen = (ratio, seed, q);
        }
        if seed % 10 == 0 {
            println!(
                "  ... general {seed}/50 ({:.1}s elapsed, worst so far {:.4})",
                t0.elapsed().as_secs_f64(),
                worst_gen.0
            );
        }
    }
    println!(
        "general worst ratio: {:.6} (seed {} q {})",
        worst_gen.0, worst_gen.1, worst_gen.2
    );

    // Criterion-9 suite: weak decoupling constant over 50 random f (n=4, d=4).
    let nw = 4;
    let mut worst_wd = (0.0f64, 0u64);
    for seed in 1..=50u64 {
        let f = random_poly(3000 + seed, nw, d, false);
        let fnorm = brute_norm2(
            &f,
            &BruteOpts {
                restarts: 1000,
                ..BruteOpts::seeded(seed)
            },
        )
        .unwrap()
        .value;
        if fnorm <= 0.0 {
            continue;
        }
        for (alpha, part) in multilinear_parts(&f).parts() {
            let t = alpha.degree();
            // y = √α/√|α| (unit); y^{2α} = Π (αᵢ/t)^{αᵢ}
            let mut y2a = 1.0;
            if t > 0 {
                for i in alpha.support() {
                    y2a *= (alpha.exp(i) as f64 / t as f64).powi(alpha.exp(i) as i32);
                }
            }
            if part.d() == 0 {
                let gv = part.coeff(&MultiIndex::zero(nw)).abs();
                let c = y2a * gv / fnorm;
                if c > worst_wd.0 {
                    worst_wd = (c, seed);
                }
                continue;
            }
            let gnorm = brute_norm2(
                &f_part_owned(part),
                &BruteOpts {
                    restarts: 1000,
                    ..BruteOpts::seeded(seed ^ 0xabcd)
                },
            )
            .unwrap()
            .value;
            let c = y2a * gnorm / fnorm;
            if c > worst_wd.0 {
                worst_wd = (c, seed);
            }
        }
    }
    println!(
        "weak decoupling worst C: {:.6} (seed {})",
        worst_wd.0, worst_wd.1
    );
}

fn f_part_owned(p: &HomogPoly<f64>) -> HomogPoly<f64> {
    p.clone()
}
