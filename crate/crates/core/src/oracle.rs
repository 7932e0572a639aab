//! Independent brute-force estimation of ‖f‖₂ = sup_{‖x‖=1} |f(x)| by
//! projected gradient ascent with seeded random restarts, plus gradients.
//!
//! This is the verification oracle the rest of the crate is tested against;
//! it deliberately shares no code with the relaxation machinery.

use crate::error::{Error, Result};
use crate::poly::{HomogPoly, MultiIndex};
use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

/// ∇f(x) by term-wise differentiation.
pub fn grad(f: &HomogPoly<f64>, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: x.len(),
        });
    }
    let mut g = vec![0.0; f.n()];
    for (alpha, c) in f.terms() {
        // value of x^α and per-variable powers
        for i in alpha.support() {
            let e = alpha.exp(i);
            let mut term = c * e as f64;
            for (j, &ej) in alpha.exps().iter().enumerate() {
                let p = if j == i { ej - 1 } else { ej };
                term *= x[j].powi(p as i32);
            }
            g[i] += term;
        }
    }
    Ok(g)
}

/// Options for [`brute_norm2`].
#[derive(Debug, Clone, Copy)]
pub struct BruteOpts {
    pub restarts: u32,
    pub iters: u32,
    pub tol: f64,
    pub seed: u64,
    /// Skip the exact eigensolve shortcut for quadratics; used when the
    /// oracle must stay independent of the eigensolver under test.
    pub force_ascent: bool,
}

impl Default for BruteOpts {
    fn default() -> Self {
        BruteOpts {
            restarts: 200,
            iters: 400,
            tol: 1e-10,
            seed: 0,
            force_ascent: false,
        }
    }
}

impl BruteOpts {
    pub fn seeded(seed: u64) -> Self {
        BruteOpts {
            seed,
            ..Default::default()
        }
    }
}

/// Result of a brute-force run. `nonconverged` counts ascent runs that hit
/// the iteration cap before the projected gradient dropped under tolerance.
#[derive(Debug, Clone)]
pub struct BruteResult {
    pub value: f64,
    pub x: Vec<f64>,
    pub nonconverged: u32,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        // Box–Muller pairs give a rotation-invariant start
        let mut v = Vec::with_capacity(n);
        while v.len() < n {
            let u1 = uniform(rng).max(1e-300);
            let u2 = uniform(rng);
            let r = (-2.0 * u1.ln()).sqrt();
            v.push(r * (2.0 * std::f64::consts::PI * u2).cos());
            if v.len() < n {
                v.push(r * (2.0 * std::f64::consts::PI * u2).sin());
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-300 {
        return false;
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    true
}

/// One ascent run maximizing sign·f from x0. Returns (value, point,
/// converged). The gradient tolerance is scaled by max|f_α| so the whole
/// trajectory is equivariant under scaling of f.
fn ascend(
    f: &HomogPoly<f64>,
    sign: f64,
    mut x: Vec<f64>,
    iters: u32,
    tol_scaled: f64,
) -> (f64, Vec<f64>, bool) {
    let mut fx = sign * f.eval(&x).unwrap();
    let mut converged = false;
    for _ in 0..iters {
        let g = grad(f, &x).unwrap();
        let gdot: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
        let rg: Vec<f64> = g
            .iter()
            .zip(&x)
            .map(|(gi, xi)| sign * gi - sign * gdot * xi)
            .collect();
        let rg_norm = rg.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rg_norm <= tol_scaled {
            converged = true;
            break;
        }
        // backtracking line search along the normalized tangent direction
        let dir: Vec<f64> = rg.iter().map(|v| v / rg_norm).collect();
        let mut t = 1.0f64;
        let mut accepted = false;
        while t > 1e-16 {
            let mut cand: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + t * b).collect();
            if normalize(&mut cand) {
                let fc = sign * f.eval(&cand).unwrap();
                if fc >= fx + 1e-4 * t * rg_norm {
                    x = cand;
                    fx = fc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            // no ascent direction makes progress at machine precision
            converged = rg_norm <= tol_scaled * 1e3;
            break;
        }
    }
    (fx, x, converged)
}

/// Projected gradient ascent on the sphere maximizing f and −f separately
/// from seeded random starts; exact eigensolve path when d = 2.
pub fn brute_norm2(f: &HomogPoly<f64>, opts: &BruteOpts) -> Result<BruteResult> {
    if f.n() == 0 {
        return Err(Error::InvalidInput("polynomial over zero variables".into()));
    }
    if f.is_zero() {
        let mut x = vec![0.0; f.n()];
        x[0] = 1.0;
        return Ok(BruteResult {
            value: 0.0,
            x,
            nonconverged: 0,
        });
    }
    if f.d() == 0 {
        let c = f.coeff(&MultiIndex::zero(f.n()));
        let mut x = vec![0.0; f.n()];
        x[0] = 1.0;
        return Ok(BruteResult {
            value: c.abs(),
            x,
            nonconverged: 0,
        });
    }
    if f.d() == 2 && !opts.force_ascent {
        // quadratics are solved exactly by eigendecomposition
        let n = f.n();
        let mut q = DMatrix::<f64>::zeros(n, n);
        for (alpha, c) in f.terms() {
            let sup = alpha.support();
            if sup.len() == 1 {
                q[(sup[0], sup[0])] += c;
            } else {
                q[(sup[0], sup[1])] += 0.5 * c;
                q[(sup[1], sup[0])] += 0.5 * c;
            }
        }
        let (value, v) = crate::spectral::quad_norm(&q)?;
        return Ok(BruteResult {
            value,
            x: v.iter().copied().collect(),
            nonconverged: 0,
        });
    }

    let tol_scaled = opts.tol * f.max_coeff_abs();
    let runs: Vec<(f64, Vec<f64>, bool)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(opts.seed ^ splitmix64(r as u64)));
            let x0 = random_unit(&mut rng, f.n());
            let plus = ascend(f, 1.0, x0.clone(), opts.iters, tol_scaled);
            let minus = ascend(f, -1.0, x0, opts.iters, tol_scaled);
            if plus.0 >= minus.0 {
                plus
            } else {
                minus
            }
        })
        .collect();

    let mut best_value = f64::NEG_INFINITY;
    let mut best_x = vec![0.0; f.n()];
    let mut nonconverged = 0u32;
    for (v, x, conv) in runs {
        if !conv {
            nonconverged += 1;
        }
        if v > best_value {
            best_value = v;
            best_x = x;
        }
    }
    Ok(BruteResult {
        value: best_value.max(0.0),
        x: best_x,
        nonconverged,
    })
}
