//! Deterministic candidate-set algorithms: quadratic argmax, the
//! non-negative-coefficient and general candidate constructions built from
//! the quadratic folding, roots-of-unity samplers, Chebyshev-grid
//! extraction, Rademacher decoupling, and complex→real conversion.

use crate::capacity::Capacity;
use crate::decompose::{fold_quadratic, FoldScaling};
use crate::error::{Error, Result};
use crate::poly::{HomogPoly, MultiIndex};
use crate::spectral::{self, powered_upper_estimate, UpperEstimate};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

/// Which candidate-set algorithm produced a vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Provenance {
    /// Base vector 𝟙/√n + √α/√|α| + γ/√|γ| plus the fold-quadratic argmax.
    Nnc { alpha: Vec<u32>, gamma: Vec<u32> },
    /// Roots-of-unity / mask construction with the (c₁,c₂) combination.
    General {
        alpha: Vec<u32>,
        gamma: Vec<u32>,
        xi: usize,
        zeta: Vec<usize>,
        mask: u64,
        c1: f64,
        c2: f64,
    },
    /// Exact eigenvector path for quadratics.
    Quadratic,
    /// Fallback basis vector (zero or degenerate polynomial).
    Basis(usize),
}

/// A real unit candidate vector together with the parameters that generated
/// it; the provenance is sufficient to regenerate the vector.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub x: DVector<f64>,
    pub origin: Provenance,
}

/// Optimization report: the best candidate, its value, and the certified
/// upper estimate.
#[derive(Debug, Clone, Serialize)]
pub struct OptReport {
    pub x_best: Vec<f64>,
    pub value: f64,
    pub upper: UpperEstimate,
    /// upper.value / value (upper is already reported on the ‖f‖₂ scale).
    pub ratio: Option<f64>,
    pub method: Method,
    pub candidates_evaluated: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    General,
    Nnc,
    Sparse,
    Auto,
}

/// Exact maximizer of |xᵀQx| over the unit sphere: the eigenvector of the
/// eigenvalue of largest magnitude (λ_max preferred on a tie).
pub fn quad_argmax(q: &DMatrix<f64>) -> Result<(DVector<f64>, f64)> {
    let (value, v) = spectral::quad_norm(q)?;
    Ok((v, value))
}

/// max over real unit x of |xᵀ(A+iB)x| via max_θ λ_max(A cosθ + B sinθ)
/// on a θ-grid over [0, 2π).
pub fn complex_quad_argmax(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    theta_grid: usize,
) -> Result<(DVector<f64>, f64)> {
    if theta_grid < 8 {
        return Err(Error::InvalidInput("theta_grid must be >= 8".into()));
    }
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let mut best_val = f64::NEG_INFINITY;
    let mut best_vec = DVector::zeros(a.nrows());
    for j in 0..theta_grid {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / theta_grid as f64;
        let m = a * theta.cos() + b * theta.sin();
        let (lam, v) = spectral::lambda_max(&m)?;
        if lam > best_val {
            best_val = lam;
            best_vec = v;
        }
    }
    Ok((best_vec, best_val))
}

fn unit_or_none(v: DVector<f64>) -> Option<DVector<f64>> {
    let n = v.norm();
    if n > 1e-12 {
        Some(v / n)
    } else {
        None
    }
}

fn basis_candidate(n: usize) -> Candidate {
    let mut x = DVector::zeros(n);
    x[0] = 1.0;
    Candidate {
        x,
        origin: Provenance::Basis(0),
    }
}

/// Quadratic of a degree-2 polynomial as a symmetric matrix.
fn quadratic_matrix(f: &HomogPoly<f64>) -> DMatrix<f64> {
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
    q
}

/// Candidate set for non-negative coefficient polynomials: one candidate
/// per (α, γ) with |α| ≤ q̄/2, |γ| = q̄/2 − |α|, where q̄ = (d−2)q/d.
/// The base vector is 𝟙/√n + √α/√|α| + γ/√|γ| (zero-degree terms dropped)
/// and the candidate is normalize(base + w) with w the argmax of the
/// fold-evaluated quadratic at the base.
pub fn nnc_candidates(f: &HomogPoly<f64>, q: u32, cap: &Capacity) -> Result<Vec<Candidate>> {
    for (_, c) in f.terms() {
        if *c < 0.0 {
            return Err(Error::NegativeCoefficient(*c));
        }
    }
    let d = f.d();
    if q == 0 || q % 2 != 0 || q % d != 0 {
        return Err(Error::Divisibility {
            q,
            what: format!("even q divisible by d = {d}"),
        });
    }
    let n = f.n();
    if f.is_zero() {
        return Ok(vec![basis_candidate(n)]);
    }
    if d == 2 {
        let (v, _) = quad_argmax(&quadratic_matrix(f))?;
        return Ok(vec![Candidate {
            x: v,
            origin: Provenance::Quadratic,
        }]);
    }
    let h = fold_quadratic(f, FoldScaling::UnfoldExact, cap)?;
    let qbar = (d - 2) * q / d;
    let half = qbar / 2;

    // candidate count check
    let mut count: u128 = 0;
    for t in 0..=half {
        let n_alpha = MultiIndex::enumerate(n, t).len() as u128;
        let n_gamma = MultiIndex::enumerate(n, half - t).len() as u128;
        count += n_alpha * n_gamma;
    }
    cap.check_candidates(count)?;

    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let mut out = Vec::new();
    for t in 0..=half {
        for alpha in MultiIndex::enumerate(n, t) {
            for gamma in MultiIndex::enumerate(n, half - t) {
                let mut base = DVector::from_element(n, inv_sqrt_n);
                if alpha.degree() > 0 {
                    let scale = 1.0 / (alpha.degree() as f64).sqrt();
                    for i in 0..n {
                        base[i] += (alpha.exp(i) as f64).sqrt() * scale;
                    }
                }
                if gamma.degree() > 0 {
                    let scale = 1.0 / (gamma.degree() as f64).sqrt();
                    for i in 0..n {
                        base[i] += gamma.exp(i) as f64 * scale;
                    }
                }
                let quad = h.eval_monomials(base.as_slice())?;
                let (w, _) = quad_argmax(&quadratic_matrix(&quad))?;
                if let Some(x) = unit_or_none(&base + &w) {
                    out.push(Candidate {
                        x,
                        origin: Provenance::Nnc {
                            alpha: alpha.exps().to_vec(),
                            gamma: gamma.exps().to_vec(),
                        },
                    });
                }
            }
        }
    }
    if out.is_empty() {
        out.push(basis_candidate(n));
    }
    Ok(out)
}

/// p-th roots of unity e^{2πik/p}, k = 0..p−1.
fn roots_of_unity(p: u32) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / p as f64))
        .collect()
}

/// Mixed-radix enumeration over per-coordinate root counts; yields one
/// choice index per support coordinate.
struct MixedRadix {
    radixes: Vec<u32>,
    state: Vec<u32>,
    done: bool,
}

impl MixedRadix {
    fn new(radixes: Vec<u32>) -> Self {
        let state = vec![0; radixes.len()];
        let done = radixes.contains(&0);
        MixedRadix {
            radixes,
            state,
            done,
        }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<u32>;
    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.state.clone();
        let mut i = 0;
        loop {
            if i == self.radixes.len() {
                self.done = true;
                break;
            }
            self.state[i] += 1;
            if self.state[i] < self.radixes[i] {
                break;
            }
            self.state[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

fn golden_refine(mut lo: f64, mut hi: f64, mut eval: impl FnMut(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..40 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn complex_norm(z: &[Complex64]) -> f64 {
    z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn eval_complex_combination(
    f: &HomogPoly<f64>,
    z: &[Complex64],
    w: &DVector<f64>,
    c1: f64,
    c2: f64,
) -> f64 {
    let v: Vec<Complex64> = z
        .iter()
        .zip(w.iter())
        .map(|(zi, wi)| c1 * zi + Complex64::new(c2 * wi, 0.0))
        .collect();
    let norm = complex_norm(&v);
    if norm <= 1e-12 {
        return f64::NEG_INFINITY;
    }
    let unit: Vec<Complex64> = v.iter().map(|x| x / norm).collect();
    f.eval_complex(&unit)
        .map(|c| c.norm())
        .unwrap_or(f64::NEG_INFINITY)
}

/// Candidate set for general polynomials, following the roots-of-unity
/// construction: for each admissible (α, γ), each Ξ ∈ Ω_{|γ|+1}, each ζ
/// assignment on supp(α) with ζᵢ ∈ Ω_{2αᵢ+1}, and each {0,1} mask b on
/// supp(γ), the complex base is
///   z = Ξ·(1/√|γ|)·γ∘(1/(2α+𝟙))∘b + (√α∘ζ)/√|α|,
/// w is the complex quadratic argmax of h(z), and the best (c₁,c₂)
/// combination (grid + golden-section refinement) is converted to a real
/// candidate through the decoupling of [`complex_to_real`].
pub fn general_candidates(
    f: &HomogPoly<f64>,
    q: u32,
    c_grid: usize,
    cap: &Capacity,
) -> Result<Vec<Candidate>> {
    let d = f.d();
    if q == 0 || q % (2 * d) != 0 {
        return Err(Error::Divisibility {
            q,
            what: format!("q divisible by 2d = {}", 2 * d),
        });
    }
    if c_grid < 2 {
        return Err(Error::InvalidInput("c_grid must be >= 2".into()));
    }
    let n = f.n();
    if f.is_zero() {
        return Ok(vec![basis_candidate(n)]);
    }
    if d == 2 {
        let (v, _) = quad_argmax(&quadratic_matrix(f))?;
        return Ok(vec![Candidate {
            x: v,
            origin: Provenance::Quadratic,
        }]);
    }
    let h = fold_quadratic(f, FoldScaling::UnfoldExact, cap)?;
    let qbar = (d - 2) * q / d;
    let half = qbar / 2;

    // capacity estimate: bases × roots-of-unity × masks
    let mut base_count: u128 = 0;
    for t in 0..=half {
        for alpha in MultiIndex::enumerate(n, t) {
            let k = qbar - 2 * t;
            let n_gamma = MultiIndex::enumerate_multilinear(n, k).len() as u128;
            let mut per: u128 = (k + 1) as u128; // Ξ choices
            for i in alpha.support() {
                per = per.saturating_mul((2 * alpha.exp(i) + 1) as u128);
            }
            per = per.saturating_mul(1u128 << k.min(63)); // b masks on supp(γ)
            base_count = base_count.saturating_add(n_gamma.saturating_mul(per));
        }
    }
    cap.check_candidates(base_count)?;

    let c1_span = (d - 2) as f64;
    let mut out = Vec::new();
    for t in 0..=half {
        for alpha in MultiIndex::enumerate(n, t) {
            let k = qbar - 2 * t;
            let zeta_support = alpha.support();
            let zeta_roots: Vec<Vec<Complex64>> = zeta_support
                .iter()
                .map(|&i| roots_of_unity(2 * alpha.exp(i) + 1))
                .collect();
            let sqrt_alpha_scale = if t > 0 { 1.0 / (t as f64).sqrt() } else { 0.0 };
            for gamma in MultiIndex::enumerate_multilinear(n, k) {
                let gamma_support = gamma.support();
                let gamma_scale = if k > 0 { 1.0 / (k as f64).sqrt() } else { 0.0 };
                let xis = roots_of_unity(k + 1);
                for (xi_idx, xi) in xis.iter().enumerate() {
                    let radixes: Vec<u32> = zeta_roots.iter().map(|r| r.len() as u32).collect();
                    for zeta_choice in MixedRadix::new(radixes) {
                        for mask in 0u64..(1u64 << gamma_support.len()) {
                            // assemble z
                            let mut z = vec![Complex64::ZERO; n];
                            for (bit, &i) in gamma_support.iter().enumerate() {
                                if mask >> bit & 1 == 1 {
                                    let denom = (2 * alpha.exp(i) + 1) as f64;
                                    z[i] += xi * gamma_scale * gamma.exp(i) as f64 / denom;
                                }
                            }
                            for (j, &i) in zeta_support.iter().enumerate() {
                                let zeta = zeta_roots[j][zeta_choice[j] as usize];
                                z[i] += zeta * (alpha.exp(i) as f64).sqrt() * sqrt_alpha_scale;
                            }
                            if complex_norm(&z) <= 1e-12 {
                                continue;
                            }
                            // quadratic argmax of h(z)
                            let (re, im) = h.eval_monomials_complex(&z)?;
                            let (w, _) = complex_quad_argmax(
                                &quadratic_matrix(&re),
                                &quadratic_matrix(&im),
                                32,
                            )?;
                            // grid + refinement over (c1, c2)
                            let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
                            for i1 in 0..c_grid {
                                let c1 = -c1_span + 2.0 * c1_span * i1 as f64 / (c_grid - 1) as f64;
                                for i2 in 0..c_grid {
                                    let c2 = -2.0 + 4.0 * i2 as f64 / (c_grid - 1) as f64;
                                    let v = eval_complex_combination(f, &z, &w, c1, c2);
                                    if v > best.0 {
                                        best = (v, c1, c2);
                                    }
                                }
                            }
                            if best.0 == f64::NEG_INFINITY {
                                continue;
                            }
                            let step1 = 2.0 * c1_span / (c_grid - 1) as f64;
                            let step2 = 4.0 / (c_grid - 1) as f64;
                            let (_, mut c1, mut c2) = best;
                            let (r1, _) = golden_refine(c1 - step1, c1 + step1, |t1| {
                                eval_complex_combination(f, &z, &w, t1, c2)
                            });
                            c1 = r1;
                            let (r2, _) = golden_refine(c2 - step2, c2 + step2, |t2| {
                                eval_complex_combination(f, &z, &w, c1, t2)
                            });
                            c2 = r2;
                            // realify the chosen combination
                            let v: Vec<Complex64> = z
                                .iter()
                                .zip(w.iter())
                                .map(|(zi, wi)| c1 * zi + Complex64::new(c2 * wi, 0.0))
                                .collect();
                            let norm = complex_norm(&v);
                            if norm <= 1e-12 {
                                continue;
                            }
                            let unit: Vec<Complex64> = v.iter().map(|x| x / norm).collect();
                            let (x, _) = complex_to_real(f, &unit)?;
                            if let Some(x) = unit_or_none(x) {
                                out.push(Candidate {
                                    x,
                                    origin: Provenance::General {
                                        alpha: alpha.exps().to_vec(),
                                        gamma: gamma.exps().to_vec(),
                                        xi: xi_idx,
                                        zeta: zeta_choice.iter().map(|&v| v as usize).collect(),
                                        mask,
                                        c1,
                                        c2,
                                    },
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    if out.is_empty() {
        out.push(basis_candidate(n));
    }
    Ok(out)
}

/// Best vector by |f(x)| over a candidate set; ties break to the earlier
/// candidate in enumeration order.
pub fn best_candidate(f: &HomogPoly<f64>, cands: &[Candidate]) -> Result<(Candidate, f64)> {
    if cands.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }
    let mut best_idx = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for (i, c) in cands.iter().enumerate() {
        let v = f.eval(c.x.as_slice())?.abs();
        if v > best_val {
            best_val = v;
            best_idx = i;
        }
    }
    Ok((cands[best_idx].clone(), best_val))
}

/// Exhaustive Rademacher decoupling: over all 2^d sign patterns ξ evaluate
/// f at (Σξᵢxⁱ)/‖Σξᵢxⁱ‖ and return the best point.
pub fn decouple(f: &HomogPoly<f64>, xs: &[DVector<f64>]) -> Result<(DVector<f64>, f64)> {
    let d = f.d() as usize;
    if xs.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: xs.len(),
        });
    }
    for x in xs {
        if x.len() != f.n() {
            return Err(Error::DimensionMismatch {
                expected: f.n(),
                got: x.len(),
            });
        }
    }
    let mut best_val = f64::NEG_INFINITY;
    let mut best_x: Option<DVector<f64>> = None;
    for mask in 0u64..(1u64 << d) {
        let mut sum = DVector::zeros(f.n());
        for (i, x) in xs.iter().enumerate() {
            let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
            sum += x * s;
        }
        if let Some(u) = unit_or_none(sum) {
            let v = f.eval(u.as_slice())?.abs();
            if v > best_val {
                best_val = v;
                best_x = Some(u);
            }
        }
    }
    match best_x {
        Some(x) => Ok((x, best_val)),
        None => {
            let c = basis_candidate(f.n());
            let v = f.eval(c.x.as_slice())?.abs();
            Ok((c.x, v))
        }
    }
}

/// ⟨A, c¹⊗…⊗c^d⟩ for the SoS-symmetric tensor A of f, by polarization:
/// (1/(2^d·d!)) Σ_ξ (Πξᵢ)·f(Σξᵢcⁱ).
pub fn decoupled_tensor_value(f: &HomogPoly<f64>, cs: &[DVector<f64>]) -> Result<f64> {
    let d = f.d() as usize;
    if cs.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: cs.len(),
        });
    }
    let mut acc = 0.0;
    for mask in 0u64..(1u64 << d) {
        let mut sum = DVector::zeros(f.n());
        let mut sign = 1.0;
        for (i, c) in cs.iter().enumerate() {
            let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
            sign *= s;
            sum += c * s;
        }
        acc += sign * f.eval(sum.as_slice())?;
    }
    let dfact: f64 = (1..=d as u64).map(|v| v as f64).product::<f64>().max(1.0);
    Ok(acc / (2f64.powi(d as i32) * dfact))
}

/// Conversion of a complex candidate to a real one: split z = a + ib,
/// choose the mix of {a, b} maximizing the decoupled tensor value (only
/// the multiplicity of b matters by symmetry), then decouple.
pub fn complex_to_real(f: &HomogPoly<f64>, z: &[Complex64]) -> Result<(DVector<f64>, f64)> {
    if z.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: z.len(),
        });
    }
    let a = DVector::from_iterator(f.n(), z.iter().map(|v| v.re));
    let b = DVector::from_iterator(f.n(), z.iter().map(|v| v.im));
    if b.norm() <= 1e-14 {
        let val = f.eval(a.as_slice())?.abs();
        return Ok((a, val));
    }
    if f.is_zero() {
        return Ok((basis_candidate(f.n()).x, 0.0));
    }
    let d = f.d() as usize;
    let mut best_j = 0usize;
    let mut best_abs = f64::NEG_INFINITY;
    for j in 0..=d {
        let mut cs: Vec<DVector<f64>> = Vec::with_capacity(d);
        for i in 0..d {
            cs.push(if i < d - j { a.clone() } else { b.clone() });
        }
        let v = decoupled_tensor_value(f, &cs)?.abs();
        if v > best_abs {
            best_abs = v;
            best_j = j;
        }
    }
    let mut cs: Vec<DVector<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        cs.push(if i < d - best_j { a.clone() } else { b.clone() });
    }
    decouple(f, &cs)
}

/// Maximize |evals(p)| over a Chebyshev–Lobatto grid on [0, 1]. The grid is
/// sized so that for a degree-t input the extrema of the scaled Chebyshev
/// polynomial fall exactly on grid nodes, making the 2|c_t|/4^t guarantee
/// attainable without slack.
pub fn cheb_extract(evals: &dyn Fn(f64) -> f64, t: usize, grid: usize) -> (f64, f64) {
    let t_eff = t.max(1);
    let mut intervals = grid.max(4 * t_eff).max(4);
    // round node-interval count up to a multiple of t
    intervals = intervals.div_ceil(t_eff) * t_eff;
    let mut best_p = 0.0;
    let mut best_v = f64::NEG_INFINITY;
    for j in 0..=intervals {
        let p = 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / intervals as f64).cos());
        let v = evals(p).abs();
        if v > best_v {
            best_v = v;
            best_p = p;
        }
    }
    (best_p, best_v)
}

/// Options for [`optimize`].
#[derive(Debug, Clone, Copy)]
pub struct OptimizeOpts {
    pub c_grid: usize,
    /// Term-count threshold under which `auto` reports the sparse class.
    pub sparse_threshold: usize,
}

impl Default for OptimizeOpts {
    fn default() -> Self {
        OptimizeOpts {
            c_grid: 33,
            sparse_threshold: 8,
        }
    }
}

/// Run the method's candidate set and pair the best candidate with the
/// eigenvalue upper estimate. `auto` picks nnc for non-negative
/// coefficients, sparse for few terms, general otherwise.
pub fn optimize(
    f: &HomogPoly<f64>,
    q: u32,
    method: Method,
    opts: &OptimizeOpts,
    cap: &Capacity,
) -> Result<OptReport> {
    let resolved = match method {
        Method::Auto => {
            if f.terms().all(|(_, c)| *c >= 0.0) {
                Method::Nnc
            } else if f.num_terms() < opts.sparse_threshold {
                Method::Sparse
            } else {
                Method::General
            }
        }
        m => m,
    };
    let cands = match resolved {
        Method::Nnc => nnc_candidates(f, q, cap)?,
        Method::General | Method::Sparse => {
            if f.d() % 2 == 1 {
                // odd degree: drive the even-degree square through the same
                // machinery and rank candidates by |f|
                let g = f.pow(2, cap)?;
                general_candidates(&g, 2 * q, opts.c_grid, cap)?
            } else {
                general_candidates(f, q, opts.c_grid, cap)?
            }
        }
        Method::Auto => unreachable!(),
    };
    let (best, value) = best_candidate(f, &cands)?;
    let upper = powered_upper_estimate(f, q, cap)?;
    let ratio = if value > 0.0 {
        Some(upper.value / value)
    } else {
        None
    };
    Ok(OptReport {
        x_best: best.x.iter().copied().collect(),
        value,
        upper,
        ratio,
        method: resolved,
        candidates_evaluated: cands.len(),
    })
}
