//! Dense symmetric eigensolves, spectral/Frobenius/Schatten norms, the
//! block-diagonal representation built from multilinear parts, and the
//! closed-form upper estimates for the three polynomial classes.

use crate::capacity::Capacity;

use crate::decompose::multilinear_parts;
use crate::error::{Error, Result};
use crate::poly::{orbit_size, sos_matrix, tuple_count, HomogPoly, MultiIndex, SymMatRep};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::collections::BTreeMap;

/// How an upper estimate was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    EigSosMatrix,
    Gershgorin,
    Rowsum,
    Frobenius,
    BlockMultilinear,
}

/// A certified value ≥ sup_{‖x‖=1} f(x) for the polynomial it was built
/// from, together with the representation that witnesses it.
#[derive(Debug, Clone, Serialize)]
pub struct UpperEstimate {
    pub value: f64,
    pub method: BoundMethod,
    pub witness: Option<String>,
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSymmetric(f64::INFINITY));
    }
    let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in (r + 1)..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)]).abs());
        }
    }
    if worst > 1e-10 * scale {
        return Err(Error::NonSymmetric(worst));
    }
    Ok(())
}

/// Largest eigenvalue and a unit eigenvector of a symmetric matrix.
pub fn lambda_max(m: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    check_symmetric(m)?;
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut best = 0usize;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let v = eig.eigenvectors.column(best).into_owned();
    Ok((eig.eigenvalues[best], v))
}

/// Smallest eigenvalue and a unit eigenvector of a symmetric matrix.
pub fn lambda_min(m: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let (lam, v) = lambda_max(&(-m))?;
    Ok((-lam, v))
}

/// The quadratic norm max(|λ_max|, |λ_min|) with its eigenvector; prefers
/// λ_max on an exact tie.
pub fn quad_norm(m: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let (hi, vhi) = lambda_max(m)?;
    let (lo, vlo) = lambda_min(m)?;
    if lo.abs() > hi.abs() {
        Ok((lo.abs(), vlo))
    } else {
        Ok((hi.abs(), vhi))
    }
}

fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

/// Largest singular value (rectangular allowed).
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// √Σ entries².
pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Sum of singular values (rectangular allowed).
pub fn schatten1(m: &DMatrix<f64>) -> f64 {
    singular_values(m).into_iter().sum()
}

/// Block-diagonal representation of f built from matrix representations of
/// its multilinear parts: for each α and every tuple I in orbit(α), the
/// diagonal block at block-index I is M_{G_{2α}} / |orbit(α)|. Satisfies
/// λ_max(M_f) ≤ (1 + d/2)·max_α λ_max(M_{G_{2α}})/|orbit(α)|.
pub fn block_multilinear_rep(
    f: &HomogPoly<f64>,
    part_reps: &BTreeMap<MultiIndex, SymMatRep<f64>>,
    cap: &Capacity,
) -> Result<SymMatRep<f64>> {
    if f.d() % 2 != 0 {
        return Err(Error::OddDegree(f.d()));
    }
    let n = f.n();
    let k = (f.d() / 2) as usize;
    let parts = multilinear_parts(f);
    // every part must be covered by a rep of the right shape
    for (alpha, _) in parts.parts() {
        let rep = part_reps.get(alpha).ok_or_else(|| {
            Error::InvalidInput(format!("missing part representation for α = {alpha:?}"))
        })?;
        let want_k = ((f.d() - 2 * alpha.degree()) / 2) as usize;
        if rep.k() != want_k || rep.n() != n {
            return Err(Error::InvalidInput(format!(
                "part representation for α = {alpha:?} has wrong shape"
            )));
        }
    }
    let mut m = SymMatRep::zeros(n, k, cap)?;
    for (alpha, rep) in part_reps {
        if parts.get(alpha).is_none() {
            return Err(Error::InvalidInput(format!(
                "representation supplied for absent part α = {alpha:?}"
            )));
        }
        let t = alpha.degree() as usize;
        let orb = orbit_size(alpha)? as f64;
        let sub = rep.side();
        // rows of M_f factor as [n]^t ⊗ [n]^{k-t}; place blocks at every
        // tuple I ∈ [n]^t with α(I) = α
        let prefix_total = tuple_count(n, t)? as usize;
        for p in 0..prefix_total {
            let pt = crate::poly::index_to_tuple(n, t, p);
            if MultiIndex::of_tuple(n, &pt) != *alpha {
                continue;
            }
            for rk in 0..sub {
                for cl in 0..sub {
                    let v = rep.get(rk, cl);
                    if *v == 0.0 {
                        continue;
                    }
                    let row = p * sub + rk;
                    let col = p * sub + cl;
                    m.add_to(row, col, v / orb);
                }
            }
        }
    }
    Ok(m)
}

/// Gershgorin bound for multilinear f of even degree:
/// value = n^{d/2}·max_β|f_β| / d!.
pub fn gershgorin_bound(f: &HomogPoly<f64>) -> Result<UpperEstimate> {
    require_multilinear(f)?;
    if f.d() % 2 != 0 {
        return Err(Error::OddDegree(f.d()));
    }
    let maxc = f.max_coeff_abs();
    let dfact = factorial_f64(f.d());
    let value = (f.n() as f64).powi((f.d() / 2) as i32) * maxc / dfact;
    Ok(UpperEstimate {
        value,
        method: BoundMethod::Gershgorin,
        witness: Some(format!(
            "n^(d/2)·max|f_β|/d! with n={}, d={}, max|f_β|={maxc}",
            f.n(),
            f.d()
        )),
    })
}

/// Perron–Frobenius row-sum bound for non-negative multilinear f:
/// value = max over rows I of Σ_J M_f[I,J].
pub fn rowsum_bound(f: &HomogPoly<f64>, cap: &Capacity) -> Result<UpperEstimate> {
    require_multilinear(f)?;
    for (_, c) in f.terms() {
        if *c < 0.0 {
            return Err(Error::NegativeCoefficient(*c));
        }
    }
    if f.d() % 2 != 0 {
        return Err(Error::OddDegree(f.d()));
    }
    let m = sos_matrix(f, cap)?;
    let side = m.side();
    let mut best = 0.0f64;
    let mut best_row = 0usize;
    for r in 0..side {
        let mut s = 0.0;
        for c in 0..side {
            s += m.get(r, c);
        }
        if s > best {
            best = s;
            best_row = r;
        }
    }
    Ok(UpperEstimate {
        value: best,
        method: BoundMethod::Rowsum,
        witness: Some(format!("max row sum of M_f at row index {best_row}")),
    })
}

/// Frobenius bound for multilinear f of even degree:
/// value = √(Σ_β f_β² / d!).
pub fn frobenius_sparse_bound(f: &HomogPoly<f64>) -> Result<UpperEstimate> {
    require_multilinear(f)?;
    if f.d() % 2 != 0 {
        return Err(Error::OddDegree(f.d()));
    }
    let dfact = factorial_f64(f.d());
    let ssq: f64 = f.terms().map(|(_, c)| c * c).sum();
    Ok(UpperEstimate {
        value: (ssq / dfact).sqrt(),
        method: BoundMethod::Frobenius,
        witness: Some(format!("√(Σf_β²/d!) over {} terms", f.num_terms())),
    })
}

/// Eigenvalue estimate λ_max(M_{f^{q/d}})^{d/q}, certified for all three
/// polynomial classes (for nnc and odd d the value also dominates ‖f‖₂).
pub fn powered_upper_estimate(f: &HomogPoly<f64>, q: u32, cap: &Capacity) -> Result<UpperEstimate> {
    if q == 0 || q % f.d() != 0 {
        return Err(Error::Divisibility {
            q,
            what: format!("q divisible by d = {}", f.d()),
        });
    }
    if q % 2 != 0 {
        return Err(Error::Divisibility {
            q,
            what: "even q".into(),
        });
    }
    let r = q / f.d();
    let g = f.pow(r, cap)?;
    let m = sos_matrix(&g, cap)?;
    let (lam, _) = lambda_max(&m.to_dmatrix())?;
    let value = if lam <= 0.0 {
        0.0
    } else {
        lam.powf(f.d() as f64 / q as f64)
    };
    Ok(UpperEstimate {
        value,
        method: BoundMethod::EigSosMatrix,
        witness: Some(format!(
            "λ_max(M_(f^{r}))^(d/q) with matrix side {}",
            m.side()
        )),
    })
}

fn require_multilinear(f: &HomogPoly<f64>) -> Result<()> {
    for (alpha, _) in f.terms() {
        for &e in alpha.exps() {
            if e > 1 {
                return Err(Error::NotMultilinear(e));
            }
        }
    }
    Ok(())
}

fn factorial_f64(d: u32) -> f64 {
    (1..=d as u64).map(|v| v as f64).product::<f64>().max(1.0)
}
