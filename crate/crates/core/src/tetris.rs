//! Symmetrized Kronecker powers of degree-4 SoS-symmetric matrices:
//! template hypergraphs, hypergraphical matrices, the exact combinatorial
//! decomposition of q!·(M^{⊗q/4})^S into permuted slice products, and the
//! Schatten-1 / PSD lifting checks.
//!
//! Everything structural is generic over the coefficient so the identity
//! can be verified in exact rational arithmetic.

use crate::capacity::Capacity;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{index_to_tuple, tuple_count, tuple_to_index, MultiIndex, SymMatRep};
use crate::spectral::{lambda_min, schatten1, spectral_norm};
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::BTreeMap;

/// Minimal dense rectangular matrix over an arbitrary coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<C: Coeff> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C>,
}

impl<C: Coeff> Mat<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Mat<C> {
        let mut out = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn kron(&self, other: &Mat<C>) -> Mat<C> {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1).clone();
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let v = a.clone() * other.get(r2, c2).clone();
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, v);
                    }
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &Mat<C>) {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b.clone();
        }
    }

    pub fn scale(&self, c: &C) -> Mat<C> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }
}

impl Mat<f64> {
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// Symbolic vertex of a template hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Left(usize),
    Right(usize),
}

/// 4-uniform template hypergraph on L ⊎ R with 4-vertex edges.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateHypergraph {
    pub left_size: usize,
    pub right_size: usize,
    pub edges: Vec<[Vertex; 4]>,
}

impl TemplateHypergraph {
    /// H_{x,y}: one edge covering all of L = {ℓ₁..ℓ_x} and R = {r₁..r_y}.
    pub fn slice_template(x: usize, y: usize) -> Result<Self> {
        if x + y != 4 {
            return Err(Error::InvalidInput(format!(
                "slice template needs x + y = 4, got ({x},{y})"
            )));
        }
        let mut e = Vec::with_capacity(4);
        for i in 0..x {
            e.push(Vertex::Left(i));
        }
        for j in 0..y {
            e.push(Vertex::Right(j));
        }
        Ok(TemplateHypergraph {
            left_size: x,
            right_size: y,
            edges: vec![[e[0], e[1], e[2], e[3]]],
        })
    }

    /// Disjoint union: self's vertices first, then other's shifted.
    pub fn disjoint_union(&self, other: &TemplateHypergraph) -> TemplateHypergraph {
        let shift = |v: &Vertex| match *v {
            Vertex::Left(i) => Vertex::Left(i + self.left_size),
            Vertex::Right(j) => Vertex::Right(j + self.right_size),
        };
        let mut edges = self.edges.clone();
        for e in &other.edges {
            edges.push([shift(&e[0]), shift(&e[1]), shift(&e[2]), shift(&e[3])]);
        }
        TemplateHypergraph {
            left_size: self.left_size + other.left_size,
            right_size: self.right_size + other.right_size,
            edges,
        }
    }

    /// H^{σ₁,σ₂}: relabel left vertex ℓ_t to ℓ_{σ₁(t)} and right vertex
    /// r_t to r_{σ₂(t)}.
    pub fn permuted(&self, sigma_left: &[usize], sigma_right: &[usize]) -> Result<Self> {
        if sigma_left.len() != self.left_size || sigma_right.len() != self.right_size {
            return Err(Error::InvalidInput(
                "permutation length does not match template side".into(),
            ));
        }
        let map = |v: &Vertex| match *v {
            Vertex::Left(i) => Vertex::Left(sigma_left[i]),
            Vertex::Right(j) => Vertex::Right(sigma_right[j]),
        };
        let edges = self
            .edges
            .iter()
            .map(|e| [map(&e[0]), map(&e[1]), map(&e[2]), map(&e[3])])
            .collect();
        Ok(TemplateHypergraph {
            left_size: self.left_size,
            right_size: self.right_size,
            edges,
        })
    }

    fn validate(&self) -> Result<()> {
        for e in &self.edges {
            for v in e {
                match *v {
                    Vertex::Left(i) if i >= self.left_size => {
                        return Err(Error::InvalidInput("edge vertex out of range".into()))
                    }
                    Vertex::Right(j) if j >= self.right_size => {
                        return Err(Error::InvalidInput("edge vertex out of range".into()))
                    }
                    _ => {}
                }
            }
            for a in 0..4 {
                for b in a + 1..4 {
                    if e[a] == e[b] {
                        return Err(Error::InvalidInput(
                            "template edge has a repeated vertex".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// SoS-symmetric order-4 tensor view of a degree-4 representation; lookups
/// go through the sorted 4-tuple.
pub struct Tensor4<'a, C: Coeff> {
    m: &'a SymMatRep<C>,
}

impl<'a, C: Coeff> Tensor4<'a, C> {
    pub fn new(m: &'a SymMatRep<C>) -> Result<Self> {
        if m.k() != 2 {
            return Err(Error::InvalidInput(
                "tensor view requires a degree-4 (k = 2) representation".into(),
            ));
        }
        Ok(Tensor4 { m })
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn get(&self, idx: [usize; 4]) -> &C {
        let n = self.m.n();
        let row = tuple_to_index(n, &idx[0..2]);
        let col = tuple_to_index(n, &idx[2..4]);
        self.m.get(row, col)
    }
}

/// Entry [I,J] = Π over instantiated edges of T; the instantiation
/// substitutes ℓ_t = I_t and r_t = J_t.
pub fn hypergraphical_matrix<C: Coeff>(
    t: &Tensor4<C>,
    h: &TemplateHypergraph,
    cap: &Capacity,
) -> Result<Mat<C>> {
    h.validate()?;
    let n = t.n();
    let rows_u = tuple_count(n, h.left_size)?;
    let cols_u = tuple_count(n, h.right_size)?;
    cap.check_matrix(
        rows_u
            .checked_mul(cols_u)
            .ok_or_else(|| Error::Overflow("hypergraphical matrix".into()))?,
    )?;
    let rows = rows_u as usize;
    let cols = cols_u as usize;
    let mut out = Mat::zeros(rows, cols);
    for r in 0..rows {
        let it = index_to_tuple(n, h.left_size, r);
        for c in 0..cols {
            let jt = index_to_tuple(n, h.right_size, c);
            let mut prod = C::one();
            for e in &h.edges {
                let mut idx = [0usize; 4];
                for (s, v) in e.iter().enumerate() {
                    idx[s] = match *v {
                        Vertex::Left(i) => it[i],
                        Vertex::Right(j) => jt[j],
                    };
                }
                prod = prod * t.get(idx).clone();
            }
            out.set(r, c, prod);
        }
    }
    Ok(out)
}

/// Reshape slice M_{x,y} of the order-4 tensor as a [`Mat`].
pub fn slice_mat<C: Coeff>(m: &SymMatRep<C>, x: usize, y: usize) -> Result<Mat<C>> {
    let data = crate::poly::slice(m, x, y)?;
    let n = m.n();
    Ok(Mat {
        rows: tuple_count(n, x)? as usize,
        cols: tuple_count(n, y)? as usize,
        data,
    })
}

/// M^{⊗q/4} as a dense matrix over [n]^{q/2} × [n]^{q/2}.
fn kron_power<C: Coeff>(m: &SymMatRep<C>, reps: usize) -> Mat<C> {
    let side = m.side();
    let base = Mat {
        rows: side,
        cols: side,
        data: m.entries().to_vec(),
    };
    let mut acc = base.clone();
    for _ in 1..reps {
        acc = acc.kron(&base);
    }
    acc
}

/// The SoS-symmetrization of M^{⊗q/4}: entries averaged over the orbit
/// class of the combined multi-index α(I)+α(J) (equivalently
/// (1/q!)·Σ_{π∈S_q} (M^{⊗q/4})^π).
pub fn sym_kron_power<C: Coeff>(m: &SymMatRep<C>, q: u32, cap: &Capacity) -> Result<SymMatRep<C>> {
    if m.k() != 2 {
        return Err(Error::InvalidInput(
            "sym_kron_power requires a degree-4 representation".into(),
        ));
    }
    if q == 0 || q % 4 != 0 {
        return Err(Error::Divisibility {
            q,
            what: "q divisible by 4".into(),
        });
    }
    let n = m.n();
    let q2 = (q / 2) as usize;
    let side_u = tuple_count(n, q2)?;
    cap.check_matrix(
        side_u
            .checked_mul(side_u)
            .ok_or_else(|| Error::Overflow("sym_kron_power".into()))?,
    )?;
    let big = kron_power(m, (q / 4) as usize);
    let side = side_u as usize;
    debug_assert_eq!(big.rows, side);

    let mut sums: BTreeMap<MultiIndex, (C, u64)> = BTreeMap::new();
    for r in 0..side {
        let it = index_to_tuple(n, q2, r);
        for c in 0..side {
            let jt = index_to_tuple(n, q2, c);
            let mut joint = it.clone();
            joint.extend_from_slice(&jt);
            let key = MultiIndex::of_tuple(n, &joint);
            let entry = sums.entry(key).or_insert_with(|| (C::zero(), 0));
            entry.0 += big.get(r, c).clone();
            entry.1 += 1;
        }
    }
    let avg: BTreeMap<MultiIndex, C> = sums
        .into_iter()
        .map(|(k, (s, cnt))| (k, s / C::from_u128(cnt as u128)))
        .collect();

    let mut out = SymMatRep::zeros(n, q2, cap)?;
    for r in 0..side {
        let it = index_to_tuple(n, q2, r);
        for c in 0..side {
            let jt = index_to_tuple(n, q2, c);
            let mut joint = it.clone();
            joint.extend_from_slice(&jt);
            let key = MultiIndex::of_tuple(n, &joint);
            out.set(r, c, avg[&key].clone());
        }
    }
    out.set_sos_symmetric(true);
    Ok(out)
}

/// Full Σ_{π∈S_q} (M^{⊗q/4})^π oracle (factorially expensive; test use).
pub fn perm_sum_oracle<C: Coeff>(m: &SymMatRep<C>, q: u32, cap: &Capacity) -> Result<Mat<C>> {
    let n = m.n();
    let q2 = (q / 2) as usize;
    let side = tuple_count(n, q2)? as usize;
    cap.check_matrix((side * side) as u128)?;
    let big = kron_power(m, (q / 4) as usize);
    let mut out: Mat<C> = Mat::zeros(side, side);
    let mut perm: Vec<usize> = (0..q as usize).collect();
    let mut stack = vec![0usize; q as usize];
    // iterative Heap's algorithm over all q! permutations
    loop {
        for r in 0..side {
            let it = index_to_tuple(n, q2, r);
            for c in 0..side {
                let jt = index_to_tuple(n, q2, c);
                let mut joint = it.clone();
                joint.extend_from_slice(&jt);
                let permuted: Vec<usize> = perm.iter().map(|&p| joint[p]).collect();
                let pr = tuple_to_index(n, &permuted[0..q2]);
                let pc = tuple_to_index(n, &permuted[q2..]);
                let v = out.get(r, c).clone() + big.get(pr, pc).clone();
                out.set(r, c, v);
            }
        }
        // advance permutation
        let mut i = 1usize;
        loop {
            if i >= q as usize {
                return Ok(out);
            }
            if stack[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(stack[i], i);
                }
                stack[i] += 1;
                break;
            }
            stack[i] = 0;
            i += 1;
        }
    }
}

/// One summand of the Tetris decomposition: block counts (a,b,c,d) with
/// 12a+8b+4c+8d = q, a branch flag for the transposed A-factor, and the
/// multiplicity divisor R(a,b,c,d).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TetrisTerm {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub transposed: bool,
}

impl TetrisTerm {
    /// R(a,b,c,d) = (c!·2!^{2c}) · (b!·(2a+b)!·3!^{2a+2b}) · (d!·(a+d)!·4!^{a+2d}).
    ///
    /// This is the number of (σ₁,σ₂) ∈ S_{q/2}² pairs generating one fixed
    /// spread; the row and column sets of a (2,2)-shaped pair belong to a
    /// single pair, so the c-blocks contribute c! (not c!²).
    pub fn multiplicity(&self) -> Result<u128> {
        let (a, b, c, d) = (
            self.a as u128,
            self.b as u128,
            self.c as u128,
            self.d as u128,
        );
        let fact = |v: u128| -> Result<u128> {
            let mut acc: u128 = 1;
            for i in 2..=v {
                acc = acc
                    .checked_mul(i)
                    .ok_or_else(|| Error::Overflow("factorial".into()))?;
            }
            Ok(acc)
        };
        let powc = |base: u128, e: u128| -> Result<u128> {
            let mut acc: u128 = 1;
            for _ in 0..e {
                acc = acc
                    .checked_mul(base)
                    .ok_or_else(|| Error::Overflow("power".into()))?;
            }
            Ok(acc)
        };
        let cpart = fact(c)?
            .checked_mul(powc(2, 2 * c)?)
            .ok_or_else(|| Error::Overflow("R".into()))?;
        let bpart = fact(b)?
            .checked_mul(fact(2 * a + b)?)
            .and_then(|v| v.checked_mul(powc(6, 2 * a + 2 * b).ok()?))
            .ok_or_else(|| Error::Overflow("R".into()))?;
        let dpart = fact(d)?
            .checked_mul(fact(a + d)?)
            .and_then(|v| v.checked_mul(powc(24, a + 2 * d).ok()?))
            .ok_or_else(|| Error::Overflow("R".into()))?;
        cpart
            .checked_mul(bpart)
            .and_then(|v| v.checked_mul(dpart))
            .ok_or_else(|| Error::Overflow("R".into()))
    }
}

/// All solutions of 12a+8b+4c+8d = q. The main branch is always emitted;
/// the transposed branch only when a ≥ 1 (for a = 0 the two coincide
/// identically).
pub fn tetris_terms(q: u32) -> Result<Vec<TetrisTerm>> {
    if q == 0 || q % 4 != 0 {
        return Err(Error::Divisibility {
            q,
            what: "q divisible by 4".into(),
        });
    }
    let mut out = Vec::new();
    for a in 0..=q / 12 {
        for b in 0..=q / 8 {
            for c in 0..=q / 4 {
                for d in 0..=q / 8 {
                    if 12 * a + 8 * b + 4 * c + 8 * d == q {
                        out.push(TetrisTerm {
                            a,
                            b,
                            c,
                            d,
                            transposed: false,
                        });
                        if a >= 1 {
                            out.push(TetrisTerm {
                                a,
                                b,
                                c,
                                d,
                                transposed: true,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// P·X·Pᵀ where P = Σ_{σ∈S_{q/2}} P_σ: entry [I,J] = Σ_{σ,τ} X[σ(I),τ(J)].
fn conjugate_by_perm_sum<C: Coeff>(x: &Mat<C>, n: usize, q2: usize) -> Mat<C> {
    let perms = all_permutations(q2);
    let side = x.rows;
    let mut out = Mat::zeros(side, side);
    for r in 0..side {
        let it = index_to_tuple(n, q2, r);
        // precompute σ(I) row indices
        let rows: Vec<usize> = perms
            .iter()
            .map(|p| {
                let permuted: Vec<usize> = p.iter().map(|&i| it[i]).collect();
                tuple_to_index(n, &permuted)
            })
            .collect();
        for c in 0..side {
            let jt = index_to_tuple(n, q2, c);
            let cols: Vec<usize> = perms
                .iter()
                .map(|p| {
                    let permuted: Vec<usize> = p.iter().map(|&j| jt[j]).collect();
                    tuple_to_index(n, &permuted)
                })
                .collect();
            let mut acc = C::zero();
            for &rr in &rows {
                for &cc in &cols {
                    acc += x.get(rr, cc).clone();
                }
            }
            out.set(r, c, acc);
        }
    }
    out
}

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut stack = vec![0usize; k.max(1)];
    out.push(perm.clone());
    let mut i = 1usize;
    while i < k {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            out.push(perm.clone());
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    out
}

/// The slice products entering the decomposition.
struct SliceFactors<C: Coeff> {
    ma: Mat<C>,
    mb: Mat<C>,
    mc: Mat<C>,
    md: Mat<C>,
}

fn slice_factors<C: Coeff>(m: &SymMatRep<C>) -> Result<SliceFactors<C>> {
    let m31 = slice_mat(m, 3, 1)?;
    let m13 = slice_mat(m, 1, 3)?;
    let m04 = slice_mat(m, 0, 4)?;
    let m40 = slice_mat(m, 4, 0)?;
    let ma = m31.kron(&m04).kron(&m31);
    let mb = m31.kron(&m13);
    let mc = Mat {
        rows: m.side(),
        cols: m.side(),
        data: m.entries().to_vec(),
    };
    let md = m04.kron(&m40);
    Ok(SliceFactors { ma, mb, mc, md })
}

/// Σ over Tetris terms of P·(M_A^{⊗a}⊗M_B^{⊗b}⊗M_C^{⊗c}⊗M_D^{⊗d})·Pᵀ/R,
/// with M_Aᵀ in the transposed branch. Satisfies
/// (q/4)!·4!^{q/4}·tetris_rhs = q!·sym_kron_power.
pub fn tetris_rhs<C: Coeff>(m: &SymMatRep<C>, q: u32, cap: &Capacity) -> Result<Mat<C>> {
    if m.k() != 2 {
        return Err(Error::InvalidInput(
            "tetris_rhs requires a degree-4 representation".into(),
        ));
    }
    let n = m.n();
    let q2 = (q / 2) as usize;
    let side_u = tuple_count(n, q2)?;
    cap.check_matrix(
        side_u
            .checked_mul(side_u)
            .ok_or_else(|| Error::Overflow("tetris_rhs".into()))?,
    )?;
    // the permutation double sum is (q/2)!² per entry
    if q2 > 8 {
        return Err(Error::Capacity {
            what: "tetris permutation sum (q/2)!".into(),
            needed: q2 as u128,
            cap: 8,
        });
    }
    let factors = slice_factors(m)?;
    let terms = tetris_terms(q)?;
    let side = side_u as usize;
    let mut total = Mat::zeros(side, side);
    for term in &terms {
        let ma = if term.transposed {
            factors.ma.transpose()
        } else {
            factors.ma.clone()
        };
        let mut x = Mat {
            rows: 1,
            cols: 1,
            data: vec![C::one()],
        };
        for _ in 0..term.a {
            x = x.kron(&ma);
        }
        for _ in 0..term.b {
            x = x.kron(&factors.mb);
        }
        for _ in 0..term.c {
            x = x.kron(&factors.mc);
        }
        for _ in 0..term.d {
            x = x.kron(&factors.md);
        }
        debug_assert_eq!(x.rows, side);
        let conj = conjugate_by_perm_sum(&x, n, q2);
        let r = C::from_u128(term.multiplicity()?);
        let inv = C::one() / r;
        total.add_assign(&conj.scale(&inv));
    }
    Ok(total)
}

/// Outcome of a Tetris identity check.
#[derive(Debug, Clone, Serialize)]
pub struct TetrisReport {
    pub n: usize,
    pub q: u32,
    pub mode: VerifyMode,
    pub max_rel_error: f64,
    pub pass: bool,
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Exact,
    Float,
}

fn factorial_u128(v: u32) -> Result<u128> {
    let mut acc: u128 = 1;
    for i in 2..=v as u128 {
        acc = acc
            .checked_mul(i)
            .ok_or_else(|| Error::Overflow("factorial".into()))?;
    }
    Ok(acc)
}

/// Checks (q/4)!·4!^{q/4}·tetris_rhs(M,q) = q!·sym_kron_power(M,q)
/// entrywise. Exact mode demands equality; float mode 1e-9 relative to the
/// largest entry.
pub fn verify_tetris<C: Coeff>(
    m: &SymMatRep<C>,
    q: u32,
    mode: VerifyMode,
    cap: &Capacity,
) -> Result<TetrisReport> {
    let rhs = tetris_rhs(m, q, cap)?;
    let sym = sym_kron_power(m, q, cap)?;
    let lhs_scale = C::from_u128(
        factorial_u128(q / 4)?
            .checked_mul(24u128.pow(q / 4))
            .ok_or_else(|| Error::Overflow("verify scale".into()))?,
    );
    let rhs_scale = C::from_u128(factorial_u128(q)?);
    let mut max_abs = 0.0f64;
    let mut scale = 0.0f64;
    let side = rhs.rows;
    let mut exact = true;
    for r in 0..side {
        for c in 0..side {
            let left = lhs_scale.clone() * rhs.get(r, c).clone();
            let right = rhs_scale.clone() * sym.get(r, c).clone();
            if left != right {
                exact = false;
            }
            let diff = (left - right.clone()).abs_f64();
            max_abs = max_abs.max(diff);
            scale = scale.max(right.abs_f64());
        }
    }
    let rel = if scale > 0.0 {
        max_abs / scale
    } else {
        max_abs
    };
    let pass = match mode {
        VerifyMode::Exact => exact,
        VerifyMode::Float => rel <= 1e-9,
    };
    Ok(TetrisReport {
        n: m.n(),
        q,
        mode,
        max_rel_error: rel,
        pass,
        terms: tetris_terms(q)?.len(),
    })
}

/// Schatten-1 lifting check.
#[derive(Debug, Clone, Serialize)]
pub struct SchattenLiftReport {
    pub s1_m: f64,
    pub s1_m31: f64,
    pub hypotheses_hold: bool,
    pub s1_lifted: f64,
    pub budget: f64,
    pub pass: Option<bool>,
}

/// Compute ‖(M^{⊗q/4})^S‖_{S1} and compare with the triangle-inequality
/// budget (1/q!)·Σ_terms (q/4)!·4!^{q/4}·((q/2)!)²/R(a,b,c,d), valid when
/// ‖M‖_{S1}, ‖M_{3,1}‖_{S1} ≤ 1. When the hypotheses fail the report
/// carries the values with `pass = None`.
pub fn lift_schatten_check(
    m: &SymMatRep<f64>,
    q: u32,
    cap: &Capacity,
) -> Result<SchattenLiftReport> {
    let md = m.to_dmatrix();
    let s1_m = schatten1(&md);
    let m31 = slice_mat(m, 3, 1)?.to_dmatrix();
    let s1_m31 = schatten1(&m31);
    let hypotheses_hold = s1_m <= 1.0 + 1e-9 && s1_m31 <= 1.0 + 1e-9;

    let lifted = sym_kron_power(m, q, cap)?.to_dmatrix();
    let s1_lifted = schatten1(&lifted);

    let q2fact = factorial_u128(q / 2)? as f64;
    let front = factorial_u128(q / 4)? as f64 * 24f64.powi((q / 4) as i32);
    let mut budget = 0.0;
    for term in tetris_terms(q)? {
        budget += front * q2fact * q2fact / term.multiplicity()? as f64;
    }
    budget /= factorial_u128(q)? as f64;

    let pass = if hypotheses_hold {
        Some(s1_lifted <= budget * (1.0 + 1e-9))
    } else {
        None
    };
    Ok(SchattenLiftReport {
        s1_m,
        s1_m31,
        hypotheses_hold,
        s1_lifted,
        budget,
        pass,
    })
}

/// PSD lifting check.
#[derive(Debug, Clone, Serialize)]
pub struct PsdLiftReport {
    pub min_eig_m: f64,
    pub min_eig_ma: f64,
    pub min_eig_mb: f64,
    pub hypotheses_hold: bool,
    pub min_eig_lifted: f64,
    pub lifted_norm: f64,
    pub pass: Option<bool>,
}

fn sym_min_eig(m: &DMatrix<f64>) -> Result<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let (lam, _) = lambda_min(&sym)?;
    Ok(lam)
}

/// Numerically check M ⪰ 0, M_A ⪰ 0, M_B ⪰ 0 (symmetric parts); when all
/// hold, assert the lifted matrix is PSD to the same relative tolerance.
pub fn lift_psd_check(m: &SymMatRep<f64>, q: u32, cap: &Capacity) -> Result<PsdLiftReport> {
    let md = m.to_dmatrix();
    let factors = slice_factors(m)?;
    let ma = factors.ma.to_dmatrix();
    let mb = factors.mb.to_dmatrix();

    let tol_of = |x: &DMatrix<f64>| 1e-8 * spectral_norm(x).max(1e-300);
    let min_m = sym_min_eig(&md)?;
    let min_ma = sym_min_eig(&ma)?;
    let min_mb = sym_min_eig(&mb)?;
    let hypotheses_hold = min_m >= -tol_of(&md) && min_ma >= -tol_of(&ma) && min_mb >= -tol_of(&mb);

    let lifted = sym_kron_power(m, q, cap)?.to_dmatrix();
    let min_lift = sym_min_eig(&lifted)?;
    let lifted_norm = spectral_norm(&lifted);

    let pass = if hypotheses_hold {
        Some(min_lift >= -1e-8 * lifted_norm.max(1e-300))
    } else {
        None
    };
    Ok(PsdLiftReport {
        min_eig_m: min_m,
        min_eig_ma: min_ma,
        min_eig_mb: min_mb,
        hypotheses_hold,
        min_eig_lifted: min_lift,
        lifted_norm,
        pass,
    })
}

/// Seeded random SoS-symmetric degree-4 matrix with dyadic entries
/// (numerator in [−20, 20], denominator 8), exactly representable both in
/// f64 and in rationals so float and exact runs see the same matrix.
pub fn random_sos_matrix_f64(n: usize, seed: u64, cap: &Capacity) -> Result<SymMatRep<f64>> {
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    for alpha in MultiIndex::enumerate(n, 4) {
        let v = (rng.next_u64() % 41) as i64 - 20;
        coeffs.insert(alpha, v as f64 / 8.0);
    }
    let mut m = SymMatRep::zeros(n, 2, cap)?;
    let side = m.side();
    for r in 0..side {
        let it = index_to_tuple(n, 2, r);
        for c in 0..side {
            let jt = index_to_tuple(n, 2, c);
            let mut joint = it.clone();
            joint.extend_from_slice(&jt);
            let key = MultiIndex::of_tuple(n, &joint);
            m.set(r, c, coeffs[&key]);
        }
    }
    m.set_sos_symmetric(true);
    Ok(m)
}

/// Exact-rational copy of [`random_sos_matrix_f64`] for the same seed.
pub fn random_sos_matrix_exact(
    n: usize,
    seed: u64,
    cap: &Capacity,
) -> Result<SymMatRep<num_rational::BigRational>> {
    use num_rational::BigRational;
    let f = random_sos_matrix_f64(n, seed, cap)?;
    let mut m = SymMatRep::zeros(n, 2, cap)?;
    let side = m.side();
    for r in 0..side {
        for c in 0..side {
            let v = BigRational::from_float(*f.get(r, c)).expect("dyadic entry");
            m.set(r, c, v);
        }
    }
    m.set_sos_symmetric(true);
    Ok(m)
}
