//! Homogeneous polynomials, multi-indices, orbits and SoS-symmetric matrix
//! representations.
//!
//! A degree-d polynomial is stored sparsely as a map from multi-indices α
//! (exponent vectors with |α| = d) to coefficients. Matrix representations
//! are dense, indexed by tuples I ∈ [n]^k in lexicographic (big-endian)
//! order: `index(I) = Σ I_j · n^{k-1-j}` with 0-based entries.

use crate::capacity::Capacity;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

use std::collections::BTreeMap;

/// Exponent vector α ∈ ℕⁿ with cached total degree |α| = Σ αᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    exps: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        MultiIndex { exps, degree }
    }

    /// The zero multi-index on n variables.
    pub fn zero(n: usize) -> Self {
        MultiIndex {
            exps: vec![0; n],
            degree: 0,
        }
    }

    /// The unit multi-index e_i.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        MultiIndex { exps, degree: 1 }
    }

    /// Multi-index α(I) of a tuple I ∈ [n]^k (0-based entries).
    pub fn of_tuple(n: usize, tuple: &[usize]) -> Self {
        let mut exps = vec![0u32; n];
        for &i in tuple {
            exps[i] += 1;
        }
        MultiIndex {
            exps,
            degree: tuple.len() as u32,
        }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    /// True when α ≤ 𝟙, i.e. every exponent is 0 or 1.
    pub fn is_multilinear(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    /// Indices i with αᵢ > 0.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.exps[i] > 0).collect()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.n(), other.n());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        MultiIndex {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// Componentwise difference; None if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.n(), other.n());
        let mut exps = Vec::with_capacity(self.n());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex::new(exps))
    }

    /// Split β = 2α + γ with γ ≤ 𝟙: α = ⌊β/2⌋, γ = β mod 2 componentwise.
    pub fn even_odd_split(&self) -> (MultiIndex, MultiIndex) {
        let half: Vec<u32> = self.exps.iter().map(|e| e / 2).collect();
        let rem: Vec<u32> = self.exps.iter().map(|e| e % 2).collect();
        (MultiIndex::new(half), MultiIndex::new(rem))
    }

    pub fn scale(&self, r: u32) -> MultiIndex {
        MultiIndex::new(self.exps.iter().map(|e| e * r).collect())
    }

    /// All multi-indices on n variables with |α| = d, in lexicographic order.
    pub fn enumerate(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, rem: u32) {
            if pos + 1 == cur.len() {
                cur[pos] = rem;
                out.push(MultiIndex::new(cur.clone()));
                return;
            }
            for v in (0..=rem).rev() {
                cur[pos] = v;
                rec(out, cur, pos + 1, rem - v);
            }
            cur[pos] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex::new(vec![]));
            }
            return out;
        }
        rec(&mut out, &mut cur, 0, d);
        out
    }

    /// All multilinear multi-indices (α ≤ 𝟙) with |α| = d.
    pub fn enumerate_multilinear(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let d = d as usize;
        if d > n {
            return out;
        }
        let mut comb: Vec<usize> = (0..d).collect();
        loop {
            let mut exps = vec![0u32; n];
            for &i in &comb {
                exps[i] = 1;
            }
            out.push(MultiIndex::new(exps));
            // next combination in lexicographic order
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if comb[i] != i + n - d {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            comb[i] += 1;
            for j in i + 1..d {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
}

/// Number of ordered tuples I ∈ [n]^{|α|} with α(I) = α, i.e. the
/// multinomial |α|! / Π αᵢ!.
pub fn orbit_size(alpha: &MultiIndex) -> Result<u128> {
    let mut result: u128 = 1;
    let mut seen: u32 = 0;
    for &e in alpha.exps() {
        for j in 1..=e {
            seen += 1;
            // multiply by seen, divide by j: keeps the running value integral
            result = result
                .checked_mul(seen as u128)
                .ok_or_else(|| Error::Overflow("orbit_size".into()))?;
            result /= j as u128;
        }
    }
    Ok(result)
}

/// Sparse homogeneous polynomial of degree d in n variables.
///
/// Invariants: every stored multi-index has |α| = d and a nonzero
/// coefficient. Degree 0 (a constant) is allowed internally; it shows up as
/// the innermost multilinear part of polynomials like x₁⁴.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogPoly<C: Coeff = f64> {
    n: usize,
    d: u32,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coeff> HomogPoly<C> {
    /// The zero polynomial of the given degree.
    pub fn zero(n: usize, d: u32) -> Self {
        HomogPoly {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n: usize, d: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C)>,
    {
        let mut map: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: alpha.n(),
                });
            }
            if alpha.degree() != d {
                return Err(Error::InvalidInput(format!(
                    "term degree {} does not match polynomial degree {}",
                    alpha.degree(),
                    d
                )));
            }
            let entry = map.entry(alpha).or_insert_with(C::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(HomogPoly { n, d, terms: map })
    }

    /// Single monomial c·x^α.
    pub fn monomial(alpha: MultiIndex, c: C) -> Self {
        let n = alpha.n();
        let d = alpha.degree();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        HomogPoly { n, d, terms }
    }

    /// Degree-0 constant polynomial.
    pub fn constant(n: usize, c: C) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C {
        self.terms.get(alpha).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|a| a.is_multilinear())
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_coeff_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(a, v)| (a.clone(), v.clone() * c.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        HomogPoly {
            n: self.n,
            d: self.d,
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::InvalidInput(
                "cannot add polynomials of different shape".into(),
            ));
        }
        let mut terms = self.terms.clone();
        for (a, c) in &other.terms {
            let entry = terms.entry(a.clone()).or_insert_with(C::zero);
            *entry += c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(HomogPoly {
            n: self.n,
            d: self.d,
            terms,
        })
    }

    /// Σ f_α x^α at a point of the same scalar type.
    pub fn eval(&self, x: &[C]) -> Result<C> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut acc = C::zero();
        for (alpha, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in alpha.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term * x[i].clone();
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Product, with a term-count capacity check on the output.
    pub fn mul(&self, other: &Self, cap: &Capacity) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let bound = (self.terms.len() as u128) * (other.terms.len() as u128);
        cap.check_terms(bound)?;
        let mut terms: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let g = a.add(b);
                let entry = terms.entry(g).or_insert_with(C::zero);
                *entry += ca.clone() * cb.clone();
            }
        }
        terms.retain(|_, c| !c.is_zero());
        cap.check_terms(terms.len() as u128)?;
        Ok(HomogPoly {
            n: self.n,
            d: self.d + other.d,
            terms,
        })
    }

    /// f^r, pointwise equal to eval(f,·)^r.
    pub fn pow(&self, r: u32, cap: &Capacity) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidInput("pow requires r >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..r {
            acc = acc.mul(self, cap)?;
        }
        Ok(acc)
    }
}

impl HomogPoly<f64> {
    /// Evaluation at a complex point (coefficients stay real).
    pub fn eval_complex(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        let mut acc = Complex64::ZERO;
        for (alpha, c) in &self.terms {
            let mut term = Complex64::new(*c, 0.0);
            for (i, &e) in alpha.exps().iter().enumerate() {
                term *= z[i].powu(e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact conversion to rational coefficients (f64 values are dyadic).
    pub fn to_rational(&self) -> HomogPoly<num_rational::BigRational> {
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| {
                (
                    a.clone(),
                    num_rational::BigRational::from_float(*c).expect("finite coefficient"),
                )
            })
            .collect();
        HomogPoly {
            n: self.n,
            d: self.d,
            terms,
        }
    }
}

/// Number of k-tuples over [n], i.e. n^k, with overflow checking.
pub fn tuple_count(n: usize, k: usize) -> Result<u128> {
    let mut v: u128 = 1;
    for _ in 0..k {
        v = v
            .checked_mul(n as u128)
            .ok_or_else(|| Error::Overflow("tuple_count".into()))?;
    }
    Ok(v)
}

/// Lexicographic linear index of a tuple I ∈ [n]^k (big-endian base n).
pub fn tuple_to_index(n: usize, tuple: &[usize]) -> usize {
    let mut v = 0usize;
    for &t in tuple {
        debug_assert!(t < n);
        v = v * n + t;
    }
    v
}

/// Inverse of [`tuple_to_index`].
pub fn index_to_tuple(n: usize, k: usize, mut index: usize) -> Vec<usize> {
    let mut t = vec![0usize; k];
    for j in (0..k).rev() {
        t[j] = index % n;
        index /= n;
    }
    t
}

/// Dense matrix indexed by [n]^k × [n]^k representing a degree-2k
/// polynomial: f(x) = (x^{⊗k})ᵀ M x^{⊗k}.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatRep<C: Coeff = f64> {
    n: usize,
    k: usize,
    side: usize,
    entries: Vec<C>,
    sos_symmetric: bool,
}

impl<C: Coeff> SymMatRep<C> {
    pub fn zeros(n: usize, k: usize, cap: &Capacity) -> Result<Self> {
        let side_u = tuple_count(n, k)?;
        cap.check_matrix(
            side_u
                .checked_mul(side_u)
                .ok_or_else(|| Error::Overflow("matrix size".into()))?,
        )?;
        let side = side_u as usize;
        Ok(SymMatRep {
            n,
            k,
            side,
            entries: vec![C::zero(); side * side],
            sos_symmetric: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn is_sos_symmetric_flag(&self) -> bool {
        self.sos_symmetric
    }

    pub fn set_sos_symmetric(&mut self, v: bool) {
        self.sos_symmetric = v;
    }

    pub fn get(&self, row: usize, col: usize) -> &C {
        &self.entries[row * self.side + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C) {
        self.entries[row * self.side + col] = v;
    }

    pub fn add_to(&mut self, row: usize, col: usize, v: C) {
        self.entries[row * self.side + col] += v;
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    /// Exhaustive SoS-symmetry scan: entries must agree exactly on every
    /// orbit class α(I)+α(J). Returns the largest in-class deviation
    /// (0.0 when exactly symmetric).
    pub fn sos_symmetry_defect(&self) -> f64 {
        let mut classes: BTreeMap<MultiIndex, C> = BTreeMap::new();
        let mut defect = 0.0f64;
        for row in 0..self.side {
            let it = index_to_tuple(self.n, self.k, row);
            for col in 0..self.side {
                let jt = index_to_tuple(self.n, self.k, col);
                let mut joint = it.clone();
                joint.extend_from_slice(&jt);
                let key = MultiIndex::of_tuple(self.n, &joint);
                let v = self.get(row, col).clone();
                match classes.get(&key) {
                    None => {
                        classes.insert(key, v);
                    }
                    Some(rep) => {
                        let diff = (rep.clone() - v).abs_f64();
                        if diff > defect {
                            defect = diff;
                        }
                    }
                }
            }
        }
        defect
    }

    /// The polynomial value (x^{⊗k})ᵀ M x^{⊗k}.
    pub fn quadratic_form(&self, x: &[C]) -> Result<C> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        // x^{⊗k} in tuple order
        let mut pow = vec![C::one()];
        for _ in 0..self.k {
            let mut next = Vec::with_capacity(pow.len() * self.n);
            for p in &pow {
                for xi in x {
                    next.push(p.clone() * xi.clone());
                }
            }
            pow = next;
        }
        let mut acc = C::zero();
        for row in 0..self.side {
            let mut rowacc = C::zero();
            for (col, pc) in pow.iter().enumerate() {
                rowacc += self.get(row, col).clone() * pc.clone();
            }
            acc += pow[row].clone() * rowacc;
        }
        Ok(acc)
    }
}

impl SymMatRep<f64> {
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.side, self.side, &self.entries)
    }

    pub fn from_dmatrix(n: usize, k: usize, m: &DMatrix<f64>) -> Result<Self> {
        let side = tuple_count(n, k)? as usize;
        if m.nrows() != side || m.ncols() != side {
            return Err(Error::DimensionMismatch {
                expected: side,
                got: m.nrows(),
            });
        }
        let mut entries = Vec::with_capacity(side * side);
        for r in 0..side {
            for c in 0..side {
                entries.push(m[(r, c)]);
            }
        }
        Ok(SymMatRep {
            n,
            k,
            side,
            entries,
            sos_symmetric: false,
        })
    }
}

/// The unique SoS-symmetric matrix representation of an even-degree
/// polynomial: M[I,J] = f_{α(I)+α(J)} / |orbit(α(I)+α(J))|.
pub fn sos_matrix<C: Coeff>(f: &HomogPoly<C>, cap: &Capacity) -> Result<SymMatRep<C>> {
    if f.d() % 2 != 0 {
        return Err(Error::OddDegree(f.d()));
    }
    let k = (f.d() / 2) as usize;
    let n = f.n();
    let mut m = SymMatRep::zeros(n, k, cap)?;
    let side = m.side();
    // cache coefficient/orbit quotients per multi-index
    let mut quot: BTreeMap<MultiIndex, C> = BTreeMap::new();
    for (alpha, c) in f.terms() {
        let orb = orbit_size(alpha)?;
        quot.insert(alpha.clone(), c.clone() / C::from_u128(orb));
    }
    for row in 0..side {
        let it = index_to_tuple(n, k, row);
        for col in 0..side {
            let jt = index_to_tuple(n, k, col);
            let mut joint = it.clone();
            joint.extend_from_slice(&jt);
            let key = MultiIndex::of_tuple(n, &joint);
            if let Some(v) = quot.get(&key) {
                m.set(row, col, v.clone());
            }
        }
    }
    m.set_sos_symmetric(true);
    Ok(m)
}

/// Reshape of the order-4 tensor T[i₁..i₄] = M[(i₁,i₂),(i₃,i₄)] of a
/// degree-4 representation into an n^x × n^y matrix, x + y = 4.
///
/// Returned row-major with `n^x` rows.
pub fn slice<C: Coeff>(m: &SymMatRep<C>, x: usize, y: usize) -> Result<Vec<C>> {
    if m.k() != 2 {
        return Err(Error::InvalidInput(format!(
            "slice requires an order-2 (degree-4) representation, got k = {}",
            m.k()
        )));
    }
    if x + y != 4 {
        return Err(Error::InvalidInput(format!(
            "slice shape ({x},{y}) must satisfy x + y = 4"
        )));
    }
    let n = m.n();
    let rows = tuple_count(n, x)? as usize;
    let cols = tuple_count(n, y)? as usize;
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let rt = index_to_tuple(n, x, r);
        for c in 0..cols {
            let ct = index_to_tuple(n, y, c);
            let mut k4 = rt.clone();
            k4.extend_from_slice(&ct);
            let row = tuple_to_index(n, &k4[0..2]);
            let col = tuple_to_index(n, &k4[2..4]);
            out.push(m.get(row, col).clone());
        }
    }
    Ok(out)
}
