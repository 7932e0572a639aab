//! Multilinear decomposition f = Σ_α x^{2α}·G_{2α}(x), folded polynomials,
//! collapse, and fold construction from the SoS-symmetric matrix.

use crate::capacity::Capacity;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{
    index_to_tuple, orbit_size, sos_matrix, tuple_count, HomogPoly, MultiIndex, SymMatRep,
};
use num_complex::Complex64;

use std::collections::BTreeMap;

/// The unique split of f into multilinear parts: f = Σ_α x^{2α}·G_{2α}(x)
/// where each G_{2α} is multilinear of degree d − 2|α|.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearParts<C: Coeff = f64> {
    n: usize,
    d: u32,
    parts: BTreeMap<MultiIndex, HomogPoly<C>>,
}

impl<C: Coeff> MultilinearParts<C> {
    pub fn parts(&self) -> impl Iterator<Item = (&MultiIndex, &HomogPoly<C>)> {
        self.parts.iter()
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<&HomogPoly<C>> {
        self.parts.get(alpha)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Σ_α x^{2α}·G_{2α}(x), which must reproduce f.
    pub fn reconstruct_eval(&self, x: &[C]) -> Result<C> {
        let mut acc = C::zero();
        for (alpha, part) in &self.parts {
            let mut mono = C::one();
            for (i, &e) in alpha.exps().iter().enumerate() {
                for _ in 0..2 * e {
                    mono = mono * x[i].clone();
                }
            }
            acc += mono * part.eval(x)?;
        }
        Ok(acc)
    }
}

/// Unique decomposition via β = 2α + γ, γ ≤ 𝟙: the coefficient f_β lands in
/// part α = ⌊β/2⌋ at monomial γ = β mod 2.
pub fn multilinear_parts<C: Coeff>(f: &HomogPoly<C>) -> MultilinearParts<C> {
    let mut buckets: BTreeMap<MultiIndex, Vec<(MultiIndex, C)>> = BTreeMap::new();
    for (beta, c) in f.terms() {
        let (alpha, gamma) = beta.even_odd_split();
        buckets.entry(alpha).or_default().push((gamma, c.clone()));
    }
    let mut parts = BTreeMap::new();
    for (alpha, terms) in buckets {
        let deg = f.d() - 2 * alpha.degree();
        let part = HomogPoly::from_terms(f.n(), deg, terms).expect("split degrees are consistent");
        parts.insert(alpha, part);
    }
    MultilinearParts {
        n: f.n(),
        d: f.d(),
        parts,
    }
}

/// The k-collapse: g_γ = Σ_{|α|=k} f_{γ+α}, a degree d−k polynomial.
pub fn collapse<C: Coeff>(f: &HomogPoly<C>, k: u32) -> Result<HomogPoly<C>> {
    if k > f.d() {
        return Err(Error::InvalidInput(format!(
            "collapse level {k} exceeds degree {}",
            f.d()
        )));
    }
    let mut terms: BTreeMap<MultiIndex, C> = BTreeMap::new();
    for (beta, c) in f.terms() {
        // distribute f_β to every γ ≤ β with |γ| = d − k
        for alpha in MultiIndex::enumerate(f.n(), k) {
            if let Some(gamma) = beta.checked_sub(&alpha) {
                let e = terms.entry(gamma).or_insert_with(C::zero);
                *e += c.clone();
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    HomogPoly::from_terms(f.n(), f.d() - k, terms)
}

/// Degree-(d₁,d₂) polynomial whose coefficients ("folds") are themselves
/// degree-d₂ polynomials: h(x) = Σ_β h_β(x)·x^β.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldedPoly<C: Coeff = f64> {
    n: usize,
    d1: u32,
    d2: u32,
    folds: BTreeMap<MultiIndex, HomogPoly<C>>,
}

impl<C: Coeff> FoldedPoly<C> {
    pub fn new(n: usize, d1: u32, d2: u32) -> Self {
        FoldedPoly {
            n,
            d1,
            d2,
            folds: BTreeMap::new(),
        }
    }

    pub fn from_folds<I>(n: usize, d1: u32, d2: u32, folds: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, HomogPoly<C>)>,
    {
        let mut map = BTreeMap::new();
        for (beta, fold) in folds {
            if beta.n() != n || fold.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: beta.n().max(fold.n()),
                });
            }
            if beta.degree() != d1 {
                return Err(Error::InvalidInput(format!(
                    "fold monomial degree {} does not match d1 = {d1}",
                    beta.degree()
                )));
            }
            if fold.d() != d2 {
                return Err(Error::InvalidInput(format!(
                    "fold degree {} does not match d2 = {d2}",
                    fold.d()
                )));
            }
            if !fold.is_zero() {
                map.insert(beta, fold);
            }
        }
        Ok(FoldedPoly {
            n,
            d1,
            d2,
            folds: map,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn d2(&self) -> u32 {
        self.d2
    }

    pub fn folds(&self) -> impl Iterator<Item = (&MultiIndex, &HomogPoly<C>)> {
        self.folds.iter()
    }

    pub fn fold(&self, beta: &MultiIndex) -> Option<&HomogPoly<C>> {
        self.folds.get(beta)
    }

    pub fn num_folds(&self) -> usize {
        self.folds.len()
    }

    /// Evaluation at y substitutes into the monomials only, returning the
    /// degree-d₂ polynomial Σ_β y^β·h_β.
    pub fn eval_monomials(&self, y: &[C]) -> Result<HomogPoly<C>> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let mut acc = HomogPoly::zero(self.n, self.d2);
        for (beta, fold) in &self.folds {
            let mut scalar = C::one();
            for (i, &e) in beta.exps().iter().enumerate() {
                for _ in 0..e {
                    scalar = scalar * y[i].clone();
                }
            }
            acc = acc.add(&fold.scale(&scalar))?;
        }
        Ok(acc)
    }

    /// The degree-(d₁+d₂) unfolding Σ_β h_β(x)·x^β.
    pub fn unfold(&self) -> HomogPoly<C> {
        let mut terms: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (beta, fold) in &self.folds {
            for (gamma, c) in fold.terms() {
                let key = beta.add(gamma);
                let e = terms.entry(key).or_insert_with(C::zero);
                *e += c.clone();
            }
        }
        terms.retain(|_, c| !c.is_zero());
        HomogPoly::from_terms(self.n, self.d1 + self.d2, terms)
            .expect("unfold degrees are consistent")
    }

    /// Product of folded polynomials: monomials multiply, folds multiply as
    /// polynomials.
    pub fn mul(&self, other: &Self, cap: &Capacity) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut folds: BTreeMap<MultiIndex, HomogPoly<C>> = BTreeMap::new();
        for (b1, f1) in &self.folds {
            for (b2, f2) in &other.folds {
                let beta = b1.add(b2);
                let prod = f1.mul(f2, cap)?;
                match folds.get_mut(&beta) {
                    Some(existing) => *existing = existing.add(&prod)?,
                    None => {
                        folds.insert(beta, prod);
                    }
                }
            }
        }
        folds.retain(|_, f| !f.is_zero());
        cap.check_terms(folds.values().map(|f| f.num_terms() as u128).sum::<u128>())?;
        Ok(FoldedPoly {
            n: self.n,
            d1: self.d1 + other.d1,
            d2: self.d2 + other.d2,
            folds,
        })
    }

    /// The 2-variable collapse on the monomial part: folds summed over
    /// |α| = k shells.
    pub fn collapse(&self, k: u32) -> Result<FoldedPoly<C>> {
        if k > self.d1 {
            return Err(Error::InvalidInput(format!(
                "collapse level {k} exceeds monomial degree {}",
                self.d1
            )));
        }
        let mut folds: BTreeMap<MultiIndex, HomogPoly<C>> = BTreeMap::new();
        for (beta, fold) in &self.folds {
            for alpha in MultiIndex::enumerate(self.n, k) {
                if let Some(gamma) = beta.checked_sub(&alpha) {
                    match folds.get_mut(&gamma) {
                        Some(existing) => *existing = existing.add(fold)?,
                        None => {
                            folds.insert(gamma, fold.clone());
                        }
                    }
                }
            }
        }
        folds.retain(|_, f| !f.is_zero());
        Ok(FoldedPoly {
            n: self.n,
            d1: self.d1 - k,
            d2: self.d2,
            folds,
        })
    }
}

impl FoldedPoly<f64> {
    /// Evaluation of the monomials at a complex point: Σ_β z^β·h_β with the
    /// folds kept real, returned as the real/imaginary fold pair (A, B) so
    /// that h(z) = A + iB.
    pub fn eval_monomials_complex(
        &self,
        z: &[Complex64],
    ) -> Result<(HomogPoly<f64>, HomogPoly<f64>)> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        let mut re = HomogPoly::zero(self.n, self.d2);
        let mut im = HomogPoly::zero(self.n, self.d2);
        for (beta, fold) in &self.folds {
            let mut scalar = Complex64::new(1.0, 0.0);
            for (i, &e) in beta.exps().iter().enumerate() {
                scalar *= z[i].powu(e);
            }
            re = re.add(&fold.scale(&scalar.re))?;
            im = im.add(&fold.scale(&scalar.im))?;
        }
        Ok((re, im))
    }
}

/// Folded power h^r with unfold(h^r) = unfold(h)^r.
pub fn folded_power<C: Coeff>(h: &FoldedPoly<C>, r: u32, cap: &Capacity) -> Result<FoldedPoly<C>> {
    if r == 0 {
        return Err(Error::InvalidInput("folded_power requires r >= 1".into()));
    }
    let mut acc = h.clone();
    for _ in 1..r {
        acc = acc.mul(h, cap)?;
    }
    Ok(acc)
}

/// Folded analogue of the multilinear split: S_{2α} has folds
/// (S_{2α})_γ = h_{2α+γ} for γ ≤ 𝟙, and Σ_α x^{2α}·S_{2α} = h.
pub fn folded_multilinear_parts<C: Coeff>(
    h: &FoldedPoly<C>,
) -> BTreeMap<MultiIndex, FoldedPoly<C>> {
    let mut buckets: BTreeMap<MultiIndex, Vec<(MultiIndex, HomogPoly<C>)>> = BTreeMap::new();
    for (beta, fold) in h.folds() {
        let (alpha, gamma) = beta.even_odd_split();
        buckets
            .entry(alpha)
            .or_default()
            .push((gamma, fold.clone()));
    }
    let mut out = BTreeMap::new();
    for (alpha, folds) in buckets {
        let d1 = h.d1() - 2 * alpha.degree();
        let part =
            FoldedPoly::from_folds(h.n(), d1, h.d2(), folds).expect("split degrees consistent");
        out.insert(alpha, part);
    }
    out
}

/// Scaling convention for [`fold_quadratic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldScaling {
    /// h_β(x) = |orbit(β)| · xᵀ M_block x, so unfold(h) = f exactly.
    UnfoldExact,
    /// h_β(x) = xᵀ M_block x / |orbit(β)|; does not unfold back to f.
    OrbitNormalized,
}

/// The degree-(d−2, 2) folded polynomial read off the n×n blocks of the
/// SoS-symmetric matrix of f: for each β with |β| = d−2 the representative
/// block is taken at the lexicographically smallest (I, J) pair with
/// α(I)+α(J) = β (all such blocks agree by SoS-symmetry).
pub fn fold_quadratic<C: Coeff>(
    f: &HomogPoly<C>,
    scaling: FoldScaling,
    cap: &Capacity,
) -> Result<FoldedPoly<C>> {
    if f.d() % 2 != 0 {
        return Err(Error::OddDegree(f.d()));
    }
    if f.d() < 4 {
        return Err(Error::InvalidInput(format!(
            "fold_quadratic requires degree >= 4, got {}",
            f.d()
        )));
    }
    let m = sos_matrix(f, cap)?;
    let n = f.n();
    let kk = (f.d() / 2) as usize; // tuple order of the matrix
    let prefix = kk - 1;
    let prefix_count = tuple_count(n, prefix)? as usize;

    let mut folds: BTreeMap<MultiIndex, HomogPoly<C>> = BTreeMap::new();
    // lexicographically smallest (I, J) pair per β is hit first in this scan
    for ii in 0..prefix_count {
        let it = index_to_tuple(n, prefix, ii);
        for jj in 0..prefix_count {
            let jt = index_to_tuple(n, prefix, jj);
            let mut joint = it.clone();
            joint.extend_from_slice(&jt);
            let beta = MultiIndex::of_tuple(n, &joint);
            if folds.contains_key(&beta) {
                continue;
            }
            // quadratic form of the n×n block at (I, J)
            let mut terms: BTreeMap<MultiIndex, C> = BTreeMap::new();
            for k in 0..n {
                let row = {
                    let mut t = it.clone();
                    t.push(k);
                    crate::poly::tuple_to_index(n, &t)
                };
                for l in 0..n {
                    let col = {
                        let mut t = jt.clone();
                        t.push(l);
                        crate::poly::tuple_to_index(n, &t)
                    };
                    let v = m.get(row, col).clone();
                    if v.is_zero() {
                        continue;
                    }
                    let mono = MultiIndex::of_tuple(n, &[k, l]);
                    let e = terms.entry(mono).or_insert_with(C::zero);
                    *e += v;
                }
            }
            let orb = C::from_u128(orbit_size(&beta)?);
            let quad = HomogPoly::from_terms(n, 2, terms)?;
            let scaled = match scaling {
                FoldScaling::UnfoldExact => quad.scale(&orb),
                FoldScaling::OrbitNormalized => {
                    let inv = C::one() / orb;
                    quad.scale(&inv)
                }
            };
            if !scaled.is_zero() {
                folds.insert(beta, scaled);
            }
        }
    }
    FoldedPoly::from_folds(n, f.d() - 2, 2, folds)
}

/// Every (I, J) block with the same β must give the same quadratic; used by
/// tests to justify the representative-block choice.
pub fn fold_block_consistency_defect(f: &HomogPoly<f64>, cap: &Capacity) -> Result<f64> {
    let m: SymMatRep<f64> = sos_matrix(f, cap)?;
    let n = f.n();
    let kk = (f.d() / 2) as usize;
    let prefix = kk - 1;
    let prefix_count = tuple_count(n, prefix)? as usize;
    let mut seen: BTreeMap<MultiIndex, Vec<f64>> = BTreeMap::new();
    let mut defect = 0.0f64;
    for ii in 0..prefix_count {
        let it = index_to_tuple(n, prefix, ii);
        for jj in 0..prefix_count {
            let jt = index_to_tuple(n, prefix, jj);
            let mut joint = it.clone();
            joint.extend_from_slice(&jt);
            let beta = MultiIndex::of_tuple(n, &joint);
            let mut block = Vec::with_capacity(n * n);
            for k in 0..n {
                for l in 0..n {
                    let mut rt = it.clone();
                    rt.push(k);
                    let mut ct = jt.clone();
                    ct.push(l);
                    // symmetrized quadratic-form entry (k,l)+(l,k)
                    let v = m.get(
                        crate::poly::tuple_to_index(n, &rt),
                        crate::poly::tuple_to_index(n, &ct),
                    );
                    block.push(*v);
                }
            }
            // compare the quadratic form, i.e. the symmetrization of the block
            let mut sym = vec![0.0; n * n];
            for k in 0..n {
                for l in 0..n {
                    sym[k * n + l] = 0.5 * (block[k * n + l] + block[l * n + k]);
                }
            }
            match seen.get(&beta) {
                None => {
                    seen.insert(beta, sym);
                }
                Some(rep) => {
                    for (a, b) in rep.iter().zip(&sym) {
                        defect = defect.max((a - b).abs());
                    }
                }
            }
        }
    }
    Ok(defect)
}
