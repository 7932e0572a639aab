//! Gap-instance machinery: seeded random graphs, 4-clique polynomials, the
//! explicit SoS moment-matrix certificate, and shattered-clique
//! diagnostics.

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::oracle::{brute_norm2, BruteOpts};
use crate::poly::{sos_matrix, tuple_to_index, HomogPoly, MultiIndex, SymMatRep};
use crate::spectral::{frobenius, lambda_max, lambda_min, schatten1};
use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use std::collections::BTreeSet;

/// Simple undirected graph with the generation parameters recorded.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    pub p: f64,
    pub seed: u64,
}

impl Graph {
    /// Graph from an explicit edge list (0-based vertices, self-loops
    /// rejected).
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({a},{b}) out of range for n = {n}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph {
            n,
            edges: set,
            p: f64::NAN,
            seed: 0,
        })
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.insert((a, b));
            }
        }
        Graph {
            n,
            edges,
            p: 1.0,
            seed: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.edges.iter()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == v || *b == v)
            .count()
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.insert(b);
            } else if b == v {
                out.insert(a);
            }
        }
        out
    }
}

/// G(n,p) with each pair included independently under a seeded generator.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("p = {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u < p {
                edges.insert((a, b));
            }
        }
    }
    Ok(Graph { n, edges, p, seed })
}

/// All 4-cliques {a < b < c < d}, found by scanning, for each edge (a,b)
/// with the two smallest labels, edges inside N(a) ∩ N(b) above b.
pub fn four_cliques(g: &Graph) -> Vec<[usize; 4]> {
    let mut neighbors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.n];
    for &(a, b) in &g.edges {
        neighbors[a].insert(b);
        neighbors[b].insert(a);
    }
    let mut out = Vec::new();
    for &(a, b) in &g.edges {
        let common: Vec<usize> = neighbors[a]
            .intersection(&neighbors[b])
            .copied()
            .filter(|&v| v > b)
            .collect();
        for i in 0..common.len() {
            for j in i + 1..common.len() {
                let (c, d) = (common[i], common[j]);
                if g.has_edge(c, d) {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Independent clique count for cross-checking: brute-force scan over all
/// 4-subsets.
pub fn four_clique_count_bruteforce(g: &Graph) -> usize {
    let n = g.n;
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if !(g.has_edge(a, c) && g.has_edge(b, c)) {
                    continue;
                }
                for d in c + 1..n {
                    if g.has_edge(a, d) && g.has_edge(b, d) && g.has_edge(c, d) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// The degree-4 multilinear polynomial with one unit term per 4-clique.
pub fn clique_poly(g: &Graph) -> HomogPoly<f64> {
    let terms = four_cliques(g).into_iter().map(|cl| {
        let mut exps = vec![0u32; g.n];
        for v in cl {
            exps[v] = 1;
        }
        (MultiIndex::new(exps), 1.0)
    });
    HomogPoly::from_terms(g.n, 4, terms).expect("clique terms have degree 4")
}

/// Moment-matrix certificate for the 4-clique polynomial.
#[derive(Debug, Clone)]
pub struct CliqueCertificate {
    /// Natural representation of 24f: A[(i₁,i₂),(i₃,i₄)] = 1 on ordered
    /// 4-cliques.
    pub a_mat: SymMatRep<f64>,
    /// Dual feasible moment matrix (SoS-symmetric, PSD, trace 1).
    pub m_mat: SymMatRep<f64>,
    pub lambda_min: f64,
    pub dual_value: f64,
    pub m: usize,
    pub clique_count: usize,
}

/// Assemble A, compute λ_min of its E'-principal submatrix, and build
/// M = (A + |λ_min|·(I_{E'} + Q_{E'})) / (4m·|λ_min|).
///
/// I_{E'} here carries, per ordered edge (i,j), both the diagonal entry at
/// [(i,j),(i,j)] and the swap entry at [(i,j),(j,i)]: this is the matrix
/// whose nonzero pattern the SoS-symmetry argument describes, and the swap
/// entries are off-diagonal so the trace stays 2m.
pub fn build_certificate(g: &Graph, cap: &Capacity) -> Result<CliqueCertificate> {
    let n = g.n;
    let m = g.num_edges();
    if m == 0 {
        return Err(Error::Degenerate("graph has no edges".into()));
    }
    let cliques = four_cliques(g);
    if cliques.is_empty() {
        return Err(Error::Degenerate(
            "graph has no 4-clique (λ_min would be 0)".into(),
        ));
    }

    let mut a_mat = SymMatRep::zeros(n, 2, cap)?;
    for cl in &cliques {
        // all 24 ordered copies of the clique
        let perms = permutations4();
        for p in perms {
            let t = [cl[p[0]], cl[p[1]], cl[p[2]], cl[p[3]]];
            let row = tuple_to_index(n, &t[0..2]);
            let col = tuple_to_index(n, &t[2..4]);
            a_mat.set(row, col, 1.0);
        }
    }
    a_mat.set_sos_symmetric(true);

    // ordered edges in deterministic order
    let ordered_edges: Vec<(usize, usize)> = {
        let mut v = Vec::with_capacity(2 * m);
        for &(a, b) in &g.edges {
            v.push((a, b));
            v.push((b, a));
        }
        v.sort();
        v
    };

    // E'-principal submatrix of A
    let mut a_sub = DMatrix::<f64>::zeros(2 * m, 2 * m);
    for (r, &(i1, i2)) in ordered_edges.iter().enumerate() {
        let row = tuple_to_index(n, &[i1, i2]);
        for (c, &(i3, i4)) in ordered_edges.iter().enumerate() {
            let col = tuple_to_index(n, &[i3, i4]);
            a_sub[(r, c)] = *a_mat.get(row, col);
        }
    }
    let (lam_min, _) = lambda_min(&a_sub)?;
    if lam_min >= -1e-12 {
        return Err(Error::Degenerate(format!(
            "λ_min = {lam_min} is not negative; certificate undefined"
        )));
    }
    let abs_lam = lam_min.abs();
    let scale = 1.0 / (4.0 * m as f64 * abs_lam);
    let mut m_mat = SymMatRep::zeros(n, 2, cap)?;
    // A part
    for row in 0..m_mat.side() {
        for col in 0..m_mat.side() {
            let v = *a_mat.get(row, col);
            if v != 0.0 {
                m_mat.set(row, col, v * scale);
            }
        }
    }
    // |λ|·(I_{E'} + Q_{E'}) part
    for &(i, j) in &ordered_edges {
        let ij = tuple_to_index(n, &[i, j]);
        let ji = tuple_to_index(n, &[j, i]);
        let ii = tuple_to_index(n, &[i, i]);
        let jj = tuple_to_index(n, &[j, j]);
        m_mat.add_to(ij, ij, abs_lam * scale); // I diagonal
        m_mat.add_to(ij, ji, abs_lam * scale); // I swap entry
        m_mat.add_to(ii, jj, abs_lam * scale); // Q off-diagonal (per ordered pair)
    }
    for v in 0..n {
        let vv = tuple_to_index(n, &[v, v]);
        m_mat.add_to(vv, vv, g.degree(v) as f64 * abs_lam * scale); // Q degree diagonal
    }
    m_mat.set_sos_symmetric(true);

    // dual value ⟨A, M⟩
    let mut dual = 0.0;
    for row in 0..m_mat.side() {
        for col in 0..m_mat.side() {
            dual += a_mat.get(row, col) * m_mat.get(row, col);
        }
    }

    Ok(CliqueCertificate {
        a_mat,
        m_mat,
        lambda_min: lam_min,
        dual_value: dual,
        m,
        clique_count: cliques.len(),
    })
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            if b == a {
                continue;
            }
            for c in 0..4 {
                if c == a || c == b {
                    continue;
                }
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

fn check_disjoint(sets: &[&BTreeSet<usize>]) -> Result<()> {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersection(sets[j]).next().is_some() {
                return Err(Error::InvalidInput(
                    "shattering sets must be pairwise disjoint".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Ordered 4-cliques (i₁,…,i₄) with i_k ∈ Z_k.
pub fn shattered_cliques(
    g: &Graph,
    z1: &BTreeSet<usize>,
    z2: &BTreeSet<usize>,
    z3: &BTreeSet<usize>,
    z4: &BTreeSet<usize>,
) -> Result<usize> {
    check_disjoint(&[z1, z2, z3, z4])?;
    let mut count = 0;
    for &a in z1 {
        for &b in z2 {
            if !g.has_edge(a, b) {
                continue;
            }
            for &c in z3 {
                if !(g.has_edge(a, c) && g.has_edge(b, c)) {
                    continue;
                }
                for &d in z4 {
                    if g.has_edge(a, d) && g.has_edge(b, d) && g.has_edge(c, d) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Ordered triangles (i₁,i₂,i₃) with i_k ∈ S_k.
pub fn shattered_triangles(
    g: &Graph,
    s1: &BTreeSet<usize>,
    s2: &BTreeSet<usize>,
    s3: &BTreeSet<usize>,
) -> Result<usize> {
    check_disjoint(&[s1, s2, s3])?;
    let mut count = 0;
    for &a in s1 {
        for &b in s2 {
            if !g.has_edge(a, b) {
                continue;
            }
            for &c in s3 {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Simple spectral-relaxation lower bound ‖M_g‖_F² / ‖M_g‖_{S1} for an
/// even-degree polynomial (0 for the zero polynomial).
pub fn fsp_lower(g: &HomogPoly<f64>, cap: &Capacity) -> Result<f64> {
    if g.is_zero() {
        return Ok(0.0);
    }
    let m = sos_matrix(g, cap)?.to_dmatrix();
    let fro = frobenius(&m);
    let s1 = schatten1(&m);
    if s1 <= 0.0 {
        return Ok(0.0);
    }
    Ok(fro * fro / s1)
}

/// Checks recorded with every emitted certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateChecks {
    pub sos_symmetry_defect: f64,
    pub trace: f64,
    pub min_eig: f64,
    pub dual_value_formula_rel_err: f64,
}

/// Desk-scale gap report: the certificate (lower bound side) against the
/// brute-force oracle estimate of ‖f‖₂.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub m: usize,
    pub clique_count: usize,
    pub lambda_min: f64,
    pub dual_value: f64,
    pub oracle_norm_estimate: f64,
    pub oracle_nonconverged: u32,
    pub ratio: f64,
    pub checks: CertificateChecks,
}

/// Run the full clique-instance pipeline on one seeded graph, asserting every
/// certificate invariant.
pub fn gap_report(
    n: usize,
    p: f64,
    seed: u64,
    oracle_restarts: u32,
    cap: &Capacity,
) -> Result<GapReport> {
    Ok(gap_report_with_certificate(n, p, seed, oracle_restarts, cap)?.0)
}

/// As [`gap_report`], also handing back the certificate for file dumps.
pub fn gap_report_with_certificate(
    n: usize,
    p: f64,
    seed: u64,
    oracle_restarts: u32,
    cap: &Capacity,
) -> Result<(GapReport, CliqueCertificate)> {
    let g = gnp(n, p, seed)?;
    let cert = build_certificate(&g, cap)?;
    let checks = verify_certificate(&cert)?;
    let f = clique_poly(&g);
    let oracle = brute_norm2(
        &f,
        &BruteOpts {
            restarts: oracle_restarts,
            ..BruteOpts::seeded(seed)
        },
    )?;
    let ratio = if oracle.value > 0.0 {
        cert.dual_value / oracle.value
    } else {
        f64::INFINITY
    };
    let report = GapReport {
        n,
        p,
        seed,
        m: cert.m,
        clique_count: cert.clique_count,
        lambda_min: cert.lambda_min,
        dual_value: cert.dual_value,
        oracle_norm_estimate: oracle.value,
        oracle_nonconverged: oracle.nonconverged,
        ratio,
        checks,
    };
    Ok((report, cert))
}

/// Assert the CliqueCertificate invariants, returning the measured values.
pub fn verify_certificate(cert: &CliqueCertificate) -> Result<CertificateChecks> {
    let defect = cert.m_mat.sos_symmetry_defect();
    if defect != 0.0 {
        return Err(Error::InvalidInput(format!(
            "certificate not exactly SoS-symmetric (defect {defect:.3e})"
        )));
    }
    let md = cert.m_mat.to_dmatrix();
    let trace = md.trace();
    if (trace - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "certificate trace {trace} not 1"
        )));
    }
    let (min_eig, _) = lambda_min(&md)?;
    let (max_eig, _) = lambda_max(&md)?;
    if min_eig < -1e-7 * max_eig.abs().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "certificate not PSD (min eig {min_eig:.3e})"
        )));
    }
    let formula = 6.0 * cert.clique_count as f64 / (cert.m as f64 * cert.lambda_min.abs());
    let rel = (cert.dual_value - formula).abs() / formula.abs().max(1e-300);
    if rel > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "dual value {} deviates from 6|C|/(m|λ|) = {formula}",
            cert.dual_value
        )));
    }
    Ok(CertificateChecks {
        sos_symmetry_defect: defect,
        trace,
        min_eig,
        dual_value_formula_rel_err: rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn gnp_extremes() {
        let g = gnp(6, 1.0, 1).unwrap();
        assert_eq!(g.num_edges(), 15);
        let g = gnp(6, 0.0, 1).unwrap();
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn gnp_edge_statistics() {
        // mean edge count within 3σ of p·C(n,2) across 10 seeds
        let n = 100;
        let p = 0.3;
        let pairs = (n * (n - 1) / 2) as f64;
        let mut total = 0.0;
        for seed in 1..=10u64 {
            total += gnp(n, p, seed).unwrap().num_edges() as f64;
        }
        let mean = total / 10.0;
        let sigma = (pairs * p * (1.0 - p) / 10.0).sqrt();
        assert!((mean - pairs * p).abs() <= 3.0 * sigma);
    }

    #[test]
    fn gnp_deterministic() {
        let a = gnp(30, 0.4, 7).unwrap();
        let b = gnp(30, 0.4, 7).unwrap();
        assert_eq!(a.edges, b.edges);
    }

    #[test]
    fn clique_poly_examples() {
        let k4 = Graph::complete(4);
        let f = clique_poly(&k4);
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.coeff(&MultiIndex::new(vec![1, 1, 1, 1])), 1.0);

        let k5 = Graph::complete(5);
        assert_eq!(clique_poly(&k5).num_terms(), 5);

        // path graph has no 4-clique
        let path = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(clique_poly(&path).is_zero());
    }

    #[test]
    fn clique_count_matches_bruteforce() {
        for seed in 1..=5u64 {
            let g = gnp(18, 0.5, seed).unwrap();
            let fast = four_cliques(&g).len();
            let slow = four_clique_count_bruteforce(&g);
            assert_eq!(fast, slow, "seed {seed}");
            // coefficients all 1
            let f = clique_poly(&g);
            assert!(f.terms().all(|(_, c)| *c == 1.0));
            assert_eq!(f.num_terms(), slow);
        }
    }

    #[test]
    fn k4_certificate() {
        let cap = Capacity::default();
        let cert = build_certificate(&Graph::complete(4), &cap).unwrap();
        assert_eq!(cert.m, 6);
        assert_eq!(cert.clique_count, 1);
        assert!((cert.lambda_min + 2.0).abs() < 1e-9);
        assert!((cert.dual_value - 0.5).abs() < 1e-9);
        verify_certificate(&cert).unwrap();
    }

    #[test]
    fn k5_certificate() {
        let cap = Capacity::default();
        let cert = build_certificate(&Graph::complete(5), &cap).unwrap();
        assert_eq!(cert.m, 10);
        assert_eq!(cert.clique_count, 5);
        let expect = 6.0 * 5.0 / (10.0 * cert.lambda_min.abs());
        assert!((cert.dual_value - expect).abs() < 1e-9);
        verify_certificate(&cert).unwrap();
    }

    #[test]
    fn degenerate_instances() {
        let cap = Capacity::default();
        let empty = Graph::from_edges(5, []).unwrap();
        assert!(matches!(
            build_certificate(&empty, &cap),
            Err(Error::Degenerate(_))
        ));
        let path = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(matches!(
            build_certificate(&path, &cap),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn shattered_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(
            shattered_cliques(&k4, &set(&[0]), &set(&[1]), &set(&[2]), &set(&[3])).unwrap(),
            1
        );
        assert_eq!(
            shattered_cliques(&k4, &set(&[0]), &set(&[]), &set(&[2]), &set(&[3])).unwrap(),
            0
        );
        let k5 = Graph::complete(5);
        assert_eq!(
            shattered_cliques(&k5, &set(&[0]), &set(&[1]), &set(&[2]), &set(&[3, 4])).unwrap(),
            2
        );
        // overlap rejected
        assert!(shattered_cliques(&k4, &set(&[0]), &set(&[0]), &set(&[2]), &set(&[3])).is_err());

        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            shattered_triangles(&tri, &set(&[0]), &set(&[1]), &set(&[2])).unwrap(),
            1
        );
        let empty = Graph::from_edges(3, []).unwrap();
        assert_eq!(
            shattered_triangles(&empty, &set(&[0]), &set(&[1]), &set(&[2])).unwrap(),
            0
        );
        assert_eq!(
            shattered_triangles(&k4, &set(&[0]), &set(&[1]), &set(&[2, 3])).unwrap(),
            2
        );
    }

    #[test]
    fn fsp_lower_examples() {
        let cap = Capacity::default();
        let f = HomogPoly::monomial(MultiIndex::new(vec![4]), 1.0);
        assert!((fsp_lower(&f, &cap).unwrap() - 1.0).abs() < 1e-12);

        let z = HomogPoly::<f64>::zero(2, 4);
        assert_eq!(fsp_lower(&z, &cap).unwrap(), 0.0);

        // x₁²x₂²: F²/S1 via the SVD route
        let f = HomogPoly::monomial(MultiIndex::new(vec![2, 2]), 1.0);
        let m = sos_matrix(&f, &cap).unwrap().to_dmatrix();
        let want = frobenius(&m).powi(2) / schatten1(&m);
        assert!((fsp_lower(&f, &cap).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn k4_gap_report() {
        let cap = Capacity::default();
        // seeded complete graph via p = 1
        let report = gap_report(4, 1.0, 1, 300, &cap).unwrap();
        assert!((report.dual_value - 0.5).abs() < 1e-9);
        assert!((report.oracle_norm_estimate - 1.0 / 16.0).abs() < 1e-6);
        assert!((report.ratio - 8.0).abs() < 1e-4);
    }

    #[test]
    fn dual_value_below_lambda_max_of_a() {
        let cap = Capacity::default();
        for seed in 1..=3u64 {
            let g = gnp(14, 0.6, seed).unwrap();
            if let Ok(cert) = build_certificate(&g, &cap) {
                let (lam, _) = lambda_max(&cert.a_mat.to_dmatrix()).unwrap();
                assert!(cert.dual_value <= lam + 1e-9);
            }
        }
    }
}
