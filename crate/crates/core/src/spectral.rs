//! Dense symmetric eigenvalues, `μ(G)`, and the edge-vertex spectrum check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{BipartiteGraph, Graph, GraphError};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_DIM: usize = 512;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("dimension {0} exceeds the dense solver cap {MAX_DIM}")]
    TooLarge(usize),
    #[error("no convergence after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("μ needs at least two vertices")]
    TooSmall,
    #[error("check failed for {quantity}: expected {expected}, got {actual}")]
    CheckFailed { quantity: String, expected: f64, actual: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// All eigenvalues of a real symmetric matrix, sorted descending.
///
/// Cyclic Jacobi: sweeps of plane rotations over every off-diagonal pair until
/// the off-diagonal Frobenius norm drops below `tol`.
pub fn symmetric_eigenvalues(matrix: &[Vec<f64>], tol: f64) -> Result<Vec<f64>, SpectralError> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(SpectralError::NotSquare);
    }
    if n > MAX_DIM {
        return Err(SpectralError::TooLarge(n));
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(SpectralError::NotSymmetric(i, j));
            }
        }
    }
    let mut a = matrix.to_vec();
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < tol {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(SpectralError::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(|x, y| y.total_cmp(x));
    Ok(vals)
}

fn to_f64(a: &[Vec<i64>]) -> Vec<Vec<f64>> {
    a.iter().map(|row| row.iter().map(|&x| x as f64).collect()).collect()
}

/// Sorted eigenvalues together with `μ = max{λ₁, |λ_{n-1}|}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub mu: f64,
    pub tol: f64,
}

impl Spectrum {
    pub fn from_eigenvalues(eigenvalues: Vec<f64>, tol: f64) -> Result<Self, SpectralError> {
        if eigenvalues.len() < 2 {
            return Err(SpectralError::TooSmall);
        }
        let mu = eigenvalues[1].max(eigenvalues[eigenvalues.len() - 1].abs());
        Ok(Self { eigenvalues, mu, tol })
    }

    pub fn of_matrix(a: &[Vec<i64>], tol: f64) -> Result<Self, SpectralError> {
        Self::from_eigenvalues(symmetric_eigenvalues(&to_f64(a), tol)?, tol)
    }

    pub fn lambda0(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[1]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Integer values of `λ₁`, `λ_{n-1}` and `μ`, each confirmed to be an exact
/// eigenvalue by a fraction-free determinant of `A - λI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedExtremes {
    pub lambda1: i64,
    pub lambda_min: i64,
    pub mu: i64,
}

/// Spectrum of a regular graph plus the facts the bounds depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpectrum {
    pub spectrum: Spectrum,
    pub degree: usize,
    pub connected: bool,
    pub certified: Option<CertifiedExtremes>,
}

impl GraphSpectrum {
    pub fn mu(&self) -> f64 {
        self.spectrum.mu
    }

    /// `μ = d`: disconnected or bipartite. Every bound collapses to its trivial value.
    pub fn degenerate(&self) -> bool {
        (self.spectrum.mu - self.degree as f64).abs() <= 4.0 * self.spectrum.tol
    }
}

/// Determinant by Bareiss elimination; `None` on i128 overflow.
pub fn integer_determinant(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = num / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn is_integer_eigenvalue(a: &[Vec<i64>], lambda: i64) -> bool {
    let shifted: Vec<Vec<i64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().enumerate().map(|(j, &x)| if i == j { x - lambda } else { x }).collect()
        })
        .collect();
    integer_determinant(&shifted) == Some(0)
}

fn certify(a: &[Vec<i64>], approx: f64) -> Option<i64> {
    let r = approx.round();
    ((approx - r).abs() < 1e-7 && is_integer_eigenvalue(a, r as i64)).then_some(r as i64)
}

/// Spectrum of a regular graph. Disconnected graphs are reported (`connected =
/// false`), not rejected.
pub fn graph_spectrum(g: &Graph, tol: f64) -> Result<GraphSpectrum, SpectralError> {
    let degree = g.assert_regular()?;
    let a = g.adjacency_matrix();
    let spectrum = Spectrum::of_matrix(&a, tol)?;
    let certified = match (certify(&a, spectrum.lambda1()), certify(&a, spectrum.lambda_min())) {
        (Some(l1), Some(lmin)) => Some(CertifiedExtremes { lambda1: l1, lambda_min: lmin, mu: l1.max(-lmin) }),
        _ => None,
    };
    Ok(GraphSpectrum { spectrum, degree, connected: g.is_connected(), certified })
}

pub fn mu(g: &Graph) -> Result<f64, SpectralError> {
    Ok(graph_spectrum(g, DEFAULT_TOL)?.mu())
}

/// Spectrum of the edge-vertex graph `𝓗` next to the values predicted from `G`.
///
/// `mu_h` is the second-largest eigenvalue of `𝓗`. The bipartite spectrum is
/// symmetric, so `max{λ₁(𝓗), |λ_min(𝓗)|}` would just return `λ₀(𝓗)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeVertexSpectrum {
    pub d: usize,
    pub mu_g: f64,
    pub lambda1_g: f64,
    pub lambda_min_g: f64,
    pub lambda0_h: f64,
    pub mu_h: f64,
    pub expected_lambda0_h: f64,
    /// `√(d + μ(G))`.
    pub expected_mu_h: f64,
    /// `√(d + λ₁(G))`.
    pub second_eigenvalue_prediction: f64,
    /// `MᵀM = A(G) + dI`, checked entrywise in integers.
    pub incidence_identity: bool,
    /// Largest `|λᵢ(𝓗) + λ_{N-1-i}(𝓗)|`.
    pub symmetry_defect: f64,
    pub tol: f64,
}

impl EdgeVertexSpectrum {
    fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= 4.0 * self.tol
    }

    /// Checks the identity, `λ₀(𝓗) = √(2d)` and `μ(𝓗) = √(d + μ(G))`.
    pub fn check(&self) -> Result<(), SpectralError> {
        let fail = |quantity: &str, expected: f64, actual: f64| {
            Err(SpectralError::CheckFailed { quantity: quantity.into(), expected, actual })
        };
        if !self.incidence_identity {
            return fail("MᵀM = A + dI", 1.0, 0.0);
        }
        if !self.close(self.lambda0_h, self.expected_lambda0_h) {
            return fail("λ₀(𝓗)", self.expected_lambda0_h, self.lambda0_h);
        }
        if !self.close(self.mu_h, self.expected_mu_h) {
            return fail("μ(𝓗)", self.expected_mu_h, self.mu_h);
        }
        Ok(())
    }

    /// `μ(𝓗) = √(d + λ₁(G))` and hence `μ(𝓗) ≤ √(d + μ(G))`.
    pub fn second_eigenvalue_matches(&self) -> bool {
        self.close(self.mu_h, self.second_eigenvalue_prediction)
            && self.mu_h <= self.expected_mu_h + 4.0 * self.tol
    }
}

/// `MᵀM` with `M` the incidence matrix of `𝓗`, as an `n × n` integer matrix.
pub fn incidence_gram(h: &BipartiteGraph) -> Vec<Vec<i64>> {
    let m = h.incidence_matrix();
    let n = h.n_out();
    let mut out = vec![vec![0; n]; n];
    for row in &m {
        for i in 0..n {
            if row[i] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += row[i] * row[j];
            }
        }
    }
    out
}

pub fn edge_vertex_spectrum(g: &Graph, tol: f64) -> Result<EdgeVertexSpectrum, SpectralError> {
    let gs = graph_spectrum(g, tol)?;
    let d = gs.degree;
    let h = BipartiteGraph::edge_vertex(g)?;

    let mut expected = g.adjacency_matrix();
    for (i, row) in expected.iter_mut().enumerate() {
        row[i] += d as i64;
    }
    let incidence_identity = incidence_gram(&h) == expected;

    let hs = Spectrum::of_matrix(&h.adjacency_matrix(), tol)?;
    let len = hs.eigenvalues.len();
    let symmetry_defect = (0..len)
        .map(|i| (hs.eigenvalues[i] + hs.eigenvalues[len - 1 - i]).abs())
        .fold(0.0, f64::max);

    let mu_g = gs.mu();
    Ok(EdgeVertexSpectrum {
        d,
        mu_g,
        lambda1_g: gs.spectrum.lambda1(),
        lambda_min_g: gs.spectrum.lambda_min(),
        lambda0_h: hs.lambda0(),
        mu_h: hs.lambda1(),
        expected_lambda0_h: (2.0 * d as f64).sqrt(),
        expected_mu_h: (d as f64 + mu_g).sqrt(),
        second_eigenvalue_prediction: (d as f64 + gs.spectrum.lambda1()).max(0.0).sqrt(),
        incidence_identity,
        symmetry_defect,
        tol,
    })
}

pub fn edge_vertex_spectrum_check(g: &Graph, tol: f64) -> Result<EdgeVertexSpectrum, SpectralError> {
    let report = edge_vertex_spectrum(g, tol)?;
    report.check()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_spectrum(actual: &[f64], expected: &[f64]) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() < 1e-9, "{actual:?} vs {expected:?}");
        }
    }

    /// Circulant oracle: eigenvalues of a circulant graph are Σ_s cos(2πks/n).
    fn circulant_oracle(n: usize, steps: &[usize]) -> Vec<f64> {
        let mut v: Vec<f64> = (0..n)
            .map(|k| {
                steps
                    .iter()
                    .map(|&s| (2.0 * std::f64::consts::PI * (k * s) as f64 / n as f64).cos())
                    .sum()
            })
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    #[test]
    fn k4_spectrum() {
        let vals = Spectrum::of_matrix(&Graph::complete(4).unwrap().adjacency_matrix(), DEFAULT_TOL).unwrap();
        assert_spectrum(&vals.eigenvalues, &[3.0, -1.0, -1.0, -1.0]);
        assert!((vals.mu - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cycles_match_circulant_oracle() {
        for n in [4, 5, 6, 7, 9] {
            let g = Graph::cycle(n).unwrap();
            let s = graph_spectrum(&g, DEFAULT_TOL).unwrap();
            assert_spectrum(&s.spectrum.eigenvalues, &circulant_oracle(n, &[1, n - 1]));
        }
        assert_spectrum(
            &Spectrum::of_matrix(&Graph::cycle(4).unwrap().adjacency_matrix(), DEFAULT_TOL).unwrap().eigenvalues,
            &[2.0, 0.0, 0.0, -2.0],
        );
        let c5 = graph_spectrum(&Graph::cycle(5).unwrap(), DEFAULT_TOL).unwrap();
        assert!((c5.mu() - 1.618_033_988_749_895).abs() < 1e-10);
        let c4 = graph_spectrum(&Graph::cycle(4).unwrap(), DEFAULT_TOL).unwrap();
        assert!((c4.mu() - 2.0).abs() < 1e-10);
        assert!(c4.degenerate());
    }

    #[test]
    fn petersen_spectrum_and_charpoly() {
        let g = Graph::petersen();
        let s = graph_spectrum(&g, DEFAULT_TOL).unwrap();
        let expected = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
        assert_spectrum(&s.spectrum.eigenvalues, &expected);
        // independent check: char poly (x-3)(x-1)^5(x+2)^4 evaluated at integers
        let a = g.adjacency_matrix();
        for x in -4i64..=5 {
            let shifted: Vec<Vec<i64>> = a
                .iter()
                .enumerate()
                .map(|(i, r)| r.iter().enumerate().map(|(j, &v)| if i == j { x - v } else { -v }).collect())
                .collect();
            let expected = (x - 3) as i128 * ((x - 1) as i128).pow(5) * ((x + 2) as i128).pow(4);
            assert_eq!(integer_determinant(&shifted), Some(expected), "x = {x}");
        }
        assert_eq!(s.certified, Some(CertifiedExtremes { lambda1: 1, lambda_min: -2, mu: 2 }));
    }

    #[test]
    fn paley13_mu() {
        let s = graph_spectrum(&Graph::paley(13).unwrap(), DEFAULT_TOL).unwrap();
        let r = (13f64).sqrt();
        assert!((s.spectrum.lambda0() - 6.0).abs() < 1e-9);
        assert!((s.spectrum.lambda1() - (r - 1.0) / 2.0).abs() < 1e-9);
        assert!((s.mu() - (r + 1.0) / 2.0).abs() < 1e-9);
        assert!(s.certified.is_none());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert_eq!(
            symmetric_eigenvalues(&[vec![0.0, 1.0], vec![2.0, 0.0]], DEFAULT_TOL),
            Err(SpectralError::NotSymmetric(0, 1))
        );
        assert_eq!(symmetric_eigenvalues(&[vec![0.0, 1.0]], DEFAULT_TOL), Err(SpectralError::NotSquare));
        assert!(matches!(
            symmetric_eigenvalues(&vec![vec![0.0; 513]; 513], DEFAULT_TOL),
            Err(SpectralError::TooLarge(513))
        ));
    }

    #[test]
    fn disconnected_is_flagged() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let s = graph_spectrum(&g, DEFAULT_TOL).unwrap();
        assert!(!s.connected);
        assert!((s.mu() - 2.0).abs() < 1e-10);
        assert!(s.degenerate());
    }

    #[test]
    fn edge_vertex_spectra() {
        // K4: 𝓗 spectrum is ±√6, ±√2 (x3), 0 (x2).
        let r = edge_vertex_spectrum(&Graph::complete(4).unwrap(), DEFAULT_TOL).unwrap();
        assert!(r.incidence_identity);
        assert!((r.lambda0_h - 6f64.sqrt()).abs() < 1e-9);
        assert!((r.mu_h - 2f64.sqrt()).abs() < 1e-9);
        assert!((r.expected_mu_h - 2.0).abs() < 1e-9);
        assert!(r.second_eigenvalue_matches());
        assert!(r.symmetry_defect < 1e-9);
        assert!(matches!(r.check(), Err(SpectralError::CheckFailed { ref quantity, .. }) if quantity == "μ(𝓗)"));

        // C5: λ₁(G) = 2cos(2π/5) but μ(G) = 2cos(π/5).
        let r = edge_vertex_spectrum(&Graph::cycle(5).unwrap(), DEFAULT_TOL).unwrap();
        assert!((r.lambda0_h - 2.0).abs() < 1e-9);
        assert!((r.expected_mu_h - 1.902_113_032_590_307).abs() < 1e-9);
        assert!((r.mu_h - 1.618_033_988_749_895).abs() < 1e-9);
        assert!(r.second_eigenvalue_matches());

        // Petersen: √(3+1) = 2 against the predicted √5.
        let r = edge_vertex_spectrum(&Graph::petersen(), DEFAULT_TOL).unwrap();
        assert!((r.mu_h - 2.0).abs() < 1e-9);
        assert!((r.expected_mu_h - 5f64.sqrt()).abs() < 1e-9);
        assert!(r.check().is_err());
    }

    #[test]
    fn edge_vertex_check_passes_when_lambda1_dominates() {
        // Line graph of the Petersen graph: spectrum {4, 2^5, -1^4, -2^5}, so λ₁ = |λ_min|.
        let pet = Graph::petersen();
        let edges = pet.edges();
        let mut line = Vec::new();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    line.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(edges.len(), &line).unwrap();
        let r = edge_vertex_spectrum_check(&g, DEFAULT_TOL).unwrap();
        assert!((r.mu_h - 6f64.sqrt()).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn spectrum_invariants(seed in 0u64..1000, perm_seed in 0u64..1000) {
            use rand::{seq::SliceRandom, SeedableRng};
            let g = Graph::random_regular(12, 3, seed).unwrap();
            let s = graph_spectrum(&g, DEFAULT_TOL).unwrap();
            let sum: f64 = s.spectrum.eigenvalues.iter().sum();
            let sq: f64 = s.spectrum.eigenvalues.iter().map(|x| x * x).sum();
            prop_assert!(sum.abs() < 1e-8);
            prop_assert!((sq - 2.0 * g.num_edges() as f64).abs() < 1e-8);
            if s.connected {
                prop_assert!((s.spectrum.lambda0() - 3.0).abs() < 1e-9);
            }
            let mut perm: Vec<usize> = (0..12).collect();
            perm.shuffle(&mut rand_xoshiro::SplitMix64::seed_from_u64(perm_seed));
            let relabeled = graph_spectrum(&g.relabel(&perm).unwrap(), DEFAULT_TOL).unwrap();
            for (a, b) in s.spectrum.eigenvalues.iter().zip(&relabeled.spectrum.eigenvalues) {
                prop_assert!((a - b).abs() < 1e-9);
            }
            let ev = edge_vertex_spectrum(&g, DEFAULT_TOL).unwrap();
            prop_assert!(ev.incidence_identity);
            prop_assert!(ev.symmetry_defect < 1e-8);
            prop_assert!(ev.second_eigenvalue_matches());
        }
    }
}
