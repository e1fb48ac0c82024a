//! Exhaustive ground truth on small instances: exact expansion coefficients,
//! subset-by-subset checks of the spectral inequalities, and brute-force
//! minimum distances.
//!
//! Subsets are `u64` bitmasks. Enumeration is split by the high bits of the
//! mask into independent chunks; partial results are merged with a
//! `(value, mask)` minimum, so the outcome does not depend on scheduling.

use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::LinearCode;
use crate::graphs::{BipartiteGraph, Graph};
use crate::spectral::{GraphSpectrum, SpectralError};

/// Largest input side enumerated by [`exact_expansion`].
pub const MAX_EXPANSION_INPUTS: usize = 24;
/// Largest vertex count for the subset-by-subset lemma checks.
pub const MAX_VERIFY_VERTICES: usize = 20;
/// Largest input side for [`sampled_expansion`].
pub const MAX_SAMPLED_INPUTS: usize = 40;
/// Largest number of codewords enumerated by [`min_distance_bruteforce`].
pub const MAX_CODEWORDS: u64 = 1 << 24;

const MAX_LISTED: usize = 32;
const FLOAT_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("instance too large for exhaustive enumeration ({size} > {cap})")]
    TooLarge { size: u64, cap: u64 },
    #[error("no subset size allowed: floor(fraction * {n}) = 0")]
    EmptyRange { n: usize },
    #[error("code has dimension 0")]
    TrivialCode,
    #[error("graph must be regular with degree >= 1")]
    NotApplicable,
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// A minimizing subset for an expansion ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetWitness {
    pub subset: u64,
    pub size: usize,
    pub boundary_size: usize,
    pub ratio: Ratio<i64>,
}

impl SubsetWitness {
    fn new(subset: u64, boundary_size: usize) -> Self {
        let size = subset.count_ones() as usize;
        Self { subset, size, boundary_size, ratio: Ratio::new(boundary_size as i64, size as i64) }
    }

    pub fn members(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.subset >> i & 1 == 1).collect()
    }
}

/// Incidence structure being expanded: `nbrs[v]` are the targets of source
/// `v`. When `same_side` is set, sources and targets are the same vertex set
/// and `∂*S` excludes `S`.
struct Incidence<'a> {
    nbrs: Vec<&'a [usize]>,
    n_targets: usize,
    same_side: bool,
}

/// Per-size best `(boundary, mask)` and `(star boundary, mask)`.
#[derive(Debug, Clone)]
struct SizeBests {
    boundary: Vec<(usize, u64)>,
    star: Vec<(usize, u64)>,
}

impl SizeBests {
    fn empty(n: usize) -> Self {
        Self { boundary: vec![(usize::MAX, u64::MAX); n + 1], star: vec![(usize::MAX, u64::MAX); n + 1] }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.boundary.iter_mut().zip(other.boundary) {
            *a = (*a).min(b);
        }
        for (a, b) in self.star.iter_mut().zip(other.star) {
            *a = (*a).min(b);
        }
        self
    }
}

struct Walker<'a> {
    inc: &'a Incidence<'a>,
    count: Vec<u32>,
    in_set: Vec<bool>,
    covered: usize,
    inside: usize,
}

impl<'a> Walker<'a> {
    fn new(inc: &'a Incidence<'a>) -> Self {
        Self {
            inc,
            count: vec![0; inc.n_targets],
            in_set: vec![false; inc.nbrs.len()],
            covered: 0,
            inside: 0,
        }
    }

    fn add(&mut self, v: usize) {
        self.in_set[v] = true;
        if self.inc.same_side && self.count[v] > 0 {
            self.inside += 1;
        }
        for &u in self.inc.nbrs[v] {
            self.count[u] += 1;
            if self.count[u] == 1 {
                self.covered += 1;
                if self.inc.same_side && self.in_set[u] {
                    self.inside += 1;
                }
            }
        }
    }

    fn remove(&mut self, v: usize) {
        for &u in self.inc.nbrs[v] {
            self.count[u] -= 1;
            if self.count[u] == 0 {
                self.covered -= 1;
                if self.inc.same_side && self.in_set[u] {
                    self.inside -= 1;
                }
            }
        }
        if self.inc.same_side && self.count[v] > 0 {
            self.inside -= 1;
        }
        self.in_set[v] = false;
    }
}

/// Visits every subset in Gray-code order within each high-bit chunk.
fn enumerate_sizes(inc: &Incidence<'_>) -> SizeBests {
    let n = inc.nbrs.len();
    let high = n.min(6);
    let low = n - high;
    (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut best = SizeBests::empty(n);
            let mut w = Walker::new(inc);
            let mut mask = prefix << low;
            for v in low..n {
                if mask >> v & 1 == 1 {
                    w.add(v);
                }
            }
            let mut visit = |mask: u64, w: &Walker<'_>| {
                let s = mask.count_ones() as usize;
                if s > 0 {
                    best.boundary[s] = best.boundary[s].min((w.covered, mask));
                    best.star[s] = best.star[s].min((w.covered - w.inside, mask));
                }
            };
            visit(mask, &w);
            for i in 1u64..1 << low {
                let bit = i.trailing_zeros() as usize;
                mask ^= 1 << bit;
                if mask >> bit & 1 == 1 {
                    w.add(bit);
                } else {
                    w.remove(bit);
                }
                visit(mask, &w);
            }
            best
        })
        .reduce(|| SizeBests::empty(n), SizeBests::merge)
}

/// Minimum boundary size for every subset size, computed once and queried
/// for any fraction.
#[derive(Debug, Clone)]
pub struct ExpansionProfile {
    n: usize,
    bests: SizeBests,
}

fn best_ratio(per_size: &[(usize, u64)], max_size: usize) -> SubsetWitness {
    let mut best: Option<SubsetWitness> = None;
    for (s, &(b, mask)) in per_size.iter().enumerate().take(max_size + 1).skip(1) {
        let cand = SubsetWitness::new(mask, b);
        debug_assert_eq!(cand.size, s);
        best = Some(match best {
            None => cand,
            Some(cur) if (cand.ratio, cand.subset) < (cur.ratio, cur.subset) => cand,
            Some(cur) => cur,
        });
    }
    best.expect("max_size >= 1")
}

impl ExpansionProfile {
    pub fn of_bipartite(b: &BipartiteGraph) -> Result<Self, OracleError> {
        check_cap(b.n_in(), MAX_EXPANSION_INPUTS)?;
        let inc = Incidence {
            nbrs: (0..b.n_in()).map(|t| b.input_neighbors(t)).collect(),
            n_targets: b.n_out(),
            same_side: false,
        };
        Ok(Self { n: b.n_in(), bests: enumerate_sizes(&inc) })
    }

    pub fn of_graph(g: &Graph) -> Result<Self, OracleError> {
        check_cap(g.n(), MAX_EXPANSION_INPUTS)?;
        let inc = Incidence { nbrs: (0..g.n()).map(|v| g.neighbors(v)).collect(), n_targets: g.n(), same_side: true };
        Ok(Self { n: g.n(), bests: enumerate_sizes(&inc) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn max_size(&self, fraction: Ratio<i64>) -> Result<usize, OracleError> {
        let k = (fraction * Ratio::from_integer(self.n as i64)).floor().to_integer();
        if k <= 0 {
            return Err(OracleError::EmptyRange { n: self.n });
        }
        Ok((k as usize).min(self.n))
    }

    /// `c(α) = min |∂S|/|S|` over `0 < |S| ≤ ⌊α n⌋`.
    pub fn expansion(&self, alpha: Ratio<i64>) -> Result<SubsetWitness, OracleError> {
        Ok(best_ratio(&self.bests.boundary, self.max_size(alpha)?))
    }

    /// Same minimum with `∂*S = ∂S \ S`.
    pub fn star_expansion(&self, alpha: Ratio<i64>) -> Result<SubsetWitness, OracleError> {
        Ok(best_ratio(&self.bests.star, self.max_size(alpha)?))
    }

    /// Minimum `|∂S|` over subsets of exactly `size` elements.
    pub fn min_boundary(&self, size: usize) -> Option<usize> {
        self.bests.boundary.get(size).map(|b| b.0).filter(|&b| b != usize::MAX)
    }
}

fn check_cap(size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap {
        Err(OracleError::TooLarge { size: size as u64, cap: cap as u64 })
    } else {
        Ok(())
    }
}

/// Exact `c(α)` over the input side of `b`, with the lexicographically
/// smallest minimizing bitmask.
pub fn exact_expansion(b: &BipartiteGraph, alpha: Ratio<i64>) -> Result<SubsetWitness, OracleError> {
    ExpansionProfile::of_bipartite(b)?.expansion(alpha)
}

/// Exact expansion factor `δ` over inputs with `|T| ≤ εn`, using `∂*T`.
pub fn exact_delta(b: &BipartiteGraph, epsilon: Ratio<i64>) -> Result<Ratio<i64>, OracleError> {
    Ok(ExpansionProfile::of_bipartite(b)?.star_expansion(epsilon)?.ratio)
}

/// Which neighborhood an expansion ratio of a non-bipartite graph uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    Boundary,
    Star,
}

/// Exact `c(α)` of a graph over its own vertex set.
pub fn exact_expansion_graph(g: &Graph, alpha: Ratio<i64>, conv: Convention) -> Result<SubsetWitness, OracleError> {
    let p = ExpansionProfile::of_graph(g)?;
    match conv {
        Convention::Boundary => p.expansion(alpha),
        Convention::Star => p.star_expansion(alpha),
    }
}

/// Non-exhaustive estimate of `c(α)` from uniformly sampled subsets. The
/// result is only an upper bound on the true value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledExpansion {
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: u64,
    pub upper_estimate: SubsetWitness,
}

pub fn sampled_expansion(
    b: &BipartiteGraph,
    alpha: Ratio<i64>,
    samples: usize,
    seed: u64,
) -> Result<SampledExpansion, OracleError> {
    check_cap(b.n_in(), MAX_SAMPLED_INPUTS)?;
    let n = b.n_in();
    let k = (alpha * Ratio::from_integer(n as i64)).floor().to_integer();
    if k <= 0 || samples == 0 {
        return Err(OracleError::EmptyRange { n });
    }
    let k = (k as usize).min(n);
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut best: Option<SubsetWitness> = None;
    for _ in 0..samples {
        let size = rng.random_range(1..=k);
        order.shuffle(&mut rng);
        let members = &order[..size];
        let mask = members.iter().fold(0u64, |m, &t| m | 1 << t);
        let boundary = b.bip_boundary(members).expect("indices in range").len();
        let cand = SubsetWitness::new(mask, boundary);
        if best.is_none_or(|cur| (cand.ratio, cand.subset) < (cur.ratio, cur.subset)) {
            best = Some(cand);
        }
    }
    Ok(SampledExpansion { exhaustive: false, samples, seed, upper_estimate: best.unwrap() })
}

/// Arithmetic used by the lemma checks: exact rationals when the spectral
/// inputs are certified integers, floats with a fixed slack otherwise.
trait Scalar:
    Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn int(x: i64) -> Self;
    fn to_f64(self) -> f64;
    fn nonneg(self) -> bool;
    fn is_zero(self) -> bool;
    fn abs(self) -> Self {
        if self < Self::int(0) {
            Self::int(0) - self
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn int(x: i64) -> Self {
        x as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn nonneg(self) -> bool {
        self >= -FLOAT_SLACK
    }
    fn is_zero(self) -> bool {
        self.abs() <= FLOAT_SLACK
    }
}

impl Scalar for Ratio<i64> {
    fn int(x: i64) -> Self {
        Ratio::from_integer(x)
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn nonneg(self) -> bool {
        self >= Ratio::from_integer(0)
    }
    fn is_zero(self) -> bool {
        *self.numer() == 0
    }
}

#[derive(Debug, Clone, Copy)]
struct SpecParams<T> {
    mu: T,
    lambda1: T,
    lambda_min: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub subset: u64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightWitness {
    pub check: String,
    pub subset: u64,
    pub size: usize,
    pub value: f64,
}

/// Outcome of an exhaustive inequality check over all nonempty subsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: String,
    pub checked: u64,
    /// All comparisons done in exact rational arithmetic.
    pub exact: bool,
    /// `μ = d`; the inequalities hold but say nothing.
    pub degenerate: bool,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub tight_witnesses: Vec<TightWitness>,
    pub tight_count: u64,
    /// Tight subsets per check; at most `MAX_LISTED` of each are kept in `tight_witnesses`.
    pub tight_by_check: BTreeMap<String, u64>,
    /// Smallest slack seen per check.
    pub min_slack: BTreeMap<String, f64>,
}

impl VerificationReport {
    fn new(instance: &str, exact: bool, degenerate: bool) -> Self {
        Self {
            instance: instance.to_string(),
            checked: 0,
            exact,
            degenerate,
            violations: Vec::new(),
            violation_count: 0,
            tight_witnesses: Vec::new(),
            tight_count: 0,
            tight_by_check: BTreeMap::new(),
            min_slack: BTreeMap::new(),
        }
    }

    /// Records `lhs ≤ rhs` for one subset.
    fn record<T: Scalar>(&mut self, check: &str, subset: u64, lhs: T, rhs: T) {
        let slack = rhs - lhs;
        let entry = self.min_slack.entry(check.to_string()).or_insert(f64::INFINITY);
        *entry = entry.min(slack.to_f64());
        if !slack.nonneg() {
            self.violation_count += 1;
            if self.violations.len() < MAX_LISTED {
                self.violations.push(Violation { check: check.into(), subset, lhs: lhs.to_f64(), rhs: rhs.to_f64() });
            }
        } else if slack.is_zero() {
            self.tight_count += 1;
            let per_check = self.tight_by_check.entry(check.to_string()).or_insert(0);
            *per_check += 1;
            if *per_check <= MAX_LISTED as u64 {
                self.tight_witnesses.push(TightWitness {
                    check: check.into(),
                    subset,
                    size: subset.count_ones() as usize,
                    value: rhs.to_f64(),
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn into_result(self) -> Result<Self, OracleError> {
        match self.violations.first() {
            Some(v) => Err(OracleError::CounterexampleFound(format!(
                "{}: {} on subset {:#x} ({} > {})",
                self.instance, v.check, v.subset, v.lhs, v.rhs
            ))),
            None => Ok(self),
        }
    }

    pub fn tight_for<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a TightWitness> {
        self.tight_witnesses.iter().filter(move |w| w.check == check)
    }
}

fn lemma_setup(g: &Graph) -> Result<(usize, Vec<u64>), OracleError> {
    check_cap(g.n(), MAX_VERIFY_VERTICES)?;
    let d = g.regular_degree().filter(|&d| d >= 1).ok_or(OracleError::NotApplicable)?;
    Ok((d, g.neighbor_masks().expect("n <= 20")))
}

/// Induced edges `e(S)` of a bitmask.
pub fn induced_edges_mask(masks: &[u64], s: u64) -> u64 {
    let twice: u64 = (0..masks.len())
        .filter(|&v| s >> v & 1 == 1)
        .map(|v| (masks[v] & s).count_ones() as u64)
        .sum();
    twice / 2
}

/// `Σ_v |S ∩ ∂v|²`.
pub fn nbhd_square_sum(masks: &[u64], s: u64) -> u64 {
    masks.iter().map(|&m| ((m & s).count_ones() as u64).pow(2)).sum()
}

/// `|∂S|`.
pub fn boundary_size_mask(masks: &[u64], s: u64) -> usize {
    masks.iter().filter(|&&m| m & s != 0).count()
}

fn alon_chung_generic<T: Scalar>(g: &Graph, d: usize, masks: &[u64], p: SpecParams<T>, report: &mut VerificationReport) {
    let n = g.n() as i64;
    let d = d as i64;
    for s in 1u64..1 << g.n() {
        let size = s.count_ones() as i64;
        let e = induced_edges_mask(masks, s) as i64;
        // Everything scaled by 2n: |2n e(S) − d s²| ≤ μ s(n − s)
        let dev = T::int(2 * n * e - d * size * size);
        let spread = T::int(size * (n - size));
        let scale = T::int(2 * n);
        report.record("alon_chung", s, dev.abs() / scale, p.mu * spread / scale);
        report.record("alon_chung_refined_upper", s, dev / scale, p.lambda1 * spread / scale);
        report.record("alon_chung_refined_lower", s, p.lambda_min * spread / scale, dev / scale);
        report.checked += 1;
    }
}

/// Checks `|e(S) − ½dγ²n| ≤ ½μγ(1−γ)n` and the refined one-sided forms with
/// `λ₁` and `λ_{n−1}` on every nonempty subset.
pub fn verify_alon_chung(g: &Graph, gs: &GraphSpectrum, instance: &str) -> Result<VerificationReport, OracleError> {
    let (d, masks) = lemma_setup(g)?;
    let mut report = VerificationReport::new(instance, gs.certified.is_some(), gs.degenerate());
    match gs.certified {
        Some(c) => {
            let p = SpecParams {
                mu: Ratio::from_integer(c.mu),
                lambda1: Ratio::from_integer(c.lambda1),
                lambda_min: Ratio::from_integer(c.lambda_min),
            };
            alon_chung_generic(g, d, &masks, p, &mut report);
        }
        None => {
            let s = &gs.spectrum;
            let p = SpecParams { mu: s.mu, lambda1: s.lambda1(), lambda_min: s.lambda_min() };
            alon_chung_generic(g, d, &masks, p, &mut report);
        }
    }
    Ok(report)
}

fn nbhd_generic<T: Scalar>(g: &Graph, d: usize, masks: &[u64], mu_sq: T, report: &mut VerificationReport) {
    let n = g.n() as i64;
    let d2 = T::int((d * d) as i64);
    for s in 1u64..1 << g.n() {
        let size = s.count_ones() as i64;
        let alpha = T::int(size) / T::int(n);
        let bracket = alpha * (d2 - mu_sq) + mu_sq;
        let sum = T::int(nbhd_square_sum(masks, s) as i64);
        report.record("nbhd_sum", s, sum, bracket * T::int(size));
        let boundary = boundary_size_mask(masks, s) as i64;
        report.record("boundary_lb", s, d2 * T::int(size) / bracket, T::int(boundary));
        report.record("complement_ub", s, T::int(n - boundary), mu_sq * T::int(n - size) / bracket);
        report.checked += 1;
    }
}

/// Checks `Σ_v |S∩∂v|² ≤ [α(d²−μ²)+μ²]|S|`, `|∂S| ≥ d²|S|/[α(d²−μ²)+μ²]`
/// and the complement form on every nonempty subset.
pub fn verify_nbhd_and_boundary(
    g: &Graph,
    gs: &GraphSpectrum,
    instance: &str,
) -> Result<VerificationReport, OracleError> {
    let (d, masks) = lemma_setup(g)?;
    let mut report = VerificationReport::new(instance, gs.certified.is_some(), gs.degenerate());
    match gs.certified {
        Some(c) => nbhd_generic(g, d, &masks, Ratio::from_integer(c.mu * c.mu), &mut report),
        None => nbhd_generic(g, d, &masks, gs.mu() * gs.mu(), &mut report),
    }
    Ok(report)
}

/// Exact minimum Hamming weight over the nonzero codewords of a linear code.
pub fn min_distance_bruteforce(code: &LinearCode) -> Result<usize, OracleError> {
    if code.k() == 0 {
        return Err(OracleError::TrivialCode);
    }
    match code.codeword_count() {
        Some(c) if c <= MAX_CODEWORDS => {}
        other => return Err(OracleError::TooLarge { size: other.unwrap_or(u64::MAX), cap: MAX_CODEWORDS }),
    }
    if code.field().order() == 2 && code.n() <= 128 {
        return Ok(binary_min_weight(code));
    }
    Ok(code
        .par_fold_codewords(
            || usize::MAX,
            |best, _, word| best.min(word.iter().filter(|&&x| x != 0).count()),
            usize::min,
        ))
}

fn binary_min_weight(code: &LinearCode) -> usize {
    let rows: Vec<u128> = code
        .generator()
        .iter()
        .map(|r| r.iter().enumerate().fold(0u128, |m, (j, &x)| m | ((x as u128) << j)))
        .collect();
    let k = rows.len();
    let high = k.min(6);
    let low = k - high;
    (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut word = (0..high).filter(|&i| prefix >> i & 1 == 1).fold(0u128, |w, i| w ^ rows[low + i]);
            let mut best = if prefix != 0 { word.count_ones() as usize } else { usize::MAX };
            for i in 1u64..1 << low {
                word ^= rows[i.trailing_zeros() as usize];
                best = best.min(word.count_ones() as usize);
            }
            best
        })
        .min()
        .unwrap()
}
