//! Linear codes over GF(q), the constraint-stamped expander code `𝓒(B, C)`,
//! and the neighborhood expander map `φ_exp`.

use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::exact;
use crate::fields::{Elem, ExtSymbol, Field, FieldDesc, FieldError};
use crate::graphs::{BipartiteGraph, Graph, GraphError};
use crate::oracle::{self, OracleError};
use crate::spectral::{self, GraphSpectrum, SpectralError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("rate bound k/n >= {bound} violated by k = {k}, n = {n}")]
    RateBoundViolated { k: usize, n: usize, bound: Ratio<i64> },
    #[error("weight of φ_exp(u) and |∂ supp(u)| disagree on {0} codewords")]
    InternalMismatch(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, p);
        let inv = field.inv(rows[r][col]).unwrap();
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..ncols {
                    let t = field.mul(f, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of `{x : M x = 0}` for an `m × ncols` matrix.
pub fn null_space(field: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0; ncols];
        x[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = field.neg(m[i][free]);
        }
        basis.push(x);
    }
    basis
}

fn axpy(field: &Field, y: &mut [Elem], a: Elem, x: &[Elem]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = field.add(*yi, field.mul(a, xi));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    Asserted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownDistance {
    pub value: usize,
    pub provenance: Provenance,
}

/// An `[n, k]` linear code with generator and parity-check matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCode {
    field: Arc<Field>,
    n: usize,
    gen: Vec<Vec<Elem>>,
    pchk: Vec<Vec<Elem>>,
    known_distance: Option<KnownDistance>,
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    field: FieldDesc,
    n: usize,
    k: usize,
    generator: Vec<Vec<Elem>>,
    parity_check: Vec<Vec<Elem>>,
    known_distance: Option<KnownDistance>,
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CodeJson {
            field: self.field.desc(),
            n: self.n,
            k: self.k(),
            generator: self.gen.clone(),
            parity_check: self.pchk.clone(),
            known_distance: self.known_distance,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = CodeJson::deserialize(deserializer)?;
        let field = Field::from_desc(&raw.field).map_err(D::Error::custom)?;
        let mut code = LinearCode::from_generator(&field, raw.n, raw.generator).map_err(D::Error::custom)?;
        if code.k() != raw.k {
            return Err(D::Error::custom("k does not match generator rank"));
        }
        code.known_distance = raw.known_distance;
        Ok(code)
    }
}

fn check_rows(field: &Field, n: usize, rows: &[Vec<Elem>]) -> Result<(), CodeError> {
    for row in rows {
        if row.len() != n {
            return Err(CodeError::LengthMismatch { expected: n, got: row.len() });
        }
        for &x in row {
            field.check_elem(x as u32)?;
        }
    }
    Ok(())
}

impl LinearCode {
    /// The row space of `rows`; the stored generator is its reduced echelon form.
    pub fn from_generator(field: &Field, n: usize, rows: Vec<Vec<Elem>>) -> Result<Self, CodeError> {
        check_rows(field, n, &rows)?;
        let mut gen = rows;
        rref(field, &mut gen);
        let pchk = null_space(field, &gen, n);
        Ok(Self { field: Arc::new(field.clone()), n, gen, pchk, known_distance: None })
    }

    /// The kernel of `rows`.
    pub fn from_parity_check(field: &Field, n: usize, rows: Vec<Vec<Elem>>) -> Result<Self, CodeError> {
        check_rows(field, n, &rows)?;
        let mut pchk = rows;
        rref(field, &mut pchk);
        let gen = null_space(field, &pchk, n);
        Ok(Self { field: Arc::new(field.clone()), n, gen, pchk, known_distance: None })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.len()
    }

    pub fn generator(&self) -> &[Vec<Elem>] {
        &self.gen
    }

    pub fn parity_check(&self) -> &[Vec<Elem>] {
        &self.pchk
    }

    pub fn known_distance(&self) -> Option<KnownDistance> {
        self.known_distance
    }

    pub fn rate(&self) -> Ratio<i64> {
        Ratio::new(self.k() as i64, self.n as i64)
    }

    /// `q^k`, if it fits in a `u64`.
    pub fn codeword_count(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.k() as u32)
    }

    pub fn encode(&self, msg: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        if msg.len() != self.k() {
            return Err(CodeError::LengthMismatch { expected: self.k(), got: msg.len() });
        }
        let mut word = vec![0; self.n];
        for (&m, row) in msg.iter().zip(&self.gen) {
            axpy(&self.field, &mut word, m, row);
        }
        Ok(word)
    }

    pub fn contains(&self, word: &[Elem]) -> bool {
        word.len() == self.n
            && self.pchk.iter().all(|h| {
                h.iter().zip(word).fold(0, |acc, (&a, &b)| self.field.add(acc, self.field.mul(a, b))) == 0
            })
    }

    /// Exact checks of `G·Hᵀ = 0`, `rank G = k` and `rank H = n − k`.
    pub fn check_invariants(&self) -> bool {
        let f = &self.field;
        let orthogonal = self.gen.iter().all(|g| {
            self.pchk
                .iter()
                .all(|h| g.iter().zip(h).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))) == 0)
        });
        orthogonal && rank(f, &self.gen) == self.k() && rank(f, &self.pchk) == self.n - self.k()
    }

    /// Runs the brute-force oracle and records the result.
    pub fn with_computed_distance(mut self) -> Result<Self, CodeError> {
        let value = oracle::min_distance_bruteforce(&self)?;
        self.known_distance = Some(KnownDistance { value, provenance: Provenance::Computed });
        Ok(self)
    }

    fn with_asserted_distance(mut self, value: usize) -> Self {
        self.known_distance = Some(KnownDistance { value, provenance: Provenance::Asserted });
        self
    }

    /// Folds over every nonzero codeword in parallel. `fold` receives the
    /// message and the codeword. Chunks are split on the high message digits
    /// and combined with `reduce`, which must be associative and commutative
    /// for the result to be deterministic.
    pub fn par_fold_codewords<A, I, F, R>(&self, init: I, fold: F, reduce: R) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(A, &[Elem], &[Elem]) -> A + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        let q = self.field.order();
        let k = self.k();
        let mut high = 0;
        while high < k && q.pow(high as u32) < 64 {
            high += 1;
        }
        let low = k - high;
        let chunks = q.pow(high as u32) as u64;
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut acc = init();
                let mut msg = vec![0 as Elem; k];
                let mut word = vec![0 as Elem; self.n];
                let mut c = chunk as usize;
                for j in low..k {
                    msg[j] = (c % q) as Elem;
                    c /= q;
                    axpy(&self.field, &mut word, msg[j], &self.gen[j]);
                }
                loop {
                    if msg.iter().any(|&m| m != 0) {
                        acc = fold(acc, &msg, &word);
                    }
                    let mut j = 0;
                    loop {
                        if j == low {
                            return acc;
                        }
                        let old = msg[j];
                        let new = if (old as usize) + 1 < q { old + 1 } else { 0 };
                        msg[j] = new;
                        axpy(&self.field, &mut word, self.field.sub(new, old), &self.gen[j]);
                        if new != 0 {
                            break;
                        }
                        j += 1;
                    }
                }
            })
            .reduce(&init, &reduce)
    }
}

/// `[d, 1, d]` repetition code.
pub fn repetition(d: usize, field: &Field) -> Result<LinearCode, CodeError> {
    if d == 0 {
        return Err(CodeError::BadParameters("repetition length must be >= 1".into()));
    }
    LinearCode::from_generator(field, d, vec![vec![1; d]])?.with_computed_distance()
}

/// `[n, n − 1, 2]` single-parity-check code.
pub fn parity(n: usize, field: &Field) -> Result<LinearCode, CodeError> {
    if n < 2 {
        return Err(CodeError::BadParameters("parity code length must be >= 2".into()));
    }
    LinearCode::from_parity_check(field, n, vec![vec![1; n]])?.with_computed_distance()
}

/// The binary `[7, 4, 3]` Hamming code.
pub fn hamming74() -> LinearCode {
    let gf2 = Field::new(2, 1).unwrap();
    let gen = vec![
        vec![1, 0, 0, 0, 0, 1, 1],
        vec![0, 1, 0, 0, 1, 0, 1],
        vec![0, 0, 1, 0, 1, 1, 0],
        vec![0, 0, 0, 1, 1, 1, 1],
    ];
    LinearCode::from_generator(&gf2, 7, gen).unwrap().with_computed_distance().unwrap()
}

/// Full space `[n, n, 1]`.
pub fn full_space(n: usize, field: &Field) -> Result<LinearCode, CodeError> {
    LinearCode::from_parity_check(field, n, Vec::new())
}

/// Reed–Solomon code of length `n ≤ q + 1` by polynomial evaluation at the
/// field elements `0, 1, …` in index order. For `n = q + 1` the last
/// coordinate is the point at infinity (leading coefficient).
pub fn reed_solomon(n: usize, k: usize, field: &Field) -> Result<LinearCode, CodeError> {
    let q = field.order();
    if k == 0 || k > n || n > q + 1 {
        return Err(CodeError::BadParameters(format!("RS needs 1 <= k <= n <= q + 1 (n={n}, k={k}, q={q})")));
    }
    let finite = n.min(q);
    let mut gen = vec![vec![0; n]; k];
    for (x, col) in field.elements().take(finite).zip(0..) {
        let mut power = 1;
        for row in gen.iter_mut() {
            row[col] = power;
            power = field.mul(power, x);
        }
    }
    if n == q + 1 {
        gen[k - 1][n - 1] = 1;
    }
    Ok(LinearCode::from_generator(field, n, gen)?.with_asserted_distance(n - k + 1))
}

/// `{c ∈ C : every coordinate lies in the prime subfield}`, as a code over
/// the prime field. May have dimension 0.
pub fn subfield_subcode(code: &LinearCode, subfield: &Field) -> Result<LinearCode, CodeError> {
    let big = code.field();
    if !subfield.is_prime_field() || subfield.characteristic() != big.characteristic() {
        return Err(CodeError::BadParameters("subfield must be the prime subfield".into()));
    }
    // c ∈ GF(p)^n and H c = 0 over GF(q) ⇔ every GF(p)-coordinate of every
    // row of H c vanishes; each coordinate is linear in c over GF(p).
    let mut rows = Vec::new();
    for h in code.parity_check() {
        let coords: Vec<Vec<u32>> = h.iter().map(|&x| big.coords(x)).collect();
        for t in 0..big.degree() as usize {
            rows.push(coords.iter().map(|c| c[t] as Elem).collect());
        }
    }
    LinearCode::from_parity_check(subfield, code.n(), rows)
}

/// `c·r − (c − 1)` with `r` the inner rate.
pub fn rate_lower_bound(c: usize, inner: &LinearCode) -> Ratio<i64> {
    Ratio::from_integer(c as i64) * inner.rate() - Ratio::from_integer(c as i64 - 1)
}

/// The code on `b`'s inputs whose restriction to each output's ordered
/// neighbor list is a codeword of `inner`.
pub fn sipser_spielman_code(b: &BipartiteGraph, inner: &LinearCode) -> Result<LinearCode, CodeError> {
    if inner.n() != b.d_out() {
        return Err(CodeError::LengthMismatch { expected: b.d_out(), got: inner.n() });
    }
    let mut rows = Vec::with_capacity(b.n_out() * inner.parity_check().len());
    for i in 0..b.n_out() {
        let vars = b.constraint_order(i);
        for h in inner.parity_check() {
            let mut row = vec![0; b.n_in()];
            for (&v, &x) in vars.iter().zip(h) {
                row[v] = x;
            }
            rows.push(row);
        }
    }
    let code = LinearCode::from_parity_check(inner.field(), b.n_in(), rows)?;
    let bound = rate_lower_bound(b.c(), inner);
    if code.rate() < bound {
        return Err(CodeError::RateBoundViolated { k: code.k(), n: code.n(), bound });
    }
    Ok(code)
}

/// True if every constraint sees a codeword of `inner`.
pub fn satisfies_constraints(b: &BipartiteGraph, inner: &LinearCode, word: &[Elem]) -> bool {
    (0..b.n_out()).all(|i| {
        let local: Vec<Elem> = b.constraint_order(i).iter().map(|&v| word[v]).collect();
        inner.contains(&local)
    })
}

/// `φ_exp`: vertex `i` receives the block `(u_{l₁(i)}, …, u_{l_d(i)})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderMap {
    d: usize,
    order: Vec<Vec<usize>>,
}

impl ExpanderMap {
    /// Canonical order: ascending neighbor index.
    pub fn new(g: &Graph) -> Result<Self, CodeError> {
        let d = g.assert_regular()?;
        Ok(Self { d, order: (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect() })
    }

    pub fn with_shuffled_order(&self, seed: u64) -> Self {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let mut out = self.clone();
        for list in &mut out.order {
            list.shuffle(&mut rng);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `l_{j+1}(i)`.
    pub fn neighbor(&self, i: usize, j: usize) -> usize {
        self.order[i][j]
    }

    pub fn apply(&self, field: &Field, u: &[Elem]) -> Result<Vec<ExtSymbol>, CodeError> {
        if u.len() != self.n() {
            return Err(CodeError::LengthMismatch { expected: self.n(), got: u.len() });
        }
        self.order
            .iter()
            .map(|l| {
                let block: Vec<Elem> = l.iter().map(|&v| u[v]).collect();
                Ok(ExtSymbol::pack(field, &block, self.d)?)
            })
            .collect()
    }

    /// Number of nonzero output symbols of `φ_exp(u)`.
    pub fn outer_weight(&self, u: &[Elem]) -> usize {
        self.order.iter().filter(|l| l.iter().any(|&v| u[v] != 0)).count()
    }
}

/// A codeword of `𝓒_exp` together with its source codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpanderMapCodeword {
    pub outer: Vec<ExtSymbol>,
    pub source: Vec<Elem>,
}

impl ExpanderMapCodeword {
    pub fn weight(&self) -> usize {
        self.outer.iter().filter(|s| !s.is_zero()).count()
    }
}

/// `𝓒_exp = φ_exp(C)`, held as the map plus the source code.
#[derive(Debug, Clone)]
pub struct ExpanderCode {
    pub map: ExpanderMap,
    pub code: LinearCode,
}

impl ExpanderCode {
    pub fn codeword(&self, msg: &[Elem]) -> Result<ExpanderMapCodeword, CodeError> {
        let source = self.code.encode(msg)?;
        let outer = self.map.apply(self.code.field(), &source)?;
        Ok(ExpanderMapCodeword { outer, source })
    }
}

pub fn expander_map(g: &Graph, code: &LinearCode) -> Result<ExpanderCode, CodeError> {
    if code.n() != g.n() {
        return Err(CodeError::LengthMismatch { expected: g.n(), got: code.n() });
    }
    Ok(ExpanderCode { map: ExpanderMap::new(g)?, code: code.clone() })
}

/// `|∂ supp(u)|` computed from the graph alone.
fn boundary_of_support(g: &Graph, masks: Option<&[u64]>, u: &[Elem]) -> usize {
    match masks {
        Some(m) => {
            let supp = u.iter().enumerate().filter(|(_, &x)| x != 0).fold(0u64, |s, (i, _)| s | 1 << i);
            oracle::boundary_size_mask(m, supp)
        }
        None => {
            let supp: Vec<usize> = u.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect();
            g.boundary(&supp).expect("support indices in range").len()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct WeightScan {
    min_map: usize,
    min_boundary: usize,
    min_source: usize,
    mismatches: u64,
    checked: u64,
}

impl WeightScan {
    fn start() -> Self {
        Self { min_map: usize::MAX, min_boundary: usize::MAX, min_source: usize::MAX, ..Self::default() }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            min_map: self.min_map.min(o.min_map),
            min_boundary: self.min_boundary.min(o.min_boundary),
            min_source: self.min_source.min(o.min_source),
            mismatches: self.mismatches + o.mismatches,
            checked: self.checked + o.checked,
        }
    }
}

/// Distance of `𝓒_exp` next to the bounds that predict it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderDistanceReport {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub q: usize,
    pub source_distance: usize,
    pub delta0: Ratio<i64>,
    /// Minimum number of nonzero GF(q^d) symbols, via `φ_exp`.
    pub distance: usize,
    /// The same minimum via `|∂ supp(u)|`.
    pub distance_via_boundary: usize,
    /// Minimum number of nonzero GF(q) coordinates.
    pub coord_distance: usize,
    pub checked: u64,
    pub mismatches: u64,
    pub mu: f64,
    pub exact: bool,
    pub bound: f64,
    pub bound_exact: Option<Ratio<i64>>,
    pub ramanujan_bound: Option<f64>,
    pub alon_original: f64,
    pub alon_original_exact: Option<Ratio<i64>>,
    pub meets_bound: bool,
    pub tight: bool,
}

/// Brute-forces the distance of `𝓒_exp` two ways and compares it with the bounds.
pub fn expander_map_distance(g: &Graph, code: &LinearCode) -> Result<ExpanderDistanceReport, CodeError> {
    let gs = spectral::graph_spectrum(g, spectral::DEFAULT_TOL)?;
    expander_map_distance_with(g, code, &gs)
}

pub fn expander_map_distance_with(
    g: &Graph,
    code: &LinearCode,
    gs: &GraphSpectrum,
) -> Result<ExpanderDistanceReport, CodeError> {
    let ec = expander_map(g, code)?;
    if code.k() == 0 {
        return Err(OracleError::TrivialCode.into());
    }
    match code.codeword_count() {
        Some(c) if c <= oracle::MAX_CODEWORDS => {}
        other => {
            return Err(OracleError::TooLarge { size: other.unwrap_or(u64::MAX), cap: oracle::MAX_CODEWORDS }.into())
        }
    }
    let masks = g.neighbor_masks();
    let scan = code.par_fold_codewords(
        WeightScan::start,
        |mut acc, _, word| {
            let via_map = ec.map.outer_weight(word);
            let via_boundary = boundary_of_support(g, masks.as_deref(), word);
            acc.min_map = acc.min_map.min(via_map);
            acc.min_boundary = acc.min_boundary.min(via_boundary);
            acc.min_source = acc.min_source.min(word.iter().filter(|&&x| x != 0).count());
            acc.mismatches += (via_map != via_boundary) as u64;
            acc.checked += 1;
            acc
        },
        WeightScan::merge,
    );
    if scan.mismatches > 0 {
        return Err(CodeError::InternalMismatch(scan.mismatches));
    }

    let (n, d) = (g.n(), gs.degree);
    let delta0 = Ratio::new(scan.min_source as i64, n as i64);
    let delta0_f = scan.min_source as f64 / n as f64;
    let mu = gs.mu();
    let fb = crate::bounds::exp_code_distance_bounds(d as f64, mu, delta0_f, n as f64);
    let (bound_exact, alon_exact) = match gs.certified {
        Some(c) => {
            let mu_sq = Ratio::from_integer(c.mu * c.mu);
            (
                Some(exact::exp_code_distance(d as i64, mu_sq, delta0, n as i64)),
                Some(exact::alon_original(d as i64, mu_sq, delta0, n as i64)),
            )
        }
        None => (None, None),
    };
    let actual = scan.min_map;
    let (meets_bound, tight) = match bound_exact {
        Some(b) => {
            let a = Ratio::from_integer(actual as i64);
            (a >= b, a == b)
        }
        None => (actual as f64 >= fb.ours - 1e-9, (actual as f64 - fb.ours).abs() <= 1e-9),
    };
    Ok(ExpanderDistanceReport {
        n,
        d,
        k: code.k(),
        q: code.field().order(),
        source_distance: scan.min_source,
        delta0,
        distance: actual,
        distance_via_boundary: scan.min_boundary,
        coord_distance: d * scan.min_source,
        checked: scan.checked,
        mismatches: scan.mismatches,
        mu,
        exact: gs.certified.is_some(),
        bound: fb.ours,
        bound_exact,
        ramanujan_bound: (mu * mu <= 4.0 * d as f64).then_some(fb.ramanujan_form),
        alon_original: fb.alon_original,
        alon_original_exact: alon_exact,
        meets_bound,
        tight,
    })
}

/// Parameters and brute-forced distance of `𝓒(𝓗, C)` for the edge-vertex
/// graph `𝓗` of a regular graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SipserSpielmanReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub inner_n: usize,
    pub inner_k: usize,
    pub inner_distance: usize,
    /// Inner relative distance `ε`.
    pub epsilon: Ratio<i64>,
    pub rate: Ratio<i64>,
    /// `2r − 1`.
    pub rate_lb: Ratio<i64>,
    pub distance: Option<usize>,
    pub relative_distance: Option<Ratio<i64>>,
    pub mu: f64,
    pub exact: bool,
    pub hypothesis_holds: bool,
    /// `ε(dε − μ)/(d − μ)`.
    pub bound: Option<f64>,
    pub bound_exact: Option<Ratio<i64>>,
    /// `[(dε − μ)/(d − μ)]²`.
    pub ss_original: Option<f64>,
    pub meets_bound: Option<bool>,
    pub tight: Option<bool>,
}

pub fn sipser_spielman_report(g: &Graph, inner: &LinearCode) -> Result<(LinearCode, SipserSpielmanReport), CodeError> {
    let gs = spectral::graph_spectrum(g, spectral::DEFAULT_TOL)?;
    let h = BipartiteGraph::edge_vertex(g)?;
    let code = sipser_spielman_code(&h, inner)?;
    let inner_distance = match inner.known_distance() {
        Some(kd) => kd.value,
        None => oracle::min_distance_bruteforce(inner)?,
    };
    let d = gs.degree;
    let epsilon = Ratio::new(inner_distance as i64, d as i64);
    let eps_f = inner_distance as f64 / d as f64;
    let mu = gs.mu();
    let distance = match oracle::min_distance_bruteforce(&code) {
        Ok(x) => Some(x),
        Err(OracleError::TrivialCode) => None,
        Err(e) => return Err(e.into()),
    };
    let n = code.n();
    let relative_distance = distance.map(|x| Ratio::new(x as i64, n as i64));
    let ss = crate::bounds::ss_distance_and_rate(d as f64, mu, eps_f, inner.rate_f64()).ok();
    let bound_exact = match (gs.certified, ss.is_some()) {
        (Some(c), true) => {
            let (dq, mq) = (Ratio::from_integer(d as i64), Ratio::from_integer(c.mu));
            Some(epsilon * (dq * epsilon - mq) / (dq - mq))
        }
        _ => None,
    };
    let (meets_bound, tight) = match (relative_distance, bound_exact, ss) {
        (Some(rd), Some(b), _) => (Some(rd >= b), Some(rd == b)),
        (Some(rd), None, Some(s)) => {
            let rd = crate::bounds::ratio_to_f64(rd);
            (Some(rd >= s.relative_distance - 1e-12), Some((rd - s.relative_distance).abs() <= 1e-12))
        }
        _ => (None, None),
    };
    let report = SipserSpielmanReport {
        n,
        k: code.k(),
        d,
        inner_n: inner.n(),
        inner_k: inner.k(),
        inner_distance,
        epsilon,
        rate: code.rate(),
        rate_lb: rate_lower_bound(2, inner),
        distance,
        relative_distance,
        mu,
        exact: gs.certified.is_some(),
        hypothesis_holds: ss.is_some(),
        bound: ss.map(|s| s.relative_distance),
        bound_exact,
        ss_original: ss.map(|s| s.ss_original),
        meets_bound,
        tight,
    };
    Ok((code, report))
}

impl LinearCode {
    pub fn rate_f64(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }
}
