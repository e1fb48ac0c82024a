//! Simple regular graphs, the neighborhood operators, and the edge-vertex
//! incidence construction.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Pairings tried by [`Graph::random_regular`] before giving up.
pub const RANDOM_REGULAR_RETRIES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("graph is not regular (degrees range over {min}..={max})")]
    NotRegular { min: usize, max: usize },
    #[error("bipartite graph is not biregular: {0}")]
    NotBiregular(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("no simple pairing found after {0} attempts")]
    GivesUp(usize),
}

/// A simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson { n: self.n, edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(raw.n, &edges).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, adj })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::BadParameters("complete graph needs n >= 1".into()));
        }
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::BadParameters("cycle needs n >= 3".into()));
        }
        let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    /// Circulant graph: `u ~ v` iff `v - u ≡ ±s (mod n)` for some offset `s`.
    pub fn circulant(n: usize, offsets: &[usize]) -> Result<Self, GraphError> {
        if offsets.is_empty() {
            return Err(GraphError::BadParameters("circulant needs at least one offset".into()));
        }
        let mut steps = BTreeSet::new();
        for &s in offsets {
            if s == 0 || s >= n {
                return Err(GraphError::BadParameters(format!("offset {s} not in 1..{n}")));
            }
            steps.insert(s);
            steps.insert(n - s);
        }
        let mut edges = BTreeSet::new();
        for u in 0..n {
            for &s in &steps {
                let v = (u + s) % n;
                edges.insert((u.min(v), u.max(v)));
            }
        }
        Self::from_edges(n, &edges.into_iter().collect::<Vec<_>>())
    }

    /// Paley graph on GF(q) for a prime `q ≡ 1 (mod 4)`.
    pub fn paley(q: usize) -> Result<Self, GraphError> {
        if q < 5 || !crate::fields::is_prime(q as u32) || q % 4 != 1 {
            return Err(GraphError::BadParameters(format!(
                "Paley graph needs a prime q ≡ 1 mod 4, got {q}"
            )));
        }
        let residues: BTreeSet<usize> = (1..q).map(|x| x * x % q).collect();
        let mut edges = Vec::new();
        for u in 0..q {
            for v in u + 1..q {
                if residues.contains(&(v - u)) {
                    edges.push((u, v));
                }
            }
        }
        Self::from_edges(q, &edges)
    }

    /// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, i + 5));
        }
        Self::from_edges(10, &edges).expect("petersen edges are simple")
    }

    /// Uniform pairing model with full rejection of loops and multi-edges.
    ///
    /// The stubs are shuffled with a SplitMix64 stream seeded by `seed`, so a
    /// fixed seed always yields the same graph.
    pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Self, GraphError> {
        if d >= n || (n * d) % 2 != 0 {
            return Err(GraphError::BadParameters(format!(
                "random regular graph needs d < n and n*d even (n={n}, d={d})"
            )));
        }
        let mut rng = SplitMix64::seed_from_u64(seed);
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        'attempt: for _ in 0..RANDOM_REGULAR_RETRIES {
            stubs.shuffle(&mut rng);
            let mut edges = BTreeSet::new();
            for pair in stubs.chunks_exact(2) {
                let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                if u == v || !edges.insert((u, v)) {
                    continue 'attempt;
                }
            }
            return Self::from_edges(n, &edges.into_iter().collect::<Vec<_>>());
        }
        Err(GraphError::GivesUp(RANDOM_REGULAR_RETRIES))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The common degree, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn assert_regular(&self) -> Result<usize, GraphError> {
        self.regular_degree().ok_or_else(|| GraphError::NotRegular {
            min: self.adj.iter().map(Vec::len).min().unwrap_or(0),
            max: self.adj.iter().map(Vec::len).max().unwrap_or(0),
        })
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0; self.n]; self.n];
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                a[u][v] = 1;
            }
        }
        a
    }

    /// Renames vertex `u` to `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        if perm.len() != self.n || perm.iter().collect::<BTreeSet<_>>().len() != self.n {
            return Err(GraphError::BadParameters("relabeling must be a permutation".into()));
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        Self::from_edges(self.n, &edges)
    }

    fn check_set(&self, s: &[usize]) -> Result<(), GraphError> {
        match s.iter().find(|&&v| v >= self.n) {
            Some(&vertex) => Err(GraphError::OutOfRange { vertex, n: self.n }),
            None => Ok(()),
        }
    }

    /// `∂S`: the union of the neighborhoods of the vertices in `S`.
    pub fn boundary(&self, s: &[usize]) -> Result<Vec<usize>, GraphError> {
        self.check_set(s)?;
        let out: BTreeSet<usize> = s.iter().flat_map(|&v| self.adj[v].iter().copied()).collect();
        Ok(out.into_iter().collect())
    }

    /// `∂*S = ∂S \ S`.
    pub fn star_boundary(&self, s: &[usize]) -> Result<Vec<usize>, GraphError> {
        let inside: BTreeSet<usize> = s.iter().copied().collect();
        Ok(self.boundary(s)?.into_iter().filter(|v| !inside.contains(v)).collect())
    }

    /// Number of edges with both endpoints in `S`.
    pub fn induced_edge_count(&self, s: &[usize]) -> Result<usize, GraphError> {
        self.check_set(s)?;
        let mut inside = vec![false; self.n];
        for &v in s {
            inside[v] = true;
        }
        Ok(self
            .edges()
            .into_iter()
            .filter(|&(u, v)| inside[u] && inside[v])
            .count())
    }

    /// Neighborhood bitmasks; `None` when `n > 64`.
    pub fn neighbor_masks(&self) -> Option<Vec<u64>> {
        (self.n <= 64).then(|| {
            self.adj
                .iter()
                .map(|list| list.iter().fold(0u64, |m, &v| m | (1 << v)))
                .collect()
        })
    }
}

/// A `(c, d)`-biregular bipartite graph between inputs and outputs.
///
/// `nbrs[t]` lists the outputs of input `t`. `order[i]` lists the inputs of
/// output `i` in the order used by code constructions (ascending unless
/// reshuffled).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_in: usize,
    n_out: usize,
    nbrs: Vec<Vec<usize>>,
    c: usize,
    d_out: usize,
    order: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct BipartiteJson {
    n_in: usize,
    n_out: usize,
    nbrs: Vec<Vec<usize>>,
}

impl Serialize for BipartiteGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BipartiteJson { n_in: self.n_in, n_out: self.n_out, nbrs: self.nbrs.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BipartiteGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BipartiteJson::deserialize(deserializer)?;
        if raw.nbrs.len() != raw.n_in {
            return Err(serde::de::Error::custom("n_in does not match nbrs length"));
        }
        BipartiteGraph::new(raw.n_out, raw.nbrs).map_err(serde::de::Error::custom)
    }
}

impl BipartiteGraph {
    pub fn new(n_out: usize, nbrs: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n_in = nbrs.len();
        let mut order = vec![Vec::new(); n_out];
        for (t, list) in nbrs.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &o in list {
                if o >= n_out {
                    return Err(GraphError::OutOfRange { vertex: o, n: n_out });
                }
                if !seen.insert(o) {
                    return Err(GraphError::DuplicateEdge(t, o));
                }
                order[o].push(t);
            }
        }
        let c = nbrs.first().map_or(0, Vec::len);
        if nbrs.iter().any(|l| l.len() != c) {
            return Err(GraphError::NotBiregular("input degrees differ".into()));
        }
        let d_out = order.first().map_or(0, Vec::len);
        if order.iter().any(|l| l.len() != d_out) {
            return Err(GraphError::NotBiregular("output degrees differ".into()));
        }
        Ok(Self { n_in, n_out, nbrs, c, d_out, order })
    }

    /// The edge-vertex graph of a regular graph: one input per edge (in
    /// lexicographic edge order) joined to the two endpoints of that edge.
    pub fn edge_vertex(g: &Graph) -> Result<Self, GraphError> {
        g.assert_regular()?;
        let nbrs = g.edges().into_iter().map(|(u, v)| vec![u, v]).collect();
        Self::new(g.n(), nbrs)
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// Input degree.
    pub fn c(&self) -> usize {
        self.c
    }

    /// Output degree.
    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn input_neighbors(&self, t: usize) -> &[usize] {
        &self.nbrs[t]
    }

    /// Ordered inputs of output `i`: entry `j` is the variable index `b(i, j)`.
    pub fn constraint_order(&self, i: usize) -> &[usize] {
        &self.order[i]
    }

    /// Same graph with every output's input order shuffled by a seeded stream.
    pub fn with_shuffled_order(&self, seed: u64) -> Self {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let mut out = self.clone();
        for list in &mut out.order {
            list.shuffle(&mut rng);
        }
        out
    }

    /// `∂T` for a set of inputs; equal to `∂*T` since the sides are disjoint.
    pub fn bip_boundary(&self, t: &[usize]) -> Result<Vec<usize>, GraphError> {
        if let Some(&vertex) = t.iter().find(|&&v| v >= self.n_in) {
            return Err(GraphError::OutOfRange { vertex, n: self.n_in });
        }
        let out: BTreeSet<usize> = t.iter().flat_map(|&v| self.nbrs[v].iter().copied()).collect();
        Ok(out.into_iter().collect())
    }

    /// Incidence matrix `M`, rows indexed by inputs, columns by outputs.
    pub fn incidence_matrix(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.n_out]; self.n_in];
        for (t, list) in self.nbrs.iter().enumerate() {
            for &o in list {
                m[t][o] = 1;
            }
        }
        m
    }

    /// Adjacency matrix `[[0, M], [Mᵀ, 0]]` with inputs first.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let size = self.n_in + self.n_out;
        let mut a = vec![vec![0; size]; size];
        for (t, list) in self.nbrs.iter().enumerate() {
            for &o in list {
                a[t][self.n_in + o] = 1;
                a[self.n_in + o][t] = 1;
            }
        }
        a
    }

    /// Reads each degree-2 input back as an edge between its outputs.
    pub fn collapse_to_graph(&self) -> Result<Graph, GraphError> {
        if self.c != 2 {
            return Err(GraphError::BadParameters("only input degree 2 collapses to a graph".into()));
        }
        let edges: Vec<_> = self.nbrs.iter().map(|l| (l[0], l[1])).collect();
        Graph::from_edges(self.n_out, &edges)
    }
}
