//! The standing test corpus of small regular graphs and source codes.

use std::collections::BTreeSet;

use crate::codes::{self, LinearCode};
use crate::fields::Field;
use crate::graphs::Graph;

pub const SMALL_MAX_N: usize = 8;
pub const RANDOM_N: usize = 10;
pub const RANDOM_SEEDS: std::ops::RangeInclusive<u64> = 1..=20;

#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
}

fn push(out: &mut Vec<CorpusGraph>, seen: &mut BTreeSet<(usize, Vec<(usize, usize)>)>, name: String, g: Graph) {
    if g.regular_degree().is_some() && g.is_connected() && seen.insert((g.n(), g.edges())) {
        out.push(CorpusGraph { name, graph: g });
    }
}

/// Connected regular graphs on at most 8 vertices reachable from the
/// complete, cycle and circulant generators, deduplicated by edge set.
pub fn small() -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for n in 3..=SMALL_MAX_N {
        push(&mut out, &mut seen, format!("K{n}"), Graph::complete(n).unwrap());
        push(&mut out, &mut seen, format!("C{n}"), Graph::cycle(n).unwrap());
        let half = n / 2;
        for bits in 1u32..1 << half {
            let offsets: Vec<usize> = (1..=half).filter(|&o| bits >> (o - 1) & 1 == 1).collect();
            if let Ok(g) = Graph::circulant(n, &offsets) {
                let label = offsets.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",");
                push(&mut out, &mut seen, format!("circ{n}[{label}]"), g);
            }
        }
    }
    out
}

/// Random 3-regular graphs on 10 vertices for seeds 1..=20, plus Petersen.
pub fn random() -> Vec<CorpusGraph> {
    let mut out = vec![CorpusGraph { name: "petersen".into(), graph: Graph::petersen() }];
    for seed in RANDOM_SEEDS {
        out.push(CorpusGraph {
            name: format!("rr{RANDOM_N}_3_s{seed}"),
            graph: Graph::random_regular(RANDOM_N, 3, seed).unwrap(),
        });
    }
    out
}

pub fn full() -> Vec<CorpusGraph> {
    let mut all = small();
    all.extend(random());
    all
}

/// Source codes of length `n` for expander-map checks.
pub fn source_codes(n: usize) -> Vec<(String, LinearCode)> {
    let gf2 = Field::new(2, 1).unwrap();
    let gf3 = Field::new(3, 1).unwrap();
    let mut out = vec![
        (format!("rep{n}/GF2"), codes::repetition(n, &gf2).unwrap()),
        (format!("parity{n}/GF2"), codes::parity(n, &gf2).unwrap()),
        (format!("rep{n}/GF3"), codes::repetition(n, &gf3).unwrap()),
    ];
    if n == 7 {
        out.push(("hamming74".into(), codes::hamming74()));
    }
    for (p, k) in [(2, 3), (2, 4), (3, 2)] {
        let f = Field::new(p, k).unwrap();
        let q = f.order();
        if n <= q + 1 {
            let dim = (n / 2).max(1);
            out.push((format!("rs[{n},{dim}]/GF{q}"), codes::reed_solomon(n, dim, &f).unwrap()));
        }
    }
    out.retain(|(_, c)| c.codeword_count().is_some_and(|x| x <= 1 << 16));
    out
}
