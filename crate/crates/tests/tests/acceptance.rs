//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;

use explab::bounds::{self, ratio_to_f64};
use explab::codes::{self, ExpanderMap, LinearCode};
use explab::corpus;
use explab::fields::{Elem, Field};
use explab::graphs::{BipartiteGraph, Graph};
use explab::oracle::{self, MAX_EXPANSION_INPUTS};
use explab::spectral::{self, DEFAULT_TOL};

type Q = Ratio<i64>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c1_edge_vertex_spectrum() -> Outcome {
    let mut graphs = vec![
        ("K4".to_string(), Graph::complete(4).unwrap()),
        ("C5".to_string(), Graph::cycle(5).unwrap()),
        ("Petersen".to_string(), Graph::petersen()),
    ];
    for seed in 1..=10u64 {
        let (n, d) = if seed % 2 == 0 { (12, 3) } else { (10, 4) };
        graphs.push((format!("rr{n}_{d}_s{seed}"), Graph::random_regular(n, d, seed).unwrap()));
    }
    let mut identity_ok = true;
    let mut lambda0_ok = true;
    let mut second_ok = true;
    let mut mu_mismatch = Vec::new();
    for (name, g) in &graphs {
        let r = spectral::edge_vertex_spectrum(g, DEFAULT_TOL).unwrap();
        identity_ok &= r.incidence_identity;
        lambda0_ok &= (r.lambda0_h - (2.0 * r.d as f64).sqrt()).abs() < 1e-8;
        second_ok &= (r.mu_h - r.second_eigenvalue_prediction).abs() < 1e-8 && r.mu_h <= r.expected_mu_h + 1e-8;
        if (r.mu_h - r.expected_mu_h).abs() >= 1e-8 {
            mu_mismatch.push(format!("{name}: {:.6} vs sqrt(d+mu(G)) = {:.6}", r.mu_h, r.expected_mu_h));
        }
    }
    let pass = identity_ok && lambda0_ok && mu_mismatch.is_empty();
    let mut detail = format!(
        "{} graphs; M^T M = A + dI {}; lambda0(H) = sqrt(2d) {}; mu(H) = sqrt(d + lambda1(G)) {}",
        graphs.len(),
        ok(identity_ok),
        ok(lambda0_ok),
        ok(second_ok)
    );
    if !mu_mismatch.is_empty() {
        detail += &format!("; mu(H) = sqrt(d + mu(G)) fails on {} graphs [{}]", mu_mismatch.len(), mu_mismatch.join("; "));
    }
    outcome(pass, detail)
}

fn show(x: Option<Q>) -> String {
    x.map_or("none".into(), |r| r.to_string())
}

fn ok(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "FAILS"
    }
}

fn c2_improved_dominance() -> Outcome {
    let steps = 50;
    let mut min_margin = f64::INFINITY;
    let mut bad = 0;
    for i in 0..steps {
        let d = 3.0 + 9.0 * i as f64 / (steps - 1) as f64;
        for j in 1..=steps {
            let mu = d * j as f64 / (steps + 1) as f64;
            for k in 1..=steps {
                let alpha = k as f64 / (steps + 1) as f64;
                let margin = bounds::improved_bound(d, mu, alpha).value - bounds::edge_vertex_tanner_bound(d, mu, alpha);
                if margin.is_nan() || margin <= 0.0 {
                    bad += 1;
                }
                min_margin = min_margin.min(margin);
            }
        }
    }
    // ray d = 5, μ = 2, α → 1
    let ray: Vec<f64> = (0..=200)
        .map(|t| {
            let alpha = 0.5 + 0.4999 * t as f64 / 200.0;
            bounds::improved_bound(5.0, 2.0, alpha).value - bounds::edge_vertex_tanner_bound(5.0, 2.0, alpha)
        })
        .collect();
    let monotone = ray.windows(2).all(|w| w[1] < w[0]);
    let last = *ray.last().unwrap();
    let at_one = bounds::improved_bound(5.0, 2.0, 1.0).value - bounds::edge_vertex_tanner_bound(5.0, 2.0, 1.0);
    let pass = bad == 0 && monotone && last > 0.0 && at_one.abs() < 1e-12;
    outcome(
        pass,
        format!(
            "125000 grid points, {bad} without positive margin, min margin {min_margin:.3e}; ray margin decreasing {monotone}, {last:.3e} at alpha 0.9999, {at_one:.1e} at alpha 1"
        ),
    )
}

fn c3_oracle_vs_bounds() -> Outcome {
    let alphas = [Q::new(1, 4), Q::new(1, 3), Q::new(1, 2)];
    let graphs = corpus::full();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    let mut expansion_checks = 0;
    let mut subsets = 0u64;
    for cg in &graphs {
        let g = &cg.graph;
        let gs = spectral::graph_spectrum(g, DEFAULT_TOL).unwrap();
        let d = gs.degree as f64;
        let h = BipartiteGraph::edge_vertex(g).unwrap();
        if h.n_in() > MAX_EXPANSION_INPUTS {
            skipped.push(format!("{} (n_in {})", cg.name, h.n_in()));
        } else {
            let profile = oracle::ExpansionProfile::of_bipartite(&h).unwrap();
            for &alpha in &alphas {
                if (alpha * Q::from_integer(h.n_in() as i64)).to_integer() == 0 {
                    continue;
                }
                let w = profile.expansion(alpha).unwrap();
                let bound = bounds::improved_bound(d, gs.mu(), ratio_to_f64(alpha)).value;
                expansion_checks += 1;
                if ratio_to_f64(w.ratio) < bound - 1e-9 {
                    failures.push(format!("{} alpha {alpha}: {} < {bound}", cg.name, w.ratio));
                }
            }
        }
        let ac = oracle::verify_alon_chung(g, &gs, &cg.name).unwrap();
        let nb = oracle::verify_nbhd_and_boundary(g, &gs, &cg.name).unwrap();
        subsets += ac.checked;
        for r in [&ac, &nb] {
            if !r.passed() {
                failures.push(format!("{}: {} violations", r.instance, r.violation_count));
            }
        }
    }
    let mut detail = format!(
        "{} graphs, {expansion_checks} expansion comparisons, {subsets} subsets per lemma family, {} failures",
        graphs.len(),
        failures.len()
    );
    if !skipped.is_empty() {
        detail += &format!("; exact expansion skipped above the {MAX_EXPANSION_INPUTS}-input cap: {}", skipped.join(", "));
    }
    if !failures.is_empty() {
        detail += &format!(" [{}]", failures.join("; "));
    }
    outcome(failures.is_empty(), detail)
}

fn c4_tightness() -> Outcome {
    let g = Graph::complete(4).unwrap();
    let gs = spectral::graph_spectrum(&g, DEFAULT_TOL).unwrap();
    let nb = oracle::verify_nbhd_and_boundary(&g, &gs, "K4").unwrap();
    let ac = oracle::verify_alon_chung(&g, &gs, "K4").unwrap();
    let pairs: Vec<u64> = (0u64..16).filter(|s| s.count_ones() == 2).collect();
    let nb_tight: Vec<u64> =
        nb.tight_for("nbhd_sum").filter(|w| w.size == 2 && w.value == 10.0).map(|w| w.subset).collect();
    let ac_tight: Vec<u64> = ac.tight_for("alon_chung").filter(|w| w.size == 2).map(|w| w.subset).collect();
    let masks = g.neighbor_masks().unwrap();
    let sums_are_ten = pairs.iter().all(|&s| oracle::nbhd_square_sum(&masks, s) == 10);
    let pass = gs.certified.is_some()
        && nb.exact
        && ac.exact
        && nb.passed()
        && ac.passed()
        && sums_are_ten
        && nb_tight == pairs
        && ac_tight == pairs
        && ac.min_slack["alon_chung"] == 0.0;
    outcome(
        pass,
        format!(
            "K4 exact arithmetic {}; pairs tight in sum lemma {}/6 (value 10), in Alon-Chung at gamma 1/2 {}/6, min slack {}",
            nb.exact && ac.exact,
            nb_tight.len(),
            ac_tight.len(),
            ac.min_slack["alon_chung"]
        ),
    )
}

fn c5_sipser_spielman() -> Outcome {
    let gf2 = Field::new(2, 1).unwrap();
    let (_, k4) = codes::sipser_spielman_report(&Graph::complete(4).unwrap(), &codes::repetition(3, &gf2).unwrap()).unwrap();
    let k4_ok = k4.k == 1
        && k4.distance == Some(6)
        && k4.bound_exact == Some(Q::from_integer(1))
        && k4.tight == Some(true);
    let (_, k8) = codes::sipser_spielman_report(&Graph::complete(8).unwrap(), &codes::hamming74()).unwrap();
    let bound_distance = k8.bound_exact.map(|b| (b * Q::from_integer(k8.n as i64)).ceil().to_integer());
    let k8_ok = k8.k >= 4
        && k8.bound_exact == Some(Q::new(1, 7))
        && bound_distance == Some(4)
        && k8.distance.is_some_and(|x| x >= 4)
        && k8.meets_bound == Some(true);
    outcome(
        k4_ok && k8_ok,
        format!(
            "K4/rep3: n={} k={} dist={:?} bound {} tight {:?}; K8/hamming74: n={} k={} dist={:?} bound {} (distance >= {:?})",
            k4.n,
            k4.k,
            k4.distance,
            show(k4.bound_exact),
            k4.tight,
            k8.n,
            k8.k,
            k8.distance,
            show(k8.bound_exact),
            bound_distance
        ),
    )
}

fn c6_alon_code() -> Outcome {
    let gf2 = Field::new(2, 1).unwrap();
    let k4 = Graph::complete(4).unwrap();
    let rep = codes::expander_map_distance(&k4, &codes::repetition(4, &gf2).unwrap()).unwrap();
    let par = codes::expander_map_distance(&k4, &codes::parity(4, &gf2).unwrap()).unwrap();
    let rep_ok = rep.distance == 4 && rep.bound_exact == Some(Q::from_integer(4)) && rep.tight;
    let par_ok = par.distance == 4 && par.bound_exact == Some(Q::new(18, 5)) && par.meets_bound;
    let strict = matches!((par.bound_exact, par.alon_original_exact), (Some(a), Some(b)) if a > b);
    outcome(
        rep_ok && par_ok && strict,
        format!(
            "rep4: dist {} bound {} tight {}; parity4: dist {} bound {}, above Alon's {}: {strict}",
            rep.distance,
            show(rep.bound_exact),
            rep.tight,
            par.distance,
            show(par.bound_exact),
            show(par.alon_original_exact)
        ),
    )
}

fn c7_factor_three() -> Outcome {
    let rows: Vec<_> = (2..=10).map(bounds::family_row).collect();
    let factors: Vec<f64> = rows.iter().filter_map(|r| r.improvement_factor).collect();
    let all_finite = rows.iter().all(|r| !r.hypothesis_holds || r.improvement_factor.is_some_and(f64::is_finite));
    let decreasing = factors.windows(2).all(|w| w[1] < w[0]) && factors.iter().all(|&f| f > 3.0);
    let envelope = rows
        .iter()
        .filter(|r| r.m >= 8)
        .all(|r| r.improvement_factor.is_some_and(|f| (3.0..=3.1).contains(&f)));
    let shown: Vec<String> = rows
        .iter()
        .map(|r| format!("m{}={}", r.m, r.improvement_factor.map_or("n/a".into(), |f| format!("{f:.4}"))))
        .collect();
    outcome(
        all_finite && decreasing && envelope && factors.len() == rows.len(),
        format!("factors {}; decreasing toward 3 {decreasing}; m=8..10 in [3.0, 3.1] {envelope}", shown.join(" ")),
    )
}

fn c8_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for m in 2..=10 {
        let (d, mu, eps) = bounds::family_params(m);
        if let Ok(s) = bounds::ss_distance_and_rate(d, mu, eps, 0.5) {
            let rel = (s.relative_distance - s.ss_original * s.improvement_factor).abs() / s.relative_distance.abs();
            worst = worst.max(rel);
            count += 1;
        }
    }
    outcome(count == 9 && worst < 1e-12, format!("{count} sweep points, worst relative error {worst:.2e}"))
}

fn all_messages(code: &LinearCode) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let q = code.field().order();
    let k = code.k();
    (0..q.pow(k as u32)).map(move |mut idx| {
        (0..k)
            .map(|_| {
                let x = (idx % q) as Elem;
                idx /= q;
                x
            })
            .collect()
    })
}

fn c9_weight_identity() -> Outcome {
    let mut pairs = 0;
    let mut words = 0u64;
    let mut mismatches = 0u64;
    let mut internal = Vec::new();
    for cg in corpus::full() {
        let g = &cg.graph;
        let map = ExpanderMap::new(g).unwrap();
        for (name, code) in corpus::source_codes(g.n()) {
            pairs += 1;
            for msg in all_messages(&code) {
                let u = code.encode(&msg).unwrap();
                let outer = map.apply(code.field(), &u).unwrap();
                let weight = outer.iter().filter(|s| !s.is_zero()).count();
                let supp: Vec<usize> = (0..u.len()).filter(|&i| u[i] != 0).collect();
                let boundary = g.boundary(&supp).unwrap().len();
                words += 1;
                mismatches += (weight != boundary) as u64;
            }
            if let Err(e) = codes::expander_map_distance(g, &code) {
                internal.push(format!("{}/{name}: {e}", cg.name));
            }
        }
    }
    let mut detail = format!("{pairs} (G, C) pairs, {words} codewords, {mismatches} mismatches");
    if !internal.is_empty() {
        detail += &format!(" [{}]", internal.join("; "));
    }
    outcome(pairs > 0 && mismatches == 0 && internal.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("edge-vertex spectrum", Duration::from_secs(5), c1_edge_vertex_spectrum),
        ("improved-bound dominance", Duration::from_secs(1), c2_improved_dominance),
        ("oracle vs bounds on corpus", Duration::from_secs(120), c3_oracle_vs_bounds),
        ("K4 tightness witnesses", Duration::from_secs(60), c4_tightness),
        ("Sipser-Spielman codes", Duration::from_secs(30), c5_sipser_spielman),
        ("expander-map codes on K4", Duration::from_secs(60), c6_alon_code),
        ("factor-3 family sweep", Duration::from_secs(1), c7_factor_three),
        ("distance identity", Duration::from_secs(60), c8_identity),
        ("expander-map weight identity", Duration::from_secs(120), c9_weight_identity),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = out.pass && in_time;
        failed += !pass as usize;
        let timing = if in_time { String::new() } else { format!(" over budget {budget:?}") };
        println!(
            "criterion {}: {} {name}: {} ({:.2}s{timing})",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
