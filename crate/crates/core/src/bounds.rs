//! Closed-form expansion and distance bounds, and the report that evaluates
//! all of them at one parameter point.
//!
//! Everything here works in `f64`. The [`exact`] submodule repeats the bounds
//! that are rational functions of `μ²` in exact arithmetic, for comparisons at
//! tight instances.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("hypothesis dε > μ violated (dε = {d_eps}, μ = {mu})")]
    HypothesisViolated { d_eps: f64, mu: f64 },
    #[error("invalid fraction {0:?}")]
    BadFraction(String),
}

/// Relative slack used when a bound is compared against an equal bound.
const REL_EPS: f64 = 1e-12;

fn ge_rel(a: f64, b: f64) -> bool {
    a >= b - REL_EPS * a.abs().max(b.abs()).max(1.0)
}

/// Parses `"p/q"`, an integer, or a finite decimal into an exact fraction.
pub fn parse_fraction(s: &str) -> Result<Ratio<i64>, BoundsError> {
    let bad = || BoundsError::BadFraction(s.to_string());
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int.abs() * den + frac;
        return Ok(Ratio::new(if negative { -magnitude } else { magnitude }, den));
    }
    s.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad())
}

pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Tanner's bound for a `(c, d)`-regular bipartite graph with second
/// eigenvalue `mu`: `c² / [αcd + μ²(1 − α)]`.
pub fn tanner_bound(c: f64, d: f64, mu: f64, alpha: f64) -> Result<f64, BoundsError> {
    let denom = alpha * c * d + mu * mu * (1.0 - alpha);
    if !(denom > 0.0) {
        return Err(BoundsError::DegenerateParams(format!("Tanner denominator {denom} <= 0")));
    }
    Ok(c * c / denom)
}

/// Tanner's bound specialised to the edge-vertex graph of a `d`-regular graph:
/// `4 / [α(d − μ) + (d + μ)]`.
pub fn edge_vertex_tanner_bound(d: f64, mu: f64, alpha: f64) -> f64 {
    4.0 / (alpha * (d - mu) + (d + mu))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImprovedBound {
    pub value: f64,
    /// Root in `[0, 1]` of `(d − μ)γ² + μγ − αd = 0`.
    pub gamma: f64,
}

/// The improved edge-vertex expansion bound `4 / (μ + √(μ² + 4α(d − μ)d))`.
pub fn improved_bound(d: f64, mu: f64, alpha: f64) -> ImprovedBound {
    let disc = (mu * mu + 4.0 * alpha * (d - mu) * d).max(0.0).sqrt();
    let value = 4.0 / (mu + disc);
    let gamma = if d - mu > 0.0 { (disc - mu) / (2.0 * (d - mu)) } else { alpha * d / mu };
    ImprovedBound { value, gamma }
}

/// `α₀ = ε(dε − μ)/(d − μ)` and the guaranteed expansion `2/(dε)` there.
pub fn alpha0_and_expansion(d: f64, mu: f64, epsilon: f64) -> Result<(f64, f64), BoundsError> {
    if !(d * epsilon > mu) {
        return Err(BoundsError::HypothesisViolated { d_eps: d * epsilon, mu });
    }
    let alpha0 = epsilon * (d * epsilon - mu) / (d - mu);
    let lower = 2.0 / (d * epsilon);
    debug_assert!(ge_rel(improved_bound(d, mu, alpha0).value, lower));
    Ok((alpha0, lower))
}

/// Intervals for the induced edge count `e(S)` with `|S| = γn`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlonChungBounds {
    /// `½dγ²n`.
    pub center: f64,
    /// `½μγ(1 − γ)n`.
    pub radius: f64,
    /// `½dγ²n + ½λ_{n−1}γ(1 − γ)n`.
    pub lower: f64,
    /// `½dγ²n + ½λ₁γ(1 − γ)n`.
    pub upper: f64,
}

pub fn alon_chung_bounds(d: f64, n: f64, gamma: f64, lambda1: f64, lambda_min: f64, mu: f64) -> AlonChungBounds {
    let center = 0.5 * d * gamma * gamma * n;
    let spread = 0.5 * gamma * (1.0 - gamma) * n;
    AlonChungBounds {
        center,
        radius: mu * spread,
        lower: center + lambda_min * spread,
        upper: center + lambda1 * spread,
    }
}

/// `½dn[γ² + (μ/d)γ(1 − γ)]`, the edge-count threshold inverted in the
/// improved expansion argument.
pub fn edge_threshold(d: f64, n: f64, mu: f64, gamma: f64) -> f64 {
    0.5 * d * n * (gamma * gamma + mu / d * gamma * (1.0 - gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SipserSpielmanBounds {
    /// `ε(dε − μ)/(d − μ)`.
    pub relative_distance: f64,
    /// `2r − 1`.
    pub rate_lb: f64,
    /// `[(dε − μ)/(d − μ)]²`.
    pub ss_original: f64,
    /// `1 + μ(1 − ε)/(dε − μ)`.
    pub improvement_factor: f64,
}

pub fn ss_distance_and_rate(d: f64, mu: f64, epsilon: f64, r: f64) -> Result<SipserSpielmanBounds, BoundsError> {
    if !(d * epsilon > mu) {
        return Err(BoundsError::HypothesisViolated { d_eps: d * epsilon, mu });
    }
    let gap = d * epsilon - mu;
    Ok(SipserSpielmanBounds {
        relative_distance: epsilon * gap / (d - mu),
        rate_lb: 2.0 * r - 1.0,
        ss_original: (gap / (d - mu)).powi(2),
        improvement_factor: 1.0 + mu * (1.0 - epsilon) / gap,
    })
}

/// `[α(d² − μ²) + μ²]|S|`, an upper bound on `Σ_v |S ∩ ∂v|²`.
pub fn nbhd_sum_bound(d: f64, mu: f64, alpha: f64, s_size: f64) -> f64 {
    (alpha * (d * d - mu * mu) + mu * mu) * s_size
}

/// Lower bound on `|∂S|` and upper bound on `|{v : S ∩ ∂v = ∅}|`.
pub fn boundary_bounds(d: f64, mu: f64, alpha: f64, s_size: f64, n: f64) -> (f64, f64) {
    let denom = alpha * (d * d - mu * mu) + mu * mu;
    (d * d * s_size / denom, mu * mu * (n - s_size) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpCodeBounds {
    /// `d²δ₀n / [δ₀(d² − μ²) + μ²]`.
    pub ours: f64,
    /// `dδ₀n / [δ₀d + 4(1 − δ₀)]`, i.e. `ours` with `μ²` replaced by `4d`.
    pub ramanujan_form: f64,
    /// `[δ₀d² − μ²(1 − δ₀)] / (δ₀d²) · n`.
    pub alon_original: f64,
}

pub fn exp_code_distance_bounds(d: f64, mu: f64, delta0: f64, n: f64) -> ExpCodeBounds {
    let (d2, m2) = (d * d, mu * mu);
    ExpCodeBounds {
        ours: d2 * delta0 * n / (delta0 * (d2 - m2) + m2),
        ramanujan_form: d * delta0 * n / (delta0 * d + 4.0 * (1.0 - delta0)),
        alon_original: (delta0 * d2 - m2 * (1.0 - delta0)) / (delta0 * d2) * n,
    }
}

/// Exact forms of the bounds that depend on `μ` only through `μ²`.
pub mod exact {
    use num_rational::Ratio;

    pub type Q = Ratio<i64>;

    fn q(x: i64) -> Q {
        Q::from_integer(x)
    }

    pub fn nbhd_sum_bound(d: i64, mu_sq: Q, alpha: Q, s_size: i64) -> Q {
        (alpha * (q(d * d) - mu_sq) + mu_sq) * q(s_size)
    }

    pub fn boundary_bounds(d: i64, mu_sq: Q, alpha: Q, s_size: i64, n: i64) -> (Q, Q) {
        let denom = alpha * (q(d * d) - mu_sq) + mu_sq;
        (q(d * d * s_size) / denom, mu_sq * q(n - s_size) / denom)
    }

    pub fn exp_code_distance(d: i64, mu_sq: Q, delta0: Q, n: i64) -> Q {
        q(d * d) * delta0 * q(n) / (delta0 * (q(d * d) - mu_sq) + mu_sq)
    }

    pub fn ramanujan_form(d: i64, delta0: Q, n: i64) -> Q {
        q(d) * delta0 * q(n) / (delta0 * q(d) + q(4) * (q(1) - delta0))
    }

    pub fn alon_original(d: i64, mu_sq: Q, delta0: Q, n: i64) -> Q {
        (delta0 * q(d * d) - mu_sq * (q(1) - delta0)) / (delta0 * q(d * d)) * q(n)
    }
}

/// One parameter point. `c` defaults to 2 (edge-vertex graphs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub d: f64,
    pub c: f64,
    pub mu: f64,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub n: Option<f64>,
    pub gamma: Option<f64>,
    pub delta0: Option<f64>,
    /// Inner-code rate.
    pub r: Option<f64>,
    pub lambda1: Option<f64>,
    pub lambda_min: Option<f64>,
}

impl ExpansionParams {
    pub fn new(d: f64, mu: f64) -> Self {
        Self {
            d,
            c: 2.0,
            mu,
            alpha: None,
            epsilon: None,
            n: None,
            gamma: None,
            delta0: None,
            r: None,
            lambda1: None,
            lambda_min: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundFlags {
    /// Improved bound strictly above the edge-vertex Tanner bound.
    pub improved_beats_edge_vertex_tanner: Option<bool>,
    /// Tanner with `μ(𝓗)² = d + μ` agrees with the edge-vertex form.
    pub tanner_matches_edge_vertex: Option<bool>,
    /// Improved bound at `α₀` is at least `2/(dε)`.
    pub c_alpha0_holds: Option<bool>,
    /// `ours = ss_original × improvement_factor`.
    pub ss_identity_holds: Option<bool>,
    pub refined_alon_chung_inside_symmetric: Option<bool>,
    pub ours_ge_alon_original: Option<bool>,
    /// `ramanujan_form ≤ ours`, reported when `μ² ≤ 4(d − 1)`.
    pub ramanujan_le_ours: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: ExpansionParams,
    pub tanner: Option<f64>,
    pub edge_vertex_tanner: Option<f64>,
    pub improved: Option<f64>,
    pub improved_gamma: Option<f64>,
    pub alpha0: Option<f64>,
    pub c_alpha0: Option<f64>,
    pub ss_distance: Option<f64>,
    pub ss_rate_lb: Option<f64>,
    pub ss_original: Option<f64>,
    pub improvement_factor: Option<f64>,
    pub alon_chung: Option<AlonChungBounds>,
    pub nbhd_sum: Option<f64>,
    pub boundary_lb: Option<f64>,
    pub complement_ub: Option<f64>,
    pub exp_code_distance: Option<f64>,
    pub ramanujan_distance: Option<f64>,
    pub alon_original: Option<f64>,
    pub flags: BoundFlags,
    pub degenerate: bool,
    pub degenerate_reasons: Vec<String>,
}

impl BoundReport {
    /// Evaluates every bound whose inputs are present in `params`.
    pub fn evaluate(params: &ExpansionParams) -> Self {
        let p = params;
        let (d, mu) = (p.d, p.mu);
        let mut reasons = Vec::new();
        if mu >= d {
            reasons.push("mu >= d".to_string());
        }
        let mut report = BoundReport {
            params: p.clone(),
            tanner: None,
            edge_vertex_tanner: None,
            improved: None,
            improved_gamma: None,
            alpha0: None,
            c_alpha0: None,
            ss_distance: None,
            ss_rate_lb: None,
            ss_original: None,
            improvement_factor: None,
            alon_chung: None,
            nbhd_sum: None,
            boundary_lb: None,
            complement_ub: None,
            exp_code_distance: None,
            ramanujan_distance: None,
            alon_original: None,
            flags: BoundFlags::default(),
            degenerate: false,
            degenerate_reasons: Vec::new(),
        };

        if let Some(alpha) = p.alpha {
            if alpha >= 1.0 {
                reasons.push("alpha >= 1".to_string());
            }
            let mu_h = (d + mu).sqrt();
            report.tanner = tanner_bound(p.c, d, mu_h, alpha).ok();
            let evt = edge_vertex_tanner_bound(d, mu, alpha);
            let imp = improved_bound(d, mu, alpha);
            report.edge_vertex_tanner = Some(evt);
            report.improved = Some(imp.value);
            report.improved_gamma = Some(imp.gamma);
            report.flags.improved_beats_edge_vertex_tanner = Some(imp.value > evt);
            if p.c == 2.0 {
                report.flags.tanner_matches_edge_vertex =
                    report.tanner.map(|t| (t - evt).abs() <= REL_EPS * evt.abs().max(1.0) * 16.0);
            }
            if let Some(n) = p.n {
                let s = alpha * n;
                report.nbhd_sum = Some(nbhd_sum_bound(d, mu, alpha, s));
                let (lb, ub) = boundary_bounds(d, mu, alpha, s, n);
                report.boundary_lb = Some(lb);
                report.complement_ub = Some(ub);
            }
        }

        if let Some(eps) = p.epsilon {
            match alpha0_and_expansion(d, mu, eps) {
                Ok((a0, lb)) => {
                    report.alpha0 = Some(a0);
                    report.c_alpha0 = Some(lb);
                    report.flags.c_alpha0_holds = Some(ge_rel(improved_bound(d, mu, a0).value, lb));
                    let ss = ss_distance_and_rate(d, mu, eps, p.r.unwrap_or(f64::NAN))
                        .expect("hypothesis already checked");
                    report.ss_distance = Some(ss.relative_distance);
                    report.ss_rate_lb = p.r.map(|_| ss.rate_lb);
                    report.ss_original = Some(ss.ss_original);
                    report.improvement_factor = Some(ss.improvement_factor);
                    let product = ss.ss_original * ss.improvement_factor;
                    report.flags.ss_identity_holds =
                        Some((product - ss.relative_distance).abs() <= 1e-12 * ss.relative_distance.abs());
                }
                Err(_) => reasons.push("d*epsilon <= mu".to_string()),
            }
        }

        if let (Some(gamma), Some(n)) = (p.gamma, p.n) {
            let l1 = p.lambda1.unwrap_or(mu);
            let lmin = p.lambda_min.unwrap_or(-mu);
            let ac = alon_chung_bounds(d, n, gamma, l1, lmin, mu);
            report.flags.refined_alon_chung_inside_symmetric = Some(
                ac.lower >= ac.center - ac.radius - 1e-9 && ac.upper <= ac.center + ac.radius + 1e-9,
            );
            report.alon_chung = Some(ac);
        }

        if let (Some(delta0), Some(n)) = (p.delta0, p.n) {
            let e = exp_code_distance_bounds(d, mu, delta0, n);
            report.exp_code_distance = Some(e.ours);
            report.ramanujan_distance = Some(e.ramanujan_form);
            report.alon_original = Some(e.alon_original);
            if e.alon_original >= 0.0 {
                report.flags.ours_ge_alon_original = Some(ge_rel(e.ours, e.alon_original));
            }
            if mu * mu <= 4.0 * (d - 1.0) {
                report.flags.ramanujan_le_ours = Some(e.ramanujan_form <= e.ours * (1.0 + REL_EPS));
            }
        }

        report.degenerate = !reasons.is_empty();
        report.degenerate_reasons = reasons;
        report
    }
}

/// Parameters of the `q = 2^{2m}` Ramanujan family: `d = q + 1`, `μ = 2^{m+1}`,
/// `ε = 3·2^m / (2^m + 1)²`.
pub fn family_params(m: u32) -> (f64, f64, f64) {
    let two_m = 2f64.powi(m as i32);
    let d = two_m * two_m + 1.0;
    let mu = 2.0 * two_m;
    let eps = 3.0 * two_m / ((two_m + 1.0) * (two_m + 1.0));
    (d, mu, eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub m: u32,
    pub d: f64,
    pub mu: f64,
    pub epsilon: f64,
    pub hypothesis_holds: bool,
    pub relative_distance: Option<f64>,
    pub ss_original: Option<f64>,
    pub improvement_factor: Option<f64>,
    pub c_alpha0: Option<f64>,
}

pub fn family_row(m: u32) -> FamilyRow {
    let (d, mu, epsilon) = family_params(m);
    let ss = ss_distance_and_rate(d, mu, epsilon, f64::NAN).ok();
    FamilyRow {
        m,
        d,
        mu,
        epsilon,
        hypothesis_holds: ss.is_some(),
        relative_distance: ss.map(|s| s.relative_distance),
        ss_original: ss.map(|s| s.ss_original),
        improvement_factor: ss.map(|s| s.improvement_factor),
        c_alpha0: ss.map(|_| 2.0 / (d * epsilon)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn tanner_examples() {
        assert!(close(tanner_bound(2.0, 3.0, 2.0, 1.0 / 3.0).unwrap(), 6.0 / 7.0));
        assert!(close(tanner_bound(3.0, 5.0, 1.5, 1.0).unwrap(), 3.0 / 5.0));
        assert!(tanner_bound(2.0, 3.0, 0.0, 0.0).is_err());
        for i in 1..50 {
            let a = i as f64 / 50.0;
            assert!(close(tanner_bound(2.0, 3.0, 2.0, a).unwrap(), edge_vertex_tanner_bound(3.0, 1.0, a)));
        }
    }

    #[test]
    fn edge_vertex_tanner_examples() {
        assert!(close(edge_vertex_tanner_bound(3.0, 1.0, 1.0 / 3.0), 6.0 / 7.0));
        assert!(close(edge_vertex_tanner_bound(5.0, 5.0, 0.3), 2.0 / 5.0));
        assert!(close(edge_vertex_tanner_bound(3.0, 1.0, 1.0), 2.0 / 3.0));
    }

    #[test]
    fn improved_examples() {
        let b = improved_bound(3.0, 1.0, 1.0 / 3.0);
        assert!(close(b.value, 1.0));
        // γ solves (d − μ)γ² + μγ − αd = 0: 2γ² + γ − 1 = 0 → γ = 1/2
        assert!(close(b.gamma, 0.5));
        assert!(close(improved_bound(4.0, 4.0, 0.2).value, 0.5));
        assert!(b.value > edge_vertex_tanner_bound(3.0, 1.0, 1.0 / 3.0));
    }

    #[test]
    fn alpha0_examples() {
        let (a0, lb) = alpha0_and_expansion(3.0, 1.0, 1.0).unwrap();
        assert!(close(a0, 1.0) && close(lb, 2.0 / 3.0));
        let (a0, lb) = alpha0_and_expansion(7.0, 1.0, 3.0 / 7.0).unwrap();
        assert!(close(a0, 1.0 / 7.0) && close(lb, 2.0 / 3.0));
        assert!(matches!(
            alpha0_and_expansion(3.0, 2.0, 0.5),
            Err(BoundsError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn alon_chung_examples() {
        // K4 at γ = 1/2: symmetric interval [1, 2], refined interval [1, 1].
        let b = alon_chung_bounds(3.0, 4.0, 0.5, -1.0, -1.0, 1.0);
        assert!(close(b.center, 1.5) && close(b.radius, 0.5));
        assert!(close(b.lower, 1.0) && close(b.upper, 1.0));
        let b = alon_chung_bounds(3.0, 4.0, 0.0, -1.0, -1.0, 1.0);
        assert_eq!((b.center, b.radius, b.lower, b.upper), (0.0, 0.0, 0.0, 0.0));
        let b = alon_chung_bounds(3.0, 4.0, 1.0, -1.0, -1.0, 1.0);
        assert!(close(b.center, 6.0) && b.radius == 0.0);
    }

    #[test]
    fn ss_examples() {
        let s = ss_distance_and_rate(7.0, 1.0, 3.0 / 7.0, 4.0 / 7.0).unwrap();
        assert!(close(s.relative_distance, 1.0 / 7.0));
        assert!(close(s.ss_original, 1.0 / 9.0));
        assert!(close(s.improvement_factor, 9.0 / 7.0));
        assert!(close(s.rate_lb, 1.0 / 7.0));
        let s = ss_distance_and_rate(3.0, 1.0, 1.0, 1.0 / 3.0).unwrap();
        assert!(close(s.relative_distance, 1.0) && close(s.ss_original, 1.0) && close(s.improvement_factor, 1.0));
        let row = family_row(8);
        assert!((row.improvement_factor.unwrap() - 3.0238).abs() < 1e-3);
        assert!(!family_row(1).hypothesis_holds);
    }

    #[test]
    fn nbhd_and_boundary_examples() {
        assert!(close(nbhd_sum_bound(3.0, 1.0, 0.5, 2.0), 10.0));
        assert!(close(nbhd_sum_bound(3.0, 1.0, 1.0, 4.0), 36.0));
        assert!(close(nbhd_sum_bound(3.0, 3.0, 0.25, 1.0), 9.0));
        let (lb, ub) = boundary_bounds(3.0, 1.0, 0.5, 2.0, 4.0);
        assert!(close(lb, 3.6) && close(ub, 0.4));
        let (lb, _) = boundary_bounds(3.0, 1.0, 1.0, 4.0, 4.0);
        assert!(close(lb, 4.0));
        let (lb, _) = boundary_bounds(3.0, 0.0, 0.25, 2.0, 8.0);
        assert!(close(lb, 8.0));
    }

    #[test]
    fn exp_code_examples() {
        let e = exp_code_distance_bounds(3.0, 1.0, 1.0, 4.0);
        assert!(close(e.ours, 4.0) && close(e.alon_original, 4.0) && close(e.ramanujan_form, 4.0));
        let e = exp_code_distance_bounds(3.0, 1.0, 0.5, 4.0);
        assert!(close(e.ours, 3.6));
        assert!(close(e.alon_original, 32.0 / 9.0));
        assert!(e.ours > e.alon_original);
        use exact::Q;
        let ours = exact::exp_code_distance(3, Q::from_integer(1), Q::new(1, 2), 4);
        let alon = exact::alon_original(3, Q::from_integer(1), Q::new(1, 2), 4);
        assert_eq!(ours, Q::new(18, 5));
        assert_eq!(alon, Q::new(32, 9));
        assert_eq!(exact::ramanujan_form(3, Q::from_integer(1), 4), Q::from_integer(4));
        assert_eq!(exact::nbhd_sum_bound(3, Q::from_integer(1), Q::new(1, 2), 2), Q::from_integer(10));
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/3").unwrap(), Ratio::new(1, 3));
        assert_eq!(parse_fraction(" 2 ").unwrap(), Ratio::from_integer(2));
        assert_eq!(parse_fraction("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_fraction("-1.5").unwrap(), Ratio::new(-3, 2));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
        assert!(parse_fraction("1.").is_err());
    }

    #[test]
    fn report_flags() {
        let mut p = ExpansionParams::new(3.0, 1.0);
        p.alpha = Some(1.0 / 3.0);
        p.epsilon = Some(1.0);
        p.r = Some(1.0 / 3.0);
        p.n = Some(4.0);
        p.gamma = Some(0.5);
        p.delta0 = Some(0.5);
        let r = BoundReport::evaluate(&p);
        assert!(close(r.improved.unwrap(), 1.0));
        assert!(close(r.edge_vertex_tanner.unwrap(), 6.0 / 7.0));
        assert_eq!(r.flags.improved_beats_edge_vertex_tanner, Some(true));
        assert_eq!(r.flags.tanner_matches_edge_vertex, Some(true));
        assert_eq!(r.flags.c_alpha0_holds, Some(true));
        assert_eq!(r.flags.ss_identity_holds, Some(true));
        assert_eq!(r.flags.ours_ge_alon_original, Some(true));
        assert!(!r.degenerate);

        let mut p = ExpansionParams::new(3.0, 2.0);
        p.epsilon = Some(0.5);
        let r = BoundReport::evaluate(&p);
        assert!(r.degenerate);
        assert!(r.alpha0.is_none());
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("tanner").unwrap().is_null());
    }

    proptest! {
        #[test]
        fn improved_dominates_edge_vertex_tanner(d in 3.0f64..12.0, mu_frac in 0.01f64..0.99, alpha in 0.01f64..0.99) {
            let mu = mu_frac * d;
            prop_assert!(improved_bound(d, mu, alpha).value > edge_vertex_tanner_bound(d, mu, alpha));
        }

        #[test]
        fn improved_is_nonincreasing_in_alpha(d in 3.0f64..12.0, mu_frac in 0.0f64..1.0, a in 0.01f64..1.0, b in 0.01f64..1.0) {
            let mu = mu_frac * d;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(improved_bound(d, mu, lo).value >= improved_bound(d, mu, hi).value);
        }

        #[test]
        fn gamma_solves_quadratic(d in 3.0f64..12.0, mu_frac in 0.0f64..0.99, alpha in 0.01f64..1.0) {
            let mu = mu_frac * d;
            let g = improved_bound(d, mu, alpha).gamma;
            let residual = (d - mu) * g * g + mu * g - alpha * d;
            prop_assert!(residual.abs() < 1e-9 * d * d);
            prop_assert!(close(edge_threshold(d, 1.0, mu, g) * 2.0 / d, alpha));
        }

        #[test]
        fn edge_threshold_increases_in_gamma(d in 3.0f64..12.0, mu_frac in 0.0f64..1.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let mu = mu_frac * d;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(edge_threshold(d, 10.0, mu, lo) <= edge_threshold(d, 10.0, mu, hi) + 1e-12);
        }

        #[test]
        fn ss_identity(d in 3.0f64..200.0, mu_frac in 0.0f64..0.95, eps_extra in 0.01f64..1.0) {
            let mu = mu_frac * d;
            let eps_min = mu / d;
            let eps = eps_min + (1.0 - eps_min) * eps_extra;
            let s = ss_distance_and_rate(d, mu, eps, 0.5).unwrap();
            prop_assert!((s.ss_original * s.improvement_factor - s.relative_distance).abs() <= 1e-12 * s.relative_distance);
        }

        #[test]
        fn exp_code_monotone_in_delta0(d in 3.0f64..20.0, mu_frac in 0.0f64..1.0, a in 0.01f64..1.0, b in 0.01f64..1.0) {
            let mu = mu_frac * d;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(exp_code_distance_bounds(d, mu, lo, 10.0).ours <= exp_code_distance_bounds(d, mu, hi, 10.0).ours * (1.0 + 1e-12));
        }

        #[test]
        fn ramanujan_form_weakens(d in 3u32..40, mu_frac in 0.0f64..1.0, delta0 in 0.01f64..1.0) {
            let d = d as f64;
            let mu = mu_frac * 2.0 * (d - 1.0).sqrt();
            let e = exp_code_distance_bounds(d, mu, delta0, 10.0);
            prop_assert!(e.ramanujan_form <= e.ours * (1.0 + 1e-12));
            if e.alon_original >= 0.0 {
                prop_assert!(e.ours >= e.alon_original * (1.0 - 1e-12));
            }
        }
    }
}
