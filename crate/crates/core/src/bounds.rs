//! Closed-form bound evaluators and structural-lemma verifiers.
//!
//! Graph-measured quantities stay exact rational; bound sides involving
//! logarithms are evaluated in double precision and compared with a fixed
//! `1e-9` slack. A row that passes only thanks to the slack is flagged as a
//! near miss rather than silently accepted.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::construct;
use crate::cost::{agent_cost, poa, social_cost, GameParams};
use crate::error::Error;
use crate::graph::Graph;
use crate::scalar::{scalar_u, to_f64, Scalar};
use crate::stability::{check_stability, SearchLimits};
use crate::tree::{is_tree, median_root, subtree_medians, tree_view};

/// Slack for inequalities with a floating-point side.
pub const FLOAT_SLACK: f64 = 1e-9;

/// Identifiers of the closed-form bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    PoaNodeBound,
    SocialCostNodeBound,
    TrivialPoa,
    SwapPoaUpper,
    BgePoaLower,
    StarPoaLower,
    BneLowerI,
    BneLowerIi,
    BneSmallAlphaUpper,
    ThreeBseUpper,
    WorstNodeBound,
    DaryCostBound,
    BseLargeAlpha,
    BseSmallAlpha,
    BseGeneral,
    ReachabilityLimit,
}

/// A bound value: exact where the formula is rational, double precision
/// where it involves logarithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundValue {
    Exact(#[serde(with = "crate::scalar::serde_string")] Scalar),
    Approx(f64),
}

impl BoundValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(v) => to_f64(v),
            BoundValue::Approx(v) => *v,
        }
    }
}

/// Parameter bag for [`evaluate_bound`]; each bound reads the fields its
/// formula mentions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    /// Total distance cost of a distinguished node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<u64>,
    /// Total cost of a distinguished node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Scalar>,
    /// Arity of the d-ary tree bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<u64>,
    /// Stretch factor k.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stretch: Option<u64>,
    /// Subtree size target t.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtree_target: Option<Scalar>,
    /// Per-agent cost budget p of the reachability proposition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Scalar>,
}

fn need<T: Clone>(v: &Option<T>, name: &str) -> Result<T, Error> {
    v.clone().ok_or_else(|| Error::InvalidParameter(format!("bound needs parameter {name}")))
}

fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Evaluates one closed-form bound.
pub fn evaluate_bound(id: BoundId, params: &BoundParams) -> Result<BoundValue, Error> {
    let exact = |v: Scalar| Ok(BoundValue::Exact(v));
    let approx = |v: f64| Ok(BoundValue::Approx(v));
    match id {
        BoundId::PoaNodeBound => {
            let alpha = need(&params.alpha, "alpha")?;
            let n = need(&params.n, "n")?;
            let dist = need(&params.dist, "dist")?;
            exact((alpha.clone() + scalar_u(dist)) / (alpha + scalar_u(n - 1)))
        }
        BoundId::SocialCostNodeBound => {
            let alpha = need(&params.alpha, "alpha")?;
            let n = need(&params.n, "n")?;
            let dist = need(&params.dist, "dist")?;
            exact(scalar_u(2) * scalar_u(n - 1) * (alpha + scalar_u(dist)))
        }
        BoundId::TrivialPoa => {
            let alpha = need(&params.alpha, "alpha")?;
            let n = need(&params.n, "n")?;
            exact(Scalar::one() + scalar_u(n * n) / alpha)
        }
        BoundId::SwapPoaUpper => {
            let alpha = need(&params.alpha, "alpha")?;
            approx(2.0 + 2.0 * log2(to_f64(&alpha)))
        }
        BoundId::BgePoaLower => {
            let alpha = need(&params.alpha, "alpha")?;
            approx(0.25 * log2(to_f64(&alpha)) - 17.0 / 8.0)
        }
        BoundId::StarPoaLower => {
            let alpha = need(&params.alpha, "alpha")?;
            let n = need(&params.n, "n")? as f64;
            let k = need(&params.stretch, "stretch")? as f64;
            let t = to_f64(&need(&params.subtree_target, "subtree_target")?);
            approx(n * k * (log2(t / k) - 4.5) / (2.0 * (to_f64(&alpha) + n - 1.0)))
        }
        BoundId::BneLowerI => {
            let alpha = need(&params.alpha, "alpha")?;
            let eps = to_f64(&need(&params.eps, "eps")?);
            approx(eps / 168.0 * log2(to_f64(&alpha)) - 3.0 / 28.0)
        }
        BoundId::BneLowerIi => {
            let alpha = need(&params.alpha, "alpha")?;
            let eps = to_f64(&need(&params.eps, "eps")?);
            approx(0.25 * eps * log2(to_f64(&alpha)) - 9.0 / 8.0)
        }
        BoundId::BneSmallAlphaUpper => exact(scalar_u(4)),
        BoundId::ThreeBseUpper => exact(scalar_u(25)),
        BoundId::WorstNodeBound => {
            let cost = need(&params.cost, "cost")?;
            let alpha = need(&params.alpha, "alpha")?;
            let n = need(&params.n, "n")?;
            exact(cost / (alpha + scalar_u(n - 1)))
        }
        BoundId::DaryCostBound => {
            let alpha = need(&params.alpha, "alpha")?;
            let n = need(&params.n, "n")?;
            let d = need(&params.arity, "arity")?;
            if d < 2 {
                return Err(Error::InvalidParameter("arity must be at least 2".into()));
            }
            let logs = 2.0 * (n as f64 - 1.0) * log2(n as f64) / log2(d as f64);
            approx((d as f64 + 1.0) * to_f64(&alpha) + logs)
        }
        BoundId::BseLargeAlpha => exact(scalar_u(5)),
        BoundId::BseSmallAlpha => {
            let eps = need(&params.eps, "eps")?;
            if !eps.is_positive() {
                return Err(Error::InvalidParameter("eps must be positive".into()));
            }
            exact(scalar_u(3) + scalar_u(2) / eps)
        }
        BoundId::BseGeneral => {
            let n = need(&params.n, "n")?;
            if n <= 4 {
                return Err(Error::InvalidParameter(
                    "log log log n is not positive for n <= 4".into(),
                ));
            }
            let lln = log2(log2(n as f64));
            let llln = log2(lln);
            approx(2.0 + lln + 2.0 * log2(n as f64) / llln)
        }
        BoundId::ReachabilityLimit => {
            let p = need(&params.budget, "budget")?;
            reachability_limit(&p).map(BoundValue::Exact)
        }
    }
}

/// Smallest scale at which no graph can keep every agent's cost within
/// `p * (alpha + n - 1)` at `alpha = n`: with `K = sum_{i=0}^{ceil(4p)}
/// (2p)^i`, the first `n` with `n/2 > K`. Non-integral `4p` is rounded up.
pub fn reachability_limit(p: &Scalar) -> Result<Scalar, Error> {
    if *p < Scalar::new(1.into(), 2.into()) {
        return Err(Error::InvalidParameter("budget must be at least 1/2".into()));
    }
    let exponent_rational = (scalar_u(4) * p.clone()).ceil();
    let exponent = exponent_rational
        .to_integer()
        .to_u64()
        .filter(|&e| e <= 256)
        .ok_or_else(|| Error::InvalidParameter("budget too large".into()))?;
    let base = scalar_u(2) * p.clone();
    let mut total = Scalar::zero();
    let mut power = Scalar::one();
    for _ in 0..=exponent {
        total += power.clone();
        power *= base.clone();
    }
    // Smallest integer n with n > 2 * total.
    let doubled = scalar_u(2) * total;
    Ok(Scalar::from_integer(doubled.floor().to_integer() + 1))
}

/// One checked inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub subject: String,
    pub lhs: BoundValue,
    pub rhs: BoundValue,
    pub holds: bool,
    /// Passed only thanks to the float slack.
    pub near_miss: bool,
    /// `rhs - lhs` in double precision.
    pub slack: f64,
}

/// Per-graph verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub fingerprint: String,
    pub rows: Vec<LemmaRow>,
    pub all_hold: bool,
    pub worst_slack: f64,
}

impl LemmaReport {
    fn new(lemma: &str, fingerprint: String, rows: Vec<LemmaRow>) -> Self {
        let all_hold = rows.iter().all(|r| r.holds);
        let worst_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
        LemmaReport { lemma: lemma.into(), fingerprint, rows, all_hold, worst_slack }
    }
}

fn row_le(subject: String, lhs: BoundValue, rhs: BoundValue) -> LemmaRow {
    let (holds, near_miss) = match (&lhs, &rhs) {
        (BoundValue::Exact(a), BoundValue::Exact(b)) => (a <= b, false),
        _ => {
            let (a, b) = (lhs.as_f64(), rhs.as_f64());
            let holds = a <= b + FLOAT_SLACK;
            (holds, holds && a > b)
        }
    };
    let slack = rhs.as_f64() - lhs.as_f64();
    LemmaRow { subject, lhs, rhs, holds, near_miss, slack }
}

fn require_stable(
    concept: Concept,
    g: &Graph,
    params: &GameParams,
    limits: &SearchLimits,
) -> Result<(), Error> {
    let report = check_stability(concept, g, params, limits)?;
    if report.budget_exhausted {
        return Err(Error::SearchBudgetExceeded { examined: report.moves_examined });
    }
    if !report.stable {
        return Err(Error::PreconditionFailed(format!("graph is not {concept}-stable")));
    }
    Ok(())
}

fn require_alpha_at_least_one(params: &GameParams) -> Result<(), Error> {
    if *params.alpha() < Scalar::one() {
        return Err(Error::PreconditionFailed("needs alpha >= 1".into()));
    }
    Ok(())
}

/// Node bounds on remove-stable connected graphs: for every node `u`,
/// `poa <= (alpha + Dist(u)) / (alpha + n - 1)` and
/// `social cost <= 2(n-1)(alpha + Dist(u))`. Exact.
pub fn verify_re_poa_bound(
    g: &Graph,
    params: &GameParams,
    limits: &SearchLimits,
) -> Result<LemmaReport, Error> {
    if g.n() < 2 {
        return Err(Error::TooFewNodes { min: 2, n: g.n() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    require_alpha_at_least_one(params)?;
    require_stable(Concept::Remove, g, params, limits)?;
    let n = g.n();
    let ratio = poa(g, params)?;
    let social = social_cost(g, params).finite;
    let mut rows = Vec::new();
    for u in 0..n {
        let (_, dist) = g.distance_totals(u)?;
        let poa_bound = (params.alpha().clone() + scalar_u(dist))
            / (params.alpha().clone() + scalar_u((n - 1) as u64));
        rows.push(row_le(
            format!("poa vs node {u}"),
            BoundValue::Exact(ratio.clone()),
            BoundValue::Exact(poa_bound),
        ));
        let cost_bound = scalar_u(2)
            * scalar_u((n - 1) as u64)
            * (params.alpha().clone() + scalar_u(dist));
        rows.push(row_le(
            format!("social cost vs node {u}"),
            BoundValue::Exact(social.clone()),
            BoundValue::Exact(cost_bound),
        ));
    }
    Ok(LemmaReport::new("re-node-bounds", g.fingerprint(), rows))
}

/// Swap-stable tree lemmas, rooted at the smallest-id 1-median: each
/// subtree has a near-by median (`layer gap <= 2 alpha / n`), subtree depth
/// is at most `(1 + 2 alpha / n) log2 |T_u|`, subtrees at layer >= 2 hold at
/// most `alpha / (layer - 1)` nodes, and the price of anarchy is at most
/// `2 + 2 log2 alpha`.
pub fn verify_swap_tree_lemmas(
    g: &Graph,
    params: &GameParams,
    limits: &SearchLimits,
) -> Result<LemmaReport, Error> {
    if !is_tree(g) || g.n() < 2 {
        return Err(Error::NotATree);
    }
    require_alpha_at_least_one(params)?;
    require_stable(Concept::BilateralSwap, g, params, limits)?;
    let n = g.n();
    let view = tree_view(g, median_root(g)?)?;
    let two_alpha_over_n = scalar_u(2) * params.alpha().clone() / scalar_u(n as u64);
    let mut rows = Vec::new();
    for u in 0..n {
        // The subtree median closest to u.
        let gap = subtree_medians(g, &view, u)
            .into_iter()
            .map(|v| view.layer[v] - view.layer[u])
            .min()
            .expect("subtree nonempty");
        rows.push(row_le(
            format!("median layer gap at {u}"),
            BoundValue::Exact(scalar_u(gap as u64)),
            BoundValue::Exact(two_alpha_over_n.clone()),
        ));
        let size = view.subtree_size[u];
        let depth_bound =
            (1.0 + to_f64(&two_alpha_over_n)) * log2(size as f64);
        rows.push(row_le(
            format!("subtree depth at {u}"),
            BoundValue::Exact(scalar_u(view.subtree_depth(u) as u64)),
            BoundValue::Approx(depth_bound),
        ));
        if view.layer[u] >= 2 {
            let cardinality_bound =
                params.alpha().clone() / scalar_u((view.layer[u] - 1) as u64);
            rows.push(row_le(
                format!("subtree size at {u}"),
                BoundValue::Exact(scalar_u(size as u64)),
                BoundValue::Exact(cardinality_bound),
            ));
        }
    }
    let ratio = poa(g, params)?;
    rows.push(row_le(
        "poa".into(),
        BoundValue::Exact(ratio),
        evaluate_bound(
            BoundId::SwapPoaUpper,
            &BoundParams { alpha: Some(params.alpha().clone()), ..Default::default() },
        )?,
    ));
    Ok(LemmaReport::new("swap-tree-lemmas", g.fingerprint(), rows))
}

/// Three-strong tree lemmas, rooted at the smallest-id 1-median: every node
/// has at most one child whose subtree is deeper than `2 ceil(4 alpha / n)
/// + 1`, and the price of anarchy is at most 25. Exact.
pub fn verify_three_bse_lemmas(
    g: &Graph,
    params: &GameParams,
    limits: &SearchLimits,
) -> Result<LemmaReport, Error> {
    if !is_tree(g) || g.n() < 2 {
        return Err(Error::NotATree);
    }
    require_alpha_at_least_one(params)?;
    require_stable(Concept::KStrong(3), g, params, limits)?;
    let n = g.n();
    let view = tree_view(g, median_root(g)?)?;
    let ceil_term = (scalar_u(4) * params.alpha().clone() / scalar_u(n as u64)).ceil().to_integer();
    // Depths never exceed n, so the threshold saturates harmlessly for
    // huge prices.
    let threshold = ceil_term
        .to_u64()
        .map(|c| (2 * c.min(n as u64) + 1) as usize)
        .unwrap_or(2 * n + 1);
    let mut rows = Vec::new();
    for u in 0..n {
        let deep_children = view.children[u]
            .iter()
            .filter(|&&c| view.subtree_depth(c) > threshold)
            .count();
        rows.push(row_le(
            format!("deep children of {u}"),
            BoundValue::Exact(scalar_u(deep_children as u64)),
            BoundValue::Exact(Scalar::one()),
        ));
    }
    rows.push(row_le(
        "poa".into(),
        BoundValue::Exact(poa(g, params)?),
        BoundValue::Exact(scalar_u(25)),
    ));
    Ok(LemmaReport::new("three-bse-lemmas", g.fingerprint(), rows))
}

/// Almost complete d-ary trees keep every agent under
/// `(d+1) alpha + 2(n-1) log_d n`.
pub fn verify_dary_cost_bound(
    arity: usize,
    n: usize,
    params: &GameParams,
) -> Result<LemmaReport, Error> {
    let built = construct::construct(&construct::ConstructionSpec::dary(
        construct::Family::AlmostCompleteDary,
        arity,
        Some(n),
        None,
    ))?;
    let worst = (0..n)
        .map(|u| agent_cost(&built.graph, params, u).expect("node in range").finite)
        .max()
        .expect("nonempty");
    let bound = evaluate_bound(
        BoundId::DaryCostBound,
        &BoundParams {
            alpha: Some(params.alpha().clone()),
            n: Some(n as u64),
            arity: Some(arity as u64),
            ..Default::default()
        },
    )?;
    let rows = alloc::vec![row_le(
        format!("worst agent cost, d={arity} n={n}"),
        BoundValue::Exact(worst),
        bound,
    )];
    Ok(LemmaReport::new("dary-cost-bound", built.graph.fingerprint(), rows))
}

/// The stretched-tree-star formula never exceeds the measured social cost
/// ratio of the constructed graph (it is a lower bound).
pub fn verify_star_poa_lower(
    stretch: usize,
    subtree_target: &Scalar,
    target_size: usize,
    params: &GameParams,
) -> Result<LemmaReport, Error> {
    require_alpha_at_least_one(params)?;
    let built = construct::build_stretched_tree_star(stretch, subtree_target, target_size)?;
    let measured = poa(&built.graph, params)?;
    let formula = evaluate_bound(
        BoundId::StarPoaLower,
        &BoundParams {
            alpha: Some(params.alpha().clone()),
            n: Some(built.meta.n as u64),
            stretch: Some(stretch as u64),
            subtree_target: Some(subtree_target.clone()),
            ..Default::default()
        },
    )?;
    let rows = alloc::vec![row_le(
        format!("formula vs measured poa, k={stretch} t={subtree_target} eta={target_size}"),
        formula,
        BoundValue::Exact(measured),
    )];
    Ok(LemmaReport::new("star-poa-lower", built.graph.fingerprint(), rows))
}
