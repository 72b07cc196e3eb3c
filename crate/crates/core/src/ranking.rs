//! Ranks, Kendall's tau, and the comparison data behind ranking plots.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// Which end of a score range is "better" (more influential).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Lower scores rank first (YPC, eccentricity, farness).
    Ascending,
    /// Higher scores rank first.
    Descending,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Ascending => Orientation::Descending,
            Orientation::Descending => Orientation::Ascending,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Ascending => "ascending",
            Orientation::Descending => "descending",
        })
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ascending" | "asc" => Ok(Orientation::Ascending),
            "descending" | "desc" => Ok(Orientation::Descending),
            _ => Err(Error::param(
                "orientation",
                format!("expected `ascending` or `descending`, got `{s}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankVector {
    /// Most to least influential; tie groups listed by node id.
    pub order: Vec<NodeId>,
    /// 1-based rank, averaged within tie groups.
    pub rank_of: BTreeMap<NodeId, f64>,
    pub orientation: Orientation,
}

impl RankVector {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

pub fn rank_from_scores(scores: &BTreeMap<NodeId, f64>, better: Orientation) -> Result<RankVector> {
    if scores.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    if let Some((&node, &value)) = scores.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteScore { node, value });
    }
    let mut entries: Vec<(NodeId, f64)> = scores.iter().map(|(&k, &v)| (k, v)).collect();
    entries.sort_by(|a, b| {
        let by_score = match better {
            Orientation::Ascending => a.1.total_cmp(&b.1),
            Orientation::Descending => b.1.total_cmp(&a.1),
        };
        by_score.then(a.0.cmp(&b.0))
    });

    let mut rank_of = BTreeMap::new();
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && entries[end].1 == entries[start].1 {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let avg = (start + 1 + end) as f64 / 2.0;
        for &(node, _) in &entries[start..end] {
            rank_of.insert(node, avg);
        }
        start = end;
    }
    Ok(RankVector {
        order: entries.into_iter().map(|(k, _)| k).collect(),
        rank_of,
        orientation: better,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TauVariant {
    /// `(C - D) / (n(n-1)/2)`; tied pairs count as neither.
    #[default]
    A,
    /// Tie-corrected `(C - D) / sqrt((n0 - n1)(n0 - n2))`.
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankComparison {
    /// Coefficient for the requested variant.
    pub tau: f64,
    pub tau_a: f64,
    pub tau_b: f64,
    pub variant: TauVariant,
    pub p_value: f64,
    pub n: usize,
    pub concordant: u64,
    pub discordant: u64,
    /// Pairs tied in the first ranking.
    pub ties_a: u64,
    /// Pairs tied in the second ranking.
    pub ties_b: u64,
}

#[derive(Default, Clone, Copy)]
struct PairCounts {
    concordant: u64,
    discordant: u64,
    ties_a: u64,
    ties_b: u64,
}

impl std::ops::Add for PairCounts {
    type Output = PairCounts;

    fn add(self, o: PairCounts) -> PairCounts {
        PairCounts {
            concordant: self.concordant + o.concordant,
            discordant: self.discordant + o.discordant,
            ties_a: self.ties_a + o.ties_a,
            ties_b: self.ties_b + o.ties_b,
        }
    }
}

fn paired_ranks(a: &RankVector, b: &RankVector) -> Result<Vec<(NodeId, f64, f64)>> {
    let shared = a.rank_of.keys().filter(|k| b.rank_of.contains_key(k)).count();
    if shared != a.len() || shared != b.len() {
        return Err(Error::MismatchedNodes {
            left: a.len(),
            right: b.len(),
            shared,
        });
    }
    Ok(a.rank_of
        .iter()
        .map(|(&node, &ra)| (node, ra, b.rank_of[&node]))
        .collect())
}

/// Kendall's tau over all `n(n-1)/2` node pairs, with a two-sided p-value
/// from the normal approximation.
pub fn kendall_tau(a: &RankVector, b: &RankVector, variant: TauVariant) -> Result<RankComparison> {
    let pairs = paired_ranks(a, b)?;
    let n = pairs.len();
    if n < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: n });
    }
    let counts = (0..n)
        .into_par_iter()
        .map(|i| {
            let (_, ai, bi) = pairs[i];
            let mut c = PairCounts::default();
            for &(_, aj, bj) in &pairs[i + 1..] {
                let da = ai - aj;
                let db = bi - bj;
                if da == 0.0 {
                    c.ties_a += 1;
                }
                if db == 0.0 {
                    c.ties_b += 1;
                }
                if da == 0.0 || db == 0.0 {
                    continue;
                }
                if (da > 0.0) == (db > 0.0) {
                    c.concordant += 1;
                } else {
                    c.discordant += 1;
                }
            }
            c
        })
        .reduce(PairCounts::default, |x, y| x + y);

    let n0 = (n * (n - 1) / 2) as f64;
    let diff = counts.concordant as f64 - counts.discordant as f64;
    let tau_a = diff / n0;
    let denom = ((n0 - counts.ties_a as f64) * (n0 - counts.ties_b as f64)).sqrt();
    let tau_b = if denom > 0.0 { diff / denom } else { 0.0 };
    let tau = match variant {
        TauVariant::A => tau_a,
        TauVariant::B => tau_b,
    };
    Ok(RankComparison {
        tau,
        tau_a,
        tau_b,
        variant,
        p_value: tau_p_value(tau, n)?,
        n,
        concordant: counts.concordant,
        discordant: counts.discordant,
        ties_a: counts.ties_a,
        ties_b: counts.ties_b,
    })
}

/// Two-sided p-value for tau under independence, using
/// `z = 3 tau sqrt(n(n-1)) / sqrt(2(2n+5))`. Reasonable for `n >= 10`.
///
/// Results smaller than the least positive normal `f64` are clamped to it.
pub fn tau_p_value(tau: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: n });
    }
    if !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be finite, got {tau}")));
    }
    let nf = n as f64;
    let z = 3.0 * tau * (nf * (nf - 1.0)).sqrt() / (2.0 * (2.0 * nf + 5.0)).sqrt();
    let p = erfc(z.abs() / std::f64::consts::SQRT_2);
    Ok(p.clamp(f64::MIN_POSITIVE, 1.0))
}

/// Min-max scales rank values into `[0, 1]`; a constant vector maps to zeros.
pub fn normalize_ranks(r: &RankVector) -> BTreeMap<NodeId, f64> {
    let lo = r.rank_of.values().copied().fold(f64::INFINITY, f64::min);
    let hi = r.rank_of.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    r.rank_of
        .iter()
        .map(|(&k, &v)| (k, if span > 0.0 { (v - lo) / span } else { 0.0 }))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub node_id: NodeId,
    pub rank_a: f64,
    pub rank_b: f64,
    pub norm_a: f64,
    pub norm_b: f64,
    /// `|norm_a - norm_b|`; 0 means full agreement.
    pub delta: f64,
}

/// One row per node in id order, keeping every `stride`-th row (first row
/// always kept).
pub fn comparison_rows(a: &RankVector, b: &RankVector, stride: usize) -> Result<Vec<ComparisonRow>> {
    if stride == 0 {
        return Err(Error::param("stride", "must be at least 1"));
    }
    let pairs = paired_ranks(a, b)?;
    let na = normalize_ranks(a);
    let nb = normalize_ranks(b);
    Ok(pairs
        .into_iter()
        .step_by(stride)
        .map(|(node, ra, rb)| ComparisonRow {
            node_id: node,
            rank_a: ra,
            rank_b: rb,
            norm_a: na[&node],
            norm_b: nb[&node],
            delta: (na[&node] - nb[&node]).abs(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub node_id: NodeId,
    pub score_a: f64,
    pub score_b: f64,
}

/// Paired raw scores with an ordinary least-squares fit of `b` on `a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scatter {
    pub rows: Vec<ScatterRow>,
    pub slope: f64,
    pub intercept: f64,
    pub mean_a: f64,
    pub mean_b: f64,
}

pub fn scatter_rows(scores_a: &BTreeMap<NodeId, f64>, scores_b: &BTreeMap<NodeId, f64>) -> Result<Scatter> {
    let shared = scores_a.keys().filter(|k| scores_b.contains_key(k)).count();
    if shared != scores_a.len() || shared != scores_b.len() {
        return Err(Error::MismatchedNodes {
            left: scores_a.len(),
            right: scores_b.len(),
            shared,
        });
    }
    if shared < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: shared });
    }
    let rows: Vec<ScatterRow> = scores_a
        .iter()
        .map(|(&node, &a)| ScatterRow {
            node_id: node,
            score_a: a,
            score_b: scores_b[&node],
        })
        .collect();
    let n = rows.len() as f64;
    let mean_a = rows.iter().map(|r| r.score_a).sum::<f64>() / n;
    let mean_b = rows.iter().map(|r| r.score_b).sum::<f64>() / n;
    let sxx: f64 = rows.iter().map(|r| (r.score_a - mean_a).powi(2)).sum();
    let sxy: f64 = rows.iter().map(|r| (r.score_a - mean_a) * (r.score_b - mean_b)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("first score vector is constant; slope undefined".into()));
    }
    let slope = sxy / sxx;
    Ok(Scatter {
        rows,
        slope,
        intercept: mean_b - slope * mean_a,
        mean_a,
        mean_b,
    })
}
