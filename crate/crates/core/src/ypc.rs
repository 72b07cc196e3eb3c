//! Yukawa potential centrality.
//!
//! Each node `o` is treated as the source of a Yukawa-type potential whose
//! coupling is its degree `k_o` and whose screening "mass" is the ratio
//! `<k_n>/k_o`, where `<k_n>` is the mean degree of every node within `r`
//! hops of `o`. Ring magnitudes
//!
//! ```text
//! v_r = k_o * exp(-alpha * (<k_n>/k_o) * r) / r
//! ```
//!
//! are accumulated ring by ring (superposition) until a magnitude drops below
//! the threshold, the radius cap is hit, or the component is exhausted. The
//! node's score is `-sum(v_r)`: more negative means more influential.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Magnitude below which a ring's potential is treated as zero.
pub const DEFAULT_THRESHOLD: f64 = 1e-100;

/// Classic Yukawa potential `-g^2 * exp(-alpha * m * r) / r`.
///
/// With `m = 0` this is the Coulomb potential `-g^2 / r`.
pub fn yukawa_potential(coupling: f64, mass: f64, alpha: f64, r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Domain(format!("distance must be positive, got {r}")));
    }
    Ok(-coupling * coupling * (-alpha * mass * r).exp() / r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YpcParams {
    pub alpha: f64,
    /// Positive magnitude cutoff compared against each ring's `v_r`.
    pub threshold: f64,
    /// Hop cap; `None` means the number of nodes in the graph.
    pub max_radius: Option<usize>,
}

impl Default for YpcParams {
    fn default() -> Self {
        YpcParams {
            alpha: 1.0,
            threshold: DEFAULT_THRESHOLD,
            max_radius: None,
        }
    }
}

impl YpcParams {
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::param("alpha", format!("must be positive, got {}", self.alpha)));
        }
        if self.threshold.is_nan() || self.threshold <= 0.0 {
            return Err(Error::param(
                "threshold",
                format!("must be positive, got {}", self.threshold),
            ));
        }
        if self.max_radius == Some(0) {
            return Err(Error::param("max_radius", "must be at least 1"));
        }
        Ok(())
    }

    fn radius_cap(&self, g: &Graph) -> usize {
        self.max_radius.unwrap_or_else(|| g.num_nodes().max(1))
    }
}

/// Score of one node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YpcResult {
    pub node: NodeId,
    /// `-sum(per_ring_terms)`.
    pub score: f64,
    /// Last radius at which a ring magnitude was computed.
    pub radius: usize,
    pub per_ring_terms: Vec<f64>,
}

/// Reusable ring-expansion buffers. `mark[v] == epoch` means `v` is the
/// origin or already visited in the current walk.
struct RingScratch {
    mark: Vec<u32>,
    epoch: u32,
    ring: Vec<usize>,
    next: Vec<usize>,
}

impl RingScratch {
    fn new(n: usize) -> Self {
        RingScratch {
            mark: vec![0; n],
            epoch: 0,
            ring: Vec::new(),
            next: Vec::new(),
        }
    }

    fn reset(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        self.ring.clear();
        self.next.clear();
    }
}

fn score_at(g: &Graph, origin: usize, p: &YpcParams, cap: usize, s: &mut RingScratch) -> YpcResult {
    s.reset();
    let epoch = s.epoch;
    s.mark[origin] = epoch;
    let k_o = g.degree_at(origin) as f64;

    let mut visited = 0usize;
    let mut degree_sum = 0usize;
    for &w in g.neighbors_at(origin) {
        s.mark[w] = epoch;
        s.ring.push(w);
        visited += 1;
        degree_sum += g.degree_at(w);
    }

    let mut terms = Vec::new();
    let mut r = 1usize;
    loop {
        let ratio = if k_o > 0.0 {
            (degree_sum as f64 / visited as f64) / k_o
        } else {
            0.0
        };
        let rf = r as f64;
        let magnitude = k_o * (-p.alpha * ratio * rf).exp() / rf;
        terms.push(magnitude);
        if magnitude < p.threshold || r >= cap {
            break;
        }

        s.next.clear();
        for &u in &s.ring {
            for &w in g.neighbors_at(u) {
                if s.mark[w] != epoch {
                    s.mark[w] = epoch;
                    s.next.push(w);
                }
            }
        }
        if s.next.is_empty() {
            break;
        }
        visited += s.next.len();
        degree_sum += s.next.iter().map(|&w| g.degree_at(w)).sum::<usize>();
        std::mem::swap(&mut s.ring, &mut s.next);
        r += 1;
    }

    let total: f64 = terms.iter().sum();
    YpcResult {
        node: g.id_at(origin),
        score: if total == 0.0 { 0.0 } else { -total },
        radius: r,
        per_ring_terms: terms,
    }
}

/// YPC score of a single node.
pub fn ypc_single(g: &Graph, node: NodeId, p: &YpcParams) -> Result<YpcResult> {
    p.validate()?;
    let origin = g.require(node)?;
    let mut scratch = RingScratch::new(g.num_nodes());
    Ok(score_at(g, origin, p, p.radius_cap(g), &mut scratch))
}

/// Scores every node, sorted ascending by score (most influential first),
/// ties broken by node id. Nodes are evaluated in parallel.
pub fn ypc_all(g: &Graph, p: &YpcParams) -> Result<Vec<YpcResult>> {
    p.validate()?;
    let cap = p.radius_cap(g);
    let n = g.num_nodes();
    let mut results: Vec<YpcResult> = (0..n)
        .into_par_iter()
        .map_init(|| RingScratch::new(n), |s, i| score_at(g, i, p, cap, s))
        .collect();
    results.sort_by(|a, b| a.score.total_cmp(&b.score).then(a.node.cmp(&b.node)));
    Ok(results)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// `(radius, count)` in ascending radius order.
    pub histogram: Vec<(usize, usize)>,
}

pub fn radius_stats(results: &[YpcResult]) -> Result<RadiusStats> {
    if results.is_empty() {
        return Err(Error::TooFewObservations { needed: 1, got: 0 });
    }
    let mut counts = std::collections::BTreeMap::new();
    for r in results {
        *counts.entry(r.radius).or_insert(0usize) += 1;
    }
    let total: usize = results.iter().map(|r| r.radius).sum();
    Ok(RadiusStats {
        min: *counts.keys().next().unwrap(),
        max: *counts.keys().next_back().unwrap(),
        mean: total as f64 / results.len() as f64,
        histogram: counts.into_iter().collect(),
    })
}
