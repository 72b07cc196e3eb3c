//! Barabási–Albert preferential-attachment graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BaParams {
    pub n: usize,
    pub m: usize,
    pub rng_seed: u64,
}

impl BaParams {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::param("m", "must be at least 1"));
        }
        if self.n <= self.m {
            return Err(Error::param(
                "n",
                format!("must exceed m ({}), got {}", self.m, self.n),
            ));
        }
        Ok(())
    }
}

/// Grows a BA graph on nodes `0..n`.
///
/// Starts from `m` isolated seed nodes; node `m` links to all of them and each
/// later node attaches `m` distinct edges, picking targets with probability
/// proportional to current degree (uniform draw from the endpoint list,
/// redrawing duplicates). The result has exactly `(n - m) * m` edges.
pub fn ba_generate(p: &BaParams) -> Result<Graph> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity((p.n - p.m) * p.m);
    // every edge endpoint once, so a uniform pick is degree-proportional
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * (p.n - p.m) * p.m);

    let first = p.m as NodeId;
    for s in 0..first {
        edges.push((s, first));
        endpoints.extend([s, first]);
    }

    let mut targets: Vec<NodeId> = Vec::with_capacity(p.m);
    for new in (first + 1)..(p.n as NodeId) {
        targets.clear();
        while targets.len() < p.m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, new));
            endpoints.extend([t, new]);
        }
    }
    Ok(Graph::from_edges(0..p.n as NodeId, edges))
}
