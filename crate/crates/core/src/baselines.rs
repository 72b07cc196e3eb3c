//! Classical centrality measures and gravity centrality.
//!
//! Conventions on disconnected graphs: closeness is normalized within the
//! reachable component, farness sums only reachable distances, eccentricity
//! is taken within the component. Betweenness is unnormalized and counts
//! each unordered pair once.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::ranking::Orientation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Measure {
    #[serde(rename = "DC")]
    Degree,
    #[serde(rename = "BC")]
    Betweenness,
    #[serde(rename = "CC")]
    Closeness,
    #[serde(rename = "EVC")]
    Eigenvector,
    #[serde(rename = "EcC")]
    Eccentricity,
    #[serde(rename = "FC")]
    Farness,
    #[serde(rename = "PRC")]
    PageRank,
    #[serde(rename = "KSHELL")]
    KShell,
    #[serde(rename = "GC")]
    Gravity,
}

impl Measure {
    pub const ALL: [Measure; 9] = [
        Measure::Degree,
        Measure::Betweenness,
        Measure::Closeness,
        Measure::Eigenvector,
        Measure::Eccentricity,
        Measure::Farness,
        Measure::PageRank,
        Measure::KShell,
        Measure::Gravity,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Measure::Degree => "DC",
            Measure::Betweenness => "BC",
            Measure::Closeness => "CC",
            Measure::Eigenvector => "EVC",
            Measure::Eccentricity => "EcC",
            Measure::Farness => "FC",
            Measure::PageRank => "PRC",
            Measure::KShell => "KSHELL",
            Measure::Gravity => "GC",
        }
    }

    /// Which end of the score range marks the more influential node.
    pub fn orientation(self) -> Orientation {
        match self {
            Measure::Eccentricity | Measure::Farness => Orientation::Ascending,
            _ => Orientation::Descending,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param("measure", format!("unknown measure `{s}`")))
    }
}

/// One score per graph node for a single measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityVector {
    pub measure: Measure,
    pub scores: BTreeMap<NodeId, f64>,
}

impl CentralityVector {
    fn from_dense(g: &Graph, measure: Measure, values: Vec<f64>) -> Self {
        let scores = g.node_ids().iter().copied().zip(values).collect();
        CentralityVector { measure, scores }
    }
}

/// Tunables for the parameterized measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineParams {
    pub iterations: usize,
    pub tolerance: f64,
    pub damping: f64,
    pub gravity_cutoff: usize,
    pub gravity_exponent: f64,
}

impl Default for BaselineParams {
    fn default() -> Self {
        BaselineParams {
            iterations: 1000,
            tolerance: 1e-10,
            damping: 0.85,
            gravity_cutoff: 3,
            gravity_exponent: 2.0,
        }
    }
}

pub fn compute(g: &Graph, measure: Measure, p: &BaselineParams) -> Result<CentralityVector> {
    match measure {
        Measure::Degree => Ok(degree_centrality(g)),
        Measure::Betweenness => Ok(betweenness_centrality(g)),
        Measure::Closeness => Ok(closeness_centrality(g)),
        Measure::Eigenvector => eigenvector_centrality(g, p.iterations, p.tolerance),
        Measure::Eccentricity => Ok(eccentricity_centrality(g)),
        Measure::Farness => Ok(farness_centrality(g)),
        Measure::PageRank => pagerank_centrality(g, p.damping, p.iterations, p.tolerance),
        Measure::KShell => Ok(k_shell(g)),
        Measure::Gravity => gravity_centrality(g, p.gravity_cutoff, p.gravity_exponent),
    }
}

pub fn degree_centrality(g: &Graph) -> CentralityVector {
    let values = (0..g.num_nodes()).map(|i| g.degree_at(i) as f64).collect();
    CentralityVector::from_dense(g, Measure::Degree, values)
}

/// Brandes' single-source accumulation, one BFS per source.
pub fn betweenness_centrality(g: &Graph) -> CentralityVector {
    let n = g.num_nodes();
    let partials: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .fold(
            || BrandesScratch::new(n),
            |mut s, src| {
                s.accumulate(g, src);
                s
            },
        )
        .map(|s| s.centrality)
        .collect();
    let mut values = vec![0.0; n];
    for part in partials {
        for (v, x) in values.iter_mut().zip(part) {
            *v += x;
        }
    }
    // every unordered pair was counted from both endpoints
    for v in &mut values {
        *v /= 2.0;
    }
    CentralityVector::from_dense(g, Measure::Betweenness, values)
}

struct BrandesScratch {
    centrality: Vec<f64>,
    sigma: Vec<f64>,
    dist: Vec<u32>,
    delta: Vec<f64>,
    stack: Vec<usize>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            centrality: vec![0.0; n],
            sigma: vec![0.0; n],
            dist: vec![u32::MAX; n],
            delta: vec![0.0; n],
            stack: Vec::with_capacity(n),
        }
    }

    fn accumulate(&mut self, g: &Graph, src: usize) {
        self.sigma.fill(0.0);
        self.dist.fill(u32::MAX);
        self.delta.fill(0.0);
        self.stack.clear();
        self.sigma[src] = 1.0;
        self.dist[src] = 0;
        self.stack.push(src);
        // stack doubles as the BFS queue; predecessors are recovered from distances
        let mut head = 0;
        while head < self.stack.len() {
            let v = self.stack[head];
            head += 1;
            for &w in g.neighbors_at(v) {
                if self.dist[w] == u32::MAX {
                    self.dist[w] = self.dist[v] + 1;
                    self.stack.push(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        for &w in self.stack.iter().rev() {
            for &v in g.neighbors_at(w) {
                if self.dist[v] != u32::MAX && self.dist[v] + 1 == self.dist[w] {
                    self.delta[v] += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            if w != src {
                self.centrality[w] += self.delta[w];
            }
        }
    }
}

/// Per-source distance summary: (reachable other nodes, distance sum, max distance).
fn distance_profiles(g: &Graph) -> Vec<(usize, u64, u32)> {
    let n = g.num_nodes();
    (0..n)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(dist, order), src| {
                g.bfs_into(src, dist, order);
                let sum = order.iter().map(|&v| dist[v] as u64).sum();
                let max = order.last().map_or(0, |&v| dist[v]);
                (order.len() - 1, sum, max)
            },
        )
        .collect()
}

/// `(reachable - 1) / sum of distances`, computed within each node's component.
pub fn closeness_centrality(g: &Graph) -> CentralityVector {
    let values = distance_profiles(g)
        .into_iter()
        .map(|(reach, sum, _)| if sum == 0 { 0.0 } else { reach as f64 / sum as f64 })
        .collect();
    CentralityVector::from_dense(g, Measure::Closeness, values)
}

pub fn farness_centrality(g: &Graph) -> CentralityVector {
    let values = distance_profiles(g).into_iter().map(|(_, sum, _)| sum as f64).collect();
    CentralityVector::from_dense(g, Measure::Farness, values)
}

/// Raw eccentricity; lower is more central.
pub fn eccentricity_centrality(g: &Graph) -> CentralityVector {
    let values = distance_profiles(g).into_iter().map(|(_, _, max)| max as f64).collect();
    CentralityVector::from_dense(g, Measure::Eccentricity, values)
}

/// Power iteration for the Perron vector of the adjacency matrix.
///
/// Iterates with `A + I`, which has the same leading eigenvector as `A` but
/// does not oscillate on bipartite graphs. The result is L2-normalized and
/// nonnegative.
pub fn eigenvector_centrality(g: &Graph, iters: usize, tol: f64) -> Result<CentralityVector> {
    let n = g.num_nodes();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    for _ in 0..iters {
        for (i, out) in next.iter_mut().enumerate() {
            *out = x[i] + g.neighbors_at(i).iter().map(|&j| x[j]).sum::<f64>();
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        next.iter_mut().for_each(|v| *v /= norm);
        let diff = linf(&x, &next);
        std::mem::swap(&mut x, &mut next);
        if diff < tol {
            break;
        }
    }
    Ok(CentralityVector::from_dense(g, Measure::Eigenvector, x))
}

/// PageRank with uniform teleport; mass of degree-0 nodes is spread uniformly.
pub fn pagerank_centrality(g: &Graph, damping: f64, iters: usize, tol: f64) -> Result<CentralityVector> {
    let n = g.num_nodes();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::param("damping", format!("must lie in [0, 1], got {damping}")));
    }
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    for _ in 0..iters {
        let dangling: f64 = (0..n).filter(|&i| g.degree_at(i) == 0).map(|i| x[i]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        for (i, out) in next.iter_mut().enumerate() {
            let inflow: f64 = g
                .neighbors_at(i)
                .iter()
                .map(|&j| x[j] / g.degree_at(j) as f64)
                .sum();
            *out = base + damping * inflow;
        }
        let diff: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if diff < tol {
            break;
        }
    }
    Ok(CentralityVector::from_dense(g, Measure::PageRank, x))
}

/// Core number of every node (Batagelj–Zaversnik bucket peeling).
pub fn k_shell(g: &Graph) -> CentralityVector {
    let n = g.num_nodes();
    let mut degree: Vec<usize> = (0..n).map(|i| g.degree_at(i)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);

    // bin[d] = start of degree-d block in `order`
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &degree {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0usize; n];
    let mut fill = bin.clone();
    for v in 0..n {
        pos[v] = fill[degree[v]];
        order[pos[v]] = v;
        fill[degree[v]] += 1;
    }

    for i in 0..n {
        let v = order[i];
        for &u in g.neighbors_at(v) {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = order[pw];
                if u != w {
                    order.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    let values = degree.into_iter().map(|d| d as f64).collect();
    CentralityVector::from_dense(g, Measure::KShell, values)
}

/// Gravity centrality: `sum over 1 <= d(i,j) <= cutoff of k_i * k_j / d(i,j)^exponent`.
pub fn gravity_centrality(g: &Graph, cutoff: usize, exponent: f64) -> Result<CentralityVector> {
    if cutoff < 1 {
        return Err(Error::param("cutoff", "must be at least 1"));
    }
    let n = g.num_nodes();
    let cutoff = u32::try_from(cutoff).unwrap_or(u32::MAX);
    let values = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], Vec::new()),
            |(dist, order), src| {
                bounded_bfs(g, src, cutoff, dist, order);
                let k_i = g.degree_at(src) as f64;
                let total = order[1..]
                    .iter()
                    .map(|&j| k_i * g.degree_at(j) as f64 / (dist[j] as f64).powf(exponent))
                    .sum();
                for &v in order.iter() {
                    dist[v] = u32::MAX;
                }
                total
            },
        )
        .collect();
    Ok(CentralityVector::from_dense(g, Measure::Gravity, values))
}

/// BFS that stops expanding at `depth`. Expects `dist` all `u32::MAX` on entry
/// and leaves the visited entries set; the caller resets them via `order`.
fn bounded_bfs(g: &Graph, src: usize, depth: u32, dist: &mut [u32], order: &mut Vec<usize>) {
    order.clear();
    dist[src] = 0;
    order.push(src);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        if dist[v] == depth {
            continue;
        }
        for &w in g.neighbors_at(v) {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                order.push(w);
            }
        }
    }
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
