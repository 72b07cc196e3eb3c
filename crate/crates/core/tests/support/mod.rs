//! Reference implementations used as test oracles.
//!
//! These work on a dense adjacency matrix with Floyd–Warshall distances and
//! share no code with the library's BFS-based algorithms.

#![allow(dead_code, clippy::needless_range_loop)]

use ypc_core::{Graph, NodeId};

pub const INF: usize = usize::MAX / 4;

/// Dense copy of a small graph, indexed by position in `ids`.
pub struct Dense {
    pub ids: Vec<NodeId>,
    pub adj: Vec<Vec<bool>>,
    pub dist: Vec<Vec<usize>>,
}

impl Dense {
    pub fn new(g: &Graph) -> Dense {
        let ids = g.node_ids().to_vec();
        let n = ids.len();
        let pos = |v: NodeId| ids.iter().position(|&x| x == v).unwrap();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in g.edges() {
            adj[pos(u)][pos(v)] = true;
            adj[pos(v)][pos(u)] = true;
        }
        let mut dist = vec![vec![INF; n]; n];
        for i in 0..n {
            dist[i][i] = 0;
            for j in 0..n {
                if adj[i][j] {
                    dist[i][j] = 1;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        Dense { ids, adj, dist }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }

    /// Number of shortest paths between every pair, from walk counts: a walk
    /// of length d(s,t) between s and t is necessarily a shortest path.
    pub fn path_counts(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut sigma = vec![vec![0.0; n]; n];
        let mut power: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        for len in 0..n {
            for s in 0..n {
                for t in 0..n {
                    if self.dist[s][t] == len {
                        sigma[s][t] = power[s][t];
                    }
                }
            }
            let mut next = vec![vec![0.0; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        if self.adj[k][j] {
                            next[i][j] += power[i][k];
                        }
                    }
                }
            }
            power = next;
        }
        sigma
    }
}

/// Betweenness over unordered pairs from path counts.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let d = Dense::new(g);
    let n = d.n();
    let sigma = d.path_counts();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in (s + 1)..n {
            if d.dist[s][t] >= INF {
                continue;
            }
            for v in 0..n {
                if v == s || v == t || d.dist[s][v] >= INF || d.dist[v][t] >= INF {
                    continue;
                }
                if d.dist[s][v] + d.dist[v][t] == d.dist[s][t] {
                    bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    bc
}

/// Gravity centrality by direct double loop.
pub fn gravity(g: &Graph, cutoff: usize, exponent: f64) -> Vec<f64> {
    let d = Dense::new(g);
    let n = d.n();
    (0..n)
        .map(|i| {
            let mut total = 0.0;
            for j in 0..n {
                let dij = d.dist[i][j];
                if j != i && dij < INF && dij <= cutoff {
                    total += (d.degree(i) * d.degree(j)) as f64 / (dij as f64).powf(exponent);
                }
            }
            total
        })
        .collect()
}

/// YPC recomputed from the distance matrix at every radius.
pub fn ypc(g: &Graph, node: NodeId, alpha: f64, threshold: f64, cap: usize) -> (f64, usize) {
    let d = Dense::new(g);
    let o = d.ids.iter().position(|&x| x == node).unwrap();
    let k_o = d.degree(o) as f64;
    let mut terms = Vec::new();
    let mut r = 1;
    loop {
        let ball: Vec<usize> = (0..d.n()).filter(|&u| u != o && d.dist[o][u] <= r).collect();
        let ratio = if k_o > 0.0 {
            let avg = ball.iter().map(|&u| d.degree(u) as f64).sum::<f64>() / ball.len() as f64;
            avg / k_o
        } else {
            0.0
        };
        let v = k_o * (-alpha * ratio * r as f64).exp() / r as f64;
        terms.push(v);
        let next_ring = (0..d.n()).any(|u| d.dist[o][u] == r + 1);
        if v < threshold || r >= cap || !next_ring {
            break;
        }
        r += 1;
    }
    (-terms.iter().sum::<f64>(), r)
}

/// Core numbers by literal peeling: for each k, delete nodes of degree < k
/// until none remain; survivors have core number >= k.
pub fn core_numbers(g: &Graph) -> Vec<usize> {
    let d = Dense::new(g);
    let n = d.n();
    let mut core = vec![0; n];
    for k in 1..=n {
        let mut alive = vec![true; n];
        loop {
            let doomed: Vec<usize> = (0..n)
                .filter(|&v| alive[v])
                .filter(|&v| (0..n).filter(|&u| alive[u] && d.adj[v][u]).count() < k)
                .collect();
            if doomed.is_empty() {
                break;
            }
            for v in doomed {
                alive[v] = false;
            }
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
    }
    core
}

/// Discordant pairs between two permutations (`a[i]`, `b[i]` = ranks of item
/// `i`) as the inversion count of `b` listed in `a`-order.
pub fn discordant_pairs(a: &[usize], b: &[usize]) -> usize {
    let mut by_a: Vec<usize> = (0..a.len()).collect();
    by_a.sort_by_key(|&i| a[i]);
    let seq: Vec<usize> = by_a.iter().map(|&i| b[i]).collect();
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in (i + 1)..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    inv
}

/// Parses the connected-graph atlas fixture.
pub fn atlas() -> Vec<Graph> {
    let text = include_str!("../data/connected_graphs_le7.txt");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|line| {
            let (n, edges) = line.split_once(':').unwrap();
            let n: u64 = n.trim().parse().unwrap();
            let edges: Vec<(u64, u64)> = edges
                .split_whitespace()
                .map(|e| {
                    let (u, v) = e.split_once('-').unwrap();
                    (u.parse().unwrap(), v.parse().unwrap())
                })
                .collect();
            Graph::from_edges(0..n, edges)
        })
        .collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Small deterministic PRNG so fixtures do not depend on library RNG choices.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Random simple graph on `0..n` with edge probability `p`.
pub fn random_graph(n: u64, p: f64, rng: &mut SplitMix) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.unit() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(0..n, edges)
}

pub fn is_connected(g: &Graph) -> bool {
    let d = Dense::new(g);
    (0..d.n()).all(|j| d.dist[0][j] < INF)
}

/// Connected-graph atlas plus `extra` random 8-node graphs over a spread of densities.
pub fn small_graphs(extra: usize, connected_only: bool) -> Vec<Graph> {
    let mut out = atlas();
    let mut rng = SplitMix(0x5eed);
    let mut made = 0;
    while made < extra {
        let p = 0.15 + 0.7 * (made as f64 / extra as f64);
        let g = random_graph(8, p, &mut rng);
        if connected_only && !is_connected(&g) {
            continue;
        }
        out.push(g);
        made += 1;
    }
    out
}
