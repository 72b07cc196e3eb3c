//! Immutable undirected, unweighted graph and edge-list ingestion.
//!
//! Node identifiers are the integers found in the input file. They are kept
//! as-is (SNAP-style datasets use sparse ids); a dense index is used
//! internally and never leaks through the public API.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Node identifier as it appears in the input data.
pub type NodeId = u64;

/// Undirected simple graph stored in compressed sparse row form.
///
/// Invariants: adjacency is symmetric, there are no self-loops and no
/// parallel edges, and every neighbor list is sorted by dense index (which is
/// also node-id order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<NodeId>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    num_edges: usize,
}

/// Bookkeeping from [`Graph::load_edge_list_with_report`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub edge_lines: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Builds a graph from explicit nodes plus an edge list.
    ///
    /// Endpoints of every edge are added as nodes; `nodes` only matters for
    /// ids that never appear in an edge (isolated nodes). Self-loops and
    /// duplicate edges (in either direction) are dropped.
    pub fn from_edges<I, E>(nodes: I, edges: E) -> Graph
    where
        I: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::build(nodes, edges).0
    }

    fn build<I, E>(nodes: I, edges: E) -> (Graph, LoadReport)
    where
        I: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut report = LoadReport::default();
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        let mut pairs = Vec::new();
        for (u, v) in edges {
            report.edge_lines += 1;
            ids.push(u);
            ids.push(v);
            if u == v {
                report.self_loops += 1;
                continue;
            }
            pairs.push(if u < v { (u, v) } else { (v, u) });
        }
        ids.sort_unstable();
        ids.dedup();
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        report.duplicates = before - pairs.len();

        let index = |id: NodeId| ids.binary_search(&id).expect("endpoint registered");
        let n = ids.len();
        let mut degree = vec![0usize; n];
        let dense: Vec<(usize, usize)> = pairs.iter().map(|&(u, v)| (index(u), index(v))).collect();
        for &(a, b) in &dense {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; offsets[n]];
        for &(a, b) in &dense {
            targets[fill[a]] = b;
            fill[a] += 1;
            targets[fill[b]] = a;
            fill[b] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        let graph = Graph {
            ids,
            offsets,
            targets,
            num_edges: dense.len(),
        };
        (graph, report)
    }

    /// Parses a whitespace-separated edge list (`#` starts a comment line).
    pub fn load_edge_list(text: &str) -> Result<Graph> {
        Self::load_edge_list_with_report(text, std::iter::empty()).map(|(g, _)| g)
    }

    /// Like [`Graph::load_edge_list`], additionally registering the ids from
    /// a node-list sidecar and returning load statistics.
    pub fn load_edge_list_with_report<I>(text: &str, extra_nodes: I) -> Result<(Graph, LoadReport)>
    where
        I: IntoIterator<Item = NodeId>,
    {
        let edges = parse_edge_lines(text)?;
        if edges.is_empty() {
            return Err(Error::EmptyInput);
        }
        let (graph, report) = Self::build(extra_nodes, edges);
        if report.self_loops > 0 {
            log::warn!("dropped {} self-loop line(s)", report.self_loops);
        }
        Ok((graph, report))
    }

    pub fn num_nodes(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// All node ids in ascending order.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.require(v).map(|i| self.degree_at(i))
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: NodeId) -> Result<impl Iterator<Item = NodeId> + '_> {
        let i = self.require(v)?;
        Ok(self.neighbors_at(i).iter().map(move |&j| self.ids[j]))
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.num_nodes()).flat_map(move |i| {
            self.neighbors_at(i)
                .iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (self.ids[i], self.ids[j]))
        })
    }

    /// Serializes to the edge-list format accepted by [`Graph::load_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub(crate) fn index_of(&self, v: NodeId) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub(crate) fn require(&self, v: NodeId) -> Result<usize> {
        self.index_of(v).ok_or(Error::UnknownNode(v))
    }

    pub(crate) fn id_at(&self, i: usize) -> NodeId {
        self.ids[i]
    }

    pub(crate) fn degree_at(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub(crate) fn neighbors_at(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Hop distances from `src` (`u32::MAX` = unreachable), returning the
    /// nodes in BFS visiting order. `dist` and `order` are scratch buffers.
    pub(crate) fn bfs_into(&self, src: usize, dist: &mut Vec<u32>, order: &mut Vec<usize>) {
        dist.clear();
        dist.resize(self.num_nodes(), u32::MAX);
        order.clear();
        dist[src] = 0;
        order.push(src);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let dv = dist[v];
            for &w in self.neighbors_at(v) {
                if dist[w] == u32::MAX {
                    dist[w] = dv + 1;
                    order.push(w);
                }
            }
        }
    }
}

fn parse_edge_lines(text: &str) -> Result<Vec<(NodeId, NodeId)>> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected two node ids, got `{line}`"),
            });
        };
        edges.push((parse_id(a, lineno + 1)?, parse_id(b, lineno + 1)?));
    }
    Ok(edges)
}

fn parse_id(token: &str, line: usize) -> Result<NodeId> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{token}` is not a non-negative integer node id"),
    })
}

/// Parses a node-list sidecar: one integer id per line, `#` comments allowed.
pub fn parse_node_list(text: &str) -> Result<Vec<NodeId>> {
    let mut nodes = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(tok), None) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected a single node id, got `{line}`"),
            });
        };
        nodes.push(parse_id(tok, lineno + 1)?);
    }
    Ok(nodes)
}

/// Neighborhood of `origin` grown one hop at a time.
///
/// `ring` holds the nodes at exactly `radius` hops; `visited` is every node
/// at 1..=`radius` hops. The origin itself is never part of either.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    origin: NodeId,
    radius: usize,
    ring: BTreeSet<NodeId>,
    visited: BTreeSet<NodeId>,
}

impl Frontier {
    /// Frontier at radius 1: the immediate neighbors of `origin`.
    pub fn start(g: &Graph, origin: NodeId) -> Result<Frontier> {
        let ring: BTreeSet<NodeId> = g.neighbors(origin)?.collect();
        Ok(Frontier {
            origin,
            radius: 1,
            visited: ring.clone(),
            ring,
        })
    }

    /// Next ring: neighbors of the current ring that are neither visited nor
    /// the origin. An empty ring means the component is exhausted.
    pub fn expand(&self, g: &Graph) -> Frontier {
        let mut next = BTreeSet::new();
        for &v in &self.ring {
            let i = g.index_of(v).expect("frontier node belongs to graph");
            for &j in g.neighbors_at(i) {
                let w = g.id_at(j);
                if w != self.origin && !self.visited.contains(&w) {
                    next.insert(w);
                }
            }
        }
        let mut visited = self.visited.clone();
        visited.extend(next.iter().copied());
        Frontier {
            origin: self.origin,
            radius: self.radius + 1,
            ring: next,
            visited,
        }
    }

    pub fn origin(&self) -> NodeId {
        self.origin
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn ring(&self) -> &BTreeSet<NodeId> {
        &self.ring
    }

    pub fn visited(&self) -> &BTreeSet<NodeId> {
        &self.visited
    }

    pub fn is_exhausted(&self) -> bool {
        self.ring.is_empty()
    }
}

/// Plain BFS hop distances from `src`, keyed by node id, unreachable nodes omitted.
pub fn bfs_levels(g: &Graph, src: NodeId) -> Result<Vec<(NodeId, usize)>> {
    let s = g.require(src)?;
    let mut dist = vec![usize::MAX; g.num_nodes()];
    let mut queue = VecDeque::from([s]);
    dist[s] = 0;
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        out.push((g.id_at(v), dist[v]));
        for &w in g.neighbors_at(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(out)
}
