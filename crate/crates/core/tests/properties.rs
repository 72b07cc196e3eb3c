//! Property tests for invariants that hold on arbitrary inputs.

mod support;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ypc_core::baselines::{eigenvector_centrality, k_shell, pagerank_centrality};
use ypc_core::epidemics::{ever_infected, run_rng, si_run, spread_scores, EpidemicConfig, Model, Modulation};
use ypc_core::generators::{ba_generate, BaParams};
use ypc_core::graph::Frontier;
use ypc_core::ranking::{kendall_tau, rank_from_scores, Orientation, TauVariant};
use ypc_core::ypc::{ypc_all, ypc_single, yukawa_potential, YpcParams};
use ypc_core::{Graph, NodeId};

/// Edge sets over sparse, shuffled ids so no test relies on dense numbering.
fn arb_graph(max_nodes: usize) -> impl Strategy<Value = Graph> {
    (1..=max_nodes).prop_flat_map(|n| {
        let ids = proptest::collection::btree_set(0u64..10_000, n);
        let edges = proptest::collection::vec((0..n, 0..n), 0..=3 * n);
        (ids, edges).prop_map(|(ids, edges)| {
            let ids: Vec<NodeId> = ids.into_iter().collect();
            let e: Vec<(NodeId, NodeId)> = edges
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (ids[a], ids[b]))
                .collect();
            Graph::from_edges(ids, e)
        })
    })
}

fn arb_connected(max_nodes: usize) -> impl Strategy<Value = Graph> {
    // random spanning tree plus extra edges
    (2..=max_nodes).prop_flat_map(|n| {
        let parents = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..=2 * n);
        (parents, extra).prop_map(move |(parents, extra)| {
            let mut edges: Vec<(NodeId, NodeId)> = parents
                .iter()
                .enumerate()
                .map(|(i, p)| (p.index(i + 1) as NodeId, (i + 1) as NodeId))
                .collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a as NodeId, b as NodeId)));
            Graph::from_edges(0..n as NodeId, edges)
        })
    })
}

/// Hop distances by a BFS written against the public neighbor API only.
fn oracle_levels(g: &Graph, src: NodeId) -> BTreeMap<NodeId, usize> {
    let mut dist = BTreeMap::from([(src, 0)]);
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in g.neighbors(v).unwrap() {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frontier_rings_are_bfs_levels(g in arb_graph(200), pick in any::<prop::sample::Index>()) {
        let origin = g.node_ids()[pick.index(g.num_nodes())];
        let levels = oracle_levels(&g, origin);
        let mut seen = BTreeSet::new();
        let mut f = Frontier::start(&g, origin).unwrap();
        while !f.is_exhausted() {
            for &v in f.ring() {
                prop_assert_eq!(levels[&v], f.radius());
                prop_assert!(seen.insert(v), "node {} visited twice", v);
            }
            prop_assert_eq!(f.visited(), &seen);
            f = f.expand(&g);
        }
        prop_assert_eq!(seen.len() + 1, levels.len());
    }

    #[test]
    fn handshake_identity(g in arb_graph(150)) {
        let total: usize = g.node_ids().iter().map(|&v| g.degree(v).unwrap()).sum();
        prop_assert_eq!(total, 2 * g.num_edges());
    }

    #[test]
    fn loading_ignores_line_order_and_edge_direction(
        g in arb_graph(80),
        flips in proptest::collection::vec(any::<bool>(), 240),
        shuffle_seed in any::<u64>(),
    ) {
        let mut lines: Vec<String> = g
            .edges()
            .zip(flips.iter().cycle())
            .map(|((u, v), &flip)| if flip { format!("{v} {u}") } else { format!("{u} {v}") })
            .collect();
        prop_assume!(!lines.is_empty());
        lines.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let reloaded = Graph::load_edge_list(&lines.join("\n")).unwrap();
        let canonical = Graph::load_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(reloaded, canonical);
    }

    #[test]
    fn tau_antisymmetric_under_reversal(scores in distinct_scores(40)) {
        let (a, b) = scores;
        let ra = rank_from_scores(&a, Orientation::Descending).unwrap();
        let rb = rank_from_scores(&b, Orientation::Descending).unwrap();
        let rev: BTreeMap<NodeId, f64> = b.iter().map(|(&k, &v)| (k, -v)).collect();
        let rrev = rank_from_scores(&rev, Orientation::Descending).unwrap();
        let t = kendall_tau(&ra, &rb, TauVariant::A).unwrap();
        let t_rev = kendall_tau(&ra, &rrev, TauVariant::A).unwrap();
        prop_assert!((t.tau + t_rev.tau).abs() < 1e-12);
        let n = a.len() as u64;
        prop_assert_eq!(t.concordant + t.discordant, n * (n - 1) / 2);
    }

    #[test]
    fn tau_invariant_under_monotone_transform(scores in distinct_scores(40)) {
        let (a, b) = scores;
        let ra = rank_from_scores(&a, Orientation::Descending).unwrap();
        let rb = rank_from_scores(&b, Orientation::Descending).unwrap();
        let warped: BTreeMap<NodeId, f64> = b.iter().map(|(&k, &v)| (k, (v / 50.0).exp() * 3.0 + 7.0)).collect();
        let rw = rank_from_scores(&warped, Orientation::Descending).unwrap();
        let t = kendall_tau(&ra, &rb, TauVariant::A).unwrap();
        let tw = kendall_tau(&ra, &rw, TauVariant::A).unwrap();
        prop_assert_eq!(t.tau, tw.tau);
        prop_assert_eq!(t.p_value, tw.p_value);
    }

    #[test]
    fn flipping_orientation_negates_tau(scores in distinct_scores(40)) {
        let (a, b) = scores;
        let ra = rank_from_scores(&a, Orientation::Descending).unwrap();
        let rb = rank_from_scores(&b, Orientation::Descending).unwrap();
        let rf = rank_from_scores(&b, Orientation::Ascending).unwrap();
        let t = kendall_tau(&ra, &rb, TauVariant::A).unwrap().tau;
        let tf = kendall_tau(&ra, &rf, TauVariant::A).unwrap().tau;
        prop_assert!((t + tf).abs() < 1e-12);
    }

    #[test]
    fn tied_ranks_sum_to_triangular_number(values in proptest::collection::vec(0u8..5, 1..60)) {
        let scores: BTreeMap<NodeId, f64> = values.iter().enumerate().map(|(i, &v)| (i as NodeId, v as f64)).collect();
        let r = rank_from_scores(&scores, Orientation::Descending).unwrap();
        let n = values.len() as f64;
        let total: f64 = r.rank_of.values().sum();
        prop_assert!((total - n * (n + 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn pagerank_is_a_distribution_and_a_fixed_point(g in arb_graph(60)) {
        let d = 0.85;
        let pr = pagerank_centrality(&g, d, 1000, 1e-12).unwrap();
        let total: f64 = pr.scores.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let n = g.num_nodes() as f64;
        let dangling: f64 = pr.scores.iter().filter(|(&v, _)| g.degree(v).unwrap() == 0).map(|(_, &x)| x).sum();
        for (&v, &x) in &pr.scores {
            let inflow: f64 = g
                .neighbors(v)
                .unwrap()
                .map(|u| pr.scores[&u] / g.degree(u).unwrap() as f64)
                .sum();
            let next = (1.0 - d) / n + d * (inflow + dangling / n);
            prop_assert!((next - x).abs() < 1e-10, "node {}: {} vs {}", v, next, x);
        }
    }

    #[test]
    fn eigenvector_is_a_fixed_point(g in arb_connected(40)) {
        let tol = 1e-10;
        let ev = eigenvector_centrality(&g, 1000, tol).unwrap();
        let x = &ev.scores;
        prop_assert!(x.values().all(|&v| v >= 0.0));
        let next: BTreeMap<NodeId, f64> = x
            .iter()
            .map(|(&v, &xv)| (v, xv + g.neighbors(v).unwrap().map(|u| x[&u]).sum::<f64>()))
            .collect();
        let norm = next.values().map(|v| v * v).sum::<f64>().sqrt();
        for (v, y) in next {
            prop_assert!((y / norm - x[&v]).abs() < tol);
        }
    }

    #[test]
    fn k_shell_independent_of_labelling(g in arb_graph(40), perm_seed in any::<u64>()) {
        let ids = g.node_ids().to_vec();
        let mut relabel = ids.clone();
        relabel.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let map: BTreeMap<NodeId, NodeId> = ids.iter().copied().zip(relabel.iter().copied()).collect();
        let mut edges: Vec<(NodeId, NodeId)> = g.edges().map(|(u, v)| (map[&u], map[&v])).collect();
        edges.reverse();
        let h = Graph::from_edges(relabel.iter().rev().copied(), edges);
        let kg = k_shell(&g).scores;
        let kh = k_shell(&h).scores;
        for (v, core) in kg {
            prop_assert_eq!(core, kh[&map[&v]]);
        }
    }

    #[test]
    fn ypc_is_pure_and_order_independent(g in arb_graph(60), perm_seed in any::<u64>()) {
        let p = YpcParams::default();
        let all = ypc_all(&g, &p).unwrap();
        let mut order = g.node_ids().to_vec();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(perm_seed));
        let by_node: BTreeMap<NodeId, _> = all.iter().map(|r| (r.node, r)).collect();
        for v in order {
            let single = ypc_single(&g, v, &p).unwrap();
            prop_assert_eq!(&single, by_node[&v]);
            let sum: f64 = single.per_ring_terms.iter().sum();
            prop_assert!(single.score == -sum || (sum == 0.0 && single.score == 0.0));
            if g.degree(v).unwrap() > 0 {
                prop_assert!(!single.per_ring_terms.is_empty());
                prop_assert!(single.per_ring_terms.iter().all(|&t| t > 0.0 || t == 0.0 && t < p.threshold));
            }
            prop_assert!(single.radius <= g.num_nodes().max(1));
        }
        for w in all.windows(2) {
            prop_assert!(w[0].score < w[1].score || (w[0].score == w[1].score && w[0].node < w[1].node));
        }
    }

    #[test]
    fn yukawa_magnitude_decays(coupling in 0.1f64..50.0, mass in 0.01f64..10.0, alpha in 0.01f64..3.0) {
        let mut prev = f64::INFINITY;
        for step in 1..200 {
            let r = step as f64 * 0.25;
            let v = yukawa_potential(coupling, mass, alpha, r).unwrap().abs();
            if v == 0.0 {
                break;
            }
            prop_assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn si_never_loses_infected_nodes(g in arb_connected(30), seed_pick in any::<prop::sample::Index>(), rng_seed in any::<u64>()) {
        let seed = g.node_ids()[seed_pick.index(g.num_nodes())];
        let mut last = 0.0;
        for steps in 1..=12 {
            let cfg = EpidemicConfig { steps, ..EpidemicConfig::si(0.3, rng_seed) };
            let count = si_run(&g, seed, &cfg, &mut run_rng(rng_seed, seed, 0)).unwrap();
            prop_assert!(count >= last && count >= 1.0);
            prop_assert!(count <= g.num_nodes() as f64);
            last = count;
        }
    }

    #[test]
    fn sis_without_recovery_reaches_the_si_set(g in arb_graph(20), seed_pick in any::<prop::sample::Index>(), rng_seed in any::<u64>()) {
        let seed = g.node_ids()[seed_pick.index(g.num_nodes())];
        let si = EpidemicConfig { steps: 15, ..EpidemicConfig::si(0.4, rng_seed) };
        let sis = EpidemicConfig {
            model: Model::SIS,
            gamma_coeff: 0.0,
            modulation: Modulation::Plain,
            ..si
        };
        let a = ever_infected(&g, seed, &si, &mut run_rng(rng_seed, seed, 3)).unwrap();
        let b = ever_infected(&g, seed, &sis, &mut run_rng(rng_seed, seed, 3)).unwrap();
        prop_assert_eq!(a, b);
    }
}

fn distinct_scores(n: usize) -> impl Strategy<Value = (BTreeMap<NodeId, f64>, BTreeMap<NodeId, f64>)> {
    (2..=n).prop_flat_map(|n| {
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (perm.clone(), perm).prop_map(|(a, b)| {
            let to_map = |p: Vec<usize>| p.into_iter().enumerate().map(|(i, r)| (i as NodeId * 3, r as f64)).collect();
            (to_map(a), to_map(b))
        })
    })
}

fn component_size(g: &Graph, v: NodeId) -> usize {
    oracle_levels(g, v).len()
}

#[test]
fn si_saturates_at_component_size_and_plateaus() {
    let mut rng = support::SplitMix(11);
    for _ in 0..40 {
        let g = support::random_graph(25, 0.08, &mut rng);
        for &seed in g.node_ids().iter().step_by(5) {
            let size = component_size(&g, seed) as f64;
            for steps in [25, 30, 60] {
                let cfg = EpidemicConfig { steps, ..EpidemicConfig::si(1.0, 0) };
                let count = si_run(&g, seed, &cfg, &mut run_rng(0, seed, 0)).unwrap();
                assert_eq!(count, size);
            }
        }
    }
}

#[test]
fn ypc_prioritisation_limits() {
    let p = YpcParams { alpha: 0.7, ..YpcParams::default() };
    let alpha = p.alpha;
    // hub center of a star: ring-1 neighbors all have degree 1, ratio -> 0
    for k in [4u64, 16, 64, 256] {
        let star = Graph::from_edges(0..=k, (1..=k).map(|v| (0, v)));
        let first = ypc_single(&star, 0, &p).unwrap().per_ring_terms[0];
        let ratio = 1.0 / k as f64;
        assert!((first - k as f64 * (-alpha * ratio).exp()).abs() < 1e-9);
    }
    // clique node: neighbors as connected as the initiator, ratio 1
    for k in [3u64, 8, 20] {
        let edges: Vec<_> = (0..=k).flat_map(|u| (u + 1..=k).map(move |v| (u, v))).collect();
        let clique = Graph::from_edges(0..=k, edges);
        let first = ypc_single(&clique, 0, &p).unwrap().per_ring_terms[0];
        assert!((first - k as f64 * (-alpha).exp()).abs() < 1e-9);
    }
    // leaf attached to a growing hub: ratio = k, ring-1 magnitude vanishes
    let mut prev = f64::INFINITY;
    for k in [2u64, 10, 100, 1000] {
        let star = Graph::from_edges(0..=k, (1..=k).map(|v| (0, v)));
        let first = ypc_single(&star, 1, &p).unwrap().per_ring_terms[0];
        assert!(first < prev);
        prev = first;
    }
    assert!(prev < 1e-300);
}

#[test]
fn ba_graphs_are_simple_connected_and_exact() {
    for (n, m) in [(50, 1), (100, 2), (300, 3), (500, 5)] {
        for rng_seed in 0..4 {
            let g = ba_generate(&BaParams { n, m, rng_seed }).unwrap();
            assert_eq!(g.num_edges(), (n - m) * m);
            let text = g.to_edge_list();
            let lines: BTreeSet<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
            assert_eq!(lines.len(), g.num_edges());
            assert!(g.edges().all(|(u, v)| u != v));
            assert_eq!(component_size(&g, 0), n);
        }
    }
}

#[test]
fn ba_degree_distribution_has_heavy_tail() {
    for rng_seed in 0..5 {
        let g = ba_generate(&BaParams { n: 10_000, m: 2, rng_seed }).unwrap();
        let mean = 2.0 * g.num_edges() as f64 / g.num_nodes() as f64;
        let max = g.node_ids().iter().map(|&v| g.degree(v).unwrap()).max().unwrap();
        assert!(max as f64 > 10.0 * mean, "seed {rng_seed}: max {max}, mean {mean}");
    }
}

#[test]
fn spread_scores_are_deterministic() {
    let g = ba_generate(&BaParams { n: 120, m: 2, rng_seed: 3 }).unwrap();
    let cfg = EpidemicConfig { runs: 20, ..EpidemicConfig::sis(0.01, 0.7, 99) };
    let a = spread_scores(&g, &cfg, true).unwrap();
    let b = spread_scores(&g, &cfg, true).unwrap();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let c = pool.install(|| spread_scores(&g, &cfg, true).unwrap());
    assert_eq!(a, c);
}

#[test]
fn quadrupling_runs_halves_stderr() {
    // stderr ~ sd / sqrt(runs); quadrupling runs should halve it
    let g = ba_generate(&BaParams { n: 60, m: 2, rng_seed: 8 }).unwrap();
    let base = EpidemicConfig { steps: 20, ..EpidemicConfig::si(0.2, 5) };
    let small = spread_scores(&g, &EpidemicConfig { runs: 200, ..base }, false).unwrap();
    let large = spread_scores(&g, &EpidemicConfig { runs: 800, ..base }, false).unwrap();
    let mut ratios: Vec<f64> = small
        .iter()
        .zip(&large)
        .filter(|(s, _)| s.stderr > 0.0)
        .map(|(s, l)| l.stderr / s.stderr)
        .collect();
    ratios.sort_by(f64::total_cmp);
    let median = ratios[ratios.len() / 2];
    assert!((0.4..0.6).contains(&median), "median ratio {median}");
}
