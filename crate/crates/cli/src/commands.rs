//! Single-step commands and the table builders shared with `reproduce`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;
use ypc_core::baselines::{compute, BaselineParams, CentralityVector, Measure};
use ypc_core::epidemics::{spread_scores, EpidemicConfig, Model, Modulation, SpreadOutcome};
use ypc_core::generators::{ba_generate, BaParams};
use ypc_core::ranking::{
    comparison_rows, kendall_tau, rank_from_scores, scatter_rows, Orientation, TauVariant,
};
use ypc_core::ypc::{radius_stats, ypc_all, RadiusStats, YpcParams, YpcResult};
use ypc_core::{Graph, NodeId};

use crate::files::{sibling, suffixed, InputError, Recorder};
use crate::manifest::{resolve_seed, RunManifest};
use crate::{CentralityArgs, CompareArgs, Format, GenerateArgs, GraphModel, SpreadArgs, TauArg, YpcArgs};

#[derive(Debug, Serialize)]
struct YpcRow {
    node_id: NodeId,
    ypc_score: f64,
    radius: usize,
    rank: f64,
}

#[derive(Debug, Serialize)]
struct CentralityRow {
    node_id: NodeId,
    measure: &'static str,
    score: f64,
}

#[derive(Debug, Serialize)]
struct SpreadRow {
    node_id: NodeId,
    model: String,
    score: f64,
    stderr: f64,
}

#[derive(Debug, Serialize)]
struct RunRow {
    node_id: NodeId,
    run: usize,
    score: f64,
}

#[derive(Debug, Serialize)]
pub(crate) struct YpcSummary {
    pub nodes: usize,
    pub radius: RadiusStats,
}

pub(crate) fn finish(rec: Recorder, mut manifest: RunManifest, path: &Path) -> Result<()> {
    manifest.inputs = rec.inputs;
    manifest.outputs = rec.outputs;
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Scores every node; writes the ranking table and a radius summary.
pub(crate) fn write_ypc(
    rec: &mut Recorder,
    g: &Graph,
    p: &YpcParams,
    out: &Path,
    format: Format,
) -> Result<(Vec<YpcResult>, RadiusStats)> {
    let results = ypc_all(g, p)?;
    let scores: BTreeMap<NodeId, f64> = results.iter().map(|r| (r.node, r.score)).collect();
    let ranks = rank_from_scores(&scores, Orientation::Ascending)?;
    let rows: Vec<YpcRow> = results
        .iter()
        .map(|r| YpcRow {
            node_id: r.node,
            ypc_score: r.score,
            radius: r.radius,
            rank: ranks.rank_of[&r.node],
        })
        .collect();
    rec.write_table(out, &rows, format)?;
    let stats = radius_stats(&results)?;
    rec.write_json(
        &sibling(out, "radius.json"),
        &YpcSummary {
            nodes: results.len(),
            radius: stats.clone(),
        },
    )?;
    Ok((results, stats))
}

pub(crate) fn write_centrality(
    rec: &mut Recorder,
    g: &Graph,
    measure: Measure,
    p: &BaselineParams,
    out: &Path,
    format: Format,
) -> Result<CentralityVector> {
    let cv = compute(g, measure, p)?;
    let rows: Vec<CentralityRow> = cv
        .scores
        .iter()
        .map(|(&node_id, &score)| CentralityRow {
            node_id,
            measure: measure.tag(),
            score,
        })
        .collect();
    rec.write_table(out, &rows, format)?;
    Ok(cv)
}

pub(crate) fn write_spread(
    rec: &mut Recorder,
    g: &Graph,
    cfg: &EpidemicConfig,
    keep_runs: bool,
    out: &Path,
    format: Format,
) -> Result<Vec<SpreadOutcome>> {
    let outcomes = spread_scores(g, cfg, keep_runs)?;
    let rows: Vec<SpreadRow> = outcomes
        .iter()
        .map(|o| SpreadRow {
            node_id: o.seed,
            model: cfg.model.to_string(),
            score: o.score,
            stderr: o.stderr,
        })
        .collect();
    rec.write_table(out, &rows, format)?;
    if keep_runs {
        let runs: Vec<RunRow> = outcomes
            .iter()
            .flat_map(|o| {
                o.per_run.iter().flatten().enumerate().map(|(run, &score)| RunRow {
                    node_id: o.seed,
                    run,
                    score,
                })
            })
            .collect();
        rec.write_table(&sibling(out, "runs"), &runs, format)?;
    }
    Ok(outcomes)
}

/// One side of a comparison: scores plus how to read them.
#[derive(Debug, Clone)]
pub(crate) struct ScoreTable {
    pub source: String,
    pub column: String,
    pub orientation: Orientation,
    pub scores: BTreeMap<NodeId, f64>,
}

#[derive(Debug, Serialize)]
pub(crate) struct Side {
    pub source: String,
    pub column: String,
    pub orientation: Orientation,
}

#[derive(Debug, Serialize)]
pub(crate) struct CompareSummary {
    pub a: Side,
    pub b: Side,
    pub variant: TauVariant,
    pub tau: f64,
    pub tau_a: f64,
    pub tau_b: f64,
    pub p_value: f64,
    pub n: usize,
    pub concordant: u64,
    pub discordant: u64,
    pub ties_a: u64,
    pub ties_b: u64,
    pub slope: f64,
    pub intercept: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    pub stride: usize,
}

/// Tau over all nodes; comparison rows thinned by `stride`; scatter and fit.
pub(crate) fn write_comparison(
    rec: &mut Recorder,
    a: &ScoreTable,
    b: &ScoreTable,
    variant: TauVariant,
    stride: usize,
    prefix: &Path,
) -> Result<CompareSummary> {
    let ra = rank_from_scores(&a.scores, a.orientation)?;
    let rb = rank_from_scores(&b.scores, b.orientation)?;
    let cmp = kendall_tau(&ra, &rb, variant)?;
    let rows = comparison_rows(&ra, &rb, stride)?;
    let scatter = scatter_rows(&a.scores, &b.scores)?;
    rec.write_table(&suffixed(prefix, "comparison"), &rows, Format::Both)?;
    rec.write_table(&suffixed(prefix, "scatter"), &scatter.rows, Format::Both)?;
    let summary = CompareSummary {
        a: Side {
            source: a.source.clone(),
            column: a.column.clone(),
            orientation: a.orientation,
        },
        b: Side {
            source: b.source.clone(),
            column: b.column.clone(),
            orientation: b.orientation,
        },
        variant,
        tau: cmp.tau,
        tau_a: cmp.tau_a,
        tau_b: cmp.tau_b,
        p_value: cmp.p_value,
        n: cmp.n,
        concordant: cmp.concordant,
        discordant: cmp.discordant,
        ties_a: cmp.ties_a,
        ties_b: cmp.ties_b,
        slope: scatter.slope,
        intercept: scatter.intercept,
        mean_a: scatter.mean_a,
        mean_b: scatter.mean_b,
        stride,
    };
    rec.write_json(&suffixed(prefix, "summary.json"), &summary)?;
    Ok(summary)
}

pub(crate) fn ypc(args: &YpcArgs, argv: Vec<String>) -> Result<()> {
    let p = YpcParams {
        alpha: args.alpha,
        threshold: args.threshold,
        max_radius: args.max_radius,
    };
    p.validate()?;
    let mut rec = Recorder::default();
    let g = rec.load_graph(&args.input)?;
    let (_, stats) = write_ypc(&mut rec, &g, &p, &args.out, args.format)?;
    println!(
        "{} nodes; radius min {} max {} mean {:.3}",
        g.num_nodes(),
        stats.min,
        stats.max,
        stats.mean
    );
    let manifest = RunManifest::new("ypc", argv, json!({ "ypc": p }), None);
    finish(rec, manifest, &sibling(&args.out, "manifest.json"))
}

pub(crate) fn centrality(args: &CentralityArgs, argv: Vec<String>) -> Result<()> {
    let p = BaselineParams {
        iterations: args.iterations,
        tolerance: args.tolerance,
        damping: args.damping,
        gravity_cutoff: args.gravity_cutoff,
        gravity_exponent: args.gravity_exponent,
    };
    let mut rec = Recorder::default();
    let g = rec.load_graph(&args.input)?;
    write_centrality(&mut rec, &g, args.measure, &p, &args.out, args.format)?;
    let manifest = RunManifest::new(
        "centrality",
        argv,
        json!({ "measure": args.measure.tag(), "baselines": p }),
        None,
    );
    finish(rec, manifest, &sibling(&args.out, "manifest.json"))
}

pub(crate) fn spread(args: &SpreadArgs, mut argv: Vec<String>) -> Result<()> {
    let gamma_coeff = match (args.model, args.gamma_coeff) {
        (Model::SIS, None) => {
            return Err(InputError("--gamma-coeff is required for SIS".into()).into());
        }
        (Model::SI, Some(g)) if g != 0.0 => {
            log::warn!("--gamma-coeff is ignored for SI");
            0.0
        }
        (_, g) => g.unwrap_or(0.0),
    };
    let modulation = args.modulation.unwrap_or(match args.model {
        Model::SI => Modulation::Plain,
        Model::SIS => Modulation::Degree,
    });
    let rng_seed = resolve_seed(args.rng_seed, &mut argv);
    let cfg = EpidemicConfig {
        model: args.model,
        beta_coeff: args.beta_coeff,
        gamma_coeff,
        modulation,
        sis_scoring: args.scoring,
        steps: args.steps,
        runs: args.runs,
        rng_seed,
    };
    cfg.validate()?;
    let mut rec = Recorder::default();
    let g = rec.load_graph(&args.input)?;
    write_spread(&mut rec, &g, &cfg, args.keep_runs, &args.out, args.format)?;
    let manifest = RunManifest::new("spread", argv, json!({ "epidemic": cfg }), Some(rng_seed));
    finish(rec, manifest, &sibling(&args.out, "manifest.json"))
}

/// Reads `node_id` and a score column from a CSV written by this tool (or
/// any CSV with those headers) and infers the orientation when not given.
pub(crate) fn read_score_table(
    rec: &mut Recorder,
    path: &Path,
    column: Option<&str>,
    orientation: Option<Orientation>,
) -> Result<ScoreTable> {
    let text = rec.read(path)?;
    let bad = |msg: String| InputError(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let node_col = find("node_id").ok_or_else(|| bad("no `node_id` column".into()))?;
    let column = match column {
        Some(c) => c.to_string(),
        None => ["ypc_score", "score"]
            .into_iter()
            .find(|c| find(c).is_some())
            .ok_or_else(|| bad("no `ypc_score` or `score` column; pass a column name".into()))?
            .to_string(),
    };
    let score_col = find(&column).ok_or_else(|| bad(format!("no `{column}` column")))?;
    let measure_col = find("measure");

    let mut scores = BTreeMap::new();
    let mut measure: Option<Measure> = None;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let line = i + 2;
        let node: NodeId = record[node_col]
            .trim()
            .parse()
            .map_err(|_| bad(format!("line {line}: bad node id `{}`", &record[node_col])))?;
        let score: f64 = record[score_col]
            .trim()
            .parse()
            .map_err(|_| bad(format!("line {line}: bad score `{}`", &record[score_col])))?;
        if !score.is_finite() {
            return Err(bad(format!("line {line}: score {score} is not finite")).into());
        }
        if scores.insert(node, score).is_some() {
            return Err(bad(format!("line {line}: node {node} appears twice")).into());
        }
        if let (None, Some(c)) = (measure, measure_col) {
            measure = record[c].parse().ok();
        }
    }
    let orientation = orientation.unwrap_or_else(|| {
        if column == "ypc_score" {
            Orientation::Ascending
        } else {
            measure.map_or(Orientation::Descending, Measure::orientation)
        }
    });
    log::info!("{}: {} scores from `{column}`, {orientation}", path.display(), scores.len());
    Ok(ScoreTable {
        source: path.display().to_string(),
        column,
        orientation,
        scores,
    })
}

pub(crate) fn compare(args: &CompareArgs, argv: Vec<String>) -> Result<()> {
    if args.stride == 0 {
        return Err(InputError("--stride must be at least 1".into()).into());
    }
    let mut rec = Recorder::default();
    let a = read_score_table(&mut rec, &args.a, args.column_a.as_deref(), args.orientation_a)?;
    let b = read_score_table(&mut rec, &args.b, args.column_b.as_deref(), args.orientation_b)?;
    let variant = match args.variant {
        TauArg::A => TauVariant::A,
        TauArg::B => TauVariant::B,
    };
    let s = write_comparison(&mut rec, &a, &b, variant, args.stride, &args.out_prefix)?;
    println!(
        "tau {:.6} (tau-a {:.6}, tau-b {:.6}) p {:.6e} n {} C {} D {}",
        s.tau, s.tau_a, s.tau_b, s.p_value, s.n, s.concordant, s.discordant
    );
    let manifest = RunManifest::new(
        "compare",
        argv,
        json!({
            "column_a": a.column,
            "column_b": b.column,
            "orientation_a": a.orientation,
            "orientation_b": b.orientation,
            "variant": variant,
            "stride": args.stride,
        }),
        None,
    );
    finish(rec, manifest, &suffixed(&args.out_prefix, "manifest.json"))
}

pub(crate) fn generate(args: &GenerateArgs, mut argv: Vec<String>) -> Result<()> {
    let GraphModel::Ba = args.model;
    let rng_seed = resolve_seed(args.rng_seed, &mut argv);
    let p = BaParams {
        n: args.n,
        m: args.m,
        rng_seed,
    };
    let g = ba_generate(&p)?;
    let mut rec = Recorder::default();
    rec.write(&args.out, g.to_edge_list().as_bytes())?;
    log::info!("wrote {} nodes, {} edges", g.num_nodes(), g.num_edges());
    let manifest = RunManifest::new("generate", argv, json!({ "model": "ba", "ba": p }), Some(rng_seed));
    finish(rec, manifest, &suffixed(&args.out.with_extension(""), "manifest.json"))
}
