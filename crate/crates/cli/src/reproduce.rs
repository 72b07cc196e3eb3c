//! End-to-end experiment pipelines: graph -> YPC -> SIS -> comparisons.

use std::collections::BTreeMap;

use anyhow::Result;
use serde::Serialize;
use serde_json::json;
use ypc_core::baselines::{BaselineParams, Measure};
use ypc_core::epidemics::EpidemicConfig;
use ypc_core::generators::{ba_generate, BaParams};
use ypc_core::ranking::{Orientation, TauVariant};
use ypc_core::ypc::{RadiusStats, YpcParams};
use ypc_core::Graph;

use crate::commands::{finish, write_centrality, write_comparison, write_spread, write_ypc, ScoreTable};
use crate::files::{InputError, Recorder};
use crate::manifest::{resolve_seed, RunManifest};
use crate::{Experiment, Format, GraphInput, ReproduceArgs};

const BA_NODES: usize = 100;
const BA_EDGES_PER_NODE: usize = 2;

/// SIS transmission and recovery coefficients per experiment.
pub fn sis_coefficients(experiment: Experiment) -> (f64, f64) {
    match experiment {
        Experiment::Ba => (0.01, 0.7),
        Experiment::Lesmis => (0.003, 0.7),
        Experiment::Facebook => (0.000_01, 0.7),
    }
}

pub fn dataset_file(experiment: Experiment) -> Option<&'static str> {
    match experiment {
        Experiment::Ba => None,
        Experiment::Lesmis => Some("lesmis.txt"),
        Experiment::Facebook => Some("facebook_combined.txt"),
    }
}

#[derive(Debug, Serialize)]
struct TauEntry {
    tau: f64,
    p_value: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    experiment: String,
    nodes: usize,
    edges: usize,
    rng_seed: u64,
    radius: RadiusStats,
    ypc_vs_sis: TauEntry,
    slope: f64,
    ypc_vs_baselines: BTreeMap<String, TauEntry>,
}

pub(crate) fn run(args: &ReproduceArgs, mut argv: Vec<String>) -> Result<()> {
    let rng_seed = resolve_seed(args.rng_seed, &mut argv);
    let out = &args.out;
    let mut rec = Recorder::default();

    let g = match dataset_file(args.experiment) {
        None => {
            let p = BaParams {
                n: BA_NODES,
                m: BA_EDGES_PER_NODE,
                rng_seed,
            };
            let g = ba_generate(&p)?;
            rec.write(&out.join("graph.txt"), g.to_edge_list().as_bytes())?;
            g
        }
        Some(name) => {
            let path = args.data_dir.join(name);
            if !path.is_file() {
                return Err(InputError(format!(
                    "dataset {} not found (set --data-dir or YPC_DATA_DIR)",
                    path.display()
                ))
                .into());
            }
            rec.load_graph(&GraphInput { graph: path, nodes: None })?
        }
    };
    log::info!("{}: {} nodes, {} edges", args.experiment, g.num_nodes(), g.num_edges());

    let ypc_params = YpcParams::default();
    let (ypc, radius) = write_ypc(&mut rec, &g, &ypc_params, &out.join("ypc.csv"), Format::Both)?;
    let ypc_table = ScoreTable {
        source: "ypc.csv".into(),
        column: "ypc_score".into(),
        orientation: Orientation::Ascending,
        scores: ypc.iter().map(|r| (r.node, r.score)).collect(),
    };

    let (beta, gamma) = sis_coefficients(args.experiment);
    let cfg = EpidemicConfig {
        steps: args.steps,
        runs: args.runs,
        ..EpidemicConfig::sis(beta, gamma, rng_seed)
    };
    let spread = write_spread(&mut rec, &g, &cfg, false, &out.join("sis.csv"), Format::Both)?;
    let sis_table = ScoreTable {
        source: "sis.csv".into(),
        column: "score".into(),
        orientation: Orientation::Descending,
        scores: spread.iter().map(|o| (o.seed, o.score)).collect(),
    };
    let vs_sis = write_comparison(&mut rec, &ypc_table, &sis_table, TauVariant::A, 1, &out.join("ypc_vs_sis"))?;

    let baseline_params = BaselineParams::default();
    let mut baselines = BTreeMap::new();
    if !args.no_baselines {
        for measure in Measure::ALL {
            let tag = measure.tag();
            baselines.insert(
                tag.to_string(),
                compare_baseline(&mut rec, &g, measure, &baseline_params, &ypc_table, args)?,
            );
        }
    }

    let summary = Summary {
        experiment: args.experiment.to_string(),
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        rng_seed,
        radius,
        ypc_vs_sis: TauEntry {
            tau: vs_sis.tau,
            p_value: vs_sis.p_value,
        },
        slope: vs_sis.slope,
        ypc_vs_baselines: baselines,
    };
    rec.write_json(&out.join("summary.json"), &summary)?;
    println!(
        "{}: n {} m {}; YPC vs SIS tau {:.4} p {:.3e}; radius {}..{} mean {:.2}",
        summary.experiment,
        summary.nodes,
        summary.edges,
        vs_sis.tau,
        vs_sis.p_value,
        summary.radius.min,
        summary.radius.max,
        summary.radius.mean
    );
    for (tag, t) in &summary.ypc_vs_baselines {
        println!("  YPC vs {tag:<6} tau {:.4} p {:.3e}", t.tau, t.p_value);
    }

    let manifest = RunManifest::new(
        "reproduce",
        argv,
        json!({
            "experiment": args.experiment.to_string(),
            "data_dir": args.data_dir.display().to_string(),
            "ypc": ypc_params,
            "epidemic": cfg,
            "baselines": if args.no_baselines { serde_json::Value::Null } else { json!(baseline_params) },
        }),
        Some(rng_seed),
    );
    finish(rec, manifest, &out.join("manifest.json"))
}

fn compare_baseline(
    rec: &mut Recorder,
    g: &Graph,
    measure: Measure,
    p: &BaselineParams,
    ypc: &ScoreTable,
    args: &ReproduceArgs,
) -> Result<TauEntry> {
    let tag = measure.tag();
    let file = format!("centrality_{tag}.csv");
    let cv = write_centrality(rec, g, measure, p, &args.out.join(&file), Format::Both)?;
    let table = ScoreTable {
        source: file,
        column: "score".into(),
        orientation: measure.orientation(),
        scores: cv.scores,
    };
    let s = write_comparison(rec, ypc, &table, TauVariant::A, 1, &args.out.join(format!("ypc_vs_{tag}")))?;
    Ok(TauEntry {
        tau: s.tau,
        p_value: s.p_value,
    })
}
