//! Yukawa potential centrality (YPC) for ranking influential spreaders in
//! undirected, unweighted networks.
//!
//! Besides the YPC score itself the crate carries the apparatus needed to
//! evaluate it: classical centrality baselines and gravity centrality, SI/SIS
//! Monte Carlo spreading, Kendall's tau rank correlation and a
//! Barabási–Albert generator.
//!
//! ```
//! use ypc_core::graph::Graph;
//! use ypc_core::ypc::{ypc_all, YpcParams};
//!
//! let g = Graph::load_edge_list("0 1\n0 2\n0 3\n0 4").unwrap();
//! let ranking = ypc_all(&g, &YpcParams::default()).unwrap();
//! assert_eq!(ranking[0].node, 0);
//! ```

pub mod baselines;
pub mod epidemics;
mod error;
pub mod generators;
pub mod graph;
pub mod ranking;
pub mod ypc;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
