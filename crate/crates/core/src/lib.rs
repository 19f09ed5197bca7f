//! Sentinel node selection for systemic anomaly detection.
//!
//! The crate is split along the path data takes through an experiment:
//!
//! - [`graph`] holds the weighted undirected graph, path lengths, distances
//!   and the Laplacian.
//! - [`centrality`] computes information centrality (exact resistance form
//!   and a path-sum approximation) together with closeness, betweenness,
//!   eigenvector and degree centrality.
//! - [`netsim`] is a deterministic discrete-event simulator for a static
//!   multi-hop mesh: geometric topology, minimum-hop routing, CBR flows and
//!   DropTail egress queues.
//! - [`threat`] models the adversary: seeded corruption, infection that rides
//!   data packets, and flooding flows from infected nodes.
//! - [`detector`] learns per-node interval-volume baselines and turns
//!   threshold crossings into detection curves.
//! - [`experiment`] ties the above into replicated runs.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the `sentinel` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod centrality;
pub mod detector;
mod error;
pub mod experiment;
pub mod graph;
pub mod matrix;
pub mod netsim;
pub mod stats;
pub mod threat;

pub use error::{Error, Result};
pub use graph::{NodeId, Path, WeightedGraph};
pub use matrix::DenseMatrix;
