//! Centrality measures, rankings and central-set selection.

mod classic;
mod information;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::graph::{NodeId, WeightedGraph};
use crate::{Error, Result};

pub use classic::{
    betweenness_centrality, closeness_centrality, degree_centrality, eigenvector_centrality,
    EIGENVECTOR_MAX_ITER, EIGENVECTOR_TOLERANCE,
};
pub use information::{
    default_max_hops, information_centrality, information_measure_exact, information_measure_pathsum,
    information_table_pathsum, IcMethod, InformationTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    InformationExact,
    InformationPathSum,
    Closeness,
    Betweenness,
    Eigenvector,
    Degree,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::InformationExact,
        Measure::InformationPathSum,
        Measure::Closeness,
        Measure::Betweenness,
        Measure::Eigenvector,
        Measure::Degree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::InformationExact => "information_exact",
            Measure::InformationPathSum => "information_pathsum",
            Measure::Closeness => "closeness",
            Measure::Betweenness => "betweenness",
            Measure::Eigenvector => "eigenvector",
            Measure::Degree => "degree",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(alloc::format!("unknown measure `{s}`")))
    }
}

/// Scores within this relative distance of each other rank as ties.
pub const RANK_TIE_TOLERANCE: f64 = 1e-9;

/// Per-node scores for one measure, with the derived ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityReport {
    pub measure: Measure,
    pub scores: Vec<f64>,
    /// Most central first; ties broken by ascending node id.
    pub ranking: Vec<NodeId>,
}

impl CentralityReport {
    pub fn new(measure: Measure, scores: Vec<f64>) -> Self {
        let ranking = rank_descending(&scores);
        Self { measure, scores, ranking }
    }

    /// 1-based rank of every node.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = alloc::vec![0; self.scores.len()];
        for (pos, v) in self.ranking.iter().enumerate() {
            ranks[v.index()] = pos + 1;
        }
        ranks
    }
}

/// Orders nodes by descending score. Runs of scores whose neighbours differ by at
/// most [`RANK_TIE_TOLERANCE`] (relative) are treated as ties and ordered by id.
pub fn rank_descending(scores: &[f64]) -> Vec<NodeId> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && near(scores[order[end - 1]], scores[order[end]]) {
            end += 1;
        }
        order[start..end].sort_unstable();
        start = end;
    }
    order.into_iter().map(NodeId::from).collect()
}

fn near(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= RANK_TIE_TOLERANCE * a.abs().max(b.abs())
}

/// The top of a ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralSet {
    /// In rank order.
    pub members: Vec<NodeId>,
    pub fraction: f64,
    membership: Vec<bool>,
}

impl CentralSet {
    pub fn contains(&self, v: NodeId) -> bool {
        self.membership.get(v.index()).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.membership.len()
    }
}

/// Number of central nodes for `fraction` of `n`: `ceil(fraction * n)`, guarding
/// against products such as `0.15 * 200 = 30.000000000000004`.
pub fn central_count(n: usize, fraction: f64) -> usize {
    let raw = fraction * n as f64;
    let rounded = libm::round(raw);
    let count = if (raw - rounded).abs() < 1e-9 { rounded } else { libm::ceil(raw) };
    (count as usize).min(n)
}

/// Takes the `ceil(fraction * n)` first nodes of `ranking`.
pub fn select_top(ranking: &[NodeId], fraction: f64) -> Result<CentralSet> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Config(alloc::format!("central fraction {fraction} outside (0, 1]")));
    }
    let n = ranking.len();
    let members = ranking[..central_count(n, fraction)].to_vec();
    let mut membership = alloc::vec![false; n];
    for v in &members {
        membership[v.index()] = true;
    }
    Ok(CentralSet { members, fraction, membership })
}

pub fn select_central(report: &CentralityReport, fraction: f64) -> Result<CentralSet> {
    select_top(&report.ranking, fraction)
}

/// Computes `measure` on `g`. Path-sum IC uses [`default_max_hops`].
pub fn compute(g: &WeightedGraph, measure: Measure) -> Result<CentralityReport> {
    match measure {
        Measure::InformationExact => information_centrality(g, IcMethod::Exact),
        Measure::InformationPathSum => {
            information_centrality(g, IcMethod::PathSum { max_hops: default_max_hops(g.node_count()) })
        }
        Measure::Closeness => closeness_centrality(g),
        Measure::Betweenness => betweenness_centrality(g),
        Measure::Eigenvector => eigenvector_centrality(g, EIGENVECTOR_TOLERANCE, EIGENVECTOR_MAX_ITER),
        Measure::Degree => Ok(degree_centrality(g)),
    }
}
