//! Primal-graph diagnostics and detectors for the structures that decide
//! whether local search gets stuck: isolated variables, support clauses,
//! caps and crowns.

mod graph;
mod structures;

pub use graph::PrimalGraph;
pub use structures::{
    cap_minimum_assignment, count_caps, count_crowns, expected_caps_paper, find_caps, find_crowns,
    is_k_isolated, isolation_pair_scan, isolation_pair_scan_with_graph, pnn_positive_positions,
    support_clauses, verify_cap, verify_crown, Cap, Crown,
};

use serde::{Deserialize, Serialize};

use crate::cnf::Formula;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub m: usize,
    pub caps: usize,
    pub crowns: usize,
    pub max_degree: usize,
    pub isolation_d1: usize,
    pub isolation_d2: usize,
    pub isolation_pairs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_list: Option<Vec<Cap>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crown_list: Option<Vec<Crown>>,
}

pub fn census(f: &Formula, d1: usize, d2: usize, with_lists: bool) -> CensusReport {
    let g = PrimalGraph::new(f);
    let caps = find_caps(f);
    let crowns = find_crowns(f);
    CensusReport {
        n: f.num_vars(),
        m: f.num_clauses(),
        caps: caps.len(),
        crowns: crowns.len(),
        max_degree: g.max_degree(),
        isolation_d1: d1,
        isolation_d2: d2,
        isolation_pairs: isolation_pair_scan_with_graph(f, &g, d1, d2).len(),
        cap_list: with_lists.then_some(caps),
        crown_list: with_lists.then_some(crowns),
    }
}
