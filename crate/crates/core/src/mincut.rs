//! Minimal cut counting for tensor networks: the number of links a surface
//! anchored to a boundary region must sever, computed by unit-capacity
//! max-flow, with an exhaustive enumeration oracle for small networks.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensornet::{BoundaryRegion, TensorNetwork};

/// Cap on links + dangling legs for the brute-force oracle.
pub const BRUTE_FORCE_EDGE_CAP: usize = 24;

/// Identifies a cuttable edge: an internal link or a dangling boundary leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CutEdgeId {
    Link(usize),
    Leg(usize),
}

impl std::fmt::Display for CutEdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CutEdgeId::Link(i) => write!(f, "link:{i}"),
            CutEdgeId::Leg(i) => write!(f, "leg:{i}"),
        }
    }
}

/// The flow problem derived from a network and a boundary region: one vertex
/// per node plus source and sink terminals; every link and every dangling
/// leg becomes a capacity-1 edge.
#[derive(Clone, Debug)]
pub struct CutProblem {
    n_nodes: usize,
    /// (id, from, to); terminals are `n_nodes` (source) and `n_nodes + 1`
    /// (sink). Link edges are undirected, terminal edges directed.
    edges: Vec<(CutEdgeId, usize, usize)>,
}

impl CutProblem {
    pub fn build(tn: &TensorNetwork, region: &BoundaryRegion) -> Result<Self> {
        region.check(tn.boundary_size())?;
        let n_nodes = tn.node_count();
        let source = n_nodes;
        let sink = n_nodes + 1;
        let mut edges = Vec::with_capacity(tn.links().len() + tn.boundary_size());
        for (i, link) in tn.links().iter().enumerate() {
            edges.push((CutEdgeId::Link(i), link.a.node, link.b.node));
        }
        for (pos, leg) in tn.dangling().iter().enumerate() {
            if region.indices().contains(&pos) {
                edges.push((CutEdgeId::Leg(pos), source, leg.node));
            } else {
                edges.push((CutEdgeId::Leg(pos), leg.node, sink));
            }
        }
        Ok(Self { n_nodes, edges })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn source(&self) -> usize {
        self.n_nodes
    }

    fn sink(&self) -> usize {
        self.n_nodes + 1
    }
}

/// A minimum cut: its size and the edges realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCutResult {
    pub value: usize,
    pub cut_edges: Vec<CutEdgeId>,
}

/// Minimal number of links/legs separating the region from the rest of the
/// boundary, via integral max-flow. The reported cut is the residual
/// source-reachability frontier, listed in ascending edge order.
pub fn min_cut(tn: &TensorNetwork, region: &BoundaryRegion) -> Result<MinCutResult> {
    let problem = CutProblem::build(tn, region)?;
    let n_vertices = problem.n_nodes + 2;

    // residual arcs: forward and backward entries per edge
    let mut arcs: Vec<(usize, usize, usize)> = Vec::new(); // (to, cap, paired arc)
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    let mut edge_arc: Vec<usize> = Vec::new();
    for &(_, from, to) in &problem.edges {
        let fwd = arcs.len();
        arcs.push((to, 1, fwd + 1));
        arcs.push((from, 1, fwd)); // links are undirected, so both directions carry capacity
        adjacency[from].push(fwd);
        adjacency[to].push(fwd + 1);
        edge_arc.push(fwd);
    }
    // terminal edges are directed: zero out the reverse capacity
    for (i, &(id, _, _)) in problem.edges.iter().enumerate() {
        if matches!(id, CutEdgeId::Leg(_)) {
            arcs[edge_arc[i] + 1].1 = 0;
        }
    }

    let (source, sink) = (problem.source(), problem.sink());
    let mut flow = 0usize;
    loop {
        // BFS over positive-capacity arcs
        let mut parent: Vec<Option<usize>> = vec![None; n_vertices];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(source);
        let mut seen = vec![false; n_vertices];
        seen[source] = true;
        while let Some(u) = queue.pop_front() {
            for &arc in &adjacency[u] {
                let (to, cap, _) = arcs[arc];
                if cap > 0 && !seen[to] {
                    seen[to] = true;
                    parent[to] = Some(arc);
                    queue.push_back(to);
                }
            }
        }
        if !seen[sink] {
            break;
        }
        // unit capacities: each augmenting path carries exactly 1
        let mut v = sink;
        while v != source {
            let arc = parent[v].expect("path arc");
            arcs[arc].1 -= 1;
            let paired = arcs[arc].2;
            arcs[paired].1 += 1;
            v = arcs[paired].0;
        }
        flow += 1;
    }

    // source side of the cut = residual reachability
    let mut reachable = vec![false; n_vertices];
    reachable[source] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &arc in &adjacency[u] {
            let (to, cap, _) = arcs[arc];
            if cap > 0 && !reachable[to] {
                reachable[to] = true;
                queue.push_back(to);
            }
        }
    }
    let mut cut_edges: Vec<CutEdgeId> = problem
        .edges
        .iter()
        .filter(|&&(_, from, to)| reachable[from] != reachable[to])
        .map(|&(id, _, _)| id)
        .collect();
    cut_edges.sort();
    debug_assert_eq!(cut_edges.len(), flow, "max-flow/min-cut duality violated");
    Ok(MinCutResult {
        value: flow,
        cut_edges,
    })
}

/// Exhaustive oracle: the minimum number of edges whose removal disconnects
/// the region's legs from the complement's legs. Checks subsets in order of
/// increasing size, so the first separating size is the answer.
pub fn enumerate_cuts_bruteforce(tn: &TensorNetwork, region: &BoundaryRegion) -> Result<usize> {
    let problem = CutProblem::build(tn, region)?;
    let e = problem.edge_count();
    if e > BRUTE_FORCE_EDGE_CAP {
        return Err(Error::UnsupportedScale(format!(
            "{e} edges exceed the {BRUTE_FORCE_EDGE_CAP}-edge brute-force cap"
        )));
    }
    let n_vertices = problem.n_nodes + 2;
    let connected = |removed: &[usize]| -> bool {
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
        for (i, &(_, from, to)) in problem.edges.iter().enumerate() {
            if removed.contains(&i) {
                continue;
            }
            adjacency[from].push(to);
            adjacency[to].push(from);
        }
        let mut seen = vec![false; n_vertices];
        let mut stack = vec![problem.source()];
        seen[problem.source()] = true;
        while let Some(u) = stack.pop() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen[problem.sink()]
    };
    for k in 0..=e {
        for removed in (0..e).combinations(k) {
            if !connected(&removed) {
                return Ok(k);
            }
        }
    }
    // removing every edge always disconnects the terminals unless one side
    // has no legs at all, in which case the cut is empty
    Ok(0)
}
