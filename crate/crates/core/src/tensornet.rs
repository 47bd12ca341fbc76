//! Perfect-tensor networks: rank-6 nodes joined by maximally entangled
//! links, contracted into boundary states through a dense or a stabilizer
//! backend.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuits::{graph_state, perfect_graph_fixture, Graph};
use crate::error::{Error, Result};
use crate::qmath::{
    bit_of, kron_amps, partial_trace_state, von_neumann_entropy, StateVector,
    MAX_DENSITY_QUBITS, MAX_STATE_QUBITS,
};
use crate::stabilizer::StabilizerTableau;

/// Every node exposes exactly this many legs.
pub const LEGS_PER_NODE: usize = 6;

/// Cap on the boundary size of the replica-trick contraction.
pub const MAX_REPLICA_QUBITS: usize = 12;

/// What a node contracts as: a graph-state preparation or an explicit state.
#[derive(Clone, Debug)]
pub enum TensorSource {
    GraphSpec(Graph),
    Explicit(StateVector),
}

/// A (node, leg) endpoint; legs number 0..5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LegRef {
    pub node: usize,
    pub leg: usize,
}

impl LegRef {
    pub fn new(node: usize, leg: usize) -> Self {
        Self { node, leg }
    }
}

impl std::fmt::Display for LegRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.node, self.leg)
    }
}

/// An internal link: a maximally entangled pair contracted against two legs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub a: LegRef,
    pub b: LegRef,
}

/// A structural problem found by [`TensorNetwork::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LegOutOfRange(LegRef),
    LegMultiplyUsed(LegRef),
    LegUnaccounted(LegRef),
    SelfLink(LegRef),
    ExplicitStateWrongArity { node: usize, n_qubits: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::LegOutOfRange(l) => write!(f, "leg {l} out of range"),
            Violation::LegMultiplyUsed(l) => write!(f, "leg {l} multiply used"),
            Violation::LegUnaccounted(l) => {
                write!(f, "leg {l} appears in no link and no dangling slot")
            }
            Violation::SelfLink(l) => write!(f, "link connects leg {l} to itself"),
            Violation::ExplicitStateWrongArity { node, n_qubits } => {
                write!(f, "node {node} carries a {n_qubits}-qubit state, expected 6")
            }
        }
    }
}

/// A network of rank-6 tensors with Bell-pair links and an explicit ordering
/// of the dangling (boundary) legs.
#[derive(Clone, Debug, Default)]
pub struct TensorNetwork {
    nodes: Vec<TensorSource>,
    links: Vec<Link>,
    dangling: Vec<LegRef>,
}

impl TensorNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds directly from parts without checking; pair with [`validate`].
    pub fn from_parts(nodes: Vec<TensorSource>, links: Vec<Link>, dangling: Vec<LegRef>) -> Self {
        Self {
            nodes,
            links,
            dangling,
        }
    }

    /// Adds a node; its six legs are appended to the dangling order.
    pub fn add_node(&mut self, source: TensorSource) -> usize {
        let id = self.nodes.len();
        self.nodes.push(source);
        for leg in 0..LEGS_PER_NODE {
            self.dangling.push(LegRef::new(id, leg));
        }
        id
    }

    /// Connects two currently dangling legs with a link, removing them from
    /// the boundary. Returns the link index.
    pub fn connect(&mut self, a: LegRef, b: LegRef) -> Result<usize> {
        if a == b {
            return Err(Error::InvalidArgument(format!(
                "cannot link leg {a} to itself"
            )));
        }
        for leg in [a, b] {
            if !self.dangling.contains(&leg) {
                return Err(Error::InvalidArgument(format!(
                    "leg {leg} is not a dangling leg"
                )));
            }
        }
        self.dangling.retain(|&l| l != a && l != b);
        self.links.push(Link { a, b });
        Ok(self.links.len() - 1)
    }

    /// Replaces the dangling order; must be a permutation of the current one.
    pub fn set_dangling_order(&mut self, order: Vec<LegRef>) -> Result<()> {
        if order.len() != self.dangling.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} dangling legs, got {}",
                self.dangling.len(),
                order.len()
            )));
        }
        for leg in &order {
            if !self.dangling.contains(leg) {
                return Err(Error::InvalidArgument(format!(
                    "leg {leg} is not a dangling leg"
                )));
            }
        }
        let mut sorted = order.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != order.len() {
            return Err(Error::InvalidArgument("duplicate dangling leg".into()));
        }
        self.dangling = order;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[TensorSource] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn dangling(&self) -> &[LegRef] {
        &self.dangling
    }

    /// Number of boundary qubits.
    pub fn boundary_size(&self) -> usize {
        self.dangling.len()
    }

    /// Checks every structural invariant, returning all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let in_range = |l: &LegRef| l.node < self.nodes.len() && l.leg < LEGS_PER_NODE;

        for (node, src) in self.nodes.iter().enumerate() {
            if let TensorSource::Explicit(state) = src {
                if state.n_qubits() != LEGS_PER_NODE {
                    violations.push(Violation::ExplicitStateWrongArity {
                        node,
                        n_qubits: state.n_qubits(),
                    });
                }
            }
        }

        let mut use_count = vec![vec![0usize; LEGS_PER_NODE]; self.nodes.len()];
        let mut mark = |l: LegRef, violations: &mut Vec<Violation>| {
            if in_range(&l) {
                use_count[l.node][l.leg] += 1;
            } else {
                violations.push(Violation::LegOutOfRange(l));
            }
        };
        for link in &self.links {
            if link.a == link.b {
                violations.push(Violation::SelfLink(link.a));
            }
            mark(link.a, &mut violations);
            mark(link.b, &mut violations);
        }
        for &leg in &self.dangling {
            mark(leg, &mut violations);
        }
        for (node, counts) in use_count.iter().enumerate() {
            for (leg, &c) in counts.iter().enumerate() {
                let l = LegRef::new(node, leg);
                if c == 0 {
                    violations.push(Violation::LegUnaccounted(l));
                } else if c > 1 {
                    violations.push(Violation::LegMultiplyUsed(l));
                }
            }
        }
        violations
    }

    fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        let joined = violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::Validation(format!("invalid network: {joined}")))
    }
}

/// Hexagonal perfect-tensor network.
///
/// `layers = 0` is a single node with all six legs dangling; `layers = 1`
/// links a central node once to each of six outer nodes, with the 30
/// remaining outer legs dangling in clockwise order starting from outer
/// node 0.
pub fn build_hexagonal_tn(layers: usize) -> Result<TensorNetwork> {
    let graph = perfect_graph_fixture();
    let mut tn = TensorNetwork::new();
    match layers {
        0 => {
            tn.add_node(TensorSource::GraphSpec(graph));
        }
        1 => {
            let center = tn.add_node(TensorSource::GraphSpec(graph.clone()));
            for i in 0..6 {
                let outer = tn.add_node(TensorSource::GraphSpec(graph.clone()));
                tn.connect(LegRef::new(center, i), LegRef::new(outer, 0))?;
            }
            let mut order = Vec::with_capacity(30);
            for outer in 1..=6usize {
                for leg in 1..LEGS_PER_NODE {
                    order.push(LegRef::new(outer, leg));
                }
            }
            tn.set_dangling_order(order)?;
        }
        _ => {
            return Err(Error::UnsupportedScale(format!(
                "hexagonal networks support layers 0 and 1, got {layers}"
            )));
        }
    }
    Ok(tn)
}

/// A subset of boundary-qubit positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRegion {
    indices: Vec<usize>,
}

impl BoundaryRegion {
    pub fn new(indices: Vec<usize>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn complement(&self, boundary_size: usize) -> BoundaryRegion {
        BoundaryRegion::new(
            (0..boundary_size)
                .filter(|i| !self.indices.contains(i))
                .collect(),
        )
    }

    /// Validates the region against a boundary of the given size.
    pub fn check(&self, boundary_size: usize) -> Result<()> {
        for (i, &d) in self.indices.iter().enumerate() {
            if d >= boundary_size {
                return Err(Error::InvalidArgument(format!(
                    "boundary index {d} out of range for {boundary_size} legs"
                )));
            }
            if self.indices[..i].contains(&d) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate boundary index {d}"
                )));
            }
        }
        Ok(())
    }
}

/// Which contraction backend to use for entropies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Dense,
    Stabilizer,
}

/// A contracted boundary state plus the norm factor discarded while
/// renormalizing.
#[derive(Clone, Debug)]
pub struct ContractedState {
    pub state: StateVector,
    pub norm_factor: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RegisterQubit {
    NodeLeg(LegRef),
    LinkEnd { link: usize, end: usize },
}

/// Contracts the network densely: tensor the node states, then take the
/// Bell inner product at both endpoints of every internal link.
pub fn contract_dense(tn: &TensorNetwork) -> Result<ContractedState> {
    tn.ensure_valid()?;
    let node_qubits = LEGS_PER_NODE * tn.node_count();
    if node_qubits > MAX_STATE_QUBITS {
        return Err(Error::UnsupportedScale(format!(
            "{node_qubits} node qubits exceed the {MAX_STATE_QUBITS}-qubit dense cap"
        )));
    }

    // assemble the node register
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    let mut registry: Vec<RegisterQubit> = Vec::new();
    for (id, source) in tn.nodes.iter().enumerate() {
        let node_state = match source {
            TensorSource::GraphSpec(g) => graph_state(g)?,
            TensorSource::Explicit(s) => s.clone(),
        };
        amps = kron_amps(&amps, node_state.amplitudes());
        for leg in 0..LEGS_PER_NODE {
            registry.push(RegisterQubit::NodeLeg(LegRef::new(id, leg)));
        }
    }

    // contract one link at a time: append its Bell pair, then project both
    // endpoint pairs
    let bell = [
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ];
    for (link_id, link) in tn.links.iter().enumerate() {
        amps = kron_amps(&amps, &bell);
        registry.push(RegisterQubit::LinkEnd {
            link: link_id,
            end: 0,
        });
        registry.push(RegisterQubit::LinkEnd {
            link: link_id,
            end: 1,
        });
        for (leg, end) in [(link.a, 0usize), (link.b, 1usize)] {
            let u = position_of(&registry, RegisterQubit::NodeLeg(leg));
            let v = position_of(&registry, RegisterQubit::LinkEnd { link: link_id, end });
            amps = project_bell_pair(&amps, registry.len(), u, v);
            let hi = u.max(v);
            let lo = u.min(v);
            registry.remove(hi);
            registry.remove(lo);
            let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            if norm_sq < 1e-24 {
                return Err(Error::Contraction {
                    link: link_id,
                    detail: "zero-norm state after Bell projection".into(),
                });
            }
        }
    }

    // reorder the surviving legs to the network's dangling order
    let b = registry.len();
    debug_assert_eq!(b, tn.boundary_size());
    let mut new_pos = vec![0usize; b];
    for (current, q) in registry.iter().enumerate() {
        let RegisterQubit::NodeLeg(leg) = q else {
            return Err(Error::Internal("link qubit survived contraction".into()));
        };
        let target = tn
            .dangling
            .iter()
            .position(|d| d == leg)
            .ok_or_else(|| Error::Internal(format!("leg {leg} missing from dangling order")))?;
        new_pos[current] = target;
    }
    let amps = permute_amplitudes(&amps, b, &new_pos);
    let (state, norm_factor) = StateVector::from_raw(b, amps)?;
    Ok(ContractedState { state, norm_factor })
}

/// Contracts through the stabilizer backend; every node must be a graph
/// spec.
pub fn contract_stabilizer(tn: &TensorNetwork) -> Result<StabilizerTableau> {
    tn.ensure_valid()?;
    let mut tableau: Option<StabilizerTableau> = None;
    let mut registry: Vec<RegisterQubit> = Vec::new();
    for (id, source) in tn.nodes.iter().enumerate() {
        let TensorSource::GraphSpec(g) = source else {
            return Err(Error::InvalidArgument(format!(
                "node {id} is not a graph-state spec; the stabilizer backend requires one"
            )));
        };
        let node = StabilizerTableau::from_graph(g);
        tableau = Some(match tableau {
            Some(t) => t.tensor(&node),
            None => node,
        });
        for leg in 0..LEGS_PER_NODE {
            registry.push(RegisterQubit::NodeLeg(LegRef::new(id, leg)));
        }
    }
    let mut tableau = tableau.ok_or_else(|| Error::InvalidArgument("empty network".into()))?;

    for (link_id, link) in tn.links.iter().enumerate() {
        tableau = tableau.tensor(&StabilizerTableau::bell_pair());
        registry.push(RegisterQubit::LinkEnd {
            link: link_id,
            end: 0,
        });
        registry.push(RegisterQubit::LinkEnd {
            link: link_id,
            end: 1,
        });
        for (leg, end) in [(link.a, 0usize), (link.b, 1usize)] {
            let u = position_of(&registry, RegisterQubit::NodeLeg(leg));
            let v = position_of(&registry, RegisterQubit::LinkEnd { link: link_id, end });
            tableau = tableau.postselect_bell(u, v).map_err(|e| match e {
                Error::PostselectImpossible { .. } => Error::Contraction {
                    link: link_id,
                    detail: "zero-probability Bell post-selection".into(),
                },
                other => other,
            })?;
            let hi = u.max(v);
            let lo = u.min(v);
            registry.remove(hi);
            registry.remove(lo);
        }
    }

    let b = registry.len();
    debug_assert_eq!(b, tn.boundary_size());
    let mut perm = vec![0usize; b];
    for (current, q) in registry.iter().enumerate() {
        let RegisterQubit::NodeLeg(leg) = q else {
            return Err(Error::Internal("link qubit survived contraction".into()));
        };
        let target = tn
            .dangling
            .iter()
            .position(|d| d == leg)
            .ok_or_else(|| Error::Internal(format!("leg {leg} missing from dangling order")))?;
        perm[current] = target;
    }
    tableau.permute(&perm)
}

/// Entanglement entropy of a boundary region in bits, through the requested
/// backend. Both backends agree wherever both are feasible.
pub fn boundary_entropy(tn: &TensorNetwork, region: &BoundaryRegion, backend: Backend) -> Result<f64> {
    region.check(tn.boundary_size())?;
    match backend {
        Backend::Stabilizer => {
            let tableau = contract_stabilizer(tn)?;
            Ok(tableau.entanglement_entropy(region.indices()) as f64)
        }
        Backend::Dense => {
            let contracted = contract_dense(tn)?;
            let b = tn.boundary_size();
            // the contracted state is pure, so a region and its complement
            // have equal entropy; reduce whichever side fits the density cap
            let side: Vec<usize> = if region.len() <= MAX_DENSITY_QUBITS {
                region.indices().to_vec()
            } else {
                region.complement(b).indices().to_vec()
            };
            if side.len() > MAX_DENSITY_QUBITS {
                return Err(Error::UnsupportedScale(format!(
                    "both the region and its complement exceed {MAX_DENSITY_QUBITS} qubits"
                )));
            }
            von_neumann_entropy(&partial_trace_state(&contracted.state, &side)?)
        }
    }
}

/// Renyi-2 entropy of a boundary region via the two-copy swap contraction,
/// without forming the boundary density matrix:
/// -log2 [ tr rho_A^2 / (tr rho_A)^2 ].
pub fn renyi2_via_replica(tn: &TensorNetwork, region: &BoundaryRegion) -> Result<f64> {
    region.check(tn.boundary_size())?;
    let contracted = contract_dense(tn)?;
    let b = tn.boundary_size();
    if b > MAX_REPLICA_QUBITS {
        return Err(Error::UnsupportedScale(format!(
            "replica contraction supports at most {MAX_REPLICA_QUBITS} boundary qubits, got {b}"
        )));
    }
    let amps = contracted.state.amplitudes();
    let mut a_mask = 0usize;
    for &d in region.indices() {
        a_mask |= 1 << (b - 1 - d);
    }
    let rest_mask = ((1usize << b) - 1) ^ a_mask;
    let dim = 1usize << b;
    let mut tr_sq = 0.0f64;
    for x in 0..dim {
        for y in 0..dim {
            let s1 = (x & rest_mask) | (y & a_mask);
            let s2 = (y & rest_mask) | (x & a_mask);
            tr_sq += (amps[x] * amps[y] * amps[s1].conj() * amps[s2].conj()).re;
        }
    }
    // the contracted state is normalized, so tr rho_A = 1 exactly
    let tr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    Ok(-(tr_sq / (tr * tr)).log2())
}

fn position_of(registry: &[RegisterQubit], q: RegisterQubit) -> usize {
    registry
        .iter()
        .position(|&r| r == q)
        .expect("register qubit present")
}

/// Applies <Bell| to qubits `u`, `v` of an n-qubit raw amplitude vector,
/// producing an (n-2)-qubit raw vector.
fn project_bell_pair(amps: &[Complex64], n: usize, u: usize, v: usize) -> Vec<Complex64> {
    let keep: Vec<usize> = (0..n).filter(|&q| q != u && q != v).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << keep.len()];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (idx, &amp) in amps.iter().enumerate() {
        if bit_of(idx, u, n) != bit_of(idx, v, n) {
            continue;
        }
        let mut target = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            target |= bit_of(idx, q, n) << (keep.len() - 1 - pos);
        }
        out[target] += amp * s;
    }
    out
}

/// Moves qubit `q` to position `new_pos[q]`.
fn permute_amplitudes(amps: &[Complex64], n: usize, new_pos: &[usize]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (idx, &amp) in amps.iter().enumerate() {
        let mut target = 0usize;
        for (q, &pos) in new_pos.iter().enumerate() {
            target |= bit_of(idx, q, n) << (n - 1 - pos);
        }
        out[target] = amp;
    }
    out
}

/// Versioned on-disk description of a tensor network (graph-spec nodes
/// only).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkFile {
    pub version: u32,
    pub nodes: Vec<NetworkFileNode>,
    pub links: Vec<[LegRef; 2]>,
    pub dangling: Vec<LegRef>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkFileNode {
    pub id: usize,
    pub graph: GraphSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

pub const NETWORK_FILE_VERSION: u32 = 1;

impl NetworkFile {
    pub fn from_network(tn: &TensorNetwork) -> Result<Self> {
        let mut nodes = Vec::with_capacity(tn.node_count());
        for (id, source) in tn.nodes().iter().enumerate() {
            let TensorSource::GraphSpec(g) = source else {
                return Err(Error::InvalidArgument(format!(
                    "node {id} holds an explicit state; only graph specs serialize"
                )));
            };
            nodes.push(NetworkFileNode {
                id,
                graph: GraphSpec {
                    n_vertices: g.n_vertices(),
                    edges: g.edge_vec(),
                },
            });
        }
        Ok(Self {
            version: NETWORK_FILE_VERSION,
            nodes,
            links: tn.links().iter().map(|l| [l.a, l.b]).collect(),
            dangling: tn.dangling().to_vec(),
        })
    }

    pub fn into_network(self) -> Result<TensorNetwork> {
        if self.version != NETWORK_FILE_VERSION {
            return Err(Error::Configuration(format!(
                "unsupported network file version {} (expected {NETWORK_FILE_VERSION})",
                self.version
            )));
        }
        let mut nodes = vec![None; self.nodes.len()];
        for node in &self.nodes {
            if node.id >= nodes.len() || nodes[node.id].is_some() {
                return Err(Error::Configuration(format!(
                    "bad or duplicate node id {}",
                    node.id
                )));
            }
            nodes[node.id] = Some(TensorSource::GraphSpec(Graph::from_edges(
                node.graph.n_vertices,
                &node.graph.edges,
            )?));
        }
        let nodes: Vec<TensorSource> = nodes
            .into_iter()
            .map(|n| n.ok_or_else(|| Error::Configuration("missing node id".into())))
            .collect::<Result<_>>()?;
        let links = self.links.iter().map(|&[a, b]| Link { a, b }).collect();
        let tn = TensorNetwork::from_parts(nodes, links, self.dangling);
        tn.ensure_valid()?;
        Ok(tn)
    }
}
