//! Discovery problems: the structure (a graph, a formula, or a set system)
//! is hidden behind per-pair satisfiability instances and must be
//! discovered through the oracle. Ships the vertex-cover reconfiguration
//! problem on discovered graphs, its kernelization through a
//! polynomial-time full kernel for vertex cover, a BFS decider used as the
//! verification oracle, the 4-vertex gadget generator, and a generic
//! discovery kernelization wrapper.

mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cliquedel::{CfvdError, Graph};
use crate::formula::{CnfFormula, FormulaError, Literal};
use crate::oracle::{OracleError, OracleSession};

/// Ledger phase for per-pair discovery queries.
pub const PHASE_DISCOVER: &str = "discover";

/// Default cap on vertex count for the BFS decider.
pub const DEFAULT_BFS_GUARD: u32 = 20;

/// Witnesses are padded to the exact requested length only below this cap.
const WITNESS_PAD_CAP: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {vertex} out of range 1..={max}")]
    VertexOutOfRange { vertex: u32, max: u32 },
    #[error("invalid incidence pair: {detail}")]
    InvalidPair { detail: String },
    #[error("duplicate incidence pair ({a}, {b})")]
    DuplicatePair { a: i64, b: i64 },
    #[error("spec kind does not support this operation: {detail}")]
    KindMismatch { detail: String },
    #[error("the {which} set is not a vertex cover of the discovered graph")]
    NotACover { which: &'static str },
    #[error("the {which} set is not a minimal vertex cover of the discovered graph")]
    NotMinimal { which: &'static str },
    #[error("{vertices} vertices exceed the reconfiguration-search guard {guard}")]
    GuardExceeded { vertices: u32, guard: u32 },
    #[error("sequence length must be at least 1")]
    InvalidSequenceLength,
    #[error("discovered structure is malformed: {detail}")]
    InvalidDiscoveredStructure { detail: String },
    #[error("a cover within the bound exists but the full kernel reported infeasibility")]
    KernelContradiction,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Clique(#[from] CfvdError),
}

/// Constant-size satisfiability instances standing for a present or absent
/// incidence: yes is the empty clause list, no is a one-variable
/// contradiction.
pub fn make_trivial_cnf(answer: bool) -> CnfFormula {
    if answer {
        CnfFormula::new(0, Vec::new()).expect("empty CNF is valid")
    } else {
        CnfFormula::new(
            1,
            vec![vec![Literal::positive(1)], vec![Literal::negative(1)]],
        )
        .expect("contradiction pair is valid")
    }
}

/// Index-set shapes a discovery problem can range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncidenceKind {
    /// Unordered vertex pairs of a graph on `1..=vertices`.
    GraphEdges { vertices: u32 },
    /// (literal, clause) pairs of a CNF formula: literals are signed
    /// variable codes over `1..=variables`, clauses are `1..=clauses`.
    LiteralInClause { variables: u32, clauses: u32 },
    /// (element, set) pairs of a set system over `1..=universe`.
    ElementInSet { universe: u32, sets: u32 },
}

/// A complete map from index pairs to satisfiability instances; the hidden
/// structure contains a pair iff its instance is satisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSpec {
    kind: IncidenceKind,
    instances: BTreeMap<(i64, i64), CnfFormula>,
}

impl IncidenceSpec {
    /// Builds a graph-edges spec; unordered pairs are normalized and
    /// missing pairs default to the trivial no-instance.
    pub fn graph_edges(
        vertices: u32,
        pairs: impl IntoIterator<Item = ((u32, u32), CnfFormula)>,
    ) -> Result<Self, DiscoveryError> {
        let kind = IncidenceKind::GraphEdges { vertices };
        let mut instances = BTreeMap::new();
        for ((u, v), cnf) in pairs {
            if u == v {
                return Err(DiscoveryError::InvalidPair {
                    detail: format!("pair ({u}, {v}) is not an unordered vertex pair"),
                });
            }
            for w in [u, v] {
                if w < 1 || w > vertices {
                    return Err(DiscoveryError::VertexOutOfRange {
                        vertex: w,
                        max: vertices,
                    });
                }
            }
            let key = (i64::from(u.min(v)), i64::from(u.max(v)));
            if instances.insert(key, cnf).is_some() {
                return Err(DiscoveryError::DuplicatePair { a: key.0, b: key.1 });
            }
        }
        Ok(Self::filled(kind, instances))
    }

    pub fn literal_in_clause(
        variables: u32,
        clauses: u32,
        pairs: impl IntoIterator<Item = ((i64, u32), CnfFormula)>,
    ) -> Result<Self, DiscoveryError> {
        let kind = IncidenceKind::LiteralInClause { variables, clauses };
        let mut instances = BTreeMap::new();
        for ((lit, clause), cnf) in pairs {
            let var = lit.unsigned_abs();
            if lit == 0 || var > u64::from(variables) || clause < 1 || clause > clauses {
                return Err(DiscoveryError::InvalidPair {
                    detail: format!("pair ({lit}, {clause}) outside the literal/clause index set"),
                });
            }
            let key = (lit, i64::from(clause));
            if instances.insert(key, cnf).is_some() {
                return Err(DiscoveryError::DuplicatePair { a: key.0, b: key.1 });
            }
        }
        Ok(Self::filled(kind, instances))
    }

    pub fn element_in_set(
        universe: u32,
        sets: u32,
        pairs: impl IntoIterator<Item = ((u32, u32), CnfFormula)>,
    ) -> Result<Self, DiscoveryError> {
        let kind = IncidenceKind::ElementInSet { universe, sets };
        let mut instances = BTreeMap::new();
        for ((element, set), cnf) in pairs {
            if element < 1 || element > universe || set < 1 || set > sets {
                return Err(DiscoveryError::InvalidPair {
                    detail: format!("pair ({element}, {set}) outside the element/set index set"),
                });
            }
            let key = (i64::from(element), i64::from(set));
            if instances.insert(key, cnf).is_some() {
                return Err(DiscoveryError::DuplicatePair { a: key.0, b: key.1 });
            }
        }
        Ok(Self::filled(kind, instances))
    }

    fn filled(kind: IncidenceKind, mut instances: BTreeMap<(i64, i64), CnfFormula>) -> Self {
        for key in Self::index_keys(kind) {
            instances
                .entry(key)
                .or_insert_with(|| make_trivial_cnf(false));
        }
        IncidenceSpec { kind, instances }
    }

    fn index_keys(kind: IncidenceKind) -> Vec<(i64, i64)> {
        match kind {
            IncidenceKind::GraphEdges { vertices } => (1..=vertices)
                .flat_map(|u| ((u + 1)..=vertices).map(move |v| (i64::from(u), i64::from(v))))
                .collect(),
            IncidenceKind::LiteralInClause { variables, clauses } => {
                let mut keys = Vec::new();
                for var in 1..=variables {
                    for sign in [-1i64, 1] {
                        for clause in 1..=clauses {
                            keys.push((sign * i64::from(var), i64::from(clause)));
                        }
                    }
                }
                keys
            }
            IncidenceKind::ElementInSet { universe, sets } => (1..=universe)
                .flat_map(|e| (1..=sets).map(move |s| (i64::from(e), i64::from(s))))
                .collect(),
        }
    }

    pub fn kind(&self) -> IncidenceKind {
        self.kind
    }

    pub fn pair_count(&self) -> usize {
        self.instances.len()
    }

    pub fn instances(&self) -> impl Iterator<Item = (&(i64, i64), &CnfFormula)> {
        self.instances.iter()
    }

    pub fn instance(&self, key: (i64, i64)) -> Option<&CnfFormula> {
        self.instances.get(&key)
    }
}

/// Decides every per-pair instance through the oracle, one query per pair
/// in index order (phase [`PHASE_DISCOVER`]).
pub fn discover_incidences(
    spec: &IncidenceSpec,
    session: &mut OracleSession,
) -> Result<BTreeMap<(i64, i64), bool>, DiscoveryError> {
    let mut table = BTreeMap::new();
    for (&key, cnf) in spec.instances() {
        let verdict = session.query_sat(cnf, PHASE_DISCOVER)?;
        table.insert(key, verdict.satisfiable);
    }
    Ok(table)
}

/// Discovery specialized to graph specs: the discovered graph has an edge
/// exactly where the pair instance is satisfiable.
pub fn discovered_graph(
    spec: &IncidenceSpec,
    session: &mut OracleSession,
) -> Result<Graph, DiscoveryError> {
    let IncidenceKind::GraphEdges { vertices } = spec.kind() else {
        return Err(DiscoveryError::KindMismatch {
            detail: "discovered_graph needs a graph-edges spec".into(),
        });
    };
    let table = discover_incidences(spec, session)?;
    let edges: Vec<(u32, u32)> = table
        .iter()
        .filter(|(_, &present)| present)
        .map(|(&(u, v), _)| (u as u32, v as u32))
        .collect();
    Ok(Graph::unweighted(vertices, edges)?)
}

pub fn is_vertex_cover(graph: &Graph, cover: &BTreeSet<u32>) -> bool {
    graph
        .edges()
        .all(|(u, v)| cover.contains(&u) || cover.contains(&v))
}

pub fn is_minimal_vertex_cover(graph: &Graph, cover: &BTreeSet<u32>) -> bool {
    is_vertex_cover(graph, cover)
        && cover.iter().all(|&v| {
            let mut smaller = cover.clone();
            smaller.remove(&v);
            !is_vertex_cover(graph, &smaller)
        })
}

/// Vertex cover reconfiguration over a discovered graph: transform the
/// start cover into the target cover through covers of size at most
/// `cover_bound`, changing at most one vertex per step, in exactly
/// `sequence_length` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DvcrInstance {
    incidence: IncidenceSpec,
    start: BTreeSet<u32>,
    target: BTreeSet<u32>,
    cover_bound: u32,
    sequence_length: BigUint,
}

impl DvcrInstance {
    pub fn new(
        vertex_count: u32,
        pairs: impl IntoIterator<Item = ((u32, u32), CnfFormula)>,
        start: BTreeSet<u32>,
        target: BTreeSet<u32>,
        cover_bound: u32,
        sequence_length: BigUint,
    ) -> Result<Self, DiscoveryError> {
        let incidence = IncidenceSpec::graph_edges(vertex_count, pairs)?;
        for &v in start.iter().chain(target.iter()) {
            if v < 1 || v > vertex_count {
                return Err(DiscoveryError::VertexOutOfRange {
                    vertex: v,
                    max: vertex_count,
                });
            }
        }
        if sequence_length == BigUint::ZERO {
            return Err(DiscoveryError::InvalidSequenceLength);
        }
        Ok(DvcrInstance {
            incidence,
            start,
            target,
            cover_bound,
            sequence_length,
        })
    }

    /// Instance whose pair instances are trivial yes/no encodings of an
    /// explicit graph.
    pub fn from_graph(
        graph: &Graph,
        start: BTreeSet<u32>,
        target: BTreeSet<u32>,
        cover_bound: u32,
        sequence_length: BigUint,
    ) -> Result<Self, DiscoveryError> {
        DvcrInstance::new(
            graph.vertex_count(),
            graph.edges().map(|e| (e, make_trivial_cnf(true))),
            start,
            target,
            cover_bound,
            sequence_length,
        )
    }

    pub fn vertex_count(&self) -> u32 {
        match self.incidence.kind() {
            IncidenceKind::GraphEdges { vertices } => vertices,
            _ => unreachable!("DVCR incidence is always graph-edges"),
        }
    }

    pub fn incidence(&self) -> &IncidenceSpec {
        &self.incidence
    }

    pub fn start(&self) -> &BTreeSet<u32> {
        &self.start
    }

    pub fn target(&self) -> &BTreeSet<u32> {
        &self.target
    }

    pub fn cover_bound(&self) -> u32 {
        self.cover_bound
    }

    pub fn sequence_length(&self) -> &BigUint {
        &self.sequence_length
    }
}

/// An explicit reconfiguration sequence of vertex covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconfSequence {
    covers: Vec<BTreeSet<u32>>,
}

impl ReconfSequence {
    pub fn covers(&self) -> &[BTreeSet<u32>] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Checks every invariant: exact length, endpoints, cover property and
    /// size bound per step, single-vertex steps.
    pub fn validate(
        &self,
        graph: &Graph,
        start: &BTreeSet<u32>,
        target: &BTreeSet<u32>,
        cover_bound: u32,
        sequence_length: &BigUint,
    ) -> Result<(), DiscoveryError> {
        let invalid = |detail: String| DiscoveryError::InvalidDiscoveredStructure { detail };
        if BigUint::from(self.covers.len()) != *sequence_length {
            return Err(invalid(format!(
                "witness has {} covers, expected {sequence_length}",
                self.covers.len()
            )));
        }
        if self.covers.first() != Some(start) {
            return Err(invalid("witness does not start at the start cover".into()));
        }
        if self.covers.last() != Some(target) {
            return Err(invalid("witness does not end at the target cover".into()));
        }
        for (i, cover) in self.covers.iter().enumerate() {
            if cover.len() > cover_bound as usize {
                return Err(invalid(format!("cover {i} exceeds the size bound")));
            }
            if !is_vertex_cover(graph, cover) {
                return Err(invalid(format!("set {i} is not a vertex cover")));
            }
        }
        for (i, pair) in self.covers.windows(2).enumerate() {
            if pair[0].symmetric_difference(&pair[1]).count() > 1 {
                return Err(invalid(format!("step {i} changes more than one vertex")));
            }
        }
        Ok(())
    }
}

/// Breadth-first search over the configuration graph whose nodes are the
/// covers of size at most `cover_bound` and whose edges are single-vertex
/// additions and removals. True iff a sequence of exactly
/// `sequence_length` covers exists (repeating a cover is a legal step, so
/// this is equivalent to the shortest length being within bound). The
/// witness, when the length fits in memory, is padded to the exact length.
pub fn solve_dvcr_bfs(
    graph: &Graph,
    start: &BTreeSet<u32>,
    target: &BTreeSet<u32>,
    cover_bound: u32,
    sequence_length: &BigUint,
    guard: u32,
) -> Result<(bool, Option<ReconfSequence>), DiscoveryError> {
    let n = graph.vertex_count();
    if n > guard || n > 30 {
        return Err(DiscoveryError::GuardExceeded {
            vertices: n,
            guard: guard.min(30),
        });
    }
    let bound = cover_bound as usize;
    if start.len() > bound || target.len() > bound {
        return Ok((false, None));
    }
    let to_mask = |set: &BTreeSet<u32>| set.iter().fold(0u32, |m, &v| m | 1 << (v - 1));
    let edge_masks: Vec<u32> = graph
        .edges()
        .map(|(u, v)| 1 << (u - 1) | 1 << (v - 1))
        .collect();
    let is_cover = |mask: u32| edge_masks.iter().all(|&e| e & mask != 0);

    let start_mask = to_mask(start);
    let target_mask = to_mask(target);
    if !is_cover(start_mask) || !is_cover(target_mask) {
        return Ok((false, None));
    }

    let mut parent: HashMap<u32, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert(start_mask, start_mask);
    queue.push_back(start_mask);
    while let Some(state) = queue.pop_front() {
        if state == target_mask {
            break;
        }
        for v in 0..n {
            let next = state ^ (1 << v);
            if next.count_ones() as usize <= bound && is_cover(next) && !parent.contains_key(&next)
            {
                parent.insert(next, state);
                queue.push_back(next);
            }
        }
    }
    if !parent.contains_key(&target_mask) {
        return Ok((false, None));
    }

    let mut path_masks = vec![target_mask];
    let mut cursor = target_mask;
    while cursor != start_mask {
        cursor = parent[&cursor];
        path_masks.push(cursor);
    }
    path_masks.reverse();
    if BigUint::from(path_masks.len()) > *sequence_length {
        return Ok((false, None));
    }

    let witness = u64::try_from(sequence_length)
        .ok()
        .filter(|&len| len <= WITNESS_PAD_CAP)
        .map(|len| {
            let from_mask = |mask: u32| -> BTreeSet<u32> {
                (1..=n).filter(|&v| mask & 1 << (v - 1) != 0).collect()
            };
            let mut covers: Vec<BTreeSet<u32>> =
                Vec::with_capacity(usize::try_from(len).expect("pad cap fits usize"));
            // Pad by repeating the start cover; a repeated cover is a legal
            // zero-change step.
            for _ in 0..(len as usize - path_masks.len()) {
                covers.push(from_mask(start_mask));
            }
            covers.extend(path_masks.iter().map(|&m| from_mask(m)));
            ReconfSequence { covers }
        });
    Ok((true, witness))
}

/// Result of the polynomial-time full kernel for vertex cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VcKernelOutcome {
    /// No cover of the requested size exists.
    Infeasible,
    Kernel(VcFullKernel),
}

/// A reduced graph containing every minimal vertex cover of size at most
/// k of the input, with the forced high-degree vertices kept forced by
/// pendant gadgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcFullKernel {
    pub graph: Graph,
    /// Vertices every small-enough cover must contain, in input labels.
    pub forced: BTreeSet<u32>,
    /// Input label to kernel label, for the surviving input vertices.
    pub vertex_map: BTreeMap<u32, u32>,
}

/// Iteratively forces vertices whose residual degree exceeds the remaining
/// budget, rejects when the leftover edges cannot be covered, keeps the
/// forced set plus the non-isolated remainder, and attaches k+1 pendant
/// neighbors to each forced vertex so it stays in every small cover of the
/// kernel. The kernel has at most `3k^2 + 2k` vertices.
pub fn vc_full_kernel(graph: &Graph, cover_bound: u32) -> VcKernelOutcome {
    let k = cover_bound as usize;
    let mut forced: BTreeSet<u32> = BTreeSet::new();
    loop {
        if forced.len() > k {
            return VcKernelOutcome::Infeasible;
        }
        let budget = k - forced.len();
        let candidate = graph.vertices().find(|&v| {
            !forced.contains(&v)
                && graph.neighbors(v).filter(|u| !forced.contains(u)).count() > budget
        });
        match candidate {
            Some(v) => {
                forced.insert(v);
            }
            None => break,
        }
    }
    if forced.len() > k {
        return VcKernelOutcome::Infeasible;
    }
    let budget = k - forced.len();
    let residual_edges = graph
        .edges()
        .filter(|(u, v)| !forced.contains(u) && !forced.contains(v))
        .count();
    if residual_edges > budget * budget {
        return VcKernelOutcome::Infeasible;
    }

    let survivors: BTreeSet<u32> = graph
        .vertices()
        .filter(|&v| forced.contains(&v) || graph.neighbors(v).any(|u| !forced.contains(&u)))
        .collect();
    let (reduced, vertex_map) = graph.induced(&survivors);

    let pendant_count = cover_bound + 1;
    let mut vertex_count = reduced.vertex_count();
    let mut edges: Vec<(u32, u32)> = reduced.edges().collect();
    for &f in &forced {
        let anchor = vertex_map[&f];
        for _ in 0..pendant_count {
            vertex_count += 1;
            edges.push((anchor, vertex_count));
        }
    }
    let graph =
        Graph::unweighted(vertex_count, edges).expect("kernel construction yields a simple graph");
    debug_assert!(
        u64::from(graph.vertex_count())
            <= 3 * u64::from(cover_bound) * u64::from(cover_bound) + 2 * u64::from(cover_bound)
    );
    VcKernelOutcome::Kernel(VcFullKernel {
        graph,
        forced,
        vertex_map,
    })
}

/// Canonical trivial no-instance emitted when a quantifier-side promise
/// fails: one edge, singleton covers, cover bound zero.
fn trivial_no_dvcr() -> DvcrInstance {
    DvcrInstance::new(
        2,
        [((1, 2), make_trivial_cnf(true))],
        BTreeSet::from([1]),
        BTreeSet::from([2]),
        0,
        BigUint::from(1u32),
    )
    .expect("fixed trivial instance is valid")
}

/// Kernelization for the cover-bound parameter: discover the graph
/// (`C(n,2)` oracle queries), validate the promise that both endpoint sets
/// are minimal covers, reject oversized endpoints with a trivial
/// no-instance, shrink the graph through the full kernel, and re-encode
/// with constant-size trivial instances. The sequence length is capped at
/// `2^|V'|`, which padding makes safe.
pub fn kernelize_dvcr(
    inst: &DvcrInstance,
    session: &mut OracleSession,
) -> Result<DvcrInstance, DiscoveryError> {
    let graph = discovered_graph(inst.incidence(), session)?;
    for (which, set) in [("start", inst.start()), ("target", inst.target())] {
        if !is_vertex_cover(&graph, set) {
            return Err(DiscoveryError::NotACover { which });
        }
        if !is_minimal_vertex_cover(&graph, set) {
            return Err(DiscoveryError::NotMinimal { which });
        }
    }
    let bound = inst.cover_bound() as usize;
    if inst.start().len() > bound || inst.target().len() > bound {
        return Ok(trivial_no_dvcr());
    }
    let kernel = match vc_full_kernel(&graph, inst.cover_bound()) {
        // A minimal cover within the bound exists, so the full kernel
        // cannot be infeasible.
        VcKernelOutcome::Infeasible => return Err(DiscoveryError::KernelContradiction),
        VcKernelOutcome::Kernel(kernel) => kernel,
    };
    let relabel = |set: &BTreeSet<u32>| -> Result<BTreeSet<u32>, DiscoveryError> {
        set.iter()
            .map(|v| {
                kernel
                    .vertex_map
                    .get(v)
                    .copied()
                    .ok_or(DiscoveryError::KernelContradiction)
            })
            .collect()
    };
    let start = relabel(inst.start())?;
    let target = relabel(inst.target())?;
    let capped_length =
        (BigUint::from(1u32) << kernel.graph.vertex_count()).min(inst.sequence_length().clone());
    DvcrInstance::from_graph(
        &kernel.graph,
        start,
        target,
        inst.cover_bound(),
        capped_length,
    )
}

/// The 4-vertex gadget tying an arbitrary satisfiability instance to the
/// reconfiguration answer: three path edges are trivially present, the
/// chord closing the cycle is the given instance, and the fixed endpoint
/// covers admit a 5-step transformation exactly when the chord is absent.
pub fn gen_dvcr_from_cnf(cnf: &CnfFormula) -> DvcrInstance {
    DvcrInstance::new(
        4,
        [
            ((1, 2), make_trivial_cnf(true)),
            ((2, 3), make_trivial_cnf(true)),
            ((3, 4), make_trivial_cnf(true)),
            ((1, 4), cnf.clone()),
        ],
        BTreeSet::from([1, 3]),
        BTreeSet::from([2, 4]),
        3,
        BigUint::from(5u32),
    )
    .expect("gadget shape is valid")
}

/// A discovered structure in explicit form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConcreteStructure {
    Graph(Graph),
    Formula(CnfFormula),
    SetSystem {
        universe: u32,
        sets: Vec<BTreeSet<u32>>,
    },
}

fn structure_from_table(
    kind: IncidenceKind,
    table: &BTreeMap<(i64, i64), bool>,
) -> Result<ConcreteStructure, DiscoveryError> {
    match kind {
        IncidenceKind::GraphEdges { vertices } => {
            let edges: Vec<(u32, u32)> = table
                .iter()
                .filter(|(_, &present)| present)
                .map(|(&(u, v), _)| (u as u32, v as u32))
                .collect();
            Ok(ConcreteStructure::Graph(Graph::unweighted(
                vertices, edges,
            )?))
        }
        IncidenceKind::LiteralInClause { variables, clauses } => {
            let mut clause_lits: Vec<Vec<Literal>> = vec![Vec::new(); clauses as usize];
            for (&(code, clause), &present) in table {
                if present {
                    let lit = Literal::from_code(code).expect("index keys are valid literals");
                    clause_lits[clause as usize - 1].push(lit);
                }
            }
            for clause in &mut clause_lits {
                clause.sort_by_key(|lit| (lit.var(), lit.is_positive()));
            }
            let formula = CnfFormula::new(variables, clause_lits).map_err(|e| {
                DiscoveryError::InvalidDiscoveredStructure {
                    detail: format!("discovered clause set is not a CNF: {e}"),
                }
            })?;
            Ok(ConcreteStructure::Formula(formula))
        }
        IncidenceKind::ElementInSet { universe, sets } => {
            let mut members: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); sets as usize];
            for (&(element, set), &present) in table {
                if present {
                    members[set as usize - 1].insert(element as u32);
                }
            }
            Ok(ConcreteStructure::SetSystem {
                universe,
                sets: members,
            })
        }
    }
}

fn structure_to_spec(structure: &ConcreteStructure) -> Result<IncidenceSpec, DiscoveryError> {
    match structure {
        ConcreteStructure::Graph(graph) => IncidenceSpec::graph_edges(
            graph.vertex_count(),
            graph.edges().map(|e| (e, make_trivial_cnf(true))),
        ),
        ConcreteStructure::Formula(formula) => IncidenceSpec::literal_in_clause(
            formula.variable_count(),
            formula.clause_count() as u32,
            formula
                .clauses()
                .iter()
                .enumerate()
                .flat_map(|(i, clause)| {
                    clause
                        .iter()
                        .map(move |lit| ((lit.code(), i as u32 + 1), make_trivial_cnf(true)))
                }),
        ),
        ConcreteStructure::SetSystem { universe, sets } => IncidenceSpec::element_in_set(
            *universe,
            sets.len() as u32,
            sets.iter().enumerate().flat_map(|(i, set)| {
                set.iter()
                    .map(move |&e| ((e, i as u32 + 1), make_trivial_cnf(true)))
            }),
        ),
    }
}

/// Generic discovery kernelization: discover the concrete structure, apply
/// an answer-preserving base kernelizer to it, and re-wrap the result with
/// constant-size trivial instances. The output size is the base kernel
/// size up to the constant per-pair factor.
pub fn discovery_kernel_wrap<F>(
    spec: &IncidenceSpec,
    session: &mut OracleSession,
    base_kernelizer: F,
) -> Result<IncidenceSpec, DiscoveryError>
where
    F: FnOnce(ConcreteStructure, &mut OracleSession) -> Result<ConcreteStructure, DiscoveryError>,
{
    let table = discover_incidences(spec, session)?;
    let concrete = structure_from_table(spec.kind(), &table)?;
    let reduced = base_kernelizer(concrete, session)?;
    structure_to_spec(&reduced)
}

/// The built-in graph instantiation of the wrapper: clique-free vertex
/// deletion kernelization over a discovered graph.
pub fn discovery_cfvd_kernel(
    spec: &IncidenceSpec,
    deletion_budget: u64,
    clique_bound: u64,
    session: &mut OracleSession,
) -> Result<IncidenceSpec, DiscoveryError> {
    discovery_kernel_wrap(spec, session, |structure, session| {
        let ConcreteStructure::Graph(graph) = structure else {
            return Err(DiscoveryError::KindMismatch {
                detail: "clique deletion base kernelizer needs a graph".into(),
            });
        };
        let inst =
            crate::cliquedel::CfvdInstance::new(graph, deletion_budget, clique_bound, false)?;
        let kernel = crate::cliquedel::kernelize_cfvd(&inst, session)?;
        Ok(ConcreteStructure::Graph(kernel.graph().clone()))
    })
}

/// Seeded random instance over an Erdős–Rényi graph with two randomly
/// grown minimal covers and random satisfiable/unsatisfiable pair
/// instances realizing the edges. Deterministic per seed.
pub fn gen_random_dvcr(vertex_count: u32, max_cnf_vars: u32, seed: u64) -> DvcrInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = crate::gen::random_graph(&mut rng, vertex_count, 0.4);

    let random_minimal_cover = |rng: &mut ChaCha8Rng| -> BTreeSet<u32> {
        let mut cover: BTreeSet<u32> = graph.vertices().collect();
        let mut order: Vec<u32> = graph.vertices().collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        for v in order {
            let mut smaller = cover.clone();
            smaller.remove(&v);
            if is_vertex_cover(&graph, &smaller) {
                cover = smaller;
            }
        }
        cover
    };
    let start = random_minimal_cover(&mut rng);
    let target = random_minimal_cover(&mut rng);

    let largest = start.len().max(target.len()) as u32;
    let cover_bound = if largest > 0 && rng.random_bool(0.15) {
        largest - 1 // exercises the oversized-endpoint branch
    } else {
        largest + rng.random_range(0..=1)
    };
    let sequence_length = if rng.random_bool(0.1) {
        BigUint::from(1u32) << 200
    } else {
        BigUint::from(rng.random_range(1..=u64::from(2 * vertex_count + 2)))
    };

    let pairs: Vec<((u32, u32), CnfFormula)> = {
        let mut pairs = Vec::new();
        for u in 1..=vertex_count {
            for v in (u + 1)..=vertex_count {
                let cnf = if graph.has_edge(u, v) {
                    crate::gen::random_sat_cnf(&mut rng, max_cnf_vars, 4, 3)
                } else {
                    crate::gen::random_unsat_cnf(&mut rng, max_cnf_vars, 4, 3)
                };
                pairs.push(((u, v), cnf));
            }
        }
        pairs
    };
    DvcrInstance::new(
        vertex_count,
        pairs,
        start,
        target,
        cover_bound,
        sequence_length,
    )
    .expect("generated instance is well-formed")
}
