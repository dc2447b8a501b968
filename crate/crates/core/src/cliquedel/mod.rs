//! Clique-free vertex deletion: oracle-driven clique finding through a SAT
//! encoding, the branching solver, the vertex-pruning kernelization,
//! exhaustive deciders and counters used as verification oracles, and the
//! weighted OR-composition generator.
//!
//! Cliques are measured by total vertex weight throughout; unweighted
//! instances carry unit weights, where weight-exactly-k and size-k
//! coincide.

mod text;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{CnfFormula, FormulaError, Literal};
use crate::oracle::{OracleError, OracleSession};

pub use text::GraphDocument;

/// Ledger phase for clique queries of the branching solver.
pub const PHASE_SEARCH: &str = "cfvd-search";
/// Ledger phase for the per-vertex membership queries of the kernelization.
pub const PHASE_KERNEL: &str = "kernel-cfvd";

/// Default cap on vertex count for the subset-enumeration decider.
pub const DEFAULT_CFVD_GUARD: u32 = 12;

/// Vertex counts the mask-based exhaustive routines can represent.
const MASK_LIMIT: u32 = 128;

#[derive(Debug, Error)]
pub enum CfvdError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: u32 },
    #[error("vertex {vertex} out of range 1..={max}")]
    VertexOutOfRange { vertex: u32, max: u32 },
    #[error("vertex {vertex} has weight 0; weights must be positive")]
    InvalidWeight { vertex: u32 },
    #[error("expected {expected} weights, got {actual}")]
    WeightCountMismatch { expected: u32, actual: usize },
    #[error("unweighted instance carries a non-unit weight on vertex {vertex}")]
    UnexpectedWeight { vertex: u32 },
    #[error("clique bound must be at least 1")]
    InvalidCliqueBound,
    #[error("{vertices} vertices exceed the exhaustive-search guard {guard}")]
    GuardExceeded { vertices: u32, guard: u32 },
    #[error("composition needs at least one instance")]
    EmptyComposition,
    #[error("instance {index} has shape (n={n}, h={h}, k={k}), expected (n={expected_n}, h={expected_h}, k={expected_k})")]
    ShapeMismatch {
        index: usize,
        n: u32,
        h: u64,
        k: u64,
        expected_n: u32,
        expected_h: u64,
        expected_k: u64,
    },
    #[error("composition requires n > h >= 1 and n > k >= 1, got n={n}, h={h}, k={k}")]
    BudgetOutOfRange { n: u32, h: u64, k: u64 },
    #[error("composition inputs must be unweighted")]
    WeightedCompositionInput,
    #[error("oracle model is not a weight-{k} clique: {detail}")]
    InvalidCliqueModel { k: u64, detail: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Undirected simple graph over vertices `1..=n` with positive integer
/// vertex weights (all 1 for unweighted graphs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: u32,
    edges: BTreeSet<(u32, u32)>,
    weights: Vec<u64>,
    adjacency: Vec<BTreeSet<u32>>,
}

impl Graph {
    pub fn unweighted(
        vertex_count: u32,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, CfvdError> {
        Graph::weighted(vertex_count, edges, vec![1; vertex_count as usize])
    }

    pub fn weighted(
        vertex_count: u32,
        edges: impl IntoIterator<Item = (u32, u32)>,
        weights: Vec<u64>,
    ) -> Result<Self, CfvdError> {
        if weights.len() != vertex_count as usize {
            return Err(CfvdError::WeightCountMismatch {
                expected: vertex_count,
                actual: weights.len(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if w == 0 {
                return Err(CfvdError::InvalidWeight {
                    vertex: i as u32 + 1,
                });
            }
        }
        let mut normalized = BTreeSet::new();
        let mut adjacency = vec![BTreeSet::new(); vertex_count as usize];
        for (u, v) in edges {
            if u == v {
                return Err(CfvdError::SelfLoop { vertex: u });
            }
            for w in [u, v] {
                if w < 1 || w > vertex_count {
                    return Err(CfvdError::VertexOutOfRange {
                        vertex: w,
                        max: vertex_count,
                    });
                }
            }
            normalized.insert((u.min(v), u.max(v)));
            adjacency[u as usize - 1].insert(v);
            adjacency[v as usize - 1].insert(u);
        }
        Ok(Graph {
            vertex_count,
            edges: normalized,
            weights,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<u32> {
        1..=self.vertex_count
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        u != v && self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, v: u32) -> u64 {
        self.weights[v as usize - 1]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.adjacency[v as usize - 1].iter().copied()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize - 1].len()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Induced subgraph on `keep`, relabeled to `1..=|keep|` in ascending
    /// order of the original indices. Returns the old-to-new vertex map.
    pub fn induced(&self, keep: &BTreeSet<u32>) -> (Graph, BTreeMap<u32, u32>) {
        let map: BTreeMap<u32, u32> = keep
            .iter()
            .enumerate()
            .map(|(i, &old)| (old, i as u32 + 1))
            .collect();
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter(|(u, v)| keep.contains(u) && keep.contains(v))
            .map(|(u, v)| (map[u], map[v]))
            .collect();
        let weights: Vec<u64> = keep.iter().map(|&v| self.weight(v)).collect();
        let graph = Graph::weighted(keep.len() as u32, edges, weights)
            .expect("induced subgraph of a valid graph is valid");
        (graph, map)
    }
}

/// Whether a "clique of weight k" means total weight exactly `k` or at
/// least `k`. Exact is normative; the at-least reading exists for
/// comparison experiments in the brute-force decider.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueSemantics {
    ExactWeight,
    AtLeastWeight,
}

/// A deletion problem instance: remove vertices of total weight at most
/// `deletion_budget` so that no clique of weight `clique_bound` remains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfvdInstance {
    graph: Graph,
    deletion_budget: u64,
    clique_bound: u64,
    weighted: bool,
}

impl CfvdInstance {
    pub fn new(
        graph: Graph,
        deletion_budget: u64,
        clique_bound: u64,
        weighted: bool,
    ) -> Result<Self, CfvdError> {
        if clique_bound < 1 {
            return Err(CfvdError::InvalidCliqueBound);
        }
        if !weighted {
            if let Some(v) = graph.vertices().find(|&v| graph.weight(v) != 1) {
                return Err(CfvdError::UnexpectedWeight { vertex: v });
            }
        }
        Ok(CfvdInstance {
            graph,
            deletion_budget,
            clique_bound,
            weighted,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn deletion_budget(&self) -> u64 {
        self.deletion_budget
    }

    pub fn clique_bound(&self) -> u64 {
        self.clique_bound
    }

    pub fn weighted(&self) -> bool {
        self.weighted
    }
}

/// Adds a clause, deduplicating repeated literals; the counter encoding
/// can alias register variables with item variables.
fn push_clause(clauses: &mut Vec<Vec<Literal>>, literals: Vec<Literal>) {
    let mut seen: BTreeMap<u32, bool> = BTreeMap::new();
    let mut deduped = Vec::with_capacity(literals.len());
    for lit in literals {
        match seen.get(&lit.var()) {
            Some(&p) if p == lit.is_positive() => continue,
            Some(_) => return, // complementary pair: tautological clause
            None => {
                seen.insert(lit.var(), lit.is_positive());
                deduped.push(lit);
            }
        }
    }
    clauses.push(deduped);
}

/// SAT encoding of "there is a clique of total weight exactly k": one
/// selection variable per vertex, binary clauses forbidding non-adjacent
/// pairs, and a sequential counter over the unary-unrolled weights whose
/// registers pin the total to exactly k.
fn encode_clique_query(
    graph: &Graph,
    k: u64,
    forced: Option<u32>,
    excluded: &BTreeSet<u32>,
) -> CnfFormula {
    let n = graph.vertex_count();
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            if !graph.has_edge(u, v) {
                clauses.push(vec![Literal::negative(u), Literal::negative(v)]);
            }
        }
    }
    for &v in excluded {
        clauses.push(vec![Literal::negative(v)]);
    }
    if let Some(f) = forced {
        clauses.push(vec![Literal::positive(f)]);
    }

    // Unary unrolling: a vertex of weight w contributes w consecutive
    // counter increments driven by its selection variable.
    let items: Vec<u32> = graph
        .vertices()
        .flat_map(|v| std::iter::repeat_n(v, graph.weight(v) as usize))
        .collect();
    let total = items.len() as u64;
    if k > total {
        clauses.push(Vec::new());
        return CnfFormula::new(n, clauses).expect("vertex clauses are valid");
    }

    let cap = ((k + 1).min(total)) as usize;
    let mut next_var = n + 1;
    // prev[j-1] holds the register "selected weight among the first i items
    // is at least j"; rows shorter than j are constant false.
    let mut prev: Vec<u32> = Vec::new();
    for (idx, &item) in items.iter().enumerate() {
        let row_len = (idx + 1).min(cap);
        let mut row: Vec<u32> = Vec::with_capacity(row_len);
        for j in 1..=row_len {
            if j == 1 {
                if prev.is_empty() {
                    row.push(item);
                    continue;
                }
                let carry = prev[0];
                let register = next_var;
                next_var += 1;
                push_clause(
                    &mut clauses,
                    vec![Literal::negative(carry), Literal::positive(register)],
                );
                push_clause(
                    &mut clauses,
                    vec![Literal::negative(item), Literal::positive(register)],
                );
                push_clause(
                    &mut clauses,
                    vec![
                        Literal::negative(register),
                        Literal::positive(carry),
                        Literal::positive(item),
                    ],
                );
                row.push(register);
                continue;
            }
            let step = prev[j - 2];
            let register = next_var;
            next_var += 1;
            if let Some(&carry) = prev.get(j - 1) {
                push_clause(
                    &mut clauses,
                    vec![Literal::negative(carry), Literal::positive(register)],
                );
                push_clause(
                    &mut clauses,
                    vec![
                        Literal::negative(item),
                        Literal::negative(step),
                        Literal::positive(register),
                    ],
                );
                push_clause(
                    &mut clauses,
                    vec![
                        Literal::negative(register),
                        Literal::positive(carry),
                        Literal::positive(item),
                    ],
                );
                push_clause(
                    &mut clauses,
                    vec![
                        Literal::negative(register),
                        Literal::positive(carry),
                        Literal::positive(step),
                    ],
                );
            } else {
                // j == i: every item so far must contribute.
                push_clause(
                    &mut clauses,
                    vec![
                        Literal::negative(item),
                        Literal::negative(step),
                        Literal::positive(register),
                    ],
                );
                push_clause(
                    &mut clauses,
                    vec![Literal::negative(register), Literal::positive(item)],
                );
                push_clause(
                    &mut clauses,
                    vec![Literal::negative(register), Literal::positive(step)],
                );
            }
            row.push(register);
        }
        prev = row;
    }
    clauses.push(vec![Literal::positive(prev[(k - 1) as usize])]);
    if (k as usize) < cap {
        clauses.push(vec![Literal::negative(prev[k as usize])]);
    }
    CnfFormula::new(next_var - 1, clauses).expect("encoding clauses hold distinct variables")
}

fn validate_clique_model(
    graph: &Graph,
    selected: &[u32],
    k: u64,
    forced: Option<u32>,
    excluded: &BTreeSet<u32>,
) -> Result<(), CfvdError> {
    let invalid = |detail: String| CfvdError::InvalidCliqueModel { k, detail };
    let weight: u64 = selected.iter().map(|&v| graph.weight(v)).sum();
    if weight != k {
        return Err(invalid(format!("selected weight {weight}")));
    }
    for (i, &u) in selected.iter().enumerate() {
        for &v in &selected[i + 1..] {
            if !graph.has_edge(u, v) {
                return Err(invalid(format!("vertices {u} and {v} are not adjacent")));
            }
        }
    }
    if let Some(f) = forced {
        if !selected.contains(&f) {
            return Err(invalid(format!("forced vertex {f} missing")));
        }
    }
    if let Some(&v) = selected.iter().find(|v| excluded.contains(v)) {
        return Err(invalid(format!("excluded vertex {v} selected")));
    }
    Ok(())
}

fn find_clique_excluding(
    graph: &Graph,
    k: u64,
    session: &mut OracleSession,
    phase: &str,
    forced: Option<u32>,
    excluded: &BTreeSet<u32>,
) -> Result<Option<Vec<u32>>, CfvdError> {
    let query = encode_clique_query(graph, k, forced, excluded);
    let verdict = session.query_sat(&query, phase)?;
    if !verdict.satisfiable {
        return Ok(None);
    }
    let model = verdict.model.ok_or_else(|| CfvdError::InvalidCliqueModel {
        k,
        detail: "backend produced no model to extract a clique from".into(),
    })?;
    let selected: Vec<u32> = graph
        .vertices()
        .filter(|&v| model.value(v) == Some(true))
        .collect();
    validate_clique_model(graph, &selected, k, forced, excluded)?;
    Ok(Some(selected))
}

/// Finds a clique of total weight exactly `k` through one oracle query, or
/// reports absence. The model is extracted and re-validated as a clique.
/// `forced` restricts the search to cliques containing that vertex.
pub fn find_clique_via_oracle(
    graph: &Graph,
    k: u64,
    session: &mut OracleSession,
    phase: &str,
    forced: Option<u32>,
) -> Result<Option<Vec<u32>>, CfvdError> {
    find_clique_excluding(graph, k, session, phase, forced, &BTreeSet::new())
}

/// Bounded search tree: ask the oracle for a clique, branch on which of its
/// vertices to delete (in ascending order), and charge the deleted weight
/// to the budget. At most `sum_{i=0..h} k^i` queries, phase
/// [`PHASE_SEARCH`].
pub fn solve_cfvd_searchtree(
    inst: &CfvdInstance,
    session: &mut OracleSession,
) -> Result<bool, CfvdError> {
    fn recurse(
        graph: &Graph,
        k: u64,
        budget: u64,
        deleted: &mut BTreeSet<u32>,
        session: &mut OracleSession,
    ) -> Result<bool, CfvdError> {
        let clique = match find_clique_excluding(graph, k, session, PHASE_SEARCH, None, deleted)? {
            None => return Ok(true),
            Some(clique) => clique,
        };
        for &v in &clique {
            let weight = graph.weight(v);
            if weight > budget {
                continue;
            }
            deleted.insert(v);
            let solved = recurse(graph, k, budget - weight, deleted, session)?;
            deleted.remove(&v);
            if solved {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut deleted = BTreeSet::new();
    recurse(
        inst.graph(),
        inst.clique_bound(),
        inst.deletion_budget(),
        &mut deleted,
        session,
    )
}

struct MaskGraph {
    adjacency: Vec<u128>,
    weights: Vec<u64>,
}

fn mask_graph(graph: &Graph, guard: u32) -> Result<MaskGraph, CfvdError> {
    let n = graph.vertex_count();
    if n > guard || n > MASK_LIMIT {
        return Err(CfvdError::GuardExceeded {
            vertices: n,
            guard: guard.min(MASK_LIMIT),
        });
    }
    let mut adjacency = vec![0u128; n as usize];
    for (u, v) in graph.edges() {
        adjacency[u as usize - 1] |= 1 << (v - 1);
        adjacency[v as usize - 1] |= 1 << (u - 1);
    }
    Ok(MaskGraph {
        adjacency,
        weights: graph.weights().to_vec(),
    })
}

/// Visits cliques within `alive` that meet `k` under the given semantics,
/// in lexicographic vertex order, each exactly once for the exact
/// semantics. The visitor returns true to stop early.
fn visit_cliques(
    mask: &MaskGraph,
    alive: u128,
    k: u64,
    semantics: CliqueSemantics,
    visit: &mut impl FnMut(u128) -> bool,
) -> bool {
    fn recurse(
        mask: &MaskGraph,
        candidates: u128,
        clique: u128,
        weight: u64,
        k: u64,
        semantics: CliqueSemantics,
        visit: &mut impl FnMut(u128) -> bool,
    ) -> bool {
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let extended_weight = weight + mask.weights[v];
            let extended = clique | 1 << v;
            let hit = match semantics {
                CliqueSemantics::ExactWeight => extended_weight == k,
                CliqueSemantics::AtLeastWeight => extended_weight >= k,
            };
            if hit && visit(extended) {
                return true;
            }
            if extended_weight < k
                && recurse(
                    mask,
                    rest & mask.adjacency[v],
                    extended,
                    extended_weight,
                    k,
                    semantics,
                    visit,
                )
            {
                return true;
            }
        }
        false
    }
    recurse(mask, alive, 0, 0, k, semantics, visit)
}

fn has_clique(mask: &MaskGraph, alive: u128, k: u64, semantics: CliqueSemantics) -> bool {
    visit_cliques(mask, alive, k, semantics, &mut |_| true)
}

/// Exhaustive decision over all deletion subsets within the weight budget;
/// no oracle. Guarded by the vertex count.
pub fn solve_cfvd_bruteforce(inst: &CfvdInstance, guard: u32) -> Result<bool, CfvdError> {
    solve_cfvd_bruteforce_with(inst, guard, CliqueSemantics::ExactWeight)
}

/// [`solve_cfvd_bruteforce`] with an explicit clique-weight semantics.
pub fn solve_cfvd_bruteforce_with(
    inst: &CfvdInstance,
    guard: u32,
    semantics: CliqueSemantics,
) -> Result<bool, CfvdError> {
    let mask = mask_graph(inst.graph(), guard)?;
    let n = inst.graph().vertex_count() as usize;
    let k = inst.clique_bound();
    fn subsets(
        mask: &MaskGraph,
        n: usize,
        vertex: usize,
        budget: u64,
        deleted: u128,
        k: u64,
        semantics: CliqueSemantics,
    ) -> bool {
        if vertex == n {
            let alive = !deleted & ((1u128 << n) - 1);
            return !has_clique(mask, alive, k, semantics);
        }
        if subsets(mask, n, vertex + 1, budget, deleted, k, semantics) {
            return true;
        }
        let weight = mask.weights[vertex];
        weight <= budget
            && subsets(
                mask,
                n,
                vertex + 1,
                budget - weight,
                deleted | 1 << vertex,
                k,
                semantics,
            )
    }
    Ok(subsets(
        &mask,
        n,
        0,
        inst.deletion_budget(),
        0,
        k,
        semantics,
    ))
}

/// Complete oracle-free decider that scales past the subset-enumeration
/// guard: enumerate every weight-k clique once, then search deletion sets
/// by branching on the first surviving clique, memoizing failed states.
/// Exhaustive in both phases; used to verify composition outputs whose
/// vertex counts defeat plain subset enumeration.
pub fn solve_cfvd_searchtree_enum(inst: &CfvdInstance) -> Result<bool, CfvdError> {
    let mask = mask_graph(inst.graph(), MASK_LIMIT)?;
    let n = inst.graph().vertex_count() as usize;
    let k = inst.clique_bound();
    let mut cliques: Vec<u128> = Vec::new();
    let alive = if n == 128 { !0u128 } else { (1u128 << n) - 1 };
    visit_cliques(&mask, alive, k, CliqueSemantics::ExactWeight, &mut |c| {
        cliques.push(c);
        false
    });
    // Branching on the narrowest surviving clique first keeps the tree
    // small on structured instances.
    cliques.sort_by_key(|c| (c.count_ones(), *c));

    fn branch(
        cliques: &[u128],
        weights: &[u64],
        deleted: u128,
        budget: u64,
        failed: &mut HashSet<u128>,
    ) -> bool {
        let Some(&target) = cliques.iter().find(|&&c| c & deleted == 0) else {
            return true;
        };
        if failed.contains(&deleted) {
            return false;
        }
        let mut rest = target;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let weight = weights[v];
            if weight <= budget
                && branch(cliques, weights, deleted | 1 << v, budget - weight, failed)
            {
                return true;
            }
        }
        failed.insert(deleted);
        false
    }
    let mut failed = HashSet::new();
    Ok(branch(
        &cliques,
        &mask.weights,
        0,
        inst.deletion_budget(),
        &mut failed,
    ))
}

/// Exact count of cliques of total weight exactly `k`.
pub fn count_k_cliques_bruteforce(graph: &Graph, k: u64, guard: u32) -> Result<u64, CfvdError> {
    let mask = mask_graph(graph, guard)?;
    let n = graph.vertex_count() as usize;
    let alive = if n == 0 { 0 } else { (1u128 << n) - 1 };
    let mut count = 0u64;
    visit_cliques(&mask, alive, k, CliqueSemantics::ExactWeight, &mut |_| {
        count += 1;
        false
    });
    Ok(count)
}

/// Optional trivial-yes pass: when the deletion budget covers removing the
/// cheapest vertex of every weight-k clique, the instance is a yes-instance
/// outright (with unit weights this is the `h >= #k-cliques` test). Kept
/// separate from the kernel since counting cliques is itself exhaustive
/// work. `None` means undecided.
pub fn short_circuit_by_clique_count(
    inst: &CfvdInstance,
    guard: u32,
) -> Result<Option<bool>, CfvdError> {
    let mask = mask_graph(inst.graph(), guard)?;
    let n = inst.graph().vertex_count() as usize;
    let alive = if n == 0 { 0 } else { (1u128 << n) - 1 };
    let mut cost = 0u64;
    visit_cliques(
        &mask,
        alive,
        inst.clique_bound(),
        CliqueSemantics::ExactWeight,
        &mut |clique| {
            let mut rest = clique;
            let mut cheapest = u64::MAX;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                cheapest = cheapest.min(mask.weights[v]);
            }
            cost = cost.saturating_add(cheapest);
            false
        },
    );
    Ok(if inst.deletion_budget() >= cost {
        Some(true)
    } else {
        None
    })
}

/// Kernelization for the clique-count parameter: one oracle membership
/// query per original vertex (phase [`PHASE_KERNEL`]); vertices outside
/// every weight-k clique are removed. Budgets are unchanged and the answer
/// is preserved; at most `k * #k-cliques` vertices survive.
pub fn kernelize_cfvd(
    inst: &CfvdInstance,
    session: &mut OracleSession,
) -> Result<CfvdInstance, CfvdError> {
    let graph = inst.graph();
    let mut survivors = BTreeSet::new();
    for v in graph.vertices() {
        if find_clique_via_oracle(graph, inst.clique_bound(), session, PHASE_KERNEL, Some(v))?
            .is_some()
        {
            survivors.insert(v);
        }
    }
    let (reduced, _) = graph.induced(&survivors);
    CfvdInstance::new(
        reduced,
        inst.deletion_budget(),
        inst.clique_bound(),
        inst.weighted(),
    )
}

/// Weighted OR-composition. Pads the inputs to a power of two of at least
/// four by duplicating the first instance (two selector positions are the
/// minimum for nonnegative dummy weights), takes the disjoint union of the
/// input graphs with unit weights, and adds per-bit selector vertex pairs
/// of weight n in a clique, each pair guarded by `h* + 1` pendant dummy
/// vertices of weight `k + n(log t - 2)`. Instance blocks are wired to the
/// selector that matches bit j of `i - 1`, least-significant bit first.
/// The output budgets are `h* = h + n log t` and `k* = k + n log t`.
pub fn compose_wcfvd_or(instances: &[CfvdInstance]) -> Result<CfvdInstance, CfvdError> {
    let first = instances.first().ok_or(CfvdError::EmptyComposition)?;
    let n = first.graph().vertex_count();
    let h = first.deletion_budget();
    let k = first.clique_bound();
    if u64::from(n) <= h || h < 1 || u64::from(n) <= k {
        return Err(CfvdError::BudgetOutOfRange { n, h, k });
    }
    for (index, inst) in instances.iter().enumerate() {
        if inst.weighted() || !inst.graph().is_unit_weighted() {
            return Err(CfvdError::WeightedCompositionInput);
        }
        if inst.graph().vertex_count() != n
            || inst.deletion_budget() != h
            || inst.clique_bound() != k
        {
            return Err(CfvdError::ShapeMismatch {
                index,
                n: inst.graph().vertex_count(),
                h: inst.deletion_budget(),
                k: inst.clique_bound(),
                expected_n: n,
                expected_h: h,
                expected_k: k,
            });
        }
    }

    let padded = instances.len().max(4).next_power_of_two() as u32;
    let bits = padded.trailing_zeros();
    let h_star = h + u64::from(n) * u64::from(bits);
    let k_star = k + u64::from(n) * u64::from(bits);
    let selector_weight = u64::from(n);
    let dummy_weight = k + u64::from(n) * (u64::from(bits) - 2);
    let dummies_per_bit = u32::try_from(h_star + 1).expect("dummy count fits in u32");

    let block_base = |i: u32| (i - 1) * n;
    let selector = |j: u32, primed: bool| n * padded + 2 * (j - 1) + if primed { 2 } else { 1 };
    let dummy_base = n * padded + 2 * bits;
    let vertex_count = dummy_base + bits * dummies_per_bit;

    let mut weights = vec![1u64; (n * padded) as usize];
    weights.extend(std::iter::repeat_n(selector_weight, 2 * bits as usize));
    weights.extend(std::iter::repeat_n(
        dummy_weight,
        (bits * dummies_per_bit) as usize,
    ));

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for i in 1..=padded {
        let inst = instances.get(i as usize - 1).unwrap_or(first);
        for (u, v) in inst.graph().edges() {
            edges.push((block_base(i) + u, block_base(i) + v));
        }
        // Wire the block to the selector matching bit j of i - 1.
        for j in 1..=bits {
            let target = selector(j, (i - 1) >> (j - 1) & 1 == 0);
            for v in 1..=n {
                edges.push((block_base(i) + v, target));
            }
        }
    }
    let selectors: Vec<u32> = (1..=bits)
        .flat_map(|j| [selector(j, false), selector(j, true)])
        .collect();
    for (a, &u) in selectors.iter().enumerate() {
        for &v in &selectors[a + 1..] {
            edges.push((u, v));
        }
    }
    for j in 1..=bits {
        for d in 0..dummies_per_bit {
            let dummy = dummy_base + (j - 1) * dummies_per_bit + d + 1;
            edges.push((selector(j, false), dummy));
            edges.push((selector(j, true), dummy));
        }
    }

    let graph = Graph::weighted(vertex_count, edges, weights)?;
    CfvdInstance::new(graph, h_star, k_star, true)
}

/// Seeded random instance for the verification suites: an Erdős–Rényi
/// graph, small budgets, and (optionally) weights in `1..=3`.
pub fn gen_random_cfvd(vertex_count: u32, weighted: bool, seed: u64) -> CfvdInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = crate::gen::random_graph(&mut rng, vertex_count, 0.5);
    let (graph, clique_bound) = if weighted {
        let weights: Vec<u64> = (0..vertex_count).map(|_| rng.random_range(1..=3)).collect();
        let graph = Graph::weighted(vertex_count, base.edges().collect::<Vec<_>>(), weights)
            .expect("regenerated graph is valid");
        (graph, rng.random_range(2..=6))
    } else {
        (base, rng.random_range(2..=4))
    };
    let deletion_budget = rng.random_range(0..=3);
    CfvdInstance::new(graph, deletion_budget, clique_bound, weighted)
        .expect("generated weights match the weighted flag")
}

#[cfg(test)]
mod tests;
