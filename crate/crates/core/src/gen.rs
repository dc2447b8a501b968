//! Seeded random instance builders shared by the verification suites and
//! the CLI generators. Everything here is deterministic in the caller's RNG.

use rand::Rng;

use crate::cliquedel::Graph;
use crate::formula::{CnfFormula, Literal};
use crate::oracle::builtin_satisfiable;

/// Random CNF over `1..=variable_count` with nonempty clauses of distinct
/// variables.
pub fn random_cnf(
    rng: &mut impl Rng,
    variable_count: u32,
    max_clauses: usize,
    max_clause_len: u32,
) -> CnfFormula {
    assert!(variable_count >= 1);
    let clause_count = rng.random_range(1..=max_clauses.max(1));
    let max_len = max_clause_len.clamp(1, variable_count);
    let clauses = (0..clause_count)
        .map(|_| {
            let len = rng.random_range(1..=max_len) as usize;
            let mut vars: Vec<u32> = rand::seq::index::sample(rng, variable_count as usize, len)
                .into_iter()
                .map(|i| i as u32 + 1)
                .collect();
            vars.sort_unstable();
            vars.into_iter()
                .map(|v| Literal::new(v, rng.random_bool(0.5)))
                .collect()
        })
        .collect();
    CnfFormula::new(variable_count, clauses).expect("sampled clauses hold distinct variables")
}

/// Random CNF known to be satisfiable.
pub fn random_sat_cnf(
    rng: &mut impl Rng,
    variable_count: u32,
    max_clauses: usize,
    max_clause_len: u32,
) -> CnfFormula {
    for _ in 0..32 {
        let cnf = random_cnf(rng, variable_count, max_clauses, max_clause_len);
        if builtin_satisfiable(&cnf) {
            return cnf;
        }
    }
    CnfFormula::new(variable_count, vec![vec![Literal::positive(1)]]).expect("unit clause is valid")
}

/// Random CNF known to be unsatisfiable. Sparse random formulas are rarely
/// unsatisfiable, so after a few attempts a contradiction pair on a random
/// variable is appended.
pub fn random_unsat_cnf(
    rng: &mut impl Rng,
    variable_count: u32,
    max_clauses: usize,
    max_clause_len: u32,
) -> CnfFormula {
    for _ in 0..8 {
        let cnf = random_cnf(rng, variable_count, max_clauses, max_clause_len);
        if !builtin_satisfiable(&cnf) {
            return cnf;
        }
    }
    let base = random_cnf(rng, variable_count, max_clauses, max_clause_len);
    let pivot = rng.random_range(1..=variable_count);
    let mut clauses = base.clauses().to_vec();
    clauses.push(vec![Literal::positive(pivot)]);
    clauses.push(vec![Literal::negative(pivot)]);
    CnfFormula::new(variable_count, clauses).expect("adding units keeps clauses valid")
}

/// Erdős–Rényi style unweighted graph on `1..=vertex_count`.
pub fn random_graph(rng: &mut impl Rng, vertex_count: u32, edge_probability: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=vertex_count {
        for v in (u + 1)..=vertex_count {
            if rng.random_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    Graph::unweighted(vertex_count, edges).expect("sampled edges are simple")
}
