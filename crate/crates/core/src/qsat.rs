//! Algorithms for two-level ∃∀ quantified DNF: a brute-force decider used
//! as the verification oracle, an oracle-assisted solver enumerating the
//! existential assignments, the existential-subformula decomposition, the
//! kernelization built on it, and the OR-composition generator.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Assignment, DnfFormula, FormulaError, Literal, QDnfInstance};
use crate::oracle::{OracleError, OracleSession};

/// Ledger phase for the existential-enumeration solver.
pub const PHASE_FPTNP: &str = "fptnp-few";
/// Ledger phase for the quantified-DNF kernelization.
pub const PHASE_KERNEL: &str = "kernel-qsat";

/// Default cap on `|X| + |Y|` for exhaustive deciders.
pub const DEFAULT_QDNF_GUARD: u32 = 26;

#[derive(Debug, Error)]
pub enum QsatError {
    #[error("{variables} quantified variables exceed the exhaustive-evaluation guard {guard}")]
    GuardExceeded { variables: usize, guard: u32 },
    #[error("composition needs at least one instance")]
    EmptyComposition,
    #[error(
        "instance {index} has quantifier shape ({existential}, {universal}), \
         expected ({expected_existential}, {expected_universal})"
    )]
    ShapeMismatch {
        index: usize,
        existential: usize,
        universal: usize,
        expected_existential: usize,
        expected_universal: usize,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(size: usize) -> Self {
        UnionFind {
            parent: (0..size).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb.max(ra)] = ra.min(rb);
        }
    }
}

/// Enumerates the assignments of `vars` in lexicographic order by variable
/// index, false before true.
fn lexicographic_assignments(vars: &[u32]) -> impl Iterator<Item = Assignment> + '_ {
    let width = vars.len();
    assert!(width < 63, "cannot enumerate more than 62 variables");
    (0..(1u64 << width)).map(move |counter| {
        Assignment::from_pairs(
            vars.iter()
                .enumerate()
                .map(|(i, &v)| (v, counter >> (width - 1 - i) & 1 == 1)),
        )
    })
}

/// Exhaustive decision of the ∃∀ semantics, with no oracle use. Guarded by
/// `|X| + |Y| <= guard`.
pub fn decide_qdnf_bruteforce(inst: &QDnfInstance, guard: u32) -> Result<bool, QsatError> {
    let xs: Vec<u32> = inst.existential().iter().copied().collect();
    let ys: Vec<u32> = inst.universal().iter().copied().collect();
    let variables = xs.len() + ys.len();
    if variables > guard as usize || variables >= 63 {
        return Err(QsatError::GuardExceeded { variables, guard });
    }
    for existential in lexicographic_assignments(&xs) {
        let mut holds_for_all = true;
        for universal in lexicographic_assignments(&ys) {
            let full = existential.extended_with(&universal);
            if !inst.formula().eval(&full)? {
                holds_for_all = false;
                break;
            }
        }
        if holds_for_all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Decides the instance by enumerating all existential assignments and
/// asking the oracle one tautology query each, stopping at the first
/// success. Worst case exactly `2^|X|` queries, phase [`PHASE_FPTNP`].
pub fn decide_qdnf_fptnp(
    inst: &QDnfInstance,
    session: &mut OracleSession,
) -> Result<bool, QsatError> {
    let xs: Vec<u32> = inst.existential().iter().copied().collect();
    if xs.len() >= 63 {
        return Err(QsatError::GuardExceeded {
            variables: xs.len(),
            guard: 62,
        });
    }
    for existential in lexicographic_assignments(&xs) {
        let restricted = inst.formula().restrict(&existential)?;
        if session.query_dnf_tautology(&restricted, PHASE_FPTNP)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Decomposition of an instance into the existential subformula and the
/// variable-disjoint all-universal remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaSplit {
    /// Terms whose variable-connected component touches an existential
    /// variable, requantified as an instance.
    pub existential_part: QDnfInstance,
    /// The remaining terms; they hold universal variables only and share no
    /// variable with the existential part.
    pub universal_part: DnfFormula,
    /// Total literal count of the existential part: the kernel parameter.
    pub existential_size: usize,
}

/// Splits the terms along variable-connected components: a term belongs to
/// the existential part iff its component contains an existential variable.
pub fn split_existential(inst: &QDnfInstance) -> SubformulaSplit {
    let variable_count = inst.variable_count() as usize;
    let mut components = UnionFind::new(variable_count + 1);
    for term in inst.formula().terms() {
        for pair in term.windows(2) {
            components.union(pair[0].var() as usize, pair[1].var() as usize);
        }
    }
    let mut existential_roots = BTreeSet::new();
    for &x in inst.existential() {
        existential_roots.insert(components.find(x as usize));
    }

    let mut existential_terms = Vec::new();
    let mut universal_terms = Vec::new();
    for term in inst.formula().terms() {
        let in_existential = term
            .first()
            .is_some_and(|lit| existential_roots.contains(&components.find(lit.var() as usize)));
        if in_existential {
            existential_terms.push(term.clone());
        } else {
            universal_terms.push(term.clone());
        }
    }

    let existential_size = existential_terms.iter().map(Vec::len).sum();
    let existential_formula = DnfFormula::new(inst.variable_count(), existential_terms)
        .expect("term subset of a valid formula is valid");
    let occurring = existential_formula.variables();
    let universal: BTreeSet<u32> = inst
        .universal()
        .iter()
        .copied()
        .filter(|v| occurring.contains(v))
        .collect();
    let existential_part =
        QDnfInstance::new(existential_formula, inst.existential().clone(), universal)
            .expect("component terms only mention quantified variables");
    let universal_part = DnfFormula::new(inst.variable_count(), universal_terms)
        .expect("term subset of a valid formula is valid");

    SubformulaSplit {
        existential_part,
        universal_part,
        existential_size,
    }
}

/// Kernelization for the existential-subformula parameter: one tautology
/// query on the universal part (phase [`PHASE_KERNEL`]) decides whether the
/// whole instance collapses to the canonical trivial-yes instance;
/// otherwise the existential part is emitted with its quantifier sets
/// restricted to the surviving variables. Quantified variables that never
/// occurred in the input formula are preserved verbatim.
pub fn kernelize_qdnf(
    inst: &QDnfInstance,
    session: &mut OracleSession,
) -> Result<QDnfInstance, QsatError> {
    let split = split_existential(inst);
    if session.query_dnf_tautology(&split.universal_part, PHASE_KERNEL)? {
        return Ok(QDnfInstance::trivial_yes());
    }
    let occurring_input = inst.formula().variables();
    let occurring_kernel = split.existential_part.formula().variables();
    let keep = |v: &u32| occurring_kernel.contains(v) || !occurring_input.contains(v);
    let existential: BTreeSet<u32> = inst.existential().iter().copied().filter(keep).collect();
    let universal: BTreeSet<u32> = inst.universal().iter().copied().filter(keep).collect();
    Ok(QDnfInstance::new(
        split.existential_part.formula().clone(),
        existential,
        universal,
    )?)
}

/// OR-composition: pads the inputs to a power of two by duplicating the
/// first instance, identifies quantifier sets positionally, and extends
/// every term of instance `i` with a selection-literal pattern encoding
/// `i - 1` in binary, least-significant bit first. The output is a
/// yes-instance iff some input is.
pub fn compose_qdnf_or(instances: &[QDnfInstance]) -> Result<QDnfInstance, QsatError> {
    let first = instances.first().ok_or(QsatError::EmptyComposition)?;
    let existential_count = first.existential().len();
    let universal_count = first.universal().len();
    for (index, inst) in instances.iter().enumerate() {
        if inst.existential().len() != existential_count
            || inst.universal().len() != universal_count
        {
            return Err(QsatError::ShapeMismatch {
                index,
                existential: inst.existential().len(),
                universal: inst.universal().len(),
                expected_existential: existential_count,
                expected_universal: universal_count,
            });
        }
    }

    let padded = instances.len().max(2).next_power_of_two();
    let selector_count = padded.trailing_zeros() as usize;
    let base = (existential_count + universal_count) as u32;
    let variable_count = base + selector_count as u32;

    let mut terms = Vec::new();
    for position in 0..padded {
        let inst = instances.get(position).unwrap_or(first);
        // Positional identification: the j-th existential variable becomes
        // j, the j-th universal variable becomes existential_count + j.
        let mut rename: BTreeMap<u32, u32> = BTreeMap::new();
        for (j, &v) in inst.existential().iter().enumerate() {
            rename.insert(v, j as u32 + 1);
        }
        for (j, &v) in inst.universal().iter().enumerate() {
            rename.insert(v, existential_count as u32 + j as u32 + 1);
        }
        for term in inst.formula().terms() {
            let mut new_term: Vec<Literal> = term
                .iter()
                .map(|lit| Literal::new(rename[&lit.var()], lit.is_positive()))
                .collect();
            for j in 0..selector_count {
                let selector = base + j as u32 + 1;
                new_term.push(Literal::new(selector, position >> j & 1 == 1));
            }
            terms.push(new_term);
        }
    }

    let existential: BTreeSet<u32> = (1..=existential_count as u32)
        .chain(base + 1..=variable_count)
        .collect();
    let universal: BTreeSet<u32> = (existential_count as u32 + 1..=base).collect();
    Ok(QDnfInstance::new(
        DnfFormula::new(variable_count, terms)?,
        existential,
        universal,
    )?)
}

/// Seeded random instance: existential variables `1..=n1`, universal
/// variables `n1+1..=n1+n2`, `terms` terms of `term_len` distinct variables
/// each. Deterministic per seed.
pub fn gen_random_qdnf(n1: u32, n2: u32, terms: u32, term_len: u32, seed: u64) -> QDnfInstance {
    let total = n1 + n2;
    assert!(total >= 1, "instance needs at least one variable");
    let len = term_len.clamp(1, total) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let term_list = (0..terms)
        .map(|_| {
            let mut vars: Vec<u32> = rand::seq::index::sample(&mut rng, total as usize, len)
                .into_iter()
                .map(|i| i as u32 + 1)
                .collect();
            vars.sort_unstable();
            vars.into_iter()
                .map(|v| Literal::new(v, rand::Rng::random_bool(&mut rng, 0.5)))
                .collect()
        })
        .collect();
    QDnfInstance::new(
        DnfFormula::new(total, term_list).expect("sampled terms hold distinct variables"),
        (1..=n1).collect(),
        (n1 + 1..=total).collect(),
    )
    .expect("generated quantifier sets cover all variables")
}
