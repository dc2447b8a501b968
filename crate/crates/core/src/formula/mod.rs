//! Boolean formula data model shared by every algorithm in this crate:
//! variables, literals, DNF terms, CNF clauses, assignments, and the
//! two-level quantified instance.
//!
//! All values are immutable after construction and may be shared or sent
//! across threads freely.

mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("variable {var} out of range 1..={max}")]
    VariableOutOfRange { var: u32, max: u32 },
    #[error("{container} {index} mentions variable {var} more than once")]
    DuplicateVariable {
        container: &'static str,
        index: usize,
        var: u32,
    },
    #[error("variable {var} is quantified more than once")]
    QuantifiedTwice { var: u32 },
    #[error("variable {var} occurs in the formula but is not quantified")]
    Unquantified { var: u32 },
    #[error("assignment does not bind variable {var}")]
    UnboundVariable { var: u32 },
    #[error("restriction binds variable {var} which is not a formula variable")]
    RestrictionOutOfRange { var: u32 },
}

/// A possibly negated occurrence of a variable. Variable indices start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive }
    }

    pub fn positive(var: u32) -> Self {
        Literal::new(var, true)
    }

    pub fn negative(var: u32) -> Self {
        Literal::new(var, false)
    }

    /// Decodes the signed integer convention used by the text formats:
    /// a negative value denotes a negated variable, zero is not a literal.
    pub fn from_code(code: i64) -> Option<Self> {
        if code == 0 || code.unsigned_abs() > u64::from(u32::MAX) {
            return None;
        }
        Some(Literal::new(code.unsigned_abs() as u32, code > 0))
    }

    pub fn code(self) -> i64 {
        let v = i64::from(self.var);
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A partial or total truth assignment over variable indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    bindings: BTreeMap<u32, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, bool)>) -> Self {
        let mut a = Assignment::new();
        for (var, value) in pairs {
            a.bind(var, value);
        }
        a
    }

    pub fn bind(&mut self, var: u32, value: bool) {
        assert!(var >= 1, "variable indices start at 1");
        self.bindings.insert(var, value);
    }

    pub fn value(&self, var: u32) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        self.value(lit.var()).map(|v| v == lit.is_positive())
    }

    pub fn is_total_over(&self, vars: impl IntoIterator<Item = u32>) -> bool {
        vars.into_iter().all(|v| self.bindings.contains_key(&v))
    }

    pub fn restricted_to(&self, keep: &BTreeSet<u32>) -> Assignment {
        Assignment {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(&v, &b)| (v, b))
                .collect(),
        }
    }

    /// Bindings of `other` are added on top of `self`.
    pub fn extended_with(&self, other: &Assignment) -> Assignment {
        let mut bindings = self.bindings.clone();
        bindings.extend(other.bindings.iter().map(|(&v, &b)| (v, b)));
        Assignment { bindings }
    }

    pub fn bindings(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

fn validate_literal_lists(
    container: &'static str,
    variable_count: u32,
    lists: &[Vec<Literal>],
) -> Result<(), FormulaError> {
    for (index, list) in lists.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for lit in list {
            if lit.var() > variable_count {
                return Err(FormulaError::VariableOutOfRange {
                    var: lit.var(),
                    max: variable_count,
                });
            }
            // A list with both x and ¬x (or x twice) is a construction
            // error, never silently simplified.
            if !seen.insert(lit.var()) {
                return Err(FormulaError::DuplicateVariable {
                    container,
                    index,
                    var: lit.var(),
                });
            }
        }
    }
    Ok(())
}

fn occurring_variables(lists: &[Vec<Literal>]) -> BTreeSet<u32> {
    lists
        .iter()
        .flat_map(|l| l.iter().map(|lit| lit.var()))
        .collect()
}

fn check_total(lists: &[Vec<Literal>], assignment: &Assignment) -> Result<(), FormulaError> {
    for list in lists {
        for lit in list {
            if assignment.value(lit.var()).is_none() {
                return Err(FormulaError::UnboundVariable { var: lit.var() });
            }
        }
    }
    Ok(())
}

/// A formula in disjunctive normal form: a disjunction of terms, each term a
/// conjunction of literals.
///
/// Degenerate representations are fixed: the constant-false DNF has zero
/// terms, the constant-true DNF is a single empty term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnfFormula {
    variable_count: u32,
    terms: Vec<Vec<Literal>>,
}

impl DnfFormula {
    pub fn new(variable_count: u32, terms: Vec<Vec<Literal>>) -> Result<Self, FormulaError> {
        validate_literal_lists("term", variable_count, &terms)?;
        Ok(DnfFormula {
            variable_count,
            terms,
        })
    }

    pub fn constant_false(variable_count: u32) -> Self {
        DnfFormula {
            variable_count,
            terms: Vec::new(),
        }
    }

    pub fn constant_true(variable_count: u32) -> Self {
        DnfFormula {
            variable_count,
            terms: vec![Vec::new()],
        }
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    pub fn terms(&self) -> &[Vec<Literal>] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> BTreeSet<u32> {
        occurring_variables(&self.terms)
    }

    pub fn literal_count(&self) -> usize {
        self.terms.iter().map(Vec::len).sum()
    }

    pub fn is_constant_true(&self) -> bool {
        self.terms.iter().any(Vec::is_empty)
    }

    pub fn is_constant_false(&self) -> bool {
        self.terms.is_empty()
    }

    /// Standard DNF semantics; the empty DNF is false. The assignment must
    /// bind every occurring variable.
    pub fn eval(&self, assignment: &Assignment) -> Result<bool, FormulaError> {
        check_total(&self.terms, assignment)?;
        Ok(self.terms.iter().any(|term| {
            term.iter()
                .all(|lit| assignment.literal_value(*lit) == Some(true))
        }))
    }

    /// De Morgan negation: each term of length m becomes one clause of
    /// length m with all polarities flipped. The empty (false) DNF maps to
    /// the empty (true) clause list.
    pub fn negate_to_cnf(&self) -> CnfFormula {
        CnfFormula {
            variable_count: self.variable_count,
            clauses: self
                .terms
                .iter()
                .map(|term| term.iter().map(|lit| lit.negated()).collect())
                .collect(),
        }
    }

    /// Substitutes the bound variables of `partial` into the formula. Terms
    /// with a falsified literal are dropped and satisfied literals are
    /// removed from their terms. A term emptied entirely makes the result
    /// the constant-true DNF.
    pub fn restrict(&self, partial: &Assignment) -> Result<DnfFormula, FormulaError> {
        for (var, _) in partial.bindings() {
            if var > self.variable_count {
                return Err(FormulaError::RestrictionOutOfRange { var });
            }
        }
        let mut terms = Vec::new();
        'terms: for term in &self.terms {
            let mut kept = Vec::new();
            for lit in term {
                match partial.literal_value(*lit) {
                    Some(true) => {}
                    Some(false) => continue 'terms,
                    None => kept.push(*lit),
                }
            }
            if kept.is_empty() {
                return Ok(DnfFormula::constant_true(self.variable_count));
            }
            terms.push(kept);
        }
        Ok(DnfFormula {
            variable_count: self.variable_count,
            terms,
        })
    }
}

/// A formula in conjunctive normal form; the oracle query currency.
///
/// An empty clause list is the trivially-true CNF; a member empty clause
/// makes the CNF unsatisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    variable_count: u32,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(variable_count: u32, clauses: Vec<Vec<Literal>>) -> Result<Self, FormulaError> {
        validate_literal_lists("clause", variable_count, &clauses)?;
        Ok(CnfFormula {
            variable_count,
            clauses,
        })
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        occurring_variables(&self.clauses)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Vec::is_empty)
    }

    /// Standard CNF semantics; the empty CNF is true.
    pub fn eval(&self, assignment: &Assignment) -> Result<bool, FormulaError> {
        check_total(&self.clauses, assignment)?;
        Ok(self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|lit| assignment.literal_value(*lit) == Some(true))
        }))
    }
}

/// A DNF formula whose variables are partitioned into an existentially
/// quantified set and a universally quantified set.
///
/// Quantified variables need not occur in the formula; every occurring
/// variable must be quantified exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDnfInstance {
    formula: DnfFormula,
    existential: BTreeSet<u32>,
    universal: BTreeSet<u32>,
}

impl QDnfInstance {
    pub fn new(
        formula: DnfFormula,
        existential: BTreeSet<u32>,
        universal: BTreeSet<u32>,
    ) -> Result<Self, FormulaError> {
        for &var in existential.iter().chain(universal.iter()) {
            if var < 1 || var > formula.variable_count() {
                return Err(FormulaError::VariableOutOfRange {
                    var,
                    max: formula.variable_count(),
                });
            }
        }
        if let Some(&var) = existential.intersection(&universal).next() {
            return Err(FormulaError::QuantifiedTwice { var });
        }
        for var in formula.variables() {
            if !existential.contains(&var) && !universal.contains(&var) {
                return Err(FormulaError::Unquantified { var });
            }
        }
        Ok(QDnfInstance {
            formula,
            existential,
            universal,
        })
    }

    /// The canonical constant-size yes-instance: one existential variable
    /// in a single positive unit term.
    pub fn trivial_yes() -> Self {
        QDnfInstance {
            formula: DnfFormula::new(1, vec![vec![Literal::positive(1)]])
                .expect("fixed trivial formula is valid"),
            existential: BTreeSet::from([1]),
            universal: BTreeSet::new(),
        }
    }

    pub fn formula(&self) -> &DnfFormula {
        &self.formula
    }

    pub fn existential(&self) -> &BTreeSet<u32> {
        &self.existential
    }

    pub fn universal(&self) -> &BTreeSet<u32> {
        &self.universal
    }

    pub fn variable_count(&self) -> u32 {
        self.formula.variable_count()
    }
}
