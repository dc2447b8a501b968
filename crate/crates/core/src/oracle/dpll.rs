//! Builtin complete SAT decision procedure: DPLL with unit propagation and
//! pure-literal elimination.
//!
//! The solver is deterministic: units are applied in clause order, pure
//! literals in variable order, and branching picks the lowest-index
//! unassigned variable of an unsatisfied clause, trying false before true.

use crate::formula::{Assignment, CnfFormula};

/// Returns a total model over `1..=variable_count` when satisfiable.
pub(crate) fn solve(cnf: &CnfFormula) -> Option<Assignment> {
    let variable_count = cnf.variable_count() as usize;
    let clauses: Vec<Vec<(usize, bool)>> = cnf
        .clauses()
        .iter()
        .map(|clause| {
            clause
                .iter()
                .map(|lit| (lit.var() as usize, lit.is_positive()))
                .collect()
        })
        .collect();
    if clauses.iter().any(|c| c.is_empty()) {
        return None;
    }

    let mut solver = Solver {
        clauses,
        assign: vec![None; variable_count + 1],
        trail: Vec::new(),
    };
    if !solver.search() {
        return None;
    }
    let mut model = Assignment::new();
    for var in 1..=variable_count {
        model.bind(var as u32, solver.assign[var].unwrap_or(false));
    }
    Some(model)
}

struct Solver {
    clauses: Vec<Vec<(usize, bool)>>,
    assign: Vec<Option<bool>>,
    trail: Vec<usize>,
}

enum ClauseState {
    Satisfied,
    Conflict,
    Unit((usize, bool)),
    Open,
}

impl Solver {
    fn literal_value(&self, (var, positive): (usize, bool)) -> Option<bool> {
        self.assign[var].map(|v| v == positive)
    }

    fn assign_var(&mut self, var: usize, value: bool) {
        debug_assert!(self.assign[var].is_none());
        self.assign[var] = Some(value);
        self.trail.push(var);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.assign[var] = None;
        }
    }

    fn clause_state(&self, clause: &[(usize, bool)]) -> ClauseState {
        let mut unassigned = None;
        let mut open = 0;
        for &lit in clause {
            match self.literal_value(lit) {
                Some(true) => return ClauseState::Satisfied,
                Some(false) => {}
                None => {
                    open += 1;
                    unassigned = Some(lit);
                }
            }
        }
        match open {
            0 => ClauseState::Conflict,
            1 => ClauseState::Unit(unassigned.unwrap()),
            _ => ClauseState::Open,
        }
    }

    /// Applies unit propagation and pure-literal elimination to fixpoint.
    /// Returns false on conflict; assignments stay on the trail either way.
    fn simplify(&mut self) -> bool {
        loop {
            let mut changed = false;
            for idx in 0..self.clauses.len() {
                match self.clause_state(&self.clauses[idx]) {
                    ClauseState::Conflict => return false,
                    ClauseState::Unit((var, positive)) => {
                        self.assign_var(var, positive);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if changed {
                continue;
            }
            // Pure literals: variables occurring with a single polarity in
            // the not-yet-satisfied clauses may be fixed to that polarity.
            let n = self.assign.len();
            let mut pos = vec![false; n];
            let mut neg = vec![false; n];
            for clause in &self.clauses {
                if clause.iter().any(|&l| self.literal_value(l) == Some(true)) {
                    continue;
                }
                for &(var, positive) in clause {
                    if self.assign[var].is_none() {
                        if positive {
                            pos[var] = true;
                        } else {
                            neg[var] = true;
                        }
                    }
                }
            }
            for var in 1..n {
                if self.assign[var].is_none() && pos[var] != neg[var] {
                    self.assign_var(var, pos[var]);
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn branch_variable(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for clause in &self.clauses {
            if clause.iter().any(|&l| self.literal_value(l) == Some(true)) {
                continue;
            }
            for &(var, _) in clause {
                if self.assign[var].is_none() && best.is_none_or(|b| var < b) {
                    best = Some(var);
                }
            }
        }
        best
    }

    fn search(&mut self) -> bool {
        let mark = self.trail.len();
        if !self.simplify() {
            self.undo_to(mark);
            return false;
        }
        let Some(var) = self.branch_variable() else {
            // Every clause is satisfied.
            return true;
        };
        for value in [false, true] {
            let decision_mark = self.trail.len();
            self.assign_var(var, value);
            if self.search() {
                return true;
            }
            self.undo_to(decision_mark);
        }
        self.undo_to(mark);
        false
    }
}
