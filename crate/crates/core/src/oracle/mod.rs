//! The NP-oracle abstraction: a builtin complete SAT decision procedure, an
//! external-solver process adapter, and a ledger recording every query so
//! per-phase oracle budgets stay observable.
//!
//! A backend+ledger pair forms a single-owner [`OracleSession`]; one query
//! is in flight at a time per session, and distinct sessions may run
//! concurrently. Oracle failures are errors, never defaulted verdicts.

mod dpll;
mod external;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::formula::{Assignment, CnfFormula, DnfFormula};

pub use external::ExternalSolverConfig;

/// Environment variable holding the default external solver command template.
pub const ORACLE_SOLVER_CMD_ENV: &str = "ORACLE_SOLVER_CMD";

/// Ledger-free satisfiability check with the builtin solver, for generator
/// plumbing that must not count as an oracle query.
pub(crate) fn builtin_satisfiable(cnf: &CnfFormula) -> bool {
    dpll::solve(cnf).is_some()
}

const DEFAULT_EXTERNAL_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("external solver timed out after {seconds} s")]
    Timeout { seconds: u64 },
    #[error("failed to run external solver: {0}")]
    Spawn(String),
    #[error("external solver produced no verdict line")]
    MissingVerdict,
    #[error("could not parse external solver output: {0}")]
    Unparseable(String),
    #[error("oracle model does not satisfy the query")]
    InvalidModel,
    #[error("{0} is not set")]
    CommandUnset(&'static str),
    #[error("i/o error talking to external solver: {0}")]
    Io(String),
}

/// Answer to a single satisfiability query. The model, when present, is
/// total over the query's declared variables and satisfies the query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub satisfiable: bool,
    pub model: Option<Assignment>,
}

/// One row per oracle query: phase tag, query dimensions, verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub phase: String,
    pub variables: u32,
    pub clauses: usize,
    pub satisfiable: bool,
}

/// Ordered record of every query issued through a session.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleLedger {
    entries: Vec<LedgerEntry>,
}

impl OracleLedger {
    pub fn new() -> Self {
        OracleLedger::default()
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count_for_phase(&self, phase: &str) -> usize {
        self.entries.iter().filter(|e| e.phase == phase).count()
    }

    fn record(&mut self, phase: &str, cnf: &CnfFormula, satisfiable: bool) {
        self.entries.push(LedgerEntry {
            phase: phase.to_string(),
            variables: cnf.variable_count(),
            clauses: cnf.clause_count(),
            satisfiable,
        });
    }

    pub fn report(&self) -> LedgerReport {
        let mut phases: BTreeMap<String, PhaseSummary> = BTreeMap::new();
        for entry in &self.entries {
            let summary = phases.entry(entry.phase.clone()).or_default();
            summary.queries += 1;
            if entry.satisfiable {
                summary.satisfiable += 1;
            }
            summary.max_variables = summary.max_variables.max(entry.variables);
            summary.max_clauses = summary.max_clauses.max(entry.clauses);
        }
        LedgerReport {
            total: self.entries.len(),
            phases,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseSummary {
    pub queries: usize,
    pub satisfiable: usize,
    pub max_variables: u32,
    pub max_clauses: usize,
}

/// Per-phase totals with a stable text rendering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LedgerReport {
    pub total: usize,
    pub phases: BTreeMap<String, PhaseSummary>,
}

impl fmt::Display for LedgerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ledger total {}", self.total)?;
        for (phase, s) in &self.phases {
            writeln!(
                f,
                "ledger phase {phase} count {} sat {} max_vars {} max_clauses {}",
                s.queries, s.satisfiable, s.max_variables, s.max_clauses
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleBackend {
    /// Deterministic in-process DPLL solver; always attaches a model on sat.
    Builtin,
    External(ExternalSolverConfig),
}

/// A backend plus the ledger auditing it.
#[derive(Debug)]
pub struct OracleSession {
    backend: OracleBackend,
    ledger: OracleLedger,
}

impl OracleSession {
    pub fn new(backend: OracleBackend) -> Self {
        OracleSession {
            backend,
            ledger: OracleLedger::new(),
        }
    }

    pub fn builtin() -> Self {
        OracleSession::new(OracleBackend::Builtin)
    }

    pub fn external(command: impl Into<String>, timeout: Duration) -> Self {
        OracleSession::new(OracleBackend::External(ExternalSolverConfig::new(
            command, timeout,
        )))
    }

    /// External session whose command template comes from
    /// [`ORACLE_SOLVER_CMD_ENV`].
    pub fn external_from_env() -> Result<Self, OracleError> {
        let command = std::env::var(ORACLE_SOLVER_CMD_ENV)
            .map_err(|_| OracleError::CommandUnset(ORACLE_SOLVER_CMD_ENV))?;
        Ok(OracleSession::external(command, DEFAULT_EXTERNAL_TIMEOUT))
    }

    pub fn backend(&self) -> &OracleBackend {
        &self.backend
    }

    pub fn ledger(&self) -> &OracleLedger {
        &self.ledger
    }

    /// Decides satisfiability of `cnf` and appends exactly one ledger entry
    /// under `phase`. External models are re-validated against the query
    /// before acceptance.
    pub fn query_sat(
        &mut self,
        cnf: &CnfFormula,
        phase: &str,
    ) -> Result<OracleVerdict, OracleError> {
        let verdict = match &self.backend {
            OracleBackend::Builtin => {
                let model = dpll::solve(cnf);
                OracleVerdict {
                    satisfiable: model.is_some(),
                    model,
                }
            }
            OracleBackend::External(config) => external::solve(config, cnf)?,
        };
        if let Some(model) = &verdict.model {
            if cnf.eval(model) != Ok(true) {
                return Err(OracleError::InvalidModel);
            }
        }
        self.ledger.record(phase, cnf, verdict.satisfiable);
        Ok(verdict)
    }

    /// True iff `dnf` evaluates to true under every total assignment,
    /// decided as unsatisfiability of the negated formula. Exactly one
    /// ledger entry.
    pub fn query_dnf_tautology(
        &mut self,
        dnf: &DnfFormula,
        phase: &str,
    ) -> Result<bool, OracleError> {
        let verdict = self.query_sat(&dnf.negate_to_cnf(), phase)?;
        Ok(!verdict.satisfiable)
    }
}
