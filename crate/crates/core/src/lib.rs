//! Kernelization with a SAT solver as the NP-oracle.
//!
//! The crate bundles three algorithm families behind one oracle
//! abstraction: two-level quantified DNF ([`qsat`]), clique-free vertex
//! deletion ([`cliquedel`]), and discovery problems whose structure hides
//! behind per-pair satisfiability instances ([`discovery`]). Every oracle
//! query flows through an [`oracle::OracleSession`], whose ledger makes
//! query budgets observable, and each family ships exhaustive oracle-free
//! deciders so the oracle-assisted paths can be verified end to end.

pub mod cliquedel;
pub mod discovery;
pub mod formula;
pub mod gen;
pub mod oracle;
pub mod qsat;
