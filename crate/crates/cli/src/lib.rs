//! Batch command-line front end for the kernelization toolkit: instance
//! codecs, subcommand dispatch, seeded generators, verification pipelines,
//! and ledger reports.
//!
//! Exit status contract: 0 = yes / success, 1 = no / failed verification,
//! 2 = usage or parse error, 3 = oracle failure.

pub mod verify;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use satkern_core::cliquedel::{self, CfvdInstance, GraphDocument, DEFAULT_CFVD_GUARD};
use satkern_core::discovery::{self, DvcrInstance, DEFAULT_BFS_GUARD};
use satkern_core::formula::{CnfFormula, QDnfInstance};
use satkern_core::oracle::{OracleError, OracleSession};
use satkern_core::qsat::{self, DEFAULT_QDNF_GUARD};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "satkern",
    version,
    about = "Kernelization toolkit using a SAT solver as the NP-oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance; the answer is the exit status (0 yes, 1 no)
    Solve {
        #[command(subcommand)]
        problem: SolveProblem,
    },
    /// Shrink an instance and write the kernel to --out
    Kernelize {
        #[command(subcommand)]
        problem: KernelizeProblem,
    },
    /// Combine instances into one OR-equivalent instance
    Compose {
        #[command(subcommand)]
        family: ComposeFamily,
    },
    /// Emit a seeded random instance
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Run the seeded brute-force equivalence suites
    Verify(VerifyArgs),
    /// Summarize an instance file
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    /// In-process DPLL solver
    Builtin,
    /// Command template from ORACLE_SOLVER_CMD
    External,
}

impl Backend {
    fn session(self) -> Result<OracleSession, OracleError> {
        match self {
            Backend::Builtin => Ok(OracleSession::builtin()),
            Backend::External => OracleSession::external_from_env(),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Backend::Builtin => "builtin",
            Backend::External => "external",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QsatAlgo {
    /// Existential enumeration with tautology queries
    Oracle,
    /// Exhaustive evaluation, no oracle
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum CfvdAlgo {
    /// Oracle-driven bounded search tree
    Oracle,
    /// Subset enumeration within the weight budget, no oracle
    Brute,
    /// Clique enumeration plus branching, no oracle
    Enum,
}

#[derive(Subcommand)]
enum SolveProblem {
    /// Two-level exists-forall DNF instance
    Qsat {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Builtin)]
        backend: Backend,
        #[arg(long, value_enum, default_value_t = QsatAlgo::Oracle)]
        algo: QsatAlgo,
        /// Cap on |X| + |Y| for the brute-force decider
        #[arg(long)]
        guard: Option<u32>,
        #[arg(long)]
        timing: bool,
    },
    /// Clique-free vertex deletion instance
    Cfvd {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Builtin)]
        backend: Backend,
        #[arg(long, value_enum, default_value_t = CfvdAlgo::Oracle)]
        algo: CfvdAlgo,
        /// Override the deletion budget and clique bound as `h,k`
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        guard: Option<u32>,
        #[arg(long)]
        timing: bool,
    },
    /// Discovery vertex cover reconfiguration bundle
    Dvcr {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Builtin)]
        backend: Backend,
        /// Override the cover bound and sequence length as `k,l`
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        guard: Option<u32>,
        #[arg(long)]
        timing: bool,
    },
    /// Plain DIMACS CNF; prints SAT-competition verdict lines, so this
    /// subcommand can itself serve as an ORACLE_SOLVER_CMD target
    Cnf {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum KernelizeProblem {
    Qsat {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Builtin)]
        backend: Backend,
        #[arg(long)]
        timing: bool,
    },
    Cfvd {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Builtin)]
        backend: Backend,
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        timing: bool,
    },
    Dvcr {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Backend::Builtin)]
        backend: Backend,
        #[arg(long)]
        param: Option<String>,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum ComposeFamily {
    /// OR-composition of exists-forall DNF instances
    QsatOr {
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Weighted OR-composition of unweighted deletion instances
    WcfvdOr {
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    Qdnf {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n1: u32,
        #[arg(long, default_value_t = 4)]
        n2: u32,
        #[arg(long, default_value_t = 6)]
        terms: u32,
        #[arg(long = "term-len", default_value_t = 3)]
        term_len: u32,
        #[arg(long)]
        out: PathBuf,
    },
    Graph {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        out: PathBuf,
    },
    Dvcr {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long = "cnf-vars", default_value_t = 4)]
        cnf_vars: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySuite {
    Qsat,
    Cfvd,
    Dvcr,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: VerifySuite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: u32,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

/// Deterministic run report: command echo, answer, ledger summary. Wall
/// time is opt-in so default output stays byte-stable across runs.
struct Report {
    lines: Vec<String>,
    timing: bool,
    started: Instant,
}

impl Report {
    fn new(echo: &str, timing: bool) -> Self {
        Report {
            lines: vec![format!("c satkern {echo}")],
            timing,
            started: Instant::now(),
        }
    }

    fn line(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn ledger(&mut self, session: &OracleSession) {
        for line in session.ledger().report().to_string().lines() {
            self.lines.push(line.to_string());
        }
    }

    fn finish(mut self) {
        if self.timing {
            self.lines
                .push(format!("c wall_ms {}", self.started.elapsed().as_millis()));
        }
        for line in &self.lines {
            println!("{line}");
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_output(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

fn parse_h_k(text: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        bail!("expected `h,k`, got `{text}`");
    }
    Ok((
        parts[0].trim().parse().context("invalid h")?,
        parts[1].trim().parse().context("invalid k")?,
    ))
}

fn parse_k_l(text: &str) -> Result<(u32, BigUint)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        bail!("expected `k,l`, got `{text}`");
    }
    Ok((
        parts[0].trim().parse().context("invalid k")?,
        parts[1].trim().parse().context("invalid l")?,
    ))
}

fn answer_exit(yes: bool) -> i32 {
    if yes {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

/// Parses the argument vector (without argv0) and runs the command,
/// returning the process exit status.
pub fn run(args: Vec<String>) -> i32 {
    let echo = args.join(" ");
    let cli = match Cli::try_parse_from(std::iter::once("satkern".to_string()).chain(args)) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    EXIT_YES
                }
                _ => {
                    eprint!("{err}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, &echo) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let oracle_failure = err
                .chain()
                .any(|cause| cause.downcast_ref::<OracleError>().is_some());
            if oracle_failure {
                EXIT_ORACLE
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(cli: Cli, echo: &str) -> Result<i32> {
    match cli.command {
        Command::Solve { problem } => solve(problem, echo),
        Command::Kernelize { problem } => kernelize(problem, echo),
        Command::Compose { family } => compose(family, echo),
        Command::Gen { family } => generate(family, echo),
        Command::Verify(args) => run_verify(args),
        Command::Report(args) => report_instance(args, echo),
    }
}

fn solve(problem: SolveProblem, echo: &str) -> Result<i32> {
    match problem {
        SolveProblem::Qsat {
            input,
            backend,
            algo,
            guard,
            timing,
        } => {
            let inst = QDnfInstance::parse(&read_input(&input)?)?;
            let mut report = Report::new(echo, timing);
            report.line(format!("c backend {}", backend.label()));
            let yes = match algo {
                QsatAlgo::Brute => {
                    qsat::decide_qdnf_bruteforce(&inst, guard.unwrap_or(DEFAULT_QDNF_GUARD))?
                }
                QsatAlgo::Oracle => {
                    let mut session = backend.session()?;
                    let yes = qsat::decide_qdnf_fptnp(&inst, &mut session)?;
                    report.line(format!("answer {}", if yes { "yes" } else { "no" }));
                    report.ledger(&session);
                    report.finish();
                    return Ok(answer_exit(yes));
                }
            };
            report.line(format!("answer {}", if yes { "yes" } else { "no" }));
            report.finish();
            Ok(answer_exit(yes))
        }
        SolveProblem::Cfvd {
            input,
            backend,
            algo,
            param,
            guard,
            timing,
        } => {
            let doc = GraphDocument::parse(&read_input(&input)?)?;
            let inst = instance_with_params(&doc, param.as_deref())?;
            let mut report = Report::new(echo, timing);
            report.line(format!("c backend {}", backend.label()));
            let yes = match algo {
                CfvdAlgo::Oracle => {
                    let mut session = backend.session()?;
                    let yes = cliquedel::solve_cfvd_searchtree(&inst, &mut session)?;
                    report.line(format!("answer {}", if yes { "yes" } else { "no" }));
                    report.ledger(&session);
                    report.finish();
                    return Ok(answer_exit(yes));
                }
                CfvdAlgo::Brute => {
                    cliquedel::solve_cfvd_bruteforce(&inst, guard.unwrap_or(DEFAULT_CFVD_GUARD))?
                }
                CfvdAlgo::Enum => cliquedel::solve_cfvd_searchtree_enum(&inst)?,
            };
            report.line(format!("answer {}", if yes { "yes" } else { "no" }));
            report.finish();
            Ok(answer_exit(yes))
        }
        SolveProblem::Dvcr {
            input,
            backend,
            param,
            guard,
            timing,
        } => {
            let inst = dvcr_with_params(&read_input(&input)?, param.as_deref())?;
            let mut report = Report::new(echo, timing);
            report.line(format!("c backend {}", backend.label()));
            let mut session = backend.session()?;
            let graph = discovery::discovered_graph(inst.incidence(), &mut session)?;
            let (yes, _) = discovery::solve_dvcr_bfs(
                &graph,
                inst.start(),
                inst.target(),
                inst.cover_bound(),
                inst.sequence_length(),
                guard.unwrap_or(DEFAULT_BFS_GUARD),
            )?;
            report.line(format!("answer {}", if yes { "yes" } else { "no" }));
            report.ledger(&session);
            report.finish();
            Ok(answer_exit(yes))
        }
        SolveProblem::Cnf { input } => {
            let cnf = CnfFormula::parse_dimacs(&read_input(&input)?)?;
            let mut session = OracleSession::builtin();
            let verdict = session.query_sat(&cnf, "cnf")?;
            if verdict.satisfiable {
                println!("s SATISFIABLE");
                if let Some(model) = verdict.model {
                    let mut line = String::from("v");
                    for (var, value) in model.bindings() {
                        line.push_str(&format!(
                            " {}",
                            if value { var as i64 } else { -(var as i64) }
                        ));
                    }
                    line.push_str(" 0");
                    println!("{line}");
                }
            } else {
                println!("s UNSATISFIABLE");
            }
            Ok(answer_exit(verdict.satisfiable))
        }
    }
}

fn instance_with_params(doc: &GraphDocument, param: Option<&str>) -> Result<CfvdInstance> {
    match param {
        Some(text) => {
            let (h, k) = parse_h_k(text)?;
            Ok(CfvdInstance::new(doc.graph.clone(), h, k, doc.weighted)?)
        }
        None => Ok(doc.to_instance()?),
    }
}

fn dvcr_with_params(text: &str, param: Option<&str>) -> Result<DvcrInstance> {
    let inst = DvcrInstance::parse(text)?;
    match param {
        Some(text) => {
            let (k, l) = parse_k_l(text)?;
            let pairs: Vec<((u32, u32), CnfFormula)> = inst
                .incidence()
                .instances()
                .map(|(&(u, v), cnf)| ((u as u32, v as u32), cnf.clone()))
                .collect();
            Ok(DvcrInstance::new(
                inst.vertex_count(),
                pairs,
                inst.start().clone(),
                inst.target().clone(),
                k,
                l,
            )?)
        }
        None => Ok(inst),
    }
}

fn kernelize(problem: KernelizeProblem, echo: &str) -> Result<i32> {
    match problem {
        KernelizeProblem::Qsat {
            input,
            out,
            backend,
            timing,
        } => {
            let inst = QDnfInstance::parse(&read_input(&input)?)?;
            let mut session = backend.session()?;
            let kernel = qsat::kernelize_qdnf(&inst, &mut session)?;
            write_output(&out, &kernel.to_text())?;
            let mut report = Report::new(echo, timing);
            report.line(format!("kernel {}", out.display()));
            report.line(format!(
                "kernel vars {} terms {}",
                kernel.variable_count(),
                kernel.formula().term_count()
            ));
            report.ledger(&session);
            report.finish();
            Ok(EXIT_YES)
        }
        KernelizeProblem::Cfvd {
            input,
            out,
            backend,
            param,
            timing,
        } => {
            let doc = GraphDocument::parse(&read_input(&input)?)?;
            let inst = instance_with_params(&doc, param.as_deref())?;
            let mut session = backend.session()?;
            let kernel = cliquedel::kernelize_cfvd(&inst, &mut session)?;
            write_output(&out, &GraphDocument::from_instance(&kernel).to_text())?;
            let mut report = Report::new(echo, timing);
            report.line(format!("kernel {}", out.display()));
            report.line(format!(
                "kernel vertices {} edges {}",
                kernel.graph().vertex_count(),
                kernel.graph().edge_count()
            ));
            report.ledger(&session);
            report.finish();
            Ok(EXIT_YES)
        }
        KernelizeProblem::Dvcr {
            input,
            out,
            backend,
            param,
            timing,
        } => {
            let inst = dvcr_with_params(&read_input(&input)?, param.as_deref())?;
            let mut session = backend.session()?;
            let kernel = discovery::kernelize_dvcr(&inst, &mut session)?;
            write_output(&out, &kernel.to_text())?;
            let mut report = Report::new(echo, timing);
            report.line(format!("kernel {}", out.display()));
            report.line(format!(
                "kernel vertices {} pairs {}",
                kernel.vertex_count(),
                kernel.incidence().pair_count()
            ));
            report.ledger(&session);
            report.finish();
            Ok(EXIT_YES)
        }
    }
}

fn compose(family: ComposeFamily, echo: &str) -> Result<i32> {
    match family {
        ComposeFamily::QsatOr { inputs, out } => {
            let instances: Vec<QDnfInstance> = inputs
                .iter()
                .map(|path| Ok(QDnfInstance::parse(&read_input(path)?)?))
                .collect::<Result<_>>()?;
            let composed = qsat::compose_qdnf_or(&instances)?;
            write_output(&out, &composed.to_text())?;
            let mut report = Report::new(echo, false);
            report.line(format!("compose {}", out.display()));
            report.line(format!(
                "compose vars {} terms {}",
                composed.variable_count(),
                composed.formula().term_count()
            ));
            report.finish();
            Ok(EXIT_YES)
        }
        ComposeFamily::WcfvdOr { inputs, out } => {
            let instances: Vec<CfvdInstance> = inputs
                .iter()
                .map(|path| {
                    let doc = GraphDocument::parse(&read_input(path)?)?;
                    doc.to_instance()
                        .map_err(|e| anyhow!("{}: {e}", path.display()))
                })
                .collect::<Result<_>>()?;
            let composed = cliquedel::compose_wcfvd_or(&instances)?;
            write_output(&out, &GraphDocument::from_instance(&composed).to_text())?;
            let mut report = Report::new(echo, false);
            report.line(format!("compose {}", out.display()));
            report.line(format!(
                "compose vertices {} h {} k {}",
                composed.graph().vertex_count(),
                composed.deletion_budget(),
                composed.clique_bound()
            ));
            report.finish();
            Ok(EXIT_YES)
        }
    }
}

fn generate(family: GenFamily, echo: &str) -> Result<i32> {
    let mut report = Report::new(echo, false);
    match family {
        GenFamily::Qdnf {
            seed,
            n1,
            n2,
            terms,
            term_len,
            out,
        } => {
            if n1 + n2 == 0 {
                bail!("--n1 and --n2 cannot both be zero");
            }
            let inst = qsat::gen_random_qdnf(n1, n2, terms, term_len, seed);
            write_output(&out, &inst.to_text())?;
            report.line(format!("c seed {seed}"));
            report.line(format!("generated {}", out.display()));
        }
        GenFamily::Graph {
            seed,
            n,
            weighted,
            out,
        } => {
            let inst = cliquedel::gen_random_cfvd(n, weighted, seed);
            write_output(&out, &GraphDocument::from_instance(&inst).to_text())?;
            report.line(format!("c seed {seed}"));
            report.line(format!("generated {}", out.display()));
        }
        GenFamily::Dvcr {
            seed,
            n,
            cnf_vars,
            out,
        } => {
            let inst = discovery::gen_random_dvcr(n, cnf_vars, seed);
            write_output(&out, &inst.to_text())?;
            report.line(format!("c seed {seed}"));
            report.line(format!("generated {}", out.display()));
        }
    }
    report.finish();
    Ok(EXIT_YES)
}

fn run_verify(args: VerifyArgs) -> Result<i32> {
    let outcomes = match args.suite {
        VerifySuite::Qsat => verify::verify_qsat(args.seed, args.trials),
        VerifySuite::Cfvd => verify::verify_cfvd(args.seed, args.trials),
        VerifySuite::Dvcr => verify::verify_dvcr(args.seed, args.trials),
        VerifySuite::All => {
            let mut all = verify::verify_qsat(args.seed, args.trials);
            all.extend(verify::verify_cfvd(args.seed, args.trials));
            all.extend(verify::verify_dvcr(args.seed, args.trials));
            all
        }
    };
    let mut all_passed = true;
    for outcome in &outcomes {
        match &outcome.result {
            Ok(detail) => println!("verify {} pass ({detail})", outcome.name),
            Err(reason) => {
                all_passed = false;
                println!("verify {} FAIL ({reason})", outcome.name);
            }
        }
    }
    println!("verify result {}", if all_passed { "pass" } else { "fail" });
    Ok(if all_passed { EXIT_YES } else { EXIT_NO })
}

fn report_instance(args: ReportArgs, echo: &str) -> Result<i32> {
    let text = read_input(&args.input)?;
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('c'))
        .unwrap_or("");
    let mut report = Report::new(echo, false);
    if header.starts_with("p qdnf") {
        let inst = QDnfInstance::parse(&text)?;
        let split = qsat::split_existential(&inst);
        report.line(format!(
            "report qdnf vars {} terms {} existential {} universal {} split_size {}",
            inst.variable_count(),
            inst.formula().term_count(),
            inst.existential().len(),
            inst.universal().len(),
            split.existential_size
        ));
    } else if header.starts_with("p graph") {
        let doc = GraphDocument::parse(&text)?;
        let params = match doc.params {
            Some((h, k)) => format!("h {h} k {k}"),
            None => "no params".to_string(),
        };
        report.line(format!(
            "report graph vertices {} edges {} weighted {} {params}",
            doc.graph.vertex_count(),
            doc.graph.edge_count(),
            doc.weighted
        ));
    } else if header.starts_with("p dvcr") {
        let inst = DvcrInstance::parse(&text)?;
        let nondefault = inst
            .incidence()
            .instances()
            .filter(|(_, cnf)| **cnf != discovery::make_trivial_cnf(false))
            .count();
        report.line(format!(
            "report dvcr vertices {} pairs {} k {} l {} explicit_pairs {}",
            inst.vertex_count(),
            inst.incidence().pair_count(),
            inst.cover_bound(),
            inst.sequence_length(),
            nondefault
        ));
    } else if header.starts_with("p cnf") {
        let cnf = CnfFormula::parse_dimacs(&text)?;
        report.line(format!(
            "report cnf vars {} clauses {}",
            cnf.variable_count(),
            cnf.clause_count()
        ));
    } else {
        bail!("unrecognized instance header `{header}`");
    }
    report.finish();
    Ok(EXIT_YES)
}
