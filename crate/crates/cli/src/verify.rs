//! Seeded brute-force equivalence suites behind `satkern verify`: each
//! property pits an oracle-assisted algorithm against its exhaustive
//! counterpart on generated instances.

use satkern_core::cliquedel::{
    self, count_k_cliques_bruteforce, gen_random_cfvd, solve_cfvd_bruteforce,
    solve_cfvd_searchtree, Graph,
};
use satkern_core::discovery::{
    self, discovered_graph, gen_random_dvcr, kernelize_dvcr, solve_dvcr_bfs, DEFAULT_BFS_GUARD,
};
use satkern_core::oracle::OracleSession;
use satkern_core::qsat::{
    compose_qdnf_or, decide_qdnf_bruteforce, decide_qdnf_fptnp, gen_random_qdnf, kernelize_qdnf,
    split_existential, DEFAULT_QDNF_GUARD, PHASE_FPTNP,
};

pub struct SuiteOutcome {
    pub name: String,
    /// Ok carries a detail string, Err the first failure.
    pub result: Result<String, String>,
}

fn outcome(name: &str, result: Result<String, String>) -> SuiteOutcome {
    SuiteOutcome {
        name: name.to_string(),
        result,
    }
}

fn qsat_corpus(seed: u64, trials: u32) -> Vec<satkern_core::formula::QDnfInstance> {
    (0..u64::from(trials))
        .map(|t| {
            let s = seed.wrapping_mul(0x9e37).wrapping_add(t);
            gen_random_qdnf((t % 4) as u32, 1 + (t % 6) as u32, 1 + (t % 8) as u32, 3, s)
        })
        .collect()
}

pub fn verify_qsat(seed: u64, trials: u32) -> Vec<SuiteOutcome> {
    let corpus = qsat_corpus(seed, trials);

    let kernel = (|| {
        for (i, inst) in corpus.iter().enumerate() {
            let mut session = OracleSession::builtin();
            let kernel =
                kernelize_qdnf(inst, &mut session).map_err(|e| format!("trial {i}: {e}"))?;
            if session.ledger().len() != 1 {
                return Err(format!(
                    "trial {i}: {} oracle queries",
                    session.ledger().len()
                ));
            }
            let before = decide_qdnf_bruteforce(inst, DEFAULT_QDNF_GUARD)
                .map_err(|e| format!("trial {i}: {e}"))?;
            let after = decide_qdnf_bruteforce(&kernel, DEFAULT_QDNF_GUARD)
                .map_err(|e| format!("trial {i}: {e}"))?;
            if before != after {
                return Err(format!(
                    "trial {i}: answer changed from {before} to {after}"
                ));
            }
        }
        Ok(format!("{} trials", corpus.len()))
    })();

    let solver = (|| {
        for (i, inst) in corpus.iter().enumerate() {
            let mut session = OracleSession::builtin();
            let fast =
                decide_qdnf_fptnp(inst, &mut session).map_err(|e| format!("trial {i}: {e}"))?;
            let brute = decide_qdnf_bruteforce(inst, DEFAULT_QDNF_GUARD)
                .map_err(|e| format!("trial {i}: {e}"))?;
            if fast != brute {
                return Err(format!(
                    "trial {i}: oracle said {fast}, brute force {brute}"
                ));
            }
            let budget = 1u64 << inst.existential().len();
            let used = session.ledger().count_for_phase(PHASE_FPTNP) as u64;
            if used > budget {
                return Err(format!("trial {i}: {used} queries exceed 2^|X| = {budget}"));
            }
        }
        Ok(format!("{} trials", corpus.len()))
    })();

    let split = (|| {
        for (i, inst) in corpus.iter().enumerate() {
            let split = split_existential(inst);
            let mut recombined: Vec<_> = split
                .existential_part
                .formula()
                .terms()
                .iter()
                .chain(split.universal_part.terms())
                .cloned()
                .collect();
            recombined.sort();
            let mut original = inst.formula().terms().to_vec();
            original.sort();
            if recombined != original {
                return Err(format!("trial {i}: term multiset changed"));
            }
            let evars = split.existential_part.formula().variables();
            if !evars.is_disjoint(&split.universal_part.variables()) {
                return Err(format!("trial {i}: parts share variables"));
            }
        }
        Ok(format!("{} trials", corpus.len()))
    })();

    let compose = (|| {
        let groups = (trials / 4).max(1);
        for g in 0..u64::from(groups) {
            let inputs: Vec<_> = (0..4)
                .map(|i| gen_random_qdnf(2, 3, 3, 3, seed.wrapping_add(g * 31 + i)))
                .collect();
            let composed = compose_qdnf_or(&inputs).map_err(|e| format!("group {g}: {e}"))?;
            let any_yes = inputs
                .iter()
                .any(|inst| decide_qdnf_bruteforce(inst, DEFAULT_QDNF_GUARD).unwrap_or(false));
            let composed_yes = decide_qdnf_bruteforce(&composed, DEFAULT_QDNF_GUARD)
                .map_err(|e| format!("group {g}: {e}"))?;
            if composed_yes != any_yes {
                return Err(format!("group {g}: OR-law broken"));
            }
        }
        Ok(format!("{groups} groups of 4"))
    })();

    vec![
        outcome("qsat kernel-equivalence", kernel),
        outcome("qsat solver-agreement", solver),
        outcome("qsat split-partition", split),
        outcome("qsat compose-or-law", compose),
    ]
}

pub fn verify_cfvd(seed: u64, trials: u32) -> Vec<SuiteOutcome> {
    let corpus: Vec<_> = (0..u64::from(trials))
        .map(|t| {
            gen_random_cfvd(
                3 + (t % 7) as u32,
                t % 3 == 0,
                seed.wrapping_mul(0x51ed).wrapping_add(t),
            )
        })
        .collect();

    let solver = (|| {
        for (i, inst) in corpus.iter().enumerate() {
            let mut session = OracleSession::builtin();
            let tree =
                solve_cfvd_searchtree(inst, &mut session).map_err(|e| format!("trial {i}: {e}"))?;
            let brute = solve_cfvd_bruteforce(inst, 12).map_err(|e| format!("trial {i}: {e}"))?;
            if tree != brute {
                return Err(format!(
                    "trial {i}: search tree {tree}, brute force {brute}"
                ));
            }
            let budget: u64 = (0..=inst.deletion_budget())
                .map(|d| inst.clique_bound().pow(d as u32))
                .sum();
            let used = session.ledger().len() as u64;
            if used > budget {
                return Err(format!("trial {i}: {used} queries exceed {budget}"));
            }
        }
        Ok(format!("{} trials", corpus.len()))
    })();

    let kernel = (|| {
        for (i, inst) in corpus.iter().enumerate() {
            let mut session = OracleSession::builtin();
            let kernel = cliquedel::kernelize_cfvd(inst, &mut session)
                .map_err(|e| format!("trial {i}: {e}"))?;
            let n = inst.graph().vertex_count();
            if session.ledger().len() as u32 != n {
                return Err(format!(
                    "trial {i}: {} queries, expected {n}",
                    session.ledger().len()
                ));
            }
            let before = solve_cfvd_bruteforce(inst, 12).map_err(|e| format!("trial {i}: {e}"))?;
            let after =
                solve_cfvd_bruteforce(&kernel, 12).map_err(|e| format!("trial {i}: {e}"))?;
            if before != after {
                return Err(format!("trial {i}: answer changed"));
            }
            let count = count_k_cliques_bruteforce(inst.graph(), inst.clique_bound(), 12)
                .map_err(|e| format!("trial {i}: {e}"))?;
            if u64::from(kernel.graph().vertex_count()) > inst.clique_bound() * count {
                return Err(format!("trial {i}: kernel exceeds k * #k-cliques"));
            }
        }
        Ok(format!("{} trials", corpus.len()))
    })();

    let counting = (|| {
        for (i, inst) in corpus.iter().enumerate() {
            let graph = inst.graph();
            let n = graph.vertex_count();
            let reversed = Graph::weighted(
                n,
                graph
                    .edges()
                    .map(|(u, v)| (n + 1 - u, n + 1 - v))
                    .collect::<Vec<_>>(),
                (1..=n).rev().map(|v| graph.weight(v)).collect(),
            )
            .map_err(|e| format!("trial {i}: {e}"))?;
            let k = inst.clique_bound();
            let forward =
                count_k_cliques_bruteforce(graph, k, 12).map_err(|e| format!("trial {i}: {e}"))?;
            let backward = count_k_cliques_bruteforce(&reversed, k, 12)
                .map_err(|e| format!("trial {i}: {e}"))?;
            if forward != backward {
                return Err(format!(
                    "trial {i}: {forward} vs {backward} under relabeling"
                ));
            }
        }
        Ok(format!("{} trials", corpus.len()))
    })();

    vec![
        outcome("cfvd solver-agreement", solver),
        outcome("cfvd kernel-equivalence", kernel),
        outcome("cfvd count-relabeling", counting),
    ]
}

pub fn verify_dvcr(seed: u64, trials: u32) -> Vec<SuiteOutcome> {
    let kernel = (|| {
        for t in 0..u64::from(trials) {
            let inst = gen_random_dvcr(
                4 + (t % 6) as u32,
                4,
                seed.wrapping_mul(0xd1ce).wrapping_add(t),
            );
            let mut session = OracleSession::builtin();
            let before_graph = discovered_graph(inst.incidence(), &mut session)
                .map_err(|e| format!("trial {t}: {e}"))?;
            let (before, _) = solve_dvcr_bfs(
                &before_graph,
                inst.start(),
                inst.target(),
                inst.cover_bound(),
                inst.sequence_length(),
                DEFAULT_BFS_GUARD,
            )
            .map_err(|e| format!("trial {t}: {e}"))?;
            let kernel =
                kernelize_dvcr(&inst, &mut session).map_err(|e| format!("trial {t}: {e}"))?;
            let after_graph = discovered_graph(kernel.incidence(), &mut session)
                .map_err(|e| format!("trial {t}: {e}"))?;
            let (after, _) = solve_dvcr_bfs(
                &after_graph,
                kernel.start(),
                kernel.target(),
                kernel.cover_bound(),
                kernel.sequence_length(),
                DEFAULT_BFS_GUARD,
            )
            .map_err(|e| format!("trial {t}: {e}"))?;
            if before != after {
                return Err(format!(
                    "trial {t}: answer changed from {before} to {after}"
                ));
            }
        }
        Ok(format!("{trials} trials"))
    })();

    let gadget = (|| {
        use satkern_core::formula::{CnfFormula, Literal};
        let satisfiable =
            CnfFormula::new(1, vec![vec![Literal::positive(1)]]).expect("unit clause is valid");
        let unsatisfiable = discovery::make_trivial_cnf(false);
        for (cnf, expected) in [(unsatisfiable, true), (satisfiable, false)] {
            let inst = discovery::gen_dvcr_from_cnf(&cnf);
            let mut session = OracleSession::builtin();
            let graph =
                discovered_graph(inst.incidence(), &mut session).map_err(|e| e.to_string())?;
            let (yes, _) = solve_dvcr_bfs(
                &graph,
                inst.start(),
                inst.target(),
                inst.cover_bound(),
                inst.sequence_length(),
                DEFAULT_BFS_GUARD,
            )
            .map_err(|e| e.to_string())?;
            if yes != expected {
                return Err(format!("gadget answered {yes}, expected {expected}"));
            }
        }
        Ok("both directions".to_string())
    })();

    let wrapper = (|| {
        for t in 0..u64::from(trials) {
            let base = gen_random_cfvd(
                5 + (t % 4) as u32,
                false,
                seed.wrapping_mul(0xaaaa).wrapping_add(t),
            );
            let spec = discovery::IncidenceSpec::graph_edges(
                base.graph().vertex_count(),
                base.graph()
                    .edges()
                    .map(|e| (e, discovery::make_trivial_cnf(true))),
            )
            .map_err(|e| format!("trial {t}: {e}"))?;
            let mut session = OracleSession::builtin();
            let wrapped = discovery::discovery_cfvd_kernel(
                &spec,
                base.deletion_budget(),
                base.clique_bound(),
                &mut session,
            )
            .map_err(|e| format!("trial {t}: {e}"))?;
            let reduced_graph =
                discovered_graph(&wrapped, &mut session).map_err(|e| format!("trial {t}: {e}"))?;
            let reduced = cliquedel::CfvdInstance::new(
                reduced_graph,
                base.deletion_budget(),
                base.clique_bound(),
                false,
            )
            .map_err(|e| format!("trial {t}: {e}"))?;
            let before = solve_cfvd_bruteforce(&base, 12).map_err(|e| format!("trial {t}: {e}"))?;
            let after =
                solve_cfvd_bruteforce(&reduced, 12).map_err(|e| format!("trial {t}: {e}"))?;
            if before != after {
                return Err(format!("trial {t}: wrapper changed the answer"));
            }
        }
        Ok(format!("{trials} trials"))
    })();

    vec![
        outcome("dvcr kernel-equivalence", kernel),
        outcome("dvcr gadget-directions", gadget),
        outcome("dvcr wrapper-preservation", wrapper),
    ]
}
