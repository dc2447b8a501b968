//! Acceptance suite: one test per release criterion, each pinning its
//! corpus, bounds, and tolerances, and printing a pass line on success.
//! Every expected value is either computed by an exhaustive oracle inside
//! the test or frozen as an explicit fixture.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use satkern_core::cliquedel::{
    compose_wcfvd_or, count_k_cliques_bruteforce, gen_random_cfvd, kernelize_cfvd,
    solve_cfvd_bruteforce, solve_cfvd_searchtree, solve_cfvd_searchtree_enum, CfvdInstance, Graph,
    PHASE_KERNEL as CFVD_KERNEL_PHASE, PHASE_SEARCH,
};
use satkern_core::discovery::{
    discover_incidences, discovered_graph, discovery_cfvd_kernel, gen_dvcr_from_cnf,
    is_vertex_cover, kernelize_dvcr, make_trivial_cnf, solve_dvcr_bfs, DvcrInstance, IncidenceSpec,
    PHASE_DISCOVER,
};
use satkern_core::formula::{Assignment, CnfFormula, DnfFormula, Literal, QDnfInstance};
use satkern_core::gen::{random_cnf, random_sat_cnf, random_unsat_cnf};
use satkern_core::oracle::{OracleSession, ORACLE_SOLVER_CMD_ENV};
use satkern_core::qsat::{
    compose_qdnf_or, decide_qdnf_bruteforce, decide_qdnf_fptnp, gen_random_qdnf, kernelize_qdnf,
    PHASE_FPTNP,
};

const QSAT_GUARD: u32 = 26;
const CFVD_GUARD: u32 = 12;
const BFS_GUARD: u32 = 20;

/// Corpus for criteria 1 and 2: seeded random instances with at most 3
/// existential variables, 6 universal variables, and 8 terms.
fn qsat_corpus() -> Vec<QDnfInstance> {
    (0..200u64)
        .map(|t| {
            gen_random_qdnf(
                (t % 4) as u32,
                1 + (t % 6) as u32,
                1 + (t % 8) as u32,
                3,
                0xac5e_0000 + t,
            )
        })
        .collect()
}

#[test]
fn c01_qsat_kernel_equivalence() {
    let started = Instant::now();
    for (i, inst) in qsat_corpus().iter().enumerate() {
        let mut session = OracleSession::builtin();
        let kernel = kernelize_qdnf(inst, &mut session).expect("kernelization succeeds");
        assert_eq!(
            session.ledger().len(),
            1,
            "instance {i}: exactly 1 oracle query"
        );
        let before = decide_qdnf_bruteforce(inst, QSAT_GUARD).unwrap();
        let after = decide_qdnf_bruteforce(&kernel, QSAT_GUARD).unwrap();
        assert_eq!(before, after, "instance {i}: kernel changed the answer");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed <= Duration::from_secs(10),
        "suite took {elapsed:?}, budget 10 s"
    );
    println!("acceptance criterion 1 (qsat kernel equivalence, 200 instances): PASS");
}

#[test]
fn c02_fptnp_query_budget() {
    for (i, inst) in qsat_corpus().iter().enumerate() {
        let mut session = OracleSession::builtin();
        let fast = decide_qdnf_fptnp(inst, &mut session).unwrap();
        let brute = decide_qdnf_bruteforce(inst, QSAT_GUARD).unwrap();
        assert_eq!(
            fast, brute,
            "instance {i}: solver disagrees with brute force"
        );
        let used = session.ledger().count_for_phase(PHASE_FPTNP) as u64;
        let bound = 1u64 << inst.existential().len();
        assert!(
            used <= bound,
            "instance {i}: {used} queries > 2^|X| = {bound}"
        );
        if !fast {
            // The bound is exact: a no-instance exhausts the enumeration.
            assert_eq!(
                used, bound,
                "instance {i}: no-instance must use 2^|X| queries"
            );
        }
    }
    println!("acceptance criterion 2 (fptnp agreement within 2^|X| queries): PASS");
}

#[test]
fn c03_qsat_composition_or_law() {
    for t in [2usize, 4, 8] {
        for trial in 0..50u64 {
            let n1 = 1 + (trial % 2) as u32;
            let n2 = 1 + (trial % 3) as u32;
            let inputs: Vec<QDnfInstance> = (0..t as u64)
                .map(|i| gen_random_qdnf(n1, n2, 2 + (trial % 3) as u32, 2, trial * 977 + i))
                .collect();
            let composed = compose_qdnf_or(&inputs).unwrap();
            let selectors = t.next_power_of_two().trailing_zeros();
            assert_eq!(composed.variable_count(), n1 + n2 + selectors);
            let any_yes = inputs
                .iter()
                .any(|inst| decide_qdnf_bruteforce(inst, QSAT_GUARD).unwrap());
            assert_eq!(
                decide_qdnf_bruteforce(&composed, QSAT_GUARD).unwrap(),
                any_yes,
                "t {t} trial {trial}: OR-law broken"
            );
        }
    }

    // Frozen fixture: four two-term single-variable-per-side inputs whose
    // composition appends the selection pattern of the zero-based input
    // index, least-significant bit first.
    let term = |codes: &[i64]| -> Vec<Literal> {
        codes
            .iter()
            .map(|&c| Literal::from_code(c).unwrap())
            .collect()
    };
    let input = |codes: [i64; 2]| {
        QDnfInstance::new(
            DnfFormula::new(2, vec![term(&[codes[0]]), term(&[codes[1]])]).unwrap(),
            BTreeSet::from([1]),
            BTreeSet::from([2]),
        )
        .unwrap()
    };
    let inputs = [
        input([1, 2]),
        input([-1, 2]),
        input([1, -2]),
        input([-1, -2]),
    ];
    let composed = compose_qdnf_or(&inputs).unwrap();
    let expected = "p qdnf 4 8\n\
                    e 1 3 4 0\n\
                    a 2 0\n\
                    1 -3 -4 0\n\
                    2 -3 -4 0\n\
                    -1 3 -4 0\n\
                    2 3 -4 0\n\
                    1 -3 4 0\n\
                    -2 -3 4 0\n\
                    -1 3 4 0\n\
                    -2 3 4 0\n";
    assert_eq!(composed.to_text(), expected, "composition fixture drifted");
    println!("acceptance criterion 3 (composition OR-law and byte fixture): PASS");
}

/// Corpus for criteria 4 and 5: 100 seeded graphs with n <= 9, k <= 4,
/// h <= 3 (unweighted half) plus weighted counterparts for criterion 5.
fn cfvd_corpus(weighted: bool) -> Vec<CfvdInstance> {
    (0..100u64)
        .map(|t| gen_random_cfvd(3 + (t % 7) as u32, weighted, 0xcf7d_0000 + t))
        .collect()
}

#[test]
fn c04_cfvd_solver_agreement() {
    let started = Instant::now();
    for (i, inst) in cfvd_corpus(false).iter().enumerate() {
        let mut session = OracleSession::builtin();
        let tree = solve_cfvd_searchtree(inst, &mut session).unwrap();
        let brute = solve_cfvd_bruteforce(inst, CFVD_GUARD).unwrap();
        assert_eq!(tree, brute, "instance {i}: deciders disagree");
        let budget: u64 = (0..=inst.deletion_budget())
            .map(|d| inst.clique_bound().pow(d as u32))
            .sum();
        let used = session.ledger().count_for_phase(PHASE_SEARCH) as u64;
        assert!(used <= budget, "instance {i}: {used} queries > {budget}");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed <= Duration::from_secs(60),
        "suite took {elapsed:?}, budget 60 s"
    );
    println!("acceptance criterion 4 (cfvd solver agreement, 100 instances): PASS");
}

#[test]
fn c05_cfvd_kernel() {
    for weighted in [false, true] {
        for (i, inst) in cfvd_corpus(weighted).iter().enumerate() {
            let mut session = OracleSession::builtin();
            let kernel = kernelize_cfvd(inst, &mut session).unwrap();
            let n = inst.graph().vertex_count();
            assert_eq!(
                session.ledger().count_for_phase(CFVD_KERNEL_PHASE) as u32,
                n,
                "instance {i}: kernel must use exactly n queries"
            );
            assert_eq!(
                solve_cfvd_bruteforce(inst, CFVD_GUARD).unwrap(),
                solve_cfvd_bruteforce(&kernel, CFVD_GUARD).unwrap(),
                "weighted {weighted} instance {i}: kernel changed the answer"
            );
            let count =
                count_k_cliques_bruteforce(inst.graph(), inst.clique_bound(), CFVD_GUARD).unwrap();
            assert!(
                u64::from(kernel.graph().vertex_count()) <= inst.clique_bound() * count,
                "weighted {weighted} instance {i}: survivors exceed k * #k-cliques"
            );
        }
    }
    println!("acceptance criterion 5 (cfvd kernel, weighted and unweighted): PASS");
}

#[test]
fn c06_weighted_composition_or_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c0);
    for trial in 0..20u64 {
        let n = 3 + (trial % 3) as u32;
        let h = 1 + rng.random_range(0..u64::from(n) - 1);
        let k = 1 + rng.random_range(0..u64::from(n) - 1);
        let inputs: Vec<CfvdInstance> = (0..4u64)
            .map(|i| {
                let graph = gen_random_cfvd(n, false, trial * 211 + i).graph().clone();
                CfvdInstance::new(graph, h, k, false).unwrap()
            })
            .collect();
        let composed = compose_wcfvd_or(&inputs).unwrap();
        // log t = 2 for t = 4; budgets verified arithmetically.
        assert_eq!(composed.deletion_budget(), h + u64::from(n) * 2);
        assert_eq!(composed.clique_bound(), k + u64::from(n) * 2);
        let any_yes = inputs
            .iter()
            .any(|inst| solve_cfvd_bruteforce(inst, CFVD_GUARD).unwrap());
        assert_eq!(
            solve_cfvd_searchtree_enum(&composed).unwrap(),
            any_yes,
            "trial {trial} (n={n}, h={h}, k={k}): weighted OR-law broken"
        );
    }
    println!("acceptance criterion 6 (weighted composition OR-law, 20 trials): PASS");
}

#[test]
fn c07_dvcr_gadget() {
    // Unsatisfiable chord: a path is discovered and the five-cover
    // transformation exists.
    let unsat = CnfFormula::new(
        2,
        vec![
            vec![Literal::positive(1)],
            vec![Literal::positive(2)],
            vec![Literal::negative(1), Literal::negative(2)],
        ],
    )
    .unwrap();
    let yes_inst = gen_dvcr_from_cnf(&unsat);
    let expected = "p dvcr 4\n\
                    s 1 3 0\n\
                    t 2 4 0\n\
                    k 3\n\
                    l 5\n\
                    pair 1 2\n\
                    p cnf 0 0\n\
                    end\n\
                    pair 1 4\n\
                    p cnf 2 3\n\
                    1 0\n\
                    2 0\n\
                    -1 -2 0\n\
                    end\n\
                    pair 2 3\n\
                    p cnf 0 0\n\
                    end\n\
                    pair 3 4\n\
                    p cnf 0 0\n\
                    end\n";
    assert_eq!(yes_inst.to_text(), expected, "gadget fixture drifted");

    let mut session = OracleSession::builtin();
    let graph = discovered_graph(yes_inst.incidence(), &mut session).unwrap();
    let (yes, witness) = solve_dvcr_bfs(
        &graph,
        yes_inst.start(),
        yes_inst.target(),
        yes_inst.cover_bound(),
        yes_inst.sequence_length(),
        BFS_GUARD,
    )
    .unwrap();
    assert!(yes, "unsatisfiable chord must give a yes-instance");
    let cover = |vs: &[u32]| vs.iter().copied().collect::<BTreeSet<u32>>();
    let expected_witness = [
        cover(&[1, 3]),
        cover(&[1, 2, 3]),
        cover(&[2, 3]),
        cover(&[2, 3, 4]),
        cover(&[2, 4]),
    ];
    assert_eq!(witness.unwrap().covers(), &expected_witness);

    // Satisfiable chord: the cycle is discovered and no transformation
    // exists.
    let sat = CnfFormula::new(1, vec![vec![Literal::positive(1)]]).unwrap();
    let no_inst = gen_dvcr_from_cnf(&sat);
    let graph = discovered_graph(no_inst.incidence(), &mut session).unwrap();
    let (yes, _) = solve_dvcr_bfs(
        &graph,
        no_inst.start(),
        no_inst.target(),
        no_inst.cover_bound(),
        no_inst.sequence_length(),
        BFS_GUARD,
    )
    .unwrap();
    assert!(!yes, "satisfiable chord must give a no-instance");
    println!("acceptance criterion 7 (dvcr gadget with exact witness): PASS");
}

fn random_minimal_cover(graph: &Graph, rng: &mut ChaCha8Rng) -> BTreeSet<u32> {
    let mut cover: BTreeSet<u32> = graph.vertices().collect();
    let mut order: Vec<u32> = graph.vertices().collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    for v in order {
        let mut smaller = cover.clone();
        smaller.remove(&v);
        if is_vertex_cover(graph, &smaller) {
            cover = smaller;
        }
    }
    cover
}

/// Corpus for criterion 8: n <= 12, k <= 5, random per-pair CNFs over at
/// most 6 variables. Oversized covers fall into the trivial-no branch,
/// which must preserve the answer like every other path.
fn dvcr_corpus_instance(seed: u64) -> DvcrInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 4 + (seed % 9) as u32;
    let graph = satkern_core::gen::random_graph(&mut rng, n, 0.3);
    let start = random_minimal_cover(&graph, &mut rng);
    let target = random_minimal_cover(&graph, &mut rng);
    let k = (start.len().max(target.len()) as u32 + rng.random_range(0..=1)).min(5);
    let ell = BigUint::from(rng.random_range(1..=u64::from(2 * n + 2)));
    let pairs: Vec<((u32, u32), CnfFormula)> = (1..=n)
        .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
        .map(|(u, v)| {
            let cnf = if graph.has_edge(u, v) {
                random_sat_cnf(&mut rng, 1 + (u + v) % 6, 4, 3)
            } else {
                random_unsat_cnf(&mut rng, 1 + (u + v) % 6, 4, 3)
            };
            ((u, v), cnf)
        })
        .collect();
    DvcrInstance::new(n, pairs, start, target, k, ell).unwrap()
}

#[test]
fn c08_dvcr_kernel() {
    for trial in 0..100u64 {
        let inst = dvcr_corpus_instance(0xd5c2_0000 + trial);
        let n = inst.vertex_count();
        let mut session = OracleSession::builtin();
        let before_graph = discovered_graph(inst.incidence(), &mut session).unwrap();
        let (before, _) = solve_dvcr_bfs(
            &before_graph,
            inst.start(),
            inst.target(),
            inst.cover_bound(),
            inst.sequence_length(),
            BFS_GUARD,
        )
        .unwrap();

        let mut kernel_session = OracleSession::builtin();
        let kernel = kernelize_dvcr(&inst, &mut kernel_session).unwrap();
        assert_eq!(
            kernel_session.ledger().count_for_phase(PHASE_DISCOVER) as u32,
            n * (n - 1) / 2,
            "trial {trial}: discovery must use exactly C(n,2) queries"
        );
        let k = u64::from(inst.cover_bound());
        assert!(
            u64::from(kernel.vertex_count()) <= 3 * k * k + 2 * k,
            "trial {trial}: kernel exceeds 3k^2 + 2k vertices"
        );

        let mut check = OracleSession::builtin();
        let after_graph = discovered_graph(kernel.incidence(), &mut check).unwrap();
        let (after, _) = solve_dvcr_bfs(
            &after_graph,
            kernel.start(),
            kernel.target(),
            kernel.cover_bound(),
            kernel.sequence_length(),
            BFS_GUARD,
        )
        .unwrap();
        assert_eq!(before, after, "trial {trial}: kernel changed the answer");
    }
    println!("acceptance criterion 8 (dvcr kernel, 100 instances): PASS");
}

#[test]
fn c09_generic_discovery_wrapper() {
    for trial in 0..50u64 {
        let base = gen_random_cfvd(4 + (trial % 6) as u32, false, 0x93a0 + trial);
        let spec = IncidenceSpec::graph_edges(
            base.graph().vertex_count(),
            base.graph().edges().map(|e| (e, make_trivial_cnf(true))),
        )
        .unwrap();
        let mut session = OracleSession::builtin();
        let wrapped = discovery_cfvd_kernel(
            &spec,
            base.deletion_budget(),
            base.clique_bound(),
            &mut session,
        )
        .unwrap();
        let reduced_graph = discovered_graph(&wrapped, &mut session).unwrap();
        let reduced = CfvdInstance::new(
            reduced_graph,
            base.deletion_budget(),
            base.clique_bound(),
            false,
        )
        .unwrap();
        assert_eq!(
            solve_cfvd_bruteforce(&base, CFVD_GUARD).unwrap(),
            solve_cfvd_bruteforce(&reduced, CFVD_GUARD).unwrap(),
            "trial {trial}: wrapped kernel changed the answer"
        );
    }
    println!("acceptance criterion 9 (generic discovery wrapper, 50 instances): PASS");
}

#[test]
fn c10_oracle_backend_cross_check() {
    if std::env::var(ORACLE_SOLVER_CMD_ENV).is_err() {
        println!(
            "acceptance criterion 10 (backend cross-check): SKIP ({ORACLE_SOLVER_CMD_ENV} unset)"
        );
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a10);
    for trial in 0..500u32 {
        let variables = 5 + rng.random_range(0..=15);
        let cnf = random_cnf(&mut rng, variables, 30, 4);
        let mut builtin = OracleSession::builtin();
        let mut external = OracleSession::external_from_env().unwrap();
        let expected = builtin.query_sat(&cnf, "cross").unwrap().satisfiable;
        let actual = external.query_sat(&cnf, "cross").unwrap().satisfiable;
        assert_eq!(actual, expected, "trial {trial}: backends disagree");
    }
    println!("acceptance criterion 10 (backend cross-check, 500 formulas): PASS");
}

/// Cross-cutting check: every discovery table matches per-pair exhaustive
/// evaluation (backs the per-criterion ledger counts above).
#[test]
fn discovery_tables_match_exhaustive_evaluation() {
    for trial in 0..10u64 {
        let inst = dvcr_corpus_instance(0xf1de + trial);
        let mut session = OracleSession::builtin();
        let table = discover_incidences(inst.incidence(), &mut session).unwrap();
        for (key, cnf) in inst.incidence().instances() {
            let vars: Vec<u32> = cnf.variables().into_iter().collect();
            let expected = (0..1u64 << vars.len()).any(|bits| {
                let assignment = Assignment::from_pairs(
                    vars.iter()
                        .enumerate()
                        .map(|(i, &v)| (v, bits >> i & 1 == 1)),
                );
                cnf.eval(&assignment).unwrap()
            });
            assert_eq!(table[key], expected, "trial {trial} pair {key:?}");
        }
    }
}
