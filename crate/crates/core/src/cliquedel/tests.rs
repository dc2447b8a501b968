use super::*;

fn k_n(n: u32) -> Graph {
    let edges: Vec<(u32, u32)> = (1..=n)
        .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
        .collect();
    Graph::unweighted(n, edges).unwrap()
}

fn path(n: u32) -> Graph {
    Graph::unweighted(n, (1..n).map(|u| (u, u + 1))).unwrap()
}

fn petersen() -> Graph {
    let edges = [
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (1, 5),
        (1, 6),
        (2, 7),
        (3, 8),
        (4, 9),
        (5, 10),
        (6, 8),
        (8, 10),
        (7, 10),
        (7, 9),
        (6, 9),
    ];
    Graph::unweighted(10, edges).unwrap()
}

fn unweighted(graph: Graph, h: u64, k: u64) -> CfvdInstance {
    CfvdInstance::new(graph, h, k, false).unwrap()
}

fn query_budget(k: u64, h: u64) -> u64 {
    (0..=h).map(|i| k.pow(i as u32)).sum()
}

#[test]
fn graph_rejects_self_loops_and_zero_weights() {
    assert!(matches!(
        Graph::unweighted(3, [(1, 1)]),
        Err(CfvdError::SelfLoop { vertex: 1 })
    ));
    assert!(matches!(
        Graph::weighted(2, [(1, 2)], vec![1, 0]),
        Err(CfvdError::InvalidWeight { vertex: 2 })
    ));
    assert!(matches!(
        Graph::unweighted(2, [(1, 3)]),
        Err(CfvdError::VertexOutOfRange { vertex: 3, max: 2 })
    ));
}

#[test]
fn find_clique_in_complete_graph() {
    let mut session = OracleSession::builtin();
    let clique = find_clique_via_oracle(&k_n(3), 3, &mut session, "test", None)
        .unwrap()
        .unwrap();
    assert_eq!(clique, vec![1, 2, 3]);
}

#[test]
fn find_clique_absent_on_path() {
    let mut session = OracleSession::builtin();
    assert!(
        find_clique_via_oracle(&path(3), 3, &mut session, "test", None)
            .unwrap()
            .is_none()
    );
}

#[test]
fn petersen_graph_is_triangle_free() {
    assert_eq!(count_k_cliques_bruteforce(&petersen(), 3, 12).unwrap(), 0);
    let mut session = OracleSession::builtin();
    assert!(
        find_clique_via_oracle(&petersen(), 3, &mut session, "test", None)
            .unwrap()
            .is_none()
    );
}

#[test]
fn find_clique_honors_forced_vertex() {
    // Two disjoint triangles; forcing a vertex of the second one.
    let graph = Graph::unweighted(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
    let mut session = OracleSession::builtin();
    let clique = find_clique_via_oracle(&graph, 3, &mut session, "test", Some(5))
        .unwrap()
        .unwrap();
    assert!(clique.contains(&5));
    assert_eq!(clique, vec![4, 5, 6]);
}

#[test]
fn find_clique_target_above_total_weight_is_absent() {
    let mut session = OracleSession::builtin();
    assert!(
        find_clique_via_oracle(&k_n(2), 5, &mut session, "test", None)
            .unwrap()
            .is_none()
    );
    assert_eq!(session.ledger().len(), 1);
}

#[test]
fn find_clique_weighted_exact_weight() {
    // Triangle with weights 2, 3, 4: no sub-clique sums to exactly 6, the
    // pair {2, 4} does.
    let graph = Graph::weighted(3, [(1, 2), (2, 3), (1, 3)], vec![2, 3, 4]).unwrap();
    let mut session = OracleSession::builtin();
    assert_eq!(
        find_clique_via_oracle(&graph, 6, &mut session, "test", None).unwrap(),
        Some(vec![1, 3])
    );
    assert!(
        find_clique_via_oracle(&graph, 8, &mut session, "test", None)
            .unwrap()
            .is_none()
    );
    assert_eq!(
        find_clique_via_oracle(&graph, 9, &mut session, "test", None).unwrap(),
        Some(vec![1, 2, 3])
    );
}

#[test]
fn searchtree_on_k4() {
    let mut session = OracleSession::builtin();
    assert!(!solve_cfvd_searchtree(&unweighted(k_n(4), 1, 3), &mut session).unwrap());
    assert!(solve_cfvd_searchtree(&unweighted(k_n(4), 2, 3), &mut session).unwrap());
}

#[test]
fn searchtree_triangle_free_answers_yes_with_one_query() {
    let inst = unweighted(petersen(), 0, 3);
    let mut session = OracleSession::builtin();
    assert!(solve_cfvd_searchtree(&inst, &mut session).unwrap());
    assert_eq!(session.ledger().count_for_phase(PHASE_SEARCH), 1);
}

#[test]
fn bruteforce_examples() {
    assert!(!solve_cfvd_bruteforce(&unweighted(k_n(4), 1, 3), 12).unwrap());
    assert!(solve_cfvd_bruteforce(&unweighted(k_n(4), 2, 3), 12).unwrap());
    let empty = Graph::unweighted(4, []).unwrap();
    assert!(solve_cfvd_bruteforce(&unweighted(empty, 3, 2), 12).unwrap());
    // A single triangle dies with one deletion.
    let triangle = k_n(3);
    assert!(solve_cfvd_bruteforce(&unweighted(triangle, 1, 3), 12).unwrap());
}

#[test]
fn bruteforce_guard() {
    assert!(matches!(
        solve_cfvd_bruteforce(&unweighted(k_n(6), 1, 3), 5),
        Err(CfvdError::GuardExceeded {
            vertices: 6,
            guard: 5
        })
    ));
}

#[test]
fn short_circuit_matches_the_clique_count() {
    // K4 has four 3-cliques: a budget of four deletions decides it outright,
    // a budget of one leaves the question open.
    assert_eq!(
        short_circuit_by_clique_count(&unweighted(k_n(4), 4, 3), 12).unwrap(),
        Some(true)
    );
    assert!(solve_cfvd_bruteforce(&unweighted(k_n(4), 4, 3), 12).unwrap());
    assert_eq!(
        short_circuit_by_clique_count(&unweighted(k_n(4), 1, 3), 12).unwrap(),
        None
    );
    // Short-circuit answers are never wrong on the random corpus.
    for seed in 400..440u64 {
        let inst = gen_random_cfvd(3 + (seed % 6) as u32, seed % 2 == 0, seed);
        if short_circuit_by_clique_count(&inst, 12).unwrap() == Some(true) {
            assert!(solve_cfvd_bruteforce(&inst, 12).unwrap(), "seed {seed}");
        }
    }
}

#[test]
fn instance_rejects_zero_clique_bound() {
    assert!(matches!(
        CfvdInstance::new(k_n(3), 1, 0, false),
        Err(CfvdError::InvalidCliqueBound)
    ));
}

#[test]
fn weighted_semantics_differ_where_expected() {
    // Two adjacent vertices of weight 3: no clique of weight exactly 4, but
    // the pair reaches weight at least 4.
    let graph = Graph::weighted(2, [(1, 2)], vec![3, 3]).unwrap();
    let inst = CfvdInstance::new(graph, 0, 4, true).unwrap();
    assert!(solve_cfvd_bruteforce_with(&inst, 12, CliqueSemantics::ExactWeight).unwrap());
    assert!(!solve_cfvd_bruteforce_with(&inst, 12, CliqueSemantics::AtLeastWeight).unwrap());
}

#[test]
fn searchtree_agrees_with_bruteforce_within_query_budget() {
    for seed in 0..60u64 {
        let weighted = seed % 3 == 0;
        let inst = gen_random_cfvd(3 + (seed % 7) as u32, weighted, seed);
        let mut session = OracleSession::builtin();
        let tree = solve_cfvd_searchtree(&inst, &mut session).unwrap();
        let brute = solve_cfvd_bruteforce(&inst, 12).unwrap();
        assert_eq!(tree, brute, "seed {seed}");
        let budget = query_budget(inst.clique_bound(), inst.deletion_budget());
        assert!(
            session.ledger().count_for_phase(PHASE_SEARCH) as u64 <= budget,
            "seed {seed}: {} queries > {budget}",
            session.ledger().len()
        );
    }
}

#[test]
fn searchtree_enum_matches_bruteforce() {
    for seed in 60..140u64 {
        let weighted = seed % 2 == 0;
        let inst = gen_random_cfvd(3 + (seed % 6) as u32, weighted, seed);
        assert_eq!(
            solve_cfvd_searchtree_enum(&inst).unwrap(),
            solve_cfvd_bruteforce(&inst, 12).unwrap(),
            "seed {seed}"
        );
    }
}

#[test]
fn count_cliques_on_k4() {
    assert_eq!(count_k_cliques_bruteforce(&k_n(4), 3, 12).unwrap(), 4);
    assert_eq!(count_k_cliques_bruteforce(&k_n(4), 5, 12).unwrap(), 0);
}

#[test]
fn count_cliques_is_stable_under_vertex_relabeling() {
    for seed in 0..20u64 {
        let inst = gen_random_cfvd(8, false, seed);
        let graph = inst.graph();
        let n = graph.vertex_count();
        // Second pass with reversed vertex order.
        let reversed = Graph::unweighted(
            n,
            graph
                .edges()
                .map(|(u, v)| (n + 1 - u, n + 1 - v))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        for k in 2..=4 {
            assert_eq!(
                count_k_cliques_bruteforce(graph, k, 12).unwrap(),
                count_k_cliques_bruteforce(&reversed, k, 12).unwrap(),
                "seed {seed} k {k}"
            );
        }
    }
}

#[test]
fn kernel_drops_vertices_outside_cliques() {
    // Triangle plus a disjoint edge: only the triangle survives for k = 3.
    let graph = Graph::unweighted(5, [(1, 2), (2, 3), (1, 3), (4, 5)]).unwrap();
    let inst = unweighted(graph, 1, 3);
    let mut session = OracleSession::builtin();
    let kernel = kernelize_cfvd(&inst, &mut session).unwrap();
    assert_eq!(kernel.graph().vertex_count(), 3);
    assert_eq!(kernel.graph().edge_count(), 3);
    assert_eq!(session.ledger().count_for_phase(PHASE_KERNEL), 5);
}

#[test]
fn kernel_of_clique_free_graph_is_empty() {
    let inst = unweighted(path(4), 1, 3);
    let mut session = OracleSession::builtin();
    let kernel = kernelize_cfvd(&inst, &mut session).unwrap();
    assert_eq!(kernel.graph().vertex_count(), 0);
    assert!(solve_cfvd_bruteforce(&kernel, 12).unwrap());
}

#[test]
fn kernel_preserves_answers_within_size_bound() {
    for seed in 200..260u64 {
        let weighted = seed % 2 == 0;
        let inst = gen_random_cfvd(3 + (seed % 6) as u32, weighted, seed);
        let mut session = OracleSession::builtin();
        let kernel = kernelize_cfvd(&inst, &mut session).unwrap();
        let n = inst.graph().vertex_count();
        assert_eq!(session.ledger().count_for_phase(PHASE_KERNEL) as u32, n);
        assert_eq!(
            solve_cfvd_bruteforce(&inst, 12).unwrap(),
            solve_cfvd_bruteforce(&kernel, 12).unwrap(),
            "seed {seed}"
        );
        let count = count_k_cliques_bruteforce(inst.graph(), inst.clique_bound(), 12).unwrap();
        assert!(
            u64::from(kernel.graph().vertex_count()) <= inst.clique_bound() * count,
            "seed {seed}: {} survivors, bound {}",
            kernel.graph().vertex_count(),
            inst.clique_bound() * count
        );
        // Every survivor is confirmed in a clique by enumeration.
        let mask = mask_graph(kernel.graph(), MASK_LIMIT).unwrap();
        for v in kernel.graph().vertices() {
            let mut member = false;
            let alive = (1u128 << kernel.graph().vertex_count()) - 1;
            visit_cliques(
                &mask,
                alive,
                kernel.clique_bound(),
                CliqueSemantics::ExactWeight,
                &mut |c| {
                    member |= c & 1 << (v - 1) != 0;
                    member
                },
            );
            assert!(member, "seed {seed}: vertex {v} outside every clique");
        }
    }
}

#[test]
fn compose_budgets_follow_the_construction() {
    let inputs: Vec<CfvdInstance> = (0..4)
        .map(|i| unweighted(gen_random_cfvd(3, false, i).graph().clone(), 1, 2))
        .collect();
    let composed = compose_wcfvd_or(&inputs).unwrap();
    assert_eq!(composed.deletion_budget(), 7);
    assert_eq!(composed.clique_bound(), 8);
    assert!(composed.weighted());
    // 12 block vertices (weight 1), 4 selectors (weight 3), 8 dummies per
    // bit position (weight 2).
    assert_eq!(composed.graph().vertex_count(), 12 + 4 + 2 * 8);
    assert_eq!(composed.graph().weight(13), 3);
    assert_eq!(composed.graph().weight(17), 2);
}

#[test]
fn compose_pads_small_families_to_width_four() {
    let inputs: Vec<CfvdInstance> = (0..2)
        .map(|i| unweighted(gen_random_cfvd(3, false, 40 + i).graph().clone(), 1, 2))
        .collect();
    let composed = compose_wcfvd_or(&inputs).unwrap();
    // log t = 2 keeps the dummy weight k + n(log t - 2) = k positive.
    assert_eq!(composed.graph().vertex_count(), 3 * 4 + 4 + 2 * 8);
    assert_eq!(composed.deletion_budget(), 1 + 6);
}

#[test]
fn compose_or_law_on_tiny_inputs() {
    for seed in 0..6u64 {
        let inputs: Vec<CfvdInstance> = (0..4)
            .map(|i| {
                let graph = gen_random_cfvd(3, false, seed * 31 + i).graph().clone();
                unweighted(graph, 1, 2)
            })
            .collect();
        let composed = compose_wcfvd_or(&inputs).unwrap();
        let any_yes = inputs
            .iter()
            .any(|inst| solve_cfvd_bruteforce(inst, 12).unwrap());
        assert_eq!(
            solve_cfvd_searchtree_enum(&composed).unwrap(),
            any_yes,
            "seed {seed}"
        );
    }
}

#[test]
fn compose_rejects_bad_shapes() {
    let a = unweighted(k_n(3), 1, 2);
    let b = unweighted(k_n(4), 1, 2);
    assert!(matches!(
        compose_wcfvd_or(&[a.clone(), b]),
        Err(CfvdError::ShapeMismatch { index: 1, .. })
    ));
    let zero_h = unweighted(k_n(3), 0, 2);
    assert!(matches!(
        compose_wcfvd_or(&[zero_h]),
        Err(CfvdError::BudgetOutOfRange { .. })
    ));
    let big_k = unweighted(k_n(3), 1, 3);
    assert!(matches!(
        compose_wcfvd_or(&[big_k]),
        Err(CfvdError::BudgetOutOfRange { .. })
    ));
}

#[test]
fn graph_document_round_trips() {
    let text = "p graph 3 3\ne 1 2\ne 1 3\ne 2 3\nparam 1 3\n";
    let doc = GraphDocument::parse(text).unwrap();
    assert_eq!(doc.graph, k_n(3));
    assert_eq!(doc.params, Some((1, 3)));
    assert_eq!(doc.to_text(), text);
}

#[test]
fn graph_document_weighted_defaults() {
    let doc = GraphDocument::parse("p graph 2 1 weighted\nw 1 4\ne 1 2\n").unwrap();
    assert_eq!(doc.graph.weight(1), 4);
    assert_eq!(doc.graph.weight(2), 1);
    assert_eq!(doc.to_text(), "p graph 2 1 weighted\nw 1 4\ne 1 2\n");
}

#[test]
fn graph_document_rejects_self_loop_with_line_number() {
    let err = GraphDocument::parse("p graph 2 1\ne 1 1\n").unwrap_err();
    assert!(matches!(err, CfvdError::Parse { line: 2, .. }), "{err}");
}

#[test]
fn clique_query_encoding_is_faithful_on_random_graphs() {
    // The SAT path must agree with direct enumeration, including when a
    // vertex is forced.
    let mut session = OracleSession::builtin();
    for seed in 300..340u64 {
        let inst = gen_random_cfvd(3 + (seed % 5) as u32, seed % 2 == 0, seed);
        let graph = inst.graph();
        let k = inst.clique_bound();
        let found = find_clique_via_oracle(graph, k, &mut session, "test", None)
            .unwrap()
            .is_some();
        assert_eq!(
            found,
            count_k_cliques_bruteforce(graph, k, 12).unwrap() > 0,
            "seed {seed}"
        );
        for v in graph.vertices() {
            let member_oracle = find_clique_via_oracle(graph, k, &mut session, "test", Some(v))
                .unwrap()
                .is_some();
            let mask = mask_graph(graph, 12).unwrap();
            let mut member_enum = false;
            visit_cliques(
                &mask,
                (1u128 << graph.vertex_count()) - 1,
                k,
                CliqueSemantics::ExactWeight,
                &mut |c| {
                    member_enum |= c & 1 << (v - 1) != 0;
                    member_enum
                },
            );
            assert_eq!(member_oracle, member_enum, "seed {seed} vertex {v}");
        }
    }
}
