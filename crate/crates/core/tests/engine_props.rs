mod common;

use common::connected_gnp;
use pmcsolve_core::automata::{make_automaton, PropertySpec};
use pmcsolve_core::engine::{solve, Mode, Objective, SolveOptions};
use pmcsolve_core::problems::{problem_catalog, solve_problem};
use pmcsolve_core::{with_automaton, Error, VertexSet};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = (PropertySpec, usize)> {
    prop_oneof![
        Just((PropertySpec::IndependentSet, 0)),
        Just((PropertySpec::Forest, 1)),
        Just((PropertySpec::True, 2)),
        Just((PropertySpec::Colorable { q: 2 }, 1)),
        Just((PropertySpec::MaxDegree { d: 2 }, 2)),
        Just((PropertySpec::Packing { family: vec!["K2".into()] }, 1)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_weights_match_unweighted(n in 2usize..10, seed in 0u64..5000, (spec, t) in spec_strategy()) {
        let g = connected_gnp(n, 0.4, seed);
        let a = make_automaton(&spec).unwrap();
        let plain = Objective::new(Mode::Max);
        let unit = Objective { weights: Some(vec![1.0; n]), ..Objective::new(Mode::Max) };
        let opts = SolveOptions::default();
        let x = with_automaton!(&a, m => solve(&g, t, m, &plain, &opts)).unwrap();
        let y = with_automaton!(&a, m => solve(&g, t, m, &unit, &opts)).unwrap();
        prop_assert_eq!((x.value, x.f, x.x), (y.value, y.f, y.x));
    }

    #[test]
    fn repeated_runs_are_identical(n in 2usize..11, seed in 0u64..5000, (spec, t) in spec_strategy()) {
        let g = connected_gnp(n, 0.5, seed);
        let a = make_automaton(&spec).unwrap();
        let obj = Objective { weights: Some((0..n).map(|v| (v % 3) as f64 - 0.5).collect()), ..Objective::new(Mode::Max) };
        let opts = SolveOptions { record_tables: true, ..Default::default() };
        let x = with_automaton!(&a, m => solve(&g, t, m, &obj, &opts)).unwrap();
        let y = with_automaton!(&a, m => solve(&g, t, m, &obj, &opts)).unwrap();
        prop_assert_eq!(x.value.to_bits(), y.value.to_bits());
        prop_assert_eq!((&x.f, &x.x), (&y.f, &y.x));
        let dump = |s: &pmcsolve_core::engine::Solution| s.tables.iter().map(|r| r.to_string()).collect::<Vec<_>>();
        prop_assert_eq!(dump(&x), dump(&y));
    }

    #[test]
    fn annotations_are_kept_or_infeasible(n in 2usize..10, seed in 0u64..5000, u in 0u32..8, (spec, t) in spec_strategy()) {
        let g = connected_gnp(n, 0.4, seed);
        let annotations: VertexSet = (0..n.min(3)).filter(|i| u >> i & 1 == 1).collect();
        let a = make_automaton(&spec).unwrap();
        let obj = Objective { annotations: annotations.clone(), ..Objective::new(Mode::Max) };
        match with_automaton!(&a, m => solve(&g, t, m, &obj, &SolveOptions::default())) {
            Ok(s) => prop_assert!(annotations.is_subset(&s.f)),
            Err(e) => prop_assert_eq!(e, Error::Infeasible),
        }
    }

    #[test]
    fn min_connected_witness_is_minimal(n in 3usize..10, seed in 0u64..5000, pick in 0u32..512) {
        let g = connected_gnp(n, 0.35, seed);
        let terminals: VertexSet = (0..n).filter(|i| pick >> i & 1 == 1).take(3).collect();
        prop_assume!(!terminals.is_empty());
        let spec = problem_catalog().into_iter().find(|p| p.name == "min-connected-subgraph").unwrap();
        let spec = spec.with_terminals(terminals.clone()).unwrap();
        let sol = solve_problem(&g, &spec, &SolveOptions::default()).unwrap();
        prop_assert!(terminals.is_subset(&sol.f));
        prop_assert_eq!(g.connected_components(&(&g.vertices() - &sol.f)).unwrap().len(), 1);
        for v in (&sol.f - &terminals).iter() {
            let mut smaller = sol.f.clone();
            smaller.remove(v);
            prop_assert!(g.connected_components(&(&g.vertices() - &smaller)).unwrap().len() != 1);
        }
        let width = pmcsolve_core::triangulation::exact_treewidth_small(&g.induced(&sol.f).0).unwrap();
        prop_assert!(width < terminals.len());
    }

    #[test]
    fn two_in_a_tree_iff_same_component(n in 2usize..10, seed in 0u64..5000, a in 0usize..10, b in 0usize..10) {
        let g = common::gnp(n, 0.25, seed);
        let (a, b) = (a % n, b % n);
        let terminals: VertexSet = [a, b].into_iter().collect();
        let spec = problem_catalog().into_iter().find(|p| p.name == "k-in-a-tree").unwrap();
        let spec = spec.with_terminals(terminals).unwrap();
        let same = g.connected_components(&VertexSet::new()).unwrap().iter().any(|c| c.contains(a) && c.contains(b));
        match solve_problem(&g, &spec, &SolveOptions::default()) {
            Ok(_) => prop_assert!(same),
            Err(e) => { prop_assert_eq!(e, Error::Infeasible); prop_assert!(!same); }
        }
    }
}
