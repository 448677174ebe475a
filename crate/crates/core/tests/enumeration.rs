mod common;

use common::{connected_gnp, named};
use pmcsolve_core::oracle::{brute_force_pmcs, brute_force_separators};
use pmcsolve_core::triangulation::{
    enumerate_minimal_separators, enumerate_pmcs, is_minimal_separator, is_pmc, pmc_count_bound, Budgets, Skeleton,
};
use pmcsolve_core::{Graph, VertexSet};
use proptest::prelude::*;

fn check(g: &Graph) {
    let budgets = Budgets::default();
    let seps = enumerate_minimal_separators(g, budgets.separators).unwrap();
    assert_eq!(seps, brute_force_separators(g).unwrap(), "separators of {:?}", g.edges().collect::<Vec<_>>());
    let pmcs = enumerate_pmcs(g, &seps, &budgets).unwrap();
    assert_eq!(pmcs, brute_force_pmcs(g).unwrap(), "PMCs of {:?}", g.edges().collect::<Vec<_>>());
    assert!(pmcs.len() as u128 <= pmc_count_bound(g.n(), seps.len()));
}

#[test]
fn named_graphs() {
    let mut kinds: Vec<String> = Vec::new();
    for n in 3..=7 {
        kinds.push(format!("path:n={n}"));
        kinds.push(format!("cycle:n={n}"));
        kinds.push(format!("star:n={n}"));
    }
    for n in 2..=6 {
        kinds.push(format!("complete:n={n}"));
    }
    kinds.push("grid:rows=3,cols=3".into());
    for kind in kinds {
        check(&named(&kind));
    }
}

#[test]
fn c4_counts() {
    let c4 = named("cycle:n=4");
    let skel = Skeleton::build(&c4, &Budgets::default()).unwrap();
    assert_eq!((skel.separators.len(), skel.pmcs.len()), (2, 4));
}

#[test]
fn random_graphs_up_to_eight() {
    for seed in 0..200 {
        let n = 2 + seed as usize % 7;
        let p = [0.2, 0.4, 0.6][seed as usize % 3];
        check(&connected_gnp(n, p, seed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerated_sets_satisfy_predicates(n in 2usize..9, seed in 0u64..10_000) {
        let g = connected_gnp(n, 0.45, seed);
        let seps = enumerate_minimal_separators(&g, 1_000_000).unwrap();
        prop_assert!(seps.iter().all(|s| is_minimal_separator(&g, s)));
        let pmcs = enumerate_pmcs(&g, &seps, &Budgets::default()).unwrap();
        prop_assert!(pmcs.iter().all(|p| is_pmc(&g, p)));
        // every maximal clique of a chordal graph is a PMC
        if g.is_chordal() {
            prop_assert!(pmcs.len() <= g.n());
        }
        let mut sorted = pmcs.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted, pmcs);
    }

    #[test]
    fn triple_count_bound(n in 2usize..10, seed in 0u64..10_000) {
        let g = connected_gnp(n, 0.4, seed);
        let skel = Skeleton::build(&g, &Budgets::default()).unwrap();
        prop_assert!(skel.pmcs.len() as u128 <= pmc_count_bound(n, skel.separators.len()));
        for (b, triples) in skel.triples.iter().enumerate() {
            let block = &skel.blocks[b];
            let all: VertexSet = &block.separator | &block.component;
            for tr in triples {
                let omega = &skel.pmcs[tr.pmc];
                prop_assert!(block.separator.is_subset(omega) && omega.is_subset(&all));
            }
        }
    }
}
