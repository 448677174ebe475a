mod common;

use common::{connected_gnp, random_subset, rng};
use pmcsolve_core::oracle::{check_terminal_treewidth, check_triangulation_extension};
use rand::Rng;

#[test]
fn terminal_treewidth_sweep() {
    let mut r = rng(1);
    for seed in 0..60 {
        let n = r.gen_range(3..=9);
        let g = connected_gnp(n, r.gen_range(0.25..0.7), seed);
        let k = r.gen_range(1..=4.min(n));
        let terminals = random_subset(&mut r, n, k);
        assert!(check_terminal_treewidth(&g, &terminals).unwrap(), "{:?} T={terminals:?}", g.edges().collect::<Vec<_>>());
    }
}

#[test]
fn triangulation_extension_sweep() {
    let mut r = rng(2);
    for seed in 0..40 {
        let n = r.gen_range(3..=7);
        let g = connected_gnp(n, r.gen_range(0.3..0.7), seed + 50);
        let k = r.gen_range(1..=n);
        let f = random_subset(&mut r, n, k);
        assert!(check_triangulation_extension(&g, &f).unwrap(), "{:?} F={f:?}", g.edges().collect::<Vec<_>>());
    }
}
