#![allow(dead_code)]

use pmcsolve_core::generate::{gen_graph, GraphKind};
use pmcsolve_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    gen_graph(&GraphKind::Gnp { n, p }, seed).unwrap()
}

/// Random connected G(n, p), resampling until connected.
pub fn connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    (0..).map(|i| gnp(n, p, seed * 1000 + i)).find(Graph::is_connected).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> pmcsolve_core::VertexSet {
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    ids[..k.min(n)].iter().copied().collect()
}

pub fn named(kind: &str) -> Graph {
    gen_graph(&kind.parse().unwrap(), 0).unwrap()
}
