//! Graph families used by the verification harness.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Vertex names for generated graphs: `a`, `b`, … then `v26`, `v27`, ….
pub fn vertex_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

fn from_edge_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|&(k, _)| mask >> k & 1 == 1)
        .map(|(_, &p)| p)
        .collect();
    Graph::new(vertex_names(n), &edges).expect("generated graph is simple")
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect()
}

/// Every labelled simple graph on `n` vertices, `2^(n(n-1)/2)` of them.
pub fn labelled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = all_pairs(n);
    assert!(pairs.len() < 64, "too many vertices to enumerate");
    (0..1u64 << pairs.len()).map(move |mask| from_edge_mask(n, &pairs, mask))
}

/// Every labelled graph with `1..=max_n` vertices.
pub fn all_graphs_up_to(max_n: usize) -> impl Iterator<Item = Graph> {
    (1..=max_n).flat_map(labelled_graphs)
}

/// A graph on `n` vertices with each edge present with probability `p`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let pairs = all_pairs(n);
    let mut mask = 0u64;
    for k in 0..pairs.len() {
        if rng.gen_bool(p) {
            mask |= 1 << k;
        }
    }
    from_edge_mask(n, &pairs, mask)
}

/// `count` random graphs with `min_n..=max_n` vertices and edge densities
/// spread over `[0.2, 0.8]`, reproducible from `seed`.
pub fn random_graphs(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(min_n..=max_n);
            let p = rng.gen_range(0.2..0.8);
            random_graph(n, p, &mut rng)
        })
        .collect()
}

/// All graphs with at most `exhaustive_n` vertices followed by `random`
/// random graphs with up to `random_max_n` vertices.
pub fn standard_corpus(exhaustive_n: usize, random: usize, random_max_n: usize, seed: u64) -> Vec<Graph> {
    let mut out: Vec<Graph> = all_graphs_up_to(exhaustive_n).collect();
    out.extend(random_graphs(random, 1, random_max_n, seed));
    out
}
