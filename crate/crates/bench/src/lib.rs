//! Shared fixtures for the benchmark targets.

use sconv::digraph::Multidigraph;
use sconv::generate::{balanced_digraph, GenParams};

/// The 4-vertex, 7-arc worked example.
pub fn example7() -> Multidigraph {
    Multidigraph::parse(
        "v 1\nv 2\nv 3\nv 4\n\
         a a 1 2\na b 2 1\na c 2 3\na d 3 4\na e 4 2\na f 1 4\na g 4 1\n",
    )
    .unwrap()
}

/// A reproducible balanced digraph sized for exhaustive-enumeration benches.
pub fn generated(vertices: usize, circuits: usize, max_len: usize, seed: u64) -> Multidigraph {
    balanced_digraph(&GenParams {
        vertices,
        circuits,
        max_len,
        seed,
    })
    .unwrap()
}

/// The bidirected complete graph on `n` vertices.
pub fn complete_bidirected(n: usize) -> Multidigraph {
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((format!("e{u}_{v}"), u, v));
        }
    }
    sconv::UndirectedMultigraph::new(vertices, edges).bidirect()
}
