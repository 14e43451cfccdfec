//! Helpers shared by the integration and acceptance tests.
#![allow(dead_code)]

use dimerkit::corpus;
use dimerkit::{DimerQuiver, PathWord, VertexId};
use rand::Rng;

/// Every corpus model with its 2x1 and 2x2 covers, labelled.
pub fn models_with_covers() -> Vec<(String, DimerQuiver)> {
    let mut out = Vec::new();
    for e in corpus::entries() {
        let q = e.quiver();
        for (k, l) in [(2, 1), (2, 2)] {
            let cover = q.torus_cover(k, l).expect("small cover");
            out.push((format!("{}@{k}x{l}", e.name), cover));
        }
        out.insert(out.len() - 2, (e.name.to_string(), q));
    }
    out
}

/// A random walk of length `len` from a random vertex, or shorter if it gets
/// stuck (never, on a dimer quiver).
pub fn random_path(q: &DimerQuiver, rng: &mut impl Rng, len: usize) -> PathWord {
    let start = VertexId(rng.gen_range(0..q.vertex_count()));
    let mut at = start;
    let mut arrows = Vec::with_capacity(len);
    for _ in 0..len {
        let out = q.outgoing(at);
        if out.is_empty() {
            break;
        }
        let a = out[rng.gen_range(0..out.len())];
        arrows.push(a);
        at = q.arrow(a).head;
    }
    PathWord::new(q, start, arrows).expect("walk follows arrows")
}
