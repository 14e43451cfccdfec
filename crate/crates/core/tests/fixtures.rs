//! Corpus fixtures against brute-force oracles that share no code with the
//! library's enumerators.

use std::collections::BTreeSet;

use dimerkit::algebras::Bounds;
use dimerkit::contraction;
use dimerkit::corpus;
use dimerkit::criteria::check_cancellative;
use dimerkit::matchings::MatchingTable;
use dimerkit::DimerQuiver;

/// Perfect matchings as arrow bitmasks, by scanning every arrow subset.
fn brute_matchings(q: &DimerQuiver) -> Vec<u64> {
    let n = q.arrows().len();
    assert!(n <= 24, "too many arrows for brute force");
    let faces: Vec<u64> = q
        .faces()
        .iter()
        .map(|f| f.boundary.iter().fold(0u64, |m, a| m | 1 << a.0))
        .collect();
    (0u64..1 << n)
        .filter(|s| faces.iter().all(|f| (f & s).count_ones() == 1))
        .collect()
}

/// Whether the arrows outside `mask` connect every vertex to every other.
fn brute_simple(q: &DimerQuiver, mask: u64) -> bool {
    let n = q.vertex_count();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for a in q.arrows() {
        if mask & 1 << a.id.0 == 0 {
            reach[a.tail.0][a.head.0] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

fn small_models() -> Vec<(String, DimerQuiver)> {
    let mut out = Vec::new();
    for e in corpus::entries() {
        let q = e.quiver();
        for (k, l) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let c = q.torus_cover(k, l).unwrap();
            if c.arrows().len() <= 20 {
                out.push((format!("{}@{k}x{l}", e.name), c));
            }
        }
    }
    out
}

#[test]
fn matchings_agree_with_subset_scan() {
    for (label, q) in small_models() {
        let brute = brute_matchings(&q);
        let table = MatchingTable::compute(&q).unwrap();
        let mut ours: Vec<u64> = table
            .perfect
            .iter()
            .map(|d| d.arrows().iter().fold(0u64, |m, a| m | 1 << a.0))
            .collect();
        ours.sort();
        assert_eq!(ours, brute, "{label}: perfect matchings");

        let simple: BTreeSet<u64> = brute.iter().copied().filter(|&m| brute_simple(&q, m)).collect();
        let ours_simple: BTreeSet<u64> = table
            .simple_matchings()
            .map(|d| d.arrows().iter().fold(0u64, |m, a| m | 1 << a.0))
            .collect();
        assert_eq!(ours_simple, simple, "{label}: simple matchings");
    }
}

#[test]
fn fixtures_match_oracle() {
    for e in corpus::entries() {
        let q = e.quiver();
        let fx = e.fixture();
        let perfect = brute_matchings(&q);
        let simple: Vec<u64> = perfect.iter().copied().filter(|&m| brute_simple(&q, m)).collect();
        assert_eq!(fx.perfect_matchings, perfect.len(), "{}", e.name);
        assert_eq!(fx.simple_matchings, simple.len(), "{}", e.name);

        let all = (1u64 << q.arrows().len()) - 1;
        let covered = perfect.iter().fold(0, |m, d| m | d);
        assert_eq!(fx.nondegenerate, covered == all, "{}", e.name);

        let in_simple = simple.iter().fold(0, |m, d| m | d);
        let qs: BTreeSet<&str> = q
            .arrows()
            .iter()
            .filter(|a| in_simple & 1 << a.id.0 == 0)
            .map(|a| a.name.as_str())
            .collect();
        let fx_qs: BTreeSet<&str> = fx.qs_arrows.iter().map(String::as_str).collect();
        assert_eq!(fx_qs, qs, "{}", e.name);

        match fx.cancellative {
            Some(c) => assert_eq!(check_cancellative(&q).unwrap().cancellative, c, "{}", e.name),
            None => assert!(check_cancellative(&q).is_err(), "{}", e.name),
        }
    }
}

/// Cycle weights at vertex `i` by depth-first search within `bounds`.
fn brute_cycle_weights(q: &DimerQuiver, simple: &[u64], i: usize, bounds: Bounds) -> BTreeSet<Vec<u32>> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        q: &DimerQuiver,
        simple: &[u64],
        i: usize,
        bounds: Bounds,
        at: usize,
        wind: (i64, i64),
        weight: &mut Vec<u32>,
        depth: usize,
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        let degree: u32 = weight.iter().sum();
        if degree as u64 > bounds.degree {
            return;
        }
        if at == i && depth > 0 && wind.0.abs() <= bounds.max_winding && wind.1.abs() <= bounds.max_winding {
            out.insert(weight.clone());
        }
        if depth == bounds.max_len {
            return;
        }
        for a in q.arrows().iter().filter(|a| a.tail.0 == at) {
            for (k, d) in simple.iter().enumerate() {
                weight[k] += (d >> a.id.0 & 1) as u32;
            }
            let w = (wind.0 + a.winding.u1, wind.1 + a.winding.u2);
            go(q, simple, i, bounds, a.head.0, w, weight, depth + 1, out);
            for (k, d) in simple.iter().enumerate() {
                weight[k] -= (d >> a.id.0 & 1) as u32;
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut weight = vec![0; simple.len()];
    go(q, simple, i, bounds, i, (0, 0), &mut weight, 0, &mut out);
    out
}

/// Elements that are not the sum of two nonzero elements.
fn irreducibles(set: &BTreeSet<Vec<u32>>) -> BTreeSet<Vec<u32>> {
    set.iter()
        .filter(|w| {
            !set.iter().any(|a| {
                let rest: Option<Vec<u32>> = w.iter().zip(a).map(|(x, y)| x.checked_sub(*y)).collect();
                rest.is_some_and(|r| r.iter().any(|&e| e > 0) && set.contains(&r))
            })
        })
        .cloned()
        .collect()
}

#[test]
fn corner_generators_match_oracle() {
    for e in corpus::entries() {
        let fx = e.fixture();
        if fx.corner_generators.is_empty() {
            continue;
        }
        let q = e.quiver();
        let table = MatchingTable::compute(&q).unwrap();
        // the library indexes weights by simple matchings in table order
        let simple: Vec<u64> = table
            .simple_matchings()
            .map(|d| d.arrows().iter().fold(0u64, |m, a| m | 1 << a.0))
            .collect();
        let bounds = Bounds::standard(&q, simple.len());
        for (i, expected) in fx.corner_generators.iter().enumerate() {
            let gens = irreducibles(&brute_cycle_weights(&q, &simple, i, bounds));
            let want: BTreeSet<Vec<u32>> = expected.iter().cloned().collect();
            assert_eq!(gens, want, "{} vertex {i}", e.name);
        }
    }
}

#[test]
fn fixture_contractions_are_cyclic() {
    for e in corpus::entries() {
        let Some(arrows) = e.fixture().contraction else { continue };
        let q = e.quiver();
        let mut psi = contraction::contract_names(&q, &arrows).unwrap();
        assert!(psi.verify_cyclic(None).unwrap().is_cyclic(), "{}", e.name);
    }
}
