//! Perfect and simple matchings.
//!
//! Enumeration is an exact-cover search with faces as the items and arrows as
//! the options: each arrow covers every face it bounds, and a perfect matching
//! picks one covering arrow per face without conflicts. The face with the
//! fewest live candidates is branched on first.

use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ArrowId, DimerQuiver, FaceId, VertexId};
use crate::paths::PathWord;

pub const DEFAULT_MATCHING_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("more than {0} perfect matchings")]
    CapExceeded(usize),
    #[error("arrow set is not a perfect matching: face {0} meets it {1} times")]
    NotPerfect(usize, usize),
    #[error("matching is not simple")]
    NotSimple,
    #[error("relation for arrow `{arrow}` evaluates to {lhs} and {rhs}")]
    RelationViolated { arrow: String, lhs: u8, rhs: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectMatching {
    pub id: usize,
    arrows: Vec<ArrowId>,
    simple: OnceLock<bool>,
}

impl PerfectMatching {
    /// Wraps an arrow set after checking the one-arrow-per-face condition.
    pub fn from_arrows(q: &DimerQuiver, id: usize, arrows: impl IntoIterator<Item = ArrowId>) -> Result<Self, MatchingError> {
        let set: BTreeSet<ArrowId> = arrows.into_iter().collect();
        for f in q.faces() {
            let hits = f.boundary.iter().filter(|a| set.contains(a)).count();
            if hits != 1 {
                return Err(MatchingError::NotPerfect(f.id.0, hits));
            }
        }
        Ok(PerfectMatching {
            id,
            arrows: set.into_iter().collect(),
            simple: OnceLock::new(),
        })
    }

    /// Sorted arrow ids.
    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.arrows.binary_search(&a).is_ok()
    }

    /// Cached [`is_simple`] verdict.
    pub fn simple(&self, q: &DimerQuiver) -> bool {
        *self.simple.get_or_init(|| support_connectivity(q, self).is_ok())
    }

    pub fn names(&self, q: &DimerQuiver) -> Vec<String> {
        q.arrow_names(&self.arrows)
    }
}

/// All perfect matchings, ordered lexicographically by sorted arrow ids.
pub fn enumerate_perfect_matchings(q: &DimerQuiver, cap: usize) -> Result<Vec<PerfectMatching>, MatchingError> {
    let face_count = q.faces().len();
    // arrow -> faces it bounds (with multiplicity)
    let covers: Vec<Vec<FaceId>> = q
        .arrows()
        .iter()
        .map(|a| q.faces_of(a.id).iter().map(|(f, _)| *f).collect())
        .collect();
    let mut search = ExactCover {
        q,
        covers: &covers,
        covered: vec![false; face_count],
        chosen: Vec::new(),
        found: Vec::new(),
        cap,
    };
    search.run()?;
    let mut sets = search.found;
    for s in &mut sets {
        s.sort();
    }
    sets.sort();
    sets.dedup();
    Ok(sets
        .into_iter()
        .enumerate()
        .map(|(id, arrows)| PerfectMatching {
            id,
            arrows,
            simple: OnceLock::new(),
        })
        .collect())
}

struct ExactCover<'a> {
    q: &'a DimerQuiver,
    covers: &'a [Vec<FaceId>],
    covered: Vec<bool>,
    chosen: Vec<ArrowId>,
    found: Vec<Vec<ArrowId>>,
    cap: usize,
}

impl ExactCover<'_> {
    fn usable(&self, a: ArrowId) -> bool {
        let fs = &self.covers[a.0];
        // an arrow bounding the same face twice would cover it twice
        fs.iter().all(|f| !self.covered[f.0])
            && fs.iter().enumerate().all(|(i, f)| !fs[..i].contains(f))
    }

    fn run(&mut self) -> Result<(), MatchingError> {
        let mut best: Option<(FaceId, usize)> = None;
        for f in self.q.faces() {
            if self.covered[f.id.0] {
                continue;
            }
            let live = f.boundary.iter().filter(|a| self.usable(**a)).count();
            if best.is_none_or(|(_, n)| live < n) {
                best = Some((f.id, live));
                if live == 0 {
                    break;
                }
            }
        }
        let Some((face, live)) = best else {
            if self.found.len() >= self.cap {
                return Err(MatchingError::CapExceeded(self.cap));
            }
            self.found.push(self.chosen.clone());
            return Ok(());
        };
        if live == 0 {
            return Ok(());
        }
        let mut candidates: Vec<ArrowId> = self.q.face(face).boundary.clone();
        candidates.sort();
        candidates.dedup();
        for a in candidates {
            if !self.usable(a) {
                continue;
            }
            for f in &self.covers[a.0] {
                self.covered[f.0] = true;
            }
            self.chosen.push(a);
            let r = self.run();
            self.chosen.pop();
            for f in &self.covers[a.0] {
                self.covered[f.0] = false;
            }
            r?;
        }
        Ok(())
    }
}

/// Perfect matchings together with the simple ones.
#[derive(Clone, Debug)]
pub struct MatchingTable {
    pub perfect: Vec<PerfectMatching>,
    /// Indices into `perfect` of the simple matchings, ascending.
    pub simple: Vec<usize>,
}

impl MatchingTable {
    pub fn compute(q: &DimerQuiver) -> Result<Self, MatchingError> {
        Self::compute_with_cap(q, DEFAULT_MATCHING_CAP)
    }

    pub fn compute_with_cap(q: &DimerQuiver, cap: usize) -> Result<Self, MatchingError> {
        let perfect = enumerate_perfect_matchings(q, cap)?;
        let simple = perfect.iter().filter(|d| d.simple(q)).map(|d| d.id).collect();
        Ok(MatchingTable { perfect, simple })
    }

    pub fn simple_matchings(&self) -> impl Iterator<Item = &PerfectMatching> {
        self.simple.iter().map(|&i| &self.perfect[i])
    }

    /// Arrows lying in no perfect matching.
    pub fn uncovered_arrows(&self, q: &DimerQuiver) -> Vec<ArrowId> {
        q.arrows()
            .iter()
            .map(|a| a.id)
            .filter(|a| !self.perfect.iter().any(|d| d.contains(*a)))
            .collect()
    }

    /// Arrows lying in no simple matching.
    pub fn qs_arrows(&self, q: &DimerQuiver) -> BTreeSet<ArrowId> {
        q.arrows()
            .iter()
            .map(|a| a.id)
            .filter(|a| !self.simple_matchings().any(|d| d.contains(*a)))
            .collect()
    }

    /// For each arrow, the first simple matching containing it.
    pub fn covering_simple(&self, q: &DimerQuiver) -> Vec<Option<usize>> {
        q.arrows()
            .iter()
            .map(|a| self.simple_matchings().find(|d| d.contains(a.id)).map(|d| d.id))
            .collect()
    }
}

/// Closed walk through every vertex using only arrows off a matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleModuleWitness {
    pub support: Vec<ArrowId>,
    pub walk: Vec<ArrowId>,
}

/// Why the complement of a matching fails to support a simple module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub from: VertexId,
    pub to: VertexId,
}

/// Decides simplicity: the complement of `d` must be strongly connected
/// and span every vertex.
pub fn is_simple(q: &DimerQuiver, d: &PerfectMatching) -> Option<SimpleModuleWitness> {
    support_connectivity(q, d).ok()
}

/// The witness walk, or a vertex pair `(from, to)` with no support path.
pub fn support_connectivity(q: &DimerQuiver, d: &PerfectMatching) -> Result<SimpleModuleWitness, Separation> {
    let support: Vec<ArrowId> = q.arrows().iter().map(|a| a.id).filter(|a| !d.contains(*a)).collect();
    let n = q.vertex_count();
    if n == 0 {
        return Err(Separation {
            from: VertexId(0),
            to: VertexId(0),
        });
    }
    let allowed = |a: ArrowId| !d.contains(a);
    let mut walk = Vec::new();
    for v in 0..n {
        let from = VertexId(v);
        let to = VertexId((v + 1) % n);
        match support_path(q, from, to, allowed) {
            Some(p) => walk.extend(p),
            None => return Err(Separation { from, to }),
        }
    }
    if walk.is_empty() {
        // one vertex: a loop of the support closes the walk
        let Some(a) = support.iter().find(|a| q.arrow(**a).tail == VertexId(0)) else {
            return Err(Separation {
                from: VertexId(0),
                to: VertexId(0),
            });
        };
        walk.push(*a);
    }
    Ok(SimpleModuleWitness { support, walk })
}

/// Shortest path (BFS, lowest arrow id first) over allowed arrows.
pub(crate) fn support_path(
    q: &DimerQuiver,
    from: VertexId,
    to: VertexId,
    allowed: impl Fn(ArrowId) -> bool,
) -> Option<Vec<ArrowId>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: Vec<Option<ArrowId>> = vec![None; q.vertex_count()];
    let mut seen = vec![false; q.vertex_count()];
    seen[from.0] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &a in q.outgoing(v) {
            if !allowed(a) {
                continue;
            }
            let h = q.arrow(a).head;
            if seen[h.0] {
                continue;
            }
            seen[h.0] = true;
            prev[h.0] = Some(a);
            if h == to {
                let mut path = Vec::new();
                let mut cur = to;
                while let Some(a) = prev[cur.0] {
                    path.push(a);
                    cur = q.arrow(a).tail;
                    if cur == from {
                        break;
                    }
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(h);
        }
    }
    None
}

/// Nondegeneracy: every arrow lies in a perfect matching.
pub fn nondegenerate(q: &DimerQuiver, table: &MatchingTable) -> (bool, Vec<ArrowId>) {
    let uncovered = table.uncovered_arrows(q);
    (uncovered.is_empty(), uncovered)
}

/// A representation of dimension `1^{Q0}`: scalar 0 on arrows of the
/// matching, 1 elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleModule {
    pub matching: usize,
    /// Scalar per arrow id.
    pub values: Vec<u8>,
    pub witness: SimpleModuleWitness,
}

impl SimpleModule {
    pub fn annihilates(&self, a: ArrowId) -> bool {
        self.values[a.0] == 0
    }

    /// Product of arrow scalars along `p`.
    pub fn evaluate(&self, p: &PathWord) -> u8 {
        p.arrows().iter().map(|a| self.values[a.0]).product()
    }
}

pub fn simple_module_from_matching(q: &DimerQuiver, d: &PerfectMatching) -> Result<SimpleModule, MatchingError> {
    let witness = is_simple(q, d).ok_or(MatchingError::NotSimple)?;
    let values: Vec<u8> = q.arrows().iter().map(|a| u8::from(!d.contains(a.id))).collect();
    let module = SimpleModule {
        matching: d.id,
        values,
        witness,
    };
    for (arrow, plus, minus) in crate::paths::complement_pairs(q) {
        let eval = |w: &[ArrowId]| w.iter().map(|a| module.values[a.0]).product::<u8>();
        let (lhs, rhs) = (eval(&plus), eval(&minus));
        if lhs != rhs {
            return Err(MatchingError::RelationViolated {
                arrow: q.arrow(arrow).name.clone(),
                lhs,
                rhs,
            });
        }
    }
    Ok(module)
}
