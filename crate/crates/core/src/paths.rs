//! Paths, matching weights, and equality modulo the dimer relations.
//!
//! Every arrow `a` lies on one positive and one negative face; deleting `a`
//! from each leaves two complementary paths `h(a) -> t(a)`, and the dimer
//! relations identify them. [`DimerAlgebra::eq_class`] closes a word under
//! these substitutions in both directions. The closure is finite on a
//! nondegenerate quiver: substitutions preserve the perfect-matching weight,
//! every arrow has weight degree at least one, so no member is longer than
//! the degree of the seed.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matchings::{MatchingError, MatchingTable};
use crate::model::{ArrowId, DimerQuiver, FaceSign, VertexId, Winding};

pub const DEFAULT_CLASS_CAP: usize = 100_000;
pub const DEFAULT_PATH_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("arrows at positions {0} and {} do not compose", .0 + 1)]
    NotComposable(usize),
    #[error("path starts at {expected} but its first arrow leaves {found}")]
    WrongStart { expected: VertexId, found: VertexId },
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("empty arrow list needs an explicit base vertex")]
    Empty,
    #[error("path is not a cycle")]
    NotACycle,
    #[error("more than {0} paths")]
    TooMany(usize),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// A composable arrow sequence, stored first-applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    tail: VertexId,
    head: VertexId,
    winding: Winding,
    arrows: Vec<ArrowId>,
}

impl PathWord {
    /// The idempotent at `v`.
    pub fn trivial(v: VertexId) -> Self {
        PathWord {
            tail: v,
            head: v,
            winding: Winding::ZERO,
            arrows: Vec::new(),
        }
    }

    pub fn new(q: &DimerQuiver, tail: VertexId, arrows: Vec<ArrowId>) -> Result<Self, PathError> {
        let mut head = tail;
        let mut winding = Winding::ZERO;
        for (k, a) in arrows.iter().enumerate() {
            let arrow = q.arrow(*a);
            if arrow.tail != head {
                return Err(if k == 0 {
                    PathError::WrongStart {
                        expected: tail,
                        found: arrow.tail,
                    }
                } else {
                    PathError::NotComposable(k - 1)
                });
            }
            head = arrow.head;
            winding += arrow.winding;
        }
        Ok(PathWord {
            tail,
            head,
            winding,
            arrows,
        })
    }

    /// A nonempty path from its arrows.
    pub fn from_arrows(q: &DimerQuiver, arrows: Vec<ArrowId>) -> Result<Self, PathError> {
        let first = arrows.first().ok_or(PathError::Empty)?;
        PathWord::new(q, q.arrow(*first).tail, arrows)
    }

    pub fn from_names(q: &DimerQuiver, names: &[&str]) -> Result<Self, PathError> {
        let arrows = names
            .iter()
            .map(|n| q.arrow_by_name(n).ok_or_else(|| PathError::UnknownArrow(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        PathWord::from_arrows(q, arrows)
    }

    pub fn tail(&self) -> VertexId {
        self.tail
    }

    pub fn head(&self) -> VertexId {
        self.head
    }

    pub fn winding(&self) -> Winding {
        self.winding
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_cycle(&self) -> bool {
        self.tail == self.head
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PathWord) -> Result<PathWord, PathError> {
        if self.head != next.tail {
            return Err(PathError::NotComposable(self.len().saturating_sub(1)));
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Ok(PathWord {
            tail: self.tail,
            head: next.head,
            winding: self.winding + next.winding,
            arrows,
        })
    }

    /// Cyclic rotation starting at arrow `k`.
    pub fn rotate(&self, q: &DimerQuiver, k: usize) -> Result<PathWord, PathError> {
        if !self.is_cycle() {
            return Err(PathError::NotACycle);
        }
        if self.arrows.is_empty() {
            return Ok(self.clone());
        }
        let k = k % self.len();
        let arrows: Vec<ArrowId> = self.arrows[k..].iter().chain(&self.arrows[..k]).copied().collect();
        PathWord::new(q, q.arrow(arrows[0]).tail, arrows)
    }

    /// `self` repeated `n` times; requires a cycle.
    pub fn power(&self, n: usize) -> Result<PathWord, PathError> {
        if !self.is_cycle() {
            return Err(PathError::NotACycle);
        }
        let mut out = PathWord::trivial(self.tail);
        for _ in 0..n {
            out = out.then(self)?;
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, q: &'a DimerQuiver) -> PathDisplay<'a> {
        PathDisplay { q, p: self }
    }
}

pub struct PathDisplay<'a> {
    q: &'a DimerQuiver,
    p: &'a PathWord,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_empty() {
            return write!(f, "e{}", self.p.tail.0);
        }
        write!(f, "[{}]", self.q.arrow_names(&self.p.arrows).join(" "))
    }
}

/// Exponent vector over an indexed matching list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<u32>);

impl Weight {
    pub fn zeros(dim: usize) -> Self {
        Weight(vec![0; dim])
    }

    /// The all-ones vector, i.e. the product of all variables.
    pub fn sigma(dim: usize) -> Self {
        Weight(vec![1; dim])
    }

    pub fn from_vec(v: Vec<u32>) -> Self {
        Weight(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add_assign(&mut self, other: &Weight) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn plus(&self, other: &Weight) -> Weight {
        let mut w = self.clone();
        w.add_assign(other);
        w
    }

    pub fn checked_sub(&self, other: &Weight) -> Option<Weight> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Weight)
    }

    pub fn scaled(&self, n: u32) -> Weight {
        Weight(self.0.iter().map(|e| e * n).collect())
    }

    pub fn divides(&self, other: &Weight) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// True iff the all-ones vector does not divide this weight. Over an
    /// empty index set the all-ones vector is the unit, which divides
    /// everything.
    pub fn is_sigma_reduced(&self) -> bool {
        self.0.contains(&0)
    }

    /// Largest `m` with `sigma^m` dividing this weight.
    pub fn sigma_power(&self) -> u32 {
        self.0.iter().copied().min().unwrap_or(0)
    }

    /// `Some(m)` when `self - other = m * (1,...,1)`.
    pub fn sigma_offset(&self, other: &Weight) -> Option<i64> {
        let mut diffs = self.0.iter().zip(&other.0).map(|(a, b)| *a as i64 - *b as i64);
        let first = diffs.next().unwrap_or(0);
        diffs.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Per-arrow weights; a path's weight is the sum over its arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMap {
    dim: usize,
    per_arrow: Vec<Weight>,
}

impl WeightMap {
    /// Entry `k` of an arrow's weight is 1 iff the arrow lies in matching
    /// `matchings[k]`.
    pub fn from_matchings<'a>(
        q: &DimerQuiver,
        matchings: impl IntoIterator<Item = &'a crate::matchings::PerfectMatching>,
    ) -> Self {
        let ms: Vec<_> = matchings.into_iter().collect();
        let per_arrow = q
            .arrows()
            .iter()
            .map(|a| Weight(ms.iter().map(|d| u32::from(d.contains(a.id))).collect()))
            .collect();
        WeightMap { dim: ms.len(), per_arrow }
    }

    pub fn from_arrow_weights(dim: usize, per_arrow: Vec<Weight>) -> Self {
        debug_assert!(per_arrow.iter().all(|w| w.dim() == dim));
        WeightMap { dim, per_arrow }
    }

    /// Weights over all perfect matchings.
    pub fn eta(q: &DimerQuiver, table: &MatchingTable) -> Self {
        Self::from_matchings(q, &table.perfect)
    }

    /// Weights over simple matchings.
    pub fn tau(q: &DimerQuiver, table: &MatchingTable) -> Self {
        Self::from_matchings(q, table.simple_matchings())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arrow(&self, a: ArrowId) -> &Weight {
        &self.per_arrow[a.0]
    }

    pub fn word(&self, arrows: &[ArrowId]) -> Weight {
        let mut w = Weight::zeros(self.dim);
        for a in arrows {
            w.add_assign(&self.per_arrow[a.0]);
        }
        w
    }

    pub fn weight(&self, p: &PathWord) -> Weight {
        self.word(p.arrows())
    }

    /// Whether the all-ones vector fails to divide the weight of `p`.
    pub fn is_sigma_reduced(&self, p: &PathWord) -> bool {
        self.weight(p).is_sigma_reduced()
    }
}

/// For every arrow with a positive and a negative face, the complementary
/// paths `(a, plus, minus)`, both running `h(a) -> t(a)`.
pub fn complement_pairs(q: &DimerQuiver) -> Vec<(ArrowId, Vec<ArrowId>, Vec<ArrowId>)> {
    let mut out = Vec::new();
    for a in q.arrows() {
        let mut plus = None;
        let mut minus = None;
        for &(f, pos) in q.faces_of(a.id) {
            let slot = match q.face(f).sign {
                FaceSign::Positive => &mut plus,
                FaceSign::Negative => &mut minus,
            };
            if slot.is_none() {
                let rot = q.face_rotation(f, pos);
                *slot = Some(rot[1..].to_vec());
            }
        }
        if let (Some(p), Some(m)) = (plus, minus) {
            out.push((a.id, p, m));
        }
    }
    out
}

/// One substitution inside a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    /// Index of the first replaced arrow (or the insertion point).
    pub position: usize,
    /// The arrow whose two complements are exchanged.
    pub relation: ArrowId,
    /// True for positive-face complement -> negative-face complement.
    pub forward: bool,
}

#[derive(Clone, Debug)]
struct Rule {
    lhs: Vec<ArrowId>,
    rhs: Vec<ArrowId>,
    /// Base vertex of the complements (needed when `lhs` is empty).
    start: VertexId,
    relation: ArrowId,
    forward: bool,
}

/// Both-direction substitution rules derived from the faces.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rules: Vec<Rule>,
    by_first: HashMap<ArrowId, Vec<usize>>,
    empty_lhs: Vec<usize>,
}

impl RewriteSystem {
    pub fn new(q: &DimerQuiver) -> Self {
        let mut rules = Vec::new();
        for (a, plus, minus) in complement_pairs(q) {
            if plus == minus {
                continue;
            }
            let start = q.arrow(a).head;
            rules.push(Rule {
                lhs: plus.clone(),
                rhs: minus.clone(),
                start,
                relation: a,
                forward: true,
            });
            rules.push(Rule {
                lhs: minus,
                rhs: plus,
                start,
                relation: a,
                forward: false,
            });
        }
        let mut by_first: HashMap<ArrowId, Vec<usize>> = HashMap::new();
        let mut empty_lhs = Vec::new();
        for (i, r) in rules.iter().enumerate() {
            match r.lhs.first() {
                Some(a) => by_first.entry(*a).or_default().push(i),
                None => empty_lhs.push(i),
            }
        }
        RewriteSystem {
            rules,
            by_first,
            empty_lhs,
        }
    }

    pub fn relation_count(&self) -> usize {
        self.rules.len() / 2
    }

    fn junction_vertex(q: &DimerQuiver, tail: VertexId, word: &[ArrowId], j: usize) -> VertexId {
        if j == 0 {
            tail
        } else {
            q.arrow(word[j - 1]).head
        }
    }

    /// Every word reachable by one substitution.
    fn neighbours(&self, q: &DimerQuiver, tail: VertexId, word: &[ArrowId], mut f: impl FnMut(Vec<ArrowId>, RewriteStep)) {
        for pos in 0..word.len() {
            if let Some(rs) = self.by_first.get(&word[pos]) {
                for &ri in rs {
                    let r = &self.rules[ri];
                    if word[pos..].starts_with(&r.lhs) {
                        let mut next = Vec::with_capacity(word.len() - r.lhs.len() + r.rhs.len());
                        next.extend_from_slice(&word[..pos]);
                        next.extend_from_slice(&r.rhs);
                        next.extend_from_slice(&word[pos + r.lhs.len()..]);
                        f(
                            next,
                            RewriteStep {
                                position: pos,
                                relation: r.relation,
                                forward: r.forward,
                            },
                        );
                    }
                }
            }
        }
        for &ri in &self.empty_lhs {
            let r = &self.rules[ri];
            for j in 0..=word.len() {
                if Self::junction_vertex(q, tail, word, j) == r.start {
                    let mut next = word[..j].to_vec();
                    next.extend_from_slice(&r.rhs);
                    next.extend_from_slice(&word[j..]);
                    f(
                        next,
                        RewriteStep {
                            position: j,
                            relation: r.relation,
                            forward: r.forward,
                        },
                    );
                }
            }
        }
    }

    /// Applies one recorded step; `None` when it does not match.
    pub fn apply(&self, q: &DimerQuiver, p: &PathWord, step: RewriteStep) -> Option<PathWord> {
        let rule = self
            .rules
            .iter()
            .find(|r| r.relation == step.relation && r.forward == step.forward)?;
        let word = p.arrows();
        if step.position > word.len() || !word[step.position..].starts_with(&rule.lhs) {
            return None;
        }
        if rule.lhs.is_empty() && Self::junction_vertex(q, p.tail(), word, step.position) != rule.start {
            return None;
        }
        let mut next = word[..step.position].to_vec();
        next.extend_from_slice(&rule.rhs);
        next.extend_from_slice(&word[step.position + rule.lhs.len()..]);
        PathWord::new(q, p.tail(), next).ok()
    }
}

/// All words equal to a seed modulo the relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqClass {
    /// Canonically ordered: by length, then arrow ids.
    pub members: Vec<PathWord>,
}

impl EqClass {
    pub fn contains(&self, p: &PathWord) -> bool {
        self.members.binary_search_by(|m| canonical_cmp(m, p)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub(crate) fn canonical_cmp(a: &PathWord, b: &PathWord) -> std::cmp::Ordering {
    (a.len(), a.tail(), a.arrows()).cmp(&(b.len(), b.tail(), b.arrows()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistinctReason {
    EndpointsDiffer,
    WindingDiffers,
    /// The perfect-matching weights differ; substitutions preserve them.
    WeightDiffers,
    /// The full class of the first path was computed and the second is absent.
    ClassExhausted { class_size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Equality {
    Equal { chain: Vec<RewriteStep> },
    Distinct { reason: DistinctReason },
    /// The class-size guard tripped; never to be read as distinct.
    Unknown { explored: usize },
}

impl Equality {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal { .. })
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, Equality::Distinct { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("equivalence class exceeded {cap} words")]
pub struct ClassTooLarge {
    pub cap: usize,
}

/// A quiver with its matchings, weights and relations precomputed.
#[derive(Clone, Debug)]
pub struct DimerAlgebra<'q> {
    q: &'q DimerQuiver,
    table: MatchingTable,
    eta: WeightMap,
    tau: WeightMap,
    rewrite: RewriteSystem,
    nondegenerate: bool,
    class_cap: usize,
}

impl<'q> DimerAlgebra<'q> {
    pub fn new(q: &'q DimerQuiver) -> Result<Self, MatchingError> {
        Ok(Self::with_table(q, MatchingTable::compute(q)?))
    }

    pub fn with_table(q: &'q DimerQuiver, table: MatchingTable) -> Self {
        let eta = WeightMap::eta(q, &table);
        let tau = WeightMap::tau(q, &table);
        let nondegenerate = table.uncovered_arrows(q).is_empty();
        DimerAlgebra {
            q,
            table,
            eta,
            tau,
            rewrite: RewriteSystem::new(q),
            nondegenerate,
            class_cap: DEFAULT_CLASS_CAP,
        }
    }

    pub fn with_class_cap(mut self, cap: usize) -> Self {
        self.class_cap = cap;
        self
    }

    pub fn quiver(&self) -> &'q DimerQuiver {
        self.q
    }

    pub fn matchings(&self) -> &MatchingTable {
        &self.table
    }

    pub fn eta_map(&self) -> &WeightMap {
        &self.eta
    }

    pub fn tau_map(&self) -> &WeightMap {
        &self.tau
    }

    pub fn rewrite_system(&self) -> &RewriteSystem {
        &self.rewrite
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn tau_weight(&self, p: &PathWord) -> Weight {
        self.tau.weight(p)
    }

    pub fn eta_weight(&self, p: &PathWord) -> Weight {
        self.eta.weight(p)
    }

    /// Breadth-first closure of `seed`; stops early when `target` is reached.
    fn explore(&self, seed: &PathWord, target: Option<&[ArrowId]>) -> Explored {
        let mut words: Vec<Vec<ArrowId>> = vec![seed.arrows().to_vec()];
        let mut parent: Vec<Option<(usize, RewriteStep)>> = vec![None];
        let mut index: HashMap<Vec<ArrowId>, usize> = HashMap::from([(seed.arrows().to_vec(), 0)]);
        if target == Some(seed.arrows()) {
            return Explored::Found(Vec::new());
        }
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            let word = words[cur].clone();
            let mut hit = None;
            let mut overflow = false;
            self.rewrite.neighbours(self.q, seed.tail(), &word, |next, step| {
                if hit.is_some() || overflow || index.contains_key(&next) {
                    return;
                }
                if words.len() >= self.class_cap {
                    overflow = true;
                    return;
                }
                let id = words.len();
                if target == Some(next.as_slice()) {
                    hit = Some(id);
                }
                index.insert(next.clone(), id);
                words.push(next);
                parent.push(Some((cur, step)));
                queue.push_back(id);
            });
            if let Some(id) = hit {
                let mut chain = Vec::new();
                let mut at = id;
                while let Some((p, step)) = parent[at] {
                    chain.push(step);
                    at = p;
                }
                chain.reverse();
                return Explored::Found(chain);
            }
            if overflow {
                return Explored::Overflow(words.len());
            }
        }
        Explored::Class(words)
    }

    /// The full class of `p` modulo the relations.
    pub fn eq_class(&self, p: &PathWord) -> Result<EqClass, ClassTooLarge> {
        match self.explore(p, None) {
            Explored::Class(words) => {
                let mut members: Vec<PathWord> = words
                    .into_iter()
                    .map(|w| PathWord::new(self.q, p.tail(), w).expect("substitutions preserve composability"))
                    .collect();
                members.sort_by(canonical_cmp);
                Ok(EqClass { members })
            }
            Explored::Overflow(_) => Err(ClassTooLarge { cap: self.class_cap }),
            Explored::Found(_) => unreachable!("no target"),
        }
    }

    /// Decides `p = r` in the dimer algebra.
    pub fn equal_mod_i(&self, p: &PathWord, r: &PathWord) -> Equality {
        if p.tail() != r.tail() || p.head() != r.head() {
            return Equality::Distinct {
                reason: DistinctReason::EndpointsDiffer,
            };
        }
        if p.winding() != r.winding() {
            return Equality::Distinct {
                reason: DistinctReason::WindingDiffers,
            };
        }
        if self.eta_weight(p) != self.eta_weight(r) {
            return Equality::Distinct {
                reason: DistinctReason::WeightDiffers,
            };
        }
        match self.explore(p, Some(r.arrows())) {
            Explored::Found(chain) => Equality::Equal { chain },
            Explored::Class(words) => Equality::Distinct {
                reason: DistinctReason::ClassExhausted { class_size: words.len() },
            },
            Explored::Overflow(n) => Equality::Unknown { explored: n },
        }
    }

    /// Cycles at `i` with winding `u` and length at most `max_len`.
    pub fn enumerate_cycles(&self, i: VertexId, u: Winding, max_len: usize) -> Result<Vec<PathWord>, PathError> {
        enumerate_cycles(self.q, i, u, max_len, DEFAULT_PATH_CAP)
    }
}

enum Explored {
    Found(Vec<RewriteStep>),
    Class(Vec<Vec<ArrowId>>),
    Overflow(usize),
}

/// Cycles at `i` with winding `u` and length at most `max_len`, ordered by
/// length then arrow ids.
pub fn enumerate_cycles(
    q: &DimerQuiver,
    i: VertexId,
    u: Winding,
    max_len: usize,
    cap: usize,
) -> Result<Vec<PathWord>, PathError> {
    // distance from each vertex back to i
    let mut dist = vec![usize::MAX; q.vertex_count()];
    dist[i.0] = 0;
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        for a in q.incoming(v) {
            let t = q.arrow(*a).tail;
            if dist[t.0] == usize::MAX {
                dist[t.0] = dist[v.0] + 1;
                queue.push_back(t);
            }
        }
    }
    let mut out = Vec::new();
    let mut word = Vec::new();
    cycles_dfs(q, i, u, max_len, cap, &dist, i, Winding::ZERO, &mut word, &mut out)?;
    out.sort_by(canonical_cmp);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cycles_dfs(
    q: &DimerQuiver,
    base: VertexId,
    target: Winding,
    max_len: usize,
    cap: usize,
    dist: &[usize],
    at: VertexId,
    winding: Winding,
    word: &mut Vec<ArrowId>,
    out: &mut Vec<PathWord>,
) -> Result<(), PathError> {
    if at == base && winding == target {
        if out.len() >= cap {
            return Err(PathError::TooMany(cap));
        }
        out.push(PathWord {
            tail: base,
            head: base,
            winding,
            arrows: word.clone(),
        });
    }
    if word.len() == max_len {
        return Ok(());
    }
    for &a in q.outgoing(at) {
        let arrow = q.arrow(a);
        let d = dist[arrow.head.0];
        if d == usize::MAX || word.len() + 1 + d > max_len {
            continue;
        }
        word.push(a);
        cycles_dfs(q, base, target, max_len, cap, dist, arrow.head, winding + arrow.winding, word, out)?;
        word.pop();
    }
    Ok(())
}

/// All paths of length at most `max_len` starting at `from` (or anywhere),
/// including the trivial ones, in canonical order.
pub fn enumerate_paths(
    q: &DimerQuiver,
    from: Option<VertexId>,
    max_len: usize,
    cap: usize,
) -> Result<Vec<PathWord>, PathError> {
    let starts: Vec<VertexId> = match from {
        Some(v) => vec![v],
        None => q.vertices().collect(),
    };
    let mut out = Vec::new();
    let mut frontier: Vec<PathWord> = starts.into_iter().map(PathWord::trivial).collect();
    for len in 0..=max_len {
        if out.len() + frontier.len() > cap {
            return Err(PathError::TooMany(cap));
        }
        out.extend(frontier.iter().cloned());
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for &a in q.outgoing(p.head) {
                let arrow = q.arrow(a);
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(PathWord {
                    tail: p.tail,
                    head: arrow.head,
                    winding: p.winding + arrow.winding,
                    arrows,
                });
            }
        }
        frontier = next;
    }
    out.sort_by(canonical_cmp);
    Ok(out)
}

/// Whether some proper nonempty sub-word is a cycle of winding zero, i.e.
/// whether the lift of `p` revisits a vertex of the cover before its end.
pub fn has_cyclic_subpath(q: &DimerQuiver, p: &PathWord) -> bool {
    let mut junctions = Vec::with_capacity(p.len() + 1);
    let mut w = Winding::ZERO;
    junctions.push((p.tail(), w));
    for a in p.arrows() {
        let arrow = q.arrow(*a);
        w += arrow.winding;
        junctions.push((arrow.head, w));
    }
    let n = p.len();
    for i in 0..=n {
        for j in i + 1..=n {
            if (i, j) != (0, n) && junctions[i] == junctions[j] {
                return true;
            }
        }
    }
    false
}
