//! Monomial semigroups of cycle weights: vertex corner rings, the cycle
//! algebra `S` (union over vertices) and the homotopy center `R`
//! (intersection over vertices).
//!
//! The semigroups are infinite, so everything here is exact only up to a
//! [`Bounds`] profile, and every result carries the bounds it was computed
//! with.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ArrowId, DimerQuiver, VertexId, Winding};
use crate::paths::{PathWord, Weight, WeightMap};

/// Overrides the default bound profile, e.g. `max_len=12,degree=8`.
pub const BOUNDS_ENV: &str = "DIMERKIT_DEFAULT_BOUNDS";

pub const DEFAULT_MAX_WINDING: i64 = 2;
pub const DEFAULT_STATE_CAP: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("bad bounds specification `{0}`")]
    BadBounds(String),
    #[error("search exceeded {0} states; lower the bounds")]
    TooManyStates(usize),
    #[error("weight map has {weights} entries but the quiver has {arrows} arrows")]
    WeightMismatch { weights: usize, arrows: usize },
}

/// Search limits for cycle enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    /// Longest cycle considered.
    pub max_len: usize,
    /// Largest `|u|_inf` of a cycle winding `u`.
    pub max_winding: i64,
    /// Largest total weight degree.
    pub degree: u64,
}

impl Bounds {
    /// Cycle length `2 * longest face * |Q0|`, winding norm 2, degree
    /// `3 * variables`.
    pub fn standard(q: &DimerQuiver, variables: usize) -> Bounds {
        Bounds {
            max_len: 2 * q.longest_face() * q.vertex_count(),
            max_winding: DEFAULT_MAX_WINDING,
            degree: 3 * variables as u64,
        }
    }

    /// [`Bounds::standard`] adjusted by the environment override, if set.
    pub fn for_quiver(q: &DimerQuiver, variables: usize) -> Result<Bounds, AlgebraError> {
        let base = Bounds::standard(q, variables);
        match std::env::var(BOUNDS_ENV) {
            Ok(spec) if !spec.trim().is_empty() => base.with_overrides(&spec),
            _ => Ok(base),
        }
    }

    /// Applies `key=value` pairs separated by commas.
    pub fn with_overrides(mut self, spec: &str) -> Result<Bounds, AlgebraError> {
        let bad = || AlgebraError::BadBounds(spec.to_string());
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "max_len" => self.max_len = value.trim().parse().map_err(|_| bad())?,
                "max_winding" => self.max_winding = value.trim().parse().map_err(|_| bad())?,
                "degree" => self.degree = value.trim().parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        if self.max_winding < 0 {
            return Err(bad());
        }
        Ok(self)
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max_len={},max_winding={},degree={}",
            self.max_len, self.max_winding, self.degree
        )
    }
}

/// A finitely generated submonoid of `N^dim`, known up to a degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSemigroup {
    dim: usize,
    /// Minimal among the elements seen, ordered by degree then entries.
    generators: Vec<Weight>,
    degree_bound: u64,
}

impl MonomialSemigroup {
    /// The semigroup generated by `elements`, with a minimal generating set
    /// extracted greedily in degree order.
    pub fn from_elements(dim: usize, degree_bound: u64, elements: impl IntoIterator<Item = Weight>) -> Self {
        let mut sorted: Vec<Weight> = elements.into_iter().filter(|w| !w.is_zero()).collect();
        sorted.sort_by(|a, b| (a.degree(), a).cmp(&(b.degree(), b)));
        sorted.dedup();
        let mut s = MonomialSemigroup {
            dim,
            generators: Vec::new(),
            degree_bound,
        };
        for w in sorted {
            if !s.contains(&w) {
                s.generators.push(w);
            }
        }
        s.generators.sort_by(|a, b| (a.degree(), a).cmp(&(b.degree(), b)));
        s
    }

    pub fn trivial(dim: usize, degree_bound: u64) -> Self {
        MonomialSemigroup {
            dim,
            generators: Vec::new(),
            degree_bound,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Weight] {
        &self.generators
    }

    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    /// Whether `w` is a nonnegative integer combination of the generators.
    pub fn contains(&self, w: &Weight) -> bool {
        if w.dim() != self.dim {
            return false;
        }
        let mut memo = HashMap::new();
        self.contains_memo(w, &mut memo)
    }

    fn contains_memo(&self, w: &Weight, memo: &mut HashMap<Weight, bool>) -> bool {
        let Some(k) = w.entries().iter().position(|&e| e > 0) else {
            return true;
        };
        if let Some(&known) = memo.get(w) {
            return known;
        }
        // some generator covering coordinate k must be used
        let found = self.generators.iter().any(|g| {
            g.entries()[k] > 0 && g.divides(w) && self.contains_memo(&w.checked_sub(g).expect("divides"), memo)
        });
        memo.insert(w.clone(), found);
        found
    }

    /// The first generator of `self` missing from `other`.
    pub fn first_missing_from(&self, other: &MonomialSemigroup) -> Option<Weight> {
        self.generators.iter().find(|g| !other.contains(g)).cloned()
    }

    /// Equal at the bound, or a generator of one side missing from the other.
    pub fn compare(&self, other: &MonomialSemigroup) -> Result<(), Weight> {
        match self.first_missing_from(other).or_else(|| other.first_missing_from(self)) {
            Some(w) => Err(w),
            None => Ok(()),
        }
    }

    /// All members of degree at most `d`.
    pub fn members_up_to(&self, d: u64) -> BTreeSet<Weight> {
        let mut out = BTreeSet::from([Weight::zeros(self.dim)]);
        let mut frontier = vec![Weight::zeros(self.dim)];
        while let Some(w) = frontier.pop() {
            for g in &self.generators {
                let next = w.plus(g);
                if next.degree() <= d && out.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        out
    }
}

/// A cycle realizing a weight.
/// The weights of cycles at one vertex, with the semigroup they generate.
#[derive(Clone, Debug)]
pub struct CornerRing {
    pub vertex: VertexId,
    pub semigroup: MonomialSemigroup,
    /// One shortest cycle per weight found within bounds.
    pub elements: BTreeMap<Weight, PathWord>,
    /// Windings of cycles at this vertex whose weight is sigma-reduced.
    pub sigma_reduced_windings: BTreeSet<Winding>,
}

impl CornerRing {
    pub fn witness(&self, w: &Weight) -> Option<&PathWord> {
        self.elements.get(w)
    }
}

struct State {
    vertex: VertexId,
    winding: Winding,
    weight: Weight,
    parent: Option<(usize, ArrowId)>,
}

fn reconstruct(q: &DimerQuiver, base: VertexId, states: &[State], mut at: usize) -> PathWord {
    let mut arrows = Vec::new();
    while let Some((p, a)) = states[at].parent {
        arrows.push(a);
        at = p;
    }
    arrows.reverse();
    PathWord::new(q, base, arrows).expect("search follows arrows")
}

/// Weights of the cycles at `i` within `bounds`.
pub fn corner_semigroup(
    q: &DimerQuiver,
    weights: &WeightMap,
    i: VertexId,
    bounds: Bounds,
) -> Result<CornerRing, AlgebraError> {
    corner_semigroup_capped(q, weights, i, bounds, DEFAULT_STATE_CAP)
}

pub fn corner_semigroup_capped(
    q: &DimerQuiver,
    weights: &WeightMap,
    i: VertexId,
    bounds: Bounds,
    state_cap: usize,
) -> Result<CornerRing, AlgebraError> {
    let dim = weights.dim();
    let mut states = vec![State {
        vertex: i,
        winding: Winding::ZERO,
        weight: Weight::zeros(dim),
        parent: None,
    }];
    let mut seen: HashSet<(VertexId, Winding, Weight)> = HashSet::from([(i, Winding::ZERO, Weight::zeros(dim))]);
    let mut elements = BTreeMap::new();
    let mut sigma_reduced = BTreeSet::new();
    let mut layer = vec![0usize];
    for len in 0..=bounds.max_len {
        for &s in &layer {
            let st = &states[s];
            if st.vertex == i && st.winding.max_norm() <= bounds.max_winding {
                if !elements.contains_key(&st.weight) {
                    elements.insert(st.weight.clone(), reconstruct(q, i, &states, s));
                }
                if st.weight.is_sigma_reduced() {
                    sigma_reduced.insert(st.winding);
                }
            }
        }
        if len == bounds.max_len {
            break;
        }
        let mut next = Vec::new();
        for &s in &layer {
            let (vertex, winding) = (states[s].vertex, states[s].winding);
            for &a in q.outgoing(vertex) {
                let arrow = q.arrow(a);
                let weight = states[s].weight.plus(weights.arrow(a));
                if weight.degree() > bounds.degree {
                    continue;
                }
                let key = (arrow.head, winding + arrow.winding, weight);
                if seen.contains(&key) {
                    continue;
                }
                if states.len() >= state_cap {
                    return Err(AlgebraError::TooManyStates(state_cap));
                }
                seen.insert(key.clone());
                next.push(states.len());
                states.push(State {
                    vertex: key.0,
                    winding: key.1,
                    weight: key.2,
                    parent: Some((s, a)),
                });
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    let semigroup = MonomialSemigroup::from_elements(dim, bounds.degree, elements.keys().cloned());
    Ok(CornerRing {
        vertex: i,
        semigroup,
        elements,
        sigma_reduced_windings: sigma_reduced,
    })
}

/// Corner rings at every vertex under one weight map and bound profile.
#[derive(Clone, Debug)]
pub struct CornerRings {
    pub bounds: Bounds,
    pub dim: usize,
    pub rings: Vec<CornerRing>,
}

impl CornerRings {
    pub fn compute(q: &DimerQuiver, weights: &WeightMap, bounds: Bounds) -> Result<Self, AlgebraError> {
        if q.arrows().iter().any(|a| weights.arrow(a.id).dim() != weights.dim()) {
            return Err(AlgebraError::WeightMismatch {
                weights: weights.dim(),
                arrows: q.arrows().len(),
            });
        }
        let rings = q
            .vertices()
            .map(|v| corner_semigroup(q, weights, v, bounds))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CornerRings {
            bounds,
            dim: weights.dim(),
            rings,
        })
    }

    /// A cycle realizing `w` at any vertex.
    pub fn witness(&self, w: &Weight) -> Option<&PathWord> {
        self.rings.iter().find_map(|r| r.witness(w))
    }
}

/// `S`: generated by the corner-ring weights of all vertices.
pub fn cycle_algebra(rings: &CornerRings) -> MonomialSemigroup {
    MonomialSemigroup::from_elements(
        rings.dim,
        rings.bounds.degree,
        rings.rings.iter().flat_map(|r| r.elements.keys().cloned()),
    )
}

/// `R`: the weights lying in every corner ring.
pub fn homotopy_center(rings: &CornerRings) -> MonomialSemigroup {
    let candidates: BTreeSet<Weight> = rings
        .rings
        .iter()
        .flat_map(|r| r.elements.keys().cloned())
        .collect();
    MonomialSemigroup::from_elements(
        rings.dim,
        rings.bounds.degree,
        candidates
            .into_iter()
            .filter(|w| rings.rings.iter().all(|r| r.semigroup.contains(w))),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerComparison {
    /// `matrix[i][j]` is `None` when the rings at `i` and `j` agree at the
    /// bound, else a generator of one missing from the other.
    pub matrix: Vec<Vec<Option<Weight>>>,
}

impl CornerComparison {
    pub fn all_equal(&self) -> bool {
        self.matrix.iter().flatten().all(Option::is_none)
    }

    /// The first differing pair with its witness.
    pub fn first_difference(&self) -> Option<(VertexId, VertexId, &Weight)> {
        self.matrix.iter().enumerate().find_map(|(i, row)| {
            row.iter()
                .enumerate()
                .find_map(|(j, w)| w.as_ref().map(|w| (VertexId(i), VertexId(j), w)))
        })
    }
}

/// Pairwise equality of corner semigroups.
#[allow(clippy::needless_range_loop)]
pub fn compare_corner_rings(rings: &CornerRings) -> CornerComparison {
    let n = rings.rings.len();
    let mut matrix = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = rings.rings[i].semigroup.compare(&rings.rings[j].semigroup).err();
            matrix[i][j] = d.clone();
            matrix[j][i] = d;
        }
    }
    CornerComparison { matrix }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RsVerdict {
    EqualAtBound,
    Differ,
    /// The two checks disagree; raise the bounds.
    Inconclusive,
}

/// An `S` generator absent from the corner ring at `vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsWitness {
    pub generator: Weight,
    pub winding: Winding,
    pub vertex: VertexId,
    pub cycle: Vec<ArrowId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsReport {
    pub verdict: RsVerdict,
    pub bounds: Bounds,
    /// From the membership check.
    pub membership_witness: Option<RsWitness>,
    /// A (winding, vertex) with no sigma-reduced cycle within bounds.
    pub missing_sigma_reduced: Option<(Winding, VertexId)>,
}

/// Decides `R = S` at the bound in two ways: every generator of `S` lies in
/// every corner ring, and every vertex carries a sigma-reduced cycle in the
/// winding of every generator of `S`.
pub fn check_r_equals_s(rings: &CornerRings) -> RsReport {
    let s = cycle_algebra(rings);
    let mut membership_witness = None;
    let mut missing = None;
    'outer: for g in s.generators() {
        let cycle = rings.witness(g).expect("generators come from cycles");
        for r in &rings.rings {
            if membership_witness.is_none() && !r.semigroup.contains(g) {
                membership_witness = Some(RsWitness {
                    generator: g.clone(),
                    winding: cycle.winding(),
                    vertex: r.vertex,
                    cycle: cycle.arrows().to_vec(),
                });
            }
            if missing.is_none() && !r.sigma_reduced_windings.contains(&cycle.winding()) {
                missing = Some((cycle.winding(), r.vertex));
            }
            if membership_witness.is_some() && missing.is_some() {
                break 'outer;
            }
        }
    }
    let verdict = match (membership_witness.is_some(), missing.is_some()) {
        (false, false) => RsVerdict::EqualAtBound,
        (true, true) => RsVerdict::Differ,
        _ => RsVerdict::Inconclusive,
    };
    RsReport {
        verdict,
        bounds: rings.bounds,
        membership_witness,
        missing_sigma_reduced: missing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::matchings::MatchingTable;
    use crate::paths::{enumerate_cycles, DEFAULT_PATH_CAP};

    fn tau(q: &DimerQuiver) -> WeightMap {
        WeightMap::tau(q, &MatchingTable::compute(q).unwrap())
    }

    fn w(v: &[u32]) -> Weight {
        Weight::from_vec(v.to_vec())
    }

    fn unit_vectors(n: usize) -> Vec<Weight> {
        (0..n)
            .rev()
            .map(|k| {
                let mut v = vec![0; n];
                v[k] = 1;
                Weight::from_vec(v)
            })
            .collect()
    }

    #[test]
    fn bounds_overrides() {
        let q = corpus::hexagon();
        let b = Bounds::standard(&q, 3);
        assert_eq!(
            b,
            Bounds {
                max_len: 6,
                max_winding: 2,
                degree: 9
            }
        );
        let o = b.with_overrides("degree=4, max_len=3").unwrap();
        assert_eq!((o.max_len, o.max_winding, o.degree), (3, 2, 4));
        assert!(b.with_overrides("depth=3").is_err());
        assert!(b.with_overrides("degree").is_err());
        assert!(b.with_overrides("max_winding=-1").is_err());
        assert_eq!(b.with_overrides("").unwrap(), b);
        assert_eq!(b.to_string(), "max_len=6,max_winding=2,degree=9");
    }

    #[test]
    fn membership_is_coin_problem() {
        let s = MonomialSemigroup::from_elements(2, 10, [w(&[2, 0]), w(&[0, 1]), w(&[3, 0]), w(&[4, 0])]);
        assert_eq!(s.generators(), [w(&[0, 1]), w(&[2, 0]), w(&[3, 0])]);
        assert!(s.contains(&w(&[5, 2])));
        assert!(!s.contains(&w(&[1, 3])));
        assert!(s.contains(&w(&[0, 0])));
        assert!(!s.contains(&w(&[1])));
        let members = s.members_up_to(3);
        assert_eq!(members.len(), 7);
        assert!(members.iter().all(|m| s.contains(m)));
    }

    #[test]
    fn hexagon_corner_ring_is_free() {
        let q = corpus::hexagon();
        for d in 3..=5 {
            let b = Bounds {
                max_len: 6,
                max_winding: 2,
                degree: d,
            };
            let ring = corner_semigroup(&q, &tau(&q), VertexId(0), b).unwrap();
            assert_eq!(ring.semigroup.generators(), unit_vectors(3));
        }
    }

    #[test]
    fn conifold_corner_rings() {
        let q = corpus::conifold();
        let t = tau(&q);
        let rings = CornerRings::compute(&q, &t, Bounds::standard(&q, 4)).unwrap();
        let expect = [w(&[0, 1, 0, 1]), w(&[0, 1, 1, 0]), w(&[1, 0, 0, 1]), w(&[1, 0, 1, 0])];
        for r in &rings.rings {
            assert_eq!(r.semigroup.generators(), expect);
        }
        assert!(compare_corner_rings(&rings).all_equal());
        // the semigroup is {v : v_a1 + v_a2 = v_b1 + v_b2}
        let s = cycle_algebra(&rings);
        for a in 0..4u32 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = w(&[a, b, c, d]);
                        assert_eq!(s.contains(&v), a + b == c + d, "{v}");
                    }
                }
            }
        }
        let rs = check_r_equals_s(&rings);
        assert_eq!(rs.verdict, RsVerdict::EqualAtBound);
        assert_eq!(homotopy_center(&rings), s);
    }

    #[test]
    fn zero_length_bound_gives_trivial_semigroup() {
        for entry in corpus::entries() {
            let q = entry.quiver();
            let t = tau(&q);
            let b = Bounds {
                max_len: 0,
                max_winding: 2,
                degree: 9,
            };
            for v in q.vertices() {
                let r = corner_semigroup(&q, &t, v, b).unwrap();
                assert!(r.semigroup.generators().is_empty());
                assert_eq!(r.elements.len(), 1);
            }
        }
    }

    #[test]
    fn elements_match_cycle_enumeration() {
        for entry in corpus::entries() {
            let q = entry.quiver();
            let t = tau(&q);
            let b = Bounds {
                max_len: 5,
                max_winding: 1,
                degree: 100,
            };
            for v in q.vertices() {
                let ring = corner_semigroup(&q, &t, v, b).unwrap();
                let mut expect = BTreeSet::new();
                for u1 in -1..=1 {
                    for u2 in -1..=1 {
                        for c in enumerate_cycles(&q, v, Winding::new(u1, u2), 5, DEFAULT_PATH_CAP).unwrap() {
                            expect.insert(t.weight(&c));
                        }
                    }
                }
                let got: BTreeSet<Weight> = ring.elements.keys().cloned().collect();
                assert_eq!(got, expect, "{} at {}", entry.name, v.0);
                for (wt, cycle) in &ring.elements {
                    assert_eq!(&t.weight(cycle), wt);
                    assert!(cycle.is_cycle() && cycle.tail() == v);
                }
            }
        }
    }

    #[test]
    fn sigma_lies_in_every_corner_ring() {
        for entry in corpus::entries() {
            let q = entry.quiver();
            let t = tau(&q);
            if t.dim() == 0 {
                continue;
            }
            let rings = CornerRings::compute(&q, &t, Bounds::standard(&q, t.dim())).unwrap();
            for r in &rings.rings {
                assert!(r.semigroup.contains(&Weight::sigma(t.dim())), "{}", entry.name);
            }
            let center = homotopy_center(&rings);
            for g in center.generators() {
                assert!(rings.rings.iter().all(|r| r.semigroup.contains(g)));
            }
        }
    }

    #[test]
    fn larger_bounds_only_grow() {
        let q = corpus::figure_one();
        let t = tau(&q);
        let small = Bounds {
            max_len: 6,
            max_winding: 1,
            degree: 4,
        };
        let large = Bounds {
            max_len: 9,
            max_winding: 2,
            degree: 6,
        };
        for v in q.vertices() {
            let a = corner_semigroup(&q, &t, v, small).unwrap();
            let b = corner_semigroup(&q, &t, v, large).unwrap();
            assert_eq!(a.semigroup.first_missing_from(&b.semigroup), None);
        }
    }

    #[test]
    fn state_cap_is_enforced() {
        let q = corpus::conifold();
        let err = corner_semigroup_capped(&q, &tau(&q), VertexId(0), Bounds::standard(&q, 4), 5).unwrap_err();
        assert_eq!(err, AlgebraError::TooManyStates(5));
    }
}
