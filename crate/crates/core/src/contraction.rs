//! Arrow contractions `psi: A -> A'` and cyclic-contraction search.
//!
//! Contracting an acyclic arrow set merges the endpoints of each contracted
//! arrow. Every merged class keeps its smallest source vertex id, and target
//! vertices are then numbered densely in that order. Target arrows keep
//! their source names, so paths map by deleting contracted arrows.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebras::{cycle_algebra, AlgebraError, Bounds, CornerRings};
use crate::matchings::{MatchingError, MatchingTable};
use crate::model::{validate, ArrowId, ArrowSpec, DimerQuiver, FaceId, FaceSign, ModelError, VertexId, Winding};
use crate::paths::{complement_pairs, DimerAlgebra, Equality, PathError, PathWord, Weight, WeightMap};

pub const DEFAULT_CANDIDATE_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractionError {
    #[error("contracted arrows contain a cycle through `{0}`")]
    CycleContracted(String),
    #[error("face {} has no arrows left", .0 .0)]
    FaceCollapsed(FaceId),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("contracted quiver is not a dimer quiver: {0}")]
    InvalidTarget(String),
    #[error("contraction file disagrees with the recomputed maps: {0}")]
    MapMismatch(String),
    #[error("contraction file: {0}")]
    Json(String),
    #[error("2-cycle face {} cannot be removed: {reason}", .face.0)]
    TwoCycle { face: FaceId, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    Unverified,
    RelationsOk,
    CyclicAtBound,
}

#[derive(Clone, Debug)]
pub struct Contraction {
    source: DimerQuiver,
    contracted: BTreeSet<ArrowId>,
    target: DimerQuiver,
    vertex_map: Vec<VertexId>,
    arrow_map: Vec<Option<ArrowId>>,
    status: Verification,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi] = lo;
        true
    }
}

/// Contracts `arrows` to vertices.
pub fn contract(q: &DimerQuiver, arrows: &BTreeSet<ArrowId>) -> Result<Contraction, ContractionError> {
    let n = q.vertex_count();
    let mut uf = UnionFind((0..n).collect());
    for &a in arrows {
        let arrow = q.arrow(a);
        if !uf.union(arrow.tail.0, arrow.head.0) {
            return Err(ContractionError::CycleContracted(arrow.name.clone()));
        }
    }
    // union-by-min keeps the smallest id as root
    let roots: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
    let mut dense = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if roots[v] == v {
            dense[v] = next;
            next += 1;
        }
    }
    let vertex_map: Vec<VertexId> = roots.iter().map(|&r| VertexId(dense[r])).collect();

    // offset of each vertex's lift from its class root
    let mut offset = vec![Winding::ZERO; n];
    let mut placed = vec![false; n];
    let mut adjacency: Vec<Vec<(usize, Winding)>> = vec![Vec::new(); n];
    for &a in arrows {
        let arrow = q.arrow(a);
        adjacency[arrow.tail.0].push((arrow.head.0, arrow.winding));
        adjacency[arrow.head.0].push((arrow.tail.0, -arrow.winding));
    }
    for v in 0..n {
        if roots[v] != v {
            continue;
        }
        placed[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &(y, w) in &adjacency[x] {
                if !placed[y] {
                    placed[y] = true;
                    offset[y] = offset[x] + w;
                    queue.push_back(y);
                }
            }
        }
    }

    let mut arrow_map = vec![None; q.arrows().len()];
    let mut specs = Vec::new();
    for a in q.arrows() {
        if arrows.contains(&a.id) {
            continue;
        }
        arrow_map[a.id.0] = Some(ArrowId(specs.len()));
        let w = a.winding + offset[a.tail.0] - offset[a.head.0];
        specs.push(ArrowSpec::new(
            a.name.clone(),
            vertex_map[a.tail.0].0,
            vertex_map[a.head.0].0,
            (w.u1, w.u2),
        ));
    }
    let mut faces = Vec::with_capacity(q.faces().len());
    for f in q.faces() {
        let boundary: Vec<ArrowId> = f.boundary.iter().filter_map(|a| arrow_map[a.0]).collect();
        if boundary.is_empty() {
            return Err(ContractionError::FaceCollapsed(f.id));
        }
        faces.push((f.sign, boundary));
    }
    let mut target = DimerQuiver::new(next, specs, faces)?;
    if let Some(pos) = q.positions() {
        let kept = (0..n).filter(|&v| roots[v] == v).map(|v| pos[v]).collect();
        target = target.with_positions(kept)?;
    }
    let report = validate(&target);
    if !report.valid {
        let failed: Vec<&str> = report.failed().map(|i| i.name()).collect();
        return Err(ContractionError::InvalidTarget(failed.join(", ")));
    }
    Ok(Contraction {
        source: q.clone(),
        contracted: arrows.clone(),
        target,
        vertex_map,
        arrow_map,
        status: Verification::Unverified,
    })
}

/// Contracts arrows given by name.
pub fn contract_names(q: &DimerQuiver, names: &[impl AsRef<str>]) -> Result<Contraction, ContractionError> {
    let set = names
        .iter()
        .map(|n| {
            q.arrow_by_name(n.as_ref())
                .ok_or_else(|| ContractionError::UnknownArrow(n.as_ref().to_string()))
        })
        .collect::<Result<BTreeSet<_>, _>>()?;
    contract(q, &set)
}

/// The identity contraction.
pub fn identity(q: &DimerQuiver) -> Contraction {
    contract(q, &BTreeSet::new()).expect("identity contraction of a valid quiver")
}

impl Contraction {
    pub fn source(&self) -> &DimerQuiver {
        &self.source
    }

    pub fn target(&self) -> &DimerQuiver {
        &self.target
    }

    pub fn contracted(&self) -> &BTreeSet<ArrowId> {
        &self.contracted
    }

    pub fn contracted_names(&self) -> Vec<String> {
        self.contracted.iter().map(|a| self.source.arrow(*a).name.clone()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.contracted.is_empty()
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn arrow_image(&self, a: ArrowId) -> Option<ArrowId> {
        self.arrow_map[a.0]
    }

    pub fn status(&self) -> Verification {
        self.status
    }

    /// Redirects the image of `a`; used to build negative controls.
    pub fn set_arrow_image(&mut self, a: ArrowId, image: Option<ArrowId>) {
        self.arrow_map[a.0] = image;
        self.status = Verification::Unverified;
    }

    /// `psi(p)`: contracted arrows dropped, the rest renamed.
    pub fn map_path(&self, p: &PathWord) -> Result<PathWord, PathError> {
        let arrows = p.arrows().iter().filter_map(|a| self.arrow_map[a.0]).collect();
        PathWord::new(&self.target, self.vertex_map[p.tail().0], arrows)
    }

    /// Weights over the target's simple matchings pulled back along psi;
    /// contracted arrows weigh zero.
    pub fn tau_psi(&self, target_table: &MatchingTable) -> WeightMap {
        let tau = WeightMap::tau(&self.target, target_table);
        let per_arrow = self
            .source
            .arrows()
            .iter()
            .map(|a| match self.arrow_map[a.id.0] {
                Some(b) => tau.arrow(b).clone(),
                None => Weight::zeros(tau.dim()),
            })
            .collect();
        WeightMap::from_arrow_weights(tau.dim(), per_arrow)
    }

    /// Checks that every source relation holds in the target.
    pub fn verify_relations(&mut self) -> Result<RelationCheck, MatchingError> {
        let alg = DimerAlgebra::new(&self.target)?;
        let mut failures = Vec::new();
        for (a, plus, minus) in complement_pairs(&self.source) {
            let start = self.source.arrow(a).head;
            let images = PathWord::new(&self.source, start, plus)
                .and_then(|p| self.map_path(&p))
                .and_then(|p| Ok((p, self.map_path(&PathWord::new(&self.source, start, minus)?)?)));
            let verdict = match images {
                Ok((p, r)) => alg.equal_mod_i(&p, &r),
                Err(_) => Equality::Distinct {
                    reason: crate::paths::DistinctReason::EndpointsDiffer,
                },
            };
            if !verdict.is_equal() {
                failures.push(RelationFailure {
                    arrow: self.source.arrow(a).name.clone(),
                    verdict,
                });
            }
        }
        if failures.is_empty() && self.status == Verification::Unverified {
            self.status = Verification::RelationsOk;
        }
        Ok(RelationCheck { failures })
    }

    /// Decides whether psi is cyclic: relations hold, no contracted arrow
    /// lies in a simple matching, the target is cancellative, and the
    /// target's cycle semigroup is reached by source cycles within bounds.
    pub fn verify_cyclic(&mut self, bounds: Option<Bounds>) -> Result<CyclicVerdict, VerifyError> {
        let relations = self.verify_relations()?;
        if let Some(f) = relations.failures.first() {
            return Ok(CyclicVerdict::NotCyclic {
                reason: NotCyclic::RelationFails { arrow: f.arrow.clone() },
            });
        }
        let source_table = MatchingTable::compute(&self.source)?;
        let qs = source_table.qs_arrows(&self.source);
        let bad: Vec<String> = self
            .contracted
            .iter()
            .filter(|a| !qs.contains(a))
            .map(|a| self.source.arrow(*a).name.clone())
            .collect();
        if !bad.is_empty() {
            return Ok(CyclicVerdict::NotCyclic {
                reason: NotCyclic::ContractsSimpleMatchingArrow { arrows: bad },
            });
        }
        let target_table = MatchingTable::compute(&self.target)?;
        let uncovered = target_table.uncovered_arrows(&self.target);
        if !uncovered.is_empty() || target_table.perfect.is_empty() {
            return Ok(CyclicVerdict::NotCyclic {
                reason: NotCyclic::TargetDegenerate {
                    arrows: self.target.arrow_names(&uncovered),
                },
            });
        }
        let target_qs: Vec<ArrowId> = target_table.qs_arrows(&self.target).into_iter().collect();
        if !target_qs.is_empty() {
            return Ok(CyclicVerdict::NotCyclic {
                reason: NotCyclic::TargetNotCancellative {
                    arrows: self.target.arrow_names(&target_qs),
                },
            });
        }
        let tau_psi = self.tau_psi(&target_table);
        let bounds = match bounds {
            Some(b) => b,
            None => Bounds::for_quiver(&self.source, tau_psi.dim())?,
        };
        let target_tau = WeightMap::tau(&self.target, &target_table);
        let s_target = cycle_algebra(&CornerRings::compute(&self.target, &target_tau, bounds)?);
        let s_source = cycle_algebra(&CornerRings::compute(&self.source, &tau_psi, bounds)?);
        if let Some(generator) = s_target.first_missing_from(&s_source) {
            return Ok(CyclicVerdict::Inconclusive { generator, bounds });
        }
        self.status = Verification::CyclicAtBound;
        Ok(CyclicVerdict::CyclicAtBound { bounds })
    }

    pub fn to_file(&self) -> ContractionFile {
        ContractionFile {
            contracted: self.contracted_names(),
            vertex_map: Some(self.vertex_map.iter().map(|v| v.0).collect()),
            arrow_map: Some(
                self.source
                    .arrows()
                    .iter()
                    .filter_map(|a| self.arrow_map[a.id.0].map(|b| (a.name.clone(), self.target.arrow(b).name.clone())))
                    .collect(),
            ),
        }
    }

    /// Rebuilds a contraction of `q` from a file, checking any stored maps.
    pub fn from_file(q: &DimerQuiver, file: &ContractionFile) -> Result<Contraction, ContractionError> {
        let c = contract_names(q, &file.contracted)?;
        let expect = c.to_file();
        if file.vertex_map.as_ref().is_some_and(|m| Some(m) != expect.vertex_map.as_ref()) {
            return Err(ContractionError::MapMismatch("vertex_map".into()));
        }
        if file.arrow_map.as_ref().is_some_and(|m| Some(m) != expect.arrow_map.as_ref()) {
            return Err(ContractionError::MapMismatch("arrow_map".into()));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFailure {
    pub arrow: String,
    pub verdict: Equality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub failures: Vec<RelationFailure>,
}

impl RelationCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "reason")]
pub enum NotCyclic {
    RelationFails { arrow: String },
    ContractsSimpleMatchingArrow { arrows: Vec<String> },
    TargetDegenerate { arrows: Vec<String> },
    TargetNotCancellative { arrows: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum CyclicVerdict {
    CyclicAtBound { bounds: Bounds },
    NotCyclic { reason: NotCyclic },
    /// A generator of the target's cycle semigroup was not realized by a
    /// source cycle within bounds.
    Inconclusive { generator: Weight, bounds: Bounds },
}

impl CyclicVerdict {
    pub fn is_cyclic(&self) -> bool {
        matches!(self, CyclicVerdict::CyclicAtBound { .. })
    }
}

/// Arrow subsets of `pool` by decreasing size, lexicographic within a size.
fn subsets_by_size(pool: &[ArrowId]) -> impl Iterator<Item = Vec<ArrowId>> + '_ {
    (0..=pool.len()).rev().flat_map(move |k| Combinations::new(pool.len(), k).map(|idx| idx.iter().map(|&i| pool[i]).collect()))
}

struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        match (0..k).rev().find(|&i| self.idx[i] < self.n - k + i) {
            Some(i) => {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Verified contractions in search order.
    pub found: Vec<Contraction>,
    pub candidates_tried: usize,
    /// Candidates whose verification hit a bound.
    pub inconclusive: usize,
    /// True when the candidate limit stopped the search.
    pub truncated: bool,
}

/// The first cyclic contraction in search order; the identity when `q` is
/// cancellative. `None` is not a proof of nonexistence.
pub fn find_cyclic_contraction(q: &DimerQuiver, bounds: Option<Bounds>) -> Result<Option<Contraction>, VerifyError> {
    Ok(search(q, bounds, DEFAULT_CANDIDATE_LIMIT, true)?.found.into_iter().next())
}

/// Every cyclic contraction among the first `limit` candidates.
pub fn find_cyclic_contractions(q: &DimerQuiver, bounds: Option<Bounds>, limit: usize) -> Result<SearchOutcome, VerifyError> {
    search(q, bounds, limit, false)
}

fn search(q: &DimerQuiver, bounds: Option<Bounds>, limit: usize, first_only: bool) -> Result<SearchOutcome, VerifyError> {
    let table = MatchingTable::compute(q)?;
    let pool: Vec<ArrowId> = table.qs_arrows(q).into_iter().collect();
    let mut outcome = SearchOutcome {
        found: Vec::new(),
        candidates_tried: 0,
        inconclusive: 0,
        truncated: false,
    };
    if pool.is_empty() {
        let mut id = identity(q);
        if id.verify_cyclic(bounds)?.is_cyclic() {
            outcome.found.push(id);
        }
        outcome.candidates_tried = 1;
        return Ok(outcome);
    }
    for subset in subsets_by_size(&pool) {
        if subset.is_empty() {
            break;
        }
        if outcome.candidates_tried >= limit {
            outcome.truncated = true;
            break;
        }
        outcome.candidates_tried += 1;
        let Ok(mut c) = contract(q, &subset.into_iter().collect()) else {
            continue;
        };
        match c.verify_cyclic(bounds)? {
            CyclicVerdict::CyclicAtBound { .. } => {
                outcome.found.push(c);
                if first_only {
                    break;
                }
            }
            CyclicVerdict::Inconclusive { .. } => outcome.inconclusive += 1,
            CyclicVerdict::NotCyclic { .. } => {}
        }
    }
    Ok(outcome)
}

/// On-disk form of a contraction: the contracted arrows by name, with the
/// vertex and arrow maps for reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionFile {
    pub contracted: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrow_map: Option<BTreeMap<String, String>>,
}

pub fn parse_contraction(text: &str) -> Result<ContractionFile, ContractionError> {
    serde_json::from_str(text).map_err(|e| ContractionError::Json(e.to_string()))
}

impl ContractionFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Removes one unit 2-cycle face `[a b]`: the two faces on the far sides of
/// `a` and `b` are merged into one and both arrows are deleted.
fn reduce_one(q: &DimerQuiver, face: FaceId) -> Result<DimerQuiver, ContractionError> {
    let f = q.face(face);
    let err = |reason: &str| ContractionError::TwoCycle {
        face,
        reason: reason.to_string(),
    };
    let (a, b) = (f.boundary[0], f.boundary[1]);
    if a == b {
        return Err(err("arrow repeated"));
    }
    let other = |x: ArrowId| {
        q.faces_of(x)
            .iter()
            .find(|(g, _)| *g != face)
            .copied()
            .ok_or_else(|| err("arrow lies on one face only"))
    };
    let (fa, pa) = other(a)?;
    let (fb, pb) = other(b)?;
    if fa == fb {
        return Err(err("both arrows share their other face"));
    }
    if q.face(fa).sign != q.face(fb).sign || q.face(fa).sign == f.sign {
        return Err(err("face signs do not alternate"));
    }
    // a P and b Q are the neighbouring faces; P Q is the merged one
    let p = &q.face_rotation(fa, pa)[1..];
    let r = &q.face_rotation(fb, pb)[1..];
    let merged: Vec<ArrowId> = p.iter().chain(r).copied().collect();
    if merged.is_empty() {
        return Err(err("merged face would be empty"));
    }
    let keep: Vec<ArrowId> = q.arrows().iter().map(|x| x.id).filter(|&x| x != a && x != b).collect();
    let mut renumber = vec![None; q.arrows().len()];
    for (new, old) in keep.iter().enumerate() {
        renumber[old.0] = Some(ArrowId(new));
    }
    let specs = keep
        .iter()
        .map(|&x| {
            let arrow = q.arrow(x);
            ArrowSpec::new(arrow.name.clone(), arrow.tail.0, arrow.head.0, (arrow.winding.u1, arrow.winding.u2))
        })
        .collect();
    let mut faces: Vec<(FaceSign, Vec<ArrowId>)> = Vec::new();
    for g in q.faces() {
        if g.id == face || g.id == fb {
            continue;
        }
        let boundary = if g.id == fa { &merged } else { &g.boundary };
        faces.push((g.sign, boundary.iter().map(|x| renumber[x.0].expect("kept arrow")).collect()));
    }
    let mut out = DimerQuiver::new(q.vertex_count(), specs, faces)?;
    if let Some(pos) = q.positions() {
        out = out.with_positions(pos.to_vec())?;
    }
    Ok(out)
}

/// Removes every unit 2-cycle, returning the names of the deleted arrows.
pub fn reduce_two_cycles(q: &DimerQuiver) -> Result<(DimerQuiver, Vec<String>), ContractionError> {
    let mut current = q.clone();
    let mut removed = Vec::new();
    while let Some(f) = current.faces().iter().find(|f| f.boundary.len() == 2) {
        removed.extend(current.arrow_names(&f.boundary));
        current = reduce_one(&current, f.id)?;
    }
    let report = validate(&current);
    if !report.valid {
        let failed: Vec<&str> = report.failed().map(|i| i.name()).collect();
        return Err(ContractionError::InvalidTarget(failed.join(", ")));
    }
    Ok((current, removed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn names(q: &DimerQuiver, ns: &[&str]) -> BTreeSet<ArrowId> {
        ns.iter().map(|n| q.arrow_by_name(n).unwrap()).collect()
    }

    #[test]
    fn green_arrow_contraction_shape() {
        let q = corpus::figure_one();
        let c = contract(&q, &names(&q, &["c"])).unwrap();
        let t = c.target();
        assert_eq!((t.vertex_count(), t.arrows().len(), t.faces().len()), (2, 8, 6));
        let two_cycles: Vec<Vec<String>> = t
            .faces()
            .iter()
            .filter(|f| f.boundary.len() == 2)
            .map(|f| t.arrow_names(&f.boundary))
            .collect();
        assert_eq!(two_cycles, vec![vec!["a", "k"], vec!["b", "e"]]);
        assert_eq!(validate(t).warnings.len(), 2);
        assert_eq!(c.vertex_image(VertexId(2)), VertexId(1));
        assert_eq!(c.arrow_image(q.arrow_by_name("c").unwrap()), None);
    }

    #[test]
    fn mapped_windings_are_offset_consistently() {
        let q = corpus::figure_one();
        let c = contract(&q, &names(&q, &["c", "d"])).unwrap();
        for f in q.faces() {
            let p = PathWord::from_arrows(&q, f.boundary.clone()).unwrap();
            let img = c.map_path(&p).unwrap();
            assert!(img.is_cycle());
            assert_eq!(img.winding(), Winding::ZERO);
        }
        for v in q.vertices() {
            for p in crate::paths::enumerate_paths(&q, Some(v), 4, 100_000).unwrap() {
                if p.is_cycle() {
                    assert_eq!(c.map_path(&p).unwrap().winding(), p.winding());
                }
            }
        }
    }

    #[test]
    fn identity_and_guards() {
        let hex = corpus::hexagon();
        let id = identity(&hex);
        assert!(id.is_trivial());
        assert_eq!(id.target().to_dimer_text(), hex.to_dimer_text());
        assert_eq!(
            contract(&hex, &names(&hex, &["x"])).unwrap_err(),
            ContractionError::CycleContracted("x".into())
        );
        let con = corpus::conifold();
        assert!(matches!(
            contract(&con, &names(&con, &["a1", "b1"])),
            Err(ContractionError::CycleContracted(_))
        ));
        assert_eq!(
            contract_names(&con, &["zz"]).unwrap_err(),
            ContractionError::UnknownArrow("zz".into())
        );
    }

    #[test]
    fn relations_survive_contraction() {
        let q = corpus::figure_one();
        let mut c = contract(&q, &names(&q, &["c"])).unwrap();
        assert!(c.verify_relations().unwrap().ok());
        assert_eq!(c.status(), Verification::RelationsOk);
        assert!(identity(&corpus::hexagon()).verify_relations().unwrap().ok());
    }

    #[test]
    fn corrupted_arrow_map_breaks_relations() {
        let q = corpus::figure_one();
        let mut c = contract(&q, &names(&q, &["c"])).unwrap();
        let f = q.arrow_by_name("f").unwrap();
        let g_image = c.arrow_image(q.arrow_by_name("g").unwrap());
        c.set_arrow_image(f, g_image);
        let check = c.verify_relations().unwrap();
        assert!(!check.ok());
        assert_eq!(c.status(), Verification::Unverified);
    }

    #[test]
    fn green_arrow_contraction_is_cyclic() {
        let q = corpus::figure_one();
        let mut c = contract(&q, &names(&q, &["c"])).unwrap();
        let v = c.verify_cyclic(None).unwrap();
        assert!(v.is_cyclic(), "{v:?}");
        assert_eq!(c.status(), Verification::CyclicAtBound);
    }

    #[test]
    fn simple_matching_arrow_is_not_contractible() {
        let q = corpus::conifold();
        let mut c = contract(&q, &names(&q, &["a1"])).unwrap();
        assert_eq!(
            c.verify_cyclic(None).unwrap(),
            CyclicVerdict::NotCyclic {
                reason: NotCyclic::ContractsSimpleMatchingArrow {
                    arrows: vec!["a1".into()]
                }
            }
        );
    }

    #[test]
    fn identity_is_cyclic_iff_cancellative() {
        for entry in corpus::entries() {
            let q = entry.quiver();
            let fixture = entry.fixture();
            let cyclic = identity(&q).verify_cyclic(None).unwrap().is_cyclic();
            assert_eq!(cyclic, fixture.cancellative == Some(true), "{}", entry.name);
        }
    }

    #[test]
    fn search_finds_identity_or_a_verified_contraction() {
        let hex = corpus::hexagon();
        assert!(find_cyclic_contraction(&hex, None).unwrap().unwrap().is_trivial());
        let q = corpus::figure_one();
        let found = find_cyclic_contraction(&q, None).unwrap().unwrap();
        assert!(!found.is_trivial());
        let qs = MatchingTable::compute(&q).unwrap().qs_arrows(&q);
        assert!(found.contracted().is_subset(&qs));
        assert_eq!(found.status(), Verification::CyclicAtBound);
    }

    #[test]
    fn combinations_in_order() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(2, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        let pool = [ArrowId(3), ArrowId(5)];
        let order: Vec<Vec<ArrowId>> = subsets_by_size(&pool).collect();
        assert_eq!(order, vec![vec![ArrowId(3), ArrowId(5)], vec![ArrowId(3)], vec![ArrowId(5)], vec![]]);
    }

    #[test]
    fn file_round_trip() {
        let q = corpus::figure_one();
        let c = contract(&q, &names(&q, &["c"])).unwrap();
        let file = c.to_file();
        let text = file.to_json();
        let back = parse_contraction(&text).unwrap();
        assert_eq!(back, file);
        let again = Contraction::from_file(&q, &back).unwrap();
        assert_eq!(again.target().to_dimer_text(), c.target().to_dimer_text());
        let bare = parse_contraction(r#"{"contracted":["c"]}"#).unwrap();
        assert!(Contraction::from_file(&q, &bare).is_ok());
        let mut wrong = file.clone();
        wrong.vertex_map = Some(vec![0, 0, 0]);
        assert_eq!(
            Contraction::from_file(&q, &wrong).unwrap_err(),
            ContractionError::MapMismatch("vertex_map".into())
        );
        assert!(matches!(parse_contraction("{"), Err(ContractionError::Json(_))));
        assert!(matches!(parse_contraction(r#"{"contracted":[],"x":1}"#), Err(ContractionError::Json(_))));
    }

    #[test]
    fn two_cycle_reduction() {
        let q = corpus::figure_one();
        let c = contract(&q, &names(&q, &["c"])).unwrap();
        let (reduced, removed) = reduce_two_cycles(c.target()).unwrap();
        assert_eq!(removed, vec!["a", "k", "b", "e"]);
        assert_eq!((reduced.vertex_count(), reduced.arrows().len(), reduced.faces().len()), (2, 4, 2));
        let report = validate(&reduced);
        assert!(report.valid && report.warnings.is_empty(), "{report:?}");
        let hex = corpus::hexagon();
        let (same, none) = reduce_two_cycles(&hex).unwrap();
        assert!(none.is_empty());
        assert_eq!(same.to_dimer_text(), hex.to_dimer_text());
    }
}
