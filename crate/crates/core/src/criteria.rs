//! Cancellativity, its witnesses, and the report over the ten equivalent
//! conditions characterizing it.
//!
//! Cancellativity is decided exactly: a nondegenerate dimer algebra is
//! cancellative iff every arrow lies in a simple matching. Pair search and
//! nonnoetherian witnesses are bounded and only ever produce evidence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebras::{
    check_r_equals_s, compare_corner_rings, homotopy_center, AlgebraError, Bounds, CornerRings, RsVerdict,
};
use crate::contraction::{self, Contraction, CyclicVerdict, VerifyError};
use crate::matchings::{simple_module_from_matching, support_path, MatchingError, MatchingTable};
use crate::model::{ArrowId, DimerQuiver, FaceSign, VertexId, Winding};
use crate::paths::{
    enumerate_paths, DimerAlgebra, DistinctReason, Equality, PathError, PathWord, RewriteStep, Weight,
    DEFAULT_PATH_CAP,
};

pub const DEFAULT_PAIR_MAX_LEN: usize = 4;
/// Longest multiplier tried for a non-cancellative pair.
pub const MULTIPLIER_MAX_LEN: usize = 2;
/// Largest sigma exponent tried for the nonnoetherian chain.
pub const SIGMA_EXPONENT_LIMIT: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("quiver is degenerate: arrows {0:?} lie in no perfect matching")]
    Degenerate(Vec<String>),
    #[error("{0}")]
    NotApplicable(String),
    #[error("conditions disagree: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

fn nondegenerate_table(q: &DimerQuiver) -> Result<MatchingTable, CriteriaError> {
    let table = MatchingTable::compute(q)?;
    let uncovered = table.uncovered_arrows(q);
    if !uncovered.is_empty() {
        return Err(CriteriaError::Degenerate(q.arrow_names(&uncovered)));
    }
    Ok(table)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellativeCertificate {
    pub cancellative: bool,
    /// Each arrow with a simple matching containing it.
    pub covering: BTreeMap<String, Vec<String>>,
    /// Arrows in no simple matching.
    pub uncovered: Vec<String>,
}

/// Decides cancellativity of a nondegenerate quiver.
pub fn check_cancellative(q: &DimerQuiver) -> Result<CancellativeCertificate, CriteriaError> {
    let table = nondegenerate_table(q)?;
    let cover = table.covering_simple(q);
    let mut covering = BTreeMap::new();
    let mut uncovered = Vec::new();
    for a in q.arrows() {
        match cover[a.id.0] {
            Some(d) => {
                covering.insert(a.name.clone(), table.perfect[d].names(q));
            }
            None => uncovered.push(a.name.clone()),
        }
    }
    Ok(CancellativeCertificate {
        cancellative: uncovered.is_empty(),
        covering,
        uncovered,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `r p = r q`: the multiplier is applied after the pair.
    Left,
    /// `p r = q r`: the multiplier is applied first.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplier {
    pub side: Side,
    pub r: Vec<String>,
    /// Rewrites turning the first product into the second.
    pub chain: Vec<RewriteStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoncancellativeWitness {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub tail: VertexId,
    pub head: VertexId,
    pub winding: Winding,
    pub eta: Weight,
    pub distinct: DistinctReason,
    pub multiplier: Option<Multiplier>,
}

fn candidate_pairs(alg: &DimerAlgebra, max_len: usize) -> Result<Vec<(PathWord, PathWord, DistinctReason)>, PathError> {
    let q = alg.quiver();
    let mut groups: BTreeMap<(VertexId, VertexId, Winding, Weight), Vec<PathWord>> = BTreeMap::new();
    for p in enumerate_paths(q, None, max_len, DEFAULT_PATH_CAP)? {
        if p.is_empty() {
            continue;
        }
        groups
            .entry((p.tail(), p.head(), p.winding(), alg.eta_weight(&p)))
            .or_default()
            .push(p);
    }
    let mut pairs = Vec::new();
    for members in groups.into_values() {
        if members.len() < 2 {
            continue;
        }
        // split into classes; members are already in canonical order
        let mut reps: Vec<PathWord> = Vec::new();
        let mut remaining = members;
        let mut class_sizes = Vec::new();
        while let Some(seed) = remaining.first().cloned() {
            let Ok(class) = alg.eq_class(&seed) else {
                break;
            };
            class_sizes.push(class.len());
            remaining.retain(|m| !class.contains(m));
            reps.push(seed);
        }
        for k in 1..reps.len() {
            pairs.push((
                reps[0].clone(),
                reps[k].clone(),
                DistinctReason::ClassExhausted {
                    class_size: class_sizes[0],
                },
            ));
        }
    }
    pairs.sort_by(|a, b| {
        (a.0.len().max(a.1.len()), a.0.len() + a.1.len(), &a.0, &a.1).cmp(&(
            b.0.len().max(b.1.len()),
            b.0.len() + b.1.len(),
            &b.0,
            &b.1,
        ))
    });
    Ok(pairs)
}

fn find_multiplier(alg: &DimerAlgebra, p: &PathWord, r: &PathWord, len: usize) -> Result<Option<Multiplier>, PathError> {
    let q = alg.quiver();
    for m in enumerate_paths(q, Some(p.head()), len, DEFAULT_PATH_CAP)? {
        if m.len() != len {
            continue;
        }
        if let Equality::Equal { chain } = alg.equal_mod_i(&p.then(&m)?, &r.then(&m)?) {
            return Ok(Some(Multiplier {
                side: Side::Left,
                r: q.arrow_names(m.arrows()),
                chain,
            }));
        }
    }
    for m in enumerate_paths(q, None, len, DEFAULT_PATH_CAP)? {
        if m.len() != len || m.head() != p.tail() {
            continue;
        }
        if let Equality::Equal { chain } = alg.equal_mod_i(&m.then(p)?, &m.then(r)?) {
            return Ok(Some(Multiplier {
                side: Side::Right,
                r: q.arrow_names(m.arrows()),
                chain,
            }));
        }
    }
    Ok(None)
}

/// Searches paths up to `max_len` for a certified non-cancellative pair,
/// preferring short pairs with a short multiplier. `None` only means none
/// was found at this bound.
pub fn find_noncancellative_pair(q: &DimerQuiver, max_len: usize) -> Result<Option<NoncancellativeWitness>, CriteriaError> {
    let table = nondegenerate_table(q)?;
    let alg = DimerAlgebra::with_table(q, table);
    let pairs = candidate_pairs(&alg, max_len)?;
    let make = |p: &PathWord, r: &PathWord, reason: &DistinctReason, multiplier| NoncancellativeWitness {
        p: q.arrow_names(p.arrows()),
        q: q.arrow_names(r.arrows()),
        tail: p.tail(),
        head: p.head(),
        winding: p.winding(),
        eta: alg.eta_weight(p),
        distinct: reason.clone(),
        multiplier,
    };
    for len in 1..=MULTIPLIER_MAX_LEN {
        for (p, r, reason) in &pairs {
            if let Some(m) = find_multiplier(&alg, p, r, len)? {
                return Ok(Some(make(p, r, reason, Some(m))));
            }
        }
    }
    Ok(pairs.first().map(|(p, r, reason)| make(p, r, reason, None)))
}

/// Re-checks a witness from scratch.
pub fn verify_pair(q: &DimerQuiver, w: &NoncancellativeWitness) -> Result<bool, CriteriaError> {
    let alg = DimerAlgebra::new(q)?;
    fn names(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    let p = PathWord::from_names(q, &names(&w.p))?;
    let r = PathWord::from_names(q, &names(&w.q))?;
    if alg.eta_weight(&p) != alg.eta_weight(&r) || alg.eta_weight(&p) != w.eta {
        return Ok(false);
    }
    if !alg.equal_mod_i(&p, &r).is_distinct() {
        return Ok(false);
    }
    if let Some(m) = &w.multiplier {
        let s = PathWord::from_names(q, &names(&m.r))?;
        let (x, y) = match m.side {
            Side::Left => (p.then(&s)?, r.then(&s)?),
            Side::Right => (s.then(&p)?, s.then(&r)?),
        };
        // replay the recorded chain
        let mut cur = x;
        for step in &m.chain {
            match alg.rewrite_system().apply(q, &cur, *step) {
                Some(next) => cur = next,
                None => return Ok(false),
            }
        }
        if cur != y {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum SigmaExponent {
    /// Smallest `N` with `p sigma^N` in the corner ring at `j`.
    Found { n: u32 },
    /// Exists by theory; not found up to the search limit.
    NotComputed { searched_up_to: u32 },
}

/// A sigma-reduced cycle `p` at `vertex` whose weight misses the corner
/// ring at `missing_at`; its powers then miss it too, and the ideals
/// generated by `p^n sigma^N` form a strictly ascending chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonnoetherianWitness {
    pub vertex: VertexId,
    pub cycle: Vec<String>,
    pub winding: Winding,
    pub weight: Weight,
    pub missing_at: VertexId,
    /// Powers `p^n` checked absent from the corner ring at `missing_at`.
    pub powers_checked: u32,
    pub sigma_exponent: SigmaExponent,
    pub bounds: Bounds,
}

/// Weights and corner rings through a contraction.
fn rings_through(psi: &Contraction, bounds: Option<Bounds>) -> Result<CornerRings, CriteriaError> {
    let target_table = MatchingTable::compute(psi.target())?;
    let weights = psi.tau_psi(&target_table);
    let bounds = match bounds {
        Some(b) => b,
        None => Bounds::for_quiver(psi.source(), weights.dim())?,
    };
    Ok(CornerRings::compute(psi.source(), &weights, bounds)?)
}

/// Searches for a nonnoetherian witness of a non-cancellative quiver.
pub fn nonnoetherian_witness(
    q: &DimerQuiver,
    psi: &Contraction,
    bounds: Option<Bounds>,
) -> Result<Option<NonnoetherianWitness>, CriteriaError> {
    if check_cancellative(q)?.cancellative {
        return Err(CriteriaError::NotApplicable(
            "quiver is cancellative; no nonnoetherian witness exists".into(),
        ));
    }
    let rings = rings_through(psi, bounds)?;
    Ok(witness_from_rings(q, &rings))
}

fn witness_from_rings(q: &DimerQuiver, rings: &CornerRings) -> Option<NonnoetherianWitness> {
    let sigma = Weight::sigma(rings.dim);
    let mut best: Option<NonnoetherianWitness> = None;
    for ring in &rings.rings {
        for (w, cycle) in &ring.elements {
            if w.is_zero() || !w.is_sigma_reduced() {
                continue;
            }
            if best.as_ref().is_some_and(|b| (b.weight.degree(), &b.weight) <= (w.degree(), w)) {
                continue;
            }
            for other in &rings.rings {
                let target = &other.semigroup;
                if other.vertex == ring.vertex || target.contains(w) {
                    continue;
                }
                let mut powers = 1;
                while (powers as u64 + 1) * w.degree() <= rings.bounds.degree
                    && !target.contains(&w.scaled(powers + 1))
                {
                    powers += 1;
                }
                let sigma_exponent = (1..=SIGMA_EXPONENT_LIMIT)
                    .find(|&n| target.contains(&w.plus(&sigma.scaled(n))))
                    .map(|n| SigmaExponent::Found { n })
                    .unwrap_or(SigmaExponent::NotComputed {
                        searched_up_to: SIGMA_EXPONENT_LIMIT,
                    });
                best = Some(NonnoetherianWitness {
                    vertex: ring.vertex,
                    cycle: q.arrow_names(cycle.arrows()),
                    winding: cycle.winding(),
                    weight: w.clone(),
                    missing_at: other.vertex,
                    powers_checked: powers,
                    sigma_exponent,
                    bounds: rings.bounds,
                });
                break;
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PiCondition {
    /// No contracted arrows.
    Vacuous,
    HeadIndegreeOne,
    TailOutdegreeOne,
    NotMet,
}

/// Two cycles, as arrow names.
pub type GeneratorPair = (Vec<String>, Vec<String>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiReport {
    pub condition: PiCondition,
    pub summary: String,
    /// Cycles `p` then `r` and `q` then `r` generating a free subalgebra.
    pub generators: Option<GeneratorPair>,
}

/// Directed path over contracted arrows only.
fn contracted_path(q: &DimerQuiver, contracted: &BTreeSet<ArrowId>, from: VertexId, to: VertexId) -> Option<Vec<ArrowId>> {
    support_path(q, from, to, |a| contracted.contains(&a))
}

/// Looks for a free subalgebra on two cycles.
pub fn pi_obstruction(psi: &Contraction) -> Result<PiReport, CriteriaError> {
    let q = psi.source();
    let contracted = psi.contracted();
    if contracted.is_empty() {
        return Ok(PiReport {
            condition: PiCondition::Vacuous,
            summary: "no contracted arrows; trivially PI-compatible".into(),
            generators: None,
        });
    }
    let head_ok = contracted.iter().all(|a| q.incoming(q.arrow(*a).head).len() == 1);
    let tail_ok = contracted.iter().all(|a| q.outgoing(q.arrow(*a).tail).len() == 1);
    let condition = match (head_ok, tail_ok) {
        (true, _) => PiCondition::HeadIndegreeOne,
        (false, true) => PiCondition::TailOutdegreeOne,
        (false, false) => {
            return Ok(PiReport {
                condition: PiCondition::NotMet,
                summary: "condition not met; inconclusive".into(),
                generators: None,
            })
        }
    };
    let generators = if condition == PiCondition::HeadIndegreeOne {
        free_generators(psi)?
    } else {
        None
    };
    let summary = match generators {
        Some(_) => "condition holds; free subalgebra located, not PI".into(),
        None => "condition holds, generators not located; not PI".into(),
    };
    Ok(PiReport {
        condition,
        summary,
        generators,
    })
}

fn free_generators(psi: &Contraction) -> Result<Option<GeneratorPair>, CriteriaError> {
    let q = psi.source();
    let target = psi.target();
    let target_table = MatchingTable::compute(target)?;
    let cover = target_table.covering_simple(target);
    for &a in psi.contracted() {
        let mut sides = [None, None];
        for &(f, pos) in q.faces_of(a) {
            let slot = usize::from(q.face(f).sign == FaceSign::Negative);
            sides[slot].get_or_insert_with(|| q.face_rotation(f, pos)[1..].to_vec());
        }
        let [Some(plus), Some(minus)] = sides else {
            continue;
        };
        // plus = b p, minus = b q with b maximal
        let common = plus.iter().zip(&minus).take_while(|(x, y)| x == y).count();
        let (b, p, r) = (&plus[..common], &plus[common..], &minus[common..]);
        let Some(&last) = b.last() else { continue };
        if p.is_empty() || r.is_empty() {
            continue;
        }
        let Some(b_img) = psi.arrow_image(last) else { continue };
        let Some(d) = cover[b_img.0] else { continue };
        let matching = &target_table.perfect[d];
        let p_head = q.arrow(*p.last().expect("nonempty")).head;
        let p_tail = q.arrow(p[0]).tail;
        let Some(s) = support_path(target, psi.vertex_image(p_head), psi.vertex_image(p_tail), |x| {
            !matching.contains(x)
        }) else {
            continue;
        };
        // lift s, bridging gaps with contracted arrows
        let mut lifted = Vec::new();
        let mut at = p_head;
        let mut ok = true;
        for t in &s {
            let src = q.arrow_by_name(&target.arrow(*t).name).expect("names are kept");
            match contracted_path(q, psi.contracted(), at, q.arrow(src).tail) {
                Some(bridge) => lifted.extend(bridge),
                None => {
                    ok = false;
                    break;
                }
            }
            lifted.push(src);
            at = q.arrow(src).head;
        }
        if !ok {
            continue;
        }
        let Some(bridge) = contracted_path(q, psi.contracted(), at, p_tail) else {
            continue;
        };
        lifted.extend(bridge);
        let rp: Vec<ArrowId> = p.iter().chain(&lifted).copied().collect();
        let rq: Vec<ArrowId> = r.iter().chain(&lifted).copied().collect();
        return Ok(Some((q.arrow_names(&rp), q.arrow_names(&rq))));
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    HoldsAtBound,
    NotEvaluated,
}

impl Verdict {
    fn decided(self) -> Option<bool> {
        match self {
            Verdict::Holds => Some(true),
            Verdict::Fails => Some(false),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub number: u8,
    pub statement: String,
    pub verdict: Verdict,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub cancellative: bool,
    pub bounds: Option<Bounds>,
    pub conditions: Vec<ConditionEntry>,
    pub uncovered_arrows: Vec<String>,
    pub contraction: Option<Vec<String>>,
    pub contraction_verdict: Option<CyclicVerdict>,
    pub noncancellative_pair: Option<NoncancellativeWitness>,
    pub nonnoetherian: Option<NonnoetherianWitness>,
    pub pi: Option<PiReport>,
    pub notes: Vec<String>,
}

impl CriteriaReport {
    pub fn condition(&self, n: u8) -> &ConditionEntry {
        &self.conditions[n as usize - 1]
    }
}

const STATEMENTS: [&str; 10] = [
    "A is cancellative",
    "A is noetherian",
    "Z is noetherian",
    "A is a finitely generated Z-module",
    "the vertex corner rings are pairwise isomorphic",
    "each vertex corner ring is isomorphic to Z",
    "each arrow annihilates a simple module of dimension 1^Q0",
    "each arrow is contained in a simple matching",
    "S = R for a cyclic contraction",
    "every cyclic contraction is trivial",
];

fn entry(n: u8, verdict: Verdict, method: &str, evidence: Option<String>) -> ConditionEntry {
    ConditionEntry {
        number: n,
        statement: STATEMENTS[n as usize - 1].into(),
        verdict,
        method: method.into(),
        evidence,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportOptions {
    pub bounds: Option<Bounds>,
    pub pair_max_len: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            bounds: None,
            pair_max_len: DEFAULT_PAIR_MAX_LEN,
        }
    }
}

/// Evaluates all ten conditions. Without `psi`, a cyclic contraction is
/// searched for when the quiver is not cancellative.
pub fn theorem_report(q: &DimerQuiver, psi: Option<&Contraction>, opts: ReportOptions) -> Result<CriteriaReport, CriteriaError> {
    let table = nondegenerate_table(q)?;
    let cert = check_cancellative(q)?;
    let fmt_names = |v: &[String]| format!("[{}]", v.join(" "));
    let mut notes = Vec::new();
    let mut conditions = Vec::with_capacity(10);

    let c1 = if cert.cancellative { Verdict::Holds } else { Verdict::Fails };
    conditions.push(entry(
        1,
        c1,
        "simple-matching criterion",
        (!cert.cancellative).then(|| format!("arrows in no simple matching: {}", fmt_names(&cert.uncovered))),
    ));
    for n in 2..=4 {
        conditions.push(entry(n, c1, "derived from (1) by the equivalence", None));
    }

    // contraction: given, identity, or searched
    let mut psi_owned = match psi {
        Some(c) => Some(c.clone()),
        None if cert.cancellative => Some(contraction::identity(q)),
        None => contraction::find_cyclic_contraction(q, opts.bounds)?,
    };
    let mut contraction_verdict = None;
    if let Some(c) = psi_owned.as_mut() {
        let v = c.verify_cyclic(opts.bounds)?;
        if !v.is_cyclic() {
            notes.push("given contraction is not verified cyclic; (5), (6), (9), (10) not evaluated".into());
        }
        contraction_verdict = Some(v);
    } else {
        notes.push("no cyclic contraction found at the search bounds; (5), (6), (9), (10) not evaluated".into());
    }
    let cyclic = contraction_verdict.as_ref().is_some_and(CyclicVerdict::is_cyclic);
    let psi_ref = psi_owned.as_ref().filter(|_| cyclic);

    let mut bounds_used = None;
    let mut nonnoetherian = None;
    match psi_ref {
        Some(c) => {
            let rings = rings_through(c, opts.bounds)?;
            bounds_used = Some(rings.bounds);
            let cmp = compare_corner_rings(&rings);
            conditions.push(match cmp.first_difference() {
                None => entry(5, Verdict::HoldsAtBound, "corner semigroups compared at bound", None),
                Some((i, j, w)) => entry(
                    5,
                    Verdict::Fails,
                    "corner semigroups compared at bound",
                    Some(format!("weight {w} separates vertices {} and {}", i.0, j.0)),
                ),
            });
            let r = homotopy_center(&rings);
            let off = rings.rings.iter().find_map(|ring| ring.semigroup.compare(&r).err().map(|w| (ring.vertex, w)));
            conditions.push(match off {
                None => entry(6, Verdict::HoldsAtBound, "each corner semigroup equals R at bound", None),
                Some((v, w)) => entry(
                    6,
                    Verdict::Fails,
                    "each corner semigroup equals R at bound",
                    Some(format!("weight {w} distinguishes vertex {} from R", v.0)),
                ),
            });
            if !cert.cancellative {
                nonnoetherian = witness_from_rings(q, &rings);
            }
            let rs = check_r_equals_s(&rings);
            let evidence = rs.membership_witness.as_ref().map(|w| {
                format!(
                    "generator {} of winding {} missing at vertex {}",
                    w.generator, w.winding, w.vertex.0
                )
            });
            conditions.push(match rs.verdict {
                RsVerdict::EqualAtBound => entry(9, Verdict::HoldsAtBound, "R = S check at bound", None),
                RsVerdict::Differ => entry(9, Verdict::Fails, "R = S check at bound", evidence),
                RsVerdict::Inconclusive => {
                    notes.push("R = S checks disagree at bound; raise the bounds".into());
                    entry(9, Verdict::NotEvaluated, "R = S check at bound", evidence)
                }
            });
        }
        None => {
            for n in [5, 6, 9] {
                conditions.push(entry(n, Verdict::NotEvaluated, "needs a cyclic contraction", None));
            }
        }
    }

    // (7) by building the modules, (8) from the matching table
    let mut annihilated = BTreeSet::new();
    for d in table.simple_matchings() {
        let module = simple_module_from_matching(q, d)?;
        annihilated.extend(q.arrows().iter().map(|a| a.id).filter(|a| module.annihilates(*a)));
    }
    let not_annihilated: Vec<ArrowId> = q.arrows().iter().map(|a| a.id).filter(|a| !annihilated.contains(a)).collect();
    conditions.push(entry(
        7,
        if not_annihilated.is_empty() { Verdict::Holds } else { Verdict::Fails },
        "simple modules built from simple matchings",
        (!not_annihilated.is_empty()).then(|| format!("no simple module kills {}", fmt_names(&q.arrow_names(&not_annihilated)))),
    ));
    conditions.push(entry(
        8,
        if cert.cancellative { Verdict::Holds } else { Verdict::Fails },
        "simple-matching coverage",
        (!cert.cancellative).then(|| fmt_names(&cert.uncovered)),
    ));
    conditions.push(if cert.cancellative {
        entry(10, Verdict::Holds, "contracted arrows lie outside every simple matching, and there are none", None)
    } else {
        match psi_ref {
            Some(c) if !c.is_trivial() => entry(
                10,
                Verdict::Fails,
                "nontrivial cyclic contraction",
                Some(format!("contracts {}", fmt_names(&c.contracted_names()))),
            ),
            _ => entry(10, Verdict::NotEvaluated, "needs a cyclic contraction", None),
        }
    });
    conditions.sort_by_key(|c| c.number);

    let decided: Vec<(u8, bool)> = conditions.iter().filter_map(|c| c.verdict.decided().map(|d| (c.number, d))).collect();
    if let Some(&(n, v)) = decided.iter().find(|(_, v)| *v != decided[0].1) {
        return Err(CriteriaError::Inconsistent(format!(
            "condition ({}) is {} but ({n}) is {}",
            decided[0].0, decided[0].1, v
        )));
    }
    if let Some(c) = conditions.iter().find(|c| c.verdict == Verdict::HoldsAtBound && !cert.cancellative) {
        return Err(CriteriaError::Inconsistent(format!(
            "condition ({}) holds at bound on a non-cancellative quiver",
            c.number
        )));
    }

    let noncancellative_pair = if cert.cancellative {
        None
    } else {
        find_noncancellative_pair(q, opts.pair_max_len)?
    };
    let pi = match psi_ref {
        Some(c) if !cert.cancellative => Some(pi_obstruction(c)?),
        _ => None,
    };
    Ok(CriteriaReport {
        cancellative: cert.cancellative,
        bounds: bounds_used,
        conditions,
        uncovered_arrows: cert.uncovered,
        contraction: psi_owned.as_ref().map(Contraction::contracted_names),
        contraction_verdict,
        noncancellative_pair,
        nonnoetherian,
        pi,
        notes,
    })
}

/// Paths `from -> to` of length at most `max_len`, in canonical order.
pub fn paths_between(q: &DimerQuiver, from: VertexId, to: VertexId, max_len: usize) -> Result<Vec<PathWord>, PathError> {
    Ok(enumerate_paths(q, Some(from), max_len, DEFAULT_PATH_CAP)?
        .into_iter()
        .filter(|p| p.head() == to)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::contract_names;
    use crate::corpus;

    #[test]
    fn cancellativity_decisions() {
        let hex = check_cancellative(&corpus::hexagon()).unwrap();
        assert!(hex.cancellative);
        assert_eq!(hex.covering["x"], vec!["x"]);
        assert!(check_cancellative(&corpus::conifold()).unwrap().cancellative);
        let fig = check_cancellative(&corpus::figure_one()).unwrap();
        assert!(!fig.cancellative);
        assert!(fig.uncovered.contains(&"c".to_string()));
        assert!(matches!(
            check_cancellative(&corpus::unmatched()),
            Err(CriteriaError::Degenerate(_))
        ));
    }

    #[test]
    fn figure_one_pair_with_green_multiplier() {
        let q = corpus::figure_one();
        let w = find_noncancellative_pair(&q, 4).unwrap().unwrap();
        assert_eq!((w.p.clone(), w.q.clone()), (vec!["b".to_string(), "a".into()], vec!["a".to_string(), "b".into()]));
        let m = w.multiplier.clone().unwrap();
        assert_eq!((m.side, m.r.clone()), (Side::Left, vec!["c".to_string()]));
        assert!(verify_pair(&q, &w).unwrap());
        let mut forged = w.clone();
        forged.q = forged.p.clone();
        assert!(!verify_pair(&q, &forged).unwrap());
    }

    #[test]
    fn cancellative_models_have_no_pairs() {
        for q in [corpus::hexagon(), corpus::conifold()] {
            assert_eq!(find_noncancellative_pair(&q, 4).unwrap(), None);
        }
    }

    #[test]
    fn nonnoetherian_witness_for_figure_one() {
        let q = corpus::figure_one();
        let psi = contract_names(&q, &["c"]).unwrap();
        let w = nonnoetherian_witness(&q, &psi, None).unwrap().unwrap();
        assert!(w.weight.is_sigma_reduced());
        assert_ne!(w.vertex, w.missing_at);
        assert!(w.powers_checked >= 1);
        let hex = corpus::hexagon();
        assert!(matches!(
            nonnoetherian_witness(&hex, &crate::contraction::identity(&hex), None),
            Err(CriteriaError::NotApplicable(_))
        ));
    }

    #[test]
    fn pi_obstruction_cases() {
        let hex = corpus::hexagon();
        let r = pi_obstruction(&crate::contraction::identity(&hex)).unwrap();
        assert_eq!(r.condition, PiCondition::Vacuous);
        let q = corpus::figure_one();
        let psi = contract_names(&q, &["c"]).unwrap();
        // the head of c also receives h
        let r = pi_obstruction(&psi).unwrap();
        assert_eq!(r.condition, PiCondition::NotMet);
        assert_eq!(r.summary, "condition not met; inconclusive");
    }

    #[test]
    fn reports_are_consistent() {
        for q in [corpus::hexagon(), corpus::conifold()] {
            let r = theorem_report(&q, None, ReportOptions::default()).unwrap();
            assert!(r.cancellative);
            for c in &r.conditions {
                assert!(matches!(c.verdict, Verdict::Holds | Verdict::HoldsAtBound), "{c:?}");
            }
        }
        let q = corpus::figure_one();
        let psi = contract_names(&q, &["c"]).unwrap();
        let r = theorem_report(&q, Some(&psi), ReportOptions::default()).unwrap();
        assert!(!r.cancellative);
        for c in &r.conditions {
            assert_eq!(c.verdict, Verdict::Fails, "{c:?}");
        }
        assert!(r.noncancellative_pair.is_some());
        assert!(r.nonnoetherian.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let q = corpus::figure_one();
        let a = serde_json::to_string(&theorem_report(&q, None, ReportOptions::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&theorem_report(&q, None, ReportOptions::default()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
