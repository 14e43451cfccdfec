//! Dimer quivers on the two-torus.
//!
//! A [`DimerQuiver`] is a quiver together with its oriented faces. Faces are
//! the source of truth for the embedding: every arrow carries an explicit
//! winding in `Z^2` recording how its lift crosses the fundamental domain, and
//! [`validate`] cross-checks those windings against the faces.
//!
//! Face boundaries are stored in composition order (the first arrow applied
//! is listed first).

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::paths::PathWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArrowId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Homology offset of a lift in `Z^2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Winding {
    pub u1: i64,
    pub u2: i64,
}

impl Winding {
    pub const ZERO: Winding = Winding { u1: 0, u2: 0 };

    pub const fn new(u1: i64, u2: i64) -> Self {
        Winding { u1, u2 }
    }

    pub fn is_zero(self) -> bool {
        self == Winding::ZERO
    }

    /// Supremum norm.
    pub fn max_norm(self) -> i64 {
        self.u1.abs().max(self.u2.abs())
    }
}

impl Add for Winding {
    type Output = Winding;
    fn add(self, rhs: Winding) -> Winding {
        Winding::new(self.u1 + rhs.u1, self.u2 + rhs.u2)
    }
}

impl AddAssign for Winding {
    fn add_assign(&mut self, rhs: Winding) {
        *self = *self + rhs;
    }
}

impl Sub for Winding {
    type Output = Winding;
    fn sub(self, rhs: Winding) -> Winding {
        Winding::new(self.u1 - rhs.u1, self.u2 - rhs.u2)
    }
}

impl SubAssign for Winding {
    fn sub_assign(&mut self, rhs: Winding) {
        *self = *self - rhs;
    }
}

impl Neg for Winding {
    type Output = Winding;
    fn neg(self) -> Winding {
        Winding::new(-self.u1, -self.u2)
    }
}

impl std::iter::Sum for Winding {
    fn sum<I: Iterator<Item = Winding>>(iter: I) -> Winding {
        iter.fold(Winding::ZERO, Add::add)
    }
}

impl fmt::Display for Winding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u1, self.u2)
    }
}

impl Serialize for Winding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.u1, self.u2].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Winding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [u1, u2] = <[i64; 2]>::deserialize(d)?;
        Ok(Winding { u1, u2 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: ArrowId,
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
    pub winding: Winding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceSign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl FaceSign {
    pub fn symbol(self) -> char {
        match self {
            FaceSign::Positive => '+',
            FaceSign::Negative => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub sign: FaceSign,
    pub boundary: Vec<ArrowId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("vertex {0} lies on no face")]
    VertexOnNoFace(VertexId),
    #[error("invalid JSON model: {0}")]
    Json(String),
    #[error("size guard exceeded: {0}")]
    TooLarge(String),
}

/// A quiver embedded in the torus, described by its faces.
///
/// Immutable once built; all queries take `&self`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimerQuiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
    faces: Vec<Face>,
    positions: Vec<Option<[f64; 2]>>,
    by_name: HashMap<String, ArrowId>,
    outgoing: Vec<Vec<ArrowId>>,
    incoming: Vec<Vec<ArrowId>>,
    /// `(face, position in boundary)` for each arrow occurrence.
    incidence: Vec<Vec<(FaceId, usize)>>,
}

/// Arrow data used when assembling a quiver programmatically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSpec {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub winding: Winding,
}

impl ArrowSpec {
    pub fn new(name: impl Into<String>, tail: usize, head: usize, winding: (i64, i64)) -> Self {
        ArrowSpec {
            name: name.into(),
            tail,
            head,
            winding: Winding::new(winding.0, winding.1),
        }
    }
}

impl DimerQuiver {
    /// Builds a quiver, checking referential integrity only.
    pub fn new(
        vertex_count: usize,
        arrows: Vec<ArrowSpec>,
        faces: Vec<(FaceSign, Vec<ArrowId>)>,
    ) -> Result<Self, ModelError> {
        let mut by_name = HashMap::with_capacity(arrows.len());
        let mut built = Vec::with_capacity(arrows.len());
        for (idx, spec) in arrows.into_iter().enumerate() {
            for end in [spec.tail, spec.head] {
                if end >= vertex_count {
                    return Err(ModelError::Dangling(format!(
                        "arrow `{}` references vertex {} but there are {} vertices",
                        spec.name, end, vertex_count
                    )));
                }
            }
            if by_name.insert(spec.name.clone(), ArrowId(idx)).is_some() {
                return Err(ModelError::Duplicate {
                    kind: "arrow",
                    name: spec.name,
                });
            }
            built.push(Arrow {
                id: ArrowId(idx),
                name: spec.name,
                tail: VertexId(spec.tail),
                head: VertexId(spec.head),
                winding: spec.winding,
            });
        }
        let mut built_faces = Vec::with_capacity(faces.len());
        for (idx, (sign, boundary)) in faces.into_iter().enumerate() {
            if let Some(bad) = boundary.iter().find(|a| a.0 >= built.len()) {
                return Err(ModelError::Dangling(format!(
                    "face {} references arrow id {}",
                    idx, bad.0
                )));
            }
            built_faces.push(Face {
                id: FaceId(idx),
                sign,
                boundary,
            });
        }
        Ok(Self::assemble(vertex_count, built, built_faces, Vec::new(), by_name))
    }

    fn assemble(
        vertex_count: usize,
        arrows: Vec<Arrow>,
        faces: Vec<Face>,
        positions: Vec<Option<[f64; 2]>>,
        by_name: HashMap<String, ArrowId>,
    ) -> Self {
        let mut outgoing = vec![Vec::new(); vertex_count];
        let mut incoming = vec![Vec::new(); vertex_count];
        for a in &arrows {
            outgoing[a.tail.0].push(a.id);
            incoming[a.head.0].push(a.id);
        }
        let mut incidence = vec![Vec::new(); arrows.len()];
        for f in &faces {
            for (pos, a) in f.boundary.iter().enumerate() {
                incidence[a.0].push((f.id, pos));
            }
        }
        DimerQuiver {
            vertex_count,
            arrows,
            faces,
            positions,
            by_name,
            outgoing,
            incoming,
            incidence,
        }
    }

    /// Attaches drawing coordinates (one optional point per vertex).
    pub fn with_positions(mut self, positions: Vec<Option<[f64; 2]>>) -> Result<Self, ModelError> {
        if !positions.is_empty() && positions.len() != self.vertex_count {
            return Err(ModelError::Dangling(format!(
                "{} positions for {} vertices",
                positions.len(),
                self.vertex_count
            )));
        }
        self.positions = positions;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count).map(VertexId)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: ArrowId) -> &Arrow {
        &self.arrows[id.0]
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrowId> {
        self.by_name.get(name).copied()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0]
    }

    pub fn outgoing(&self, v: VertexId) -> &[ArrowId] {
        &self.outgoing[v.0]
    }

    pub fn incoming(&self, v: VertexId) -> &[ArrowId] {
        &self.incoming[v.0]
    }

    /// Faces containing `a`, with the position of each occurrence.
    pub fn faces_of(&self, a: ArrowId) -> &[(FaceId, usize)] {
        &self.incidence[a.0]
    }

    pub fn positions(&self) -> Option<&[Option<[f64; 2]>]> {
        if self.positions.is_empty() {
            None
        } else {
            Some(&self.positions)
        }
    }

    pub fn has_all_positions(&self) -> bool {
        !self.positions.is_empty() && self.positions.iter().all(Option::is_some)
    }

    pub fn longest_face(&self) -> usize {
        self.faces.iter().map(|f| f.boundary.len()).max().unwrap_or(0)
    }

    pub fn arrow_names(&self, arrows: &[ArrowId]) -> Vec<String> {
        arrows.iter().map(|a| self.arrow(*a).name.clone()).collect()
    }

    /// The face boundary rotated to start at position `start`.
    pub fn face_rotation(&self, face: FaceId, start: usize) -> Vec<ArrowId> {
        let b = &self.face(face).boundary;
        b[start..].iter().chain(&b[..start]).copied().collect()
    }

    /// A unit cycle based at `i`: a rotation of the first face (by id)
    /// passing through `i`.
    pub fn unit_cycle_at(&self, i: VertexId) -> Result<PathWord, ModelError> {
        for f in &self.faces {
            if let Some(pos) = f.boundary.iter().position(|a| self.arrow(*a).tail == i) {
                let word = self.face_rotation(f.id, pos);
                return PathWord::new(self, i, word)
                    .map_err(|e| ModelError::Dangling(format!("face {} is not a cycle: {e}", f.id.0)));
            }
        }
        Err(ModelError::VertexOnNoFace(i))
    }

    /// The `k x l` periodic refinement: vertex `v` of copy `(s, t)` becomes
    /// `(s * l + t) * |Q0| + v`.
    pub fn torus_cover(&self, k: usize, l: usize) -> Result<DimerQuiver, ModelError> {
        if k == 0 || l == 0 {
            return Err(ModelError::TooLarge("cover factors must be positive".into()));
        }
        let copies = k
            .checked_mul(l)
            .filter(|c| {
                c.checked_mul(self.arrows.len().max(self.vertex_count).max(self.faces.len()))
                    .is_some_and(|n| n <= 1 << 24)
            })
            .ok_or_else(|| ModelError::TooLarge(format!("{k}x{l} cover")))?;
        let n = self.vertex_count;
        let (ki, li) = (k as i64, l as i64);
        let copy_index = |s: i64, t: i64| (s * li + t) as usize;
        let mut arrows = Vec::with_capacity(copies * self.arrows.len());
        // lifted[(copy, arrow)] = new arrow id
        let mut lifted = vec![ArrowId(0); copies * self.arrows.len()];
        for s in 0..ki {
            for t in 0..li {
                for a in &self.arrows {
                    let hs = s + a.winding.u1;
                    let ht = t + a.winding.u2;
                    let id = ArrowId(arrows.len());
                    lifted[copy_index(s, t) * self.arrows.len() + a.id.0] = id;
                    arrows.push(Arrow {
                        id,
                        name: format!("{}_{}_{}", a.name, s, t),
                        tail: VertexId(copy_index(s, t) * n + a.tail.0),
                        head: VertexId(copy_index(hs.rem_euclid(ki), ht.rem_euclid(li)) * n + a.head.0),
                        winding: Winding::new(hs.div_euclid(ki), ht.div_euclid(li)),
                    });
                }
            }
        }
        let mut faces = Vec::with_capacity(copies * self.faces.len());
        for s in 0..ki {
            for t in 0..li {
                for f in &self.faces {
                    let (mut cs, mut ct) = (s, t);
                    let mut boundary = Vec::with_capacity(f.boundary.len());
                    for a in &f.boundary {
                        boundary.push(lifted[copy_index(cs, ct) * self.arrows.len() + a.0]);
                        let w = self.arrow(*a).winding;
                        cs = (cs + w.u1).rem_euclid(ki);
                        ct = (ct + w.u2).rem_euclid(li);
                    }
                    faces.push(Face {
                        id: FaceId(faces.len()),
                        sign: f.sign,
                        boundary,
                    });
                }
            }
        }
        let positions = if self.positions.is_empty() {
            Vec::new()
        } else {
            let mut out = Vec::with_capacity(copies * n);
            for s in 0..k {
                for t in 0..l {
                    for p in &self.positions {
                        out.push(p.map(|[x, y]| [(x + s as f64) / k as f64, (y + t as f64) / l as f64]));
                    }
                }
            }
            out
        };
        let by_name = arrows.iter().map(|a| (a.name.clone(), a.id)).collect();
        Ok(DimerQuiver::assemble(copies * n, arrows, faces, positions, by_name))
    }

    // ---- text format ----

    /// Parses the line-oriented `.dimer` format.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        parse_dimer(text)
    }

    /// Canonical `.dimer` text.
    pub fn to_dimer_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.vertex_count);
        for a in &self.arrows {
            out.push_str(&format!(
                "arrow {} {} {} ({},{})\n",
                a.name, a.tail.0, a.head.0, a.winding.u1, a.winding.u2
            ));
        }
        for f in &self.faces {
            out.push_str(&format!(
                "face {} [{}]\n",
                f.sign.symbol(),
                self.arrow_names(&f.boundary).join(" ")
            ));
        }
        for (v, p) in self.positions.iter().enumerate() {
            if let Some([x, y]) = p {
                out.push_str(&format!("pos {v} {x} {y}\n"));
            }
        }
        out
    }

    // ---- JSON mirror ----

    pub fn to_file_record(&self) -> ModelFile {
        ModelFile {
            vertices: self.vertex_count,
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowRecord {
                    name: a.name.clone(),
                    tail: a.tail.0,
                    head: a.head.0,
                    winding: a.winding,
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceRecord {
                    sign: f.sign,
                    boundary: self.arrow_names(&f.boundary),
                })
                .collect(),
            pos: self
                .positions
                .iter()
                .enumerate()
                .filter_map(|(v, p)| p.map(|[x, y]| PosRecord { vertex: v, x, y }))
                .collect(),
        }
    }

    pub fn from_file_record(file: &ModelFile) -> Result<Self, ModelError> {
        let arrows = file
            .arrows
            .iter()
            .map(|a| ArrowSpec {
                name: a.name.clone(),
                tail: a.tail,
                head: a.head,
                winding: a.winding,
            })
            .collect();
        let mut names = HashMap::new();
        for (i, a) in file.arrows.iter().enumerate() {
            names.insert(a.name.as_str(), ArrowId(i));
        }
        let mut faces = Vec::with_capacity(file.faces.len());
        for (idx, f) in file.faces.iter().enumerate() {
            let mut boundary = Vec::with_capacity(f.boundary.len());
            for name in &f.boundary {
                let id = names.get(name.as_str()).copied().ok_or_else(|| {
                    ModelError::Dangling(format!("face {idx} references unknown arrow `{name}`"))
                })?;
                boundary.push(id);
            }
            faces.push((f.sign, boundary));
        }
        let q = DimerQuiver::new(file.vertices, arrows, faces)?;
        let positions = positions_from_records(file.vertices, file.pos.iter().map(|p| (p.vertex, p.x, p.y)))?;
        q.with_positions(positions)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_record()).expect("model records serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        DimerQuiver::from_file_record(&file)
    }
}

fn positions_from_records(
    vertices: usize,
    records: impl Iterator<Item = (usize, f64, f64)>,
) -> Result<Vec<Option<[f64; 2]>>, ModelError> {
    let mut positions: Vec<Option<[f64; 2]>> = Vec::new();
    for (v, x, y) in records {
        if v >= vertices {
            return Err(ModelError::Dangling(format!("position for unknown vertex {v}")));
        }
        if !x.is_finite() || !y.is_finite() {
            return Err(ModelError::Dangling(format!("non-finite position for vertex {v}")));
        }
        if positions.is_empty() {
            positions = vec![None; vertices];
        }
        if positions[v].replace([x, y]).is_some() {
            return Err(ModelError::Duplicate {
                kind: "position for vertex",
                name: v.to_string(),
            });
        }
    }
    Ok(positions)
}

/// JSON mirror of the `.dimer` format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub vertices: usize,
    pub arrows: Vec<ArrowRecord>,
    pub faces: Vec<FaceRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pos: Vec<PosRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowRecord {
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub winding: Winding,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceRecord {
    pub sign: FaceSign,
    pub boundary: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosRecord {
    pub vertex: usize,
    pub x: f64,
    pub y: f64,
}

// ---- `.dimer` parser ----

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    offset: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> ModelError {
        ModelError::Syntax {
            line: self.line,
            column: self.text[..self.offset.min(self.text.len())].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.offset..];
        self.offset += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.offset >= self.text.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.offset..].chars().next()
    }

    fn expect_char(&mut self, c: char) -> Result<(), ModelError> {
        if self.peek() == Some(c) {
            self.offset += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    /// A maximal run of characters that are not whitespace or punctuation.
    fn word(&mut self, what: &str) -> Result<&'a str, ModelError> {
        self.skip_ws();
        let rest = &self.text[self.offset..];
        let len = rest
            .find(|c: char| c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | ','))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err(format!("expected {what}")));
        }
        self.offset += len;
        Ok(&rest[..len])
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ModelError> {
        let start = self.offset;
        let w = self.word(what)?;
        w.parse().map_err(|_| {
            self.offset = start;
            self.skip_ws();
            self.err(format!("invalid {what} `{w}`"))
        })
    }

    fn finish(&mut self) -> Result<(), ModelError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

fn parse_dimer(text: &str) -> Result<DimerQuiver, ModelError> {
    let mut vertices: Option<usize> = None;
    let mut arrows: Vec<ArrowSpec> = Vec::new();
    let mut names: HashMap<String, ArrowId> = HashMap::new();
    let mut faces: Vec<(FaceSign, Vec<ArrowId>)> = Vec::new();
    let mut pos: Vec<(usize, f64, f64)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor {
            line: lineno + 1,
            text: content,
            offset: 0,
        };
        if cur.at_end() {
            continue;
        }
        let start = cur.offset;
        let keyword = cur.word("keyword")?;
        match keyword {
            "vertices:" | "vertices" => {
                if keyword == "vertices" {
                    cur.expect_char(':')?;
                }
                if vertices.is_some() {
                    cur.offset = start;
                    return Err(cur.err("duplicate `vertices:` declaration"));
                }
                let n: usize = cur.number("vertex count")?;
                if n > 1 << 24 {
                    return Err(ModelError::TooLarge(format!("{n} vertices")));
                }
                vertices = Some(n);
            }
            "arrow" => {
                let n = vertices.ok_or_else(|| cur.err("`vertices:` must precede arrows"))?;
                let name = cur.word("arrow name")?.to_string();
                if names.contains_key(&name) {
                    return Err(ModelError::Duplicate { kind: "arrow", name });
                }
                let mut ends = [0usize; 2];
                for (slot, what) in ends.iter_mut().zip(["tail vertex", "head vertex"]) {
                    let at = cur.offset;
                    *slot = cur.number(what)?;
                    if *slot >= n {
                        cur.offset = at;
                        cur.skip_ws();
                        return Err(ModelError::Dangling(format!(
                            "line {}: arrow `{name}` references vertex {} but there are {n} vertices",
                            lineno + 1,
                            *slot
                        )));
                    }
                }
                cur.expect_char('(')?;
                let u1: i64 = cur.number("winding component")?;
                cur.expect_char(',')?;
                let u2: i64 = cur.number("winding component")?;
                cur.expect_char(')')?;
                cur.finish()?;
                names.insert(name.clone(), ArrowId(arrows.len()));
                arrows.push(ArrowSpec {
                    name,
                    tail: ends[0],
                    head: ends[1],
                    winding: Winding::new(u1, u2),
                });
            }
            "face" => {
                let sign = match cur.word("face sign")? {
                    "+" => FaceSign::Positive,
                    "-" => FaceSign::Negative,
                    other => {
                        return Err(cur.err(format!("face sign must be `+` or `-`, found `{other}`")));
                    }
                };
                cur.expect_char('[')?;
                let mut boundary = Vec::new();
                loop {
                    match cur.peek() {
                        Some(']') => {
                            cur.offset += 1;
                            break;
                        }
                        Some(',') => {
                            cur.offset += 1;
                        }
                        None => return Err(cur.err("unterminated face boundary")),
                        _ => {
                            let name = cur.word("arrow name")?;
                            let id = names.get(name).copied().ok_or_else(|| {
                                ModelError::Dangling(format!(
                                    "line {}: face references unknown arrow `{name}`",
                                    lineno + 1
                                ))
                            })?;
                            boundary.push(id);
                        }
                    }
                }
                cur.finish()?;
                faces.push((sign, boundary));
            }
            "pos" => {
                let v: usize = cur.number("vertex")?;
                let x: f64 = cur.number("x coordinate")?;
                let y: f64 = cur.number("y coordinate")?;
                cur.finish()?;
                pos.push((v, x, y));
            }
            other => {
                cur.offset = start;
                cur.skip_ws();
                return Err(cur.err(format!("unknown directive `{other}`")));
            }
        }
    }
    let n = vertices.ok_or(ModelError::Syntax {
        line: 1,
        column: 1,
        message: "missing `vertices:` declaration".into(),
    })?;
    let q = DimerQuiver::new(n, arrows, faces)?;
    let positions = positions_from_records(n, pos.into_iter())?;
    q.with_positions(positions)
}

// ---- validation ----

/// The individually checkable conditions making a quiver a dimer quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    FaceCycle,
    ArrowFaceIncidence,
    EulerCharacteristic,
    Connected,
    VertexOnFace,
    FaceContractible,
    HomologyGenerated,
}

impl Invariant {
    pub const ALL: [Invariant; 7] = [
        Invariant::FaceCycle,
        Invariant::ArrowFaceIncidence,
        Invariant::EulerCharacteristic,
        Invariant::Connected,
        Invariant::VertexOnFace,
        Invariant::FaceContractible,
        Invariant::HomologyGenerated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::FaceCycle => "face-cycle",
            Invariant::ArrowFaceIncidence => "arrow-face-incidence",
            Invariant::EulerCharacteristic => "euler-characteristic",
            Invariant::Connected => "connected",
            Invariant::VertexOnFace => "vertex-on-face",
            Invariant::FaceContractible => "face-contractible",
            Invariant::HomologyGenerated => "homology-generated",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub invariant: Invariant,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn check(&self, inv: Invariant) -> &CheckResult {
        self.checks
            .iter()
            .find(|c| c.invariant == inv)
            .expect("every invariant is reported")
    }

    pub fn failed(&self) -> impl Iterator<Item = Invariant> + '_ {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.invariant)
    }
}

/// Runs every invariant check. Failures are data, never errors.
pub fn validate(q: &DimerQuiver) -> ValidationReport {
    let checks: Vec<CheckResult> = Invariant::ALL
        .iter()
        .map(|&inv| {
            let witness = check_invariant(q, inv);
            CheckResult {
                invariant: inv,
                passed: witness.is_none(),
                witness,
            }
        })
        .collect();
    let mut warnings = Vec::new();
    for f in q.faces() {
        if f.boundary.len() <= 2 {
            warnings.push(format!(
                "face {} has length {} (degenerate unit cycle)",
                f.id.0,
                f.boundary.len()
            ));
        }
    }
    ValidationReport {
        valid: checks.iter().all(|c| c.passed),
        checks,
        warnings,
    }
}

/// Returns a locating witness when `inv` fails.
pub fn check_invariant(q: &DimerQuiver, inv: Invariant) -> Option<String> {
    match inv {
        Invariant::FaceCycle => q.faces().iter().find_map(|f| {
            if f.boundary.is_empty() {
                return Some(format!("face {} has an empty boundary", f.id.0));
            }
            let len = f.boundary.len();
            (0..len).find_map(|k| {
                let a = q.arrow(f.boundary[k]);
                let b = q.arrow(f.boundary[(k + 1) % len]);
                (a.head != b.tail).then(|| {
                    format!(
                        "face {}: head of `{}` is {} but tail of `{}` is {}",
                        f.id.0, a.name, a.head, b.name, b.tail
                    )
                })
            })
        }),
        Invariant::ArrowFaceIncidence => q.arrows().iter().find_map(|a| {
            let mut plus = 0;
            let mut minus = 0;
            for (f, _) in q.faces_of(a.id) {
                match q.face(*f).sign {
                    FaceSign::Positive => plus += 1,
                    FaceSign::Negative => minus += 1,
                }
            }
            (plus != 1 || minus != 1).then(|| {
                format!(
                    "arrow `{}` lies on {plus} positive and {minus} negative faces",
                    a.name
                )
            })
        }),
        Invariant::EulerCharacteristic => {
            let chi = q.vertex_count() as i64 - q.arrows().len() as i64 + q.faces().len() as i64;
            (chi != 0).then(|| {
                format!(
                    "{} - {} + {} = {chi}, expected 0",
                    q.vertex_count(),
                    q.arrows().len(),
                    q.faces().len()
                )
            })
        }
        Invariant::Connected => {
            if q.vertex_count() == 0 {
                return Some("quiver has no vertices".into());
            }
            let comp = undirected_components(q);
            comp.iter()
                .position(|&c| c != comp[0])
                .map(|v| format!("vertex {v} is not connected to vertex 0"))
        }
        Invariant::VertexOnFace => {
            let mut on_face = vec![false; q.vertex_count()];
            for f in q.faces() {
                for a in &f.boundary {
                    on_face[q.arrow(*a).tail.0] = true;
                    on_face[q.arrow(*a).head.0] = true;
                }
            }
            on_face
                .iter()
                .position(|x| !x)
                .map(|v| format!("vertex {v} lies on no face"))
        }
        Invariant::FaceContractible => q.faces().iter().find_map(|f| {
            let w: Winding = f.boundary.iter().map(|a| q.arrow(*a).winding).sum();
            (!w.is_zero()).then(|| format!("face {} has winding sum {w}", f.id.0))
        }),
        Invariant::HomologyGenerated => {
            let reduced = reduced_windings(q);
            let index = lattice_index(reduced.iter().copied());
            (index != 1).then(|| {
                if index == 0 {
                    "cycle windings span a lattice of rank < 2".to_string()
                } else {
                    format!("cycle windings span a sublattice of index {index}")
                }
            })
        }
    }
}

fn undirected_components(q: &DimerQuiver) -> Vec<usize> {
    let mut comp = vec![usize::MAX; q.vertex_count()];
    let mut next = 0;
    for start in 0..q.vertex_count() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let nbrs = q
                .outgoing(VertexId(v))
                .iter()
                .map(|a| q.arrow(*a).head)
                .chain(q.incoming(VertexId(v)).iter().map(|a| q.arrow(*a).tail));
            for w in nbrs {
                if comp[w.0] == usize::MAX {
                    comp[w.0] = next;
                    queue.push_back(w.0);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Arrow windings after pushing a spanning forest to zero: `w(a) + p(t) - p(h)`
/// where `p(v)` is the winding along the forest from its root to `v`. The
/// reduced windings of non-forest arrows generate the homology image of the
/// cycle space.
pub(crate) fn reduced_windings(q: &DimerQuiver) -> Vec<Winding> {
    let mut potential: Vec<Option<Winding>> = vec![None; q.vertex_count()];
    for root in 0..q.vertex_count() {
        if potential[root].is_some() {
            continue;
        }
        potential[root] = Some(Winding::ZERO);
        let mut queue = VecDeque::from([VertexId(root)]);
        while let Some(v) = queue.pop_front() {
            let pv = potential[v.0].expect("visited");
            for a in q.outgoing(v) {
                let arrow = q.arrow(*a);
                if potential[arrow.head.0].is_none() {
                    potential[arrow.head.0] = Some(pv + arrow.winding);
                    queue.push_back(arrow.head);
                }
            }
            for a in q.incoming(v) {
                let arrow = q.arrow(*a);
                if potential[arrow.tail.0].is_none() {
                    potential[arrow.tail.0] = Some(pv - arrow.winding);
                    queue.push_back(arrow.tail);
                }
            }
        }
    }
    q.arrows()
        .iter()
        .map(|a| {
            a.winding + potential[a.tail.0].expect("all visited") - potential[a.head.0].expect("all visited")
        })
        .collect()
}

/// Index of the sublattice of `Z^2` generated by `vectors` (0 if rank < 2),
/// computed as the gcd of all 2x2 minors.
pub(crate) fn lattice_index(vectors: impl Iterator<Item = Winding>) -> i64 {
    let vs: Vec<Winding> = vectors.filter(|w| !w.is_zero()).collect();
    let mut g = 0i64;
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            g = gcd(g, a.u1 * b.u2 - a.u2 * b.u1);
            if g == 1 {
                return 1;
            }
        }
    }
    g
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Counts of vertices, arrows and faces.
pub fn census(q: &DimerQuiver) -> BTreeMap<&'static str, usize> {
    BTreeMap::from([
        ("vertices", q.vertex_count()),
        ("arrows", q.arrows().len()),
        ("faces", q.faces().len()),
    ])
}
