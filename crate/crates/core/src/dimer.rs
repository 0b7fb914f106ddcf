//! Dimer models: a quiver embedded in the real two-torus whose complement is a union of
//! oriented polygonal faces.
//!
//! Each arrow carries a winding vector recording the lattice translation between the lift of
//! its tail and the lift of its head in the universal cover. A face of sign `+1` is traversed
//! anticlockwise and a face of sign `-1` clockwise.
use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, Error, Invariant, Result};

pub type VertexId = usize;
pub type ArrowId = usize;
pub type FaceId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: ArrowId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub tail: VertexId,
    pub head: VertexId,
    pub wind: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub sign: i8,
    pub boundary: Vec<ArrowId>,
}

/// Serialized form of a dimer model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimerDocument {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub faces: Vec<Face>,
    /// Optional drawing positions of the vertices in the unit square fundamental domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<[f64; 2]>>,
}

/// The superpotential relation attached to an arrow: the two paths completing it to its
/// anticlockwise and clockwise faces. Both run from the head of the arrow to its tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTermRelation {
    pub arrow: ArrowId,
    pub plus_path: Vec<ArrowId>,
    pub minus_path: Vec<ArrowId>,
}

/// The cyclic order of arrows around a vertex: `b[j]` lies between `a[j]` and `a[j + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub vertex: VertexId,
    pub outgoing: Vec<ArrowId>,
    pub incoming: Vec<ArrowId>,
}

impl Rotation {
    pub fn len(&self) -> usize {
        self.outgoing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outgoing.is_empty()
    }
}

/// One step of a weak path: an arrow traversed forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub arrow: ArrowId,
    pub forward: bool,
}

/// A path in the double quiver, where every arrow may also be traversed in reverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeakPath {
    pub start: VertexId,
    pub steps: Vec<Step>,
}

impl WeakPath {
    pub fn empty(start: VertexId) -> Self {
        Self { start, steps: Vec::new() }
    }

    /// The path following `arrows` forwards from the tail of the first one.
    pub fn forward(model: &DimerModel, arrows: &[ArrowId]) -> Self {
        let start = arrows.first().map_or(0, |&a| model.arrow(a).tail);
        Self { start, steps: arrows.iter().map(|&arrow| Step { arrow, forward: true }).collect() }
    }

    /// The end vertex, or `None` if consecutive steps do not chain.
    pub fn end(&self, model: &DimerModel) -> Option<VertexId> {
        let mut at = self.start;
        for step in &self.steps {
            let arrow = model.arrow(step.arrow);
            let (from, to) =
                if step.forward { (arrow.tail, arrow.head) } else { (arrow.head, arrow.tail) };
            if from != at {
                return None;
            }
            at = to;
        }
        Some(at)
    }

    pub fn winding(&self, model: &DimerModel) -> [i64; 2] {
        let mut total = [0, 0];
        for step in &self.steps {
            let w = model.arrow(step.arrow).wind;
            let s = if step.forward { 1 } else { -1 };
            total[0] += s * w[0];
            total[1] += s * w[1];
        }
        total
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimerModel {
    vertices: usize,
    arrows: Vec<Arrow>,
    faces: Vec<Face>,
    positions: Option<Vec<[f64; 2]>>,
    /// For each arrow, the (face, position) pairs where it occurs.
    incidence: Vec<Vec<(FaceId, usize)>>,
}

impl DimerModel {
    /// Builds a model after checking only that all references are in range. Use
    /// [`validate_dimer`] for the geometric invariants.
    pub fn new(vertices: usize, mut arrows: Vec<Arrow>, faces: Vec<Face>) -> Result<Self> {
        arrows.sort_by_key(|a| a.id);
        let mut diagnostics = Vec::new();
        for (index, arrow) in arrows.iter().enumerate() {
            if arrow.id != index {
                diagnostics.push(Diagnostic::new(
                    Invariant::Indexing,
                    format!("arrow ids must be 0..{} without gaps, found {}", arrows.len(), arrow.id),
                ));
                break;
            }
        }
        for arrow in &arrows {
            if arrow.tail >= vertices || arrow.head >= vertices {
                diagnostics.push(Diagnostic::new(
                    Invariant::Indexing,
                    format!("arrow {} refers to a vertex outside 0..{vertices}", arrow.id),
                ));
            }
        }
        for (f, face) in faces.iter().enumerate() {
            if face.sign != 1 && face.sign != -1 {
                diagnostics.push(Diagnostic::new(
                    Invariant::Indexing,
                    format!("face {f} has sign {} instead of +1 or -1", face.sign),
                ));
            }
            if let Some(&a) = face.boundary.iter().find(|&&a| a >= arrows.len()) {
                diagnostics.push(Diagnostic::new(
                    Invariant::Indexing,
                    format!("face {f} refers to missing arrow {a}"),
                ));
            }
        }
        if !diagnostics.is_empty() {
            return Err(Error::Invalid(diagnostics));
        }
        let mut incidence = vec![Vec::new(); arrows.len()];
        for (f, face) in faces.iter().enumerate() {
            for (k, &a) in face.boundary.iter().enumerate() {
                incidence[a].push((f, k));
            }
        }
        Ok(Self { vertices, arrows, faces, positions: None, incidence })
    }

    pub fn with_positions(mut self, positions: Option<Vec<[f64; 2]>>) -> Result<Self> {
        if let Some(p) = &positions {
            if p.len() != self.vertices {
                return Err(Error::Input(format!(
                    "{} positions given for {} vertices",
                    p.len(),
                    self.vertices
                )));
            }
        }
        self.positions = positions;
        Ok(self)
    }

    pub fn from_document(doc: DimerDocument) -> Result<Self> {
        Self::new(doc.vertices, doc.arrows, doc.faces)?.with_positions(doc.positions)
    }

    pub fn to_document(&self) -> DimerDocument {
        DimerDocument {
            vertices: self.vertices,
            arrows: self.arrows.clone(),
            faces: self.faces.clone(),
            positions: self.positions.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("dimer documents serialize")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn positions(&self) -> Option<&[[f64; 2]]> {
        self.positions.as_deref()
    }

    pub fn arrow_name(&self, a: ArrowId) -> String {
        self.arrows[a].name.clone().unwrap_or_else(|| format!("#{a}"))
    }

    pub fn outgoing(&self, v: VertexId) -> Vec<ArrowId> {
        self.arrows.iter().filter(|a| a.tail == v).map(|a| a.id).collect()
    }

    pub fn incoming(&self, v: VertexId) -> Vec<ArrowId> {
        self.arrows.iter().filter(|a| a.head == v).map(|a| a.id).collect()
    }

    /// The face of the given sign containing `a`, with the position of `a` in its boundary.
    fn corner(&self, a: ArrowId, sign: i8) -> Option<(FaceId, usize)> {
        self.incidence[a].iter().copied().find(|&(f, _)| self.faces[f].sign == sign)
    }

    /// The anticlockwise face containing `a`. Panics on models that fail validation.
    pub fn plus_face(&self, a: ArrowId) -> FaceId {
        self.corner(a, 1).expect("validated model").0
    }

    /// The clockwise face containing `a`. Panics on models that fail validation.
    pub fn minus_face(&self, a: ArrowId) -> FaceId {
        self.corner(a, -1).expect("validated model").0
    }

    /// The arrows of the face of the given sign through `a`, after `a` and cyclically up to
    /// just before it.
    pub fn face_complement(&self, a: ArrowId, sign: i8) -> Vec<ArrowId> {
        let (f, k) = self.corner(a, sign).expect("validated model");
        let boundary = &self.faces[f].boundary;
        let n = boundary.len();
        (1..n).map(|s| boundary[(k + s) % n]).collect()
    }

    fn neighbour(&self, a: ArrowId, sign: i8, offset: usize) -> ArrowId {
        let (f, k) = self.corner(a, sign).expect("validated model");
        let boundary = &self.faces[f].boundary;
        boundary[(k + offset) % boundary.len()]
    }

    pub fn f_term_relations(&self) -> Vec<FTermRelation> {
        (0..self.arrows.len())
            .map(|a| FTermRelation {
                arrow: a,
                plus_path: self.face_complement(a, 1),
                minus_path: self.face_complement(a, -1),
            })
            .collect()
    }

    /// The cyclic order of the arrows at `v`, starting from its smallest outgoing arrow.
    pub fn vertex_rotation(&self, v: VertexId) -> Result<Rotation> {
        let outgoing = self.outgoing(v);
        let Some(&first) = outgoing.first() else {
            return Err(Error::Inconsistent(format!("vertex {v} has no outgoing arrow")));
        };
        let (cycle_out, cycle_in) = self.rotation_cycle(first);
        if cycle_out.len() != outgoing.len() {
            let cycles = self.rotation_cycle_count(v);
            return Err(Error::Invalid(vec![Diagnostic::new(
                Invariant::VertexLink,
                format!("the faces around vertex {v} split into {cycles} cycles"),
            )]));
        }
        Ok(Rotation { vertex: v, outgoing: cycle_out, incoming: cycle_in })
    }

    fn rotation_cycle(&self, first: ArrowId) -> (Vec<ArrowId>, Vec<ArrowId>) {
        let len = |a: ArrowId, sign| self.faces[self.corner(a, sign).unwrap().0].boundary.len();
        let mut outs = Vec::new();
        let mut ins = Vec::new();
        let mut a = first;
        loop {
            let b = self.neighbour(a, -1, len(a, -1) - 1);
            let next = self.neighbour(b, 1, 1);
            outs.push(a);
            ins.push(b);
            if next == first || outs.len() > self.arrows.len() {
                break;
            }
            a = next;
        }
        (outs, ins)
    }

    fn rotation_cycle_count(&self, v: VertexId) -> usize {
        let mut seen = BTreeSet::new();
        let mut cycles = 0;
        for a in self.outgoing(v) {
            if seen.insert(a) {
                cycles += 1;
                seen.extend(self.rotation_cycle(a).0);
            }
        }
        cycles
    }

    /// The opposite dimer model: every arrow reversed, windings negated and face signs flipped.
    pub fn opposite(&self) -> DimerModel {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id,
                name: a.name.as_ref().map(|n| format!("{n}^op")),
                tail: a.head,
                head: a.tail,
                wind: [-a.wind[0], -a.wind[1]],
            })
            .collect();
        let faces = self
            .faces
            .iter()
            .map(|f| Face { sign: -f.sign, boundary: f.boundary.iter().rev().copied().collect() })
            .collect();
        DimerModel::new(self.vertices, arrows, faces)
            .expect("reversal preserves indexing")
            .with_positions(self.positions.clone())
            .expect("same vertex count")
    }

    /// A shortest weak path from `from` to `to`, ignoring windings.
    pub fn weak_path(&self, from: VertexId, to: VertexId) -> Option<WeakPath> {
        self.search_path(from, to, &[true, false])
    }

    /// A shortest path of arrows from `from` to `to`, ignoring windings.
    pub fn forward_path(&self, from: VertexId, to: VertexId) -> Option<WeakPath> {
        self.search_path(from, to, &[true])
    }

    fn search_path(&self, from: VertexId, to: VertexId, directions: &[bool]) -> Option<WeakPath> {
        let mut parent: Vec<Option<(VertexId, Step)>> = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for arrow in &self.arrows {
                for &forward in directions {
                    let (tail, head) = if forward { (arrow.tail, arrow.head) } else { (arrow.head, arrow.tail) };
                    if tail == v && !seen[head] {
                        seen[head] = true;
                        parent[head] = Some((v, Step { arrow: arrow.id, forward }));
                        queue.push_back(head);
                    }
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut steps = Vec::new();
        let mut v = to;
        while let Some((prev, step)) = parent[v] {
            steps.push(step);
            v = prev;
        }
        steps.reverse();
        Some(WeakPath { start: from, steps })
    }

    /// A shortest weak path from `from` to `to` in the universal cover whose total winding is
    /// `target`, searching translations bounded by the arrow count.
    pub fn shortest_weak_path(
        &self,
        from: VertexId,
        to: VertexId,
        target: [i64; 2],
    ) -> Option<WeakPath> {
        let bound = self.arrows.len().max(1) as i64;
        let start = (from, 0i64, 0i64);
        let mut parent = std::collections::HashMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(state) = queue.pop_front() {
            let (v, dx, dy) = state;
            if v == to && [dx, dy] == target {
                let mut steps = Vec::new();
                let mut cur = state;
                while let Some(Some((prev, step))) = parent.get(&cur).cloned() {
                    steps.push(step);
                    cur = prev;
                }
                steps.reverse();
                return Some(WeakPath { start: from, steps });
            }
            for arrow in &self.arrows {
                for forward in [true, false] {
                    let (tail, head, s) =
                        if forward { (arrow.tail, arrow.head, 1) } else { (arrow.head, arrow.tail, -1) };
                    if tail != v {
                        continue;
                    }
                    let next = (head, dx + s * arrow.wind[0], dy + s * arrow.wind[1]);
                    if next.1.abs() > bound || next.2.abs() > bound || parent.contains_key(&next) {
                        continue;
                    }
                    parent.insert(next, Some((state, Step { arrow: arrow.id, forward })));
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Parses and validates a dimer model from its JSON form.
pub fn parse_dimer(text: &str) -> Result<DimerModel> {
    let doc: DimerDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let model = DimerModel::from_document(doc)?;
    let diagnostics = validate_dimer(&model);
    if diagnostics.is_empty() {
        Ok(model)
    } else {
        Err(Error::Invalid(diagnostics))
    }
}

/// Checks every dimer invariant, returning one diagnostic per violation.
pub fn validate_dimer(model: &DimerModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let name = |a: ArrowId| model.arrow_name(a);

    let euler = model.vertices as i64 - model.arrows.len() as i64 + model.faces.len() as i64;
    if euler != 0 {
        out.push(Diagnostic::new(
            Invariant::Euler,
            format!(
                "V - E + F = {} - {} + {} = {euler}",
                model.vertices,
                model.arrows.len(),
                model.faces.len()
            ),
        ));
    }

    if !is_connected(model) {
        out.push(Diagnostic::new(Invariant::Connected, "the quiver is not connected"));
    }

    let mut incidence_ok = true;
    for a in 0..model.arrows.len() {
        let signs: Vec<i8> = model.incidence[a].iter().map(|&(f, _)| model.faces[f].sign).collect();
        let plus = signs.iter().filter(|&&s| s == 1).count();
        let minus = signs.len() - plus;
        if plus > 1 {
            out.push(Diagnostic::new(
                Invariant::FaceIncidence,
                format!("arrow {} has {plus} +1 faces", name(a)),
            ));
        }
        if minus > 1 {
            out.push(Diagnostic::new(
                Invariant::FaceIncidence,
                format!("arrow {} has {minus} -1 faces", name(a)),
            ));
        }
        if plus == 0 || minus == 0 {
            let missing = if plus == 0 { "+1" } else { "-1" };
            out.push(Diagnostic::new(
                Invariant::FaceIncidence,
                format!("arrow {} lies in no {missing} face", name(a)),
            ));
        }
        incidence_ok &= plus == 1 && minus == 1;
    }

    let mut cycles_ok = true;
    for (f, face) in model.faces.iter().enumerate() {
        let n = face.boundary.len();
        if n < 3 {
            out.push(Diagnostic::new(
                Invariant::FaceCycle,
                format!("face {f} has {n} arrows, at least 3 are needed"),
            ));
            cycles_ok = false;
            continue;
        }
        for k in 0..n {
            let a = model.arrow(face.boundary[k]);
            let b = model.arrow(face.boundary[(k + 1) % n]);
            if a.head != b.tail {
                out.push(Diagnostic::new(
                    Invariant::FaceCycle,
                    format!("face {f}: arrow {} does not end where {} starts", name(a.id), name(b.id)),
                ));
                cycles_ok = false;
            }
        }
        let mut w = [0, 0];
        for &a in &face.boundary {
            w[0] += model.arrow(a).wind[0];
            w[1] += model.arrow(a).wind[1];
        }
        if w != [0, 0] {
            out.push(Diagnostic::new(
                Invariant::FaceWinding,
                format!("face {f} winds by ({}, {}) instead of (0, 0)", w[0], w[1]),
            ));
        }
    }

    if incidence_ok && cycles_ok {
        for v in 0..model.vertices {
            if model.outgoing(v).is_empty() {
                continue;
            }
            if let Err(Error::Invalid(mut d)) = model.vertex_rotation(v) {
                out.append(&mut d);
            }
        }
    }
    out
}

fn is_connected(model: &DimerModel) -> bool {
    if model.vertices == 0 {
        return false;
    }
    let mut adjacency = vec![Vec::new(); model.vertices];
    for a in &model.arrows {
        adjacency[a.tail].push(a.head);
        adjacency[a.head].push(a.tail);
    }
    let mut seen = vec![false; model.vertices];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
