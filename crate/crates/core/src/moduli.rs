//! Stability of torus-fixed representations and the fan of the fine moduli space.
//!
//! A set of arrows `S` (a cosupport) defines the representation with a one-dimensional space at
//! every vertex, where the arrows in `S` act by zero and all others by the identity. It is a
//! module over the Jacobian algebra when, for every superpotential relation, both paths vanish
//! or neither does.
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dimer::{ArrowId, DimerModel, VertexId};
use crate::error::{Error, Result};
use crate::lattice::{self, Point};
use crate::matchings::{self, HomologyBasis, Normalization, PerfectMatching, Polygon};

pub const MAX_VERTICES: usize = 64;

/// A stability parameter: one rational weight per vertex, summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityParam(Vec<BigRational>);

impl StabilityParam {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Input("stability parameter has no weights".into()));
        }
        let sum: BigRational = weights.iter().sum();
        if !sum.is_zero() {
            return Err(Error::Input(format!("stability weights sum to {sum}, not 0")));
        }
        Ok(Self(weights))
    }

    /// The parameter `(1 - n, 1, ..., 1)` for a quiver with `n` vertices.
    pub fn special(vertices: usize) -> Self {
        let mut w = vec![BigRational::one(); vertices];
        w[0] = BigRational::from_integer((1 - vertices as i64).into());
        Self(w)
    }

    /// Parses `special` or a comma separated list of integers and fractions `p/q`.
    pub fn parse(text: &str, vertices: usize) -> Result<Self> {
        if text.trim() == "special" {
            return Ok(Self::special(vertices));
        }
        let weights = text
            .split(',')
            .map(|s| {
                BigRational::from_str(s.trim())
                    .map_err(|e| Error::Input(format!("bad stability weight {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if weights.len() != vertices {
            return Err(Error::Input(format!(
                "{} stability weights given for {vertices} vertices",
                weights.len()
            )));
        }
        Self::new(weights)
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The sum of the weights over the vertices in `mask`.
    pub fn value(&self, mask: u64) -> BigRational {
        self.0.iter().enumerate().filter(|(v, _)| mask >> v & 1 == 1).map(|(_, w)| w).sum()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|w| -w).collect())
    }
}

impl fmt::Display for StabilityParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    /// The cosupport violates a superpotential relation.
    NotARepresentation,
    Unstable,
    StrictlySemistable,
    Stable,
}

/// Nonzero flags for the arrows outside `cosupport`.
pub fn nonzero_outside(model: &DimerModel, cosupport: impl IntoIterator<Item = ArrowId>) -> Vec<bool> {
    let mut nonzero = vec![true; model.arrow_count()];
    for a in cosupport {
        nonzero[a] = false;
    }
    nonzero
}

pub fn relations_hold(model: &DimerModel, nonzero: &[bool]) -> bool {
    let alive = |path: &[ArrowId]| path.iter().all(|&a| nonzero[a]);
    model.f_term_relations().iter().all(|r| alive(&r.plus_path) == alive(&r.minus_path))
}

fn successors_closure(model: &DimerModel, nonzero: &[bool], v: VertexId) -> u64 {
    let mut mask = 1u64 << v;
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for a in model.arrows() {
            if nonzero[a.id] && a.tail == u && mask >> a.head & 1 == 0 {
                mask |= 1 << a.head;
                stack.push(a.head);
            }
        }
    }
    mask
}

/// Vertex sets of the proper nonzero subrepresentations: subsets closed under the nonzero
/// arrows.
pub fn closed_subsets(model: &DimerModel, nonzero: &[bool]) -> Vec<u64> {
    let n = model.vertex_count();
    assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices are supported");
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let generators: Vec<u64> = (0..n).map(|v| successors_closure(model, nonzero, v)).collect();
    let mut seen: HashSet<u64> = generators.iter().copied().collect();
    let mut queue: VecDeque<u64> = generators.iter().copied().collect();
    while let Some(s) = queue.pop_front() {
        for &g in &generators {
            let t = s | g;
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<u64> = seen.into_iter().filter(|&s| s != full).collect();
    out.sort_unstable();
    out
}

pub fn classify(model: &DimerModel, nonzero: &[bool], theta: &StabilityParam) -> Stability {
    if !relations_hold(model, nonzero) {
        return Stability::NotARepresentation;
    }
    let mut result = Stability::Stable;
    for s in closed_subsets(model, nonzero) {
        let value = theta.value(s);
        if value.is_negative() {
            return Stability::Unstable;
        }
        if value.is_zero() {
            result = Stability::StrictlySemistable;
        }
    }
    result
}

/// Stability of the representation whose zero arrows are `cosupport`.
pub fn is_stable_cosupport(model: &DimerModel, cosupport: &[ArrowId], theta: &StabilityParam) -> Stability {
    classify(model, &nonzero_outside(model, cosupport.iter().copied()), theta)
}

/// A cone of the fan as a sorted list of ray indices; the empty list is the zero cone.
pub type Cone = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub point: Point,
    pub matching: PerfectMatching,
}

/// The fan of the moduli space: one ray per lattice point of the polygon and a unimodular
/// triangulation.
#[derive(Clone, Debug)]
pub struct Fan {
    pub rays: Vec<Ray>,
    pub triangles: Vec<[usize; 3]>,
    pub polygon: Polygon,
    pub basis: HomologyBasis,
    pub theta: StabilityParam,
    /// Every perfect matching with its normalized lattice point.
    pub matchings: Vec<(PerfectMatching, Point)>,
}

impl Fan {
    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    /// The primitive generator `(x, y, 1)` of a ray.
    pub fn generator(&self, r: usize) -> [i64; 3] {
        let p = self.rays[r].point;
        [p[0], p[1], 1]
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let set: BTreeSet<[usize; 2]> = self
            .triangles
            .iter()
            .flat_map(|t| [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]])
            .collect();
        set.into_iter().collect()
    }

    pub fn triangles_with_edge(&self, e: [usize; 2]) -> Vec<usize> {
        (0..self.triangles.len())
            .filter(|&t| self.triangles[t].contains(&e[0]) && self.triangles[t].contains(&e[1]))
            .collect()
    }

    /// Rays through interior lattice points give compact divisors.
    pub fn is_compact_ray(&self, r: usize) -> bool {
        self.polygon.is_interior(self.rays[r].point)
    }

    /// Edges shared by two triangles give compact curves.
    pub fn is_compact_edge(&self, e: [usize; 2]) -> bool {
        self.triangles_with_edge(e).len() == 2
    }

    pub fn compact_rays(&self) -> Vec<usize> {
        (0..self.rays.len()).filter(|&r| self.is_compact_ray(r)).collect()
    }

    pub fn compact_edges(&self) -> Vec<[usize; 2]> {
        self.edges().into_iter().filter(|&e| self.is_compact_edge(e)).collect()
    }

    /// Every cone: the zero cone, rays, edges and triangles.
    pub fn cones(&self) -> Vec<Cone> {
        let mut out = vec![Vec::new()];
        out.extend((0..self.rays.len()).map(|r| vec![r]));
        out.extend(self.edges().into_iter().map(|e| e.to_vec()));
        out.extend(self.triangles.iter().map(|t| t.to_vec()));
        out
    }

    /// Whether the rays span a cone of the fan.
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        rays.is_empty() || self.triangles.iter().any(|t| rays.iter().all(|r| t.contains(r)))
    }

    /// Whether the ray contains the arrow in its matching.
    pub fn ray_contains(&self, r: usize, a: ArrowId) -> bool {
        self.rays[r].matching.contains(a)
    }
}

/// Builds the fan for a generic stability parameter.
pub fn build_fan(model: &DimerModel, theta: &StabilityParam, normalization: Normalization) -> Result<Fan> {
    if model.vertex_count() > MAX_VERTICES {
        return Err(Error::Input(format!("at most {MAX_VERTICES} vertices are supported")));
    }
    if theta.len() != model.vertex_count() {
        return Err(Error::Input(format!(
            "stability parameter has {} weights for {} vertices",
            theta.len(),
            model.vertex_count()
        )));
    }
    let (basis, placed, polygon) = matchings::matching_polygon(model, normalization)?;

    let mut stable: Vec<(Point, PerfectMatching)> = Vec::new();
    for (m, p) in &placed {
        match is_stable_cosupport(model, m.arrows(), theta) {
            Stability::Stable => stable.push((*p, m.clone())),
            Stability::StrictlySemistable => {
                return Err(Error::NonGeneric(format!("perfect matching {:?} is strictly semistable", m.arrows())))
            }
            _ => {}
        }
    }
    let mut rays = Vec::new();
    for p in polygon.lattice_points() {
        let at: Vec<&PerfectMatching> = stable.iter().filter(|s| s.0 == p).map(|s| &s.1).collect();
        match at.as_slice() {
            [m] => rays.push(Ray { point: p, matching: (*m).clone() }),
            [] => {
                return Err(Error::Inconsistent(format!("no stable perfect matching at lattice point {p:?}")))
            }
            _ => {
                return Err(Error::Inconsistent(format!(
                    "{} stable perfect matchings at lattice point {p:?}",
                    at.len()
                )))
            }
        }
    }

    let n = rays.len();
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                match classify(model, &cone_nonzero(model, &rays, &[i, j, k]), theta) {
                    Stability::Stable => triangles.push([i, j, k]),
                    Stability::StrictlySemistable => {
                        return Err(Error::NonGeneric(format!(
                            "the representation for rays {:?} is strictly semistable",
                            [i + 1, j + 1, k + 1]
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    let fan = Fan { rays, triangles, polygon, basis, theta: theta.clone(), matchings: placed };
    check_triangulation(&fan)?;

    let edges: BTreeSet<[usize; 2]> = fan.edges().into_iter().collect();
    for i in 0..n {
        for j in i + 1..n {
            let s = classify(model, &cone_nonzero(model, &fan.rays, &[i, j]), theta);
            if s == Stability::StrictlySemistable {
                return Err(Error::NonGeneric(format!(
                    "the representation for rays {:?} is strictly semistable",
                    [i + 1, j + 1]
                )));
            }
            if (s == Stability::Stable) != edges.contains(&[i, j]) {
                return Err(Error::Inconsistent(format!(
                    "stability of rays {:?} disagrees with the triangulation",
                    [i + 1, j + 1]
                )));
            }
        }
    }
    Ok(fan)
}

fn cone_nonzero(model: &DimerModel, rays: &[Ray], cone: &[usize]) -> Vec<bool> {
    nonzero_outside(model, cone.iter().flat_map(|&r| rays[r].matching.arrows().iter().copied()))
}

/// Checks that the triangles are unimodular, tile the polygon and meet edge to edge.
pub fn check_triangulation(fan: &Fan) -> Result<()> {
    let pt = |r: usize| fan.rays[r].point;
    let mut area = 0;
    for t in &fan.triangles {
        let a = lattice::cross(pt(t[0]), pt(t[1]), pt(t[2])).abs();
        if a != 1 {
            return Err(Error::Inconsistent(format!(
                "triangle {:?} has normalized area {a}",
                t.map(|r| r + 1)
            )));
        }
        area += a;
    }
    if area != fan.polygon.twice_area() {
        return Err(Error::Inconsistent(format!(
            "triangles cover normalized area {area} of {}",
            fan.polygon.twice_area()
        )));
    }
    let hull = &fan.polygon.hull;
    for e in fan.edges() {
        let owners = fan.triangles_with_edge(e);
        let on_boundary = (0..hull.len()).any(|k| {
            let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
            lattice::cross(a, b, pt(e[0])) == 0 && lattice::cross(a, b, pt(e[1])) == 0
        });
        let sides: Vec<i64> = owners
            .iter()
            .map(|&t| {
                let third = fan.triangles[t].iter().copied().find(|r| !e.contains(r)).unwrap();
                lattice::cross(pt(e[0]), pt(e[1]), pt(third)).signum()
            })
            .collect();
        let ok = if on_boundary { owners.len() == 1 } else { owners.len() == 2 && sides[0] != sides[1] };
        if !ok {
            return Err(Error::Inconsistent(format!("edge {:?} is not shared correctly", e.map(|r| r + 1))));
        }
    }
    Ok(())
}

/// The torus-fixed module for a cone: arrows in some matching of the cone act by zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusInvariantModule {
    pub cone: Cone,
    pub nonzero: Vec<bool>,
}

pub fn orbit_module(model: &DimerModel, fan: &Fan, cone: &[usize]) -> TorusInvariantModule {
    let nonzero = (0..model.arrow_count()).map(|a| cone.iter().all(|&r| !fan.ray_contains(r, a))).collect();
    TorusInvariantModule { cone: cone.to_vec(), nonzero }
}

/// Vertices with no nonzero outgoing arrow.
pub fn socle_vertices(model: &DimerModel, module: &TorusInvariantModule) -> Vec<VertexId> {
    (0..model.vertex_count())
        .filter(|&v| !model.arrows().iter().any(|a| a.tail == v && module.nonzero[a.id]))
        .collect()
}

/// Components of the fibre over the origin, sorted by dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fibre {
    /// Torus-fixed points that are whole components.
    pub f0: Vec<Cone>,
    /// Curves that are components.
    pub f1: Vec<Cone>,
    /// Divisors.
    pub f2: Vec<Cone>,
}

impl Fibre {
    pub fn equidimensional(&self) -> bool {
        [self.f0.is_empty(), self.f1.is_empty(), self.f2.is_empty()].iter().filter(|&&e| !e).count() <= 1
    }
}

/// An orbit lies over the origin exactly when every arrow into vertex 0 acts by zero.
pub fn origin_fibre(model: &DimerModel, fan: &Fan) -> Fibre {
    let into_zero = model.incoming(0);
    let inside: Vec<Cone> = fan
        .cones()
        .into_iter()
        .filter(|c| into_zero.iter().all(|&a| c.iter().any(|&r| fan.ray_contains(r, a))))
        .collect();
    let components = minimal_cones(inside);
    let of_len = |k| components.iter().filter(|c: &&Cone| c.len() == k).cloned().collect();
    Fibre { f0: of_len(3), f1: of_len(2), f2: of_len(1) }
}

/// The cones not containing another cone of the list, sorted.
pub fn minimal_cones(mut cones: Vec<Cone>) -> Vec<Cone> {
    cones.sort();
    cones.dedup();
    let mut out: Vec<Cone> = cones
        .iter()
        .filter(|c| !cones.iter().any(|d| d != *c && d.iter().all(|r| c.contains(r))))
        .cloned()
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// A path of nonzero arrows from vertex 0 to `j` in the module of a triangle; its section
/// generates the tautological bundle on the chart.
pub fn chart_section_path(model: &DimerModel, fan: &Fan, triangle: [usize; 3], j: VertexId) -> Result<Vec<ArrowId>> {
    let module = orbit_module(model, fan, &triangle);
    let mut parent: Vec<Option<ArrowId>> = vec![None; model.vertex_count()];
    let mut seen = vec![false; model.vertex_count()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for a in model.arrows() {
            if module.nonzero[a.id] && a.tail == v && !seen[a.head] {
                seen[a.head] = true;
                parent[a.head] = Some(a.id);
                queue.push_back(a.head);
            }
        }
    }
    if !seen[j] {
        return Err(Error::Inconsistent(format!(
            "vertex {j} is not reachable in the module of triangle {:?}",
            triangle.map(|r| r + 1)
        )));
    }
    let mut path = Vec::new();
    let mut v = j;
    while let Some(a) = parent[v] {
        path.push(a);
        v = model.arrow(a).tail;
    }
    path.reverse();
    Ok(path)
}
