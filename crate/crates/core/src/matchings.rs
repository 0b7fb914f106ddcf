//! Perfect matchings of a dimer model and the lattice polygon they span.
//!
//! A perfect matching is a set of arrows meeting every face boundary exactly once. Its degree
//! on a weak path counts forward steps through the matching minus backward ones, and the
//! degrees on a basis of weak cycles at vertex 0 place every matching in the plane.
use serde::{Serialize, Serializer};

use crate::dimer::{ArrowId, DimerModel, WeakPath};
use crate::error::{Error, Result};
use crate::lattice::{self, Point};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PerfectMatching(Vec<ArrowId>);

impl PerfectMatching {
    pub fn new(mut arrows: Vec<ArrowId>) -> Self {
        arrows.sort_unstable();
        arrows.dedup();
        Self(arrows)
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.0
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    /// Whether every face boundary meets the set exactly once.
    pub fn is_perfect(&self, model: &DimerModel) -> bool {
        model.faces().iter().all(|f| f.boundary.iter().filter(|&&a| self.contains(a)).count() == 1)
    }
}

impl Serialize for PerfectMatching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// All perfect matchings in lexicographic order, found by exact cover with faces as the
/// constraints and each arrow covering its two faces.
pub fn enumerate_perfect_matchings(model: &DimerModel) -> Vec<PerfectMatching> {
    let covers: Vec<[usize; 2]> =
        (0..model.arrow_count()).map(|a| [model.plus_face(a), model.minus_face(a)]).collect();
    let mut covered = vec![false; model.face_count()];
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    exact_cover(model, &covers, &mut covered, &mut chosen, &mut out);
    out.sort();
    out
}

fn exact_cover(
    model: &DimerModel,
    covers: &[[usize; 2]],
    covered: &mut Vec<bool>,
    chosen: &mut Vec<ArrowId>,
    out: &mut Vec<PerfectMatching>,
) {
    let available = |f: usize, covered: &Vec<bool>| -> Vec<ArrowId> {
        model.face(f).boundary.iter().copied().filter(|&a| covers[a].iter().all(|&g| !covered[g])).collect()
    };
    let mut best: Option<(usize, Vec<ArrowId>)> = None;
    for f in (0..covered.len()).filter(|&f| !covered[f]) {
        let options = available(f, covered);
        if best.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
            best = Some((f, options));
        }
    }
    let Some((_, options)) = best else {
        out.push(PerfectMatching::new(chosen.clone()));
        return;
    };
    for a in options {
        for &g in &covers[a] {
            covered[g] = true;
        }
        chosen.push(a);
        exact_cover(model, covers, covered, chosen, out);
        chosen.pop();
        for &g in &covers[a] {
            covered[g] = false;
        }
    }
}

/// Weak cycles at vertex 0: `x` and `y` wind once around the two torus directions and `z` is
/// a face boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyBasis {
    pub x: WeakPath,
    pub y: WeakPath,
    pub z: WeakPath,
}

pub fn homology_basis(model: &DimerModel) -> Result<HomologyBasis> {
    let cycle = |target| {
        model.shortest_weak_path(0, 0, target).ok_or_else(|| {
            Error::Inconsistent(format!("no weak cycle at vertex 0 winds by {target:?}"))
        })
    };
    let z = [-1i8, 1]
        .iter()
        .flat_map(|&sign| model.faces().iter().filter(move |f| f.sign == sign))
        .find_map(|face| {
            let k = face.boundary.iter().position(|&a| model.arrow(a).tail == 0)?;
            let mut b = face.boundary.clone();
            b.rotate_left(k);
            Some(WeakPath::forward(model, &b))
        })
        .ok_or_else(|| Error::Inconsistent("no face passes through vertex 0".into()))?;
    Ok(HomologyBasis { x: cycle([1, 0])?, y: cycle([0, 1])?, z })
}

pub fn degree(matching: &PerfectMatching, path: &WeakPath) -> i64 {
    path.steps
        .iter()
        .filter(|s| matching.contains(s.arrow))
        .map(|s| if s.forward { 1 } else { -1 })
        .sum()
}

/// The raw lattice point `(deg x, deg y)`; the third coordinate `deg z` is always 1.
pub fn matching_point(basis: &HomologyBasis, matching: &PerfectMatching) -> Point {
    [degree(matching, &basis.x), degree(matching, &basis.y)]
}

/// How raw matching points are translated into the reported polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// The componentwise minimum of the points moves to the origin.
    #[default]
    MinCorner,
    /// The componentwise minimum moves to the given point.
    Anchor(Point),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polygon {
    /// Vertices, anticlockwise from the lowest (then rightmost) one.
    pub hull: Vec<Point>,
    pub interior: Vec<Point>,
    pub boundary_nonvertex: Vec<Point>,
    /// Translation applied to raw matching points.
    #[serde(skip)]
    pub offset: Point,
}

impl Polygon {
    pub fn from_raw_points(raw: &[Point], normalization: Normalization) -> Self {
        let min = [raw.iter().map(|p| p[0]).min().unwrap_or(0), raw.iter().map(|p| p[1]).min().unwrap_or(0)];
        let target = match normalization {
            Normalization::MinCorner => [0, 0],
            Normalization::Anchor(p) => p,
        };
        let offset = [target[0] - min[0], target[1] - min[1]];
        let moved: Vec<Point> = raw.iter().map(|p| [p[0] + offset[0], p[1] + offset[1]]).collect();
        let hull = lattice::convex_hull(&moved);
        let (interior, boundary_nonvertex) = lattice::lattice_points(&hull);
        Self { hull, interior, boundary_nonvertex, offset }
    }

    pub fn normalize(&self, raw: Point) -> Point {
        [raw[0] + self.offset[0], raw[1] + self.offset[1]]
    }

    /// All lattice points in ray order: hull vertices anticlockwise, then the remaining points
    /// lexicographically.
    pub fn lattice_points(&self) -> Vec<Point> {
        let mut rest: Vec<Point> =
            self.interior.iter().chain(&self.boundary_nonvertex).copied().collect();
        rest.sort();
        self.hull.iter().copied().chain(rest).collect()
    }

    pub fn twice_area(&self) -> i64 {
        lattice::twice_area(&self.hull)
    }

    pub fn is_interior(&self, p: Point) -> bool {
        self.interior.contains(&p)
    }
}

/// Every perfect matching with its normalized lattice point.
pub type PlacedMatchings = Vec<(PerfectMatching, Point)>;

/// Matchings paired with their normalized points, and the polygon.
pub fn matching_polygon(
    model: &DimerModel,
    normalization: Normalization,
) -> Result<(HomologyBasis, PlacedMatchings, Polygon)> {
    let basis = homology_basis(model)?;
    let matchings = enumerate_perfect_matchings(model);
    if matchings.is_empty() {
        return Err(Error::Inconsistent("the dimer model has no perfect matching".into()));
    }
    let raw: Vec<Point> = matchings.iter().map(|m| matching_point(&basis, m)).collect();
    let polygon = Polygon::from_raw_points(&raw, normalization);
    let placed = matchings.into_iter().zip(raw).map(|(m, p)| (m, polygon.normalize(p))).collect();
    Ok((basis, placed, polygon))
}
