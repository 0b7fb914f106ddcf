//! Torus-invariant divisors on the resolution, arrow labels, line bundle classes and
//! intersection numbers with compact curves.
//!
//! Divisors are integer vectors indexed by the rays of the fan. The label of an arrow is the
//! sum of the divisors whose perfect matching contains it.
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::dimer::{DimerModel, VertexId, WeakPath};
use crate::error::{Error, Result};
use crate::lattice;
use crate::moduli::{minimal_cones, Cone, Fan};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusDivisor(Vec<i64>);

impl TorusDivisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self(coeffs)
    }

    pub fn zero(rays: usize) -> Self {
        Self(vec![0; rays])
    }

    pub fn from_rays(rays: usize, support: &[usize]) -> Self {
        let mut d = Self::zero(rays);
        for &r in support {
            d.0[r] += 1;
        }
        d
    }

    /// The sum of every torus-invariant prime divisor.
    pub fn all(rays: usize) -> Self {
        Self(vec![1; rays])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Whether the prime divisor of ray `r` appears with positive coefficient.
    pub fn contains(&self, r: usize) -> bool {
        self.0[r] > 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&r| self.0[r] != 0).collect()
    }

    /// Componentwise minimum of effective divisors; the zero divisor for an empty list.
    pub fn gcd<'a>(rays: usize, divisors: impl IntoIterator<Item = &'a TorusDivisor>) -> Self {
        let mut it = divisors.into_iter();
        let Some(first) = it.next() else { return Self::zero(rays) };
        let mut out = first.clone();
        for d in it {
            for (c, &e) in out.0.iter_mut().zip(&d.0) {
                *c = (*c).min(e);
            }
        }
        out
    }

    /// Componentwise maximum of effective divisors; the zero divisor for an empty list.
    pub fn lcm<'a>(rays: usize, divisors: impl IntoIterator<Item = &'a TorusDivisor>) -> Self {
        let mut out = Self::zero(rays);
        for d in divisors {
            for (c, &e) in out.0.iter_mut().zip(&d.0) {
                *c = (*c).max(e);
            }
        }
        out
    }

    /// Ray indices in the support, counted from 1.
    pub fn display_rays(&self) -> Vec<usize> {
        self.support().into_iter().map(|r| r + 1).collect()
    }
}

impl Add for &TorusDivisor {
    type Output = TorusDivisor;
    fn add(self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TorusDivisor {
    type Output = TorusDivisor;
    fn sub(self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &TorusDivisor {
    type Output = TorusDivisor;
    fn neg(self) -> TorusDivisor {
        TorusDivisor(self.0.iter().map(|a| -a).collect())
    }
}

impl Serialize for TorusDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// The label of every arrow.
pub fn arrow_labels(model: &DimerModel, fan: &Fan) -> Vec<TorusDivisor> {
    (0..model.arrow_count())
        .map(|a| {
            let rays: Vec<usize> = (0..fan.ray_count()).filter(|&r| fan.ray_contains(r, a)).collect();
            TorusDivisor::from_rays(fan.ray_count(), &rays)
        })
        .collect()
}

/// The signed sum of the labels along a weak path.
pub fn path_label(labels: &[TorusDivisor], rays: usize, path: &WeakPath) -> TorusDivisor {
    path.steps.iter().fold(TorusDivisor::zero(rays), |acc, s| {
        if s.forward {
            &acc + &labels[s.arrow]
        } else {
            &acc - &labels[s.arrow]
        }
    })
}

/// Irreducible components of the common zero locus of effective divisors: the minimal cones on
/// which every divisor has a prime component.
pub fn common_zero_support(fan: &Fan, divisors: &[TorusDivisor]) -> Vec<Cone> {
    let inside: Vec<Cone> = fan
        .cones()
        .into_iter()
        .filter(|c| divisors.iter().all(|d| c.iter().any(|&r| d.contains(r))))
        .collect();
    minimal_cones(inside)
}

/// Whether the divisor is the divisor of a character of the torus.
pub fn is_principal(fan: &Fan, d: &TorusDivisor) -> bool {
    let Some(m) = character_of(fan, d) else { return false };
    (0..fan.ray_count()).all(|r| {
        let n = fan.generator(r);
        (0..3).map(|k| m[k] * n[k]).sum::<i64>() == d.coeffs()[r]
    })
}

/// The unique character matching `d` on a unimodular triangle, if one exists.
fn character_of(fan: &Fan, d: &TorusDivisor) -> Option<[i64; 3]> {
    let t = fan.triangles.first()?;
    let mut columns = [[0; 3]; 3];
    for (c, &r) in t.iter().enumerate() {
        let n = fan.generator(r);
        for k in 0..3 {
            columns[k][c] = n[k];
        }
    }
    lattice::solve_unimodular(columns, t.map(|r| d.coeffs()[r]))
}

/// A line bundle recorded by a torus-invariant representative divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineBundleClass {
    pub rep: TorusDivisor,
}

impl LineBundleClass {
    pub fn equivalent(&self, other: &LineBundleClass, fan: &Fan) -> bool {
        is_principal(fan, &(&self.rep - &other.rep))
    }

    pub fn inverse(&self) -> LineBundleClass {
        LineBundleClass { rep: -&self.rep }
    }
}

/// The tautological bundle at vertex `i`: the label of any weak path from 0 to `i`. A path of
/// arrows is preferred, which makes the representative effective.
pub fn line_bundle_class(model: &DimerModel, fan: &Fan, labels: &[TorusDivisor], i: VertexId) -> Result<LineBundleClass> {
    let path = model
        .forward_path(0, i)
        .or_else(|| model.weak_path(0, i))
        .ok_or_else(|| Error::Inconsistent(format!("vertex {i} is not connected to vertex 0")))?;
    Ok(LineBundleClass { rep: path_label(labels, fan.ray_count(), &path) })
}

/// Intersection numbers of the compact curve of an interior edge with every prime divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveData {
    pub edge: [usize; 2],
    /// The third vertices of the two triangles on the edge.
    pub opposite: [usize; 2],
    /// `E_r . C` for every ray `r`.
    pub intersections: Vec<i64>,
}

impl CurveData {
    /// The degrees of the normal bundle: intersections with the divisors of the edge.
    pub fn normal_degrees(&self) -> [i64; 2] {
        self.edge.map(|r| self.intersections[r])
    }

    pub fn is_minus1_minus1(&self) -> bool {
        self.normal_degrees() == [-1, -1]
    }
}

/// Uses the linear relation `n(u1) + n(u2) = c1 n(v1) + c2 n(v2)` among ray generators, which
/// gives `E_v . C = -c` and `E_u . C = 1`.
pub fn curve_intersection_data(fan: &Fan, edge: [usize; 2]) -> Result<CurveData> {
    let owners = fan.triangles_with_edge(edge);
    if owners.len() != 2 {
        return Err(Error::Input(format!("edge {:?} is not an interior edge", edge.map(|r| r + 1))));
    }
    let third = |t: usize| fan.triangles[t].iter().copied().find(|r| !edge.contains(r)).unwrap();
    let opposite = [third(owners[0]), third(owners[1])];
    let p = |r: usize| fan.rays[r].point;
    let w = [p(opposite[0])[0] + p(opposite[1])[0], p(opposite[0])[1] + p(opposite[1])[1]];
    let (v1, v2) = (p(edge[0]), p(edge[1]));
    let d = [v1[0] - v2[0], v1[1] - v2[1]];
    let rest = [w[0] - 2 * v2[0], w[1] - 2 * v2[1]];
    let k = if d[0] != 0 { 0 } else { 1 };
    if d[k] == 0 || rest[k] % d[k] != 0 {
        return Err(Error::Inconsistent(format!("edge {:?} has no integral relation", edge.map(|r| r + 1))));
    }
    let c1 = rest[k] / d[k];
    if [c1 * d[0], c1 * d[1]] != rest {
        return Err(Error::Inconsistent(format!("edge {:?} has no integral relation", edge.map(|r| r + 1))));
    }
    let c2 = 2 - c1;
    let mut intersections = vec![0; fan.ray_count()];
    intersections[opposite[0]] = 1;
    intersections[opposite[1]] = 1;
    intersections[edge[0]] = -c1;
    intersections[edge[1]] = -c2;
    Ok(CurveData { edge, opposite, intersections })
}

pub fn bundle_degree(curve: &CurveData, divisor: &TorusDivisor) -> i64 {
    curve.intersections.iter().zip(divisor.coeffs()).map(|(e, c)| e * c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::tests::FIXTURES;
    use crate::moduli::tests::special_fan;
    use proptest::prelude::*;

    /// Independent oracle: search small integer coefficients for the relation among generators.
    fn brute_force_normal_degrees(fan: &Fan, edge: [usize; 2], opposite: [usize; 2]) -> [i64; 2] {
        let g = |r| fan.generator(r);
        for a in -6..=6 {
            for b in -6..=6 {
                let total: Vec<i64> =
                    (0..3).map(|k| g(opposite[0])[k] + g(opposite[1])[k] + a * g(edge[0])[k] + b * g(edge[1])[k]).collect();
                if total.iter().all(|&t| t == 0) {
                    return [a, b];
                }
            }
        }
        panic!("no relation");
    }

    #[test]
    fn face_labels_sum_to_every_divisor() {
        for name in FIXTURES {
            let (model, fan) = special_fan(name);
            let labels = arrow_labels(&model, &fan);
            for face in model.faces() {
                let total = face.boundary.iter().fold(TorusDivisor::zero(fan.ray_count()), |acc, &a| &acc + &labels[a]);
                assert_eq!(total, TorusDivisor::all(fan.ray_count()), "{name}");
            }
        }
    }

    #[test]
    fn conifold_curve_is_minus_one_minus_one() {
        let (_, fan) = special_fan("conifold");
        let edges = fan.compact_edges();
        assert_eq!(edges.len(), 1);
        let c = curve_intersection_data(&fan, edges[0]).unwrap();
        assert!(c.is_minus1_minus1());
    }

    #[test]
    fn a1_line_curve_is_zero_minus_two() {
        let (_, fan) = special_fan("a1_times_line");
        let edges = fan.compact_edges();
        assert_eq!(edges.len(), 1);
        let c = curve_intersection_data(&fan, edges[0]).unwrap();
        let mut d = c.normal_degrees();
        d.sort();
        assert_eq!(d, [-2, 0]);
    }

    #[test]
    fn intersections_match_brute_force() {
        for name in FIXTURES {
            let (_, fan) = special_fan(name);
            for e in fan.compact_edges() {
                let c = curve_intersection_data(&fan, e).unwrap();
                assert_eq!(c.normal_degrees(), brute_force_normal_degrees(&fan, e, c.opposite), "{name}");
                assert_eq!(c.normal_degrees().iter().sum::<i64>(), -2);
            }
        }
    }

    #[test]
    fn principal_divisors_have_degree_zero() {
        for name in FIXTURES {
            let (_, fan) = special_fan(name);
            for m in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, -3, 5]] {
                let d = TorusDivisor::new(
                    (0..fan.ray_count()).map(|r| (0..3).map(|k| m[k] * fan.generator(r)[k]).sum()).collect(),
                );
                assert!(is_principal(&fan, &d));
                for e in fan.compact_edges() {
                    assert_eq!(bundle_degree(&curve_intersection_data(&fan, e).unwrap(), &d), 0);
                }
            }
            for r in 0..fan.ray_count() {
                let e = TorusDivisor::from_rays(fan.ray_count(), &[r]);
                let degrees: Vec<i64> = fan
                    .compact_edges()
                    .into_iter()
                    .map(|c| bundle_degree(&curve_intersection_data(&fan, c).unwrap(), &e))
                    .collect();
                if degrees.iter().any(|&d| d != 0) {
                    assert!(!is_principal(&fan, &e), "{name}");
                }
            }
        }
    }

    #[test]
    fn zero_support() {
        let (_, fan) = special_fan("ten_vertex");
        let n = fan.ray_count();
        let e = |r: &[usize]| TorusDivisor::from_rays(n, r);
        assert_eq!(common_zero_support(&fan, &[e(&[5, 8])]), vec![vec![5], vec![8]]);
        assert_eq!(common_zero_support(&fan, &[e(&[5]), e(&[8])]), vec![vec![5, 8]]);
        assert!(common_zero_support(&fan, &[e(&[0]), e(&[4])]).is_empty());
        assert!(common_zero_support(&fan, &[e(&[0]), TorusDivisor::zero(n)]).is_empty());
        assert_eq!(common_zero_support(&fan, &[]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn bundle_class_ignores_path_choice() {
        let (model, fan) = special_fan("ten_vertex");
        let labels = arrow_labels(&model, &fan);
        for i in 0..model.vertex_count() {
            let a = line_bundle_class(&model, &fan, &labels, i).unwrap();
            let other = model.shortest_weak_path(0, i, [1, -1]).unwrap();
            let b = LineBundleClass { rep: path_label(&labels, fan.ray_count(), &other) };
            assert!(a.equivalent(&b, &fan));
        }
    }

    proptest! {
        #[test]
        fn gcd_and_lcm_bound(a in proptest::collection::vec(0i64..3, 6), b in proptest::collection::vec(0i64..3, 6)) {
            let (a, b) = (TorusDivisor::new(a), TorusDivisor::new(b));
            let g = TorusDivisor::gcd(6, [&a, &b]);
            let l = TorusDivisor::lcm(6, [&a, &b]);
            prop_assert!((&a - &g).is_effective() && (&b - &g).is_effective());
            prop_assert!((&l - &a).is_effective() && (&l - &b).is_effective());
            prop_assert_eq!(&(&g + &l), &(&a + &b));
        }
    }
}
