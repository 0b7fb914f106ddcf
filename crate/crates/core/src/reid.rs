//! Classification of the transforms of the vertex simples: supports of their cohomology
//! sheaves, GIT walls of the chamber and the cross-checks tying them together.
//!
//! Every vertex `i` gives a wheel of line bundles built from the arrows around `i`. Its spokes
//! and rim carry divisor labels, and all supports are common zero loci of those labels.
use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dimer::{DimerModel, Rotation, VertexId};
use crate::divisors::{
    arrow_labels, bundle_degree, common_zero_support, curve_intersection_data, line_bundle_class, LineBundleClass,
    TorusDivisor,
};
use crate::error::{Error, Result};
use crate::lp::{int, LinearProgram, LpOutcome, Relation};
use crate::matchings::Normalization;
use crate::moduli::{
    build_fan, closed_subsets, minimal_cones, orbit_module, origin_fibre, socle_vertices, Cone, Fan, Fibre,
    StabilityParam,
};

/// One arrow of a wheel, indexed from 0 by the rotation position `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WheelArrow {
    /// Label of `a_j`.
    In(usize),
    /// Label of `b_j`.
    Out(usize),
    /// The rim from the tail of `b_j` to the head of `a_j`.
    RimSame(usize),
    /// The rim from the tail of `b_j` to the head of `a_{j+1}`.
    RimNext(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wheel {
    pub vertex: VertexId,
    pub rotation: Rotation,
    pub in_spokes: Vec<TorusDivisor>,
    pub out_spokes: Vec<TorusDivisor>,
    pub rim_same: Vec<TorusDivisor>,
    pub rim_next: Vec<TorusDivisor>,
}

impl Wheel {
    pub fn build(model: &DimerModel, labels: &[TorusDivisor], i: VertexId) -> Result<Self> {
        let rotation = model.vertex_rotation(i)?;
        let rays = labels.first().map_or(0, |l| l.len());
        let sum = |arrows: &[usize]| arrows.iter().fold(TorusDivisor::zero(rays), |acc, &a| &acc + &labels[a]);
        let m = rotation.len();
        let mut rim_same = Vec::with_capacity(m);
        let mut rim_next = Vec::with_capacity(m);
        for j in 0..m {
            let same = model.face_complement(rotation.outgoing[j], -1);
            rim_same.push(sum(&same[..same.len() - 1]));
            let next = model.face_complement(rotation.incoming[j], 1);
            rim_next.push(sum(&next[1..]));
        }
        let wheel = Self {
            vertex: i,
            in_spokes: rotation.outgoing.iter().map(|&a| labels[a].clone()).collect(),
            out_spokes: rotation.incoming.iter().map(|&a| labels[a].clone()).collect(),
            rotation,
            rim_same,
            rim_next,
        };
        wheel.check_relations().map_err(|detail| Error::cross_check(i, "relations", detail))?;
        Ok(wheel)
    }

    pub fn m(&self) -> usize {
        self.in_spokes.len()
    }

    pub fn label(&self, arrow: WheelArrow) -> &TorusDivisor {
        match arrow {
            WheelArrow::In(j) => &self.in_spokes[j],
            WheelArrow::Out(j) => &self.out_spokes[j],
            WheelArrow::RimSame(j) => &self.rim_same[j],
            WheelArrow::RimNext(j) => &self.rim_next[j],
        }
    }

    pub fn arrows(&self) -> Vec<WheelArrow> {
        (0..self.m())
            .flat_map(|j| [WheelArrow::In(j), WheelArrow::Out(j), WheelArrow::RimSame(j), WheelArrow::RimNext(j)])
            .collect()
    }

    /// The in-spoke `D^j` for a cyclic index counted from 1.
    fn d(&self, j: usize) -> &TorusDivisor {
        &self.in_spokes[(j + self.m() - 1) % self.m()]
    }

    /// The gcd of the two rims leaving the tail of `b_j`, for `j` counted from 1.
    fn g(&self, j: usize) -> TorusDivisor {
        let k = (j + self.m() - 1) % self.m();
        TorusDivisor::gcd(0, [&self.rim_same[k], &self.rim_next[k]])
    }

    fn rays(&self) -> usize {
        self.in_spokes[0].len()
    }

    /// The two linear relations between spokes and rims around each corner of the wheel.
    pub fn check_relations(&self) -> std::result::Result<(), String> {
        let m = self.m();
        for j in 0..m {
            let next = (j + 1) % m;
            let prev = (j + m - 1) % m;
            if &self.rim_next[j] + &self.in_spokes[next] != &self.rim_same[j] + &self.in_spokes[j] {
                return Err(format!("rim relation fails at position {}", j + 1));
            }
            if &self.rim_next[prev] + &self.out_spokes[prev] != &self.rim_same[j] + &self.out_spokes[j] {
                return Err(format!("spoke relation fails at position {}", j + 1));
            }
            if !(self.rim_same[j].is_effective() && self.rim_next[j].is_effective()) {
                return Err(format!("rim label at position {} is not effective", j + 1));
            }
        }
        Ok(())
    }

    /// Every compact divisor lies in exactly one label of each triangle out-spoke, rim,
    /// in-spoke.
    pub fn check_one_of_three(&self, compact: &[usize]) -> std::result::Result<(), String> {
        let m = self.m();
        for &e in compact {
            for j in 0..m {
                for (rim, inward) in [(&self.rim_same[j], j), (&self.rim_next[j], (j + 1) % m)] {
                    let count = [&self.out_spokes[j], rim, &self.in_spokes[inward]]
                        .iter()
                        .filter(|d| d.contains(e))
                        .count();
                    if count != 1 {
                        return Err(format!("E{} lies in {count} labels of a cycle at position {}", e + 1, j + 1));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Transpositions of `m` letters in the order used by the degree -1 filtration, counted from 1.
pub fn transposition_order(m: usize) -> Vec<(usize, usize)> {
    if m < 2 {
        return Vec::new();
    }
    if m == 2 {
        return vec![(1, 2)];
    }
    let mut out: Vec<(usize, usize)> = (1..m).map(|j| (j, j + 1)).collect();
    out.push((1, m));
    out.extend((m + 1..=2 * m - 3).map(|j| (1, j - m + 2)));
    for mu in 2..=m {
        for nu in mu + 2..=m {
            out.push((mu, nu));
        }
    }
    out
}

/// Support of the degree 0 cohomology: the common zeros of the in-spokes.
pub fn h0_support(fan: &Fan, wheel: &Wheel) -> Vec<Cone> {
    common_zero_support(fan, &wheel.in_spokes)
}

/// The same locus found from modules: orbits whose module has `i` as a sink.
pub fn socle_support(model: &DimerModel, fan: &Fan, i: VertexId) -> Vec<Cone> {
    let inside: Vec<Cone> = fan
        .cones()
        .into_iter()
        .filter(|c| socle_vertices(model, &orbit_module(model, fan, c)).contains(&i))
        .collect();
    minimal_cones(inside)
}

/// The divisor whose restriction carries the degree -2 cohomology: the gcd of the out-spokes.
pub fn h2_divisor(wheel: &Wheel) -> TorusDivisor {
    TorusDivisor::gcd(wheel.rays(), &wheel.out_spokes)
}

/// Lists of divisors whose common zero loci make up the degree -1 support, one list per
/// position of the transposition order.
pub fn hminus1_divisor_lists(wheel: &Wheel) -> Vec<Vec<TorusDivisor>> {
    let m = wheel.m();
    let n = wheel.rays();
    let lcm = |ds: Vec<&TorusDivisor>| TorusDivisor::lcm(n, ds);
    let all_d: Vec<&TorusDivisor> = (1..=m).map(|j| wheel.d(j)).collect();
    let mut lists = Vec::new();
    for j in 1..=m {
        let gs: Vec<TorusDivisor> = (j + 1..=m).map(|k| wheel.g(k)).collect();
        let big = lcm(all_d.iter().copied().chain(gs.iter()).collect());
        lists.push(vec![wheel.g(j), &big - &lcm(vec![wheel.d(j), wheel.d(j + 1)])]);
    }
    for nu in 3..m {
        let base = lcm(vec![wheel.d(1), wheel.d(nu)]);
        let tail = lcm(std::iter::once(wheel.d(1)).chain((nu..=m).map(|k| wheel.d(k))).collect());
        let step = lcm(vec![wheel.d(1), wheel.d(nu - 1), wheel.d(nu)]);
        lists.push(vec![&tail - &base, &step - &base]);
    }
    for &(mu, nu) in transposition_order(m).iter().skip(2 * m - 3) {
        let base = lcm(vec![wheel.d(mu), wheel.d(nu)]);
        lists.push(
            (1..mu)
                .chain(std::iter::once(nu - 1))
                .map(|k| &lcm(vec![wheel.d(k), wheel.d(mu), wheel.d(nu)]) - &base)
                .collect(),
        );
    }
    lists
}

/// Degree -1 support as the union of the common zero loci of [`hminus1_divisor_lists`].
pub fn hminus1_support(fan: &Fan, wheel: &Wheel) -> Vec<Cone> {
    let all: Vec<Cone> = hminus1_divisor_lists(wheel).iter().flat_map(|l| common_zero_support(fan, l)).collect();
    minimal_cones(all)
}

/// Degree -1 support by testing each compact divisor directly against the wheel labels.
pub fn hminus1_criterion(fan: &Fan, wheel: &Wheel) -> Vec<usize> {
    let m = wheel.m();
    fan.compact_rays()
        .into_iter()
        .filter(|&e| {
            let d = |j: usize| wheel.d(j).contains(e);
            let g = |j: usize| wheel.g(j).contains(e);
            let first = (1..=m).any(|j| {
                let after = j % m + 1;
                g(j) && !d(j)
                    && !d(after)
                    && ((1..=m).any(|k| k != j && k != after && d(k)) || (j + 1..=m).any(g))
            });
            let second = (3..m).any(|nu| !d(1) && !d(nu) && d(nu - 1) && (nu + 1..=m).any(d));
            let third = transposition_order(m)
                .iter()
                .skip(2 * m - 3)
                .any(|&(mu, nu)| !d(mu) && !d(nu) && (1..mu).chain(std::iter::once(nu - 1)).all(d));
            first || second || third
        })
        .collect()
}

/// Runs both routes and requires them to agree on compact divisors only.
pub fn hminus1_checked(fan: &Fan, wheel: &Wheel) -> Result<Vec<usize>> {
    let i = wheel.vertex;
    let route1 = hminus1_support(fan, wheel);
    if let Some(c) = route1.iter().find(|c| c.len() != 1 || !fan.is_compact_ray(c[0])) {
        return Err(Error::cross_check(i, "dimension2", format!("component {} is not a compact divisor", describe(c))));
    }
    let rays: Vec<usize> = route1.iter().map(|c| c[0]).collect();
    let route2 = hminus1_criterion(fan, wheel);
    if rays != route2 {
        return Err(Error::cross_check(
            i,
            "hminus1_routes",
            format!("filtration route gives {rays:?}, divisor criterion gives {route2:?}"),
        ));
    }
    Ok(rays)
}

/// The wheel arrows whose labels contain a compact divisor outside the support, for the
/// indices `mu, nu` counted from 1.
pub fn vanishing_pattern(m: usize, mu: usize, nu: usize) -> BTreeSet<WheelArrow> {
    let z = |k: usize| (k + 2 * m - 1) % m;
    let mut set = BTreeSet::new();
    let inward = (nu + 2 * m - mu - 1) % m;
    for s in 0..inward {
        set.insert(WheelArrow::In(z(mu + 1 + s)));
    }
    let outward = (mu + m - nu) % m;
    for s in 0..outward {
        set.insert(WheelArrow::Out(z(nu + s)));
    }
    set.insert(WheelArrow::RimNext(z(nu + m - 1)));
    set.insert(WheelArrow::RimSame(z(mu)));
    set
}

pub fn check_vanishing_pattern(fan: &Fan, wheel: &Wheel, support_rays: &[usize]) -> std::result::Result<(), String> {
    let m = wheel.m();
    let patterns: Vec<BTreeSet<WheelArrow>> =
        (1..=m).flat_map(|mu| (1..=m).map(move |nu| vanishing_pattern(m, mu, nu))).collect();
    for e in fan.compact_rays().into_iter().filter(|e| !support_rays.contains(e)) {
        let found: BTreeSet<WheelArrow> = wheel.arrows().into_iter().filter(|&a| wheel.label(a).contains(e)).collect();
        if !patterns.contains(&found) {
            return Err(format!("E{} lies in labels {found:?}, which fit no vanishing pattern", e + 1));
        }
    }
    Ok(())
}

/// Whether the orbit closures form a connected set, two meeting when their rays span a cone.
pub fn components_connected(fan: &Fan, components: &[Cone]) -> bool {
    if components.is_empty() {
        return false;
    }
    let mut reached = vec![false; components.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(k) = stack.pop() {
        for l in 0..components.len() {
            if !reached[l] {
                let union: BTreeSet<usize> = components[k].iter().chain(&components[l]).copied().collect();
                if fan.is_cone(&union.into_iter().collect::<Vec<_>>()) {
                    reached[l] = true;
                    stack.push(l);
                }
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// The chamber of the stability parameter: `theta(S) > 0` for every vertex set `S` of a proper
/// nonzero submodule of a torus-fixed stable module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub vertices: usize,
    pub inequalities: Vec<u64>,
}

impl Chamber {
    pub fn new(model: &DimerModel, fan: &Fan) -> Self {
        let set: BTreeSet<u64> = fan
            .triangles
            .iter()
            .flat_map(|t| closed_subsets(model, &orbit_module(model, fan, t).nonzero))
            .collect();
        Self { vertices: model.vertex_count(), inequalities: set.into_iter().collect() }
    }

    pub fn subsets(&self) -> Vec<Vec<usize>> {
        self.inequalities.iter().map(|&s| (0..self.vertices).filter(|v| s >> v & 1 == 1).collect()).collect()
    }

    pub fn contains(&self, theta: &StabilityParam) -> bool {
        self.inequalities.iter().all(|&s| theta.value(s).is_positive())
    }

    fn row(&self, s: u64) -> Vec<BigRational> {
        (0..self.vertices).map(|v| if s >> v & 1 == 1 { BigRational::one() } else { BigRational::zero() }).collect()
    }

    /// Whether `theta_i = 0` cuts out a facet of the closed chamber, decided by two exact linear
    /// programs: `theta_i >= 0` must be valid, and some point of the hyperplane must satisfy all
    /// other inequalities strictly.
    pub fn has_facet(&self, i: VertexId) -> bool {
        let n = self.vertices;
        let unit = |k: usize| {
            let mut e = vec![BigRational::zero(); n];
            e[k] = BigRational::one();
            e
        };
        let ones = vec![BigRational::one(); n];

        let mut valid = LinearProgram::new(n);
        valid.add(ones.clone(), Relation::Eq, BigRational::zero());
        valid.add(unit(i), Relation::Le, -BigRational::one());
        for &s in &self.inequalities {
            valid.add(self.row(s), Relation::Ge, BigRational::zero());
        }
        if valid.is_feasible() {
            return false;
        }

        let mut slice = LinearProgram::new(n + 1);
        let widen = |mut row: Vec<BigRational>, t: i64| {
            row.push(int(t));
            row
        };
        slice.add(widen(ones, 0), Relation::Eq, BigRational::zero());
        slice.add(widen(unit(i), 0), Relation::Eq, BigRational::zero());
        slice.add(widen(vec![BigRational::zero(); n], 1), Relation::Le, BigRational::one());
        for &s in self.inequalities.iter().filter(|&&s| s != 1 << i) {
            slice.add(widen(self.row(s), -1), Relation::Ge, BigRational::zero());
        }
        let mut objective = vec![BigRational::zero(); n + 1];
        objective[n] = BigRational::one();
        matches!(slice.maximize(&objective), LpOutcome::Optimal { value, .. } if value.is_positive())
    }
}

/// Whether `i` is a sink in the module of some triangle.
pub fn socle_wall(model: &DimerModel, fan: &Fan, i: VertexId) -> bool {
    fan.triangles.iter().any(|t| socle_vertices(model, &orbit_module(model, fan, t)).contains(&i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WallType {
    /// The unstable locus is a single compact curve.
    #[serde(rename = "I")]
    One,
    /// The unstable locus is a union of compact divisors.
    #[serde(rename = "0")]
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallRecord {
    pub vertex: VertexId,
    pub socle_route: bool,
    pub facet_route: bool,
    pub kind: Option<WallType>,
    pub unstable_locus: Vec<Cone>,
}

/// The chamber and a wall record for every nonzero vertex, with the socle and facet routes
/// cross-checked against each other and against the degree 0 support.
pub fn chamber_and_walls(model: &DimerModel, fan: &Fan, labels: &[TorusDivisor]) -> Result<(Chamber, Vec<WallRecord>)> {
    let chamber = Chamber::new(model, fan);
    if !chamber.contains(&fan.theta) {
        return Err(Error::cross_check(0, "chamber", "the stability parameter violates a chamber inequality"));
    }
    let mut walls = Vec::new();
    for i in 1..model.vertex_count() {
        let wheel = Wheel::build(model, labels, i)?;
        let locus = h0_support(fan, &wheel);
        let socle_route = socle_wall(model, fan, i);
        let facet_route = chamber.has_facet(i);
        if socle_route != facet_route || socle_route == locus.is_empty() {
            return Err(Error::cross_check(
                i,
                "socle_eq_facet",
                format!("socle route {socle_route}, facet route {facet_route}, locus {}", describe_union(&locus)),
            ));
        }
        let kind = if !socle_route {
            None
        } else if locus.len() == 1 && locus[0].len() == 2 && fan.is_compact_edge([locus[0][0], locus[0][1]]) {
            let curve = curve_intersection_data(fan, [locus[0][0], locus[0][1]])?;
            if !curve.is_minus1_minus1() {
                return Err(Error::cross_check(
                    i,
                    "wall_type",
                    format!(
                        "unstable curve {} has normal degrees {:?}, so the wall contracts a surface (type III)",
                        describe(&locus[0]),
                        curve.normal_degrees()
                    ),
                ));
            }
            Some(WallType::One)
        } else if locus.iter().all(|c| c.len() == 1 && fan.is_compact_ray(c[0])) {
            Some(WallType::Zero)
        } else {
            return Err(Error::cross_check(
                i,
                "wall_type",
                format!("unstable locus {} is neither a compact curve nor compact divisors", describe_union(&locus)),
            ));
        };
        walls.push(WallRecord { vertex: i, socle_route, facet_route, kind, unstable_locus: locus });
    }
    Ok((chamber, walls))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PsiCase {
    /// The inverse tautological bundle restricted to compact divisors.
    #[serde(rename = "div0")]
    Div0,
    /// The inverse tautological bundle restricted to a compact curve.
    #[serde(rename = "curve0")]
    Curve0,
    /// A sheaf on compact divisors, shifted into degree -1.
    #[serde(rename = "sheaf-1")]
    SheafMinus1,
    /// The dualizing complex of the fibre over the origin.
    #[serde(rename = "dualizing")]
    Dualizing,
}

/// Outcome of every cross-check for one vertex; `None` where a check does not apply.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PsiChecks {
    pub relations: bool,
    pub one_of_three: bool,
    pub exclusivity: Option<bool>,
    pub connectivity: bool,
    pub dimension2: Option<bool>,
    pub flop_degrees: Option<bool>,
    pub socle_eq_facet: Option<bool>,
    pub vanishing_pattern: Option<bool>,
}

/// Support data of the fibre over the origin, reported for vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroVertex {
    pub fibre: Fibre,
    /// Support of the degree -2 cohomology, from the wheel at vertex 0.
    pub h_minus2: Vec<Cone>,
    /// Support of the degree -1 cohomology: the curve components of the fibre.
    pub h_minus1: Vec<Cone>,
    pub pure: bool,
    /// When pure, the dualizing complex is a sheaf placed in degree minus this dimension.
    pub shift: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiEntry {
    pub vertex: VertexId,
    pub case: PsiCase,
    pub support: Vec<Cone>,
    /// The inverse tautological bundle, for the degree 0 cases.
    pub bundle: Option<LineBundleClass>,
    pub wall: Option<WallType>,
    pub checks: PsiChecks,
    pub zero: Option<ZeroVertex>,
}

impl PsiEntry {
    /// A readable formula for the object, with rays counted from 1.
    pub fn formula(&self) -> String {
        let i = self.vertex;
        match self.case {
            PsiCase::Div0 | PsiCase::Curve0 => format!("L{i}^-1|{}", describe_union(&self.support)),
            PsiCase::SheafMinus1 => format!("F[1], supp F = {}", describe_union(&self.support)),
            PsiCase::Dualizing => match self.zero.as_ref().and_then(|z| z.shift) {
                Some(d) => format!("dualizing complex of {}, a sheaf in degree -{d}", describe_union(&self.support)),
                None => format!("dualizing complex of {}, not pure", describe_union(&self.support)),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct PsiReport {
    pub entries: Vec<PsiEntry>,
    pub walls: Vec<WallRecord>,
    pub chamber: Chamber,
}

pub fn describe(cone: &Cone) -> String {
    if cone.is_empty() {
        return "Y".into();
    }
    cone.iter().map(|r| format!("E{}", r + 1)).collect::<Vec<_>>().join("∩")
}

pub fn describe_union(components: &[Cone]) -> String {
    if components.is_empty() {
        return "∅".into();
    }
    components.iter().map(describe).collect::<Vec<_>>().join("∪")
}

/// Support data at vertex 0, checked against the degree -2 divisor of its wheel.
pub fn psi_zero_vertex(model: &DimerModel, fan: &Fan, labels: &[TorusDivisor]) -> Result<ZeroVertex> {
    let fibre = origin_fibre(model, fan);
    let wheel = Wheel::build(model, labels, 0)?;
    let h2: Vec<Cone> = h2_divisor(&wheel).support().into_iter().map(|r| vec![r]).collect();
    if h2 != fibre.f2 {
        return Err(Error::cross_check(
            0,
            "h2_fibre",
            format!("degree -2 support {} differs from fibre divisors {}", describe_union(&h2), describe_union(&fibre.f2)),
        ));
    }
    let pure = fibre.equidimensional();
    let shift = if !pure {
        None
    } else if !fibre.f2.is_empty() {
        Some(2)
    } else if !fibre.f1.is_empty() {
        Some(1)
    } else {
        Some(0)
    };
    Ok(ZeroVertex { h_minus2: h2, h_minus1: fibre.f1.clone(), pure, shift, fibre })
}

/// Classifies every vertex, aborting on the first failed cross-check.
pub fn classify_psi(model: &DimerModel, fan: &Fan) -> Result<PsiReport> {
    let labels = arrow_labels(model, fan);
    let (chamber, walls) = chamber_and_walls(model, fan, &labels)?;
    let compact = fan.compact_rays();
    let mut entries = Vec::new();

    let zero = psi_zero_vertex(model, fan, &labels)?;
    let wheel = Wheel::build(model, &labels, 0)?;
    wheel.check_one_of_three(&compact).map_err(|d| Error::cross_check(0, "one_of_three", d))?;
    let mut support: Vec<Cone> = zero.fibre.f2.iter().chain(&zero.fibre.f1).chain(&zero.fibre.f0).cloned().collect();
    support.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let connectivity = components_connected(fan, &support);
    if !connectivity {
        return Err(Error::cross_check(0, "connectivity", format!("fibre {} is disconnected", describe_union(&support))));
    }
    entries.push(PsiEntry {
        vertex: 0,
        case: PsiCase::Dualizing,
        support,
        bundle: Some(LineBundleClass { rep: TorusDivisor::zero(fan.ray_count()) }),
        wall: None,
        checks: PsiChecks { relations: true, one_of_three: true, connectivity, ..Default::default() },
        zero: Some(zero),
    });

    for wall in &walls {
        entries.push(classify_vertex(model, fan, &labels, wall)?);
    }
    Ok(PsiReport { entries, walls, chamber })
}

fn classify_vertex(model: &DimerModel, fan: &Fan, labels: &[TorusDivisor], wall: &WallRecord) -> Result<PsiEntry> {
    let i = wall.vertex;
    let fail = |check, detail: String| Error::cross_check(i, check, detail);
    let wheel = Wheel::build(model, labels, i)?;
    let compact = fan.compact_rays();
    wheel.check_one_of_three(&compact).map_err(|d| fail("one_of_three", d))?;
    if !h2_divisor(&wheel).is_zero() {
        return Err(fail("h2_vanishing", format!("degree -2 divisor {:?} is nonzero", h2_divisor(&wheel).display_rays())));
    }
    let z = h0_support(fan, &wheel);
    let socle = socle_support(model, fan, i);
    if z != socle {
        return Err(fail("socle_eq_facet", format!("in-spoke zeros {} but socle scan {}", describe_union(&z), describe_union(&socle))));
    }
    let h1 = hminus1_checked(fan, &wheel)?;
    if z.is_empty() == h1.is_empty() {
        return Err(fail(
            "exclusivity",
            format!("degree 0 support {} and degree -1 support {h1:?}", describe_union(&z)),
        ));
    }
    let bundle = line_bundle_class(model, fan, labels, i)?;

    let (case, support, flop) = match wall.kind {
        Some(WallType::One) => {
            let edge = [z[0][0], z[0][1]];
            let curve = curve_intersection_data(fan, edge)?;
            if !curve.is_minus1_minus1() {
                return Err(fail("flop_degrees", format!("curve {} has normal degrees {:?}", describe(&z[0]), curve.normal_degrees())));
            }
            for j in 0..model.vertex_count() {
                let degree = bundle_degree(&curve, &line_bundle_class(model, fan, labels, j)?.rep);
                if degree != i64::from(j == i) {
                    return Err(fail("flop_degrees", format!("L{j} has degree {degree} on {}", describe(&z[0]))));
                }
            }
            (PsiCase::Curve0, z, Some(true))
        }
        Some(WallType::Zero) => (PsiCase::Div0, z, None),
        None => (PsiCase::SheafMinus1, h1.iter().map(|&r| vec![r]).collect(), None),
    };
    if !components_connected(fan, &support) {
        return Err(fail("connectivity", format!("support {} is disconnected", describe_union(&support))));
    }
    let divisor_rays: Vec<usize> = support.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    check_vanishing_pattern(fan, &wheel, &divisor_rays).map_err(|d| fail("vanishing_pattern", d))?;

    let degree_zero = matches!(case, PsiCase::Div0 | PsiCase::Curve0);
    Ok(PsiEntry {
        vertex: i,
        case,
        support,
        bundle: degree_zero.then(|| bundle.inverse()),
        wall: wall.kind,
        checks: PsiChecks {
            relations: true,
            one_of_three: true,
            exclusivity: Some(true),
            connectivity: true,
            dimension2: Some(true),
            flop_degrees: flop,
            socle_eq_facet: Some(true),
            vanishing_pattern: Some(true),
        },
        zero: None,
    })
}

/// Builds the fan of the opposite dimer for the negated parameter and compares it with the fan
/// of the model: same matchings on rays and triangles, and points related by a point
/// reflection.
pub fn opposite_dimer_check(model: &DimerModel, theta: &StabilityParam) -> Result<bool> {
    let fan = build_fan(model, theta, Normalization::MinCorner)?;
    let op = build_fan(&model.opposite(), &theta.negated(), Normalization::MinCorner)?;
    let key = |f: &Fan| -> BTreeSet<Vec<usize>> { f.rays.iter().map(|r| r.matching.arrows().to_vec()).collect() };
    if key(&fan) != key(&op) {
        return Ok(false);
    }
    let index_in_op = |r: usize| op.rays.iter().position(|s| s.matching == fan.rays[r].matching).unwrap();
    let mut shift = None;
    for r in 0..fan.ray_count() {
        let (p, q) = (fan.rays[r].point, op.rays[index_in_op(r)].point);
        let s = [p[0] + q[0], p[1] + q[1]];
        if *shift.get_or_insert(s) != s {
            return Ok(false);
        }
    }
    let tris = |f: &Fan, map: &dyn Fn(usize) -> usize| -> BTreeSet<Vec<usize>> {
        f.triangles
            .iter()
            .map(|t| {
                let mut v: Vec<usize> = t.iter().map(|&r| map(r)).collect();
                v.sort();
                v
            })
            .collect()
    };
    Ok(tris(&fan, &index_in_op) == tris(&op, &|r| r))
}
