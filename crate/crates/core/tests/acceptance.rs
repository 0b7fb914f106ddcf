//! Acceptance run: one PASS or FAIL line per criterion, nonzero exit on any failure.
use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use dimer_reid::dimer::{parse_dimer, DimerModel};
use dimer_reid::divisors::{arrow_labels, bundle_degree, curve_intersection_data, line_bundle_class, TorusDivisor};
use dimer_reid::matchings::{enumerate_perfect_matchings, Normalization, PerfectMatching};
use dimer_reid::moduli::{build_fan, orbit_module, origin_fibre, socle_vertices, Fan, StabilityParam};
use dimer_reid::reid::{
    check_vanishing_pattern, classify_psi, components_connected, h0_support, h2_divisor, hminus1_criterion,
    hminus1_support, opposite_dimer_check, socle_wall, Chamber, PsiCase, Wheel, WallType,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const PROPERTY_FIXTURES: [&str; 4] = ["one_vertex", "conifold", "ten_vertex", "hexagonal_z3"];
const ALL_FIXTURES: [&str; 5] = ["one_vertex", "conifold", "a1_times_line", "ten_vertex", "hexagonal_z3"];

fn load(name: &str) -> DimerModel {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"));
    parse_dimer(&fs::read_to_string(path).unwrap()).unwrap()
}

fn special(model: &DimerModel) -> Fan {
    build_fan(model, &StabilityParam::special(model.vertex_count()), Normalization::MinCorner).unwrap()
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn zero_based(one_based: &[usize]) -> Vec<usize> {
    one_based.iter().map(|r| r - 1).collect()
}

fn ten_vertex_end_to_end() -> Outcome {
    let model = load("ten_vertex");
    let fan = special(&model);
    let hull: Vec<[i64; 2]> = vec![[3, 0], [3, 1], [1, 3], [0, 3], [0, 2], [2, 0]];
    ensure(fan.polygon.hull == hull, || format!("hull {:?}", fan.polygon.hull))?;
    let points: Vec<[i64; 2]> = fan.rays.iter().map(|r| r.point).collect();
    let expected_points = [[3, 0], [3, 1], [1, 3], [0, 3], [0, 2], [2, 0], [1, 1], [1, 2], [2, 1], [2, 2]];
    ensure(points == expected_points, || format!("ray points {points:?}"))?;
    let triangles: BTreeSet<Vec<usize>> = fan.triangles.iter().map(|t| t.iter().map(|r| r + 1).collect()).collect();
    let expected: BTreeSet<Vec<usize>> = [
        [1, 2, 9], [1, 6, 9], [2, 9, 10], [3, 4, 8], [3, 8, 10], [4, 5, 8], [5, 7, 8], [6, 7, 9], [7, 8, 9], [8, 9, 10],
    ]
    .iter()
    .map(|t| t.to_vec())
    .collect();
    ensure(triangles == expected, || format!("triangles {triangles:?}"))?;
    let report = classify_psi(&model, &fan).map_err(|e| e.to_string())?;
    let cases = [
        (1, PsiCase::Curve0, "L1^-1|E6∩E9"),
        (2, PsiCase::Div0, "L2^-1|E8∪E9"),
        (5, PsiCase::Div0, "L5^-1|E8"),
        (7, PsiCase::Curve0, "L7^-1|E2∩E9"),
    ];
    for (i, case, formula) in cases {
        let e = &report.entries[i];
        ensure(e.case == case && e.formula() == formula, || format!("vertex {i}: {:?} {}", e.case, e.formula()))?;
    }
    let others: Vec<usize> = report.entries.iter().filter(|e| e.case == PsiCase::SheafMinus1).map(|e| e.vertex).collect();
    ensure(others == [3, 4, 6, 8, 9], || format!("degree -1 vertices {others:?}"))?;
    Ok("hull, 10 lattice points, 10 triangles and the four degree 0 formulas match".into())
}

fn reference_labels() -> Outcome {
    let model = load("ten_vertex");
    let fan = special(&model);
    let labels = arrow_labels(&model, &fan);
    let printed: [(&str, &[usize]); 28] = [
        ("0->4", &[1, 2, 6]),
        ("0->6", &[3, 4]),
        ("0->8", &[4, 5]),
        ("1->0", &[3, 8, 9, 10]),
        ("1->2", &[6]),
        ("2->4#1", &[1, 5, 6, 7, 8, 9]),
        ("2->4#2", &[1, 2, 3, 8, 9, 10]),
        ("2->9", &[3, 4, 5, 7, 8, 9, 10]),
        ("3->2", &[4]),
        ("3->5", &[1, 9]),
        ("4->1", &[4, 5, 7]),
        ("4->3#1", &[2, 3, 10]),
        ("4->3#2", &[5, 6, 7]),
        ("4->6", &[1, 6, 7, 9]),
        ("4->7", &[3, 4, 10]),
        ("4->8", &[1, 2, 9, 10]),
        ("5->0", &[1, 2, 6, 7, 8, 9, 10]),
        ("5->4#1", &[4, 5, 6, 7, 8]),
        ("5->4#2", &[5, 6, 7]),
        ("6->5", &[5]),
        ("6->9", &[2, 10]),
        ("7->0", &[5, 7, 8, 9]),
        ("7->2", &[2]),
        ("8->5", &[3]),
        ("8->9", &[6, 7]),
        ("9->1", &[1, 2]),
        ("9->4", &[3, 4, 5, 8]),
        ("9->7", &[1, 6]),
    ];
    let mut mismatched = Vec::new();
    for (a, (name, rays)) in printed.iter().enumerate() {
        ensure(model.arrow_name(a) == *name, || format!("arrow {a} is {}", model.arrow_name(a)))?;
        if labels[a].display_rays() != *rays {
            mismatched.push(a);
        }
    }
    // The printed label of the second arrow 5->4 repeats that of the second arrow 4->3 and breaks
    // the face sums, so it is checked against the value the face sums force.
    ensure(mismatched == [18], || format!("labels differ on arrows {mismatched:?}"))?;
    ensure(labels[18].display_rays() == [2, 3, 4, 8, 10], || format!("arrow 18 has {:?}", labels[18].display_rays()))?;
    let all = TorusDivisor::all(fan.ray_count());
    let printed_18 = TorusDivisor::from_rays(fan.ray_count(), &zero_based(printed[18].1));
    let face = model.faces().iter().find(|f| f.boundary.contains(&18)).unwrap();
    let with_printed = face
        .boundary
        .iter()
        .fold(TorusDivisor::zero(fan.ray_count()), |acc, &a| &acc + if a == 18 { &printed_18 } else { &labels[a] });
    ensure(with_printed != all, || "the printed label of arrow 18 satisfies the face sum".into())?;
    Ok("27 of 28 labels equal the reference table; arrow 5->4#2 prints 567, which breaks the face sum, the computed 2,3,4,8,10 satisfies it".into())
}

fn socle_table() -> Outcome {
    let model = load("ten_vertex");
    let fan = special(&model);
    let socles: Vec<(Vec<usize>, Vec<usize>)> = fan
        .triangles
        .iter()
        .map(|t| (t.iter().map(|r| r + 1).collect(), socle_vertices(&model, &orbit_module(&model, &fan, t))))
        .collect();
    let socle_of = |t: [usize; 3]| socles.iter().find(|(tri, _)| *tri == t).map(|(_, s)| s.clone());
    ensure(socle_of([1, 2, 9]) == Some(vec![2, 7]), || format!("triangle 1,2,9 has socle {:?}", socle_of([1, 2, 9])))?;
    ensure(socles.len() == 10 && socles.iter().all(|(_, s)| s.contains(&2)), || "vertex 2 missing from a socle".into())?;
    let with7: Vec<Vec<usize>> = socles.iter().filter(|(_, s)| s.contains(&7)).map(|(t, _)| t.clone()).collect();
    ensure(with7 == [vec![1, 2, 9], vec![2, 9, 10]], || format!("vertex 7 in socles of {with7:?}"))?;
    Ok("triangle 1,2,9 has socle {2,7}; vertex 2 lies in all 10 socles; vertex 7 only in 1,2,9 and 2,9,10".into())
}

fn property_suite_for(name: &str) -> Result<(), String> {
    let model = load(name);
    let fan = special(&model);
    let labels = arrow_labels(&model, &fan);
    let n = model.vertex_count();
    let compact = fan.compact_rays();
    let all = TorusDivisor::all(fan.ray_count());
    for (f, face) in model.faces().iter().enumerate() {
        let sum = face.boundary.iter().fold(TorusDivisor::zero(fan.ray_count()), |acc, &a| &acc + &labels[a]);
        ensure(sum == all, || format!("face {f} sums to {:?}", sum.coeffs()))?;
    }
    let report = classify_psi(&model, &fan).map_err(|e| e.to_string())?;
    let chamber = Chamber::new(&model, &fan);
    for i in 0..n {
        let wheel = Wheel::build(&model, &labels, i).map_err(|e| e.to_string())?;
        wheel.check_relations()?;
        wheel.check_one_of_three(&compact)?;
        let entry = &report.entries[i];
        ensure(components_connected(&fan, &entry.support), || format!("vertex {i}: support is disconnected"))?;
        if i == 0 {
            continue;
        }
        ensure(h2_divisor(&wheel).is_zero(), || format!("vertex {i}: degree -2 divisor is nonzero"))?;
        let h0 = h0_support(&fan, &wheel);
        let h1 = hminus1_support(&fan, &wheel);
        ensure(h0.is_empty() != h1.is_empty(), || format!("vertex {i}: degree 0 and -1 supports {h0:?} {h1:?}"))?;
        ensure(h1.iter().all(|c| c.len() == 1 && fan.is_compact_ray(c[0])), || format!("vertex {i}: {h1:?}"))?;
        let (socle, facet) = (socle_wall(&model, &fan, i), chamber.has_facet(i));
        ensure(socle == facet && facet == !h0.is_empty(), || format!("vertex {i}: socle {socle}, facet {facet}"))?;
        let divisor_rays: Vec<usize> = entry.support.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        check_vanishing_pattern(&fan, &wheel, &divisor_rays).map_err(|d| format!("vertex {i}: {d}"))?;
        if entry.wall == Some(WallType::One) {
            let curve = curve_intersection_data(&fan, [h0[0][0], h0[0][1]]).map_err(|e| e.to_string())?;
            ensure(curve.is_minus1_minus1(), || format!("vertex {i}: curve is not (-1,-1)"))?;
            for j in 0..n {
                let class = line_bundle_class(&model, &fan, &labels, j).map_err(|e| e.to_string())?;
                let degree = bundle_degree(&curve, &class.rep);
                ensure(degree == i64::from(j == i), || format!("vertex {i}: L{j} has degree {degree}"))?;
            }
        }
    }
    let opposite = opposite_dimer_check(&model, &StabilityParam::special(n)).map_err(|e| e.to_string())?;
    ensure(opposite, || "opposite dimer gives a different fan".into())
}

fn property_suite() -> Outcome {
    for name in PROPERTY_FIXTURES {
        property_suite_for(name).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("all properties hold on {}", PROPERTY_FIXTURES.join(", ")))
}

/// Independent oracle: every subset of arrows meeting each face exactly once.
fn brute_force_matchings(model: &DimerModel) -> Vec<PerfectMatching> {
    let q1 = model.arrow_count();
    (0u32..1 << q1)
        .filter(|mask| model.faces().iter().all(|f| f.boundary.iter().filter(|&&a| mask >> a & 1 == 1).count() == 1))
        .map(|mask| PerfectMatching::new((0..q1).filter(|a| mask >> a & 1 == 1).collect()))
        .collect()
}

/// Independent oracle for a curve: solve `u1 + u2 = c1 v1 + c2 v2` on the height one generators.
fn curve_oracle(fan: &Fan, edge: [usize; 2]) -> Vec<i64> {
    let owners: Vec<&[usize; 3]> = fan.triangles.iter().filter(|t| t.contains(&edge[0]) && t.contains(&edge[1])).collect();
    let u: Vec<usize> = owners.iter().map(|t| *t.iter().find(|r| !edge.contains(r)).unwrap()).collect();
    let p = |r: usize| fan.rays[r].point;
    let (v1, v2) = (p(edge[0]), p(edge[1]));
    let s = [p(u[0])[0] + p(u[1])[0], p(u[0])[1] + p(u[1])[1]];
    let det = v1[0] * v2[1] - v1[1] * v2[0];
    let (c1, c2) = if det != 0 {
        ((s[0] * v2[1] - s[1] * v2[0]) / det, (v1[0] * s[1] - v1[1] * s[0]) / det)
    } else {
        // Collinear with the origin: use the height coordinate c1 + c2 = 2.
        let d = [v2[0] - v1[0], v2[1] - v1[1]];
        let t = if d[0] != 0 { (s[0] - 2 * v1[0]) / d[0] } else { (s[1] - 2 * v1[1]) / d[1] };
        (2 - t, t)
    };
    let mut out = vec![0; fan.ray_count()];
    out[edge[0]] = -c1;
    out[edge[1]] = -c2;
    out[u[0]] = 1;
    out[u[1]] = 1;
    out
}

fn oracle_equivalence() -> Outcome {
    let mut compared = Vec::new();
    for name in ALL_FIXTURES {
        let model = load(name);
        if model.arrow_count() <= 20 {
            let mut fast = enumerate_perfect_matchings(&model);
            let mut slow = brute_force_matchings(&model);
            fast.sort_by(|a, b| a.arrows().cmp(b.arrows()));
            slow.sort_by(|a, b| a.arrows().cmp(b.arrows()));
            ensure(fast == slow, || format!("{name}: {} matchings against {}", fast.len(), slow.len()))?;
            compared.push(name);
        }
    }
    for name in PROPERTY_FIXTURES {
        let model = load(name);
        let fan = special(&model);
        let labels = arrow_labels(&model, &fan);
        for i in 0..model.vertex_count() {
            let wheel = Wheel::build(&model, &labels, i).map_err(|e| e.to_string())?;
            let filtration: Vec<usize> =
                hminus1_support(&fan, &wheel).iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
            let criterion = hminus1_criterion(&fan, &wheel);
            ensure(filtration == criterion, || format!("{name} vertex {i}: {filtration:?} against {criterion:?}"))?;
        }
    }
    let conifold = special(&load("conifold"));
    let edge = conifold.compact_edges()[0];
    let data = curve_intersection_data(&conifold, edge).map_err(|e| e.to_string())?;
    ensure(data.intersections == curve_oracle(&conifold, edge) && data.normal_degrees() == [-1, -1], || {
        format!("conifold curve {:?}", data.intersections)
    })?;
    let a1 = special(&load("a1_times_line"));
    let edge = a1.compact_edges()[0];
    let data = curve_intersection_data(&a1, edge).map_err(|e| e.to_string())?;
    let mut degrees = data.normal_degrees();
    degrees.sort();
    ensure(data.intersections == curve_oracle(&a1, edge) && degrees == [-2, 0], || {
        format!("A1 x line curve {:?}", data.intersections)
    })?;
    Ok(format!(
        "matching enumeration equals subset search on {}; both degree -1 routes agree; curve degrees (-1,-1) and (0,-2) match the lattice oracle",
        compared.join(", ")
    ))
}

fn zero_vertex() -> Outcome {
    for name in PROPERTY_FIXTURES {
        let model = load(name);
        let fan = special(&model);
        let report = classify_psi(&model, &fan).map_err(|e| format!("{name}: {e}"))?;
        let zero = report.entries[0].zero.as_ref().unwrap();
        let fibre = origin_fibre(&model, &fan);
        ensure(zero.h_minus2 == fibre.f2, || format!("{name}: degree -2 support {:?}", zero.h_minus2))?;
        let dims: BTreeSet<usize> = fibre.f0.iter().chain(&fibre.f1).chain(&fibre.f2).map(|c| 3 - c.len()).collect();
        ensure(zero.pure == (dims.len() == 1), || format!("{name}: purity flag {} for dimensions {dims:?}", zero.pure))?;
        let wheel = Wheel::build(&model, &arrow_labels(&model, &fan), 0).map_err(|e| e.to_string())?;
        let h1 = hminus1_support(&fan, &wheel);
        ensure(h1 == fibre.f1, || format!("{name}: degree -1 support {h1:?} against fibre curves {:?}", fibre.f1))?;
    }
    let model = load("conifold");
    let report = classify_psi(&model, &special(&model)).map_err(|e| e.to_string())?;
    let zero = report.entries[0].zero.as_ref().unwrap();
    ensure(
        zero.fibre.f1.len() == 1 && zero.fibre.f0.is_empty() && zero.fibre.f2.is_empty() && zero.pure && zero.shift == Some(1),
        || format!("conifold fibre {:?}", zero.fibre),
    )?;
    Ok("degree -2 and -1 supports equal the fibre divisors and curves; purity equals equidimensionality; the conifold fibre is one curve, pure in degree -1".into())
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("ten-vertex model end to end", ten_vertex_end_to_end),
        ("arrow labels", reference_labels),
        ("socle table", socle_table),
        ("property suite", property_suite),
        ("oracle equivalence", oracle_equivalence),
        ("zero vertex", zero_vertex),
    ];
    let mut failures = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {title}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {}: {title}: {detail}", k + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
