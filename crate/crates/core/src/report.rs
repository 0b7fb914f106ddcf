//! Serializable reports for every stage. Rays are numbered from 1 in all reports.
use serde::Serialize;

use crate::dimer::DimerModel;
use crate::divisors::TorusDivisor;
use crate::error::Diagnostic;
use crate::lattice::Point;
use crate::matchings::{PerfectMatching, Polygon};
use crate::moduli::{Cone, Fan};
use crate::reid::{describe, Chamber, PsiCase, PsiChecks, PsiEntry, PsiReport, WallType};

fn one_based(cone: &Cone) -> Vec<usize> {
    cone.iter().map(|r| r + 1).collect()
}

fn orbits(components: &[Cone]) -> Vec<String> {
    components.iter().map(describe).collect()
}

/// Ray numbers of a divisor, written as a digit string when every number is a single digit.
pub fn compact_label(rays: &[usize]) -> String {
    if rays.iter().all(|&r| r < 10) {
        rays.iter().map(|r| r.to_string()).collect()
    } else {
        rays.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticEntry {
    pub invariant: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub vertices: usize,
    pub arrows: usize,
    pub faces: usize,
    pub diagnostics: Vec<DiagnosticEntry>,
}

impl ValidateReport {
    pub fn new(model: &DimerModel, diagnostics: &[Diagnostic]) -> Self {
        Self {
            valid: diagnostics.is_empty(),
            vertices: model.vertex_count(),
            arrows: model.arrow_count(),
            faces: model.face_count(),
            diagnostics: diagnostics
                .iter()
                .map(|d| DiagnosticEntry { invariant: format!("{:?}", d.invariant), message: d.message.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingEntry {
    pub matching: PerfectMatching,
    pub point: Point,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingsReport {
    pub matchings: Vec<MatchingEntry>,
    pub polygon: Polygon,
}

impl MatchingsReport {
    pub fn new(matchings: &[(PerfectMatching, Point)], polygon: &Polygon) -> Self {
        Self {
            matchings: matchings.iter().map(|(m, p)| MatchingEntry { matching: m.clone(), point: *p }).collect(),
            polygon: polygon.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RayEntry {
    pub index: usize,
    pub point: Point,
    pub compact: bool,
    pub matching: PerfectMatching,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeEntry {
    pub rays: [usize; 2],
    pub compact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreEntry {
    pub points: Vec<Vec<usize>>,
    pub curves: Vec<Vec<usize>>,
    pub divisors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FanReport {
    pub theta: Vec<String>,
    pub rays: Vec<RayEntry>,
    pub triangles: Vec<Vec<usize>>,
    pub edges: Vec<EdgeEntry>,
    pub fibre: FibreEntry,
}

impl FanReport {
    pub fn new(model: &DimerModel, fan: &Fan) -> Self {
        let fibre = crate::moduli::origin_fibre(model, fan);
        let all = |cs: &[Cone]| cs.iter().map(one_based).collect();
        Self {
            theta: fan.theta.weights().iter().map(|w| w.to_string()).collect(),
            rays: fan
                .rays
                .iter()
                .enumerate()
                .map(|(r, ray)| RayEntry {
                    index: r + 1,
                    point: ray.point,
                    compact: fan.is_compact_ray(r),
                    matching: ray.matching.clone(),
                })
                .collect(),
            triangles: fan.triangles.iter().map(|t| t.iter().map(|r| r + 1).collect()).collect(),
            edges: fan
                .edges()
                .into_iter()
                .map(|e| EdgeEntry { rays: e.map(|r| r + 1), compact: fan.is_compact_edge(e) })
                .collect(),
            fibre: FibreEntry { points: all(&fibre.f0), curves: all(&fibre.f1), divisors: all(&fibre.f2) },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelEntry {
    pub arrow: usize,
    pub name: String,
    pub tail: usize,
    pub head: usize,
    pub rays: Vec<usize>,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelsReport {
    pub labels: Vec<LabelEntry>,
}

impl LabelsReport {
    pub fn new(model: &DimerModel, labels: &[TorusDivisor]) -> Self {
        Self {
            labels: model
                .arrows()
                .iter()
                .map(|a| {
                    let rays = labels[a.id].display_rays();
                    LabelEntry {
                        arrow: a.id,
                        name: model.arrow_name(a.id),
                        tail: a.tail,
                        head: a.head,
                        label: compact_label(&rays),
                        rays,
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WallEntry {
    pub vertex: usize,
    pub present: bool,
    pub socle_route: bool,
    pub facet_route: bool,
    #[serde(rename = "type")]
    pub kind: Option<WallType>,
    pub unstable_locus: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberReport {
    pub theta: Vec<String>,
    /// Vertex sets `S` with `theta(S) > 0` on the chamber.
    pub inequalities: Vec<Vec<usize>>,
    pub walls: Vec<WallEntry>,
}

impl ChamberReport {
    pub fn new(fan: &Fan, report: &PsiReport) -> Self {
        Self::from_parts(fan, &report.chamber, &report.walls)
    }

    pub fn from_parts(fan: &Fan, chamber: &Chamber, walls: &[crate::reid::WallRecord]) -> Self {
        Self {
            theta: fan.theta.weights().iter().map(|w| w.to_string()).collect(),
            inequalities: chamber.subsets(),
            walls: walls
                .iter()
                .map(|w| WallEntry {
                    vertex: w.vertex,
                    present: w.facet_route,
                    socle_route: w.socle_route,
                    facet_route: w.facet_route,
                    kind: w.kind,
                    unstable_locus: orbits(&w.unstable_locus),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleEntry {
    pub rep: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WallFlag {
    pub present: bool,
    #[serde(rename = "type")]
    pub kind: Option<WallType>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroVertexEntry {
    pub points: Vec<String>,
    pub curves: Vec<String>,
    pub divisors: Vec<String>,
    pub h_minus2: Vec<String>,
    pub h_minus1: Vec<String>,
    pub pure: bool,
    pub shift: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiEntryReport {
    pub vertex: usize,
    pub case: PsiCase,
    pub support: Vec<String>,
    pub bundle: Option<BundleEntry>,
    pub wall: WallFlag,
    pub checks: PsiChecks,
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fibre: Option<ZeroVertexEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReportFile {
    pub theta: Vec<String>,
    pub vertices: Vec<PsiEntryReport>,
}

impl PsiReportFile {
    pub fn new(fan: &Fan, report: &PsiReport) -> Self {
        Self {
            theta: fan.theta.weights().iter().map(|w| w.to_string()).collect(),
            vertices: report.entries.iter().map(entry).collect(),
        }
    }
}

fn entry(e: &PsiEntry) -> PsiEntryReport {
    PsiEntryReport {
        vertex: e.vertex,
        case: e.case,
        support: orbits(&e.support),
        bundle: e.bundle.as_ref().map(|b| BundleEntry { rep: b.rep.coeffs().to_vec() }),
        wall: WallFlag { present: e.wall.is_some(), kind: e.wall },
        checks: e.checks.clone(),
        formula: e.formula(),
        fibre: e.zero.as_ref().map(|z| ZeroVertexEntry {
            points: orbits(&z.fibre.f0),
            curves: orbits(&z.fibre.f1),
            divisors: orbits(&z.fibre.f2),
            h_minus2: orbits(&z.h_minus2),
            h_minus1: orbits(&z.h_minus1),
            pure: z.pure,
            shift: z.shift,
        }),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::arrow_labels;
    use crate::moduli::tests::special_fan;
    use crate::reid::classify_psi;

    #[test]
    fn compact_labels() {
        assert_eq!(compact_label(&[3, 4]), "34");
        assert_eq!(compact_label(&[2, 10]), "2,10");
        assert_eq!(compact_label(&[]), "");
    }

    #[test]
    fn ten_vertex_reports_use_one_based_rays() {
        let (model, fan) = special_fan("ten_vertex");
        let fan_report = FanReport::new(&model, &fan);
        assert_eq!(fan_report.rays.len(), 10);
        assert_eq!(fan_report.fibre.divisors, vec![vec![8], vec![9]]);
        let labels = LabelsReport::new(&model, &arrow_labels(&model, &fan));
        assert_eq!(labels.labels[1].label, "34");
        let psi = PsiReportFile::new(&fan, &classify_psi(&model, &fan).unwrap());
        let json = to_json(&psi);
        assert!(json.contains("\"case\": \"curve0\""));
        assert!(psi.vertices[1].formula.contains("E6∩E9"));
        assert!(psi.vertices[0].checks.flop_degrees.is_none());
    }
}
