use std::fs;
use std::path::Path;

use dimer_reid::dimer::{parse_dimer, DimerDocument, DimerModel};
use dimer_reid::matchings::enumerate_perfect_matchings;
use proptest::prelude::*;

const FIXTURES: [&str; 5] = ["one_vertex", "conifold", "a1_times_line", "hexagonal_z3", "ten_vertex"];

fn document(name: &str) -> DimerDocument {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"));
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Renames vertices by `vertex_perm` and arrows by `arrow_perm`, keeping the embedding.
fn relabel(doc: &DimerDocument, vertex_perm: &[usize], arrow_perm: &[usize]) -> DimerDocument {
    let mut out = doc.clone();
    for (a, arrow) in out.arrows.iter_mut().enumerate() {
        arrow.id = arrow_perm[a];
        arrow.tail = vertex_perm[doc.arrows[a].tail];
        arrow.head = vertex_perm[doc.arrows[a].head];
    }
    out.arrows.sort_by_key(|a| a.id);
    for face in &mut out.faces {
        face.boundary = face.boundary.iter().map(|&a| arrow_perm[a]).collect();
    }
    if let Some(p) = &doc.positions {
        let mut q = p.clone();
        for (v, &w) in vertex_perm.iter().enumerate() {
            q[w] = p[v];
        }
        out.positions = Some(q);
    }
    out
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn case() -> impl Strategy<Value = (DimerDocument, Vec<usize>, Vec<usize>)> {
    proptest::sample::select(&FIXTURES[..]).prop_flat_map(|name| {
        let doc = document(name);
        let (v, a) = (doc.vertices, doc.arrows.len());
        (Just(doc), permutation(v), permutation(a))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn serialize_then_parse_is_identity((doc, vp, ap) in case()) {
        let model = DimerModel::from_document(relabel(&doc, &vp, &ap)).unwrap();
        let again = parse_dimer(&model.to_json()).unwrap();
        prop_assert_eq!(again.to_document(), model.to_document());
    }

    #[test]
    fn relabelling_keeps_validity_and_matching_count((doc, vp, ap) in case()) {
        let original = parse_dimer(&serde_json::to_string(&doc).unwrap()).unwrap();
        let relabelled = parse_dimer(&serde_json::to_string(&relabel(&doc, &vp, &ap)).unwrap()).unwrap();
        prop_assert_eq!(enumerate_perfect_matchings(&relabelled).len(), enumerate_perfect_matchings(&original).len());
    }
}

#[test]
fn every_fixture_round_trips() {
    for name in FIXTURES {
        let model = parse_dimer(&serde_json::to_string(&document(name)).unwrap()).unwrap();
        assert_eq!(parse_dimer(&model.to_json()).unwrap().to_document(), model.to_document(), "{name}");
    }
}
