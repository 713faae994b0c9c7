mod common;

use common::{from_masks, small_masks};
use hallkit::edge_color::edge_color_3half;
use hallkit::fixtures::{gen_random_hypergraph, gen_simple, SimpleKind};
use hallkit::io::{parse_document, parse_json, parse_text, to_json, to_text, Document};
use hallkit::{hso_to_matching, solve_hso, Error, MultiHypergraph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hypergraphs_roundtrip((n, masks) in small_masks(12, 20), shift in 0u32..1000) {
        let g = from_masks(n, &masks);
        let moved = MultiHypergraph::new(
            g.vertices().iter().map(|v| v + shift),
            g.edges().map(|(e, m)| (e * 3 + shift, m.iter().map(|v| v + shift).collect())),
        ).unwrap();
        for h in [g, moved] {
            let doc = Document::from_hypergraph(h.clone());
            prop_assert_eq!(parse_text(&to_text(&doc)).unwrap(), doc.clone());
            prop_assert_eq!(parse_json(&to_json(&doc)).unwrap(), doc.clone());
            prop_assert_eq!(parse_document(&to_json(&doc)).unwrap(), doc);
        }
    }
}

#[test]
fn solutions_roundtrip() {
    let g = gen_random_hypergraph(40, 4, 2, 3).unwrap();
    let o = solve_hso(&g).unwrap();
    let mut doc = Document::from_hypergraph(g.clone());
    doc.orientation = Some(o.clone());
    doc.matching = Some(hso_to_matching(&g, &o).unwrap());
    assert_eq!(parse_text(&to_text(&doc)).unwrap(), doc);
    assert_eq!(parse_json(&to_json(&doc)).unwrap(), doc);

    let s = gen_simple(SimpleKind::Petersen, 0).unwrap();
    let mut doc = Document::from_graph(s.clone());
    doc.coloring = Some(edge_color_3half(&s).unwrap());
    assert_eq!(parse_text(&to_text(&doc)).unwrap(), doc);
    assert_eq!(parse_document(&to_json(&doc)).unwrap(), doc);
}

#[test]
fn concatenated_streams_merge() {
    let g = gen_random_hypergraph(20, 3, 2, 1).unwrap();
    let o = solve_hso(&g).unwrap();
    let sol = Document { orientation: Some(o.clone()), ..Document::default() };
    let joined = format!("{}{}", to_text(&Document::from_hypergraph(g.clone())), to_text(&sol));
    let doc = parse_text(&joined).unwrap();
    assert_eq!(doc.hypergraph.as_ref(), Some(&g));
    assert_eq!(doc.orientation, Some(o));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let bad = "h 2 1\ne 0 0 5\n";
    assert!(matches!(parse_text(bad), Err(Error::Parse { line: 2, .. }) | Err(Error::InvalidGraph(_))));
    assert!(matches!(parse_text("h 2 1\nx 1\n"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_text("# comment\nh two 1\n"), Err(Error::Parse { line: 2, .. })));
    assert!(parse_text("h 2 2\ne 0 0 1\n").is_err());
}
