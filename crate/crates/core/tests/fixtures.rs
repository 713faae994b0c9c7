use std::collections::{BTreeSet, VecDeque};

use hallkit::fixtures::{gen_fig1, gen_lowerbound, gen_random_hypergraph, gen_simple, SimpleKind};
use hallkit::io::{graph_to_text, hypergraph_to_text};
use hallkit::{max_matching, solve_hso, verify_matching, BipartiteView, Error, Side};
use sha2::{Digest, Sha256};

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn generators_are_pinned() {
    let cases = [
        (hypergraph_to_text(&gen_random_hypergraph(50, 4, 2, 7).unwrap()), GOLDEN[0]),
        (hypergraph_to_text(&gen_random_hypergraph(80, 8, 3, 1).unwrap()), GOLDEN[1]),
        (graph_to_text(&gen_simple(SimpleKind::CubicRandom { n: 40 }, 3).unwrap()), GOLDEN[2]),
        (graph_to_text(&gen_simple(SimpleKind::RandomDelta { n: 60, delta: 5 }, 2).unwrap()), GOLDEN[3]),
        (hypergraph_to_text(&gen_lowerbound(3, 19).unwrap().hypergraph()), GOLDEN[4]),
    ];
    for (i, (text, want)) in cases.iter().enumerate() {
        assert_eq!(digest(text), *want, "fixture {i}");
    }
}

/// SHA-256 of the text form of each fixture above.
const GOLDEN: [&str; 5] = [
    "0b864b125971048920cf6ffc62f6cb1797f3c72c63e143611a31c9b3b61a9a90",
    "0f8d4a9919a2e33a63f8188bb5588676079bdfff6f87dce64015e3ce6aa9c44e",
    "4a921a114d200b9f9614e4c1168ddc75755c91d6121cdd0eceb5cd94abeacedf",
    "b5fad4c6fefd45f0dd07d168e96935db1f89717efa1e42624f36decc3e0338cf",
    "386a06201e7e05b3cec1db37dffad582b8a885dfe96ed6929170f1c305f95e9c",
];

#[test]
fn generated_graphs_meet_their_degree_bounds() {
    for seed in 0..10 {
        let g = gen_random_hypergraph(100, 6, 3, seed).unwrap();
        let p = g.profile();
        assert!(p.delta >= 6);
        assert_eq!(p.rank, 3);
        assert_eq!(g.components().len(), 1);
        let s = gen_simple(SimpleKind::RandomDelta { n: 100, delta: 7 }, seed).unwrap();
        assert_eq!(s.max_degree(), 7);
    }
    assert_eq!(gen_random_hypergraph(100, 6, 3, 4).unwrap(), gen_random_hypergraph(100, 6, 3, 4).unwrap());
    let p = gen_simple(SimpleKind::Petersen, 0).unwrap();
    assert_eq!((p.num_vertices(), p.num_edges(), p.max_degree()), (10, 15, 3));
    assert!(p.vertices().iter().all(|&v| p.degree(v) == Some(3)));
    let c = gen_simple(SimpleKind::Cycle { n: 7 }, 0).unwrap();
    assert_eq!((c.num_edges(), c.max_degree()), (7, 2));
    assert!(matches!(gen_random_hypergraph(10, 2, 2, 0), Err(Error::Infeasible(_))));
    assert!(matches!(gen_simple(SimpleKind::CubicRandom { n: 7 }, 0), Err(Error::Infeasible(_))));
}

#[test]
fn four_vertex_violator_instance() {
    let g = gen_fig1();
    assert_eq!((g.num_vertices(), g.num_edges()), (4, 3));
    assert!(g.vertices().iter().all(|&v| g.degree(v) == Some(3)));
    assert_eq!(max_matching(&hallkit::bipartite_view(&g)).len(), 3);
}

/// Hop distance between a right node and a left node.
fn right_to_left(b: &BipartiteView, from_right: u32, to_left: u32) -> Option<usize> {
    let start = b.right_index(from_right)?;
    let target = b.left_index(to_left)?;
    // states: (is_right, position)
    let mut seen_r = vec![false; b.right.len()];
    let mut seen_l = vec![false; b.left.len()];
    seen_r[start] = true;
    let mut queue = VecDeque::from([((true, start), 0usize)]);
    while let Some(((right, i), d)) = queue.pop_front() {
        if !right && i == target {
            return Some(d);
        }
        let next = if right { &b.right_adj[i] } else { &b.left_adj[i] };
        for &j in next {
            let j = j as usize;
            let seen = if right { &mut seen_l[j] } else { &mut seen_r[j] };
            if !*seen {
                *seen = true;
                queue.push_back(((!right, j), d + 1));
            }
        }
    }
    None
}

#[test]
fn lower_bound_family() {
    for (delta, n) in [(2, 5), (2, 9), (3, 10), (3, 19)] {
        let lb = gen_lowerbound(delta, n).unwrap();
        let b = &lb.view;
        assert_eq!(b.left.len(), n);
        assert_eq!(b.right.len(), n);
        assert!(b.left_adj.iter().chain(&b.right_adj).all(|a| a.len() == delta));
        let m = max_matching(b);
        assert_eq!(m.len(), n);
        assert!(verify_matching(b, &m, Side::Left).certified());
        let partner_a = m.pairs.iter().find(|p| p.1 == lb.a).unwrap().0;
        let partner_b = m.pairs.iter().find(|p| p.0 == lb.b).unwrap().1;
        let (i, first) = lb.gadget_of_left(partner_a).unwrap();
        let (i2, last) = lb.gadget_of_right(partner_b).unwrap();
        assert_eq!((first, last), (0, lb.length - 1));
        assert_eq!(i, i2);
        let dist = right_to_left(b, lb.a, lb.b).unwrap();
        assert!(dist >= (n - 1) / (delta * delta));
        assert!(matches!(solve_hso(&lb.hypergraph()), Err(Error::Precondition(_))));
    }
    assert!(gen_lowerbound(2, 6).is_err());
    assert!(gen_lowerbound(3, 1).is_err());
    let distinct: BTreeSet<usize> = [(2, 5), (2, 9)].iter().map(|&(d, n)| gen_lowerbound(d, n).unwrap().length).collect();
    assert_eq!(distinct.len(), 2);
}
