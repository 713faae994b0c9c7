pub mod edge_color;
pub mod error;
pub mod fixtures;
pub mod hall;
pub mod hso;
pub mod hypergraph;
pub mod io;
pub mod oracles;
pub mod randomized;

pub use error::{Error, Result};
pub use hypergraph::{
    ball, bipartite_view, distance, incident_expansion, remove_and_project, restrict_edges, validate,
    BipartiteView, DegreeProfile, EdgeId, MultiHypergraph, RawHypergraph, VertexId, Violation,
};
pub use hall::{
    dense_ball, dense_ball_with, find_violator, local_hall_graph, local_hall_graph_with, peel_to_hall,
    radius_bound, HallGraph, HallParams, Violator,
};
pub use hso::{
    canonical_hso, hall_graphs, hso_to_matching, local_decide, matching_to_hso, saturating_matching, solve_hso,
    solve_hso_exempt, solve_hso_local, weak_splitting, Matching, Orientation, SplitColor, Splitting,
};
pub use oracles::{hall_check_bruteforce, locality_certify, max_matching, verify_coloring, verify_hall_graph, verify_hso,
    verify_matching, verify_three_graph, verify_weak_split, CertReport, Failure, LocalAlgorithm, Side, Subject};
pub use randomized::{post_shatter, pre_shatter, regularize, solve_randomized, subsample_high_rank, RandomizedConfig,
    RandomizedReport, ShatterState};
pub use edge_color::{
    cluster, color_three_graph, edge_color_3half, edge_color_3half_eps, euler_split, extend_cluster,
    extract_three_graph, greedy_maximal_matching, reduce_degree, Clustering, EdgeColoring, SimpleGraph,
};
