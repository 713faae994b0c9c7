//! Edge coloring with at most `3Δ/2` colors by repeatedly extracting
//! (3)-graphs and coloring each with three fresh colors.

mod cluster;
mod extend;
mod extract;
mod graph;
mod split;

pub use cluster::{
    choose_cluster_edges, cluster, color_intercluster, Clustering, InterStats, TripleCase, CORE_RADIUS,
    EXPANDING_DEGREE, MAX_CLUSTER_DIAMETER, MIS_DISTANCE,
};
pub use extend::{
    color_three_graph, color_three_graph_with_stats, extend_cluster, fallback_count, ClusterExtension, ExtendCase,
    ThreeColorStats, FALLBACK_BUDGET,
};
pub use extract::{extract_three_graph, greedy_maximal_matching, reduce_degree};
pub use graph::{EdgeColoring, SimpleGraph};
pub use split::{
    edge_color_3half, edge_color_3half_eps, edge_color_3half_eps_with_stats, edge_color_3half_with_stats,
    euler_split, split_discrepancy, split_rounds, EpsStats, HalfStats,
};
