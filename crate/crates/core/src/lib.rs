//! Weight-set decomposition for weighted rank aggregation over three inputs.
//!
//! Every weight `λ` in the 2-simplex ranks the items by `Σ λ_i v^i`. The
//! simplex splits into convex regions sharing one ranking; this crate
//! computes those regions exactly and the statistics derived from them.
//!
//! ```
//! use simplexrank::{exact_decompose, fixtures, DecomposeConfig};
//!
//! let d = exact_decompose(&fixtures::anne(), &DecomposeConfig::default()).unwrap();
//! assert!(d.check_invariants().is_ok());
//! ```

pub mod analytics;
pub mod decompose;
pub mod error;
pub mod exact;
pub mod extensions;
pub mod fixtures;
pub mod geometry;
pub mod model;
pub mod polygon;
pub mod preprocess;

pub use analytics::{
    adjacency_graph, barchart, dominance_matrices, expected_ranking, item_heatmap, pairwise_dominance,
    rankability, sensitivity, AdjacencyEdge, DominanceMatrices, SensitivityField,
};
pub use decompose::{
    exact_decompose, grid_decompose, Adjacency, BoundaryLabel, ContactKind, DecomposeConfig, Decomposition,
    GridColormap, IndifferenceRegion, Method, Utility,
};
pub use error::{Error, Result};
pub use exact::{SimplexPoint, Q};
pub use extensions::{
    nonlinear_normalize, partition_aggregate, reduce_to_triangle, sigmoid_f, NonlinearUtility, PartitionConfig,
};
pub use geometry::{Hyperplane, Line, Side};
pub use model::{aggregate, rank_of, InputSet, Item, RankLabel, ScoreKind, ScoreVector, WeightVector};
pub use preprocess::{complete_lists, normalize_rating, ranking_from_rating, TopKList};
