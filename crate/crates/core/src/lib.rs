//! Exact toolkit for axis-parallel box intersection graphs and their
//! forbidden-substructure bounds: K_{t,t} detection, the bipartite poset
//! P(G), dominance realizers, separation-dimension certificates, the
//! explicit constructions (3D lifting, skew lines, dyadic incidences), the
//! divide-and-conquer edge bound, and the brute-force oracles that keep all
//! of the above honest.
//!
//! All geometric predicates run on exact rationals; every randomized search
//! takes an explicit seed.

pub mod bounds;
pub mod constructions;
pub mod coord;
pub mod forbidden;
pub mod geometry;
pub mod graph;
pub mod poset;
pub mod random;
pub mod search;
pub mod separation;

pub use coord::Coord;
pub use geometry::{
    boxes_intersect, common_point, dominance, spanned_box, AxisBox, Dominance, GeometryError, Point,
};
pub use graph::{
    bipartition_split, cross_edges, degeneracy, incidence_graph, intersection_graph,
    intersection_graph_with, BoxFamily, BuilderMode, Graph, IncidenceConfig,
};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
