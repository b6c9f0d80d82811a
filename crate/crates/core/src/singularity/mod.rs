//! Discrete singularities of an asymptotic net: sign changes of the metric,
//! their local classification, and the chains they form.

pub mod classify;
pub mod metric;
pub mod polyline;

pub use classify::{
    admissibility_check, classify_vertex, classify_vertex_with_base, halfplane_edge_test,
    singular_vertices, star_sidedness_test, Configuration, Diagnostics, Kind, SingularVertex,
    Traversal,
};
pub use metric::{
    m_from_positions, omega_quad, singular_edges, MetricField, SingularEdge, DEFAULT_EPS_DEGENERATE,
};
pub use polyline::{extract_polylines, SingularPolyline};
