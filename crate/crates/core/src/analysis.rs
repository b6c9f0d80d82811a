//! The full discrete pipeline: metric, singular edges, vertex
//! classification, chains and validations.

use crate::error::{Error, Result};
use crate::grid::{EdgeIdx, QuadIdx, VertexIdx};
use crate::net::{validate_generic_position, AsymptoticNet, ConormalNet, GenericPositionViolation};
use crate::predicates::DEFAULT_TOL;
use crate::singularity::{
    admissibility_check, classify_vertex, extract_polylines, singular_edges, singular_vertices,
    Configuration, MetricField, SingularEdge, SingularPolyline, SingularVertex,
    DEFAULT_EPS_DEGENERATE,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold of the orientation predicate.
    pub orient: f64,
    /// `|Ω| <= degenerate_metric · scale³` aborts.
    pub degenerate_metric: f64,
    /// Sine threshold for coincident planes.
    pub generic_position: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orient: DEFAULT_TOL,
            degenerate_metric: DEFAULT_EPS_DEGENERATE,
            generic_position: DEFAULT_TOL,
        }
    }
}

impl Tolerances {
    /// All three thresholds set to `t`.
    pub fn uniform(t: f64) -> Self {
        Self {
            orient: t,
            degenerate_metric: t,
            generic_position: t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityViolation {
    pub vertex: VertexIdx,
    pub incident_singular_edges: Vec<EdgeIdx>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub net: ConormalNet,
    pub f: AsymptoticNet,
    pub metric: MetricField,
    pub singular_edges: Vec<SingularEdge>,
    pub vertices: Vec<SingularVertex>,
    /// Empty when some vertex is inadmissible.
    pub polylines: Vec<SingularPolyline>,
    pub generic_position: Vec<GenericPositionViolation>,
    pub admissibility: Vec<AdmissibilityViolation>,
    pub degenerate_quads: Vec<(QuadIdx, f64)>,
    pub tolerances: Tolerances,
}

impl Analysis {
    pub fn is_admissible(&self) -> bool {
        self.admissibility.is_empty()
    }

    pub fn vertex(&self, p: VertexIdx) -> Option<&SingularVertex> {
        self.vertices.iter().find(|v| v.vertex == p)
    }

    pub fn edge_set(&self) -> Vec<EdgeIdx> {
        self.singular_edges.iter().map(|e| e.edge).collect()
    }
}

/// Runs the pipeline. Degenerate quads and zero orientation signs abort;
/// inadmissible vertices and generic-position violations are recorded.
pub fn analyze(net: &ConormalNet, tol: Tolerances) -> Result<Analysis> {
    let metric = MetricField::new(net, tol.degenerate_metric)?;
    let f = AsymptoticNet::integrate(net)?;
    let edges = singular_edges(&metric);
    let mut vertices = singular_vertices(&edges, net.domain());
    let mut admissibility = Vec::new();
    for v in vertices.iter_mut() {
        match v.configuration {
            Configuration::Boundary => continue,
            Configuration::Inadmissible => {}
            _ => {
                if admissibility_check(net, v, tol.orient)? {
                    *v = classify_vertex(net, &f, v, tol.orient)?;
                    continue;
                }
                v.configuration = Configuration::Inadmissible;
            }
        }
        admissibility.push(AdmissibilityViolation {
            vertex: v.vertex,
            incident_singular_edges: v.incident_singular_edges.clone(),
        });
    }
    let edge_ids: Vec<EdgeIdx> = edges.iter().map(|e| e.edge).collect();
    let polylines = if admissibility.is_empty() {
        extract_polylines(&vertices, &edge_ids, net.domain())?
    } else {
        Vec::new()
    };
    Ok(Analysis {
        net: net.clone(),
        degenerate_quads: metric.degenerate_quads(tol.degenerate_metric),
        f,
        metric,
        singular_edges: edges,
        vertices,
        polylines,
        generic_position: validate_generic_position(net, tol.generic_position),
        admissibility,
        tolerances: tol,
    })
}

/// Like [`analyze`] but fails on the first inadmissible vertex.
pub fn analyze_strict(net: &ConormalNet, tol: Tolerances) -> Result<Analysis> {
    let a = analyze(net, tol)?;
    if let Some(v) = a.admissibility.first() {
        return Err(Error::InadmissibleVertex(v.vertex));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::example_curves;
    use crate::singularity::Kind;

    #[test]
    fn example_pipeline() {
        let (a, b) = example_curves(1.0, 0.1, 0.1).unwrap();
        let net = ConormalNet::new(a, b).unwrap();
        let an = analyze(&net, Tolerances::default()).unwrap();
        assert!(an.is_admissible());
        let c = an.vertex(VertexIdx::new(0, 0)).unwrap();
        assert_eq!(
            (c.configuration, c.kind),
            (Configuration::C, Kind::Swallowtail)
        );
        let boundary: Vec<_> = an
            .vertices
            .iter()
            .filter(|v| v.configuration == Configuration::Boundary)
            .map(|v| (v.vertex, v.kind))
            .collect();
        assert_eq!(
            boundary,
            vec![
                (VertexIdx::new(0, 1), Kind::Unclassified),
                (VertexIdx::new(1, 0), Kind::Unclassified)
            ]
        );
        assert_eq!(an.polylines.len(), 1);
        assert_eq!(
            an.polylines[0].vertices,
            vec![
                VertexIdx::new(0, 1),
                VertexIdx::new(0, 0),
                VertexIdx::new(1, 0)
            ]
        );
        assert!(an.degenerate_quads.is_empty());
    }

    #[test]
    fn configuration_a_chain_is_vertical() {
        let (a, b) = example_curves(-0.5, 0.1, 0.1).unwrap();
        let an = analyze(&ConormalNet::new(a, b).unwrap(), Tolerances::default()).unwrap();
        assert_eq!(
            an.polylines[0].vertices,
            vec![
                VertexIdx::new(0, -1),
                VertexIdx::new(0, 0),
                VertexIdx::new(0, 1)
            ]
        );
        // Collinear β samples violate generic position but do not stop the analysis.
        assert_eq!(an.generic_position.len(), 1);
    }

    #[test]
    fn degenerate_metric_aborts() {
        let (a, b) = example_curves(-1.0, 0.1, 0.1).unwrap();
        let err = analyze(&ConormalNet::new(a, b).unwrap(), Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateMetric { .. }));
    }
}
