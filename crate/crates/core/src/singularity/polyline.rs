use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::grid::{EdgeIdx, GridDomain, VertexIdx};
use crate::singularity::classify::SingularVertex;

/// A maximal chain of singular edges. Closed chains repeat their first
/// vertex at the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPolyline {
    pub vertices: Vec<VertexIdx>,
    pub edges: Vec<EdgeIdx>,
    pub closed: bool,
}

/// Chains the singular edges. Open chains start at their smaller boundary
/// end, loops at their smallest vertex; output order follows those start
/// vertices.
pub fn extract_polylines(
    vertices: &[SingularVertex],
    edges: &[EdgeIdx],
    domain: &GridDomain,
) -> Result<Vec<SingularPolyline>> {
    let mut adj: BTreeMap<VertexIdx, Vec<EdgeIdx>> = BTreeMap::new();
    for &e in edges {
        let (a, b) = e.endpoints();
        adj.entry(a).or_default().push(e);
        adj.entry(b).or_default().push(e);
    }
    for v in vertices {
        if domain.is_interior_vertex(v.vertex) && adj.get(&v.vertex).map_or(0, Vec::len) != 2 {
            return Err(Error::InadmissibleVertex(v.vertex));
        }
    }
    for (&p, list) in &adj {
        if domain.is_interior_vertex(p) && list.len() != 2 {
            return Err(Error::InadmissibleVertex(p));
        }
    }
    for list in adj.values_mut() {
        list.sort();
    }

    let mut used: BTreeSet<EdgeIdx> = BTreeSet::new();
    let mut out = Vec::new();
    let walk = |start: VertexIdx, used: &mut BTreeSet<EdgeIdx>| -> SingularPolyline {
        let mut verts = vec![start];
        let mut chain = Vec::new();
        let mut at = start;
        while let Some(&e) = adj[&at].iter().find(|e| !used.contains(*e)) {
            used.insert(e);
            chain.push(e);
            at = e.other_end(at).expect("incident edge");
            verts.push(at);
            if at == start {
                break;
            }
        }
        let closed = chain.len() > 1 && at == start;
        SingularPolyline {
            vertices: verts,
            edges: chain,
            closed,
        }
    };

    let ends: Vec<VertexIdx> = adj
        .iter()
        .filter(|(_, l)| l.len() % 2 == 1)
        .map(|(&p, _)| p)
        .collect();
    for p in ends {
        if adj[&p].iter().any(|e| !used.contains(e)) {
            out.push(walk(p, &mut used));
        }
    }
    let starts: Vec<VertexIdx> = adj.keys().copied().collect();
    for p in starts {
        if adj[&p].iter().any(|e| !used.contains(e)) {
            out.push(walk(p, &mut used));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singularity::classify::singular_vertices;
    use crate::singularity::metric::SingularEdge;

    fn run(edges: &[EdgeIdx], d: &GridDomain) -> Result<Vec<SingularPolyline>> {
        let se: Vec<SingularEdge> = edges
            .iter()
            .map(|&edge| SingularEdge {
                edge,
                omega_pair: (1.0, -1.0),
            })
            .collect();
        let verts = singular_vertices(&se, d);
        extract_polylines(&verts, edges, d)
    }

    #[test]
    fn open_chain_between_boundary_vertices() {
        let d = GridDomain::new(-1, 1, -1, 1).unwrap();
        let edges = [EdgeIdx::u_edge(-1, 0), EdgeIdx::v_edge(0, 0)];
        let p = run(&edges, &d).unwrap();
        assert_eq!(p.len(), 1);
        assert!(!p[0].closed);
        assert_eq!(
            p[0].vertices,
            vec![
                VertexIdx::new(-1, 0),
                VertexIdx::new(0, 0),
                VertexIdx::new(0, 1)
            ]
        );
    }

    #[test]
    fn closed_loop_repeats_first_vertex() {
        let d = GridDomain::new(0, 3, 0, 3).unwrap();
        let edges = [
            EdgeIdx::u_edge(1, 1),
            EdgeIdx::u_edge(1, 2),
            EdgeIdx::v_edge(1, 1),
            EdgeIdx::v_edge(2, 1),
        ];
        let p = run(&edges, &d).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].closed);
        assert_eq!(p[0].vertices.len(), 5);
        assert_eq!(p[0].vertices.first(), p[0].vertices.last());
        assert_eq!(p[0].vertices[0], VertexIdx::new(1, 1));
    }

    #[test]
    fn dangling_interior_end_is_inadmissible() {
        let d = GridDomain::new(0, 3, 0, 3).unwrap();
        let edges = [EdgeIdx::u_edge(1, 1)];
        assert!(matches!(run(&edges, &d), Err(Error::InadmissibleVertex(_))));
    }

    #[test]
    fn empty_input() {
        let d = GridDomain::new(0, 3, 0, 3).unwrap();
        assert!(run(&[], &d).unwrap().is_empty());
    }
}
