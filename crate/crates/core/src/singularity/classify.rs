//! Singular vertices: admissibility, A/B/C configuration and the
//! cuspidal-edge / swallowtail decision.
//!
//! At a vertex `(u₀, v₀)` everything is expressed through the four
//! difference vectors `a± = α′(u₀ ± ½)`, `b± = β′(v₀ ± ½)` and signs of
//! `[ν₀, ·, ·]` with `ν₀ = α(u₀) − β(v₀)`. Projected along `ν₀`, the
//! polyline `Pα` leaves the origin along `a+` and `−a−`, `Pβ` along `b+`
//! and `−b−`, and the reflected `RPβ` along `−b+` and `b−`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{Axis, EdgeIdx, GridDomain, StarDir, VertexIdx};
use crate::net::{AsymptoticNet, ConormalNet};
use crate::predicates::{ray_crossing_test, Orienter, Sign};
use crate::singularity::metric::{omega_quad, SingularEdge};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Configuration {
    A,
    B,
    C,
    Boundary,
    Inadmissible,
}

impl Configuration {
    pub fn label(self) -> &'static str {
        match self {
            Configuration::A => "A",
            Configuration::B => "B",
            Configuration::C => "C",
            Configuration::Boundary => "Boundary",
            Configuration::Inadmissible => "Inadmissible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    CuspidalEdge,
    Swallowtail,
    Unclassified,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::CuspidalEdge => "CuspidalEdge",
            Kind::Swallowtail => "Swallowtail",
            Kind::Unclassified => "Unclassified",
        }
    }
}

/// How the singular chain moves through a vertex, in parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    /// Both singular edges lie on one coordinate line.
    Straight,
    /// The u-step and v-step have opposite signs.
    Opposite,
    Same,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Singular edge whose quadrant picture was used.
    pub base_edge: Option<EdgeIdx>,
    /// Quadrant signature of the forward neighbour along the base edge.
    pub forward_signature: Option<[Sign; 2]>,
    /// Quadrant signature of the backward neighbour.
    pub backward_signature: Option<[Sign; 2]>,
    /// `Pα` and `Pβ` cross at the vertex.
    pub alpha_beta_cross: Option<bool>,
    /// `Pα` and `RPβ` cross at the vertex.
    pub alpha_reflected_beta_cross: Option<bool>,
    /// Both singular star edges on one side of each non-singular star edge.
    pub star_same_side: Option<bool>,
    pub traversal: Option<Traversal>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularVertex {
    pub vertex: VertexIdx,
    /// Sorted.
    pub incident_singular_edges: Vec<EdgeIdx>,
    pub configuration: Configuration,
    pub kind: Kind,
    pub diagnostics: Diagnostics,
}

impl SingularVertex {
    fn star_dirs(&self) -> Vec<StarDir> {
        self.incident_singular_edges
            .iter()
            .filter_map(|&e| StarDir::of_edge(self.vertex, e))
            .collect()
    }
}

/// One record per vertex incident to a singular edge. Interior vertices
/// with other than two singular edges are marked inadmissible, boundary
/// vertices as boundary; the rest stay unclassified.
pub fn singular_vertices(edges: &[SingularEdge], domain: &GridDomain) -> Vec<SingularVertex> {
    let mut incident: BTreeMap<VertexIdx, Vec<EdgeIdx>> = BTreeMap::new();
    for e in edges {
        let (a, b) = e.edge.endpoints();
        incident.entry(a).or_default().push(e.edge);
        incident.entry(b).or_default().push(e.edge);
    }
    incident
        .into_iter()
        .map(|(vertex, mut list)| {
            list.sort();
            let configuration = if !domain.is_interior_vertex(vertex) {
                Configuration::Boundary
            } else if list.len() != 2 {
                Configuration::Inadmissible
            } else {
                // Placeholder until classified.
                Configuration::A
            };
            SingularVertex {
                vertex,
                incident_singular_edges: list,
                configuration,
                kind: Kind::Unclassified,
                diagnostics: Diagnostics::default(),
            }
        })
        .collect()
}

/// Difference vectors around an interior vertex.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalFrame {
    pub nu: Vec3,
    pub a_plus: Vec3,
    pub a_minus: Vec3,
    pub b_plus: Vec3,
    pub b_minus: Vec3,
}

impl LocalFrame {
    pub(crate) fn at(net: &ConormalNet, p: VertexIdx) -> Result<Self> {
        net.domain().check_interior_vertex(p)?;
        Ok(Self {
            nu: net.conormal(p.u, p.v)?,
            a_plus: net.alpha_derivative(p.u)?,
            a_minus: net.alpha_derivative(p.u - 1)?,
            b_plus: net.beta_derivative(p.v)?,
            b_minus: net.beta_derivative(p.v - 1)?,
        })
    }

    /// `(lines, forward, backward)` of the quadrant picture for a singular
    /// edge leaving the vertex in direction `dir`.
    fn quadrant_picture(&self, dir: StarDir) -> ([Vec3; 2], Vec3, Vec3) {
        let (a, b) = ([self.a_plus, self.a_minus], [self.b_plus, self.b_minus]);
        match dir {
            StarDir::Up => (a, self.b_plus, -self.b_minus),
            StarDir::Down => (a, -self.b_minus, self.b_plus),
            StarDir::Right => (b, self.a_plus, -self.a_minus),
            StarDir::Left => (b, -self.a_minus, self.a_plus),
        }
    }

    fn alpha_rays(&self) -> (Vec3, Vec3) {
        (-self.a_minus, self.a_plus)
    }

    fn beta_rays(&self) -> (Vec3, Vec3) {
        (-self.b_minus, self.b_plus)
    }

    fn reflected_beta_rays(&self) -> (Vec3, Vec3) {
        (self.b_minus, -self.b_plus)
    }

    pub(crate) fn alpha_beta_cross(&self, tol: f64) -> Result<bool> {
        let (p_in, p_out) = self.alpha_rays();
        let (q_in, q_out) = self.beta_rays();
        ray_crossing_test(&self.nu, &p_in, &p_out, &q_in, &q_out, tol)
    }

    pub(crate) fn alpha_reflected_beta_cross(&self, tol: f64) -> Result<bool> {
        let (p_in, p_out) = self.alpha_rays();
        let (q_in, q_out) = self.reflected_beta_rays();
        ray_crossing_test(&self.nu, &p_in, &p_out, &q_in, &q_out, tol)
    }
}

fn with_vertex<T>(p: VertexIdx, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::DegenerateOrientation(msg) => {
            Error::DegenerateOrientation(format!("{msg} at vertex {p}"))
        }
        e => e,
    })
}

/// Sign of `[ν₀, a+, b+]`-type products agrees with Ω on the adjacent
/// quads, so a v-edge `(u₀, v₀+½)` is singular iff `a+` and `a−` give
/// different orientations with `b+`; analogously for the other edges.
pub fn halfplane_edge_test(net: &ConormalNet, edge: EdgeIdx, tol: f64) -> Result<bool> {
    let d = net.domain();
    if !d.contains_edge(edge) || !d.is_interior_edge(edge) {
        return Err(Error::IndexOutOfDomain(crate::error::Location::Edge(edge)));
    }
    let p = edge.base;
    let nu = net.conormal(p.u, p.v)?;
    let o = Orienter::new(nu, tol);
    let what = format!("half-plane test on edge {edge}");
    let (s1, s2) = match edge.axis {
        Axis::V => {
            let b = net.beta_derivative(p.v)?;
            (
                o.strict(&net.alpha_derivative(p.u)?, &b, &what)?,
                o.strict(&net.alpha_derivative(p.u - 1)?, &b, &what)?,
            )
        }
        Axis::U => {
            let a = net.alpha_derivative(p.u)?;
            (
                o.strict(&a, &net.beta_derivative(p.v)?, &what)?,
                o.strict(&a, &net.beta_derivative(p.v - 1)?, &what)?,
            )
        }
    };
    Ok(s1 != s2)
}

/// `|Ω₁ − Ω₂|` across an interior edge.
fn omega_contrast(net: &ConormalNet, edge: EdgeIdx) -> Result<f64> {
    let (q0, q1) = net
        .domain()
        .adjacent_quads(edge)
        .ok_or(Error::IndexOutOfDomain(crate::error::Location::Edge(edge)))?;
    Ok((omega_quad(net, q1)? - omega_quad(net, q0)?).abs())
}

/// Base edge for the quadrant picture: a singular v-edge (upper one first),
/// else the singular u-edge with the larger Ω contrast.
pub fn base_edge(net: &ConormalNet, vertex: &SingularVertex) -> Result<StarDir> {
    let dirs = vertex.star_dirs();
    if dirs.is_empty() {
        return Err(Error::Validation(format!(
            "vertex {} has no incident singular edge",
            vertex.vertex
        )));
    }
    for d in [StarDir::Up, StarDir::Down] {
        if dirs.contains(&d) {
            return Ok(d);
        }
    }
    let mut best: Option<(f64, StarDir)> = None;
    for d in dirs {
        let c = omega_contrast(net, d.edge_from(vertex.vertex))?;
        if best.is_none_or(|(bc, _)| c > bc) {
            best = Some((c, d));
        }
    }
    Ok(best.expect("nonempty").1)
}

struct Quadrants {
    forward: [Sign; 2],
    backward: [Sign; 2],
}

fn quadrants(frame: &LocalFrame, base: StarDir, tol: f64, p: VertexIdx) -> Result<Quadrants> {
    let ([l1, l2], forward, backward) = frame.quadrant_picture(base);
    let o = Orienter::new(frame.nu, tol);
    let what = format!("quadrant signature at vertex {p}");
    let sig = |x: &Vec3| -> Result<[Sign; 2]> {
        Ok([o.strict(&l1, x, &what)?, o.strict(&l2, x, &what)?])
    };
    Ok(Quadrants {
        forward: sig(&forward)?,
        backward: sig(&backward)?,
    })
}

/// `false` iff the backward neighbour falls in the quadrant of the forward
/// neighbour (the forbidden configuration), with the quadrant picture taken
/// on the vertex's base edge.
pub fn admissibility_check(net: &ConormalNet, vertex: &SingularVertex, tol: f64) -> Result<bool> {
    let base = base_edge(net, vertex)?;
    admissibility_with_base(net, vertex.vertex, base, tol)
}

pub fn admissibility_with_base(
    net: &ConormalNet,
    p: VertexIdx,
    base: StarDir,
    tol: f64,
) -> Result<bool> {
    let frame = LocalFrame::at(net, p)?;
    let q = quadrants(&frame, base, tol, p)?;
    Ok(q.backward != q.forward)
}

/// Star sidedness: in the star plane (normal `ν₀`), both singular star
/// edges lie on one side of the line of each non-singular star edge.
pub fn star_sidedness_test(
    f: &AsymptoticNet,
    net: &ConormalNet,
    vertex: &SingularVertex,
    tol: f64,
) -> Result<bool> {
    let p = vertex.vertex;
    f.domain().check_interior_vertex(p)?;
    let nu = net.conormal(p.u, p.v)?;
    star_sidedness_with_normal(f, nu, vertex, tol)
}

/// [`star_sidedness_test`] with an explicit star normal, usable for any
/// asymptotic net.
pub fn star_sidedness_with_normal(
    f: &AsymptoticNet,
    normal: Vec3,
    vertex: &SingularVertex,
    tol: f64,
) -> Result<bool> {
    let p = vertex.vertex;
    f.domain().check_interior_vertex(p)?;
    let singular = vertex.star_dirs();
    if singular.len() != 2 {
        return Err(Error::InadmissibleVertex(p));
    }
    let o = Orienter::new(normal, tol);
    let what = format!("star sidedness at vertex {p}");
    let s0 = f.star_edge(p, singular[0])?;
    let s1 = f.star_edge(p, singular[1])?;
    for d in StarDir::ALL.into_iter().filter(|d| !singular.contains(d)) {
        let line = f.star_edge(p, d)?;
        if o.strict(&line, &s0, &what)? != o.strict(&line, &s1, &what)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn traversal(dirs: &[StarDir]) -> Option<Traversal> {
    let [d0, d1] = dirs else { return None };
    let horizontal = |d: &StarDir| matches!(d, StarDir::Left | StarDir::Right);
    if horizontal(d0) == horizontal(d1) {
        return Some(Traversal::Straight);
    }
    // Entering along d0 moves against its step, leaving along d1 moves with it.
    let (du0, dv0) = d0.step();
    let (du1, dv1) = d1.step();
    let du = -du0 + du1;
    let dv = -dv0 + dv1;
    Some(if du * dv < 0 {
        Traversal::Opposite
    } else {
        Traversal::Same
    })
}

/// Fills configuration, kind and diagnostics of an interior vertex with
/// exactly two singular edges.
pub fn classify_vertex(
    net: &ConormalNet,
    f: &AsymptoticNet,
    vertex: &SingularVertex,
    tol: f64,
) -> Result<SingularVertex> {
    net.domain().check_interior_vertex(vertex.vertex)?;
    if vertex.incident_singular_edges.len() != 2 {
        return Err(Error::InadmissibleVertex(vertex.vertex));
    }
    let base = base_edge(net, vertex)?;
    classify_vertex_with_base(net, f, vertex, base, tol)
}

/// [`classify_vertex`] with the quadrant picture built on a chosen
/// singular edge.
pub fn classify_vertex_with_base(
    net: &ConormalNet,
    f: &AsymptoticNet,
    vertex: &SingularVertex,
    base: StarDir,
    tol: f64,
) -> Result<SingularVertex> {
    let p = vertex.vertex;
    net.domain().check_interior_vertex(p)?;
    let dirs = vertex.star_dirs();
    if dirs.len() != 2 {
        return Err(Error::InadmissibleVertex(p));
    }
    if !dirs.contains(&base) {
        return Err(Error::Validation(format!(
            "base edge {} is not singular at vertex {p}",
            base.edge_from(p)
        )));
    }
    let frame = LocalFrame::at(net, p)?;
    let q = with_vertex(p, quadrants(&frame, base, tol, p))?;
    if q.backward == q.forward {
        return Err(Error::InadmissibleVertex(p));
    }
    let ab_cross = with_vertex(p, frame.alpha_beta_cross(tol));
    let arb_cross = with_vertex(p, frame.alpha_reflected_beta_cross(tol))?;
    let antipodal = q.backward == [-q.forward[0], -q.forward[1]];
    let (configuration, ab) = if antipodal {
        (Configuration::A, ab_cross.ok())
    } else {
        let ab = ab_cross?;
        (
            if ab {
                Configuration::B
            } else {
                Configuration::C
            },
            Some(ab),
        )
    };
    let kind = if arb_cross {
        Kind::Swallowtail
    } else {
        Kind::CuspidalEdge
    };
    let star_same_side = star_sidedness_test(f, net, vertex, tol).ok();
    Ok(SingularVertex {
        vertex: p,
        incident_singular_edges: vertex.incident_singular_edges.clone(),
        configuration,
        kind,
        diagnostics: Diagnostics {
            base_edge: Some(base.edge_from(p)),
            forward_signature: Some(q.forward),
            backward_signature: Some(q.backward),
            alpha_beta_cross: ab,
            alpha_reflected_beta_cross: Some(arb_cross),
            star_same_side,
            traversal: traversal(&dirs),
        },
    })
}
