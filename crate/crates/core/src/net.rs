//! Polygonal curves, the co-normal field `ν(u,v) = α(u) − β(v)` and the
//! asymptotic net obtained from it by the discrete Lelieuvre formulas
//! `f_u = ν × ν_u`, `f_v = −ν × ν_v`.

use crate::dd::Dd3;
use crate::error::{Error, Location, Result};
use crate::grid::{GridDomain, IndexGrid, QuadIdx, StarDir, VertexIdx};
use crate::predicates::exact_triple;
use crate::Vec3;

/// Co-normals shorter than this multiple of the coordinate scale are
/// treated as intersections of the two curves.
pub const MIN_CONORMAL_RATIO: f64 = 1e-12;

/// Integer-indexed polygonal line in space.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    offset: i64,
    points: Vec<Vec3>,
}

impl PolyCurve {
    pub fn new(offset: i64, points: Vec<Vec3>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidCurve(format!(
                "need at least 3 points, got {}",
                points.len()
            )));
        }
        for (k, p) in points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::InvalidCurve(format!(
                    "non-finite point at {}",
                    Location::CurveIndex(offset + k as i64)
                )));
            }
        }
        for (k, w) in points.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::InvalidCurve(format!(
                    "consecutive duplicate points at {}",
                    Location::CurveIndex(offset + k as i64 + 1)
                )));
            }
        }
        Ok(Self { offset, points })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the last sample.
    pub fn last_index(&self) -> i64 {
        self.offset + self.points.len() as i64 - 1
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn point(&self, k: i64) -> Result<Vec3> {
        let i = k - self.offset;
        if i < 0 || i as usize >= self.points.len() {
            return Err(Error::IndexOutOfDomain(Location::CurveIndex(k)));
        }
        Ok(self.points[i as usize])
    }

    /// Discrete derivative at the half-integer `lower + ½`: `c(lower+1) − c(lower)`.
    pub fn derivative(&self, lower: i64) -> Result<Vec3> {
        Ok(self.point(lower + 1)? - self.point(lower)?)
    }

    /// Largest absolute coordinate.
    pub fn max_abs_coordinate(&self) -> f64 {
        self.points.iter().map(|p| p.amax()).fold(0.0, f64::max)
    }

    /// Apply `map` to every point, keeping the indexing.
    pub fn map(&self, map: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        Self::new(self.offset, self.points.iter().map(map).collect())
    }

    /// The curve traversed backwards: `c̃(k) = c(−k)`.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self {
            offset: -self.last_index(),
            points,
        }
    }
}

/// Co-normal field of a DIAMS, `ν(u,v) = α(u) − β(v)`.
#[derive(Debug, Clone)]
pub struct ConormalNet {
    alpha: PolyCurve,
    beta: PolyCurve,
    domain: GridDomain,
    scale: f64,
}

impl ConormalNet {
    /// Builds the net on the product of the two index ranges. Fails when
    /// some `ν(u,v)` is shorter than [`MIN_CONORMAL_RATIO`] × scale.
    pub fn new(alpha: PolyCurve, beta: PolyCurve) -> Result<Self> {
        let domain = GridDomain::new(
            alpha.offset(),
            alpha.last_index(),
            beta.offset(),
            beta.last_index(),
        )?;
        let scale = alpha.max_abs_coordinate().max(beta.max_abs_coordinate());
        let net = Self {
            alpha,
            beta,
            domain,
            scale,
        };
        for p in net.domain.vertices() {
            if net.nu(p).norm() < MIN_CONORMAL_RATIO * scale {
                return Err(Error::IntersectingCurves(p));
            }
        }
        Ok(net)
    }

    pub fn alpha(&self) -> &PolyCurve {
        &self.alpha
    }

    pub fn beta(&self) -> &PolyCurve {
        &self.beta
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    /// Characteristic coordinate scale: the largest absolute coordinate
    /// of any sample.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    // Unchecked; callers validate the index against the domain.
    pub(crate) fn nu(&self, p: VertexIdx) -> Vec3 {
        let i = (p.u - self.alpha.offset) as usize;
        let j = (p.v - self.beta.offset) as usize;
        self.alpha.points[i] - self.beta.points[j]
    }

    /// `α′(u + ½)`.
    pub fn alpha_derivative(&self, u: i64) -> Result<Vec3> {
        self.alpha.derivative(u)
    }

    /// `β′(v + ½)`.
    pub fn beta_derivative(&self, v: i64) -> Result<Vec3> {
        self.beta.derivative(v)
    }

    pub fn conormal(&self, u: i64, v: i64) -> Result<Vec3> {
        let p = VertexIdx::new(u, v);
        self.domain.check_vertex(p)?;
        Ok(self.nu(p))
    }

    /// The co-normal sampled on every vertex.
    pub fn field(&self) -> IndexGrid<Vec3> {
        let d = self.domain;
        IndexGrid::from_fn(d.u_min..=d.u_max, d.v_min..=d.v_max, |u, v| {
            self.nu(VertexIdx::new(u, v))
        })
    }

    pub fn moutard_residual(&self, quad: QuadIdx) -> Result<Vec3> {
        self.domain.check_quad(quad)?;
        let (u, v) = (quad.u, quad.v);
        let at = |du, dv| self.nu(VertexIdx::new(u + du, v + dv));
        Ok(at(1, 1) + at(0, 0) - at(0, 1) - at(1, 0))
    }

    /// Lelieuvre u-edge vector `f_u(u+½, v) = ν(u,v) × α′(u+½)`.
    pub fn u_edge_vector(&self, u: i64, v: i64) -> Result<Vec3> {
        let nu = self.conormal(u, v)?;
        Ok(nu.cross(&self.alpha.derivative(u)?))
    }

    /// Lelieuvre v-edge vector `f_v(u, v+½) = −ν(u,v) × ν_v = ν(u,v) × β′(v+½)`.
    pub fn v_edge_vector(&self, u: i64, v: i64) -> Result<Vec3> {
        let nu = self.conormal(u, v)?;
        Ok(nu.cross(&self.beta.derivative(v)?))
    }

    /// `f_u(u+½,v) + f_v(u+1,v+½) − f_u(u+½,v+1) − f_v(u,v+½)` from the
    /// Lelieuvre edge vectors alone.
    pub fn quad_closure_residual(&self, quad: QuadIdx) -> Result<Vec3> {
        self.domain.check_quad(quad)?;
        let (u, v) = (quad.u, quad.v);
        Ok(self.u_edge_vector(u, v)? + self.v_edge_vector(u + 1, v)?
            - self.u_edge_vector(u, v + 1)?
            - self.v_edge_vector(u, v)?)
    }

    /// Same curves with every point mapped by `map`.
    pub fn transformed(&self, map: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        Self::new(self.alpha.map(&map)?, self.beta.map(&map)?)
    }
}

/// Moutard residual `ν(u+1,v+1) + ν(u,v) − ν(u,v+1) − ν(u+1,v)` of an
/// arbitrary vertex field.
pub fn moutard_residual(field: &IndexGrid<Vec3>, quad: QuadIdx) -> Result<Vec3> {
    let at = |du: i64, dv: i64| {
        field
            .get(quad.u + du, quad.v + dv)
            .copied()
            .ok_or(Error::IndexOutOfDomain(Location::Quad(quad)))
    };
    Ok(at(1, 1)? + at(0, 0)? - at(0, 1)? - at(1, 0)?)
}

/// Vertex positions of a discrete asymptotic net.
#[derive(Debug, Clone)]
pub struct AsymptoticNet {
    domain: GridDomain,
    positions: IndexGrid<Vec3>,
    /// Rounding remainders of the positions; zero for explicit positions.
    low: IndexGrid<Vec3>,
    base_vertex: VertexIdx,
    base_point: Vec3,
}

impl AsymptoticNet {
    /// Wraps explicit positions (no Lelieuvre structure assumed).
    pub fn from_positions(domain: GridDomain, positions: IndexGrid<Vec3>) -> Result<Self> {
        let base_vertex = VertexIdx::new(domain.u_min, domain.v_min);
        for p in domain.vertices() {
            if positions.get(p.u, p.v).is_none() {
                return Err(Error::IndexOutOfDomain(Location::Vertex(p)));
            }
        }
        let base_point = positions[(base_vertex.u, base_vertex.v)];
        let low = IndexGrid::from_fn(
            domain.u_min..=domain.u_max,
            domain.v_min..=domain.v_max,
            |_, _| Vec3::zeros(),
        );
        Ok(Self {
            domain,
            positions,
            low,
            base_vertex,
            base_point,
        })
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn base_vertex(&self) -> VertexIdx {
        self.base_vertex
    }

    pub fn base_point(&self) -> Vec3 {
        self.base_point
    }

    pub fn positions(&self) -> &IndexGrid<Vec3> {
        &self.positions
    }

    pub fn position(&self, p: VertexIdx) -> Result<Vec3> {
        self.positions
            .get(p.u, p.v)
            .copied()
            .ok_or(Error::IndexOutOfDomain(Location::Vertex(p)))
    }

    /// Edge vector from `p` to its neighbour in direction `dir`.
    pub fn star_edge(&self, p: VertexIdx, dir: StarDir) -> Result<Vec3> {
        let (du, dv) = dir.step();
        Ok(self.position(p.offset(du, dv))? - self.position(p)?)
    }

    /// Position carrying the remainder kept by the integration.
    pub(crate) fn position_dd(&self, p: VertexIdx) -> Result<Dd3> {
        Ok(Dd3::from_parts(self.position(p)?, self.low[(p.u, p.v)]))
    }

    /// Corners of a quad in `(u,v), (u+1,v), (u,v+1), (u+1,v+1)` order.
    pub fn quad_corners(&self, q: QuadIdx) -> Result<[Vec3; 4]> {
        self.domain.check_quad(q)?;
        let p = q.lower_left();
        Ok([
            self.position(p)?,
            self.position(p.offset(1, 0))?,
            self.position(p.offset(0, 1))?,
            self.position(p.offset(1, 1))?,
        ])
    }

    pub fn set_position(&mut self, p: VertexIdx, x: Vec3) -> Result<()> {
        if let Some(l) = self.low.get_mut(p.u, p.v) {
            *l = Vec3::zeros();
        }
        *self
            .positions
            .get_mut(p.u, p.v)
            .ok_or(Error::IndexOutOfDomain(Location::Vertex(p)))? = x;
        Ok(())
    }
}

/// Integrates the discrete Lelieuvre equations from `base_point` at
/// `base_vertex`: first along the row of the base vertex, then up and down
/// every column.
pub fn integrate_net(
    net: &ConormalNet,
    base_vertex: VertexIdx,
    base_point: Vec3,
) -> Result<AsymptoticNet> {
    let d = *net.domain();
    d.check_vertex(base_vertex)?;
    // Positions are running sums of edge vectors; both are carried in
    // double-double so that second differences such as f_uv keep their
    // relative accuracy where Ω is small.
    let alpha = |u: i64| net.alpha.point(u);
    let beta = |v: i64| net.beta.point(v);
    let nu = |u: i64, v: i64| -> Result<Dd3> { Ok(Dd3::diff(alpha(u)?, beta(v)?)) };
    let fu = |u: i64, v: i64| -> Result<Dd3> {
        Ok(nu(u, v)?.cross(&Dd3::diff(alpha(u + 1)?, alpha(u)?)))
    };
    let fv =
        |u: i64, v: i64| -> Result<Dd3> { Ok(nu(u, v)?.cross(&Dd3::diff(beta(v + 1)?, beta(v)?))) };
    let mut acc = IndexGrid::from_fn(d.u_min..=d.u_max, d.v_min..=d.v_max, |_, _| Dd3::zero());
    let vb = base_vertex.v;
    acc[(base_vertex.u, vb)] = Dd3::from_vec(base_point);
    for u in base_vertex.u..d.u_max {
        acc[(u + 1, vb)] = acc[(u, vb)] + fu(u, vb)?;
    }
    for u in (d.u_min..base_vertex.u).rev() {
        acc[(u, vb)] = acc[(u + 1, vb)] - fu(u, vb)?;
    }
    for u in d.u_min..=d.u_max {
        for v in vb..d.v_max {
            acc[(u, v + 1)] = acc[(u, v)] + fv(u, v)?;
        }
        for v in (d.v_min..vb).rev() {
            acc[(u, v)] = acc[(u, v + 1)] - fv(u, v)?;
        }
    }
    let positions = IndexGrid::from_fn(d.u_min..=d.u_max, d.v_min..=d.v_max, |u, v| {
        acc[(u, v)].hi()
    });
    let err = IndexGrid::from_fn(d.u_min..=d.u_max, d.v_min..=d.v_max, |u, v| {
        acc[(u, v)].lo()
    });
    Ok(AsymptoticNet {
        domain: d,
        positions,
        low: err,
        base_vertex,
        base_point,
    })
}

impl AsymptoticNet {
    /// Lelieuvre integration with `f(u_min, v_min) = 0`.
    pub fn integrate(net: &ConormalNet) -> Result<Self> {
        let d = net.domain();
        integrate_net(net, VertexIdx::new(d.u_min, d.v_min), Vec3::zeros())
    }
}

/// `max |ν(u,v) · e|` over the four star edges `e` of an interior vertex.
pub fn star_planarity_residual(
    f: &AsymptoticNet,
    net: &ConormalNet,
    vertex: VertexIdx,
) -> Result<f64> {
    f.domain().check_interior_vertex(vertex)?;
    let nu = net.conormal(vertex.u, vertex.v)?;
    StarDir::ALL.into_iter().try_fold(0.0_f64, |acc, dir| {
        Ok(acc.max(nu.dot(&f.star_edge(vertex, dir)?).abs()))
    })
}

/// The four points spanning, with the line `α(u) β(v)`, the planes of the
/// generic-position hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NeighborPoint {
    AlphaNext,
    AlphaPrev,
    BetaNext,
    BetaPrev,
}

impl NeighborPoint {
    pub fn label(self) -> &'static str {
        match self {
            NeighborPoint::AlphaNext => "alpha(u+1)",
            NeighborPoint::AlphaPrev => "alpha(u-1)",
            NeighborPoint::BetaNext => "beta(v+1)",
            NeighborPoint::BetaPrev => "beta(v-1)",
        }
    }
}

/// Two coincident planes through the line `α(u) β(v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericPositionViolation {
    pub vertex: VertexIdx,
    pub first: NeighborPoint,
    pub second: NeighborPoint,
    /// Sine of the angle between the two plane normals (0 when exact).
    pub sine: f64,
}

/// Checks that, at every vertex with all four neighbours, the planes through
/// the line `α(u) β(v)` and each of `α(u±1)`, `β(v±1)` are pairwise distinct.
/// Planes count as equal when their normals make an angle with sine at most
/// `tol`, or when the normals are exactly parallel.
pub fn validate_generic_position(net: &ConormalNet, tol: f64) -> Vec<GenericPositionViolation> {
    use NeighborPoint::*;
    let alpha = net.alpha();
    let beta = net.beta();
    let mut out = Vec::new();
    for u in alpha.offset() + 1..alpha.last_index() {
        for v in beta.offset() + 1..beta.last_index() {
            let vertex = VertexIdx::new(u, v);
            let b0 = beta.points[(v - beta.offset) as usize];
            let line = net.nu(vertex);
            let pt = |k: i64| alpha.points[(k - alpha.offset) as usize];
            let bt = |k: i64| beta.points[(k - beta.offset) as usize];
            let spans = [
                (AlphaNext, pt(u + 1) - b0),
                (AlphaPrev, pt(u - 1) - b0),
                (BetaNext, bt(v + 1) - b0),
                (BetaPrev, bt(v - 1) - b0),
            ];
            for i in 0..4 {
                for j in i + 1..4 {
                    let (ta, x) = spans[i];
                    let (tb, y) = spans[j];
                    let n1 = line.cross(&x);
                    let n2 = line.cross(&y);
                    let det = exact_triple(&line, &x, &y);
                    let denom = n1.norm() * n2.norm();
                    let sine = if det == 0.0 || denom == 0.0 {
                        0.0
                    } else {
                        (line.norm() * det.abs() / denom).min(1.0)
                    };
                    if sine == 0.0 || sine <= tol {
                        out.push(GenericPositionViolation {
                            vertex,
                            first: ta,
                            second: tb,
                            sine,
                        });
                    }
                }
            }
        }
    }
    out
}
