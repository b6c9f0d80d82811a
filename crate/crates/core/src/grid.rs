//! Integer indexing for vertices, edges and quadrangles of a rectangular net.
//!
//! Half-integer objects are keyed by an integer vertex: the u-edge
//! `(u+½, v)` and the v-edge `(u, v+½)` by their lower endpoint `(u, v)`,
//! the quad `(u+½, v+½)` by its lower-left corner.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexIdx {
    pub u: i64,
    pub v: i64,
}

impl VertexIdx {
    pub const fn new(u: i64, v: i64) -> Self {
        Self { u, v }
    }

    pub fn offset(self, du: i64, dv: i64) -> Self {
        Self::new(self.u + du, self.v + dv)
    }
}

impl fmt::Display for VertexIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    U,
    V,
}

/// Grid edge: `Axis::U` joins `base` to `base + (1, 0)`, `Axis::V` joins
/// `base` to `base + (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeIdx {
    pub axis: Axis,
    pub base: VertexIdx,
}

impl EdgeIdx {
    pub const fn u_edge(u: i64, v: i64) -> Self {
        Self {
            axis: Axis::U,
            base: VertexIdx::new(u, v),
        }
    }

    pub const fn v_edge(u: i64, v: i64) -> Self {
        Self {
            axis: Axis::V,
            base: VertexIdx::new(u, v),
        }
    }

    pub fn endpoints(self) -> (VertexIdx, VertexIdx) {
        match self.axis {
            Axis::U => (self.base, self.base.offset(1, 0)),
            Axis::V => (self.base, self.base.offset(0, 1)),
        }
    }

    /// The endpoint that is not `vertex`, if `vertex` is an endpoint.
    pub fn other_end(self, vertex: VertexIdx) -> Option<VertexIdx> {
        let (a, b) = self.endpoints();
        if a == vertex {
            Some(b)
        } else if b == vertex {
            Some(a)
        } else {
            None
        }
    }

    /// Doubled coordinates of the edge midpoint.
    pub fn doubled(self) -> [i64; 2] {
        match self.axis {
            Axis::U => [2 * self.base.u + 1, 2 * self.base.v],
            Axis::V => [2 * self.base.u, 2 * self.base.v + 1],
        }
    }
}

impl fmt::Display for EdgeIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.doubled();
        write!(f, "({}, {})", half(a), half(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadIdx {
    pub u: i64,
    pub v: i64,
}

impl QuadIdx {
    pub const fn new(u: i64, v: i64) -> Self {
        Self { u, v }
    }

    /// `[2u+1, 2v+1]`, the doubled center of the quad.
    pub fn doubled(self) -> [i64; 2] {
        [2 * self.u + 1, 2 * self.v + 1]
    }

    pub fn from_doubled(key: [i64; 2]) -> Option<Self> {
        if key[0].rem_euclid(2) == 1 && key[1].rem_euclid(2) == 1 {
            Some(Self::new((key[0] - 1) / 2, (key[1] - 1) / 2))
        } else {
            None
        }
    }

    pub fn lower_left(self) -> VertexIdx {
        VertexIdx::new(self.u, self.v)
    }
}

impl fmt::Display for QuadIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.doubled();
        write!(f, "({}, {})", half(a), half(b))
    }
}

fn half(doubled: i64) -> String {
    if doubled % 2 == 0 {
        format!("{}", doubled / 2)
    } else {
        format!("{}", doubled as f64 / 2.0)
    }
}

/// Rectangular vertex domain `[u_min, u_max] × [v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDomain {
    pub u_min: i64,
    pub u_max: i64,
    pub v_min: i64,
    pub v_max: i64,
}

impl GridDomain {
    pub fn new(u_min: i64, u_max: i64, v_min: i64, v_max: i64) -> Result<Self> {
        if u_max < u_min + 1 || v_max < v_min + 1 {
            return Err(Error::Validation(format!(
                "domain [{u_min}, {u_max}] x [{v_min}, {v_max}] has no quadrangle"
            )));
        }
        Ok(Self {
            u_min,
            u_max,
            v_min,
            v_max,
        })
    }

    pub fn vertex_count_u(&self) -> usize {
        (self.u_max - self.u_min + 1) as usize
    }

    pub fn vertex_count_v(&self) -> usize {
        (self.v_max - self.v_min + 1) as usize
    }

    pub fn contains_vertex(&self, p: VertexIdx) -> bool {
        (self.u_min..=self.u_max).contains(&p.u) && (self.v_min..=self.v_max).contains(&p.v)
    }

    pub fn is_interior_vertex(&self, p: VertexIdx) -> bool {
        p.u > self.u_min && p.u < self.u_max && p.v > self.v_min && p.v < self.v_max
    }

    pub fn contains_quad(&self, q: QuadIdx) -> bool {
        (self.u_min..self.u_max).contains(&q.u) && (self.v_min..self.v_max).contains(&q.v)
    }

    pub fn contains_edge(&self, e: EdgeIdx) -> bool {
        let (a, b) = e.endpoints();
        self.contains_vertex(a) && self.contains_vertex(b)
    }

    /// The two quads sharing `e`: below/above a u-edge, left/right of a v-edge.
    /// `None` for boundary edges.
    pub fn adjacent_quads(&self, e: EdgeIdx) -> Option<(QuadIdx, QuadIdx)> {
        let b = e.base;
        let (q0, q1) = match e.axis {
            Axis::U => (QuadIdx::new(b.u, b.v - 1), QuadIdx::new(b.u, b.v)),
            Axis::V => (QuadIdx::new(b.u - 1, b.v), QuadIdx::new(b.u, b.v)),
        };
        (self.contains_quad(q0) && self.contains_quad(q1)).then_some((q0, q1))
    }

    pub fn is_interior_edge(&self, e: EdgeIdx) -> bool {
        self.adjacent_quads(e).is_some()
    }

    pub fn check_vertex(&self, p: VertexIdx) -> Result<()> {
        if self.contains_vertex(p) {
            Ok(())
        } else {
            Err(Error::IndexOutOfDomain(Location::Vertex(p)))
        }
    }

    pub fn check_quad(&self, q: QuadIdx) -> Result<()> {
        if self.contains_quad(q) {
            Ok(())
        } else {
            Err(Error::IndexOutOfDomain(Location::Quad(q)))
        }
    }

    pub fn check_interior_vertex(&self, p: VertexIdx) -> Result<()> {
        self.check_vertex(p)?;
        if self.is_interior_vertex(p) {
            Ok(())
        } else {
            Err(Error::BoundaryVertex(p))
        }
    }

    /// Vertices in row-major order (v outer, u inner).
    pub fn vertices(&self) -> impl Iterator<Item = VertexIdx> + '_ {
        (self.v_min..=self.v_max)
            .flat_map(move |v| (self.u_min..=self.u_max).map(move |u| VertexIdx::new(u, v)))
    }

    pub fn quads(&self) -> impl Iterator<Item = QuadIdx> + '_ {
        (self.v_min..self.v_max)
            .flat_map(move |v| (self.u_min..self.u_max).map(move |u| QuadIdx::new(u, v)))
    }

    /// Interior edges: all u-edges first, then all v-edges, each row-major.
    pub fn interior_edges(&self) -> impl Iterator<Item = EdgeIdx> + '_ {
        let u_edges = (self.v_min + 1..self.v_max)
            .flat_map(move |v| (self.u_min..self.u_max).map(move |u| EdgeIdx::u_edge(u, v)));
        let v_edges = (self.v_min..self.v_max)
            .flat_map(move |v| (self.u_min + 1..self.u_max).map(move |u| EdgeIdx::v_edge(u, v)));
        u_edges.chain(v_edges)
    }
}

/// Direction of a star edge leaving a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarDir {
    Right,
    Up,
    Left,
    Down,
}

impl StarDir {
    pub const ALL: [StarDir; 4] = [StarDir::Right, StarDir::Up, StarDir::Left, StarDir::Down];

    pub fn step(self) -> (i64, i64) {
        match self {
            StarDir::Right => (1, 0),
            StarDir::Up => (0, 1),
            StarDir::Left => (-1, 0),
            StarDir::Down => (0, -1),
        }
    }

    pub fn edge_from(self, p: VertexIdx) -> EdgeIdx {
        match self {
            StarDir::Right => EdgeIdx::u_edge(p.u, p.v),
            StarDir::Up => EdgeIdx::v_edge(p.u, p.v),
            StarDir::Left => EdgeIdx::u_edge(p.u - 1, p.v),
            StarDir::Down => EdgeIdx::v_edge(p.u, p.v - 1),
        }
    }

    /// Which star direction of `p` the edge `e` is, if incident.
    pub fn of_edge(p: VertexIdx, e: EdgeIdx) -> Option<StarDir> {
        StarDir::ALL.into_iter().find(|d| d.edge_from(p) == e)
    }
}

/// Dense storage for values on the integer lattice points of a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexGrid<T> {
    u_min: i64,
    v_min: i64,
    nu: usize,
    nv: usize,
    data: Vec<T>,
}

impl<T> IndexGrid<T> {
    pub fn from_fn(
        u_range: std::ops::RangeInclusive<i64>,
        v_range: std::ops::RangeInclusive<i64>,
        mut f: impl FnMut(i64, i64) -> T,
    ) -> Self {
        let (u_min, v_min) = (*u_range.start(), *v_range.start());
        let nu = (u_range.end() - u_min + 1).max(0) as usize;
        let nv = (v_range.end() - v_min + 1).max(0) as usize;
        let mut data = Vec::with_capacity(nu * nv);
        for j in 0..nv {
            for i in 0..nu {
                data.push(f(u_min + i as i64, v_min + j as i64));
            }
        }
        Self {
            u_min,
            v_min,
            nu,
            nv,
            data,
        }
    }

    fn slot(&self, u: i64, v: i64) -> Option<usize> {
        let i = u - self.u_min;
        let j = v - self.v_min;
        if i < 0 || j < 0 || i as usize >= self.nu || j as usize >= self.nv {
            None
        } else {
            Some(j as usize * self.nu + i as usize)
        }
    }

    pub fn get(&self, u: i64, v: i64) -> Option<&T> {
        self.slot(u, v).map(|k| &self.data[k])
    }

    pub fn get_mut(&mut self, u: i64, v: i64) -> Option<&mut T> {
        self.slot(u, v).map(|k| &mut self.data[k])
    }

    pub fn u_range(&self) -> std::ops::RangeInclusive<i64> {
        self.u_min..=self.u_min + self.nu as i64 - 1
    }

    pub fn v_range(&self) -> std::ops::RangeInclusive<i64> {
        self.v_min..=self.v_min + self.nv as i64 - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &T)> + '_ {
        self.data.iter().enumerate().map(move |(k, x)| {
            (
                (
                    self.u_min + (k % self.nu) as i64,
                    self.v_min + (k / self.nu) as i64,
                ),
                x,
            )
        })
    }
}

impl<T> std::ops::Index<(i64, i64)> for IndexGrid<T> {
    type Output = T;

    fn index(&self, (u, v): (i64, i64)) -> &T {
        self.get(u, v).expect("grid index in range")
    }
}

impl<T> std::ops::IndexMut<(i64, i64)> for IndexGrid<T> {
    fn index_mut(&mut self, (u, v): (i64, i64)) -> &mut T {
        self.get_mut(u, v).expect("grid index in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_quads_follow_edge_axis() {
        let d = GridDomain::new(-1, 1, -1, 1).unwrap();
        assert_eq!(
            d.adjacent_quads(EdgeIdx::v_edge(0, 0)),
            Some((QuadIdx::new(-1, 0), QuadIdx::new(0, 0)))
        );
        assert_eq!(
            d.adjacent_quads(EdgeIdx::u_edge(0, 0)),
            Some((QuadIdx::new(0, -1), QuadIdx::new(0, 0)))
        );
        assert_eq!(d.adjacent_quads(EdgeIdx::v_edge(-1, 0)), None);
        assert_eq!(d.interior_edges().count(), 4);
    }

    #[test]
    fn doubled_keys_and_display() {
        assert_eq!(QuadIdx::new(-1, 0).doubled(), [-1, 1]);
        assert_eq!(QuadIdx::from_doubled([-1, 1]), Some(QuadIdx::new(-1, 0)));
        assert_eq!(QuadIdx::from_doubled([0, 1]), None);
        assert_eq!(EdgeIdx::v_edge(0, -1).to_string(), "(0, -0.5)");
        assert_eq!(EdgeIdx::u_edge(0, 0).to_string(), "(0.5, 0)");
    }

    #[test]
    fn star_dirs_round_trip() {
        let p = VertexIdx::new(3, -2);
        for d in StarDir::ALL {
            assert_eq!(StarDir::of_edge(p, d.edge_from(p)), Some(d));
            let (du, dv) = d.step();
            assert_eq!(d.edge_from(p).other_end(p), Some(p.offset(du, dv)));
        }
    }

    #[test]
    fn empty_domain_rejected() {
        assert!(GridDomain::new(0, 0, 0, 3).is_err());
    }

    #[test]
    fn index_grid_addresses_offsets() {
        let g = IndexGrid::from_fn(-2..=1, 3..=4, |u, v| u * 10 + v);
        assert_eq!(g.get(-2, 3), Some(&-17));
        assert_eq!(g.get(1, 4), Some(&14));
        assert_eq!(g.get(2, 4), None);
        assert_eq!(g.iter().count(), 8);
    }
}
