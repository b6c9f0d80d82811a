//! Hyperbolic-paraboloid patches over the quads of a net, their tangent
//! compatibility, triangulation and OBJ export.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{QuadIdx, VertexIdx};
use crate::net::AsymptoticNet;
use crate::singularity::SingularPolyline;
use crate::Vec3;

/// Bilinear patch through four corners given in `(u,v), (u+1,v), (u,v+1),
/// (u+1,v+1)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearPatch {
    pub corners: [Vec3; 4],
}

/// One side of the unit parameter square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchSide {
    /// `t = 0`, from `c00` to `c10`.
    Bottom,
    /// `s = 1`, from `c10` to `c11`.
    Right,
    /// `t = 1`, from `c01` to `c11`.
    Top,
    /// `s = 0`, from `c00` to `c01`.
    Left,
}

impl PatchSide {
    /// Parameters of the point at fraction `r` along the side.
    fn params(self, r: f64) -> (f64, f64) {
        match self {
            PatchSide::Bottom => (r, 0.0),
            PatchSide::Right => (1.0, r),
            PatchSide::Top => (r, 1.0),
            PatchSide::Left => (0.0, r),
        }
    }
}

impl BilinearPatch {
    pub fn new(corners: [Vec3; 4]) -> Self {
        Self { corners }
    }

    pub fn of_quad(f: &AsymptoticNet, q: QuadIdx) -> Result<Self> {
        Ok(Self::new(f.quad_corners(q)?))
    }

    fn eval(&self, s: f64, t: f64) -> Vec3 {
        let [c00, c10, c01, c11] = self.corners;
        c00 * ((1.0 - s) * (1.0 - t))
            + c10 * (s * (1.0 - t))
            + c01 * ((1.0 - s) * t)
            + c11 * (s * t)
    }

    /// Unnormalized normal `∂s × ∂t`.
    pub fn normal(&self, s: f64, t: f64) -> Vec3 {
        let [c00, c10, c01, c11] = self.corners;
        let ds = (c10 - c00) * (1.0 - t) + (c11 - c01) * t;
        let dt = (c01 - c00) * (1.0 - s) + (c11 - c10) * s;
        ds.cross(&dt)
    }

    fn side_ends(&self, side: PatchSide) -> (Vec3, Vec3) {
        let [c00, c10, c01, c11] = self.corners;
        match side {
            PatchSide::Bottom => (c00, c10),
            PatchSide::Right => (c10, c11),
            PatchSide::Top => (c01, c11),
            PatchSide::Left => (c00, c01),
        }
    }
}

pub fn bilinear_point(patch: &BilinearPatch, s: f64, t: f64) -> Result<Vec3> {
    if !((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t)) {
        return Err(Error::ParameterOutOfRange(format!(
            "patch parameters ({s}, {t}) outside [0, 1]²"
        )));
    }
    Ok(patch.eval(s, t))
}

/// Largest angle (radians, in `[0, π/2]`) between the normal lines of two
/// patches at `samples` evenly spaced points of their common edge. The
/// sides may run in the same or in opposite directions.
pub fn compatibility_residual(
    p1: &BilinearPatch,
    side1: PatchSide,
    p2: &BilinearPatch,
    side2: PatchSide,
    samples: usize,
) -> Result<f64> {
    let (a0, a1) = p1.side_ends(side1);
    let (b0, b1) = p2.side_ends(side2);
    let reversed = if (a0, a1) == (b0, b1) {
        false
    } else if (a0, a1) == (b1, b0) {
        true
    } else {
        return Err(Error::SharedEdgeMismatch);
    };
    let samples = samples.max(2);
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let r = k as f64 / (samples - 1) as f64;
        let (s1, t1) = side1.params(r);
        let (s2, t2) = side2.params(if reversed { 1.0 - r } else { r });
        let n1 = p1.normal(s1, t1);
        let n2 = p2.normal(s2, t2);
        let angle = n1.cross(&n2).norm().atan2(n1.dot(&n2).abs());
        worst = worst.max(angle);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    /// Source quad of each triangle.
    pub quad_tags: Vec<QuadIdx>,
    /// Singular chains as mesh vertex indices.
    pub polylines: Vec<Vec<usize>>,
}

/// Samples every quad's patch on a `(subdiv+1)²` grid. Neighbouring patches
/// share their boundary samples, each sub-square is split along its
/// `s + t` diagonal, and zero-area triangles are dropped. Singular chains
/// run along patch boundaries through all intermediate samples.
pub fn tessellate(
    f: &AsymptoticNet,
    subdiv: usize,
    singular: &[SingularPolyline],
) -> Result<TriangleMesh> {
    if subdiv == 0 {
        return Err(Error::ParameterOutOfRange(
            "subdiv must be at least 1".into(),
        ));
    }
    let d = *f.domain();
    let nq_u = (d.u_max - d.u_min) as usize;
    let nq_v = (d.v_max - d.v_min) as usize;
    let (gu, gv) = (nq_u * subdiv + 1, nq_v * subdiv + 1);
    let index = |i: usize, j: usize| i * gv + j;

    // Quads in u-major order, matching the vertex numbering.
    let quad = |qi: usize, qj: usize| QuadIdx::new(d.u_min + qi as i64, d.v_min + qj as i64);
    let mut patches = Vec::with_capacity(nq_u * nq_v);
    for k in 0..nq_u * nq_v {
        patches.push(BilinearPatch::of_quad(f, quad(k / nq_v, k % nq_v))?);
    }
    let patch_at = |qi: usize, qj: usize| &patches[qi * nq_v + qj];

    let mut vertices = Vec::with_capacity(gu * gv);
    for i in 0..gu {
        let qi = (i / subdiv).min(nq_u - 1);
        let s = (i - qi * subdiv) as f64 / subdiv as f64;
        for j in 0..gv {
            let qj = (j / subdiv).min(nq_v - 1);
            let t = (j - qj * subdiv) as f64 / subdiv as f64;
            vertices.push(patch_at(qi, qj).eval(s, t));
        }
    }

    let scale = vertices.iter().map(|p| p.amax()).fold(0.0, f64::max);
    let min_area = 1e-14 * scale * scale;
    let mut triangles = Vec::new();
    let mut quad_tags = Vec::new();
    for k in 0..nq_u * nq_v {
        let (qi, qj) = (k / nq_v, k % nq_v);
        let q = quad(qi, qj);
        for a in 0..subdiv {
            for b in 0..subdiv {
                let (i, j) = (qi * subdiv + a, qj * subdiv + b);
                let (v00, v10, v01, v11) = (
                    index(i, j),
                    index(i + 1, j),
                    index(i, j + 1),
                    index(i + 1, j + 1),
                );
                for tri in [[v00, v10, v01], [v10, v11, v01]] {
                    let [x, y, z] = tri.map(|n| vertices[n]);
                    if 0.5 * (y - x).cross(&(z - x)).norm() > min_area {
                        triangles.push(tri);
                        quad_tags.push(q);
                    }
                }
            }
        }
    }

    let node = |p: VertexIdx| -> Result<(usize, usize)> {
        d.check_vertex(p)?;
        Ok((
            (p.u - d.u_min) as usize * subdiv,
            (p.v - d.v_min) as usize * subdiv,
        ))
    };
    let mut polylines = Vec::with_capacity(singular.len());
    for chain in singular {
        let mut out = Vec::new();
        for (k, &p) in chain.vertices.iter().enumerate() {
            let (i, j) = node(p)?;
            if k == 0 {
                out.push(index(i, j));
                continue;
            }
            let (i0, j0) = node(chain.vertices[k - 1])?;
            if i0.abs_diff(i) + j0.abs_diff(j) != subdiv {
                return Err(Error::Validation(format!(
                    "singular chain jumps from vertex {} to {p}",
                    chain.vertices[k - 1]
                )));
            }
            for step in 1..=subdiv {
                let lerp = |a: usize, b: usize| {
                    if b >= a {
                        a + (b - a) * step / subdiv
                    } else {
                        a - (a - b) * step / subdiv
                    }
                };
                out.push(index(lerp(i0, i), lerp(j0, j)));
            }
        }
        polylines.push(out);
    }

    Ok(TriangleMesh {
        vertices,
        triangles,
        quad_tags,
        polylines,
    })
}

/// OBJ text: `v` lines with 17 significant digits, one `g quad_u_v` group
/// per quad (named by its lower-left vertex), 1-based `f` lines and one
/// `l` line per singular chain.
pub fn obj_string(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for p in &mesh.vertices {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
    }
    let mut current: Option<QuadIdx> = None;
    for (tri, &q) in mesh.triangles.iter().zip(&mesh.quad_tags) {
        if current != Some(q) {
            let ll = q.lower_left();
            let _ = writeln!(out, "g quad_{}_{}", ll.u, ll.v);
            current = Some(q);
        }
        let _ = writeln!(out, "f {} {} {}", tri[0] + 1, tri[1] + 1, tri[2] + 1);
    }
    for chain in &mesh.polylines {
        out.push('l');
        for i in chain {
            let _ = write!(out, " {}", i + 1);
        }
        out.push('\n');
    }
    out
}

pub fn export_obj(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    std::fs::write(path, obj_string(mesh)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::example_curves;
    use crate::grid::{GridDomain, IndexGrid};
    use crate::net::ConormalNet;

    fn unit_patch() -> BilinearPatch {
        BilinearPatch::new([
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 1.0),
        ])
    }

    fn example_net() -> AsymptoticNet {
        let (a, b) = example_curves(1.0, 0.1, 0.1).unwrap();
        AsymptoticNet::integrate(&ConormalNet::new(a, b).unwrap()).unwrap()
    }

    #[test]
    fn bilinear_values() {
        let p = unit_patch();
        assert_eq!(
            bilinear_point(&p, 0.5, 0.5).unwrap(),
            Vec3::new(0.5, 0.5, 0.25)
        );
        for (k, (s, t)) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
            .into_iter()
            .enumerate()
        {
            assert_eq!(bilinear_point(&p, s, t).unwrap(), p.corners[k]);
        }
        assert!(matches!(
            bilinear_point(&p, 1.5, 0.0),
            Err(Error::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn patch_center_is_corner_average() {
        let f = example_net();
        let p = BilinearPatch::of_quad(&f, QuadIdx::new(0, 0)).unwrap();
        let avg = p.corners.iter().sum::<Vec3>() / 4.0;
        assert!((bilinear_point(&p, 0.5, 0.5).unwrap() - avg).amax() < 1e-15);
    }

    #[test]
    fn example_patches_are_compatible() {
        let f = example_net();
        let p = |u, v| BilinearPatch::of_quad(&f, QuadIdx::new(u, v)).unwrap();
        let r = compatibility_residual(&p(-1, 0), PatchSide::Right, &p(0, 0), PatchSide::Left, 9)
            .unwrap();
        assert!(r <= 1e-10, "{r}");
        let r = compatibility_residual(&p(0, -1), PatchSide::Top, &p(0, 0), PatchSide::Bottom, 9)
            .unwrap();
        assert!(r <= 1e-10, "{r}");
        assert_eq!(
            compatibility_residual(&p(0, 0), PatchSide::Left, &p(0, 0), PatchSide::Left, 9)
                .unwrap(),
            0.0
        );
        assert!(matches!(
            compatibility_residual(&p(0, 0), PatchSide::Right, &p(-1, 0), PatchSide::Left, 9),
            Err(Error::SharedEdgeMismatch)
        ));
    }

    #[test]
    fn perturbed_net_is_incompatible() {
        let mut f = example_net();
        let p0 = f.position(VertexIdx::new(0, 0)).unwrap();
        f.set_position(VertexIdx::new(0, 0), p0 + Vec3::new(0.0, 0.0, 0.01))
            .unwrap();
        let p = |u, v| BilinearPatch::of_quad(&f, QuadIdx::new(u, v)).unwrap();
        let r = compatibility_residual(&p(-1, 0), PatchSide::Right, &p(0, 0), PatchSide::Left, 9)
            .unwrap();
        assert!(r > 1e-3, "{r}");
    }

    #[test]
    fn tessellation_counts() {
        let d = GridDomain::new(0, 1, 0, 1).unwrap();
        let p = unit_patch();
        let pos = IndexGrid::from_fn(0..=1, 0..=1, |u, v| p.corners[(u + 2 * v) as usize]);
        let f = AsymptoticNet::from_positions(d, pos).unwrap();
        let m = tessellate(&f, 1, &[]).unwrap();
        assert_eq!((m.vertices.len(), m.triangles.len()), (4, 2));
        let obj = obj_string(&m);
        let count = |tag: &str| obj.lines().filter(|l| l.starts_with(tag)).count();
        assert_eq!((count("v "), count("f "), count("g ")), (4, 2, 1));
        assert!(matches!(
            tessellate(&f, 0, &[]),
            Err(Error::ParameterOutOfRange(_))
        ));

        let m = tessellate(&example_net(), 8, &[]).unwrap();
        assert_eq!(m.triangles.len(), 4 * 128);
        assert_eq!(m.vertices.len(), 17 * 17);
        for q in example_net().domain().quads() {
            assert_eq!(m.quad_tags.iter().filter(|&&t| t == q).count(), 128);
        }
    }

    #[test]
    fn singular_chain_becomes_l_record() {
        let chain = SingularPolyline {
            vertices: vec![
                VertexIdx::new(0, 1),
                VertexIdx::new(0, 0),
                VertexIdx::new(1, 0),
            ],
            edges: vec![],
            closed: false,
        };
        let m = tessellate(&example_net(), 1, std::slice::from_ref(&chain)).unwrap();
        let obj = obj_string(&m);
        let l: Vec<&str> = obj.lines().filter(|l| l.starts_with("l ")).collect();
        assert_eq!(l, vec!["l 6 5 8"]);
        let m = tessellate(&example_net(), 4, &[chain]).unwrap();
        assert_eq!(m.polylines[0].len(), 9);
    }

    #[test]
    fn group_names_use_lower_left_vertex() {
        let obj = obj_string(&tessellate(&example_net(), 1, &[]).unwrap());
        let groups: Vec<&str> = obj.lines().filter(|l| l.starts_with("g ")).collect();
        assert_eq!(
            groups,
            vec!["g quad_-1_-1", "g quad_-1_0", "g quad_0_-1", "g quad_0_0"]
        );
    }
}
