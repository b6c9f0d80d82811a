//! Cross-module properties on random nets.

use proptest::prelude::*;

use crate::analysis::{analyze, Analysis, Tolerances};
use crate::grid::{Axis, EdgeIdx, StarDir, VertexIdx};
use crate::mesh::{bilinear_point, compatibility_residual, tessellate, BilinearPatch, PatchSide};
use crate::net::{star_planarity_residual, AsymptoticNet, ConormalNet};
use crate::predicates::DEFAULT_TOL;
use crate::singularity::{
    classify::LocalFrame, classify_vertex_with_base, halfplane_edge_test, m_from_positions,
    singular_edges, star_sidedness_test, Configuration, Kind, MetricField, SingularVertex,
    DEFAULT_EPS_DEGENERATE,
};
use crate::testutil::{admissible_nets, random_net};
use crate::Vec3;

fn classified(a: &Analysis) -> impl Iterator<Item = &SingularVertex> {
    a.vertices.iter().filter(|v| {
        !matches!(
            v.configuration,
            Configuration::Boundary | Configuration::Inadmissible
        )
    })
}

#[test]
fn halfplane_test_matches_metric_sign_change() {
    let mut checked = 0;
    for a in admissible_nets(0, 40, 20) {
        let singular: std::collections::BTreeSet<EdgeIdx> = a.edge_set().into_iter().collect();
        for e in a.net.domain().interior_edges() {
            assert_eq!(
                halfplane_edge_test(&a.net, e, DEFAULT_TOL).unwrap(),
                singular.contains(&e),
                "edge {e}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 10_000, "{checked}");
}

#[test]
fn admissible_vertices_have_two_edges_and_criteria_agree() {
    for a in admissible_nets(100, 40, 20) {
        for v in classified(&a) {
            assert_eq!(v.incident_singular_edges.len(), 2);
            let star = star_sidedness_test(&a.f, &a.net, v, DEFAULT_TOL).unwrap();
            let crossing = v.diagnostics.alpha_reflected_beta_cross.unwrap();
            assert_eq!(star, crossing, "vertex {}", v.vertex);
            assert_eq!(crossing, v.configuration == Configuration::C);
            assert_eq!(crossing, v.kind == Kind::Swallowtail);
        }
    }
}

#[test]
fn classification_is_independent_of_base_edge() {
    for a in admissible_nets(200, 30, 20) {
        for v in classified(&a) {
            for e in &v.incident_singular_edges {
                let base = StarDir::of_edge(v.vertex, *e).unwrap();
                let c = classify_vertex_with_base(&a.net, &a.f, v, base, DEFAULT_TOL).unwrap();
                assert_eq!(
                    (c.configuration, c.kind),
                    (v.configuration, v.kind),
                    "vertex {} base {e}",
                    v.vertex
                );
            }
        }
    }
}

#[test]
fn lelieuvre_structure_on_random_nets() {
    for seed in 300..330 {
        let net = random_net(seed, 20);
        let s = net.scale();
        let f = AsymptoticNet::integrate(&net).unwrap();
        for q in net.domain().quads() {
            assert!(net.moutard_residual(q).unwrap().amax() <= 1e-14 * s);
            assert!(net.quad_closure_residual(q).unwrap().amax() <= 1e-12 * s.powi(3));
            let w = crate::singularity::omega_quad(&net, q).unwrap();
            let m = m_from_positions(&f, q).unwrap();
            assert!(
                (m - w * w).abs() <= 1e-10 * w * w,
                "quad {q}: {m} vs {}",
                w * w
            );
        }
        for p in net.domain().vertices() {
            if net.domain().is_interior_vertex(p) {
                assert!(star_planarity_residual(&f, &net, p).unwrap() <= 1e-12 * s.powi(3));
            }
        }
    }
}

#[test]
fn patches_of_random_nets_are_compatible() {
    for seed in 400..410 {
        let net = random_net(seed, 12);
        let f = AsymptoticNet::integrate(&net).unwrap();
        let d = *net.domain();
        let patch = |u, v| BilinearPatch::of_quad(&f, crate::QuadIdx::new(u, v)).unwrap();
        for e in d.interior_edges() {
            let (q0, q1) = d.adjacent_quads(e).unwrap();
            let (s0, s1) = match e.axis {
                Axis::U => (PatchSide::Top, PatchSide::Bottom),
                Axis::V => (PatchSide::Right, PatchSide::Left),
            };
            let r =
                compatibility_residual(&patch(q0.u, q0.v), s0, &patch(q1.u, q1.v), s1, 9).unwrap();
            assert!(r <= 1e-10, "edge {e}: {r}");
        }
    }
}

#[test]
fn tessellation_is_watertight_and_edges_are_straight() {
    let net = random_net(500, 8);
    let f = AsymptoticNet::integrate(&net).unwrap();
    let d = *net.domain();
    let sub = 5;
    let mesh = tessellate(&f, sub, &[]).unwrap();
    assert_eq!(mesh.vertices.len(), (7 * sub + 1) * (7 * sub + 1));
    for q in d.quads() {
        let p = BilinearPatch::of_quad(&f, q).unwrap();
        for k in 0..=sub {
            let r = k as f64 / sub as f64;
            // Straight sides.
            let side = bilinear_point(&p, r, 0.0).unwrap();
            let line = p.corners[0] + (p.corners[1] - p.corners[0]) * r;
            assert!((side - line).amax() <= 1e-14 * net.scale().powi(2));
            // Shared samples with the right neighbour are bitwise equal.
            if q.u + 1 < d.u_max {
                let right = BilinearPatch::of_quad(&f, crate::QuadIdx::new(q.u + 1, q.v)).unwrap();
                assert_eq!(
                    bilinear_point(&p, 1.0, r).unwrap(),
                    bilinear_point(&right, 0.0, r).unwrap()
                );
            }
        }
    }
}

fn unimodular(entries: &[f64; 9]) -> Option<nalgebra::Matrix3<f64>> {
    let m = nalgebra::Matrix3::from_row_slice(entries) + nalgebra::Matrix3::identity() * 1.5;
    let det = m.determinant();
    if det.abs() < 1e-3 {
        return None;
    }
    let m = if det < 0.0 { -m } else { m };
    let m = m / det.abs().cbrt();
    let sv = m.singular_values();
    (sv.max() / sv.min() <= 20.0).then_some(m)
}

fn omega_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unimodular_maps_preserve_classification(
        seed in 600u64..700,
        entries in prop::array::uniform9(-1.0f64..1.0),
    ) {
        let Some(m) = unimodular(&entries) else { return Ok(()) };
        let net = random_net(seed, 14);
        let Ok(a) = analyze(&net, Tolerances::default()) else { return Ok(()) };
        let mapped = net.transformed(|p| m * p).unwrap();
        let b = analyze(&mapped, Tolerances::default()).unwrap();
        for ((q, w), (_, w2)) in a.metric.iter().zip(b.metric.iter()) {
            prop_assert!(omega_close(w, w2), "quad {}: {} vs {}", q, w, w2);
        }
        prop_assert_eq!(a.edge_set(), b.edge_set());
        let labels = |x: &Analysis| x.vertices.iter().map(|v| (v.vertex, v.configuration, v.kind)).collect::<Vec<_>>();
        prop_assert_eq!(labels(&a), labels(&b));
    }

    #[test]
    fn reversing_u_flips_omega_and_keeps_kinds(seed in 700u64..800) {
        let net = random_net(seed, 14);
        let Ok(a) = analyze(&net, Tolerances::default()) else { return Ok(()) };
        let rev = ConormalNet::new(net.alpha().reversed(), net.beta().clone()).unwrap();
        let b = analyze(&rev, Tolerances::default()).unwrap();
        for (q, w) in a.metric.iter() {
            let w2 = b.metric.omega(crate::QuadIdx::new(-q.u - 1, q.v)).unwrap();
            prop_assert!(omega_close(w, -w2));
        }
        let relabel = |e: EdgeIdx| match e.axis {
            Axis::U => EdgeIdx::u_edge(-e.base.u - 1, e.base.v),
            Axis::V => EdgeIdx::v_edge(-e.base.u, e.base.v),
        };
        let mut expected: Vec<EdgeIdx> = a.edge_set().into_iter().map(relabel).collect();
        expected.sort();
        prop_assert_eq!(expected, b.edge_set());
        for v in &a.vertices {
            let w = b.vertex(VertexIdx::new(-v.vertex.u, v.vertex.v)).unwrap();
            prop_assert_eq!((v.configuration, v.kind), (w.configuration, w.kind));
        }
    }

    #[test]
    fn projected_plane_tests_agree_with_orientation_predicates(
        seed in 800u64..900,
        m in prop::array::uniform3(-1.0f64..1.0),
        pick in 0usize..1000,
    ) {
        let net = random_net(seed, 14);
        let Ok(a) = analyze(&net, Tolerances::default()) else { return Ok(()) };
        let verts: Vec<&SingularVertex> = classified(&a).collect();
        if verts.is_empty() { return Ok(()) }
        let v = verts[pick % verts.len()];
        let frame = LocalFrame::at(&net, v.vertex).unwrap();
        let m = Vec3::from(m);
        let nu = frame.nu;
        // Keep the projection plane well transversal to ν₀.
        if m.norm() < 0.2 || m.dot(&nu).abs() < 0.3 * m.norm() * nu.norm() { return Ok(()) }
        let e1 = m.cross(&Vec3::new(0.3, -0.7, 0.2)).normalize();
        let e2 = m.cross(&e1).normalize();
        let flat = |x: Vec3| {
            let p = x - nu * (m.dot(&x) / m.dot(&nu));
            (p.dot(&e1), p.dot(&e2))
        };
        let angle = |x: Vec3| { let (px, py) = flat(x); py.atan2(px) };
        let tau = std::f64::consts::TAU;
        let crossing = |p_in: Vec3, p_out: Vec3, q_in: Vec3, q_out: Vec3| {
            let from = angle(p_out);
            let span = (angle(p_in) - from).rem_euclid(tau);
            let inside = |x: Vec3| { let t = (angle(x) - from).rem_euclid(tau); t > 0.0 && t < span };
            inside(q_in) != inside(q_out)
        };
        let (ap, am, bp, bm) = (frame.a_plus, frame.a_minus, frame.b_plus, frame.b_minus);
        prop_assert_eq!(
            Some(crossing(-am, ap, bm, -bp)),
            v.diagnostics.alpha_reflected_beta_cross
        );
        if let Some(ab) = v.diagnostics.alpha_beta_cross {
            prop_assert_eq!(crossing(-am, ap, -bm, bp), ab);
        }
        let cross2 = |x: Vec3, y: Vec3| { let (a, b) = (flat(x), flat(y)); a.0 * b.1 - a.1 * b.0 };
        let star = |d: StarDir| a.f.star_edge(v.vertex, d).unwrap();
        let sing: Vec<StarDir> = v.incident_singular_edges.iter().map(|e| StarDir::of_edge(v.vertex, *e).unwrap()).collect();
        let same_side = StarDir::ALL.into_iter().filter(|d| !sing.contains(d)).all(|d| {
            (cross2(star(d), star(sing[0])) > 0.0) == (cross2(star(d), star(sing[1])) > 0.0)
        });
        prop_assert_eq!(Some(same_side), v.diagnostics.star_same_side);
    }
}

#[test]
fn translation_keeps_edge_vectors() {
    // Dyadic coordinates make every sum exact, so the edges agree bitwise.
    let net = random_net(900, 16);
    let round = |p: &Vec3| p.map(|x| (x * 1048576.0).round() / 1048576.0);
    let net = net.transformed(round).unwrap();
    let c = Vec3::new(1.25, -3.5, 0.375);
    let moved = net.transformed(|p| p + c).unwrap();
    let f = AsymptoticNet::integrate(&net).unwrap();
    let g = AsymptoticNet::integrate(&moved).unwrap();
    for p in net.domain().vertices() {
        for d in StarDir::ALL {
            if let (Ok(x), Ok(y)) = (f.star_edge(p, d), g.star_edge(p, d)) {
                assert_eq!(x, y);
            }
        }
    }
    let a = singular_edges(&MetricField::new(&net, DEFAULT_EPS_DEGENERATE).unwrap());
    let b = singular_edges(&MetricField::new(&moved, DEFAULT_EPS_DEGENERATE).unwrap());
    assert_eq!(a, b);
}

/// Positions from the closed form
/// `f(u,v) = α(u)×β(v) + Σ_{k<u} α(k)×α(k+1) − Σ_{k<v} β(k)×β(k+1)`,
/// shifted so that the corner `(u_min, v_min)` sits at the origin.
fn closed_form_positions(net: &ConormalNet, p: VertexIdx) -> Vec3 {
    let d = net.domain();
    let a = |k: i64| net.alpha().point(k).unwrap();
    let b = |k: i64| net.beta().point(k).unwrap();
    let raw = |u: i64, v: i64| {
        let sa: Vec3 = (d.u_min..u).map(|k| a(k).cross(&a(k + 1))).sum();
        let sb: Vec3 = (d.v_min..v).map(|k| b(k).cross(&b(k + 1))).sum();
        a(u).cross(&b(v)) + sa - sb
    };
    raw(p.u, p.v) - raw(d.u_min, d.v_min)
}

#[test]
fn integration_matches_closed_form() {
    for seed in 500..520 {
        let net = random_net(seed, 20);
        let f = AsymptoticNet::integrate(&net).unwrap();
        let scale = net.scale();
        for p in net.domain().vertices() {
            let want = closed_form_positions(&net, p);
            let got = f.position(p).unwrap();
            assert!(
                (got - want).norm() <= 1e-13 * scale * scale,
                "{p}: {got} vs {want}"
            );
        }
    }
}
