use crate::error::{Error, Result};
use crate::grid::{EdgeIdx, GridDomain, IndexGrid, QuadIdx};
use crate::net::{AsymptoticNet, ConormalNet};
use crate::predicates::triple;

/// Default threshold: `|Ω| <= 1e-9 · scale³` counts as a degenerate quad.
pub const DEFAULT_EPS_DEGENERATE: f64 = 1e-9;

/// `Ω(u+½, v+½) = [α(u) − β(v), α′(u+½), β′(v+½)]`.
pub fn omega_quad(net: &ConormalNet, quad: QuadIdx) -> Result<f64> {
    net.domain().check_quad(quad)?;
    let nu = net.conormal(quad.u, quad.v)?;
    Ok(triple(
        &nu,
        &net.alpha_derivative(quad.u)?,
        &net.beta_derivative(quad.v)?,
    ))
}

/// `M = [f_u(u+½,v), f_v(u,v+½), f_uv(u+½,v+½)]` from vertex positions,
/// evaluated in double-double from the positions and their remainders.
pub fn m_from_positions(f: &AsymptoticNet, quad: QuadIdx) -> Result<f64> {
    f.domain().check_quad(quad)?;
    let p = quad.lower_left();
    let c00 = f.position_dd(p)?;
    let c10 = f.position_dd(p.offset(1, 0))?;
    let c01 = f.position_dd(p.offset(0, 1))?;
    let c11 = f.position_dd(p.offset(1, 1))?;
    let fu = c10 - c00;
    let fv = c01 - c00;
    let fuv = (c11 - c01) - fu;
    Ok(fu.cross(&fv).dot(&fuv).hi())
}

/// Discrete Blaschke metric on every quad of a net.
#[derive(Debug, Clone)]
pub struct MetricField {
    domain: GridDomain,
    omega: IndexGrid<f64>,
    scale: f64,
}

impl MetricField {
    /// Evaluates Ω everywhere; fails on the first quad (row-major) with
    /// `|Ω| <= eps_degenerate · scale³`.
    pub fn new(net: &ConormalNet, eps_degenerate: f64) -> Result<Self> {
        let field = Self::evaluate(net);
        if let Some(&(quad, value)) = field.degenerate_quads(eps_degenerate).first() {
            return Err(Error::DegenerateMetric { quad, value });
        }
        Ok(field)
    }

    /// Evaluates Ω without the degeneracy check.
    pub fn evaluate(net: &ConormalNet) -> Self {
        let d = *net.domain();
        let omega = IndexGrid::from_fn(d.u_min..=d.u_max - 1, d.v_min..=d.v_max - 1, |u, v| {
            omega_quad(net, QuadIdx::new(u, v)).expect("quad in domain")
        });
        Self {
            domain: d,
            omega,
            scale: net.scale(),
        }
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn omega(&self, quad: QuadIdx) -> Result<f64> {
        self.domain.check_quad(quad)?;
        Ok(self.omega[(quad.u, quad.v)])
    }

    pub fn iter(&self) -> impl Iterator<Item = (QuadIdx, f64)> + '_ {
        self.domain
            .quads()
            .map(move |q| (q, self.omega[(q.u, q.v)]))
    }

    pub fn degenerate_quads(&self, eps_degenerate: f64) -> Vec<(QuadIdx, f64)> {
        let threshold = eps_degenerate * self.scale.powi(3);
        self.iter().filter(|(_, w)| w.abs() <= threshold).collect()
    }
}

/// An interior edge across which Ω changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularEdge {
    pub edge: EdgeIdx,
    /// Ω on the quads below/above a u-edge, left/right of a v-edge.
    pub omega_pair: (f64, f64),
}

/// All singular edges, sorted by edge index.
pub fn singular_edges(metric: &MetricField) -> Vec<SingularEdge> {
    let mut out: Vec<SingularEdge> = metric
        .domain()
        .interior_edges()
        .filter_map(|edge| {
            let (q0, q1) = metric.domain().adjacent_quads(edge)?;
            let pair = (metric.omega[(q0.u, q0.v)], metric.omega[(q1.u, q1.v)]);
            (pair.0 * pair.1 < 0.0).then_some(SingularEdge {
                edge,
                omega_pair: pair,
            })
        })
        .collect();
    out.sort_by_key(|e| e.edge);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::example_curves;

    fn example(y: f64) -> ConormalNet {
        let (a, b) = example_curves(y, 0.1, 0.1).unwrap();
        ConormalNet::new(a, b).unwrap()
    }

    #[test]
    fn omega_spot_values() {
        for y in [-0.5, -2.0, 1.0] {
            let net = example(y);
            let w = |u, v| omega_quad(&net, QuadIdx::new(u, v)).unwrap();
            assert!((w(0, 0) - 0.01).abs() < 1e-15);
            assert!((w(-1, 0) + 0.01).abs() < 1e-15);
            assert!((w(0, -1) + 0.01 * y).abs() < 1e-15);
            assert!((w(-1, -1) + 0.01 * (1.0 + y)).abs() < 1e-15);
        }
        assert!(omega_quad(&example(1.0), QuadIdx::new(1, 0)).is_err());
    }

    #[test]
    fn m_equals_omega_squared_on_example() {
        let net = example(1.0);
        let f = AsymptoticNet::integrate(&net).unwrap();
        let m = m_from_positions(&f, QuadIdx::new(0, 0)).unwrap();
        assert!((m - 1e-4).abs() <= 1e-10 * 1e-4);
        let m = m_from_positions(&f, QuadIdx::new(-1, -1)).unwrap();
        assert!((m - 4e-4).abs() <= 1e-10 * 4e-4);
        for q in net.domain().quads() {
            let w = omega_quad(&net, q).unwrap();
            let m = m_from_positions(&f, q).unwrap();
            assert!(m >= 0.0);
            assert!((m - w * w).abs() <= 1e-10 * w * w);
        }
    }

    #[test]
    fn singular_edge_sets_of_examples() {
        let edges = |y| -> Vec<EdgeIdx> {
            let m = MetricField::new(&example(y), DEFAULT_EPS_DEGENERATE).unwrap();
            singular_edges(&m).into_iter().map(|e| e.edge).collect()
        };
        assert_eq!(
            edges(-0.5),
            vec![EdgeIdx::v_edge(0, -1), EdgeIdx::v_edge(0, 0)]
        );
        assert_eq!(
            edges(-2.0),
            vec![EdgeIdx::u_edge(-1, 0), EdgeIdx::v_edge(0, 0)]
        );
        assert_eq!(
            edges(1.0),
            vec![EdgeIdx::u_edge(0, 0), EdgeIdx::v_edge(0, 0)]
        );
    }

    #[test]
    fn degenerate_quad_aborts() {
        // y = -1 makes Ω(-½, -½) = -0.01 (1 + y) vanish.
        let err = MetricField::new(&example(-1.0), DEFAULT_EPS_DEGENERATE).unwrap_err();
        match err {
            Error::DegenerateMetric { quad, .. } => assert_eq!(quad, QuadIdx::new(-1, -1)),
            e => panic!("unexpected {e}"),
        }
    }
}
