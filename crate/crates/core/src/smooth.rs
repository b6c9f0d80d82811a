//! Smooth reference model: `Ω(u,v) = [α(u) − β(v), α′(u), β′(v)]`, its zero
//! curve, the kernel slope `λ` and swallowtail candidates where the curve is
//! tangent to the kernel direction `(1, λ)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::net::{ConormalNet, PolyCurve};
use crate::predicates::triple;
use crate::Vec3;

/// Point in the `(u, v)` parameter plane.
pub type ParamPoint = [f64; 2];

/// Default refinement tolerance for traced points.
pub const DEFAULT_TRACE_TOL: f64 = 1e-12;

/// Normalized `λΔu − Δv` values at or below this count as zero.
pub const TANGENCY_ZERO_TOL: f64 = 1e-8;

/// Space curve given by one polynomial per coordinate (ascending powers).
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCurve {
    coeffs: [Vec<f64>; 3],
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn derive(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| k as f64 * a)
        .collect()
}

impl PolynomialCurve {
    pub fn new(x: &[f64], y: &[f64], z: &[f64]) -> Self {
        Self {
            coeffs: [x.to_vec(), y.to_vec(), z.to_vec()],
        }
    }

    fn eval_with(&self, f: impl Fn(&[f64]) -> Vec<f64>, t: f64) -> Vec3 {
        let c = |i: usize| horner(&f(&self.coeffs[i]), t);
        Vec3::new(c(0), c(1), c(2))
    }

    pub fn point(&self, t: f64) -> Vec3 {
        self.eval_with(|c| c.to_vec(), t)
    }

    pub fn d1(&self, t: f64) -> Vec3 {
        self.eval_with(derive, t)
    }

    pub fn d2(&self, t: f64) -> Vec3 {
        self.eval_with(|c| derive(&derive(c)), t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCurvePair {
    name: String,
    alpha: PolynomialCurve,
    beta: PolynomialCurve,
    u_range: (f64, f64),
    v_range: (f64, f64),
}

/// Checks `d` against central differences of `f` at a few parameters.
fn derivative_consistent(
    f: impl Fn(f64) -> Vec3,
    d: impl Fn(f64) -> Vec3,
    range: (f64, f64),
) -> bool {
    let eta = 1e-5 * (range.1 - range.0);
    (0..=8).all(|k| {
        let t = range.0 + (range.1 - range.0) * (0.05 + 0.1125 * k as f64);
        let fd = (f(t + eta) - f(t - eta)) / (2.0 * eta);
        let exact = d(t);
        (fd - exact).norm() <= 1e-6 * exact.norm().max(1.0)
    })
}

impl SmoothCurvePair {
    pub fn new(
        name: impl Into<String>,
        alpha: PolynomialCurve,
        beta: PolynomialCurve,
        u_range: (f64, f64),
        v_range: (f64, f64),
    ) -> Result<Self> {
        let name = name.into();
        if !(u_range.0 < u_range.1 && v_range.0 < v_range.1) {
            return Err(Error::ParameterOutOfRange(format!(
                "empty parameter range for pair {name}"
            )));
        }
        for (label, c, r) in [("alpha", &alpha, u_range), ("beta", &beta, v_range)] {
            if !derivative_consistent(|t| c.point(t), |t| c.d1(t), r)
                || !derivative_consistent(|t| c.d1(t), |t| c.d2(t), r)
            {
                return Err(Error::Validation(format!(
                    "{label} derivatives of pair {name} disagree with finite differences"
                )));
            }
        }
        let pair = Self {
            name,
            alpha,
            beta,
            u_range,
            v_range,
        };
        let n = 32;
        for i in 0..=n {
            for j in 0..=n {
                let (u, v) = pair.lattice(n, i, j);
                if pair.conormal(u, v).norm() == 0.0 {
                    return Err(Error::Validation(format!(
                        "curves of pair {} meet at ({u}, {v})",
                        pair.name
                    )));
                }
            }
        }
        Ok(pair)
    }

    /// `α(u) = (u, 0, 1)`, `β(v) = (0, v, 0)`: `Ω ≡ 1`.
    pub fn identity() -> Self {
        Self::new(
            "identity",
            PolynomialCurve::new(&[0.0, 1.0], &[0.0], &[1.0]),
            PolynomialCurve::new(&[0.0], &[0.0, 1.0], &[0.0]),
            (-1.0, 1.0),
            (-1.0, 1.0),
        )
        .expect("valid built-in pair")
    }

    /// `α(u) = (u, u², 1)`, `β(v) = (v, −v² + v³, 0)`:
    /// `Ω = 3v² − 2v − 2u`, one swallowtail at the origin.
    pub fn parabolic() -> Self {
        Self::new(
            "parabolic",
            PolynomialCurve::new(&[0.0, 1.0], &[0.0, 0.0, 1.0], &[1.0]),
            PolynomialCurve::new(&[0.0, 1.0], &[0.0, 0.0, -1.0, 1.0], &[0.0]),
            (-1.0, 1.0),
            (-1.0, 1.0),
        )
        .expect("valid built-in pair")
    }

    /// `α(u) = (u, u², 1)`, `β(v) = (v, −v², 0)`: `Ω = −2(u + v)` and the
    /// zero line is everywhere tangent to the kernel. The v-range is shifted
    /// off the lattice diagonal so that no sample lands on `Ω = 0`.
    pub fn symmetric() -> Self {
        let shift = 1.0 / (50.0 * std::f64::consts::SQRT_2);
        Self::new(
            "symmetric",
            PolynomialCurve::new(&[0.0, 1.0], &[0.0, 0.0, 1.0], &[1.0]),
            PolynomialCurve::new(&[0.0, 1.0], &[0.0, 0.0, -1.0], &[0.0]),
            (-1.0, 1.0),
            (-1.0 + shift, 1.0 + shift),
        )
        .expect("valid built-in pair")
    }

    pub const CATALOG: [&'static str; 3] = ["identity", "parabolic", "symmetric"];

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::identity()),
            "parabolic" => Some(Self::parabolic()),
            "symmetric" => Some(Self::symmetric()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> &PolynomialCurve {
        &self.alpha
    }

    pub fn beta(&self) -> &PolynomialCurve {
        &self.beta
    }

    pub fn u_range(&self) -> (f64, f64) {
        self.u_range
    }

    pub fn v_range(&self) -> (f64, f64) {
        self.v_range
    }

    fn lattice(&self, n: usize, i: usize, j: usize) -> (f64, f64) {
        let (u0, u1) = self.u_range;
        let (v0, v1) = self.v_range;
        (
            u0 + (u1 - u0) * i as f64 / n as f64,
            v0 + (v1 - v0) * j as f64 / n as f64,
        )
    }

    fn contains(&self, u: f64, v: f64) -> bool {
        let slack = 1e-12;
        (self.u_range.0 - slack..=self.u_range.1 + slack).contains(&u)
            && (self.v_range.0 - slack..=self.v_range.1 + slack).contains(&v)
    }

    fn conormal(&self, u: f64, v: f64) -> Vec3 {
        self.alpha.point(u) - self.beta.point(v)
    }

    fn omega_unchecked(&self, u: f64, v: f64) -> f64 {
        triple(&self.conormal(u, v), &self.alpha.d1(u), &self.beta.d1(v))
    }

    /// Samples both curves with step `h` from the lower range ends.
    pub fn sample(&self, h: f64) -> Result<SampledPair> {
        let steps = |r: (f64, f64)| -> Result<usize> {
            let n = ((r.1 - r.0) / h).round();
            if h.is_nan() || h <= 0.0 || n < 2.0 || ((r.1 - r.0) / h - n).abs() > 1e-9 {
                return Err(Error::ParameterOutOfRange(format!(
                    "step {h} does not divide the range [{}, {}]",
                    r.0, r.1
                )));
            }
            Ok(n as usize)
        };
        let (nu, nv) = (steps(self.u_range)?, steps(self.v_range)?);
        let (u0, v0) = (self.u_range.0, self.v_range.0);
        let alpha = PolyCurve::new(
            0,
            (0..=nu)
                .map(|i| self.alpha.point(u0 + i as f64 * h))
                .collect(),
        )?;
        let beta = PolyCurve::new(
            0,
            (0..=nv)
                .map(|j| self.beta.point(v0 + j as f64 * h))
                .collect(),
        )?;
        Ok(SampledPair {
            net: ConormalNet::new(alpha, beta)?,
            h,
            origin: [u0, v0],
        })
    }
}

/// A curve pair sampled at step `h`; vertex `(i, j)` sits at
/// `origin + h·(i, j)` in the parameter plane.
#[derive(Debug, Clone)]
pub struct SampledPair {
    pub net: ConormalNet,
    pub h: f64,
    pub origin: ParamPoint,
}

impl SampledPair {
    pub fn param(&self, i: f64, j: f64) -> ParamPoint {
        [self.origin[0] + i * self.h, self.origin[1] + j * self.h]
    }
}

pub fn omega_smooth(pair: &SmoothCurvePair, u: f64, v: f64) -> Result<f64> {
    if !pair.contains(u, v) {
        return Err(Error::OutOfRange { u, v });
    }
    Ok(pair.omega_unchecked(u, v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothChain {
    /// Closed chains repeat their first point.
    pub points: Vec<ParamPoint>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum LatticeEdge {
    /// From lattice point `(i, j)` to `(i+1, j)`.
    U(usize, usize),
    /// From `(i, j)` to `(i, j+1)`.
    V(usize, usize),
}

/// Root of `g` on `[0, 1]` given opposite signs at the ends: Illinois
/// regula falsi starting from linear interpolation.
fn refine_root(g: impl Fn(f64) -> f64, g0: f64, g1: f64, tol: f64) -> f64 {
    let (mut a, mut b, mut fa, mut fb) = (0.0, 1.0, g0, g1);
    let mut best = (f64::INFINITY, 0.5);
    let mut side = 0;
    for _ in 0..200 {
        let t = if fa == fb {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        let t = if t > a && t < b { t } else { 0.5 * (a + b) };
        let ft = g(t);
        if ft.abs() < best.0 {
            best = (ft.abs(), t);
        }
        if ft.abs() <= tol || b - a <= f64::EPSILON {
            break;
        }
        if (ft < 0.0) == (fa < 0.0) {
            a = t;
            fa = ft;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = t;
            fb = ft;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    best.1
}

/// Marching squares on a `grid_n × grid_n` lattice over the pair's ranges.
/// Crossings are refined along their lattice edge until `|Ω| <= tol`;
/// saddle cells are resolved by the sign of Ω at the cell centre.
#[allow(clippy::needless_range_loop)]
pub fn trace_singular_curve(
    pair: &SmoothCurvePair,
    grid_n: usize,
    tol: f64,
) -> Result<Vec<SmoothChain>> {
    if grid_n < 16 {
        return Err(Error::ParameterOutOfRange(format!(
            "grid_n = {grid_n}, need at least 16"
        )));
    }
    let n = grid_n;
    let mut vals = vec![vec![0.0; n + 1]; n + 1];
    for (i, row) in vals.iter_mut().enumerate() {
        for (j, w) in row.iter_mut().enumerate() {
            let (u, v) = pair.lattice(n, i, j);
            *w = pair.omega_unchecked(u, v);
            if w.abs() <= tol {
                return Err(Error::NonGenericCell {
                    i: i.min(n - 1),
                    j: j.min(n - 1),
                });
            }
        }
    }
    let crosses = |e: LatticeEdge| match e {
        LatticeEdge::U(i, j) => (vals[i][j] < 0.0) != (vals[i + 1][j] < 0.0),
        LatticeEdge::V(i, j) => (vals[i][j] < 0.0) != (vals[i][j + 1] < 0.0),
    };

    let mut adj: BTreeMap<LatticeEdge, Vec<LatticeEdge>> = BTreeMap::new();
    let mut link = |a: LatticeEdge, b: LatticeEdge| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    for i in 0..n {
        for j in 0..n {
            let bottom = LatticeEdge::U(i, j);
            let right = LatticeEdge::V(i + 1, j);
            let top = LatticeEdge::U(i, j + 1);
            let left = LatticeEdge::V(i, j);
            let hit: Vec<LatticeEdge> = [bottom, right, top, left]
                .into_iter()
                .filter(|&e| crosses(e))
                .collect();
            match hit.len() {
                0 => {}
                2 => link(hit[0], hit[1]),
                4 => {
                    let (uc, vc) = pair.lattice(2 * n, 2 * i + 1, 2 * j + 1);
                    let center = pair.omega_unchecked(uc, vc);
                    if center.abs() <= tol {
                        return Err(Error::NonGenericCell { i, j });
                    }
                    if (center < 0.0) == (vals[i][j] < 0.0) {
                        link(bottom, right);
                        link(top, left);
                    } else {
                        link(bottom, left);
                        link(right, top);
                    }
                }
                _ => unreachable!("sign changes around a cell come in pairs"),
            }
        }
    }

    let locate = |e: LatticeEdge| -> ParamPoint {
        let ((i0, j0), (i1, j1)) = match e {
            LatticeEdge::U(i, j) => ((i, j), (i + 1, j)),
            LatticeEdge::V(i, j) => ((i, j), (i, j + 1)),
        };
        let p0 = pair.lattice(n, i0, j0);
        let p1 = pair.lattice(n, i1, j1);
        let at = |t: f64| (p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1));
        let g = |t: f64| {
            let (u, v) = at(t);
            pair.omega_unchecked(u, v)
        };
        let t = refine_root(g, vals[i0][j0], vals[i1][j1], tol);
        let (u, v) = at(t);
        [u, v]
    };

    let mut seen: std::collections::BTreeSet<LatticeEdge> = Default::default();
    let mut chains = Vec::new();
    let starts: Vec<LatticeEdge> = adj
        .iter()
        .filter(|(_, l)| l.len() == 1)
        .map(|(&e, _)| e)
        .chain(adj.keys().copied())
        .collect();
    for start in starts {
        if seen.contains(&start) {
            continue;
        }
        let mut nodes = vec![start];
        seen.insert(start);
        let mut prev: Option<LatticeEdge> = None;
        let mut at = start;
        let mut closed = false;
        loop {
            let next = adj[&at]
                .iter()
                .copied()
                .find(|&x| Some(x) != prev && x != at);
            let Some(next) = next else { break };
            if next == start {
                closed = true;
                nodes.push(start);
                break;
            }
            if !seen.insert(next) {
                break;
            }
            nodes.push(next);
            prev = Some(at);
            at = next;
        }
        chains.push(SmoothChain {
            points: nodes.into_iter().map(locate).collect(),
            closed,
        });
    }
    Ok(chains)
}

fn unit_conormal(pair: &SmoothCurvePair, u: f64, v: f64) -> Result<Vec3> {
    if !pair.contains(u, v) {
        return Err(Error::OutOfRange { u, v });
    }
    let nu = pair.conormal(u, v);
    let len = nu.norm();
    if len == 0.0 {
        return Err(Error::DegenerateDirection { u, v });
    }
    Ok(nu / len)
}

fn project(x: Vec3, n: &Vec3) -> Vec3 {
    x - n * n.dot(&x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaFit {
    pub lambda: f64,
    /// `|Pα′ + λ Pβ′|`.
    pub residual: f64,
}

/// Least-squares `λ` with `Pα′ + λ Pβ′ ≈ 0`, projecting along
/// `ν = α(u) − β(v)` onto its orthogonal plane.
pub fn lambda_along_curve(pair: &SmoothCurvePair, point: ParamPoint) -> Result<LambdaFit> {
    let [u, v] = point;
    let n = unit_conormal(pair, u, v)?;
    let a = project(pair.alpha.d1(u), &n);
    let b = project(pair.beta.d1(v), &n);
    let bb = b.norm_squared();
    if bb <= (1e-14 * pair.beta.d1(v).norm().max(a.norm())).powi(2) || bb == 0.0 {
        return Err(Error::DegenerateDirection { u, v });
    }
    let lambda = -a.dot(&b) / bb;
    Ok(LambdaFit {
        lambda,
        residual: (a + b * lambda).norm(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothKind {
    CuspidalEdge,
    SwallowtailCandidate,
}

impl SmoothKind {
    pub fn label(self) -> &'static str {
        match self {
            SmoothKind::CuspidalEdge => "CuspidalEdge",
            SmoothKind::SwallowtailCandidate => "SwallowtailCandidate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothSingularPoint {
    pub u: f64,
    pub v: f64,
    pub lambda: f64,
    /// Chain slope; infinite where the chain runs parallel to the v-axis.
    pub dvdu: f64,
    pub kind: SmoothKind,
}

/// Chain tangents by centred differences, one-sided at open ends.
fn chain_tangents(chain: &SmoothChain) -> Vec<ParamPoint> {
    let p = &chain.points;
    let m = p.len();
    let diff = |a: usize, b: usize| [p[b][0] - p[a][0], p[b][1] - p[a][1]];
    (0..m)
        .map(|k| {
            if chain.closed {
                // The last point repeats the first.
                let prev = if k == 0 { m - 2 } else { k - 1 };
                let next = if k == m - 1 { 1 } else { k + 1 };
                diff(prev, next)
            } else if k == 0 {
                diff(0, 1)
            } else if k == m - 1 {
                diff(m - 2, m - 1)
            } else {
                diff(k - 1, k + 1)
            }
        })
        .collect()
}

/// Classifies the points of a traced chain. The tangency function is
/// `g = λ − dv/du`, evaluated in the pole-free form `(λΔu − Δv)` normalized
/// by `|(1, λ)| |(Δu, Δv)|`; each isolated sign change yields a
/// swallowtail candidate located by linear interpolation and inserted in
/// chain order. Three or more consecutive zeros of `g` mean the tangency is
/// not isolated and give [`Error::NonGenericChain`].
pub fn find_swallowtails(
    pair: &SmoothCurvePair,
    chain: &SmoothChain,
) -> Result<Vec<SmoothSingularPoint>> {
    if chain.points.len() < 3 {
        return Err(Error::ParameterOutOfRange(format!(
            "chain has {} points, need at least 3",
            chain.points.len()
        )));
    }
    let tangents = chain_tangents(chain);
    let mut pts = Vec::with_capacity(chain.points.len());
    let mut g = Vec::with_capacity(chain.points.len());
    for (p, d) in chain.points.iter().zip(&tangents) {
        let fit = lambda_along_curve(pair, *p)?;
        let lam = fit.lambda;
        let cross = lam * d[0] - d[1];
        let norm = (1.0 + lam * lam).sqrt() * (d[0] * d[0] + d[1] * d[1]).sqrt();
        g.push(if norm == 0.0 { 0.0 } else { cross / norm });
        pts.push(SmoothSingularPoint {
            u: p[0],
            v: p[1],
            lambda: lam,
            dvdu: d[1] / d[0],
            kind: SmoothKind::CuspidalEdge,
        });
    }
    let zero = |x: f64| x.abs() <= TANGENCY_ZERO_TOL;
    let mut out = Vec::with_capacity(pts.len() + 1);
    let mut k = 0;
    let mut last_sign: Option<bool> = None;
    let last = if chain.closed {
        pts.len() - 1
    } else {
        pts.len()
    };
    while k < last {
        if zero(g[k]) {
            let start = k;
            while k < last && zero(g[k]) {
                k += 1;
            }
            if k - start >= 3 {
                return Err(Error::NonGenericChain {
                    u: pts[start].u,
                    v: pts[start].v,
                });
            }
            out.extend_from_slice(&pts[start..k]);
            let after = (k < last).then(|| g[k] > 0.0);
            if let (Some(a), Some(b)) = (last_sign, after) {
                if a != b {
                    let mid = (start + k - 1) / 2;
                    out.push(SmoothSingularPoint {
                        kind: SmoothKind::SwallowtailCandidate,
                        ..pts[mid]
                    });
                }
            }
            continue;
        }
        let s = g[k] > 0.0;
        if let Some(prev) = last_sign {
            if prev != s && k > 0 && !zero(g[k - 1]) {
                let t = g[k - 1] / (g[k - 1] - g[k]);
                let (a, b) = (&pts[k - 1], &pts[k]);
                let lerp = |x: f64, y: f64| x + t * (y - x);
                out.push(SmoothSingularPoint {
                    u: lerp(a.u, b.u),
                    v: lerp(a.v, b.v),
                    lambda: lerp(a.lambda, b.lambda),
                    dvdu: lerp(a.dvdu, b.dvdu),
                    kind: SmoothKind::SwallowtailCandidate,
                });
            }
        }
        last_sign = Some(s);
        out.push(pts[k]);
        k += 1;
    }
    if chain.closed {
        out.push(pts[pts.len() - 1]);
    }
    Ok(out)
}

/// `false` iff `[Pα′,Pβ′]`, `[Pα″,Pβ′]` and `[Pα′,Pβ″]` all vanish within
/// `tol`, i.e. the singular curve may fail to be regular at the point.
pub fn check_regularity(pair: &SmoothCurvePair, point: ParamPoint, tol: f64) -> bool {
    let [u, v] = point;
    let Ok(n) = unit_conormal(pair, u, v) else {
        return false;
    };
    let (a1, a2) = (pair.alpha.d1(u), pair.alpha.d2(u));
    let (b1, b2) = (pair.beta.d1(v), pair.beta.d2(v));
    [
        triple(&n, &a1, &b1),
        triple(&n, &a2, &b1),
        triple(&n, &a1, &b2),
    ]
    .iter()
    .any(|c| c.abs() > tol)
}

/// `[Pα′, Pα″] − λ³ [Pβ′, Pβ″]`, zero at swallowtails.
pub fn curvature_gap(pair: &SmoothCurvePair, point: ParamPoint) -> Result<f64> {
    let [u, v] = point;
    let n = unit_conormal(pair, u, v)?;
    let lam = lambda_along_curve(pair, point)?.lambda;
    let ka = triple(&n, &pair.alpha.d1(u), &pair.alpha.d2(u));
    let kb = triple(&n, &pair.beta.d1(v), &pair.beta.d2(v));
    Ok(ka - lam.powi(3) * kb)
}
