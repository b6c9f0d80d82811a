//! Sign predicates on triple products.
//!
//! `orient(n, x, y)` is the sign of `[n, x, y]`. For directions `x`, `y`
//! projected along `n` onto any plane transversal to `n`, this is the
//! orientation of the projected pair, so every statement about projected
//! rays reduces to these signs and no plane is ever built.

use std::ops::Neg;

use robust::Coord3D;

use crate::error::{Error, Result};
use crate::Vec3;

/// Default relative tolerance for sign predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// `[a, b, c] = a · (b × c)` in plain floating point.
#[inline]
pub fn triple(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.dot(&b.cross(c))
}

fn coord(p: &Vec3) -> Coord3D<f64> {
    Coord3D {
        x: p.x,
        y: p.y,
        z: p.z,
    }
}

/// Triple product `[a, b, c]` with a correctly signed result (adaptive
/// exact arithmetic on the given floating-point inputs).
pub fn exact_triple(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let origin = Coord3D {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    robust::orient3d(coord(a), coord(b), coord(c), origin)
}

/// Sign of `[n, x, y]`. Values with `|[n, x, y]| <= tol * |n| |x| |y|`
/// count as zero; with `tol = 0` the sign is exact.
pub fn orient(n: &Vec3, x: &Vec3, y: &Vec3, tol: f64) -> Sign {
    let det = exact_triple(n, x, y);
    if det == 0.0 || det.abs() <= tol * n.norm() * x.norm() * y.norm() {
        Sign::Zero
    } else {
        Sign::of(det)
    }
}

/// Orientation predicate bound to one projection direction.
#[derive(Debug, Clone, Copy)]
pub struct Orienter {
    pub normal: Vec3,
    pub tol: f64,
}

impl Orienter {
    pub fn new(normal: Vec3, tol: f64) -> Self {
        Self { normal, tol }
    }

    pub fn sign(&self, x: &Vec3, y: &Vec3) -> Sign {
        orient(&self.normal, x, y, self.tol)
    }

    /// Like [`sign`](Self::sign), but a zero sign is an error naming `what`.
    pub fn strict(&self, x: &Vec3, y: &Vec3, what: &str) -> Result<Sign> {
        match self.sign(x, y) {
            Sign::Zero => Err(Error::DegenerateOrientation(what.to_string())),
            s => Ok(s),
        }
    }

    /// Whether `x` lies strictly inside the counterclockwise arc from ray
    /// `a` to ray `b`.
    fn in_ccw_arc(&self, a: &Vec3, b: &Vec3, x: &Vec3) -> Result<bool> {
        let ab = self.strict(a, b, "polyline rays are parallel")?;
        let ax = self.strict(a, x, "ray lies on a polyline ray")?;
        let xb = self.strict(x, b, "ray lies on a polyline ray")?;
        Ok(match ab {
            Sign::Positive => ax == Sign::Positive && xb == Sign::Positive,
            _ => ax == Sign::Positive || xb == Sign::Positive,
        })
    }
}

/// Local crossing test for two polylines meeting at the origin of the
/// plane transversal to `n`.
///
/// The first polyline arrives along ray `p_in` and leaves along `p_out`
/// (both as directions from the origin), likewise the second with `q_in`,
/// `q_out`. The polylines cross iff the `q` rays lie in different sectors
/// cut out by the `p` rays.
pub fn ray_crossing_test(
    n: &Vec3,
    p_in: &Vec3,
    p_out: &Vec3,
    q_in: &Vec3,
    q_out: &Vec3,
    tol: f64,
) -> Result<bool> {
    let o = Orienter::new(*n, tol);
    let side_in = o.in_ccw_arc(p_out, p_in, q_in)?;
    let side_out = o.in_ccw_arc(p_out, p_in, q_out)?;
    Ok(side_in != side_out)
}
