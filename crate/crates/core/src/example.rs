//! The four-quadrangle curve pair used throughout as a worked example.
//!
//! `α(−1) = α(0) + (−1,−1,1)Δu`, `α(0) = (0,0,1)`, `α(1) = α(0) + (1,0,0)Δu`,
//! `β(−1) = (−1,y,0)Δv`, `β(0) = 0`, `β(1) = (2,1,0)Δv`, both indexed from −1.
//! `y = −½`, `−2`, `1` give singular vertices in configurations A, B, C.

use crate::error::Result;
use crate::net::PolyCurve;
use crate::Vec3;

pub fn example_curves(y: f64, du: f64, dv: f64) -> Result<(PolyCurve, PolyCurve)> {
    let a0 = Vec3::new(0.0, 0.0, 1.0);
    let alpha = PolyCurve::new(
        -1,
        vec![
            a0 + Vec3::new(-1.0, -1.0, 1.0) * du,
            a0,
            a0 + Vec3::new(1.0, 0.0, 0.0) * du,
        ],
    )?;
    let beta = PolyCurve::new(
        -1,
        vec![
            Vec3::new(-1.0, y, 0.0) * dv,
            Vec3::zeros(),
            Vec3::new(2.0, 1.0, 0.0) * dv,
        ],
    )?;
    Ok((alpha, beta))
}
