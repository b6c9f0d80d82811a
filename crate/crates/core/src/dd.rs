//! Double-double vectors for the Lelieuvre integration.
//!
//! Positions are sums of many edge vectors while `f_uv` and `M` are tiny
//! near the singular set, so the integration and `M` carry about 106 bits.

use std::ops::{Add, Neg, Sub};

use twofloat::TwoFloat;

use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd3(pub [TwoFloat; 3]);

impl Dd3 {
    pub fn zero() -> Self {
        Self([TwoFloat::from(0.0); 3])
    }

    pub fn from_vec(v: Vec3) -> Self {
        Self([v.x.into(), v.y.into(), v.z.into()])
    }

    /// Exact difference of two f64 vectors.
    pub fn diff(a: Vec3, b: Vec3) -> Self {
        Self([
            TwoFloat::new_sub(a.x, b.x),
            TwoFloat::new_sub(a.y, b.y),
            TwoFloat::new_sub(a.z, b.z),
        ])
    }

    /// Rebuilds a value stored as a rounded part and its remainder.
    pub fn from_parts(hi: Vec3, lo: Vec3) -> Self {
        Self([
            TwoFloat::new_add(hi.x, lo.x),
            TwoFloat::new_add(hi.y, lo.y),
            TwoFloat::new_add(hi.z, lo.z),
        ])
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Self([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn dot(&self, o: &Self) -> TwoFloat {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn hi(&self) -> Vec3 {
        Vec3::new(self.0[0].hi(), self.0[1].hi(), self.0[2].hi())
    }

    pub fn lo(&self) -> Vec3 {
        Vec3::new(self.0[0].lo(), self.0[1].lo(), self.0[2].lo())
    }
}

impl Add for Dd3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Dd3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Dd3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_survives() {
        let a = Dd3::diff(
            Vec3::new(1.0 + f64::EPSILON, 1.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
        );
        let b = Dd3::from_vec(Vec3::new(0.0, 0.0, 1.0));
        let c = a.cross(&b);
        assert_eq!(c.hi(), Vec3::new(1.0, -f64::EPSILON, 0.0));
        let s = Dd3::from_vec(Vec3::new(1e16, 0.0, 0.0)) + Dd3::from_vec(Vec3::new(1.0, 0.0, 0.0));
        let back = s - Dd3::from_vec(Vec3::new(1e16, 0.0, 0.0));
        assert_eq!(back.hi().x, 1.0);
        assert_eq!(Dd3::from_parts(s.hi(), s.lo()), s);
    }
}
