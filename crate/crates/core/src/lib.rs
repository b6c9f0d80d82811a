//! Discrete asymptotic nets built from a pair of space polygons, their
//! singularities, a smooth reference model and a surface mesher.

mod dd;
pub mod error;
pub mod example;
pub mod grid;
pub mod net;
pub mod predicates;
pub mod singularity;
pub mod smooth;

pub mod analysis;
pub mod cli;
pub mod io;
pub mod mesh;
#[cfg(test)]
mod properties;
#[cfg(test)]
mod testutil;

pub type Vec3 = nalgebra::Vector3<f64>;

pub use error::{Error, Location, Result};
pub use grid::{Axis, EdgeIdx, GridDomain, IndexGrid, QuadIdx, StarDir, VertexIdx};
pub use net::{AsymptoticNet, ConormalNet, PolyCurve};
