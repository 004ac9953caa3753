//! Numerical machinery for low-distortion embeddings between direct-sum
//! norms: bending maps, annulus-glued embeddings of finite point sets into a
//! block model space, planar covering certificates for symmetric convex
//! bodies, invariance measurement with combiner extraction, and a cap-cut
//! counterexample norm on ℝ⁴, all with seeded, certifiable verification.

pub mod annulus;
pub mod bending;
pub mod capspace;
pub mod error;
pub mod harness;
pub mod invariance;
pub mod linalg;
pub mod model_space;
pub mod norms2d;
pub mod polygon;

pub use error::{Error, Result};
pub use norms2d::{NormConstants, UncondNorm2};
