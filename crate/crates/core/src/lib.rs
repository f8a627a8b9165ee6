//! Conformal geometry of timelike curves in the three-dimensional Einstein
//! universe: canonical frames, curvatures, critical curves of the strain
//! functional, their directrices and the associated knots and links.

pub mod curves;
pub mod elliptic;
pub mod error;
pub mod frames;
pub mod geometry;
pub mod homogeneous;
pub mod io;
pub mod jet;
pub mod knots;
pub mod ode;
pub mod quad;
pub mod symplectic;
pub mod variational;
pub mod verify;

pub use error::{Error, Result};
