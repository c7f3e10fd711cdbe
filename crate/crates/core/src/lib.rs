//! Harmonic virtual element method for the Laplace equation on polygonal meshes.

pub mod basis;
pub mod element;
pub mod error;
pub mod geometry;
pub mod mesh;
pub mod quadrature;
pub mod solver;
pub mod study;

pub use error::{Error, Result};
pub use geometry::Point2;
