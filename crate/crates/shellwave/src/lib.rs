//! Wave propagation in thin plates: a grid-characteristic solver for the
//! hyperbolic Kirchhoff-Love shell system, a reference 3D linear-elasticity
//! solver, and the post-processing needed to compare the two.

pub mod elastic3d;
pub mod error;
pub mod gcm;
pub mod kl_system;
pub mod material;
pub mod output;
pub mod postprocess;
pub mod runner;
pub mod scenario;
pub mod shell;

pub use error::{Error, Result};
pub use material::{DerivedConstants, Material, ShearConvention};
