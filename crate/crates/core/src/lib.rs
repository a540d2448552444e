//! Lattice points on spheres, circle-method approximations of the discrete
//! spherical averages, and maximal norms over matrix algebras.

pub mod error;
pub mod exec;
pub mod farey;
pub mod gauss;
pub mod lattice;
pub mod lab;
pub mod ncmax;
pub mod multiplier;
pub mod oracle;
pub mod quad;
pub mod transference;

pub use error::{Error, Result};
pub use exec::Exec;
