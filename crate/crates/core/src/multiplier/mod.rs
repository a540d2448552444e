//! Fourier multipliers on the torus and their action on lattice functions.

pub mod circle;
pub mod cutoff;
pub mod grid;
pub mod heat;
pub mod lattice_fn;
pub mod sphere;
pub mod study;

pub use circle::{
    approx_arc_multiplier, approx_total, arc_multiplier, exact_multiplier, ApproxTotal, Approximant, ArcMultiplier,
    ArcQuadrature,
};
pub use cutoff::{cutoff, CutoffKind, CutoffSpec};
pub use grid::{FrequencyGrid, MultiplierField};
pub use heat::{heat_multiplier_direct, heat_multiplier_poisson, HeatParams, HeatValue};
pub use lattice_fn::{apply_multiplier, spherical_convolve, spherical_convolve_at, LatticeFunction};
pub use sphere::{j_lambda, sphere_ft, JLambda};
