//! Classical, quantum and uncertainty-smeared probability densities for a
//! catalog of exactly solvable bound systems.
//!
//! The library works throughout in the dimensionless position `ξ` and
//! momentum `η` of each model, in which the position-momentum uncertainty
//! relation reads `Δξ·Δη ≈ 1`. A bound classical orbit of energy `ℰ` has the
//! dwell-time density `P_Cl(ξ) = N_c/|η(ξ)|`, divergent at the turning
//! points. Redistributing the classical weight of every point `ξ'` over an
//! uncertainty cell of width `Δξ = 1/(κ|η(ξ')|)` produces the smeared density
//!
//! ```text
//! P(ξ) = ∫ φ(ξ, ξ') P_Cl(ξ') dξ'
//! ```
//!
//! which is directly comparable with the quantum ground-state density of the
//! same system. [`models`] holds the closed-form physics of the five
//! one-dimensional systems, [`kernels`] the intra-cell weight functions,
//! [`engine`] the quadrature and Monte Carlo assembly of `P(ξ)`, [`excited`]
//! the harmonic excited states plus the quasiclassical baseline, [`osc2d`]
//! the two-dimensional asymmetric oscillator, and [`metrics`] density
//! comparison scorecards.

pub mod engine;
pub mod error;
pub mod excited;
pub mod kernels;
pub mod metrics;
pub mod models;
pub mod osc2d;
pub mod quad;
pub mod special;

pub use engine::{default_grid, kappa_sweep, mc_oracle, smear_density, Density, DensityMeta, Grid};
pub use error::{Error, Result};
pub use kernels::{cell_width, kernel_weight, CellGeometry, KernelShape, KernelSpec};
pub use metrics::{compare, integrate, Scorecard};
pub use models::{
    classical_density, ground_energy, momentum_abs, quantum_density, turning_points, wall_floor,
    ModelId, ModelParams, TurningPoints,
};
pub use osc2d::{Density2D, DirectionAngle, Osc2DParams};
