//! Error type shared by the whole crate.

use crate::models::ModelId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A shape parameter violates the model's admissible range.
    #[error("invalid parameter for {model}: {message}")]
    ParamDomain { model: ModelId, message: String },

    /// An energy lies outside the model's bound-state range.
    #[error("energy {energy} outside the bound range of {model}: {message}")]
    EnergyDomain {
        model: ModelId,
        energy: f64,
        message: String,
    },

    /// A position lies outside the admissible domain of an operation.
    #[error("position {xi} outside {what}")]
    PositionDomain { xi: f64, what: String },

    /// Evaluation exactly at a zero-momentum turning point, where the
    /// classical density diverges.
    #[error("classical density diverges at the turning point xi = {xi}")]
    TurningPointSingularity { xi: f64 },

    /// Evaluation on a singular set of the 2D classical density.
    #[error("2D classical density is singular at (xi_x, xi_y) = ({xi_x}, {xi_y})")]
    Singular2D { xi_x: f64, xi_y: f64 },

    #[error("invalid kernel: {0}")]
    BadKernel(String),

    /// The kernel's hard wall disagrees with the model's wall.
    #[error("kernel wall {kernel_wall:?} does not match the model wall {model_wall:?}")]
    WallMismatch {
        kernel_wall: Option<f64>,
        model_wall: Option<f64>,
    },

    #[error("invalid grid: {0}")]
    BadGrid(String),

    /// The evaluation grid does not cover the span the smearing needs.
    #[error("grid [{lo}, {hi}] too narrow; the smeared density needs at least [{required_lo}, {required_hi}]")]
    GridTooNarrow {
        lo: f64,
        hi: f64,
        required_lo: f64,
        required_hi: f64,
    },

    #[error("densities live on different grids")]
    GridMismatch,

    #[error("averaging window {d} exceeds the grid span {span}")]
    WindowTooWide { d: f64, span: f64 },

    #[error("{0}")]
    BadArgument(String),
}
