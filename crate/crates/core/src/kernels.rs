//! Intra-cell weight functions φ(ξ, ξ′): box, triangle and Gaussian shapes,
//! with hard-wall truncation and exact renormalization.
//!
//! Every cell carries unit mass over the physical domain; a wall cuts the
//! protruding part of a cell and the remaining shape is renormalized so the
//! unit-mass contract keeps holding exactly.

use std::fmt;

use crate::error::{Error, Result};
use crate::models::{wall_floor, ModelId};
use crate::special::erf;

/// Shape of the intra-cell distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelShape {
    Box,
    Triangle,
    Gaussian,
}

impl KernelShape {
    pub const ALL: [KernelShape; 3] = [
        KernelShape::Box,
        KernelShape::Triangle,
        KernelShape::Gaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelShape::Box => "box",
            KernelShape::Triangle => "triangle",
            KernelShape::Gaussian => "gaussian",
        }
    }

    pub fn parse(s: &str) -> Result<KernelShape> {
        match s.trim().to_ascii_lowercase().as_str() {
            "box" | "step" | "uniform" => Ok(KernelShape::Box),
            "triangle" | "tri" => Ok(KernelShape::Triangle),
            "gaussian" | "gauss" => Ok(KernelShape::Gaussian),
            _ => Err(Error::BadKernel(format!(
                "unknown kernel shape '{s}'; valid: box, triangle, gaussian"
            ))),
        }
    }
}

impl fmt::Display for KernelShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Gaussian support truncation, in units of the cell width. The mass beyond
/// is below 1e-15 of the cell and is folded back by renormalization.
pub const GAUSSIAN_HALF_SUPPORT: f64 = 6.0;

/// A kernel: shape, the uncertainty parameter κ, and an optional hard wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub shape: KernelShape,
    pub kappa: f64,
    /// Floor below which cell weight is cut off and renormalized away.
    pub wall: Option<f64>,
}

impl KernelSpec {
    /// Optimal κ for the 1D models.
    pub const DEFAULT_KAPPA_1D: f64 = 1.7;
    /// Optimal κ for the 2D oscillator.
    pub const DEFAULT_KAPPA_2D: f64 = 1.8;

    pub fn new(shape: KernelShape, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::BadKernel(format!("kappa = {kappa} must be positive")));
        }
        Ok(KernelSpec {
            shape,
            kappa,
            wall: None,
        })
    }

    pub fn with_wall(mut self, wall: Option<f64>) -> Self {
        self.wall = wall;
        self
    }

    /// Kernel with the wall the model prescribes.
    pub fn for_model(shape: KernelShape, kappa: f64, model: ModelId) -> Result<Self> {
        Ok(KernelSpec::new(shape, kappa)?.with_wall(wall_floor(model)))
    }

    /// Build the uncertainty cell centered at `center` with width `width`.
    ///
    /// Nominal support half-widths are width/2 for the box, width for the
    /// triangle and [`GAUSSIAN_HALF_SUPPORT`]·width for the Gaussian; the
    /// lower edge is clipped at the wall.
    pub fn cell(&self, center: f64, width: f64) -> CellGeometry {
        let half = match self.shape {
            KernelShape::Box => 0.5 * width,
            KernelShape::Triangle => width,
            KernelShape::Gaussian => GAUSSIAN_HALF_SUPPORT * width,
        };
        let mut lo = center - half;
        if let Some(w) = self.wall {
            lo = lo.max(w);
        }
        CellGeometry {
            center,
            width,
            lo,
            hi: center + half,
        }
    }
}

/// One uncertainty cell: its center ξ′, width Δξ and truncated support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    pub center: f64,
    pub width: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Cell width `Δξ = 1/(κ|η|)`, clamped at four domain spans.
///
/// The clamp only engages where `η` is at or near a turning-point zero;
/// there the width formula diverges and any bounded choice leaves the
/// smeared density unchanged at quadrature tolerance.
pub fn cell_width(kappa: f64, eta: f64, domain_span: f64) -> f64 {
    (1.0 / (kappa * eta)).min(4.0 * domain_span)
}

/// Intra-cell weight φ(ξ, ξ′) of the cell at `cell.center`, evaluated at ξ.
///
/// Nonnegative, zero below the wall and outside the support, and of exactly
/// unit mass over the support for every truncation.
pub fn kernel_weight(spec: &KernelSpec, xi: f64, cell: &CellGeometry) -> f64 {
    if cell.hi <= cell.lo || !(cell.width > 0.0) {
        // cell entirely below the wall (unreachable for centers above it)
        return 0.0;
    }
    if xi < cell.lo || xi > cell.hi {
        return 0.0;
    }
    let w = cell.width;
    let c = cell.center;
    match spec.shape {
        KernelShape::Box => 1.0 / (cell.hi - cell.lo),
        KernelShape::Triangle => {
            let mass = triangle_mass(w, c, cell.lo, cell.hi);
            (w - (xi - c).abs()).max(0.0) / mass
        }
        KernelShape::Gaussian => {
            let s = 2f64.sqrt() / w;
            let mass = w * (std::f64::consts::PI / 8.0).sqrt()
                * (erf(s * (cell.hi - c)) - erf(s * (cell.lo - c)));
            (-2.0 * (xi - c) * (xi - c) / (w * w)).exp() / mass
        }
    }
}

/// ∫ (Δξ - |t - c|) dt over [lo, hi]; equals Δξ² for the full support.
fn triangle_mass(w: f64, c: f64, lo: f64, hi: f64) -> f64 {
    let g = |x: f64| {
        let t = x - c;
        w * t - t.signum() * t * t / 2.0
    };
    g(hi) - g(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{adaptive_simpson, QuadOpts};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn cell_width_examples() {
        close(cell_width(1.7, 1.0, 2.0), 1.0 / 1.7, 1e-15);
        close(cell_width(1.7, 0.0, 2.0), 8.0, 0.0); // clamp case
        close(cell_width(2.0, 0.5, 10.0), 1.0, 1e-15);
    }

    #[test]
    fn box_weight_inside_outside() {
        let spec = KernelSpec::new(KernelShape::Box, 1.7).unwrap();
        let cell = spec.cell(1.0, 0.5);
        close(kernel_weight(&spec, 1.1, &cell), 2.0, 1e-15);
        close(kernel_weight(&spec, 1.3, &cell), 0.0, 0.0);
        close(kernel_weight(&spec, 0.7, &cell), 0.0, 0.0);
    }

    #[test]
    fn box_wall_truncation_example() {
        // wall at 0, center 0.1, width 0.5: uniform 1/0.35 on [0, 0.35]
        let spec = KernelSpec::new(KernelShape::Box, 1.7)
            .unwrap()
            .with_wall(Some(0.0));
        let cell = spec.cell(0.1, 0.5);
        close(cell.lo, 0.0, 0.0);
        close(cell.hi, 0.35, 1e-15);
        close(kernel_weight(&spec, 0.2, &cell), 1.0 / 0.35, 1e-12);
        close(kernel_weight(&spec, 0.34, &cell), 1.0 / 0.35, 1e-12);
        assert_eq!(kernel_weight(&spec, 0.4, &cell), 0.0);
        assert_eq!(kernel_weight(&spec, -0.05, &cell), 0.0);
    }

    #[test]
    fn triangle_apex_value() {
        let spec = KernelSpec::new(KernelShape::Triangle, 1.7).unwrap();
        let cell = spec.cell(0.3, 1.0);
        close(kernel_weight(&spec, 0.3, &cell), 1.0, 1e-15);
    }

    #[test]
    fn gaussian_wall_prefactor_doubles_at_the_wall() {
        // erf(0) = 0 in the truncated normalizer: half-Gaussian, twice the
        // free prefactor sqrt(2/pi)/w
        let w = 0.8;
        let spec = KernelSpec::new(KernelShape::Gaussian, 1.7)
            .unwrap()
            .with_wall(Some(0.0));
        let cell = spec.cell(0.0, w);
        let expect = 2.0 * 2f64.sqrt() / (PI.sqrt() * w);
        close(kernel_weight(&spec, 0.0, &cell), expect, 1e-12 * expect);
    }

    #[test]
    fn gaussian_tail_is_e_minus_two_of_peak() {
        let w = 0.37;
        let spec = KernelSpec::new(KernelShape::Gaussian, 1.7).unwrap();
        let cell = spec.cell(2.0, w);
        let peak = kernel_weight(&spec, 2.0, &cell);
        let tail = kernel_weight(&spec, 2.0 + w, &cell);
        close(tail / peak, (-2.0f64).exp(), 1e-12);
    }

    #[test]
    fn weights_are_symmetric_without_wall() {
        for shape in KernelShape::ALL {
            let spec = KernelSpec::new(shape, 1.7).unwrap();
            let cell = spec.cell(0.4, 0.9);
            for u in [0.05, 0.2, 0.41, 0.77, 1.3] {
                let a = kernel_weight(&spec, 0.4 + u, &cell);
                let b = kernel_weight(&spec, 0.4 - u, &cell);
                assert_eq!(a, b, "{shape} asymmetric at u={u}");
            }
        }
    }

    #[test]
    fn far_wall_degenerates_to_free_space() {
        for shape in KernelShape::ALL {
            let free = KernelSpec::new(shape, 1.7).unwrap();
            let walled = free.with_wall(Some(-50.0));
            let c = 0.8;
            let w = 0.6;
            let cf = free.cell(c, w);
            let cw = walled.cell(c, w);
            for xi in [0.2, 0.5, 0.8, 1.1, 1.9] {
                let a = kernel_weight(&free, xi, &cf);
                let b = kernel_weight(&walled, xi, &cw);
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn invalid_kappa_rejected() {
        assert!(KernelSpec::new(KernelShape::Box, 0.0).is_err());
        assert!(KernelSpec::new(KernelShape::Box, -1.0).is_err());
        assert!(KernelSpec::new(KernelShape::Box, f64::NAN).is_err());
    }

    #[test]
    fn shape_parse_roundtrip() {
        for s in KernelShape::ALL {
            assert_eq!(KernelShape::parse(s.name()).unwrap(), s);
        }
        assert!(KernelShape::parse("spline").is_err());
    }

    fn cell_mass(spec: &KernelSpec, cell: &CellGeometry) -> f64 {
        let opts = QuadOpts {
            rel_tol: 1e-11,
            min_depth: 7,
            ..Default::default()
        };
        adaptive_simpson(|x| kernel_weight(spec, x, cell), cell.lo, cell.hi, &opts)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        // Eq-level unit-mass contract for random shape/center/width/wall
        #[test]
        fn unit_cell_mass(
            shape_i in 0usize..3,
            center in -5.0f64..5.0,
            width in 0.01f64..10.0,
            wall_cut in proptest::option::of(0.0f64..2.0),
        ) {
            let shape = KernelShape::ALL[shape_i];
            let mut spec = KernelSpec::new(shape, 1.7).unwrap();
            if let Some(t) = wall_cut {
                // wall somewhere between the center and below the support
                let half = match shape {
                    KernelShape::Box => 0.5 * width,
                    KernelShape::Triangle => width,
                    KernelShape::Gaussian => GAUSSIAN_HALF_SUPPORT * width,
                };
                spec = spec.with_wall(Some(center - t * half));
            }
            let cell = spec.cell(center, width);
            let mass = cell_mass(&spec, &cell);
            prop_assert!((mass - 1.0).abs() <= 1e-8, "mass = {}", mass);
        }
    }
}
