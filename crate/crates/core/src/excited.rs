//! Harmonic-oscillator excited states, boxcar averaging, and the
//! leading-order quasiclassical (WKB) density.

use crate::engine::{Density, DensityMeta, Grid};
use crate::error::{Error, Result};

const PI: f64 = std::f64::consts::PI;

/// Energy of the n-th harmonic level, `n + 1/2`.
pub fn harmonic_level_energy(n: u32) -> f64 {
    n as f64 + 0.5
}

/// Normalized harmonic eigenfunction ψ_n(ξ), evaluated by the three-term
/// recurrence on ψ_n directly so n = 20 stays far from overflow.
fn harmonic_psi(n: u32, xi: f64) -> f64 {
    let p0 = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    if n == 0 {
        return p0;
    }
    let mut prev = p0;
    let mut cur = 2f64.sqrt() * xi * p0;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// |ψ_n(ξ)|² for the harmonic oscillator; n = 0 reduces to e^{-ξ²}/√π.
pub fn harmonic_quantum_density(n: u32, xi: f64) -> f64 {
    let psi = harmonic_psi(n, xi);
    psi * psi
}

/// [`harmonic_quantum_density`] sampled on a grid.
pub fn harmonic_quantum_density_grid(n: u32, grid: &Grid) -> Density {
    let values = grid.points().map(|x| harmonic_quantum_density(n, x)).collect();
    Density::new(
        *grid,
        values,
        DensityMeta {
            source: "quantum-excited",
            energy: Some(harmonic_level_energy(n)),
            ..Default::default()
        },
    )
}

/// Boxcar average of a sampled density over a window of length `d`.
///
/// The window is snapped to grid nodes and integrated by trapezoid; at the
/// grid edges it is truncated and renormalized by the actual window length.
/// A window at or below one grid step returns the input unchanged.
pub fn windowed_average(dens: &Density, d: f64) -> Result<Density> {
    if !(d > 0.0) {
        return Err(Error::BadArgument(format!("window d = {d} must be positive")));
    }
    let h = dens.grid.step();
    let n = dens.grid.n;
    if d > dens.grid.span() {
        return Err(Error::WindowTooWide {
            d,
            span: dens.grid.span(),
        });
    }
    let k = ((0.5 * d) / h + 1e-12).floor() as usize;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            if k == 0 {
                return dens.values[i];
            }
            let lo = i.saturating_sub(k);
            let hi = (i + k).min(n - 1);
            let seg = &dens.values[lo..=hi];
            let inner: f64 = seg[1..seg.len() - 1].iter().sum();
            let integral = h * (0.5 * seg[0] + inner + 0.5 * seg[seg.len() - 1]);
            integral / (h * (hi - lo) as f64)
        })
        .collect();
    Ok(Density::new(
        dens.grid,
        values,
        DensityMeta {
            source: "windowed",
            ..dens.meta.clone()
        },
    ))
}

/// Leading-order quasiclassical density `1/(π sqrt(2E_n - ξ²))` at the
/// Bohr-Sommerfeld energy `E_n = n + 1/2`.
///
/// Diverges at the turning points by construction; defined only strictly
/// inside them.
pub fn wkb_density_harmonic(n: u32, xi: f64) -> Result<f64> {
    let e = harmonic_level_energy(n);
    let r2 = 2.0 * e - xi * xi;
    if r2 <= 0.0 {
        return Err(Error::PositionDomain {
            xi,
            what: format!("the open classical region |xi| < {}", (2.0 * e).sqrt()),
        });
    }
    Ok(1.0 / (PI * r2.sqrt()))
}
