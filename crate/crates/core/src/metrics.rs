//! Quantitative comparison of densities: masses, distances, moments.

use crate::engine::Density;
use crate::error::{Error, Result};
use crate::quad::trapezoid;

/// Comparison scorecard between two densities on a shared grid.
///
/// `mean` and `variance` are the moments of the first density, normalized by
/// its own mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scorecard {
    pub l1: f64,
    pub linf: f64,
    pub mean: f64,
    pub variance: f64,
    pub norm_a: f64,
    pub norm_b: f64,
}

impl Scorecard {
    /// Stable JSON: fixed key order, 9 significant digits.
    pub fn to_json(&self) -> String {
        fn num(v: f64) -> String {
            format!("{v:.8e}")
        }
        format!(
            "{{\"l1\": {}, \"linf\": {}, \"mean\": {}, \"variance\": {}, \"norm_a\": {}, \"norm_b\": {}}}",
            num(self.l1),
            num(self.linf),
            num(self.mean),
            num(self.variance),
            num(self.norm_a),
            num(self.norm_b)
        )
    }
}

/// Composite trapezoid mass of a density.
pub fn integrate(dens: &Density) -> f64 {
    trapezoid(&dens.values, dens.grid.step())
}

/// Mean and variance of a density, normalized by its own mass.
pub fn moments(dens: &Density) -> (f64, f64) {
    let h = dens.grid.step();
    let mass = integrate(dens);
    if mass == 0.0 {
        return (0.0, 0.0);
    }
    let weighted: Vec<f64> = dens
        .grid
        .points()
        .zip(&dens.values)
        .map(|(x, &v)| x * v)
        .collect();
    let mean = trapezoid(&weighted, h) / mass;
    let centered: Vec<f64> = dens
        .grid
        .points()
        .zip(&dens.values)
        .map(|(x, &v)| (x - mean) * (x - mean) * v)
        .collect();
    let variance = trapezoid(&centered, h) / mass;
    (mean, variance)
}

/// Compare two densities on identical grids.
pub fn compare(a: &Density, b: &Density) -> Result<Scorecard> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let h = a.grid.step();
    let diff: Vec<f64> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .collect();
    let l1 = trapezoid(&diff, h);
    let linf = diff.iter().fold(0.0f64, |m, &v| m.max(v));
    let (mean, variance) = moments(a);
    Ok(Scorecard {
        l1,
        linf,
        mean,
        variance,
        norm_a: integrate(a),
        norm_b: integrate(b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{quantum_density_grid, DensityMeta, Grid};
    use crate::models::{ModelId, ModelParams};
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn density(grid: Grid, values: Vec<f64>) -> Density {
        Density::new(grid, values, DensityMeta::default())
    }

    #[test]
    fn integrate_examples() {
        let grid = Grid::new(-8.0, 8.0, 2001).unwrap();
        let pq = quantum_density_grid(ModelId::Harmonic, &ModelParams::new(), &grid).unwrap();
        close(integrate(&pq), 1.0, 1e-6);
        let zero = density(grid, vec![0.0; 2001]);
        assert_eq!(integrate(&zero), 0.0);
        let half = density(grid, pq.values.iter().map(|v| 0.5 * v).collect());
        close(integrate(&half), 0.5, 1e-6);
    }

    #[test]
    fn compare_identity_and_variance() {
        let grid = Grid::new(-8.0, 8.0, 4001).unwrap();
        let pq = quantum_density_grid(ModelId::Harmonic, &ModelParams::new(), &grid).unwrap();
        let s = compare(&pq, &pq).unwrap();
        assert_eq!(s.l1, 0.0);
        assert_eq!(s.linf, 0.0);
        // Gaussian second moment: integral of x^2 e^{-x^2}/sqrt(pi) = 1/2
        close(s.variance, 0.5, 1e-6);
        close(s.mean, 0.0, 1e-10);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let a = density(Grid::new(0.0, 1.0, 11).unwrap(), vec![1.0; 11]);
        let b = density(Grid::new(0.0, 2.0, 11).unwrap(), vec![1.0; 11]);
        assert!(matches!(compare(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn scorecard_json_is_stable() {
        let s = Scorecard {
            l1: 0.123456789123,
            linf: 1.0,
            mean: -2.5e-11,
            variance: 0.5,
            norm_a: 1.0,
            norm_b: 0.99999,
        };
        assert_eq!(
            s.to_json(),
            "{\"l1\": 1.23456789e-1, \"linf\": 1.00000000e0, \"mean\": -2.50000000e-11, \
             \"variance\": 5.00000000e-1, \"norm_a\": 1.00000000e0, \"norm_b\": 9.99990000e-1}"
        );
    }

    proptest! {
        #[test]
        fn l1_symmetry_and_triangle_inequality(
            a in proptest::collection::vec(0.0f64..2.0, 64),
            b in proptest::collection::vec(0.0f64..2.0, 64),
            c in proptest::collection::vec(0.0f64..2.0, 64),
        ) {
            let grid = Grid::new(-1.0, 1.0, 64).unwrap();
            let da = density(grid, a);
            let db = density(grid, b);
            let dc = density(grid, c);
            let ab = compare(&da, &db).unwrap();
            let ba = compare(&db, &da).unwrap();
            prop_assert_eq!(ab.l1, ba.l1);
            prop_assert_eq!(ab.linf, ba.linf);
            let ac = compare(&da, &dc).unwrap();
            let bc = compare(&db, &dc).unwrap();
            prop_assert!(ac.l1 <= ab.l1 + bc.l1 + 1e-12);
        }

        #[test]
        fn even_densities_have_zero_mean(vals in proptest::collection::vec(0.01f64..2.0, 33)) {
            // symmetrize onto a symmetric grid
            let grid = Grid::new(-2.0, 2.0, 65).unwrap();
            let mut sym = vec![0.0; 65];
            for i in 0..33 {
                sym[32 + i] = vals[i];
                sym[32 - i] = vals[i];
            }
            let d = density(grid, sym);
            let (mean, _) = moments(&d);
            prop_assert!(mean.abs() <= 1e-10);
        }
    }
}
