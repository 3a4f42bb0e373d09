//! Two-dimensional asymmetric harmonic oscillator: classical and quantum
//! ground-state densities, direction-angle-averaged smearing, and random
//! trajectory sampling.
//!
//! With the asymmetry angle α (sin α ∝ ω_x, cos α ∝ ω_y) the dimensionless
//! ground energy is ℰ = (sin α + cos α)/2. In the tilde coordinates
//! `ξ̃_x = ξ_x tan^{1/4}α`, `ξ̃_y = ξ_y cot^{1/4}α` the energy shell is a
//! 3-sphere, the classical density depends on the tilde radius only, and the
//! total tilde speed is `sqrt(2ℰ̃ - ξ̃²)` with ℰ̃ = (tan α + cot α)/2. The
//! direction of motion at a point is unknown; an angle β splits the speed
//! into components and the smeared density is averaged over β.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::Grid;
use crate::error::{Error, Result};
use crate::kernels::{cell_width, kernel_weight, KernelShape, KernelSpec};

const PI: f64 = std::f64::consts::PI;

/// Frequency asymmetry of the 2D oscillator, stored through the angle α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Osc2DParams {
    pub omega_ratio: f64,
    pub sin_alpha: f64,
    pub cos_alpha: f64,
}

impl Osc2DParams {
    /// Build from ω_y/ω_x > 0.
    pub fn new(omega_ratio: f64) -> Result<Self> {
        if !(omega_ratio > 0.0) || !omega_ratio.is_finite() {
            return Err(Error::BadArgument(format!(
                "omega ratio {omega_ratio} must be positive"
            )));
        }
        let norm = (1.0 + omega_ratio * omega_ratio).sqrt();
        Ok(Osc2DParams {
            omega_ratio,
            sin_alpha: 1.0 / norm,
            cos_alpha: omega_ratio / norm,
        })
    }

    /// Ground-state dimensionless energy ℰ = (sin α + cos α)/2.
    pub fn energy(&self) -> f64 {
        0.5 * (self.sin_alpha + self.cos_alpha)
    }

    /// Tilde-frame energy ℰ̃ = (tan α + cot α)/2.
    pub fn energy_tilde(&self) -> f64 {
        0.5 * (self.sin_alpha / self.cos_alpha + self.cos_alpha / self.sin_alpha)
    }

    /// Normalization constant of the classical density, `sqrt(sin α cos α)/π²`.
    pub fn classical_norm_const(&self) -> f64 {
        (self.sin_alpha * self.cos_alpha).sqrt() / (PI * PI)
    }

    fn tan_quarter(&self) -> f64 {
        (self.sin_alpha / self.cos_alpha).powf(0.25)
    }

    /// Full extents of the classical ellipse along each axis.
    pub fn spans(&self) -> (f64, f64) {
        let e2 = 2.0 * self.energy();
        (
            2.0 * (e2 / self.sin_alpha).sqrt(),
            2.0 * (e2 / self.cos_alpha).sqrt(),
        )
    }

    /// `ξ_x² sin α + ξ_y² cos α`, the elliptic radius entering the energy.
    fn q(&self, xi_x: f64, xi_y: f64) -> f64 {
        xi_x * xi_x * self.sin_alpha + xi_y * xi_y * self.cos_alpha
    }
}

/// Assumed direction of classical motion, folded to the first quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionAngle(f64);

impl DirectionAngle {
    pub fn new(beta: f64) -> Result<Self> {
        if !(0.0..=PI / 2.0).contains(&beta) {
            return Err(Error::BadArgument(format!(
                "direction angle {beta} outside [0, pi/2]"
            )));
        }
        Ok(DirectionAngle(beta))
    }

    pub fn radians(&self) -> f64 {
        self.0
    }
}

/// Classical dwell density of the 2D oscillator.
///
/// Singular (integrably) on the ellipse rim and at the origin; evaluation
/// there is an error, values arbitrarily close are allowed.
pub fn classical_density_2d(params: &Osc2DParams, xi_x: f64, xi_y: f64) -> Result<f64> {
    let e2 = 2.0 * params.energy();
    let q = params.q(xi_x, xi_y);
    if q > e2 {
        return Err(Error::PositionDomain {
            xi: (xi_x * xi_x + xi_y * xi_y).sqrt(),
            what: "the open classical ellipse".into(),
        });
    }
    if q == 0.0 || q == e2 {
        return Err(Error::Singular2D { xi_x, xi_y });
    }
    Ok(params.classical_norm_const() / ((e2 - q) * q).sqrt())
}

/// Quantum ground-state density `e^{-ξ_x² - ξ_y²}/π`, rotationally
/// invariant in the dimensionless plane.
pub fn quantum_density_2d(xi_x: f64, xi_y: f64) -> f64 {
    (-xi_x * xi_x - xi_y * xi_y).exp() / PI
}

/// Momentum components `(|η_x|, |η_y|)` once the direction angle β is fixed.
///
/// The total tilde speed `sqrt(η̃_x² + η̃_y²) = sqrt(2ℰ̃ - ξ̃²)` is
/// independent of β.
pub fn directional_momenta(
    params: &Osc2DParams,
    beta: DirectionAngle,
    xi_x: f64,
    xi_y: f64,
) -> Result<(f64, f64)> {
    let e2 = 2.0 * params.energy();
    let q = params.q(xi_x, xi_y);
    if q > e2 {
        return Err(Error::PositionDomain {
            xi: (xi_x * xi_x + xi_y * xi_y).sqrt(),
            what: "the classical ellipse".into(),
        });
    }
    let t4 = params.tan_quarter();
    let xt = xi_x * t4;
    let yt = xi_y / t4;
    let speed = (2.0 * params.energy_tilde() - xt * xt - yt * yt)
        .max(0.0)
        .sqrt();
    Ok((
        speed / t4 * beta.radians().cos(),
        speed * t4 * beta.radians().sin(),
    ))
}

/// Density sampled on a rectangular (ξ_x, ξ_y) grid, stored row-major with
/// x fastest; `norm` is the 2D trapezoid integral.
#[derive(Debug, Clone, PartialEq)]
pub struct Density2D {
    pub grid_x: Grid,
    pub grid_y: Grid,
    pub values: Vec<f64>,
    pub norm: f64,
}

impl Density2D {
    pub fn new(grid_x: Grid, grid_y: Grid, values: Vec<f64>) -> Density2D {
        assert_eq!(values.len(), grid_x.n * grid_y.n);
        let norm = trapezoid_2d(&values, grid_x.n, grid_y.n, grid_x.step(), grid_y.step());
        Density2D {
            grid_x,
            grid_y,
            values,
            norm,
        }
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid_x.n + ix]
    }
}

fn trapezoid_2d(values: &[f64], nx: usize, ny: usize, hx: f64, hy: f64) -> f64 {
    let mut total = 0.0;
    for iy in 0..ny {
        let row = &values[iy * nx..(iy + 1) * nx];
        let inner: f64 = row[1..nx - 1].iter().sum();
        let row_int = hx * (0.5 * row[0] + inner + 0.5 * row[nx - 1]);
        let wy = if iy == 0 || iy == ny - 1 { 0.5 } else { 1.0 };
        total += wy * row_int;
    }
    total * hy
}

// radial and angular node counts of the tilde-polar quadrature
const N_RADIAL: usize = 96;
const N_ANGULAR: usize = 128;

/// Direction-averaged smeared density of the 2D oscillator.
///
/// For each midpoint direction `β_k = (k+1/2)·π/(2·n_beta)` the cell-product
/// kernel `φ_x·φ_y` weighted by the classical density is integrated over the
/// classical ellipse in tilde-polar coordinates, with the radial `u² = R - ρ̃`
/// substitution absorbing the rim divergence; the origin divergence cancels
/// against the polar Jacobian. Slices are averaged with uniform weights.
///
/// The triangle shape is an experimental product extension; box and
/// Gaussian follow the paper's product forms.
pub fn smear_density_2d(
    params: &Osc2DParams,
    kappa: f64,
    shape: KernelShape,
    grid_x: &Grid,
    grid_y: &Grid,
    n_beta: usize,
) -> Result<Density2D> {
    if n_beta < 4 {
        return Err(Error::BadArgument(format!(
            "n_beta = {n_beta} but at least 4 direction angles are required"
        )));
    }
    let spec = KernelSpec::new(shape, kappa)?; // validates kappa; no wall in 2D
    let e_t = params.energy_tilde();
    let r = (2.0 * e_t).sqrt();
    let t4 = params.tan_quarter();
    let (span_x, span_y) = params.spans();
    let c_over_s = params.classical_norm_const() / (params.sin_alpha * params.cos_alpha).sqrt();

    // composite Simpson nodes in u over [0, sqrt(R)]
    let umax = r.sqrt();
    let hu = umax / N_RADIAL as f64;
    let radial: Vec<(f64, f64)> = (0..=N_RADIAL)
        .map(|j| {
            let u = j as f64 * hu;
            let simpson = if j == 0 || j == N_RADIAL {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (u, simpson * hu / 3.0)
        })
        .collect();

    let nx = grid_x.n;
    let ny = grid_y.n;
    let xs: Vec<f64> = grid_x.points().collect();
    let ys: Vec<f64> = grid_y.points().collect();

    let slices: Vec<Vec<f64>> = (0..n_beta)
        .into_par_iter()
        .map(|k| {
            let beta = (k as f64 + 0.5) * (PI / 2.0) / n_beta as f64;
            let (cosb, sinb) = (beta.cos(), beta.sin());
            let mut slice = vec![0.0; nx * ny];
            let mut gx = vec![0.0; nx];
            let mut gy = vec![0.0; ny];
            for &(u, wu) in &radial {
                let rho = r - u * u;
                // tilde speed sqrt(R^2 - rho^2) written cancellation-free
                let speed = u * (2.0 * r - u * u).max(0.0).sqrt();
                let eta_x = speed / t4 * cosb;
                let eta_y = speed * t4 * sinb;
                let wx = cell_width(kappa, eta_x, span_x);
                let wy = cell_width(kappa, eta_y, span_y);
                let w_rad = wu * 2.0 / (2.0 * r - u * u).sqrt() * c_over_s;
                for it in 0..N_ANGULAR {
                    let theta = (it as f64 + 0.5) * 2.0 * PI / N_ANGULAR as f64;
                    let cx = rho * theta.cos() / t4;
                    let cy = rho * theta.sin() * t4;
                    let cell_x = spec.cell(cx, wx);
                    let cell_y = spec.cell(cy, wy);
                    let (ix0, ix1) = index_window(grid_x, cell_x.lo, cell_x.hi);
                    let (iy0, iy1) = index_window(grid_y, cell_y.lo, cell_y.hi);
                    if ix0 > ix1 || iy0 > iy1 {
                        continue;
                    }
                    for ix in ix0..=ix1 {
                        gx[ix] = kernel_weight(&spec, xs[ix], &cell_x);
                    }
                    for iy in iy0..=iy1 {
                        gy[iy] = kernel_weight(&spec, ys[iy], &cell_y);
                    }
                    let w = w_rad * 2.0 * PI / N_ANGULAR as f64;
                    for iy in iy0..=iy1 {
                        let wy_row = w * gy[iy];
                        if wy_row == 0.0 {
                            continue;
                        }
                        let row = &mut slice[iy * nx..(iy + 1) * nx];
                        for ix in ix0..=ix1 {
                            row[ix] += wy_row * gx[ix];
                        }
                    }
                }
            }
            slice
        })
        .collect();

    // deterministic sequential reduction
    let mut values = vec![0.0; nx * ny];
    for slice in &slices {
        for (v, s) in values.iter_mut().zip(slice) {
            *v += s;
        }
    }
    let inv = 1.0 / n_beta as f64;
    for v in &mut values {
        *v *= inv;
    }
    Ok(Density2D::new(*grid_x, *grid_y, values))
}

fn index_window(grid: &Grid, lo: f64, hi: f64) -> (usize, usize) {
    let h = grid.step();
    let i0 = ((lo - grid.lo) / h).ceil().max(0.0) as usize;
    let i1f = ((hi - grid.lo) / h).floor();
    if i1f < 0.0 {
        return (1, 0); // empty
    }
    let i1 = (i1f as usize).min(grid.n - 1);
    if i0 >= grid.n {
        return (1, 0);
    }
    (i0, i1)
}

/// Exact oscillator trajectory for a fixed energy split and phases:
/// `ξ_x(τ) = A_x sin(ω̂_x τ + φ_x)` with `ω̂_x = sin α`, `ω̂_y = cos α`,
/// sampled over one period of the slower axis.
pub fn trajectory_from_split(
    params: &Osc2DParams,
    ex_fraction: f64,
    phi_x: f64,
    phi_y: f64,
    steps: usize,
) -> Vec<(f64, f64)> {
    let e = params.energy();
    let ex = ex_fraction * e;
    let ey = e - ex;
    let ax = (2.0 * ex / params.sin_alpha).sqrt();
    let ay = (2.0 * ey / params.cos_alpha).sqrt();
    let (wx, wy) = (params.sin_alpha, params.cos_alpha);
    let period = 2.0 * PI / wx.min(wy);
    (0..steps)
        .map(|j| {
            let tau = period * j as f64 / (steps - 1).max(1) as f64;
            (
                ax * (wx * tau + phi_x).sin(),
                ay * (wy * tau + phi_y).sin(),
            )
        })
        .collect()
}

/// Random classical trajectories at the fixed ground energy: energy split
/// uniform on (0, ℰ), phases uniform on [0, 2π); deterministic per seed.
pub fn sample_trajectories(
    params: &Osc2DParams,
    count: usize,
    steps: usize,
    seed: u64,
) -> Result<Vec<Vec<(f64, f64)>>> {
    if count < 1 {
        return Err(Error::BadArgument("need at least one trajectory".into()));
    }
    if steps < 2 {
        return Err(Error::BadArgument("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let ex: f64 = rng.gen();
            let phi_x = 2.0 * PI * rng.gen::<f64>();
            let phi_y = 2.0 * PI * rng.gen::<f64>();
            trajectory_from_split(params, ex, phi_x, phi_y, steps)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{adaptive_simpson, QuadOpts};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn ratio2() -> Osc2DParams {
        Osc2DParams::new(2.0).unwrap()
    }

    #[test]
    fn derived_constants_for_ratio_two() {
        let p = ratio2();
        close(p.sin_alpha, 0.4472135954999579, 1e-15);
        close(p.cos_alpha, 0.8944271909999159, 1e-15);
        close(p.sin_alpha.powi(2) + p.cos_alpha.powi(2), 1.0, 1e-14);
        close(p.energy(), 0.6708203932499369, 1e-15);
        close(p.energy_tilde(), 1.25, 1e-14);
        close(p.classical_norm_const(), 0.06408114310679651, 1e-15);
    }

    #[test]
    fn classical_density_point_and_errors() {
        let p = ratio2();
        close(
            classical_density_2d(&p, 0.5, 0.5).unwrap(),
            0.11030453335935871,
            1e-14,
        );
        assert!(matches!(
            classical_density_2d(&p, 0.0, 0.0),
            Err(Error::Singular2D { .. })
        ));
        // on the rim: q = 2E along the x axis at x = sqrt(2E/sin)
        let x_rim = (2.0 * p.energy() / p.sin_alpha).sqrt();
        assert!(classical_density_2d(&p, x_rim, 0.0).is_err());
        assert!(classical_density_2d(&p, 10.0, 10.0).is_err());
    }

    #[test]
    fn symmetric_case_is_rotationally_invariant() {
        let p = Osc2DParams::new(1.0).unwrap();
        let r = 0.7;
        let reference = classical_density_2d(&p, r, 0.0).unwrap();
        for ang in [0.3, 0.9, 1.4, 2.2, 4.0] {
            let v = classical_density_2d(&p, r * f64::cos(ang), r * f64::sin(ang)).unwrap();
            close(v, reference, 1e-12 * reference);
        }
    }

    #[test]
    fn classical_mass_is_one() {
        // independent route: polar coordinates in the original plane with a
        // u^2 = r_max - r rim substitution, angular midpoint rule
        let p = ratio2();
        let e2 = 2.0 * p.energy();
        let c = p.classical_norm_const();
        let n_phi = 256;
        let mut mass = 0.0;
        let opts = QuadOpts::default().with_rel_tol(1e-9);
        for i in 0..n_phi {
            let phi = (i as f64 + 0.5) * 2.0 * PI / n_phi as f64;
            let g = p.sin_alpha * phi.cos().powi(2) + p.cos_alpha * phi.sin().powi(2);
            let r_max = (e2 / g).sqrt();
            let inner = adaptive_simpson(
                |u| {
                    if u == 0.0 {
                        return 2.0 * c / (g * (2.0 * r_max).sqrt());
                    }
                    let rr = r_max - u * u;
                    if rr <= 0.0 {
                        return 0.0;
                    }
                    let q = g * rr * rr;
                    2.0 * u * rr * c / ((e2 - q).max(1e-300) * q).sqrt()
                },
                0.0,
                r_max.sqrt(),
                &opts,
            );
            mass += inner * 2.0 * PI / n_phi as f64;
        }
        close(mass, 1.0, 1e-4);
    }

    #[test]
    fn quantum_density_properties() {
        close(quantum_density_2d(0.0, 0.0), 1.0 / PI, 1e-15);
        assert_eq!(quantum_density_2d(1.0, 0.0), quantum_density_2d(0.0, 1.0));
        // separable Gaussian: nested quadrature mass
        let opts = QuadOpts::default().with_rel_tol(1e-10);
        let one_d = adaptive_simpson(|x| (-x * x).exp(), -7.0, 7.0, &opts);
        close(one_d * one_d / PI, 1.0, 1e-8);
    }

    #[test]
    fn tilde_speed_is_direction_independent() {
        let p = ratio2();
        let t4 = p.tan_quarter();
        let expected_origin = (2.0 * p.energy_tilde()).sqrt();
        for (x, y, beta) in [
            (0.0, 0.0, 0.3),
            (0.4, -0.2, 0.9),
            (-0.8, 0.3, 1.2),
            (0.2, 0.9, 0.01),
        ] {
            let b = DirectionAngle::new(beta).unwrap();
            let (ex, ey) = directional_momenta(&p, b, x, y).unwrap();
            let tilde_speed = ((ex * t4).powi(2) + (ey / t4).powi(2)).sqrt();
            let xt = x * t4;
            let yt = y / t4;
            let reference = (2.0 * p.energy_tilde() - xt * xt - yt * yt).sqrt();
            close(tilde_speed, reference, 1e-12);
            if x == 0.0 && y == 0.0 {
                close(tilde_speed, expected_origin, 1e-12);
            }
        }
    }

    #[test]
    fn beta_zero_kills_the_y_component() {
        let p = ratio2();
        let (_, ey) =
            directional_momenta(&p, DirectionAngle::new(0.0).unwrap(), 0.3, 0.1).unwrap();
        assert_eq!(ey, 0.0);
        // and the cell width clamps there
        let (_, span_y) = p.spans();
        assert_eq!(cell_width(1.8, ey, span_y), 4.0 * span_y);
    }

    #[test]
    fn momenta_at_symmetric_origin_split_equally() {
        let p = Osc2DParams::new(1.0).unwrap();
        let b = DirectionAngle::new(PI / 4.0).unwrap();
        let (ex, ey) = directional_momenta(&p, b, 0.0, 0.0).unwrap();
        // total tilde energy 2E~ = 2, split at 45 degrees: each component 1
        close(ex, 1.0, 1e-14);
        close(ey, 1.0, 1e-14);
        assert!(directional_momenta(&p, b, 5.0, 5.0).is_err());
        assert!(DirectionAngle::new(-0.1).is_err());
        assert!(DirectionAngle::new(2.0).is_err());
    }

    #[test]
    fn symmetric_smear_is_invariant_under_quarter_turn() {
        let p = Osc2DParams::new(1.0).unwrap();
        let g = Grid::new(-3.0, 3.0, 81).unwrap();
        let d = smear_density_2d(&p, 1.8, KernelShape::Gaussian, &g, &g, 8).unwrap();
        // (x, y) -> (-y, x): value(ix, iy) == value(n-1-iy, ix)
        let n = g.n;
        let mut worst = 0.0f64;
        for iy in 0..n {
            for ix in 0..n {
                let a = d.at(ix, iy);
                let b = d.at(n - 1 - iy, ix);
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst <= 1e-6, "90-degree asymmetry {worst}");
    }

    #[test]
    fn beta_average_converges_in_n_beta() {
        let p = ratio2();
        let g = Grid::new(-3.0, 3.0, 101).unwrap();
        let a = smear_density_2d(&p, 1.8, KernelShape::Gaussian, &g, &g, 8).unwrap();
        let b = smear_density_2d(&p, 1.8, KernelShape::Gaussian, &g, &g, 32).unwrap();
        let h2 = g.step() * g.step();
        let l1: f64 = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).abs() * h2)
            .sum();
        assert!(l1 <= 1e-2, "L1 = {l1}");
        assert!(smear_density_2d(&p, 1.8, KernelShape::Box, &g, &g, 2).is_err());
    }

    #[test]
    fn trajectories_conserve_energy_and_are_seed_deterministic() {
        let p = ratio2();
        let e2 = 2.0 * p.energy();
        let trajs = sample_trajectories(&p, 50, 300, 7).unwrap();
        assert_eq!(trajs.len(), 50);
        for t in &trajs {
            assert_eq!(t.len(), 300);
            for &(x, y) in t {
                assert!(p.q(x, y) <= e2 + 1e-9);
            }
        }
        let again = sample_trajectories(&p, 50, 300, 7).unwrap();
        assert_eq!(trajs, again);
        let other = sample_trajectories(&p, 50, 300, 8).unwrap();
        assert_ne!(trajs, other);
    }

    #[test]
    fn full_x_split_gives_a_straight_segment() {
        let p = ratio2();
        let t = trajectory_from_split(&p, 1.0, 0.4, 1.1, 64);
        for &(_, y) in &t {
            assert_eq!(y, 0.0);
        }
        // and the x amplitude reaches sqrt(2E/sin)
        let ax = (2.0 * p.energy() / p.sin_alpha).sqrt();
        assert!(t.iter().map(|&(x, _)| x.abs()).fold(0.0, f64::max) <= ax + 1e-12);
    }

    #[test]
    fn phase_ensemble_reproduces_the_classical_density() {
        // time-uniform positions over random trajectories vs quadrature
        // bin masses of P_Cl on a 50x50 grid
        let p = ratio2();
        let t4 = p.tan_quarter();
        let r = (2.0 * p.energy_tilde()).sqrt();
        let nbin = 50;
        let (lo, hi) = (-3.0, 3.0);
        let w = (hi - lo) / nbin as f64;
        let idx = |v: f64| -> Option<usize> {
            if v < lo || v >= hi {
                None
            } else {
                Some(((v - lo) / w) as usize)
            }
        };
        // quadrature binning of the classical measure in tilde-polar nodes
        let mut want = vec![0.0; nbin * nbin];
        let (n_u, n_th) = (1500, 1500);
        let umax = r.sqrt();
        for ju in 0..n_u {
            let u = (ju as f64 + 0.5) * umax / n_u as f64;
            let rho = r - u * u;
            let wu = 2.0 * (umax / n_u as f64) / (2.0 * r - u * u).sqrt() / (PI * PI)
                * (2.0 * PI / n_th as f64);
            for jt in 0..n_th {
                let th = (jt as f64 + 0.5) * 2.0 * PI / n_th as f64;
                let (x, y) = (rho * th.cos() / t4, rho * th.sin() * t4);
                if let (Some(ix), Some(iy)) = (idx(x), idx(y)) {
                    want[iy * nbin + ix] += wu;
                }
            }
        }
        // sampler: uniform energy split + phases, one time sample each
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut got = vec![0.0; nbin * nbin];
        let n = 1_000_000u64;
        let period = 2.0 * PI / p.sin_alpha.min(p.cos_alpha);
        for _ in 0..n {
            let ex: f64 = rng.gen();
            let phx = 2.0 * PI * rng.gen::<f64>();
            let phy = 2.0 * PI * rng.gen::<f64>();
            let tau = period * rng.gen::<f64>();
            let ax = (2.0 * ex * p.energy() / p.sin_alpha).sqrt();
            let ay = (2.0 * (1.0 - ex) * p.energy() / p.cos_alpha).sqrt();
            let x = ax * (p.sin_alpha * tau + phx).sin();
            let y = ay * (p.cos_alpha * tau + phy).sin();
            if let (Some(ix), Some(iy)) = (idx(x), idx(y)) {
                got[iy * nbin + ix] += 1.0 / n as f64;
            }
        }
        let l1: f64 = want
            .iter()
            .zip(&got)
            .map(|(a, b)| (a - b).abs())
            .sum();
        assert!(l1 <= 0.05, "L1 = {l1}");
    }
}
