//! Assembly of the smeared density P(ξ) = ∫ φ(ξ,ξ′) P_Cl(ξ′) dξ′ over the
//! classical region, plus a seeded Monte Carlo oracle and κ-sweeps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{cell_width, kernel_weight, KernelShape, KernelSpec};
use crate::models::{
    self, classical_norm_const, momentum_raw, quantum_density, turning_points, wall_floor,
    ClassicalRegionIntegrator, ModelId, ModelParams,
};
use crate::quad::{trapezoid, QuadOpts};

/// Identifier of the pseudo-random generator used by every stochastic
/// routine in this crate, recorded in output metadata.
pub const RNG_ID: &str = "chacha8";

/// Uniform inclusive grid on ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Grid> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::BadGrid(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(Error::BadGrid(format!("need at least 2 points, got {n}")));
        }
        Ok(Grid { lo, hi, n })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        let t = i as f64 / (self.n - 1) as f64;
        self.lo * (1.0 - t) + self.hi * t
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Provenance of a sampled density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMeta {
    pub source: &'static str,
    pub model: Option<ModelId>,
    pub beta: Option<f64>,
    pub kernel: Option<KernelShape>,
    pub kappa: Option<f64>,
    pub energy: Option<f64>,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
    pub samples: Option<u64>,
}

impl Default for DensityMeta {
    fn default() -> Self {
        DensityMeta {
            source: "",
            model: None,
            beta: None,
            kernel: None,
            kappa: None,
            energy: None,
            seed: None,
            rng: None,
            samples: None,
        }
    }
}

/// A density sampled on a uniform grid.
///
/// `norm` is the trapezoid integral of the samples; it is recorded, never
/// silently rescaled, so normalization drift stays visible as a quality
/// metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub norm: f64,
    pub meta: DensityMeta,
}

impl Density {
    pub fn new(grid: Grid, values: Vec<f64>, meta: DensityMeta) -> Density {
        assert_eq!(values.len(), grid.n, "value count must match the grid");
        let norm = trapezoid(&values, grid.step());
        Density {
            grid,
            values,
            norm,
            meta,
        }
    }
}

/// Default evaluation grid: 1001 points covering the classical region plus
/// three maximal cell widths on each side (clipped at the wall), which
/// captures the smeared tails at Gaussian truncation accuracy.
pub fn default_grid(model: ModelId, params: &ModelParams, e: f64) -> Result<Grid> {
    let (lo, hi) = default_range(model, params, e)?;
    Grid::new(lo, hi, 1001)
}

/// Range of [`default_grid`], also used by the Monte Carlo histogram.
pub fn default_range(model: ModelId, params: &ModelParams, e: f64) -> Result<(f64, f64)> {
    let tp = turning_points(model, params, e)?;
    let margin = 3.0 * 4.0 * tp.span(); // three clamp widths
    let mut lo = tp.xi_min - margin;
    if let Some(w) = wall_floor(model) {
        lo = lo.max(w);
    }
    Ok((lo, tp.xi_max + margin))
}

fn check_kernel(model: ModelId, kernel: &KernelSpec) -> Result<()> {
    if !(kernel.kappa > 0.0) || !kernel.kappa.is_finite() {
        return Err(Error::BadKernel(format!(
            "kappa = {} must be positive",
            kernel.kappa
        )));
    }
    let model_wall = wall_floor(model);
    let ok = match (kernel.wall, model_wall) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= 1e-12,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::WallMismatch {
            kernel_wall: kernel.wall,
            model_wall,
        })
    }
}

/// Pick the forced subdivision depth from the narrowest kernel feature on
/// the integration interval, so adaptive quadrature cannot skip a cell.
fn probe_depth<W: Fn(f64) -> f64>(len: f64, feature: W) -> u32 {
    const PROBES: usize = 129;
    let mut min_w = f64::INFINITY;
    for i in 0..PROBES {
        let t = (i as f64 + 0.5) / PROBES as f64;
        let w = feature(t);
        if w > 0.0 && w < min_w {
            min_w = w;
        }
    }
    if !min_w.is_finite() || min_w <= 0.0 {
        return 6;
    }
    let depth = (4.0 * len / min_w).log2().ceil();
    (depth as i64).clamp(5, 12) as u32
}

struct SmearSetup {
    integ: ClassicalRegionIntegrator,
    nc: f64,
    span: f64,
    opts_left: QuadOpts,
    opts_right: QuadOpts,
}

fn smear_setup(
    model: ModelId,
    params: &ModelParams,
    kernel: &KernelSpec,
    e: f64,
) -> Result<SmearSetup> {
    check_kernel(model, kernel)?;
    let tp = turning_points(model, params, e)?;
    let span = tp.span();
    let integ = ClassicalRegionIntegrator::new(model, params, e)?;
    let nc = classical_norm_const(model, params, e)?;
    let (a, b) = integ.bounds();
    let mid = 0.5 * (a + b);
    let (sing_l, sing_r) = integ.is_singular();
    let kappa = kernel.kappa;
    let feat = |xi: f64| cell_width(kappa, momentum_raw(model, params, e, xi), span) / 2.0;
    let depth_l = if sing_l {
        let umax = (mid - a).sqrt();
        probe_depth(umax, |t| {
            let u = t * umax;
            feat(a + u * u) / (2.0 * u)
        })
    } else {
        probe_depth(mid - a, |t| feat(a + t * (mid - a)))
    };
    let depth_r = if sing_r {
        let umax = (b - mid).sqrt();
        probe_depth(umax, |t| {
            let u = t * umax;
            feat(b - u * u) / (2.0 * u)
        })
    } else {
        probe_depth(b - mid, |t| feat(mid + t * (b - mid)))
    };
    let opts_left = QuadOpts::default().with_min_depth(depth_l);
    let opts_right = QuadOpts::default().with_min_depth(depth_r);
    Ok(SmearSetup {
        integ,
        nc,
        span,
        opts_left,
        opts_right,
    })
}

/// Smeared density on `grid`: for each grid point ξ the cell weights
/// `φ(ξ, cell(ξ′))·P_Cl(ξ′)` are integrated over the classical region with
/// the turning-point substitution of [`ClassicalRegionIntegrator`].
///
/// The grid must span at least `[ξ_min - 3, ξ_max + 3]` (clipped to the
/// physical domain) so barrier penetration is captured.
pub fn smear_density(
    model: ModelId,
    params: &ModelParams,
    kernel: &KernelSpec,
    e: f64,
    grid: &Grid,
) -> Result<Density> {
    let setup = smear_setup(model, params, kernel, e)?;
    let tp = turning_points(model, params, e)?;
    let mut required_lo = tp.xi_min - 3.0;
    if let Some(w) = wall_floor(model) {
        required_lo = required_lo.max(w);
    }
    let required_hi = tp.xi_max + 3.0;
    if grid.lo > required_lo + 1e-9 || grid.hi < required_hi - 1e-9 {
        return Err(Error::GridTooNarrow {
            lo: grid.lo,
            hi: grid.hi,
            required_lo,
            required_hi,
        });
    }
    let values = smear_values(model, params, kernel, e, grid, &setup);
    Ok(Density::new(
        *grid,
        values,
        DensityMeta {
            source: "smear",
            model: Some(model),
            beta: params.beta,
            kernel: Some(kernel.shape),
            kappa: Some(kernel.kappa),
            energy: Some(e),
            ..Default::default()
        },
    ))
}

fn smear_values(
    model: ModelId,
    params: &ModelParams,
    kernel: &KernelSpec,
    e: f64,
    grid: &Grid,
    setup: &SmearSetup,
) -> Vec<f64> {
    let kappa = kernel.kappa;
    let span = setup.span;
    (0..grid.n)
        .into_par_iter()
        .map(|i| {
            let xi = grid.point(i);
            let v = setup.integ.integrate(
                |xp| {
                    let width = cell_width(kappa, momentum_raw(model, params, e, xp), span);
                    kernel_weight(kernel, xi, &kernel.cell(xp, width))
                },
                &setup.opts_left,
                &setup.opts_right,
            );
            // Richardson extrapolation can leave harmless -1e-18 residue
            (setup.nc * v).max(0.0)
        })
        .collect()
}

/// Classical density sampled on a grid, clipped to zero at and outside the
/// turning points (wall-side boundary values keep their finite limits).
pub fn classical_density_grid(
    model: ModelId,
    params: &ModelParams,
    e: f64,
    grid: &Grid,
) -> Result<Density> {
    let tp = turning_points(model, params, e)?;
    let nc = classical_norm_const(model, params, e)?;
    let values = grid
        .points()
        .map(|xi| {
            if xi < tp.xi_min || xi > tp.xi_max {
                return 0.0;
            }
            let eta = momentum_raw(model, params, e, xi);
            if eta == 0.0 || eta.is_infinite() {
                0.0
            } else {
                nc / eta
            }
        })
        .collect();
    Ok(Density::new(
        *grid,
        values,
        DensityMeta {
            source: "classical",
            model: Some(model),
            beta: params.beta,
            energy: Some(e),
            ..Default::default()
        },
    ))
}

/// Quantum ground-state density sampled on a grid (zero outside the
/// physical domain).
pub fn quantum_density_grid(model: ModelId, params: &ModelParams, grid: &Grid) -> Result<Density> {
    models::validate(model, params)?;
    let values = grid
        .points()
        .map(|xi| quantum_density(model, params, xi).unwrap_or(0.0))
        .collect();
    Ok(Density::new(
        *grid,
        values,
        DensityMeta {
            source: "quantum",
            model: Some(model),
            beta: params.beta,
            ..Default::default()
        },
    ))
}

/// One smeared density per κ, all on the same grid.
pub fn kappa_sweep(
    model: ModelId,
    params: &ModelParams,
    shape: KernelShape,
    kappas: &[f64],
    e: f64,
    grid: &Grid,
) -> Result<Vec<Density>> {
    if kappas.is_empty() {
        return Err(Error::BadArgument("empty kappa list".into()));
    }
    kappas
        .iter()
        .map(|&k| {
            let kernel = KernelSpec::for_model(shape, k, model)?;
            smear_density(model, params, &kernel, e, grid)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Monte Carlo oracle
// ---------------------------------------------------------------------------

/// How classical positions are drawn for a model.
enum PositionSampler {
    /// ξ′ = -sqrt(2E) cos(π t), t uniform: inverse-time sampling of the
    /// closed-form harmonic trajectory.
    Harmonic { amp: f64 },
    /// ξ′ = E (1 - t²): free fall from the apex, t uniform over the half
    /// period.
    Bouncer { e: f64 },
    /// Rejection sampling of P_Cl in the turning-point substituted
    /// coordinate of each half interval.
    Rejection { halves: [HalfSampler; 2] },
}

struct HalfSampler {
    /// Probability of this half (mass of P_Cl on it).
    prob: f64,
    /// Substituted (u) or plain (ξ) coordinate.
    substituted: bool,
    /// Interval origin: turning point for substituted halves, lower bound
    /// otherwise.
    origin: f64,
    /// +1 when the substituted coordinate grows away from xi_max is
    /// downward, i.e. ξ = origin + dir·u² (dir = -1 for the right half).
    dir: f64,
    len: f64,
    envelope: f64,
}

fn build_rejection(
    model: ModelId,
    params: &ModelParams,
    e: f64,
    integ: &ClassicalRegionIntegrator,
) -> [HalfSampler; 2] {
    let (a, b) = integ.bounds();
    let mid = 0.5 * (a + b);
    let (sing_l, sing_r) = integ.is_singular();
    let opts = QuadOpts::default().with_rel_tol(1e-9);
    let (mass_l, mass_r) = integ.integrate_parts(|_| 1.0, &opts, &opts);
    let total = mass_l + mass_r;

    let build = |substituted: bool, origin: f64, dir: f64, len: f64, prob: f64| {
        const PROBES: usize = 4097;
        let mut max_v: f64 = 0.0;
        for i in 0..PROBES {
            let t = (i as f64 + 0.5) / PROBES as f64 * len;
            let v = if substituted {
                let xi = origin + dir * t * t;
                let eta = momentum_raw(model, params, e, xi);
                if eta > 0.0 {
                    2.0 * t / eta
                } else {
                    0.0
                }
            } else {
                let eta = momentum_raw(model, params, e, origin + t);
                if eta > 0.0 && eta.is_finite() {
                    1.0 / eta
                } else {
                    0.0
                }
            };
            max_v = max_v.max(v);
        }
        HalfSampler {
            prob,
            substituted,
            origin,
            dir,
            len,
            envelope: 1.2 * max_v,
        }
    };

    [
        if sing_l {
            build(true, a, 1.0, (mid - a).sqrt(), mass_l / total)
        } else {
            build(false, a, 1.0, mid - a, mass_l / total)
        },
        if sing_r {
            build(true, b, -1.0, (b - mid).sqrt(), mass_r / total)
        } else {
            build(false, mid, 1.0, b - mid, mass_r / total)
        },
    ]
}

impl PositionSampler {
    fn new(
        model: ModelId,
        params: &ModelParams,
        e: f64,
        integ: &ClassicalRegionIntegrator,
    ) -> PositionSampler {
        match model {
            ModelId::Harmonic => PositionSampler::Harmonic {
                amp: (2.0 * e).sqrt(),
            },
            ModelId::Bouncer => PositionSampler::Bouncer { e },
            _ => PositionSampler::Rejection {
                halves: build_rejection(model, params, e, integ),
            },
        }
    }

    fn draw(
        &self,
        rng: &mut ChaCha8Rng,
        model: ModelId,
        params: &ModelParams,
        e: f64,
    ) -> f64 {
        match self {
            PositionSampler::Harmonic { amp } => {
                let t: f64 = rng.gen();
                -amp * (std::f64::consts::PI * t).cos()
            }
            PositionSampler::Bouncer { e } => {
                let t: f64 = rng.gen();
                e * (1.0 - t * t)
            }
            PositionSampler::Rejection { halves } => {
                let side = if rng.gen::<f64>() < halves[0].prob {
                    &halves[0]
                } else {
                    &halves[1]
                };
                loop {
                    let t = rng.gen::<f64>() * side.len;
                    let y = rng.gen::<f64>() * side.envelope;
                    if side.substituted {
                        let xi = side.origin + side.dir * t * t;
                        let eta = momentum_raw(model, params, e, xi);
                        if eta > 0.0 && y <= 2.0 * t / eta {
                            return xi;
                        }
                    } else {
                        let xi = side.origin + t;
                        let eta = momentum_raw(model, params, e, xi);
                        if eta > 0.0 && eta.is_finite() && y <= 1.0 / eta {
                            return xi;
                        }
                    }
                }
            }
        }
    }
}

fn draw_kernel_sample(
    rng: &mut ChaCha8Rng,
    kernel: &KernelSpec,
    center: f64,
    width: f64,
) -> f64 {
    let cell = kernel.cell(center, width);
    let wall = kernel.wall.unwrap_or(f64::NEG_INFINITY);
    match kernel.shape {
        KernelShape::Box => cell.lo + rng.gen::<f64>() * (cell.hi - cell.lo),
        KernelShape::Triangle => loop {
            let x = center + width * (rng.gen::<f64>() + rng.gen::<f64>() - 1.0);
            if x >= wall {
                return x;
            }
        },
        KernelShape::Gaussian => loop {
            let z: f64 = rng.sample(rand_distr::StandardNormal);
            let x = center + 0.5 * width * z;
            if z.abs() <= 2.0 * crate::kernels::GAUSSIAN_HALF_SUPPORT && x >= wall {
                return x;
            }
        },
    }
}

/// Monte Carlo histogram of the smeared density: ξ′ ~ P_Cl, then
/// ξ ~ φ(·, cell(ξ′)) with wall rejection; `bins` equal bins over the
/// default grid range, normalized to unit mass; bit-identical per seed.
pub fn mc_oracle(
    model: ModelId,
    params: &ModelParams,
    kernel: &KernelSpec,
    e: f64,
    n_samples: u64,
    seed: u64,
    bins: usize,
) -> Result<Density> {
    check_kernel(model, kernel)?;
    if n_samples < 10_000 {
        return Err(Error::BadArgument(format!(
            "mc_oracle needs at least 1e4 samples, got {n_samples}"
        )));
    }
    if bins < 2 {
        return Err(Error::BadArgument("need at least 2 bins".into()));
    }
    let tp = turning_points(model, params, e)?;
    let span = tp.span();
    let (lo, hi) = default_range(model, params, e)?;
    let bin_w = (hi - lo) / bins as f64;
    let integ = ClassicalRegionIntegrator::new(model, params, e)?;
    let sampler = PositionSampler::new(model, params, e, &integ);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; bins];
    for _ in 0..n_samples {
        let xp = sampler.draw(&mut rng, model, params, e);
        let width = cell_width(kernel.kappa, momentum_raw(model, params, e, xp), span);
        let xi = draw_kernel_sample(&mut rng, kernel, xp, width);
        if xi >= lo && xi < hi {
            counts[((xi - lo) / bin_w) as usize] += 1;
        }
    }
    let values: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / (n_samples as f64 * bin_w))
        .collect();
    let grid = Grid::new(lo + 0.5 * bin_w, hi - 0.5 * bin_w, bins)?;
    Ok(Density::new(
        grid,
        values,
        DensityMeta {
            source: "mc",
            model: Some(model),
            beta: params.beta,
            kernel: Some(kernel.shape),
            kappa: Some(kernel.kappa),
            energy: Some(e),
            seed: Some(seed),
            rng: Some(RNG_ID),
            samples: Some(n_samples),
        },
    ))
}
