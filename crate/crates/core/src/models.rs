//! Closed-form dimensionless physics of the five 1D model systems.
//!
//! Every model is expressed in its own dimensionless position `ξ`, momentum
//! `η` and energy `ℰ`; the energy balance is `η²/2 + V(ξ) = ℰ` with
//!
//! * harmonic:       `V = ξ²/2`
//! * bouncer:        `V = ξ` above a rigid wall at `ξ = 0`
//! * Morse:          `V = β(e^{-2ξ} - 2e^{-ξ})`, `β > 1/8`
//! * special radial: `V = β(1/ξ - ξ)²` on `ξ > 0`, `β > 0`
//! * hydrogen 1S:    `V = -1/ξ` on `ξ > 0` (radial density convention)
//!
//! The classical bound-orbit density is `P_Cl = N_c/|η|`; its normalization
//! constant and the quantum ground-state normalizations that the paper only
//! quotes numerically are computed here by adaptive quadrature and cached.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, QuadOpts};
use crate::special::{airy_ai, airy_ai_first_zero, gamma};

const PI: f64 = std::f64::consts::PI;

/// One of the five supported model systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    Harmonic,
    Bouncer,
    Morse,
    SpecialRadial,
    HydrogenS,
}

impl ModelId {
    pub const ALL: [ModelId; 5] = [
        ModelId::Harmonic,
        ModelId::Bouncer,
        ModelId::Morse,
        ModelId::SpecialRadial,
        ModelId::HydrogenS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::Harmonic => "harmonic",
            ModelId::Bouncer => "bouncer",
            ModelId::Morse => "morse",
            ModelId::SpecialRadial => "special-radial",
            ModelId::HydrogenS => "hydrogen-s",
        }
    }

    /// Case-insensitive parse; accepts the canonical names plus a few
    /// obvious separators/aliases.
    pub fn parse(s: &str) -> Result<ModelId> {
        let k: String = s
            .trim()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match k.as_str() {
            "harmonic" | "oscillator" | "harmonicoscillator" => Ok(ModelId::Harmonic),
            "bouncer" | "gravitational" | "quantumbouncer" => Ok(ModelId::Bouncer),
            "morse" => Ok(ModelId::Morse),
            "special" | "specialradial" | "radial" => Ok(ModelId::SpecialRadial),
            "hydrogen" | "hydrogens" | "hydrogen1s" => Ok(ModelId::HydrogenS),
            _ => Err(Error::BadArgument(format!(
                "unknown model '{s}'; valid: harmonic, bouncer, morse, special-radial, hydrogen-s"
            ))),
        }
    }

    fn requires_beta(self) -> bool {
        matches!(self, ModelId::Morse | ModelId::SpecialRadial)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dimensionless shape parameter(s) of a model.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ModelParams {
    /// Depth/width parameter of the Morse and special radial potentials.
    pub beta: Option<f64>,
    /// Classical energy to use instead of the quantum ground-state energy.
    pub energy_override: Option<f64>,
}

impl ModelParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_beta(beta: f64) -> Self {
        ModelParams {
            beta: Some(beta),
            energy_override: None,
        }
    }

    pub fn energy(mut self, e: f64) -> Self {
        self.energy_override = Some(e);
        self
    }
}

/// Classical turning points of a bound orbit, `xi_min < xi_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub xi_min: f64,
    pub xi_max: f64,
}

impl TurningPoints {
    pub fn span(&self) -> f64 {
        self.xi_max - self.xi_min
    }
}

/// Check that `params` is admissible for `model`.
pub fn validate(model: ModelId, params: &ModelParams) -> Result<()> {
    match (model.requires_beta(), params.beta) {
        (true, None) => {
            return Err(Error::ParamDomain {
                model,
                message: "beta is required".into(),
            })
        }
        (false, Some(_)) => {
            return Err(Error::ParamDomain {
                model,
                message: "beta is not a parameter of this model".into(),
            })
        }
        _ => {}
    }
    if model == ModelId::Morse {
        let b = params.beta.unwrap();
        if !(b > 0.125) {
            return Err(Error::ParamDomain {
                model,
                message: format!("beta = {b} but the Morse well binds only for beta > 1/8"),
            });
        }
    }
    if model == ModelId::SpecialRadial {
        let b = params.beta.unwrap();
        if !(b > 0.0) {
            return Err(Error::ParamDomain {
                model,
                message: format!("beta = {b} must be positive"),
            });
        }
    }
    if let Some(e) = params.energy_override {
        check_energy(model, params, e)?;
    }
    Ok(())
}

fn check_energy(model: ModelId, params: &ModelParams, e: f64) -> Result<()> {
    let ok = match model {
        ModelId::Harmonic | ModelId::Bouncer | ModelId::SpecialRadial => e > 0.0,
        ModelId::Morse => {
            let b = params.beta.unwrap_or(f64::NAN);
            e > -b && e < 0.0
        }
        ModelId::HydrogenS => e < 0.0,
    };
    if ok {
        Ok(())
    } else {
        let message = match model {
            ModelId::Harmonic | ModelId::Bouncer | ModelId::SpecialRadial => {
                "bound states need E > 0".into()
            }
            ModelId::Morse => format!("bound states need -beta < E < 0 (beta = {:?})", params.beta),
            ModelId::HydrogenS => "bound states need E < 0".into(),
        };
        Err(Error::EnergyDomain {
            model,
            energy: e,
            message,
        })
    }
}

/// Quantum ground-state dimensionless energy of the model.
pub fn ground_energy(model: ModelId, params: &ModelParams) -> Result<f64> {
    validate(model, params)?;
    Ok(match model {
        ModelId::Harmonic => 0.5,
        ModelId::Bouncer => airy_ai_first_zero(),
        ModelId::Morse => {
            let b = params.beta.unwrap();
            0.5 * (0.5 - (2.0 * b).sqrt())
        }
        ModelId::SpecialRadial => {
            let b = params.beta.unwrap();
            let s = (2.0 * b).sqrt();
            s * (1.0 + (0.25 + 2.0 * b).sqrt() - s)
        }
        ModelId::HydrogenS => -0.5,
    })
}

/// The classical energy a run should use: the override if present, the
/// ground-state energy otherwise.
pub fn run_energy(model: ModelId, params: &ModelParams) -> Result<f64> {
    match params.energy_override {
        Some(e) => {
            validate(model, params)?;
            Ok(e)
        }
        None => ground_energy(model, params),
    }
}

/// Classical turning points at energy `e`.
pub fn turning_points(model: ModelId, params: &ModelParams, e: f64) -> Result<TurningPoints> {
    validate(model, params)?;
    check_energy(model, params, e)?;
    let (xi_min, xi_max) = match model {
        ModelId::Harmonic => {
            let r = (2.0 * e).sqrt();
            (-r, r)
        }
        ModelId::Bouncer => (0.0, e),
        ModelId::Morse => {
            let b = params.beta.unwrap();
            let s = (1.0 + e / b).sqrt();
            (-(1.0 + s).ln(), -(1.0 - s).ln())
        }
        ModelId::SpecialRadial => {
            let b = params.beta.unwrap();
            let p = (1.0 + e / (4.0 * b)).sqrt();
            let q = (e / (4.0 * b)).sqrt();
            (p - q, p + q)
        }
        ModelId::HydrogenS => (0.0, -1.0 / e),
    };
    Ok(TurningPoints { xi_min, xi_max })
}

/// The rigid-wall floor below which the model's space is excluded.
pub fn wall_floor(model: ModelId) -> Option<f64> {
    match model {
        ModelId::Bouncer | ModelId::SpecialRadial | ModelId::HydrogenS => Some(0.0),
        ModelId::Harmonic | ModelId::Morse => None,
    }
}

/// Dimensionless potential energy.
fn potential(model: ModelId, params: &ModelParams, xi: f64) -> f64 {
    match model {
        ModelId::Harmonic => 0.5 * xi * xi,
        ModelId::Bouncer => {
            if xi < 0.0 {
                f64::INFINITY
            } else {
                xi
            }
        }
        ModelId::Morse => {
            let b = params.beta.unwrap();
            let t = (-xi).exp();
            b * (t * t - 2.0 * t)
        }
        ModelId::SpecialRadial => {
            if xi <= 0.0 {
                f64::INFINITY
            } else {
                let b = params.beta.unwrap();
                let d = 1.0 / xi - xi;
                b * d * d
            }
        }
        ModelId::HydrogenS => {
            if xi < 0.0 {
                f64::INFINITY
            } else {
                -1.0 / xi // -inf at the wall: the classical speed diverges there
            }
        }
    }
}

/// `|η| = sqrt(2(ℰ - V))` clamped at zero; no domain checks.
pub(crate) fn momentum_raw(model: ModelId, params: &ModelParams, e: f64, xi: f64) -> f64 {
    (2.0 * (e - potential(model, params, xi))).max(0.0).sqrt()
}

/// |η(ξ)| at energy `e`, for `ξ` inside the classical region.
///
/// Zero exactly at non-wall turning points; at the hydrogen wall the speed
/// diverges and `+inf` is returned.
pub fn momentum_abs(model: ModelId, params: &ModelParams, e: f64, xi: f64) -> Result<f64> {
    let tp = turning_points(model, params, e)?;
    if xi < tp.xi_min || xi > tp.xi_max {
        return Err(Error::PositionDomain {
            xi,
            what: format!(
                "the classical region [{}, {}] of {}",
                tp.xi_min, tp.xi_max, model
            ),
        });
    }
    // closed-form zeros at the analytic turning points, so small float
    // residues of e - V(tp) never leak through
    let eps = 1e-12 * tp.span();
    if ((xi - tp.xi_min).abs() <= eps && !is_wall(model, tp.xi_min))
        || ((xi - tp.xi_max).abs() <= eps && !is_wall(model, tp.xi_max))
    {
        return Ok(0.0);
    }
    Ok(momentum_raw(model, params, e, xi))
}

fn is_wall(model: ModelId, xi: f64) -> bool {
    wall_floor(model).is_some_and(|w| (xi - w).abs() <= 1e-300f64.max(1e-12 * xi.abs()))
}

/// Classical normalization constant `N_c` with `P_Cl = N_c/|η|`.
///
/// Closed forms where the paper gives them; the special radial constant is a
/// cached normalization quadrature.
pub fn classical_norm_const(model: ModelId, params: &ModelParams, e: f64) -> Result<f64> {
    validate(model, params)?;
    check_energy(model, params, e)?;
    Ok(match model {
        ModelId::Harmonic => 1.0 / PI,
        ModelId::Bouncer => 1.0 / (2.0 * e).sqrt(),
        ModelId::Morse => (-2.0 * e).sqrt() / PI,
        ModelId::HydrogenS => (-2.0 * e).powf(1.5) / PI,
        ModelId::SpecialRadial => {
            let key = cache_key(model, Kind::ClassicalNorm, params.beta, e);
            cached(key, || {
                let integ = ClassicalRegionIntegrator::new(model, params, e)?;
                let opts = QuadOpts::default().with_rel_tol(1e-9);
                Ok(1.0 / integ.integrate(|_| 1.0, &opts, &opts))
            })?
        }
    })
}

/// Classical dwell-time density `P_Cl(ξ) = N_c/|η(ξ)|` at energy `e`.
///
/// Defined strictly inside the classical region; at a zero-momentum turning
/// point it diverges and an error is returned. Wall-side boundary points
/// (bouncer, hydrogen) have well-defined limits and are allowed.
pub fn classical_density(model: ModelId, params: &ModelParams, e: f64, xi: f64) -> Result<f64> {
    let tp = turning_points(model, params, e)?;
    if xi < tp.xi_min || xi > tp.xi_max {
        return Err(Error::PositionDomain {
            xi,
            what: format!(
                "the classical region [{}, {}] of {}",
                tp.xi_min, tp.xi_max, model
            ),
        });
    }
    let eta = momentum_abs(model, params, e, xi)?;
    if eta == 0.0 {
        return Err(Error::TurningPointSingularity { xi });
    }
    Ok(classical_norm_const(model, params, e)? / eta)
}

/// Normalization constant `N_q` of the quantum ground-state density,
/// computed by normalization quadrature (1e-9 relative) and cached.
pub fn quantum_norm_const(model: ModelId, params: &ModelParams) -> Result<f64> {
    validate(model, params)?;
    match model {
        ModelId::Harmonic | ModelId::HydrogenS => Ok(1.0), // closed forms carry their own constants
        _ => {
            let key = cache_key(model, Kind::QuantumNorm, params.beta, 0.0);
            cached(key, || {
                let opts = QuadOpts::default().with_rel_tol(1e-9).with_min_depth(6);
                let mass = match model {
                    ModelId::Bouncer => {
                        let emax = airy_ai_first_zero();
                        adaptive_simpson(
                            |x| bouncer_wave(x).powi(2),
                            0.0,
                            emax + 12.0,
                            &opts,
                        )
                    }
                    ModelId::Morse => {
                        let b = params.beta.unwrap();
                        let e0 = 0.5 * (0.5 - (2.0 * b).sqrt());
                        let a = 2.0 * (2.0 * b).sqrt();
                        let s = 2.0 * (-2.0 * e0).sqrt();
                        let peak = (a / s).ln();
                        adaptive_simpson(
                            |x| (-a * (-x).exp() - s * x).exp(),
                            peak - 8.0,
                            peak + 45.0 / s + 8.0,
                            &opts,
                        )
                    }
                    ModelId::SpecialRadial => {
                        let b = params.beta.unwrap();
                        let p = 1.0 + (1.0 + 8.0 * b).sqrt();
                        let mut hi = (45.0 / b).sqrt() + 3.0;
                        for _ in 0..2 {
                            hi = ((45.0 + p * hi.ln().max(0.0)) / b).sqrt() + 3.0;
                        }
                        adaptive_simpson(|x| x.powf(p) * (-b * x * x).exp(), 0.0, hi, &opts)
                    }
                    _ => unreachable!(),
                };
                Ok(1.0 / mass)
            })
        }
    }
}

/// Unnormalized bouncer ground-state wavefunction `Ai(2^{1/3} ξ - a₁)`,
/// which vanishes at the wall and whose normalization quadrature reproduces
/// the quoted `N_q ≈ 2.5624`.
fn bouncer_wave(xi: f64) -> f64 {
    airy_ai(2f64.cbrt() * xi - airy_ai_first_zero())
}

/// Quantum ground-state probability density at `ξ`.
///
/// For hydrogen this is the radial density including the `4ξ²` Jacobian.
pub fn quantum_density(model: ModelId, params: &ModelParams, xi: f64) -> Result<f64> {
    validate(model, params)?;
    if matches!(
        model,
        ModelId::Bouncer | ModelId::SpecialRadial | ModelId::HydrogenS
    ) && xi < 0.0
    {
        return Err(Error::PositionDomain {
            xi,
            what: format!("the physical domain xi >= 0 of {model}"),
        });
    }
    Ok(match model {
        ModelId::Harmonic => (-xi * xi).exp() / PI.sqrt(),
        ModelId::Bouncer => quantum_norm_const(model, params)? * bouncer_wave(xi).powi(2),
        ModelId::Morse => {
            let b = params.beta.unwrap();
            let e0 = 0.5 * (0.5 - (2.0 * b).sqrt());
            let a = 2.0 * (2.0 * b).sqrt();
            let s = 2.0 * (-2.0 * e0).sqrt();
            quantum_norm_const(model, params)? * (-a * (-xi).exp() - s * xi).exp()
        }
        ModelId::SpecialRadial => {
            let b = params.beta.unwrap();
            let p = 1.0 + (1.0 + 8.0 * b).sqrt();
            if xi == 0.0 {
                0.0
            } else {
                quantum_norm_const(model, params)? * xi.powf(p) * (-b * xi * xi).exp()
            }
        }
        ModelId::HydrogenS => 4.0 * xi * xi * (-2.0 * xi).exp(),
    })
}

/// Closed-form normalization of the special radial quantum density,
/// `N_q = 2 β^{1+s} / Γ(1+s)` with `s = sqrt(1/4 + 2β)`. Used as an
/// independent check of the quadrature route.
pub fn special_radial_nq_closed(beta: f64) -> f64 {
    let s = (0.25 + 2.0 * beta).sqrt();
    2.0 * beta.powf(1.0 + s) / gamma(1.0 + s)
}

// ---------------------------------------------------------------------------
// integration over the classical region
// ---------------------------------------------------------------------------

/// Integrates `f(ξ')/|η(ξ')|` over the classical region `(ξ_min, ξ_max)`.
///
/// The interval is split at its midpoint; a half whose endpoint is a
/// zero-momentum turning point is transformed by `ξ' = ξ_max - u²`
/// (resp. `ξ_min + u²`), which turns the integrable `1/|η|` divergence into
/// a bounded integrand. Wall-side endpoints with nonzero speed need no
/// substitution and are detected by `|η| > 1e-6`.
pub struct ClassicalRegionIntegrator {
    model: ModelId,
    params: ModelParams,
    e: f64,
    a: f64,
    b: f64,
    mid: f64,
    sing_left: bool,
    sing_right: bool,
    // limits of eta/sqrt(distance-to-endpoint) at singular endpoints
    c_left: f64,
    c_right: f64,
    delta: f64,
}

impl ClassicalRegionIntegrator {
    pub fn new(model: ModelId, params: &ModelParams, e: f64) -> Result<Self> {
        let tp = turning_points(model, params, e)?;
        let (a, b) = (tp.xi_min, tp.xi_max);
        let mid = 0.5 * (a + b);
        let delta = 1e-8 * (b - a);
        // wall-side endpoints keep a nonzero (possibly infinite) speed
        let sing_left = momentum_raw(model, params, e, a) <= 1e-6;
        let sing_right = momentum_raw(model, params, e, b) <= 1e-6;
        let c_left = if sing_left {
            momentum_raw(model, params, e, a + delta) / delta.sqrt()
        } else {
            0.0
        };
        let c_right = if sing_right {
            momentum_raw(model, params, e, b - delta) / delta.sqrt()
        } else {
            0.0
        };
        Ok(ClassicalRegionIntegrator {
            model,
            params: *params,
            e,
            a,
            b,
            mid,
            sing_left,
            sing_right,
            c_left,
            c_right,
            delta,
        })
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn is_singular(&self) -> (bool, bool) {
        (self.sing_left, self.sing_right)
    }

    fn eta(&self, xi: f64) -> f64 {
        momentum_raw(self.model, &self.params, self.e, xi)
    }

    /// ∫ f(ξ')/|η(ξ')| dξ' over the classical region.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, left: &QuadOpts, right: &QuadOpts) -> f64 {
        let (lo, hi) = self.integrate_parts(f, left, right);
        lo + hi
    }

    /// The two midpoint-split halves of [`Self::integrate`], separately.
    pub fn integrate_parts<F: Fn(f64) -> f64>(
        &self,
        f: F,
        left: &QuadOpts,
        right: &QuadOpts,
    ) -> (f64, f64) {
        let lo = if self.sing_left {
            let umax = (self.mid - self.a).sqrt();
            adaptive_simpson(
                |u| {
                    let xi = self.a + u * u;
                    let ratio = if u * u < self.delta {
                        2.0 / self.c_left
                    } else {
                        2.0 * u / self.eta(xi)
                    };
                    f(xi) * ratio
                },
                0.0,
                umax,
                left,
            )
        } else {
            adaptive_simpson(
                |xi| {
                    let eta = self.eta(xi);
                    if eta == 0.0 || eta.is_infinite() {
                        0.0
                    } else {
                        f(xi) / eta
                    }
                },
                self.a,
                self.mid,
                left,
            )
        };
        let hi = if self.sing_right {
            let umax = (self.b - self.mid).sqrt();
            adaptive_simpson(
                |u| {
                    let xi = self.b - u * u;
                    let ratio = if u * u < self.delta {
                        2.0 / self.c_right
                    } else {
                        2.0 * u / self.eta(xi)
                    };
                    f(xi) * ratio
                },
                0.0,
                umax,
                right,
            )
        } else {
            adaptive_simpson(
                |xi| {
                    let eta = self.eta(xi);
                    if eta == 0.0 || eta.is_infinite() {
                        0.0
                    } else {
                        f(xi) / eta
                    }
                },
                self.mid,
                self.b,
                right,
            )
        };
        (lo, hi)
    }
}

// ---------------------------------------------------------------------------
// constant cache
// ---------------------------------------------------------------------------

#[derive(PartialEq, Eq, Hash, Clone, Copy)]
enum Kind {
    QuantumNorm,
    ClassicalNorm,
}

type CacheKey = (ModelId, Kind, u64, u64);

fn cache_key(model: ModelId, kind: Kind, beta: Option<f64>, e: f64) -> CacheKey {
    (model, kind, beta.unwrap_or(f64::NAN).to_bits(), e.to_bits())
}

fn cached(key: CacheKey, compute: impl FnOnce() -> Result<f64>) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(*v);
    }
    let v = compute()?;
    cache.lock().unwrap().insert(key, v);
    Ok(v)
}
