//! Special functions implemented in-repo: error function, gamma, Airy Ai.
//!
//! Accuracy targets are set by the consumers: the Gaussian kernel unit-mass
//! contract needs `erf` to ~1e-12 absolute, normalization constants need the
//! rest to ~1e-9 relative. All routines stay well inside those budgets.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Error function.
///
/// Maclaurin series for |x| <= 3, Lentz continued fraction for the
/// complementary function beyond. Both branches are accurate to ~1e-15.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 3.0 {
        // positive-term series: erf(x) = (2x e^{-x^2}/sqrt(pi)) sum (2x^2)^n/(2n+1)!!,
        // no cancellation anywhere on the branch
        let x2 = 2.0 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut n = 0.0;
        loop {
            term *= x2 / (2.0 * n + 3.0);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            n += 1.0;
        }
        2.0 * x * (-x * x).exp() / PI.sqrt() * sum
    } else {
        1.0 - erfc_cf(x)
    }
}

/// Complementary error function for x >= 3 via the Laplace continued
/// fraction, evaluated with the modified Lentz algorithm.
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f: f64 = x;
    let mut c: f64 = f;
    let mut d: f64 = 0.0;
    for k in 1..200 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

// Lanczos approximation, g = 7, n = 9 (Godfrey coefficients).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma function via the Lanczos approximation with reflection for x < 0.5.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut s = LANCZOS[0];
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            s += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * s
    }
}

// Ai(0) = 3^(-2/3)/Gamma(2/3), -Ai'(0) = 3^(-1/3)/Gamma(1/3)
const AI0: f64 = 0.355028053887817239;
const AIP0: f64 = 0.258819403792806799;

/// Airy function Ai.
///
/// Maclaurin series for x <= 5 (also used for negative arguments, where the
/// partial sums stay moderate down to x ~ -10), asymptotic expansion beyond.
pub fn airy_ai(x: f64) -> f64 {
    if x <= 5.0 {
        airy_series(x)
    } else {
        airy_asymptotic(x)
    }
}

fn airy_series(x: f64) -> f64 {
    // Ai = AI0 * F(x) - AIP0 * G(x),
    // F = sum x^(3k)/c_k with f_{k+1} = f_k x^3/((3k+2)(3k+3)),
    // G = sum with g_0 = x, g_{k+1} = g_k x^3/((3k+3)(3k+4)).
    let x3 = x * x * x;
    let mut f = 1.0;
    let mut g = x;
    let mut sf = f;
    let mut sg = g;
    for k in 0..120 {
        let kf = k as f64;
        f *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        g *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        sf += f;
        sg += g;
        if f.abs() < 1e-17 * sf.abs().max(1.0) && g.abs() < 1e-17 * sg.abs().max(1.0) {
            break;
        }
    }
    AI0 * sf - AIP0 * sg
}

fn airy_asymptotic(x: f64) -> f64 {
    // Ai(x) ~ e^{-z}/(2 sqrt(pi) x^{1/4}) * sum (-1)^k u_k z^-k,
    // z = (2/3) x^{3/2}, u_0 = 1, u_{k+1} = u_k (6k+1)(6k+5)/(72(k+1)).
    let z = 2.0 / 3.0 * x.powf(1.5);
    let mut u = 1.0;
    let mut sum = 1.0;
    let mut sign = -1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        let kf = k as f64;
        u *= (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0));
        let term = u / z.powi(k as i32 + 1);
        if term.abs() > prev {
            break; // asymptotic series started diverging
        }
        prev = term.abs();
        sum += sign * term;
        sign = -sign;
        if term.abs() < 1e-17 {
            break;
        }
    }
    (-z).exp() / (2.0 * PI.sqrt() * x.powf(0.25)) * sum
}

/// First zero of Ai, negated (a positive number near 2.338).
///
/// Located by bisection on [-3, -2] to 1e-10 and cached.
pub fn airy_ai_first_zero() -> f64 {
    static ZERO: OnceLock<f64> = OnceLock::new();
    *ZERO.get_or_init(|| {
        let mut lo = -3.0;
        let mut hi = -2.0;
        // Ai(-3) < 0 < Ai(-2)
        debug_assert!(airy_ai(lo) < 0.0 && airy_ai(hi) > 0.0);
        while hi - lo > 1e-12 {
            let m = 0.5 * (lo + hi);
            if airy_ai(m) > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        -0.5 * (lo + hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn erf_reference_values() {
        close(erf(0.0), 0.0, 0.0);
        close(erf(0.1), 0.112462916018284892, 1e-15);
        close(erf(0.3), 0.328626759459127428, 1e-15);
        close(erf(0.5), 0.520499877813046538, 1e-15);
        close(erf(1.0), 0.842700792949714869, 1e-15);
        close(erf(1.3), 0.934007944940652437, 1e-15);
        close(erf(2.0), 0.995322265018952734, 1e-15);
        close(erf(2.5), 0.999593047982555041, 1e-15);
        close(erf(3.0), 0.999977909503001415, 1e-15);
        close(erf(3.5), 0.999999256901627659, 1e-15);
        close(erf(4.0), 0.999999984582742100, 1e-15);
        close(erf(6.0), 0.999999999999999978, 1e-15);
        close(erf(-1.3), -erf(1.3), 0.0);
    }

    #[test]
    fn gamma_reference_values() {
        close(gamma(0.5), 1.772453850905516027, 1e-13);
        close(gamma(1.0), 1.0, 1e-13);
        close(gamma(5.0), 24.0, 1e-11);
        close(gamma(0.2), 4.590843711998803053, 2e-13);
        close(gamma(1.4142135623730951), 0.886581428719259123, 1e-13);
        close(gamma(3.0615528128088303), 2.118459947905893889, 1e-12);
        close(gamma(7.7), 2769.830362327313660, 2e-9);
    }

    #[test]
    fn airy_reference_values() {
        close(airy_ai(0.0), 0.355028053887817239, 1e-15);
        close(airy_ai(1.0), 0.135292416312881416, 1e-14);
        close(airy_ai(-1.0), 0.535560883292352119, 1e-14);
        close(airy_ai(-2.5), -0.112325067692966089, 1e-13);
        close(airy_ai(2.5), 0.015725923380470490, 1e-14);
        close(airy_ai(-4.9), 0.374536354705838799, 1e-12);
        close(airy_ai(4.9), 1.359921170150675e-4, 1e-13);
        // asymptotic branch
        close(airy_ai(5.1), 8.613242706478844e-5, 3e-11);
        close(airy_ai(7.0), 7.492128863997167e-7, 1e-14);
        close(airy_ai(10.0), 1.104753255289869e-10, 1e-18);
        close(airy_ai(20.0), 1.691672868670540e-27, 1e-33);
        close(airy_ai(35.0), 1.298199973121843e-61, 1e-67);
    }

    #[test]
    fn airy_series_asymptotic_seam() {
        // the two branches must agree where they meet
        let s = airy_series(5.0);
        let a = airy_asymptotic(5.0);
        assert!((s - a).abs() / s.abs() < 1e-6);
    }

    #[test]
    fn airy_first_zero_bisection() {
        let z = airy_ai_first_zero();
        close(z, 2.338107410459767, 1e-9);
        assert!(airy_ai(-z).abs() < 1e-10);
    }
}
