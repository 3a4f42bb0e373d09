//! Adaptive Simpson quadrature with a forced minimum subdivision depth.
//!
//! The forced depth guards against narrow integrands (kernel supports much
//! smaller than the interval) being missed by the first error estimate; the
//! caller picks it from the smallest feature width it expects.

#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    /// Relative tolerance on the whole integral.
    pub rel_tol: f64,
    /// Scale floor used when the integral itself is near zero.
    pub abs_floor: f64,
    /// The interval is first split into 2^min_depth uniform panels.
    pub min_depth: u32,
    /// Additional refinement levels allowed per panel.
    pub max_depth: u32,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            rel_tol: 1e-8,
            abs_floor: 1e-9,
            min_depth: 5,
            max_depth: 40,
        }
    }
}

impl QuadOpts {
    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn with_min_depth(mut self, depth: u32) -> Self {
        self.min_depth = depth.min(14);
        self
    }
}

/// Integrate `f` over `[a, b]`.
///
/// Uniform composite Simpson on 2^min_depth panels first, then adaptive
/// refinement of each panel against an equal share of the global tolerance.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOpts) -> f64 {
    if a == b {
        return 0.0;
    }
    let panels = 1usize << opts.min_depth;
    let h = (b - a) / panels as f64;
    // shared panel endpoints + midpoints
    let mut nodes = Vec::with_capacity(2 * panels + 1);
    for i in 0..=(2 * panels) {
        let t = i as f64 / (2 * panels) as f64;
        nodes.push(f(a + t * (b - a)));
    }
    let mut coarse = Vec::with_capacity(panels);
    let mut total = 0.0;
    for p in 0..panels {
        let s = h / 6.0 * (nodes[2 * p] + 4.0 * nodes[2 * p + 1] + nodes[2 * p + 2]);
        coarse.push(s);
        total += s;
    }
    let eps = opts.rel_tol * total.abs().max(opts.abs_floor) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let pa = a + p as f64 * h;
        let pb = pa + h;
        sum += refine(
            &mut f,
            pa,
            0.5 * (pa + pb),
            pb,
            nodes[2 * p],
            nodes[2 * p + 1],
            nodes[2 * p + 2],
            coarse[p],
            eps,
            opts.max_depth,
        );
    }
    sum
}

#[allow(clippy::too_many_arguments)]
fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = sl + sr - whole;
    // scale of the panel in absolute values: once delta sits at the
    // floating-point noise of this scale, refining further cannot help
    let sabs = (m - a) / 6.0 * (fa.abs() + 4.0 * flm.abs() + fm.abs())
        + (b - m) / 6.0 * (fm.abs() + 4.0 * frm.abs() + fb.abs());
    if depth == 0
        || delta.abs() <= 15.0 * eps
        || delta.abs() <= 30.0 * f64::EPSILON * sabs
        || !(a < lm && m < rm && rm < b)
    {
        return sl + sr + delta / 15.0;
    }
    refine(f, a, lm, m, fa, flm, fm, sl, eps * 0.5, depth - 1)
        + refine(f, m, rm, b, fm, frm, fb, sr, eps * 0.5, depth - 1)
}

/// Composite trapezoid of uniformly sampled values with spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(|x| 3.0 * x * x, 0.0, 2.0, &QuadOpts::default());
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = adaptive_simpson(|x| (10.0 * x).sin(), 0.0, PI, &QuadOpts::default());
        let exact = (1.0 - (10.0 * PI).cos()) / 10.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn narrow_bump_is_not_missed() {
        // width-0.004 bump inside [0, 1]: needs the forced depth
        let opts = QuadOpts::default().with_min_depth(9);
        let c = 0.3137;
        let w = 0.002;
        let v = adaptive_simpson(
            |x| (-((x - c) / w).powi(2) / 2.0).exp(),
            0.0,
            1.0,
            &opts,
        );
        let exact = w * (2.0 * PI).sqrt();
        assert!((v - exact).abs() / exact < 1e-7, "{v} vs {exact}");
    }

    #[test]
    fn endpoint_substitution_removes_sqrt_singularity() {
        // integral of 1/(pi sqrt(1-x^2)) over (-1, 1) = 1 via x = 1 - u^2
        // halves; 1 - x^2 = u^2 (2 - u^2) written cancellation-free
        let one_sided = |u: f64| 2.0 / (PI * (2.0 - u * u).sqrt());
        let half = adaptive_simpson(one_sided, 0.0, 1.0, &QuadOpts::default());
        assert!((2.0 * half - 1.0).abs() < 1e-8, "{}", 2.0 * half);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let vals: Vec<f64> = (0..11).map(|i| 2.0 * i as f64).collect();
        assert!((trapezoid(&vals, 0.5) - 50.0).abs() < 1e-12);
    }
}
