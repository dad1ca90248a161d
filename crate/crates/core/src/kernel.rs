//! The Pălțănea Beta kernel
//! `μ_{n,k}^ρ(t) = t^{kρ} (1-t)^{(n-k)ρ} / B(kρ+1, (n-k)ρ+1)`.

use crate::error::{check_unit, Error, Result};
use crate::field::Field;
use crate::function::Function1D;
use crate::quadrature;

/// Index and exponent of one kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    n: usize,
    k: usize,
    rho: f64,
}

impl KernelParams {
    pub fn new(n: usize, k: usize, rho: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid(format!("kernel degree must be >= 1, got {n}")));
        }
        if k > n {
            return Err(Error::invalid(format!("kernel index {k} exceeds degree {n}")));
        }
        check_rho(rho)?;
        Ok(Self { n, k, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    fn exponents(&self) -> (f64, f64) {
        (self.k as f64 * self.rho, (self.n - self.k) as f64 * self.rho)
    }

    /// Location of the maximum of the density.
    pub fn mode(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "rho must be positive and finite, got {rho}"
        )))
    }
}

/// Tolerances of the adaptive quadrature used for non-polynomial integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
}

impl QuadratureConfig {
    pub const MIN_REL_TOL: f64 = 1e-14;
    pub const MIN_ABS_TOL: f64 = 1e-15;
    pub const MAX_SUBDIVISIONS: usize = 1 << 20;

    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol >= Self::MIN_REL_TOL && rel_tol.is_finite()) {
            return Err(Error::invalid(format!("rel_tol must be >= 1e-14, got {rel_tol}")));
        }
        if !(abs_tol >= Self::MIN_ABS_TOL && abs_tol.is_finite()) {
            return Err(Error::invalid(format!("abs_tol must be >= 1e-15, got {abs_tol}")));
        }
        if max_subdivisions == 0 || max_subdivisions > Self::MAX_SUBDIVISIONS {
            return Err(Error::invalid(format!(
                "max_subdivisions must lie in 1..=2^20, got {max_subdivisions}"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_subdivisions(&self) -> usize {
        self.max_subdivisions
    }

    /// Same limits with both tolerances scaled by `factor` (clamped at the
    /// minimums).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rel_tol: (self.rel_tol * factor).max(Self::MIN_REL_TOL),
            abs_tol: (self.abs_tol * factor).max(Self::MIN_ABS_TOL),
            max_subdivisions: self.max_subdivisions,
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 1000,
        }
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// `a ln t + b ln(1-t)` with `0 · ln 0 = 0`.
fn log_shape(a: f64, b: f64, t: f64) -> f64 {
    let left = if a == 0.0 { 0.0 } else { a * t.ln() };
    let right = if b == 0.0 { 0.0 } else { b * (-t).ln_1p() };
    left + right
}

/// `μ_{n,k}^ρ(t)`, including the endpoint limits.
pub fn kernel_density(p: &KernelParams, t: f64) -> Result<f64> {
    check_unit(t)?;
    let (a, b) = p.exponents();
    Ok((log_shape(a, b, t) - ln_beta(a + 1.0, b + 1.0)).exp())
}

/// `∫ t^m μ_{n,k}^ρ(t) dt = Π_{j<m} (kρ+1+j) / (nρ+2+j)`.
pub fn kernel_raw_moment(p: &KernelParams, m: u32) -> f64 {
    raw_moment(p.n, p.k, p.rho, m)
}

pub(crate) fn raw_moment<T: Field>(n: usize, k: usize, rho: T, m: u32) -> T {
    let kr = T::int(k as i64) * rho.clone();
    let nr = T::int(n as i64) * rho;
    let mut acc = T::one();
    for j in 0..m as i64 {
        acc = acc * (kr.clone() + T::int(1 + j)) / (nr.clone() + T::int(2 + j));
    }
    acc
}

/// `∫₀¹ μ_{n,k}^ρ(t) f(t) dt`.
///
/// Polynomials in coefficient form use the exact raw moments. Everything
/// else goes through adaptive Gauss-Kronrod quadrature with break points at
/// the kernel mode, around its bulk and at the function's own break points.
/// The unnormalised kernel is integrated alongside `f` and used as the
/// normaliser, so the result carries no log-gamma rounding.
pub fn integrate_against_kernel(p: &KernelParams, f: &Function1D, cfg: &QuadratureConfig) -> Result<f64> {
    if let Some(poly) = f.as_polynomial() {
        return Ok(poly_against_kernel(p, poly.coeffs()));
    }
    let (a, b) = p.exponents();
    let mode = p.mode();
    let peak = log_shape(a, b, mode);
    let shape = |t: f64| {
        if t <= 0.0 {
            if a == 0.0 {
                (-peak).exp()
            } else {
                0.0
            }
        } else if t >= 1.0 {
            if b == 0.0 {
                (-peak).exp()
            } else {
                0.0
            }
        } else {
            (log_shape(a, b, t) - peak).exp()
        }
    };

    let breaks = kernel_breaks(p, f.breakpoints());
    // Rough size of the unnormalised integral, only used to scale abs_tol.
    let scale = (ln_beta(a + 1.0, b + 1.0) - peak).exp();
    let abs_tol = cfg.abs_tol * scale;

    let norm = quadrature::integrate(shape, &breaks, cfg.rel_tol, abs_tol, cfg.max_subdivisions)
        .map_err(|e| rescale(e, scale))?;
    let weighted = quadrature::integrate(
        |t| shape(t) * f.eval(t),
        &breaks,
        cfg.rel_tol,
        abs_tol,
        cfg.max_subdivisions,
    )
    .map_err(|e| rescale(e, norm.value))?;
    Ok(weighted.value / norm.value)
}

fn rescale(e: Error, norm: f64) -> Error {
    match e {
        Error::NonConvergence {
            estimate,
            error_bound,
        } => Error::NonConvergence {
            estimate: estimate / norm,
            error_bound: error_bound / norm,
        },
        other => other,
    }
}

fn poly_against_kernel(p: &KernelParams, coeffs: &[f64]) -> f64 {
    let (kr, nr) = (p.k as f64 * p.rho, p.n as f64 * p.rho);
    let mut moment = 1.0;
    let mut acc = 0.0;
    for (m, c) in coeffs.iter().enumerate() {
        if m > 0 {
            let j = (m - 1) as f64;
            moment *= (kr + 1.0 + j) / (nr + 2.0 + j);
        }
        acc += c * moment;
    }
    acc
}

fn kernel_breaks(p: &KernelParams, extra: &[f64]) -> Vec<f64> {
    let mode = p.mode();
    let nr = p.n as f64 * p.rho;
    let spread = ((mode * (1.0 - mode) + 1.0 / nr) / (nr + 3.0)).sqrt();
    let mut breaks = vec![0.0, 1.0, mode];
    for s in [3.0, 8.0] {
        breaks.push(mode - s * spread);
        breaks.push(mode + s * spread);
    }
    breaks.extend_from_slice(extra);
    breaks.retain(|t| (0.0..=1.0).contains(t));
    breaks
}

/// `∫ μ_{n,k}^ρ f` for every `k = 0..=n`.
pub(crate) fn kernel_integrals(
    n: usize,
    rho: f64,
    f: &Function1D,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    (0..=n)
        .map(|k| integrate_against_kernel(&KernelParams { n, k, rho }, f, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(n: usize, k: usize, rho: f64) -> KernelParams {
        KernelParams::new(n, k, rho).unwrap()
    }

    fn quad_only(f: Function1D) -> Function1D {
        f.without_fast_path()
    }

    #[test]
    fn density_small_cases() {
        assert!((kernel_density(&kp(2, 1, 1.0), 0.5).unwrap() - 1.5).abs() < 1e-14);
        assert!((kernel_density(&kp(1, 0, 1.0), 0.0).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(kernel_density(&kp(3, 1, 2.0), 0.0).unwrap(), 0.0);
        assert_eq!(kernel_density(&kp(3, 1, 2.0), 1.0).unwrap(), 0.0);
        assert!(kernel_density(&kp(3, 1, 2.0), 1.5).is_err());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(KernelParams::new(3, 4, 1.0).is_err());
        assert!(KernelParams::new(3, 1, 0.0).is_err());
        assert!(KernelParams::new(0, 0, 1.0).is_err());
        assert!(QuadratureConfig::new(1e-15, 1e-12, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-16, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-12, (1 << 20) + 1).is_err());
    }

    #[test]
    fn raw_moments() {
        assert_eq!(kernel_raw_moment(&kp(7, 2, 3.0), 0), 1.0);
        assert_eq!(kernel_raw_moment(&kp(2, 1, 1.0), 1), 0.5);
        let want = (16.0 / 52.0) * (17.0 / 53.0);
        assert!((kernel_raw_moment(&kp(10, 3, 5.0), 2) - want).abs() < 1e-16);
    }

    #[test]
    fn normalization() {
        let cfg = QuadratureConfig::default();
        let one = quad_only(Function1D::constant(1.0));
        for &rho in &[0.5, 1.0, 4.0, 5.0] {
            for n in [1, 2, 7, 20, 40] {
                for k in 0..=n {
                    let v = integrate_against_kernel(&kp(n, k, rho), &one, &cfg).unwrap();
                    assert!((v - 1.0).abs() < 1e-11, "n={n} k={k} rho={rho}: {v}");
                }
            }
        }
        // The density itself integrates to one as well.
        let p = kp(10, 3, 5.0);
        let q = quadrature::integrate(
            |t| kernel_density(&p, t).unwrap(),
            &[0.0, 0.3, 1.0],
            1e-12,
            1e-14,
            200,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn quadrature_matches_raw_moments() {
        // The small high moments need an absolute tolerance far below the
        // default for a relative match.
        let cfg = QuadratureConfig::new(1e-12, 1e-15, 1000).unwrap();
        for &(n, k, rho) in &[(6, 2, 2.0), (10, 3, 5.0), (30, 29, 0.5), (40, 0, 4.0)] {
            let p = kp(n, k, rho);
            for m in 0..=6 {
                let v = integrate_against_kernel(&p, &quad_only(Function1D::monomial(m)), &cfg).unwrap();
                let exact = kernel_raw_moment(&p, m as u32);
                assert!(
                    ((v - exact) / exact).abs() < 1e-10,
                    "n={n} k={k} m={m} {v} {exact}"
                );
            }
        }
        let fast = integrate_against_kernel(&kp(10, 3, 5.0), &Function1D::monomial(1), &cfg).unwrap();
        assert_eq!(fast, 16.0 / 52.0);
    }

    #[test]
    fn symmetry_and_mean_order() {
        for &t in &[0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let l = kernel_density(&kp(9, 2, 1.5), t).unwrap();
            let r = kernel_density(&kp(9, 7, 1.5), 1.0 - t).unwrap();
            assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0));
        }
        let means: Vec<f64> = (0..=12).map(|k| kernel_raw_moment(&kp(12, k, 4.0), 1)).collect();
        assert!(means.iter().all(|m| *m > 0.0 && *m < 1.0));
        assert!(means.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig::new(1e-14, 1e-15, 1).unwrap();
        let f = Function1D::custom("wiggle", |t: f64| (60.0 * t).sin());
        let err = integrate_against_kernel(&kp(5, 2, 1.0), &f, &cfg).unwrap_err();
        assert!(err.is_non_convergence());
    }
}
