//! Error tables, empirical convergence orders, the modulus of continuity and
//! the quantities behind the asymptotic statements about `J^{M,1}`.

use crate::basis::CoefficientSchemeM1;
use crate::error::{Error, Result};
use crate::function::Function1D;
use crate::kernel::QuadratureConfig;
use crate::operators::{OperatorKind, OperatorParams, PreparedOperator};
use crate::registry::RegistryEntry;
use std::collections::VecDeque;

/// Number of points in the uniform grid used for sup norms.
pub const NORM_GRID: usize = 201;

/// How the first-order coefficients depend on `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeFamily {
    /// `a0 = (n-1)/(2n)`, `a1 = 1/n`; limits `(1/2, 0)`.
    PaperExample,
    /// `a0 = (ρ+1)/ρ`, `a1 = -(ρ+2)/ρ`.
    ExactE1,
    /// `a0 = 1 + 1/n`, `a1 = -1 - 2/n`, so `a0 + a1 < 0`; limits `(1, -1)`.
    Case2,
    Custom {
        a0: f64,
        a1: f64,
    },
}

impl SchemeFamily {
    pub fn at(&self, n: usize, rho: f64) -> Result<CoefficientSchemeM1> {
        let nf = n as f64;
        match *self {
            SchemeFamily::PaperExample => Ok(CoefficientSchemeM1::paper_example(n)),
            SchemeFamily::ExactE1 => Ok(CoefficientSchemeM1::exact_e1(rho)),
            SchemeFamily::Case2 => CoefficientSchemeM1::new(1.0 + 1.0 / nf, -1.0 - 2.0 / nf),
            SchemeFamily::Custom { a0, a1 } => CoefficientSchemeM1::new(a0, a1),
        }
    }

    /// `(lim a0(n), lim a1(n))`.
    pub fn limits(&self, rho: f64) -> (f64, f64) {
        match *self {
            SchemeFamily::PaperExample => (0.5, 0.0),
            SchemeFamily::ExactE1 => ((rho + 1.0) / rho, -(rho + 2.0) / rho),
            SchemeFamily::Case2 => (1.0, -1.0),
            SchemeFamily::Custom { a0, a1 } => (a0, a1),
        }
    }
}

/// An operator whose first-order coefficients may vary with `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorFamily {
    Q,
    M1(SchemeFamily),
    M2Bar,
    M3Tilde,
}

impl OperatorFamily {
    pub fn kind_at(&self, n: usize, rho: f64) -> Result<OperatorKind> {
        Ok(match self {
            OperatorFamily::Q => OperatorKind::Q,
            OperatorFamily::M1(s) => OperatorKind::M1(s.at(n, rho)?),
            OperatorFamily::M2Bar => OperatorKind::M2Bar,
            OperatorFamily::M3Tilde => OperatorKind::M3Tilde,
        })
    }

    /// `Q`, `J^{M,1}` with `scheme`, `J̄^{M,2}`, `J̃^{M,3}`.
    pub fn all(scheme: SchemeFamily) -> [OperatorFamily; 4] {
        [
            OperatorFamily::Q,
            OperatorFamily::M1(scheme),
            OperatorFamily::M2Bar,
            OperatorFamily::M3Tilde,
        ]
    }
}

/// `|f(x) - L(f; x)|` for several operators over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub kinds: Vec<OperatorKind>,
    pub xs: Vec<f64>,
    /// `errors[i][j]` belongs to `xs[i]` and `kinds[j]`.
    pub errors: Vec<Vec<f64>>,
}

impl ErrorTable {
    /// Largest error of each operator over the grid.
    pub fn column_max(&self) -> Vec<f64> {
        (0..self.kinds.len())
            .map(|j| self.errors.iter().map(|row| row[j]).fold(0.0, f64::max))
            .collect()
    }
}

/// Operator values and errors over a grid, one column per operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationSeries {
    pub kinds: Vec<OperatorKind>,
    pub xs: Vec<f64>,
    pub f: Vec<f64>,
    /// `values[i][j]` is operator `j` at `xs[i]`.
    pub values: Vec<Vec<f64>>,
}

impl ApproximationSeries {
    pub fn to_error_table(&self) -> ErrorTable {
        let errors = self
            .values
            .iter()
            .zip(&self.f)
            .map(|(row, fx)| row.iter().map(|v| (fx - v).abs()).collect())
            .collect();
        ErrorTable {
            kinds: self.kinds.clone(),
            xs: self.xs.clone(),
            errors,
        }
    }
}

pub fn approximation_series(
    f: &Function1D,
    params: &OperatorParams,
    kinds: &[OperatorKind],
    xs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ApproximationSeries> {
    let ops = kinds
        .iter()
        .map(|k| PreparedOperator::new(k, params, f, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let row = ops.iter().map(|op| op.at(x)).collect::<Result<Vec<_>>>();
        values.push(row.map_err(|e| e.at_index(i))?);
    }
    Ok(ApproximationSeries {
        kinds: kinds.to_vec(),
        xs: xs.to_vec(),
        f: xs.iter().map(|&x| f.eval(x)).collect(),
        values,
    })
}

pub fn error_table(
    f: &Function1D,
    params: &OperatorParams,
    kinds: &[OperatorKind],
    xs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ErrorTable> {
    approximation_series(f, params, kinds, xs, cfg).map(|s| s.to_error_table())
}

/// Errors along an `n` ladder and the least-squares slope of
/// `ln error` against `ln n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub ns: Vec<usize>,
    pub errors: Vec<f64>,
    /// Whether each point entered the fit (zero errors and errors below the
    /// quadrature noise floor are left out).
    pub used: Vec<bool>,
    pub noise_floor: f64,
    pub fitted_slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
}

/// Fits `ln e = c + s ln n` to the usable points.
pub fn fit_log_log(ns: &[usize], errors: &[f64], used: &[bool]) -> Result<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errors)
        .zip(used)
        .filter(|(_, &u)| u)
        .map(|((&n, &e), _)| ((n as f64).ln(), e.ln()))
        .collect();
    let m = pts.len();
    if m < 3 {
        return Err(Error::DegenerateFit { usable: m });
    }
    let mf = m as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (rss / (mf - 2.0) / sxx).sqrt();
    Ok((slope, stderr, intercept))
}

/// Empirical order of `|f(x) - L_n(f; x)|` along `ns`.
pub fn estimate_order(
    family: &OperatorFamily,
    template: &OperatorParams,
    f: &Function1D,
    x: f64,
    ns: &[usize],
    cfg: &QuadratureConfig,
) -> Result<ConvergenceReport> {
    if ns.is_empty() {
        return Err(Error::invalid("the n ladder is empty"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("the n ladder must be strictly increasing"));
    }
    let fx = f.eval(x);
    let noise_floor = if f.as_polynomial().is_some() {
        100.0 * f64::EPSILON * fx.abs().max(1.0)
    } else {
        100.0 * cfg.abs_tol().max(cfg.rel_tol() * fx.abs())
    };
    let mut errors = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = template.with_n(n)?;
        let kind = family.kind_at(n, params.rho())?;
        let v = PreparedOperator::new(&kind, &params, f, cfg)?.at(x)?;
        errors.push((fx - v).abs());
    }
    let used: Vec<bool> = errors.iter().map(|&e| e > 0.0 && e >= noise_floor).collect();
    let (fitted_slope, slope_stderr, intercept) = fit_log_log(ns, &errors, &used)?;
    Ok(ConvergenceReport {
        ns: ns.to_vec(),
        errors,
        used,
        noise_floor,
        fitted_slope,
        slope_stderr,
        intercept,
    })
}

/// Grid estimate of `ω(f; δ) = sup_{|x-y| <= δ} |f(x) - f(y)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusEstimate {
    pub delta: f64,
    pub omega: f64,
    pub grid_size: usize,
}

/// Largest oscillation of `f` over windows of width `delta` on a uniform
/// grid of `grid_size` points. A lower bound for the true modulus that grows
/// under grid refinement.
pub fn modulus_of_continuity(f: &Function1D, delta: f64, grid_size: usize) -> Result<ModulusEstimate> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1], got {delta}")));
    }
    if grid_size < 64 {
        return Err(Error::invalid(format!(
            "grid_size must be >= 64, got {grid_size}"
        )));
    }
    let h = 1.0 / (grid_size - 1) as f64;
    let values: Vec<f64> = (0..grid_size).map(|i| f.eval(i as f64 * h)).collect();
    let width = ((delta / h) * (1.0 + 1e-12)).floor() as usize;
    Ok(ModulusEstimate {
        delta,
        omega: sliding_oscillation(&values, width),
        grid_size,
    })
}

/// `max_i (max - min)` of `values[i..=i+width]`, using monotone deques.
fn sliding_oscillation(values: &[f64], width: usize) -> f64 {
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut lo: VecDeque<usize> = VecDeque::new();
    let mut best: f64 = 0.0;
    for (j, &v) in values.iter().enumerate() {
        while hi.back().is_some_and(|&i| values[i] <= v) {
            hi.pop_back();
        }
        hi.push_back(j);
        while lo.back().is_some_and(|&i| values[i] >= v) {
            lo.pop_back();
        }
        lo.push_back(j);
        let start = j.saturating_sub(width);
        while hi.front().is_some_and(|&i| i < start) {
            hi.pop_front();
        }
        while lo.front().is_some_and(|&i| i < start) {
            lo.pop_front();
        }
        best = best.max(values[hi[0]] - values[lo[0]]);
    }
    best
}

/// One entry of [`bound_ratio_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRatio {
    pub n: usize,
    pub sup_error: f64,
    pub omega: f64,
    /// `sup_error / ((1 + 3|a0|) ω(f; 1/√n))`; zero when both vanish.
    pub ratio: f64,
    /// Set when `ω` vanishes but the error does not.
    pub flagged: bool,
}

/// Grid size used for `ω(f; 1/√n)` in [`bound_ratio_check`].
const MODULUS_GRID: usize = 1 << 14;

/// `||J^{M,1} f - f|| / ((1 + 3|a0(n)|) ω(f; 1/√n))` for each parameter set.
pub fn bound_ratio_check(
    f: &Function1D,
    scheme: &SchemeFamily,
    params_list: &[OperatorParams],
    cfg: &QuadratureConfig,
) -> Result<Vec<BoundRatio>> {
    let xs: Vec<f64> = (0..NORM_GRID)
        .map(|i| i as f64 / (NORM_GRID - 1) as f64)
        .collect();
    params_list
        .iter()
        .map(|p| {
            let s = scheme.at(p.n(), p.rho())?;
            let op = PreparedOperator::new(&OperatorKind::M1(s), p, f, cfg)?;
            let mut sup_error: f64 = 0.0;
            for (i, &x) in xs.iter().enumerate() {
                let v = op.at(x).map_err(|e| e.at_index(i))?;
                sup_error = sup_error.max((f.eval(x) - v).abs());
            }
            let omega = modulus_of_continuity(f, 1.0 / (p.n() as f64).sqrt(), MODULUS_GRID)?.omega;
            let denom = (1.0 + 3.0 * s.a0.abs()) * omega;
            let (ratio, flagged) = if omega > 0.0 {
                (sup_error / denom, false)
            } else if sup_error <= 1e-11 {
                (0.0, false)
            } else {
                (f64::INFINITY, true)
            };
            Ok(BoundRatio {
                n: p.n(),
                sup_error,
                omega,
                ratio,
                flagged,
            })
        })
        .collect()
}

/// `lim n (J^{M,1}(f; x) - f(x))` for coefficient limits `(l0, l1)`.
pub fn voronovskaya_limit(entry: &RegistryEntry, rho: f64, limits: (f64, f64), x: f64) -> Result<f64> {
    let (Some(d1), Some(d2)) = (entry.deriv1, entry.deriv2) else {
        return Err(Error::invalid(format!("`{}` has no derivative data", entry.name)));
    };
    let (l0, l1) = limits;
    let drift = (1.0 - 2.0 * x) * ((rho + 2.0) * l0 + (rho + 1.0) * l1) / rho;
    let diffusion = x * (1.0 - x) * (1.0 + rho) * (2.0 * l0 + l1) / (2.0 * rho);
    Ok(drift * d1(x) + diffusion * d2(x))
}

/// `|n (J^{M,1}(f; x) - f(x)) - limit|` at `params.n()`.
pub fn voronovskaya_gap(
    entry: &'static RegistryEntry,
    params: &OperatorParams,
    scheme: &SchemeFamily,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let limit = voronovskaya_limit(entry, params.rho(), scheme.limits(params.rho()), x)?;
    let f = Function1D::from_entry(entry);
    let kind = OperatorKind::M1(scheme.at(params.n(), params.rho())?);
    let v = PreparedOperator::new(&kind, params, &f, cfg)?.at(x)?;
    let scaled = params.n() as f64 * (v - f.eval(x));
    Ok((scaled - limit).abs())
}
