//! The α-Bernstein basis `p_{n,k}^α` and the modified basis families of the
//! first-, second- and third-order operators.
//!
//! All basis families follow the convention that `p_{m,j}^α = 0` whenever
//! `j < 0` or `j > m`, which is what the shifted sums of the modified bases
//! rely on.

use crate::error::{check_unit, Error, Result};
use crate::field::{horner, Field};

/// Both exponents of `x^a (1-x)^b` must exceed this before a basis term is
/// assembled in log space.
const LOG_SPACE_EXPONENT: i64 = 30;

/// Largest `n` for which binomials are formed by the multiplicative product.
/// `C(1020, 510)` is still well inside the `f64` range.
const PRODUCT_BINOMIAL_MAX_N: u64 = 1020;

/// Degree and shape parameter of the α-Bernstein basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    n: usize,
    alpha: f64,
}

impl BasisParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid(format!("basis degree must be >= 1, got {n}")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Sign classification of a first-order coefficient scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeCase {
    /// `2 a0 + a1 = 1`, `a0 >= 0` and `a0 + a1 >= 0`: the operator is positive.
    Positive,
    /// `2 a0 + a1 = 1` with `a0 < 0` or `a0 + a1 < 0`.
    SignedCase2,
    /// The normalisation `2 a0 + a1 = 1` does not hold.
    Unconstrained,
}

const SCHEME_TOL: f64 = 1e-12;

/// Values `(a0(n), a1(n))` of the first-order coefficient sequences at one
/// degree `n`; `a(x, n) = a1 x + a0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSchemeM1 {
    pub a0: f64,
    pub a1: f64,
    case: SchemeCase,
}

impl CoefficientSchemeM1 {
    pub fn new(a0: f64, a1: f64) -> Result<Self> {
        if !a0.is_finite() || !a1.is_finite() {
            return Err(Error::invalid("scheme coefficients must be finite"));
        }
        let case = if (2.0 * a0 + a1 - 1.0).abs() > SCHEME_TOL {
            SchemeCase::Unconstrained
        } else if a0 >= -SCHEME_TOL && a0 + a1 >= -SCHEME_TOL {
            SchemeCase::Positive
        } else {
            SchemeCase::SignedCase2
        };
        Ok(Self { a0, a1, case })
    }

    /// `a0 = (n-1)/(2n)`, `a1 = 1/n`, the scheme used by the numerical examples.
    pub fn paper_example(n: usize) -> Self {
        let n = n as f64;
        Self::new((n - 1.0) / (2.0 * n), 1.0 / n).expect("finite coefficients")
    }

    /// `a0 = (ρ+1)/ρ`, `a1 = -(ρ+2)/ρ`: reproduces `e0` and `e1` exactly.
    pub fn exact_e1(rho: f64) -> Self {
        Self::new((rho + 1.0) / rho, -(rho + 2.0) / rho).expect("finite coefficients")
    }

    /// `a0 = 1`, `a1 = -1`, which turns `J^{M,1}` back into `Q`.
    pub fn identity() -> Self {
        Self::new(1.0, -1.0).expect("finite coefficients")
    }

    pub fn case(&self) -> SchemeCase {
        self.case
    }

    /// `a(x, n) = a1 x + a0`.
    pub fn a(&self, x: f64) -> f64 {
        self.a1 * x + self.a0
    }
}

/// Natural logarithm of `C(n, k)`; `-inf` when `k < 0` or `k > n`.
pub fn log_binomial(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return f64::NEG_INFINITY;
    }
    let k = (k as u64).min(n - k as u64);
    if k == 0 {
        0.0
    } else if n <= PRODUCT_BINOMIAL_MAX_N {
        product_binomial(n, k).ln()
    } else {
        lgamma_binomial(n, k)
    }
}

/// `C(n, k)` as an `f64`; zero when `k` is out of range.
pub fn binomial(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > n {
        return 0.0;
    }
    let k = (k as u64).min(n - k as u64);
    if n <= PRODUCT_BINOMIAL_MAX_N {
        product_binomial(n, k)
    } else {
        lgamma_binomial(n, k).exp()
    }
}

fn lgamma_binomial(n: u64, k: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// `C(n, k)` for `k <= n/2`: exact integer arithmetic while it fits in a
/// `u128`, then continued in floating point.
fn product_binomial(n: u64, k: u64) -> f64 {
    let mut exact: u128 = 1;
    let mut i = 1;
    while i <= k {
        match exact.checked_mul((n - k + i) as u128) {
            Some(v) => exact = v / i as u128,
            None => break,
        }
        i += 1;
    }
    let mut acc = exact as f64;
    while i <= k {
        acc = acc * (n - k + i) as f64 / i as f64;
        i += 1;
    }
    acc
}

/// `C(m, j) x^a (1-x)^b` with `a, b >= 0`; zero when `j` is out of range.
fn bernstein_term(m: i64, j: i64, a: i64, b: i64, x: f64) -> f64 {
    if j < 0 || j > m {
        return 0.0;
    }
    if a > LOG_SPACE_EXPONENT && b > LOG_SPACE_EXPONENT {
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        let j = j.min(m - j) as u64;
        let log_c = lgamma_binomial(m as u64, j);
        (log_c + a as f64 * x.ln() + b as f64 * (-x).ln_1p()).exp()
    } else {
        binomial(m as u64, j) * x.powi(a as i32) * (1.0 - x).powi(b as i32)
    }
}

/// `p_{n,k}^α(x)` without domain checks. Degree 0 is the constant 1.
pub(crate) fn alpha_basis_at(n: usize, alpha: f64, k: i64, x: f64) -> f64 {
    if k < 0 || k > n as i64 {
        return 0.0;
    }
    match n {
        0 => 1.0,
        1 => {
            if k == 0 {
                1.0 - x
            } else {
                x
            }
        }
        _ => {
            let n = n as i64;
            let beta = 1.0 - alpha;
            let mut v = 0.0;
            if beta != 0.0 {
                v += beta * bernstein_term(n - 2, k, k, n - k - 1, x);
                v += beta * bernstein_term(n - 2, k - 2, k - 1, n - k, x);
            }
            if alpha != 0.0 {
                v += alpha * bernstein_term(n, k, k, n - k, x);
            }
            v
        }
    }
}

/// The α-Bernstein basis polynomial `p_{n,k}^α(x)`.
///
/// For `n >= 2` the bracketed form is distributed into three terms with
/// non-negative powers of `x` and `1-x`, so endpoints need no limits.
pub fn alpha_basis(params: &BasisParams, k: i64, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(alpha_basis_at(params.n, params.alpha, k, x))
}

/// `a(x,n) p_{n-1,k}^α(x) + a(1-x,n) p_{n-1,k-1}^α(x)`.
pub fn modified_basis_m1(params: &BasisParams, scheme: &CoefficientSchemeM1, k: i64, x: f64) -> Result<f64> {
    check_unit(x)?;
    require_degree(params.n, 2, "first-order basis")?;
    Ok(m1_basis_at(params.n, params.alpha, scheme, k, x))
}

pub(crate) fn m1_basis_at(n: usize, alpha: f64, scheme: &CoefficientSchemeM1, k: i64, x: f64) -> f64 {
    scheme.a(x) * alpha_basis_at(n - 1, alpha, k, x)
        + scheme.a(1.0 - x) * alpha_basis_at(n - 1, alpha, k - 1, x)
}

/// Coefficients of the second-order family,
/// `a(x,n) = a2 x^2 + a1 x + a0` and `b(x,n) = b0 x (1-x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderCoefficients<T> {
    pub a2: T,
    pub a1: T,
    pub a0: T,
    pub b0: T,
}

impl<T: Field> SecondOrderCoefficients<T> {
    /// The solved sequences defining `J̄^{M,2}`.
    pub fn solved(n: usize, rho: T) -> Self {
        let n = T::int(n as i64);
        let one = T::one();
        let two = T::int(2);
        let two_rho = two.clone() * rho.clone();
        Self {
            a0: (one.clone() + two.clone() * rho.clone()) / two_rho.clone(),
            a2: n.clone() * (rho.clone() + one.clone()) / two_rho.clone(),
            b0: n.clone() * (rho.clone() + one.clone()) / rho.clone(),
            a1: -((n + two) * (rho + one)) / two_rho,
        }
    }

    /// `(a2, a1, a0, b0) = (1, -2, 1, 2)`, under which the family collapses to `Q`.
    pub fn reducing() -> Self {
        Self {
            a2: T::one(),
            a1: T::int(-2),
            a0: T::one(),
            b0: T::int(2),
        }
    }

    pub fn a(&self, x: &T) -> T {
        horner(&[self.a0.clone(), self.a1.clone(), self.a2.clone()], x)
    }

    pub fn b(&self, x: &T) -> T {
        self.b0.clone() * x.clone() * (T::one() - x.clone())
    }
}

impl SecondOrderCoefficients<f64> {
    pub(crate) fn basis_at(&self, n: usize, alpha: f64, k: i64, x: f64) -> f64 {
        let m = n - 2;
        self.a(&x) * alpha_basis_at(m, alpha, k, x)
            + self.b(&x) * alpha_basis_at(m, alpha, k - 1, x)
            + self.a(&(1.0 - x)) * alpha_basis_at(m, alpha, k - 2, x)
    }
}

/// `p̄_{n,k}^{M,2}(x)` with the solved second-order coefficients.
pub fn modified_basis_m2(params: &BasisParams, rho: f64, k: i64, x: f64) -> Result<f64> {
    modified_basis_m2_generic(params, &SecondOrderCoefficients::solved(params.n, rho), k, x)
}

/// Second-order basis with free coefficients `(a2, a1, a0, b0)`.
pub fn modified_basis_m2_generic(
    params: &BasisParams,
    coeffs: &SecondOrderCoefficients<f64>,
    k: i64,
    x: f64,
) -> Result<f64> {
    check_unit(x)?;
    require_degree(params.n, 3, "second-order basis")?;
    Ok(coeffs.basis_at(params.n, params.alpha, k, x))
}

/// Which transcription of the third-order coefficient sequences to use.
///
/// `AsPrinted` keeps the published values (with the `8ρ2` denominator of
/// `ã4` read as `8ρ²`). Those fail the exactness conditions `J̃(e_i) = e_i`;
/// `Corrected` is the unique solution of those conditions with the published
/// `d̃0`, and differs from the printed values in three places:
///
/// * `ã1`: constant numerator `(29 - 5α)ρ³ + (48 - 3α)ρ²` (printed `+5α`, `+3α`),
/// * `ã2`: constant numerator `(41 - 11α)ρ³ + (79 - 9α)ρ²` (printed `71 - 9α`),
/// * `b̃3`: the `n` term has denominator `3ρ²` (printed `3ρ`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TildeReading {
    AsPrinted,
    Corrected,
}

/// Coefficients of the third-order family: `ā(x) = Σ a[i] x^i`,
/// `b̄(x) = Σ b[i] x^i`, `d̄(x) = d0 x²(1-x)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThirdOrderCoefficients<T> {
    pub a: [T; 5],
    pub b: [T; 5],
    pub d0: T,
}

impl<T: Field> ThirdOrderCoefficients<T> {
    /// The tilde sequences defining `J̃^{M,3}`.
    pub fn tilde(n: usize, rho: T, alpha: T, reading: TildeReading) -> Self {
        let i = T::int;
        let n = i(n as i64);
        let n2 = n.clone() * n.clone();
        let r = rho;
        let r2 = r.clone() * r.clone();
        let r3 = r2.clone() * r.clone();
        let al = alpha;
        let sq = (T::one() + r.clone()) * (T::one() + r.clone());
        let corrected = reading == TildeReading::Corrected;

        let a0 = (i(12) * r3.clone() + i(19) * r2.clone() + i(8) * r.clone() + i(1)) / (i(12) * r3.clone());

        let sign = if corrected { i(-1) } else { i(1) };
        let a1 = -(i(7) * r2.clone() + i(11) * r.clone() + i(4)) / (i(12) * r2.clone()) * n.clone()
            - ((i(29) + sign.clone() * i(5) * al.clone()) * r3.clone()
                + (i(48) + sign * i(3) * al.clone()) * r2.clone()
                + i(30) * r.clone()
                + i(7))
                / (i(6) * r3.clone());

        let c71 = if corrected { i(79) } else { i(71) };
        let a2 = sq.clone() / (i(8) * r2.clone()) * n2.clone()
            + (i(17) * r2.clone() + i(29) * r.clone() + i(12)) / (i(12) * r2.clone()) * n.clone()
            + ((i(41) - i(11) * al.clone()) * r3.clone()
                + (c71 - i(9) * al.clone()) * r2.clone()
                + i(60) * r.clone()
                + i(18))
                / (i(6) * r3.clone());

        let tail3 =
            (i(3) - al.clone()) * r3.clone() + (i(7) - al.clone()) * r2.clone() + i(6) * r.clone() + i(2);
        let a3 = -sq.clone() / (i(4) * r2.clone()) * n2.clone()
            - (i(5) * r2.clone() + i(9) * r.clone() + i(4)) / (i(6) * r2.clone()) * n.clone()
            - tail3.clone() / r3.clone();

        let a4 = sq.clone() / (i(8) * r2.clone()) * n2.clone();

        let b0 = -(i(12) * r2.clone() + i(7) * r.clone() + i(1)) / (i(6) * r3.clone());

        let b1 = (i(3) * r2.clone() + i(5) * r.clone() + i(2)) / (i(3) * r2.clone()) * n.clone()
            + ((i(16) - i(4) * al.clone()) * r3.clone()
                + (i(37) - i(3) * al.clone()) * r2.clone()
                + i(27) * r.clone()
                + i(7))
                / (i(3) * r3.clone());

        let b2 = -sq.clone() / (i(2) * r2.clone()) * n2.clone()
            - (i(8) * r2.clone() + i(14) * r.clone() + i(6)) / (i(3) * r2.clone()) * n.clone()
            - ((i(34) - i(10) * al.clone()) * r3.clone()
                + (i(71) - i(9) * al.clone()) * r2.clone()
                + i(57) * r.clone()
                + i(18))
                / (i(3) * r3.clone());

        let b3_den = if corrected {
            i(3) * r2.clone()
        } else {
            i(3) * r.clone()
        };
        let b3 = sq.clone() / r2.clone() * n2.clone()
            + (i(5) * r2.clone() + i(9) * r.clone() + i(4)) / b3_den * n.clone()
            + i(2) * tail3 / r3;

        let b4 = -sq.clone() / (i(2) * r2.clone()) * n2.clone();
        let d0 = i(3) * sq / (i(4) * r2) * n2;

        Self {
            a: [a0, a1, a2, a3, a4],
            b: [b0, b1, b2, b3, b4],
            d0,
        }
    }

    pub fn a_poly(&self, x: &T) -> T {
        horner(&self.a, x)
    }

    pub fn b_poly(&self, x: &T) -> T {
        horner(&self.b, x)
    }

    pub fn d_poly(&self, x: &T) -> T {
        let u = x.clone() * (T::one() - x.clone());
        self.d0.clone() * u.clone() * u
    }
}

impl ThirdOrderCoefficients<f64> {
    /// Weights of `p_{n-4,k-j}` for `j = 0..5`.
    pub(crate) fn weights(&self, x: f64) -> [f64; 5] {
        let y = 1.0 - x;
        [
            self.a_poly(&x),
            self.b_poly(&x),
            self.d_poly(&x),
            self.b_poly(&y),
            self.a_poly(&y),
        ]
    }

    pub(crate) fn basis_at(&self, n: usize, alpha: f64, k: i64, x: f64) -> f64 {
        let w = self.weights(x);
        (0..5)
            .map(|j| w[j] * alpha_basis_at(n - 4, alpha, k - j as i64, x))
            .sum()
    }
}

/// `p̃_{n,k}^{M,3}(x)` with the (corrected) tilde sequences.
pub fn modified_basis_m3(params: &BasisParams, rho: f64, k: i64, x: f64) -> Result<f64> {
    check_unit(x)?;
    require_degree(params.n, 5, "third-order basis")?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("rho must be positive, got {rho}")));
    }
    let c = ThirdOrderCoefficients::tilde(params.n, rho, params.alpha, TildeReading::Corrected);
    Ok(c.basis_at(params.n, params.alpha, k, x))
}

fn require_degree(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        Err(Error::invalid(format!("{what} needs n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}
