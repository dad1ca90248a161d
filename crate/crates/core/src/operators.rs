//! The operators `Q`, `J^{M,1}`, `J̄^{M,2}` and `J̃^{M,3}` applied to functions.
//!
//! Every operator is a finite sum of basis values times the kernel integrals
//! `I_k = ∫ μ_{n,k}^ρ f`. The integrals do not depend on `x`, so they are
//! computed once per `(n, ρ, f)` and shared by all basis terms and all
//! evaluation points (see [`PreparedOperator`]).

use crate::basis::{
    alpha_basis_at, CoefficientSchemeM1, SecondOrderCoefficients, ThirdOrderCoefficients, TildeReading,
};
use crate::error::{check_unit, Error, Result};
use crate::function::Function1D;
use crate::kernel::{check_rho, kernel_integrals, QuadratureConfig};

/// `(n, α, ρ)` shared by all four operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    n: usize,
    alpha: f64,
    rho: f64,
}

impl OperatorParams {
    pub fn new(n: usize, alpha: f64, rho: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("n must be >= 2, got {n}")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        check_rho(rho)?;
        Ok(Self { n, alpha, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.alpha, self.rho)
    }
}

/// Which operator to apply.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Q,
    M1(CoefficientSchemeM1),
    M2Bar,
    /// Second-order family with free coefficients.
    M2Generic(SecondOrderCoefficients<f64>),
    /// Third-order operator with the tilde sequences.
    M3Tilde,
    /// Third-order family with the sequences exactly as published; kept for
    /// comparison only, it does not reproduce quadratics.
    M3AsPrinted,
}

impl OperatorKind {
    pub fn min_degree(&self) -> usize {
        match self {
            OperatorKind::Q | OperatorKind::M1(_) => 2,
            OperatorKind::M2Bar | OperatorKind::M2Generic(_) => 3,
            OperatorKind::M3Tilde | OperatorKind::M3AsPrinted => 5,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::Q => "Q",
            OperatorKind::M1(_) => "M1",
            OperatorKind::M2Bar => "M2",
            OperatorKind::M2Generic(_) => "M2generic",
            OperatorKind::M3Tilde => "M3",
            OperatorKind::M3AsPrinted => "M3printed",
        }
    }

    fn check(&self, params: &OperatorParams) -> Result<()> {
        let min = self.min_degree();
        if params.n < min {
            return Err(Error::invalid(format!(
                "{} needs n >= {min}, got {}",
                self.label(),
                params.n
            )));
        }
        Ok(())
    }
}

/// An operator whose kernel integrals have been computed for one function,
/// ready to be evaluated at any number of points.
#[derive(Debug, Clone)]
pub struct PreparedOperator {
    kind: OperatorKind,
    params: OperatorParams,
    integrals: Vec<f64>,
    third: Option<ThirdOrderCoefficients<f64>>,
    second: Option<SecondOrderCoefficients<f64>>,
}

impl PreparedOperator {
    pub fn new(
        kind: &OperatorKind,
        params: &OperatorParams,
        f: &Function1D,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        kind.check(params)?;
        let integrals = kernel_integrals(params.n, params.rho, f, cfg)?;
        Ok(Self::from_integrals(kind, params, integrals))
    }

    fn from_integrals(kind: &OperatorKind, params: &OperatorParams, integrals: Vec<f64>) -> Self {
        let (n, rho, alpha) = (params.n, params.rho, params.alpha);
        let second = match kind {
            OperatorKind::M2Bar => Some(SecondOrderCoefficients::solved(n, rho)),
            OperatorKind::M2Generic(c) => Some(c.clone()),
            _ => None,
        };
        let third = match kind {
            OperatorKind::M3Tilde => Some(ThirdOrderCoefficients::tilde(
                n,
                rho,
                alpha,
                TildeReading::Corrected,
            )),
            OperatorKind::M3AsPrinted => Some(ThirdOrderCoefficients::tilde(
                n,
                rho,
                alpha,
                TildeReading::AsPrinted,
            )),
            _ => None,
        };
        Self {
            kind: kind.clone(),
            params: *params,
            integrals,
            second,
            third,
        }
    }

    pub fn kernel_integrals(&self) -> &[f64] {
        &self.integrals
    }

    pub fn at(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        let n = self.params.n;
        let alpha = self.params.alpha;
        let ints = &self.integrals;
        let y = 1.0 - x;
        let basis = |m: usize, j: usize| alpha_basis_at(m, alpha, j as i64, x);
        let value = match &self.kind {
            OperatorKind::Q => (0..=n).map(|k| basis(n, k) * ints[k]).sum(),
            OperatorKind::M1(s) => {
                let (ax, ay) = (s.a(x), s.a(y));
                (0..n)
                    .map(|k| basis(n - 1, k) * (ax * ints[k] + ay * ints[k + 1]))
                    .sum()
            }
            OperatorKind::M2Bar | OperatorKind::M2Generic(_) => {
                let c = self.second.as_ref().expect("second-order coefficients");
                let (ax, bx, ay) = (c.a(&x), c.b(&x), c.a(&y));
                (0..=n - 2)
                    .map(|j| basis(n - 2, j) * (ax * ints[j] + bx * ints[j + 1] + ay * ints[j + 2]))
                    .sum()
            }
            OperatorKind::M3Tilde | OperatorKind::M3AsPrinted => {
                let w = self.third.as_ref().expect("third-order coefficients").weights(x);
                (0..=n - 4)
                    .map(|j| {
                        let inner: f64 = (0..5).map(|i| w[i] * ints[j + i]).sum();
                        basis(n - 4, j) * inner
                    })
                    .sum()
            }
        };
        Ok(value)
    }
}

/// The operator `kind` applied to `f` at `x`.
pub fn apply(
    kind: &OperatorKind,
    params: &OperatorParams,
    f: &Function1D,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_unit(x)?;
    PreparedOperator::new(kind, params, f, cfg)?.at(x)
}

/// [`apply`] at every point of `xs`. Errors name the offending index; a
/// quadrature failure is attributed to the first point.
pub fn apply_grid(
    kind: &OperatorKind,
    params: &OperatorParams,
    f: &Function1D,
    xs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    if xs.is_empty() {
        kind.check(params)?;
        return Ok(Vec::new());
    }
    for (i, &x) in xs.iter().enumerate() {
        check_unit(x).map_err(|e| e.at_index(i))?;
    }
    let op = PreparedOperator::new(kind, params, f, cfg).map_err(|e| match e {
        Error::InvalidParameter(_) => e,
        other => other.at_index(0),
    })?;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| op.at(x).map_err(|e| e.at_index(i)))
        .collect()
}

/// Largest gaps between `Q` and the first- and second-order families at
/// their reducing coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionReport {
    /// `max |J^{M,1}_{(1,-1)} f - Q f|`.
    pub m1_gap: f64,
    /// `max |J^{M,2}_{(1,-2,1,2)} f - Q f|`; `None` when `n < 3`.
    pub m2_gap: Option<f64>,
}

/// Compares `Q` with `J^{M,1}` at `a0 = 1, a1 = -1` and with the generic
/// second-order family at `(a2, a1, a0, b0) = (1, -2, 1, 2)` over `xs`.
///
/// The identities rest on `p_{n,k} = (1-x) p_{n-1,k} + x p_{n-1,k-1}`, which
/// the α-Bernstein basis satisfies only when the lower degree is at least 2.
/// For `α < 1` the first gap is therefore nonzero at `n = 2` and the second
/// at `n <= 3`.
pub fn reduction_check(
    params: &OperatorParams,
    f: &Function1D,
    xs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ReductionReport> {
    for (i, &x) in xs.iter().enumerate() {
        check_unit(x).map_err(|e| e.at_index(i))?;
    }
    let ints = kernel_integrals(params.n, params.rho, f, cfg)?;
    let q = PreparedOperator::from_integrals(&OperatorKind::Q, params, ints.clone());
    let m1 = PreparedOperator::from_integrals(
        &OperatorKind::M1(CoefficientSchemeM1::identity()),
        params,
        ints.clone(),
    );
    let m2 = (params.n >= 3).then(|| {
        PreparedOperator::from_integrals(
            &OperatorKind::M2Generic(SecondOrderCoefficients::reducing()),
            params,
            ints,
        )
    });
    let mut m1_gap: f64 = 0.0;
    let mut m2_gap: Option<f64> = m2.as_ref().map(|_| 0.0);
    for &x in xs {
        let qv = q.at(x)?;
        m1_gap = m1_gap.max((m1.at(x)? - qv).abs());
        if let (Some(op), Some(gap)) = (&m2, m2_gap.as_mut()) {
            *gap = gap.max((op.at(x)? - qv).abs());
        }
    }
    Ok(ReductionReport { m1_gap, m2_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::lookup;
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn grid(m: usize) -> Vec<f64> {
        (0..=m).map(|i| i as f64 / m as f64).collect()
    }

    fn example1() -> Function1D {
        Function1D::from_entry(lookup("example1").unwrap())
    }

    #[test]
    fn q_reproduces_constants_and_linear_moment() {
        let p = OperatorParams::new(10, 0.4, 5.0).unwrap();
        let c = Function1D::constant(2.5);
        for x in grid(20) {
            assert!((apply(&OperatorKind::Q, &p, &c, x, &cfg()).unwrap() - 2.5).abs() < 1e-11);
        }
        let v = apply(&OperatorKind::Q, &p, &Function1D::monomial(1), 0.2, &cfg()).unwrap();
        assert!((v - 11.0 / 52.0).abs() < 1e-14);
        let e0 = Function1D::monomial(0);
        let ends = apply_grid(&OperatorKind::Q, &p, &e0, &[0.0, 1.0], &cfg()).unwrap();
        assert!(ends.iter().all(|v| (v - 1.0).abs() < 1e-14));
        assert!(apply_grid(&OperatorKind::Q, &p, &e0, &[], &cfg())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn table_one_first_order_cell() {
        let p = OperatorParams::new(10, 0.2, 5.0).unwrap();
        let kind = OperatorKind::M1(CoefficientSchemeM1::paper_example(10));
        let f = example1();
        let v = apply(&kind, &p, &f, 0.5, &cfg()).unwrap();
        assert!(((f.eval(0.5) - v).abs() - 0.053236321).abs() < 5e-9);
    }

    #[test]
    fn degree_checks_and_indexed_errors() {
        let p = OperatorParams::new(4, 0.2, 5.0).unwrap();
        let f = Function1D::monomial(1);
        assert!(apply(&OperatorKind::M3Tilde, &p, &f, 0.5, &cfg()).is_err());
        assert!(OperatorParams::new(1, 0.2, 5.0).is_err());
        let err = apply_grid(&OperatorKind::Q, &p, &f, &[0.1, 1.2], &cfg()).unwrap_err();
        assert!(matches!(err, Error::GridPoint { index: 1, .. }));
        let tight = QuadratureConfig::new(1e-14, 1e-15, 1).unwrap();
        let wiggle = Function1D::custom("wiggle", |t: f64| (80.0 * t).cos());
        let err = apply_grid(&OperatorKind::Q, &p, &wiggle, &[0.3], &tight).unwrap_err();
        assert!(err.is_non_convergence());
    }

    #[test]
    fn exactness() {
        let p = OperatorParams::new(12, 0.2, 5.0).unwrap();
        for x in grid(40) {
            for i in 0..=1 {
                let v = apply(&OperatorKind::M2Bar, &p, &Function1D::monomial(i), x, &cfg()).unwrap();
                assert!((v - x.powi(i as i32)).abs() < 1e-11);
            }
            for i in 0..=3 {
                let v = apply(&OperatorKind::M3Tilde, &p, &Function1D::monomial(i), x, &cfg()).unwrap();
                assert!((v - x.powi(i as i32)).abs() < 1e-8, "i={i} x={x}");
            }
        }
        // The published sequences miss the quadratic.
        let v = apply(
            &OperatorKind::M3AsPrinted,
            &p,
            &Function1D::monomial(2),
            0.3,
            &cfg(),
        )
        .unwrap();
        assert!((v - 0.09).abs() > 1e-4);
    }

    #[test]
    fn cubic_exactness_needs_degree_six() {
        let f = Function1D::monomial(2);
        let at = |n, alpha| {
            let p = OperatorParams::new(n, alpha, 3.0).unwrap();
            (apply(&OperatorKind::M3Tilde, &p, &f, 0.3, &cfg()).unwrap() - 0.09).abs()
        };
        assert!(at(5, 0.2) > 1e-6);
        assert!(at(5, 1.0) < 1e-12);
        assert!(at(6, 0.2) < 1e-12);
    }

    #[test]
    fn reductions() {
        let f = example1();
        let xs = grid(10);
        let p = OperatorParams::new(10, 0.2, 5.0).unwrap();
        let r = reduction_check(&p, &f, &xs, &cfg()).unwrap();
        assert!(r.m1_gap <= 1e-10 && r.m2_gap.unwrap() <= 1e-10);
        let r = reduction_check(&p, &Function1D::monomial(2), &xs, &cfg()).unwrap();
        assert!(r.m1_gap <= 1e-12 && r.m2_gap.unwrap() <= 1e-12);
        // Degree-one α-Bernstein polynomials are the classical ones, so the
        // reduction breaks down at the smallest degrees unless α = 1.
        let small = OperatorParams::new(2, 0.2, 5.0).unwrap();
        let r = reduction_check(&small, &Function1D::monomial(2), &xs, &cfg()).unwrap();
        assert!(r.m1_gap > 1e-4 && r.m2_gap.is_none());
        let small = OperatorParams::new(2, 1.0, 5.0).unwrap();
        let r = reduction_check(&small, &Function1D::monomial(2), &xs, &cfg()).unwrap();
        assert!(r.m1_gap <= 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn linearity(a in -3.0..3.0f64, b in -3.0..3.0f64, x in 0.0..=1.0f64, which in 0usize..4) {
            let p = OperatorParams::new(9, 0.3, 4.0).unwrap();
            let kinds = [
                OperatorKind::Q,
                OperatorKind::M1(CoefficientSchemeM1::paper_example(9)),
                OperatorKind::M2Bar,
                OperatorKind::M3Tilde,
            ];
            let kind = &kinds[which];
            let f = Function1D::from_entry(lookup("example2").unwrap());
            let g = Function1D::from_entry(lookup("exp").unwrap());
            let h = Function1D::linear_combination(a, &f, b, &g);
            let lhs = apply(kind, &p, &h, x, &cfg()).unwrap();
            let rhs = a * apply(kind, &p, &f, x, &cfg()).unwrap() + b * apply(kind, &p, &g, x, &cfg()).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }

        #[test]
        fn positive_scheme_keeps_sign(n in 2usize..30, a0 in 0.0..1.0f64, x in 0.0..=1.0f64) {
            // a0 in [0, 1] with a1 = 1 - 2 a0 keeps a0 + a1 = 1 - a0 >= 0.
            let scheme = CoefficientSchemeM1::new(a0, 1.0 - 2.0 * a0).unwrap();
            prop_assume!(scheme.case() == crate::basis::SchemeCase::Positive);
            let p = OperatorParams::new(n, 0.6, 2.0).unwrap();
            let f = Function1D::from_entry(lookup("abs-half").unwrap());
            let v = apply(&OperatorKind::M1(scheme), &p, &f, x, &cfg()).unwrap();
            prop_assert!(v >= -1e-11);
        }

        #[test]
        fn symmetric_scheme_reflects(n in 2usize..25, alpha in 0.0..=1.0f64, x in 0.0..=1.0f64) {
            let p = OperatorParams::new(n, alpha, 3.0).unwrap();
            let kind = OperatorKind::M1(CoefficientSchemeM1::paper_example(n));
            let f = Function1D::from_entry(lookup("example2").unwrap());
            let g = f.reflected();
            let lhs = apply(&kind, &p, &g, 1.0 - x, &cfg()).unwrap();
            let rhs = apply(&kind, &p, &f, x, &cfg()).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
