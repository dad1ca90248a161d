//! Functions on `[0, 1]` that the operators act on.

use crate::error::{Error, Result};
use crate::registry::RegistryEntry;
use std::fmt;
use std::sync::Arc;

/// Polynomial in coefficient form, ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied closure with an optional list of interior points where it
/// is not smooth.
#[derive(Clone)]
pub struct CustomFn {
    label: String,
    f: Closure,
    breakpoints: Vec<f64>,
}

/// An evaluable real function on `[0, 1]`.
///
/// Polynomials take the exact-moment path in
/// [`integrate_against_kernel`](crate::kernel::integrate_against_kernel);
/// every other variant is integrated by quadrature.
#[derive(Clone)]
pub enum Function1D {
    Polynomial(Polynomial),
    Registry(&'static RegistryEntry),
    Custom(CustomFn),
}

impl Function1D {
    pub fn monomial(degree: usize) -> Self {
        Function1D::Polynomial(Polynomial::monomial(degree))
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        Polynomial::new(coeffs).map(Function1D::Polynomial)
    }

    pub fn constant(c: f64) -> Self {
        Function1D::Polynomial(Polynomial { coeffs: vec![c] })
    }

    /// Registry entries that carry coefficient lists become polynomials.
    pub fn from_entry(entry: &'static RegistryEntry) -> Self {
        match entry.poly {
            Some(c) => Function1D::Polynomial(Polynomial { coeffs: c.to_vec() }),
            None => Function1D::Registry(entry),
        }
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Function1D::Custom(CustomFn {
            label: label.into(),
            f: Arc::new(f),
            breakpoints: Vec::new(),
        })
    }

    pub fn custom_with_breakpoints(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        breakpoints: Vec<f64>,
    ) -> Self {
        Function1D::Custom(CustomFn {
            label: label.into(),
            f: Arc::new(f),
            breakpoints,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Function1D::Polynomial(p) => p.eval(x),
            Function1D::Registry(e) => (e.eval)(x),
            Function1D::Custom(c) => (c.f)(x),
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            Function1D::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Interior points of `(0, 1)` where the function is not smooth.
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Function1D::Polynomial(_) => &[],
            Function1D::Registry(e) => e.breakpoints,
            Function1D::Custom(c) => &c.breakpoints,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Function1D::Polynomial(p) => format!("poly{:?}", p.coeffs),
            Function1D::Registry(e) => e.name.to_string(),
            Function1D::Custom(c) => c.label.clone(),
        }
    }

    /// Same function evaluated through the quadrature path, even when it is
    /// a polynomial.
    pub fn without_fast_path(&self) -> Self {
        let f = self.clone();
        let bps = self.breakpoints().to_vec();
        Function1D::custom_with_breakpoints(self.label(), move |x| f.eval(x), bps)
    }

    /// `t -> f(1 - t)`.
    pub fn reflected(&self) -> Self {
        let f = self.clone();
        let bps = self.breakpoints().iter().map(|b| 1.0 - b).collect();
        Function1D::custom_with_breakpoints(format!("{}(1-t)", self.label()), move |x| f.eval(1.0 - x), bps)
    }

    /// `a f + b g`. Stays polynomial when both inputs are.
    pub fn linear_combination(a: f64, f: &Function1D, b: f64, g: &Function1D) -> Self {
        if let (Some(p), Some(q)) = (f.as_polynomial(), g.as_polynomial()) {
            let len = p.coeffs.len().max(q.coeffs.len());
            let at = |c: &[f64], i: usize| c.get(i).copied().unwrap_or(0.0);
            let coeffs = (0..len)
                .map(|i| a * at(&p.coeffs, i) + b * at(&q.coeffs, i))
                .collect();
            return Function1D::Polynomial(Polynomial { coeffs });
        }
        let mut bps: Vec<f64> = f.breakpoints().iter().chain(g.breakpoints()).copied().collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        let (f, g) = (f.clone(), g.clone());
        let label = format!("{a}*{}+{b}*{}", f.label(), g.label());
        Function1D::custom_with_breakpoints(label, move |x| a * f.eval(x) + b * g.eval(x), bps)
    }
}

impl fmt::Debug for Function1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Function1D({})", self.label())
    }
}
