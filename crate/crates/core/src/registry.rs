//! Named test functions. The names double as the CLI `--function` vocabulary.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// A built-in function with optional first and second derivatives.
#[derive(Debug)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub eval: fn(f64) -> f64,
    pub deriv1: Option<fn(f64) -> f64>,
    pub deriv2: Option<fn(f64) -> f64>,
    /// Interior points where the function is not smooth.
    pub breakpoints: &'static [f64],
    /// Ascending coefficients, for entries that are polynomials.
    pub poly: Option<&'static [f64]>,
}

macro_rules! monomial {
    ($name:literal, $desc:literal, $coeffs:expr, $f:expr, $d1:expr, $d2:expr) => {
        RegistryEntry {
            name: $name,
            description: $desc,
            eval: $f,
            deriv1: Some($d1),
            deriv2: Some($d2),
            breakpoints: &[],
            poly: Some($coeffs),
        }
    };
}

static ENTRIES: &[RegistryEntry] = &[
    RegistryEntry {
        name: "example1",
        description: "sin(2πx) + 2 sin(πx/2)",
        eval: |x| (2.0 * PI * x).sin() + 2.0 * (PI * x / 2.0).sin(),
        deriv1: Some(|x| 2.0 * PI * (2.0 * PI * x).cos() + PI * (PI * x / 2.0).cos()),
        deriv2: Some(|x| -4.0 * PI * PI * (2.0 * PI * x).sin() - PI * PI / 2.0 * (PI * x / 2.0).sin()),
        breakpoints: &[],
        poly: None,
    },
    RegistryEntry {
        name: "example2",
        description: "x cos(2πx)",
        eval: |x| x * (2.0 * PI * x).cos(),
        deriv1: Some(|x| (2.0 * PI * x).cos() - 2.0 * PI * x * (2.0 * PI * x).sin()),
        deriv2: Some(|x| -4.0 * PI * (2.0 * PI * x).sin() - 4.0 * PI * PI * x * (2.0 * PI * x).cos()),
        breakpoints: &[],
        poly: None,
    },
    RegistryEntry {
        name: "exp",
        description: "e^x",
        eval: f64::exp,
        deriv1: Some(f64::exp),
        deriv2: Some(f64::exp),
        breakpoints: &[],
        poly: None,
    },
    RegistryEntry {
        name: "abs-half",
        description: "|x - 1/2|",
        eval: |x| (x - 0.5).abs(),
        deriv1: None,
        deriv2: None,
        breakpoints: &[0.5],
        poly: None,
    },
    RegistryEntry {
        name: "sin2pi",
        description: "sin(2πx)",
        eval: |x| (2.0 * PI * x).sin(),
        deriv1: Some(|x| 2.0 * PI * (2.0 * PI * x).cos()),
        deriv2: Some(|x| -4.0 * PI * PI * (2.0 * PI * x).sin()),
        breakpoints: &[],
        poly: None,
    },
    monomial!("e0", "1", &[1.0], |_| 1.0, |_| 0.0, |_| 0.0),
    monomial!("e1", "x", &[0.0, 1.0], |x| x, |_| 1.0, |_| 0.0),
    monomial!("e2", "x^2", &[0.0, 0.0, 1.0], |x| x * x, |x| 2.0 * x, |_| 2.0),
    monomial!(
        "e3",
        "x^3",
        &[0.0, 0.0, 0.0, 1.0],
        |x| x.powi(3),
        |x| 3.0 * x * x,
        |x| 6.0 * x
    ),
    monomial!(
        "e4",
        "x^4",
        &[0.0, 0.0, 0.0, 0.0, 1.0],
        |x| x.powi(4),
        |x| 4.0 * x.powi(3),
        |x| 12.0 * x * x
    ),
    monomial!(
        "e5",
        "x^5",
        &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        |x| x.powi(5),
        |x| 5.0 * x.powi(4),
        |x| 20.0 * x.powi(3)
    ),
    monomial!(
        "e6",
        "x^6",
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        |x| x.powi(6),
        |x| 6.0 * x.powi(5),
        |x| 30.0 * x.powi(4)
    ),
];

/// All built-in entries, in a fixed order.
pub fn entries() -> &'static [RegistryEntry] {
    ENTRIES
}

pub fn lookup(name: &str) -> Result<&'static RegistryEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_values() {
        let f = lookup("example1").unwrap();
        assert!(((f.eval)(0.5) - 2f64.sqrt()).abs() < 1e-15);
        assert!(((lookup("example2").unwrap().eval)(0.5) + 0.5).abs() < 1e-15);
        assert!(((lookup("e3").unwrap().eval)(0.2) - 0.008).abs() < 1e-17);
        assert_eq!(lookup("nope").unwrap_err(), Error::UnknownFunction("nope".into()));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for e in entries() {
            for i in 0..33 {
                let x = 0.02 + 0.96 * i as f64 / 32.0;
                if let Some(d1) = e.deriv1 {
                    let fd = ((e.eval)(x + h) - (e.eval)(x - h)) / (2.0 * h);
                    assert!((fd - d1(x)).abs() < 1e-6, "{} d1 at {x}", e.name);
                }
                if let Some(d2) = e.deriv2 {
                    let d1 = e.deriv1.unwrap();
                    let fd = (d1(x + h) - d1(x - h)) / (2.0 * h);
                    assert!((fd - d2(x)).abs() < 1e-6, "{} d2 at {x}", e.name);
                }
            }
        }
    }

    #[test]
    fn polynomial_entries_agree_with_coefficients() {
        for e in entries() {
            if let Some(c) = e.poly {
                let p = crate::function::Polynomial::new(c.to_vec()).unwrap();
                for i in 0..=10 {
                    let x = i as f64 / 10.0;
                    assert!((p.eval(x) - (e.eval)(x)).abs() < 1e-15);
                }
            }
        }
    }
}
