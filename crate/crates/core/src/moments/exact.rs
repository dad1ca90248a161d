//! Exact rational expansion of the operators on monomials, used to check the
//! closed forms with zero tolerance.

use super::closed::{self, Point};
use super::{MomentReport, Verdict};
use crate::basis::{CoefficientSchemeM1, SecondOrderCoefficients, ThirdOrderCoefficients, TildeReading};
use crate::field::Field;
use crate::function::Function1D;
use crate::kernel::{raw_moment, QuadratureConfig};
use crate::operators::{apply, OperatorKind, OperatorParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

/// Relative tolerance at which the quadrature path must agree with the exact
/// expansion before a failing closed form is blamed on its transcription.
const CONFIRM_TOL: f64 = 1e-9;

/// One rational parameter tuple for the exact checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSetting {
    pub n: usize,
    pub alpha: Q,
    pub rho: Q,
    pub x: Q,
    /// First-order coefficients (unconstrained).
    pub a0: Q,
    pub a1: Q,
    /// Free second-order coefficients for the generic-family formulas.
    pub second: SecondOrderCoefficients<Q>,
}

fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

impl ExactSetting {
    /// `count` reproducible tuples with `6 <= n <= max_n`, `α ∈ [0, 1]`,
    /// `ρ > 0`, `x ∈ (0, 1)` and small signed coefficients.
    pub fn random_batch(seed: u64, count: usize, max_n: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_n = max_n.max(6);
        (0..count)
            .map(|_| {
                let signed = |rng: &mut ChaCha8Rng| q(rng.gen_range(-9..=9), rng.gen_range(1..=4));
                let a0 = signed(&mut rng);
                let a1 = signed(&mut rng);
                let second = SecondOrderCoefficients {
                    a2: signed(&mut rng),
                    a1: signed(&mut rng),
                    a0: signed(&mut rng),
                    b0: signed(&mut rng),
                };
                Self {
                    n: rng.gen_range(6..=max_n),
                    alpha: q(rng.gen_range(0..=8), 8),
                    rho: q(rng.gen_range(1..=12), rng.gen_range(1..=4)),
                    x: q(rng.gen_range(1..=10), 11),
                    a0,
                    a1,
                    second,
                }
            })
            .collect()
    }

    fn point(&self) -> Point<Q> {
        Point {
            n: self.n,
            alpha: self.alpha.clone(),
            rho: self.rho.clone(),
            x: self.x.clone(),
        }
    }

    fn params_f64(&self) -> Option<OperatorParams> {
        OperatorParams::new(self.n, to_f64(&self.alpha), to_f64(&self.rho)).ok()
    }
}

fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn binom(n: i64, k: i64) -> Q {
    if k < 0 || k > n {
        return Q::zero();
    }
    Q::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// `p_{m,k}^α(x)` in exact arithmetic, from the bracketed definition.
fn alpha_basis_exact(m: usize, alpha: &Q, k: i64, x: &Q) -> Q {
    let m = m as i64;
    if k < 0 || k > m {
        return Q::zero();
    }
    let one = Q::from_integer(1.into());
    let y = &one - x;
    match m {
        0 => one,
        1 => {
            if k == 0 {
                y
            } else {
                x.clone()
            }
        }
        _ => {
            let beta = &one - alpha;
            let mut v = Q::zero();
            // (1-α) [C(m-2,k) (1-x) + C(m-2,k-2) x] x^{k-1} (1-x)^{m-k-1}, split
            // so that no negative power appears.
            if k <= m - 2 {
                v += &beta * binom(m - 2, k) * x.powu(k as u32) * y.powu((m - k - 1) as u32);
            }
            if k >= 2 {
                v += &beta * binom(m - 2, k - 2) * x.powu((k - 1) as u32) * y.powu((m - k) as u32);
            }
            v + alpha * binom(m, k) * x.powu(k as u32) * y.powu((m - k) as u32)
        }
    }
}

enum ExactOp<'a> {
    M1(&'a Q, &'a Q),
    M2(&'a SecondOrderCoefficients<Q>),
    M3(&'a ThirdOrderCoefficients<Q>),
}

fn combine(op: &ExactOp, n: usize, alpha: &Q, x: &Q, ints: &[Q]) -> Q {
    let one = Q::from_integer(1.into());
    let y = &one - x;
    let p = |m: usize, j: usize| alpha_basis_exact(m, alpha, j as i64, x);
    let mut acc = Q::zero();
    match op {
        ExactOp::M1(a0, a1) => {
            let ax = *a1 * x + *a0;
            let ay = *a1 * &y + *a0;
            for k in 0..n {
                acc += p(n - 1, k) * (&ax * &ints[k] + &ay * &ints[k + 1]);
            }
        }
        ExactOp::M2(c) => {
            let (ax, bx, ay) = (c.a(x), c.b(x), c.a(&y));
            for j in 0..=n - 2 {
                acc += p(n - 2, j) * (&ax * &ints[j] + &bx * &ints[j + 1] + &ay * &ints[j + 2]);
            }
        }
        ExactOp::M3(c) => {
            let w = [c.a_poly(x), c.b_poly(x), c.d_poly(x), c.b_poly(&y), c.a_poly(&y)];
            for j in 0..=n - 4 {
                let inner = (0..5).fold(Q::zero(), |s, i| s + &w[i] * &ints[j + i]);
                acc += p(n - 4, j) * inner;
            }
        }
    }
    acc
}

/// `∫ μ_{n,k} t^i` (when `centered` is false) or `∫ μ_{n,k} (t - x)^i`.
fn kernel_values(s: &ExactSetting, i: u32, centered: bool) -> Vec<Q> {
    (0..=s.n)
        .map(|k| {
            if !centered {
                return raw_moment(s.n, k, s.rho.clone(), i);
            }
            let mut acc = Q::zero();
            for m in 0..=i {
                let shift = (-s.x.clone()).powu(i - m);
                acc += binom(i as i64, m as i64) * raw_moment(s.n, k, s.rho.clone(), m) * shift;
            }
            acc
        })
        .collect()
}

/// Coefficients of `t^i` or `(t - x)^i` as a polynomial in `t`.
fn test_polynomial(i: u32, centered: bool, x: f64) -> Function1D {
    let coeffs = (0..=i)
        .map(|m| {
            if centered {
                to_f64(&binom(i as i64, m as i64)) * (-x).powi((i - m) as i32)
            } else if m == i {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Function1D::polynomial(coeffs).expect("finite coefficients")
}

struct Check {
    formula: &'static str,
    kind: OperatorKind,
    order: u32,
    centered: bool,
    printed: Q,
    exact: Q,
}

fn judge(s: &ExactSetting, c: Check, cfg: &QuadratureConfig) -> MomentReport {
    let gap = &c.exact - &c.printed;
    let analytic = to_f64(&c.printed);
    let exact = to_f64(&c.exact);
    let (verdict, quadrature_value) = if gap.is_zero() {
        (Verdict::Exact, None)
    } else {
        let x = to_f64(&s.x);
        let quad = s.params_f64().and_then(|p| {
            let f = test_polynomial(c.order, c.centered, x).without_fast_path();
            apply(&c.kind, &p, &f, x, cfg).ok()
        });
        let verdict = match quad {
            Some(v) if (v - exact).abs() <= CONFIRM_TOL * exact.abs().max(1.0) => Verdict::Typo,
            _ => Verdict::ImplementationSuspect,
        };
        (verdict, quad)
    };
    MomentReport {
        formula: c.formula,
        operator: c.kind,
        order: c.order,
        centered: c.centered,
        analytic_value: analytic,
        numeric_value: exact,
        abs_gap: (analytic - exact).abs(),
        exact_gap: Some(gap),
        quadrature_value,
        verdict,
    }
}

/// Expands every operator on monomials at one rational setting and compares
/// each transcribed closed form against the exact value.
///
/// The closed forms rely on moment identities of the α-Bernstein basis that
/// fail in degree 1, where the basis is the classical one. A family is
/// therefore checked only when its lowest basis degree is at least 2:
/// `n >= 3` for the first order, `n >= 4` for the second and `n >= 6` for
/// the third.
pub fn verify_lemmas_exact(s: &ExactSetting, cfg: &QuadratureConfig) -> Vec<MomentReport> {
    let pt = s.point();
    let n = s.n;
    let mut checks = Vec::new();
    if n < 3 {
        return Vec::new();
    }
    let m1_kind = OperatorKind::M1(
        CoefficientSchemeM1::new(to_f64(&s.a0), to_f64(&s.a1)).expect("finite coefficients"),
    );
    let m1 = ExactOp::M1(&s.a0, &s.a1);

    const M1_RAW: [&str; 3] = ["first-order e0", "first-order e1", "first-order e2"];
    for i in 0..3u32 {
        let exact = combine(&m1, n, &s.alpha, &s.x, &kernel_values(s, i, false));
        let printed = closed::m1_moment(&pt, &s.a0, &s.a1, i).expect("transcribed");
        checks.push(Check {
            formula: M1_RAW[i as usize],
            kind: m1_kind.clone(),
            order: i,
            centered: false,
            printed,
            exact,
        });
    }
    for (j, formula) in [
        (1u32, "first-order central 1"),
        (2, "first-order central 2"),
        (4, "first-order central 4"),
    ] {
        let exact = combine(&m1, n, &s.alpha, &s.x, &kernel_values(s, j, true));
        let printed = closed::m1_central(&pt, &s.a0, &s.a1, j).expect("transcribed");
        checks.push(Check {
            formula,
            kind: m1_kind.clone(),
            order: j,
            centered: true,
            printed,
            exact,
        });
    }
    {
        let exact = combine(&m1, n, &s.alpha, &s.x, &kernel_values(s, 4, true));
        let printed = closed::m1_central4_amended(&pt, &s.a0, &s.a1);
        checks.push(Check {
            formula: "first-order central 4 (amended)",
            kind: m1_kind.clone(),
            order: 4,
            centered: true,
            printed,
            exact,
        });
    }

    if n >= 4 {
        let solved = SecondOrderCoefficients::solved(n, s.rho.clone());
        let m2 = ExactOp::M2(&solved);
        const M2_RAW: [&str; 3] = ["second-order e0", "second-order e1", "second-order e2"];
        for i in 0..3u32 {
            let exact = combine(&m2, n, &s.alpha, &s.x, &kernel_values(s, i, false));
            let printed = closed::m2bar_moment(&pt, i).expect("transcribed");
            checks.push(Check {
                formula: M2_RAW[i as usize],
                kind: OperatorKind::M2Bar,
                order: i,
                centered: false,
                printed,
                exact,
            });
        }
        let exact = combine(&m2, n, &s.alpha, &s.x, &kernel_values(s, 2, true));
        let printed = closed::m2bar_central(&pt, 2).expect("transcribed");
        checks.push(Check {
            formula: "second-order central 2",
            kind: OperatorKind::M2Bar,
            order: 2,
            centered: true,
            printed,
            exact,
        });

        let generic = &s.second;
        let generic_kind = OperatorKind::M2Generic(SecondOrderCoefficients {
            a2: to_f64(&generic.a2),
            a1: to_f64(&generic.a1),
            a0: to_f64(&generic.a0),
            b0: to_f64(&generic.b0),
        });
        let g = ExactOp::M2(generic);
        const GEN: [&str; 3] = [
            "generic second-order e0",
            "generic second-order e1",
            "generic second-order e2",
        ];
        for i in 0..3u32 {
            let exact = combine(&g, n, &s.alpha, &s.x, &kernel_values(s, i, false));
            let printed = closed::m2_generic_moment(&pt, generic, i).expect("transcribed");
            checks.push(Check {
                formula: GEN[i as usize],
                kind: generic_kind.clone(),
                order: i,
                centered: false,
                printed,
                exact,
            });
        }

        let one = Q::from_integer(1.into());
        let two = Q::from_integer(2.into());
        let constrained = SecondOrderCoefficients {
            a2: generic.a2.clone(),
            a1: &one - &two * &generic.a0 - &generic.a2,
            a0: generic.a0.clone(),
            b0: &two * &generic.a2,
        };
        let constrained_kind = OperatorKind::M2Generic(SecondOrderCoefficients {
            a2: to_f64(&constrained.a2),
            a1: to_f64(&constrained.a1),
            a0: to_f64(&constrained.a0),
            b0: to_f64(&constrained.b0),
        });
        let c = ExactOp::M2(&constrained);
        for (i, formula) in [
            (1u32, "constrained second-order e1"),
            (2, "constrained second-order e2"),
        ] {
            let exact = combine(&c, n, &s.alpha, &s.x, &kernel_values(s, i, false));
            let printed =
                closed::m2_constrained_moment(&pt, &generic.a0, &generic.a2, i).expect("transcribed");
            checks.push(Check {
                formula,
                kind: constrained_kind.clone(),
                order: i,
                centered: false,
                printed,
                exact,
            });
        }
    }

    if n >= 6 {
        for (reading, kind, raw, central) in [
            (
                TildeReading::Corrected,
                OperatorKind::M3Tilde,
                [
                    "third-order e0",
                    "third-order e1",
                    "third-order e2",
                    "third-order e3",
                ],
                [
                    "third-order central 1",
                    "third-order central 2",
                    "third-order central 3",
                ],
            ),
            (
                TildeReading::AsPrinted,
                OperatorKind::M3AsPrinted,
                [
                    "third-order e0 (as printed)",
                    "third-order e1 (as printed)",
                    "third-order e2 (as printed)",
                    "third-order e3 (as printed)",
                ],
                [
                    "third-order central 1 (as printed)",
                    "third-order central 2 (as printed)",
                    "third-order central 3 (as printed)",
                ],
            ),
        ] {
            let coeffs = ThirdOrderCoefficients::tilde(n, s.rho.clone(), s.alpha.clone(), reading);
            let m3 = ExactOp::M3(&coeffs);
            for i in 0..4u32 {
                let exact = combine(&m3, n, &s.alpha, &s.x, &kernel_values(s, i, false));
                let printed = s.x.powu(i);
                checks.push(Check {
                    formula: raw[i as usize],
                    kind: kind.clone(),
                    order: i,
                    centered: false,
                    printed,
                    exact,
                });
            }
            for j in 1..4u32 {
                let exact = combine(&m3, n, &s.alpha, &s.x, &kernel_values(s, j, true));
                checks.push(Check {
                    formula: central[j as usize - 1],
                    kind: kind.clone(),
                    order: j,
                    centered: true,
                    printed: Q::zero(),
                    exact,
                });
            }
        }
    }

    checks.into_iter().map(|c| judge(s, c, cfg)).collect()
}

/// [`verify_lemmas_exact`] over several settings, reporting `(done, total)`
/// after each one.
pub fn verify_lemmas_exact_batch(
    settings: &[ExactSetting],
    cfg: &QuadratureConfig,
    mut progress: impl FnMut(usize, usize),
) -> Vec<MomentReport> {
    let total = settings.len();
    let mut out = Vec::new();
    for (i, s) in settings.iter().enumerate() {
        out.extend(verify_lemmas_exact(s, cfg));
        progress(i + 1, total);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::alpha_basis_at;

    fn setting(n: usize, alpha: Q, rho: Q, x: Q, a0: Q, a1: Q) -> ExactSetting {
        let second = SecondOrderCoefficients::reducing();
        ExactSetting {
            n,
            alpha,
            rho,
            x,
            a0,
            a1,
            second,
        }
    }

    fn verdict_of<'a>(r: &'a [MomentReport], formula: &str) -> &'a MomentReport {
        r.iter().find(|m| m.formula == formula).unwrap()
    }

    #[test]
    fn exact_basis_matches_float_path() {
        for m in 0..9 {
            for k in -1..=(m as i64 + 1) {
                let e = alpha_basis_exact(m, &q(1, 5), k, &q(2, 5));
                let f = alpha_basis_at(m, 0.2, k, 0.4);
                assert!((to_f64(&e) - f).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn first_order_e0_exact() {
        let s = setting(6, q(1, 5), q(5, 1), q(1, 3), q(1, 1), q(-1, 1));
        let r = verify_lemmas_exact(&s, &QuadratureConfig::default());
        assert_eq!(verdict_of(&r, "first-order e0").verdict, Verdict::Exact);
    }

    #[test]
    fn second_order_central_two_exact() {
        let s = setting(6, q(1, 2), q(2, 1), q(1, 4), q(1, 2), q(0, 1));
        let r = verify_lemmas_exact(&s, &QuadratureConfig::default());
        assert_eq!(verdict_of(&r, "second-order central 2").verdict, Verdict::Exact);
    }

    #[test]
    fn third_order_readings() {
        let s = setting(8, q(1, 4), q(3, 1), q(1, 5), q(1, 2), q(0, 1));
        let r = verify_lemmas_exact(&s, &QuadratureConfig::default());
        for f in [
            "third-order e2",
            "third-order e3",
            "third-order central 2",
            "third-order central 3",
        ] {
            assert_eq!(verdict_of(&r, f).verdict, Verdict::Exact, "{f}");
        }
        let printed = verdict_of(&r, "third-order e2 (as printed)");
        assert_eq!(printed.verdict, Verdict::Typo);
        assert!(!printed.exact_gap.as_ref().unwrap().is_zero());
    }

    #[test]
    fn batch_reports_progress() {
        let settings = ExactSetting::random_batch(3, 2, 6);
        assert_eq!(settings, ExactSetting::random_batch(3, 2, 6));
        let mut seen = Vec::new();
        let r = verify_lemmas_exact_batch(&settings, &QuadratureConfig::default(), |d, t| seen.push((d, t)));
        assert_eq!(seen, vec![(1, 2), (2, 2)]);
        assert!(!r.is_empty());
    }
}
