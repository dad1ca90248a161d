//! Closed-form moment expressions, transcribed term by term so that the
//! exact oracle can check each one. Generic over the scalar so the same text
//! serves the floating-point API and the rational oracle.

use crate::basis::SecondOrderCoefficients;
use crate::field::Field;

/// Clones every identifier and lifts integer literals into `T`, so
/// expressions can be written as plain arithmetic.
macro_rules! ex {
    (@acc [$($out:tt)*]) => { $($out)* };
    (@acc [$($out:tt)*] - $($rest:tt)*) => { ex!(@acc [$($out)* -] $($rest)*) };
    (@acc [$($out:tt)*] $i:ident $($rest:tt)*) => { ex!(@acc [$($out)* ($i.clone())] $($rest)*) };
    (@acc [$($out:tt)*] $l:literal $($rest:tt)*) => { ex!(@acc [$($out)* (T::int($l))] $($rest)*) };
    (@acc [$($out:tt)*] ($($inner:tt)*) $($rest:tt)*) => {
        ex!(@acc [$($out)* (ex!(@acc [] $($inner)*))] $($rest)*)
    };
    (@acc [$($out:tt)*] $op:tt $($rest:tt)*) => { ex!(@acc [$($out)* $op] $($rest)*) };
    ($($t:tt)*) => { ex!(@acc [] $($t)*) };
}

/// Evaluation point and operator parameters.
#[derive(Debug, Clone)]
pub(crate) struct Point<T> {
    pub n: usize,
    pub alpha: T,
    pub rho: T,
    pub x: T,
}

/// Shorthands shared by most formulas.
struct Vars<T> {
    n: T,
    p: T,
    p2: T,
    p3: T,
    p4: T,
    a: T,
    x: T,
    x2: T,
    x3: T,
    x4: T,
    u: T,
}

impl<T: Field> Vars<T> {
    fn new(pt: &Point<T>) -> Self {
        let p = pt.rho.clone();
        let x = pt.x.clone();
        Self {
            n: T::int(pt.n as i64),
            p2: p.powu(2),
            p3: p.powu(3),
            p4: p.powu(4),
            p,
            a: pt.alpha.clone(),
            x2: x.powu(2),
            x3: x.powu(3),
            x4: x.powu(4),
            u: x.clone() * (T::one() - x.clone()),
            x,
        }
    }

    /// `Π_{k=2}^{top} (nρ + k)`.
    fn den(&self, top: i64) -> T {
        let np = self.n.clone() * self.p.clone();
        (2..=top).fold(T::one(), |acc, k| acc * (np.clone() + T::int(k)))
    }
}

pub(crate) fn m1_moment<T: Field>(pt: &Point<T>, a0: &T, a1: &T, i: u32) -> Option<T> {
    let Vars {
        n, p, p2, a, x, x2, ..
    } = Vars::new(pt);
    let (a0, a1) = (a0.clone(), a1.clone());
    let s = ex!(2 * a0 + a1);
    let v = match i {
        0 => s,
        1 => ex!(s * x + (1 - 2 * x) * (a0 * (p + 2) + a1 * (p + 1)) / (n * p + 2)),
        2 => ex!(s * x2
            + (n * (p * x * (3 - 5 * x) * s + p2 * x * (a0 * (4 - 6 * x) + a1 * (3 - 5 * x)))
                + (-6 * x2 + 2 * a * p2 * x2 - 2 * a * p2 * x + 2) * s
                + p * (p + 3 - 6 * x) * a0
                + p * (2 * p * x2 - 6 * x - 2 * p * x + p + 3) * a1)
                / ((n * p + 2) * (n * p + 3))),
        _ => return None,
    };
    Some(v)
}

pub(crate) fn m1_central<T: Field>(pt: &Point<T>, a0: &T, a1: &T, j: u32) -> Option<T> {
    let vars = Vars::new(pt);
    let Vars {
        n,
        p,
        p2,
        p3,
        p4,
        a,
        x,
        u,
        ..
    } = &vars;
    let (n, p, p2, p3, p4, a, x, u) = (
        n.clone(),
        p.clone(),
        p2.clone(),
        p3.clone(),
        p4.clone(),
        a.clone(),
        x.clone(),
        u.clone(),
    );
    let (a0, a1) = (a0.clone(), a1.clone());
    let s = ex!(2 * a0 + a1);
    let v = match j {
        1 => ex!((1 - 2 * x) * (a0 * (p + 2) + a1 * (p + 1)) / (n * p + 2)),
        2 => ex!((u * p * (1 + p) * s * n
            - u * (4 * a0 * (3 + 3 * p + a * p2) + 2 * a1 * (3 + 6 * p + p2 * (1 + a)))
            + a0 * (4 + 3 * p + p2)
            + a1 * (2 + 3 * p + p2))
            / ((n * p + 2) * (n * p + 3))),
        4 => {
            let (x2, x3, x4) = (vars.x2.clone(), vars.x3.clone(), vars.x4.clone());
            let den = vars.den(5);
            let head = ex!(3 * p2 * (1 + p) * (1 + p) * u * u * s * n * n
                + n * (-12 * a * p3 * (1 + p) * u * u * s
                    + a0 * u
                        * p
                        * (52 + 196 * p + 56 * p2 + 12 * p3 - u * (172 + 344 * p + 200 * p2 + 28 * p3))
                    + a1 * u
                        * p
                        * (26 + 61 * p + 46 * p2 + 11 * p3 - u * (86 + 224 * p + 172 * p2 + 34 * p3))));
            let alpha_part = ex!(a
                * u
                * (p2 * (-70 + 240 * u) * s
                    + 60 * x * p3 * (-1 + 4 * u) * (3 * a0 + a1)
                    + p4 * (a0 * (-64 + 288 * u) + a1 * (-50 + 216 * u))));
            let a0_part = ex!(a0
                * (48
                    + 50 * p
                    + 35 * p2
                    + 10 * p3
                    + p4
                    + x * (-240 - 320 * p - 120 * p2 + 80 * p3 + 48 * p4)
                    + x2 * (480 + 800 * p + 120 * p2 - 560 * p3 - 288 * p4)
                    + x3 * (-480 - 960 * p + 960 * p3 + 480 * p4)
                    + x4 * (240 + 480 * p - 480 * p3 - 240 * p4)));
            let a1_part = ex!(a1
                * (24
                    + 50 * p
                    + 35 * p2
                    + 10 * p3
                    + p4
                    + x * (-120 - 320 * p - 190 * p2 + 20 * p3 + 34 * p4)
                    + x2 * (240 + 800 * p + 430 * p2 - 260 * p3 - 202 * p4)
                    + x3 * (-240 - 960 * p - 480 * p2 + 480 * p3 + 336 * p4)
                    + x4 * (120 + 480 * p + 240 * p2 - 240 * p3 - 168 * p4)));
            ex!((head + alpha_part + a0_part + a1_part) / den)
        }
        _ => return None,
    };
    Some(v)
}

/// Fourth central moment of the first-order operator with the correction
/// term that the exact expansion requires on top of the published form.
pub(crate) fn m1_central4_amended<T: Field>(pt: &Point<T>, a0: &T, a1: &T) -> T {
    let printed = m1_central(pt, a0, a1, 4).expect("order 4 is transcribed");
    let vars = Vars::new(pt);
    let Vars {
        n,
        p,
        p2,
        a,
        x,
        x2,
        x3,
        u,
        ..
    } = &vars;
    let (n, p, p2, a, x, x2, x3, u) = (
        n.clone(),
        p.clone(),
        p2.clone(),
        a.clone(),
        x.clone(),
        x2.clone(),
        x3.clone(),
        u.clone(),
    );
    let (a0, a1) = (a0.clone(), a1.clone());
    let den = vars.den(5);
    let fix = ex!(20
        * u
        * p2
        * (a * p
            * (36 * a0 * x3 + 12 * a1 * x3 - 72 * a0 * x2 - 36 * a1 * x2 + 45 * a0 * x + 27 * a1 * x
                - 9 * a0
                - 6 * a1)
            - 5 * n * a0)
        / den);
    printed + fix
}

fn m2_second<T: Field>(v: &Vars<T>) -> T {
    let Vars { n, p, p2, a, u, .. } = v;
    let (n, p, p2, a, u) = (n.clone(), p.clone(), p2.clone(), a.clone(), u.clone());
    ex!((-1 - 2 * p + (6 + 8 * p + 4 * p2 - 2 * a * p2) * u) / ((n * p + 2) * (n * p + 3)))
}

pub(crate) fn m2bar_moment<T: Field>(pt: &Point<T>, i: u32) -> Option<T> {
    let v = Vars::new(pt);
    match i {
        0 => Some(T::one()),
        1 => Some(v.x.clone()),
        2 => Some(v.x2.clone() + m2_second(&v)),
        _ => None,
    }
}

/// Central moments of `J̄^{M,2}`: exact for orders 1 and 2, leading term
/// only for orders 3 to 6.
pub(crate) fn m2bar_central<T: Field>(pt: &Point<T>, j: u32) -> Option<T> {
    let vars = Vars::new(pt);
    let Vars { n, p, x, u, .. } = &vars;
    let (n, p, x, u) = (n.clone(), p.clone(), x.clone(), u.clone());
    let v = match j {
        1 => T::zero(),
        2 => m2_second(&vars),
        3 => {
            let d = vars.den(4);
            ex!(2 * u * (2 * x - 1) * p * (1 + p) * (2 + p) * n / d)
        }
        4 => {
            let d = vars.den(5);
            ex!(-3 * u * u * p * p * (1 + p) * (1 + p) * n * n / d)
        }
        5 => {
            let d = vars.den(6);
            ex!(30 * u * u * (2 * x - 1) * p * p * (1 + p) * (1 + p) * (2 + p) * n * n / d)
        }
        6 => {
            let d = vars.den(7);
            ex!(-30 * u * u * u * p * p * p * (1 + p) * (1 + p) * (1 + p) * n * n * n / d)
        }
        _ => return None,
    };
    Some(v)
}

/// Moments of the second-order family with free coefficients.
pub(crate) fn m2_generic_moment<T: Field>(
    pt: &Point<T>,
    c: &SecondOrderCoefficients<T>,
    i: u32,
) -> Option<T> {
    let Vars {
        n,
        p,
        p2,
        a,
        x,
        x2,
        x3,
        x4,
        ..
    } = Vars::new(pt);
    let (a2, a1, a0, b0) = (c.a2.clone(), c.a1.clone(), c.a0.clone(), c.b0.clone());
    let v = match i {
        0 => ex!(x2 * (2 * a2 - b0) + x * (b0 - 2 * a2) + (2 * a0 + a1 + a2)),
        1 => ex!(
            (n * (x3 * (2 * a2 - b0) * p + x2 * (-2 * a2 + b0) * p + x * (2 * a0 + a1 + a2) * p)
                + (x3 * (-4 * a2 + 2 * b0) * p
                    + x2 * (2 * a2 * (3 * p + 1) - b0 * (3 * p + 1))
                    + x * (-2 * a2 * (3 * p + 1) - 4 * p * a1 - 4 * p * a0 + b0 * (p + 1))
                    + (a2 * (1 + 2 * p) + a1 * (1 + 2 * p) + 2 * a0 * (1 + p))))
                / (n * p + 2)
        ),
        2 => ex!(
            (n * n * p2 * (x4 * (2 * a2 - b0) + x3 * (-2 * a2 + b0) + x2 * (2 * a0 + a1 + a2))
                + n * (-5 * x4 * p2 * (2 * a2 - b0)
                    + x3 * p * ((16 * p + 6) * a2 - (7 * p + 4) * b0)
                    + x2 * p * (-3 * (5 * p + 2) * a2 - 9 * p * a1 - 10 * p * a0 + 3 * (p + 1) * b0)
                    + x * p * (6 * (p + 1) * a0 + (3 + 5 * p) * (a1 + a2)))
                + (2 * x4 * p2 * (2 + a) * (2 * a2 - b0)
                    - 2 * x3 * p * (2 * a * p + 4 * p + 3) * (2 * a2 - b0)
                    + x2 * (p2
                        * (6 * (4 + a) * a2 + 2 * (6 + a) * a1 + 4 * (2 + a) * a0 - (5 + 2 * a) * b0)
                        + (9 * p + 2) * (2 * a2 - b0))
                    + x * (-2 * (2 * a2 - b0)
                        - 3 * p * (6 * a2 + 4 * (a1 + a0) - b0)
                        - p2 * (2 * (8 + a) * a2 + 2 * (6 + a) * a1 + 4 * (2 + a) * a0 - b0))
                    + 4 * p2 * (a2 + a1 + a0)
                    + 6 * p * (a2 + a1 + a0)
                    + 2 * (a2 + a1 + 2 * a0)))
                / ((n * p + 2) * (n * p + 3))
        ),
        _ => return None,
    };
    Some(v)
}

/// Moments of the second-order family after imposing `e0` reproduction,
/// i.e. `b0 = 2 a2` and `a1 = 1 - 2 a0 - a2`.
pub(crate) fn m2_constrained_moment<T: Field>(pt: &Point<T>, a0: &T, a2: &T, i: u32) -> Option<T> {
    let Vars {
        n,
        p,
        p2,
        a,
        x,
        x2,
        u,
        ..
    } = Vars::new(pt);
    let (a0, a2) = (a0.clone(), a2.clone());
    let v = match i {
        1 => ex!(x + ((1 + 2 * p - 2 * p * a0) - 2 * x * (1 + 2 * p - 2 * a0 * p)) / (n * p + 2)),
        2 => ex!(x2
            - ((2 * a2 * p2 + 2 * a * p2 - n * p2 - 4 * p2 - n * p - 8 * p - 6) * u + (1 + 2 * p))
                / ((n * p + 2) * (n * p + 3))),
        _ => return None,
    };
    Some(v)
}

/// Leading terms of the central moments of `J̃^{M,3}` for orders 4 to 6.
pub(crate) fn m3tilde_leading<T: Field>(pt: &Point<T>, j: u32) -> Option<T> {
    let vars = Vars::new(pt);
    let Vars {
        n, p, p2, a, x, u, ..
    } = &vars;
    let (n, p, p2, a, x, u) = (n.clone(), p.clone(), p2.clone(), a.clone(), x.clone(), u.clone());
    let v = match j {
        4 => {
            let d = vars.den(5);
            ex!(
                u * p * (1 + p) * (11 - (58 + 106 * p) * u + 27 * p + 2 * p2 * (6 - (-29 + 6 * a) * u)) * n
                    / d
            )
        }
        5 => {
            let d = vars.den(6);
            ex!(5 * u * u * (2 * x - 1) * p2 * (1 + p) * (1 + p) * (5 + 4 * p) * n * n / d)
        }
        6 => {
            let d = vars.den(7);
            ex!(15 * u * u * u * p2 * p * (1 + p) * (1 + p) * (1 + p) * n * n * n / d)
        }
        _ => return None,
    };
    Some(v)
}
