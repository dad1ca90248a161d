//! Globally adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
//!
//! Each panel is integrated with the 15-point Kronrod rule; the embedded
//! 7-point Gauss rule supplies the error estimate `|K15 - G7|`. The panel with
//! the largest estimate is bisected until the summed estimate meets the
//! requested tolerance. Results are summed in left-to-right panel order, so
//! the output does not depend on the refinement history.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (Panel, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    let resolution = 2.0 * f64::EPSILON * abs_sum * half.abs();
    let unresolvable = error <= resolution || half.abs() <= 4.0 * f64::EPSILON * center.abs().max(1.0);
    (Panel { a, b, value, error }, unresolvable)
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from one panel
/// per consecutive pair of (sorted, deduplicated) break points.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadResult> {
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }

    let mut active = BinaryHeap::new();
    let mut settled: Vec<Panel> = Vec::new();
    for w in pts.windows(2) {
        let (panel, unresolvable) = kronrod_panel(&f, w[0], w[1]);
        if unresolvable {
            settled.push(panel);
        } else {
            active.push(panel);
        }
    }

    let mut subdivisions = 0;
    loop {
        let value: f64 = active.iter().chain(settled.iter()).map(|p| p.value).sum();
        let active_error: f64 = active.iter().map(|p| p.error).sum();
        let tol = abs_tol.max(rel_tol * value.abs());
        if active_error <= tol || active.is_empty() {
            break;
        }
        if subdivisions >= max_subdivisions {
            let settled_error: f64 = settled.iter().map(|p| p.error).sum();
            return Err(Error::NonConvergence {
                estimate: ordered_sum(active.into_vec(), settled),
                error_bound: active_error + settled_error,
            });
        }
        let worst = active.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (panel, unresolvable) = kronrod_panel(&f, a, b);
            if unresolvable {
                settled.push(panel);
            } else {
                active.push(panel);
            }
        }
        subdivisions += 1;
    }

    let error = active.iter().chain(settled.iter()).map(|p| p.error).sum();
    let value = ordered_sum(active.into_vec(), settled);
    Ok(QuadResult {
        value,
        error,
        subdivisions,
    })
}

fn ordered_sum(mut panels: Vec<Panel>, settled: Vec<Panel>) -> f64 {
    panels.extend(settled);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    panels.iter().map(|p| p.value).sum()
}
