//! Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

use crate::scalar::{c, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
}

/// One 15-point Kronrod rule with the embedded 7-point Gauss rule as error estimate.
pub fn gk15<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> QuadResult<T> {
    let half = (b - a) * c(0.5);
    let centre = (a + b) * c(0.5);
    let fc = f(centre);
    let mut kronrod = fc * c(WGK[7]);
    let mut gauss = fc * c(WG[3]);
    for j in 0..7 {
        let dx = half * c(XGK[j]);
        let s = f(centre - dx) + f(centre + dx);
        kronrod += s * c(WGK[j]);
        if j % 2 == 1 {
            gauss += s * c(WG[j / 2]);
        }
    }
    QuadResult {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Recursive bisection until each piece meets its share of `abs_tol` or
/// `rel_tol * |piece|`, or `max_depth` is reached.
pub fn integrate<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_depth: u32,
) -> QuadResult<T> {
    let whole = gk15(f, a, b);
    refine(f, a, b, whole, abs_tol, rel_tol, max_depth)
}

fn refine<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    est: QuadResult<T>,
    abs_tol: T,
    rel_tol: T,
    depth: u32,
) -> QuadResult<T> {
    if depth == 0 || est.error <= abs_tol.max(rel_tol * est.value.abs()) {
        return est;
    }
    let mid = (a + b) * c(0.5);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    let half_tol = abs_tol * c(0.5);
    let l = refine(f, a, mid, left, half_tol, rel_tol, depth - 1);
    let r = refine(f, mid, b, right, half_tol, rel_tol, depth - 1);
    QuadResult {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}
