//! Test-only oracles: adaptive Gauss-Kronrod quadrature and naive direct sums.
#![allow(dead_code)]

use std::f64::consts::PI;

use fibzeta::{Complex, QuadraticField};

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1] (positive half).
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
    0.209_482_141_084_728,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> (Complex, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    ((kron * h), ((kron - gauss) * h).norm())
}

fn adapt<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Complex {
    let (value, err) = gk15(f, a, b);
    // below ~1e-15 relative the error estimate is rounding noise
    if err <= tol.max(1e-15 * value.norm()) || depth == 0 {
        return value;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive G7-K15 over [a, b] with absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> Complex>(f: F, a: f64, b: f64, tol: f64) -> Complex {
    adapt(&f, a, b, tol, 24)
}

/// Sum of `integrate` over consecutive pieces `[x_i, x_{i+1}]`.
pub fn integrate_pieces<F: Fn(f64) -> Complex>(f: F, breaks: &[f64], tol: f64) -> Complex {
    let share = tol / breaks.len().max(1) as f64;
    breaks
        .windows(2)
        .map(|w| adapt(&f, w[0], w[1], share, 24))
        .sum()
}

/// exp(w) - 1 without cancellation for small |w|.
pub fn cexpm1(w: Complex) -> Complex {
    let half = (0.5 * w.im).sin();
    Complex::new(
        w.re.exp_m1() * w.im.cos() - 2.0 * half * half,
        w.re.exp() * w.im.sin(),
    )
}

/// ln(sinh(y) / y) for y > 0, accurate for small y.
pub fn ln_sinhc(y: f64) -> f64 {
    if y < 0.1 {
        let y2 = y * y;
        (y2 / 6.0 + y2 * y2 / 120.0 + y2 * y2 * y2 / 5040.0 + y2.powi(4) / 362_880.0).ln_1p()
    } else {
        // sinh(y)/y = e^y (1 - e^{-2y}) / (2y)
        y + (-(-2.0 * y).exp()).ln_1p() - (2.0 * y).ln()
    }
}

/// int_X^inf x^{-s} e^{i w x} dx for w != 0 and large w X, by repeated integration by parts.
pub fn oscillatory_power_tail(s: Complex, w: f64, x: f64) -> Complex {
    let iw = Complex::new(0.0, w);
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..60 {
        term *= (s + k as f64) / (iw * x);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    -(iw * x).exp() * (-s * x.ln()).exp() / iw * sum
}

/// F(n) for the standard Fibonacci numbers, in f64.
pub fn fibonacci_f64(count: usize) -> Vec<f64> {
    let mut v = vec![0.0, 1.0];
    while v.len() < count {
        let n = v.len();
        v.push(v[n - 1] + v[n - 2]);
    }
    v
}

/// \hat f_s(m) = int_R (eps^x + eps^-x)^{-s} e(-m x) dx, folded onto x >= 0.
pub fn fourier_by_quadrature(field: &QuadraticField, s: f64, m: i64) -> f64 {
    let l = field.log_eps();
    // the integrand is below 1e-20 of its peak past x = 46 / (s L)
    let end = (46.0 / (s * l)).ceil();
    let breaks: Vec<f64> = (0..=(4.0 * end) as usize).map(|i| i as f64 / 4.0).collect();
    let f = |x: f64| {
        let v = 2.0 * (2.0 * PI * m as f64 * x).cos() * (-s * (2.0 * (l * x).cosh()).ln()).exp();
        Complex::new(v, 0.0)
    };
    integrate_pieces(f, &breaks, 1e-20).re
}
