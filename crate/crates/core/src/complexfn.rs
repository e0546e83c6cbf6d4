//! Complex special functions: log-gamma, gamma, reciprocal gamma, Riemann zeta,
//! the asymptotic expansion of gamma ratios, and power-sum tails.
//!
//! Everything here works in hardware double precision. Gamma products that
//! appear in the continuation formulas are always formed in log space and
//! exponentiated once, so arguments with large imaginary parts do not overflow.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Bernoulli numbers B_0 ..= B_30 (odd indices above 1 vanish).
const BERNOULLI: [f64; 31] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
    0.0,
    8553103.0 / 6.0,
    0.0,
    -23749461029.0 / 870.0,
    0.0,
    8615841276005.0 / 14322.0,
];

// Lanczos, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Beyond this modulus the Stirling series is used instead of Lanczos.
const STIRLING_RADIUS: f64 = 12.0;

pub fn bernoulli_number(n: usize) -> f64 {
    BERNOULLI[n]
}

/// Returns `Some(n)` when `z` is (numerically) the nonpositive integer `n`.
fn nonpositive_integer(z: Complex) -> Option<i64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some(z.re as i64)
    } else {
        None
    }
}

/// A logarithm of sin(pi z), stable for large |Im z|. Returns `None` at the
/// zeros (integers).
pub fn ln_sin_pi(z: Complex) -> Option<Complex> {
    if z.im == 0.0 && z.re == z.re.round() {
        return None;
    }
    if z.im.abs() < 1.0 {
        return Some((z * PI).sin().ln());
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).map(|v| v.conj());
    }
    // sin w = e^{-iw} (i/2) (1 - e^{2iw}), |e^{2iw}| < 1 for Im w > 0.
    let w = z * PI;
    let i = Complex::i();
    let ln_half_i = Complex::new(-LN_2, PI / 2.0);
    Some(-i * w + ln_half_i + (Complex::new(1.0, 0.0) - (i * w * 2.0).exp()).ln())
}

fn ln_gamma_lanczos(z: Complex) -> Complex {
    let z = z - 1.0;
    let mut x = Complex::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

fn ln_gamma_stirling(z: Complex) -> Complex {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex::new(0.0, 0.0);
    let mut pow = inv;
    for k in 1..=12 {
        let b = BERNOULLI[2 * k];
        corr += pow * (b / ((2 * k) as f64 * (2 * k - 1) as f64));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + corr
}

/// A branch of log Gamma(z). Only `exp` of the result (or of sums of such
/// results) is meaningful; the imaginary part is not normalised to the
/// principal branch.
pub fn ln_gamma(z: Complex) -> Result<Complex> {
    if let Some(n) = nonpositive_integer(z) {
        return Err(Error::PoleAtNonpositiveInteger(n));
    }
    Ok(ln_gamma_unchecked(z))
}

fn ln_gamma_unchecked(z: Complex) -> Complex {
    if z.re < 0.5 {
        // Reflection; z is not an integer here, so ln_sin_pi is finite.
        let ls = ln_sin_pi(z).expect("reflection at a gamma pole");
        return LN_PI - ls - ln_gamma_unchecked(Complex::new(1.0, 0.0) - z);
    }
    if z.norm() >= STIRLING_RADIUS {
        ln_gamma_stirling(z)
    } else {
        ln_gamma_lanczos(z)
    }
}

/// Gamma(z). Reflection is used for Re z < 1/2.
pub fn cgamma(z: Complex) -> Result<Complex> {
    if let Some(n) = nonpositive_integer(z) {
        return Err(Error::PoleAtNonpositiveInteger(n));
    }
    if z.re.abs() <= 30.0 && z.im.abs() <= 30.0 && z.re >= 0.5 && z.norm() < STIRLING_RADIUS {
        // Direct Lanczos product keeps full relative accuracy for small arguments.
        let w = z - 1.0;
        let mut x = Complex::new(LANCZOS_COEF[0], 0.0);
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            x += c / (w + i as f64);
        }
        let t = w + LANCZOS_G + 0.5;
        return Ok((2.0 * PI).sqrt() * t.powc(w + 0.5) * (-t).exp() * x);
    }
    Ok(ln_gamma_unchecked(z).exp())
}

/// 1/Gamma(z), entire; exactly zero at the nonpositive integers.
pub fn rgamma(z: Complex) -> Complex {
    if nonpositive_integer(z).is_some() {
        return Complex::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        let ls = ln_sin_pi(z).expect("checked above");
        return (ls - LN_PI + ln_gamma_unchecked(Complex::new(1.0, 0.0) - z)).exp();
    }
    (-ln_gamma_unchecked(z)).exp()
}

/// Riemann zeta. Borwein's accelerated alternating series for Re s >= 1/2,
/// the functional equation below that.
pub fn czeta(s: Complex) -> Result<Complex> {
    if s == Complex::new(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    if s.re >= 0.5 {
        return Ok(zeta_right(s));
    }
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
    let one = Complex::new(1.0, 0.0);
    let Some(ls) = ln_sin_pi(s * 0.5) else {
        // trivial zero at a negative even integer
        return Ok(Complex::new(0.0, 0.0));
    };
    let log_factor = s * LN_2 + (s - 1.0) * LN_PI + ls + ln_gamma_unchecked(one - s);
    Ok(log_factor.exp() * zeta_right(one - s))
}

fn zeta_right(s: Complex) -> Complex {
    let one = Complex::new(1.0, 0.0);
    let eta_factor = one - ((one - s) * LN_2).exp();
    if eta_factor.norm() < 0.05 {
        // near a zero of 1 - 2^{1-s} the alternating series loses the value
        return zeta_euler_maclaurin(s);
    }
    let t = s.im.abs();
    // Error bound of the Borwein series grows like e^{pi |t| / 2}.
    let target = 40.0 + 0.5 * PI * t + (3.0 * (1.0 + 2.0 * t)).ln();
    let n = (target / (3.0 + 8f64.sqrt()).ln()).ceil() as usize + 2;
    let d = borwein_weights(n);
    let dn = d[n];
    let mut acc = Complex::new(0.0, 0.0);
    for (k, &dk) in d.iter().enumerate().take(n) {
        let term = (dk - dn) * (-s * ((k + 1) as f64).ln()).exp();
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    -acc / (eta_factor * dn)
}

fn borwein_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut sum = term;
    d.push(nf * sum);
    for i in 0..n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        sum += term;
        d.push(nf * sum);
    }
    d
}

/// Euler-Maclaurin summation of zeta, valid for any s != 1.
pub fn zeta_euler_maclaurin(s: Complex) -> Complex {
    let n = (s.norm() + 20.0).ceil().max(20.0) as usize;
    let mut acc = Complex::new(0.0, 0.0);
    for k in 1..n {
        acc += (-s * (k as f64).ln()).exp();
    }
    acc + power_tail_from(s, n as f64)
}

/// sum_{m >= n} m^{-w} by Euler-Maclaurin at the starting point n.
/// Accurate when n is comfortably larger than |w|/(2 pi).
pub fn power_tail_from(w: Complex, n: f64) -> Complex {
    let ln_n = n.ln();
    let one = Complex::new(1.0, 0.0);
    let n_pow = (-w * ln_n).exp();
    let mut acc = n_pow * n / (w - one) + n_pow * 0.5;
    // (w)_{2k-1} n^{-w-2k+1}
    let mut rising = w;
    let mut pow = n_pow / n;
    let mut prev_mag = f64::INFINITY;
    for k in 1..=15 {
        let term = rising * pow * (BERNOULLI[2 * k] / factorial(2 * k));
        let mag = term.norm();
        if mag > prev_mag {
            break;
        }
        acc += term;
        if mag <= 1e-18 * acc.norm() {
            break;
        }
        prev_mag = mag;
        let kf = (2 * k) as f64;
        rising *= (w + (kf - 1.0)) * (w + kf);
        pow /= n * n;
    }
    acc
}

/// sum_{m > big_m} m^{-w}.
pub fn power_tail_after(w: Complex, big_m: u64) -> Complex {
    power_tail_from(w, (big_m + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Bernoulli polynomial B_n(x) at complex x.
pub fn bernoulli_poly(n: usize, x: Complex) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    let mut binom = 1.0;
    for (k, &bk) in BERNOULLI.iter().enumerate().take(n + 1) {
        if bk != 0.0 {
            acc += x.powu((n - k) as u32) * (binom * bk);
        }
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    acc
}

/// Coefficients c_j of the asymptotic expansion
/// Gamma(z + a) / Gamma(z + b) ~ z^{a - b} sum_j c_j z^{-j},  |z| -> infinity.
///
/// Built by exponentiating the difference of the two Stirling series
/// ln Gamma(z + a) ~ (z + a - 1/2) ln z - z + ln sqrt(2 pi) + sum_{n>=2} (-1)^n B_n(a) / (n (n-1) z^{n-1}).
pub fn gamma_ratio_coefficients(a: Complex, b: Complex, count: usize) -> Vec<Complex> {
    assert!((1..=30).contains(&count));
    // f(w) = sum_{j>=1} f_j w^j with f_j = (-1)^{j+1} (B_{j+1}(a) - B_{j+1}(b)) / ((j+1) j)
    let mut f = vec![Complex::new(0.0, 0.0); count];
    for (j, fj) in f.iter_mut().enumerate().skip(1) {
        let n = j + 1;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        *fj = (bernoulli_poly(n, a) - bernoulli_poly(n, b)) * (sign / (n * (n - 1)) as f64);
    }
    let mut c = vec![Complex::new(0.0, 0.0); count];
    c[0] = Complex::new(1.0, 0.0);
    for j in 1..count {
        let mut acc = Complex::new(0.0, 0.0);
        for i in 1..=j {
            acc += f[i] * c[j - i] * i as f64;
        }
        c[j] = acc / j as f64;
    }
    c
}

/// Streaming generalized binomial coefficients C(-s, k), k = 0, 1, 2, ...
#[derive(Debug, Clone)]
pub struct BinomialStream {
    s: Complex,
    k: u64,
    current: Complex,
}

impl BinomialStream {
    pub fn new(s: Complex) -> Self {
        Self {
            s,
            k: 0,
            current: Complex::new(1.0, 0.0),
        }
    }

    /// Index of the coefficient held in `current`.
    pub fn index(&self) -> u64 {
        self.k
    }

    pub fn current(&self) -> Complex {
        self.current
    }

    /// Moves to C(-s, k + 1) via C(-s, k + 1) = C(-s, k) (-s - k) / (k + 1).
    pub fn advance(&mut self) -> Complex {
        let k = self.k as f64;
        self.current *= (-self.s - k) / (k + 1.0);
        self.k += 1;
        self.current
    }
}

impl Iterator for BinomialStream {
    type Item = Complex;

    /// Yields C(-s, 0), C(-s, 1), ... in order.
    fn next(&mut self) -> Option<Complex> {
        let out = self.current;
        self.advance();
        Some(out)
    }
}
