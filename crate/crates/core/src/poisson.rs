//! Poisson-summation continuations.
//!
//! Z^odd is a complete sum over a congruence class, so plain Poisson summation
//! gives a rapidly convergent series of gamma products. Z^even is handled in
//! three regions: the defining series on the right, a Mordell-regularised
//! formula (zeta term + constant Fourier term + m != 0 integrals) in a strip,
//! and a pure gamma-ratio series on the left.
//!
//! The two even-index m-series only converge algebraically. Their tails are
//! summed from the large-|z| expansion
//! `Gamma(z + s/2) / Gamma(z + 1 - s/2) ~ sum_j c_j z^{s-1-j}` at z = -+ i h m,
//! h = pi / (2 log eps), which turns each tail into power sums
//! `sum_{m > M} m^{s-1-j}` evaluated by Euler-Maclaurin.

use std::f64::consts::PI;

use crate::complexfn::{
    czeta, gamma_ratio_coefficients, ln_gamma, power_tail_after, rgamma, Complex,
};
use crate::continuation::{Method, ZetaEvaluation};
use crate::error::{Error, Result};
use crate::lattice::{check_guard, LatticeKind};
use crate::options::EvalOptions;
use crate::quadfield::QuadraticField;

/// Region boundaries for the even-index Poisson evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSelector {
    /// Re s at or above this uses the defining series.
    pub direct_lower: f64,
    /// Re s at or below this uses the left-half-plane gamma-ratio series.
    pub strip_lower: f64,
    /// Radius of the disk around s = 1 where the strip formula is refused.
    pub one_exclusion_radius: f64,
}

impl Default for RegionSelector {
    fn default() -> Self {
        Self {
            direct_lower: 0.5,
            strip_lower: -0.25,
            one_exclusion_radius: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    DirectSeries,
    MordellStrip,
    LeftHalf,
}

impl RegionSelector {
    pub fn select(&self, s: Complex) -> Region {
        if s.re >= self.direct_lower {
            Region::DirectSeries
        } else if s.re > self.strip_lower {
            Region::MordellStrip
        } else {
            Region::LeftHalf
        }
    }
}

/// One summand Gamma(s/2 + i h m) Gamma(s/2 - i h m) of the odd Poisson series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierTermOdd {
    pub m: i64,
    pub value: Complex,
}

fn half_step(field: &QuadraticField) -> f64 {
    PI / (2.0 * field.log_eps())
}

fn gamma_pair(s: Complex, t: f64) -> Result<Complex> {
    let a = s * 0.5 + Complex::new(0.0, t);
    let b = s * 0.5 - Complex::new(0.0, t);
    Ok((ln_gamma(a)? + ln_gamma(b)?).exp())
}

pub fn fourier_term_odd(field: &QuadraticField, s: Complex, m: i64) -> Result<FourierTermOdd> {
    let value = gamma_pair(s, half_step(field) * m as f64)?;
    Ok(FourierTermOdd { m, value })
}

/// Fourier transform of f_s(x) = (eps^x + eps^{-x})^{-s} at frequency xi:
/// Gamma(s/2 + i pi xi / L) Gamma(s/2 - i pi xi / L) / (2 Gamma(s) L).
pub fn fourier_transform_odd(field: &QuadraticField, s: Complex, xi: f64) -> Result<Complex> {
    let l = field.log_eps();
    let pair = gamma_pair(s, PI * xi / l)?;
    Ok(pair * rgamma(s) / (2.0 * l))
}

/// The integer-frequency coefficient \hat f_s(m).
pub fn fourier_coefficient_odd(
    field: &QuadraticField,
    s: Complex,
    m: i64,
    opts: &EvalOptions,
) -> Result<Complex> {
    check_guard(
        LatticeKind::Split,
        field.log_eps(),
        s,
        opts.pole_guard_radius,
    )?;
    fourier_transform_odd(field, s, m as f64)
}

/// Z^odd(s) = q^{s/2} / (8 Gamma(s) L) sum_m (-1)^m Gamma(s/2 + i h m) Gamma(s/2 - i h m).
pub fn z_odd_poisson(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    let l = field.log_eps();
    let distance = check_guard(LatticeKind::Split, l, s, opts.pole_guard_radius)?;
    let h = half_step(field);
    let prefactor = (s * 0.5 * (field.q() as f64).ln()).exp() * rgamma(s) / (8.0 * l);
    let decay = (-PI * h).exp();
    let sigma_gap = (s.re - 1.0).abs();

    // the summand is even in m
    let mut sum = gamma_pair(s, 0.0)?;
    for m in 1..opts.max_terms as i64 {
        let p = gamma_pair(s, h * m as f64)?;
        if m % 2 == 0 {
            sum += p * 2.0;
        } else {
            sum -= p * 2.0;
        }
        let mf = m as f64;
        if h * mf > s.norm() + 2.0 {
            // Stirling: |P_m| ~ C m^{Re s - 1} e^{-pi h m}
            let r = decay * ((mf + 1.0) / mf).powf(sigma_gap);
            if r < 1.0 {
                let tail = 2.0 * p.norm() * r / (1.0 - r);
                if tail <= opts.tol * sum.norm() || tail < f64::MIN_POSITIVE {
                    return Ok(ZetaEvaluation {
                        value: prefactor * sum,
                        method: Method::Poisson,
                        terms_used: 2 * m as usize + 1,
                        tail_bound: tail * prefactor.norm(),
                        nearest_pole_distance: distance,
                    });
                }
            }
        }
    }
    Err(Error::NoConvergence(opts.max_terms))
}

/// Gamma(s/2 - i h m) / Gamma(1 - s/2 - i h m).
fn gamma_ratio(s: Complex, t: f64) -> Result<Complex> {
    let z = Complex::new(0.0, -t);
    let one = Complex::new(1.0, 0.0);
    Ok((ln_gamma(z + s * 0.5)? - ln_gamma(z + one - s * 0.5)?).exp())
}

/// (-+ i h)^p for m > 0 (upper sign) and m < 0 (lower sign).
fn signed_power(h: f64, p: Complex, positive_m: bool) -> Complex {
    let arg = if positive_m { -PI / 2.0 } else { PI / 2.0 };
    (p * Complex::new(h.ln(), arg)).exp()
}

/// The regularised one-sided Fourier integral
/// `int_0^inf ((eps^{2x} - eps^{-2x})^{-s} - (4 x L)^{-s}) e(m x) dx`, m != 0, in closed form.
pub fn mordell_integral_m(field: &QuadraticField, s: Complex, m: i64) -> Result<Complex> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "mordell_integral_m needs m != 0".into(),
        ));
    }
    let l = field.log_eps();
    let one = Complex::new(1.0, 0.0);
    let gamma_one_minus_s = (ln_gamma(one - s)?).exp();
    let ratio = gamma_ratio(s, half_step(field) * m as f64)?;
    Ok(gamma_one_minus_s * (ratio / (4.0 * l) - mordell_phase(s, m, l)))
}

/// e^{i pi (1-s) sgn(m) / 2} / ((2 pi |m|)^{1-s} (4 L)^s)
fn mordell_phase(s: Complex, m: i64, l: f64) -> Complex {
    let one = Complex::new(1.0, 0.0);
    let sgn = m.signum() as f64;
    let phase = (Complex::i() * (PI / 2.0) * (one - s) * sgn).exp();
    let mag = ((one - s) * (2.0 * PI * m.unsigned_abs() as f64).ln() + s * (4.0 * l).ln()).exp();
    phase / mag
}

/// Truncation data for the accelerated even-index m-series.
struct RatioSeries {
    /// M: terms |m| <= M are summed directly.
    head: i64,
    coef: Vec<Complex>,
}

fn ratio_series(field: &QuadraticField, s: Complex) -> RatioSeries {
    let h = half_step(field);
    let z_min = (2.5 * (s.norm() + 3.0)).max(25.0);
    let head = ((z_min / h).ceil() as i64).max(20);
    let one = Complex::new(1.0, 0.0);
    let coef = gamma_ratio_coefficients(s * 0.5, one - s * 0.5, 26);
    RatioSeries { head, coef }
}

/// sum_{|m| > M} sum_{j >= first} c_j z_m^{s-1-j}, with its last-term error estimate.
/// Because a + b = 1 the odd coefficients vanish, so terms are taken in pairs.
fn asymptotic_tail(
    h: f64,
    s: Complex,
    series: &RatioSeries,
    first: usize,
    tol: f64,
) -> (Complex, f64) {
    let term = |j: usize| {
        let p = s - 1.0 - j as f64;
        let both = signed_power(h, p, true) + signed_power(h, p, false);
        series.coef[j] * both * power_tail_after(-p, series.head as u64)
    };
    let mut acc = Complex::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut err = 0.0;
    let mut j = first;
    while j + 1 < series.coef.len() {
        let pair = term(j) + term(j + 1);
        let mag = pair.norm();
        if mag > prev {
            break;
        }
        acc += pair;
        err = mag;
        prev = mag;
        if mag <= tol * acc.norm().max(1e-300) {
            break;
        }
        j += 2;
    }
    (acc, err)
}

/// Z^even in the strip via the Mordell-regularised Poisson formula; valid for
/// Re s < 2 off the poles, refused within `one_exclusion_radius` of s = 1.
pub fn z_even_poisson_strip(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    if s.re >= 2.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    if (s - 1.0).norm() < opts.regions.one_exclusion_radius {
        return Err(Error::NearOneSingularity);
    }
    let l = field.log_eps();
    let distance = check_guard(LatticeKind::Split, l, s, opts.pole_guard_radius)?;
    let h = half_step(field);
    let one = Complex::new(1.0, 0.0);
    let q_pow = (s * 0.5 * (field.q() as f64).ln()).exp();
    let gamma_one_minus_s = (ln_gamma(one - s)?).exp();

    let zeta_term = czeta(s)? * (-s * (4.0 * l).ln()).exp();
    let constant_term =
        gamma_one_minus_s * (ln_gamma(s * 0.5)? - ln_gamma(one - s * 0.5)?).exp() / (4.0 * l);

    let series = ratio_series(field, s);
    let mut head = Complex::new(0.0, 0.0);
    for m in 1..=series.head {
        let t = h * m as f64;
        let m_pow = ((s - 1.0) * (m as f64).ln()).exp();
        let lead_p = signed_power(h, s - 1.0, true) * m_pow;
        let lead_n = signed_power(h, s - 1.0, false) * m_pow;
        head += gamma_ratio(s, t)? - lead_p + gamma_ratio(s, -t)? - lead_n;
    }
    let (tail, err) = asymptotic_tail(h, s, &series, 2, opts.tol);
    let m_sum = gamma_one_minus_s / (4.0 * l) * (head + tail);
    let value = q_pow * (zeta_term + constant_term + m_sum);
    Ok(ZetaEvaluation {
        value,
        method: Method::Poisson,
        terms_used: 2 * series.head as usize + series.coef.len(),
        tail_bound: (q_pow * gamma_one_minus_s / (4.0 * l)).norm() * err,
        nearest_pole_distance: distance,
    })
}

/// Z^even for Re s <= -1/4 via
/// `q^{s/2} Gamma(1-s) / (4L) sum_m Gamma(s/2 - i h m) / Gamma(1 - s/2 - i h m)`.
pub fn z_even_poisson_left(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    if s.re >= 0.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    if s.re > opts.regions.strip_lower {
        return Err(Error::TooSlowConvergence(s.re));
    }
    let l = field.log_eps();
    let distance = check_guard(LatticeKind::Split, l, s, opts.pole_guard_radius)?;
    let h = half_step(field);
    let one = Complex::new(1.0, 0.0);
    let q_pow = (s * 0.5 * (field.q() as f64).ln()).exp();
    let gamma_one_minus_s = (ln_gamma(one - s)?).exp();

    let series = ratio_series(field, s);
    let mut head = gamma_ratio(s, 0.0)?;
    for m in 1..=series.head {
        let t = h * m as f64;
        head += gamma_ratio(s, t)? + gamma_ratio(s, -t)?;
    }
    let (tail, err) = asymptotic_tail(h, s, &series, 0, opts.tol);
    let factor = q_pow * gamma_one_minus_s / (4.0 * l);
    Ok(ZetaEvaluation {
        value: factor * (head + tail),
        method: Method::Poisson,
        terms_used: 2 * series.head as usize + 1 + series.coef.len(),
        tail_bound: factor.norm() * err,
        nearest_pole_distance: distance,
    })
}

/// The defining series q^{s/2} sum_n (eps^{2n} - eps^{-2n})^{-s}, Re s > 0.
pub fn z_even_direct_series(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    if s.re <= 0.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    let l = field.log_eps();
    let distance = check_guard(LatticeKind::Split, l, s, opts.pole_guard_radius)?;
    let ln_q_half = 0.5 * (field.q() as f64).ln();
    // |term_{n+1} / term_n| <= eps^{-2 Re s}
    let r = (-2.0 * s.re * l).exp();
    let mut sum = Complex::new(0.0, 0.0);
    for n in 1..=opts.max_terms {
        let x = 2.0 * n as f64 * l;
        let log_base = x + (-(-2.0 * x).exp()).ln_1p();
        let term = (s * ln_q_half - s * log_base).exp();
        sum += term;
        let tail = term.norm() * r / (1.0 - r);
        if tail <= opts.tol * sum.norm() {
            return Ok(ZetaEvaluation {
                value: sum,
                method: Method::Poisson,
                terms_used: n,
                tail_bound: tail,
                nearest_pole_distance: distance,
            });
        }
    }
    Err(Error::NoConvergence(opts.max_terms))
}

/// Z^even by region: defining series, Mordell strip, or left gamma-ratio series.
pub fn z_even_poisson(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    check_guard(
        LatticeKind::Split,
        field.log_eps(),
        s,
        opts.pole_guard_radius,
    )?;
    match opts.regions.select(s) {
        Region::DirectSeries => z_even_direct_series(field, s, opts),
        Region::MordellStrip => z_even_poisson_strip(field, s, opts),
        Region::LeftHalf => z_even_poisson_left(field, s, opts),
    }
}

/// The |m|^{1-s} part of the strip m-sum, summed on its own:
/// `-q^{s/2} Gamma(1-s) (e^{i pi (1-s)/2} + e^{-i pi (1-s)/2}) / ((2 pi)^{1-s} (4L)^s) sum_{m>=1} m^{s-1}`.
/// Converges for Re s < 0, where it equals -q^{s/2} zeta(s) / (4L)^s.
pub fn mordell_phase_sum(field: &QuadraticField, s: Complex) -> Result<Complex> {
    if s.re >= 0.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    let l = field.log_eps();
    let one = Complex::new(1.0, 0.0);
    let q_pow = (s * 0.5 * (field.q() as f64).ln()).exp();
    let gamma_one_minus_s = (ln_gamma(one - s)?).exp();
    let head_len = (s.norm() + 30.0).ceil() as u64;
    let mut phase_sum = Complex::new(0.0, 0.0);
    for m in 1..=head_len as i64 {
        phase_sum += mordell_phase(s, m, l) + mordell_phase(s, -m, l);
    }
    // every phase term is the m = 1 term times m^{s-1}
    let unit = mordell_phase(s, 1, l) + mordell_phase(s, -1, l);
    phase_sum += unit * power_tail_after(one - s, head_len);
    Ok(-q_pow * gamma_one_minus_s * phase_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuation::{z_even_binomial, z_odd_binomial};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn field(d: u64) -> QuadraticField {
        QuadraticField::new(d).unwrap()
    }

    #[test]
    fn region_selection() {
        let r = RegionSelector::default();
        assert_eq!(r.select(c(0.5, 3.0)), Region::DirectSeries);
        assert_eq!(r.select(c(0.1, 0.0)), Region::MordellStrip);
        assert_eq!(r.select(c(-0.25, 0.0)), Region::LeftHalf);
    }

    #[test]
    fn odd_poisson_matches_binomial() {
        let opts = EvalOptions::default();
        for (d, s) in [(5, c(2.0, 0.0)), (10, c(-0.5, 2.0)), (13, c(-2.5, 1.0))] {
            let f = field(d);
            let p = z_odd_poisson(&f, s, &opts).unwrap();
            let b = z_odd_binomial(&f, s, &opts).unwrap();
            assert!(
                (p.value - b.value).norm() < 1e-10,
                "D={d} s={s}: {} vs {}",
                p.value,
                b.value
            );
        }
    }

    #[test]
    fn odd_poisson_trivial_zero() {
        let z = z_odd_poisson(&field(5), c(-3.0, 0.0), &EvalOptions::default()).unwrap();
        assert!(z.value.norm() < 1e-12);
    }

    #[test]
    fn fourier_coefficient_closed_forms() {
        let opts = EvalOptions::default();
        let f5 = field(5);
        let l = f5.log_eps();
        let v = fourier_coefficient_odd(&f5, c(2.0, 0.0), 0, &opts).unwrap();
        assert!((v - c(1.0 / (2.0 * l), 0.0)).norm() < 1e-14);
        let v = fourier_coefficient_odd(&f5, c(1.0, 0.0), 0, &opts).unwrap();
        assert!((v - c(PI / (2.0 * l), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn even_poisson_special_value() {
        let z = z_even_poisson(&field(5), c(-1.0, 0.0), &EvalOptions::default()).unwrap();
        assert!((z.value - c(-1.0, 0.0)).norm() < 1e-10, "{}", z.value);
    }

    #[test]
    fn even_poisson_regions_match_binomial() {
        let opts = EvalOptions::default();
        for (d, s) in [
            (5, c(0.1, 0.0)),
            (5, c(0.1, 0.7)),
            (10, c(-2.5, 0.0)),
            (10, c(-2.5, 0.3)),
        ] {
            let f = field(d);
            let p = z_even_poisson(&f, s, &opts).unwrap();
            let b = z_even_binomial(&f, s, &opts).unwrap();
            assert!(
                (p.value - b.value).norm() < 1e-9,
                "D={d} s={s}: {} vs {}",
                p.value,
                b.value
            );
        }
    }

    #[test]
    fn strip_refuses_near_one() {
        let err = z_even_poisson_strip(&field(5), c(1.05, 0.0), &EvalOptions::default());
        assert_eq!(err.unwrap_err(), Error::NearOneSingularity);
        let err = z_even_poisson_left(&field(5), c(-0.1, 0.0), &EvalOptions::default());
        assert_eq!(err.unwrap_err(), Error::TooSlowConvergence(-0.1));
    }

    #[test]
    fn mordell_integral_conjugate_symmetry() {
        let f5 = field(5);
        let a = mordell_integral_m(&f5, c(1.5, 0.0), 1).unwrap();
        let b = mordell_integral_m(&f5, c(1.5, 0.0), -1).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
    }

    #[test]
    fn phase_sum_reproduces_zeta_term() {
        let f = field(13);
        let s = c(-1.3, 2.2);
        let l = f.log_eps();
        let q_pow = (s * 0.5 * 13f64.ln()).exp();
        let expect = -q_pow * czeta(s).unwrap() * (-s * (4.0 * l).ln()).exp();
        let got = mordell_phase_sum(&f, s).unwrap();
        assert!((got - expect).norm() < 1e-10 * expect.norm());
    }
}
