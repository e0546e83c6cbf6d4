//! Binomial-series continuations of Z^odd, Z^even and Z to all of C, plus
//! direct summation in the half-plane of absolute convergence.
//!
//! For N(eps) = -1, with x_k = eps^{-(s + 2k)}:
//!
//! ```text
//! Z^odd(s)  = q^{s/2} sum_k C(-s,k) x_k / (1 - x_k^2)
//! Z^even(s) = q^{s/2} sum_k C(-s,k) (-1)^k x_k^2 / (1 - x_k^2)
//! Z(s)      = q^{s/2} sum_k C(-s,k) x_k / (1 + (-1)^{k+1} x_k)
//! ```
//!
//! and for N(eps) = +1, where F_D(n) = (eps^n - eps^{-n}) / sqrt q for every n,
//! `Z(s) = q^{s/2} sum_k C(-s,k) (-1)^k x_k / (1 - x_k)`.
//! Writing the terms through x_k keeps every quantity bounded as k grows.

use serde::Serialize;

use crate::complexfn::{BinomialStream, Complex};
use crate::error::{Error, Result};
use crate::lattice::{check_guard, nearest_pole, LatticeKind};
use crate::options::EvalOptions;
use crate::quadfield::{big_ln, QuadraticField, UnitNorm};
use crate::{crosscheck, poisson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Binomial,
    Poisson,
    ShiftedConvolution,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Binomial => "binomial",
            Method::Poisson => "poisson",
            Method::ShiftedConvolution => "shifted_convolution",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "direct" => Some(Method::Direct),
            "binomial" => Some(Method::Binomial),
            "poisson" => Some(Method::Poisson),
            "shifted_convolution" | "shifted-convolution" | "sc" => {
                Some(Method::ShiftedConvolution)
            }
            _ => None,
        }
    }
}

/// Which indices n enter sum F_D(n)^{-s}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
    /// The combined zeta function over all n >= 1.
    Combined,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
            Parity::Combined => "combined",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "odd" => Some(Parity::Odd),
            "even" => Some(Parity::Even),
            "combined" | "all" => Some(Parity::Combined),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaEvaluation {
    pub value: Complex,
    pub method: Method,
    pub terms_used: usize,
    /// Upper estimate of the truncation error (absolute).
    pub tail_bound: f64,
    pub nearest_pole_distance: f64,
}

impl ZetaEvaluation {
    /// Sum of two evaluations of the same method (odd + even).
    pub fn combine(&self, other: &Self) -> Self {
        Self {
            value: self.value + other.value,
            method: self.method,
            terms_used: self.terms_used + other.terms_used,
            tail_bound: self.tail_bound + other.tail_bound,
            nearest_pole_distance: self.nearest_pole_distance.min(other.nearest_pole_distance),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SeriesKind {
    Odd,
    Even,
    Combined,
    NormPlusOne,
}

impl SeriesKind {
    fn lattice(self) -> LatticeKind {
        match self {
            SeriesKind::Odd | SeriesKind::Even => LatticeKind::Split,
            SeriesKind::Combined => LatticeKind::Combined,
            SeriesKind::NormPlusOne => LatticeKind::NormPlusOne,
        }
    }

    fn term(self, k: u64, x: Complex) -> Complex {
        let one = Complex::new(1.0, 0.0);
        let even_k = k.is_multiple_of(2);
        match self {
            SeriesKind::Odd => x / (one - x * x),
            SeriesKind::Even => {
                let v = x * x / (one - x * x);
                if even_k {
                    v
                } else {
                    -v
                }
            }
            // (-1)^{k+1} = -1 for even k
            SeriesKind::Combined => {
                if even_k {
                    x / (one - x)
                } else {
                    x / (one + x)
                }
            }
            SeriesKind::NormPlusOne => {
                let v = x / (one - x);
                if even_k {
                    v
                } else {
                    -v
                }
            }
        }
    }

    /// Power of |x_k| in the numerator of the term.
    fn x_power(self) -> i32 {
        match self {
            SeriesKind::Even => 2,
            _ => 1,
        }
    }
}

fn binomial_series(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
    kind: SeriesKind,
) -> Result<ZetaEvaluation> {
    let log_eps = field.log_eps();
    let pole_distance = check_guard(kind.lattice(), log_eps, s, opts.pole_guard_radius)?;
    let prefactor = (s * 0.5 * (field.q() as f64).ln()).exp();
    let eps_m2 = (-2.0 * log_eps).exp();
    let s_abs = s.norm();

    let mut stream = BinomialStream::new(s);
    let mut sum = Complex::new(0.0, 0.0);
    // largest partial sum seen; keeps the stop rule relative near zeros
    let mut scale = 0.0f64;
    for k in 0..opts.max_terms as u64 {
        let c = stream.current();
        let x = (-(s + 2.0 * k as f64) * log_eps).exp();
        sum += c * kind.term(k, x);
        scale = scale.max(sum.norm());

        let kf = k as f64;
        let xa = x.norm();
        if kf >= s_abs + 5.0 && xa <= 0.5 {
            // |C(-s,k+j)/C(-s,k)| <= max((|s|+k)/(k+1), 1)^j and |x_{k+j}| = eps^{-2j} |x_k|
            let ratio = ((s_abs + kf) / (kf + 1.0)).max(1.0) * eps_m2;
            if ratio < 1.0 {
                let tail = c.norm() * xa.powi(kind.x_power()) / (1.0 - xa) * ratio / (1.0 - ratio);
                if tail <= opts.tol * scale || tail < f64::MIN_POSITIVE {
                    return Ok(ZetaEvaluation {
                        value: prefactor * sum,
                        method: Method::Binomial,
                        terms_used: k as usize + 1,
                        tail_bound: tail * prefactor.norm(),
                        nearest_pole_distance: pole_distance,
                    });
                }
            }
        }
        stream.advance();
    }
    Err(Error::NoConvergence(opts.max_terms))
}

/// Z_D^odd(s) by the binomial series. Requires N(eps) = -1.
pub fn z_odd_binomial(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    binomial_series(field, s, opts, SeriesKind::Odd)
}

/// Z_D^even(s) by the binomial series. Requires N(eps) = -1.
pub fn z_even_binomial(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    binomial_series(field, s, opts, SeriesKind::Even)
}

/// Z_D(s) = Z^odd + Z^even through the simplified combined series. Fields with
/// N(eps) = +1 are routed to [`z_norm_plus_one`].
pub fn z_combined_binomial(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    match field.norm() {
        UnitNorm::Minus => binomial_series(field, s, opts, SeriesKind::Combined),
        UnitNorm::Plus => z_norm_plus_one(field, s, opts),
    }
}

/// Full Z_D(s) for a field whose fundamental unit has norm +1.
pub fn z_norm_plus_one(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    if field.norm() == UnitNorm::Minus {
        return Err(Error::NormMinusOne);
    }
    binomial_series(field, s, opts, SeriesKind::NormPlusOne)
}

/// Partial sum of F_D(n)^{-s} over the first `n_max` terms of the chosen
/// parity (n-th odd index is 2n - 1), with a geometric tail bound.
pub fn z_direct(
    field: &QuadraticField,
    s: Complex,
    parity: Parity,
    n_max: usize,
) -> Result<ZetaEvaluation> {
    if s.re <= 0.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    let (start, step) = match parity {
        Parity::Odd => (1, 2),
        Parity::Even => (2, 2),
        Parity::Combined => (1, 1),
    };
    let mut sum = Complex::new(0.0, 0.0);
    let mut seq = field.sequence().skip(start).step_by(step);
    for _ in 0..n_max {
        let t = seq.next().expect("infinite");
        sum += (-s * big_ln(&t.fib)).exp();
    }
    // F(n + 2) >= (L(2) - 1) F(n) for n >= 1
    let rho = field.lucas(2);
    let rho = crate::quadfield::big_ln(&(rho - 1));
    let geometric = 1.0 / (1.0 - (-s.re * rho).exp());
    let next = seq.next().expect("infinite");
    let mut head = (-s.re * big_ln(&next.fib)).exp();
    if parity == Parity::Combined {
        let after = seq.next().expect("infinite");
        head += (-s.re * big_ln(&after.fib)).exp();
    }
    let (_, distance) = nearest_pole(LatticeKind::Split, field.log_eps(), s);
    Ok(ZetaEvaluation {
        value: sum,
        method: Method::Direct,
        terms_used: n_max,
        tail_bound: head * geometric,
        nearest_pole_distance: distance,
    })
}

/// Direct summation with the number of terms chosen so the tail bound falls
/// below `opts.tol` relative to the partial sum.
pub fn z_direct_auto(
    field: &QuadraticField,
    s: Complex,
    parity: Parity,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    if s.re <= 0.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    // terms grow like eps^n per index; the tail after N terms is ~ eps^{-N Re s}
    let per_term = match parity {
        Parity::Combined => 1.0,
        _ => 2.0,
    } * field.log_eps()
        * s.re;
    let n = ((-opts.tol.ln() + 10.0) / per_term).ceil() as usize + 2;
    if n > opts.max_terms {
        return Err(Error::NoConvergence(opts.max_terms));
    }
    z_direct(field, s, parity, n)
}

/// Evaluates the requested zeta function with the requested method.
pub fn evaluate(
    field: &QuadraticField,
    s: Complex,
    parity: Parity,
    method: Method,
    opts: &EvalOptions,
) -> Result<ZetaEvaluation> {
    match method {
        Method::Direct => z_direct_auto(field, s, parity, opts),
        Method::Binomial => match parity {
            Parity::Odd => z_odd_binomial(field, s, opts),
            Parity::Even => z_even_binomial(field, s, opts),
            Parity::Combined => z_combined_binomial(field, s, opts),
        },
        Method::Poisson => match parity {
            Parity::Odd => poisson::z_odd_poisson(field, s, opts),
            Parity::Even => poisson::z_even_poisson(field, s, opts),
            Parity::Combined => {
                let odd = poisson::z_odd_poisson(field, s, opts)?;
                let even = poisson::z_even_poisson(field, s, opts)?;
                Ok(odd.combine(&even))
            }
        },
        Method::ShiftedConvolution => {
            let n_max = crosscheck::shifted_convolution_bound(field, s, opts)?;
            match parity {
                Parity::Odd => crosscheck::z_odd_shifted_convolution(field, s, n_max),
                Parity::Even => crosscheck::z_even_shifted_convolution(field, s, n_max),
                Parity::Combined => {
                    let odd = crosscheck::z_odd_shifted_convolution(field, s, n_max)?;
                    let even = crosscheck::z_even_shifted_convolution(field, s, n_max)?;
                    Ok(odd.combine(&even))
                }
            }
        }
    }
}
