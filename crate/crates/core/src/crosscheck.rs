//! Independent oracles: pole lattice and residues, contour integration,
//! shifted-convolution sums, and the exact value Z^even(-1).
//!
//! Residues come from the single singular k-term of the binomial series. At
//! s0 = -2k + pi i m / L the k-th denominator eps^{2s+4k} - 1 vanishes with
//! derivative 2L, and eps^{s0+2k} = (-1)^m, so
//!
//! ```text
//! res Z^odd  = q^{s0/2} C(-s0,k) (-1)^m / (2L)
//! res Z^even = q^{s0/2} C(-s0,k) (-1)^k / (2L)
//! ```
//!
//! which cancel exactly when m + k is odd.

use std::f64::consts::PI;

use num_rational::BigRational;
use serde::Serialize;

use crate::complexfn::{BinomialStream, Complex};
use crate::continuation::{
    z_combined_binomial, z_even_binomial, z_odd_binomial, Method, ZetaEvaluation,
};
use crate::error::{Error, Result};
use crate::lattice::{lattice_point, nearest_other_pole, nearest_pole, LatticeKind};
use crate::options::EvalOptions;
use crate::poisson::{z_even_poisson, z_odd_poisson};
use crate::quadfield::{isqrt_u128, r1, QuadSurd, QuadraticField, UnitNorm};

/// Which zeta function a pole table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleSet {
    Odd,
    Even,
    Combined,
}

impl PoleSet {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "odd" => Some(PoleSet::Odd),
            "even" => Some(PoleSet::Even),
            "combined" | "all" => Some(PoleSet::Combined),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleSpec {
    pub k: u32,
    pub m: i64,
    pub location: Complex,
    /// Absent for norm +1 fields, which have no odd/even split.
    pub residue_odd: Option<Complex>,
    pub residue_even: Option<Complex>,
    pub residue_combined: Complex,
    pub survives_in_combined: bool,
}

fn binomial_at(s: Complex, k: u32) -> Complex {
    let mut stream = BinomialStream::new(s);
    for _ in 0..k {
        stream.advance();
    }
    stream.current()
}

fn sign(p: i64) -> f64 {
    if p.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Analytic pole data at lattice index (k, m).
pub fn pole_spec(field: &QuadraticField, k: u32, m: i64) -> PoleSpec {
    let l = field.log_eps();
    match field.norm() {
        UnitNorm::Minus => {
            let location = lattice_point(LatticeKind::Split, l, k, m).location;
            let base = (location * 0.5 * (field.q() as f64).ln()).exp() * binomial_at(location, k)
                / (2.0 * l);
            let odd = base * sign(m);
            let even = base * sign(k as i64);
            let survives = LatticeKind::Combined.contains(k, m);
            PoleSpec {
                k,
                m,
                location,
                residue_odd: Some(odd),
                residue_even: Some(even),
                // the exact sum: 2 * base * (-1)^k or 0
                residue_combined: if survives {
                    base * 2.0 * sign(k as i64)
                } else {
                    Complex::new(0.0, 0.0)
                },
                survives_in_combined: survives,
            }
        }
        UnitNorm::Plus => {
            // q^{s/2} sum_k C(-s,k) (-1)^k / (eps^{s+2k} - 1): derivative L at the zero
            let location = lattice_point(LatticeKind::NormPlusOne, l, k, m).location;
            let residue = (location * 0.5 * (field.q() as f64).ln()).exp()
                * binomial_at(location, k)
                * sign(k as i64)
                / l;
            PoleSpec {
                k,
                m,
                location,
                residue_odd: None,
                residue_even: None,
                residue_combined: residue,
                survives_in_combined: true,
            }
        }
    }
}

/// Lattice points 0 <= k <= k_max, |m| <= m_max, ordered by k then m. The
/// combined table keeps only surviving poles.
pub fn pole_lattice(
    field: &QuadraticField,
    k_max: u32,
    m_max: u32,
    which: PoleSet,
) -> Result<Vec<PoleSpec>> {
    if which != PoleSet::Combined {
        field.require_norm_minus_one()?;
    }
    let m_max = m_max as i64;
    let mut out = Vec::new();
    for k in 0..=k_max {
        for m in -m_max..=m_max {
            let spec = pole_spec(field, k, m);
            if which == PoleSet::Combined && !spec.survives_in_combined {
                continue;
            }
            out.push(spec);
        }
    }
    Ok(out)
}

/// (1 / 2 pi i) times the integral of f over the circle |s - s0| = r, by the
/// n-point trapezoid rule (spectrally accurate for analytic integrands).
pub fn contour_residue<F>(f: F, s0: Complex, r: f64, n: usize) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let mut acc = Complex::new(0.0, 0.0);
    for j in 0..n {
        let w = Complex::from_polar(r, 2.0 * PI * j as f64 / n as f64);
        acc += f(s0 + w)? * w;
    }
    Ok(acc / n as f64)
}

/// The evaluation routine whose residue is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueTarget {
    OddBinomial,
    EvenBinomial,
    CombinedBinomial,
    OddPoisson,
    EvenPoisson,
}

impl ResidueTarget {
    fn lattice(self, field: &QuadraticField) -> LatticeKind {
        match self {
            ResidueTarget::CombinedBinomial if field.norm() == UnitNorm::Plus => {
                LatticeKind::NormPlusOne
            }
            // canceled points of the combined function are tested too, so the
            // contour must avoid every split pole
            _ => LatticeKind::Split,
        }
    }

    fn eval(
        self,
        field: &QuadraticField,
        s: Complex,
        opts: &EvalOptions,
    ) -> Result<ZetaEvaluation> {
        match self {
            ResidueTarget::OddBinomial => z_odd_binomial(field, s, opts),
            ResidueTarget::EvenBinomial => z_even_binomial(field, s, opts),
            ResidueTarget::CombinedBinomial => z_combined_binomial(field, s, opts),
            ResidueTarget::OddPoisson => z_odd_poisson(field, s, opts),
            ResidueTarget::EvenPoisson => z_even_poisson(field, s, opts),
        }
    }
}

/// Numeric residue at the lattice point nearest `s0` by a 64-point contour of
/// the given radius. Fails with `ContourThroughPole` when the circle comes
/// within `opts.pole_guard_radius` of any other lattice point.
pub fn residue_numeric(
    field: &QuadraticField,
    target: ResidueTarget,
    s0: Complex,
    radius: f64,
    opts: &EvalOptions,
) -> Result<Complex> {
    let l = field.log_eps();
    let kind = target.lattice(field);
    let (centre, _) = nearest_pole(kind, l, s0);
    let other = nearest_other_pole(kind, l, s0, (centre.k, centre.m));
    if other - radius <= opts.pole_guard_radius {
        return Err(Error::ContourThroughPole);
    }
    let inner = opts.clone().guard(radius * 0.5);
    contour_residue(|s| Ok(target.eval(field, s, &inner)?.value), s0, radius, 64)
}

/// sum_{t >= 1} (1/4) r_1(t^2) r_1(D t^2 + shift) t^{-s} over t <= sqrt(n_max).
fn shifted_convolution(
    field: &QuadraticField,
    s: Complex,
    n_max: u64,
    shift: i128,
) -> Result<ZetaEvaluation> {
    field.require_norm_minus_one()?;
    if s.re <= 0.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    let d = field.d() as i128;
    let t_max = isqrt_u128(n_max as u128) as u64;
    let mut sum = Complex::new(0.0, 0.0);
    let mut terms = 0;
    for t in 1..=t_max {
        let tt = t as i128 * t as i128;
        let partner = r1(d * tt + shift);
        if partner != 0 {
            let weight = (r1(tt) * partner) as f64 / 4.0;
            sum += (-s * (t as f64).ln()).exp() * weight;
            terms += 1;
        }
    }
    // remaining terms are F_D values >= t_max + 1, growing at least by L(2) - 1
    let rho = crate::quadfield::big_ln(&(field.lucas(2) - 1));
    let next = (t_max + 1) as f64;
    let tail = (-s.re * next.ln()).exp() / (1.0 - (-s.re * rho).exp());
    let (_, distance) = nearest_pole(LatticeKind::Split, field.log_eps(), s);
    Ok(ZetaEvaluation {
        value: sum,
        method: Method::ShiftedConvolution,
        terms_used: terms,
        tail_bound: tail,
        nearest_pole_distance: distance,
    })
}

/// Z^odd(s) = (1/4) sum_n r_1(n) r_1(Dn - l) n^{-s/2}, truncated at n <= n_max.
pub fn z_odd_shifted_convolution(
    field: &QuadraticField,
    s: Complex,
    n_max: u64,
) -> Result<ZetaEvaluation> {
    shifted_convolution(field, s, n_max, -(field.ell() as i128))
}

/// Z^even(s) = (1/4) sum_n r_1(n) r_1(Dn + l) n^{-s/2}, truncated at n <= n_max.
pub fn z_even_shifted_convolution(
    field: &QuadraticField,
    s: Complex,
    n_max: u64,
) -> Result<ZetaEvaluation> {
    shifted_convolution(field, s, n_max, field.ell() as i128)
}

/// Largest square root of n_max the shifted-convolution routines will scan.
pub const SHIFTED_CONVOLUTION_MAX_ROOT: u64 = 1 << 21;

/// Smallest n_max whose tail bound meets `opts.tol`, capped at
/// `SHIFTED_CONVOLUTION_MAX_ROOT^2`; the returned evaluation's tail bound
/// reports the accuracy actually reached.
pub fn shifted_convolution_bound(
    field: &QuadraticField,
    s: Complex,
    opts: &EvalOptions,
) -> Result<u64> {
    field.require_norm_minus_one()?;
    if s.re <= 0.0 {
        return Err(Error::OutOfRegion { re: s.re, im: s.im });
    }
    let rho = crate::quadfield::big_ln(&(field.lucas(2) - 1));
    let geometric = 1.0 - (-s.re * rho).exp();
    // T^{-sigma} / geometric <= tol, with the sum itself >= 1 in size
    let root = (-(opts.tol * geometric).ln() / s.re).exp().ceil();
    let root = if root.is_finite() {
        (root as u64).min(SHIFTED_CONVOLUTION_MAX_ROOT)
    } else {
        SHIFTED_CONVOLUTION_MAX_ROOT
    };
    Ok(root * root)
}

/// n <= n_max at which r_1(n) r_1(Dn -+ l) is nonzero (upper sign: odd).
pub fn shifted_convolution_support(field: &QuadraticField, n_max: u64, odd: bool) -> Vec<u64> {
    let d = field.d() as i128;
    let shift = if odd {
        -(field.ell() as i128)
    } else {
        field.ell() as i128
    };
    let t_max = isqrt_u128(n_max as u128) as u64;
    (1..=t_max)
        .map(|t| t * t)
        .filter(|&n| r1(n as i128) != 0 && r1(d * n as i128 + shift) != 0)
        .collect()
}

/// Z^even(-1) = (1 + eps^2) / ((1 - eps^2) sqrt q), held exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialValue {
    pub exact: QuadSurd,
    /// The value minus its Galois conjugate; zero exactly when the value is rational.
    pub galois_difference: QuadSurd,
    /// (1 + e^2)(1 - e'^2) + (1 - e^2)(1 + e'^2), the numerator that vanishes
    /// because (e e')^2 = 1.
    pub cancellation_numerator: QuadSurd,
    /// Z_D(-1) = Z^even(-1) since Z^odd(-1) = 0.
    pub combined_rational: Option<BigRational>,
    pub value: f64,
}

pub fn special_value_even_minus_one(field: &QuadraticField) -> Result<SpecialValue> {
    field.require_norm_minus_one()?;
    let q = field.q();
    let one = QuadSurd::from_integer(1, q);
    let eps = QuadSurd::from_unit(field.eps(), q);
    let eps2 = &eps * &eps;
    let conj2 = eps2.conj();
    let exact = &(&one + &eps2) / &(&(&one - &eps2) * &QuadSurd::sqrt_q(q));
    let galois_difference = &exact - &exact.conj();
    let cancellation_numerator =
        &(&(&one + &eps2) * &(&one - &conj2)) + &(&(&one - &eps2) * &(&one + &conj2));
    let combined_rational = exact.is_rational().then(|| exact.rational.clone());
    let value = exact.to_f64();
    Ok(SpecialValue {
        exact,
        galois_difference,
        cancellation_numerator,
        combined_rational,
        value,
    })
}

/// -b/a for eps = (a + b sqrt q)/2, the simplified form of Z^even(-1) when N(eps) = -1.
pub fn special_value_simplified(field: &QuadraticField) -> BigRational {
    let e = field.eps();
    BigRational::new(-e.b.clone(), e.a.clone())
}
