//! Exact arithmetic in the real quadratic field Q(sqrt D): the fundamental
//! unit, the O_D Fibonacci and Lucas sequences, and Pell-type membership tests.
//!
//! Elements of O_D are stored as (a + b sqrt q) / 2 with q = D when
//! D = 1 mod 4 and q = 4D otherwise. In that form the trace of an element is
//! `a` and Tr(alpha / sqrt q) is `b`, so for a power eps^n the pair (a, b) is
//! exactly (L_D(n), F_D(n)).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of decimal digits carried for log(eps).
pub const DEFAULT_LOG_DIGITS: u32 = 64;

/// Bound on the brute-force search that double-checks fundamentality.
const MINIMALITY_SEARCH_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum UnitNorm {
    Plus,
    Minus,
}

impl UnitNorm {
    pub fn sign(self) -> i64 {
        match self {
            UnitNorm::Plus => 1,
            UnitNorm::Minus => -1,
        }
    }
}

/// An element (a + b sqrt q) / 2 of O_D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitElement {
    pub a: BigInt,
    pub b: BigInt,
}

impl UnitElement {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        Self { a, b }
    }

    /// (a^2 - q b^2) / 4. Requires a^2 = q b^2 mod 4 (membership in O_D).
    pub fn norm(&self, q: u64) -> BigInt {
        let num = &self.a * &self.a - BigInt::from(q) * &self.b * &self.b;
        debug_assert!(num.is_multiple_of(&BigInt::from(4)));
        num / 4
    }

    pub fn trace(&self) -> &BigInt {
        &self.a
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b)
    }

    /// Product in O_D.
    pub fn mul(&self, other: &Self, q: u64) -> Self {
        let q = BigInt::from(q);
        let a = (&self.a * &other.a + q * &self.b * &other.b) / 2;
        let b = (&self.a * &other.b + &self.b * &other.a) / 2;
        Self::new(a, b)
    }

    pub fn to_f64(&self, q: u64) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::INFINITY);
        let b = self.b.to_f64().unwrap_or(f64::INFINITY);
        (a + b * (q as f64).sqrt()) / 2.0
    }
}

impl fmt::Display for UnitElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt(q))/2", self.a, self.b)
    }
}

/// A fixed-point decimal with `digits` digits after the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighPrecisionReal {
    pub digits: u32,
    /// value * 10^digits, truncated.
    pub scaled: BigInt,
}

impl HighPrecisionReal {
    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().expect("decimal string")
    }
}

impl fmt::Display for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.scaled.is_negative();
        let s = self.scaled.abs().to_string();
        let d = self.digits as usize;
        let s = format!("{s:0>width$}", width = d + 1);
        let (int, frac) = s.split_at(s.len() - d);
        write!(f, "{}{}.{}", if neg { "-" } else { "" }, int, frac)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTerm {
    pub index: u64,
    pub fib: BigInt,
    pub lucas: BigInt,
}

/// The real quadratic field Q(sqrt D) with its fundamental unit.
#[derive(Debug, Clone)]
pub struct QuadraticField {
    d: u64,
    q: u64,
    ell: u64,
    eps: UnitElement,
    norm: UnitNorm,
    log_eps: f64,
    log_eps_hp: HighPrecisionReal,
}

impl QuadraticField {
    pub fn new(d: u64) -> Result<Self> {
        Self::with_precision(d, DEFAULT_LOG_DIGITS)
    }

    /// Builds the field, carrying `digits` decimal digits of log(eps).
    pub fn with_precision(d: u64, digits: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidD(d));
        }
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        let (q, ell) = if d % 4 == 1 { (d, 4) } else { (4 * d, 1) };
        let eps = fundamental_unit(d);
        let n = eps.norm(q);
        let norm = if n == BigInt::one() {
            UnitNorm::Plus
        } else if n == -BigInt::one() {
            UnitNorm::Minus
        } else {
            unreachable!("continued fraction produced a non-unit of norm {n}")
        };
        check_minimality(q, &eps);
        let log_eps_hp = ln_unit(&eps, q, digits);
        let log_eps = log_eps_hp.to_f64();
        Ok(Self {
            d,
            q,
            ell,
            eps,
            norm,
            log_eps,
            log_eps_hp,
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn eps(&self) -> &UnitElement {
        &self.eps
    }

    pub fn norm(&self) -> UnitNorm {
        self.norm
    }

    pub fn log_eps(&self) -> f64 {
        self.log_eps
    }

    pub fn log_eps_high_precision(&self) -> &HighPrecisionReal {
        &self.log_eps_hp
    }

    pub fn eps_f64(&self) -> f64 {
        self.log_eps.exp()
    }

    pub fn trace(&self) -> &BigInt {
        &self.eps.a
    }

    /// Fails with `NormPlusOne` unless N(eps) = -1.
    pub fn require_norm_minus_one(&self) -> Result<()> {
        match self.norm {
            UnitNorm::Minus => Ok(()),
            UnitNorm::Plus => Err(Error::NormPlusOne),
        }
    }

    /// Iterator over (n, F_D(n), L_D(n)) starting at n = 0.
    pub fn sequence(&self) -> SequenceIter {
        SequenceIter {
            trace: self.eps.a.clone(),
            norm: BigInt::from(self.norm.sign()),
            index: 0,
            fib: (BigInt::zero(), self.eps.b.clone()),
            lucas: (BigInt::from(2), self.eps.a.clone()),
        }
    }

    /// F_D(n) = Tr(eps^n / sqrt q).
    pub fn fib(&self, n: u64) -> BigInt {
        self.sequence().nth(n as usize).expect("infinite").fib
    }

    /// L_D(n) = Tr(eps^n).
    pub fn lucas(&self, n: u64) -> BigInt {
        self.sequence().nth(n as usize).expect("infinite").lucas
    }

    /// eps^n as an exact element.
    pub fn unit_power(&self, n: u64) -> UnitElement {
        let mut acc = UnitElement::new(BigInt::from(2), BigInt::zero());
        let mut base = self.eps.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, self.q);
            }
            base = base.mul(&base, self.q);
            e >>= 1;
        }
        acc
    }

    /// Membership of n among the O_D Fibonacci numbers via X^2 = q n^2 +- 4.
    /// When N(eps) = -1 the verdict carries the index parity; otherwise it is
    /// a plain `Member`.
    pub fn is_fib(&self, n: &BigUint) -> Membership {
        let plus = pell_witness(self.q, n, true);
        let minus = pell_witness(self.q, n, false);
        match self.norm {
            UnitNorm::Minus => match (plus, minus) {
                (None, None) => Membership::NotMember,
                (Some(x), None) => Membership::EvenIndex { witness: x },
                (None, Some(x)) => Membership::OddIndex { witness: x },
                (Some(even_witness), Some(odd_witness)) => Membership::BothParities {
                    even_witness,
                    odd_witness,
                },
            },
            // A solution of X^2 = q n^2 - 4 would be a unit of norm -1.
            UnitNorm::Plus => match plus.or(minus) {
                Some(x) => Membership::Member { witness: x },
                None => Membership::NotMember,
            },
        }
    }

    /// As `is_fib`, but insists on an index-parity verdict.
    pub fn is_fib_with_parity(&self, n: &BigUint) -> Result<Membership> {
        self.require_norm_minus_one()?;
        Ok(self.is_fib(n))
    }

    pub fn is_fib_u64(&self, n: u64) -> Membership {
        self.is_fib(&BigUint::from(n))
    }
}

pub struct SequenceIter {
    trace: BigInt,
    norm: BigInt,
    index: u64,
    fib: (BigInt, BigInt),
    lucas: (BigInt, BigInt),
}

impl Iterator for SequenceIter {
    type Item = SequenceTerm;

    fn next(&mut self) -> Option<SequenceTerm> {
        let term = SequenceTerm {
            index: self.index,
            fib: self.fib.0.clone(),
            lucas: self.lucas.0.clone(),
        };
        // a(n+2) = Tr(eps) a(n+1) - N(eps) a(n)
        let next_fib = &self.trace * &self.fib.1 - &self.norm * &self.fib.0;
        let next_lucas = &self.trace * &self.lucas.1 - &self.norm * &self.lucas.0;
        let (_, f1) = std::mem::take(&mut self.fib);
        self.fib = (f1, next_fib);
        let (_, l1) = std::mem::take(&mut self.lucas);
        self.lucas = (l1, next_lucas);
        self.index += 1;
        Some(term)
    }
}

/// Verdict of the Pell-type membership test. Witnesses are the X with
/// X^2 = q n^2 +- 4, i.e. the matching Lucas number L_D(r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    NotMember,
    /// Norm +1 fields: no parity information.
    Member {
        witness: BigUint,
    },
    EvenIndex {
        witness: BigUint,
    },
    OddIndex {
        witness: BigUint,
    },
    /// Only n = 1 for D = 5, which is both F(1) and F(2).
    BothParities {
        even_witness: BigUint,
        odd_witness: BigUint,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        !matches!(self, Membership::NotMember)
    }

    pub fn has_odd_index(&self) -> bool {
        matches!(
            self,
            Membership::OddIndex { .. } | Membership::BothParities { .. }
        )
    }

    pub fn has_even_index(&self) -> bool {
        matches!(
            self,
            Membership::EvenIndex { .. } | Membership::BothParities { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Membership::NotMember => "not_member",
            Membership::Member { .. } => "member",
            Membership::EvenIndex { .. } => "member_even_index",
            Membership::OddIndex { .. } => "member_odd_index",
            Membership::BothParities { .. } => "member_both_parities",
        }
    }
}

/// X with X^2 = q n^2 + 4 (plus) or q n^2 - 4 (minus), if one exists.
fn pell_witness(q: u64, n: &BigUint, plus: bool) -> Option<BigUint> {
    if let Some(n64) = n.to_u64() {
        if n64 < (1 << 40) && q < (1 << 40) {
            let qn2 = q as u128 * n64 as u128 * n64 as u128;
            let target = if plus {
                qn2 + 4
            } else if qn2 >= 4 {
                qn2 - 4
            } else {
                return None;
            };
            return exact_sqrt_u128(target).map(BigUint::from);
        }
    }
    let qn2 = BigUint::from(q) * n * n;
    let four = BigUint::from(4u8);
    let target = if plus {
        qn2 + four
    } else if qn2 >= four {
        qn2 - four
    } else {
        return None;
    };
    exact_sqrt(&target)
}

/// Integer square root of a perfect square, else None.
pub fn exact_sqrt(x: &BigUint) -> Option<BigUint> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// Bit r set iff r is a square residue mod n (n <= 128).
const fn square_residues(n: u128) -> u128 {
    let mut mask = 0u128;
    let mut i = 0;
    while i < n {
        mask |= 1 << (i * i % n);
        i += 1;
    }
    mask
}

const SQUARES_MOD_64: u128 = square_residues(64);
const SQUARES_MOD_63: u128 = square_residues(63);
const SQUARES_MOD_65: u128 = square_residues(65);

/// Square test on 64-bit values: residue filter, then a corrected float root.
pub fn is_square_u64(x: u64) -> bool {
    if SQUARES_MOD_64 >> (x & 63) & 1 == 0 {
        return false;
    }
    let mut r = (x as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|v| v > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= x) {
        r += 1;
    }
    r * r == x
}

pub fn exact_sqrt_u128(x: u128) -> Option<u128> {
    // residue filters reject about 99% of non-squares before the root
    // 128-bit division is slow, so reduce through u64 when possible
    let (r64, r63, r65) = match u64::try_from(x) {
        Ok(y) => (y % 64, y % 63, y % 65),
        Err(_) => ((x % 64) as u64, (x % 63) as u64, (x % 65) as u64),
    };
    if SQUARES_MOD_64 >> r64 & 1 == 0
        || SQUARES_MOD_63 >> r63 & 1 == 0
        || SQUARES_MOD_65 >> r65 & 1 == 0
    {
        return None;
    }
    let r = isqrt_u128(x);
    (r * r == x).then_some(r)
}

pub fn isqrt_u128(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// r_1(n) = #{x in Z : x^2 = n}.
pub fn r1(n: i128) -> u8 {
    if n < 0 {
        0
    } else if n == 0 {
        1
    } else if let Ok(small) = u64::try_from(n) {
        if is_square_u64(small) {
            2
        } else {
            0
        }
    } else if exact_sqrt_u128(n as u128).is_some() {
        2
    } else {
        0
    }
}

pub fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Fundamental unit of O_D from the continued fraction of (P0 + sqrt D)/Q0,
/// with (P0, Q0) = (1, 2) for D = 1 mod 4 and (0, 1) otherwise. The first
/// index i with Q_{i+1} = Q0 closes the period and G_i^2 - D B_i^2 = +-Q0^2.
fn fundamental_unit(d: u64) -> UnitElement {
    let (p0, q0): (i64, i64) = if d % 4 == 1 { (1, 2) } else { (0, 1) };
    let sqrt_d = d.sqrt() as i64;
    let d_i = d as i64;
    let (mut p, mut qq) = (p0, q0);
    let (mut g_prev2, mut g_prev1) = (BigInt::from(-p0), BigInt::from(q0));
    let (mut b_prev2, mut b_prev1) = (BigInt::one(), BigInt::zero());
    loop {
        let a = (p + sqrt_d) / qq;
        let g = &g_prev1 * a + &g_prev2;
        let b = &b_prev1 * a + &b_prev2;
        p = a * qq - p;
        qq = (d_i - p * p) / qq;
        if qq == q0 {
            return if q0 == 2 {
                UnitElement::new(g, b)
            } else {
                UnitElement::new(g * 2, b)
            };
        }
        g_prev2 = std::mem::replace(&mut g_prev1, g);
        b_prev2 = std::mem::replace(&mut b_prev1, b);
    }
}

/// Confirms no unit strictly between 1 and eps exists. Units u > 1 have
/// increasing coefficient b(u) = (u - conj u)/sqrt q, so it suffices to check
/// that q b'^2 +- 4 is never a square for 0 < b' < b(eps).
fn check_minimality(q: u64, eps: &UnitElement) {
    let Some(b) = eps.b.to_u64() else { return };
    if b > MINIMALITY_SEARCH_LIMIT {
        return;
    }
    for bp in 1..b {
        let bp = BigUint::from(bp);
        assert!(
            pell_witness(q, &bp, true).is_none() && pell_witness(q, &bp, false).is_none(),
            "continued fraction unit is not fundamental"
        );
    }
}

/// ln(eps) to `digits` decimal places via fixed-point atanh series.
fn ln_unit(eps: &UnitElement, q: u64, digits: u32) -> HighPrecisionReal {
    let guard = 12;
    let work = digits + guard;
    let scale = BigInt::from(10u8).pow(work);
    let sqrt_q_scaled: BigInt = (BigInt::from(q) * &scale * &scale).sqrt();
    let x = (&eps.a * &scale + &eps.b * sqrt_q_scaled) / 2;
    let ln = fixed_ln(&x, &scale);
    let drop = BigInt::from(10u8).pow(guard);
    HighPrecisionReal {
        digits,
        scaled: ln / drop,
    }
}

/// ln(x / scale) * scale for x >= scale.
fn fixed_ln(x: &BigInt, scale: &BigInt) -> BigInt {
    debug_assert!(x >= scale);
    // x = y * 2^k with y in [scale, 2 scale)
    let mut k = x.bits().saturating_sub(scale.bits());
    while (x >> k) < *scale {
        k -= 1;
    }
    while (x >> (k + 1)) >= *scale {
        k += 1;
    }
    let y = x >> k;
    let ln2 = fixed_atanh2(&BigInt::one(), &BigInt::from(3), scale);
    let ln_y = fixed_atanh2(&(&y - scale), &(&y + scale), scale);
    ln2 * BigInt::from(k) + ln_y
}

/// 2 atanh(num/den) * scale, with 0 <= num/den <= 1/3.
fn fixed_atanh2(num: &BigInt, den: &BigInt, scale: &BigInt) -> BigInt {
    let t = num * scale / den;
    let t2 = &t * &t / scale;
    let mut power = t.clone();
    let mut sum = BigInt::zero();
    let mut j = 1u32;
    while !power.is_zero() {
        sum += &power / BigInt::from(j);
        power = &power * &t2 / scale;
        j += 2;
    }
    sum * 2
}

/// An element r + s sqrt(q) of Q(sqrt q) with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSurd {
    pub rational: BigRational,
    pub surd: BigRational,
    pub q: u64,
}

impl QuadSurd {
    pub fn new(rational: BigRational, surd: BigRational, q: u64) -> Self {
        Self { rational, surd, q }
    }

    pub fn from_integer(n: i64, q: u64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero(), q)
    }

    /// sqrt(q) itself.
    pub fn sqrt_q(q: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), q)
    }

    pub fn from_unit(u: &UnitElement, q: u64) -> Self {
        let two = BigInt::from(2);
        Self::new(
            BigRational::new(u.a.clone(), two.clone()),
            BigRational::new(u.b.clone(), two),
            q,
        )
    }

    /// Galois conjugate, sqrt q -> -sqrt q.
    pub fn conj(&self) -> Self {
        Self::new(self.rational.clone(), -self.surd.clone(), self.q)
    }

    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - BigRational::from_integer(self.q.into()) * &self.surd * &self.surd
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.rational) + ratio_to_f64(&self.surd) * (self.q as f64).sqrt()
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.rational, self.surd, self.q)
        }
    }
}

impl Add for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: &QuadSurd) -> QuadSurd {
        debug_assert_eq!(self.q, o.q);
        QuadSurd::new(&self.rational + &o.rational, &self.surd + &o.surd, self.q)
    }
}

impl Sub for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: &QuadSurd) -> QuadSurd {
        debug_assert_eq!(self.q, o.q);
        QuadSurd::new(&self.rational - &o.rational, &self.surd - &o.surd, self.q)
    }
}

impl Mul for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: &QuadSurd) -> QuadSurd {
        debug_assert_eq!(self.q, o.q);
        let q = BigRational::from_integer(self.q.into());
        QuadSurd::new(
            &self.rational * &o.rational + q * &self.surd * &o.surd,
            &self.rational * &o.surd + &self.surd * &o.rational,
            self.q,
        )
    }
}

impl Div for &QuadSurd {
    type Output = QuadSurd;
    /// Panics on division by zero.
    fn div(self, o: &QuadSurd) -> QuadSurd {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt q)");
        let num = self * &o.conj();
        QuadSurd::new(num.rational / &n, num.surd / n, self.q)
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::new(-self.rational.clone(), -self.surd.clone(), self.q)
    }
}

/// Natural log of a positive big integer, in double precision.
pub fn big_ln(n: &BigInt) -> f64 {
    debug_assert_eq!(n.sign(), Sign::Plus);
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
