//! Named verification suites: each runs a family of identity or cross-method
//! checks and reports the largest deviation seen.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexfn::{cgamma, czeta, zeta_euler_maclaurin, Complex};
use crate::continuation::{z_direct_auto, z_even_binomial, z_odd_binomial, Parity, ZetaEvaluation};
use crate::crosscheck::{
    pole_spec, residue_numeric, shifted_convolution_bound, special_value_even_minus_one,
    z_even_shifted_convolution, z_odd_shifted_convolution, ResidueTarget,
};
use crate::error::{Error, Result};
use crate::lattice::{nearest_pole, LatticeKind};
use crate::options::EvalOptions;
use crate::poisson::{mordell_phase_sum, z_even_poisson, z_odd_poisson};
use crate::quadfield::{Membership, QuadraticField, UnitNorm};

pub const SUITES: &[&str] = &[
    "sequences",
    "pell",
    "cross-method",
    "poles",
    "special-values",
    "zeta-cancellation",
    "special-functions",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Largest observed deviation (absolute unless the check says otherwise).
    pub max_deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }
}

/// Settings shared by the suites.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random points per field for the cross-method grid.
    pub grid_points: usize,
    /// Upper end of the Pell scan.
    pub pell_limit: u64,
    pub opts: EvalOptions,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            grid_points: 200,
            pell_limit: 1_000_000,
            opts: EvalOptions::default(),
        }
    }
}

/// Tracks the maximum deviation against a tolerance; NaN counts as failure.
struct Tally {
    name: String,
    tolerance: f64,
    max: f64,
    failures: usize,
    count: usize,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            max: 0.0,
            failures: 0,
            count: 0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, deviation: f64, context: impl FnOnce() -> String) {
        self.record_against(deviation, self.tolerance, context);
    }

    /// Records a deviation checked against a per-point tolerance.
    fn record_against(&mut self, deviation: f64, tol: f64, context: impl FnOnce() -> String) {
        self.count += 1;
        if deviation.is_nan() || deviation > tol {
            self.failures += 1;
            if self.notes.len() < 5 {
                self.notes
                    .push(format!("{} (deviation {deviation:.3e})", context()));
            }
        }
        if deviation.is_nan() {
            self.max = f64::NAN;
        } else if !self.max.is_nan() {
            self.max = self.max.max(deviation);
        }
    }

    fn fail(&mut self, context: String) {
        self.count += 1;
        self.failures += 1;
        if self.notes.len() < 5 {
            self.notes.push(context);
        }
    }

    fn finish(self) -> CheckOutcome {
        let detail = if self.notes.is_empty() {
            format!("{} checks", self.count)
        } else {
            format!(
                "{} of {} failed: {}",
                self.failures,
                self.count,
                self.notes.join("; ")
            )
        };
        CheckOutcome {
            name: self.name,
            passed: self.failures == 0 && self.count > 0,
            max_deviation: self.max,
            tolerance: self.tolerance,
            detail,
        }
    }
}

fn fields(ds: &[u64]) -> Result<Vec<QuadraticField>> {
    ds.iter().map(|&d| QuadraticField::new(d)).collect()
}

pub fn run_suite(name: &str, ds: &[u64], config: &VerifyConfig) -> Result<SuiteReport> {
    let fs = fields(ds)?;
    let checks = match name {
        "sequences" => sequences(&fs),
        "pell" => pell(&fs, config.pell_limit),
        "cross-method" => cross_method(&fs, config)?,
        "poles" => poles(&fs, &config.opts)?,
        "special-values" => special_values(&fs, &config.opts)?,
        "zeta-cancellation" => zeta_cancellation(&fs, config)?,
        "special-functions" => special_functions(config.seed),
        other => return Err(Error::InvalidArgument(format!("unknown suite '{other}'"))),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// Norm identity L^2 - q F^2 = 4 N^n and the recurrence, for n <= 200.
pub fn sequences(fs: &[QuadraticField]) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for f in fs {
        let mut tally = Tally::new(format!("D={} norm identity n<=200", f.d()), 0.0);
        let q = BigInt::from(f.q());
        let tr = f.trace().clone();
        let nsign = f.norm().sign();
        let terms: Vec<_> = f.sequence().take(201).collect();
        for t in &terms {
            let lhs = &t.lucas * &t.lucas - &q * &t.fib * &t.fib;
            let rhs = BigInt::from(4 * nsign.pow(t.index as u32 % 2));
            tally.record(if lhs == rhs { 0.0 } else { 1.0 }, || {
                format!("n={}", t.index)
            });
        }
        for w in terms.windows(3) {
            let fib_ok = w[2].fib == &tr * &w[1].fib - BigInt::from(nsign) * &w[0].fib;
            let lucas_ok = w[2].lucas == &tr * &w[1].lucas - BigInt::from(nsign) * &w[0].lucas;
            tally.record(if fib_ok && lucas_ok { 0.0 } else { 1.0 }, || {
                format!("recurrence at n={}", w[2].index)
            });
        }
        out.push(tally.finish());
    }
    out
}

/// is_fib against enumeration of {F_D(r)} for every 1 <= n <= limit.
pub fn pell(fs: &[QuadraticField], limit: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for f in fs {
        let mut tally = Tally::new(format!("D={} membership n<={limit}", f.d()), 0.0);
        let mut odd = HashSet::new();
        let mut even = HashSet::new();
        for t in f.sequence().skip(1) {
            let v = t.fib.to_u64().unwrap_or(u64::MAX);
            if v > limit {
                break;
            }
            if t.index % 2 == 1 {
                odd.insert(v);
            } else {
                even.insert(v);
            }
        }
        let split = f.norm() == UnitNorm::Minus;
        for n in 1..=limit {
            let verdict = f.is_fib_u64(n);
            let (in_odd, in_even) = (odd.contains(&n), even.contains(&n));
            let ok = if split {
                match verdict {
                    Membership::NotMember => !in_odd && !in_even,
                    Membership::OddIndex { .. } => in_odd && !in_even,
                    Membership::EvenIndex { .. } => in_even && !in_odd,
                    Membership::BothParities { .. } => in_odd && in_even,
                    Membership::Member { .. } => false,
                }
            } else {
                verdict.is_member() == (in_odd || in_even)
            };
            if !ok {
                tally.fail(format!(
                    "n={n}: verdict {} vs odd={in_odd} even={in_even}",
                    verdict.name()
                ));
            } else {
                tally.record(0.0, String::new);
            }
        }
        out.push(tally.finish());
    }
    out
}

/// Random point in the box avoiding the split lattice by `min_distance`.
pub fn random_point(
    rng: &mut ChaCha8Rng,
    log_eps: f64,
    re: (f64, f64),
    im_abs: f64,
    min_distance: f64,
) -> Complex {
    loop {
        let s = Complex::new(rng.gen_range(re.0..=re.1), rng.gen_range(-im_abs..=im_abs));
        if nearest_pole(LatticeKind::Split, log_eps, s).1 > min_distance {
            return s;
        }
    }
}

fn deviation(a: &ZetaEvaluation, b: &ZetaEvaluation) -> f64 {
    (a.value - b.value).norm()
}

/// Binomial vs Poisson for both parities on a seeded grid over
/// Re s in [-4, 3], |Im s| <= 8, plus binomial vs direct (Re s >= 0.5) and
/// binomial vs shifted convolution (Re s >= 1).
pub fn cross_method(fs: &[QuadraticField], config: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let opts = &config.opts;
    let mut out = Vec::new();
    for f in fs {
        if f.norm() == UnitNorm::Plus {
            return Err(Error::NormPlusOne);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ f.d());
        let mut poisson = Tally::new(format!("D={} |binomial - poisson|", f.d()), 1e-8);
        let mut direct = Tally::new(
            format!("D={} |binomial - direct| (Re s >= 0.5)", f.d()),
            1e-10,
        );
        let mut sc = Tally::new(
            format!(
                "D={} |binomial - shifted convolution| - tail bounds (Re s >= 1)",
                f.d()
            ),
            0.0,
        );
        for _ in 0..config.grid_points {
            let s = random_point(&mut rng, f.log_eps(), (-4.0, 3.0), 8.0, 0.05);
            let at = || format!("s={s}");
            let bo = z_odd_binomial(f, s, opts)?;
            let be = z_even_binomial(f, s, opts)?;
            match (z_odd_poisson(f, s, opts), z_even_poisson(f, s, opts)) {
                (Ok(po), Ok(pe)) => {
                    poisson.record(deviation(&bo, &po), at);
                    poisson.record(deviation(&be, &pe), at);
                }
                (Err(e), _) | (_, Err(e)) => poisson.fail(format!("s={s}: {}", e.name())),
            }
            if s.re >= 0.5 {
                for (parity, b) in [(Parity::Odd, &bo), (Parity::Even, &be)] {
                    let d = z_direct_auto(f, s, parity, opts)?;
                    direct.record(deviation(b, &d), at);
                }
            }
            if s.re >= 1.0 {
                let n_max = shifted_convolution_bound(f, s, opts)?;
                for (sc_eval, b) in [
                    (z_odd_shifted_convolution(f, s, n_max)?, &bo),
                    (z_even_shifted_convolution(f, s, n_max)?, &be),
                ] {
                    // rounding slack of a few ulps of the value on top of the two tails
                    let allowed =
                        sc_eval.tail_bound + b.tail_bound + 1e-13 * b.value.norm().max(1.0);
                    let dev = deviation(b, &sc_eval);
                    sc.record((dev - allowed).max(0.0), at);
                }
            }
        }
        out.push(poisson.finish());
        out.push(direct.finish());
        out.push(sc.finish());
    }
    Ok(out)
}

/// Contour residues against the analytic formulas for k <= 2, |m| <= 3, and
/// the half-lattice cancellation.
pub fn poles(fs: &[QuadraticField], opts: &EvalOptions) -> Result<Vec<CheckOutcome>> {
    let radius = 1e-3;
    let mut out = Vec::new();
    for f in fs {
        f.require_norm_minus_one()?;
        let mut residues = Tally::new(
            format!("D={} numeric vs analytic residues (relative)", f.d()),
            1e-6,
        );
        let mut cancel = Tally::new(format!("D={} residue sum at m+k odd", f.d()), 1e-8);
        let mut survive = Tally::new(format!("D={} residue sum nonzero at m+k even", f.d()), 0.0);
        for k in 0..=2u32 {
            for m in -3..=3i64 {
                let p = pole_spec(f, k, m);
                let (odd, even) = (
                    p.residue_odd.expect("split"),
                    p.residue_even.expect("split"),
                );
                let at = || format!("(k,m)=({k},{m})");
                for (target, analytic) in [
                    (ResidueTarget::OddBinomial, odd),
                    (ResidueTarget::EvenBinomial, even),
                ] {
                    let num = residue_numeric(f, target, p.location, radius, opts)?;
                    residues.record((num - analytic).norm() / analytic.norm().max(1.0), at);
                }
                let combined =
                    residue_numeric(f, ResidueTarget::CombinedBinomial, p.location, radius, opts)?;
                if (k as i64 + m) % 2 != 0 {
                    cancel.record((odd + even).norm(), at);
                    cancel.record(combined.norm(), at);
                } else {
                    // the survivors must really survive
                    let rel = (odd + even).norm() / odd.norm();
                    survive.record(if (rel - 2.0).abs() < 1e-12 { 0.0 } else { 1.0 }, at);
                    residues.record(
                        (combined - p.residue_combined).norm() / p.residue_combined.norm().max(1.0),
                        at,
                    );
                }
            }
        }
        // the strip formula sees the k = 0 poles through its gamma ratios
        let p = pole_spec(f, 0, 1);
        let num = residue_numeric(f, ResidueTarget::EvenPoisson, p.location, radius, opts)?;
        let analytic = p.residue_even.expect("split");
        residues.record((num - analytic).norm() / analytic.norm().max(1.0), || {
            "even poisson (0,1)".into()
        });
        out.push(residues.finish());
        out.push(cancel.finish());
        out.push(survive.finish());
    }
    Ok(out)
}

/// Z^even(-1) exact vs both numerical methods, rationality witness, and the
/// trivial zeros of Z^odd at -1, -3, ..., -9.
pub fn special_values(fs: &[QuadraticField], opts: &EvalOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let minus_one = Complex::new(-1.0, 0.0);
    for f in fs {
        let v = special_value_even_minus_one(f)?;
        let mut even = Tally::new(
            format!("D={} Z_even(-1) = {} across methods", f.d(), v.exact),
            1e-9,
        );
        even.record(
            (z_even_binomial(f, minus_one, opts)?.value - v.value).norm(),
            || "binomial".into(),
        );
        even.record(
            (z_even_poisson(f, minus_one, opts)?.value - v.value).norm(),
            || "poisson".into(),
        );
        out.push(even.finish());

        let mut exact = Tally::new(format!("D={} exact rationality of Z(-1)", f.d()), 0.0);
        let ok = v.combined_rational.is_some()
            && v.galois_difference.is_zero()
            && v.cancellation_numerator.is_zero();
        exact.record(if ok { 0.0 } else { 1.0 }, || format!("value {}", v.exact));
        if f.d() == 5 {
            let is_minus_one = v
                .combined_rational
                .as_ref()
                .is_some_and(|r| *r == -num_rational::BigRational::one());
            exact.record(if is_minus_one { 0.0 } else { 1.0 }, || {
                "Z_5^even(-1) != -1".into()
            });
        }
        out.push(exact.finish());

        let mut zeros = Tally::new(
            format!("D={} trivial zeros of Z_odd at -1,...,-9", f.d()),
            1e-10,
        );
        let mut nonzero_even = Tally::new(format!("D={} Z_even nonzero at -1,...,-9", f.d()), 0.0);
        for j in 1..=5 {
            let s = Complex::new(-(2 * j - 1) as f64, 0.0);
            let at = || format!("s={}", s.re);
            let p = z_odd_poisson(f, s, opts)?;
            let b = z_odd_binomial(f, s, opts)?;
            zeros.record(p.value.norm(), at);
            zeros.record(b.value.norm(), at);
            let e = z_even_poisson(f, s, opts)?;
            nonzero_even.record(if e.value.norm() > 1e-6 { 0.0 } else { 1.0 }, at);
        }
        out.push(zeros.finish());
        out.push(nonzero_even.finish());
    }
    Ok(out)
}

/// The |m|^{1-s} parts of the strip m-sum against -q^{s/2} zeta(s) / (4L)^s
/// at 20 seeded points with Re s < 0.
pub fn zeta_cancellation(
    fs: &[QuadraticField],
    config: &VerifyConfig,
) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for f in fs {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(f.d()));
        let mut tally = Tally::new(format!("D={} zeta-cancellation (relative)", f.d()), 1e-9);
        let l = f.log_eps();
        for _ in 0..20 {
            let s = Complex::new(rng.gen_range(-4.0..-0.05), rng.gen_range(-8.0..=8.0));
            let q_pow = (s * 0.5 * (f.q() as f64).ln()).exp();
            let expect = -q_pow * czeta(s)? * (-s * (4.0 * l).ln()).exp();
            let got = mordell_phase_sum(f, s)?;
            tally.record((got - expect).norm() / expect.norm().max(1.0), || {
                format!("s={s}")
            });
        }
        out.push(tally.finish());
    }
    Ok(out)
}

/// Gamma reflection and recurrence on 1000 random points of the box
/// |Re z| <= 20, |Im z| <= 50, and the zeta functional equation with both
/// sides evaluated by Euler-Maclaurin, independent of the production path.
pub fn special_functions(seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Complex::new(1.0, 0.0);
    let mut reflection = Tally::new("gamma reflection (relative)", 1e-10);
    let mut recurrence = Tally::new("gamma recurrence (relative)", 1e-10);
    for _ in 0..1000 {
        let z = Complex::new(rng.gen_range(-20.0..=20.0), rng.gen_range(-50.0..=50.0));
        if (z.re - z.re.round()).abs() < 1e-3 && z.im.abs() < 1e-3 {
            continue;
        }
        let at = || format!("z={z}");
        match (cgamma(z), cgamma(one - z), cgamma(z + 1.0)) {
            (Ok(g), Ok(g1), Ok(gp)) => {
                let lhs = g * g1 * (z * PI).sin() / PI;
                reflection.record((lhs - one).norm(), at);
                recurrence.record((gp - z * g).norm() / gp.norm(), at);
            }
            _ => reflection.fail(format!("z={z}: gamma failed")),
        }
    }
    let mut functional = Tally::new("zeta functional equation (relative)", 1e-10);
    let mut agreement = Tally::new("zeta vs independent Euler-Maclaurin (relative)", 1e-10);
    for _ in 0..200 {
        // the Euler-Maclaurin reference loses about N^{1 - Re s} ulps to cancellation, so
        // the sample stays where it is good to 1e-12
        let s = Complex::new(rng.gen_range(-2.0..=3.0), rng.gen_range(-30.0..=30.0));
        if (s - one).norm() < 0.1 {
            continue;
        }
        let at = || format!("s={s}");
        // chi(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s)
        let chi = match cgamma(one - s) {
            Ok(g) => (s * 2f64.ln()).exp() * ((s - 1.0) * PI.ln()).exp() * (s * PI / 2.0).sin() * g,
            Err(_) => continue,
        };
        let left = zeta_euler_maclaurin(s);
        let right = chi * zeta_euler_maclaurin(one - s);
        functional.record((left - right).norm() / left.norm().max(1e-3), at);
        match czeta(s) {
            Ok(z) => agreement.record((z - left).norm() / left.norm().max(1e-3), at),
            Err(e) => agreement.fail(format!("s={s}: {}", e.name())),
        }
    }
    vec![
        reflection.finish(),
        recurrence.finish(),
        functional.finish(),
        agreement.finish(),
    ]
}
