//! Worked values for each module, checked through the public API.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use fibzeta::complexfn::{cgamma, czeta, BinomialStream};
use fibzeta::continuation::{
    z_combined_binomial, z_direct, z_even_binomial, z_norm_plus_one, z_odd_binomial, Parity,
};
use fibzeta::crosscheck::{
    pole_lattice, pole_spec, residue_numeric, shifted_convolution_support,
    special_value_even_minus_one, z_even_shifted_convolution, z_odd_shifted_convolution, PoleSet,
    ResidueTarget,
};
use fibzeta::poisson::{z_even_poisson, z_odd_poisson};
use fibzeta::quadfield::{r1, Membership};
use fibzeta::{Complex, Error, EvalOptions, QuadraticField, UnitNorm};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn field(d: u64) -> QuadraticField {
    QuadraticField::new(d).unwrap()
}

/// F_D(n) in floating point: F(0) = 0, F(1) = b, trace t and norm nu.
fn fib_f64(b: f64, t: f64, nu: f64, count: usize) -> Vec<f64> {
    let mut v = vec![0.0, b];
    while v.len() < count {
        let n = v.len();
        v.push(t * v[n - 1] - nu * v[n - 2]);
    }
    v
}

fn direct_sum(d: u64, s: f64, indices: impl Iterator<Item = usize>) -> f64 {
    let f = field(d);
    let t: f64 = f.trace().to_string().parse().unwrap();
    let b: f64 = f.eps().b.to_string().parse().unwrap();
    let nu = f.norm().sign() as f64;
    let fib = fib_f64(b, t, nu, 200);
    indices.map(|n| fib[n].powf(-s)).sum()
}

#[test]
fn fundamental_units() {
    let e = |d: u64| {
        let f = field(d);
        (f.eps().a.clone(), f.eps().b.clone(), f.q(), f.norm())
    };
    assert_eq!(e(5), (BigInt::from(1), BigInt::from(1), 5, UnitNorm::Minus));
    assert_eq!(e(3), (BigInt::from(4), BigInt::from(1), 12, UnitNorm::Plus));
    assert_eq!(
        e(10),
        (BigInt::from(6), BigInt::from(1), 40, UnitNorm::Minus)
    );
    assert_eq!(
        e(13),
        (BigInt::from(3), BigInt::from(1), 13, UnitNorm::Minus)
    );
    assert_eq!(*field(3).trace(), BigInt::from(4));
    assert_eq!(*field(10).trace(), BigInt::from(6));
    assert!(matches!(
        QuadraticField::new(12),
        Err(Error::NotSquarefree(12))
    ));
}

#[test]
fn sequence_prefixes() {
    let fibs = |d: u64, n: u64| (0..=n).map(|i| field(d).fib(i)).collect::<Vec<_>>();
    let lucas = |d: u64, n: u64| (0..=n).map(|i| field(d).lucas(i)).collect::<Vec<_>>();
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(fibs(3, 5), big(&[0, 1, 4, 15, 56, 209]));
    assert_eq!(fibs(10, 4), big(&[0, 1, 6, 37, 228]));
    assert_eq!(fibs(5, 7), big(&[0, 1, 1, 2, 3, 5, 8, 13]));
    assert_eq!(lucas(3, 5), big(&[2, 4, 14, 52, 194, 724]));
    assert_eq!(lucas(10, 4), big(&[2, 6, 38, 234, 1442]));
    let f5 = field(5);
    assert_eq!(f5.lucas(3), BigInt::from(4));
    assert_eq!(f5.lucas(3).pow(2) - 5 * f5.fib(3).pow(2), BigInt::from(-4));
}

#[test]
fn pell_membership() {
    let f5 = field(5);
    let n = |v: u64| BigUint::from(v);
    assert_eq!(
        f5.is_fib_with_parity(&n(8)).unwrap(),
        Membership::EvenIndex { witness: n(18) }
    );
    assert_eq!(f5.is_fib_with_parity(&n(4)).unwrap(), Membership::NotMember);
    assert_eq!(
        f5.is_fib_with_parity(&n(5)).unwrap(),
        Membership::OddIndex { witness: n(11) }
    );
    assert!(matches!(
        field(3).is_fib_with_parity(&n(15)),
        Err(Error::NormPlusOne)
    ));
    assert!(field(3).is_fib(&n(15)).is_member());
    assert_eq!((r1(0), r1(4), r1(3)), (1, 2, 0));
}

#[test]
fn special_functions() {
    let g = cgamma(c(0.5, 0.0)).unwrap();
    assert!((g.re - PI.sqrt()).abs() < 1e-14);
    assert!((cgamma(c(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
    let g = cgamma(c(1.0, 1.0)).unwrap();
    assert!((g - c(0.498_015_668_118_356, -0.154_949_828_301_810_7)).norm() < 1e-14);
    assert!((czeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
    assert!((czeta(c(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-14);
    assert!(czeta(c(0.5, 14.134_725)).unwrap().norm() < 1e-4);
    let s = c(0.3, -2.0);
    let mut b = BinomialStream::new(s);
    assert_eq!(b.current(), c(1.0, 0.0));
    assert!((b.advance() + s).norm() < 1e-15);
    let mut b = BinomialStream::new(c(2.0, 0.0));
    b.advance();
    assert!((b.advance() - c(3.0, 0.0)).norm() < 1e-15);
}

#[test]
fn binomial_continuations() {
    let opts = EvalOptions::default();
    let f5 = field(5);
    // sum of F(2n-1)^{-2}
    let odd2 = z_odd_binomial(&f5, c(2.0, 0.0), &opts).unwrap();
    assert!((odd2.value.re - direct_sum(5, 2.0, (1..90).map(|n| 2 * n - 1))).abs() < 1e-13);
    assert!((odd2.value.re - 1.296_930_024_811_433).abs() < 1e-12);
    assert!(
        z_odd_binomial(&f5, c(-1.0, 0.0), &opts)
            .unwrap()
            .value
            .norm()
            < 1e-12
    );

    let f10 = field(10);
    let odd1 = z_odd_binomial(&f10, c(1.0, 0.0), &opts).unwrap();
    assert!((odd1.value.re - direct_sum(10, 1.0, (1..30).map(|n| 2 * n - 1))).abs() < 1e-10);

    let even2 = z_even_binomial(&f5, c(2.0, 0.0), &opts).unwrap();
    assert!((even2.value.re - direct_sum(5, 2.0, (1..90).map(|n| 2 * n))).abs() < 1e-10);
    assert!(
        (z_even_binomial(&f5, c(-1.0, 0.0), &opts).unwrap().value - c(-1.0, 0.0)).norm() < 1e-12
    );

    let f13 = field(13);
    let s = c(0.5, 3.0);
    let b = z_even_binomial(&f13, s, &opts).unwrap().value;
    let p = z_even_poisson(&f13, s, &opts).unwrap().value;
    assert!((b - p).norm() < 1e-8);

    let one = z_combined_binomial(&f5, c(1.0, 0.0), &opts).unwrap();
    assert!((one.value.re - 3.359_885_666_243_177_5).abs() < 1e-12);
}

#[test]
fn norm_plus_one_fields() {
    let opts = EvalOptions::default();
    let f3 = field(3);
    for s in [2.0, 4.0] {
        let z = z_norm_plus_one(&f3, c(s, 0.0), &opts).unwrap();
        assert!(
            (z.value.re - direct_sum(3, s, 1..60)).abs() < 1e-10,
            "s={s}"
        );
    }
    let f7 = field(7);
    assert_eq!(f7.eps().a, BigInt::from(16));
    let z = z_norm_plus_one(&f7, c(2.0, 0.0), &opts).unwrap();
    assert!((z.value.re - direct_sum(7, 2.0, 1..40)).abs() < 1e-10);
    assert!(matches!(
        z_odd_binomial(&f3, c(2.0, 0.0), &opts),
        Err(Error::NormPlusOne)
    ));
    assert!(matches!(
        z_norm_plus_one(&field(5), c(2.0, 0.0), &opts),
        Err(Error::NormMinusOne)
    ));
}

#[test]
fn direct_partial_sums() {
    let f5 = field(5);
    let z = z_direct(&f5, c(2.0, 0.0), Parity::Odd, 40).unwrap();
    assert!((z.value.re - 1.296_930_024_811_433).abs() < 1e-14);
    assert!(z.tail_bound < 1e-30);
    let z = z_direct(&field(10), c(1.0, 0.0), Parity::Even, 30).unwrap();
    assert!((z.value.re - direct_sum(10, 1.0, (1..30).map(|n| 2 * n))).abs() < 1e-14);
    assert!(z.value.re > 1.0 / 6.0 + 1.0 / 228.0);
    assert!(matches!(
        z_direct(&f5, c(-1.0, 0.0), Parity::Odd, 10),
        Err(Error::OutOfRegion { .. })
    ));
}

#[test]
fn poisson_continuations() {
    let opts = EvalOptions::default();
    let f5 = field(5);
    let f10 = field(10);
    let cases: [(&QuadraticField, Complex, f64); 3] = [
        (&f5, c(2.0, 0.0), 1e-10),
        (&f5, c(-3.0, 0.0), 1e-10),
        (&f10, c(-0.5, 2.0), 1e-8),
    ];
    for (f, s, tol) in cases {
        let p = z_odd_poisson(f, s, &opts).unwrap().value;
        let b = z_odd_binomial(f, s, &opts).unwrap().value;
        assert!((p - b).norm() < tol, "D={} s={s}", f.d());
    }
    assert!(
        z_odd_poisson(&f5, c(-3.0, 0.0), &opts)
            .unwrap()
            .value
            .norm()
            < 1e-10
    );

    assert!(
        (z_even_poisson(&f5, c(-1.0, 0.0), &opts).unwrap().value - c(-1.0, 0.0)).norm() < 1e-10
    );
    for (f, s) in [(&f5, c(0.1, 0.0)), (&f10, c(-2.5, 0.0))] {
        let p = z_even_poisson(f, s, &opts).unwrap().value;
        let b = z_even_binomial(f, s, &opts).unwrap().value;
        assert!((p - b).norm() < 1e-8, "D={} s={s}", f.d());
    }
}

#[test]
fn pole_table() {
    let f5 = field(5);
    let l = f5.log_eps();
    let origin = pole_spec(&f5, 0, 0);
    assert!((origin.residue_odd.unwrap().re - 0.5 / l).abs() < 1e-14);
    assert!((origin.residue_odd.unwrap().re - 1.039_043).abs() < 1e-6);
    let canceled = pole_spec(&f5, 0, 1);
    assert!(!canceled.survives_in_combined);
    assert_eq!(canceled.residue_combined, c(0.0, 0.0));
    for m in [-4, -2, 0, 2, 4] {
        assert!(pole_spec(&f5, 0, m).survives_in_combined);
    }
    assert_eq!(pole_lattice(&f5, 1, 1, PoleSet::Odd).unwrap().len(), 6);
    assert!(pole_lattice(&f5, 2, 3, PoleSet::Combined)
        .unwrap()
        .iter()
        .all(|p| (p.k as i64 + p.m).rem_euclid(2) == 0));
}

#[test]
fn contour_residues() {
    let opts = EvalOptions::default();
    let f5 = field(5);
    let l = f5.log_eps();
    let r = residue_numeric(&f5, ResidueTarget::OddBinomial, c(0.0, 0.0), 1e-3, &opts).unwrap();
    assert!((r - c(0.5 / l, 0.0)).norm() < 1e-9);
    let at = c(0.0, PI / l);
    let r = residue_numeric(&f5, ResidueTarget::CombinedBinomial, at, 1e-3, &opts).unwrap();
    assert!(r.norm() < 1e-8);
    let r = residue_numeric(&f5, ResidueTarget::EvenPoisson, at, 1e-3, &opts).unwrap();
    let expect = pole_spec(&f5, 0, 1).residue_even.unwrap();
    assert!((r - expect).norm() < 1e-6 * expect.norm());
    assert!(matches!(
        residue_numeric(&f5, ResidueTarget::OddBinomial, c(0.0, 0.0), 4.0, &opts),
        Err(Error::ContourThroughPole)
    ));
}

#[test]
fn shifted_convolution_sums() {
    let f5 = field(5);
    let s = c(2.0, 0.0);
    let z = z_odd_shifted_convolution(&f5, s, 10_000).unwrap();
    let d = z_direct(&f5, s, Parity::Odd, 40).unwrap();
    assert!((z.value - d.value).norm() < z.tail_bound);
    let z = z_even_shifted_convolution(&f5, s, 10_000).unwrap();
    let d = z_direct(&f5, s, Parity::Even, 40).unwrap();
    assert!((z.value - d.value).norm() < z.tail_bound);

    let f10 = field(10);
    assert_eq!(
        shifted_convolution_support(&f10, 10_000, true),
        vec![1, 37 * 37]
    );
    assert_eq!(shifted_convolution_support(&f10, 10_000, false), vec![36]);
    let z = z_even_shifted_convolution(&f10, s, 10_000).unwrap();
    let d = z_direct(&f10, s, Parity::Even, 30).unwrap();
    assert!((z.value - d.value).norm() < z.tail_bound);

    let z = z_odd_shifted_convolution(&f5, c(1.0, 0.0), 1_000_000).unwrap();
    let d = z_direct(&f5, c(1.0, 0.0), Parity::Odd, 100).unwrap();
    assert!((z.value - d.value).norm() < z.tail_bound + d.tail_bound);
}

#[test]
fn special_values() {
    let rational = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    for (d, expect) in [
        (5, rational(-1, 1)),
        (10, rational(-1, 6)),
        (2, rational(-1, 2)),
        (13, rational(-1, 3)),
    ] {
        let v = special_value_even_minus_one(&field(d)).unwrap();
        assert_eq!(v.combined_rational, Some(expect.clone()), "D={d}");
        assert!(v.galois_difference.is_zero());
        let x: f64 = (expect.numer().to_string().parse::<f64>().unwrap())
            / expect.denom().to_string().parse::<f64>().unwrap();
        assert!((v.value - x).abs() < 1e-14);
    }
}
