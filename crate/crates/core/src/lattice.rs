//! The half-lattice of poles s = -2k + i c m / log(eps), k >= 0.

use std::f64::consts::PI;

use crate::complexfn::Complex;
use crate::error::{Error, LatticePoint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// Poles of Z^odd and Z^even: c = pi, every (k, m).
    Split,
    /// Poles of Z = Z^odd + Z^even: c = pi, only m + k even survive.
    Combined,
    /// Poles of the full zeta function of a norm +1 field: c = 2 pi.
    NormPlusOne,
}

impl LatticeKind {
    fn im_step(self, log_eps: f64) -> f64 {
        match self {
            LatticeKind::Split | LatticeKind::Combined => PI / log_eps,
            LatticeKind::NormPlusOne => 2.0 * PI / log_eps,
        }
    }

    pub fn contains(self, k: u32, m: i64) -> bool {
        match self {
            LatticeKind::Combined => (m + k as i64).rem_euclid(2) == 0,
            _ => true,
        }
    }
}

pub fn lattice_point(kind: LatticeKind, log_eps: f64, k: u32, m: i64) -> LatticePoint {
    LatticePoint {
        k,
        m,
        location: Complex::new(-2.0 * k as f64 + 0.0, m as f64 * kind.im_step(log_eps)),
    }
}

/// The lattice pole nearest to `s` and its distance.
pub fn nearest_pole(kind: LatticeKind, log_eps: f64, s: Complex) -> (LatticePoint, f64) {
    let step = kind.im_step(log_eps);
    let kc = (-s.re / 2.0).round().max(0.0) as i64;
    let mc = (s.im / step).round() as i64;
    let mut best: Option<(LatticePoint, f64)> = None;
    for k in (kc - 1).max(0)..=kc + 1 {
        for m in mc - 2..=mc + 2 {
            if !kind.contains(k as u32, m) {
                continue;
            }
            let p = lattice_point(kind, log_eps, k as u32, m);
            let d = (p.location - s).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((p, d));
            }
        }
    }
    best.expect("candidate set is never empty")
}

/// Distance to the nearest pole, or `PoleProximity` inside the guard radius.
pub fn check_guard(kind: LatticeKind, log_eps: f64, s: Complex, radius: f64) -> Result<f64> {
    let (pole, distance) = nearest_pole(kind, log_eps, s);
    if distance <= radius {
        Err(Error::PoleProximity { pole, distance })
    } else {
        Ok(distance)
    }
}

/// Distance from `s` to the nearest lattice pole other than `exclude`.
pub fn nearest_other_pole(kind: LatticeKind, log_eps: f64, s: Complex, exclude: (u32, i64)) -> f64 {
    let step = kind.im_step(log_eps);
    let kc = (-s.re / 2.0).round().max(0.0) as i64;
    let mc = (s.im / step).round() as i64;
    let mut best = f64::INFINITY;
    for k in (kc - 2).max(0)..=kc + 2 {
        for m in mc - 3..=mc + 3 {
            if !kind.contains(k as u32, m) || (k as u32, m) == exclude {
                continue;
            }
            let p = lattice_point(kind, log_eps, k as u32, m);
            best = best.min((p.location - s).norm());
        }
    }
    best
}
