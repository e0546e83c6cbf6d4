use num_complex::Complex64;
use thiserror::Error;

/// A point of the pole lattice s = -2k + i c m / log(eps), with c = pi for the
/// split zeta functions and c = 2 pi for the norm +1 full zeta function.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LatticePoint {
    pub k: u32,
    pub m: i64,
    pub location: Complex64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("D = {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("D = {0} is not a valid discriminant seed (need D >= 2)")]
    InvalidD(u64),
    #[error("the fundamental unit has norm +1; the odd/even split is unavailable")]
    NormPlusOne,
    #[error("the fundamental unit has norm -1; use the odd/even split instead")]
    NormMinusOne,
    #[error("s is within {distance:e} of the pole at k = {}, m = {}", pole.k, pole.m)]
    PoleProximity { pole: LatticePoint, distance: f64 },
    #[error("gamma has a pole at the nonpositive integer {0}")]
    PoleAtNonpositiveInteger(i64),
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,
    #[error("s = {re}{im:+}i lies outside the region of validity")]
    OutOfRegion { re: f64, im: f64 },
    #[error("s is within the exclusion disk around s = 1 of the strip formula")]
    NearOneSingularity,
    #[error("the left-half-plane series converges too slowly for Re s = {0}")]
    TooSlowConvergence(f64),
    #[error("the contour passes within the guard radius of another pole")]
    ContourThroughPole,
    #[error("series did not reach the requested tolerance within {0} terms")]
    NoConvergence(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short stable name, used for diagnostics and CLI failure markers.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::InvalidD(_) => "InvalidD",
            Error::NormPlusOne => "NormPlusOne",
            Error::NormMinusOne => "NormMinusOne",
            Error::PoleProximity { .. } => "PoleProximity",
            Error::PoleAtNonpositiveInteger(_) => "PoleAtNonpositiveInteger",
            Error::PoleAtOne => "PoleAtOne",
            Error::OutOfRegion { .. } => "OutOfRegion",
            Error::NearOneSingularity => "NearOneSingularity",
            Error::TooSlowConvergence(_) => "TooSlowConvergence",
            Error::ContourThroughPole => "ContourThroughPole",
            Error::NoConvergence(_) => "NoConvergence",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    /// True for failures caused by the input domain rather than by numerics.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NotSquarefree(_)
                | Error::InvalidD(_)
                | Error::NormPlusOne
                | Error::NormMinusOne
                | Error::OutOfRegion { .. }
                | Error::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
