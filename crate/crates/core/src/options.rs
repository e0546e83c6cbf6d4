use crate::poisson::RegionSelector;

/// Settings shared by every evaluation routine.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    /// Relative truncation tolerance for series.
    pub tol: f64,
    /// Evaluations closer than this to a lattice pole fail with `PoleProximity`.
    pub pole_guard_radius: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    pub regions: RegionSelector,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-15,
            pole_guard_radius: 1e-3,
            max_terms: 20_000,
            regions: RegionSelector::default(),
        }
    }
}

impl EvalOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn guard(mut self, radius: f64) -> Self {
        self.pole_guard_radius = radius;
        self
    }
}
