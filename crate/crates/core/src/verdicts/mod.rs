//! Convergence classification of the Korenbljum and Mandelbrojt series and of
//! the logarithmic integrals, and the quasi-analyticity verdicts built on them.

mod integral;
mod qa;
mod series;

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use integral::{log_integral, log_integral_with, LogIntegral};
pub use qa::{
    check_watson_condition, check_watson_condition_with, quasianalytic_verdict,
    quasianalytic_verdict_with, s_quasianalytic_verdict, s_quasianalytic_verdict_with,
    sufficient_sqa, sufficient_sqa_with, watson_verdict, watson_verdict_with, Criterion,
    FactorVerdict, QaKind, QaMode, QaVerdict, WatsonCondition, WatsonConditionReport,
};
pub use series::{
    bertrand_rule, classify_series, classify_series_numeric, classify_series_with,
    korenbljum_terms, series_log_term, SeriesKind,
};

/// Normalized openings `gamma_j` of the factor sectors of a polysector.
#[derive(Debug, Clone, PartialEq)]
pub struct PolysectorOpening {
    gamma: Vec<f64>,
}

impl PolysectorOpening {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Invalid(
                "a polysector needs at least one factor".into(),
            ));
        }
        if let Some(g) = gamma.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return Err(Error::Domain {
                what: "gamma",
                value: *g,
            });
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn gamma_under(&self) -> f64 {
        self.gamma.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Diverges,
    Converges,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Diverges => "diverges",
            Status::Converges => "converges",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Exponents known in closed form (built-in families).
    Symbolic,
    /// Exponents fitted from sampled terms.
    NumericFit,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Symbolic => "symbolic",
            Route::NumericFit => "numeric_fit",
        }
    }
}

/// Classification of a series or integral against the model
/// `a_p ~ C p^{-sigma} (log p)^{-tau}`, with the evidence behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceVerdict {
    pub status: Status,
    pub route: Route,
    pub sigma_hat: f64,
    pub tau_hat: f64,
    pub sigma_std_err: f64,
    pub tau_std_err: f64,
    /// `(P, S_P)` for series, `(r, integral up to r)` for integrals.
    pub partial_sums: Vec<(f64, f64)>,
    /// The fitted exponents fell in the undecided band and the status was
    /// taken from the matching series.
    pub resolved_by_series: bool,
}

/// Tolerances shared by the classifiers and verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictConfig {
    /// Half-width of the undecided band around `sigma = 1` for fitted exponents.
    pub sigma_margin: f64,
    /// Half-width of the undecided band around `tau = 1` for fitted exponents.
    pub tau_margin: f64,
    /// Fitted `sigma` closer than this to 1 is treated as exactly 1.
    pub sigma_exact: f64,
    /// Closed-form exponents closer than this to 1 are snapped to 1.
    pub symbolic_snap: f64,
    /// Relative band around the growth index in which Watson-type verdicts abstain.
    pub watson_tol: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    /// Number of radii sampled for the integral growth fit.
    pub integral_grid: usize,
    pub integral_rel_tol: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self {
            sigma_margin: 0.05,
            tau_margin: 0.15,
            sigma_exact: 0.01,
            symbolic_snap: 1e-6,
            watson_tol: 0.02,
            r_lo: 1.0,
            r_hi: 1e8,
            integral_grid: 64,
            integral_rel_tol: 1e-6,
        }
    }
}

/// Below this, a fitted `sigma - 1` is indistinguishable from zero.
const SIGMA_NOISE_FLOOR: f64 = 1e-9;

/// Applies the Bertrand rule to fitted exponents with the configured margins.
/// Near `sigma = 1` the log exponent only decides when it agrees with the
/// side of 1 that `sigma` falls on, or when the offset is within fit noise.
pub(crate) fn fitted_rule(sigma: f64, sigma_err: f64, tau: f64, cfg: &VerdictConfig) -> Status {
    if sigma > 1.0 + cfg.sigma_margin {
        return Status::Converges;
    }
    if sigma < 1.0 - cfg.sigma_margin {
        return Status::Diverges;
    }
    let d = sigma - 1.0;
    if !(d.abs() <= cfg.sigma_exact) {
        return Status::Inconclusive;
    }
    let noise = if sigma_err.is_finite() {
        (4.0 * sigma_err).max(SIGMA_NOISE_FLOOR)
    } else {
        SIGMA_NOISE_FLOOR
    };
    let exact = d.abs() <= noise;
    if tau > 1.0 + cfg.tau_margin && (exact || d > 0.0) {
        Status::Converges
    } else if tau < 1.0 - cfg.tau_margin && (exact || d < 0.0) {
        Status::Diverges
    } else {
        Status::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opening_validation() {
        assert!(PolysectorOpening::new(alloc::vec![]).is_err());
        assert!(PolysectorOpening::new(alloc::vec![1.0, -1.0]).is_err());
        let s = PolysectorOpening::new(alloc::vec![0.5, 2.0, 1.0]).unwrap();
        assert_eq!((s.gamma_bar(), s.gamma_under()), (2.0, 0.5));
    }

    #[test]
    fn fitted_rule_bands() {
        let c = VerdictConfig::default();
        assert_eq!(fitted_rule(1.2, 0.0, 0.0, &c), Status::Converges);
        assert_eq!(fitted_rule(0.8, 5.0, 0.0, &c), Status::Diverges);
        assert_eq!(fitted_rule(1.001, 0.0, 2.0, &c), Status::Converges);
        assert_eq!(fitted_rule(0.999, 0.0, 0.2, &c), Status::Diverges);
        assert_eq!(fitted_rule(1.0, 0.0, 1.0, &c), Status::Inconclusive);
        assert_eq!(fitted_rule(1.03, 0.0, 0.0, &c), Status::Inconclusive);
        // tau against a significant offset cannot decide
        assert_eq!(fitted_rule(1.0025, 1e-12, 0.0, &c), Status::Inconclusive);
        assert_eq!(fitted_rule(0.998, 1e-6, 3.0, &c), Status::Inconclusive);
        // unless the offset is within the fit's own uncertainty
        assert_eq!(fitted_rule(1.0025, 1e-3, 0.0, &c), Status::Diverges);
        assert_eq!(fitted_rule(1.0 + 1e-12, 1e-14, 0.0, &c), Status::Diverges);
    }
}
