use alloc::vec::Vec;

use crate::error::{Axiom, Error, Result};
use crate::math;
use crate::seqcore::{tail_indices, Family, WeightSequence};

use super::{fitted_rule, DivergenceVerdict, Route, Status, VerdictConfig};

const MIN_SERIES_RANGE: usize = 64;
const FIT_SAMPLES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    /// Terms `(M_p / ((p+1) M_{p+1}))^e`.
    Korenbljum,
    /// Terms `(M_p / M_{p+1})^e`.
    Mandelbrojt,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Korenbljum => "korenbljum",
            SeriesKind::Mandelbrojt => "mandelbrojt",
        }
    }
}

/// `log` of the `p`-th Korenbljum term at opening `gamma`, i.e. with
/// exponent `1/(gamma+1)`.
pub fn korenbljum_terms(m: &WeightSequence, gamma: f64, p: usize) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain {
            what: "gamma",
            value: gamma,
        });
    }
    series_log_term(m, 1.0 / (gamma + 1.0), SeriesKind::Korenbljum, p)
}

/// `log` of the `p`-th term of the given series with the given exponent.
pub fn series_log_term(
    m: &WeightSequence,
    exponent: f64,
    kind: SeriesKind,
    p: usize,
) -> Result<f64> {
    m.ensure_index("series term (needs p+1)", p + 1)?;
    Ok(log_term(m, exponent, kind, p))
}

#[inline]
fn log_term(m: &WeightSequence, exponent: f64, kind: SeriesKind, p: usize) -> f64 {
    let q = m.lq(p + 1);
    match kind {
        SeriesKind::Korenbljum => -exponent * (math::ln(p as f64 + 1.0) + q),
        SeriesKind::Mandelbrojt => -exponent * q,
    }
}

/// Exact convergence rule for `sum p^{-sigma} (log p)^{-tau}`.
pub fn bertrand_rule(sigma: f64, tau: f64) -> Status {
    if sigma > 1.0 || (sigma == 1.0 && tau > 1.0) {
        Status::Converges
    } else {
        Status::Diverges
    }
}

fn symbolic_exponents(m: &WeightSequence, exponent: f64, kind: SeriesKind) -> Option<(f64, f64)> {
    let (alpha, beta) = match m.family() {
        Family::Gevrey { alpha } => (alpha, 0.0),
        Family::LogGevrey { alpha, beta } => (alpha, beta),
        Family::Custom => return None,
    };
    let a = match kind {
        SeriesKind::Korenbljum => alpha + 1.0,
        SeriesKind::Mandelbrojt => alpha,
    };
    Some((exponent * a, exponent * beta))
}

fn snap(v: f64, tol: f64) -> f64 {
    if (v - 1.0).abs() <= tol {
        1.0
    } else {
        v
    }
}

fn validate(m: &WeightSequence, exponent: f64, range: usize) -> Result<()> {
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(Error::Domain {
            what: "series exponent",
            value: exponent,
        });
    }
    if range < MIN_SERIES_RANGE {
        return Err(Error::Range {
            what: "series range (needs >= 64)",
            index: range,
            limit: MIN_SERIES_RANGE,
        });
    }
    m.ensure_index("series range (needs P+1)", range + 1)
}

/// `(P, S_P)` at `P = 64, 128, ...` and at `range` itself.
fn partial_sums(
    m: &WeightSequence,
    exponent: f64,
    kind: SeriesKind,
    range: usize,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut acc = 0.0;
    let mut next = MIN_SERIES_RANGE;
    for p in 0..=range {
        acc += math::exp(log_term(m, exponent, kind, p));
        if p == next || p == range {
            out.push((p as f64, acc));
            next = next.saturating_mul(2);
        }
    }
    out
}

/// Classifies the series with the closed-form exponents for built-in families,
/// and with a tail fit otherwise.
pub fn classify_series(
    m: &WeightSequence,
    exponent: f64,
    kind: SeriesKind,
    range: usize,
) -> Result<DivergenceVerdict> {
    classify_series_with(m, exponent, kind, range, &VerdictConfig::default())
}

pub fn classify_series_with(
    m: &WeightSequence,
    exponent: f64,
    kind: SeriesKind,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<DivergenceVerdict> {
    validate(m, exponent, range)?;
    match symbolic_exponents(m, exponent, kind) {
        Some((sigma, tau)) => {
            let (sigma, tau) = (snap(sigma, cfg.symbolic_snap), snap(tau, cfg.symbolic_snap));
            Ok(DivergenceVerdict {
                status: bertrand_rule(sigma, tau),
                route: Route::Symbolic,
                sigma_hat: sigma,
                tau_hat: tau,
                sigma_std_err: 0.0,
                tau_std_err: 0.0,
                partial_sums: partial_sums(m, exponent, kind, range),
                resolved_by_series: false,
            })
        }
        None => classify_series_numeric(m, exponent, kind, range, cfg),
    }
}

/// Fits `log a_p` on `1, -log(p+1), -log log(e+p+1)` over `[P/4, P]`.
/// Refuses sequences that are not log-convex on `[0, P+1]`.
pub fn classify_series_numeric(
    m: &WeightSequence,
    exponent: f64,
    kind: SeriesKind,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<DivergenceVerdict> {
    validate(m, exponent, range)?;
    if m.log_convex_upto() < range + 1 {
        return Err(Error::Axiom {
            axiom: Axiom::LogConvexity,
            checked_range: range + 1,
            witness: Some(m.log_convex_upto()),
        });
    }
    let idx = tail_indices(range / 4, range, FIT_SAMPLES);
    let rows: Vec<Vec<f64>> = idx
        .iter()
        .map(|&p| {
            let x = p as f64 + 1.0;
            alloc::vec![1.0, -math::ln(x), -math::lnln_e(x)]
        })
        .collect();
    let y: Vec<f64> = idx
        .iter()
        .map(|&p| log_term(m, exponent, kind, p))
        .collect();
    let fit = math::least_squares(&rows, &y)
        .ok_or_else(|| Error::Invalid("series tail fit is rank deficient".into()))?;
    let (sigma, tau) = (fit.coef[1], fit.coef[2]);
    Ok(DivergenceVerdict {
        status: fitted_rule(sigma, fit.std_err[1], tau, cfg),
        route: Route::NumericFit,
        sigma_hat: sigma,
        tau_hat: tau,
        sigma_std_err: fit.std_err[1],
        tau_std_err: fit.std_err[2],
        partial_sums: partial_sums(m, exponent, kind, range),
        resolved_by_series: false,
    })
}
