use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::quad;
use crate::seqcore::WeightSequence;

use super::series::{classify_series_with, SeriesKind};
use super::{fitted_rule, DivergenceVerdict, Route, Status, VerdictConfig};

const SEGMENTS: usize = 16;
const MAX_KINKS: usize = 64;
const MAX_PANELS: usize = 4000;
const MIN_ARGMAX: usize = 8;
const MIN_FIT_POINTS: usize = 8;

/// Value of the truncated logarithmic integral and the divergence verdict
/// for the untruncated one.
#[derive(Debug, Clone, PartialEq)]
pub struct LogIntegral {
    pub value: f64,
    pub abs_err: f64,
    pub verdict: DivergenceVerdict,
}

/// `int_{r_lo}^{r_hi} log T(r) / r^{1 + 1/d} dr` with `T` the Ostrowski
/// function of `M` (or of `(p! M_p)` when `tilde` is set) and `d = exponent_den`.
pub fn log_integral(
    m: &WeightSequence,
    exponent_den: f64,
    tilde: bool,
    r_lo: f64,
    r_hi: f64,
    range: usize,
) -> Result<LogIntegral> {
    log_integral_with(
        m,
        exponent_den,
        tilde,
        r_lo,
        r_hi,
        range,
        &VerdictConfig::default(),
    )
}

pub fn log_integral_with(
    m: &WeightSequence,
    exponent_den: f64,
    tilde: bool,
    r_lo: f64,
    r_hi: f64,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<LogIntegral> {
    if !(exponent_den > 0.0) || !exponent_den.is_finite() {
        return Err(Error::Domain {
            what: "exponent denominator",
            value: exponent_den,
        });
    }
    if !(r_lo > 0.0) || !r_lo.is_finite() {
        return Err(Error::Domain {
            what: "r_lo",
            value: r_lo,
        });
    }
    if !(r_hi > r_lo) || !r_hi.is_finite() {
        return Err(Error::Domain {
            what: "r_hi",
            value: r_hi,
        });
    }
    m.ensure_index("integral range", range)?;
    let seq = if tilde { m.tilde() } else { m.clone() };
    let convex = range <= seq.log_convex_upto();
    let log_t = |u: f64| {
        seq.ostrowski(math::exp(u), range)
            .map(|v| v.log_t)
            .unwrap_or(f64::NAN)
    };
    let integrand = |u: f64| log_t(u) * math::exp(-u / exponent_den);

    let (u_lo, u_hi) = (math::ln(r_lo), math::ln(r_hi));
    let width = (u_hi - u_lo) / SEGMENTS as f64;
    let mut value = 0.0;
    let mut abs_err = 0.0;
    let mut partial_sums = Vec::with_capacity(SEGMENTS);
    for k in 0..SEGMENTS {
        let a = u_lo + width * k as f64;
        let b = if k + 1 == SEGMENTS { u_hi } else { a + width };
        let breaks = if convex {
            kinks(&seq, a, b, range)
        } else {
            Vec::new()
        };
        match quad::integrate(
            integrand,
            a,
            b,
            &breaks,
            cfg.integral_rel_tol,
            1e-15,
            MAX_PANELS,
        ) {
            Ok(r) => {
                value += r.value;
                abs_err += r.abs_err;
            }
            Err(Error::Quadrature {
                partial,
                abs_err: e,
            }) => {
                return Err(Error::Quadrature {
                    partial: value + partial,
                    abs_err: abs_err + e,
                });
            }
            Err(e) => return Err(e),
        }
        partial_sums.push((math::exp(b), value));
    }

    let mut verdict = growth_fit(&seq, exponent_den, u_lo, u_hi, range, cfg);
    verdict.partial_sums = partial_sums;
    if verdict.status == Status::Inconclusive && (verdict.sigma_hat - 1.0).abs() <= cfg.sigma_margin
    {
        let kind = if tilde {
            SeriesKind::Korenbljum
        } else {
            SeriesKind::Mandelbrojt
        };
        let series_range = range.min(m.p_max().saturating_sub(1));
        if let Ok(v) = classify_series_with(m, 1.0 / exponent_den, kind, series_range, cfg) {
            if v.status != Status::Inconclusive {
                verdict.status = v.status;
                verdict.resolved_by_series = true;
            }
        }
    }
    Ok(LogIntegral {
        value,
        abs_err,
        verdict,
    })
}

/// Points `u = log m_p` in `(a, b)` where the maximizing index changes.
fn kinks(seq: &WeightSequence, a: f64, b: f64, range: usize) -> Vec<f64> {
    let Ok(start) = seq.ostrowski(math::exp(a), range) else {
        return Vec::new();
    };
    (start.argmax + 1..=range)
        .take(MAX_KINKS)
        .map(|p| seq.lq(p))
        .take_while(|u| *u < b)
        .filter(|u| *u > a)
        .collect()
}

/// Fits `log r ~ c + A log(nu + 1/2) + B log log(e + nu + 1/2)` where `nu(r)`
/// is the maximizing index of the Ostrowski function on the upper half of the
/// radius range; the integral behaves like the series with `sigma = A/d`,
/// `tau = B/d`.
fn growth_fit(
    seq: &WeightSequence,
    d: f64,
    u_lo: f64,
    u_hi: f64,
    range: usize,
    cfg: &VerdictConfig,
) -> DivergenceVerdict {
    let u_mid = 0.5 * (u_lo + u_hi);
    let n = cfg.integral_grid.max(2);
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for k in 0..n {
        let u = u_mid + (u_hi - u_mid) * k as f64 / (n - 1) as f64;
        let Ok(v) = seq.ostrowski(math::exp(u), range) else {
            continue;
        };
        if v.argmax < MIN_ARGMAX || v.saturated {
            continue;
        }
        let x = v.argmax as f64 + 0.5;
        rows.push(alloc::vec![1.0, math::ln(x), math::lnln_e(x)]);
        y.push(u);
    }
    let fit = (rows.len() >= MIN_FIT_POINTS)
        .then(|| math::least_squares(&rows, &y))
        .flatten();
    match fit {
        Some(f) => {
            let (sigma, tau) = (f.coef[1] / d, f.coef[2] / d);
            DivergenceVerdict {
                status: fitted_rule(sigma, f.std_err[1] / d, tau, cfg),
                route: Route::NumericFit,
                sigma_hat: sigma,
                tau_hat: tau,
                sigma_std_err: f.std_err[1] / d,
                tau_std_err: f.std_err[2] / d,
                partial_sums: Vec::new(),
                resolved_by_series: false,
            }
        }
        None => DivergenceVerdict {
            status: Status::Inconclusive,
            route: Route::NumericFit,
            sigma_hat: f64::NAN,
            tau_hat: f64::NAN,
            sigma_std_err: f64::NAN,
            tau_std_err: f64::NAN,
            partial_sums: Vec::new(),
            resolved_by_series: false,
        },
    }
}
