//! Weight sequences `M = (M_p)` stored as `log M_p`, with the structural
//! checks, the Ostrowski sup-transform and the growth index.

mod axioms;
mod growth;
mod ostrowski;

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

pub use axioms::{AxiomReport, LOG_CONVEXITY_SLACK, STABILITY_REL_TOL};
pub(crate) use growth::tail_indices;
pub use growth::{GrowthIndexEstimate, GrowthSearch};
pub use ostrowski::OstrowskiValue;

/// Default evaluable range for lazily evaluated Gevrey sequences.
pub const DEFAULT_GEVREY_P_MAX: usize = 1 << 20;
/// Default evaluable range for tabulated log-Gevrey sequences.
pub const DEFAULT_LOG_GEVREY_P_MAX: usize = 1 << 17;

const GEVREY_P_MAX_LIMIT: usize = if usize::BITS > 53 {
    1 << 53
} else {
    usize::MAX
};
const TABLE_P_MAX_LIMIT: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `M_p = p!^alpha`.
    Gevrey {
        alpha: f64,
    },
    /// `M_p = p!^alpha * prod_{k<=p} log(e+k)^beta`.
    LogGevrey {
        alpha: f64,
        beta: f64,
    },
    Custom,
}

#[derive(Debug)]
struct Table {
    log_m: Vec<f64>,
    // log_q[0] is unused and kept at zero
    log_q: Vec<f64>,
}

/// A weight sequence with `M_0 = 1`, evaluable on `0..=p_max`.
///
/// `log M_p` is the sum of three parts: `fact * log p!`, `beta * sum_{k<=p}
/// log log(e+k)` and an optional tabulated remainder. Built-in families keep
/// the first two in closed form, so their quotients are exact; tables are
/// built once at construction and shared, which makes the value cheap to
/// clone and safe to share across threads.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    family: Family,
    p_max: usize,
    fact: f64,
    beta: f64,
    lnln_cum: Option<Arc<Vec<f64>>>,
    table: Option<Arc<Table>>,
    convex_upto: usize,
}

fn check_param(what: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::Domain { what, value: v })
    }
}

fn lnln_cumulative(p_max: usize) -> Vec<f64> {
    let mut acc = 0.0;
    (0..=p_max)
        .map(|k| {
            acc += math::lnln_e(k as f64);
            acc
        })
        .collect()
}

impl WeightSequence {
    /// Gevrey sequence `p!^alpha`, evaluated lazily.
    pub fn gevrey(alpha: f64, p_max: usize) -> Result<Self> {
        let alpha = check_param("alpha", alpha)?;
        if p_max == 0 || p_max > GEVREY_P_MAX_LIMIT {
            return Err(Error::Range {
                what: "P_max",
                index: p_max,
                limit: GEVREY_P_MAX_LIMIT,
            });
        }
        Ok(Self {
            family: Family::Gevrey { alpha },
            p_max,
            fact: alpha,
            beta: 0.0,
            lnln_cum: None,
            table: None,
            convex_upto: p_max,
        })
    }

    /// `p!^alpha * prod_{k=0}^{p} log(e+k)^beta`.
    pub fn log_gevrey(alpha: f64, beta: f64, p_max: usize) -> Result<Self> {
        let alpha = check_param("alpha", alpha)?;
        let beta = check_param("beta", beta)?;
        if p_max == 0 || p_max > TABLE_P_MAX_LIMIT {
            return Err(Error::Range {
                what: "P_max",
                index: p_max,
                limit: TABLE_P_MAX_LIMIT,
            });
        }
        Ok(Self {
            family: Family::LogGevrey { alpha, beta },
            p_max,
            fact: alpha,
            beta,
            lnln_cum: (beta != 0.0).then(|| Arc::new(lnln_cumulative(p_max))),
            table: None,
            convex_upto: p_max,
        })
    }

    /// Custom sequence from `log M_0, ..., log M_N`; rescaled so that `M_0 = 1`.
    pub fn from_log_m(log_m: Vec<f64>) -> Result<Self> {
        if log_m.len() < 2 {
            return Err(Error::Invalid(
                "a custom sequence needs at least two terms".into(),
            ));
        }
        if let Some(v) = log_m.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                what: "logM",
                value: *v,
            });
        }
        let base = log_m[0];
        let log_m: Vec<f64> = log_m.iter().map(|v| v - base).collect();
        let mut log_q = Vec::with_capacity(log_m.len());
        log_q.push(0.0);
        log_q.extend(log_m.windows(2).map(|w| w[1] - w[0]));
        Ok(Self::from_table(Table { log_m, log_q }))
    }

    /// Custom sequence from `log m_1, ..., log m_N` where `m_p = M_p / M_{p-1}`.
    pub fn from_log_quotients(log_q: &[f64]) -> Result<Self> {
        if log_q.is_empty() {
            return Err(Error::Invalid(
                "a custom sequence needs at least one quotient".into(),
            ));
        }
        if let Some(v) = log_q.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                what: "logm",
                value: *v,
            });
        }
        let mut q = Vec::with_capacity(log_q.len() + 1);
        q.push(0.0);
        q.extend_from_slice(log_q);
        let mut acc = 0.0;
        let log_m = q
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        Ok(Self::from_table(Table { log_m, log_q: q }))
    }

    fn from_table(table: Table) -> Self {
        let mut s = Self {
            family: Family::Custom,
            p_max: table.log_m.len() - 1,
            fact: 0.0,
            beta: 0.0,
            lnln_cum: None,
            table: Some(Arc::new(table)),
            convex_upto: 0,
        };
        s.convex_upto = s.scan_convexity();
        s
    }

    fn scan_convexity(&self) -> usize {
        if self.table.is_none() {
            return self.p_max;
        }
        (1..self.p_max)
            .find(|&n| !self.convex_at(n))
            .unwrap_or(self.p_max)
    }

    #[inline]
    fn convex_at(&self, n: usize) -> bool {
        2.0 * self.lm(n) <= self.lm(n - 1) + self.lm(n + 1) + LOG_CONVEXITY_SLACK
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    /// Largest `N` such that the sequence is logarithmically convex on `[0, N]`.
    pub fn log_convex_upto(&self) -> usize {
        self.convex_upto
    }

    /// `log M_p`.
    pub fn log_m(&self, p: usize) -> Result<f64> {
        self.ensure_index("logM", p)?;
        Ok(self.lm(p))
    }

    /// `log m_p = log M_p - log M_{p-1}` for `1 <= p <= P_max`.
    pub fn log_quotient(&self, p: usize) -> Result<f64> {
        if p == 0 {
            return Err(Error::Range {
                what: "logm (starts at 1)",
                index: 0,
                limit: self.p_max,
            });
        }
        self.ensure_index("logm", p)?;
        Ok(self.lq(p))
    }

    pub(crate) fn ensure_index(&self, what: &'static str, p: usize) -> Result<()> {
        if p > self.p_max {
            Err(Error::Range {
                what,
                index: p,
                limit: self.p_max,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn lm(&self, p: usize) -> f64 {
        let mut v = 0.0;
        if self.fact != 0.0 {
            v += self.fact * math::ln_factorial(p as u64);
        }
        if let Some(cum) = &self.lnln_cum {
            v += self.beta * cum[p];
        }
        if let Some(t) = &self.table {
            v += t.log_m[p];
        }
        v
    }

    #[inline]
    pub(crate) fn lq(&self, p: usize) -> f64 {
        let mut v = 0.0;
        if self.fact != 0.0 {
            v += self.fact * math::ln(p as f64);
        }
        if self.beta != 0.0 {
            v += self.beta * math::lnln_e(p as f64);
        }
        if let Some(t) = &self.table {
            v += t.log_q[p];
        }
        v
    }

    /// The sequence `(p! M_p)`.
    pub fn tilde(&self) -> Self {
        let mut s = self.clone();
        s.fact += 1.0;
        s.family = match self.family {
            Family::Gevrey { alpha } => Family::Gevrey { alpha: alpha + 1.0 },
            _ => Family::Custom,
        };
        s.convex_upto = s.scan_convexity();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_small_values() {
        let g = WeightSequence::gevrey(1.0, 100).unwrap();
        assert_eq!(g.log_m(0).unwrap(), 0.0);
        assert!((g.log_m(3).unwrap() - 6f64.ln()).abs() < 1e-14);
        let lg = WeightSequence::log_gevrey(1.0, 1.0, 100).unwrap();
        let direct =
            1f64.ln() + core::f64::consts::E.ln().ln() + (core::f64::consts::E + 1.0).ln().ln();
        assert!((lg.log_m(1).unwrap() - direct).abs() < 1e-15);
        assert_eq!(lg.log_m(0).unwrap(), 0.0);
    }

    #[test]
    fn range_errors() {
        let g = WeightSequence::gevrey(1.0, 10).unwrap();
        assert!(matches!(
            g.log_m(11),
            Err(Error::Range {
                index: 11,
                limit: 10,
                ..
            })
        ));
        assert!(g.log_quotient(0).is_err());
        assert!(WeightSequence::gevrey(-1.0, 10).is_err());
        assert!(WeightSequence::from_log_m(alloc::vec![0.0]).is_err());
    }

    #[test]
    fn tilde_values() {
        let g0 = WeightSequence::gevrey(0.0, 50).unwrap();
        assert_eq!(g0.tilde().family(), Family::Gevrey { alpha: 1.0 });
        let g1 = WeightSequence::gevrey(1.0, 50).unwrap();
        assert!((g1.tilde().log_m(2).unwrap() - 4f64.ln()).abs() < 1e-14);
        let c = WeightSequence::from_log_m(alloc::vec![0.0, 1.0, 2.0]).unwrap();
        let t = c.tilde();
        assert_eq!(t.family(), Family::Custom);
        assert!((t.log_m(2).unwrap() - (2f64.ln() + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn custom_rescaled_and_quotients() {
        let c = WeightSequence::from_log_m(alloc::vec![2.0, 3.0, 5.0]).unwrap();
        assert_eq!(c.log_m(0).unwrap(), 0.0);
        assert_eq!(c.log_m(2).unwrap(), 3.0);
        assert_eq!(c.log_quotient(2).unwrap(), 2.0);
        let q = WeightSequence::from_log_quotients(&[0.5, 0.25]).unwrap();
        assert_eq!(q.p_max(), 2);
        assert_eq!(q.log_m(2).unwrap(), 0.75);
        assert_eq!(q.log_convex_upto(), 1);
    }

    #[test]
    fn quotients_sum_to_log_m() {
        let seqs = [
            WeightSequence::gevrey(0.5, 5000).unwrap(),
            WeightSequence::log_gevrey(2.0, 1.0, 5000).unwrap(),
            WeightSequence::log_gevrey(1.0, 1.0, 5000).unwrap().tilde(),
        ];
        for s in &seqs {
            let mut acc = 0.0;
            for p in 1..=2000 {
                acc += s.log_quotient(p).unwrap();
                let lm = s.log_m(p).unwrap();
                assert!(
                    (acc - lm).abs() <= 1e-12 * lm.abs().max(1.0) * 10.0,
                    "p={p}"
                );
            }
        }
    }
}
