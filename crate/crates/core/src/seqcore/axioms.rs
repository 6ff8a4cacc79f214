use crate::error::{Axiom, Error, Result};
use crate::math;

use super::WeightSequence;

/// Absolute slack in the log domain for the convexity test.
pub const LOG_CONVEXITY_SLACK: f64 = 1e-12;
/// Relative change allowed in a constant estimate when the range is doubled.
pub const STABILITY_REL_TOL: f64 = 1e-2;

/// Outcome of checking one structural condition on `[0, checked_range]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness_index: Option<usize>,
    /// `A` for moderate growth, `B` for strong non-quasianalyticity.
    pub constant_estimate: Option<f64>,
    pub checked_range: usize,
    /// Whether the verdict survives doubling the range (for the constant
    /// checks: whether the estimate moved by less than the tolerance).
    pub stability_flag: bool,
}

impl WeightSequence {
    fn first_convexity_violation(&self, range: usize) -> Option<usize> {
        if range <= self.convex_upto {
            return None;
        }
        (1..range).find(|&n| !self.convex_at(n))
    }

    /// Logarithmic convexity on `[0, range]`.
    pub fn check_log_convexity(&self, range: usize) -> Result<AxiomReport> {
        if range < 2 {
            return Err(Error::Range {
                what: "log-convexity range (needs >= 2)",
                index: range,
                limit: 2,
            });
        }
        self.ensure_index("log-convexity range", range)?;
        let witness = self.first_convexity_violation(range);
        let doubled = range.saturating_mul(2).min(self.p_max);
        Ok(AxiomReport {
            axiom: Axiom::LogConvexity,
            holds: witness.is_none(),
            witness_index: witness,
            constant_estimate: None,
            checked_range: range,
            stability_flag: self.first_convexity_violation(doubled).is_none(),
        })
    }

    /// Largest `(log M_{p+l} - log M_p - log M_l) / (p+l)` with `p + l <= range`,
    /// and the `p + l` attaining it.
    fn moderate_growth_exponent(&self, range: usize) -> (f64, usize) {
        let mut best = (0.0, 0);
        let fast = range <= self.convex_upto;
        for n in 1..=range {
            let lmn = self.lm(n);
            let v = if fast {
                // lm(p) + lm(n-p) is convex and symmetric in p
                let p = n / 2;
                lmn - self.lm(p) - self.lm(n - p)
            } else {
                (0..=n / 2)
                    .map(|p| lmn - self.lm(p) - self.lm(n - p))
                    .fold(f64::NEG_INFINITY, f64::max)
            } / n as f64;
            if v > best.0 {
                best = (v, n);
            }
        }
        best
    }

    /// Moderate growth: estimates the least `A` with `M_{p+l} <= A^{p+l} M_p M_l`.
    pub fn check_moderate_growth(&self, range: usize) -> Result<AxiomReport> {
        if range == 0 {
            return Err(Error::Range {
                what: "moderate-growth range",
                index: 0,
                limit: 1,
            });
        }
        self.ensure_index("moderate-growth range", range)?;
        let (e, _) = self.moderate_growth_exponent(range);
        let doubled = range.saturating_mul(2).min(self.p_max);
        let (e2, n2) = self.moderate_growth_exponent(doubled);
        Ok(constant_report(
            Axiom::ModerateGrowth,
            range,
            doubled,
            math::exp(e),
            math::exp(e2),
            n2,
        ))
    }

    /// Largest `sum_{l=p}^{L} M_l/((l+1) M_{l+1}) / (M_p/M_{p+1})` over
    /// `p <= range/2`, with `L = min(range, P_max - 1)`, and the `p` attaining it.
    fn gamma1_ratio(&self, range: usize) -> (f64, usize) {
        let upper = range.min(self.p_max - 1);
        let mut suffix = 0.0;
        let mut sums = alloc::vec![0.0; upper + 1];
        for l in (0..=upper).rev() {
            suffix += math::exp(-math::ln(l as f64 + 1.0) - self.lq(l + 1));
            sums[l] = suffix;
        }
        let mut best = (f64::NEG_INFINITY, 0);
        for (p, s) in sums.iter().enumerate().take(range / 2 + 1) {
            let v = math::exp(math::ln(*s) + self.lq(p + 1));
            if v > best.0 {
                best = (v, p);
            }
        }
        best
    }

    /// Strong non-quasianalyticity: estimates the least `B` in the tail-sum bound.
    pub fn check_gamma1(&self, range: usize) -> Result<AxiomReport> {
        if range == 0 {
            return Err(Error::Range {
                what: "gamma1 range",
                index: 0,
                limit: 1,
            });
        }
        self.ensure_index("gamma1 range", range)?;
        let (b, _) = self.gamma1_ratio(range);
        let doubled = range.saturating_mul(2).min(self.p_max);
        let (b2, p2) = self.gamma1_ratio(doubled);
        Ok(constant_report(Axiom::Gamma1, range, doubled, b, b2, p2))
    }

    /// The three reports in the order log-convexity, moderate growth, gamma1.
    pub fn check_strong_regularity(&self, range: usize) -> Result<[AxiomReport; 3]> {
        Ok([
            self.check_log_convexity(range)?,
            self.check_moderate_growth(range)?,
            self.check_gamma1(range)?,
        ])
    }

    /// Like [`check_strong_regularity`](Self::check_strong_regularity), but
    /// returns the first failing condition as an error.
    pub fn require_strong_regularity(&self, range: usize) -> Result<[AxiomReport; 3]> {
        let reports = self.check_strong_regularity(range)?;
        if let Some(r) = reports.iter().find(|r| !r.holds) {
            return Err(Error::Axiom {
                axiom: r.axiom,
                checked_range: r.checked_range,
                witness: r.witness_index,
            });
        }
        Ok(reports)
    }
}

fn constant_report(
    axiom: Axiom,
    range: usize,
    doubled: usize,
    c: f64,
    c2: f64,
    witness2: usize,
) -> AxiomReport {
    let stable = doubled > range
        && c.is_finite()
        && c2.is_finite()
        && (c2 - c).abs() <= STABILITY_REL_TOL * c;
    AxiomReport {
        axiom,
        holds: stable,
        witness_index: (!stable).then_some(witness2),
        constant_estimate: Some(c),
        checked_range: range,
        stability_flag: stable,
    }
}
