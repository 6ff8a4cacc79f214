use alloc::vec::Vec;

use crate::error::{Axiom, Error, Result};
use crate::math;

use super::WeightSequence;

/// Search parameters for [`WeightSequence::growth_index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthSearch {
    /// Smallest exponent tried; infeasibility there marks the estimate degenerate.
    pub gamma_floor: f64,
    /// Largest exponent tried.
    pub gamma_cap: f64,
    pub bracket_tol: f64,
}

impl Default for GrowthSearch {
    fn default() -> Self {
        Self {
            gamma_floor: 1e-6,
            gamma_cap: 1024.0,
            bracket_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthIndexEstimate {
    pub gamma_hat: f64,
    pub a_max: f64,
    pub checked_range: usize,
    pub bracket: (f64, f64),
    /// Not feasible even at the search floor.
    pub degenerate: bool,
    /// Feasible all the way to the search cap.
    pub capped: bool,
    /// Asymptotic power of `m_p` fitted on the upper tail of the range.
    pub tail_exponent: f64,
}

const TAIL_SAMPLES: usize = 2048;

/// Indices in `[lo, hi]`, all of them if few, otherwise geometrically spaced.
pub(crate) fn tail_indices(lo: usize, hi: usize, max: usize) -> Vec<usize> {
    if hi + 1 - lo <= max {
        return (lo..=hi).collect();
    }
    let ratio = math::ln(hi as f64 / lo as f64) / (max - 1) as f64;
    let mut out: Vec<usize> = (0..max)
        .map(|i| math::round(lo as f64 * math::exp(ratio * i as f64)) as usize)
        .map(|p| p.clamp(lo, hi))
        .collect();
    out.dedup();
    out
}

impl WeightSequence {
    /// Power of `p` in `log m_p ~ A log p + B log log p`, from a tail fit
    /// over `[range/4, range]`.
    fn tail_exponent(&self, range: usize) -> Option<f64> {
        let lo = (range / 4).max(1);
        let idx = tail_indices(lo, range, TAIL_SAMPLES);
        if idx.len() < 8 {
            return None;
        }
        let rows: Vec<Vec<f64>> = idx
            .iter()
            .map(|&p| {
                let x = p as f64;
                alloc::vec![1.0, math::ln(x), math::lnln_e(x), math::ln(1.0 + 1.0 / x)]
            })
            .collect();
        let y: Vec<f64> = idx.iter().map(|&p| self.lq(p)).collect();
        math::least_squares(&rows, &y).map(|f| f.coef[1])
    }

    /// Whether some `m'` with `m_p / a^2 <= m'_p <= m_p` (for an `a <= a_max`)
    /// makes `(p+1)^{-gamma} m'_p` nondecreasing on `1..=range`.
    fn finite_feasible(&self, gamma: f64, range: usize, budget: f64) -> bool {
        let mut run = f64::NEG_INFINITY;
        for p in 1..=range {
            let g = self.lq(p) - gamma * math::ln(p as f64 + 1.0);
            run = run.max(g);
            if run - g > budget {
                return false;
            }
        }
        true
    }

    /// The feasibility test used by the growth-index search: the finite-range
    /// test with budget `a_max`, and `gamma` not above the tail exponent.
    pub fn growth_feasible(&self, gamma: f64, range: usize, a_max: f64) -> Result<bool> {
        if !(a_max >= 1.0) || !a_max.is_finite() {
            return Err(Error::Domain {
                what: "a_max",
                value: a_max,
            });
        }
        self.ensure_index("growth range", range)?;
        let tail = self.tail_exponent(range).unwrap_or(f64::INFINITY);
        Ok(gamma <= tail && self.finite_feasible(gamma, range, 2.0 * math::ln(a_max) + 1e-12))
    }

    /// Estimates the growth index with an equivalence budget `a_max`.
    ///
    /// An exponent counts as feasible when the finite-range test passes and
    /// it does not exceed the tail exponent of the quotients; without the
    /// second condition the oscillation budget inflates the estimate by about
    /// `2 log a_max / log P`.
    pub fn growth_index(&self, range: usize, a_max: f64) -> Result<GrowthIndexEstimate> {
        self.growth_index_with(range, a_max, GrowthSearch::default())
    }

    pub fn growth_index_with(
        &self,
        range: usize,
        a_max: f64,
        search: GrowthSearch,
    ) -> Result<GrowthIndexEstimate> {
        if !(a_max >= 1.0) || !a_max.is_finite() {
            return Err(Error::Domain {
                what: "a_max",
                value: a_max,
            });
        }
        let convexity = self.check_log_convexity(range)?;
        if !convexity.holds {
            return Err(Error::Axiom {
                axiom: Axiom::LogConvexity,
                checked_range: range,
                witness: convexity.witness_index,
            });
        }
        let tail = self.tail_exponent(range).unwrap_or(f64::INFINITY);
        let budget = 2.0 * math::ln(a_max) + 1e-12;
        let feasible = |g: f64| g <= tail && self.finite_feasible(g, range, budget);

        let mk = |lo: f64, hi: f64, degenerate: bool, capped: bool| GrowthIndexEstimate {
            gamma_hat: 0.5 * (lo + hi),
            a_max,
            checked_range: range,
            bracket: (lo, hi),
            degenerate,
            capped,
            tail_exponent: tail,
        };
        if !feasible(search.gamma_floor) {
            return Ok(mk(0.0, search.gamma_floor, true, false));
        }
        let mut lo = search.gamma_floor;
        let mut hi = 1.0f64.max(lo);
        while feasible(hi) {
            if hi >= search.gamma_cap {
                return Ok(mk(search.gamma_cap, search.gamma_cap, false, true));
            }
            lo = hi;
            hi = (hi * 2.0).min(search.gamma_cap);
        }
        while hi - lo > search.bracket_tol {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(mk(lo, hi, false, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_quotients() {
        for g0 in [0.3, 1.0, 2.5] {
            let q: Vec<f64> = (1..=2000).map(|p| g0 * math::ln(p as f64 + 1.0)).collect();
            let s = WeightSequence::from_log_quotients(&q).unwrap();
            let est = s.growth_index(2000, 1.0).unwrap();
            assert!((est.gamma_hat - g0).abs() < 1e-8, "{est:?}");
            assert!(est.bracket.1 - est.bracket.0 <= 1e-9);
            assert!(!est.degenerate);
        }
    }

    #[test]
    fn gevrey_two() {
        let g = WeightSequence::gevrey(2.0, 1 << 13).unwrap();
        let est = g.growth_index(4096, 1e3).unwrap();
        assert!((1.9..=2.1).contains(&est.gamma_hat), "{est:?}");
    }

    #[test]
    fn feasibility_is_downward_closed() {
        let g = WeightSequence::log_gevrey(1.0, 1.0, 4096).unwrap();
        let budget = 2.0 * math::ln(10.0);
        for k in 1..40 {
            let gamma = k as f64 * 0.1;
            if g.finite_feasible(gamma, 4096, budget) {
                assert!(g.finite_feasible(gamma / 2.0, 4096, budget));
            }
        }
    }

    #[test]
    fn constant_sequence_is_degenerate() {
        let g = WeightSequence::gevrey(0.0, 1000).unwrap();
        let est = g.growth_index(500, 1.0).unwrap();
        assert!(est.degenerate);
        assert!(est.gamma_hat <= 1e-6);
    }

    #[test]
    fn non_convex_input_is_refused() {
        let c = WeightSequence::from_log_m(alloc::vec![0.0, 1.0, 1.5, 3.0]).unwrap();
        assert!(matches!(
            c.growth_index(3, 10.0),
            Err(Error::Axiom {
                axiom: Axiom::LogConvexity,
                ..
            })
        ));
        let g = WeightSequence::gevrey(1.0, 100).unwrap();
        assert!(g.growth_index(50, 0.5).is_err());
    }
}
