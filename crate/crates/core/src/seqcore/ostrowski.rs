use crate::error::{Error, Result};
use crate::math;

use super::WeightSequence;

/// `log T_M(r) = max_{p <= P} (p log r - log M_p)` and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OstrowskiValue {
    pub log_t: f64,
    /// Smallest maximizing index.
    pub argmax: usize,
    /// The maximum sits at the truncation index, so the untruncated
    /// supremum may be larger.
    pub saturated: bool,
}

impl WeightSequence {
    fn ostrowski_prepare(&self, r: f64, range: usize) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain {
                what: "r",
                value: r,
            });
        }
        self.ensure_index("Ostrowski range", range)?;
        Ok(math::ln(r))
    }

    #[inline]
    fn ostrowski_term(&self, p: usize, ln_r: f64) -> f64 {
        p as f64 * ln_r - self.lm(p)
    }

    /// `log T_M(r)` truncated to `p <= range`.
    ///
    /// On a log-convex range the objective is concave in `p`, so the largest
    /// `p` with `log m_p <= log r` is located by bisection and its neighbours
    /// are compared; otherwise every index is scanned.
    pub fn ostrowski(&self, r: f64, range: usize) -> Result<OstrowskiValue> {
        let ln_r = self.ostrowski_prepare(r, range)?;
        if range > self.convex_upto {
            return self.ostrowski_scan(ln_r, range);
        }
        let (mut lo, mut hi) = (0usize, range);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.lq(mid) <= ln_r {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let from = lo.saturating_sub(3);
        let to = (lo + 3).min(range);
        let mut best = (f64::NEG_INFINITY, 0);
        for p in from..=to {
            let v = self.ostrowski_term(p, ln_r);
            if v > best.0 {
                best = (v, p);
            }
        }
        Ok(OstrowskiValue {
            log_t: best.0,
            argmax: best.1,
            saturated: best.1 == range,
        })
    }

    /// Reference implementation by linear scan over `0..=range`.
    pub fn ostrowski_bruteforce(&self, r: f64, range: usize) -> Result<OstrowskiValue> {
        let ln_r = self.ostrowski_prepare(r, range)?;
        self.ostrowski_scan(ln_r, range)
    }

    fn ostrowski_scan(&self, ln_r: f64, range: usize) -> Result<OstrowskiValue> {
        let mut best = (f64::NEG_INFINITY, 0);
        for p in 0..=range {
            let v = self.ostrowski_term(p, ln_r);
            if v > best.0 {
                best = (v, p);
            }
        }
        Ok(OstrowskiValue {
            log_t: best.0,
            argmax: best.1,
            saturated: best.1 == range,
        })
    }
}
