use serde_json::Value;

use crate::config::{SequenceInput, Settings, DEFAULT_RANGE_CAP};
use crate::error::Result;
use crate::report::{num, Obj};

use super::{axiom_json, growth_json, Section};

pub(super) fn default_range(seq: &SequenceInput, settings: &Settings) -> usize {
    settings
        .range
        .unwrap_or_else(|| seq.weights.p_max().min(DEFAULT_RANGE_CAP))
}

/// Geometric radii from `lo` to `hi`, both included.
fn radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (count - 1) as f64;
    let mut r: Vec<f64> = (0..count).map(|k| lo * (step * k as f64).exp()).collect();
    r[count - 1] = hi;
    r
}

pub(super) fn run(settings: &Settings) -> Result<Section> {
    let seq = settings.require_sequence("sequence")?;
    let m = &seq.weights;
    let range = default_range(seq, settings);
    let mut out = Section::default();

    let mut axioms = Section::default();
    axioms.try_set("alpha0", m.check_log_convexity(range), axiom_json);
    axioms.try_set("mu", m.check_moderate_growth(range), axiom_json);
    axioms.try_set("gamma1", m.check_gamma1(range), axiom_json);
    out.merge("axioms", axioms);

    out.try_set(
        "growth_index",
        m.growth_index(range, settings.a_max),
        growth_json,
    );

    let tilde = m.tilde();
    let mut rows = Vec::with_capacity(settings.table_points);
    for r in radii(
        settings.verdict.r_lo,
        settings.verdict.r_hi,
        settings.table_points,
    ) {
        let row = m
            .ostrowski(r, range)
            .and_then(|t| Ok((t, tilde.ostrowski(r, range)?)));
        match row {
            Ok((t, tt)) => rows.push(
                Obj::new()
                    .with("r", num(r))
                    .with("log_T", num(t.log_t))
                    .with("log_T_tilde", num(tt.log_t))
                    .with("argmax", t.argmax as u64)
                    .with("saturated", t.saturated)
                    .into(),
            ),
            Err(e) => {
                out.failed = true;
                rows.push(
                    Obj::new()
                        .with("r", num(r))
                        .with("error", super::error_json(&e))
                        .into(),
                );
            }
        }
    }
    out.set("ostrowski", Value::Array(rows));
    Ok(out)
}
