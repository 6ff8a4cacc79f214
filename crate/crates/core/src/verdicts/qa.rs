use alloc::vec::Vec;

use crate::error::{Axiom, Error, Result};
use crate::seqcore::{GrowthIndexEstimate, WeightSequence};

use super::integral::log_integral_with;
use super::series::{classify_series_with, SeriesKind};
use super::{DivergenceVerdict, PolysectorOpening, Status, VerdictConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QaKind {
    QuasiAnalytic,
    NotQuasiAnalytic,
    Inconclusive,
}

impl QaKind {
    pub fn name(self) -> &'static str {
        match self {
            QaKind::QuasiAnalytic => "qa",
            QaKind::NotQuasiAnalytic => "not_qa",
            QaKind::Inconclusive => "inconclusive",
        }
    }
}

/// Injectivity of the Borel map (`Qa`) or of the total asymptotic map (`SQa`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QaMode {
    SQa,
    Qa,
}

impl QaMode {
    pub fn name(self) -> &'static str {
        match self {
            QaMode::SQa => "s_qa",
            QaMode::Qa => "qa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Divergence of the Korenbljum series at the relevant opening.
    KorenbljumSeries,
    /// Divergence of the Mandelbrojt series (sufficient condition only).
    MandelbrojtSeries,
    /// Divergence of the logarithmic integral, used when the sequence is not log-convex.
    MandelbrojtIntegral,
    /// Comparison of the opening with the growth index.
    Watson,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::KorenbljumSeries => "korenbljum_series",
            Criterion::MandelbrojtSeries => "mandelbrojt_series",
            Criterion::MandelbrojtIntegral => "mandelbrojt_integral",
            Criterion::Watson => "watson_growth_index",
        }
    }
}

/// One-variable verdict for a single factor sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorVerdict {
    pub gamma: f64,
    pub kind: QaKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WatsonCondition {
    Holds,
    Fails,
    Inconclusive,
}

impl WatsonCondition {
    pub fn name(self) -> &'static str {
        match self {
            WatsonCondition::Holds => "holds",
            WatsonCondition::Fails => "fails",
            WatsonCondition::Inconclusive => "inconclusive",
        }
    }
}

/// Divergence of the Mandelbrojt series at exponent `1/gamma(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WatsonConditionReport {
    pub status: WatsonCondition,
    pub growth: GrowthIndexEstimate,
    pub series: DivergenceVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaVerdict {
    pub kind: QaKind,
    pub mode: QaMode,
    pub criterion: Criterion,
    pub gamma_bar: f64,
    pub gamma_under: f64,
    pub series: Option<DivergenceVerdict>,
    pub per_factor: Vec<FactorVerdict>,
    pub growth: Option<GrowthIndexEstimate>,
    pub watson_condition: Option<WatsonConditionReport>,
    pub note: Option<&'static str>,
}

impl QaVerdict {
    fn new(mode: QaMode, criterion: Criterion, s: &PolysectorOpening) -> Self {
        Self {
            kind: QaKind::Inconclusive,
            mode,
            criterion,
            gamma_bar: s.gamma_bar(),
            gamma_under: s.gamma_under(),
            series: None,
            per_factor: Vec::new(),
            growth: None,
            watson_condition: None,
            note: None,
        }
    }
}

fn from_divergence(status: Status) -> QaKind {
    match status {
        Status::Diverges => QaKind::QuasiAnalytic,
        Status::Converges => QaKind::NotQuasiAnalytic,
        Status::Inconclusive => QaKind::Inconclusive,
    }
}

fn require_convexity(m: &WeightSequence, range: usize) -> Result<()> {
    let upto = (range + 1).min(m.p_max());
    let r = m.check_log_convexity(upto.max(2))?;
    if r.holds {
        Ok(())
    } else {
        Err(Error::Axiom {
            axiom: Axiom::LogConvexity,
            checked_range: upto,
            witness: r.witness_index,
        })
    }
}

fn korenbljum(
    m: &WeightSequence,
    gamma: f64,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<DivergenceVerdict> {
    classify_series_with(m, 1.0 / (gamma + 1.0), SeriesKind::Korenbljum, range, cfg)
}

fn korenbljum_verdict(
    m: &WeightSequence,
    s: &PolysectorOpening,
    mode: QaMode,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<QaVerdict> {
    require_convexity(m, range)?;
    let mut out = QaVerdict::new(mode, Criterion::KorenbljumSeries, s);
    let g = match mode {
        QaMode::SQa => out.gamma_bar,
        QaMode::Qa => out.gamma_under,
    };
    let series = korenbljum(m, g, range, cfg)?;
    out.kind = from_divergence(series.status);
    out.series = Some(series);
    for &gamma in s.gamma() {
        let kind = from_divergence(korenbljum(m, gamma, range, cfg)?.status);
        out.per_factor.push(FactorVerdict { gamma, kind });
    }
    Ok(out)
}

/// (s) quasi-analyticity from the Korenbljum series at the largest opening.
pub fn s_quasianalytic_verdict(
    m: &WeightSequence,
    s: &PolysectorOpening,
    range: usize,
) -> Result<QaVerdict> {
    s_quasianalytic_verdict_with(m, s, range, &VerdictConfig::default())
}

pub fn s_quasianalytic_verdict_with(
    m: &WeightSequence,
    s: &PolysectorOpening,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<QaVerdict> {
    korenbljum_verdict(m, s, QaMode::SQa, range, cfg)
}

/// Quasi-analyticity from the Korenbljum series at the smallest opening.
pub fn quasianalytic_verdict(
    m: &WeightSequence,
    s: &PolysectorOpening,
    range: usize,
) -> Result<QaVerdict> {
    quasianalytic_verdict_with(m, s, range, &VerdictConfig::default())
}

pub fn quasianalytic_verdict_with(
    m: &WeightSequence,
    s: &PolysectorOpening,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<QaVerdict> {
    korenbljum_verdict(m, s, QaMode::Qa, range, cfg)
}

/// Sufficient condition for (s) quasi-analyticity: divergence of the
/// Mandelbrojt series at exponent `1/gamma_bar`. Never concludes
/// non-quasi-analyticity. Sequences that are not log-convex go through the
/// logarithmic integral instead.
pub fn sufficient_sqa(
    m: &WeightSequence,
    s: &PolysectorOpening,
    range: usize,
) -> Result<QaVerdict> {
    sufficient_sqa_with(m, s, range, &VerdictConfig::default())
}

pub fn sufficient_sqa_with(
    m: &WeightSequence,
    s: &PolysectorOpening,
    range: usize,
    cfg: &VerdictConfig,
) -> Result<QaVerdict> {
    let g = s.gamma_bar();
    let convex = m.log_convex_upto() > range;
    let (criterion, verdict) = if convex {
        let v = classify_series_with(m, 1.0 / g, SeriesKind::Mandelbrojt, range, cfg)?;
        (Criterion::MandelbrojtSeries, v)
    } else {
        let r = log_integral_with(m, g, false, cfg.r_lo, cfg.r_hi, range.min(m.p_max()), cfg)?;
        (Criterion::MandelbrojtIntegral, r.verdict)
    };
    let mut out = QaVerdict::new(QaMode::SQa, criterion, s);
    out.kind = if verdict.status == Status::Diverges {
        QaKind::QuasiAnalytic
    } else {
        QaKind::Inconclusive
    };
    if out.kind == QaKind::Inconclusive {
        out.note = Some("the criterion is only sufficient");
    }
    out.series = Some(verdict);
    Ok(out)
}

/// Whether the Mandelbrojt series diverges at exponent `1/gamma_hat`, with
/// `gamma_hat` the estimated growth index.
pub fn check_watson_condition(
    m: &WeightSequence,
    range: usize,
    a_max: f64,
) -> Result<WatsonConditionReport> {
    check_watson_condition_with(m, range, a_max, &VerdictConfig::default())
}

pub fn check_watson_condition_with(
    m: &WeightSequence,
    range: usize,
    a_max: f64,
    cfg: &VerdictConfig,
) -> Result<WatsonConditionReport> {
    let growth = m.growth_index(range, a_max)?;
    if growth.degenerate {
        return Err(Error::DegenerateGrowthIndex {
            gamma_hi: growth.bracket.1,
        });
    }
    let series_range = range.min(m.p_max().saturating_sub(1));
    let series = classify_series_with(
        m,
        1.0 / growth.gamma_hat,
        SeriesKind::Mandelbrojt,
        series_range,
        cfg,
    )?;
    let status = match series.status {
        Status::Diverges => WatsonCondition::Holds,
        Status::Converges => WatsonCondition::Fails,
        Status::Inconclusive => WatsonCondition::Inconclusive,
    };
    Ok(WatsonConditionReport {
        status,
        growth,
        series,
    })
}

/// Compares the relevant opening (`gamma_bar` for `SQa`, `gamma_under` for
/// `Qa`) with the growth index of a strongly regular sequence.
pub fn watson_verdict(
    m: &WeightSequence,
    s: &PolysectorOpening,
    mode: QaMode,
    range: usize,
    a_max: f64,
) -> Result<QaVerdict> {
    watson_verdict_with(m, s, mode, range, a_max, &VerdictConfig::default())
}

pub fn watson_verdict_with(
    m: &WeightSequence,
    s: &PolysectorOpening,
    mode: QaMode,
    range: usize,
    a_max: f64,
    cfg: &VerdictConfig,
) -> Result<QaVerdict> {
    // the doubling checks need indices up to twice the regularity range plus one
    let reg_range = range.min(m.p_max().saturating_sub(1) / 2);
    m.require_strong_regularity(reg_range)?;
    let growth = m.growth_index(range, a_max)?;
    if growth.degenerate {
        return Err(Error::DegenerateGrowthIndex {
            gamma_hi: growth.bracket.1,
        });
    }
    let mut out = QaVerdict::new(mode, Criterion::Watson, s);
    let g = match mode {
        QaMode::SQa => out.gamma_bar,
        QaMode::Qa => out.gamma_under,
    };
    let gh = growth.gamma_hat;
    if g <= gh * (1.0 - cfg.watson_tol) {
        out.kind = QaKind::NotQuasiAnalytic;
    } else if g >= gh * (1.0 + cfg.watson_tol) {
        let cond = check_watson_condition_with(m, range, a_max, cfg)?;
        if cond.status == WatsonCondition::Holds {
            out.kind = QaKind::QuasiAnalytic;
        } else {
            out.note =
                Some("opening above the growth index without the Watson condition: open case");
        }
        out.watson_condition = Some(cond);
    } else {
        out.note = Some("opening within tolerance of the growth index");
    }
    out.growth = Some(growth);
    Ok(out)
}
