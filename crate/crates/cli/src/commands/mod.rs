mod asymp;
mod sequence;
mod verdict;

use carleman_core::verdicts::{FactorVerdict, WatsonConditionReport};
use carleman_core::{
    AxiomReport, DivergenceVerdict, Error, GrowthIndexEstimate, QaVerdict, VerdictConfig,
};
use serde_json::Value;

use crate::config::Settings;
use crate::error::Result;
use crate::report::{num, nums, opt_num, Obj, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Sequence,
    Verdict,
    Asymp,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sequence => "sequence",
            Command::Verdict => "verdict",
            Command::Asymp => "asymp",
            Command::Report => "report",
        }
    }
}

/// A finished report and whether any part of it recorded an error.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub failed: bool,
}

/// Collects sections and remembers whether one of them failed.
#[derive(Debug, Default)]
struct Section {
    body: Obj,
    failed: bool,
}

impl Section {
    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.body.set(key, v);
    }

    /// Stores the converted value, or a structured error in its place.
    fn try_set<T>(
        &mut self,
        key: &str,
        r: carleman_core::Result<T>,
        to_json: impl FnOnce(&T) -> Value,
    ) {
        match r {
            Ok(v) => self.set(key, to_json(&v)),
            Err(e) => {
                self.failed = true;
                self.set(key, Obj::new().with("error", error_json(&e)));
            }
        }
    }

    fn merge(&mut self, key: &str, other: Section) {
        self.failed |= other.failed;
        self.set(key, other.body);
    }
}

pub fn run(command: Command, settings: &Settings) -> Result<Outcome> {
    let mut top = Section::default();
    top.set("schema", SCHEMA_VERSION);
    top.set("command", command.name());
    let range = match command {
        Command::Asymp => None,
        _ => Some(sequence::default_range(
            settings.require_sequence(command.name())?,
            settings,
        )),
    };
    top.set("settings", settings_json(settings, range));
    match command {
        Command::Sequence => top.merge("sequence", sequence::run(settings)?),
        Command::Verdict => top.merge("verdict", verdict::run(settings, command.name())?),
        Command::Asymp => top.merge("asymp", asymp::run(settings, command.name())?),
        Command::Report => {
            top.merge("sequence", sequence::run(settings)?);
            if settings.opening.is_some() {
                top.merge("verdict", verdict::run(settings, command.name())?);
            }
            if settings.fixture.is_some() {
                top.merge("asymp", asymp::run(settings, command.name())?);
            }
        }
    }
    Ok(Outcome {
        report: top.body.into(),
        failed: top.failed,
    })
}

fn settings_json(s: &Settings, range: Option<usize>) -> Value {
    let seq = s.sequence.as_ref().map_or(Value::Null, |input| {
        let spec = &input.spec;
        let mut o = Obj::new()
            .with("family", spec.family.name())
            .with("alpha", opt_num(spec.alpha))
            .with("beta", opt_num(spec.beta))
            .with("P_max", input.weights.p_max() as u64);
        if let Some(t) = &spec.log_m {
            o.set("logM", nums(t.iter().copied()));
        }
        o.into()
    });
    let g = &s.grid;
    Obj::new()
        .with("sequence", seq)
        .with(
            "gamma",
            s.opening
                .as_ref()
                .map_or(Value::Null, |o| nums(o.gamma().iter().copied())),
        )
        .with("P", range.map_or(Value::Null, |p| Value::from(p as u64)))
        .with("a_max", num(s.a_max))
        .with("r_hi", num(s.verdict.r_hi))
        .with("D", s.depth)
        .with("table_points", s.table_points as u64)
        .with("tolerances", tolerances_json(&s.verdict))
        .with(
            "fixture",
            s.fixture
                .as_ref()
                .map_or(Value::Null, |f| Value::from(f.to_string())),
        )
        .with("n", s.n.map_or(Value::Null, |n| Value::from(n as u64)))
        .with(
            "grid",
            Obj::new()
                .with("radial", g.radial as u64)
                .with("angular", g.angular as u64)
                .with("r_min", num(g.r_min))
                .with("r_max", num(g.r_max))
                .with("margin", num(g.margin)),
        )
        .into()
}

fn tolerances_json(c: &VerdictConfig) -> Value {
    Obj::new()
        .with("sigma_margin", num(c.sigma_margin))
        .with("tau_margin", num(c.tau_margin))
        .with("sigma_exact", num(c.sigma_exact))
        .with("symbolic_snap", num(c.symbolic_snap))
        .with("watson_tol", num(c.watson_tol))
        .with("r_lo", num(c.r_lo))
        .with("integral_grid", c.integral_grid as u64)
        .with("integral_rel_tol", num(c.integral_rel_tol))
        .into()
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Range { .. } => "range",
        Error::Domain { .. } => "domain",
        Error::Axiom { .. } => "axiom",
        Error::DegenerateGrowthIndex { .. } => "degenerate_growth_index",
        Error::IncompleteFamily { .. } => "incomplete_family",
        Error::EntryKind { .. } => "entry_kind",
        Error::MissingDerivative => "missing_derivative",
        Error::Step { .. } => "step",
        Error::Quadrature { .. } => "quadrature",
        Error::Invalid(_) => "invalid",
    };
    let mut o = Obj::new().with("kind", kind).with("message", e.to_string());
    if let Error::Axiom {
        axiom,
        checked_range,
        witness,
    } = e
    {
        o.set("axiom", axiom.name());
        o.set("checked_range", *checked_range as u64);
        o.set(
            "witness_index",
            witness.map_or(Value::Null, |w| Value::from(w as u64)),
        );
    }
    o.into()
}

fn axiom_json(r: &AxiomReport) -> Value {
    Obj::new()
        .with("axiom", r.axiom.name())
        .with("holds", r.holds)
        .with(
            "witness_index",
            r.witness_index
                .map_or(Value::Null, |w| Value::from(w as u64)),
        )
        .with("constant_estimate", opt_num(r.constant_estimate))
        .with("checked_range", r.checked_range as u64)
        .with("stability_flag", r.stability_flag)
        .into()
}

fn growth_json(g: &GrowthIndexEstimate) -> Value {
    Obj::new()
        .with("gamma_hat", num(g.gamma_hat))
        .with("a_max", num(g.a_max))
        .with("checked_range", g.checked_range as u64)
        .with("bracket", nums([g.bracket.0, g.bracket.1]))
        .with("degenerate", g.degenerate)
        .with("capped", g.capped)
        .with("tail_exponent", num(g.tail_exponent))
        .into()
}

fn divergence_json(d: &DivergenceVerdict) -> Value {
    Obj::new()
        .with("status", d.status.name())
        .with("route", d.route.name())
        .with("sigma_hat", num(d.sigma_hat))
        .with("tau_hat", num(d.tau_hat))
        .with("sigma_std_err", num(d.sigma_std_err))
        .with("tau_std_err", num(d.tau_std_err))
        .with("resolved_by_series", d.resolved_by_series)
        .with(
            "partial_sums",
            Value::Array(d.partial_sums.iter().map(|&(x, s)| nums([x, s])).collect()),
        )
        .into()
}

fn watson_condition_json(w: &WatsonConditionReport) -> Value {
    Obj::new()
        .with("status", w.status.name())
        .with("growth", growth_json(&w.growth))
        .with("series", divergence_json(&w.series))
        .into()
}

fn factor_json(f: &FactorVerdict) -> Value {
    Obj::new()
        .with("gamma", num(f.gamma))
        .with("kind", f.kind.name())
        .into()
}

fn qa_json(v: &QaVerdict) -> Value {
    Obj::new()
        .with("mode", v.mode.name())
        .with("kind", v.kind.name())
        .with("criterion", v.criterion.name())
        .with("gamma_bar", num(v.gamma_bar))
        .with("gamma_under", num(v.gamma_under))
        .with("note", v.note.map_or(Value::Null, Value::from))
        .with(
            "per_factor",
            Value::Array(v.per_factor.iter().map(factor_json).collect()),
        )
        // Watson-type verdicts carry their series inside the condition report
        .with(
            "evidence",
            v.series
                .as_ref()
                .or(v.watson_condition.as_ref().map(|w| &w.series))
                .map_or(Value::Null, divergence_json),
        )
        .with("growth", v.growth.as_ref().map_or(Value::Null, growth_json))
        .with(
            "watson_condition",
            v.watson_condition
                .as_ref()
                .map_or(Value::Null, watson_condition_json),
        )
        .into()
}
