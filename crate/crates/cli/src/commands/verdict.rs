use carleman_core::verdicts::{
    check_watson_condition_with, quasianalytic_verdict_with, s_quasianalytic_verdict_with,
    sufficient_sqa_with, watson_verdict_with,
};
use carleman_core::QaMode;

use crate::config::Settings;
use crate::error::Result;

use super::{qa_json, sequence::default_range, watson_condition_json, Section};

pub(super) fn run(settings: &Settings, command: &str) -> Result<Section> {
    let seq = settings.require_sequence(command)?;
    let s = settings.require_opening(command)?;
    let m = &seq.weights;
    let range = default_range(seq, settings);
    let cfg = &settings.verdict;
    let a_max = settings.a_max;

    let mut out = Section::default();
    out.try_set(
        "s_qa",
        s_quasianalytic_verdict_with(m, s, range, cfg),
        qa_json,
    );
    out.try_set("qa", quasianalytic_verdict_with(m, s, range, cfg), qa_json);
    out.try_set(
        "sufficient_sqa",
        sufficient_sqa_with(m, s, range, cfg),
        qa_json,
    );
    out.try_set(
        "watson_s_qa",
        watson_verdict_with(m, s, QaMode::SQa, range, a_max, cfg),
        qa_json,
    );
    out.try_set(
        "watson_qa",
        watson_verdict_with(m, s, QaMode::Qa, range, a_max, cfg),
        qa_json,
    );
    out.try_set(
        "watson_condition",
        check_watson_condition_with(m, range, a_max, cfg),
        watson_condition_json,
    );
    Ok(out)
}
