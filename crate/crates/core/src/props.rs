//! Outcomes of proposition checks on a single instance.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionCheck {
    pub id: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
}

impl PropositionCheck {
    pub fn pass(id: &str) -> Self {
        PropositionCheck {
            id: id.to_string(),
            outcome: Outcome::Pass,
            reason: None,
            certificate: None,
        }
    }

    pub fn fail(id: &str, reason: impl Into<String>, certificate: serde_json::Value) -> Self {
        PropositionCheck {
            id: id.to_string(),
            outcome: Outcome::Fail,
            reason: Some(reason.into()),
            certificate: Some(certificate),
        }
    }

    pub fn skipped(id: &str, reason: impl Into<String>) -> Self {
        PropositionCheck {
            id: id.to_string(),
            outcome: Outcome::Skipped,
            reason: Some(reason.into()),
            certificate: None,
        }
    }

    pub fn is_fail(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

/// Named hypotheses; the first false one makes the check skip.
pub type Hypotheses<'a> = &'a [(&'a str, bool)];

fn first_failed<'a>(hyps: Hypotheses<'a>) -> Option<&'a str> {
    hyps.iter().find(|(_, ok)| !ok).map(|(name, _)| *name)
}

/// `premise ⟹ conclusion` under hypotheses.
pub fn implication(
    id: &str,
    hyps: Hypotheses,
    premise: bool,
    conclusion: bool,
    certificate: impl FnOnce() -> serde_json::Value,
) -> PropositionCheck {
    if let Some(h) = first_failed(hyps) {
        return PropositionCheck::skipped(id, format!("hypothesis fails: {h}"));
    }
    if premise && !conclusion {
        PropositionCheck::fail(id, "premise holds but conclusion fails", certificate())
    } else {
        PropositionCheck::pass(id)
    }
}

/// `left ⟺ right` under hypotheses.
pub fn equivalence(
    id: &str,
    hyps: Hypotheses,
    left: bool,
    right: bool,
    certificate: impl FnOnce() -> serde_json::Value,
) -> PropositionCheck {
    if let Some(h) = first_failed(hyps) {
        return PropositionCheck::skipped(id, format!("hypothesis fails: {h}"));
    }
    if left != right {
        PropositionCheck::fail(id, format!("left side is {left}, right side is {right}"), certificate())
    } else {
        PropositionCheck::pass(id)
    }
}

/// Name used when a proposition needs the square axiom on the source.
pub const UNIFORM: &str = "space is uniform (square axiom)";
