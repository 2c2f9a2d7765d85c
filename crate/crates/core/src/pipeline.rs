//! Batch classification of identities: parity and Z₂ decision, finite
//! model evidence, trivialization checks and prover runs, assembled into
//! a verdict per formula and a deterministic report.

use std::fmt::Write as _;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::decision::{parity_decide, z2_decide, DecisionError};
use crate::models::{
    is_boolean_group, is_trivializing, satisfies, search_models, ModelError, TrivialVerdict,
};
use crate::prover::{axiom_terms, derive, goal_terms, Limits, ProofStatus, Strategy};
use crate::term::{parse_formula_file, parse_identity, Identity, TaggedFormula};

/// The Boolean-group axioms the prover tries to reach from a candidate
/// that passes the parity test.
pub const BOOLEAN_GROUP_AXIOMS: [&str; 3] = ["x·x = e", "e·x = x", "(x·y)·z = x·(y·z)"];

pub const TRIVIAL_GOAL: &str = "x = e";

pub fn boolean_group_axioms() -> Vec<Identity> {
    BOOLEAN_GROUP_AXIOMS
        .iter()
        .map(|s| parse_identity(s).expect("well-formed"))
        .collect()
}

pub fn trivial_goal() -> Identity {
    parse_identity(TRIVIAL_GOAL).expect("well-formed")
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{tag}: parity and Z2 evaluation disagree")]
    OracleDisagreement { tag: String },
    #[error("{tag}: a size-{n} model of the axiom violates the proved goal {goal}")]
    CrossValidation { tag: String, n: usize, goal: String },
    #[error("{tag}: the proof trace does not replay: {reason}")]
    Replay { tag: String, reason: String },
    #[error("{tag}: verdict conflict: {reason}")]
    VerdictConflict { tag: String, reason: String },
    #[error("{tag}: {source}")]
    Decision {
        tag: String,
        #[source]
        source: DecisionError,
    },
    #[error("{tag}: {source}")]
    Model {
        tag: String,
        #[source]
        source: ModelError,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ClassifyConfig {
    /// Model evidence is collected for sizes `1..=model_sizes`.
    pub model_sizes: usize,
    /// Models counted per size before the count is reported as truncated.
    pub model_count_cap: u64,
    /// Size bound for the search for a nontrivial model.
    pub trivial_bound: usize,
    pub strategy: Strategy,
    /// Worker threads for batches; 0 lets the pool decide.
    pub workers: usize,
}

impl Default for ClassifyConfig {
    /// Prover runs are bounded by processed equations only, so that
    /// reports do not depend on machine speed.
    fn default() -> Self {
        ClassifyConfig {
            model_sizes: 4,
            model_count_cap: 1000,
            trivial_bound: 4,
            strategy: Strategy {
                limits: Limits {
                    max_seconds: f64::INFINITY,
                    ..Limits::default()
                },
                ..Strategy::default()
            },
            workers: 0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BooleanTheoremCandidate,
    Trivializing,
    InconsistentEvidence,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::BooleanTheoremCandidate => "boolean-theorem-candidate",
            Verdict::Trivializing => "trivializing",
            Verdict::InconsistentEvidence => "inconsistent-evidence",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SizeEvidence {
    pub n: usize,
    pub count: u64,
    /// The count stopped at the cap.
    pub truncated: bool,
    pub all_boolean_groups: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TrivialEvidence {
    pub bound: usize,
    /// Size of the first nontrivial model found, if any.
    pub nontrivial_model_size: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofTarget {
    BooleanGroupAxioms,
    Trivial,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProofSummary {
    pub target: ProofTarget,
    pub strategy: String,
    pub status: String,
    pub goals_proved: Vec<bool>,
    pub processed: u64,
    pub active: usize,
    pub trace_lines: Option<usize>,
    /// Models (over all evidence sizes) checked against the proved goals.
    pub models_cross_checked: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Classification {
    pub tag: String,
    pub identity: String,
    pub parity: bool,
    pub z2_agrees: bool,
    pub models: Vec<SizeEvidence>,
    pub trivial: Option<TrivialEvidence>,
    pub proof: ProofSummary,
    pub verdict: Verdict,
}

/// Classifies one identity. Internal inconsistencies (oracle
/// disagreement, a proof refuted by a model, a trace that does not
/// replay) are errors; prover limits are not.
pub fn classify(
    formula: &TaggedFormula,
    config: &ClassifyConfig,
) -> Result<Classification, PipelineError> {
    let tag = formula.tag.clone();
    let id = &formula.identity;
    let parity = parity_decide(id);
    let z2 = z2_decide(id).map_err(|source| PipelineError::Decision {
        tag: tag.clone(),
        source,
    })?;
    if z2.is_theorem != parity {
        return Err(PipelineError::OracleDisagreement { tag });
    }

    let (target, goals) = if parity {
        (ProofTarget::BooleanGroupAxioms, boolean_group_axioms())
    } else {
        (ProofTarget::Trivial, vec![trivial_goal()])
    };
    let axioms = std::slice::from_ref(id);
    let outcome = derive(axioms, &goals, &config.strategy);
    let proved: Vec<bool> = outcome.goals.iter().map(|g| g.proved).collect();
    if let Some(trace) = &outcome.trace {
        trace
            .replay(&axiom_terms(axioms), &goal_terms(&goals))
            .map_err(|e| PipelineError::Replay {
                tag: tag.clone(),
                reason: e.to_string(),
            })?;
    }

    let mut models = Vec::new();
    let mut cross_checked = 0u64;
    for n in 1..=config.model_sizes {
        let mut ev = SizeEvidence {
            n,
            count: 0,
            truncated: false,
            all_boolean_groups: true,
        };
        let mut violated = None;
        let flow = search_models(axioms, n, false, |t| {
            ev.count += 1;
            ev.all_boolean_groups &= is_boolean_group(t);
            for (goal, ok) in goals.iter().zip(&proved) {
                if *ok && !satisfies(t, goal) {
                    violated = Some(goal.to_string());
                    return ControlFlow::Break(());
                }
            }
            cross_checked += u64::from(proved.iter().any(|p| *p));
            if ev.count >= config.model_count_cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .map_err(|source| PipelineError::Model {
            tag: tag.clone(),
            source,
        })?;
        if let Some(goal) = violated {
            return Err(PipelineError::CrossValidation { tag, n, goal });
        }
        ev.truncated = flow.is_break();
        models.push(ev);
    }

    let trivial = if parity {
        None
    } else {
        let verdict =
            is_trivializing(id, config.trivial_bound).map_err(|source| PipelineError::Model {
                tag: tag.clone(),
                source,
            })?;
        Some(TrivialEvidence {
            bound: config.trivial_bound,
            nontrivial_model_size: match verdict {
                TrivialVerdict::TrivialUpTo(_) => None,
                TrivialVerdict::NontrivialModel(t) => Some(t.size()),
            },
        })
    };

    let proved_all = outcome.status == ProofStatus::Proved;
    let verdict = match &trivial {
        None => Verdict::BooleanTheoremCandidate,
        Some(ev) => match (ev.nontrivial_model_size, proved_all) {
            (Some(n), true) => {
                return Err(PipelineError::VerdictConflict {
                    tag,
                    reason: format!("x = e was proved but a model of size {n} exists"),
                })
            }
            (None, _) => Verdict::Trivializing,
            (Some(_), false) => Verdict::InconsistentEvidence,
        },
    };
    if parity && models.iter().any(|m| m.n == 2 && m.count == 0) {
        return Err(PipelineError::VerdictConflict {
            tag,
            reason: "parity holds but the two-element Boolean group is not a model".into(),
        });
    }

    Ok(Classification {
        tag,
        identity: id.to_string(),
        parity,
        z2_agrees: true,
        models,
        trivial,
        proof: ProofSummary {
            target,
            strategy: config.strategy.name.to_string(),
            status: outcome.status.label().to_string(),
            goals_proved: proved,
            processed: outcome.stats.processed,
            active: outcome.stats.active,
            trace_lines: outcome
                .trace
                .as_ref()
                .map(|t| t.equations.len() + t.goals.len()),
            models_cross_checked: cross_checked,
        },
        verdict,
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LineIssue {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Summary {
    pub formulas: usize,
    pub parity_pass: usize,
    pub trivializing: usize,
    pub boolean_theorem_candidates: usize,
    pub inconsistent_evidence: usize,
    pub proved: usize,
    pub parse_errors: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StrategyInfo {
    pub name: String,
    pub ordering: String,
    pub max_processed: u64,
    pub max_term_size: u32,
    pub model_sizes: usize,
    pub model_count_cap: u64,
    pub trivial_bound: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BatchReport {
    pub settings: StrategyInfo,
    pub summary: Summary,
    pub parse_errors: Vec<LineIssue>,
    pub formulas: Vec<Classification>,
}

/// Classifies every entry of a formula file, in parallel, and reports in
/// input order. Lines that fail to parse are listed, not fatal.
pub fn run_batch(text: &str, config: &ClassifyConfig) -> Result<BatchReport, PipelineError> {
    let (entries, errors) = parse_formula_file(text);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    let formulas: Vec<Classification> = pool.install(|| {
        entries
            .par_iter()
            .map(|entry| classify(&entry.formula, config))
            .collect::<Result<_, _>>()
    })?;

    let count = |v: Verdict| formulas.iter().filter(|c| c.verdict == v).count();
    let summary = Summary {
        formulas: formulas.len(),
        parity_pass: formulas.iter().filter(|c| c.parity).count(),
        trivializing: count(Verdict::Trivializing),
        boolean_theorem_candidates: count(Verdict::BooleanTheoremCandidate),
        inconsistent_evidence: count(Verdict::InconsistentEvidence),
        proved: formulas
            .iter()
            .filter(|c| c.proof.status == ProofStatus::Proved.label())
            .count(),
        parse_errors: errors.len(),
    };
    Ok(BatchReport {
        settings: StrategyInfo {
            name: config.strategy.name.to_string(),
            ordering: format!("{:?}", config.strategy.ordering.kind).to_lowercase(),
            max_processed: config.strategy.limits.max_processed,
            max_term_size: config.strategy.limits.max_term_size,
            model_sizes: config.model_sizes,
            model_count_cap: config.model_count_cap,
            trivial_bound: config.trivial_bound,
        },
        summary,
        parse_errors: errors
            .into_iter()
            .map(|e| LineIssue {
                line: e.line,
                message: e.message,
            })
            .collect(),
        formulas,
    })
}

impl BatchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "tag\tidentity\tparity\tz2_agrees\tmodel_counts\tall_boolean_groups\tnontrivial_model\tproof_target\tproof_status\tverdict\n",
        );
        for c in &self.formulas {
            let counts: Vec<String> = c
                .models
                .iter()
                .map(|m| format!("{}{}", m.count, if m.truncated { "+" } else { "" }))
                .collect();
            let nontrivial = match &c.trivial {
                None => "-".to_string(),
                Some(t) => t
                    .nontrivial_model_size
                    .map_or("none".to_string(), |n| n.to_string()),
            };
            let target = match c.proof.target {
                ProofTarget::BooleanGroupAxioms => "boolean-group-axioms",
                ProofTarget::Trivial => "x=e",
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                c.tag,
                c.identity,
                c.parity,
                c.z2_agrees,
                counts.join(","),
                c.models.iter().all(|m| m.all_boolean_groups),
                nontrivial,
                target,
                c.proof.status,
                c.verdict.label()
            );
        }
        for e in &self.parse_errors {
            let _ = writeln!(out, "# line {}: {}", e.line, e.message);
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "# formulas {} parity-pass {} trivializing {} boolean-theorem-candidates {} inconsistent-evidence {} proved {} parse-errors {}",
            s.formulas,
            s.parity_pass,
            s.trivializing,
            s.boolean_theorem_candidates,
            s.inconsistent_evidence,
            s.proved,
            s.parse_errors
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn formula(tag: &str, s: &str) -> TaggedFormula {
        TaggedFormula {
            tag: tag.into(),
            identity: parse_identity(s).unwrap(),
        }
    }

    #[test]
    fn trivial_identity() {
        let c = classify(&formula("t", "x = e"), &ClassifyConfig::default()).unwrap();
        assert!(!c.parity);
        assert_eq!(c.verdict, Verdict::Trivializing);
        assert_eq!(c.proof.status, "proved");
        assert_eq!(
            c.models.iter().map(|m| m.count).collect::<Vec<_>>(),
            [1, 0, 0, 0]
        );
    }

    #[test]
    fn projection_is_neither() {
        let c = classify(&formula("p", "x·y = x"), &ClassifyConfig::default()).unwrap();
        assert!(!c.parity);
        assert_eq!(c.trivial.as_ref().unwrap().nontrivial_model_size, Some(2));
        assert_eq!(c.verdict, Verdict::InconsistentEvidence);
    }

    #[test]
    fn empty_batch() {
        let r = run_batch("", &ClassifyConfig::default()).unwrap();
        assert_eq!(r.summary, Summary::default());
        assert!(r.formulas.is_empty());
    }

    #[test]
    fn parse_errors_are_collected() {
        let r = run_batch("a: x = e\nb: x = = y\n", &ClassifyConfig::default()).unwrap();
        assert_eq!(r.summary.formulas, 1);
        assert_eq!(r.summary.parse_errors, 1);
        assert_eq!(r.parse_errors[0].line, 2);
        assert!(r.to_tsv().contains("# line 2:"));
    }
}
