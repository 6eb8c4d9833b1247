//! Stochastic activity networks restricted to exponential activities.
//!
//! Firing order: input arcs are consumed, input-gate functions run in
//! declaration order, output arcs of the chosen case deposit tokens, then the
//! case's output-gate functions run in declaration order. An activity is
//! enabled when its input arcs are satisfied, every input-gate predicate holds
//! and its rate is strictly positive.

mod compiled;
pub mod expr;
mod model;

pub use compiled::{Bindings, CompiledModel, Marking, ParamSet, CASE_SUM_TOL};
pub use expr::{all, any, ite, mark, num, param, CmpOp, Cond, Expr, RefKind};
pub use model::{
    activity, case, validate_model, Activity, ActivityBuilder, Arc, Assign, Case, Diagnostic, InputGate,
    OutputGate, ParamDecl, ParamKind, Place, SanBuilder, SanModel,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SanError {
    #[error("model {model} is invalid: {}", join(.diagnostics))]
    Invalid { model: String, diagnostics: Vec<Diagnostic> },
    #[error("model {model} requires parameter {param}")]
    MissingParam { model: String, param: String },
    #[error("parameter {param} = {value}: {reason}")]
    BadParam { param: String, value: f64, reason: &'static str },
    #[error("model {model} has no place {place}")]
    UnknownPlace { model: String, place: String },
    #[error("marking has {got} entries but model {model} has {expected} places")]
    MarkingMismatch { model: String, expected: usize, got: usize },
    #[error("no activity with index {0}")]
    NoSuchActivity(usize),
    #[error("activity {activity} has {cases} cases, case {case} requested")]
    NoSuchCase { activity: String, case: usize, cases: usize },
    #[error("activity {activity} is not enabled in marking {marking}")]
    NotEnabled { activity: String, marking: String },
    #[error("activity {activity} has invalid rate {rate} in marking {marking}")]
    BadRate { activity: String, rate: f64, marking: String },
    #[error("case probabilities of {activity} are not normalized ({probs:?}) in marking {marking}")]
    Normalization { activity: String, probs: Vec<f64>, marking: String },
    #[error("gate {gate} would set {place} to negative value {value}")]
    NegativeTokens { gate: String, place: String, value: f64 },
    #[error("{context}: {value} is not a valid token count")]
    BadTokenValue { context: String, value: f64 },
    #[error("token count overflow in place {place}")]
    Overflow { place: String },
}

fn join(d: &[Diagnostic]) -> String {
    d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

/// Marking predicate selecting the unavailable states.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardVariable {
    pub id: String,
    pub predicate: Cond,
}

/// A reward predicate resolved against a compiled model.
#[derive(Debug, Clone)]
pub struct CompiledReward {
    pub id: String,
    predicate: Cond<usize>,
}

impl RewardVariable {
    pub fn new(id: &str, predicate: Cond) -> Self {
        RewardVariable { id: id.to_string(), predicate }
    }

    /// Resolves place and parameter names against `model`.
    pub fn compile(&self, model: &CompiledModel) -> Result<CompiledReward, SanError> {
        let predicate = self.predicate.try_map(&mut |kind, name: &String| match kind {
            RefKind::Place => model
                .place_index(name)
                .ok_or_else(|| SanError::UnknownPlace { model: model.id().to_string(), place: name.clone() }),
            RefKind::Param => model.params().iter().position(|p| &p.name == name).ok_or_else(|| {
                SanError::MissingParam { model: model.id().to_string(), param: name.clone() }
            }),
        })?;
        Ok(CompiledReward { id: self.id.clone(), predicate })
    }
}

impl CompiledReward {
    pub fn eval(&self, m: &Marking, b: &Bindings) -> bool {
        self.predicate.eval(m.tokens(), b.values())
    }
}
