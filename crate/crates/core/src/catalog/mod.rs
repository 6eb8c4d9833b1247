//! The network-element and minimal-cut-set models, their unavailability
//! predicates and their parameter studies.
//!
//! Models follow the listings token for token, with these adjustments:
//!
//! * typos in identifiers are mapped to the intended names: `hw_cvlg` and
//!   `sw_cvlg` to `hw_cvg` / `sw_cvg`, `heq_cvq` to `heq_cvg`,
//!   `Active_pProc_C1` to `Active_proc_C1`, `fhw_t_*` to `fhwt_*`;
//! * the model listed as `rl` is exposed as `rrl` (`rl` stays an alias);
//! * `||` operators missing from the printed reward functions are restored;
//! * `cc` and `rrr` carry the fixes documented on their builders.
//!
//! `CHW_R` in the router cut sets is listed with rate `chw_fail_rate`; that is
//! the default, and [`BuildOptions::corrected`] substitutes `chw_rcv_rate`.

mod correlation;
mod models;
mod parts;
mod studies;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::san::{
    all, any, mark, Bindings, CompiledModel, CompiledReward, ParamKind, ParamSet, RewardVariable, SanError,
    SanModel,
};
use parts::{ChwRecovery, Ctl};
pub use correlation::{BaseRates, CorrelationFactors, ALPHA_SWEEP, BETA_HEQ_SWEEP, BETA_TMI_SWEEP};
pub use studies::{studies, study, Assignment, Study, Variable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("unknown study {0:?}")]
    UnknownStudy(String),
    #[error("study {study} does not define {missing:?} required by model {model}")]
    StudyMismatch { study: String, model: CatalogId, missing: Vec<String> },
    #[error("study {study}: {reason}")]
    BadStudy { study: String, reason: String },
    #[error("parameter {param} = {value}: {reason}")]
    BadParam { param: String, value: f64, reason: String },
    #[error(transparent)]
    San(#[from] SanError),
}

/// Catalog model identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogId {
    Link,
    Router,
    Switch,
    Controller,
    Rr,
    #[serde(alias = "rl")]
    Rrl,
    Rrr,
    Rll,
    Ss,
    Ssl,
    Sss,
    Sll,
    Ll,
    Cc,
    Css,
    Csl,
}

impl CatalogId {
    pub const ALL: [CatalogId; 16] = [
        CatalogId::Link,
        CatalogId::Router,
        CatalogId::Switch,
        CatalogId::Controller,
        CatalogId::Rr,
        CatalogId::Rrl,
        CatalogId::Rrr,
        CatalogId::Rll,
        CatalogId::Ss,
        CatalogId::Ssl,
        CatalogId::Sss,
        CatalogId::Sll,
        CatalogId::Ll,
        CatalogId::Cc,
        CatalogId::Css,
        CatalogId::Csl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogId::Link => "link",
            CatalogId::Router => "router",
            CatalogId::Switch => "switch",
            CatalogId::Controller => "controller",
            CatalogId::Rr => "rr",
            CatalogId::Rrl => "rrl",
            CatalogId::Rrr => "rrr",
            CatalogId::Rll => "rll",
            CatalogId::Ss => "ss",
            CatalogId::Ssl => "ssl",
            CatalogId::Sss => "sss",
            CatalogId::Sll => "sll",
            CatalogId::Ll => "ll",
            CatalogId::Cc => "cc",
            CatalogId::Css => "css",
            CatalogId::Csl => "csl",
        }
    }

    /// Short description for listings.
    pub fn describe(self) -> &'static str {
        match self {
            CatalogId::Link => "link (two-state)",
            CatalogId::Router => "IP router",
            CatalogId::Switch => "SDN switch",
            CatalogId::Controller => "SDN controller",
            CatalogId::Rr => "{r,r} cut set, traditional network",
            CatalogId::Rrl => "{r,r,l} cut set, traditional network",
            CatalogId::Rrr => "{r,r,r} cut set, traditional network",
            CatalogId::Rll => "{r,l,l} cut set, traditional network",
            CatalogId::Ss => "{s,s} cut set, SDN forwarding",
            CatalogId::Ssl => "{s,s,l} cut set, SDN forwarding",
            CatalogId::Sss => "{s,s,s} cut set, SDN forwarding",
            CatalogId::Sll => "{s,l,l} cut set, SDN forwarding",
            CatalogId::Ll => "{l,l} cut set",
            CatalogId::Cc => "{c,c} cut set, SDN control",
            CatalogId::Css => "{c,s,s} cut set, SDN control",
            CatalogId::Csl => "{c,s,l} cut set, SDN control",
        }
    }

    /// Study whose variables cover this model's parameters.
    pub fn default_study(self) -> &'static str {
        match self {
            CatalogId::Link | CatalogId::Ll => "LL_study",
            CatalogId::Router | CatalogId::Rr => "RR_study",
            CatalogId::Switch | CatalogId::Ss => "SS_study",
            CatalogId::Controller => "C_study",
            CatalogId::Rrl => "RRL_study",
            CatalogId::Rrr => "RRR_study",
            CatalogId::Rll => "RLL_study",
            CatalogId::Ssl => "SSL_study",
            CatalogId::Sss => "SSS_study",
            CatalogId::Sll => "SLL_study",
            CatalogId::Cc => "CC_study",
            CatalogId::Css => "CSS_study",
            CatalogId::Csl => "CSL_study",
        }
    }

    /// Whether the model contains router control cards affected by
    /// [`BuildOptions::corrected`].
    pub fn has_chw_recovery(self) -> bool {
        matches!(self, CatalogId::Rr | CatalogId::Rrl | CatalogId::Rrr | CatalogId::Rll)
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let key = match lower.as_str() {
            "rl" => "rrl",
            "sdncontroller" => "controller",
            other => other,
        };
        CatalogId::ALL.into_iter().find(|id| id.name() == key).ok_or_else(|| CatalogError::UnknownModel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Use `chw_rcv_rate` for the spare-card return `CHW_R*` in rr, rrl, rrr and rll.
    pub corrected: bool,
}

/// Builds the listed form of a catalog model.
pub fn build(id: CatalogId) -> SanModel {
    build_with(id, BuildOptions::default())
}

pub fn build_with(id: CatalogId, opts: BuildOptions) -> SanModel {
    let chw = if opts.corrected { ChwRecovery::RecoveryRate } else { ChwRecovery::AsListed };
    match id {
        CatalogId::Link => models::link_model(),
        CatalogId::Router => models::router(),
        CatalogId::Switch => models::switch(),
        CatalogId::Controller => models::sdn_controller(),
        CatalogId::Rr => models::rr(chw),
        CatalogId::Rrl => models::rrl(chw),
        CatalogId::Rrr => models::rrr(chw),
        CatalogId::Rll => models::rll(chw),
        CatalogId::Ss => models::ss(),
        CatalogId::Ssl => models::ssl(),
        CatalogId::Sss => models::sss(),
        CatalogId::Sll => models::sll(),
        CatalogId::Ll => models::ll(),
        CatalogId::Cc => models::cc(),
        CatalogId::Css => models::css(),
        CatalogId::Csl => models::csl(),
    }
}

fn zero(places: &[&str]) -> crate::san::Cond {
    all(places.iter().map(|p| mark(p).is(0)))
}

/// Unavailability predicate of a catalog model.
pub fn reward(id: CatalogId) -> RewardVariable {
    let ctl = Ctl::new("");
    let pred = match id {
        CatalogId::Link => mark("Failed").is(1),
        CatalogId::Router => zero(&["Working", "spare_CHW"]),
        CatalogId::Switch => zero(&["Working"]),
        CatalogId::Controller => ctl.down(),
        CatalogId::Rr => zero(&["Working_S1", "Working_S2", "spare_CHW_S1", "spare_CHW_S2"]),
        CatalogId::Rrl => zero(&["Working_S1", "Working_S2", "Working_L", "spare_CHW_S1", "spare_CHW_S2"]),
        CatalogId::Rrr => zero(&[
            "Working_S1",
            "Working_S2",
            "Working_S3",
            "spare_CHW_S1",
            "spare_CHW_S2",
            "spare_CHW_S3",
        ]),
        CatalogId::Rll => zero(&["Working_L1", "Working_L2", "Working_R", "spare_CHW"]),
        CatalogId::Ss => zero(&["Working_S1", "Working_S2"]),
        CatalogId::Ssl => zero(&["Working_S1", "Working_S2", "Working_L"]),
        CatalogId::Sss => zero(&["Working_S1", "Working_S2", "Working_S3"]),
        CatalogId::Sll => zero(&["Working_L1", "Working_L2", "Working_S"]),
        CatalogId::Ll => zero(&["Working_L1", "Working_L2"]),
        // Both replicas down, or a misconfiguration.
        CatalogId::Cc => (Ctl::new("_C1").down() & Ctl::new("_C2").down()) | mark("MIS").is(1),
        // Switches and link down while the controller is down or incompatible.
        CatalogId::Csl => zero(&["Working_S", "Working_L"]) & (ctl.down() | mark("CIS").is(1)),
        CatalogId::Css => {
            zero(&["Working_S1", "Working_S2"])
                & any([ctl.down(), mark("CIS").is(1), mark("CIS_S1").is(1), mark("CIS_S2").is(1)])
        }
    };
    RewardVariable::new(&format!("U_{}", id.name()), flatten(pred))
}

fn flatten(c: crate::san::Cond) -> crate::san::Cond {
    use crate::san::Cond;
    match c {
        Cond::Or(v) => {
            let mut out = Vec::new();
            for x in v.into_iter().map(flatten) {
                match x {
                    Cond::Or(inner) => out.extend(inner),
                    x => out.push(x),
                }
            }
            Cond::Or(out)
        }
        Cond::And(v) => {
            let mut out = Vec::new();
            for x in v.into_iter().map(flatten) {
                match x {
                    Cond::And(inner) => out.extend(inner),
                    x => out.push(x),
                }
            }
            Cond::And(out)
        }
        other => other,
    }
}

/// Parameter set of `study` at its first grid point, checked to cover `id`.
pub fn default_params(id: CatalogId, study_name: &str) -> Result<ParamSet, CatalogError> {
    let s = study(study_name)?;
    let params = s.defaults();
    let missing: Vec<String> =
        build(id).params.iter().filter(|p| params.get(&p.name).is_none()).map(|p| p.name.clone()).collect();
    if !missing.is_empty() {
        return Err(CatalogError::StudyMismatch { study: s.name.clone(), model: id, missing });
    }
    Ok(params)
}

/// Checks the value-level invariants of a parameter set for `model`.
pub fn check_params(model: &SanModel, params: &ParamSet) -> Result<(), CatalogError> {
    let bad = |param: &str, value: f64, reason: &str| {
        Err(CatalogError::BadParam { param: param.to_string(), value, reason: reason.to_string() })
    };
    for decl in &model.params {
        let Some(v) = params.get(&decl.name) else {
            return Err(SanError::MissingParam { model: model.id.clone(), param: decl.name.clone() }.into());
        };
        if !v.is_finite() || v < 0.0 {
            return bad(&decl.name, v, "must be a non-negative number");
        }
        if decl.kind == ParamKind::Int && v.fract() != 0.0 {
            return bad(&decl.name, v, "must be an integer");
        }
        if decl.name.ends_with("_cvg") && v > 1.0 {
            return bad(&decl.name, v, "coverage must lie in [0, 1]");
        }
    }
    if let (Some(k), Some(n)) = (params.get("K_th"), params.get("N_proc")) {
        if k > n {
            return bad("K_th", k, "must not exceed N_proc");
        }
    }
    Ok(())
}

/// A catalog model ready to execute at one parameter point.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: CatalogId,
    pub model: CompiledModel,
    pub bindings: Bindings,
    pub reward: CompiledReward,
}

/// Builds, validates and binds a catalog model.
pub fn instantiate(id: CatalogId, params: &ParamSet, opts: BuildOptions) -> Result<Instance, CatalogError> {
    let san = build_with(id, opts);
    check_params(&san, params)?;
    let model = san.compile()?;
    let bindings = model.bind(params)?;
    let reward = reward(id).compile(&model)?;
    Ok(Instance { id, model, bindings, reward })
}

/// Parameters used in the listings under names other than the study names.
pub fn param_aliases() -> &'static [(&'static str, &'static str)] {
    &[
        ("hw_cvlg", "hw_cvg"),
        ("sw_cvlg", "sw_cvg"),
        ("heq_cvq", "heq_cvg"),
        ("fhw_t_fail_rate", "fhwt_fail_rate"),
        ("fhw_t_rcv_rate", "fhwt_rcv_rate"),
    ]
}
