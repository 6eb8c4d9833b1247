use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use san_avail::catalog::{self, Assignment, CatalogId, Study, Variable};
use san_avail::san::{ParamKind, ParamSet};
use san_avail::sim::SimConfig;

use crate::RunError;

/// Which solution methods a run uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Sim,
    #[default]
    Ctmc,
    Both,
}

impl Backend {
    pub fn engines(self) -> &'static [Engine] {
        match self {
            Backend::Sim => &[Engine::Sim],
            Backend::Ctmc => &[Engine::Ctmc],
            Backend::Both => &[Engine::Ctmc, Engine::Sim],
        }
    }
}

/// A single solution method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Sim,
    Ctmc,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Sim => "sim",
            Engine::Ctmc => "ctmc",
        }
    }
}

/// A parameter study bound to a model, a backend and simulation settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySpec {
    pub name: String,
    pub model: CatalogId,
    /// Reward variable id; only the model's own unavailability is available.
    #[serde(default)]
    pub reward: Option<String>,
    #[serde(default)]
    pub backend: Backend,
    /// Use the recovery rate for the spare control card in the router cut sets.
    #[serde(default)]
    pub corrected: bool,
    #[serde(default)]
    pub sim: SimConfig,
    pub variables: Vec<Variable>,
}

impl StudySpec {
    /// One of the built-in studies, on its own model.
    pub fn builtin(name: &str) -> Result<Self, RunError> {
        Ok(Self::from_study(catalog::study(name)?))
    }

    pub fn from_study(s: &Study) -> Self {
        StudySpec {
            name: s.name.clone(),
            model: s.model,
            reward: Some(catalog::reward(s.model).id),
            backend: Backend::default(),
            corrected: false,
            sim: SimConfig::default(),
            variables: s.variables.clone(),
        }
    }

    /// Single parameter point.
    pub fn point(name: &str, model: CatalogId, params: &ParamSet) -> Self {
        let kinds = catalog::build(model).params;
        let variables = params
            .iter()
            .map(|(k, &v)| Variable {
                name: k.to_string(),
                kind: kinds.iter().find(|d| d.name == *k).map_or(ParamKind::Real, |d| d.kind),
                value: Assignment::Fixed(v),
            })
            .collect();
        StudySpec {
            name: name.to_string(),
            model,
            reward: Some(catalog::reward(model).id),
            backend: Backend::default(),
            corrected: false,
            sim: SimConfig::default(),
            variables,
        }
    }

    /// Runs the same grid on another model.
    pub fn with_model(mut self, model: CatalogId) -> Self {
        self.model = model;
        self.reward = Some(catalog::reward(model).id);
        self
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::Io { path: path.display().to_string(), source: e })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Spec(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("study specs serialize")
    }

    fn as_study(&self) -> Study {
        Study { name: self.name.clone(), model: self.model, variables: self.variables.clone() }
    }

    pub fn ranged(&self) -> Vec<String> {
        self.as_study().ranged().into_iter().map(str::to_string).collect()
    }

    pub fn grid(&self) -> Vec<ParamSet> {
        self.as_study().grid()
    }

    pub fn grid_size(&self) -> usize {
        self.as_study().grid_size()
    }

    /// Checks the spec against the catalog: known reward, variables covering
    /// the model, values of the right kind and range.
    pub fn validate(&self) -> Result<(), RunError> {
        self.as_study().validate()?;
        let expected = catalog::reward(self.model).id;
        if let Some(r) = &self.reward {
            if *r != expected {
                return Err(RunError::Spec(format!("model {} has reward {expected}, not {r}", self.model)));
            }
        }
        let model = catalog::build(self.model);
        let missing: Vec<String> = model
            .params
            .iter()
            .filter(|p| !self.variables.iter().any(|v| v.name == p.name))
            .map(|p| p.name.clone())
            .collect();
        if !missing.is_empty() {
            return Err(catalog::CatalogError::StudyMismatch { study: self.name.clone(), model: self.model, missing }.into());
        }
        self.sim.validate()?;
        Ok(())
    }
}
