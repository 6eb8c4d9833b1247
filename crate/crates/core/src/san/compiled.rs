//! Index-based executable form of a [`SanModel`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::expr::{Cond, Expr, RefKind};
use super::model::{validate_model, ParamDecl, ParamKind, SanModel};
use super::SanError;

/// Tolerance on the sum of case probabilities.
pub const CASE_SUM_TOL: f64 = 1e-12;

/// Token counts indexed by place position in the compiled model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking(pub Vec<u32>);

impl Marking {
    pub fn tokens(&self) -> &[u32] {
        &self.0
    }
}

/// Global parameter values keyed by name.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct ParamSet(pub BTreeMap<String, f64>);

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn set(&mut self, name: &str, value: f64) -> &mut Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.0.iter()
    }
}

impl FromIterator<(String, f64)> for ParamSet {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        ParamSet(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<(&'a str, f64)> for ParamSet {
    fn from_iter<I: IntoIterator<Item = (&'a str, f64)>>(iter: I) -> Self {
        ParamSet(iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

/// Parameter values resolved against a compiled model's schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Bindings {
    values: Vec<f64>,
}

impl Bindings {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone)]
struct CAssign {
    place: usize,
    value: Expr<usize>,
}

#[derive(Debug, Clone)]
struct CInputGate {
    id: String,
    predicate: Cond<usize>,
    function: Vec<CAssign>,
}

#[derive(Debug, Clone)]
struct COutputGate {
    id: String,
    function: Vec<CAssign>,
}

#[derive(Debug, Clone)]
struct CCase {
    probability: Expr<usize>,
    arcs: Vec<(usize, u32)>,
    gates: Vec<usize>,
}

#[derive(Debug, Clone)]
struct CActivity {
    id: String,
    rate: Expr<usize>,
    arcs: Vec<(usize, u32)>,
    gates: Vec<usize>,
    cases: Vec<CCase>,
}

/// Executable SAN. Immutable and `Sync`; markings are owned by callers.
#[derive(Debug, Clone)]
pub struct CompiledModel {
    id: String,
    places: Vec<String>,
    place_index: HashMap<String, usize>,
    params: Vec<ParamDecl>,
    initial: Vec<Expr<usize>>,
    activities: Vec<CActivity>,
    input_gates: Vec<CInputGate>,
    output_gates: Vec<COutputGate>,
}

impl SanModel {
    /// Validates and lowers the model to its index-based form.
    pub fn compile(&self) -> Result<CompiledModel, SanError> {
        CompiledModel::new(self)
    }
}

impl CompiledModel {
    pub fn new(model: &SanModel) -> Result<Self, SanError> {
        let diags = validate_model(model);
        if !diags.is_empty() {
            return Err(SanError::Invalid { model: model.id.clone(), diagnostics: diags });
        }
        let place_index: HashMap<String, usize> =
            model.places.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
        let param_index: HashMap<&str, usize> =
            model.params.iter().enumerate().map(|(i, p)| (p.name.as_str(), i)).collect();
        let ig_index: HashMap<&str, usize> =
            model.input_gates.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
        let og_index: HashMap<&str, usize> =
            model.output_gates.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();

        let mut resolve = |kind: RefKind, name: &String| -> Result<usize, ()> {
            match kind {
                RefKind::Place => place_index.get(name).copied().ok_or(()),
                RefKind::Param => param_index.get(name.as_str()).copied().ok_or(()),
            }
        };
        // Validation guarantees every reference resolves.
        let mut lower = |e: &Expr| e.try_map(&mut resolve).expect("validated reference");
        let initial = model.places.iter().map(|p| lower(&p.initial)).collect();
        let lower_fn = |stmts: &[super::model::Assign], lower: &mut dyn FnMut(&Expr) -> Expr<usize>| {
            stmts
                .iter()
                .map(|s| CAssign { place: place_index[&s.place], value: lower(&s.value) })
                .collect::<Vec<_>>()
        };
        let input_gates = model
            .input_gates
            .iter()
            .map(|g| CInputGate {
                id: g.id.clone(),
                predicate: g
                    .predicate
                    .try_map(&mut |k, n: &String| match k {
                        RefKind::Place => place_index.get(n).copied().ok_or(()),
                        RefKind::Param => param_index.get(n.as_str()).copied().ok_or(()),
                    })
                    .expect("validated reference"),
                function: lower_fn(&g.function, &mut lower),
            })
            .collect();
        let output_gates = model
            .output_gates
            .iter()
            .map(|g| COutputGate { id: g.id.clone(), function: lower_fn(&g.function, &mut lower) })
            .collect();
        let activities = model
            .activities
            .iter()
            .map(|a| CActivity {
                id: a.id.clone(),
                rate: lower(&a.rate),
                arcs: a.input_arcs.iter().map(|arc| (place_index[&arc.place], arc.weight)).collect(),
                gates: a.input_gates.iter().map(|g| ig_index[g.as_str()]).collect(),
                cases: a
                    .cases
                    .iter()
                    .map(|c| CCase {
                        probability: lower(&c.probability),
                        arcs: c.output_arcs.iter().map(|arc| (place_index[&arc.place], arc.weight)).collect(),
                        gates: c.output_gates.iter().map(|g| og_index[g.as_str()]).collect(),
                    })
                    .collect(),
            })
            .collect();

        Ok(CompiledModel {
            id: model.id.clone(),
            places: model.places.iter().map(|p| p.id.clone()).collect(),
            place_index,
            params: model.params.clone(),
            initial,
            activities,
            input_gates,
            output_gates,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn place_names(&self) -> &[String] {
        &self.places
    }

    pub fn place_index(&self, name: &str) -> Option<usize> {
        self.place_index.get(name).copied()
    }

    pub fn params(&self) -> &[ParamDecl] {
        &self.params
    }

    pub fn num_activities(&self) -> usize {
        self.activities.len()
    }

    pub fn activity_id(&self, a: usize) -> &str {
        &self.activities[a].id
    }

    pub fn activity_index(&self, id: &str) -> Option<usize> {
        self.activities.iter().position(|a| a.id == id)
    }

    pub fn num_cases(&self, a: usize) -> usize {
        self.activities[a].cases.len()
    }

    /// Resolves `params` against the model schema. Extra entries are ignored.
    pub fn bind(&self, params: &ParamSet) -> Result<Bindings, SanError> {
        let mut values = Vec::with_capacity(self.params.len());
        for decl in &self.params {
            let v = params
                .get(&decl.name)
                .ok_or_else(|| SanError::MissingParam { model: self.id.clone(), param: decl.name.clone() })?;
            let ok = v.is_finite() && (decl.kind == ParamKind::Real || v.fract() == 0.0);
            if !ok {
                return Err(SanError::BadParam {
                    param: decl.name.clone(),
                    value: v,
                    reason: if v.is_finite() { "expected an integer" } else { "not finite" },
                });
            }
            values.push(v);
        }
        Ok(Bindings { values })
    }

    pub fn initial_marking(&self, b: &Bindings) -> Result<Marking, SanError> {
        let tokens = self
            .initial
            .iter()
            .enumerate()
            .map(|(i, e)| to_tokens(e.eval(&[], &b.values), || format!("initial marking of {}", self.places[i])))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Marking(tokens))
    }

    /// Builds a marking from `(place, tokens)` pairs; unspecified places are 0.
    pub fn marking_from(&self, entries: &[(&str, u32)]) -> Result<Marking, SanError> {
        let mut tokens = vec![0; self.places.len()];
        for (name, n) in entries {
            let i = self
                .place_index(name)
                .ok_or_else(|| SanError::UnknownPlace { model: self.id.clone(), place: name.to_string() })?;
            tokens[i] = *n;
        }
        Ok(Marking(tokens))
    }

    fn check_marking(&self, m: &Marking) -> Result<(), SanError> {
        if m.0.len() != self.places.len() {
            return Err(SanError::MarkingMismatch { model: self.id.clone(), expected: self.places.len(), got: m.0.len() });
        }
        Ok(())
    }

    fn structurally_enabled(&self, act: &CActivity, m: &[u32], b: &Bindings) -> bool {
        act.arcs.iter().all(|&(p, w)| m[p] >= w)
            && act.gates.iter().all(|&g| self.input_gates[g].predicate.eval(m, &b.values))
    }

    /// Rate of activity `a` if it is enabled in `m`, otherwise `None`.
    pub fn enabled_rate(&self, a: usize, m: &Marking, b: &Bindings) -> Result<Option<f64>, SanError> {
        let act = &self.activities[a];
        if !self.structurally_enabled(act, &m.0, b) {
            return Ok(None);
        }
        let r = act.rate.eval(&m.0, &b.values);
        if !r.is_finite() || r < 0.0 {
            return Err(SanError::BadRate { activity: act.id.clone(), rate: r, marking: self.describe(m) });
        }
        Ok((r > 0.0).then_some(r))
    }

    /// Enabled activities with their rates, in declaration order.
    pub fn enabled_rates(&self, m: &Marking, b: &Bindings) -> Result<Vec<(usize, f64)>, SanError> {
        self.check_marking(m)?;
        let mut out = Vec::new();
        for a in 0..self.activities.len() {
            if let Some(r) = self.enabled_rate(a, m, b)? {
                out.push((a, r));
            }
        }
        Ok(out)
    }

    /// Ids of the activities enabled in `m`.
    pub fn enabled(&self, m: &Marking, b: &Bindings) -> Result<Vec<&str>, SanError> {
        Ok(self.enabled_rates(m, b)?.into_iter().map(|(a, _)| self.activities[a].id.as_str()).collect())
    }

    /// Evaluated and checked case probabilities of activity `a` at `m`.
    pub fn case_probs(&self, a: usize, m: &Marking, b: &Bindings) -> Result<Vec<f64>, SanError> {
        let mut out = Vec::new();
        self.case_probs_into(a, m, b, &mut out)?;
        Ok(out)
    }

    /// Allocation-free variant of [`case_probs`](Self::case_probs).
    pub fn case_probs_into(&self, a: usize, m: &Marking, b: &Bindings, out: &mut Vec<f64>) -> Result<(), SanError> {
        let act = &self.activities[a];
        out.clear();
        if act.cases.len() == 1 {
            let p = act.cases[0].probability.eval(&m.0, &b.values);
            if (p - 1.0).abs() > CASE_SUM_TOL {
                return Err(self.norm_error(act, m, vec![p]));
            }
            out.push(1.0);
            return Ok(());
        }
        let mut sum = 0.0;
        for c in &act.cases {
            let p = c.probability.eval(&m.0, &b.values);
            out.push(p);
            sum += p;
        }
        if out.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > CASE_SUM_TOL {
            return Err(self.norm_error(act, m, out.clone()));
        }
        Ok(())
    }

    fn norm_error(&self, act: &CActivity, m: &Marking, probs: Vec<f64>) -> SanError {
        SanError::Normalization { activity: act.id.clone(), probs, marking: self.describe(m) }
    }

    /// Fires case `case` of activity `a` from `m`.
    pub fn fire(&self, a: usize, case: usize, m: &Marking, b: &Bindings) -> Result<Marking, SanError> {
        self.check_marking(m)?;
        let act = self.activities.get(a).ok_or(SanError::NoSuchActivity(a))?;
        if !self.structurally_enabled(act, &m.0, b) || self.enabled_rate(a, m, b)?.is_none() {
            return Err(SanError::NotEnabled { activity: act.id.clone(), marking: self.describe(m) });
        }
        let c = act
            .cases
            .get(case)
            .ok_or_else(|| SanError::NoSuchCase { activity: act.id.clone(), case, cases: act.cases.len() })?;
        let mut t = m.0.clone();
        for &(p, w) in &act.arcs {
            t[p] -= w;
        }
        for &g in &act.gates {
            let gate = &self.input_gates[g];
            self.apply(&gate.id, &gate.function, &mut t, b)?;
        }
        for &(p, w) in &c.arcs {
            t[p] = t[p].checked_add(w).ok_or_else(|| SanError::Overflow { place: self.places[p].clone() })?;
        }
        for &g in &c.gates {
            let gate = &self.output_gates[g];
            self.apply(&gate.id, &gate.function, &mut t, b)?;
        }
        Ok(Marking(t))
    }

    fn apply(&self, gate: &str, stmts: &[CAssign], t: &mut [u32], b: &Bindings) -> Result<(), SanError> {
        for s in stmts {
            let v = s.value.eval(t, &b.values);
            if v < 0.0 {
                return Err(SanError::NegativeTokens {
                    gate: gate.to_string(),
                    place: self.places[s.place].clone(),
                    value: v,
                });
            }
            t[s.place] = to_tokens(v, || format!("gate {gate} writing {}", self.places[s.place]))?;
        }
        Ok(())
    }

    /// `place=count` pairs for non-empty places, for diagnostics.
    pub fn describe(&self, m: &Marking) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.places)
            .filter(|(n, _)| **n > 0)
            .map(|(n, p)| format!("{p}={n}"))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn to_tokens(v: f64, ctx: impl FnOnce() -> String) -> Result<u32, SanError> {
    if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(SanError::BadTokenValue { context: ctx(), value: v })
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
