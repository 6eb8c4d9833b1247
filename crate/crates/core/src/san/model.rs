//! Declarative, name-based SAN description and structural validation.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use super::expr::{Cond, Expr, RefKind};

#[derive(Debug, Clone, PartialEq)]
pub struct Place {
    pub id: String,
    /// Initial token count; may reference integer parameters such as `N_proc`.
    pub initial: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub place: String,
    pub weight: u32,
}

/// One statement of a gate function: `place->Mark() = value;`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assign {
    pub place: String,
    pub value: Expr,
}

impl Assign {
    pub fn set(place: &str, value: impl Into<Expr>) -> Self {
        Assign { place: place.to_string(), value: value.into() }
    }

    /// `place->Mark()++;`
    pub fn inc(place: &str) -> Self {
        Self::set(place, super::expr::mark(place) + 1)
    }

    /// `place->Mark()--;`
    pub fn dec(place: &str) -> Self {
        Self::set(place, super::expr::mark(place) - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputGate {
    pub id: String,
    pub predicate: Cond,
    pub function: Vec<Assign>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputGate {
    pub id: String,
    pub function: Vec<Assign>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub probability: Expr,
    pub output_arcs: Vec<Arc>,
    pub output_gates: Vec<String>,
}

/// Exponentially timed activity.
#[derive(Debug, Clone, PartialEq)]
pub struct Activity {
    pub id: String,
    pub rate: Expr,
    pub input_arcs: Vec<Arc>,
    pub input_gates: Vec<String>,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Int,
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamDecl {
    pub name: String,
    pub kind: ParamKind,
}

/// Immutable SAN description. Build with [`SanBuilder`], check with
/// [`validate_model`], execute after [`SanModel::compile`](crate::san::CompiledModel).
#[derive(Debug, Clone, PartialEq)]
pub struct SanModel {
    pub id: String,
    pub places: Vec<Place>,
    pub activities: Vec<Activity>,
    pub input_gates: Vec<InputGate>,
    pub output_gates: Vec<OutputGate>,
    pub params: Vec<ParamDecl>,
}

/// Human-readable structural problem found by [`validate_model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Returns every structural problem in `model`; empty means well formed.
pub fn validate_model(model: &SanModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut diag = |location: String, message: String| out.push(Diagnostic { location, message });

    let places = unique_ids(model.places.iter().map(|p| p.id.as_str()), "place", &mut diag);
    let params = unique_ids(model.params.iter().map(|p| p.name.as_str()), "parameter", &mut diag);
    let igates = unique_ids(model.input_gates.iter().map(|g| g.id.as_str()), "input gate", &mut diag);
    let ogates = unique_ids(model.output_gates.iter().map(|g| g.id.as_str()), "output gate", &mut diag);
    unique_ids(model.activities.iter().map(|a| a.id.as_str()), "activity", &mut diag);

    let mut check = |location: String, refs: Vec<(RefKind, &String)>| {
        for (kind, name) in refs {
            let (ok, what) = match kind {
                RefKind::Place => (places.contains(name.as_str()), "unknown place"),
                RefKind::Param => (params.contains(name.as_str()), "undeclared parameter"),
            };
            if !ok {
                diag(location.clone(), format!("{what} \"{name}\""));
            }
        }
    };

    for p in &model.places {
        check(format!("place {} initial marking", p.id), expr_refs(&p.initial));
    }
    for g in &model.input_gates {
        let mut refs = Vec::new();
        g.predicate.visit_refs(&mut |k, r| refs.push((k, r)));
        check(format!("input gate {} predicate", g.id), refs);
        for (i, s) in g.function.iter().enumerate() {
            check(format!("input gate {} statement {}", g.id, i + 1), assign_refs(s));
        }
    }
    for g in &model.output_gates {
        for (i, s) in g.function.iter().enumerate() {
            check(format!("output gate {} statement {}", g.id, i + 1), assign_refs(s));
        }
    }
    let mut gate_problems = Vec::new();
    for a in &model.activities {
        check(format!("activity {} rate", a.id), expr_refs(&a.rate));
        for arc in &a.input_arcs {
            let loc = format!("input arc {} -> {}", arc.place, a.id);
            if arc.weight == 0 {
                gate_problems.push((loc.clone(), "arc weight must be positive".to_string()));
            }
            check(loc, vec![(RefKind::Place, &arc.place)]);
        }
        for g in &a.input_gates {
            if !igates.contains(g.as_str()) {
                gate_problems.push((format!("activity {}", a.id), format!("unknown input gate \"{g}\"")));
            }
        }
        if a.cases.is_empty() {
            gate_problems.push((format!("activity {}", a.id), "activity has no cases".to_string()));
        }
        for (ci, c) in a.cases.iter().enumerate() {
            check(format!("activity {} case {} probability", a.id, ci + 1), expr_refs(&c.probability));
            for arc in &c.output_arcs {
                let loc = format!("output arc {} case {} -> {}", a.id, ci + 1, arc.place);
                if arc.weight == 0 {
                    gate_problems.push((loc.clone(), "arc weight must be positive".to_string()));
                }
                check(loc, vec![(RefKind::Place, &arc.place)]);
            }
            for g in &c.output_gates {
                if !ogates.contains(g.as_str()) {
                    gate_problems.push((
                        format!("activity {} case {}", a.id, ci + 1),
                        format!("unknown output gate \"{g}\""),
                    ));
                }
            }
        }
    }
    for (location, message) in gate_problems {
        out.push(Diagnostic { location, message });
    }
    out
}

fn unique_ids<'a>(
    ids: impl Iterator<Item = &'a str>,
    what: &str,
    diag: &mut impl FnMut(String, String),
) -> HashSet<&'a str> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            diag(format!("{what} {id}"), format!("duplicate {what} id"));
        }
    }
    seen
}

fn expr_refs(e: &Expr) -> Vec<(RefKind, &String)> {
    let mut refs = Vec::new();
    e.visit_refs(&mut |k, r| refs.push((k, r)));
    refs
}

fn assign_refs(s: &Assign) -> Vec<(RefKind, &String)> {
    let mut refs = vec![(RefKind::Place, &s.place)];
    s.value.visit_refs(&mut |k, r| refs.push((k, r)));
    refs
}

/// Incremental construction of a [`SanModel`].
///
/// Parameters are collected from the expressions on [`finish`](Self::finish);
/// `K_th` and `N_proc` are integers, everything else is real. Places are
/// ordered by id, as in the model listings.
#[derive(Debug, Clone)]
pub struct SanBuilder {
    model: SanModel,
    int_params: BTreeSet<String>,
}

impl SanBuilder {
    pub fn new(id: &str) -> Self {
        SanBuilder {
            model: SanModel {
                id: id.to_string(),
                places: Vec::new(),
                activities: Vec::new(),
                input_gates: Vec::new(),
                output_gates: Vec::new(),
                params: Vec::new(),
            },
            int_params: ["K_th", "N_proc"].iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn place(&mut self, id: &str, initial: impl Into<Expr>) -> &mut Self {
        self.model.places.push(Place { id: id.to_string(), initial: initial.into() });
        self
    }

    pub fn input_gate(&mut self, id: &str, predicate: Cond, function: Vec<Assign>) -> &mut Self {
        self.model.input_gates.push(InputGate { id: id.to_string(), predicate, function });
        self
    }

    pub fn output_gate(&mut self, id: &str, function: Vec<Assign>) -> &mut Self {
        self.model.output_gates.push(OutputGate { id: id.to_string(), function });
        self
    }

    pub fn activity(&mut self, activity: Activity) -> &mut Self {
        self.model.activities.push(activity);
        self
    }

    pub fn finish(mut self) -> SanModel {
        let mut names = BTreeMap::new();
        let mut note = |kind: RefKind, name: &String| {
            if kind == RefKind::Param {
                names.insert(name.clone(), ());
            }
        };
        let m = &self.model;
        for p in &m.places {
            p.initial.visit_refs(&mut note);
        }
        for g in &m.input_gates {
            g.predicate.visit_refs(&mut note);
            g.function.iter().for_each(|s| s.value.visit_refs(&mut note));
        }
        for g in &m.output_gates {
            g.function.iter().for_each(|s| s.value.visit_refs(&mut note));
        }
        for a in &m.activities {
            a.rate.visit_refs(&mut note);
            a.cases.iter().for_each(|c| c.probability.visit_refs(&mut note));
        }
        self.model.places.sort_by(|a, b| a.id.cmp(&b.id));
        self.model.params = names
            .into_keys()
            .map(|name| {
                let kind = if self.int_params.contains(&name) { ParamKind::Int } else { ParamKind::Real };
                ParamDecl { name, kind }
            })
            .collect();
        self.model
    }
}

/// Fluent constructor for [`Activity`].
#[derive(Debug, Clone)]
pub struct ActivityBuilder {
    act: Activity,
}

/// Starts an activity with the given rate expression.
pub fn activity(id: &str, rate: impl Into<Expr>) -> ActivityBuilder {
    ActivityBuilder {
        act: Activity {
            id: id.to_string(),
            rate: rate.into(),
            input_arcs: Vec::new(),
            input_gates: Vec::new(),
            cases: Vec::new(),
        },
    }
}

/// Fluent constructor for [`Case`].
pub fn case(probability: impl Into<Expr>) -> Case {
    Case { probability: probability.into(), output_arcs: Vec::new(), output_gates: Vec::new() }
}

impl Case {
    pub fn to(mut self, place: &str) -> Self {
        self.output_arcs.push(Arc { place: place.to_string(), weight: 1 });
        self
    }

    pub fn gate(mut self, gate: &str) -> Self {
        self.output_gates.push(gate.to_string());
        self
    }
}

impl ActivityBuilder {
    pub fn from(mut self, place: &str) -> Self {
        self.act.input_arcs.push(Arc { place: place.to_string(), weight: 1 });
        self
    }

    pub fn from_weighted(mut self, place: &str, weight: u32) -> Self {
        self.act.input_arcs.push(Arc { place: place.to_string(), weight });
        self
    }

    pub fn gate(mut self, gate: &str) -> Self {
        self.act.input_gates.push(gate.to_string());
        self
    }

    /// Single-case shorthand: output arc to `place`.
    pub fn to(self, place: &str) -> Self {
        self.single(|c| c.to(place))
    }

    /// Single-case shorthand: output gate.
    pub fn out_gate(self, gate: &str) -> Self {
        self.single(|c| c.gate(gate))
    }

    fn single(mut self, f: impl FnOnce(Case) -> Case) -> Self {
        let c = if self.act.cases.is_empty() { case(1.0) } else { self.act.cases.remove(0) };
        self.act.cases.insert(0, f(c));
        self
    }

    pub fn case(mut self, c: Case) -> Self {
        self.act.cases.push(c);
        self
    }

    pub fn build(self) -> Activity {
        self.act
    }
}

impl From<ActivityBuilder> for Activity {
    fn from(b: ActivityBuilder) -> Self {
        b.build()
    }
}
