//! Minimal-cut-set enumeration on a network topology and composition of
//! per-cut-set unavailabilities.

mod random;
mod topology;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use topology::{Element, ElementKind, Link, Node, Role, Topology, Variant};
use topology::Evaluator;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructuralError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate element id {0:?}")]
    DuplicateId(String),
    #[error("link {link:?} refers to unknown node {node:?}")]
    UnknownEndpoint { link: String, node: String },
    #[error("link {0:?} connects a node to itself")]
    SelfLoop(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("unknown network variant {0:?} (expected tn, fsdn or csdn)")]
    UnknownVariant(String),
    #[error("the {0} requirement already fails with no element down")]
    BaselineFails(Variant),
    #[error("max cardinality must be at least 1")]
    BadCardinality,
    #[error("{0} elements are too many for exhaustive search")]
    TooLarge(usize),
    #[error("value {0} lies outside [0, 1]")]
    OutOfRange(f64),
}

/// A set of elements whose joint failure breaks the requirement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutSet {
    /// Nodes first, then links, each sorted by id.
    pub elements: Vec<Element>,
}

impl CutSet {
    pub fn new(mut elements: Vec<Element>) -> Self {
        elements.sort();
        CutSet { elements }
    }

    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    /// `{n,n,l}` style tag.
    pub fn type_tag(&self) -> String {
        let parts: Vec<&str> = self
            .elements
            .iter()
            .map(|e| if e.kind == ElementKind::Node { "n" } else { "l" })
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(Element::label).collect()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.id.as_str()).collect()
    }
}

struct Checker<'a> {
    eval: Evaluator,
    elements: &'a [Element],
}

impl Checker<'_> {
    fn fails(&self, variant: Variant, picked: &[usize]) -> bool {
        let (nodes, links) = self.eval.state(picked.iter().map(|&i| &self.elements[i]));
        !self.eval.works(variant, &nodes, &links)
    }
}

fn check_baseline(eval: &Evaluator, variant: Variant) -> Result<(), StructuralError> {
    let (nodes, links) = eval.state([]);
    if eval.works(variant, &nodes, &links) {
        Ok(())
    } else {
        Err(StructuralError::BaselineFails(variant))
    }
}

/// Minimal cut sets of cardinality at most `max_cardinality`, ordered by
/// cardinality and then lexicographically.
///
/// Subsets are visited by increasing size; supersets of cuts already found are
/// skipped, so every failing subset that remains is minimal. For
/// [`Variant::Csdn`] the search runs on the combined forwarding-and-control
/// requirement and forwarding cuts are dropped from the result.
pub fn enumerate_min_cutsets(
    topo: &Topology,
    variant: Variant,
    max_cardinality: usize,
) -> Result<Vec<CutSet>, StructuralError> {
    if max_cardinality == 0 {
        return Err(StructuralError::BadCardinality);
    }
    topo.validate()?;
    let eval = Evaluator::new(topo);
    check_baseline(&eval, variant)?;
    let elements = topo.elements(variant);
    let checker = Checker { eval, elements: &elements };
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut combo: Vec<usize> = Vec::new();
    for k in 1..=max_cardinality.min(elements.len()) {
        combo.clear();
        combo.extend(0..k);
        loop {
            let covered = found.iter().any(|c| c.iter().all(|x| combo.binary_search(x).is_ok()));
            if !covered && checker.fails(variant, &combo) {
                found.push(combo.clone());
            }
            if !next_combination(&mut combo, elements.len()) {
                break;
            }
        }
    }
    let mut out: Vec<CutSet> = found
        .into_iter()
        .filter(|c| variant != Variant::Csdn || !checker.fails(Variant::Fsdn, c))
        .map(|c| CutSet::new(c.into_iter().map(|i| elements[i].clone()).collect()))
        .collect();
    out.sort_by(|a, b| (a.cardinality(), &a.elements).cmp(&(b.cardinality(), &b.elements)));
    Ok(out)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive reference: every subset of at most `max_cardinality` elements
/// is tested directly, and a failing subset is kept when no single-element
/// removal still fails. Limited to 64 failable elements.
pub fn brute_force_min_cutsets(
    topo: &Topology,
    variant: Variant,
    max_cardinality: usize,
) -> Result<Vec<CutSet>, StructuralError> {
    topo.validate()?;
    let eval = Evaluator::new(topo);
    check_baseline(&eval, variant)?;
    let elements = topo.elements(variant);
    let n = elements.len();
    if n > 64 {
        return Err(StructuralError::TooLarge(n));
    }
    let checker = Checker { eval, elements: &elements };
    let members = |mask: u64| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).collect() };
    let fails = |mask: u64| checker.fails(variant, &members(mask));
    let mut out = Vec::new();
    for k in 1..=max_cardinality.min(n) {
        // Gosper's hack: all n-bit masks with k bits set, in increasing order.
        let mut mask: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        loop {
            if fails(mask) {
                let minimal = members(mask).into_iter().all(|i| !fails(mask & !(1 << i)));
                let control_only = variant != Variant::Csdn || !checker.fails(Variant::Fsdn, &members(mask));
                if minimal && control_only {
                    out.push(CutSet::new(members(mask).into_iter().map(|i| elements[i].clone()).collect()));
                }
            }
            let c = mask & mask.wrapping_neg();
            let r = mask.wrapping_add(c);
            if r == 0 || (n < 64 && r >> n != 0) {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    out.sort_by(|a, b| (a.cardinality(), &a.elements).cmp(&(b.cardinality(), &b.elements)));
    Ok(out)
}

fn check_unit(values: &[f64]) -> Result<(), StructuralError> {
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(&v) => Err(StructuralError::OutOfRange(v)),
        None => Ok(()),
    }
}

/// `1 − Π(1 − U_i)`: series combination of cut-set unavailabilities, treating
/// cut sets as independent even when they share elements.
pub fn compose_series(cut_unavailabilities: &[f64]) -> Result<f64, StructuralError> {
    check_unit(cut_unavailabilities)?;
    let log_up: f64 = cut_unavailabilities.iter().map(|u| (-u).ln_1p()).sum();
    Ok(-log_up.exp_m1())
}

/// Product of independent unavailabilities, e.g. two links times a controller.
pub fn compose_independent_product(factors: &[f64]) -> Result<f64, StructuralError> {
    check_unit(factors)?;
    Ok(factors.iter().product())
}
