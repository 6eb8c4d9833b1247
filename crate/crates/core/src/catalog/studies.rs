//! Parameter studies: fixed values and manual lists whose cross product is the
//! experiment grid.

use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{CatalogError, CatalogId};
use crate::san::{ParamKind, ParamSet};

const STUDIES: &str = include_str!("../../data/studies.txt");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Assignment {
    Fixed(f64),
    Manual(Vec<f64>),
}

impl Assignment {
    pub fn values(&self) -> &[f64] {
        match self {
            Assignment::Fixed(v) => std::slice::from_ref(v),
            Assignment::Manual(v) => v,
        }
    }

    pub fn first(&self) -> f64 {
        self.values()[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: ParamKind,
    pub value: Assignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Study {
    pub name: String,
    pub model: CatalogId,
    pub variables: Vec<Variable>,
}

impl Study {
    /// Names of the manually ranged variables, in declaration order.
    pub fn ranged(&self) -> Vec<&str> {
        self.variables
            .iter()
            .filter(|v| matches!(v.value, Assignment::Manual(_)))
            .map(|v| v.name.as_str())
            .collect()
    }

    pub fn grid_size(&self) -> usize {
        self.variables.iter().map(|v| v.value.values().len()).product()
    }

    /// Every variable at its first value.
    pub fn defaults(&self) -> ParamSet {
        self.variables.iter().map(|v| (v.name.clone(), v.value.first())).collect()
    }

    /// Grid points in declaration order; the first ranged variable varies slowest.
    pub fn grid(&self) -> Vec<ParamSet> {
        let mut points = vec![ParamSet::new()];
        for v in &self.variables {
            let mut next = Vec::with_capacity(points.len() * v.value.values().len());
            for p in &points {
                for &x in v.value.values() {
                    next.push(p.clone().with(&v.name, x));
                }
            }
            points = next;
        }
        points
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |reason: String| Err(CatalogError::BadStudy { study: self.name.clone(), reason });
        let mut seen = std::collections::HashSet::new();
        for v in &self.variables {
            if !seen.insert(v.name.as_str()) {
                return bad(format!("variable {} assigned twice", v.name));
            }
            if v.value.values().is_empty() {
                return bad(format!("variable {} has an empty list", v.name));
            }
            for &x in v.value.values() {
                if !x.is_finite() || x < 0.0 {
                    return bad(format!("{} = {x} is not a non-negative number", v.name));
                }
                if v.kind == ParamKind::Int && x.fract() != 0.0 {
                    return bad(format!("{} = {x} is not an integer", v.name));
                }
                if v.name.ends_with("_cvg") && x > 1.0 {
                    return bad(format!("coverage {} = {x} exceeds 1", v.name));
                }
            }
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> Result<Assignment, String> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or("unterminated list")?;
        let values = inner
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Assignment::Manual(values))
    } else {
        s.parse::<f64>().map(Assignment::Fixed).map_err(|e| format!("{s:?}: {e}"))
    }
}

fn parse(text: &str) -> Result<Vec<Study>, String> {
    let mut out: Vec<Study> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| format!("line {}: {m}", n + 1);
        let mut parts = line.splitn(3, char::is_whitespace);
        let (a, b, c) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""), parts.next().unwrap_or(""));
        if a == "study" {
            let model = CatalogId::from_str(c.trim()).map_err(|e| err(e.to_string()))?;
            out.push(Study { name: b.to_string(), model, variables: Vec::new() });
            continue;
        }
        let kind = match b {
            "int" => ParamKind::Int,
            "double" => ParamKind::Real,
            other => return Err(err(format!("unknown type {other:?}"))),
        };
        let value = parse_list(c).map_err(err)?;
        let study = out.last_mut().ok_or_else(|| err("variable outside a study".into()))?;
        study.variables.push(Variable { name: a.to_string(), kind, value });
    }
    Ok(out)
}

/// The thirteen built-in studies.
pub fn studies() -> &'static [Study] {
    static CELL: OnceLock<Vec<Study>> = OnceLock::new();
    CELL.get_or_init(|| parse(STUDIES).expect("built-in study table"))
}

/// Looks a built-in study up by name (case-insensitive, `_study` suffix optional).
pub fn study(name: &str) -> Result<&'static Study, CatalogError> {
    let want = name.to_ascii_lowercase();
    let want = want.strip_suffix("_study").unwrap_or(&want);
    studies()
        .iter()
        .find(|s| s.name.to_ascii_lowercase().strip_suffix("_study") == Some(want))
        .ok_or_else(|| CatalogError::UnknownStudy(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_scalars() {
        assert_eq!(parse_list("[1.0E-5, 2]").unwrap(), Assignment::Manual(vec![1e-5, 2.0]));
        assert_eq!(parse_list("0.97").unwrap(), Assignment::Fixed(0.97));
        assert!(parse_list("[1.0").is_err());
    }

    #[test]
    fn lookup_is_forgiving() {
        assert_eq!(study("cc").unwrap().name, "CC_study");
        assert_eq!(study("RR_study").unwrap().name, "RR_study");
        assert!(study("nope").is_err());
    }

    #[test]
    fn grid_varies_last_variable_fastest() {
        let s = Study {
            name: "t".into(),
            model: CatalogId::Ll,
            variables: vec![
                Variable { name: "a".into(), kind: ParamKind::Real, value: Assignment::Manual(vec![1.0, 2.0]) },
                Variable { name: "b".into(), kind: ParamKind::Real, value: Assignment::Fixed(5.0) },
                Variable { name: "c".into(), kind: ParamKind::Real, value: Assignment::Manual(vec![3.0, 4.0]) },
            ],
        };
        let g: Vec<(f64, f64)> = s.grid().iter().map(|p| (p.get("a").unwrap(), p.get("c").unwrap())).collect();
        assert_eq!(g, vec![(1.0, 3.0), (1.0, 4.0), (2.0, 3.0), (2.0, 4.0)]);
        assert_eq!(s.grid_size(), 4);
        assert_eq!(s.ranged(), vec!["a", "c"]);
    }
}
