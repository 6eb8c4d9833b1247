use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::StructuralError;

const BACKBONE: &str = include_str!("../../data/backbone.topo");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Fwd,
    Ctrl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub role: Role,
    /// Forwarding nodes carrying a site are terminals: every site must stay
    /// reachable. Nodes without a site only carry traffic.
    pub site: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub id: String,
    pub a: String,
    pub b: String,
}

/// Undirected network of forwarding and controller nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub nodes: Vec<Node>,
    pub links: Vec<Link>,
    /// Elements that never fail.
    pub perfect: BTreeSet<String>,
}

/// Which connectivity requirement a cut set has to violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Traditional network: forwarding elements only.
    Tn,
    /// Forwarding plane of the SDN network (controllers present but irrelevant).
    Fsdn,
    /// Control plane of the SDN network: cuts that separate the forwarding
    /// plane from every controller without already being forwarding cuts.
    Csdn,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Tn => "tn",
            Variant::Fsdn => "fsdn",
            Variant::Csdn => "csdn",
        })
    }
}

impl FromStr for Variant {
    type Err = StructuralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "tn" => Ok(Variant::Tn),
            "fsdn" => Ok(Variant::Fsdn),
            "csdn" => Ok(Variant::Csdn),
            _ => Err(StructuralError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Node,
    Link,
}

/// A failable network element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub kind: ElementKind,
    pub id: String,
}

impl Element {
    /// `n_<id>` or `l_<id>`.
    pub fn label(&self) -> String {
        match self.kind {
            ElementKind::Node => format!("n_{}", self.id),
            ElementKind::Link => format!("l_{}", self.id),
        }
    }
}

impl Topology {
    /// Parses the line format
    ///
    /// ```text
    /// node <id> fwd|ctrl [site]
    /// link <id> <a> <b>
    /// perfect <id>
    /// ```
    ///
    /// with `#` comments.
    pub fn parse(text: &str) -> Result<Self, StructuralError> {
        let mut t = Topology::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| StructuralError::Parse { line: n + 1, message: msg.to_string() };
            let f: Vec<&str> = line.split_whitespace().collect();
            match f.as_slice() {
                ["node", id, role, rest @ ..] if rest.len() <= 1 => {
                    let role = match *role {
                        "fwd" => Role::Fwd,
                        "ctrl" => Role::Ctrl,
                        _ => return Err(err("role must be fwd or ctrl")),
                    };
                    t.nodes.push(Node { id: id.to_string(), role, site: rest.first().map(|s| s.to_string()) });
                }
                ["link", id, a, b] => t.links.push(Link { id: id.to_string(), a: a.to_string(), b: b.to_string() }),
                ["perfect", id] => {
                    t.perfect.insert(id.to_string());
                }
                _ => return Err(err("expected `node <id> <fwd|ctrl> [site]`, `link <id> <a> <b>` or `perfect <id>`")),
            }
        }
        t.validate()?;
        Ok(t)
    }

    /// Ten-node, four-city backbone with two dual-homed SDN controllers.
    pub fn backbone() -> Self {
        Self::parse(BACKBONE).expect("built-in backbone topology")
    }

    pub fn validate(&self) -> Result<(), StructuralError> {
        let mut ids = BTreeSet::new();
        for id in self.nodes.iter().map(|n| &n.id).chain(self.links.iter().map(|l| &l.id)) {
            if !ids.insert(id.as_str()) {
                return Err(StructuralError::DuplicateId(id.clone()));
            }
        }
        let nodes: HashMap<&str, &Node> = self.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        for l in &self.links {
            for end in [&l.a, &l.b] {
                if !nodes.contains_key(end.as_str()) {
                    return Err(StructuralError::UnknownEndpoint { link: l.id.clone(), node: end.clone() });
                }
            }
            if l.a == l.b {
                return Err(StructuralError::SelfLoop(l.id.clone()));
            }
        }
        if let Some(p) = self.perfect.iter().find(|p| !ids.contains(p.as_str())) {
            return Err(StructuralError::UnknownElement(p.clone()));
        }
        Ok(())
    }

    fn is_fwd(&self, id: &str) -> bool {
        self.nodes.iter().any(|n| n.id == id && n.role == Role::Fwd)
    }

    /// Failable elements relevant to `variant`, nodes first, each group sorted by id.
    pub fn elements(&self, variant: Variant) -> Vec<Element> {
        let keep_node = |n: &Node| variant != Variant::Tn || n.role == Role::Fwd;
        let keep_link = |l: &Link| variant != Variant::Tn || (self.is_fwd(&l.a) && self.is_fwd(&l.b));
        let mut out: Vec<Element> = self
            .nodes
            .iter()
            .filter(|n| keep_node(n))
            .map(|n| Element { kind: ElementKind::Node, id: n.id.clone() })
            .chain(
                self.links.iter().filter(|l| keep_link(l)).map(|l| Element { kind: ElementKind::Link, id: l.id.clone() }),
            )
            .filter(|e| !self.perfect.contains(&e.id))
            .collect();
        out.sort();
        out
    }

    /// Whether the requirement of `variant` holds with `failed` down.
    ///
    /// Panics if an element of `failed` is not in the topology.
    pub fn works(&self, variant: Variant, failed: &[Element]) -> bool {
        let eval = Evaluator::new(self);
        let (nodes, links) = eval.state(failed);
        eval.works(variant, &nodes, &links)
    }

    /// Relabels nodes through `f`; links keep their ids but follow their endpoints.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Topology {
        Topology {
            nodes: self.nodes.iter().map(|n| Node { id: f(&n.id), ..n.clone() }).collect(),
            links: self.links.iter().map(|l| Link { id: l.id.clone(), a: f(&l.a), b: f(&l.b) }).collect(),
            perfect: self.perfect.iter().map(|p| if self.nodes.iter().any(|n| &n.id == p) { f(p) } else { p.clone() }).collect(),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            let role = if n.role == Role::Fwd { "fwd" } else { "ctrl" };
            match &n.site {
                Some(s) => writeln!(f, "node {} {role} {s}", n.id)?,
                None => writeln!(f, "node {} {role}", n.id)?,
            }
        }
        for l in &self.links {
            writeln!(f, "link {} {} {}", l.id, l.a, l.b)?;
        }
        for p in &self.perfect {
            writeln!(f, "perfect {p}")?;
        }
        Ok(())
    }
}

/// Working-state evaluator over a fixed indexing of nodes and links.
pub(crate) struct Evaluator {
    n: usize,
    fwd: Vec<bool>,
    site: Vec<Option<usize>>,
    sites: usize,
    links: Vec<(usize, usize)>,
    node_ix: HashMap<String, usize>,
    link_ix: HashMap<String, usize>,
}

impl Evaluator {
    pub fn new(t: &Topology) -> Self {
        let node_ix: HashMap<String, usize> = t.nodes.iter().enumerate().map(|(i, n)| (n.id.clone(), i)).collect();
        let mut site_names: Vec<&str> = t.nodes.iter().filter(|n| n.role == Role::Fwd).filter_map(|n| n.site.as_deref()).collect();
        site_names.sort_unstable();
        site_names.dedup();
        Evaluator {
            n: t.nodes.len(),
            fwd: t.nodes.iter().map(|n| n.role == Role::Fwd).collect(),
            site: t
                .nodes
                .iter()
                .map(|n| match (n.role, &n.site) {
                    (Role::Fwd, Some(s)) => site_names.binary_search(&s.as_str()).ok(),
                    _ => None,
                })
                .collect(),
            sites: site_names.len(),
            links: t.links.iter().map(|l| (node_ix[&l.a], node_ix[&l.b])).collect(),
            link_ix: t.links.iter().enumerate().map(|(i, l)| (l.id.clone(), i)).collect(),
            node_ix,
        }
    }

    /// `(node_up, link_up)` with every element in `failed` down.
    pub fn state<'a>(&self, failed: impl IntoIterator<Item = &'a Element>) -> (Vec<bool>, Vec<bool>) {
        let mut nodes = vec![true; self.n];
        let mut links = vec![true; self.links.len()];
        for e in failed {
            match e.kind {
                ElementKind::Node => nodes[self.node_ix[&e.id]] = false,
                ElementKind::Link => links[self.link_ix[&e.id]] = false,
            }
        }
        (nodes, links)
    }

    /// Whether the requirement of `variant` holds. The forwarding requirement
    /// is a component of working forwarding nodes that touches every site;
    /// the control requirement additionally asks that component to have a
    /// working link to a working controller.
    pub fn works(&self, variant: Variant, nodes: &[bool], links: &[bool]) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (k, &(a, b)) in self.links.iter().enumerate() {
            if links[k] && nodes[a] && nodes[b] && self.fwd[a] && self.fwd[b] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let root: Vec<usize> = (0..self.n).map(|i| find(&mut parent, i)).collect();
        let mut covered: HashMap<usize, Vec<bool>> = HashMap::new();
        for i in 0..self.n {
            if let (true, Some(s)) = (nodes[i], self.site[i]) {
                covered.entry(root[i]).or_insert_with(|| vec![false; self.sites])[s] = true;
            }
        }
        let full: Vec<usize> = covered.into_iter().filter(|(_, c)| c.iter().all(|&x| x)).map(|(r, _)| r).collect();
        if variant != Variant::Csdn {
            return !full.is_empty();
        }
        self.links.iter().enumerate().any(|(k, &(a, b))| {
            let attached = |f: usize, c: usize| self.fwd[f] && !self.fwd[c] && full.contains(&root[f]);
            links[k] && nodes[a] && nodes[b] && (attached(a, b) || attached(b, a))
        })
    }
}
