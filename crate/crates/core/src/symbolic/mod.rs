//! Finitely presented infinite bridge trees.
//!
//! A [`SymNode`] stands for one 2-edge-connected component with a token
//! count in ℕ ∪ {ω}. Below it hang ordinary children, patterns repeated ω
//! times (each copy attached by its own bridge) and at most one periodic ray.
//! The simplification process is run symbolically by [`resolve`] and
//! [`simplify`]; [`truncate`] builds finite instances for checking it.

mod library;
mod parse;
mod truncate;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use thiserror::Error;

pub use library::{bundled_trees, BundledTree};
pub use parse::parse_tree;
pub use truncate::{truncate, truncation_limit_oracle, truncation_residues, Truncation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Fin(u64),
    Omega,
}

impl Cardinal {
    pub const ZERO: Cardinal = Cardinal::Fin(0);

    /// `None` for ω.
    pub fn is_odd(self) -> Option<bool> {
        match self {
            Cardinal::Fin(k) => Some(k % 2 == 1),
            Cardinal::Omega => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Cardinal::ZERO
    }
}

impl Add for Cardinal {
    type Output = Cardinal;

    fn add(self, rhs: Cardinal) -> Cardinal {
        match (self, rhs) {
            (Cardinal::Fin(a), Cardinal::Fin(b)) => Cardinal::Fin(a + b),
            _ => Cardinal::Omega,
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Fin(k) => write!(f, "{k}"),
            Cardinal::Omega => f.write_str("w"),
        }
    }
}

/// One component of a ray period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RayEntry {
    pub nvertices: usize,
    pub tokens: u64,
}

/// A one-way infinite chain of components, `period` repeated ω times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySpec {
    pub period: Vec<RayEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymNode {
    pub id: String,
    pub nvertices: usize,
    pub tokens: Cardinal,
    pub children: Vec<SymNode>,
    pub omega_children: Vec<SymNode>,
    pub ray: Option<RaySpec>,
}

impl SymNode {
    pub fn leaf(id: &str, nvertices: usize, tokens: Cardinal) -> SymNode {
        SymNode {
            id: id.to_string(),
            nvertices,
            tokens,
            children: Vec::new(),
            omega_children: Vec::new(),
            ray: None,
        }
    }

    pub fn with_child(mut self, child: SymNode) -> SymNode {
        self.children.push(child);
        self
    }

    pub fn with_pattern(mut self, pattern: SymNode) -> SymNode {
        self.omega_children.push(pattern);
        self
    }

    pub fn with_ray(mut self, period: Vec<RayEntry>) -> SymNode {
        self.ray = Some(RaySpec { period });
        self
    }

    /// Checks the structural invariants: positive sizes, nonempty ray
    /// periods and ids that are unique across the written tree.
    pub fn validate(&self) -> Result<(), SymbolicError> {
        let mut seen = BTreeSet::new();
        self.validate_into(&mut seen)
    }

    fn validate_into<'a>(&'a self, seen: &mut BTreeSet<&'a str>) -> Result<(), SymbolicError> {
        let bad = |why: String| Err(SymbolicError::MalformedTree(why));
        if self.id.is_empty() || self.id.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
            return bad(format!("invalid node id {:?}", self.id));
        }
        if !seen.insert(&self.id) {
            return bad(format!("duplicate node id {}", self.id));
        }
        if self.nvertices == 0 {
            return bad(format!("node {} has no vertices", self.id));
        }
        if let Some(ray) = &self.ray {
            if ray.period.is_empty() {
                return bad(format!("node {} has an empty ray period", self.id));
            }
            if ray.period.iter().any(|e| e.nvertices == 0) {
                return bad(format!("ray of node {} has an empty component", self.id));
            }
        }
        for c in self.children.iter().chain(&self.omega_children) {
            c.validate_into(seen)?;
        }
        Ok(())
    }

    /// Vertices of the subtree, ω when it contains a pattern or a ray.
    pub fn total_vertices(&self) -> Cardinal {
        if !self.omega_children.is_empty() || self.ray.is_some() {
            return Cardinal::Omega;
        }
        self.children
            .iter()
            .fold(Cardinal::Fin(self.nvertices as u64), |acc, c| acc + c.total_vertices())
    }

    /// Written subtree has no pattern, no ray and no ω count.
    pub fn is_finite(&self) -> bool {
        self.tokens != Cardinal::Omega
            && self.omega_children.is_empty()
            && self.ray.is_none()
            && self.children.iter().all(SymNode::is_finite)
    }

    /// Follows child indices (ordinary children only).
    pub fn node_at(&self, path: &[usize]) -> Option<&SymNode> {
        path.iter().try_fold(self, |n, &i| n.children.get(i))
    }

    fn node_at_mut(&mut self, path: &[usize]) -> Option<&mut SymNode> {
        path.iter().try_fold(self, |n, &i| n.children.get_mut(i))
    }

    /// Paths of every node reachable through ordinary children, pre-order.
    pub fn child_paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut i = 0;
        while i < out.len() {
            let node = self.node_at(&out[i]).expect("path was generated");
            for k in 0..node.children.len() {
                let mut p = out[i].clone();
                p.push(k);
                out.push(p);
            }
            i += 1;
        }
        out.sort();
        out
    }
}

impl fmt::Display for SymNode {
    /// The parenthesized text format accepted by [`parse_tree`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(node {} v={} t={}", self.id, self.nvertices, self.tokens)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        for p in &self.omega_children {
            write!(f, " rep {p}")?;
        }
        if let Some(ray) = &self.ray {
            f.write_str(" ray p=")?;
            for (i, e) in ray.period.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                if e.nvertices == (e.tokens as usize).max(1) {
                    write!(f, "{}", e.tokens)?;
                } else {
                    write!(f, "{}/{}", e.tokens, e.nvertices)?;
                }
            }
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("cannot toggle an omega token count")]
    CannotToggleOmega,
    #[error("no node at the given path")]
    PathNotFound,
    #[error("node {0} has no free vertex for another token")]
    NoFreeVertex(String),
    #[error("node {0} has no token to remove")]
    NoTokenToRemove(String),
    #[error("node {node} holds {tokens} tokens on {capacity} vertices")]
    TokenCapacityExceeded { node: String, tokens: u64, capacity: usize },
    #[error("oracle needs n_max >= 4, got {0}")]
    OracleTooShort(usize),
}

/// What a subtree sends to its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Residue {
    Zero,
    One,
    Infinite,
}

impl Residue {
    fn as_cardinal(self) -> Cardinal {
        match self {
            Residue::Zero => Cardinal::Fin(0),
            Residue::One => Cardinal::Fin(1),
            Residue::Infinite => Cardinal::Omega,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeResidue {
    Even,
    Odd,
    Infinite,
}

impl fmt::Display for OutcomeResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeResidue::Even => "even",
            OutcomeResidue::Odd => "odd",
            OutcomeResidue::Infinite => "infinite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepAction {
    /// Token-free subtree removed.
    Prune,
    /// Even leaf matched internally.
    MatchInside,
    /// Odd leaf sends one token up.
    PushUp,
    /// Leaf holding ω tokens; it never goes away.
    StayInfinite,
    /// ω copies of a pattern collapsed into the parent.
    CollapsePattern,
    /// A ray's contribution to its node.
    CollapseRay,
}

impl fmt::Display for StepAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepAction::Prune => "prune",
            StepAction::MatchInside => "match",
            StepAction::PushUp => "push",
            StepAction::StayInfinite => "infinite",
            StepAction::CollapsePattern => "pattern",
            StepAction::CollapseRay => "ray",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub node: String,
    pub action: StepAction,
    /// Tokens handed to the parent.
    pub passed_up: Cardinal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplificationOutcome {
    pub residue: OutcomeResidue,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    A,
    B,
    C,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::A => "A",
            Classification::B => "B",
            Classification::C => "C",
        })
    }
}

/// Token count a node ends up holding once everything below it is resolved.
fn gather(node: &SymNode, trace: &mut Vec<TraceStep>) -> Cardinal {
    let mut held = node.tokens;
    for c in &node.children {
        held = held + resolve_into(c, trace).as_cardinal();
    }
    for p in &node.omega_children {
        let mut inner = Vec::new();
        let up = match resolve_into(p, &mut inner) {
            Residue::Zero => Cardinal::ZERO,
            Residue::One | Residue::Infinite => Cardinal::Omega,
        };
        trace.extend(inner);
        trace.push(TraceStep { node: p.id.clone(), action: StepAction::CollapsePattern, passed_up: up });
        held = held + up;
    }
    if let Some(ray) = &node.ray {
        let up = if ray.period.iter().all(|e| e.tokens == 0) { Cardinal::ZERO } else { Cardinal::Omega };
        trace.push(TraceStep {
            node: format!("{}/ray", node.id),
            action: StepAction::CollapseRay,
            passed_up: up,
        });
        held = held + up;
    }
    held
}

fn has_tokens(node: &SymNode) -> bool {
    !node.tokens.is_zero()
        || node.children.iter().chain(&node.omega_children).any(has_tokens)
        || node.ray.as_ref().is_some_and(|r| r.period.iter().any(|e| e.tokens > 0))
}

fn resolve_into(node: &SymNode, trace: &mut Vec<TraceStep>) -> Residue {
    if !has_tokens(node) {
        trace.push(TraceStep { node: node.id.clone(), action: StepAction::Prune, passed_up: Cardinal::ZERO });
        return Residue::Zero;
    }
    let residue = match gather(node, trace) {
        Cardinal::Omega => Residue::Infinite,
        Cardinal::Fin(k) if k % 2 == 0 => Residue::Zero,
        Cardinal::Fin(_) => Residue::One,
    };
    let action = match residue {
        Residue::Zero => StepAction::MatchInside,
        Residue::One => StepAction::PushUp,
        Residue::Infinite => StepAction::StayInfinite,
    };
    trace.push(TraceStep { node: node.id.clone(), action, passed_up: residue.as_cardinal() });
    residue
}

/// Bottom-up simplification of a subtree: what it passes to its parent.
pub fn resolve(node: &SymNode) -> Result<Residue, SymbolicError> {
    node.validate()?;
    Ok(resolve_into(node, &mut Vec::new()))
}

/// Runs the whole process and reports the parity of the tokens left on the
/// root, with every leaf resolution and collapse in post-order.
pub fn simplify(root: &SymNode) -> Result<SimplificationOutcome, SymbolicError> {
    root.validate()?;
    let mut trace = Vec::new();
    let residue = match gather(root, &mut trace) {
        Cardinal::Omega => OutcomeResidue::Infinite,
        Cardinal::Fin(k) if k % 2 == 0 => OutcomeResidue::Even,
        Cardinal::Fin(_) => OutcomeResidue::Odd,
    };
    Ok(SimplificationOutcome { residue, trace })
}

/// A: joins for every finite change of `T`. B: exactly the even changes.
/// C: exactly the odd ones.
pub fn classify(root: &SymNode) -> Result<Classification, SymbolicError> {
    Ok(match simplify(root)?.residue {
        OutcomeResidue::Infinite => Classification::A,
        OutcomeResidue::Even => Classification::B,
        OutcomeResidue::Odd => Classification::C,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Toggle {
    Up,
    Down,
}

/// Adds or removes one token on the node at `path` (indices into ordinary
/// children). A node keeps at most one token per vertex.
pub fn toggle_token(root: &SymNode, path: &[usize], direction: Toggle) -> Result<SymNode, SymbolicError> {
    root.validate()?;
    let mut out = root.clone();
    let node = out.node_at_mut(path).ok_or(SymbolicError::PathNotFound)?;
    let Cardinal::Fin(k) = node.tokens else {
        return Err(SymbolicError::CannotToggleOmega);
    };
    node.tokens = match direction {
        Toggle::Up if k as usize >= node.nvertices => return Err(SymbolicError::NoFreeVertex(node.id.clone())),
        Toggle::Up => Cardinal::Fin(k + 1),
        Toggle::Down if k == 0 => return Err(SymbolicError::NoTokenToRemove(node.id.clone())),
        Toggle::Down => Cardinal::Fin(k - 1),
    };
    Ok(out)
}

/// The node owning an ω-repeated pattern of at least two vertices, and the
/// pattern's index among that node's patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadUWitness {
    pub node: String,
    pub pattern: usize,
}

impl fmt::Display for BadUWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rep {}", self.node, self.pattern)
    }
}

/// First witness in pre-order (node, then its patterns, then its children
/// and the insides of its patterns).
pub fn detect_bad_u(root: &SymNode) -> Result<Option<BadUWitness>, SymbolicError> {
    root.validate()?;
    fn search(node: &SymNode) -> Option<BadUWitness> {
        let nontrivial = |p: &SymNode| p.total_vertices() != Cardinal::Fin(1);
        if let Some(i) = node.omega_children.iter().position(nontrivial) {
            return Some(BadUWitness { node: node.id.clone(), pattern: i });
        }
        node.children.iter().chain(&node.omega_children).find_map(search)
    }
    Ok(search(root))
}
