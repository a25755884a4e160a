use std::collections::BTreeSet;

use super::{Cardinal, Classification, SymNode, SymbolicError};
use crate::joiner::concrete_simplify;
use crate::multigraph::{bridge_tree, ComponentId, Multigraph, VertexId};

/// A finite instance cut from a symbolic tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub graph: Multigraph,
    pub t_set: BTreeSet<VertexId>,
    /// First vertex of the root gadget.
    pub root: VertexId,
}

impl Truncation {
    /// The 2-edge-connected component of the root gadget.
    pub fn root_component(&self) -> ComponentId {
        bridge_tree(&self.graph, ComponentId(0))
            .expect("truncations are connected")
            .component_of(self.root)
            .expect("root vertex present")
    }
}

struct Builder {
    graph: Multigraph,
    t_set: BTreeSet<VertexId>,
    n: usize,
}

impl Builder {
    /// A point, a doubled edge or a cycle on `size` vertices named
    /// `<prefix>.<k>`; the first `tokens` of them go into `T`.
    fn gadget(&mut self, prefix: &str, size: usize, tokens: usize) -> VertexId {
        let vs: Vec<VertexId> = (0..size)
            .map(|k| self.graph.add_named_vertex(&format!("{prefix}.{k}")).expect("fresh name"))
            .collect();
        match size {
            1 => {}
            2 => {
                self.graph.add_edge(vs[0], vs[1]).expect("present");
                self.graph.add_edge(vs[0], vs[1]).expect("present");
            }
            _ => {
                for k in 0..size {
                    self.graph.add_edge(vs[k], vs[(k + 1) % size]).expect("present");
                }
            }
        }
        self.t_set.extend(&vs[..tokens]);
        vs[0]
    }

    fn node(&mut self, node: &SymNode, prefix: &str) -> Result<VertexId, SymbolicError> {
        let (size, tokens) = match node.tokens {
            Cardinal::Omega => (node.nvertices.max(self.n), self.n),
            Cardinal::Fin(k) if k as usize > node.nvertices => {
                return Err(SymbolicError::TokenCapacityExceeded {
                    node: node.id.clone(),
                    tokens: k,
                    capacity: node.nvertices,
                })
            }
            Cardinal::Fin(k) => (node.nvertices, k as usize),
        };
        let anchor = self.gadget(prefix, size, tokens);
        for c in &node.children {
            let below = self.node(c, &format!("{prefix}/{}", c.id))?;
            self.graph.add_edge(anchor, below).expect("present");
        }
        for p in &node.omega_children {
            for copy in 0..self.n {
                let below = self.node(p, &format!("{prefix}/{}~{copy}", p.id))?;
                self.graph.add_edge(anchor, below).expect("present");
            }
        }
        if let Some(ray) = &node.ray {
            let mut last = anchor;
            for period in 0..self.n {
                for (k, e) in ray.period.iter().enumerate() {
                    if e.tokens as usize > e.nvertices {
                        return Err(SymbolicError::TokenCapacityExceeded {
                            node: format!("{}/ray", node.id),
                            tokens: e.tokens,
                            capacity: e.nvertices,
                        });
                    }
                    let name = format!("{prefix}/ray{period}.{k}");
                    let next = self.gadget(&name, e.nvertices, e.tokens as usize);
                    self.graph.add_edge(last, next).expect("present");
                    last = next;
                }
            }
        }
        Ok(anchor)
    }
}

/// The `n`-th finite truncation: ω counts become `n` tokens, patterns are
/// copied `n` times and rays run for `n` periods. Each component gadget
/// hangs from the first vertex of its parent's gadget.
pub fn truncate(root: &SymNode, n: usize) -> Result<Truncation, SymbolicError> {
    root.validate()?;
    let mut b = Builder { graph: Multigraph::new(), t_set: BTreeSet::new(), n: n.max(1) };
    let anchor = b.node(root, &root.id)?;
    Ok(Truncation { graph: b.graph, t_set: b.t_set, root: anchor })
}

/// Tokens left on the root component of the truncations `1..=n_max`.
pub fn truncation_residues(root: &SymNode, n_max: usize) -> Result<Vec<usize>, SymbolicError> {
    (1..=n_max)
        .map(|n| {
            let t = truncate(root, n)?;
            let out = concrete_simplify(&t.graph, &t.t_set, t.root_component()).expect("connected");
            Ok(out.residue)
        })
        .collect()
}

/// Classifies by the root residues of the truncations `1..=n_max`: when the
/// last half of the sequence is constant the parity decides B or C, anything
/// that keeps moving (alternating or growing) reads as A.
pub fn truncation_limit_oracle(root: &SymNode, n_max: usize) -> Result<Classification, SymbolicError> {
    if n_max < 4 {
        return Err(SymbolicError::OracleTooShort(n_max));
    }
    let residues = truncation_residues(root, n_max)?;
    let tail = &residues[n_max / 2..];
    Ok(if tail.iter().all(|&r| r == tail[0]) {
        if tail[0] % 2 == 0 {
            Classification::B
        } else {
            Classification::C
        }
    } else {
        Classification::A
    })
}
