//! Finite loopless multigraphs with stable vertex and edge identities.
//!
//! Every edge carries its own [`EdgeId`], so parallel edges are distinct
//! objects and paths, joins and gameplays always refer to edges by id.
//! Identities never change when other vertices or edges are removed.
//!
//! Besides the container this module hosts the structural algorithms the
//! rest of the crate is built on: connected components, bridges,
//! 2-edge-connected components, rooted bridge trees, ear decompositions,
//! Euler circuits, pairs of edge-disjoint paths and edge contraction.
//! All set-valued results come out in ascending id order.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Opaque vertex identity. Ordered by creation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Opaque edge identity. Ordered by creation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// Index of a 2-edge-connected component in the order produced by
/// [`two_edge_components`] (ascending smallest vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("edge would be a loop at {0}")]
    Loop(VertexId),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("unknown component {0}")]
    UnknownComponent(ComponentId),
    #[error("{0} and {1} are not 2-edge-connected")]
    NotTwoEdgeConnected(VertexId, VertexId),
    #[error("graph is not 2-edge-connected")]
    GraphNotTwoEdgeConnected,
    #[error("invalid ear base: {0}")]
    InvalidBase(&'static str),
    #[error("graph is not eulerian")]
    NotEulerian,
    #[error("endpoints coincide at {0}")]
    SameVertex(VertexId),
}

/// Human-readable names. Shared between clones, copied on write.
#[derive(Debug, Clone, Default)]
struct Labels {
    vertex: BTreeMap<VertexId, String>,
    edge: BTreeMap<EdgeId, String>,
    vertex_by_name: HashMap<String, VertexId>,
    edge_by_name: HashMap<String, EdgeId>,
}

/// A finite loopless multigraph.
#[derive(Debug, Clone, Default)]
pub struct Multigraph {
    incidence: BTreeMap<VertexId, BTreeSet<EdgeId>>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    labels: Arc<Labels>,
    next_vertex: u32,
    next_edge: u32,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.incidence == other.incidence && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex named after its id (`v0`, `v1`, ...).
    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.next_vertex);
        let mut name = format!("v{}", id.0);
        while self.labels.vertex_by_name.contains_key(&name) {
            name.push('\'');
        }
        self.insert_vertex(id, name);
        id
    }

    pub fn add_named_vertex(&mut self, name: &str) -> Result<VertexId, GraphError> {
        if self.labels.vertex_by_name.contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        let id = VertexId(self.next_vertex);
        self.insert_vertex(id, name.to_string());
        Ok(id)
    }

    fn insert_vertex(&mut self, id: VertexId, name: String) {
        self.next_vertex += 1;
        self.incidence.insert(id, BTreeSet::new());
        let labels = Arc::make_mut(&mut self.labels);
        labels.vertex_by_name.insert(name.clone(), id);
        labels.vertex.insert(id, name);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        self.check_endpoints(u, v)?;
        let id = EdgeId(self.next_edge);
        let mut name = format!("e{}", id.0);
        while self.labels.edge_by_name.contains_key(&name) {
            name.push('\'');
        }
        self.insert_edge(id, name, u, v);
        Ok(id)
    }

    pub fn add_named_edge(
        &mut self,
        name: &str,
        u: VertexId,
        v: VertexId,
    ) -> Result<EdgeId, GraphError> {
        if self.labels.edge_by_name.contains_key(name) {
            return Err(GraphError::DuplicateEdge(name.to_string()));
        }
        self.check_endpoints(u, v)?;
        let id = EdgeId(self.next_edge);
        self.insert_edge(id, name.to_string(), u, v);
        Ok(id)
    }

    fn check_endpoints(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        for w in [u, v] {
            if !self.contains_vertex(w) {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        Ok(())
    }

    fn insert_edge(&mut self, id: EdgeId, name: String, u: VertexId, v: VertexId) {
        self.next_edge += 1;
        self.edges.insert(id, (u.min(v), u.max(v)));
        self.incidence.get_mut(&u).expect("checked").insert(id);
        self.incidence.get_mut(&v).expect("checked").insert(id);
        let labels = Arc::make_mut(&mut self.labels);
        labels.edge_by_name.insert(name.clone(), id);
        labels.edge.insert(id, name);
    }

    /// Removes an edge, returning its endpoints if it was present.
    pub fn remove_edge(&mut self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        let (u, v) = self.edges.remove(&e)?;
        self.incidence.get_mut(&u).expect("endpoint present").remove(&e);
        self.incidence.get_mut(&v).expect("endpoint present").remove(&e);
        Some((u, v))
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        let Some(incident) = self.incidence.remove(&v) else {
            return false;
        };
        for e in incident {
            let (a, b) = self.edges.remove(&e).expect("incident edge present");
            let other = if a == v { b } else { a };
            self.incidence.get_mut(&other).expect("endpoint present").remove(&e);
        }
        true
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.incidence.contains_key(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    /// Endpoints of `e`, smaller id first.
    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    /// The endpoint of `e` that is not `v`, if `v` is an endpoint of `e`.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        match self.edges.get(&e) {
            Some(&(a, b)) if a == v => Some(b),
            Some(&(a, b)) if b == v => Some(a),
            _ => None,
        }
    }

    /// Incident edges of `v` in ascending id order (empty for unknown vertices).
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.incidence.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.incidence.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.incidence.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        self.labels.vertex.get(&v).map_or("?", String::as_str)
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        self.labels.edge.get(&e).map_or("?", String::as_str)
    }

    /// Looks a vertex up by name. Removed vertices are still found, callers
    /// check [`Multigraph::contains_vertex`] when presence matters.
    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.labels.vertex_by_name.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.labels.edge_by_name.get(name).copied()
    }

    /// Subgraph on `keep` with every edge joining two kept vertices.
    /// Ids and names are preserved.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Multigraph {
        let mut sub = self.clone();
        let drop: Vec<VertexId> = self.vertices().filter(|v| !keep.contains(v)).collect();
        for v in drop {
            sub.remove_vertex(v);
        }
        sub
    }

    /// Copy of the graph with only the edges in `keep` (all vertices stay).
    pub fn with_edges(&self, keep: &BTreeSet<EdgeId>) -> Multigraph {
        let mut sub = self.clone();
        let drop: Vec<EdgeId> = self.edge_ids().filter(|e| !keep.contains(e)).collect();
        for e in drop {
            sub.remove_edge(e);
        }
        sub
    }

    /// Breadth-first shortest path from `from` to `to`. Adjacency is scanned
    /// in ascending edge id order, so the result is deterministic.
    pub fn shortest_path(&self, from: VertexId, to: VertexId) -> Option<Walk> {
        if !self.contains_vertex(from) || !self.contains_vertex(to) {
            return None;
        }
        let mut pred: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for e in self.incident(x) {
                let y = self.opposite(e, x).expect("incident");
                if seen.insert(y) {
                    pred.insert(y, (x, e));
                    queue.push_back(y);
                }
            }
        }
        if !seen.contains(&to) {
            return None;
        }
        let mut vertices = vec![to];
        let mut edges = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, e) = pred[&cur];
            edges.push(e);
            vertices.push(p);
            cur = p;
        }
        vertices.reverse();
        edges.reverse();
        Some(Walk { vertices, edges })
    }

    /// Vertices reachable from `start`.
    pub fn reachable(&self, start: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        if !self.contains_vertex(start) {
            return seen;
        }
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for e in self.incident(x) {
                let y = self.opposite(e, x).expect("incident");
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(v) => self.reachable(v).len() == self.vertex_count(),
        }
    }
}

/// A walk `vertices[0], edges[0], vertices[1], ...` with
/// `vertices.len() == edges.len() + 1`. Paths and circuits are walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Walk {
    pub fn trivial(v: VertexId) -> Self {
        Walk { vertices: vec![v], edges: Vec::new() }
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("walks are nonempty")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    /// No vertex repeats.
    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }

    /// Checks that consecutive vertices are joined by the listed edges in `g`.
    pub fn is_valid_in(&self, g: &Multigraph) -> bool {
        self.vertices.len() == self.edges.len() + 1
            && self
                .edges
                .iter()
                .zip(self.vertices.windows(2))
                .all(|(&e, w)| g.opposite(e, w[0]) == Some(w[1]))
    }

    pub fn reversed(&self) -> Walk {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Walk { vertices, edges }
    }

    /// Shortcuts the walk to a simple path with the same endpoints: keep the
    /// first occurrence of each vertex and splice out the detour back to it.
    /// The result uses a subset of the walk's edges.
    pub fn shortcut(&self) -> Walk {
        let mut vertices: Vec<VertexId> = vec![self.start()];
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut position: BTreeMap<VertexId, usize> = BTreeMap::from([(self.start(), 0)]);
        for (&e, &v) in self.edges.iter().zip(&self.vertices[1..]) {
            if let Some(&p) = position.get(&v) {
                for dropped in vertices.drain(p + 1..) {
                    position.remove(&dropped);
                }
                edges.truncate(p);
            } else {
                position.insert(v, vertices.len());
                vertices.push(v);
                edges.push(e);
            }
        }
        Walk { vertices, edges }
    }
}

/// Connected components as vertex sets, ordered by smallest vertex.
pub fn components(g: &Multigraph) -> Vec<BTreeSet<VertexId>> {
    let mut seen = BTreeSet::new();
    let mut parts = Vec::new();
    for v in g.vertices() {
        if seen.contains(&v) {
            continue;
        }
        let part = g.reachable(v);
        seen.extend(part.iter().copied());
        parts.push(part);
    }
    parts
}

/// All bridges of `g`.
///
/// Iterative lowlink search; the tree edge into a vertex is skipped by id,
/// not by endpoint, so a parallel copy of it counts as a back edge.
pub fn bridges(g: &Multigraph) -> BTreeSet<EdgeId> {
    let mut order: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut result = BTreeSet::new();
    let mut counter = 0;
    for root in g.vertices() {
        if order.contains_key(&root) {
            continue;
        }
        order.insert(root, counter);
        low.insert(root, counter);
        counter += 1;
        // (vertex, edge used to enter it, remaining incident edges)
        let mut stack: Vec<(VertexId, Option<EdgeId>, Vec<EdgeId>)> =
            vec![(root, None, g.incident(root).collect())];
        while let Some(frame) = stack.last_mut() {
            let (x, via) = (frame.0, frame.1);
            if let Some(e) = frame.2.pop() {
                if Some(e) == via {
                    continue;
                }
                let y = g.opposite(e, x).expect("incident");
                if let Some(&oy) = order.get(&y) {
                    let lx = low[&x].min(oy);
                    low.insert(x, lx);
                } else {
                    order.insert(y, counter);
                    low.insert(y, counter);
                    counter += 1;
                    stack.push((y, Some(e), g.incident(y).collect()));
                }
            } else {
                stack.pop();
                if let (Some(e), Some(parent)) = (via, stack.last()) {
                    let p = parent.0;
                    let lp = low[&p].min(low[&x]);
                    low.insert(p, lp);
                    if low[&x] > order[&p] {
                        result.insert(e);
                    }
                }
            }
        }
    }
    result
}

/// Vertex sets of the maximal 2-edge-connected subgraphs, ordered by
/// smallest vertex. Isolated vertices form their own part.
pub fn two_edge_components(g: &Multigraph) -> Vec<BTreeSet<VertexId>> {
    let cut = bridges(g);
    let mut rest = g.clone();
    for e in cut {
        rest.remove_edge(e);
    }
    components(&rest)
}

/// True when `g` is connected and bridgeless. The empty graph and the
/// single vertex both qualify.
pub fn is_two_edge_connected(g: &Multigraph) -> bool {
    g.is_connected() && bridges(g).is_empty()
}

/// `tree(G; R)`: the tree of 2-edge-connected components of a connected
/// graph, rooted at one of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBridgeTree {
    nodes: Vec<BTreeSet<VertexId>>,
    parent: Vec<Option<(ComponentId, EdgeId)>>,
    children: Vec<Vec<ComponentId>>,
    root: ComponentId,
    owner: BTreeMap<VertexId, ComponentId>,
}

impl RootedBridgeTree {
    pub fn root(&self) -> ComponentId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = ComponentId> {
        (0..self.nodes.len()).map(ComponentId)
    }

    pub fn vertices(&self, c: ComponentId) -> Option<&BTreeSet<VertexId>> {
        self.nodes.get(c.0)
    }

    /// Parent component and the bridge joining `c` to it; `None` at the root.
    pub fn parent(&self, c: ComponentId) -> Option<(ComponentId, EdgeId)> {
        self.parent.get(c.0).copied().flatten()
    }

    pub fn children(&self, c: ComponentId) -> &[ComponentId] {
        self.children.get(c.0).map_or(&[], Vec::as_slice)
    }

    pub fn component_of(&self, v: VertexId) -> Option<ComponentId> {
        self.owner.get(&v).copied()
    }

    /// Tree edges as `(child, parent, bridge)`, ordered by child.
    pub fn tree_edges(&self) -> impl Iterator<Item = (ComponentId, ComponentId, EdgeId)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|(q, e)| (ComponentId(i), q, e)))
    }

    /// Nodes in breadth-first order from the root, children ascending.
    pub fn top_down(&self) -> Vec<ComponentId> {
        let mut order = vec![self.root];
        let mut i = 0;
        while i < order.len() {
            order.extend(self.children(order[i]).iter().copied());
            i += 1;
        }
        order
    }

    /// `subt(C; G, R)`: `c` and all of its descendants.
    pub fn subtree(&self, c: ComponentId) -> Result<BTreeSet<ComponentId>, GraphError> {
        if c.0 >= self.nodes.len() {
            return Err(GraphError::UnknownComponent(c));
        }
        let mut out = BTreeSet::from([c]);
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for &y in self.children(x) {
                out.insert(y);
                stack.push(y);
            }
        }
        Ok(out)
    }
}

/// Builds `tree(G; R)` with `R` given by its index in [`two_edge_components`].
pub fn bridge_tree(g: &Multigraph, root: ComponentId) -> Result<RootedBridgeTree, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::DisconnectedGraph);
    }
    let nodes = two_edge_components(g);
    if root.0 >= nodes.len() {
        return Err(GraphError::UnknownComponent(root));
    }
    let mut owner = BTreeMap::new();
    for (i, part) in nodes.iter().enumerate() {
        for &v in part {
            owner.insert(v, ComponentId(i));
        }
    }
    let mut adjacency: Vec<Vec<(ComponentId, EdgeId)>> = vec![Vec::new(); nodes.len()];
    for e in bridges(g) {
        let (u, v) = g.endpoints(e).expect("bridge present");
        let (cu, cv) = (owner[&u], owner[&v]);
        adjacency[cu.0].push((cv, e));
        adjacency[cv.0].push((cu, e));
    }
    let mut parent = vec![None; nodes.len()];
    let mut children = vec![Vec::new(); nodes.len()];
    let mut visited = vec![false; nodes.len()];
    visited[root.0] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(c) = queue.pop_front() {
        let mut next = adjacency[c.0].clone();
        next.sort();
        for (d, e) in next {
            if !visited[d.0] {
                visited[d.0] = true;
                parent[d.0] = Some((c, e));
                children[c.0].push(d);
                queue.push_back(d);
            }
        }
    }
    Ok(RootedBridgeTree { nodes, parent, children, root, owner })
}

/// Contracts every edge in `s`, then drops the loops that arise. Parallel
/// edges survive. Each merged class is represented by its smallest vertex.
pub fn contract_edges(g: &Multigraph, s: &BTreeSet<EdgeId>) -> Result<Multigraph, GraphError> {
    if let Some(&e) = s.iter().find(|e| !g.contains_edge(**e)) {
        return Err(GraphError::UnknownEdge(e));
    }
    let mut rep: BTreeMap<VertexId, VertexId> = g.vertices().map(|v| (v, v)).collect();
    fn find(rep: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let mut root = v;
        while rep[&root] != root {
            root = rep[&root];
        }
        let mut cur = v;
        while rep[&cur] != root {
            let next = rep[&cur];
            rep.insert(cur, root);
            cur = next;
        }
        root
    }
    for &e in s {
        let (u, v) = g.endpoints(e).expect("checked");
        let (ru, rv) = (find(&mut rep, u), find(&mut rep, v));
        if ru != rv {
            rep.insert(ru.max(rv), ru.min(rv));
        }
    }
    let mut out = g.clone();
    for (e, u, v) in g.edges() {
        if find(&mut rep, u) == find(&mut rep, v) {
            out.remove_edge(e);
        }
    }
    let kept: Vec<_> = g.edges().filter(|(e, _, _)| out.contains_edge(*e)).collect();
    for (e, u, v) in kept {
        let (ru, rv) = (find(&mut rep, u), find(&mut rep, v));
        if (ru.min(rv), ru.max(rv)) != (u, v) {
            out.remove_edge(e);
            out.edges.insert(e, (ru.min(rv), ru.max(rv)));
            out.incidence.get_mut(&ru).expect("present").insert(e);
            out.incidence.get_mut(&rv).expect("present").insert(e);
        }
    }
    let merged: Vec<VertexId> = g.vertices().filter(|&v| find(&mut rep, v) != v).collect();
    for v in merged {
        out.remove_vertex(v);
    }
    Ok(out)
}

/// A base subgraph and the ears that grow it into the whole graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EarDecomposition {
    pub base: BTreeSet<EdgeId>,
    /// Each ear runs between two vertices of the earlier part (equal ones
    /// for a closed ear); its interior vertices are new.
    pub ears: Vec<Walk>,
}

impl EarDecomposition {
    /// Interior vertices of ear `i`.
    pub fn interior(&self, i: usize) -> &[VertexId] {
        let ear = &self.ears[i];
        &ear.vertices[1..ear.vertices.len() - 1]
    }
}

/// Ear decomposition of a 2-edge-connected `g` starting from the connected
/// eulerian subgraph formed by `base`.
///
/// Ears are grown from the smallest uncovered edge touching the covered part;
/// each one closes along a shortest route back into the covered part.
pub fn ear_decomposition(
    g: &Multigraph,
    base: &BTreeSet<EdgeId>,
) -> Result<EarDecomposition, GraphError> {
    if !is_two_edge_connected(g) {
        return Err(GraphError::GraphNotTwoEdgeConnected);
    }
    if base.iter().any(|e| !g.contains_edge(*e)) {
        return Err(GraphError::InvalidBase("edge not in graph"));
    }
    let h = g.with_edges(base);
    let covered: BTreeSet<VertexId> = base
        .iter()
        .flat_map(|e| {
            let (u, v) = g.endpoints(*e).expect("checked");
            [u, v]
        })
        .collect();
    if covered.is_empty() {
        if g.vertex_count() <= 1 {
            return Ok(EarDecomposition { base: base.clone(), ears: Vec::new() });
        }
        return Err(GraphError::InvalidBase("empty base"));
    }
    let first = *covered.iter().next().expect("nonempty");
    if !covered.is_subset(&h.reachable(first)) {
        return Err(GraphError::InvalidBase("base is not connected"));
    }
    if covered.iter().any(|&v| h.degree(v) % 2 == 1) {
        return Err(GraphError::InvalidBase("base is not eulerian"));
    }
    grow_ears(g, base.clone(), covered)
}

pub(crate) fn grow_ears(
    g: &Multigraph,
    base: BTreeSet<EdgeId>,
    mut covered: BTreeSet<VertexId>,
) -> Result<EarDecomposition, GraphError> {
    let mut used = base.clone();
    let mut ears = Vec::new();
    while used.len() < g.edge_count() {
        let (e, x) = covered
            .iter()
            .flat_map(|&x| g.incident(x).map(move |e| (e, x)))
            .filter(|(e, _)| !used.contains(e))
            .min()
            .ok_or(GraphError::GraphNotTwoEdgeConnected)?;
        let y = g.opposite(e, x).expect("incident");
        let mut ear = Walk { vertices: vec![x, y], edges: vec![e] };
        if !covered.contains(&y) {
            // shortest route from y back into the covered part, avoiding e
            let mut pred: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
            let mut seen = BTreeSet::from([y]);
            let mut queue = VecDeque::from([y]);
            let mut hit = None;
            'search: while let Some(a) = queue.pop_front() {
                for f in g.incident(a) {
                    if f == e || used.contains(&f) {
                        continue;
                    }
                    let b = g.opposite(f, a).expect("incident");
                    if seen.insert(b) {
                        pred.insert(b, (a, f));
                        if covered.contains(&b) {
                            hit = Some(b);
                            break 'search;
                        }
                        queue.push_back(b);
                    }
                }
            }
            let end = hit.ok_or(GraphError::GraphNotTwoEdgeConnected)?;
            let mut tail_v = vec![end];
            let mut tail_e = Vec::new();
            let mut cur = end;
            while cur != y {
                let (p, f) = pred[&cur];
                tail_e.push(f);
                tail_v.push(p);
                cur = p;
            }
            tail_v.pop();
            tail_v.reverse();
            tail_e.reverse();
            ear.vertices.extend(tail_v);
            ear.edges.extend(tail_e);
        }
        used.extend(ear.edges.iter().copied());
        covered.extend(ear.vertices.iter().copied());
        ears.push(ear);
    }
    Ok(EarDecomposition { base, ears })
}

/// Euler circuit of a connected graph with all degrees even, starting at
/// the smallest vertex.
pub fn euler_circuit(g: &Multigraph) -> Result<Walk, GraphError> {
    match g.vertices().next() {
        None => Err(GraphError::NotEulerian),
        Some(v) => euler_circuit_from(g, v),
    }
}

/// Hierholzer's algorithm from a chosen start vertex.
pub fn euler_circuit_from(g: &Multigraph, start: VertexId) -> Result<Walk, GraphError> {
    if !g.contains_vertex(start) {
        return Err(GraphError::UnknownVertex(start));
    }
    if !g.is_connected() || g.vertices().any(|v| g.degree(v) % 2 == 1) {
        return Err(GraphError::NotEulerian);
    }
    let mut remaining: BTreeMap<VertexId, Vec<EdgeId>> = g
        .vertices()
        .map(|v| {
            let mut es: Vec<EdgeId> = g.incident(v).collect();
            es.reverse();
            (v, es)
        })
        .collect();
    let mut used = BTreeSet::new();
    let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(start, None)];
    let mut circuit: Vec<(VertexId, Option<EdgeId>)> = Vec::new();
    while let Some(&(x, _)) = stack.last() {
        let list = remaining.get_mut(&x).expect("vertex present");
        while list.last().is_some_and(|e| used.contains(e)) {
            list.pop();
        }
        match list.pop() {
            Some(e) => {
                used.insert(e);
                stack.push((g.opposite(e, x).expect("incident"), Some(e)));
            }
            None => circuit.push(stack.pop().expect("nonempty")),
        }
    }
    circuit.reverse();
    let vertices = circuit.iter().map(|(v, _)| *v).collect();
    let edges = circuit.iter().filter_map(|(_, e)| *e).collect();
    Ok(Walk { vertices, edges })
}

/// Two edge-disjoint `u`–`v` paths, found as a unit-capacity flow of value
/// two and decomposed into simple paths. The paths may share vertices.
pub fn edge_disjoint_path_pair(
    g: &Multigraph,
    u: VertexId,
    v: VertexId,
) -> Result<(Walk, Walk), GraphError> {
    for w in [u, v] {
        if !g.contains_vertex(w) {
            return Err(GraphError::UnknownVertex(w));
        }
    }
    if u == v {
        return Err(GraphError::SameVertex(u));
    }
    // flow[e] = +1 when e carries flow from its smaller endpoint, -1 otherwise
    let mut flow: BTreeMap<EdgeId, i8> = BTreeMap::new();
    for _ in 0..2 {
        let mut pred: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
        let mut seen = BTreeSet::from([u]);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for e in g.incident(x) {
                let y = g.opposite(e, x).expect("incident");
                let forward: i8 = if x < y { 1 } else { -1 };
                let residual = 1 - forward * flow.get(&e).copied().unwrap_or(0);
                if residual > 0 && seen.insert(y) {
                    pred.insert(y, (x, e));
                    queue.push_back(y);
                }
            }
        }
        if !seen.contains(&v) {
            return Err(GraphError::NotTwoEdgeConnected(u, v));
        }
        let mut cur = v;
        while cur != u {
            let (p, e) = pred[&cur];
            let forward: i8 = if p < cur { 1 } else { -1 };
            *flow.entry(e).or_insert(0) += forward;
            cur = p;
        }
    }
    let mut out_arcs: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for (&e, &f) in &flow {
        if f != 0 {
            let (a, b) = g.endpoints(e).expect("present");
            let tail = if f > 0 { a } else { b };
            out_arcs.entry(tail).or_default().push(e);
        }
    }
    let mut trace = || {
        let mut walk = Walk::trivial(u);
        let mut x = u;
        while x != v {
            let e = out_arcs.get_mut(&x).and_then(Vec::pop).expect("flow is conserved");
            x = g.opposite(e, x).expect("incident");
            walk.edges.push(e);
            walk.vertices.push(x);
        }
        walk.shortcut()
    };
    let first = trace();
    let second = trace();
    Ok((first, second))
}
