//! Constructive `T`-join algorithms.
//!
//! * [`tjoin_finite`]: the parity algorithm for finite `T`. Pairs of
//!   `T`-vertices are joined by shortest paths, the path edge sets are
//!   combined by symmetric difference and the result is split greedily into
//!   paths and cycles by [`decompose_f`].
//! * [`avoiding_match_2ec`]: a winning gameplay on a 2-edge-connected graph in
//!   which two chosen tokens `s` and `t` are never matched with each other and
//!   `t` never moves. Built over an ear decomposition grown from two
//!   edge-disjoint paths between `s` and `t`.
//! * [`normalize_components`] and [`eliminate_token`]: operations on
//!   ω-marked states that keep every component 2-edge-connected and
//!   carrying an ω vertex.
//! * [`concrete_simplify`]: the leaf-resolution process on a finite bridge
//!   tree, reporting the token residue left on the root.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::game::{GameState, Gameplay, IllegalMove, JoinPath, Move, PathSystem, TokenId};
use crate::multigraph::{
    bridge_tree, bridges, components, edge_disjoint_path_pair, euler_circuit_from, grow_ears,
    is_two_edge_connected, ComponentId, EdgeId, GraphError, Multigraph, VertexId, Walk,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("odd-degree vertices of F differ from T")]
    ParityMismatch,
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("odd number of tokens")]
    OddTokenCount,
    #[error("fewer than four tokens")]
    TooFewTokens,
    #[error("s and t are the same token")]
    SameToken,
    #[error("unknown token {0}")]
    UnknownToken(TokenId),
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("component with an odd number of tokens and no omega vertex")]
    UnresolvableOddComponent(BTreeSet<VertexId>),
    #[error("generated move is illegal: {0}")]
    Engine(#[from] IllegalMove),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JoinOutcome {
    Join(PathSystem),
    /// A connected component meeting `T` in an odd number of vertices.
    NoJoin(BTreeSet<VertexId>),
}

impl JoinOutcome {
    pub fn join(&self) -> Option<&PathSystem> {
        match self {
            JoinOutcome::Join(ps) => Some(ps),
            JoinOutcome::NoJoin(_) => None,
        }
    }
}

/// An edge set split into `T`-paths and cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FDecomposition {
    pub paths: Vec<Walk>,
    pub cycles: Vec<Walk>,
}

/// `T`-join of a finite graph, or the first component (by smallest vertex)
/// whose intersection with `T` is odd.
pub fn tjoin_finite(g: &Multigraph, t_set: &BTreeSet<VertexId>) -> Result<JoinOutcome, JoinError> {
    if let Some(&v) = t_set.iter().find(|v| !g.contains_vertex(**v)) {
        return Err(GraphError::UnknownVertex(v).into());
    }
    let parts = components(g);
    if let Some(odd) = parts.iter().find(|c| c.intersection(t_set).count() % 2 == 1) {
        return Ok(JoinOutcome::NoJoin(odd.clone()));
    }
    let mut f: BTreeSet<EdgeId> = BTreeSet::new();
    for part in &parts {
        let terminals: Vec<VertexId> = part.intersection(t_set).copied().collect();
        for pair in terminals.chunks(2) {
            let path = g.shortest_path(pair[0], pair[1]).expect("same component");
            for e in path.edges {
                if !f.remove(&e) {
                    f.insert(e);
                }
            }
        }
    }
    let decomposition = decompose_f(g, &f, t_set)?;
    Ok(JoinOutcome::Join(decomposition.paths.iter().map(JoinPath::from).collect()))
}

/// Greedy split of `f` into simple paths pairing up `t_set` and
/// edge-disjoint simple cycles.
///
/// Trails are walked from the smallest unpaired `T`-vertex along the
/// smallest unused edge until they get stuck (necessarily at another
/// unpaired `T`-vertex); closed detours are cut off as cycles. The even
/// remainder is then cut into cycles the same way.
pub fn decompose_f(
    g: &Multigraph,
    f: &BTreeSet<EdgeId>,
    t_set: &BTreeSet<VertexId>,
) -> Result<FDecomposition, JoinError> {
    let mut remaining: BTreeMap<VertexId, BTreeSet<EdgeId>> = BTreeMap::new();
    for &e in f {
        let (u, v) = g.endpoints(e).ok_or(GraphError::UnknownEdge(e))?;
        remaining.entry(u).or_default().insert(e);
        remaining.entry(v).or_default().insert(e);
    }
    let odd: BTreeSet<VertexId> =
        remaining.iter().filter(|(_, es)| es.len() % 2 == 1).map(|(&v, _)| v).collect();
    if &odd != t_set {
        return Err(JoinError::ParityMismatch);
    }

    let mut walk_until_stuck = |start: VertexId| {
        let mut trail = Walk::trivial(start);
        let mut cur = start;
        while let Some(e) = remaining.get_mut(&cur).and_then(|es| es.pop_first()) {
            let next = g.opposite(e, cur).expect("edge of g");
            remaining.get_mut(&next).expect("endpoint tracked").remove(&e);
            trail.edges.push(e);
            trail.vertices.push(next);
            cur = next;
        }
        trail
    };

    let mut out = FDecomposition { paths: Vec::new(), cycles: Vec::new() };
    let mut unpaired = odd;
    while let Some(u) = unpaired.pop_first() {
        let trail = walk_until_stuck(u);
        unpaired.remove(&trail.end());
        let (path, cycles) = split_trail(&trail);
        out.paths.push(path);
        out.cycles.extend(cycles);
    }
    for &e in f {
        let (start, _) = g.endpoints(e).expect("checked");
        let trail = walk_until_stuck(start);
        if trail.is_empty() {
            continue;
        }
        let (_, cycles) = split_trail(&trail);
        out.cycles.extend(cycles);
    }
    Ok(out)
}

/// Splits a trail into a simple path between its ends and simple cycles.
fn split_trail(trail: &Walk) -> (Walk, Vec<Walk>) {
    let mut stack = Walk::trivial(trail.start());
    let mut position: BTreeMap<VertexId, usize> = BTreeMap::from([(trail.start(), 0)]);
    let mut cycles = Vec::new();
    for (&e, &v) in trail.edges.iter().zip(&trail.vertices[1..]) {
        if let Some(&p) = position.get(&v) {
            let mut cycle = Walk {
                vertices: stack.vertices[p..].to_vec(),
                edges: stack.edges[p..].to_vec(),
            };
            cycle.vertices.push(v);
            cycle.edges.push(e);
            for dropped in stack.vertices.drain(p + 1..) {
                position.remove(&dropped);
            }
            stack.edges.truncate(p);
            cycles.push(cycle);
        } else {
            position.insert(v, stack.vertices.len());
            stack.vertices.push(v);
            stack.edges.push(e);
        }
    }
    (stack, cycles)
}

/// A gameplay under construction: every move is applied to a working state
/// as it is recorded.
struct Play {
    state: GameState,
    moves: Gameplay,
}

impl Play {
    fn new(state: GameState) -> Self {
        Play { state, moves: Vec::new() }
    }

    fn push(&mut self, m: Move) -> Result<(), JoinError> {
        self.state.apply(&m)?;
        self.moves.push(m);
        Ok(())
    }

    fn walk(&mut self, t: TokenId, edges: &[EdgeId]) -> Result<(), JoinError> {
        edges.iter().try_for_each(|&e| self.push(Move::MoveAlong(t, e)))
    }

    fn erase(&mut self, vertices: &BTreeSet<VertexId>) -> Result<(), JoinError> {
        for &v in vertices {
            if self.state.graph().contains_vertex(v) {
                self.push(Move::DeleteVertex(v))?;
            }
        }
        Ok(())
    }

    fn tokens_in(&self, vertices: &BTreeSet<VertexId>) -> Vec<TokenId> {
        self.state.tokens().filter(|(_, v)| vertices.contains(v)).map(|(t, _)| t).collect()
    }

    /// Matches stacked tokens, then pairs up the rest along a finite join of
    /// the connected, ω-free vertex set.
    fn settle(&mut self, vertices: &BTreeSet<VertexId>) -> Result<(), JoinError> {
        if self.tokens_in(vertices).len() % 2 == 1 {
            return Err(JoinError::UnresolvableOddComponent(vertices.clone()));
        }
        let mut single = BTreeMap::new();
        for &v in vertices {
            let mut here = self.state.tokens_at(v);
            while here.len() >= 2 {
                let (a, b) = (here.remove(0), here.remove(0));
                self.push(Move::Match(a, b))?;
            }
            if let Some(t) = here.pop() {
                single.insert(v, t);
            }
        }
        let sub = self.state.graph().induced_subgraph(vertices);
        let t_set = single.keys().copied().collect();
        match tjoin_finite(&sub, &t_set)? {
            JoinOutcome::Join(ps) => {
                for p in ps {
                    let (a, b) = (single[&p.u], single[&p.v]);
                    self.walk(a, &p.edges)?;
                    self.push(Move::Match(a, b))?;
                }
                Ok(())
            }
            JoinOutcome::NoJoin(part) => Err(JoinError::UnresolvableOddComponent(part)),
        }
    }

    fn finish(self) -> (Gameplay, GameState) {
        (self.moves, self.state)
    }
}

/// Winning gameplay on a 2-edge-connected state in which `s` and `t` are
/// never matched with each other and `t` never moves.
pub fn avoiding_match_2ec(state: &GameState, s: TokenId, t: TokenId) -> Result<Gameplay, JoinError> {
    for tok in [s, t] {
        if state.position(tok).is_none() {
            return Err(JoinError::UnknownToken(tok));
        }
    }
    if s == t {
        return Err(JoinError::SameToken);
    }
    if state.token_count() % 2 == 1 {
        return Err(JoinError::OddTokenCount);
    }
    if state.token_count() < 4 {
        return Err(JoinError::TooFewTokens);
    }
    if !is_two_edge_connected(state.graph()) {
        return Err(JoinError::NotTwoEdgeConnected);
    }
    avoiding_moves(state.clone(), s, t)
}

/// Core of [`avoiding_match_2ec`]; preconditions are the caller's job.
///
/// Ears are peeled off last-first. The tokens on an ear's new vertices are
/// swept towards its ends, matching as they meet; one token leaves the ear
/// when their number is odd, two when it is even and positive. What is left
/// is the eulerian base, where the tokens are read off an Euler circuit
/// starting at `t` and consecutive ones are paired, choosing the pairing in
/// which `t`'s partner is not `s`.
fn avoiding_moves(state: GameState, s: TokenId, t: TokenId) -> Result<Gameplay, JoinError> {
    let mut play = Play::new(state);
    let g = play.state.graph().clone();
    let vs = play.state.position(s).expect("checked");
    let vt = play.state.position(t).expect("checked");

    let decomposition = if vs != vt {
        let (p, q) = edge_disjoint_path_pair(&g, vs, vt)?;
        let base: BTreeSet<EdgeId> = p.edges.iter().chain(&q.edges).copied().collect();
        let covered = p.vertices.iter().chain(&q.vertices).copied().collect();
        grow_ears(&g, base, covered)?
    } else {
        grow_ears(&g, BTreeSet::new(), BTreeSet::from([vt]))?
    };

    for ear in decomposition.ears.iter().rev() {
        let r = ear.edges.len();
        let occupied: Vec<usize> =
            (1..r).filter(|&i| !play.state.tokens_at(ear.vertices[i]).is_empty()).collect();
        let m: usize = occupied.iter().map(|&i| play.state.tokens_at(ear.vertices[i]).len()).sum();
        if m > 0 {
            let mut hi = r - 1;
            if m % 2 == 0 {
                let j = *occupied.last().expect("m > 0");
                let x = play.state.tokens_at(ear.vertices[j])[0];
                play.walk(x, &ear.edges[j..])?;
                hi = j;
            }
            for i in (1..=hi).rev() {
                let mut here = play.state.tokens_at(ear.vertices[i]);
                while here.len() >= 2 {
                    let (a, b) = (here.remove(0), here.remove(0));
                    play.push(Move::Match(a, b))?;
                }
                if let Some(x) = here.pop() {
                    play.push(Move::MoveAlong(x, ear.edges[i - 1]))?;
                }
            }
        }
        for &e in &ear.edges {
            if play.state.graph().contains_edge(e) {
                play.push(Move::DeleteEdge(e))?;
            }
        }
        for &v in &ear.vertices[1..r] {
            play.push(Move::DeleteVertex(v))?;
        }
    }

    let circuit = euler_circuit_from(play.state.graph(), vt)?;
    let closing = circuit.len();
    let first_seen = |v: VertexId| {
        circuit.vertices[..closing.max(1)].iter().position(|&w| w == v).expect("token on base")
    };
    let mut order: Vec<(usize, bool, TokenId)> =
        play.state.tokens().map(|(tok, v)| (first_seen(v), tok != t, tok)).collect();
    order.sort();
    let seq: Vec<(usize, TokenId)> = order.into_iter().map(|(i, _, tok)| (i, tok)).collect();
    let k = seq.len();
    debug_assert_eq!(seq[0].1, t);

    let offset = if seq[1].1 == s { 1 } else { 0 };
    for pair in 0..k / 2 {
        let a = offset + 2 * pair;
        let b = a + 1;
        if b == k {
            // wraps around to t at the closing vertex
            let (i, x) = seq[a];
            play.walk(x, &circuit.edges[i..closing])?;
            play.push(Move::Match(x, t))?;
        } else {
            let ((ia, xa), (ib, xb)) = (seq[a], seq[b]);
            if xa == t {
                let back: Vec<EdgeId> = circuit.edges[ia..ib].iter().rev().copied().collect();
                play.walk(xb, &back)?;
                play.push(Move::Match(xb, xa))?;
            } else {
                play.walk(xa, &circuit.edges[ia..ib])?;
                play.push(Move::Match(xa, xb))?;
            }
        }
    }
    debug_assert_eq!(play.state.token_count(), 0);
    Ok(play.moves)
}

/// Every connected component is 2-edge-connected and carries an ω vertex.
pub fn is_normal_form(state: &GameState) -> bool {
    bridges(state.graph()).is_empty()
        && components(state.graph()).iter().all(|c| c.iter().any(|v| state.omega().contains(v)))
}

/// Brings the state into normal form (see [`is_normal_form`]).
///
/// Components without ω vertices are settled by a finite join and deleted
/// (an odd one is an error). In a component with ω vertices the bridge
/// tree is rooted at the part holding the smallest ω vertex and leaves are
/// resolved bottom-up: a leaf with an ω vertex is cut off, an even leaf is
/// settled and deleted, an odd leaf settles all but one token (using a
/// phantom token on the bridge endpoint and [`avoiding_match_2ec`]) and
/// sends that one across the bridge. Tokens finally resting on ω vertices
/// are matched there.
pub fn normalize_components(state: &GameState) -> Result<(Gameplay, GameState), JoinError> {
    let mut play = Play::new(state.clone());
    for part in components(state.graph()) {
        if part.iter().any(|v| state.omega().contains(v)) {
            normalize_omega_component(&mut play, &part)?;
        } else {
            play.settle(&part)?;
            play.erase(&part)?;
        }
    }
    let omega: Vec<VertexId> = play.state.omega().iter().copied().collect();
    for w in omega {
        let mut here = play.state.tokens_at(w);
        while here.len() >= 2 {
            let (a, b) = (here.remove(0), here.remove(0));
            play.push(Move::Match(a, b))?;
        }
        if let Some(x) = here.pop() {
            let minted = play.state.next_token();
            play.push(Move::Mint(w))?;
            play.push(Move::Match(x, minted))?;
        }
    }
    Ok(play.finish())
}

fn normalize_omega_component(play: &mut Play, part: &BTreeSet<VertexId>) -> Result<(), JoinError> {
    let sub = play.state.graph().induced_subgraph(part);
    let anchor = *part.iter().find(|v| play.state.omega().contains(v)).expect("has omega");
    let probe = bridge_tree(&sub, ComponentId(0))?;
    let tree = bridge_tree(&sub, probe.component_of(anchor).expect("vertex of sub"))?;
    let mut order = tree.top_down();
    order.reverse();
    order.pop();
    for c in order {
        let vertices = tree.vertices(c).expect("tree node").clone();
        let (_, bridge) = tree.parent(c).expect("not the root");
        let (a, b) = sub.endpoints(bridge).expect("bridge of sub");
        let (inner, outer) = if vertices.contains(&a) { (a, b) } else { (b, a) };
        if vertices.iter().any(|v| play.state.omega().contains(v)) {
            play.push(Move::DeleteEdge(bridge))?;
            continue;
        }
        if play.tokens_in(&vertices).len() % 2 == 0 {
            play.settle(&vertices)?;
            play.push(Move::DeleteEdge(bridge))?;
        } else {
            let y = push_one_token(play, &vertices, inner)?;
            debug_assert_eq!(play.state.graph().opposite(bridge, inner), Some(outer));
            play.push(Move::MoveAlong(y, bridge))?;
        }
        play.erase(&vertices)?;
    }
    Ok(())
}

/// Matches all but one token of an odd, 2-edge-connected leaf inside it and
/// brings the remaining token to `exit`. Returns that token.
fn push_one_token(
    play: &mut Play,
    vertices: &BTreeSet<VertexId>,
    exit: VertexId,
) -> Result<TokenId, JoinError> {
    let tokens = play.tokens_in(vertices);
    let sub = play.state.graph().induced_subgraph(vertices);
    if tokens.len() == 1 {
        let y = tokens[0];
        let from = play.state.position(y).expect("token in play");
        let path = sub.shortest_path(from, exit).expect("leaf is connected");
        play.walk(y, &path.edges)?;
        return Ok(y);
    }
    let phantom = play.state.next_token();
    let mut placement: BTreeMap<TokenId, VertexId> =
        tokens.iter().map(|&t| (t, play.state.position(t).expect("in play"))).collect();
    placement.insert(phantom, exit);
    let local = GameState::from_placement(sub, placement, BTreeSet::new())
        .expect("placement inside the leaf");
    let mut pushed = None;
    for m in avoiding_moves(local, tokens[0], phantom)? {
        match m {
            Move::Match(a, b) if a == phantom || b == phantom => {
                pushed = Some(if a == phantom { b } else { a });
            }
            other => play.push(other)?,
        }
    }
    Ok(pushed.expect("phantom is matched"))
}

/// Removes `t0` by a finite gameplay on a state in normal form, and restores
/// the normal form afterwards.
///
/// `t0` heads for the nearest vertex holding another token or an ω marker
/// (distance, then vertex id). Of two edge-disjoint paths there the first
/// one whose removal keeps an ω vertex next to `t0` is followed. When the
/// next edge is a bridge whose crossing would leave behind an ω-free side
/// with an odd number of tokens, the edge is deleted instead and the side
/// holding `t0`, now even, is settled.
pub fn eliminate_token(state: &GameState, t0: TokenId) -> Result<(Gameplay, GameState), JoinError> {
    if !is_normal_form(state) {
        return Err(JoinError::PreconditionViolated(
            "every component must be 2-edge-connected with an omega vertex",
        ));
    }
    let start = state.position(t0).ok_or(JoinError::UnknownToken(t0))?;
    let mut play = Play::new(state.clone());
    let partner_at = |play: &Play, v: VertexId| play.state.tokens_at(v).into_iter().find(|&x| x != t0);

    let meet = |play: &mut Play, v: VertexId| -> Result<(), JoinError> {
        match partner_at(play, v) {
            Some(x) => play.push(Move::Match(t0, x)),
            None => {
                let minted = play.state.next_token();
                play.push(Move::Mint(v))?;
                play.push(Move::Match(t0, minted))
            }
        }
    };

    if partner_at(&play, start).is_some() || state.omega().contains(&start) {
        meet(&mut play, start)?;
    } else {
        let g = state.graph();
        let target = nearest(g, start, |v| {
            state.omega().contains(&v) || state.tokens_at(v).iter().any(|&x| x != t0)
        })
        .expect("component carries an omega vertex");
        let (p1, p2) = edge_disjoint_path_pair(g, start, target)?;
        let keeps_omega = |p: &Walk| {
            let rest: BTreeSet<EdgeId> = g.edge_ids().filter(|e| !p.edges.contains(e)).collect();
            g.with_edges(&rest).reachable(start).iter().any(|v| state.omega().contains(v))
        };
        let route = if keeps_omega(&p1) {
            p1
        } else if keeps_omega(&p2) {
            p2
        } else {
            return Err(JoinError::PreconditionViolated("no omega vertex survives either path"));
        };

        let mut settled = false;
        let mut cur = start;
        for &e in &route.edges {
            let next = play.state.graph().opposite(e, cur).expect("route edge present");
            let mut cut = play.state.graph().clone();
            cut.remove_edge(e);
            let side = cut.reachable(cur);
            if !side.contains(&next) {
                let has_omega = side.iter().any(|v| play.state.omega().contains(v));
                let left_behind = play.tokens_in(&side).len() - 1;
                if !has_omega && left_behind % 2 == 1 {
                    play.push(Move::DeleteEdge(e))?;
                    play.settle(&side)?;
                    play.erase(&side)?;
                    settled = true;
                    break;
                }
            }
            play.push(Move::MoveAlong(t0, e))?;
            cur = next;
        }
        if !settled {
            meet(&mut play, target)?;
        }
    }

    let (rest, after) = normalize_components(&play.state)?;
    play.moves.extend(rest);
    Ok((play.moves, after))
}

/// Closest vertex other than `from` satisfying `wanted`; ties go to the
/// smaller id.
fn nearest(g: &Multigraph, from: VertexId, wanted: impl Fn(VertexId) -> bool) -> Option<VertexId> {
    let mut dist = BTreeMap::from([(from, 0usize)]);
    let mut queue = VecDeque::from([from]);
    let mut best: Option<(usize, VertexId)> = None;
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if best.is_some_and(|(bd, _)| d > bd) {
            break;
        }
        if x != from && wanted(x) && best.is_none_or(|b| (d, x) < b) {
            best = Some((d, x));
        }
        for e in g.incident(x) {
            let y = g.opposite(e, x).expect("incident");
            if !dist.contains_key(&y) {
                dist.insert(y, d + 1);
                queue.push_back(y);
            }
        }
    }
    best.map(|(_, v)| v)
}

/// `g` plus a fresh vertex `z` joined to every vertex of `t_set`.
/// `T`-joins of `g` correspond to families of edge-disjoint cycles covering
/// all edges at `z`.
pub fn apex_graph(g: &Multigraph, t_set: &BTreeSet<VertexId>) -> Result<(Multigraph, VertexId), JoinError> {
    let mut h = g.clone();
    let mut name = String::from("z");
    while h.vertex_by_name(&name).is_some() {
        name.push('\'');
    }
    let z = h.add_named_vertex(&name)?;
    for &v in t_set {
        let mut edge = format!("{name}-{}", g.vertex_name(v));
        while h.edge_by_name(&edge).is_some() {
            edge.push('\'');
        }
        h.add_named_edge(&edge, z, v)?;
    }
    Ok((h, z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafAction {
    /// No token anywhere in the subtree.
    Prune,
    /// Even count, matched inside.
    MatchInside,
    /// Odd count, one token moves to the parent.
    PushUp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteStep {
    pub component: ComponentId,
    /// Tokens on the component when it is resolved, including received ones.
    pub tokens: usize,
    pub action: LeafAction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteSimplification {
    /// Tokens left on the root component.
    pub residue: usize,
    pub steps: Vec<ConcreteStep>,
}

/// Runs the simplification process on a finite connected graph rooted at
/// `root`: token-free subtrees are pruned and leaves are resolved bottom-up,
/// odd ones passing a single token to their parent.
pub fn concrete_simplify(
    g: &Multigraph,
    t_set: &BTreeSet<VertexId>,
    root: ComponentId,
) -> Result<ConcreteSimplification, GraphError> {
    let tree = bridge_tree(g, root)?;
    let own: Vec<usize> =
        tree.node_ids().map(|c| tree.vertices(c).unwrap().intersection(t_set).count()).collect();
    let mut order = tree.top_down();
    order.reverse();
    let mut subtotal = own.clone();
    for &c in &order {
        if let Some((p, _)) = tree.parent(c) {
            subtotal[p.0] += subtotal[c.0];
        }
    }
    let mut held = own;
    let mut steps = Vec::new();
    for &c in &order {
        let Some((p, _)) = tree.parent(c) else { continue };
        let action = if subtotal[c.0] == 0 {
            LeafAction::Prune
        } else if held[c.0] % 2 == 0 {
            LeafAction::MatchInside
        } else {
            held[p.0] += 1;
            LeafAction::PushUp
        };
        steps.push(ConcreteStep { component: c, tokens: held[c.0], action });
    }
    Ok(ConcreteSimplification { residue: held[root.0], steps })
}
