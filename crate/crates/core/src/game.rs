//! The single-player token game.
//!
//! Tokens sit on vertices. Moving a token across an edge consumes the edge,
//! two tokens on the same vertex may be matched (both removed), and token-free
//! vertices as well as arbitrary edges may be deleted. A gameplay that removes
//! every token is winning, and winning gameplays from the distribution "one
//! token on every vertex of `T`" correspond exactly to `T`-joins: the
//! conversions live at the bottom of this module.
//!
//! Vertices may carry an ω marker standing for infinitely many tokens. Such a
//! vertex can mint a fresh token at any time and can never be deleted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::multigraph::{EdgeId, Multigraph, VertexId, Walk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenId(pub u32);

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    MoveAlong(TokenId, EdgeId),
    Match(TokenId, TokenId),
    DeleteEdge(EdgeId),
    DeleteVertex(VertexId),
    /// Only legal on ω vertices.
    Mint(VertexId),
}

pub type Gameplay = Vec<Move>;

/// Why a move is illegal. The `Display` form is the machine-readable reason
/// used in traces and CLI output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IllegalMove {
    #[error("unknown-token")]
    UnknownToken,
    #[error("token-not-on-edge-endpoint")]
    TokenNotOnEdgeEndpoint,
    #[error("edge-absent")]
    EdgeAbsent,
    #[error("tokens-not-coincident")]
    TokensNotCoincident,
    #[error("same-token")]
    SameToken,
    #[error("vertex-absent")]
    VertexAbsent,
    #[error("vertex-carries-token")]
    VertexCarriesToken,
    #[error("vertex-is-omega")]
    VertexIsOmega,
    #[error("not-omega")]
    NotOmega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("move {index}: {reason}")]
pub struct ReplayError {
    pub index: usize,
    pub reason: IllegalMove,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("invalid join: {0}")]
    InvalidJoin(JoinClause),
    #[error("gameplay is not winning ({0} tokens remain)")]
    NotWinning(usize),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    graph: Multigraph,
    placement: BTreeMap<TokenId, VertexId>,
    move_count: BTreeMap<TokenId, u32>,
    omega: BTreeSet<VertexId>,
    next_token: u32,
}

/// One token on each vertex of `t_set`; tokens are numbered in ascending
/// vertex order.
pub fn initial_state(g: &Multigraph, t_set: &BTreeSet<VertexId>) -> Result<GameState, GameError> {
    GameState::with_omega(g.clone(), t_set, &BTreeSet::new())
}

impl GameState {
    /// Initial distribution plus ω markers.
    pub fn with_omega(
        graph: Multigraph,
        t_set: &BTreeSet<VertexId>,
        omega: &BTreeSet<VertexId>,
    ) -> Result<GameState, GameError> {
        let placement = t_set.iter().enumerate().map(|(i, &v)| (TokenId(i as u32), v)).collect();
        Self::from_placement(graph, placement, omega.clone())
    }

    /// Arbitrary placement; several tokens may share a vertex.
    pub fn from_placement(
        graph: Multigraph,
        placement: BTreeMap<TokenId, VertexId>,
        omega: BTreeSet<VertexId>,
    ) -> Result<GameState, GameError> {
        if let Some(&v) = placement.values().chain(&omega).find(|v| !graph.contains_vertex(**v)) {
            return Err(GameError::UnknownVertex(v));
        }
        let next_token = placement.keys().next_back().map_or(0, |t| t.0 + 1);
        let move_count = placement.keys().map(|&t| (t, 0)).collect();
        Ok(GameState { graph, placement, move_count, omega, next_token })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn omega(&self) -> &BTreeSet<VertexId> {
        &self.omega
    }

    pub fn position(&self, t: TokenId) -> Option<VertexId> {
        self.placement.get(&t).copied()
    }

    /// Tokens still in play with their positions.
    pub fn tokens(&self) -> impl Iterator<Item = (TokenId, VertexId)> + '_ {
        self.placement.iter().map(|(&t, &v)| (t, v))
    }

    pub fn token_count(&self) -> usize {
        self.placement.len()
    }

    pub fn tokens_at(&self, v: VertexId) -> Vec<TokenId> {
        self.placement.iter().filter(|(_, &w)| w == v).map(|(&t, _)| t).collect()
    }

    /// How often `t` has moved; also known for tokens already matched.
    pub fn move_count(&self, t: TokenId) -> Option<u32> {
        self.move_count.get(&t).copied()
    }

    /// Id the next minted token will receive.
    pub fn next_token(&self) -> TokenId {
        TokenId(self.next_token)
    }

    /// Winning: no tokens left and no ω vertex (which would stand for
    /// infinitely many unplayed tokens).
    pub fn is_winning(&self) -> bool {
        self.placement.is_empty() && self.omega.is_empty()
    }

    /// Applies a move in place. On error the state is unchanged.
    pub fn apply(&mut self, m: &Move) -> Result<(), IllegalMove> {
        match *m {
            Move::MoveAlong(t, e) => {
                let at = self.position(t).ok_or(IllegalMove::UnknownToken)?;
                if !self.graph.contains_edge(e) {
                    return Err(IllegalMove::EdgeAbsent);
                }
                let to = self.graph.opposite(e, at).ok_or(IllegalMove::TokenNotOnEdgeEndpoint)?;
                self.graph.remove_edge(e);
                self.placement.insert(t, to);
                *self.move_count.entry(t).or_insert(0) += 1;
            }
            Move::Match(a, b) => {
                let pa = self.position(a).ok_or(IllegalMove::UnknownToken)?;
                let pb = self.position(b).ok_or(IllegalMove::UnknownToken)?;
                if a == b {
                    return Err(IllegalMove::SameToken);
                }
                if pa != pb {
                    return Err(IllegalMove::TokensNotCoincident);
                }
                self.placement.remove(&a);
                self.placement.remove(&b);
            }
            Move::DeleteEdge(e) => {
                self.graph.remove_edge(e).ok_or(IllegalMove::EdgeAbsent)?;
            }
            Move::DeleteVertex(v) => {
                if !self.graph.contains_vertex(v) {
                    return Err(IllegalMove::VertexAbsent);
                }
                if self.omega.contains(&v) {
                    return Err(IllegalMove::VertexIsOmega);
                }
                if self.placement.values().any(|&w| w == v) {
                    return Err(IllegalMove::VertexCarriesToken);
                }
                self.graph.remove_vertex(v);
            }
            Move::Mint(v) => {
                if !self.omega.contains(&v) {
                    return Err(IllegalMove::NotOmega);
                }
                let t = TokenId(self.next_token);
                self.next_token += 1;
                self.placement.insert(t, v);
                self.move_count.insert(t, 0);
            }
        }
        Ok(())
    }
}

/// Value-style single step.
pub fn apply_move(mut s: GameState, m: &Move) -> Result<GameState, IllegalMove> {
    s.apply(m)?;
    Ok(s)
}

/// Folds `apply_move` over the gameplay, stopping at the first illegal move.
pub fn replay(s: &GameState, p: &[Move]) -> Result<GameState, ReplayError> {
    let mut state = s.clone();
    for (index, m) in p.iter().enumerate() {
        state.apply(m).map_err(|reason| ReplayError { index, reason })?;
    }
    Ok(state)
}

/// One path of a join: designated endpoints and the edges from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinPath {
    pub u: VertexId,
    pub v: VertexId,
    pub edges: Vec<EdgeId>,
}

impl JoinPath {
    /// Vertex sequence of the path in `g`, or `None` if the edges do not
    /// chain from `u` to `v`.
    pub fn walk(&self, g: &Multigraph) -> Option<Walk> {
        let mut walk = Walk::trivial(self.u);
        for &e in &self.edges {
            let next = g.opposite(e, walk.end())?;
            walk.vertices.push(next);
            walk.edges.push(e);
        }
        (walk.end() == self.v).then_some(walk)
    }
}

impl From<&Walk> for JoinPath {
    fn from(w: &Walk) -> Self {
        JoinPath { u: w.start(), v: w.end(), edges: w.edges.clone() }
    }
}

/// A `T`-join: edge-disjoint simple paths whose endpoints partition `T`.
pub type PathSystem = Vec<JoinPath>;

/// The first violated clause found when checking a [`PathSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum JoinClause {
    #[error("unknown-edge")]
    UnknownEdge,
    #[error("edge-disjointness")]
    EdgeDisjointness,
    #[error("broken-path")]
    BrokenPath,
    #[error("degenerate-path")]
    DegeneratePath,
    #[error("simplicity")]
    Simplicity,
    #[error("endpoint-partition")]
    EndpointPartition,
}

/// Checks every `PathSystem` invariant against `(g, t_set)`.
pub fn verify_join(
    g: &Multigraph,
    t_set: &BTreeSet<VertexId>,
    ps: &[JoinPath],
) -> Result<(), JoinClause> {
    let all_edges: Vec<EdgeId> = ps.iter().flat_map(|p| p.edges.iter().copied()).collect();
    if all_edges.iter().any(|&e| !g.contains_edge(e)) {
        return Err(JoinClause::UnknownEdge);
    }
    if all_edges.iter().collect::<BTreeSet<_>>().len() != all_edges.len() {
        return Err(JoinClause::EdgeDisjointness);
    }
    for p in ps {
        let walk = p.walk(g).ok_or(JoinClause::BrokenPath)?;
        if p.u == p.v {
            return Err(JoinClause::DegeneratePath);
        }
        if !walk.is_simple() {
            return Err(JoinClause::Simplicity);
        }
    }
    let ends: Vec<VertexId> = ps.iter().flat_map(|p| [p.u, p.v]).collect();
    let distinct: BTreeSet<VertexId> = ends.iter().copied().collect();
    if distinct.len() != ends.len() || &distinct != t_set {
        return Err(JoinClause::EndpointPartition);
    }
    Ok(())
}

/// For each path the token at `u` walks to `v` and is matched there.
pub fn gameplay_from_join(
    g: &Multigraph,
    t_set: &BTreeSet<VertexId>,
    ps: &[JoinPath],
) -> Result<Gameplay, GameError> {
    verify_join(g, t_set, ps).map_err(GameError::InvalidJoin)?;
    let token_at: BTreeMap<VertexId, TokenId> =
        t_set.iter().enumerate().map(|(i, &v)| (v, TokenId(i as u32))).collect();
    let mut play = Vec::new();
    for p in ps {
        let (a, b) = (token_at[&p.u], token_at[&p.v]);
        play.extend(p.edges.iter().map(|&e| Move::MoveAlong(a, e)));
        play.push(Move::Match(a, b));
    }
    Ok(play)
}

/// Reads a join off a winning gameplay. Each matched pair contributes the
/// first token's trajectory followed by the second one's in reverse,
/// shortcut to a simple path.
pub fn join_from_gameplay(
    g: &Multigraph,
    t_set: &BTreeSet<VertexId>,
    p: &[Move],
) -> Result<PathSystem, GameError> {
    let mut state = initial_state(g, t_set)?;
    let mut trajectory: BTreeMap<TokenId, Walk> =
        state.tokens().map(|(t, v)| (t, Walk::trivial(v))).collect();
    let mut join = Vec::new();
    for (index, m) in p.iter().enumerate() {
        state.apply(m).map_err(|reason| ReplayError { index, reason })?;
        match *m {
            Move::MoveAlong(t, e) => {
                let to = state.position(t).expect("token just moved");
                let walk = trajectory.get_mut(&t).expect("known token");
                walk.edges.push(e);
                walk.vertices.push(to);
            }
            Move::Mint(v) => {
                trajectory.insert(TokenId(state.next_token - 1), Walk::trivial(v));
            }
            Move::Match(a, b) => {
                let mut walk = trajectory.remove(&a).expect("known token");
                let back = trajectory.remove(&b).expect("known token").reversed();
                walk.edges.extend(back.edges);
                walk.vertices.extend(back.vertices.into_iter().skip(1));
                join.push(JoinPath::from(&walk.shortcut()));
            }
            Move::DeleteEdge(_) | Move::DeleteVertex(_) => {}
        }
    }
    if !state.is_winning() {
        return Err(GameError::NotWinning(state.token_count()));
    }
    verify_join(g, t_set, &join).map_err(GameError::InvalidJoin)?;
    Ok(join)
}
