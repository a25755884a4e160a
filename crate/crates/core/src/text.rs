//! Line-oriented text formats. `#` starts a comment everywhere.
//!
//! | file      | lines                                                            |
//! |-----------|------------------------------------------------------------------|
//! | graph     | `v <vertex>`, `e <edge> <vertex> <vertex>`                       |
//! | tokens    | `t <vertex>` (member of `T`), `w <vertex>` (ω vertex)            |
//! | gameplay  | `mv <token> <edge>`, `match <token> <token>`, `de <edge>`, `dv <vertex>`, `mint <vertex>` |
//! | join      | `p <u> <v> : <edge> ...`, or a single `nojoin <vertex> ...`      |
//!
//! Tokens are written `t<k>`: the `k`-th vertex of `T` in declaration order
//! starts with token `t<k>`, and minted tokens continue the numbering.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{Gameplay, JoinPath, Move, PathSystem, TokenId};
use crate::joiner::JoinOutcome;
use crate::multigraph::{EdgeId, GraphError, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn lines(src: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    src.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split_once('#').map_or(l, |(keep, _)| keep);
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

fn vertex(g: &Multigraph, line: usize, name: &str) -> Result<VertexId, ParseError> {
    g.vertex_by_name(name).map_or_else(|| err(line, format!("unknown vertex {name}")), Ok)
}

fn edge(g: &Multigraph, line: usize, name: &str) -> Result<EdgeId, ParseError> {
    g.edge_by_name(name).map_or_else(|| err(line, format!("unknown edge {name}")), Ok)
}

fn token(line: usize, name: &str) -> Result<TokenId, ParseError> {
    name.strip_prefix('t')
        .and_then(|k| k.parse().ok())
        .map(TokenId)
        .map_or_else(|| err(line, format!("invalid token {name}")), Ok)
}

pub fn parse_graph(src: &str) -> Result<Multigraph, ParseError> {
    let mut g = Multigraph::new();
    for (line, w) in lines(src) {
        let result = match w.as_slice() {
            ["v", id] => g.add_named_vertex(id).map(drop),
            ["e", id, a, b] => {
                let (a, b) = (vertex(&g, line, a)?, vertex(&g, line, b)?);
                g.add_named_edge(id, a, b).map(drop)
            }
            _ => return err(line, "expected `v <id>` or `e <id> <u> <v>`"),
        };
        result.map_err(|e: GraphError| ParseError { line, message: e.to_string() })?;
    }
    Ok(g)
}

pub fn write_graph(g: &Multigraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        writeln!(out, "v {}", g.vertex_name(v)).unwrap();
    }
    for (e, a, b) in g.edges() {
        writeln!(out, "e {} {} {}", g.edge_name(e), g.vertex_name(a), g.vertex_name(b)).unwrap();
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenFile {
    pub t_set: BTreeSet<VertexId>,
    pub omega: BTreeSet<VertexId>,
}

pub fn parse_tokens(src: &str, g: &Multigraph) -> Result<TokenFile, ParseError> {
    let mut out = TokenFile::default();
    for (line, w) in lines(src) {
        let (set, v) = match w.as_slice() {
            ["t", v] => (&mut out.t_set, v),
            ["w", v] => (&mut out.omega, v),
            _ => return err(line, "expected `t <vertex>` or `w <vertex>`"),
        };
        if !set.insert(vertex(g, line, v)?) {
            return err(line, format!("duplicate entry for {v}"));
        }
    }
    Ok(out)
}

pub fn write_tokens(g: &Multigraph, tokens: &TokenFile) -> String {
    let mut out = String::new();
    for &v in &tokens.t_set {
        writeln!(out, "t {}", g.vertex_name(v)).unwrap();
    }
    for &v in &tokens.omega {
        writeln!(out, "w {}", g.vertex_name(v)).unwrap();
    }
    out
}

pub fn parse_gameplay(src: &str, g: &Multigraph) -> Result<Gameplay, ParseError> {
    lines(src)
        .map(|(line, w)| match w.as_slice() {
            ["mv", t, e] => Ok(Move::MoveAlong(token(line, t)?, edge(g, line, e)?)),
            ["match", a, b] => Ok(Move::Match(token(line, a)?, token(line, b)?)),
            ["de", e] => Ok(Move::DeleteEdge(edge(g, line, e)?)),
            ["dv", v] => Ok(Move::DeleteVertex(vertex(g, line, v)?)),
            ["mint", v] => Ok(Move::Mint(vertex(g, line, v)?)),
            _ => err(line, "expected mv, match, de, dv or mint"),
        })
        .collect()
}

/// Names are looked up in `g`, which must still contain every edge and
/// vertex the moves mention (use the initial graph).
pub fn write_gameplay(g: &Multigraph, play: &[Move]) -> String {
    let mut out = String::new();
    for m in play {
        match *m {
            Move::MoveAlong(t, e) => writeln!(out, "mv {t} {}", g.edge_name(e)),
            Move::Match(a, b) => writeln!(out, "match {a} {b}"),
            Move::DeleteEdge(e) => writeln!(out, "de {}", g.edge_name(e)),
            Move::DeleteVertex(v) => writeln!(out, "dv {}", g.vertex_name(v)),
            Move::Mint(v) => writeln!(out, "mint {}", g.vertex_name(v)),
        }
        .unwrap();
    }
    out
}

/// Edge names missing from `g` are kept as ids outside the graph, so that
/// checking the system reports them as unknown edges.
pub fn parse_path_system(src: &str, g: &Multigraph) -> Result<PathSystem, ParseError> {
    let mut unknown: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for (line, w) in lines(src) {
        let [p, u, v, colon, rest @ ..] = w.as_slice() else {
            return err(line, "expected `p <u> <v> : <edge> ...`");
        };
        if *p != "p" || *colon != ":" {
            return err(line, "expected `p <u> <v> : <edge> ...`");
        }
        let edges = rest
            .iter()
            .map(|name| {
                g.edge_by_name(name).unwrap_or_else(|| {
                    let k = unknown.iter().position(|n| n == name).unwrap_or_else(|| {
                        unknown.push(name.to_string());
                        unknown.len() - 1
                    });
                    EdgeId(u32::MAX - k as u32)
                })
            })
            .collect();
        out.push(JoinPath { u: vertex(g, line, u)?, v: vertex(g, line, v)?, edges });
    }
    Ok(out)
}

pub fn write_path_system(g: &Multigraph, ps: &[JoinPath]) -> String {
    let mut out = String::new();
    for p in ps {
        write!(out, "p {} {} :", g.vertex_name(p.u), g.vertex_name(p.v)).unwrap();
        for &e in &p.edges {
            write!(out, " {}", g.edge_name(e)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_join_outcome(g: &Multigraph, outcome: &JoinOutcome) -> String {
    match outcome {
        JoinOutcome::Join(ps) => write_path_system(g, ps),
        JoinOutcome::NoJoin(part) => {
            let names: Vec<&str> = part.iter().map(|&v| g.vertex_name(v)).collect();
            format!("nojoin {}\n", names.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH: &str = "# a path\nv a\nv b\nv c\ne ab a b\ne bc b c  # second edge\n";

    #[test]
    fn graph_round_trip() {
        let g = parse_graph(PATH).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 2));
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_errors() {
        assert_eq!(parse_graph("v a\nv a\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("v a\ne x a b\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("v a\nv b\ne x a b\ne x b a\n").unwrap_err().line, 4);
        assert_eq!(parse_graph("v a\ne x a a\n").unwrap_err().line, 2);
        assert_eq!(parse_graph("vertex a\n").unwrap_err().line, 1);
    }

    #[test]
    fn tokens_and_plays() {
        let g = parse_graph(PATH).unwrap();
        let tokens = parse_tokens("t a\nt c\nw b\n", &g).unwrap();
        assert_eq!(tokens.t_set.len(), 2);
        assert_eq!(parse_tokens(&write_tokens(&g, &tokens), &g).unwrap(), tokens);
        assert!(parse_tokens("t a\nt a\n", &g).is_err());
        assert!(parse_tokens("t z\n", &g).is_err());

        let src = "mv t0 ab\nmv t0 bc\nmatch t0 t1\nde ab\ndv b\nmint b\n";
        let play = parse_gameplay(src, &g).unwrap();
        assert_eq!(play.len(), 6);
        assert_eq!(write_gameplay(&g, &play), src);
        assert_eq!(parse_gameplay("mv x0 ab\n", &g).unwrap_err().line, 1);
    }

    #[test]
    fn path_systems() {
        let g = parse_graph(PATH).unwrap();
        let ps = parse_path_system("p a c : ab bc\n", &g).unwrap();
        assert_eq!(write_path_system(&g, &ps), "p a c : ab bc\n");
        let ps = parse_path_system("p a c : ab zz\n", &g).unwrap();
        assert!(!g.contains_edge(ps[0].edges[1]));
        assert!(parse_path_system("p a c ab bc\n", &g).is_err());
        let out = JoinOutcome::NoJoin([VertexId(0), VertexId(2)].into());
        assert_eq!(write_join_outcome(&g, &out), "nojoin a c\n");
    }
}
