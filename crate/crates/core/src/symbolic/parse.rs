use super::{Cardinal, RayEntry, RaySpec, SymNode, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
}

fn lex(src: &str) -> Vec<(usize, Tok<'_>)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in src.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, Tok::Word(&src[s..i])));
            }
            match c {
                '(' => out.push((i, Tok::Open)),
                ')' => out.push((i, Tok::Close)),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, Tok::Word(&src[s..])));
    }
    out
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |t| t.0)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, SymbolicError> {
        Err(SymbolicError::Parse { offset: self.offset(), message: message.into() })
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn expect(&mut self, want: Tok<'static>, what: &str) -> Result<(), SymbolicError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a str, SymbolicError> {
        match self.peek() {
            Some(&Tok::Word(w)) => {
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn field(&mut self, key: &str) -> Result<&'a str, SymbolicError> {
        let w = self.word(&format!("{key}=<value>"))?;
        match w.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
            Some(v) => Ok(v),
            None => {
                self.pos -= 1;
                self.fail(format!("expected {key}=<value>"))
            }
        }
    }

    fn number<T: std::str::FromStr>(&mut self, text: &str) -> Result<T, SymbolicError> {
        match text.parse() {
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos -= 1;
                self.fail(format!("invalid number {text:?}"))
            }
        }
    }

    fn node(&mut self) -> Result<SymNode, SymbolicError> {
        self.expect(Tok::Open, "'('")?;
        if self.word("'node'")? != "node" {
            self.pos -= 1;
            return self.fail("expected 'node'");
        }
        let id = self.word("node id")?.to_string();
        let v = self.field("v")?;
        let nvertices = self.number(v)?;
        let t = self.field("t")?;
        let tokens = if t == "w" { Cardinal::Omega } else { Cardinal::Fin(self.number(t)?) };
        let mut node = SymNode::leaf(&id, nvertices, tokens);
        loop {
            match self.peek() {
                Some(Tok::Close) => {
                    self.pos += 1;
                    return Ok(node);
                }
                Some(Tok::Open) => node.children.push(self.node()?),
                Some(Tok::Word("rep")) => {
                    self.pos += 1;
                    node.omega_children.push(self.node()?);
                }
                Some(Tok::Word("ray")) => {
                    self.pos += 1;
                    if node.ray.is_some() {
                        self.pos -= 1;
                        return self.fail("a node has at most one ray");
                    }
                    let spec = self.field("p")?;
                    node.ray = Some(self.ray(spec)?);
                }
                Some(_) => return self.fail("expected child, 'rep', 'ray' or ')'"),
                None => return self.fail("unexpected end of input"),
            }
        }
    }

    fn ray(&mut self, spec: &str) -> Result<RaySpec, SymbolicError> {
        let mut period = Vec::new();
        for entry in spec.split(',') {
            let (t, v) = match entry.split_once('/') {
                Some((t, v)) => (t, Some(v)),
                None => (entry, None),
            };
            let tokens: u64 = self.number(t)?;
            let nvertices = match v {
                Some(v) => self.number(v)?,
                None => (tokens as usize).max(1),
            };
            period.push(RayEntry { nvertices, tokens });
        }
        Ok(RaySpec { period })
    }
}

/// Reads one tree in the parenthesized format
/// `(node <id> v=<int> t=<int|w> children... rep (node ...) ray p=<c1,c2,...>)`.
///
/// A ray entry is a token count, optionally followed by `/<vertices>`; the
/// component size defaults to the token count (at least one). Text after a
/// `#` up to the end of the line is ignored.
pub fn parse_tree(src: &str) -> Result<SymNode, SymbolicError> {
    let stripped: String = src
        .lines()
        .map(|l| l.split_once('#').map_or(l, |(keep, _)| keep))
        .collect::<Vec<_>>()
        .join("\n");
    let mut p = Parser { toks: lex(&stripped), pos: 0, len: stripped.len() };
    let node = p.node()?;
    if p.pos < p.toks.len() {
        return p.fail("trailing input after the tree");
    }
    node.validate()?;
    Ok(node)
}
