//! The `tjoin` command line, as a library so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 negative verdict (no join, invalid join, play
//! not winning or illegal, oracle mismatch), 2 bad input. Every line that
//! reports a problem starts with a machine-readable prefix.

mod random;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tjoin::game::{gameplay_from_join, replay, verify_join, GameState};
use tjoin::joiner::{concrete_simplify, tjoin_finite, JoinOutcome, LeafAction};
use tjoin::multigraph::{bridge_tree, bridges, components, two_edge_components, Multigraph, VertexId};
use tjoin::symbolic::{
    bundled_trees, classify, detect_bad_u, parse_tree, simplify, truncate, truncation_limit_oracle, SymNode,
};
use tjoin::text::{
    parse_gameplay, parse_graph, parse_tokens, write_gameplay, write_graph, write_join_outcome, write_tokens,
    TokenFile,
};

#[derive(Debug, Parser)]
#[command(name = "tjoin", version, about = "T-joins, token games and the A/B/C classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// `p u v : edges...` lines
    Join,
    /// a replayable gameplay trace
    Play,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Components, bridges, 2-edge-connected components and bridge trees.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        /// Vertex whose 2-edge-connected component roots the bridge tree.
        #[arg(long)]
        root: Option<String>,
    },
    /// A T-join, or a component meeting T in an odd number of vertices.
    Tjoin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tokens: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Join)]
        emit: Emit,
    },
    /// Checks a path system (or a `nojoin` certificate) against (G, T).
    VerifyJoin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tokens: PathBuf,
        #[arg(long)]
        join: PathBuf,
    },
    /// Replays a gameplay trace from the initial token placement.
    Replay {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tokens: PathBuf,
        #[arg(long)]
        play: PathBuf,
    },
    /// Runs the simplification process on a symbolic tree or a finite graph.
    Simplify {
        #[arg(long, conflicts_with_all = ["graph", "tokens"])]
        tree: Option<PathBuf>,
        #[arg(long, requires = "tokens")]
        graph: Option<PathBuf>,
        #[arg(long)]
        tokens: Option<PathBuf>,
        #[arg(long)]
        root: Option<String>,
    },
    /// Prints A, B or C for a symbolic tree.
    Classify {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Prints a repeated nontrivial pattern, or `none`.
    DetectBadU {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Writes `<out>.graph` and `<out>.tokens` for the n-th truncation.
    Truncate {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compares classify with the truncation oracle.
    Oracle {
        /// Check this tree instead of the bundled library.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of extra random trees drawn from the seed.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
}

/// Failure with its exit code; the message already carries its prefix.
struct Exit(i32, String);

type Outcome = Result<String, Exit>;

fn input(kind: &str, detail: impl std::fmt::Display) -> Exit {
    Exit(2, format!("error: {kind}: {detail}"))
}

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| input("io", format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Multigraph, Exit> {
    parse_graph(&read(path)?).map_err(|e| input("parse", format!("{}: {e}", path.display())))
}

fn load_tokens(path: &Path, g: &Multigraph) -> Result<TokenFile, Exit> {
    parse_tokens(&read(path)?, g).map_err(|e| input("parse", format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<SymNode, Exit> {
    parse_tree(&read(path)?).map_err(|e| input("parse", format!("{}: {e}", path.display())))
}

fn plain_t(path: &Path, g: &Multigraph) -> Result<BTreeSet<VertexId>, Exit> {
    let tokens = load_tokens(path, g)?;
    if !tokens.omega.is_empty() {
        return Err(input("input", "omega vertices are only meaningful for replay"));
    }
    Ok(tokens.t_set)
}

fn names<'a>(g: &'a Multigraph, vs: impl IntoIterator<Item = &'a VertexId>) -> String {
    vs.into_iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>().join(" ")
}

fn vertex(g: &Multigraph, name: &str) -> Result<VertexId, Exit> {
    g.vertex_by_name(name).ok_or_else(|| input("input", format!("unknown vertex {name}")))
}

fn decompose(graph: &Path, root: Option<&str>) -> Outcome {
    let g = load_graph(graph)?;
    let root = root.map(|r| vertex(&g, r)).transpose()?;
    let mut out = String::new();
    let parts = components(&g);
    writeln!(out, "components: {}", parts.len()).unwrap();
    for p in &parts {
        writeln!(out, "  {{{}}}", names(&g, p)).unwrap();
    }
    let bs: Vec<&str> = bridges(&g).into_iter().map(|e| g.edge_name(e)).collect();
    writeln!(out, "bridges: {}", bs.join(" ")).unwrap();
    let blocks = two_edge_components(&g);
    let label: BTreeMap<VertexId, usize> =
        blocks.iter().enumerate().flat_map(|(i, b)| b.iter().map(move |&v| (v, i))).collect();
    writeln!(out, "2-edge-components: {}", blocks.len()).unwrap();
    for (i, b) in blocks.iter().enumerate() {
        writeln!(out, "  C{i} {{{}}}", names(&g, b)).unwrap();
    }
    for p in &parts {
        let anchor = root.filter(|r| p.contains(r)).unwrap_or(*p.first().expect("nonempty"));
        let sub = g.induced_subgraph(p);
        let probe = bridge_tree(&sub, tjoin::multigraph::ComponentId(0)).expect("connected");
        let tree = bridge_tree(&sub, probe.component_of(anchor).expect("present")).expect("connected");
        let global = |c| label[tree.vertices(c).expect("node").first().expect("nonempty")];
        writeln!(out, "bridge-tree root C{}", global(tree.root())).unwrap();
        for c in tree.top_down() {
            if let Some((parent, e)) = tree.parent(c) {
                writeln!(out, "  C{} parent C{} via {}", global(c), global(parent), g.edge_name(e)).unwrap();
            }
        }
    }
    Ok(out)
}

fn tjoin_cmd(graph: &Path, tokens: &Path, emit: Emit) -> Outcome {
    let g = load_graph(graph)?;
    let t = plain_t(tokens, &g)?;
    let outcome = tjoin_finite(&g, &t).map_err(|e| input("input", e))?;
    match (&outcome, emit) {
        (JoinOutcome::NoJoin(_), _) => Err(Exit(1, write_join_outcome(&g, &outcome).trim_end().to_string())),
        (JoinOutcome::Join(_), Emit::Join) => Ok(write_join_outcome(&g, &outcome)),
        (JoinOutcome::Join(ps), Emit::Play) => {
            let play = gameplay_from_join(&g, &t, ps).expect("verified join");
            Ok(write_gameplay(&g, &play))
        }
    }
}

fn verify_join_cmd(graph: &Path, tokens: &Path, join: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let t = plain_t(tokens, &g)?;
    let src = read(join)?;
    let nojoin_line = src
        .lines()
        .map(|l| l.split_once('#').map_or(l, |(keep, _)| keep).trim())
        .find(|l| l.starts_with("nojoin"));
    if let Some(line) = nojoin_line {
        let claimed = line
            .split_whitespace()
            .skip(1)
            .map(|n| vertex(&g, n))
            .collect::<Result<BTreeSet<VertexId>, _>>()?;
        let is_component = components(&g).contains(&claimed);
        let odd = claimed.intersection(&t).count() % 2 == 1;
        return match (is_component, odd) {
            (true, true) => Ok("valid nojoin\n".into()),
            (false, _) => Err(Exit(1, "invalid: not-a-component".into())),
            (true, false) => Err(Exit(1, "invalid: even-intersection".into())),
        };
    }
    let ps = tjoin::text::parse_path_system(&src, &g)
        .map_err(|e| input("parse", format!("{}: {e}", join.display())))?;
    match verify_join(&g, &t, &ps) {
        Ok(()) => Ok("valid\n".into()),
        Err(clause) => Err(Exit(1, format!("invalid: {clause}"))),
    }
}

fn replay_cmd(graph: &Path, tokens: &Path, play: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let tf = load_tokens(tokens, &g)?;
    let moves = parse_gameplay(&read(play)?, &g).map_err(|e| input("parse", format!("{}: {e}", play.display())))?;
    let start = GameState::with_omega(g.clone(), &tf.t_set, &tf.omega).map_err(|e| input("input", e))?;
    let end = replay(&start, &moves).map_err(|e| Exit(1, format!("illegal: move {}: {}", e.index + 1, e.reason)))?;
    if end.token_count() > 0 {
        return Err(Exit(1, format!("not-winning: {} tokens remain", end.token_count())));
    }
    if start.omega().is_empty() {
        Ok(format!("winning: {} moves\n", moves.len()))
    } else {
        Ok(format!("cleared: {} moves, every token matched\n", moves.len()))
    }
}

fn simplify_cmd(tree: Option<&Path>, graph: Option<&Path>, tokens: Option<&Path>, root: Option<&str>) -> Outcome {
    let mut out = String::new();
    if let Some(tree) = tree {
        let outcome = simplify(&load_tree(tree)?).map_err(|e| input("input", e))?;
        for step in &outcome.trace {
            writeln!(out, "{} {} {}", step.node, step.action, step.passed_up).unwrap();
        }
        writeln!(out, "residue: {}", outcome.residue).unwrap();
        return Ok(out);
    }
    let (Some(graph), Some(tokens)) = (graph, tokens) else {
        return Err(input("usage", "simplify needs --tree, or --graph with --tokens"));
    };
    let g = load_graph(graph)?;
    let t = plain_t(tokens, &g)?;
    let probe = bridge_tree(&g, tjoin::multigraph::ComponentId(0)).map_err(|e| input("input", e))?;
    let anchor = match root {
        Some(r) => vertex(&g, r)?,
        None => g.vertices().next().ok_or_else(|| input("input", "empty graph"))?,
    };
    let root = probe.component_of(anchor).expect("vertex of g");
    let run = concrete_simplify(&g, &t, root).map_err(|e| input("input", e))?;
    let tree = bridge_tree(&g, root).expect("connected");
    for step in &run.steps {
        let action = match step.action {
            LeafAction::Prune => "prune",
            LeafAction::MatchInside => "match",
            LeafAction::PushUp => "push",
        };
        let members = names(&g, tree.vertices(step.component).expect("node"));
        writeln!(out, "{{{members}}} {} {action}", step.tokens).unwrap();
    }
    writeln!(out, "residue: {}", run.residue).unwrap();
    Ok(out)
}

fn oracle_cmd(tree: Option<&Path>, n: usize, seed: u64, extra: usize) -> Outcome {
    let mut trees: Vec<(String, SymNode)> = match tree {
        Some(p) => vec![(p.display().to_string(), load_tree(p)?)],
        None => bundled_trees().iter().map(|b| (b.name.to_string(), b.tree())).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..extra {
        trees.push((format!("random-{seed}-{i}"), random::oracle_tree(&mut rng)));
    }
    let mut out = String::new();
    let mut mismatches = 0;
    for (name, t) in &trees {
        let symbolic = classify(t).map_err(|e| input("input", format!("{name}: {e}")))?;
        let oracle = truncation_limit_oracle(t, n).map_err(|e| input("input", format!("{name}: {e}")))?;
        let verdict = if symbolic == oracle { "ok" } else { "MISMATCH" };
        mismatches += usize::from(symbolic != oracle);
        writeln!(out, "{name} classify={symbolic} oracle={oracle} {verdict}").unwrap();
    }
    if mismatches > 0 {
        write!(out, "mismatch: {mismatches} of {}", trees.len()).unwrap();
        return Err(Exit(1, out));
    }
    writeln!(out, "agree: {} trees", trees.len()).unwrap();
    Ok(out)
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Decompose { graph, root } => decompose(&graph, root.as_deref()),
        Command::Tjoin { graph, tokens, emit } => tjoin_cmd(&graph, &tokens, emit),
        Command::VerifyJoin { graph, tokens, join } => verify_join_cmd(&graph, &tokens, &join),
        Command::Replay { graph, tokens, play } => replay_cmd(&graph, &tokens, &play),
        Command::Simplify { tree, graph, tokens, root } => {
            simplify_cmd(tree.as_deref(), graph.as_deref(), tokens.as_deref(), root.as_deref())
        }
        Command::Classify { tree } => {
            let class = classify(&load_tree(&tree)?).map_err(|e| input("input", e))?;
            Ok(format!("{class}\n"))
        }
        Command::DetectBadU { tree } => match detect_bad_u(&load_tree(&tree)?).map_err(|e| input("input", e))? {
            Some(w) => Ok(format!("witness: {w}\n")),
            None => Ok("none\n".into()),
        },
        Command::Truncate { tree, n, out } => {
            if n == 0 {
                return Err(input("usage", "--n must be positive"));
            }
            let tr = truncate(&load_tree(&tree)?, n).map_err(|e| input("input", e))?;
            let base = out.display().to_string();
            let (gpath, tpath) = (format!("{base}.graph"), format!("{base}.tokens"));
            let tokens = TokenFile { t_set: tr.t_set.clone(), omega: BTreeSet::new() };
            for (path, body) in [(&gpath, write_graph(&tr.graph)), (&tpath, write_tokens(&tr.graph, &tokens))] {
                std::fs::write(path, body).map_err(|e| input("io", format!("{path}: {e}")))?;
            }
            Ok(format!(
                "{gpath}\n{tpath}\n{} vertices, {} edges, |T| = {}\n",
                tr.graph.vertex_count(),
                tr.graph.edge_count(),
                tr.t_set.len()
            ))
        }
        Command::Oracle { tree, n, seed, random } => oracle_cmd(tree.as_deref(), n, seed, random),
    }
}

/// Runs one invocation (`args[0]` is the program name) and returns the exit
/// code with everything meant for standard output.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                    (2, format!("error: usage: {first}\n"))
                }
            };
        }
    };
    match dispatch(cli) {
        Ok(out) => (0, out),
        Err(Exit(code, msg)) => (code, if msg.ends_with('\n') { msg } else { msg + "\n" }),
    }
}
