#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tjoin::game::{GameState, TokenId};
use tjoin::multigraph::{components, Multigraph, VertexId};
use tjoin::symbolic::{Cardinal, RayEntry, SymNode};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Graph on `n` vertices `v0..` with edges `e0..` in the given order.
pub fn build(n: usize, edges: &[(usize, usize)]) -> Multigraph {
    let mut g = Multigraph::new();
    let vs: Vec<VertexId> = (0..n).map(|_| g.add_vertex()).collect();
    for &(a, b) in edges {
        g.add_edge(vs[a], vs[b]).unwrap();
    }
    g
}

pub fn all_subsets(g: &Multigraph) -> impl Iterator<Item = BTreeSet<VertexId>> + '_ {
    let vs: Vec<VertexId> = g.vertices().collect();
    (0u32..1 << vs.len()).map(move |mask| {
        vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect()
    })
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Smallest multiplicity vector over vertex orderings that list vertices
/// by decreasing degree. Isomorphic graphs get the same form.
fn canonical(n: usize, mult: &[u8]) -> Vec<u8> {
    let ps = pairs(n);
    let index: BTreeMap<(usize, usize), usize> = ps.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut degree = vec![0u32; n];
    for (k, &(a, b)) in ps.iter().enumerate() {
        degree[a] += mult[k] as u32;
        degree[b] += mult[k] as u32;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(degree[v]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if degree[c[0]] == degree[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best: Option<Vec<u8>> = None;
    let mut perm = Vec::with_capacity(n);
    fn rec(
        classes: &mut [Vec<usize>],
        i: usize,
        perm: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if i == classes.len() {
            visit(perm);
            return;
        }
        let k = classes[i].len();
        permute(&mut classes[i].clone(), k, &mut |p| {
            let before = perm.len();
            perm.extend_from_slice(p);
            rec(classes, i + 1, perm, visit);
            perm.truncate(before);
        });
    }
    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k {
            permute(items, k - 1, visit);
            let j = if k % 2 == 0 { i } else { 0 };
            items.swap(j, k - 1);
        }
    }
    rec(&mut classes, 0, &mut perm, &mut |p: &[usize]| {
        // p[new position] = old vertex
        let mut pos = vec![0; n];
        for (new, &old) in p.iter().enumerate() {
            pos[old] = new;
        }
        let mut form = vec![0u8; ps.len()];
        for (k, &(a, b)) in ps.iter().enumerate() {
            let (x, y) = (pos[a].min(pos[b]), pos[a].max(pos[b]));
            form[index[&(x, y)]] = mult[k];
        }
        if best.as_ref().is_none_or(|b| form < *b) {
            best = Some(form);
        }
    });
    best.unwrap()
}

fn connected(n: usize, mult: &[u8]) -> bool {
    let ps = pairs(n);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for (k, &(a, b)) in ps.iter().enumerate() {
            if mult[k] > 0 && (a == x || b == x) {
                let y = if a == x { b } else { a };
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Every connected loopless multigraph with at most `max_v` vertices and
/// `max_e` edges, parallel multiplicity at most `max_mult`, one per
/// isomorphism class.
pub fn connected_multigraphs(max_v: usize, max_e: usize, max_mult: u8) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_v {
        let ps = pairs(n);
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut mult = vec![0u8; ps.len()];
        fn rec(
            k: usize,
            left: usize,
            mult: &mut Vec<u8>,
            max_mult: u8,
            n: usize,
            seen: &mut HashSet<Vec<u8>>,
        ) {
            if k == mult.len() {
                if connected(n, mult) {
                    seen.insert(canonical(n, mult));
                }
                return;
            }
            for m in 0..=max_mult.min(left as u8) {
                mult[k] = m;
                rec(k + 1, left - m as usize, mult, max_mult, n, seen);
            }
            mult[k] = 0;
        }
        rec(0, max_e, &mut mult, max_mult, n, &mut seen);
        let mut forms: Vec<Vec<u8>> = seen.into_iter().collect();
        forms.sort();
        for form in forms {
            let edges: Vec<(usize, usize)> = ps
                .iter()
                .zip(&form)
                .flat_map(|(&p, &m)| std::iter::repeat_n(p, m as usize))
                .collect();
            out.push(build(n, &edges));
        }
    }
    out
}

/// Random connected multigraph: a random tree plus `extra` random edges.
pub fn random_connected(rng: &mut impl Rng, n: usize, extra: usize) -> Multigraph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    if n >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            edges.push((a, b));
        }
    }
    build(n, &edges)
}

/// Random 2-edge-connected multigraph on at most `max_v` vertices, grown
/// from a cycle by open ears, closed ears and chords.
pub fn random_2ec(rng: &mut impl Rng, max_v: usize) -> Multigraph {
    let start = rng.gen_range(1..=max_v.min(4));
    let mut n = start;
    let mut edges: Vec<(usize, usize)> = match start {
        1 => Vec::new(),
        2 => vec![(0, 1), (0, 1)],
        _ => (0..start).map(|i| (i, (i + 1) % start)).collect(),
    };
    let rounds = rng.gen_range(0..=4);
    for _ in 0..rounds {
        let room = max_v - n;
        let interior = if room == 0 { 0 } else { rng.gen_range(0..=room.min(3)) };
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if interior == 0 && a == b {
            continue;
        }
        let mut prev = a;
        for _ in 0..interior {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, b));
    }
    build(n, &edges)
}

/// Places `k` tokens uniformly (stacking allowed), numbered `t0..`.
pub fn random_placement(rng: &mut impl Rng, g: &Multigraph, k: usize) -> BTreeMap<TokenId, VertexId> {
    let vs: Vec<VertexId> = g.vertices().collect();
    (0..k).map(|i| (TokenId(i as u32), *vs.choose(rng).unwrap())).collect()
}

/// Disjoint union of 2-edge-connected pieces, each with at least one ω
/// vertex, and a few tokens: a state in normal form.
pub fn random_normal_form(rng: &mut impl Rng) -> GameState {
    let pieces = rng.gen_range(1..=2);
    let mut g = Multigraph::new();
    let mut omega = BTreeSet::new();
    for _ in 0..pieces {
        let h = random_2ec(rng, 7);
        let map: BTreeMap<VertexId, VertexId> = h.vertices().map(|v| (v, g.add_vertex())).collect();
        for (_, a, b) in h.edges() {
            g.add_edge(map[&a], map[&b]).unwrap();
        }
        let vs: Vec<VertexId> = map.values().copied().collect();
        let marks = rng.gen_range(1..=2.min(vs.len()));
        omega.extend(vs.choose_multiple(rng, marks).copied());
    }
    let k = rng.gen_range(1..=6);
    let placement = random_placement(rng, &g, k);
    GameState::from_placement(g, placement, omega).unwrap()
}

/// Connected ω-marked state with bridges; ω-free pieces hanging off it may
/// hold any number of tokens, and the whole graph has at least one ω vertex.
pub fn random_omega_connected(rng: &mut impl Rng) -> GameState {
    let n = rng.gen_range(2..=9);
    let extra = rng.gen_range(0..=4);
    let g = random_connected(rng, n, extra);
    let vs: Vec<VertexId> = g.vertices().collect();
    let marks = rng.gen_range(1..=2);
    let omega: BTreeSet<VertexId> = vs.choose_multiple(rng, marks).copied().collect();
    let k = rng.gen_range(0..=7);
    let placement = random_placement(rng, &g, k);
    GameState::from_placement(g, placement, omega).unwrap()
}

pub fn is_component_sound(state: &GameState) -> bool {
    components(state.graph()).iter().all(|c| {
        tjoin::multigraph::is_two_edge_connected(&state.graph().induced_subgraph(c))
            && c.iter().any(|v| state.omega().contains(v))
    })
}

/// Random symbolic tree. Patterns and rays appear only when `infinite`.
/// Ray periods always carry an odd number of tokens or none.
pub fn random_tree(rng: &mut impl Rng, depth: usize, infinite: bool, next_id: &mut usize) -> SymNode {
    let id = format!("n{next_id}");
    *next_id += 1;
    let nvertices = rng.gen_range(1..=3);
    let tokens = if infinite && rng.gen_ratio(1, 12) {
        Cardinal::Omega
    } else {
        Cardinal::Fin(rng.gen_range(0..=nvertices as u64))
    };
    let mut node = SymNode::leaf(&id, nvertices, tokens);
    if depth > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            node.children.push(random_tree(rng, depth - 1, infinite, next_id));
        }
        if infinite && rng.gen_ratio(1, 4) {
            node.omega_children.push(random_tree(rng, depth - 1, false, next_id));
        }
    }
    if infinite && rng.gen_ratio(1, 6) {
        let len = rng.gen_range(1..=3);
        let mut period: Vec<RayEntry> = (0..len)
            .map(|_| {
                let nv = rng.gen_range(1..=2);
                RayEntry { nvertices: nv, tokens: rng.gen_range(0..=nv as u64) }
            })
            .collect();
        let sum: u64 = period.iter().map(|e| e.tokens).sum();
        if sum % 2 == 0 && sum > 0 {
            let e = period.iter_mut().find(|e| e.tokens > 0).unwrap();
            e.tokens -= 1;
        }
        node.ray = Some(tjoin::symbolic::RaySpec { period });
    }
    node
}

/// ω counts, non-vanishing patterns and token-carrying rays. The truncation
/// oracle only sees an A tree as such when there is at most one: two of
/// them feeding one non-root component make its parity constant.
pub fn infinite_sources(node: &SymNode) -> usize {
    let own = usize::from(node.tokens == Cardinal::Omega)
        + node.ray.as_ref().map_or(0, |r| usize::from(r.period.iter().any(|e| e.tokens > 0)));
    let patterns = node
        .omega_children
        .iter()
        .filter(|p| tjoin::symbolic::resolve(p).unwrap() != tjoin::symbolic::Residue::Zero)
        .count();
    own + patterns + node.children.iter().map(infinite_sources).sum::<usize>()
}

/// A random tree with at most one infinite source.
pub fn random_oracle_tree(rng: &mut impl Rng) -> SymNode {
    loop {
        let t = random_tree(rng, 3, true, &mut 0);
        if infinite_sources(&t) <= 1 {
            return t;
        }
    }
}

/// Largest number of components of `G - U` with at least two vertices, over
/// all `U` for which every component of `G - U` has exactly one edge to `U`.
pub fn best_bad_u(g: &Multigraph) -> usize {
    let vs: Vec<VertexId> = g.vertices().collect();
    let idx = |v: VertexId| vs.binary_search(&v).unwrap();
    let edges: Vec<(usize, usize)> = g.edges().map(|(_, a, b)| (idx(a), idx(b))).collect();
    let n = vs.len();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut best = 0;
    let (mut parent, mut size, mut attached) = (vec![0; n], vec![0; n], vec![0; n]);
    for u in 1u64..1 << n {
        let inside = |v: usize| u >> v & 1 == 1;
        parent.iter_mut().enumerate().for_each(|(i, p)| *p = i);
        size.fill(0);
        attached.fill(0);
        for &(a, b) in &edges {
            if !inside(a) && !inside(b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        for v in (0..n).filter(|&v| !inside(v)) {
            let r = find(&mut parent, v);
            size[r] += 1;
        }
        for &(a, b) in &edges {
            if inside(a) != inside(b) {
                let r = find(&mut parent, if inside(a) { b } else { a });
                attached[r] += 1;
            }
        }
        if (0..n).all(|r| size[r] == 0 || attached[r] == 1) {
            best = best.max((0..n).filter(|&r| size[r] >= 2).count());
        }
    }
    best
}
