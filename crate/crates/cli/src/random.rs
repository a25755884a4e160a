//! Random symbolic trees for `oracle --random`.

use rand::Rng;
use tjoin::symbolic::{resolve, Cardinal, RayEntry, RaySpec, Residue, SymNode};

fn tree(rng: &mut impl Rng, depth: usize, infinite: bool, next_id: &mut usize) -> SymNode {
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
            node.children.push(tree(rng, depth - 1, infinite, next_id));
        }
        if infinite && rng.gen_ratio(1, 4) {
            node.omega_children.push(tree(rng, depth - 1, false, next_id));
        }
    }
    if infinite && rng.gen_ratio(1, 6) {
        let mut period: Vec<RayEntry> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let nv = rng.gen_range(1..=2);
                RayEntry { nvertices: nv, tokens: rng.gen_range(0..=nv as u64) }
            })
            .collect();
        // the finite truncations of an even-sum ray keep a constant parity
        let sum: u64 = period.iter().map(|e| e.tokens).sum();
        if sum % 2 == 0 && sum > 0 {
            period.iter_mut().find(|e| e.tokens > 0).expect("nonzero sum").tokens -= 1;
        }
        node.ray = Some(RaySpec { period });
    }
    node
}

fn infinite_sources(node: &SymNode) -> usize {
    let own = usize::from(node.tokens == Cardinal::Omega)
        + node.ray.as_ref().map_or(0, |r| usize::from(r.period.iter().any(|e| e.tokens > 0)));
    let patterns = node
        .omega_children
        .iter()
        .filter(|p| resolve(p).is_ok_and(|r| r != Residue::Zero))
        .count();
    own + patterns + node.children.iter().map(infinite_sources).sum::<usize>()
}

/// Depth at most 3 and at most one infinite source, which is the range where
/// the truncation oracle is exact.
pub fn oracle_tree(rng: &mut impl Rng) -> SymNode {
    loop {
        let t = tree(rng, 3, true, &mut 0);
        if infinite_sources(&t) <= 1 {
            return t;
        }
    }
}
