//! Adjacency relations of tile sets, the simple-regional test and the
//! cycle-breaking decomposition of regional tile sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::local::enumerate_local;
use crate::picture::{in_local_language, is_regional_picture, Cell, Tile, TileSet};

/// Size bound used to confirm a decomposition by enumeration.
pub const DECOMPOSITION_CHECK_BOUND: (usize, usize) = (4, 4);

/// Cap on distinct tile sets visited by the decomposition recursion.
pub const DECOMPOSITION_NODE_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyRelations<T> {
    pub h: BTreeSet<(T, T)>,
    pub v: BTreeSet<(T, T)>,
    /// `H ∪ V`
    pub a: BTreeSet<(T, T)>,
    /// `H⁻¹ ∪ V`
    pub a_prime: BTreeSet<(T, T)>,
}

fn tile_h<T: Cell>(t: &Tile<T>) -> impl Iterator<Item = (T, T)> + '_ {
    (1..=2).map(|i| (t.get(i, 1), t.get(i, 2))).filter(|(x, y)| x != y)
}

fn tile_v<T: Cell>(t: &Tile<T>) -> impl Iterator<Item = (T, T)> + '_ {
    (1..=2).map(|j| (t.get(1, j), t.get(2, j))).filter(|(x, y)| x != y)
}

pub fn adjacency_relations<T: Cell>(theta: &TileSet<T>) -> AdjacencyRelations<T> {
    let h: BTreeSet<(T, T)> = theta.iter().flat_map(tile_h).collect();
    let v: BTreeSet<(T, T)> = theta.iter().flat_map(tile_v).collect();
    let a = h.union(&v).copied().collect();
    let a_prime = h.iter().map(|&(x, y)| (y, x)).chain(v.iter().copied()).collect();
    AdjacencyRelations { h, v, a, a_prime }
}

/// Edges of some directed cycle among the pairs that avoid `#`.
pub fn find_cycle<T: Cell>(rel: &BTreeSet<(T, T)>) -> Option<Vec<(T, T)>> {
    let mut succ: BTreeMap<T, Vec<T>> = BTreeMap::new();
    for &(x, y) in rel {
        if !x.is_border() && !y.is_border() {
            succ.entry(x).or_default().push(y);
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color: BTreeMap<T, u8> = BTreeMap::new();
    let nodes: Vec<T> = succ.keys().copied().collect();
    for root in nodes {
        if color.get(&root).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(T, usize)> = vec![(root, 0)];
        color.insert(root, 1);
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            let out = succ.get(&node).map(Vec::as_slice).unwrap_or(&[]);
            if *next < out.len() {
                let y = out[*next];
                *next += 1;
                match color.get(&y).copied().unwrap_or(0) {
                    0 => {
                        color.insert(y, 1);
                        stack.push((y, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|&(n, _)| n == y).unwrap();
                        let path: Vec<T> = stack[start..].iter().map(|&(n, _)| n).collect();
                        let mut edges: Vec<(T, T)> = path.windows(2).map(|w| (w[0], w[1])).collect();
                        edges.push((node, y));
                        return Some(edges);
                    }
                    _ => {}
                }
            } else {
                color.insert(node, 2);
                stack.pop();
            }
        }
    }
    None
}

pub fn is_simple_regional<T: Cell>(theta: &TileSet<T>) -> bool {
    if theta.iter().any(Tile::is_concave) {
        return false;
    }
    let rel = adjacency_relations(theta);
    find_cycle(&rel.a).is_none() && find_cycle(&rel.a_prime).is_none()
}

/// Tiles of `theta` witnessing some edge of a cycle in either incidence
/// graph, or `None` when both graphs are acyclic.
fn cycle_witnesses<T: Cell>(theta: &TileSet<T>) -> Option<Vec<Tile<T>>> {
    let rel = adjacency_relations(theta);
    let (edges, primed) = match find_cycle(&rel.a) {
        Some(c) => (c, false),
        None => (find_cycle(&rel.a_prime)?, true),
    };
    let edges: BTreeSet<(T, T)> = edges.into_iter().collect();
    let witnesses = theta
        .iter()
        .filter(|t| {
            tile_v(t).any(|e| edges.contains(&e))
                || tile_h(t).any(|(x, y)| edges.contains(&if primed { (y, x) } else { (x, y) }))
        })
        .copied()
        .collect();
    Some(witnesses)
}

/// Simple regional tile sets whose local languages cover `LOC(theta)`.
///
/// Concave tiles are dropped first since no regional picture contains
/// one. Then every cycle is broken by branching on the removal of each
/// tile witnessing it. The result is accepted only if every picture of
/// `LOC(theta)` up to `DECOMPOSITION_CHECK_BOUND` is regional and lies in
/// some part; otherwise `None`, meaning `theta` is not regional.
pub fn decompose_regional<T: Cell>(theta: &TileSet<T>) -> Option<Vec<TileSet<T>>> {
    let (rows, cols) = DECOMPOSITION_CHECK_BOUND;
    decompose_regional_within(theta, rows, cols)
}

pub fn decompose_regional_within<T: Cell>(theta: &TileSet<T>, rows: usize, cols: usize) -> Option<Vec<TileSet<T>>> {
    if is_simple_regional(theta) {
        return Some(vec![theta.clone()]);
    }
    let language: Vec<_> = (1..=rows).flat_map(|r| (1..=cols).map(move |c| (r, c))).flat_map(|(r, c)| enumerate_local(theta, r, c)).collect();
    if !language.iter().all(is_regional_picture) {
        return None;
    }
    let start: TileSet<T> = theta.iter().filter(|t| !t.is_concave()).copied().collect();
    let mut seen = BTreeSet::new();
    let mut leaves = BTreeSet::new();
    let mut work = vec![start];
    while let Some(set) = work.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        if seen.len() > DECOMPOSITION_NODE_CAP {
            return None;
        }
        match cycle_witnesses(&set) {
            None => {
                leaves.insert(set);
            }
            Some(ws) => work.extend(ws.iter().map(|t| set.without(t))),
        }
    }
    let parts: Vec<TileSet<T>> = leaves.into_iter().collect();
    let covered = language.iter().all(|p| parts.iter().any(|part| in_local_language(p, part)));
    covered.then_some(parts)
}
