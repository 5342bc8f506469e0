//! Generalized CKY recognition for regional tile grammars.
//!
//! Cells of the recognition matrix are filled by increasing subdomain
//! size. A variable-size rule `A -> ω` applies at `d` when every
//! nonterminal of `ω` can be given a subdomain of `d` it derives such that
//! all adjacency and border constraints read off `ω` hold.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::grammar::{chain_shapes, eliminate_chain_rules, homogeneous_shapes, is_chain_rule, ChainShapes, validate_grammar, GrammarError, Rule, TileGrammar, ValidationReport};
use crate::picture::{in_local_language, Cell, Picture, Slot, Subdomain, Sym, TileSet};
use crate::tileset::adjacency_relations;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("grammar is not a regional tile grammar:\n{0}")]
    NotRegional(ValidationReport),
}

/// `𝔐`: one nonterminal bit set per subdomain of an `m x n` picture.
#[derive(Clone, PartialEq, Eq)]
pub struct RecognitionMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
    names: Vec<String>,
}

impl RecognitionMatrix {
    fn new(rows: usize, cols: usize, names: Vec<String>) -> Self {
        let words = names.len().div_ceil(64).max(1);
        RecognitionMatrix { rows, cols, words, bits: vec![0; rows * cols * rows * cols * words], names }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    fn base(&self, top: usize, left: usize, bottom: usize, right: usize) -> usize {
        let (m, n) = (self.rows, self.cols);
        (((top - 1) * n + (left - 1)) * m + (bottom - 1)) * n * self.words + (right - 1) * self.words
    }

    #[inline]
    fn has(&self, top: usize, left: usize, bottom: usize, right: usize, a: usize) -> bool {
        self.bits[self.base(top, left, bottom, right) + a / 64] >> (a % 64) & 1 == 1
    }

    fn insert(&mut self, d: &Subdomain, a: usize) {
        let k = self.base(d.top, d.left, d.bottom, d.right) + a / 64;
        self.bits[k] |= 1 << (a % 64);
    }

    pub fn contains(&self, d: &Subdomain, a: usize) -> bool {
        self.has(d.top, d.left, d.bottom, d.right, a)
    }

    /// Nonterminal indices in `𝔐(d)`, ascending.
    pub fn entry(&self, d: &Subdomain) -> Vec<usize> {
        (0..self.names.len()).filter(|&a| self.contains(d, a)).collect()
    }

    pub fn entry_names(&self, d: &Subdomain) -> Vec<&str> {
        self.entry(d).into_iter().map(|a| self.names[a].as_str()).collect()
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.names
    }

    pub fn contains_name(&self, d: &Subdomain, name: &str) -> bool {
        self.names.iter().position(|n| n == name).is_some_and(|a| self.contains(d, a))
    }
}

impl fmt::Debug for RecognitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_matrix(self))
    }
}

/// Non-empty cells, one per line, in lexicographic subdomain order.
pub fn render_matrix(m: &RecognitionMatrix) -> String {
    let mut out = String::new();
    for top in 1..=m.rows {
        for left in 1..=m.cols {
            for bottom in top..=m.rows {
                for right in left..=m.cols {
                    let d = Subdomain { top, left, bottom, right };
                    let e = m.entry_names(&d);
                    if !e.is_empty() {
                        let _ = writeln!(out, "{d} {{{}}}", e.join(", "));
                    }
                }
            }
        }
    }
    out
}

/// `𝔇(d, 𝔐)`: for each relevant nonterminal the subdomains inside `d`
/// whose matrix cell holds it, or the sentinel alone when there are none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdomainsVector {
    pub host: Subdomain,
    pub lists: BTreeMap<usize, Vec<Slot>>,
}

pub fn compute_subdomains_vector(m: &RecognitionMatrix, d: &Subdomain, relevant: &[usize]) -> SubdomainsVector {
    subdomains_vector_by(d, relevant, |s, a| m.contains(s, a))
}

fn subdomains_vector_by(d: &Subdomain, relevant: &[usize], holds: impl Fn(&Subdomain, usize) -> bool) -> SubdomainsVector {
    let mut lists: BTreeMap<usize, Vec<Slot>> = relevant.iter().map(|&a| (a, Vec::new())).collect();
    for top in d.top..=d.bottom {
        for left in d.left..=d.right {
            for bottom in top..=d.bottom {
                for right in left..=d.right {
                    let s = Subdomain { top, left, bottom, right };
                    for (&a, list) in lists.iter_mut() {
                        if holds(&s, a) {
                            list.push(Slot::At(s));
                        }
                    }
                }
            }
        }
    }
    for list in lists.values_mut() {
        if list.is_empty() {
            list.push(Slot::Sentinel);
        }
    }
    SubdomainsVector { host: *d, lists }
}

/// Sufficient test for rigidity from the neighbour sets of each side:
/// a side touching `#` touches nothing else, each adjacent pair is the
/// only neighbour on one of its two sides, and starting from the unique
/// top-left nonterminal, forced neighbours reach every nonterminal.
fn is_rigid(vars: &[usize], h: &BTreeSet<(Sym, Sym)>, v: &BTreeSet<(Sym, Sym)>) -> bool {
    let side = |rel: &BTreeSet<(Sym, Sym)>, x: Sym, after: bool| -> BTreeSet<Sym> {
        rel.iter().filter(|&&(a, b)| a != b && if after { a == x } else { b == x }).map(|&(a, b)| if after { b } else { a }).collect()
    };
    let border = BTreeSet::from([<Sym as Cell>::BORDER]);
    let syms: Vec<Sym> = vars.iter().map(|&a| Sym::new(a)).collect();
    let sides: Vec<[BTreeSet<Sym>; 4]> = syms.iter().map(|&x| [side(h, x, false), side(h, x, true), side(v, x, false), side(v, x, true)]).collect();
    if sides.iter().flatten().any(|n| n.is_empty() || (n.contains(&<Sym as Cell>::BORDER) && n.len() > 1)) {
        return false;
    }
    let at = |x: Sym| &sides[syms.iter().position(|&y| y == x).unwrap()];
    for (rel, (out, inn)) in [(h, (1, 0)), (v, (3, 2))] {
        for &(a, b) in rel.iter().filter(|(a, b)| a != b && !a.is_border() && !b.is_border()) {
            if at(a)[out].len() > 1 && at(b)[inn].len() > 1 {
                return false;
            }
        }
    }
    let corners: Vec<Sym> = syms.iter().copied().filter(|&x| at(x)[0] == border && at(x)[2] == border).collect();
    let [start] = corners[..] else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for n in at(x) {
            if let [y] = n.iter().copied().collect::<Vec<_>>()[..] {
                if !y.is_border() && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen.len() == syms.len()
}

/// Constraints of a variable-size body, indexed by position in `vars`.
#[derive(Debug, Clone)]
pub struct CompiledBody {
    /// Nonterminals of the body, ascending.
    pub vars: Vec<usize>,
    h: Vec<(usize, usize)>,
    v: Vec<(usize, usize)>,
    pin_left: Vec<bool>,
    pin_right: Vec<bool>,
    pin_top: Vec<bool>,
    pin_bottom: Vec<bool>,
    /// Search order for the propagating solver.
    order: Vec<usize>,
    omega: TileSet<Sym>,
    /// Every member of `LOC(omega)` uses every nonterminal, meets every
    /// pinned border and realizes every `H`/`V` pair. Otherwise the
    /// constraints above are not necessary and search falls back to tiling.
    rigid: bool,
}

impl CompiledBody {
    pub fn new(omega: &TileSet<Sym>) -> Self {
        let vars: Vec<usize> = omega.alphabet().into_iter().map(Sym::index).collect();
        let pos: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let k = vars.len();
        let rel = adjacency_relations(omega);
        let (mut pin_left, mut pin_right, mut pin_top, mut pin_bottom) = (vec![false; k], vec![false; k], vec![false; k], vec![false; k]);
        let mut h = Vec::new();
        let mut v = Vec::new();
        for &(x, y) in &rel.h {
            match (x.is_border(), y.is_border()) {
                (true, false) => pin_left[pos[&y.index()]] = true,
                (false, true) => pin_right[pos[&x.index()]] = true,
                (false, false) => h.push((pos[&x.index()], pos[&y.index()])),
                _ => {}
            }
        }
        for &(x, y) in &rel.v {
            match (x.is_border(), y.is_border()) {
                (true, false) => pin_top[pos[&y.index()]] = true,
                (false, true) => pin_bottom[pos[&x.index()]] = true,
                (false, false) => v.push((pos[&x.index()], pos[&y.index()])),
                _ => {}
            }
        }

        // Greedy order: most pinned first, then the variable most tied to those already placed.
        let pins = |x: usize| [pin_left[x], pin_right[x], pin_top[x], pin_bottom[x]].iter().filter(|&&b| b).count();
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        while order.len() < k {
            let score = |x: usize| {
                let ties = h.iter().chain(&v).filter(|&&(a, b)| (a == x && placed[b]) || (b == x && placed[a])).count();
                (2 * ties + pins(x), std::cmp::Reverse(x))
            };
            let next = (0..k).filter(|&x| !placed[x]).max_by_key(|&x| score(x)).unwrap();
            placed[next] = true;
            order.push(next);
        }
        let rigid = is_rigid(&vars, &rel.h, &rel.v);
        CompiledBody { vars, h, v, pin_left, pin_right, pin_top, pin_bottom, order, omega: omega.clone(), rigid }
    }

    /// Propagating backtracking search. `holds(d, a)` tells whether
    /// nonterminal `a` is recorded at subdomain `d`.
    /// Blocks of the first witness found, paired with their nonterminals.
    pub fn solve<F>(&self, d: &Subdomain, holds: F) -> Option<Vec<(usize, Subdomain)>>
    where
        F: Fn(usize, usize, usize, usize, usize) -> bool,
    {
        if self.vars.is_empty() {
            return None;
        }
        if !self.rigid {
            return self.tile(d, &holds);
        }
        let mut assign: Vec<Option<Subdomain>> = vec![None; self.vars.len()];
        if self.search(0, d, &holds, &mut assign) {
            Some(self.vars.iter().copied().zip(assign.into_iter().map(Option::unwrap)).collect())
        } else {
            None
        }
    }

    fn search<F>(&self, depth: usize, d: &Subdomain, holds: &F, assign: &mut Vec<Option<Subdomain>>) -> bool
    where
        F: Fn(usize, usize, usize, usize, usize) -> bool,
    {
        if depth == self.order.len() {
            let w: Vec<Subdomain> = assign.iter().map(|s| s.unwrap()).collect();
            return self.fits(d, &w);
        }
        let x = self.order[depth];
        // Inclusive ranges for top, left, bottom, right.
        let mut r = [(d.top as i64, d.bottom as i64), (d.left as i64, d.right as i64), (d.top as i64, d.bottom as i64), (d.left as i64, d.right as i64)];
        let (top, left, bottom, right) = (0, 1, 2, 3);
        let eq = |r: &mut [(i64, i64); 4], c: usize, val: i64| {
            r[c].0 = r[c].0.max(val);
            r[c].1 = r[c].1.min(val);
        };
        let ge = |r: &mut [(i64, i64); 4], c: usize, val: i64| r[c].0 = r[c].0.max(val);
        let le = |r: &mut [(i64, i64); 4], c: usize, val: i64| r[c].1 = r[c].1.min(val);
        if self.pin_left[x] {
            eq(&mut r, left, d.left as i64);
        }
        if self.pin_right[x] {
            eq(&mut r, right, d.right as i64);
        }
        if self.pin_top[x] {
            eq(&mut r, top, d.top as i64);
        }
        if self.pin_bottom[x] {
            eq(&mut r, bottom, d.bottom as i64);
        }
        let q = |s: &Subdomain| (s.top as i64, s.left as i64, s.bottom as i64, s.right as i64);
        for &(a, b) in &self.h {
            if a == x {
                if let Some(sb) = &assign[b] {
                    let (bt, bl, bb, _) = q(sb);
                    eq(&mut r, right, bl - 1);
                    ge(&mut r, bottom, bt);
                    le(&mut r, top, bb);
                }
            } else if b == x {
                if let Some(sa) = &assign[a] {
                    let (at, _, ab, ar) = q(sa);
                    eq(&mut r, left, ar + 1);
                    ge(&mut r, bottom, at);
                    le(&mut r, top, ab);
                }
            }
        }
        for &(a, b) in &self.v {
            if a == x {
                if let Some(sb) = &assign[b] {
                    let (bt, bl, _, br) = q(sb);
                    eq(&mut r, bottom, bt - 1);
                    ge(&mut r, right, bl);
                    le(&mut r, left, br);
                }
            } else if b == x {
                if let Some(sa) = &assign[a] {
                    let (_, al, ab, ar) = q(sa);
                    eq(&mut r, top, ab + 1);
                    ge(&mut r, right, al);
                    le(&mut r, left, ar);
                }
            }
        }
        if r.iter().any(|&(lo, hi)| lo > hi) {
            return false;
        }
        let a = self.vars[x];
        for t in r[top].0..=r[top].1 {
            for l in r[left].0..=r[left].1 {
                for b in r[bottom].0.max(t)..=r[bottom].1 {
                    for rr in r[right].0.max(l)..=r[right].1 {
                        let (t, l, b, rr) = (t as usize, l as usize, b as usize, rr as usize);
                        if holds(t, l, b, rr, a) {
                            assign[x] = Some(Subdomain { top: t, left: l, bottom: b, right: rr });
                            if self.search(depth + 1, d, holds, assign) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        assign[x] = None;
        false
    }

    /// Exact search for bodies that are not rigid: covers `d` block by block
    /// from the first free cell in row-major order, each nonterminal at most
    /// once.
    fn tile<F>(&self, d: &Subdomain, holds: &F) -> Option<Vec<(usize, Subdomain)>>
    where
        F: Fn(usize, usize, usize, usize, usize) -> bool,
    {
        let mut blocks: Vec<Option<Subdomain>> = vec![None; self.vars.len()];
        let mut free = vec![true; d.area()];
        self.tile_from(d, holds, &mut blocks, &mut free).then(|| self.vars.iter().zip(blocks).filter_map(|(&a, b)| Some((a, b?))).collect())
    }

    fn tile_from<F>(&self, d: &Subdomain, holds: &F, blocks: &mut Vec<Option<Subdomain>>, free: &mut Vec<bool>) -> bool
    where
        F: Fn(usize, usize, usize, usize, usize) -> bool,
    {
        let cols = d.cols();
        let Some(k) = free.iter().position(|&f| f) else {
            let used: Vec<(usize, Subdomain)> = blocks.iter().enumerate().filter_map(|(x, b)| b.map(|b| (x, b))).collect();
            return self.fits_labelled(d, &used);
        };
        let (i, j) = (d.top + k / cols, d.left + k % cols);
        let mut right_max = d.right;
        for x in 0..self.vars.len() {
            if blocks[x].is_some() {
                continue;
            }
            for b in i..=d.bottom {
                for r in j..=right_max {
                    if !free[(b - d.top) * cols + r - d.left] {
                        // Every later rectangle would overlap too.
                        right_max = right_max.min(r - 1);
                        break;
                    }
                    if !holds(i, j, b, r, self.vars[x]) {
                        continue;
                    }
                    let s = Subdomain { top: i, left: j, bottom: b, right: r };
                    self.mark(d, &s, free, false);
                    blocks[x] = Some(s);
                    if self.tile_from(d, holds, blocks, free) {
                        return true;
                    }
                    blocks[x] = None;
                    self.mark(d, &s, free, true);
                }
            }
            right_max = d.right;
        }
        false
    }

    fn mark(&self, d: &Subdomain, s: &Subdomain, free: &mut [bool], to: bool) {
        for i in s.top..=s.bottom {
            for j in s.left..=s.right {
                free[(i - d.top) * d.cols() + j - d.left] = to;
            }
        }
    }

    fn fits(&self, d: &Subdomain, w: &[Subdomain]) -> bool {
        let used: Vec<(usize, Subdomain)> = w.iter().copied().enumerate().collect();
        witness_covers(d, w) && self.fits_labelled(d, &used)
    }

    /// The blocks tile `d` and the picture they label is in `LOC(omega)`.
    /// Adjacency alone misses regions a body cannot stretch.
    fn fits_labelled(&self, d: &Subdomain, used: &[(usize, Subdomain)]) -> bool {
        let q = Picture::from_fn(d.rows(), d.cols(), |i, j| {
            let &(x, _) = used.iter().find(|(_, s)| s.contains_pixel(i + d.top - 1, j + d.left - 1)).unwrap();
            Sym::new(self.vars[x])
        });
        in_local_language(&q, &self.omega)
    }

    /// Lexicographic scan of `D_1 × ... × D_k` in variable order. Unary
    /// border pins filter each list first and a prefix violating a
    /// constraint is skipped together with all its extensions; neither
    /// changes which tuple is found first.
    pub fn scan(&self, dv: &SubdomainsVector) -> Option<Vec<(usize, Subdomain)>> {
        let d = dv.host;
        if !self.rigid {
            let sets: BTreeMap<usize, HashSet<Subdomain>> =
                dv.lists.iter().map(|(&a, l)| (a, l.iter().filter_map(Slot::subdomain).collect())).collect();
            return self.tile(&d, &|t, l, b, r, a| sets.get(&a).is_some_and(|s| s.contains(&Subdomain { top: t, left: l, bottom: b, right: r })));
        }
        let quad = |s: &Slot| {
            let (a, b, c, e) = s.quad();
            (a as i64, b as i64, c as i64, e as i64)
        };
        let (dt, dl, db, dr) = (d.top as i64, d.left as i64, d.bottom as i64, d.right as i64);
        let lists: Vec<Vec<(i64, i64, i64, i64)>> = self
            .vars
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let empty = Vec::new();
                dv.lists
                    .get(a)
                    .unwrap_or(&empty)
                    .iter()
                    .map(quad)
                    .filter(|&(t, l, b, r)| {
                        (!self.pin_left[x] || l == dl)
                            && (!self.pin_right[x] || r == dr)
                            && (!self.pin_top[x] || t == dt)
                            && (!self.pin_bottom[x] || b == db)
                    })
                    .collect()
            })
            .collect();
        if self.vars.is_empty() || lists.iter().any(Vec::is_empty) {
            return None;
        }
        let k = self.vars.len();
        let mut idx = vec![0usize; k];
        let mut depth = 0;
        loop {
            let pick = |x: usize, idx: &[usize]| lists[x][idx[x]];
            let ok = self.h.iter().filter(|&&(a, b)| a.max(b) == depth).all(|&(a, b)| {
                let (at, _, ab, ar) = pick(a, &idx);
                let (bt, bl, bb, _) = pick(b, &idx);
                bl == ar + 1 && bb >= at && ab >= bt
            }) && self.v.iter().filter(|&&(a, b)| a.max(b) == depth).all(|&(a, b)| {
                let (_, al, ab, ar) = pick(a, &idx);
                let (bt, bl, _, br) = pick(b, &idx);
                bt == ab + 1 && br >= al && ar >= bl
            });
            if ok {
                if depth + 1 < k {
                    depth += 1;
                    idx[depth] = 0;
                    continue;
                }
                let w: Vec<Subdomain> = (0..k)
                    .map(|x| {
                        let (t, l, b, r) = pick(x, &idx);
                        Subdomain { top: t as usize, left: l as usize, bottom: b as usize, right: r as usize }
                    })
                    .collect();
                if self.fits(&d, &w) {
                    return Some(self.vars.iter().copied().zip(w).collect());
                }
            }
            // Advance the deepest index, carrying upward.
            loop {
                idx[depth] += 1;
                if idx[depth] < lists[depth].len() {
                    break;
                }
                if depth == 0 {
                    return None;
                }
                depth -= 1;
            }
        }
    }
}

/// The figure-level CheckRule over a subdomains vector, by propagating search.
pub fn check_rule(dv: &SubdomainsVector, omega: &TileSet<Sym>, d: &Subdomain) -> Option<Vec<(usize, Subdomain)>> {
    let body = CompiledBody::new(omega);
    let sets: BTreeMap<usize, HashSet<Subdomain>> =
        dv.lists.iter().map(|(&a, l)| (a, l.iter().filter_map(Slot::subdomain).collect())).collect();
    body.solve(d, |t, l, b, r, a| sets.get(&a).is_some_and(|s| s.contains(&Subdomain { top: t, left: l, bottom: b, right: r })))
}

/// CheckRule by exhaustive lexicographic enumeration of the product.
pub fn check_rule_exhaustive(dv: &SubdomainsVector, omega: &TileSet<Sym>, d: &Subdomain) -> Option<Vec<(usize, Subdomain)>> {
    assert_eq!(dv.host, *d, "subdomains vector computed for another host");
    CompiledBody::new(omega).scan(dv)
}

/// Witness blocks are pairwise disjoint and cover `d` exactly.
pub fn witness_covers(d: &Subdomain, witness: &[Subdomain]) -> bool {
    let area: usize = witness.iter().map(Subdomain::area).sum();
    area == d.area()
        && witness.iter().all(|w| d.contains(w))
        && witness.iter().enumerate().all(|(i, a)| witness[i + 1..].iter().all(|b| !a.intersects(b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    #[default]
    Backtrack,
    Exhaustive,
    /// Runs both on every (rule, subdomain) pair and records disagreements.
    CrossCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckStats {
    pub pairs: usize,
    pub disagreements: usize,
}

/// A derivation step: `nonterminal` rewrites `subdomain` by `rule`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationNode {
    pub nonterminal: String,
    pub subdomain: Subdomain,
    /// Index into the validated grammar's rules.
    pub rule: usize,
    pub terminal: Option<char>,
    pub children: Vec<DerivationNode>,
}

impl DerivationNode {
    /// Indented tree, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let _ = write!(out, "{:indent$}{} {}", "", self.nonterminal, self.subdomain, indent = 2 * depth);
        match self.terminal {
            Some(t) => {
                let _ = writeln!(out, " -> '{t}'");
            }
            None => {
                let _ = writeln!(out);
            }
        }
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }

    /// The partition produced by this node's rule, drawn as a picture of
    /// block labels with `|` and `-` marking block boundaries.
    pub fn render_partition(&self) -> String {
        let d = self.subdomain;
        let label = |i: usize, j: usize| -> (usize, &str) {
            self.children
                .iter()
                .enumerate()
                .find(|(_, c)| c.subdomain.contains_pixel(i, j))
                .map(|(k, c)| (k, c.nonterminal.as_str()))
                .unwrap_or((usize::MAX, self.nonterminal.as_str()))
        };
        let width = self.children.iter().map(|c| c.nonterminal.len()).max().unwrap_or(1).max(self.nonterminal.len());
        let mut out = String::new();
        for i in d.top..=d.bottom {
            if i > d.top {
                for j in d.left..=d.right {
                    let cut = label(i, j).0 != label(i - 1, j).0;
                    let _ = write!(out, "{}", if cut { "-" } else { " " }.repeat(width + 1));
                }
                out.push('\n');
            }
            for j in d.left..=d.right {
                let sep = if j > d.left && label(i, j).0 != label(i, j - 1).0 { '|' } else { ' ' };
                let _ = write!(out, "{sep}{:<width$}", label(i, j).1);
            }
            out.push('\n');
        }
        out
    }
}

/// A validated, chain-free grammar prepared for recognition.
#[derive(Debug, Clone)]
pub struct Parser {
    /// After decomposition; chain rules still present.
    validated: TileGrammar,
    normalized: TileGrammar,
    bodies: Vec<(usize, CompiledBody)>,
    fixed: BTreeMap<char, Vec<usize>>,
    /// Chain rules kept by elimination: `(A, B, shapes)`.
    residual: Vec<(usize, usize, ChainShapes)>,
    /// Validated-grammar nonterminal to normalized index.
    to_normalized: Vec<Option<usize>>,
    pub report: ValidationReport,
    pub chains_eliminated: bool,
}

impl Parser {
    pub fn new(g: &TileGrammar) -> Result<Parser, ParseError> {
        let (validated, report) = validate_grammar(g)?;
        if !report.rtg_valid {
            return Err(ParseError::NotRegional(report));
        }
        let chains_eliminated = validated.has_chain_rules();
        let normalized = eliminate_chain_rules(&validated)?;
        let mut bodies = Vec::new();
        let mut fixed: BTreeMap<char, Vec<usize>> = BTreeMap::new();
        let mut residual = Vec::new();
        for r in &normalized.rules {
            match r {
                Rule::Fixed { lhs, rhs } => fixed.entry(*rhs).or_default().push(*lhs),
                Rule::Variable { lhs, .. } if is_chain_rule(r) => {
                    residual.push((*lhs, r.body_nonterminals()[0], chain_shapes(r).unwrap()));
                }
                Rule::Variable { lhs, body } => bodies.push((*lhs, CompiledBody::new(body))),
            }
        }
        let to_normalized = validated.nonterminals.iter().map(|n| normalized.nonterminal(n)).collect();
        Ok(Parser { validated, normalized, bodies, fixed, residual, to_normalized, report, chains_eliminated })
    }

    pub fn grammar(&self) -> &TileGrammar {
        &self.validated
    }

    pub fn normalized(&self) -> &TileGrammar {
        &self.normalized
    }

    pub fn recognize(&self, p: &Picture<char>) -> RecognitionMatrix {
        self.recognize_with(p, CheckMode::Backtrack, &mut CheckStats::default())
    }

    pub fn accepts(&self, p: &Picture<char>) -> bool {
        let m = self.recognize(p);
        m.contains(&p.dom(), self.normalized.start)
    }

    pub fn recognize_with(&self, p: &Picture<char>, mode: CheckMode, stats: &mut CheckStats) -> RecognitionMatrix {
        let (m, n) = p.size();
        let mut mat = RecognitionMatrix::new(m, n, self.normalized.nonterminals.clone());
        let relevant: Vec<usize> = (0..self.normalized.nonterminals.len()).collect();
        for v in 1..=m {
            for h in 1..=n {
                for i in 1..=m - v + 1 {
                    for j in 1..=n - h + 1 {
                        let d = Subdomain { top: i, left: j, bottom: i + v - 1, right: j + h - 1 };
                        if v == 1 && h == 1 {
                            for &a in self.fixed.get(p.get(i, j)).into_iter().flatten() {
                                mat.insert(&d, a);
                            }
                            self.close_residual(&mut mat, &d);
                            continue;
                        }
                        let dv = (mode != CheckMode::Backtrack).then(|| compute_subdomains_vector(&mat, &d, &relevant));
                        let mut found = Vec::new();
                        for (lhs, body) in &self.bodies {
                            if mode != CheckMode::CrossCheck && (mat.contains(&d, *lhs) || found.contains(lhs)) {
                                continue;
                            }
                            let hit = match mode {
                                CheckMode::Backtrack => body.solve(&d, |t, l, b, r, a| mat.has(t, l, b, r, a)),
                                CheckMode::Exhaustive => body.scan(dv.as_ref().unwrap()),
                                CheckMode::CrossCheck => {
                                    let fast = body.solve(&d, |t, l, b, r, a| mat.has(t, l, b, r, a));
                                    let slow = body.scan(dv.as_ref().unwrap());
                                    stats.pairs += 1;
                                    if fast.is_some() != slow.is_some() {
                                        stats.disagreements += 1;
                                    }
                                    if let Some(w) = &slow {
                                        debug_assert!(witness_covers(&d, &w.iter().map(|b| b.1).collect::<Vec<_>>()), "scan witness does not cover {d}");
                                    }
                                    fast
                                }
                            };
                            if let Some(w) = hit {
                                debug_assert!(witness_covers(&d, &w.iter().map(|b| b.1).collect::<Vec<_>>()), "witness does not cover {d}");
                                found.push(*lhs);
                            }
                        }
                        for a in found {
                            mat.insert(&d, a);
                        }
                        self.close_residual(&mut mat, &d);
                    }
                }
            }
        }
        mat
    }

    fn close_residual(&self, mat: &mut RecognitionMatrix, d: &Subdomain) {
        let (rows, cols) = d.size();
        let mut changed = !self.residual.is_empty();
        while changed {
            changed = false;
            for &(a, b, shapes) in &self.residual {
                if shapes.admits(rows, cols) && !mat.contains(d, a) && mat.contains(d, b) {
                    mat.insert(d, a);
                    changed = true;
                }
            }
        }
    }

    /// Top-down reconstruction in terms of the validated grammar, so chain
    /// steps removed before recognition reappear as single-child nodes.
    pub fn derivation(&self, p: &Picture<char>, mat: &RecognitionMatrix) -> Option<DerivationNode> {
        if !mat.contains(&p.dom(), self.normalized.start) {
            return None;
        }
        let compiled: Vec<Option<CompiledBody>> = self
            .validated
            .rules
            .iter()
            .map(|r| match r {
                Rule::Variable { body, .. } if !is_chain_rule(r) => Some(CompiledBody::new(body)),
                _ => None,
            })
            .collect();
        let mut chain_stack = BTreeSet::new();
        self.derive(self.validated.start, p.dom(), p, mat, &compiled, &mut chain_stack)
    }

    fn present(&self, mat: &RecognitionMatrix, d: &Subdomain, a: usize) -> bool {
        self.to_normalized[a].is_some_and(|x| mat.contains(d, x))
    }

    fn derive(
        &self,
        a: usize,
        d: Subdomain,
        p: &Picture<char>,
        mat: &RecognitionMatrix,
        compiled: &[Option<CompiledBody>],
        chain_stack: &mut BTreeSet<usize>,
    ) -> Option<DerivationNode> {
        let node = |rule: usize, terminal: Option<char>, children: Vec<DerivationNode>| DerivationNode {
            nonterminal: self.validated.nonterminals[a].clone(),
            subdomain: d,
            rule,
            terminal,
            children,
        };
        for (k, r) in self.validated.rules.iter().enumerate().filter(|(_, r)| r.lhs() == a) {
            match r {
                Rule::Fixed { rhs, .. } => {
                    if d.size() == (1, 1) && p.get(d.top, d.left) == rhs {
                        return Some(node(k, Some(*rhs), Vec::new()));
                    }
                }
                Rule::Variable { .. } if is_chain_rule(r) => {
                    let b = r.body_nonterminals()[0];
                    let (rows, cols) = d.size();
                    // A nonterminal pruned by chain elimination has no entries; try it anyway.
                    let absent = self.to_normalized[b].is_some() && !self.present(mat, &d, b);
                    if !chain_shapes(r).unwrap().admits(rows, cols) || b == a || chain_stack.contains(&b) || absent {
                        continue;
                    }
                    chain_stack.insert(a);
                    let child = self.derive(b, d, p, mat, compiled, chain_stack);
                    chain_stack.remove(&a);
                    if let Some(c) = child {
                        return Some(node(k, None, vec![c]));
                    }
                }
                Rule::Variable { body: omega, .. } => {
                    let body = compiled[k].as_ref().unwrap();
                    // Lexicographically first witness, as in the figure's scan.
                    let dv = subdomains_vector_by(&d, &body.vars, |s, x| *s != d && self.present(mat, s, x));
                    if let Some(w) = body.scan(&dv) {
                        let mut children = Vec::with_capacity(w.len());
                        let mut fresh = BTreeSet::new();
                        for (x, sub) in w {
                            children.push(self.derive(x, sub, p, mat, compiled, &mut fresh)?);
                        }
                        children.sort_by_key(|c| c.subdomain);
                        return Some(node(k, None, children));
                    }
                    // A homogeneous member of the body is a chain step.
                    let (rows, cols) = d.size();
                    for &x in &body.vars {
                        if x == a || chain_stack.contains(&x) || !homogeneous_shapes(omega, x).admits(rows, cols) {
                            continue;
                        }
                        chain_stack.insert(a);
                        let child = self.derive(x, d, p, mat, compiled, chain_stack);
                        chain_stack.remove(&a);
                        if let Some(c) = child {
                            return Some(node(k, None, vec![c]));
                        }
                    }
                }
            }
        }
        None
    }
}

/// Recognition matrix of `p` under `g`, which is validated and made chain-free first.
pub fn parse(g: &TileGrammar, p: &Picture<char>) -> Result<RecognitionMatrix, ParseError> {
    Ok(Parser::new(g)?.recognize(p))
}

pub fn extract_derivation(g: &TileGrammar, p: &Picture<char>, m: &RecognitionMatrix) -> Result<Option<DerivationNode>, ParseError> {
    Ok(Parser::new(g)?.derivation(p, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::rtg::parse_rtg;

    fn body(text: &str) -> CompiledBody {
        let g = parse_rtg(&format!("%format rtg\n%start S\nS -> {text}\nS -> 'a'\nX -> 'a'\nY -> 'a'\n")).unwrap();
        match &g.rules[0] {
            Rule::Variable { body, .. } => CompiledBody::new(body),
            Rule::Fixed { .. } => unreachable!(),
        }
    }

    #[test]
    fn single_exemplars_are_rigid() {
        assert!(body("{ # # # # / # S X # / # Y Y # / # # # # }").rigid);
        assert!(body("{ # # # # # # / # S S X X # / # S S X X # / # # # # # # }").rigid);
        assert!(!body("{ # # # # / # S X # / # # # # } + { # # # # / # S Y # / # # # # }").rigid);
    }

    #[test]
    fn unstretchable_regions_keep_their_size() {
        // Both blocks are one cell wide in the exemplar.
        let b = body("{ # # # / # S # / # X # / # # # }");
        let d = Subdomain::new(1, 1, 3, 1).unwrap();
        assert!(b.solve(&d, |_, _, _, _, _| true).is_none());
        let d = Subdomain::new(1, 1, 2, 1).unwrap();
        assert_eq!(b.solve(&d, |_, _, _, _, _| true).map(|w| w.len()), Some(2));
    }

    #[test]
    fn union_bodies_may_omit_nonterminals() {
        let b = body("{ # # # # / # S X # / # # # # } + { # # # # / # S Y # / # # # # }");
        let d = Subdomain::new(1, 1, 1, 2).unwrap();
        let w = b.solve(&d, |_, _, _, _, a| a != 1).unwrap();
        assert_eq!(w.iter().map(|&(a, _)| a).collect::<Vec<_>>(), vec![0, 2]);
        let dv = subdomains_vector_by(&d, &b.vars, |_, a| a != 1);
        assert_eq!(b.scan(&dv), Some(w));
    }
}
