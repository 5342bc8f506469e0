//! Brute-force semantics used as ground truth in tests.
//!
//! Everything here follows the definitions directly and is exponential;
//! each entry point carries a node budget and reports exhaustion instead
//! of guessing.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::convert::{Form, GridGrammar, GridRule, KSym, KolamGrammar, MatrixGrammar, PrusaGrammar, StrSym, StringGrammar, TilingSystem};
use crate::grammar::{Rule, TileGrammar};
use crate::picture::{hcat, strong_partition, subpicture, vcat, Picture, Subdomain, Sym};

pub use crate::local::enumerate_local;

pub const DEFAULT_BUDGET: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("oracle budget of {0} steps exhausted")]
pub struct BudgetExceeded(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

impl Verdict {
    pub fn from_result(r: Result<bool, BudgetExceeded>) -> Verdict {
        match r {
            Ok(true) => Verdict::Yes,
            Ok(false) => Verdict::No,
            Err(_) => Verdict::Indeterminate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeBound {
    pub max_rows: usize,
    pub max_cols: usize,
}

impl SizeBound {
    pub fn new(max_rows: usize, max_cols: usize) -> Self {
        SizeBound { max_rows, max_cols }
    }

    pub fn admits(&self, rows: usize, cols: usize) -> bool {
        rows <= self.max_rows && cols <= self.max_cols
    }
}

struct Meter {
    left: usize,
    cap: usize,
}

impl Meter {
    fn new(cap: usize) -> Self {
        Meter { left: cap, cap }
    }

    fn tick(&mut self, n: usize) -> Result<(), BudgetExceeded> {
        if self.left < n {
            self.left = 0;
            return Err(BudgetExceeded(self.cap));
        }
        self.left -= n;
        Ok(())
    }
}

/// `s ∈ LOC(ω)` of one size with its strong partition; `None` when `s` has none.
type LocEntry = (Picture<Sym>, Option<Vec<(Subdomain, Sym)>>);

/// Memoized one-step-at-a-time derivation search for an arbitrary tile grammar.
pub struct TgOracle<'g> {
    g: &'g TileGrammar,
    meter: Meter,
    memo: HashMap<Picture<char>, Rc<BTreeSet<usize>>>,
    loc: HashMap<(usize, usize, usize), Rc<Vec<LocEntry>>>,
}

impl<'g> TgOracle<'g> {
    pub fn new(g: &'g TileGrammar, budget: usize) -> Self {
        TgOracle { g, meter: Meter::new(budget), memo: HashMap::new(), loc: HashMap::new() }
    }

    fn local(&mut self, rule: usize, rows: usize, cols: usize) -> Result<Rc<Vec<LocEntry>>, BudgetExceeded> {
        if let Some(v) = self.loc.get(&(rule, rows, cols)) {
            return Ok(v.clone());
        }
        let Rule::Variable { body, .. } = &self.g.rules[rule] else { unreachable!("fixed rules have no local language") };
        let pics = enumerate_local(body, rows, cols);
        self.meter.tick(1 + pics.len())?;
        let v: Vec<LocEntry> = pics
            .into_iter()
            .map(|s| {
                let pi = strong_partition(&s).map(|p| p.blocks);
                (s, pi)
            })
            .collect();
        let v = Rc::new(v);
        self.loc.insert((rule, rows, cols), v.clone());
        Ok(v)
    }

    /// Nonterminals `A` with `A ⇒* q`.
    pub fn derivers(&mut self, q: &Picture<char>) -> Result<Rc<BTreeSet<usize>>, BudgetExceeded> {
        if let Some(s) = self.memo.get(q) {
            return Ok(s.clone());
        }
        self.meter.tick(1)?;
        let (m, n) = q.size();
        let mut set = BTreeSet::new();
        if (m, n) == (1, 1) {
            for r in &self.g.rules {
                if let Rule::Fixed { lhs, rhs } = r {
                    if rhs == q.get(1, 1) {
                        set.insert(*lhs);
                    }
                }
            }
        }
        // Rules whose local picture is a single block rename the area; they are closed over last.
        let mut renames: Vec<(usize, usize)> = Vec::new();
        for k in 0..self.g.rules.len() {
            let Rule::Variable { lhs, .. } = self.g.rules[k] else { continue };
            let loc = self.local(k, m, n)?;
            let mut applies = false;
            for (_, pi) in loc.iter() {
                let Some(blocks) = pi else { continue };
                if let [(_, b)] = blocks[..] {
                    renames.push((lhs, b.index()));
                    continue;
                }
                if applies || set.contains(&lhs) {
                    continue;
                }
                self.meter.tick(1)?;
                let mut all = true;
                for (d, b) in blocks {
                    let sub = subpicture(q, d).expect("block inside the picture");
                    if !self.derivers(&sub)?.contains(&b.index()) {
                        all = false;
                        break;
                    }
                }
                applies |= all;
            }
            if applies {
                set.insert(lhs);
            }
        }
        loop {
            let before = set.len();
            for &(a, b) in &renames {
                if set.contains(&b) {
                    set.insert(a);
                }
            }
            if set.len() == before {
                break;
            }
        }
        let set = Rc::new(set);
        self.memo.insert(q.clone(), set.clone());
        Ok(set)
    }

    pub fn member(&mut self, p: &Picture<char>) -> Result<bool, BudgetExceeded> {
        Ok(self.derivers(p)?.contains(&self.g.start))
    }
}

/// Whether `S ⇒* p` under the derivation relation of tile grammars.
pub fn derive_membership_tg(g: &TileGrammar, p: &Picture<char>, budget: usize) -> Verdict {
    Verdict::from_result(TgOracle::new(g, budget).member(p))
}

/// Every picture over `alphabet` of exactly `rows x cols`, in lexicographic order.
pub fn all_pictures(alphabet: &[char], rows: usize, cols: usize) -> Vec<Picture<char>> {
    let mut sorted = alphabet.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let k = sorted.len();
    let cells = rows * cols;
    if k == 0 {
        return Vec::new();
    }
    let total = k.checked_pow(cells as u32).expect("too many pictures to enumerate");
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; cells];
    for _ in 0..total {
        out.push(Picture::new(rows, cols, digits.iter().map(|&d| sorted[d]).collect()).expect("sized"));
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < k {
                break;
            }
            *d = 0;
        }
    }
    out
}

/// `L(G)` restricted to sizes within `b`.
pub fn enumerate_language_tg(g: &TileGrammar, b: SizeBound, budget: usize) -> Result<BTreeSet<Picture<char>>, BudgetExceeded> {
    let mut o = TgOracle::new(g, budget);
    let mut out = BTreeSet::new();
    for r in 1..=b.max_rows {
        for c in 1..=b.max_cols {
            for p in all_pictures(&g.terminals, r, c) {
                if o.member(&p)? {
                    out.insert(p);
                }
            }
        }
    }
    Ok(out)
}

/// Whether some pre-image over `Γ`, pixel-wise projecting to `p`, is in `LOC(θ)`.
pub fn membership_ts(t: &TilingSystem, p: &Picture<char>) -> bool {
    let by_letter: BTreeMap<char, Vec<Sym>> = t.projection.iter().enumerate().fold(BTreeMap::new(), |mut m, (g, &c)| {
        m.entry(c).or_insert_with(Vec::new).push(Sym::new(g));
        m
    });
    let none = Vec::new();
    let stopped = crate::local::search_local(&t.theta, p.rows(), p.cols(), |i, j| by_letter.get(p.get(i, j)).unwrap_or(&none).clone(), |_| false);
    !stopped
}

/// Pictures grouped by size.
type Lang = BTreeMap<(usize, usize), BTreeSet<Picture<char>>>;

fn lang_insert(l: &mut Lang, p: Picture<char>) -> bool {
    l.entry(p.size()).or_default().insert(p)
}

fn lang_flatten(l: &Lang) -> BTreeSet<Picture<char>> {
    l.values().flatten().cloned().collect()
}

fn lang_len(ls: &[Lang]) -> usize {
    ls.iter().map(|l| l.values().map(BTreeSet::len).sum::<usize>()).sum()
}

/// A source grammar in one of the formalisms with their own semantics.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Kolam(&'a KolamGrammar),
    Prusa(&'a PrusaGrammar),
    Grid(&'a GridGrammar),
    Matrix(&'a MatrixGrammar),
}

/// `L(G)` within `b` under the source formalism's semantics.
pub fn enumerate_source(src: Source<'_>, b: SizeBound, budget: usize) -> Result<BTreeSet<Picture<char>>, BudgetExceeded> {
    let mut meter = Meter::new(budget);
    match src {
        Source::Kolam(g) => kolam_language(g, b, &mut meter),
        Source::Prusa(g) => prusa_language(g, b, &mut meter),
        Source::Grid(g) => grid_language(g, b, &mut meter),
        Source::Matrix(g) => matrix_language(g, b, &mut meter),
    }
}

fn kolam_language(g: &KolamGrammar, b: SizeBound, meter: &mut Meter) -> Result<BTreeSet<Picture<char>>, BudgetExceeded> {
    fn eval(f: &Form, ls: &[Lang], b: SizeBound, meter: &mut Meter) -> Result<Vec<Picture<char>>, BudgetExceeded> {
        Ok(match f {
            Form::Leaf(KSym::T(c)) => vec![Picture::filled(1, 1, *c)],
            Form::Leaf(KSym::N(x)) => ls[*x].values().flatten().cloned().collect(),
            Form::H(l, r) | Form::V(l, r) => {
                let horizontal = matches!(f, Form::H(..));
                let (xs, ys) = (eval(l, ls, b, meter)?, eval(r, ls, b, meter)?);
                let mut out = Vec::new();
                for x in &xs {
                    for y in &ys {
                        meter.tick(1)?;
                        let joined = if horizontal { hcat(x, y) } else { vcat(x, y) };
                        if let Ok(p) = joined {
                            if b.admits(p.rows(), p.cols()) {
                                out.push(p);
                            }
                        }
                    }
                }
                out
            }
        })
    }
    let mut ls: Vec<Lang> = vec![Lang::new(); g.nonterminals.len()];
    loop {
        let before = lang_len(&ls);
        for (lhs, f) in &g.rules {
            for p in eval(f, &ls, b, meter)? {
                lang_insert(&mut ls[*lhs], p);
            }
        }
        if lang_len(&ls) == before {
            return Ok(lang_flatten(&ls[g.start]));
        }
    }
}

/// Compositions of `total` into `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Assembles a grid of sub-pictures; `cells[i][j]` lists candidates for block `(i, j)`.
fn grid_products(cells: &[Vec<Vec<Picture<char>>>], meter: &mut Meter) -> Result<Vec<Picture<char>>, BudgetExceeded> {
    let rows = cells.len();
    let cols = cells[0].len();
    let flat: Vec<&Vec<Picture<char>>> = cells.iter().flatten().collect();
    if flat.iter().any(|c| c.is_empty()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; flat.len()];
    loop {
        meter.tick(1)?;
        let mut band = None;
        for i in 0..rows {
            let mut row: Option<Picture<char>> = None;
            for j in 0..cols {
                let piece = &flat[i * cols + j][idx[i * cols + j]];
                row = Some(match row {
                    None => piece.clone(),
                    Some(r) => hcat(&r, piece).expect("equal heights by construction"),
                });
            }
            let row = row.unwrap();
            band = Some(match band {
                None => row,
                Some(b) => vcat(&b, &row).expect("equal widths by construction"),
            });
        }
        out.push(band.unwrap());
        let mut k = flat.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < flat[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn prusa_language(g: &PrusaGrammar, b: SizeBound, meter: &mut Meter) -> Result<BTreeSet<Picture<char>>, BudgetExceeded> {
    let mut ls: Vec<Lang> = vec![Lang::new(); g.nonterminals.len()];
    loop {
        let before = lang_len(&ls);
        for (lhs, w) in &g.rules {
            let (m, n) = w.size();
            let mut found = Vec::new();
            for rows in m..=b.max_rows {
                for cols in n..=b.max_cols {
                    for hs in compositions(rows, m) {
                        for ws in compositions(cols, n) {
                            let cells: Vec<Vec<Vec<Picture<char>>>> = (1..=m)
                                .map(|i| {
                                    (1..=n)
                                        .map(|j| {
                                            let size = (hs[i - 1], ws[j - 1]);
                                            match *w.get(i, j) {
                                                KSym::T(c) if size == (1, 1) => vec![Picture::filled(1, 1, c)],
                                                KSym::T(_) => Vec::new(),
                                                KSym::N(x) => ls[x].get(&size).map(|s| s.iter().cloned().collect()).unwrap_or_default(),
                                            }
                                        })
                                        .collect()
                                })
                                .collect();
                            found.extend(grid_products(&cells, meter)?);
                        }
                    }
                }
            }
            for p in found {
                lang_insert(&mut ls[*lhs], p);
            }
        }
        if lang_len(&ls) == before {
            return Ok(lang_flatten(&ls[g.start]));
        }
    }
}

fn grid_language(g: &GridGrammar, b: SizeBound, meter: &mut Meter) -> Result<BTreeSet<Picture<char>>, BudgetExceeded> {
    let side = b.max_rows.min(b.max_cols);
    let mut ls: Vec<Lang> = vec![Lang::new(); g.nonterminals.len()];
    loop {
        let before = lang_len(&ls);
        for r in &g.rules {
            let mut found = Vec::new();
            match r {
                GridRule::Terminal { t, .. } => {
                    for s in 1..=side {
                        meter.tick(1)?;
                        found.push(Picture::filled(s, s, *t));
                    }
                }
                GridRule::Grid { k, .. } => {
                    for s in 1..=side / k {
                        // Block row `i` counted from the bottom sits at picture band `k - i + 1`.
                        let cells: Vec<Vec<Vec<Picture<char>>>> = (1..=*k)
                            .rev()
                            .map(|i| {
                                (1..=*k)
                                    .map(|j| match r.cell(i, j).unwrap() {
                                        KSym::T(c) if s == 1 => vec![Picture::filled(1, 1, c)],
                                        KSym::T(_) => Vec::new(),
                                        KSym::N(x) => ls[x].get(&(s, s)).map(|v| v.iter().cloned().collect()).unwrap_or_default(),
                                    })
                                    .collect()
                            })
                            .collect();
                        found.extend(grid_products(&cells, meter)?);
                    }
                }
            }
            for p in found {
                lang_insert(&mut ls[r.lhs()], p);
            }
        }
        if lang_len(&ls) == before {
            return Ok(lang_flatten(&ls[g.start]));
        }
    }
}

/// Strings of length `1..=max_len` derivable from each nonterminal.
fn string_language<T: Copy + Ord>(g: &StringGrammar<T>, max_len: usize, meter: &mut Meter) -> Result<Vec<BTreeSet<Vec<T>>>, BudgetExceeded> {
    let mut ls: Vec<BTreeSet<Vec<T>>> = vec![BTreeSet::new(); g.nonterminals.len()];
    loop {
        let before: usize = ls.iter().map(BTreeSet::len).sum();
        for (lhs, rhs) in &g.rules {
            let mut partial: BTreeSet<Vec<T>> = BTreeSet::from([Vec::new()]);
            for s in rhs {
                let mut next = BTreeSet::new();
                for pre in &partial {
                    match s {
                        StrSym::T(t) => {
                            if pre.len() < max_len {
                                let mut v = pre.clone();
                                v.push(*t);
                                next.insert(v);
                            }
                        }
                        StrSym::N(x) => {
                            for w in &ls[*x] {
                                meter.tick(1)?;
                                if pre.len() + w.len() <= max_len {
                                    let mut v = pre.clone();
                                    v.extend_from_slice(w);
                                    next.insert(v);
                                }
                            }
                        }
                    }
                }
                partial = next;
            }
            ls[*lhs].extend(partial.into_iter().filter(|w| !w.is_empty()));
        }
        if ls.iter().map(BTreeSet::len).sum::<usize>() == before {
            return Ok(ls);
        }
    }
}

fn matrix_language(g: &MatrixGrammar, b: SizeBound, meter: &mut Meter) -> Result<BTreeSet<Picture<char>>, BudgetExceeded> {
    let h = string_language(&g.horizontal, b.max_cols, meter)?;
    let columns: Vec<BTreeMap<usize, Vec<Vec<char>>>> = g
        .columns
        .iter()
        .map(|(_, v)| {
            let ls = string_language(v, b.max_rows, meter)?;
            let mut by_len: BTreeMap<usize, Vec<Vec<char>>> = BTreeMap::new();
            for w in &ls[v.start] {
                by_len.entry(w.len()).or_default().push(w.clone());
            }
            Ok(by_len)
        })
        .collect::<Result<_, BudgetExceeded>>()?;
    let mut out = BTreeSet::new();
    for word in &h[g.horizontal.start] {
        for m in 1..=b.max_rows {
            let cols: Vec<Vec<Vec<Picture<char>>>> = vec![word
                .iter()
                .map(|&c| {
                    columns[c]
                        .get(&m)
                        .map(|ws| ws.iter().map(|w| Picture::new(m, 1, w.clone()).expect("column")).collect())
                        .unwrap_or_default()
                })
                .collect()];
            out.extend(grid_products(&cols, meter)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(compositions(4, 1), vec![vec![4]]);
    }

    #[test]
    fn all_pictures_is_lexicographic() {
        let ps = all_pictures(&['b', 'a'], 1, 2);
        let texts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn budget_exhaustion_is_indeterminate() {
        let g = crate::format::rtg::parse_rtg(
            "%format rtg\n%start S\nS -> { # # # # # / # A S S # / # # # # # }\nS -> 'a'\nA -> 'a'\n",
        )
        .unwrap();
        let p = Picture::parse("aaaaaa").unwrap();
        assert_eq!(derive_membership_tg(&g, &p, 3), Verdict::Indeterminate);
        assert_eq!(derive_membership_tg(&g, &p, DEFAULT_BUDGET), Verdict::Yes);
    }
}
