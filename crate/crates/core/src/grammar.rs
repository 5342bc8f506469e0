//! Tile grammars in nonterminal normal form, regional validation and
//! chain-rule elimination.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::picture::{bordered, tiles_of, Cell, Picture, Sym, Tile, TileSet};
use crate::tileset::{decompose_regional, is_simple_regional};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("start symbol index {0} is not a nonterminal")]
    BadStart(usize),
    #[error("'{0}' is both a terminal and a nonterminal")]
    AlphabetClash(String),
    #[error("'#' may not be used as a terminal or nonterminal")]
    BorderInAlphabet,
    #[error("duplicate nonterminal '{0}'")]
    DuplicateNonterminal(String),
    #[error("duplicate terminal '{0}'")]
    DuplicateTerminal(char),
    #[error("rule {rule}: unknown symbol {what}")]
    UnknownSymbol { rule: usize, what: String },
    #[error("rule {rule} ({lhs}): concave tile in rule body")]
    ConcaveTile { rule: usize, lhs: String },
    #[error("start symbol '{0}' derives no picture")]
    Degenerate(String),
}

/// `A -> t` or `A -> ω` with `ω` over nonterminals and `#`.
///
/// `Sym(i)` inside a body is nonterminal `i`; terminals never occur there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Fixed { lhs: usize, rhs: char },
    Variable { lhs: usize, body: TileSet<Sym> },
}

impl Rule {
    pub fn lhs(&self) -> usize {
        match self {
            Rule::Fixed { lhs, .. } | Rule::Variable { lhs, .. } => *lhs,
        }
    }

    /// Nonterminals mentioned by a variable-size body, ascending.
    pub fn body_nonterminals(&self) -> Vec<usize> {
        match self {
            Rule::Fixed { .. } => Vec::new(),
            Rule::Variable { body, .. } => body.alphabet().into_iter().map(Sym::index).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGrammar {
    pub terminals: Vec<char>,
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub rules: Vec<Rule>,
}

/// Tile set of a bordered exemplar that already carries its `#` frame.
pub fn exemplar_tiles(framed: &Picture<Sym>) -> TileSet<Sym> {
    tiles_of(framed).unwrap_or_default()
}

/// `⟦ #### / #BB# / #BB# / #### ⟧`, the canonical chain body for `B`.
pub fn chain_tiles(b: usize) -> TileSet<Sym> {
    tiles_of(&bordered(&Picture::filled(2, 2, Sym::new(b)))).expect("4x4 picture has tiles")
}

pub fn is_chain_rule(r: &Rule) -> bool {
    matches!(r, Rule::Variable { .. }) && r.body_nonterminals().len() == 1
}

/// Size classes of homogeneous pictures a single-nonterminal body admits.
///
/// A homogeneous picture's tiles depend only on whether it has one row and
/// whether it has one column, so the local language of such a body is a
/// union of the four classes below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainShapes(u8);

impl ChainShapes {
    pub const CELL: ChainShapes = ChainShapes(1);
    pub const ROW: ChainShapes = ChainShapes(2);
    pub const COLUMN: ChainShapes = ChainShapes(4);
    pub const BLOCK: ChainShapes = ChainShapes(8);
    pub const ALL: ChainShapes = ChainShapes(15);
    pub const NONE: ChainShapes = ChainShapes(0);

    fn class(rows: usize, cols: usize) -> ChainShapes {
        match (rows == 1, cols == 1) {
            (true, true) => Self::CELL,
            (true, false) => Self::ROW,
            (false, true) => Self::COLUMN,
            (false, false) => Self::BLOCK,
        }
    }

    /// Classes present in the local language of `body` over nonterminal `b`.
    pub fn of(body: &TileSet<Sym>, b: usize) -> ChainShapes {
        let mut out = ChainShapes::NONE;
        for (rows, cols) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let tiles = tiles_of(&bordered(&Picture::filled(rows, cols, Sym::new(b)))).expect("bordered picture has tiles");
            if tiles.iter().all(|t| body.contains(t)) {
                out.0 |= Self::class(rows, cols).0;
            }
        }
        out
    }

    pub fn admits(self, rows: usize, cols: usize) -> bool {
        self.0 & Self::class(rows, cols).0 != 0
    }

    pub fn intersect(self, o: ChainShapes) -> ChainShapes {
        ChainShapes(self.0 & o.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether a tile filter restricts any local language to exactly these
    /// classes; true for all classes, one-row, one-column and one-cell.
    fn expressible(self) -> bool {
        matches!(self.0, 15 | 3 | 5 | 1)
    }

    /// Restricts `body` to the tiles used by its one-row or one-column
    /// members; other classes keep the body unchanged.
    fn filter(self, body: &TileSet<Sym>) -> TileSet<Sym> {
        let one_row = self.0 & (Self::COLUMN.0 | Self::BLOCK.0) == 0;
        let one_col = self.0 & (Self::ROW.0 | Self::BLOCK.0) == 0;
        match (one_row, one_col) {
            (false, false) => body.clone(),
            (true, true) => line_tiles(body, true),
            (true, false) => line_tiles(body, false),
            (false, true) => transpose(&line_tiles(&transpose(body), false)),
        }
    }
}

fn transpose(body: &TileSet<Sym>) -> TileSet<Sym> {
    body.iter().map(|t| Tile::new(t.0[0], t.0[2], t.0[1], t.0[3])).collect()
}

/// Tiles of the one-row members of `LOC(body)`, or of its 1x1 members when
/// `single` holds. A one-row member is a path of symbols from a node that
/// may touch the left border to one that may touch the right border.
fn line_tiles(body: &TileSet<Sym>, single: bool) -> TileSet<Sym> {
    let e = <Sym as Cell>::BORDER;
    let has = |a, b, c, d| body.contains(&Tile::new(a, b, c, d));
    let nodes: BTreeSet<Sym> = body.alphabet().into_iter().filter(|&x| x != e).collect();
    let start: BTreeSet<Sym> = nodes.iter().copied().filter(|&x| has(e, e, e, x) && has(e, x, e, e)).collect();
    let end: BTreeSet<Sym> = nodes.iter().copied().filter(|&x| has(e, e, x, e) && has(x, e, e, e)).collect();
    let step: Vec<(Sym, Sym)> = if !single {
        nodes.iter().flat_map(|&x| nodes.iter().map(move |&y| (x, y))).filter(|&(x, y)| has(e, e, x, y) && has(x, y, e, e)).collect()
    } else {
        Vec::new()
    };
    let closure = |seed: &BTreeSet<Sym>, forward: bool| {
        let mut seen = seed.clone();
        let mut stack: Vec<Sym> = seed.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for &(a, b) in &step {
                let (from, to) = if forward { (a, b) } else { (b, a) };
                if from == x && seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen
    };
    let live: BTreeSet<Sym> = closure(&start, true).intersection(&closure(&end, false)).copied().collect();
    let mut out = TileSet::new();
    for &x in &live {
        if start.contains(&x) {
            out.insert(Tile::new(e, e, e, x));
            out.insert(Tile::new(e, x, e, e));
        }
        if end.contains(&x) {
            out.insert(Tile::new(e, e, x, e));
            out.insert(Tile::new(x, e, e, e));
        }
    }
    for &(x, y) in &step {
        if live.contains(&x) && live.contains(&y) {
            out.insert(Tile::new(e, e, x, y));
            out.insert(Tile::new(x, y, e, e));
        }
    }
    out
}

/// Shapes of a chain rule, or `None` for other rules.
pub fn chain_shapes(r: &Rule) -> Option<ChainShapes> {
    match r {
        Rule::Variable { body, .. } if is_chain_rule(r) => Some(ChainShapes::of(body, r.body_nonterminals()[0])),
        _ => None,
    }
}

impl TileGrammar {
    /// Checks the structural invariants: disjoint alphabets, `#` in
    /// neither, start and every rule symbol declared.
    pub fn check(&self) -> Result<(), GrammarError> {
        if self.start >= self.nonterminals.len() {
            return Err(GrammarError::BadStart(self.start));
        }
        if self.terminals.contains(&'#') || self.nonterminals.iter().any(|n| n == "#") {
            return Err(GrammarError::BorderInAlphabet);
        }
        let mut seen = BTreeSet::new();
        for n in &self.nonterminals {
            if !seen.insert(n.as_str()) {
                return Err(GrammarError::DuplicateNonterminal(n.clone()));
            }
        }
        let mut ts = BTreeSet::new();
        for &t in &self.terminals {
            if !ts.insert(t) {
                return Err(GrammarError::DuplicateTerminal(t));
            }
            if seen.contains(t.to_string().as_str()) {
                return Err(GrammarError::AlphabetClash(t.to_string()));
            }
        }
        for (k, r) in self.rules.iter().enumerate() {
            if r.lhs() >= self.nonterminals.len() {
                return Err(GrammarError::UnknownSymbol { rule: k, what: format!("lhs index {}", r.lhs()) });
            }
            match r {
                Rule::Fixed { rhs, .. } if !ts.contains(rhs) => {
                    return Err(GrammarError::UnknownSymbol { rule: k, what: format!("terminal '{rhs}'") });
                }
                Rule::Variable { body, .. } => {
                    if let Some(s) = body.alphabet().into_iter().find(|s| s.index() >= self.nonterminals.len()) {
                        return Err(GrammarError::UnknownSymbol { rule: k, what: format!("nonterminal index {}", s.0) });
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn nonterminal(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub fn name(&self, s: Sym) -> &str {
        if s.is_border() {
            "#"
        } else {
            &self.nonterminals[s.index()]
        }
    }

    pub fn rules_of(&self, lhs: usize) -> impl Iterator<Item = &Rule> + '_ {
        self.rules.iter().filter(move |r| r.lhs() == lhs)
    }

    pub fn has_chain_rules(&self) -> bool {
        self.rules.iter().any(is_chain_rule)
    }

    /// Chain rules the parser closes per cell instead of eliminating.
    pub fn has_shape_restricted_chains(&self) -> bool {
        self.rules.iter().any(|r| chain_shapes(r).is_some_and(|s| !s.expressible()))
    }

    /// Keeps only `keep` (old indices, ascending) and drops rules mentioning anything else.
    fn restrict(&self, keep: &BTreeSet<usize>) -> TileGrammar {
        let remap: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let rules = self
            .rules
            .iter()
            .filter(|r| keep.contains(&r.lhs()) && r.body_nonterminals().iter().all(|n| keep.contains(n)))
            .map(|r| match r {
                Rule::Fixed { lhs, rhs } => Rule::Fixed { lhs: remap[lhs], rhs: *rhs },
                Rule::Variable { lhs, body } => Rule::Variable {
                    lhs: remap[lhs],
                    body: body.map(|s| if s.is_border() { s } else { Sym::new(remap[&s.index()]) }),
                },
            })
            .collect();
        TileGrammar {
            terminals: self.terminals.clone(),
            nonterminals: keep.iter().map(|&k| self.nonterminals[k].clone()).collect(),
            start: remap[&self.start],
            rules,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleFinding {
    /// Index of the rule in the input grammar.
    pub rule: usize,
    pub lhs: String,
    pub non_concave: bool,
    pub simple_regional: bool,
    pub chain: bool,
    /// Replacement alternatives when the body was decomposed.
    pub decomposition: Option<Vec<TileSet<Sym>>>,
    /// The body is not simple regional and no decomposition exists.
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<RuleFinding>,
    pub rtg_valid: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.findings {
            write!(f, "rule {} ({}): ", x.rule + 1, x.lhs)?;
            if x.simple_regional {
                write!(f, "simple regional")?;
            } else if let Some(parts) = &x.decomposition {
                write!(f, "not simple regional, split into {} simple regional alternatives", parts.len())?;
            } else {
                write!(f, "not regional")?;
            }
            if x.chain {
                write!(f, ", chain rule")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "verdict: {}", if self.rtg_valid { "RTG-valid" } else { "RTG-invalid" })
    }
}

/// Replaces every variable-size rule that is not simple regional by its
/// decomposition. The output grammar is usable as a plain tile grammar
/// even when the verdict is RTG-invalid.
pub fn validate_grammar(g: &TileGrammar) -> Result<(TileGrammar, ValidationReport), GrammarError> {
    g.check()?;
    let mut rules = Vec::with_capacity(g.rules.len());
    let mut findings = Vec::new();
    for (k, r) in g.rules.iter().enumerate() {
        let Rule::Variable { lhs, body } = r else {
            rules.push(r.clone());
            continue;
        };
        if body.iter().any(|t| t.is_concave()) {
            return Err(GrammarError::ConcaveTile { rule: k, lhs: g.nonterminals[*lhs].clone() });
        }
        let simple = is_simple_regional(body);
        let mut finding = RuleFinding {
            rule: k,
            lhs: g.nonterminals[*lhs].clone(),
            non_concave: true,
            simple_regional: simple,
            chain: is_chain_rule(r),
            decomposition: None,
            failed: false,
        };
        if simple {
            rules.push(r.clone());
        } else if let Some(parts) = decompose_regional(body) {
            rules.extend(parts.iter().map(|p| Rule::Variable { lhs: *lhs, body: p.clone() }));
            finding.decomposition = Some(parts);
        } else {
            rules.push(r.clone());
            finding.failed = true;
        }
        findings.push(finding);
    }
    let rtg_valid = findings.iter().all(|f| !f.failed);
    let out = TileGrammar { rules, ..g.clone() };
    Ok((out, ValidationReport { findings, rtg_valid }))
}

/// Unit closure over chain rules followed by pruning of unproductive and
/// unreachable nonterminals. Idempotent.
///
/// A chain rule whose local language is restricted to one-row, one-column
/// or one-cell pictures is followed with the matching tile filter applied
/// to every copied body. A chain rule admitting any other restricted set of
/// shapes cannot be expressed that way; it is kept and closed per cell by
/// the parser. A body whose local language has members made of a single
/// nonterminal acts as a chain rule for those members and is followed too.
pub fn eliminate_chain_rules(g: &TileGrammar) -> Result<TileGrammar, GrammarError> {
    g.check()?;
    let mut cur = prune(close_chains(g), g)?;
    // Filtered copies open new steps; rules only accumulate from a finite
    // set of filtered bodies, so this terminates.
    loop {
        let next = prune(close_chains(&cur), &cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

fn homogeneous_part(body: &TileSet<Sym>, x: usize) -> TileSet<Sym> {
    body.iter().filter(|t| t.0.iter().all(|s| s.is_border() || s.index() == x)).cloned().collect()
}

/// Shapes of the pictures made of `x` alone in `LOC(body)`.
pub fn homogeneous_shapes(body: &TileSet<Sym>, x: usize) -> ChainShapes {
    ChainShapes::of(&homogeneous_part(body, x), x)
}

fn close_chains(g: &TileGrammar) -> TileGrammar {
    let n = g.nonterminals.len();
    let mut rules: Vec<Rule> = Vec::new();
    let mut present = BTreeSet::new();
    for a in 0..n {
        // A first, then chain-reachable (nonterminal, shapes) states in order.
        // Steps are taken on the restricted copies, and a body with
        // homogeneous members over `y` also steps to `y`.
        let mut reach = BTreeSet::from([(a, ChainShapes::ALL)]);
        let mut stack = vec![(a, ChainShapes::ALL)];
        while let Some((x, f)) = stack.pop() {
            for r in g.rules_of(x) {
                for (y, shapes) in restrict(r, f, a).iter().flat_map(chain_steps) {
                    let f2 = f.intersect(shapes);
                    if y != a && shapes.expressible() && !f2.is_empty() && reach.insert((y, f2)) {
                        stack.push((y, f2));
                    }
                }
            }
        }
        let order = std::iter::once((a, ChainShapes::ALL)).chain(reach.into_iter().filter(|&s| s != (a, ChainShapes::ALL)));
        for (b, f) in order {
            for r in g.rules_of(b) {
                let Some(copy) = restrict(r, f, a) else { continue };
                let mut out = Vec::new();
                if let Rule::Variable { body, .. } = &copy {
                    for (y, shapes) in chain_steps(&copy) {
                        if y != a && !shapes.expressible() {
                            out.push(Rule::Variable { lhs: a, body: homogeneous_part(body, y) });
                        }
                    }
                }
                // One-cell members are all homogeneous, so the steps cover them.
                if !is_chain_rule(&copy) && !(f == ChainShapes::CELL && matches!(copy, Rule::Variable { .. })) {
                    out.push(copy);
                }
                for c in out {
                    if present.insert(c.clone()) {
                        rules.push(c);
                    }
                }
            }
        }
    }
    TileGrammar { rules, ..g.clone() }
}

/// Chain steps a rule offers: its own target for a chain rule, otherwise
/// one per nonterminal with homogeneous members.
fn chain_steps(r: &Rule) -> Vec<(usize, ChainShapes)> {
    match r {
        Rule::Fixed { .. } => Vec::new(),
        Rule::Variable { body, .. } => r
            .body_nonterminals()
            .into_iter()
            .map(|y| (y, homogeneous_shapes(body, y)))
            .filter(|(_, s)| !s.is_empty())
            .collect(),
    }
}

/// `r` moved to left-hand side `a` with its body filtered to `f`, unless
/// nothing of it survives or it becomes a self chain.
fn restrict(r: &Rule, f: ChainShapes, a: usize) -> Option<Rule> {
    match r {
        Rule::Fixed { rhs, .. } => Some(Rule::Fixed { lhs: a, rhs: *rhs }),
        Rule::Variable { body, .. } => {
            let body = if f == ChainShapes::ALL { body.clone() } else { f.filter(body) };
            let copy = Rule::Variable { lhs: a, body };
            let nts = copy.body_nonterminals();
            let idle = chain_shapes(&copy).is_some_and(|c| c.is_empty() || nts[0] == a);
            (!nts.is_empty() && !idle).then_some(copy)
        }
    }
}

fn prune(closed: TileGrammar, g: &TileGrammar) -> Result<TileGrammar, GrammarError> {
    let mut productive = BTreeSet::new();
    loop {
        let before = productive.len();
        for r in &closed.rules {
            let ok = match r {
                Rule::Fixed { .. } => true,
                Rule::Variable { .. } => {
                    let body = r.body_nonterminals();
                    !body.is_empty() && body.iter().all(|x| productive.contains(x))
                }
            };
            if ok {
                productive.insert(r.lhs());
            }
        }
        if productive.len() == before {
            break;
        }
    }
    if !productive.contains(&g.start) {
        return Err(GrammarError::Degenerate(g.nonterminals[g.start].clone()));
    }
    let mut reachable = BTreeSet::from([g.start]);
    let mut stack = vec![g.start];
    while let Some(x) = stack.pop() {
        for r in closed.rules_of(x) {
            let body = r.body_nonterminals();
            if body.iter().all(|b| productive.contains(b)) {
                for b in body {
                    if reachable.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
    }
    let keep: BTreeSet<usize> = reachable.intersection(&productive).copied().collect();
    Ok(closed.restrict(&keep))
}
