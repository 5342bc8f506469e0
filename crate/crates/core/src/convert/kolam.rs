use std::collections::{BTreeMap, BTreeSet};

use crate::grammar::{chain_tiles, exemplar_tiles, Rule, TileGrammar};
use crate::names::FreshNames;
use crate::picture::{Cell, Picture, Sym};

use super::{cnf_shape, ConvertError, Form, KSym, KolamGrammar};

struct Builder {
    nonterminals: Vec<String>,
    names: FreshNames,
    rules: Vec<(usize, Form)>,
    terminal_nt: BTreeMap<char, usize>,
}

impl Builder {
    fn fresh(&mut self, base: &str) -> usize {
        let name = self.names.fresh(base);
        self.nonterminals.push(name);
        self.nonterminals.len() - 1
    }

    /// Nonterminal standing for `f` inside a binary rule.
    fn operand(&mut self, owner: usize, f: &Form) -> usize {
        match f {
            Form::Leaf(KSym::N(b)) => *b,
            Form::Leaf(KSym::T(c)) => {
                if let Some(&x) = self.terminal_nt.get(c) {
                    return x;
                }
                let x = self.fresh(&c.to_uppercase().to_string());
                self.rules.push((x, Form::t(*c)));
                self.terminal_nt.insert(*c, x);
                x
            }
            _ => {
                let base = self.nonterminals[owner].clone();
                let x = self.fresh(&base);
                self.binarize(x, f);
                x
            }
        }
    }

    fn binarize(&mut self, lhs: usize, f: &Form) {
        let rule = match f {
            Form::Leaf(_) => f.clone(),
            Form::H(a, b) => Form::h(Form::n(self.operand(lhs, a)), Form::n(self.operand(lhs, b))),
            Form::V(a, b) => Form::v(Form::n(self.operand(lhs, a)), Form::n(self.operand(lhs, b))),
        };
        self.rules.push((lhs, rule));
    }
}

/// Binarization with fresh nonterminals, unit-rule closure and removal of
/// unproductive or unreachable nonterminals.
pub fn kolam_to_cnf(k: &KolamGrammar) -> KolamGrammar {
    let mut b = Builder {
        nonterminals: k.nonterminals.clone(),
        names: FreshNames::new(k.nonterminals.iter().cloned().chain(k.terminals.iter().map(|c| c.to_string()))),
        rules: Vec::new(),
        terminal_nt: BTreeMap::new(),
    };
    for (lhs, f) in &k.rules {
        b.binarize(*lhs, f);
    }
    let n = b.nonterminals.len();

    let mut unit = vec![BTreeSet::new(); n];
    for (lhs, f) in &b.rules {
        if let Form::Leaf(KSym::N(x)) = f {
            unit[*lhs].insert(*x);
        }
    }
    let mut rules: Vec<(usize, Form)> = Vec::new();
    let mut present = BTreeSet::new();
    for a in 0..n {
        let mut reach = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &unit[x] {
                if reach.insert(y) {
                    stack.push(y);
                }
            }
        }
        for src in std::iter::once(a).chain(reach.into_iter().filter(|&x| x != a)) {
            for (lhs, f) in &b.rules {
                if *lhs == src && cnf_shape(f) && present.insert((a, f.clone())) {
                    rules.push((a, f.clone()));
                }
            }
        }
    }

    let operands = |f: &Form| -> Vec<usize> {
        f.leaves().into_iter().filter_map(|s| if let KSym::N(x) = s { Some(x) } else { None }).collect()
    };
    let mut productive = BTreeSet::new();
    loop {
        let before = productive.len();
        for (lhs, f) in &rules {
            if operands(f).iter().all(|x| productive.contains(x)) {
                productive.insert(*lhs);
            }
        }
        if productive.len() == before {
            break;
        }
    }
    let mut reachable = BTreeSet::from([k.start]);
    let mut stack = vec![k.start];
    while let Some(x) = stack.pop() {
        for (lhs, f) in &rules {
            let ops = operands(f);
            if *lhs == x && ops.iter().all(|o| productive.contains(o)) {
                for o in ops {
                    if reachable.insert(o) {
                        stack.push(o);
                    }
                }
            }
        }
    }
    // The start symbol is kept even when its language is empty.
    let keep: Vec<usize> = (0..n).filter(|x| *x == k.start || (reachable.contains(x) && productive.contains(x))).collect();
    let remap: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let rename = |f: &Form| -> Form {
        match f {
            Form::Leaf(s) => Form::Leaf(*s),
            Form::H(a, c) | Form::V(a, c) => {
                let (Form::Leaf(KSym::N(x)), Form::Leaf(KSym::N(y))) = (&**a, &**c) else { unreachable!() };
                let (x, y) = (Form::n(remap[x]), Form::n(remap[y]));
                if matches!(f, Form::H(..)) { Form::h(x, y) } else { Form::v(x, y) }
            }
        }
    };
    let rules = rules
        .iter()
        .filter(|(lhs, f)| remap.contains_key(lhs) && operands(f).iter().all(|o| remap.contains_key(o)))
        .map(|(lhs, f)| (remap[lhs], rename(f)))
        .collect();
    KolamGrammar {
        terminals: k.terminals.clone(),
        nonterminals: keep.iter().map(|&x| b.nonterminals[x].clone()).collect(),
        start: remap[&k.start],
        rules,
    }
}

/// `A -> B ⦶ C` and `A -> B ⊖ C` become two-block exemplars. When `B = C`
/// the second occurrence is renamed to a fresh copy reached by a chain rule.
pub fn kolam_to_rtg(k: &KolamGrammar) -> Result<TileGrammar, ConvertError> {
    let mut nonterminals = k.nonterminals.clone();
    let mut names = FreshNames::new(k.nonterminals.iter().cloned().chain(k.terminals.iter().map(|c| c.to_string())));
    let mut copies: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rules = Vec::new();
    let mut chains = Vec::new();
    for (idx, (lhs, f)) in k.rules.iter().enumerate() {
        if !cnf_shape(f) {
            return Err(ConvertError::NotCnf(idx));
        }
        let (a, c, horizontal) = match f {
            Form::Leaf(KSym::T(t)) => {
                rules.push(Rule::Fixed { lhs: *lhs, rhs: *t });
                continue;
            }
            Form::H(a, c) => (a, c, true),
            Form::V(a, c) => (a, c, false),
            Form::Leaf(KSym::N(_)) => unreachable!("cnf_shape rejects unit rules"),
        };
        let (Form::Leaf(KSym::N(x)), Form::Leaf(KSym::N(mut y))) = (&**a, &**c) else { unreachable!() };
        if *x == y {
            y = *copies.entry(y).or_insert_with(|| {
                nonterminals.push(names.fresh(&k.nonterminals[y]));
                chains.push(Rule::Variable { lhs: nonterminals.len() - 1, body: chain_tiles(y) });
                nonterminals.len() - 1
            });
        }
        let (x, y) = (Sym::new(*x), Sym::new(y));
        let framed = if horizontal {
            Picture::from_fn(4, 6, |i, j| match (i, j) {
                (2..=3, 2..=3) => x,
                (2..=3, 4..=5) => y,
                _ => Sym::BORDER,
            })
        } else {
            Picture::from_fn(6, 4, |i, j| match (i, j) {
                (2..=3, 2..=3) => x,
                (4..=5, 2..=3) => y,
                _ => Sym::BORDER,
            })
        };
        rules.push(Rule::Variable { lhs: *lhs, body: exemplar_tiles(&framed) });
    }
    rules.extend(chains);
    Ok(TileGrammar { terminals: k.terminals.clone(), nonterminals, start: k.start, rules })
}
