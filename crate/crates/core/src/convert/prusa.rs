use std::collections::BTreeMap;

use crate::grammar::{chain_tiles, exemplar_tiles, Rule, TileGrammar};
use crate::names::FreshNames;
use crate::picture::{Cell, Picture, Sym};

use super::{prusa_nnf_body, ConvertError, KSym, PrusaGrammar};

fn taken_names(p: &PrusaGrammar) -> FreshNames {
    FreshNames::new(p.nonterminals.iter().cloned().chain(p.terminals.iter().map(|c| c.to_string())))
}

/// Terminals inside bodies larger than a single pixel are replaced by
/// fresh nonterminals with one terminal rule each.
pub fn prusa_to_nnf(p: &PrusaGrammar) -> PrusaGrammar {
    let mut names = taken_names(p);
    let mut nonterminals = p.nonterminals.clone();
    let mut fresh_for: BTreeMap<char, usize> = BTreeMap::new();
    let mut extra = Vec::new();
    let mut rules = Vec::with_capacity(p.rules.len());
    for (lhs, w) in &p.rules {
        if prusa_nnf_body(w) {
            rules.push((*lhs, w.clone()));
            continue;
        }
        let body = w.map(|s| match *s {
            KSym::N(x) => KSym::N(x),
            KSym::T(c) => KSym::N(*fresh_for.entry(c).or_insert_with(|| {
                nonterminals.push(names.fresh(&c.to_uppercase().to_string()));
                extra.push((nonterminals.len() - 1, Picture::filled(1, 1, KSym::T(c))));
                nonterminals.len() - 1
            })),
        });
        rules.push((*lhs, body));
    }
    rules.extend(extra);
    PrusaGrammar { terminals: p.terminals.clone(), nonterminals, start: p.start, rules }
}

/// Each rule body has repeated nonterminals renamed apart (the copies
/// reach the original through chain rules) and every cell blown up to a
/// 2x2 block inside a `#` frame.
pub fn prusa_to_rtg(p: &PrusaGrammar) -> Result<TileGrammar, ConvertError> {
    let mut names = taken_names(p);
    let mut nonterminals = p.nonterminals.clone();
    // copies[x][k] is the k-th renamed copy of x, shared across rules.
    let mut copies: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut chains = Vec::new();
    let mut rules = Vec::new();
    for (idx, (lhs, w)) in p.rules.iter().enumerate() {
        if !prusa_nnf_body(w) {
            return Err(ConvertError::NotNnf(idx));
        }
        if let (1, 1, KSym::T(t)) = (w.rows(), w.cols(), *w.get(1, 1)) {
            rules.push(Rule::Fixed { lhs: *lhs, rhs: t });
            continue;
        }
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let body = w.map(|s| {
            let KSym::N(x) = *s else { unreachable!("NNF body") };
            let k = seen.entry(x).or_insert(0);
            *k += 1;
            if *k == 1 {
                return Sym::new(x);
            }
            let list = copies.entry(x).or_default();
            while list.len() < *k - 1 {
                nonterminals.push(names.fresh(&p.nonterminals[x]));
                list.push(nonterminals.len() - 1);
                chains.push(Rule::Variable { lhs: nonterminals.len() - 1, body: chain_tiles(x) });
            }
            Sym::new(list[*k - 2])
        });
        let framed = Picture::from_fn(2 * w.rows() + 2, 2 * w.cols() + 2, |i, j| {
            if i == 1 || j == 1 || i == 2 * w.rows() + 2 || j == 2 * w.cols() + 2 {
                Sym::BORDER
            } else {
                *body.get(i / 2, j / 2)
            }
        });
        rules.push(Rule::Variable { lhs: *lhs, body: exemplar_tiles(&framed) });
    }
    rules.extend(chains);
    Ok(TileGrammar { terminals: p.terminals.clone(), nonterminals, start: p.start, rules })
}
