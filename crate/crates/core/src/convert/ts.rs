use crate::grammar::{Rule, TileGrammar};
use crate::names::FreshNames;
use crate::picture::{Cell, Sym, Tile, TileSet};

use super::TilingSystem;

/// Chessboard construction: every pixel of `Γ` is split into a `b` and a
/// `w` copy so that each derived region is a single pixel, and the
/// projection becomes a fixed-size rule per copy.
pub fn ts_to_tg(t: &TilingSystem) -> TileGrammar {
    let mut names = FreshNames::new(t.gamma.iter().cloned());
    for c in &t.sigma {
        names.reserve(&c.to_string());
    }
    let start = if names.is_taken("S") { names.fresh("S") } else { "S".to_string() };
    names.reserve(&start);
    let mut nonterminals = vec![start];
    let mut marked = Vec::new();
    for g in &t.gamma {
        let mut pair = [0; 2];
        for (k, m) in ["b", "w"].iter().enumerate() {
            let base = format!("{g}_{m}");
            let name = if names.is_taken(&base) { names.fresh(&base) } else { base };
            names.reserve(&name);
            pair[k] = nonterminals.len();
            nonterminals.push(name);
        }
        marked.push(pair);
    }

    // Phase 0 puts `b` at the tile's top-left pixel, phase 1 puts `w` there.
    let mut body = TileSet::new();
    for tile in t.theta.iter() {
        for phase in 0..2 {
            let mut cells = tile.0;
            for (pos, cell) in cells.iter_mut().enumerate() {
                if !cell.is_border() {
                    let parity = (pos / 2 + pos % 2 + phase) % 2;
                    *cell = Sym::new(marked[cell.index()][parity]);
                }
            }
            body.insert(Tile(cells));
        }
    }

    let mut rules = vec![Rule::Variable { lhs: 0, body }];
    for (g, pair) in marked.iter().enumerate() {
        for &nt in pair {
            rules.push(Rule::Fixed { lhs: nt, rhs: t.projection[g] });
        }
    }
    TileGrammar { terminals: t.sigma.clone(), nonterminals, start: 0, rules }
}
