//! `%format rtg` (alias `tg`): tile grammars.
//!
//! ```text
//! %format rtg
//! %start S
//! S -> { # # # # / # A B # / # # # # } + { ... }
//! A -> B          // chain rule
//! B -> 'b'
//! ```

use std::fmt::Write as _;

use super::{
    blocks_to_tiles, nonterminal_table, parse_tile_union, resolve_start, terminal_list, write_header, write_tile_union, Block,
    FormatError, Header, NameRef, Tok, Toks,
};
use crate::grammar::{chain_tiles, Rule, TileGrammar};
use crate::picture::{Sym, TileSet};

enum Rhs {
    Terminal(char),
    Chain(NameRef),
    Tiles(Vec<(Block, bool)>),
}

pub fn parse_rtg(text: &str) -> Result<TileGrammar, FormatError> {
    let mut t = Toks::new(text)?;
    let mut header = Header::default();
    let mut raw: Vec<(NameRef, Rhs)> = Vec::new();
    loop {
        t.skip_newlines();
        let tok = t.next();
        match tok.tok.clone() {
            Tok::Eof => break,
            Tok::Directive(d) => {
                if !header.directive(&d, &tok, &mut t)? {
                    return Err(Toks::error_at(&tok, format!("unknown directive '%{d}'")).into());
                }
            }
            Tok::Ident(lhs) => {
                t.expect(&Tok::Arrow)?;
                let rhs = match t.peek().tok.clone() {
                    Tok::Quoted(c) => {
                        t.next();
                        Rhs::Terminal(c)
                    }
                    Tok::Ident(b) => {
                        let bt = t.next();
                        Rhs::Chain(NameRef::from_token(b, &bt))
                    }
                    _ => Rhs::Tiles(parse_tile_union(&mut t)?),
                };
                t.end_of_line()?;
                raw.push((NameRef::from_token(lhs, &tok), rhs));
            }
            other => return Err(Toks::error_at(&tok, format!("expected a rule, found {other}")).into()),
        }
    }
    header.expect_format("rtg", &["tg"])?;

    let nt = nonterminal_table(&header, raw.iter().map(|(l, _)| l));
    let start = resolve_start(&header, &nt)?;
    let terminals = terminal_list(
        &header,
        raw.iter().filter_map(|(_, r)| if let Rhs::Terminal(c) = r { Some(*c) } else { None }),
    );
    let mut rules = Vec::with_capacity(raw.len());
    for (lhs, rhs) in &raw {
        let lhs = nt.resolve(lhs, "nonterminal")?;
        rules.push(match rhs {
            Rhs::Terminal(c) => Rule::Fixed { lhs, rhs: *c },
            Rhs::Chain(b) => Rule::Variable { lhs, body: chain_tiles(nt.resolve(b, "nonterminal")?) },
            Rhs::Tiles(blocks) => {
                Rule::Variable { lhs, body: blocks_to_tiles(blocks, |n| nt.resolve(n, "nonterminal").map(Sym::new))? }
            }
        });
    }
    let g = TileGrammar { terminals, nonterminals: nt.names, start, rules };
    g.check()?;
    Ok(g)
}

pub fn write_rtg(g: &TileGrammar) -> String {
    write_with_header(g, "rtg")
}

/// Same syntax, labelled as a general tile grammar.
pub fn write_tg(g: &TileGrammar) -> String {
    write_with_header(g, "tg")
}

fn write_with_header(g: &TileGrammar, format: &str) -> String {
    let mut out = String::new();
    write_header(&mut out, format, &g.nonterminals[g.start], &g.terminals, &g.nonterminals);
    for r in &g.rules {
        let lhs = &g.nonterminals[r.lhs()];
        let _ = match r {
            Rule::Fixed { rhs, .. } => writeln!(out, "{lhs} -> '{rhs}'"),
            Rule::Variable { body, .. } => writeln!(out, "{lhs} -> {}", write_body(g, body)),
        };
    }
    out
}

fn write_body(g: &TileGrammar, body: &TileSet<Sym>) -> String {
    if let [b] = body.alphabet().into_iter().collect::<Vec<_>>()[..] {
        if *body == chain_tiles(b.index()) {
            return g.nonterminals[b.index()].clone();
        }
    }
    write_tile_union(body, |s| g.nonterminals[s.index()].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::SyntaxError;

    const SMALL: &str = "%format rtg\n%start S\nS -> { # # # # / # A B # / # # # # }\nA -> 'a'\nB -> A\n";

    #[test]
    fn parses_rules_in_order() {
        let g = parse_rtg(SMALL).unwrap();
        assert_eq!(g.nonterminals, vec!["S", "A", "B"]);
        assert_eq!(g.terminals, vec!['a']);
        assert_eq!(g.rules.len(), 3);
        assert_eq!(g.rules[2], Rule::Variable { lhs: 2, body: chain_tiles(1) });
    }

    #[test]
    fn round_trip() {
        let g = parse_rtg(SMALL).unwrap();
        assert_eq!(parse_rtg(&write_rtg(&g)).unwrap(), g);
    }

    #[test]
    fn missing_frame_is_a_syntax_error() {
        let e = parse_rtg("%format rtg\n%start S\nS -> { A B C / A B C / A B C }\nA -> 'a'\nB -> 'a'\nC -> 'a'\n").unwrap_err();
        assert!(matches!(e, FormatError::Syntax(SyntaxError { line: 3, col: 6, .. })), "{e}");
    }

    #[test]
    fn unknown_nonterminal_reports_position() {
        let e = parse_rtg("%format rtg\nS -> { # # # / # Q # / # # # }\n").unwrap_err();
        assert!(matches!(e, FormatError::Syntax(SyntaxError { line: 2, col: 18, .. })), "{e}");
    }

    #[test]
    fn ragged_exemplar_is_rejected() {
        assert!(parse_rtg("%format rtg\nS -> { # # # / # S / # # # }\n").is_err());
    }

    #[test]
    fn interior_border_is_rejected() {
        let e = parse_rtg("%format rtg\nS -> { # # # # / # S # # / # # # # }\n").unwrap_err();
        assert!(e.to_string().contains("frame"), "{e}");
    }
}
