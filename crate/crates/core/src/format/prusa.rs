//! `%format prusa`: grammars whose bodies are pictures over names and
//! quoted terminals, e.g. `S -> { A V A / H 'b' H / A V A }`. A lone
//! terminal may be written without braces: `M -> 'a'`.

use std::fmt::Write as _;

use super::{
    nonterminal_table, resolve_start, terminal_list, write_header, Block, BlockCell, FormatError, Header, NameRef, Tok, Toks,
};
use crate::convert::{KSym, PrusaGrammar};
use crate::picture::Picture;

pub fn parse_prusa(text: &str) -> Result<PrusaGrammar, FormatError> {
    let mut t = Toks::new(text)?;
    let mut header = Header::default();
    let mut raw: Vec<(NameRef, Block)> = Vec::new();
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
                let body = match t.peek().tok {
                    Tok::LBrace => Block::parse(&mut t, Tok::RBrace)?,
                    Tok::Quoted(c) => {
                        let open = t.next();
                        Block { open, rows: vec![vec![BlockCell::Term(c)]] }
                    }
                    _ => return Err(t.unexpected("'{' or a quoted terminal").into()),
                };
                if body.rows.iter().flatten().any(|c| *c == BlockCell::Hash) {
                    return Err(Toks::error_at(&body.open, "'#' cannot appear in a body").into());
                }
                t.end_of_line()?;
                raw.push((NameRef::from_token(lhs, &tok), body));
            }
            other => return Err(Toks::error_at(&tok, format!("expected a rule, found {other}")).into()),
        }
    }
    header.expect_format("prusa", &[])?;
    let nt = nonterminal_table(&header, raw.iter().map(|(l, _)| l));
    let start = resolve_start(&header, &nt)?;
    let terminals = terminal_list(
        &header,
        raw.iter().flat_map(|(_, b)| b.rows.iter().flatten()).filter_map(|c| if let BlockCell::Term(c) = c { Some(*c) } else { None }),
    );
    let mut rules = Vec::with_capacity(raw.len());
    for (lhs, b) in &raw {
        let mut grid = Vec::new();
        for row in &b.rows {
            let mut r = Vec::new();
            for c in row {
                r.push(match c {
                    BlockCell::Term(c) => KSym::T(*c),
                    BlockCell::Name(n) => KSym::N(nt.resolve(n, "nonterminal")?),
                    BlockCell::Hash => unreachable!("rejected above"),
                });
            }
            grid.push(r);
        }
        let body = Picture::from_grid(grid).map_err(|e| Toks::error_at(&b.open, e.to_string()))?;
        rules.push((nt.resolve(lhs, "nonterminal")?, body));
    }
    Ok(PrusaGrammar { terminals, nonterminals: nt.names, start, rules })
}

pub fn write_prusa(g: &PrusaGrammar) -> String {
    let mut out = String::new();
    write_header(&mut out, "prusa", &g.nonterminals[g.start], &g.terminals, &g.nonterminals);
    let sym = |s: &KSym| match s {
        KSym::T(c) => format!("'{c}'"),
        KSym::N(x) => g.nonterminals[*x].clone(),
    };
    for (lhs, w) in &g.rules {
        let rows: Vec<String> = (1..=w.rows()).map(|i| w.row(i).iter().map(sym).collect::<Vec<_>>().join(" ")).collect();
        let _ = writeln!(out, "{} -> {{ {} }}", g.nonterminals[*lhs], rows.join(" / "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CROSS: &str = "%format prusa
%start S
S -> { A V A / H 'b' H / A V A }
A -> 'a'
V -> 'b'
H -> 'b'
";

    #[test]
    fn parses_picture_bodies() {
        let g = parse_prusa(CROSS).unwrap();
        assert_eq!(g.nonterminals, vec!["S", "A", "V", "H"]);
        assert_eq!(g.rules[0].1.size(), (3, 3));
        assert_eq!(*g.rules[0].1.get(2, 2), KSym::T('b'));
        assert_eq!(g.rules[1].1, Picture::filled(1, 1, KSym::T('a')));
        assert!(!g.is_nnf());
        assert_eq!(parse_prusa(&write_prusa(&g)).unwrap(), g);
    }
}
