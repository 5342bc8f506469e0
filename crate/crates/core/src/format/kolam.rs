//! `%format kolam`: context-free Kolam grammars.
//!
//! `(B || C)` places `C` right of `B`, `(B -- C)` places `C` below `B`.
//! A group may chain one operator, `(A || B || C)`, read left to right.

use std::fmt::Write as _;

use super::{nonterminal_table, resolve_start, terminal_list, write_header, FormatError, Header, NameRef, NameTable, Tok, Toks};
use crate::convert::{Form, KolamGrammar};

enum RawForm {
    T(char),
    N(NameRef),
    H(Box<RawForm>, Box<RawForm>),
    V(Box<RawForm>, Box<RawForm>),
}

impl RawForm {
    fn resolve(&self, nt: &NameTable) -> Result<Form, super::SyntaxError> {
        Ok(match self {
            RawForm::T(c) => Form::t(*c),
            RawForm::N(n) => Form::n(nt.resolve(n, "nonterminal")?),
            RawForm::H(a, b) => Form::h(a.resolve(nt)?, b.resolve(nt)?),
            RawForm::V(a, b) => Form::v(a.resolve(nt)?, b.resolve(nt)?),
        })
    }

    fn terminals(&self, out: &mut Vec<char>) {
        match self {
            RawForm::T(c) => out.push(*c),
            RawForm::N(_) => {}
            RawForm::H(a, b) | RawForm::V(a, b) => {
                a.terminals(out);
                b.terminals(out);
            }
        }
    }
}

fn parse_form(t: &mut Toks) -> Result<RawForm, super::SyntaxError> {
    let tok = t.next();
    match tok.tok.clone() {
        Tok::Quoted(c) => Ok(RawForm::T(c)),
        Tok::Ident(s) => Ok(RawForm::N(NameRef::from_token(s, &tok))),
        Tok::LParen => {
            let mut acc = parse_form(t)?;
            let op = t.peek().tok.clone();
            if op != Tok::Bar2 && op != Tok::Dash2 {
                return Err(t.unexpected("'||' or '--'"));
            }
            while t.eat(&op) {
                let rhs = parse_form(t)?;
                acc = if op == Tok::Bar2 { RawForm::H(Box::new(acc), Box::new(rhs)) } else { RawForm::V(Box::new(acc), Box::new(rhs)) };
            }
            t.expect(&Tok::RParen)?;
            Ok(acc)
        }
        other => Err(Toks::error_at(&tok, format!("expected a form, found {other}"))),
    }
}

pub fn parse_kolam(text: &str) -> Result<KolamGrammar, FormatError> {
    let mut t = Toks::new(text)?;
    let mut header = Header::default();
    let mut raw: Vec<(NameRef, RawForm)> = Vec::new();
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
                let f = parse_form(&mut t)?;
                t.end_of_line()?;
                raw.push((NameRef::from_token(lhs, &tok), f));
            }
            other => return Err(Toks::error_at(&tok, format!("expected a rule, found {other}")).into()),
        }
    }
    header.expect_format("kolam", &[])?;
    let nt = nonterminal_table(&header, raw.iter().map(|(l, _)| l));
    let start = resolve_start(&header, &nt)?;
    let mut seen = Vec::new();
    for (_, f) in &raw {
        f.terminals(&mut seen);
    }
    let terminals = terminal_list(&header, seen);
    let rules = raw
        .iter()
        .map(|(l, f)| Ok((nt.resolve(l, "nonterminal")?, f.resolve(&nt)?)))
        .collect::<Result<Vec<_>, super::SyntaxError>>()?;
    Ok(KolamGrammar { terminals, nonterminals: nt.names, start, rules })
}

pub fn write_kolam(g: &KolamGrammar) -> String {
    let mut out = String::new();
    write_header(&mut out, "kolam", &g.nonterminals[g.start], &g.terminals, &g.nonterminals);
    for (lhs, f) in &g.rules {
        let _ = writeln!(out, "{} -> {}", g.nonterminals[*lhs], g.display_form(f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_forms() {
        let g = parse_kolam("%format kolam\n%start S\nS -> ((A || B) -- 'c')\nA -> 'a'\nB -> 'b'\n").unwrap();
        assert_eq!(g.nonterminals, vec!["S", "A", "B"]);
        assert_eq!(g.terminals, vec!['c', 'a', 'b']);
        assert_eq!(g.rules[0].1, Form::v(Form::h(Form::n(1), Form::n(2)), Form::t('c')));
        assert_eq!(parse_kolam(&write_kolam(&g)).unwrap(), g);
    }

    #[test]
    fn chained_group_folds_left() {
        let g = parse_kolam("%format kolam\nS -> (A || A || A)\nA -> 'a'\n").unwrap();
        assert_eq!(g.rules[0].1, Form::h(Form::h(Form::n(1), Form::n(1)), Form::n(1)));
    }

    #[test]
    fn mixed_operators_need_parentheses() {
        assert!(parse_kolam("%format kolam\nS -> (A || A -- A)\nA -> 'a'\n").is_err());
    }
}
