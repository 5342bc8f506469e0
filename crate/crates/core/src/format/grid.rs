//! `%format grid`: `A -> [S, B, S, B, B, B, S, B, S] k=3` lists a `k x k`
//! grid bottom row first, each row left to right; `k` may be omitted.
//! Terminal rules are `A -> 'a'`.

use std::fmt::Write as _;

use super::{nonterminal_table, resolve_start, terminal_list, write_header, FormatError, Header, NameRef, Tok, Toks};
use crate::convert::{GridGrammar, GridRule, KSym};

enum RawCell {
    T(char),
    N(NameRef),
}

enum RawRule {
    Terminal(char),
    Grid(usize, Vec<RawCell>),
}

pub fn parse_grid(text: &str) -> Result<GridGrammar, FormatError> {
    let mut t = Toks::new(text)?;
    let mut header = Header::default();
    let mut raw: Vec<(NameRef, RawRule)> = Vec::new();
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
                let rule = match t.peek().tok {
                    Tok::Quoted(c) => {
                        t.next();
                        RawRule::Terminal(c)
                    }
                    Tok::LBracket => {
                        let open = t.next();
                        let mut cells = Vec::new();
                        loop {
                            let c = t.next();
                            cells.push(match c.tok.clone() {
                                Tok::Quoted(x) => RawCell::T(x),
                                Tok::Ident(s) => RawCell::N(NameRef::from_token(s, &c)),
                                _ => return Err(Toks::error_at(&c, format!("expected a grid cell, found {}", c.tok)).into()),
                            });
                            if t.eat(&Tok::RBracket) {
                                break;
                            }
                            t.expect(&Tok::Comma)?;
                        }
                        let k = (1..=cells.len()).find(|k| k * k >= cells.len()).unwrap_or(1);
                        if let Tok::Ident(s) = &t.peek().tok {
                            if s == "k" {
                                t.next();
                                t.expect(&Tok::Eq)?;
                                let (num, nt) = t.ident()?;
                                let given: usize = num.parse().map_err(|_| Toks::error_at(&nt, "k must be a number"))?;
                                if given != k || k * k != cells.len() {
                                    return Err(Toks::error_at(&nt, format!("k={given} does not match {} cells", cells.len())).into());
                                }
                            }
                        }
                        if k * k != cells.len() || k < 2 {
                            return Err(Toks::error_at(&open, format!("{} cells do not form a k x k grid with k >= 2", cells.len())).into());
                        }
                        RawRule::Grid(k, cells)
                    }
                    _ => return Err(t.unexpected("'[' or a quoted terminal").into()),
                };
                t.end_of_line()?;
                raw.push((NameRef::from_token(lhs, &tok), rule));
            }
            other => return Err(Toks::error_at(&tok, format!("expected a rule, found {other}")).into()),
        }
    }
    header.expect_format("grid", &[])?;
    let nt = nonterminal_table(&header, raw.iter().map(|(l, _)| l));
    let start = resolve_start(&header, &nt)?;
    let seen = raw.iter().flat_map(|(_, r)| match r {
        RawRule::Terminal(c) => vec![*c],
        RawRule::Grid(_, cells) => cells.iter().filter_map(|c| if let RawCell::T(x) = c { Some(*x) } else { None }).collect(),
    });
    let terminals = terminal_list(&header, seen);
    let mut rules = Vec::new();
    for (lhs, r) in &raw {
        let lhs = nt.resolve(lhs, "nonterminal")?;
        rules.push(match r {
            RawRule::Terminal(c) => GridRule::Terminal { lhs, t: *c },
            RawRule::Grid(k, cells) => GridRule::Grid {
                lhs,
                k: *k,
                cells: cells
                    .iter()
                    .map(|c| match c {
                        RawCell::T(x) => Ok(KSym::T(*x)),
                        RawCell::N(n) => nt.resolve(n, "nonterminal").map(KSym::N),
                    })
                    .collect::<Result<_, _>>()?,
            },
        });
    }
    Ok(GridGrammar { terminals, nonterminals: nt.names, start, rules })
}

pub fn write_grid(g: &GridGrammar) -> String {
    let mut out = String::new();
    write_header(&mut out, "grid", &g.nonterminals[g.start], &g.terminals, &g.nonterminals);
    for r in &g.rules {
        let _ = match r {
            GridRule::Terminal { lhs, t } => writeln!(out, "{} -> '{t}'", g.nonterminals[*lhs]),
            GridRule::Grid { lhs, k, cells } => {
                let cs: Vec<String> = cells
                    .iter()
                    .map(|c| match c {
                        KSym::T(x) => format!("'{x}'"),
                        KSym::N(x) => g.nonterminals[*x].clone(),
                    })
                    .collect();
                writeln!(out, "{} -> [{}] k={k}", g.nonterminals[*lhs], cs.join(", "))
            }
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let g = parse_grid("%format grid\n%start S\nS -> [S, B, S, B, B, B, S, B, S] k=3\nS -> 'a'\nB -> 'b'\n").unwrap();
        assert_eq!(g.nonterminals, vec!["S", "B"]);
        let GridRule::Grid { k, .. } = &g.rules[0] else { panic!() };
        assert_eq!(*k, 3);
        assert_eq!(g.rules[0].cell(1, 2), Some(KSym::N(1)));
        assert_eq!(parse_grid(&write_grid(&g)).unwrap(), g);
    }

    #[test]
    fn k_is_inferred_and_checked() {
        let g = parse_grid("%format grid\nS -> [S, S, S, S]\nS -> 'a'\n").unwrap();
        assert!(matches!(g.rules[0], GridRule::Grid { k: 2, .. }));
        assert!(parse_grid("%format grid\nS -> [S, S, S, S] k=3\nS -> 'a'\n").is_err());
        assert!(parse_grid("%format grid\nS -> [S, S, S]\nS -> 'a'\n").is_err());
    }
}
