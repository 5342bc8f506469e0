//! `%format matrix`: a horizontal string grammar over column names and
//! one vertical string grammar per column, each vertical string read top
//! to bottom.
//!
//! ```text
//! %format matrix
//! %section horizontal
//! S -> A1 S A1
//! S -> A2
//! %section vertical A1
//! A1 -> 'b' A
//! ...
//! ```

use std::fmt::Write as _;

use super::{FormatError, NameRef, NameTable, SyntaxError, Tok, Toks};
use crate::convert::{MatrixGrammar, StrSym, StringGrammar};

enum RawSym {
    T(char),
    N(NameRef),
}

#[derive(Default)]
struct Section {
    /// `None` for the horizontal section.
    column: Option<NameRef>,
    start: Option<NameRef>,
    nonterminals: Vec<String>,
    rules: Vec<(NameRef, Vec<RawSym>)>,
}

impl Section {
    fn table(&self) -> NameTable {
        let mut nt = NameTable::default();
        if let Some(c) = &self.column {
            if self.nonterminals.is_empty() {
                nt.add(&c.name);
            }
        }
        for n in &self.nonterminals {
            nt.add(n);
        }
        for (l, _) in &self.rules {
            nt.add(&l.name);
        }
        nt
    }
}

fn current_section<'a>(h: &'a mut Option<Section>, cols: &'a mut [Section], horizontal: Option<bool>) -> Option<&'a mut Section> {
    match horizontal {
        Some(true) => h.as_mut(),
        Some(false) => cols.last_mut(),
        None => None,
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixGrammar, FormatError> {
    let mut t = Toks::new(text)?;
    let mut format = None;
    let mut terminals: Vec<char> = Vec::new();
    let mut horizontal: Option<Section> = None;
    let mut columns: Vec<Section> = Vec::new();
    let mut current: Option<bool> = None;
    loop {
        t.skip_newlines();
        let tok = t.next();
        match tok.tok.clone() {
            Tok::Eof => break,
            Tok::Directive(d) => {
                match d.as_str() {
                    "format" => format = Some(t.ident()?.0),
                    "terminals" => {
                        while let Tok::Quoted(c) = t.peek().tok {
                            t.next();
                            if !terminals.contains(&c) {
                                terminals.push(c);
                            }
                        }
                    }
                    "section" => {
                        let (kind, kt) = t.ident()?;
                        match kind.as_str() {
                            "horizontal" => {
                                if horizontal.is_some() {
                                    return Err(Toks::error_at(&kt, "duplicate horizontal section").into());
                                }
                                horizontal = Some(Section::default());
                                current = Some(true);
                            }
                            "vertical" => {
                                let (name, nt) = t.ident()?;
                                if columns.iter().any(|c| c.column.as_ref().is_some_and(|x| x.name == name)) {
                                    return Err(Toks::error_at(&nt, format!("duplicate section for column '{name}'")).into());
                                }
                                columns.push(Section { column: Some(NameRef::from_token(name, &nt)), ..Section::default() });
                                current = Some(false);
                            }
                            _ => return Err(Toks::error_at(&kt, "expected 'horizontal' or 'vertical'").into()),
                        }
                    }
                    "start" | "nonterminals" => {
                        let Some(s) = current_section(&mut horizontal, &mut columns, current) else {
                            return Err(Toks::error_at(&tok, format!("'%{d}' outside a section")).into());
                        };
                        if d == "start" {
                            let (n, nt) = t.ident()?;
                            if s.column.is_some() {
                                return Err(Toks::error_at(&nt, "a vertical section starts at its column name").into());
                            }
                            s.start = Some(NameRef::from_token(n, &nt));
                        } else {
                            while let Tok::Ident(n) = t.peek().tok.clone() {
                                t.next();
                                s.nonterminals.push(n);
                            }
                        }
                    }
                    _ => return Err(Toks::error_at(&tok, format!("unknown directive '%{d}'")).into()),
                }
                t.end_of_line()?;
            }
            Tok::Ident(lhs) => {
                let Some(s) = current_section(&mut horizontal, &mut columns, current) else {
                    return Err(Toks::error_at(&tok, "rule outside a section").into());
                };
                t.expect(&Tok::Arrow)?;
                let mut body = Vec::new();
                while !t.at_line_end() {
                    let c = t.next();
                    body.push(match c.tok.clone() {
                        Tok::Quoted(x) => RawSym::T(x),
                        Tok::Ident(n) => RawSym::N(NameRef::from_token(n, &c)),
                        _ => return Err(Toks::error_at(&c, format!("expected a symbol, found {}", c.tok)).into()),
                    });
                }
                t.end_of_line()?;
                s.rules.push((NameRef::from_token(lhs, &tok), body));
            }
            other => return Err(Toks::error_at(&tok, format!("expected a rule, found {other}")).into()),
        }
    }
    match format.as_deref() {
        Some("matrix") => {}
        Some(f) => return Err(FormatError::WrongFormat { expected: "matrix", found: f.to_string() }),
        None => return Err(SyntaxError { line: 1, col: 1, msg: "missing '%format' line".into() }.into()),
    }
    let h = horizontal.ok_or(SyntaxError { line: 1, col: 1, msg: "missing '%section horizontal'".into() })?;

    let col_names: Vec<&NameRef> = columns.iter().map(|c| c.column.as_ref().unwrap()).collect();
    let h_nt = h.table();
    for c in &col_names {
        if h_nt.get(&c.name).is_some() {
            return Err(c.error(format!("'{}' is both a column and a horizontal nonterminal", c.name)).into());
        }
    }
    let h_start = match &h.start {
        Some(s) => h_nt.resolve(s, "nonterminal")?,
        None if !h_nt.names.is_empty() => 0,
        None => return Err(SyntaxError { line: 1, col: 1, msg: "empty horizontal section".into() }.into()),
    };
    let mut h_rules = Vec::new();
    for (lhs, body) in &h.rules {
        let mut out = Vec::new();
        for s in body {
            out.push(match s {
                RawSym::T(_) => return Err(lhs.error("terminals cannot appear in the horizontal grammar").into()),
                RawSym::N(n) => match h_nt.get(&n.name) {
                    Some(x) => StrSym::N(x),
                    None => StrSym::T(
                        col_names.iter().position(|c| c.name == n.name).ok_or_else(|| n.error(format!("unknown symbol '{}'", n.name)))?,
                    ),
                },
            });
        }
        h_rules.push((h_nt.resolve(lhs, "nonterminal")?, out));
    }
    let horizontal = StringGrammar { nonterminals: h_nt.names, start: h_start, rules: h_rules };

    let mut cols = Vec::new();
    for c in &columns {
        let name = c.column.clone().unwrap();
        let nt = c.table();
        let start = nt.resolve(&name, "column start")?;
        let mut rules = Vec::new();
        for (lhs, body) in &c.rules {
            let mut out = Vec::new();
            for s in body {
                out.push(match s {
                    RawSym::T(x) => {
                        if !terminals.contains(x) {
                            terminals.push(*x);
                        }
                        StrSym::T(*x)
                    }
                    RawSym::N(n) => StrSym::N(nt.resolve(n, "nonterminal")?),
                });
            }
            rules.push((nt.resolve(lhs, "nonterminal")?, out));
        }
        cols.push((name.name, StringGrammar { nonterminals: nt.names, start, rules }));
    }
    Ok(MatrixGrammar { terminals, horizontal, columns: cols })
}

pub fn write_matrix(m: &MatrixGrammar) -> String {
    let mut out = String::from("%format matrix\n");
    let ts: Vec<String> = m.terminals.iter().map(|c| format!("'{c}'")).collect();
    let _ = writeln!(out, "%terminals {}", ts.join(" "));
    let h = &m.horizontal;
    let _ = writeln!(out, "%section horizontal");
    let _ = writeln!(out, "%start {}", h.nonterminals[h.start]);
    let _ = writeln!(out, "%nonterminals {}", h.nonterminals.join(" "));
    for (lhs, body) in &h.rules {
        let syms: Vec<&str> = body
            .iter()
            .map(|s| match s {
                StrSym::N(x) => h.nonterminals[*x].as_str(),
                StrSym::T(c) => m.columns[*c].0.as_str(),
            })
            .collect();
        let _ = writeln!(out, "{} -> {}", h.nonterminals[*lhs], syms.join(" "));
    }
    for (name, g) in &m.columns {
        let _ = writeln!(out, "%section vertical {name}");
        let _ = writeln!(out, "%nonterminals {}", g.nonterminals.join(" "));
        for (lhs, body) in &g.rules {
            let syms: Vec<String> = body
                .iter()
                .map(|s| match s {
                    StrSym::N(x) => g.nonterminals[*x].clone(),
                    StrSym::T(c) => format!("'{c}'"),
                })
                .collect();
            let _ = writeln!(out, "{} -> {}", g.nonterminals[*lhs], syms.join(" "));
        }
    }
    out
}
