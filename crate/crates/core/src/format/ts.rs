//! `%format ts`: tiling systems.
//!
//! ```text
//! %format ts
//! %tiles { # # # / # 1 # / # # # } + { ... }
//! %project 1 -> a
//! ```

use std::fmt::Write as _;

use super::{blocks_to_tiles, parse_tile_union, write_tile_union, Block, FormatError, NameRef, NameTable, Tok, Toks};
use crate::convert::TilingSystem;
use crate::picture::Sym;

pub fn parse_ts(text: &str) -> Result<TilingSystem, FormatError> {
    let mut t = Toks::new(text)?;
    let mut format = None;
    let mut sigma: Vec<char> = Vec::new();
    let mut gamma = NameTable::default();
    let mut blocks: Vec<(Block, bool)> = Vec::new();
    let mut projections: Vec<(NameRef, char)> = Vec::new();
    loop {
        t.skip_newlines();
        let tok = t.next();
        let Tok::Directive(d) = tok.tok.clone() else {
            if tok.tok == Tok::Eof {
                break;
            }
            return Err(Toks::error_at(&tok, format!("expected a directive, found {}", tok.tok)).into());
        };
        match d.as_str() {
            "format" => format = Some(t.ident()?.0),
            "terminals" => {
                while let Tok::Quoted(c) = t.peek().tok {
                    t.next();
                    if !sigma.contains(&c) {
                        sigma.push(c);
                    }
                }
            }
            "gamma" => {
                while let Tok::Ident(s) = t.peek().tok.clone() {
                    t.next();
                    gamma.add(&s);
                }
            }
            "tiles" => {
                let bs = parse_tile_union(&mut t)?;
                for (b, _) in &bs {
                    for cell in b.rows.iter().flatten() {
                        if let super::BlockCell::Name(n) = cell {
                            gamma.add(&n.name);
                        }
                    }
                }
                blocks.extend(bs);
            }
            "project" => {
                let (g, gt) = t.ident()?;
                t.expect(&Tok::Arrow)?;
                let c = match t.peek().tok.clone() {
                    Tok::Quoted(c) => c,
                    Tok::Ident(s) if s.chars().count() == 1 => s.chars().next().unwrap(),
                    _ => return Err(t.unexpected("a terminal").into()),
                };
                t.next();
                projections.push((NameRef::from_token(g, &gt), c));
            }
            _ => return Err(Toks::error_at(&tok, format!("unknown directive '%{d}'")).into()),
        }
        t.end_of_line()?;
    }
    match format.as_deref() {
        Some("ts") => {}
        Some(f) => return Err(FormatError::WrongFormat { expected: "ts", found: f.to_string() }),
        None => return Err(super::SyntaxError { line: 1, col: 1, msg: "missing '%format' line".into() }.into()),
    }
    let theta = blocks_to_tiles(&blocks, |n| gamma.resolve(n, "tile symbol").map(Sym::new))?;
    let mut projection: Vec<Option<char>> = vec![None; gamma.names.len()];
    for (g, c) in &projections {
        let k = gamma.resolve(g, "tile symbol")?;
        if projection[k].is_some_and(|x| x != *c) {
            return Err(g.error(format!("'{}' projected twice", g.name)).into());
        }
        projection[k] = Some(*c);
        if !sigma.contains(c) {
            sigma.push(*c);
        }
    }
    let projection = projection
        .into_iter()
        .enumerate()
        .map(|(k, p)| {
            p.ok_or_else(|| super::SyntaxError { line: 1, col: 1, msg: format!("no '%project' for '{}'", gamma.names[k]) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TilingSystem { sigma, gamma: gamma.names, theta, projection })
}

pub fn write_ts(t: &TilingSystem) -> String {
    let mut out = String::from("%format ts\n");
    let ts: Vec<String> = t.sigma.iter().map(|c| format!("'{c}'")).collect();
    let _ = writeln!(out, "%terminals {}", ts.join(" "));
    let _ = writeln!(out, "%gamma {}", t.gamma.join(" "));
    if !t.theta.is_empty() {
        let _ = writeln!(out, "%tiles {}", write_tile_union(&t.theta, |s| t.gamma[s.index()].clone()));
    }
    for (g, c) in t.gamma.iter().zip(&t.projection) {
        let _ = writeln!(out, "%project {g} -> '{c}'");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAG: &str = "%format ts
%tiles { # # # # # # / # 1 0 0 0 # / # 0 1 0 0 # / # 0 0 1 0 # / # 0 0 0 1 # / # # # # # # }
%project 0 -> 'a'
%project 1 -> 'a'
";

    #[test]
    fn parses_and_round_trips() {
        let t = parse_ts(DIAG).unwrap();
        assert_eq!(t.gamma, vec!["1", "0"]);
        assert_eq!(t.sigma, vec!['a']);
        assert_eq!(parse_ts(&write_ts(&t)).unwrap(), t);
    }

    #[test]
    fn projection_must_be_total() {
        let e = parse_ts("%format ts\n%tiles { # # # / # x # / # # # }\n").unwrap_err();
        assert!(e.to_string().contains("project"), "{e}");
    }
}
