//! Text formats for grammars, tiling systems and pictures.
//!
//! Every grammar file starts with a `%format <name>` line. Lines are
//! rules `A -> ...` or `%directive` lines; `//` starts a comment.

pub mod grid;
pub mod kolam;
pub mod matrix;
pub mod prusa;
pub mod rtg;
pub mod ts;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::convert::{GridGrammar, KolamGrammar, MatrixGrammar, PrusaGrammar, TilingSystem};
use crate::grammar::{GrammarError, TileGrammar};
use crate::local::search_local;
use crate::picture::{bordered, tiles_of, Cell, Picture, PictureError, Tile, TileSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("bad picture: {0}")]
    Picture(#[from] PictureError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("expected a {expected} file, found format '{found}'")]
    WrongFormat { expected: &'static str, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Quoted(char),
    Directive(String),
    Hash,
    Arrow,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Slash,
    Bar2,
    Dash2,
    Eq,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Quoted(c) => write!(f, "terminal '{c}'"),
            Tok::Directive(d) => write!(f, "%{d}"),
            Tok::Hash => f.write_str("'#'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Bar2 => f.write_str("'||'"),
            Tok::Dash2 => f.write_str("'--'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of file"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Names the writers emit must lex back as one identifier.
pub fn is_plain_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphanumeric() || c == '_') && cs.all(is_name_char)
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            let col = k + 1;
            let at = |tok| Token { tok, line: ln + 1, col };
            let next = chars.get(k + 1).copied();
            if c.is_whitespace() {
                k += 1;
                continue;
            }
            if c == '/' && next == Some('/') {
                break;
            }
            let (tok, len) = match (c, next) {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('-', Some('-')) => (Tok::Dash2, 2),
                ('|', Some('|')) => (Tok::Bar2, 2),
                ('#', _) => (Tok::Hash, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                ('+', _) => (Tok::Plus, 1),
                ('/', _) => (Tok::Slash, 1),
                ('=', _) => (Tok::Eq, 1),
                ('\'', _) => {
                    if chars.get(k + 2) != Some(&'\'') || next.is_none() {
                        return Err(SyntaxError { line: ln + 1, col, msg: "unterminated terminal literal".into() });
                    }
                    (Tok::Quoted(next.unwrap()), 3)
                }
                ('%', _) => {
                    let len = chars[k + 1..].iter().take_while(|c| is_name_char(**c)).count();
                    if len == 0 {
                        return Err(SyntaxError { line: ln + 1, col, msg: "empty directive".into() });
                    }
                    (Tok::Directive(chars[k + 1..k + 1 + len].iter().collect()), len + 1)
                }
                _ if c.is_alphanumeric() || c == '_' => {
                    let len = chars[k..].iter().take_while(|c| is_name_char(**c)).count();
                    (Tok::Ident(chars[k..k + len].iter().collect()), len)
                }
                _ => return Err(SyntaxError { line: ln + 1, col, msg: format!("unexpected character '{c}'") }),
            };
            out.push(at(tok));
            k += len;
        }
        out.push(Token { tok: Tok::Newline, line: ln + 1, col: chars.len() + 1 });
    }
    let last = out.last().map_or(1, |t| t.line + 1);
    out.push(Token { tok: Tok::Eof, line: last, col: 1 });
    Ok(out)
}

/// Cursor over a token stream.
pub struct Toks {
    toks: Vec<Token>,
    pos: usize,
}

impl Toks {
    pub fn new(text: &str) -> Result<Toks, SyntaxError> {
        Ok(Toks { toks: tokenize(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn error_at(t: &Token, msg: impl Into<String>) -> SyntaxError {
        SyntaxError { line: t.line, col: t.col, msg: msg.into() }
    }

    pub fn unexpected(&self, wanted: &str) -> SyntaxError {
        let t = self.peek();
        Self::error_at(t, format!("expected {wanted}, found {}", t.tok))
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Token, SyntaxError> {
        if &self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub fn ident(&mut self) -> Result<(String, Token), SyntaxError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => Ok((s, self.next())),
            _ => Err(self.unexpected("a name")),
        }
    }

    pub fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.next();
        }
    }

    pub fn end_of_line(&mut self) -> Result<(), SyntaxError> {
        match self.peek().tok {
            Tok::Newline => {
                self.next();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of line")),
        }
    }

    pub fn at_line_end(&self) -> bool {
        matches!(self.peek().tok, Tok::Newline | Tok::Eof)
    }
}

/// A name occurrence with its position, resolved after the whole file is read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameRef {
    pub name: String,
    pub line: usize,
    pub col: usize,
}

impl NameRef {
    pub fn from_token(name: String, t: &Token) -> Self {
        NameRef { name, line: t.line, col: t.col }
    }

    pub fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError { line: self.line, col: self.col, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockCell {
    Hash,
    Name(NameRef),
    Term(char),
}

/// A `{ ... }` or `[ ... ]` picture block: rows split on `/` or line breaks.
#[derive(Debug, Clone)]
pub struct Block {
    pub open: Token,
    pub rows: Vec<Vec<BlockCell>>,
}

impl Block {
    pub fn parse(t: &mut Toks, close: Tok) -> Result<Block, SyntaxError> {
        let open = t.next();
        let mut rows = vec![Vec::new()];
        loop {
            let tok = t.next();
            match tok.tok.clone() {
                ref c if *c == close => break,
                Tok::Slash | Tok::Newline => rows.push(Vec::new()),
                Tok::Hash => rows.last_mut().unwrap().push(BlockCell::Hash),
                Tok::Ident(s) => rows.last_mut().unwrap().push(BlockCell::Name(NameRef::from_token(s, &tok))),
                Tok::Quoted(c) => rows.last_mut().unwrap().push(BlockCell::Term(c)),
                Tok::Eof => return Err(Toks::error_at(&open, "unclosed block")),
                other => return Err(Toks::error_at(&tok, format!("unexpected {other} in block"))),
            }
        }
        rows.retain(|r| !r.is_empty());
        if rows.is_empty() {
            return Err(Toks::error_at(&open, "empty block"));
        }
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(Toks::error_at(&open, "ragged block: rows differ in length"));
        }
        Ok(Block { open, rows })
    }

    pub fn size(&self) -> (usize, usize) {
        (self.rows.len(), self.rows[0].len())
    }

    /// A framed exemplar: `#` on the whole boundary and nowhere inside.
    pub fn check_framed(&self) -> Result<(), SyntaxError> {
        let (m, n) = self.size();
        if m < 3 || n < 3 {
            return Err(Toks::error_at(&self.open, "exemplar must be at least 3x3 including its '#' frame"));
        }
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let edge = i == 0 || j == 0 || i == m - 1 || j == n - 1;
                match (edge, c) {
                    (true, BlockCell::Hash) | (false, BlockCell::Name(_)) => {}
                    (true, _) => return Err(Toks::error_at(&self.open, "exemplar is missing its '#' frame")),
                    (false, BlockCell::Hash) => {
                        return Err(Toks::error_at(&self.open, "'#' may only appear on the exemplar frame"))
                    }
                    (false, BlockCell::Term(_)) => {
                        return Err(Toks::error_at(&self.open, "terminals cannot appear in a variable-size body"))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_tile(&self) -> Result<(), SyntaxError> {
        if self.size() != (2, 2) {
            return Err(Toks::error_at(&self.open, "a raw tile must be 2x2"));
        }
        if self.rows.iter().flatten().any(|c| matches!(c, BlockCell::Term(_))) {
            return Err(Toks::error_at(&self.open, "terminals cannot appear in a variable-size body"));
        }
        Ok(())
    }
}

/// Parses `{ framed } + [ raw tile ] + ...` into blocks; each is checked.
pub fn parse_tile_union(t: &mut Toks) -> Result<Vec<(Block, bool)>, SyntaxError> {
    let mut out = Vec::new();
    loop {
        match t.peek().tok {
            Tok::LBrace => {
                let b = Block::parse(t, Tok::RBrace)?;
                b.check_framed()?;
                out.push((b, true));
            }
            Tok::LBracket => {
                let b = Block::parse(t, Tok::RBracket)?;
                b.check_tile()?;
                out.push((b, false));
            }
            _ => return Err(t.unexpected("'{' or '['")),
        }
        if !t.eat(&Tok::Plus) {
            return Ok(out);
        }
        t.skip_newlines();
    }
}

/// Tile set of parsed blocks, with `lookup` resolving names.
pub fn blocks_to_tiles<T: Cell>(
    blocks: &[(Block, bool)],
    mut lookup: impl FnMut(&NameRef) -> Result<T, SyntaxError>,
) -> Result<TileSet<T>, SyntaxError> {
    let mut out = TileSet::new();
    for (b, _) in blocks {
        let mut grid = Vec::new();
        for row in &b.rows {
            let mut r = Vec::new();
            for c in row {
                r.push(match c {
                    BlockCell::Hash => T::BORDER,
                    BlockCell::Name(n) => lookup(n)?,
                    BlockCell::Term(_) => unreachable!("checked"),
                });
            }
            grid.push(r);
        }
        let p = Picture::from_grid(grid).map_err(|e| Toks::error_at(&b.open, e.to_string()))?;
        out = out.union(&tiles_of(&p).map_err(|e| Toks::error_at(&b.open, e.to_string()))?);
    }
    Ok(out)
}

/// Declared-or-discovered name order: `declared` first, then names in
/// order of first appearance.
#[derive(Debug, Default)]
pub struct NameTable {
    pub names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl NameTable {
    pub fn add(&mut self, name: &str) -> usize {
        if let Some(&k) = self.index.get(name) {
            return k;
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        self.names.len() - 1
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn resolve(&self, n: &NameRef, what: &str) -> Result<usize, SyntaxError> {
        self.get(&n.name).ok_or_else(|| n.error(format!("unknown {what} '{}'", n.name)))
    }
}

/// Header directives common to all grammar formats.
#[derive(Debug, Default)]
pub struct Header {
    pub format: Option<String>,
    pub start: Option<NameRef>,
    pub terminals: Option<Vec<char>>,
    pub nonterminals: Option<Vec<String>>,
}

impl Header {
    /// Handles a common directive; returns `Ok(false)` for any other.
    pub fn directive(&mut self, name: &str, at: &Token, t: &mut Toks) -> Result<bool, SyntaxError> {
        match name {
            "format" => self.format = Some(t.ident()?.0),
            "start" => {
                let (s, tok) = t.ident()?;
                self.start = Some(NameRef::from_token(s, &tok));
            }
            "terminals" => {
                let mut v = Vec::new();
                while let Tok::Quoted(c) = t.peek().tok {
                    t.next();
                    v.push(c);
                }
                self.terminals = Some(v);
            }
            "nonterminals" => {
                let mut v = Vec::new();
                while let Tok::Ident(s) = t.peek().tok.clone() {
                    t.next();
                    v.push(s);
                }
                self.nonterminals = Some(v);
            }
            _ => {
                let _ = at;
                return Ok(false);
            }
        }
        t.end_of_line()?;
        Ok(true)
    }

    pub fn expect_format(&self, expected: &'static str, aliases: &[&str]) -> Result<(), FormatError> {
        match &self.format {
            Some(f) if f == expected || aliases.contains(&f.as_str()) => Ok(()),
            Some(f) => Err(FormatError::WrongFormat { expected, found: f.clone() }),
            None => Err(SyntaxError { line: 1, col: 1, msg: "missing '%format' line".into() }.into()),
        }
    }
}

/// Nonterminal table seeded from `%nonterminals`, then left-hand sides in order.
pub fn nonterminal_table<'a>(header: &Header, lhs: impl IntoIterator<Item = &'a NameRef>) -> NameTable {
    let mut nt = NameTable::default();
    for n in header.nonterminals.iter().flatten() {
        nt.add(n);
    }
    for n in lhs {
        nt.add(&n.name);
    }
    nt
}

pub fn resolve_start(header: &Header, nt: &NameTable) -> Result<usize, SyntaxError> {
    match &header.start {
        Some(s) => nt.resolve(s, "start symbol"),
        None if !nt.names.is_empty() => Ok(0),
        None => Err(SyntaxError { line: 1, col: 1, msg: "grammar has no rules and no '%start'".into() }),
    }
}

/// Terminal order: `%terminals` first, then first appearance.
pub fn terminal_list(header: &Header, seen: impl IntoIterator<Item = char>) -> Vec<char> {
    let mut out: Vec<char> = header.terminals.clone().unwrap_or_default();
    for c in seen {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

pub fn write_header(out: &mut String, format: &str, start: &str, terminals: &[char], nonterminals: &[String]) {
    use std::fmt::Write as _;
    let _ = writeln!(out, "%format {format}");
    let _ = writeln!(out, "%start {start}");
    let ts: Vec<String> = terminals.iter().map(|c| format!("'{c}'")).collect();
    let _ = writeln!(out, "%terminals {}", ts.join(" "));
    let _ = writeln!(out, "%nonterminals {}", nonterminals.join(" "));
}

/// Largest interior size tried when covering a tile set by exemplars.
const COVER_MAX: usize = 6;
/// Pictures kept per size while covering.
const COVER_PER_SIZE: usize = 500;

/// Writes `θ` as a union of framed exemplars from `LOC(θ)` chosen
/// greedily by new tiles covered; tiles no small exemplar covers are
/// written as raw `[ a b / c d ]` tiles. The union read back is `θ`.
pub fn write_tile_union<T: Cell>(theta: &TileSet<T>, name: impl Fn(T) -> String) -> String {
    let alphabet: Vec<T> = theta.alphabet().into_iter().collect();
    let mut candidates: Vec<(Picture<T>, TileSet<T>)> = Vec::new();
    if !alphabet.is_empty() {
        for r in 1..=COVER_MAX {
            for c in 1..=COVER_MAX {
                let mut kept = 0;
                search_local(theta, r, c, |_, _| alphabet.clone(), |p| {
                    let b = bordered(p);
                    let tiles = tiles_of(&b).expect("bordered picture");
                    candidates.push((b, tiles));
                    kept += 1;
                    kept < COVER_PER_SIZE
                });
            }
        }
    }
    let mut left: BTreeSet<Tile<T>> = theta.iter().copied().collect();
    let mut parts = Vec::new();
    loop {
        let best = candidates
            .iter()
            .enumerate()
            .map(|(k, (_, ts))| (ts.iter().filter(|t| left.contains(t)).count(), std::cmp::Reverse(k)))
            .max();
        let Some((gain, std::cmp::Reverse(k))) = best else { break };
        if gain == 0 {
            break;
        }
        let (p, ts) = &candidates[k];
        for t in ts.iter() {
            left.remove(t);
        }
        let rows: Vec<String> = (1..=p.rows())
            .map(|i| p.row(i).iter().map(|&s| if s.is_border() { "#".to_string() } else { name(s) }).collect::<Vec<_>>().join(" "))
            .collect();
        parts.push(format!("{{ {} }}", rows.join(" / ")));
    }
    for t in left {
        let n = |s: T| if s.is_border() { "#".to_string() } else { name(s) };
        parts.push(format!("[ {} {} / {} {} ]", n(t.0[0]), n(t.0[1]), n(t.0[2]), n(t.0[3])));
    }
    parts.join(" + ")
}

/// Any grammar-like file, tagged by its `%format`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadedGrammar {
    Rtg(TileGrammar),
    Ts(TilingSystem),
    Kolam(KolamGrammar),
    Prusa(PrusaGrammar),
    Grid(GridGrammar),
    Matrix(MatrixGrammar),
}

impl LoadedGrammar {
    pub fn format_name(&self) -> &'static str {
        match self {
            LoadedGrammar::Rtg(_) => "rtg",
            LoadedGrammar::Ts(_) => "ts",
            LoadedGrammar::Kolam(_) => "kolam",
            LoadedGrammar::Prusa(_) => "prusa",
            LoadedGrammar::Grid(_) => "grid",
            LoadedGrammar::Matrix(_) => "matrix",
        }
    }

    pub fn terminals(&self) -> &[char] {
        match self {
            LoadedGrammar::Rtg(g) => &g.terminals,
            LoadedGrammar::Ts(t) => &t.sigma,
            LoadedGrammar::Kolam(g) => &g.terminals,
            LoadedGrammar::Prusa(g) => &g.terminals,
            LoadedGrammar::Grid(g) => &g.terminals,
            LoadedGrammar::Matrix(g) => &g.terminals,
        }
    }
}

/// Value of the first `%format` directive.
pub fn sniff_format(text: &str) -> Result<String, FormatError> {
    let mut t = Toks::new(text)?;
    loop {
        t.skip_newlines();
        let tok = t.next();
        match tok.tok {
            Tok::Directive(d) if d == "format" => return Ok(t.ident()?.0),
            Tok::Eof => return Err(SyntaxError { line: 1, col: 1, msg: "missing '%format' line".into() }.into()),
            _ => {
                return Err(Toks::error_at(&tok, "the first line must be '%format <name>'").into());
            }
        }
    }
}

pub fn load_grammar_str(text: &str) -> Result<LoadedGrammar, FormatError> {
    Ok(match sniff_format(text)?.as_str() {
        "rtg" | "tg" => LoadedGrammar::Rtg(rtg::parse_rtg(text)?),
        "ts" => LoadedGrammar::Ts(ts::parse_ts(text)?),
        "kolam" => LoadedGrammar::Kolam(kolam::parse_kolam(text)?),
        "prusa" => LoadedGrammar::Prusa(prusa::parse_prusa(text)?),
        "grid" => LoadedGrammar::Grid(grid::parse_grid(text)?),
        "matrix" => LoadedGrammar::Matrix(matrix::parse_matrix(text)?),
        other => {
            return Err(SyntaxError { line: 1, col: 1, msg: format!("unknown format '{other}'") }.into());
        }
    })
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io { path: path.display().to_string(), msg: e.to_string() })
}

pub fn load_grammar(path: impl AsRef<Path>) -> Result<LoadedGrammar, FormatError> {
    load_grammar_str(&read(path.as_ref())?)
}

/// One picture row per non-blank line; `//` comments are ignored.
pub fn parse_picture(text: &str) -> Result<Picture<char>, FormatError> {
    let rows: Vec<Vec<char>> = text
        .lines()
        .map(|l| l.split("//").next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.chars().filter(|c| !c.is_whitespace()).collect())
        .collect();
    if rows.is_empty() {
        return Err(PictureError::Empty.into());
    }
    if let Some(c) = rows.iter().flatten().find(|c| c.is_border()) {
        return Err(SyntaxError { line: 1, col: 1, msg: format!("'{c}' is reserved for the border") }.into());
    }
    Ok(Picture::from_grid(rows)?)
}

pub fn load_picture(path: impl AsRef<Path>) -> Result<Picture<char>, FormatError> {
    parse_picture(&read(path.as_ref())?)
}

pub fn write_picture(p: &Picture<char>) -> String {
    p.to_text()
}
