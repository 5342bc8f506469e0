//! Command-line front end.
//!
//! Exit status: `0` success (or member), `1` negative verdict (non-member,
//! RTG-invalid grammar), `2` any error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser as ClapParser, Subcommand, ValueEnum};

use crate::convert::{
    grid_to_kolam, kolam_to_cnf, kolam_to_rtg, matrix_to_kolam, prusa_to_nnf, prusa_to_rtg, ts_to_tg, ConvertError, KolamGrammar,
};
use crate::format::{self, kolam::write_kolam, rtg, FormatError, LoadedGrammar};
use crate::grammar::{validate_grammar, Rule, TileGrammar};
use crate::oracle::{self, enumerate_source, SizeBound, Source, Verdict};
use crate::parser::{render_matrix, ParseError, Parser};
use crate::picture::{Sym, Tile, TileSet};
use crate::tileset::{adjacency_relations, decompose_regional, find_cycle, is_simple_regional};

#[derive(Debug, ClapParser)]
#[command(name = "rtg", version, about = "Regional tile grammars: validation, parsing, conversion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check regionality of a grammar's rules and report decompositions.
    Validate { grammar: PathBuf },
    /// Decide membership of a picture.
    Parse {
        grammar: PathBuf,
        picture: PathBuf,
        #[arg(long)]
        show_derivation: bool,
        #[arg(long)]
        show_matrix: bool,
        /// Cross-check the verdict with the brute-force derivation search.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// List every picture of the language within a size bound.
    Generate {
        grammar: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_rows: usize,
        #[arg(long, default_value_t = 3)]
        max_cols: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Translate a grammar into another formalism; `-` writes to stdout.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        input: PathBuf,
        output: PathBuf,
    },
    /// Adjacency relations, acyclicity and decomposition of tile sets.
    AnalyzeTileset { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Tg,
    Rtg,
    Kolam,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Convert(#[from] ConvertError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Grammar(#[from] crate::grammar::GrammarError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

/// Kolam form of a source grammar, in CNF.
fn to_kolam(g: &LoadedGrammar) -> Result<KolamGrammar, CliError> {
    Ok(match g {
        LoadedGrammar::Kolam(k) => kolam_to_cnf(k),
        LoadedGrammar::Grid(gg) => kolam_to_cnf(&grid_to_kolam(gg)?),
        LoadedGrammar::Matrix(m) => kolam_to_cnf(&matrix_to_kolam(m)?),
        other => return Err(CliError::Usage(format!("no conversion from {} to kolam", other.format_name()))),
    })
}

/// Tile grammar equivalent of any loaded grammar.
pub fn to_tile_grammar(g: &LoadedGrammar) -> Result<TileGrammar, CliError> {
    Ok(match g {
        LoadedGrammar::Rtg(g) => g.clone(),
        LoadedGrammar::Ts(t) => ts_to_tg(t),
        LoadedGrammar::Prusa(p) => prusa_to_rtg(&prusa_to_nnf(p))?,
        other => kolam_to_rtg(&to_kolam(other)?)?,
    })
}

fn write_out(path: &Path, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    if path.as_os_str() == "-" {
        out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
    } else {
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

/// Runs one command; returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut report = String::new();
    let status = match execute(cli.command, &mut report, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    };
    let _ = out.write_all(report.as_bytes());
    status
}

fn execute(cmd: Command, r: &mut String, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Validate { grammar } => {
            let loaded = format::load_grammar(&grammar)?;
            let g = to_tile_grammar(&loaded)?;
            if !matches!(loaded, LoadedGrammar::Rtg(_)) {
                let _ = writeln!(r, "converted from {} to a tile grammar", loaded.format_name());
            }
            let (validated, report) = validate_grammar(&g)?;
            let _ = write!(r, "{report}");
            if report.rtg_valid && validated.has_chain_rules() {
                let _ = writeln!(r, "note: chain rules are eliminated before parsing");
            }
            Ok(if report.rtg_valid { 0 } else { 1 })
        }
        Command::Parse { grammar, picture, show_derivation, show_matrix, oracle: check, budget } => {
            let g = to_tile_grammar(&format::load_grammar(&grammar)?)?;
            let p = format::load_picture(&picture)?;
            let parser = Parser::new(&g)?;
            if parser.chains_eliminated {
                let _ = writeln!(r, "note: chain rules eliminated before parsing");
            }
            let m = parser.recognize(&p);
            let member = m.contains(&p.dom(), parser.normalized().start);
            let _ = writeln!(r, "{}", if member { "member" } else { "not a member" });
            if show_matrix {
                let _ = write!(r, "{}", render_matrix(&m));
            }
            if show_derivation && member {
                if let Some(d) = parser.derivation(&p, &m) {
                    let _ = write!(r, "{}", d.render_partition());
                    let _ = write!(r, "{}", d.render());
                }
            }
            if check {
                match oracle::derive_membership_tg(&g, &p, budget) {
                    Verdict::Indeterminate => {
                        let _ = writeln!(r, "oracle: indeterminate (budget exhausted)");
                    }
                    v if (v == Verdict::Yes) == member => {
                        let _ = writeln!(r, "oracle: agrees");
                    }
                    v => {
                        return Err(CliError::Usage(format!(
                            "oracle disagrees: parser says {}, derivation search says {v:?}",
                            if member { "member" } else { "non-member" }
                        )))
                    }
                }
            }
            Ok(if member { 0 } else { 1 })
        }
        Command::Generate { grammar, max_rows, max_cols, budget } => {
            if max_rows == 0 || max_cols == 0 {
                return Err(CliError::Usage("size bounds must be positive".into()));
            }
            let loaded = format::load_grammar(&grammar)?;
            let b = SizeBound::new(max_rows, max_cols);
            let exhausted = |e: oracle::BudgetExceeded| CliError::Usage(e.to_string());
            let pics = match &loaded {
                LoadedGrammar::Rtg(g) => oracle::enumerate_language_tg(g, b, budget).map_err(exhausted)?,
                LoadedGrammar::Ts(t) => {
                    let mut v = std::collections::BTreeSet::new();
                    for rows in 1..=max_rows {
                        for cols in 1..=max_cols {
                            v.extend(oracle::all_pictures(&t.sigma, rows, cols).into_iter().filter(|p| oracle::membership_ts(t, p)));
                        }
                    }
                    v
                }
                LoadedGrammar::Kolam(k) => enumerate_source(Source::Kolam(k), b, budget).map_err(exhausted)?,
                LoadedGrammar::Prusa(p) => enumerate_source(Source::Prusa(p), b, budget).map_err(exhausted)?,
                LoadedGrammar::Grid(g) => enumerate_source(Source::Grid(g), b, budget).map_err(exhausted)?,
                LoadedGrammar::Matrix(m) => enumerate_source(Source::Matrix(m), b, budget).map_err(exhausted)?,
            };
            let texts: Vec<String> = pics.iter().map(|p| p.to_text()).collect();
            let _ = write!(r, "{}", texts.join("\n"));
            Ok(0)
        }
        Command::Convert { to, input, output } => {
            let loaded = format::load_grammar(&input)?;
            let text = match to {
                Target::Kolam => write_kolam(&to_kolam(&loaded)?),
                Target::Tg => rtg::write_tg(&to_tile_grammar(&loaded)?),
                Target::Rtg => {
                    let g = to_tile_grammar(&loaded)?;
                    let (validated, report) = validate_grammar(&g)?;
                    if !report.rtg_valid {
                        return Err(CliError::Usage(format!("result is not a regional tile grammar:\n{report}")));
                    }
                    rtg::write_rtg(&validated)
                }
            };
            write_out(&output, &text, out)?;
            Ok(0)
        }
        Command::AnalyzeTileset { file } => {
            match format::load_grammar(&file)? {
                LoadedGrammar::Rtg(g) => {
                    for (k, rule) in g.rules.iter().enumerate() {
                        if let Rule::Variable { lhs, body } = rule {
                            let _ = writeln!(r, "rule {} ({}):", k + 1, g.nonterminals[*lhs]);
                            analyze(body, &|s| g.nonterminals[s.index()].clone(), r);
                        }
                    }
                }
                LoadedGrammar::Ts(t) => analyze(&t.theta, &|s| t.gamma[s.index()].clone(), r),
                other => {
                    return Err(CliError::Usage(format!("{} files carry no tile sets; convert them first", other.format_name())))
                }
            }
            Ok(0)
        }
    }
}

fn analyze(theta: &TileSet<Sym>, name: &dyn Fn(Sym) -> String, r: &mut String) {
    let show = |s: Sym| if s == <Sym as crate::picture::Cell>::BORDER { "#".to_string() } else { name(s) };
    let pairs = |set: &std::collections::BTreeSet<(Sym, Sym)>| -> String {
        set.iter().map(|&(x, y)| format!("({},{})", show(x), show(y))).collect::<Vec<_>>().join(" ")
    };
    let rel = adjacency_relations(theta);
    let _ = writeln!(r, "  tiles: {}", theta.len());
    let concave: Vec<&Tile<Sym>> = theta.iter().filter(|t| t.is_concave()).collect();
    let _ = writeln!(r, "  concave tiles: {}", concave.len());
    let _ = writeln!(r, "  H: {}", pairs(&rel.h));
    let _ = writeln!(r, "  V: {}", pairs(&rel.v));
    for (label, set) in [("A", &rel.a), ("A'", &rel.a_prime)] {
        match find_cycle(set) {
            None => {
                let _ = writeln!(r, "  {label} graph: acyclic");
            }
            Some(c) => {
                let path: Vec<String> = c.iter().map(|&(x, _)| show(x)).chain(c.first().map(|&(x, _)| show(x))).collect();
                let _ = writeln!(r, "  {label} graph: cycle {}", path.join(" -> "));
            }
        }
    }
    if is_simple_regional(theta) {
        let _ = writeln!(r, "  simple regional");
        return;
    }
    match decompose_regional(theta) {
        Some(parts) => {
            let _ = writeln!(r, "  not simple regional; decomposes into {} simple regional parts:", parts.len());
            for (i, p) in parts.iter().enumerate() {
                let _ = writeln!(r, "    part {}: {}", i + 1, format::write_tile_union(p, name));
            }
        }
        None => {
            let _ = writeln!(r, "  not regional");
        }
    }
}
