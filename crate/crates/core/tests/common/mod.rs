#![allow(dead_code)]

use std::path::PathBuf;

use rtg::cli::to_tile_grammar;
use rtg::format::{self, LoadedGrammar};
use rtg::picture::Picture;
use rtg::TileGrammar;

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub fn loaded(name: &str) -> LoadedGrammar {
    format::load_grammar(corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn rtg_file(name: &str) -> TileGrammar {
    match loaded(name) {
        LoadedGrammar::Rtg(g) => g,
        other => panic!("{name} is {}", other.format_name()),
    }
}

/// Tile grammar of any corpus file, converted if needed.
pub fn as_tg(name: &str) -> TileGrammar {
    to_tile_grammar(&loaded(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn pic(name: &str) -> Picture<char> {
    format::load_picture(corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn p(text: &str) -> Picture<char> {
    Picture::parse(text).unwrap()
}

/// `rows x cols` picture of `a`s crossed by a row `r` and a column `c` of `b`s.
pub fn cross(rows: usize, cols: usize, r: usize, c: usize) -> Picture<char> {
    Picture::from_fn(rows, cols, |i, j| if i == r || j == c { 'b' } else { 'a' })
}

/// Every picture over `sigma` with size within `(1..=rows) x (1..=cols)`.
pub fn pictures_up_to(sigma: &[char], rows: usize, cols: usize) -> Vec<Picture<char>> {
    let mut out = Vec::new();
    for m in 1..=rows {
        for n in 1..=cols {
            out.extend(rtg::oracle::all_pictures(sigma, m, n));
        }
    }
    out
}
