//! Raster-order backtracking over local languages.

use std::collections::HashSet;

use crate::picture::{Cell, Picture, Tile, TileSet};

/// Fills a `rows x cols` picture pixel by pixel, rejecting a partial
/// assignment as soon as a fully determined tile of the bordered picture
/// falls outside `theta`. `candidates(i, j)` lists the values tried at the
/// 1-based pixel `(i, j)`; `visit` returns `false` to stop the search.
///
/// Returns `false` iff the search was stopped by `visit`.
pub fn search_local<T, C, V>(theta: &TileSet<T>, rows: usize, cols: usize, candidates: C, mut visit: V) -> bool
where
    T: Cell,
    C: Fn(usize, usize) -> Vec<T>,
    V: FnMut(&Picture<T>) -> bool,
{
    assert!(rows > 0 && cols > 0, "empty picture");
    let tiles: HashSet<Tile<T>> = theta.iter().copied().collect();
    let width = cols + 2;
    let mut grid = vec![T::BORDER; (rows + 2) * width];
    let cands: Vec<Vec<T>> = (1..=rows).flat_map(|i| (1..=cols).map(move |j| (i, j))).map(|(i, j)| candidates(i, j)).collect();
    let mut search = Search { tiles: &tiles, rows, cols, width, grid: &mut grid, cands: &cands };
    search.go(0, &mut visit)
}

struct Search<'a, T> {
    tiles: &'a HashSet<Tile<T>>,
    rows: usize,
    cols: usize,
    width: usize,
    grid: &'a mut Vec<T>,
    cands: &'a [Vec<T>],
}

impl<T: Cell> Search<'_, T> {
    fn go<V: FnMut(&Picture<T>) -> bool>(&mut self, pos: usize, visit: &mut V) -> bool {
        if pos == self.rows * self.cols {
            let p = Picture::from_fn(self.rows, self.cols, |i, j| self.grid[i * self.width + j]);
            return visit(&p);
        }
        let (i, j) = (pos / self.cols + 1, pos % self.cols + 1);
        for k in 0..self.cands[pos].len() {
            self.grid[i * self.width + j] = self.cands[pos][k];
            if self.consistent(i, j, pos) && !self.go(pos + 1, visit) {
                return false;
            }
        }
        self.grid[i * self.width + j] = T::BORDER;
        true
    }

    // Checks the (up to four) tiles around (i,j) whose interior pixels are all placed.
    fn consistent(&self, i: usize, j: usize, pos: usize) -> bool {
        let placed = |r: usize, c: usize| {
            r == 0 || c == 0 || r > self.rows || c > self.cols || (r - 1) * self.cols + (c - 1) <= pos
        };
        for a in [i - 1, i] {
            for b in [j - 1, j] {
                if !(placed(a, b) && placed(a, b + 1) && placed(a + 1, b) && placed(a + 1, b + 1)) {
                    continue;
                }
                let g = |r: usize, c: usize| self.grid[r * self.width + c];
                let t = Tile::new(g(a, b), g(a, b + 1), g(a + 1, b), g(a + 1, b + 1));
                if !self.tiles.contains(&t) {
                    return false;
                }
            }
        }
        true
    }
}

/// All pictures of exactly `rows x cols` in `LOC(theta)`, in raster-lexicographic order.
pub fn enumerate_local<T: Cell>(theta: &TileSet<T>, rows: usize, cols: usize) -> Vec<Picture<T>> {
    let alphabet: Vec<T> = theta.alphabet().into_iter().collect();
    let mut out = Vec::new();
    search_local(theta, rows, cols, |_, _| alphabet.clone(), |p| {
        out.push(p.clone());
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picture::{bordered, in_local_language, tiles_of};

    fn pic(s: &str) -> Picture<char> {
        Picture::parse(s).unwrap()
    }

    #[test]
    fn diagonal_square() {
        let theta = tiles_of(&bordered(&pic("1000/0100/0010/0001"))).unwrap();
        assert_eq!(enumerate_local(&theta, 4, 4), vec![pic("1000/0100/0010/0001")]);
        assert!(enumerate_local(&theta, 2, 3).is_empty());
    }

    #[test]
    fn empty_and_homogeneous() {
        assert!(enumerate_local(&TileSet::<char>::new(), 2, 2).is_empty());
        let theta = tiles_of(&bordered(&pic("aa/aa"))).unwrap();
        assert_eq!(enumerate_local(&theta, 2, 2), vec![pic("aa/aa")]);
        assert_eq!(enumerate_local(&theta, 3, 1), vec![pic("a/a/a")]);
    }

    #[test]
    fn agrees_with_filtering_all_arrays() {
        let theta = tiles_of(&bordered(&pic("ab/ba")))
            .unwrap()
            .union(&tiles_of(&bordered(&pic("aab/aab"))).unwrap());
        for rows in 1..=3 {
            for cols in 1..=3 {
                let mut brute = Vec::new();
                for code in 0..(1u32 << (rows * cols)) {
                    let p = Picture::from_fn(rows, cols, |i, j| {
                        if code >> ((i - 1) * cols + (j - 1)) & 1 == 1 { 'b' } else { 'a' }
                    });
                    if in_local_language(&p, &theta) {
                        brute.push(p);
                    }
                }
                brute.sort();
                assert_eq!(enumerate_local(&theta, rows, cols), brute, "size {rows}x{cols}");
            }
        }
    }
}
