//! Pictures, subdomains, partitions and tiles.
//!
//! Coordinates are 1-based and inclusive everywhere in the public API.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PictureError {
    #[error("row mismatch: {left} rows vs {right} rows")]
    RowMismatch { left: usize, right: usize },
    #[error("column mismatch: {top} columns vs {bottom} columns")]
    ColumnMismatch { top: usize, bottom: usize },
    #[error("subdomain {0} lies outside a {1}x{2} picture")]
    OutOfRange(Subdomain, usize, usize),
    #[error("picture of size {0}x{1} has no 2x2 tiles")]
    TooSmall(usize, usize),
    #[error("sentinel subdomain used where a true subdomain is required")]
    Sentinel,
    #[error("invalid subdomain ({0},{1};{2},{3})")]
    InvalidSubdomain(usize, usize, usize, usize),
    #[error("picture must have at least one row and one column")]
    Empty,
    #[error("{rows}x{cols} picture needs {} cells, got {got}", rows * cols)]
    CellCount { rows: usize, cols: usize, got: usize },
    #[error("line {line}: expected {expected} pixels, found {found}")]
    Ragged { line: usize, expected: usize, found: usize },
}

/// A pixel value that has a distinguished boundary symbol.
pub trait Cell: Copy + Eq + Ord + Hash + fmt::Debug {
    const BORDER: Self;

    fn is_border(self) -> bool {
        self == Self::BORDER
    }
}

impl Cell for char {
    const BORDER: char = '#';
}

/// Interned grammar symbol; `Sym::BORDER` is `#`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub u32);

impl Sym {
    pub fn new(index: usize) -> Sym {
        let s = Sym(index as u32);
        assert!(s != <Sym as Cell>::BORDER, "symbol index collides with the border");
        s
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Cell for Sym {
    const BORDER: Sym = Sym(u32::MAX);
}

/// Rectangular array of cells, row-major. Never empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Picture<T> {
    rows: usize,
    cols: usize,
    cells: Vec<T>,
}

impl<T: Clone> Picture<T> {
    pub fn new(rows: usize, cols: usize, cells: Vec<T>) -> Result<Self, PictureError> {
        if rows == 0 || cols == 0 {
            return Err(PictureError::Empty);
        }
        if cells.len() != rows * cols {
            return Err(PictureError::CellCount { rows, cols, got: cells.len() });
        }
        Ok(Picture { rows, cols, cells })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        assert!(rows > 0 && cols > 0, "empty picture");
        Picture { rows, cols, cells: vec![value; rows * cols] }
    }

    /// Builds a picture from `f(i, j)` with 1-based indices.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "empty picture");
        let mut cells = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                cells.push(f(i, j));
            }
        }
        Picture { rows, cols, cells }
    }

    pub fn from_grid(grid: Vec<Vec<T>>) -> Result<Self, PictureError> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(PictureError::Empty);
        }
        let mut cells = Vec::with_capacity(rows * cols);
        for (line, row) in grid.into_iter().enumerate() {
            if row.len() != cols {
                return Err(PictureError::Ragged { line: line + 1, expected: cols, found: row.len() });
            }
            cells.extend(row);
        }
        Ok(Picture { rows, cols, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn size(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols, "pixel ({i},{j}) out of range");
        &self.cells[(i - 1) * self.cols + (j - 1)]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.cells[(i - 1) * self.cols..i * self.cols]
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn dom(&self) -> Subdomain {
        Subdomain { top: 1, left: 1, bottom: self.rows, right: self.cols }
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Picture<U> {
        Picture { rows: self.rows, cols: self.cols, cells: self.cells.iter().map(f).collect() }
    }

    pub fn grid(&self) -> Vec<Vec<T>> {
        (1..=self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl Picture<char> {
    /// Parses one row per line; `/` also separates rows so that small
    /// literals can be written inline (`"ab/ba"`).
    pub fn parse(text: &str) -> Result<Self, PictureError> {
        let lines: Vec<&str> = if text.contains('\n') {
            text.lines().map(|l| l.trim_end_matches('\r')).collect()
        } else {
            text.split('/').collect()
        };
        let mut lines: Vec<&str> = lines;
        while lines.last().is_some_and(|l| l.is_empty()) {
            lines.pop();
        }
        let grid: Vec<Vec<char>> = lines.iter().map(|l| l.chars().collect()).collect();
        if grid.iter().any(Vec::is_empty) {
            let line = grid.iter().position(Vec::is_empty).unwrap() + 1;
            let expected = grid.first().map_or(0, Vec::len);
            return Err(PictureError::Ragged { line, expected, found: 0 });
        }
        Picture::from_grid(grid)
    }

    /// Picture file text: one row per line with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.cols + 1) * self.rows);
        for i in 1..=self.rows {
            out.extend(self.row(i));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Picture<char> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.rows {
            if i > 1 {
                f.write_str("/")?;
            }
            for c in self.row(i) {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Picture<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Picture[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " / ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.cells[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// True subdomain `(top,left;bottom,right)` with `1 <= top <= bottom`, `1 <= left <= right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subdomain {
    pub top: usize,
    pub left: usize,
    pub bottom: usize,
    pub right: usize,
}

impl Subdomain {
    pub fn new(top: usize, left: usize, bottom: usize, right: usize) -> Result<Self, PictureError> {
        if top == 0 || left == 0 || top > bottom || left > right {
            return Err(PictureError::InvalidSubdomain(top, left, bottom, right));
        }
        Ok(Subdomain { top, left, bottom, right })
    }

    pub fn pixel(i: usize, j: usize) -> Self {
        Subdomain::new(i, j, i, j).expect("pixel coordinates are 1-based")
    }

    pub fn rows(&self) -> usize {
        self.bottom - self.top + 1
    }

    pub fn cols(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn size(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn area(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn contains(&self, other: &Subdomain) -> bool {
        self.top <= other.top && self.left <= other.left && other.bottom <= self.bottom && other.right <= self.right
    }

    pub fn contains_pixel(&self, i: usize, j: usize) -> bool {
        self.top <= i && i <= self.bottom && self.left <= j && j <= self.right
    }

    pub fn intersects(&self, other: &Subdomain) -> bool {
        self.top <= other.bottom && other.top <= self.bottom && self.left <= other.right && other.left <= self.right
    }

    /// `d ⊕ (a,b)`.
    pub fn translate(&self, a: usize, b: usize) -> Subdomain {
        Subdomain { top: self.top + a, left: self.left + b, bottom: self.bottom + a, right: self.right + b }
    }

    /// Adjacency of `other` relative to `self`: `other` on the right or below.
    pub fn adjacency(&self, other: &Subdomain) -> Adjacency {
        let (a, b) = (self, other);
        if b.left == a.right + 1 && b.bottom >= a.top && a.bottom >= b.top {
            Adjacency::Horizontal
        } else if b.top == a.bottom + 1 && b.right >= a.left && a.right >= b.left {
            Adjacency::Vertical
        } else {
            Adjacency::None
        }
    }
}

impl fmt::Display for Subdomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.top, self.left, self.bottom, self.right)
    }
}

/// A subdomain or the `(0,0;0,0)` sentinel standing for "no candidate".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Sentinel,
    At(Subdomain),
}

impl Slot {
    pub fn subdomain(&self) -> Option<Subdomain> {
        match self {
            Slot::Sentinel => None,
            Slot::At(d) => Some(*d),
        }
    }

    /// Coordinates as a quadruple; the sentinel reads as all zeros.
    pub fn quad(&self) -> (usize, usize, usize, usize) {
        match self {
            Slot::Sentinel => (0, 0, 0, 0),
            Slot::At(d) => (d.top, d.left, d.bottom, d.right),
        }
    }
}

impl From<Subdomain> for Slot {
    fn from(d: Subdomain) -> Slot {
        Slot::At(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    Horizontal,
    Vertical,
    None,
}

pub fn adjacency_kind(da: Slot, db: Slot) -> Result<Adjacency, PictureError> {
    match (da, db) {
        (Slot::At(a), Slot::At(b)) => Ok(a.adjacency(&b)),
        _ => Err(PictureError::Sentinel),
    }
}

/// Homogeneous blocks listed in the order they were discovered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition<T> {
    pub blocks: Vec<(Subdomain, T)>,
}

impl<T: Cell> Partition<T> {
    pub fn labels(&self) -> impl Iterator<Item = T> + '_ {
        self.blocks.iter().map(|&(_, l)| l)
    }

    /// Pairwise distinct labels, i.e. the partition is regional.
    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<T> = self.labels().collect();
        set.len() == self.blocks.len()
    }

    /// Re-checks homogeneity, exact tiling of `dom(p)` and distinct labels on adjacent blocks.
    pub fn is_strong_for(&self, p: &Picture<T>) -> bool {
        let mut owner = vec![usize::MAX; p.rows * p.cols];
        for (b, &(d, label)) in self.blocks.iter().enumerate() {
            if !p.dom().contains(&d) {
                return false;
            }
            for i in d.top..=d.bottom {
                for j in d.left..=d.right {
                    let k = (i - 1) * p.cols + (j - 1);
                    if owner[k] != usize::MAX || *p.get(i, j) != label {
                        return false;
                    }
                    owner[k] = b;
                }
            }
        }
        if owner.contains(&usize::MAX) {
            return false;
        }
        for (x, &(da, la)) in self.blocks.iter().enumerate() {
            for &(db, lb) in &self.blocks[x + 1..] {
                let adjacent = da.adjacency(&db) != Adjacency::None || db.adjacency(&da) != Adjacency::None;
                if adjacent && la == lb {
                    return false;
                }
            }
        }
        true
    }
}

/// A 2x2 picture stored as `[a11, a12, a21, a22]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile<T>(pub [T; 4]);

impl<T: Copy> Tile<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Tile([a11, a12, a21, a22])
    }

    /// 1-based access.
    pub fn get(&self, i: usize, j: usize) -> T {
        self.0[(i - 1) * 2 + (j - 1)]
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(T) -> U) -> Tile<U> {
        Tile([f(self.0[0]), f(self.0[1]), f(self.0[2]), f(self.0[3])])
    }
}

impl<T: Cell> Tile<T> {
    /// `BB/CB` or a rotation of it with `B` not the border.
    pub fn is_concave(&self) -> bool {
        let c = &self.0;
        (0..4).any(|odd| {
            let mut others = (0..4).filter(|&k| k != odd).map(|k| c[k]);
            let b = others.next().unwrap();
            !b.is_border() && others.all(|x| x == b) && c[odd] != b
        })
    }
}

/// Duplicate-free set of tiles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TileSet<T: Ord> {
    tiles: BTreeSet<Tile<T>>,
}

impl<T: Cell> Default for TileSet<T> {
    fn default() -> Self {
        TileSet { tiles: BTreeSet::new() }
    }
}

impl<T: Cell> TileSet<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: Tile<T>) -> bool {
        self.tiles.insert(t)
    }

    pub fn contains(&self, t: &Tile<T>) -> bool {
        self.tiles.contains(t)
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tile<T>> + '_ {
        self.tiles.iter()
    }

    pub fn union(&self, other: &TileSet<T>) -> TileSet<T> {
        TileSet { tiles: self.tiles.union(&other.tiles).copied().collect() }
    }

    pub fn is_subset(&self, other: &TileSet<T>) -> bool {
        self.tiles.is_subset(&other.tiles)
    }

    pub fn without(&self, t: &Tile<T>) -> TileSet<T> {
        let mut out = self.clone();
        out.tiles.remove(t);
        out
    }

    /// Non-border symbols occurring in some tile.
    pub fn alphabet(&self) -> BTreeSet<T> {
        self.tiles.iter().flat_map(|t| t.0).filter(|s| !s.is_border()).collect()
    }

    pub fn map<U: Cell>(&self, mut f: impl FnMut(T) -> U) -> TileSet<U> {
        self.tiles.iter().map(|t| t.map(&mut f)).collect()
    }
}

impl<T: Cell> FromIterator<Tile<T>> for TileSet<T> {
    fn from_iter<I: IntoIterator<Item = Tile<T>>>(iter: I) -> Self {
        TileSet { tiles: iter.into_iter().collect() }
    }
}

impl<'a, T: Cell> IntoIterator for &'a TileSet<T> {
    type Item = &'a Tile<T>;
    type IntoIter = std::collections::btree_set::Iter<'a, Tile<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.tiles.iter()
    }
}

/// Column concatenation `p ⦶ q`.
pub fn hcat<T: Clone>(p: &Picture<T>, q: &Picture<T>) -> Result<Picture<T>, PictureError> {
    if p.rows != q.rows {
        return Err(PictureError::RowMismatch { left: p.rows, right: q.rows });
    }
    let mut cells = Vec::with_capacity(p.cells.len() + q.cells.len());
    for i in 1..=p.rows {
        cells.extend_from_slice(p.row(i));
        cells.extend_from_slice(q.row(i));
    }
    Ok(Picture { rows: p.rows, cols: p.cols + q.cols, cells })
}

/// Row concatenation `p ⊖ q`.
pub fn vcat<T: Clone>(p: &Picture<T>, q: &Picture<T>) -> Result<Picture<T>, PictureError> {
    if p.cols != q.cols {
        return Err(PictureError::ColumnMismatch { top: p.cols, bottom: q.cols });
    }
    let mut cells = p.cells.clone();
    cells.extend_from_slice(&q.cells);
    Ok(Picture { rows: p.rows + q.rows, cols: p.cols, cells })
}

pub fn subpicture<T: Clone>(p: &Picture<T>, d: &Subdomain) -> Result<Picture<T>, PictureError> {
    if !p.dom().contains(d) {
        return Err(PictureError::OutOfRange(*d, p.rows, p.cols));
    }
    Ok(Picture::from_fn(d.rows(), d.cols(), |i, j| p.get(d.top + i - 1, d.left + j - 1).clone()))
}

pub fn bordered<T: Cell>(p: &Picture<T>) -> Picture<T> {
    Picture::from_fn(p.rows + 2, p.cols + 2, |i, j| {
        if i == 1 || j == 1 || i == p.rows + 2 || j == p.cols + 2 {
            T::BORDER
        } else {
            *p.get(i - 1, j - 1)
        }
    })
}

pub fn tiles_of<T: Cell>(p: &Picture<T>) -> Result<TileSet<T>, PictureError> {
    if p.rows < 2 || p.cols < 2 {
        return Err(PictureError::TooSmall(p.rows, p.cols));
    }
    let mut set = TileSet::new();
    for i in 1..p.rows {
        for j in 1..p.cols {
            set.insert(Tile::new(*p.get(i, j), *p.get(i, j + 1), *p.get(i + 1, j), *p.get(i + 1, j + 1)));
        }
    }
    Ok(set)
}

pub fn in_local_language<T: Cell>(p: &Picture<T>, theta: &TileSet<T>) -> bool {
    let b = bordered(p);
    for i in 1..b.rows {
        for j in 1..b.cols {
            let t = Tile::new(*b.get(i, j), *b.get(i, j + 1), *b.get(i + 1, j), *b.get(i + 1, j + 1));
            if !theta.contains(&t) {
                return false;
            }
        }
    }
    true
}

/// The unique strong homogeneous partition, if any.
pub fn strong_partition<T: Cell>(p: &Picture<T>) -> Option<Partition<T>> {
    let (m, n) = p.size();
    let mut owner = vec![usize::MAX; m * n];
    let mut blocks = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            if owner[(i - 1) * n + (j - 1)] != usize::MAX {
                continue;
            }
            let s = *p.get(i, j);
            let free = |owner: &[usize], r: usize, c: usize| owner[(r - 1) * n + (c - 1)] == usize::MAX;
            let mut right = j;
            while right < n && *p.get(i, right + 1) == s && free(&owner, i, right + 1) {
                right += 1;
            }
            let mut bottom = i;
            while bottom < m && (j..=right).all(|c| *p.get(bottom + 1, c) == s && free(&owner, bottom + 1, c)) {
                bottom += 1;
            }
            let id = blocks.len();
            for r in i..=bottom {
                for c in j..=right {
                    owner[(r - 1) * n + (c - 1)] = id;
                }
            }
            blocks.push((Subdomain { top: i, left: j, bottom, right }, s));
        }
    }
    // Growth yields a homogeneous tiling; strength fails iff equal neighbours sit in different blocks.
    for i in 1..=m {
        for j in 1..=n {
            let k = (i - 1) * n + (j - 1);
            if j < n && owner[k] != owner[k + 1] && p.get(i, j) == p.get(i, j + 1) {
                return None;
            }
            if i < m && owner[k] != owner[k + n] && p.get(i, j) == p.get(i + 1, j) {
                return None;
            }
        }
    }
    Some(Partition { blocks })
}

pub fn is_regional_picture<T: Cell>(p: &Picture<T>) -> bool {
    strong_partition(p).is_some_and(|pi| pi.is_injective())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pic(s: &str) -> Picture<char> {
        Picture::parse(s).unwrap()
    }

    #[test]
    fn concatenation() {
        assert_eq!(hcat(&pic("a"), &pic("b")).unwrap(), pic("ab"));
        assert_eq!(hcat(&pic("a"), &pic("a")).unwrap(), pic("aa"));
        assert!(matches!(hcat(&pic("ab/ba"), &pic("a")), Err(PictureError::RowMismatch { .. })));
        assert_eq!(vcat(&pic("ab"), &pic("ba")).unwrap(), pic("ab/ba"));
        assert_eq!(vcat(&pic("a"), &pic("a")).unwrap(), pic("a/a"));
        assert!(matches!(vcat(&pic("ab"), &pic("a")), Err(PictureError::ColumnMismatch { .. })));
    }

    #[test]
    fn subpictures() {
        let d = Subdomain::new(1, 1, 1, 2).unwrap();
        assert_eq!(subpicture(&pic("ab/ba"), &d).unwrap(), pic("ab"));
        let p1 = pic("aabaa/bbbbb/aabaa/aabaa");
        assert_eq!(subpicture(&p1, &Subdomain::new(2, 1, 2, 5).unwrap()).unwrap(), pic("bbbbb"));
        assert_eq!(subpicture(&pic("a"), &Subdomain::pixel(1, 1)).unwrap(), pic("a"));
        assert!(subpicture(&pic("a"), &Subdomain::new(1, 1, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn bordering_and_tiles() {
        assert_eq!(bordered(&pic("a")), pic("###/#a#/###"));
        assert_eq!(bordered(&pic("ab/ba")), pic("####/#ab#/#ba#/####"));
        let t = tiles_of(&pic("ab/ba")).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.contains(&Tile::new('a', 'b', 'b', 'a')));
        assert!(matches!(tiles_of(&pic("ab")), Err(PictureError::TooSmall(1, 2))));
    }

    #[test]
    fn local_membership() {
        let theta = tiles_of(&bordered(&pic("1000/0100/0010/0001"))).unwrap();
        assert!(in_local_language(&pic("1000/0100/0010/0001"), &theta));
        assert!(in_local_language(&pic("10/01"), &theta));
        assert!(!in_local_language(&pic("01/10"), &theta));
        assert!(!in_local_language(&pic("a"), &TileSet::new()));
    }

    #[test]
    fn concave_tiles() {
        assert!(Tile::new('B', 'B', 'C', 'B').is_concave());
        assert!(Tile::new('B', 'C', 'B', 'B').is_concave());
        assert!(!Tile::new('#', '#', 'A', '#').is_concave());
        assert!(!Tile::new('A', 'A', 'B', 'B').is_concave());
        assert!(!Tile::new('A', 'A', 'A', 'A').is_concave());
    }

    #[test]
    fn partitions() {
        let one = strong_partition(&pic("a")).unwrap();
        assert_eq!(one.blocks, vec![(Subdomain::pixel(1, 1), 'a')]);
        assert!(is_regional_picture(&pic("a")));
        assert!(strong_partition(&pic("ab/bb")).is_none());
        assert!(strong_partition(&pic("aab/abb")).is_none());
        assert!(!is_regional_picture(&pic("ab/ba")));
    }

    #[test]
    fn adjacency() {
        let s = |a, b, c, d| Slot::At(Subdomain::new(a, b, c, d).unwrap());
        assert_eq!(adjacency_kind(s(3, 1, 3, 1), s(3, 2, 3, 2)).unwrap(), Adjacency::Horizontal);
        assert_eq!(adjacency_kind(s(1, 1, 2, 2), s(3, 1, 4, 2)).unwrap(), Adjacency::Vertical);
        assert_eq!(adjacency_kind(s(1, 1, 1, 1), s(3, 3, 3, 3)).unwrap(), Adjacency::None);
        assert_eq!(adjacency_kind(Slot::Sentinel, s(1, 1, 1, 1)), Err(PictureError::Sentinel));
    }

    #[test]
    fn ragged_input_rejected() {
        assert!(matches!(Picture::parse("ab\na\n"), Err(PictureError::Ragged { line: 2, .. })));
        assert!(matches!(Picture::parse(""), Err(PictureError::Empty)));
        assert_eq!(pic("ab\nba\n").to_text(), "ab\nba\n");
    }
}
