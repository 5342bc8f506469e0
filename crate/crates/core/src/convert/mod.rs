//! Source formalisms and their translations into tile grammars.

mod grid;
mod kolam;
mod matrix;
mod prusa;
mod ts;

use std::fmt;

use thiserror::Error;

use crate::picture::{hcat, vcat, Picture, PictureError, Sym, TileSet};

pub use grid::grid_to_kolam;
pub use kolam::{kolam_to_cnf, kolam_to_rtg};
pub use matrix::matrix_to_kolam;
pub use prusa::{prusa_to_nnf, prusa_to_rtg};
pub use ts::ts_to_tg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("rule {0} is not in Chomsky normal form")]
    NotCnf(usize),
    #[error("rule {0} is not in nonterminal normal form")]
    NotNnf(usize),
    #[error("rule {0} has an empty right-hand side")]
    EmptyRule(usize),
    #[error("name clash after namespacing: '{0}'")]
    NameClash(String),
}

/// `(Σ, Γ, θ, π)`; `Sym(i)` in `theta` is `gamma[i]`, projected to `projection[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingSystem {
    pub sigma: Vec<char>,
    pub gamma: Vec<String>,
    pub theta: TileSet<Sym>,
    pub projection: Vec<char>,
}

/// Terminal or nonterminal occurrence in a right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KSym {
    T(char),
    N(usize),
}

/// Kolam sentential form; `H` is column concatenation `⦶`, `V` row concatenation `⊖`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Form {
    Leaf(KSym),
    H(Box<Form>, Box<Form>),
    V(Box<Form>, Box<Form>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("form denotes no picture: {0}")]
    Undefined(PictureError),
    #[error("form contains a nonterminal")]
    NotGround,
}

impl Form {
    pub fn t(c: char) -> Form {
        Form::Leaf(KSym::T(c))
    }

    pub fn n(i: usize) -> Form {
        Form::Leaf(KSym::N(i))
    }

    pub fn h(a: Form, b: Form) -> Form {
        Form::H(Box::new(a), Box::new(b))
    }

    pub fn v(a: Form, b: Form) -> Form {
        Form::V(Box::new(a), Box::new(b))
    }

    /// `⦇φ⦈` of a ground form.
    pub fn eval(&self) -> Result<Picture<char>, FormError> {
        self.eval_with(&mut |s| match s {
            KSym::T(c) => Ok(Picture::filled(1, 1, c)),
            KSym::N(_) => Err(FormError::NotGround),
        })
    }

    /// Evaluates with `leaf` supplying the picture of each leaf.
    pub fn eval_with<F>(&self, leaf: &mut F) -> Result<Picture<char>, FormError>
    where
        F: FnMut(KSym) -> Result<Picture<char>, FormError>,
    {
        match self {
            Form::Leaf(s) => leaf(*s),
            Form::H(a, b) => hcat(&a.eval_with(leaf)?, &b.eval_with(leaf)?).map_err(FormError::Undefined),
            Form::V(a, b) => vcat(&a.eval_with(leaf)?, &b.eval_with(leaf)?).map_err(FormError::Undefined),
        }
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<KSym> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<KSym>) {
        match self {
            Form::Leaf(s) => out.push(*s),
            Form::H(a, b) | Form::V(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn fold_h(items: Vec<Form>) -> Form {
        items.into_iter().reduce(Form::h).expect("non-empty row")
    }

    pub fn fold_v(items: Vec<Form>) -> Form {
        items.into_iter().reduce(Form::v).expect("non-empty column")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KolamGrammar {
    pub terminals: Vec<char>,
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub rules: Vec<(usize, Form)>,
}

impl KolamGrammar {
    pub fn is_cnf(&self) -> bool {
        self.rules.iter().all(|(_, f)| cnf_shape(f))
    }

    pub fn display_form(&self, f: &Form) -> FormDisplay<'_> {
        FormDisplay { names: &self.nonterminals, form: f.clone() }
    }
}

pub(crate) fn cnf_shape(f: &Form) -> bool {
    match f {
        Form::Leaf(KSym::T(_)) => true,
        Form::Leaf(KSym::N(_)) => false,
        Form::H(a, b) | Form::V(a, b) => {
            matches!(**a, Form::Leaf(KSym::N(_))) && matches!(**b, Form::Leaf(KSym::N(_)))
        }
    }
}

/// Renders a form in the file syntax, e.g. `((A || B) -- 'c')`.
pub struct FormDisplay<'a> {
    names: &'a [String],
    form: Form,
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(names: &[String], form: &Form, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match form {
                Form::Leaf(KSym::T(c)) => write!(f, "'{c}'"),
                Form::Leaf(KSym::N(i)) => write!(f, "{}", names[*i]),
                Form::H(a, b) | Form::V(a, b) => {
                    let op = if matches!(form, Form::H(..)) { "||" } else { "--" };
                    write!(f, "(")?;
                    go(names, a, f)?;
                    write!(f, " {op} ")?;
                    go(names, b, f)?;
                    write!(f, ")")
                }
            }
        }
        go(self.names, &self.form, f)
    }
}

/// Rules map a nonterminal to a picture over `N ∪ Σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrusaGrammar {
    pub terminals: Vec<char>,
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub rules: Vec<(usize, Picture<KSym>)>,
}

impl PrusaGrammar {
    pub fn is_nnf(&self) -> bool {
        self.rules.iter().all(|(_, w)| prusa_nnf_body(w))
    }
}

pub(crate) fn prusa_nnf_body(w: &Picture<KSym>) -> bool {
    let single_terminal = w.size() == (1, 1) && matches!(w.get(1, 1), KSym::T(_));
    single_terminal || w.cells().iter().all(|s| matches!(s, KSym::N(_)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridRule {
    Terminal { lhs: usize, t: char },
    /// `k x k` cells listed bottom row first, each row left to right.
    Grid { lhs: usize, k: usize, cells: Vec<KSym> },
}

impl GridRule {
    pub fn lhs(&self) -> usize {
        match self {
            GridRule::Terminal { lhs, .. } | GridRule::Grid { lhs, .. } => *lhs,
        }
    }

    /// Cell `B_{i,j}`, `i` counted from the bottom, both 1-based.
    pub fn cell(&self, i: usize, j: usize) -> Option<KSym> {
        match self {
            GridRule::Terminal { .. } => None,
            GridRule::Grid { k, cells, .. } => Some(cells[(i - 1) * k + (j - 1)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridGrammar {
    pub terminals: Vec<char>,
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub rules: Vec<GridRule>,
}

impl GridGrammar {
    pub fn is_nnf(&self) -> bool {
        self.rules.iter().all(|r| match r {
            GridRule::Terminal { .. } => true,
            GridRule::Grid { cells, .. } => cells.iter().all(|c| matches!(c, KSym::N(_))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrSym<T> {
    T(T),
    N(usize),
}

/// Context-free string grammar without empty rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringGrammar<T> {
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub rules: Vec<(usize, Vec<StrSym<T>>)>,
}

/// `(H, {V_1..V_k})`. Terminals of `H` index into `columns`; column `i`
/// is generated by `columns[i].1`, whose start symbol is named `columns[i].0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGrammar {
    pub terminals: Vec<char>,
    pub horizontal: StringGrammar<usize>,
    pub columns: Vec<(String, StringGrammar<char>)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_form_evaluation() {
        let phi1 = Form::v(Form::h(Form::t('a'), Form::t('b')), Form::h(Form::t('b'), Form::t('a')));
        assert_eq!(phi1.eval().unwrap(), Picture::parse("ab/ba").unwrap());
        let phi2 = Form::v(Form::h(Form::t('a'), Form::t('b')), Form::t('a'));
        assert!(matches!(phi2.eval(), Err(FormError::Undefined(PictureError::ColumnMismatch { .. }))));
        assert_eq!(Form::n(0).eval(), Err(FormError::NotGround));
    }
}
