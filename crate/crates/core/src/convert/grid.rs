use crate::names::FreshNames;

use super::{ConvertError, Form, GridGrammar, GridRule, KSym, KolamGrammar};

/// Grid rules become `(B_k1 ⦶ ... ⦶ B_kk) ⊖ ... ⊖ (B_11 ⦶ ... ⦶ B_1k)`.
///
/// A terminal rule `A -> t` becomes the square generator
/// `A -> (A ⦶ A_v) ⊖ (A_h ⦶ t) | t`, `A_h -> A_h ⦶ t | t`, `A_v -> t ⊖ A_v | t`.
/// The generator recurses on its own left-hand side, so it is emitted
/// on `A` only when `A -> t` is the sole rule of `A`; otherwise it goes on
/// a fresh nonterminal reached from `A` by a unit rule.
pub fn grid_to_kolam(g: &GridGrammar) -> Result<KolamGrammar, ConvertError> {
    let mut names = FreshNames::new(g.nonterminals.iter().cloned().chain(g.terminals.iter().map(|c| c.to_string())));
    let mut nonterminals = g.nonterminals.clone();
    let mut rules = Vec::new();
    let add = |nonterminals: &mut Vec<String>, names: &mut FreshNames, base: String| {
        let name = if names.is_taken(&base) { names.fresh(&base) } else { base };
        names.reserve(&name);
        nonterminals.push(name);
        nonterminals.len() - 1
    };
    for (idx, r) in g.rules.iter().enumerate() {
        match r {
            GridRule::Terminal { lhs, t } => {
                let sole = g.rules.iter().filter(|x| x.lhs() == *lhs).count() == 1;
                let sq = if sole {
                    *lhs
                } else {
                    let q = add(&mut nonterminals, &mut names, format!("{}_{}", g.nonterminals[*lhs], t));
                    rules.push((*lhs, Form::n(q)));
                    q
                };
                let base = nonterminals[sq].clone();
                let h = add(&mut nonterminals, &mut names, format!("{base}_h"));
                let v = add(&mut nonterminals, &mut names, format!("{base}_v"));
                let tf = || Form::t(*t);
                rules.push((sq, Form::v(Form::h(Form::n(sq), Form::n(v)), Form::h(Form::n(h), tf()))));
                rules.push((sq, tf()));
                rules.push((h, Form::h(Form::n(h), tf())));
                rules.push((h, tf()));
                rules.push((v, Form::v(tf(), Form::n(v))));
                rules.push((v, tf()));
            }
            GridRule::Grid { lhs, k, cells } => {
                if cells.iter().any(|c| matches!(c, KSym::T(_))) {
                    return Err(ConvertError::NotNnf(idx));
                }
                let row = |i: usize| Form::fold_h((1..=*k).map(|j| Form::Leaf(cells[(i - 1) * k + (j - 1)])).collect());
                rules.push((*lhs, Form::fold_v((1..=*k).rev().map(row).collect())));
            }
        }
    }
    Ok(KolamGrammar { terminals: g.terminals.clone(), nonterminals, start: g.start, rules })
}
