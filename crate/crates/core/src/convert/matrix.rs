use std::collections::BTreeMap;

use super::{ConvertError, Form, KSym, KolamGrammar, MatrixGrammar, StrSym};

/// Horizontal rules become `⦶`-only forms over the column start symbols;
/// each vertical grammar's rules become `⊖`-only forms. Nonterminals of
/// the vertical grammar for column `A_i` other than `A_i` itself are
/// renamed `A_i_X`. CNF normalization is left to `kolam_to_cnf`.
pub fn matrix_to_kolam(m: &MatrixGrammar) -> Result<KolamGrammar, ConvertError> {
    let mut nonterminals: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut intern = |name: String, nonterminals: &mut Vec<String>| -> Result<usize, ConvertError> {
        if index.contains_key(&name) || m.terminals.iter().any(|c| c.to_string() == name) {
            return Err(ConvertError::NameClash(name));
        }
        index.insert(name.clone(), nonterminals.len());
        nonterminals.push(name);
        Ok(nonterminals.len() - 1)
    };

    let h = &m.horizontal;
    let h_ids = h.nonterminals.iter().map(|n| intern(n.clone(), &mut nonterminals)).collect::<Result<Vec<_>, _>>()?;
    let col_ids = m.columns.iter().map(|(n, _)| intern(n.clone(), &mut nonterminals)).collect::<Result<Vec<_>, _>>()?;
    let mut v_ids = Vec::new();
    for (ci, (col, g)) in m.columns.iter().enumerate() {
        let mut ids = Vec::new();
        for (x, name) in g.nonterminals.iter().enumerate() {
            if x == g.start {
                ids.push(col_ids[ci]);
            } else {
                ids.push(intern(format!("{col}_{name}"), &mut nonterminals)?);
            }
        }
        v_ids.push(ids);
    }

    let mut rules = Vec::new();
    let mut rule_no = 0;
    for (lhs, rhs) in &h.rules {
        if rhs.is_empty() {
            return Err(ConvertError::EmptyRule(rule_no));
        }
        let items = rhs
            .iter()
            .map(|s| match s {
                StrSym::N(x) => Form::n(h_ids[*x]),
                StrSym::T(c) => Form::n(col_ids[*c]),
            })
            .collect();
        rules.push((h_ids[*lhs], Form::fold_h(items)));
        rule_no += 1;
    }
    for (ci, (_, g)) in m.columns.iter().enumerate() {
        for (lhs, rhs) in &g.rules {
            if rhs.is_empty() {
                return Err(ConvertError::EmptyRule(rule_no));
            }
            let items = rhs
                .iter()
                .map(|s| match s {
                    StrSym::N(x) => Form::n(v_ids[ci][*x]),
                    StrSym::T(c) => Form::Leaf(KSym::T(*c)),
                })
                .collect();
            rules.push((v_ids[ci][*lhs], Form::fold_v(items)));
            rule_no += 1;
        }
    }
    Ok(KolamGrammar { terminals: m.terminals.clone(), nonterminals, start: h_ids[h.start], rules })
}
