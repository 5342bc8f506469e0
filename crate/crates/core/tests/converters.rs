mod common;

use std::collections::BTreeSet;

use common::{as_tg, loaded, p, pic, pictures_up_to};
use rtg::convert::{
    grid_to_kolam, kolam_to_cnf, kolam_to_rtg, matrix_to_kolam, prusa_to_nnf, prusa_to_rtg, ts_to_tg, Form, KSym, KolamGrammar,
    TilingSystem,
};
use rtg::format::{self, grid, kolam, matrix, prusa, rtg as rtgfmt, ts, LoadedGrammar};
use rtg::oracle::{enumerate_language_tg, enumerate_source, membership_ts, SizeBound, Source};
use rtg::picture::{bordered, tiles_of, Picture, Sym, Tile, TileSet};
use rtg::{validate_grammar, Parser, Rule, TileGrammar};

const B33: SizeBound = SizeBound { max_rows: 3, max_cols: 3 };

fn accepted(g: &TileGrammar, b: SizeBound, sigma: &[char]) -> BTreeSet<Picture<char>> {
    let parser = Parser::new(g).unwrap();
    pictures_up_to(sigma, b.max_rows, b.max_cols).into_iter().filter(|q| parser.accepts(q)).collect()
}

fn kolam(name: &str) -> KolamGrammar {
    match loaded(name) {
        LoadedGrammar::Kolam(k) => k,
        _ => panic!(),
    }
}

#[test]
fn every_corpus_file_round_trips() {
    for name in ["g1.rtg", "g2.rtg", "g3.rtg", "g4.rtg", "t3.ts", "g5.kolam", "g6.prusa", "ex7.grid", "g7.matrix"] {
        let g = loaded(name);
        let text = match &g {
            LoadedGrammar::Rtg(x) => rtgfmt::write_rtg(x),
            LoadedGrammar::Ts(x) => ts::write_ts(x),
            LoadedGrammar::Kolam(x) => kolam::write_kolam(x),
            LoadedGrammar::Prusa(x) => prusa::write_prusa(x),
            LoadedGrammar::Grid(x) => grid::write_grid(x),
            LoadedGrammar::Matrix(x) => matrix::write_matrix(x),
        };
        assert_eq!(format::load_grammar_str(&text).unwrap(), g, "{name}:\n{text}");
    }
}

#[test]
fn converted_grammars_round_trip() {
    for name in ["t3.ts", "g5.kolam", "g6.prusa", "ex7.grid", "g7.matrix"] {
        let g = as_tg(name);
        assert_eq!(rtgfmt::parse_rtg(&rtgfmt::write_rtg(&g)).unwrap(), g, "{name}");
        assert_eq!(rtgfmt::parse_rtg(&rtgfmt::write_tg(&g)).unwrap(), g, "{name}");
    }
    let cnf = kolam_to_cnf(&grid_to_kolam(&match loaded("ex7.grid") {
        LoadedGrammar::Grid(x) => x,
        _ => panic!(),
    })
    .unwrap());
    assert_eq!(kolam::parse_kolam(&kolam::write_kolam(&cnf)).unwrap(), cnf);
}

#[test]
fn ts_conversion_reproduces_g3() {
    let LoadedGrammar::Ts(t3) = loaded("t3.ts") else { panic!() };
    let g3 = ts_to_tg(&t3);
    assert_eq!(g3, common::rtg_file("g3.rtg"));
    assert_eq!(g3.rules.iter().filter(|r| matches!(r, Rule::Fixed { .. })).count(), 4);
    for q in pictures_up_to(&['a'], 3, 3) {
        let want = membership_ts(&t3, &q);
        assert_eq!(rtg::oracle::derive_membership_tg(&g3, &q, usize::MAX), rtg::oracle::Verdict::from_result(Ok(want)));
    }
}

#[test]
fn ts_conversion_of_small_systems() {
    // One tile over one symbol: only the 1x1 picture is local.
    let x = Sym::new(0);
    let hash = <Sym as rtg::Cell>::BORDER;
    let single: TileSet<Sym> = tiles_of(&bordered(&Picture::filled(1, 1, x))).unwrap();
    let t = TilingSystem { sigma: vec!['a'], gamma: vec!["x".into()], theta: single, projection: vec!['a'] };
    let g = ts_to_tg(&t);
    let lang = enumerate_language_tg(&g, B33, usize::MAX).unwrap();
    let want: BTreeSet<_> = pictures_up_to(&['a'], 3, 3).into_iter().filter(|q| membership_ts(&t, q)).collect();
    assert_eq!(lang, want);
    assert_eq!(want, BTreeSet::from([p("a")]));

    let inner = TileSet::from_iter([Tile::new(x, x, x, x)]);
    let t = TilingSystem { sigma: vec!['a'], gamma: vec!["x".into()], theta: inner, projection: vec!['a'] };
    assert!(enumerate_language_tg(&ts_to_tg(&t), B33, usize::MAX).unwrap().is_empty());
    assert!(!t.theta.iter().any(|tile| tile.0.contains(&hash)));
}

#[test]
fn g5_is_already_in_cnf() {
    let g5 = kolam("g5.kolam");
    assert!(g5.is_cnf());
    let c = kolam_to_cnf(&g5);
    assert!(c.is_cnf());
    assert_eq!(c.rules.len(), g5.rules.len());
    assert_eq!(enumerate_source(Source::Kolam(&c), B33, usize::MAX), enumerate_source(Source::Kolam(&g5), B33, usize::MAX));
}

#[test]
fn cnf_binarizes_nested_forms() {
    let k = kolam::parse_kolam("%format kolam\n%start S\nS -> ((A || B) -- C)\nA -> 'a'\nB -> 'b'\nC -> 'c'\n").unwrap();
    let c = kolam_to_cnf(&k);
    assert!(c.is_cnf());
    let s = c.nonterminals.iter().position(|n| n == "S").unwrap();
    let s_rules: Vec<&Form> = c.rules.iter().filter(|(l, _)| *l == s).map(|(_, f)| f).collect();
    assert_eq!(s_rules.len(), 1);
    let Form::V(top, bottom) = s_rules[0] else { panic!("{:?}", s_rules[0]) };
    let (Form::Leaf(KSym::N(t)), Form::Leaf(KSym::N(cc))) = (&**top, &**bottom) else { panic!() };
    assert_eq!(c.nonterminals[*cc], "C");
    let t_rules: Vec<String> = c.rules.iter().filter(|(l, _)| l == t).map(|(_, f)| c.display_form(f).to_string()).collect();
    assert_eq!(t_rules, vec!["(A || B)"]);
    let got = enumerate_source(Source::Kolam(&c), B33, usize::MAX).unwrap();
    assert!(got.is_empty(), "ab over c has mismatched widths");
}

#[test]
fn kolam_rules_become_two_block_exemplars() {
    let g5 = kolam("g5.kolam");
    let g = kolam_to_rtg(&kolam_to_cnf(&g5)).unwrap();
    let (v, a1) = (g.nonterminal("V").unwrap(), g.nonterminal("A1").unwrap());
    let a2 = g.nonterminal("A2").unwrap();
    let vertical = tiles_of(&bordered(&Picture::from_fn(4, 2, |i, _| Sym::new(if i <= 2 { v } else { a1 })))).unwrap();
    assert!(g.rules.contains(&Rule::Variable { lhs: a2, body: vertical }));
    let s = g.nonterminal("S").unwrap();
    assert!(g.rules.contains(&Rule::Fixed { lhs: s, rhs: 'a' }));
    let parser = Parser::new(&g).unwrap();
    assert!(parser.accepts(&p("ab/aa/ab")));
    assert!(!parser.accepts(&p("ab/ba")));
    assert_eq!(accepted(&g, B33, &['a', 'b']), enumerate_source(Source::Kolam(&g5), B33, usize::MAX).unwrap());
}

#[test]
fn kolam_with_equal_operands_stays_regional() {
    let k = kolam::parse_kolam("%format kolam\n%start S\nS -> (A || A)\nA -> 'a'\n").unwrap();
    let g = kolam_to_rtg(&kolam_to_cnf(&k)).unwrap();
    assert!(validate_grammar(&g).unwrap().1.rtg_valid);
    assert_eq!(accepted(&g, B33, &['a']), BTreeSet::from([p("aa")]));
}

#[test]
fn prusa_normal_form() {
    let LoadedGrammar::Prusa(g6) = loaded("g6.prusa") else { panic!() };
    assert!(!g6.is_nnf());
    let nnf = prusa_to_nnf(&g6);
    assert!(nnf.is_nnf());
    assert_eq!(prusa_to_nnf(&nnf), nnf);
    let s = nnf.nonterminals.iter().position(|n| n == "S").unwrap();
    let (_, body) = nnf.rules.iter().find(|(l, _)| *l == s).unwrap();
    let KSym::N(centre) = *body.get(2, 2) else { panic!() };
    assert!(nnf.rules.contains(&(centre, Picture::filled(1, 1, KSym::T('b')))));
    assert_eq!(enumerate_source(Source::Prusa(&nnf), B33, usize::MAX), enumerate_source(Source::Prusa(&g6), B33, usize::MAX));
}

#[test]
fn prusa_to_rtg_accepts_the_cross_language() {
    let g = as_tg("g6.prusa");
    assert!(validate_grammar(&g).unwrap().1.rtg_valid);
    let parser = Parser::new(&g).unwrap();
    assert!(parser.accepts(&pic("p1.pic")));
    assert!(!parser.accepts(&pic("all_a_3x3.pic")));
    let LoadedGrammar::Prusa(g6) = loaded("g6.prusa") else { panic!() };
    let want = enumerate_source(Source::Prusa(&g6), SizeBound::new(4, 4), usize::MAX).unwrap();
    assert_eq!(accepted(&g, SizeBound::new(4, 4), &['a', 'b']), want);
}

#[test]
fn prusa_single_cell_body_is_a_chain() {
    let g = prusa::parse_prusa("%format prusa\n%start S\nS -> { A }\nA -> { 'a' 'a' }\n").unwrap();
    let tg = prusa_to_rtg(&prusa_to_nnf(&g)).unwrap();
    assert!(tg.has_chain_rules());
    assert_eq!(accepted(&tg, B33, &['a']), BTreeSet::from([p("aa")]));
}

#[test]
fn grid_terminal_rules_generate_squares() {
    let g = grid::parse_grid("%format grid\n%start A\nA -> 't'\n").unwrap();
    let k = grid_to_kolam(&g).unwrap();
    let got = enumerate_source(Source::Kolam(&k), SizeBound::new(3, 3), usize::MAX).unwrap();
    let want: BTreeSet<_> = (1..=3).map(|n| Picture::filled(n, n, 't')).collect();
    assert_eq!(got, want);
    assert_eq!(enumerate_source(Source::Grid(&g), SizeBound::new(3, 3), usize::MAX).unwrap(), want);
}

#[test]
fn grid_example_pipeline() {
    let LoadedGrammar::Grid(ex7) = loaded("ex7.grid") else { panic!() };
    assert_eq!(enumerate_source(Source::Grid(&ex7), SizeBound::new(1, 1), usize::MAX).unwrap(), BTreeSet::from([p("a")]));
    let k = grid_to_kolam(&ex7).unwrap();
    let want = enumerate_source(Source::Grid(&ex7), B33, usize::MAX).unwrap();
    assert!(want.contains(&p("aba/bbb/aba")));
    assert_eq!(enumerate_source(Source::Kolam(&k), B33, usize::MAX).unwrap(), want);
    assert_eq!(enumerate_source(Source::Kolam(&kolam_to_cnf(&k)), B33, usize::MAX).unwrap(), want);
    let g = as_tg("ex7.grid");
    assert!(validate_grammar(&g).unwrap().1.rtg_valid);
    assert_eq!(accepted(&g, B33, &['a', 'b']), want);
    assert!(Parser::new(&g).unwrap().accepts(&pic("fig11.pic")));
}

#[test]
fn matrix_pipeline() {
    let LoadedGrammar::Matrix(g7) = loaded("g7.matrix") else { panic!() };
    assert_eq!(g7.horizontal.nonterminals, vec!["S"]);
    let names: Vec<&str> = g7.columns.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, vec!["A1", "A2"]);
    let k = matrix_to_kolam(&g7).unwrap();
    let want = enumerate_source(Source::Matrix(&g7), B33, usize::MAX).unwrap();
    assert_eq!(enumerate_source(Source::Kolam(&k), B33, usize::MAX).unwrap(), want);
    assert_eq!(enumerate_source(Source::Kolam(&kolam_to_cnf(&k)), B33, usize::MAX).unwrap(), want);
    let g = as_tg("g7.matrix");
    assert!(validate_grammar(&g).unwrap().1.rtg_valid);
    let parser = Parser::new(&g).unwrap();
    let p7 = pic("p7.pic");
    assert!(parser.accepts(&p7));
    let broken = Picture::from_fn(6, 7, |i, j| if (i, j) == (3, 4) { 'a' } else { *p7.get(i, j) });
    assert!(!parser.accepts(&broken));
    assert!(enumerate_source(Source::Matrix(&g7), SizeBound::new(6, 7), usize::MAX).unwrap().contains(&p7));
}

#[test]
fn single_column_matrix_is_a_vertical_grammar() {
    let m = matrix::parse_matrix("%format matrix\n%section horizontal\nS -> C\n%section vertical C\nC -> 'a' C\nC -> 'b'\n").unwrap();
    let k = matrix_to_kolam(&m).unwrap();
    let mut stack: Vec<&Form> = k.rules.iter().map(|(_, f)| f).collect();
    while let Some(f) = stack.pop() {
        match f {
            Form::H(..) => panic!("column concatenation in {}", k.display_form(f)),
            Form::V(a, b) => stack.extend([&**a, &**b]),
            Form::Leaf(_) => {}
        }
    }
    let got = enumerate_source(Source::Kolam(&k), SizeBound::new(3, 2), usize::MAX).unwrap();
    assert_eq!(got, BTreeSet::from([p("b"), p("a/b"), p("a/a/b")]));
}

#[test]
fn kolam_source_languages() {
    let g5 = kolam("g5.kolam");
    assert!(enumerate_source(Source::Kolam(&g5), SizeBound::new(3, 2), usize::MAX).unwrap().contains(&p("ab/aa/ab")));
}
