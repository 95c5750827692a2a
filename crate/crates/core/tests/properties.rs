use std::sync::OnceLock;

use gentle_derived::complex::build_complex;
use gentle_derived::field::FieldChoice;
use gentle_derived::hom::{analyze_words, hom_basis, hom_dim, realize};
use gentle_derived::oracle::{oracle_hom_dim_words, verify_chain_map};
use gentle_derived::quiver::{parse_algebra, GentleAlgebra};
use gentle_derived::words::{enumerate_words, parse_word, Word};
use proptest::prelude::*;

const RUNNING: &str = include_str!("../../../data/running.quiver");

fn alg() -> &'static GentleAlgebra {
    static ALG: OnceLock<GentleAlgebra> = OnceLock::new();
    ALG.get_or_init(|| parse_algebra(RUNNING).unwrap())
}

fn words() -> &'static [Word] {
    static WORDS: OnceLock<Vec<Word>> = OnceLock::new();
    WORDS.get_or_init(|| enumerate_words(alg(), 3, -1, 1).0)
}

fn word() -> impl Strategy<Value = Word> {
    (0..words().len()).prop_map(|i| words()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differential_squares_to_zero(w in word(), k in -2i32..=2) {
        let c = build_complex(alg(), &w.shift(k), None).unwrap();
        prop_assert!(c.check_d2(alg()).is_ok());
    }

    #[test]
    fn key_ignores_inversion_and_literal_round_trip(w in word()) {
        let a = alg();
        prop_assert_eq!(w.canonical_key(a), w.inverse().canonical_key(a));
        let reparsed = parse_word(a, &w.literal(a)).unwrap();
        prop_assert_eq!(reparsed.canonical_key(a), w.canonical_key(a));
    }

    #[test]
    fn shift_is_a_group_action(w in word(), j in -3i32..=3, k in -3i32..=3) {
        let a = alg();
        prop_assert_eq!(w.shift(j).shift(k).canonical_key(a), w.shift(j + k).canonical_key(a));
        prop_assert_eq!(w.shift(0).canonical_key(a), w.canonical_key(a));
        prop_assert_eq!(w.inverse().inverse().literal(a), w.literal(a));
    }

    #[test]
    fn hom_dim_is_shift_and_inversion_invariant(v in word(), w in word(), k in -2i32..=2) {
        let a = alg();
        let d = hom_dim(a, &v, &w).unwrap();
        prop_assert_eq!(hom_dim(a, &v.shift(k), &w.shift(k)).unwrap(), d);
        prop_assert_eq!(hom_dim(a, &v.inverse(), &w).unwrap(), d);
        prop_assert_eq!(hom_dim(a, &v, &w.inverse()).unwrap(), d);
    }

    #[test]
    fn engine_matches_oracle(v in word(), w in word()) {
        let a = alg();
        let d = hom_dim(a, &v, &w).unwrap();
        prop_assert_eq!(oracle_hom_dim_words(a, &v, &w, FieldChoice::Rational).unwrap(), d);
        prop_assert_eq!(oracle_hom_dim_words(a, &v, &w, FieldChoice::Prime(3)).unwrap(), d);
    }

    #[test]
    fn basis_elements_are_chain_maps(v in word(), w in word()) {
        let a = alg();
        let (p, an) = analyze_words(a, &v, &w).unwrap();
        prop_assert_eq!(an.theta.len(), hom_basis(a, &v, &w).unwrap().len());
        for m in &an.theta {
            prop_assert!(verify_chain_map(a, &p.v.complex, &p.w.complex, &realize(m, &p.v, &p.w)));
        }
    }
}

#[test]
fn path_composition_is_associative() {
    let a = alg();
    let paths = a.all_paths();
    for p in &paths {
        for q in &paths {
            for r in &paths {
                let left = a.concat(p, q).and_then(|pq| a.concat(&pq, r));
                let right = a.concat(q, r).and_then(|qr| a.concat(p, &qr));
                assert_eq!(left, right, "{} {} {}", a.path_name(p), a.path_name(q), a.path_name(r));
            }
        }
    }
}

fn rename_arrows(text: &str, perm: &[usize]) -> String {
    // Arrow names in the running example are single letters a..f.
    let names = ["a", "b", "c", "d", "e", "f"];
    let mut out = String::new();
    for line in text.lines() {
        let mut tokens = Vec::new();
        for tok in line.split(' ') {
            let mapped = names.iter().position(|n| *n == tok.trim_end_matches(':')).map(|i| {
                let suffix = if tok.ends_with(':') { ":" } else { "" };
                format!("x{}{suffix}", perm[i])
            });
            tokens.push(mapped.unwrap_or_else(|| tok.to_string()));
        }
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

proptest! {
    #[test]
    fn cycle_count_ignores_arrow_names(perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let renamed = parse_algebra(&rename_arrows(RUNNING, &perm)).unwrap();
        prop_assert_eq!(renamed.cycle_arrows().len(), alg().cycle_arrows().len());
        prop_assert_eq!(renamed.num_arrows(), alg().num_arrows());
    }
}

#[test]
fn band_scalar_position_does_not_change_dimensions() {
    // Moving the scalar onto a letter of the other direction inverts it.
    let a = alg();
    let z = parse_word(a, "(d,3,2)(e,2,1)(f,1,0)(c,0,1)(b,1,2)(a,2,3)@λ=2").unwrap();
    let targets: Vec<Word> = words().iter().filter(|w| w.len() <= 2).cloned().chain([z.clone(), z.shift(1)]).collect();
    let expected: Vec<usize> = targets.iter().map(|t| hom_dim(a, &z, t).unwrap()).collect();
    for at in 0..z.letters.len() {
        let lambda = if z.letters[at].is_direct() { z.holonomy() } else { z.holonomy().recip() };
        let moved = Word::band_at(a, z.letters.clone(), lambda, at, 1).unwrap();
        assert_eq!(moved.holonomy(), z.holonomy());
        assert_eq!(moved.canonical_key(a), z.canonical_key(a));
        let dims: Vec<usize> = targets.iter().map(|t| hom_dim(a, &moved, t).unwrap()).collect();
        assert_eq!(dims, expected, "scalar on letter {at}");
        let d = oracle_hom_dim_words(a, &moved, &z, FieldChoice::Rational).unwrap();
        assert_eq!(d, expected[expected.len() - 2]);
    }
}
