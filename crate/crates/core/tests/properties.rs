use std::cmp::Ordering;
use std::sync::Arc;

use loopspace::algebra::{compare_words, coeff, Alphabet, NCPoly, OrderScheme, Word};
use loopspace::lyndon::{bracketing, enumerate_lyndon, is_lyndon, lex_leading, standard_split, LyndonWord};
use loopspace::rewrite::{QuadraticPresentation, Strategy as Reduction};
use loopspace::series::{divisors, mobius};
use proptest::prelude::*;

fn manifold_alphabet(r: u32) -> Arc<Alphabet> {
    Arc::new(Alphabet::loop_generators(2, r).unwrap())
}

fn word_strategy(letters: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..letters, 0..=max_len).prop_map(Word)
}

fn poly_strategy(alphabet: Arc<Alphabet>, max_len: usize) -> impl Strategy<Value = NCPoly> {
    let letters = alphabet.len() as u8;
    prop::collection::vec((word_strategy(letters, max_len), -4i64..=4), 0..5)
        .prop_map(move |terms| NCPoly::from_terms(alphabet.clone(), terms.into_iter().map(|(w, c)| (w, coeff(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(
        a in poly_strategy(manifold_alphabet(2), 3),
        b in poly_strategy(manifold_alphabet(2), 3),
        c in poly_strategy(manifold_alphabet(2), 3),
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left.terms(), right.terms());
    }

    #[test]
    fn jacobi_identity(
        a in poly_strategy(manifold_alphabet(2), 2),
        b in poly_strategy(manifold_alphabet(2), 2),
        c in poly_strategy(manifold_alphabet(2), 2),
    ) {
        let abc = a.bracket(&b).unwrap().bracket(&c).unwrap();
        let bca = b.bracket(&c).unwrap().bracket(&a).unwrap();
        let cab = c.bracket(&a).unwrap().bracket(&b).unwrap();
        prop_assert!(abc.add(&bca).unwrap().add(&cab).unwrap().is_zero());
        prop_assert_eq!(a.bracket(&b).unwrap(), b.bracket(&a).unwrap().neg());
    }

    #[test]
    fn degrees_add_under_multiplication(a in word_strategy(4, 4), b in word_strategy(4, 4)) {
        let alphabet = manifold_alphabet(2);
        let p = NCPoly::word(alphabet.clone(), a.clone());
        let q = NCPoly::word(alphabet.clone(), b.clone());
        for w in p.mul(&q).unwrap().terms().keys() {
            prop_assert_eq!(alphabet.degree(w), alphabet.degree(&a) + alphabet.degree(&b));
        }
    }

    #[test]
    fn orders_are_total_and_antisymmetric(a in word_strategy(4, 4), b in word_strategy(4, 4), c in word_strategy(4, 4)) {
        let alphabet = manifold_alphabet(2);
        for scheme in [OrderScheme::Lex, OrderScheme::LengthReverseLex, OrderScheme::DegreeLengthReverseLex, OrderScheme::DegreeLengthLex] {
            let ab = compare_words(&alphabet, &a, &b, scheme);
            prop_assert_eq!(ab, compare_words(&alphabet, &b, &a, scheme).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            let bc = compare_words(&alphabet, &b, &c, scheme);
            if ab == Ordering::Less && bc == Ordering::Less {
                prop_assert_eq!(compare_words(&alphabet, &a, &c, scheme), Ordering::Less);
            }
        }
    }

    #[test]
    fn lex_is_compatible_with_multiplication(a in word_strategy(4, 3), b in word_strategy(4, 3), x in word_strategy(4, 2), y in word_strategy(4, 2)) {
        let alphabet = manifold_alphabet(2);
        prop_assume!(alphabet.degree(&a) == alphabet.degree(&b) && a.len() == b.len());
        let before = compare_words(&alphabet, &a, &b, OrderScheme::Lex);
        let after = compare_words(&alphabet, &x.concat(&a).concat(&y), &x.concat(&b).concat(&y), OrderScheme::Lex);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn strategies_agree_and_normal_forms_are_idempotent(p in poly_strategy(manifold_alphabet(3), 6)) {
        let pres = QuadraticPresentation::loop_homology(2, 3).unwrap();
        let left = pres.normal_form_with(&p, Reduction::Leftmost).unwrap();
        let right = pres.normal_form_with(&p, Reduction::Rightmost).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(left.terms().keys().all(|w| pres.is_irreducible(w)));
        prop_assert_eq!(pres.normal_form(&left).unwrap(), left);
    }

    #[test]
    fn normal_form_is_congruent_modulo_the_relation(w in word_strategy(4, 3), v in word_strategy(4, 3)) {
        // u · σ · v reduces to zero
        let pres = QuadraticPresentation::loop_homology(2, 2).unwrap();
        let alphabet = pres.alphabet().clone();
        let sigma = pres.relation().unwrap().clone();
        let sandwich = NCPoly::word(alphabet.clone(), w).mul(&sigma).unwrap().mul(&NCPoly::word(alphabet, v)).unwrap();
        prop_assert!(pres.normal_form(&sandwich).unwrap().is_zero());
    }
}

#[test]
fn witt_necklace_counts() {
    for q in 1..=4usize {
        let alphabet = Alphabet::uniform(q, 1).unwrap();
        let words = enumerate_lyndon(&alphabet, 8);
        for m in 1..=8u64 {
            let necklace: i64 = divisors(m).iter().map(|&d| mobius(d) * (q as i64).pow((m / d) as u32)).sum::<i64>() / m as i64;
            assert_eq!(words[m as usize].len() as i64, necklace, "q={q} m={m}");
        }
    }
}

#[test]
fn enumeration_matches_brute_force_rotation_test() {
    let alphabet = Alphabet::loop_generators(2, 2).unwrap();
    let enumerated = enumerate_lyndon(&alphabet, 6);
    for degree in 1..=6u32 {
        let mut brute = Vec::new();
        let mut stack = vec![Vec::<u8>::new()];
        while let Some(w) = stack.pop() {
            let d: u32 = w.iter().map(|&l| alphabet.degree_of_letter(l)).sum();
            if d == degree {
                let n = w.len();
                let lyndon = (1..n).all(|i| {
                    let rotated: Vec<u8> = w[i..].iter().chain(&w[..i]).copied().collect();
                    w < rotated
                });
                if lyndon {
                    brute.push(Word(w.clone()));
                }
                continue;
            }
            for l in 0..alphabet.len() as u8 {
                if d + alphabet.degree_of_letter(l) <= degree {
                    let mut next = w.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
        brute.sort();
        let mut listed: Vec<Word> = enumerated[degree as usize].iter().map(|l| l.word().clone()).collect();
        listed.sort();
        assert_eq!(listed, brute, "degree {degree}");
    }
}

#[test]
fn factorizations_are_sound() {
    let alphabet = Alphabet::uniform(3, 1).unwrap();
    for words in enumerate_lyndon(&alphabet, 7) {
        for l in words {
            let Some((l1, l2)) = l.factorization() else {
                assert_eq!(l.word().len(), 1);
                continue;
            };
            let w = l.word().letters();
            assert!(is_lyndon(l1.word().letters()) && is_lyndon(l2.word().letters()));
            assert!(l1.word() < l2.word());
            assert_eq!(l1.word().concat(l2.word()), *l.word());
            // l2 is the longest proper Lyndon suffix
            let longest = (1..w.len()).find(|&i| is_lyndon(&w[i..])).unwrap();
            assert_eq!(standard_split(w), Some(longest));
            assert_eq!(l2.word().len(), w.len() - longest);
        }
    }
}

#[test]
fn bracketing_leads_with_the_lyndon_word() {
    let alphabet = Arc::new(Alphabet::loop_generators(2, 2).unwrap());
    for words in enumerate_lyndon(&alphabet, 6) {
        for l in &words {
            let b = bracketing(&alphabet, l);
            let (lead, unit) = lex_leading(&b).unwrap();
            assert_eq!(&lead, l.word());
            assert!(unit);
        }
    }
}

#[test]
fn lyndon_word_constructor_rejects_non_lyndon() {
    let alphabet = Alphabet::uniform(2, 1).unwrap();
    assert!(LyndonWord::new(alphabet.parse_word("ba").unwrap()).is_none());
    assert!(LyndonWord::new(alphabet.parse_word("aa").unwrap()).is_none());
    assert!(LyndonWord::new(alphabet.parse_word("aab").unwrap()).is_some());
}
