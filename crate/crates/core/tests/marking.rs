mod common;

use std::collections::BTreeSet;

use common::{ab, dfa, words};
use rand::Rng;
use schutz_core::corpus::{instance_rng, random_regex};
use schutz_core::marking::{ExtendedAlphabet, MarkedWord};
use schutz_core::{Dfa, Regex, Word};

fn ext() -> ExtendedAlphabet {
    ExtendedAlphabet::new(&ab())
}

fn random_marked<R: Rng>(rng: &mut R) -> MarkedWord {
    let n = rng.gen_range(1..8);
    let w: Word = (0..n).map(|_| rng.gen_range(0..2)).collect();
    MarkedWord::new(w, rng.gen_range(0..n)).unwrap()
}

/// `{π(m) : γ₁(m) ∈ L}` by enumerating every marking.
fn exists_oracle(e: &ExtendedAlphabet, l: &Dfa, max_len: usize) -> BTreeSet<Word> {
    words(2, max_len)
        .into_iter()
        .filter(|w| MarkedWord::all_of(w).any(|mw| l.accepts(&e.gamma1(&mw))))
        .collect()
}

#[test]
fn gamma_maps() {
    let e = ext();
    let sigma = ab();
    let x = e.extended();
    assert!(e.gamma0(&Word::empty()).is_empty());
    assert_eq!(x.render(&e.gamma0(&sigma.parse_word("ab").unwrap())), "a#0 b#0");
    let mw = MarkedWord::parse("ab@0", &sigma).unwrap();
    assert_eq!(x.render(&e.gamma1(&mw)), "a#1 b#0");
    assert_eq!(x.render(&e.gamma1(&MarkedWord::parse("a@0", &sigma).unwrap())), "a#1");
    assert!(MarkedWord::parse("ab@2", &sigma).is_err());

    let one_mark = dfa("(a#0|b#0)* (a#1|b#1) (a#0|b#0)*", x);
    assert_eq!(e.one_mark(), one_mark);
    let mut rng = instance_rng(5, 0);
    let mut seen = BTreeSet::new();
    for _ in 0..1000 {
        let mw = random_marked(&mut rng);
        let g = e.gamma1(&mw);
        assert!(one_mark.accepts(&g));
        assert_eq!(e.gamma0(mw.word()).len(), mw.word().len());
        assert_eq!(e.unmark(&g).as_ref(), Some(&mw));
        seen.insert((g, mw));
    }
    // γ₁ is injective.
    let images: BTreeSet<_> = seen.iter().map(|(g, _)| g.clone()).collect();
    assert_eq!(images.len(), seen.len());
}

#[test]
fn marked_word_actions_and_projection() {
    let sigma = ab();
    let e = ext();
    let mw = MarkedWord::parse("ab@1", &sigma).unwrap();
    assert_eq!(sigma.render(&mw.project()), "ab");
    let v = sigma.parse_word("bb").unwrap();
    let left = mw.left_act(&v);
    assert_eq!((sigma.render(left.word()), left.position()), ("bbab".to_string(), 3));
    let right = mw.right_act(&v);
    assert_eq!((sigma.render(right.word()), right.position()), ("abbb".to_string(), 1));
    for w in words(2, 5) {
        assert_eq!(MarkedWord::all_of(&w).count(), w.len());
        for mw in MarkedWord::all_of(&w) {
            for v in words(2, 2) {
                // γ₁ and π commute with the actions.
                assert_eq!(e.gamma1(&mw.left_act(&v)), e.gamma0(&v).concat(&e.gamma1(&mw)));
                assert_eq!(e.gamma1(&mw.right_act(&v)), e.gamma1(&mw).concat(&e.gamma0(&v)));
                assert_eq!(mw.left_act(&v).project(), v.concat(&mw.project()));
                assert_eq!(mw.right_act(&v).project(), mw.project().concat(&v));
            }
        }
    }
}

#[test]
fn f_a_and_f_r() {
    let sigma = ab();
    let mw = MarkedWord::parse("bab@0", &sigma).unwrap();
    assert_eq!(sigma.render(&mw.f_a(0)), "aab");
    let mw = MarkedWord::parse("bab@2", &sigma).unwrap();
    assert_eq!(sigma.render(&mw.f_r()), "ba");
    let mut rng = instance_rng(6, 0);
    for _ in 0..1000 {
        let mw = random_marked(&mut rng);
        let a = rng.gen_range(0..2);
        let i = mw.position();
        let expected: Word = mw.word()[..i].iter().copied().chain([a]).chain(mw.word()[i + 1..].iter().copied()).collect();
        assert_eq!(mw.f_a(a), expected);
        assert_eq!(mw.f_a(a), mw.f_r().pushed(a).concat(&mw.suffix()));
    }
}

#[test]
fn exists_projection_examples() {
    let e = ext();
    let sigma = ab();
    let x = e.extended();
    let l = dfa("(a#0|b#0)* a#1 (a#0|b#0)*", x);
    assert_eq!(e.exists_projection(&l).unwrap(), dfa("Σ* a Σ*", &sigma));
    assert!(e.exists_projection(&Dfa::empty(x)).unwrap().is_empty());
    assert_eq!(e.exists_projection(&Dfa::universal(x)).unwrap(), Dfa::plus(&sigma));
    assert!(e.exists_projection(&Dfa::universal(&sigma)).is_err());
}

#[test]
fn exists_projection_matches_marking_oracle() {
    let e = ext();
    let x = e.extended();
    for i in 0..20 {
        let mut rng = instance_rng(21, i);
        let r: Regex = random_regex(&mut rng, x, 2 + i as usize % 4);
        let l = r.to_dfa(x).unwrap();
        let got = e.exists_projection(&l).unwrap();
        let oracle = exists_oracle(&e, &l, 5);
        let mine: BTreeSet<Word> = words(2, 5).into_iter().filter(|w| got.accepts(w)).collect();
        assert_eq!(mine, oracle, "{r}");
    }
}
