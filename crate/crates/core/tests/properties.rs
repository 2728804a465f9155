mod common;

use std::sync::Arc;

use proptest::prelude::*;
use schutz_core::corpus::small_monoids;
use schutz_core::marking::{ExtendedAlphabet, MarkedWord};
use schutz_core::schutz::{UnaryElem, UnarySchutz};
use schutz_core::{Mode, MonoidMorphism, Subset, Word};

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..2, 0..max).prop_map(Word::from)
}

proptest! {
    #[test]
    fn morphisms_respect_concatenation(idx in 0usize..7, images in prop::collection::vec(0usize..3, 2), v in word(8), w in word(8)) {
        let monoids = small_monoids(3, Mode::Monoid).unwrap();
        let m = Arc::new(monoids[idx % monoids.len()].clone());
        let images = images.into_iter().map(|x| x % m.size()).collect();
        let h = MonoidMorphism::new(common::ab(), m.clone(), images).unwrap();
        prop_assert_eq!(h.evaluate(&v.concat(&w)).unwrap(), m.mul(h.evaluate(&v).unwrap(), h.evaluate(&w).unwrap()));
    }

    #[test]
    fn marked_words_decompose(w in word(10).prop_filter("non-empty", |w| !w.is_empty()), pos in 0usize..10, a in 0usize..2) {
        let mw = MarkedWord::new(w.clone(), pos % w.len()).unwrap();
        prop_assert_eq!(mw.f_a(a), mw.f_r().pushed(a).concat(&mw.suffix()));
        let e = ExtendedAlphabet::new(&common::ab());
        prop_assert_eq!(e.unmark(&e.gamma1(&mw)), Some(mw.clone()));
        prop_assert_eq!(e.erase(&e.gamma1(&mw)), w);
    }

    #[test]
    fn unary_product_is_associative(idx in 0usize..7, s in 0u128..8, t in 0u128..8, u in 0u128..8, x in 0usize..3, y in 0usize..3, z in 0usize..3) {
        let monoids = small_monoids(3, Mode::Monoid).unwrap();
        let m = monoids[idx % monoids.len()].clone();
        let k = m.size();
        let elem = |bits: u128, e: usize| UnaryElem { set: Subset::from_bits(bits & ((1 << k) - 1)), m: e % k };
        let d = UnarySchutz::new(Arc::new(m)).unwrap();
        let (p, q, r) = (elem(s, x), elem(t, y), elem(u, z));
        prop_assert_eq!(d.mul(&d.mul(&p, &q), &r), d.mul(&p, &d.mul(&q, &r)));
    }
}
