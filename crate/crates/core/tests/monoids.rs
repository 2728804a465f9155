mod common;

use std::collections::BTreeMap;

use rand::Rng;
use std::sync::Arc;

use common::{ab, dfa, w, words};
use schutz_core::corpus::{instance_rng, small_monoids, standard_corpus};
use schutz_core::monoid::{preserves_actions, MonoidHom};
use schutz_core::{
    all_morphisms, generate_algebra, recognised_algebra, syntactic_monoid, Alphabet, Dfa, FiniteMonoid, Limits, Mode,
    MonoidMorphism, Universe, Word,
};


fn semilattice_morphism(sigma: &Alphabet) -> MonoidMorphism {
    MonoidMorphism::new(sigma.clone(), Arc::new(FiniteMonoid::two_element_semilattice()), vec![1, 0]).unwrap()
}

/// Myhill–Nerode classes of `l` on words up to `n`, with contexts up to `k`.
fn nerode_classes(l: &Dfa, n: usize, k: usize) -> usize {
    let ctx = words(l.alphabet().len(), k);
    let mut classes: BTreeMap<Vec<bool>, ()> = BTreeMap::new();
    for x in words(l.alphabet().len(), n) {
        let sig: Vec<bool> = ctx
            .iter()
            .flat_map(|u| ctx.iter().map(move |v| (u, v)))
            .map(|(u, v)| l.accepts(&u.concat(&x).concat(v)))
            .collect();
        classes.insert(sig, ());
    }
    classes.len()
}

#[test]
fn syntactic_monoid_examples() {
    let sigma = ab();
    let syn = syntactic_monoid(&Dfa::universal(&sigma));
    assert_eq!(syn.monoid.size(), 1);
    assert_eq!(syn.accepting, vec![0]);

    let l = dfa("Σ* a Σ*", &sigma);
    let syn = syntactic_monoid(&l);
    assert_eq!(syn.monoid.size(), 2);
    assert_eq!(nerode_classes(&l, 6, 2), 2);
    let z = syn.morphism.image(0);
    assert_eq!(syn.morphism.image(1), syn.monoid.identity().unwrap());
    assert_eq!(syn.monoid.mul(z, z), z);
    assert_eq!(syn.accepting, vec![z]);

    let a = Alphabet::parse_list("a").unwrap();
    let even = dfa("(a a)*", &a);
    let syn = syntactic_monoid(&even);
    assert_eq!(syn.monoid.size(), 2);
    let g = syn.morphism.image(0);
    assert_eq!(syn.monoid.mul(g, g), syn.monoid.identity().unwrap());
    assert_eq!(syn.accepting, vec![syn.monoid.identity().unwrap()]);
}

#[test]
fn syntactic_monoid_recognises_and_is_minimal() {
    let (_, corpus) = standard_corpus();
    for l in &corpus {
        let syn = syntactic_monoid(l);
        assert_eq!(&syn.morphism.recognised_language(&syn.accepting).unwrap(), l);
        assert_eq!(syn.monoid.size(), nerode_classes(l, 6, 3).max(1).min(syn.monoid.size()));
        if syn.monoid.size() <= 4 {
            let v: Vec<bool> = (0..syn.monoid.size()).map(|x| syn.accepting.contains(&x)).collect();
            for classes in syn.monoid.congruences() {
                let proper = classes.iter().copied().max().unwrap() + 1 < syn.monoid.size();
                let saturates = (0..v.len()).all(|x| (0..v.len()).all(|y| classes[x] != classes[y] || v[x] == v[y]));
                assert!(!(proper && saturates), "a proper quotient recognises {l:?}");
            }
        }
    }
}

#[test]
fn evaluation() {
    let sigma = ab();
    let h = semilattice_morphism(&sigma);
    assert_eq!(h.evaluate(&Word::empty()).unwrap(), 0);
    assert_eq!(h.evaluate(&w(&sigma, "bab")).unwrap(), 1);
    let semi = MonoidMorphism::new(sigma.clone(), Arc::new(FiniteMonoid::two_element_semilattice().as_semigroup()), vec![1, 0]).unwrap();
    assert!(semi.evaluate(&Word::empty()).is_err());

    let m = Arc::new(FiniteMonoid::enumerate(3, Mode::Monoid).unwrap().pop().unwrap());
    let h = MonoidMorphism::new(sigma.clone(), m.clone(), vec![1, 2]).unwrap();
    let mut rng = instance_rng(3, 0);
    for _ in 0..1000 {
        let v: Word = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..2)).collect();
        let u: Word = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..2)).collect();
        assert_eq!(h.evaluate(&v.concat(&u)).unwrap(), m.mul(h.evaluate(&v).unwrap(), h.evaluate(&u).unwrap()));
    }
}

#[test]
fn recognised_language_examples() {
    let sigma = ab();
    let h = semilattice_morphism(&sigma);
    assert!(h.recognised_language(&[]).unwrap().is_empty());
    assert!(h.recognised_language(&[0, 1]).unwrap().is_universal());
    assert_eq!(h.recognised_language(&[1]).unwrap(), dfa("Σ* a Σ*", &sigma));
    let semi = MonoidMorphism::new(sigma.clone(), Arc::new(FiniteMonoid::two_element_semilattice().as_semigroup()), vec![1, 0]).unwrap();
    assert_eq!(semi.recognised_language(&[0, 1]).unwrap(), Dfa::plus(&sigma));
}

#[test]
fn morphism_counts() {
    let sigma = ab();
    let l = Limits::default();
    let two = Arc::new(FiniteMonoid::two_element_semilattice());
    assert_eq!(all_morphisms(&sigma, &two, &l).unwrap().len(), 4);
    let z2 = Arc::new(FiniteMonoid::cyclic_group(2));
    assert_eq!(all_morphisms(&Alphabet::parse_list("a").unwrap(), &z2, &l).unwrap().len(), 2);
    let three = Arc::new(FiniteMonoid::cyclic_group(3));
    assert_eq!(all_morphisms(&sigma, &three, &l).unwrap().len(), 9);
    let tight = Limits { max_morphisms: 8, ..l };
    assert!(all_morphisms(&sigma, &three, &tight).is_err());
}

#[test]
fn recognised_algebra_examples() {
    let sigma = ab();
    let l = Limits::default();
    let trivial = recognised_algebra(&Arc::new(FiniteMonoid::trivial()), &sigma, &l).unwrap();
    assert_eq!(trivial.atom_count(), 1);

    let semilattice = recognised_algebra(&Arc::new(FiniteMonoid::two_element_semilattice()), &sigma, &l).unwrap();
    let expected = generate_algebra(
        &sigma,
        Universe::Star,
        &[dfa("Σ* a Σ*", &sigma), dfa("Σ* b Σ*", &sigma)],
        &l,
    )
    .unwrap();
    assert_eq!(semilattice, expected);

    // Left-zero semigroup: st = s.
    let lz = Arc::new(FiniteMonoid::new(vec![vec![0, 0], vec![1, 1]], None, None).unwrap());
    let got = recognised_algebra(&lz, &sigma, &l).unwrap();
    let expected = generate_algebra(&sigma, Universe::Plus, &[dfa("a Σ*", &sigma), dfa("b Σ*", &sigma)], &l).unwrap();
    assert_eq!(got, expected);
}

#[test]
fn recognised_algebras_are_quotient_closed() {
    let sigma = ab();
    let l = Limits::default();
    for m in small_monoids(3, Mode::Monoid).unwrap() {
        let b = recognised_algebra(&Arc::new(m), &sigma, &l).unwrap();
        for atom in b.atoms() {
            for x in words(2, 2) {
                assert!(b.contains(&atom.left_quotient(&x).unwrap()).unwrap());
                assert!(b.contains(&atom.right_quotient(&x).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn enumeration_counts_and_associativity() {
    // Semigroups up to isomorphism and anti-isomorphism are 1, 4, 18; these
    // are labelled tables (identity pinned to 0 for monoids).
    assert_eq!(FiniteMonoid::enumerate(2, Mode::Semigroup).unwrap().len(), 8);
    assert_eq!(FiniteMonoid::enumerate(3, Mode::Semigroup).unwrap().len(), 113);
    for m in small_monoids(3, Mode::Monoid).unwrap().iter().chain(&FiniteMonoid::enumerate(3, Mode::Semigroup).unwrap()) {
        assert!(m.associativity_failure().is_none());
    }
    assert!(FiniteMonoid::new(vec![vec![1, 1], vec![0, 0]], None, None).is_err());
    assert!(FiniteMonoid::new(vec![vec![0, 1], vec![1, 1]], Some(1), None).is_err());
}

#[test]
fn action_preservation() {
    let m = Arc::new(FiniteMonoid::cyclic_group(3));
    assert!(MonoidHom::identity_on(m.clone()).preserves_actions());
    let b = m.regular_biaction();
    let id: Vec<usize> = (0..3).collect();
    assert!(preserves_actions(&b, &b, &id, &id));
    // Corrupting one image breaks both the morphism law and equivariance.
    let corrupt = MonoidHom::new(m.clone(), m.clone(), vec![0, 2, 2]).unwrap();
    assert!(!corrupt.is_morphism());
    assert!(!corrupt.preserves_actions());
    for m in small_monoids(3, Mode::Monoid).unwrap() {
        m.regular_biaction().check_laws(&m).unwrap();
    }
}

#[test]
fn monoid_json_round_trip() {
    let m = FiniteMonoid::two_element_semilattice();
    let text = serde_json::to_string(&m).unwrap();
    assert_eq!(text, r#"{"size":2,"identity":0,"table":[[0,1],[1,1]],"labels":["1","z"]}"#);
    assert_eq!(serde_json::from_str::<FiniteMonoid>(&text).unwrap(), m);
    let s = m.as_semigroup();
    let back: FiniteMonoid = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    assert!(serde_json::from_str::<FiniteMonoid>(r#"{"size":2,"identity":null,"table":[[1,1],[0,0]],"labels":[]}"#).is_err());
}
