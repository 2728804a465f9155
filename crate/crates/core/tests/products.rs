mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{ab, dfa};
use rand::Rng;
use schutz_core::corpus::{instance_rng, small_monoids};
use schutz_core::marking::ExtendedAlphabet;
use schutz_core::schutz::{zeta_a, BinaryElem, BinarySchutz, HitClopen, LocalReutenauer, UnaryElem, UnarySchutz, Xi};
use schutz_core::{Alphabet, Dfa, FiniteMonoid, Limits, Mode, MonoidMorphism, Subset, Word};

type Pairs = BTreeSet<(usize, usize)>;

/// `(S,m)*(T,n) = (S·n ∪ m·T, mn)` on explicit sets.
fn unary_oracle(m: &FiniteMonoid, (s, x): (&BTreeSet<usize>, usize), (t, y): (&BTreeSet<usize>, usize)) -> (BTreeSet<usize>, usize) {
    let mut out: BTreeSet<usize> = s.iter().map(|&a| m.mul(a, y)).collect();
    out.extend(t.iter().map(|&b| m.mul(x, b)));
    (out, m.mul(x, y))
}

/// `(S,m₁,n₁)(T,m₂,n₂) = (m₁T ∪ Sn₂, m₁m₂, n₁n₂)` on explicit pair sets.
fn binary_oracle(m: &FiniteMonoid, n: &FiniteMonoid, p: (&Pairs, usize, usize), q: (&Pairs, usize, usize)) -> (Pairs, usize, usize) {
    let mut out: Pairs = q.0.iter().map(|&(a, b)| (m.mul(p.1, a), b)).collect();
    out.extend(p.0.iter().map(|&(a, b)| (a, n.mul(b, q.2))));
    (out, m.mul(p.1, q.1), n.mul(p.2, q.2))
}

fn to_set(s: Subset) -> BTreeSet<usize> {
    s.iter().collect()
}

fn pairs_of(d: &BinarySchutz, s: Subset) -> Pairs {
    s.iter().map(|p| d.unpair(p)).collect()
}

#[test]
fn unary_examples() {
    let l = Limits::default();
    let z2 = Arc::new(FiniteMonoid::cyclic_group(2));
    let d = UnarySchutz::new(z2).unwrap();
    let unit = d.unit().unwrap();
    let p = UnaryElem { set: Subset::singleton(0), m: 1 };
    let q = UnaryElem { set: Subset::singleton(1), m: 0 };
    assert_eq!(d.mul(&unit, &q), q);
    assert_eq!(d.mul(&p, &q), UnaryElem { set: Subset::singleton(0), m: 1 });

    // ({z},1)*({1},z): S·n = {z}, m·T = {1}, so the set part is {1, z}.
    let semi = Arc::new(FiniteMonoid::two_element_semilattice());
    let d = UnarySchutz::new(semi.clone()).unwrap();
    let p = UnaryElem { set: Subset::singleton(1), m: 0 };
    let q = UnaryElem { set: Subset::singleton(0), m: 1 };
    assert_eq!(d.mul(&p, &q), UnaryElem { set: Subset::full(2), m: 1 });
    assert_eq!(d.elements(&l).unwrap().len(), 8);
    assert_eq!(d.label(&d.mul(&p, &q)), "({1,z},z)");

    let mat = d.materialize(&l).unwrap();
    assert_eq!(mat.size(), 8);
    assert_eq!(mat.identity(), Some(d.index_of(&unit)));
}

#[test]
fn unary_product_matches_oracle_and_laws() {
    let l = Limits::default();
    for mode in [Mode::Monoid, Mode::Semigroup] {
        for m in small_monoids(3, mode).unwrap() {
            let d = UnarySchutz::new(Arc::new(m.clone())).unwrap();
            let elems = d.elements(&l).unwrap();
            let expected = match mode {
                Mode::Monoid => (1 << m.size()) * m.size(),
                Mode::Semigroup => ((1 << m.size()) - 1) * m.size(),
            };
            assert_eq!(elems.len(), expected);
            for p in &elems {
                for q in &elems {
                    let pq = d.mul(p, q);
                    let (s, x) = unary_oracle(&m, (&to_set(p.set), p.m), (&to_set(q.set), q.m));
                    assert_eq!((to_set(pq.set), pq.m), (s, x));
                    assert_eq!(d.pi2(&pq), m.mul(d.pi2(p), d.pi2(q)));
                    assert_eq!(d.left_action(p, q), pq);
                    assert_eq!(d.right_action(q, p), pq);
                }
            }
            let mat = d.materialize(&l).unwrap();
            assert!(mat.associativity_failure().is_none());
            assert_eq!(mat.mode(), mode);
            d.biaction(&l).unwrap().check_laws(&mat).unwrap();
        }
    }
}

#[test]
fn binary_examples() {
    let semi = Arc::new(FiniteMonoid::two_element_semilattice());
    let d = BinarySchutz::new(semi.clone(), semi.clone()).unwrap();
    let unit = d.unit().unwrap();
    let p = BinaryElem { set: Subset::singleton(d.pair(0, 0)), m: 1, n: 0 };
    let q = BinaryElem { set: Subset::empty(), m: 0, n: 1 };
    assert_eq!(d.mul(&unit, &q), q);
    assert_eq!(d.mul(&p, &q), BinaryElem { set: Subset::singleton(d.pair(0, 1)), m: 1, n: 1 });
    assert_eq!(d.carrier_size(), 16 * 4);
}

fn binary_law_check(m: &FiniteMonoid, n: &FiniteMonoid, sets: &[Subset]) {
    let d = BinarySchutz::new(Arc::new(m.clone()), Arc::new(n.clone())).unwrap();
    let mut elems = Vec::new();
    for &s in sets {
        for x in 0..m.size() {
            for y in 0..n.size() {
                elems.push(BinaryElem { set: s, m: x, n: y });
            }
        }
    }
    let unit = d.unit().unwrap();
    for p in &elems {
        assert_eq!(&d.mul(&unit, p), p);
        assert_eq!(&d.mul(p, &unit), p);
        for q in &elems {
            let pq = d.mul(p, q);
            let o = binary_oracle(m, n, (&pairs_of(&d, p.set), p.m, p.n), (&pairs_of(&d, q.set), q.m, q.n));
            assert_eq!((pairs_of(&d, pq.set), pq.m, pq.n), o);
            for r in &elems {
                assert_eq!(d.mul(&pq, r), d.mul(p, &d.mul(q, r)));
            }
        }
    }
}

#[test]
fn binary_product_laws_small_bases_exhaustive() {
    let ms = small_monoids(2, Mode::Monoid).unwrap();
    for m in &ms {
        for n in &ms {
            let all: Vec<Subset> = (0..1u128 << (m.size() * n.size())).map(Subset::from_bits).collect();
            binary_law_check(m, n, &all);
        }
    }
}

#[test]
fn binary_product_laws_size_three() {
    // The set component of a product is a union of maps each applied to one
    // argument's set, so checking ∅ and singletons covers every set.
    let ms = small_monoids(3, Mode::Monoid).unwrap();
    for m in ms.iter().filter(|m| m.size() == 3) {
        for n in &ms {
            let mut sets = vec![Subset::empty()];
            sets.extend((0..m.size() * n.size()).map(Subset::singleton));
            binary_law_check(m, n, &sets);
        }
    }
}

#[test]
fn binary_actions_match_multiplication() {
    let l = Limits::default();
    let ms = small_monoids(2, Mode::Monoid).unwrap();
    for m in &ms {
        for n in &ms {
            let d = BinarySchutz::new(Arc::new(m.clone()), Arc::new(n.clone())).unwrap();
            let elems = d.elements(&l).unwrap();
            for p in &elems {
                for q in &elems {
                    assert_eq!(d.left_action(p, q), d.mul(p, q));
                    assert_eq!(d.right_action(p, q), d.mul(q, p));
                }
            }
            let mat = d.materialize(&l).unwrap();
            assert!(mat.associativity_failure().is_none());
            d.biaction(&l).unwrap().check_laws(&mat).unwrap();
        }
    }
}

#[test]
fn xi_examples() {
    let l = Limits::default();
    let one = Alphabet::parse_list("a").unwrap();
    let e = ExtendedAlphabet::new(&one);
    let z2 = Arc::new(FiniteMonoid::cyclic_group(2));
    let tau = MonoidMorphism::new(e.extended().clone(), z2, vec![0, 1]).unwrap();
    let xi = Xi::new(tau).unwrap();
    assert_eq!(xi.evaluate(&Word::empty()).unwrap(), UnaryElem { set: Subset::empty(), m: 0 });
    let aa = one.parse_word("aa").unwrap();
    assert_eq!(xi.evaluate(&aa).unwrap(), UnaryElem { set: Subset::singleton(1), m: 0 });
    assert_eq!(xi.evaluate_direct(&aa).unwrap(), xi.evaluate(&aa).unwrap());

    let sigma = ab();
    let e = ExtendedAlphabet::new(&sigma);
    let phi = dfa("(a#0|b#0)* a#1 (a#0|b#0)*", e.extended());
    let syn = schutz_core::syntactic_monoid(&phi);
    let xi = Xi::new(syn.morphism.clone()).unwrap();
    let v: Subset = syn.accepting.iter().copied().collect();
    assert_eq!(xi.recognised_language(HitClopen::hit(v), &l).unwrap(), dfa("Σ* a Σ*", &sigma));
    assert!(xi.recognised_language(HitClopen::hit(Subset::empty()), &l).unwrap().is_empty());
    let all = Subset::full(syn.monoid.size());
    assert_eq!(xi.recognised_language(HitClopen::hit(all), &l).unwrap(), Dfa::plus(&sigma));
    // □V is the complement of ◇(Vᶜ).
    let miss = HitClopen::miss(v);
    let n = syn.monoid.size();
    for bits in 0..1u128 << n {
        let s = Subset::from_bits(bits);
        assert_eq!(miss.contains(s), !HitClopen::hit(v.complement(n)).contains(s));
    }
}

#[test]
fn xi_is_a_morphism_and_commutes_with_projection() {
    let sigma = ab();
    let e = ExtendedAlphabet::new(&sigma);
    let monoids = small_monoids(3, Mode::Monoid).unwrap();
    let mut rng = instance_rng(8, 0);
    for _ in 0..1000 {
        let m = Arc::new(monoids[rng.gen_range(0..monoids.len())].clone());
        let images = (0..4).map(|_| rng.gen_range(0..m.size())).collect();
        let tau = MonoidMorphism::new(e.extended().clone(), m.clone(), images).unwrap();
        let xi = Xi::new(tau.clone()).unwrap();
        let v: Word = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..2)).collect();
        let w: Word = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..2)).collect();
        let d = xi.schutz();
        assert_eq!(xi.evaluate_direct(&v.concat(&w)).unwrap(), d.mul(&xi.evaluate_direct(&v).unwrap(), &xi.evaluate_direct(&w).unwrap()));
        assert_eq!(d.pi2(&xi.evaluate(&v).unwrap()), tau.evaluate(&e.gamma0(&v)).unwrap());
    }
}

#[test]
fn zeta_examples() {
    let sigma = ab();
    let semi = Arc::new(FiniteMonoid::two_element_semilattice());
    let z2 = Arc::new(FiniteMonoid::cyclic_group(2));
    let phi1 = MonoidMorphism::new(sigma.clone(), semi.clone(), vec![1, 0]).unwrap();
    let phi2 = MonoidMorphism::new(sigma.clone(), z2.clone(), vec![1, 0]).unwrap();
    let d = BinarySchutz::new(semi, z2).unwrap();
    assert!(zeta_a(&phi1, &phi2, 0, &sigma.parse_word("bb").unwrap()).unwrap().is_empty());
    assert_eq!(zeta_a(&phi1, &phi2, 0, &sigma.parse_word("a").unwrap()).unwrap(), Subset::singleton(d.pair(0, 0)));
    let aba = sigma.parse_word("aba").unwrap();
    let expected: Subset = [
        d.pair(phi1.evaluate(&Word::empty()).unwrap(), phi2.evaluate(&sigma.parse_word("ba").unwrap()).unwrap()),
        d.pair(phi1.evaluate(&sigma.parse_word("ab").unwrap()).unwrap(), phi2.evaluate(&Word::empty()).unwrap()),
    ]
    .into_iter()
    .collect();
    assert_eq!(zeta_a(&phi1, &phi2, 0, &aba).unwrap(), expected);
}

#[test]
fn local_morphism_examples_and_law() {
    let l = Limits::default();
    let sigma = ab();
    let monoids = small_monoids(3, Mode::Monoid).unwrap();
    let mut rng = instance_rng(9, 0);
    for round in 0..20 {
        let m = Arc::new(monoids[rng.gen_range(0..monoids.len())].clone());
        let n = Arc::new(monoids[rng.gen_range(0..monoids.len())].clone());
        let phi1 = MonoidMorphism::new(sigma.clone(), m.clone(), (0..2).map(|_| rng.gen_range(0..m.size())).collect()).unwrap();
        let phi2 = MonoidMorphism::new(sigma.clone(), n.clone(), (0..2).map(|_| rng.gen_range(0..n.size())).collect()).unwrap();
        let r = LocalReutenauer::new(phi1.clone(), phi2.clone()).unwrap();
        assert_eq!(r.evaluate(&Word::empty()).unwrap(), r.unit());
        for _ in 0..50 {
            let v: Word = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..2)).collect();
            let w: Word = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..2)).collect();
            let vw = v.concat(&w);
            assert_eq!(r.evaluate_direct(&vw).unwrap(), r.mul(&r.evaluate_direct(&v).unwrap(), &r.evaluate_direct(&w).unwrap()));
            for a in 0..2 {
                assert_eq!(r.evaluate(&vw).unwrap().sets[a], zeta_a(&phi1, &phi2, a, &vw).unwrap());
            }
        }
        if round < 5 {
            let v1 = Subset::singleton(rng.gen_range(0..m.size()));
            let v2 = Subset::singleton(rng.gen_range(0..n.size()));
            let l1 = phi1.recognised_language(&v1.iter().collect::<Vec<_>>()).unwrap();
            let l2 = phi2.recognised_language(&v2.iter().collect::<Vec<_>>()).unwrap();
            for a in 0..2 {
                assert_eq!(r.marked_concat(v1, a, v2, &l).unwrap(), l1.marked_concat(a, &l2));
            }
        }
    }
}
