//! Ultrafilter equations for `B ⊞ 2` at the resolution of a finite
//! quotient.
//!
//! Ultrafilters are replaced by elements of a joint quotient `η: Σ* → M`
//! fine enough to decide every language involved. A principal ultrafilter
//! `↑w` becomes `η(w)`, and a marked ultrafilter `γ` with `μ = βf_a(γ)` is
//! observed through a factorisation `η(μ) = p·η(a)·q` with prefix class
//! `p = η(βf_r(γ))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{schutz_sum, AtomMachine, LanguageAlgebra, Universe};
use crate::alphabet::{Alphabet, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::marking::MarkedWord;
use crate::monoid::{closure, FiniteMonoid, MonoidMorphism};

/// A point of the finite quotient standing for every ultrafilter that the
/// extension of `η` sends there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UltrafilterApprox {
    pub point: usize,
}

/// The observable content of a marked ultrafilter: the letter placed at
/// the mark, the class of the prefix and the class of the suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FactorizationClass {
    pub letter: usize,
    pub prefix_class: usize,
    pub suffix_class: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EquationInstance {
    pub mu: UltrafilterApprox,
    pub nu: UltrafilterApprox,
}

/// A monoid morphism recognising every atom of `B`, every `AaΣ*` for an
/// atom `A`, and any extra languages.
#[derive(Debug, Clone)]
pub struct JointQuotient {
    algebra: LanguageAlgebra,
    eta: MonoidMorphism,
    /// `π_B`: the atom of `B` containing the words of each class.
    atom_of: Vec<usize>,
    representatives: Vec<Word>,
    /// `prefixes[a][x]`: every `p` with `p·η(a)·q = x` for some `q`.
    prefixes: Vec<Vec<Vec<usize>>>,
}

/// `A a Σ*` for every atom `A` (outer index) and letter `a`.
fn atom_letter_languages(b: &LanguageAlgebra) -> Vec<Vec<Dfa>> {
    let sigma = b.alphabet();
    let all = Dfa::universal(sigma);
    b.atoms()
        .iter()
        .map(|atom| (0..sigma.len()).map(|a| atom.marked_concat(a, &all)).collect())
        .collect()
}

impl JointQuotient {
    pub fn new(b: &LanguageAlgebra, extra: &[Dfa], limits: &Limits) -> Result<JointQuotient> {
        if b.universe() != Universe::Star {
            return Err(Error::precondition("equations for B ⊞ 2 are stated over Σ*"));
        }
        let sigma = b.alphabet().clone();
        for l in extra {
            if l.alphabet() != &sigma {
                return Err(Error::input("alphabet mismatch"));
            }
        }
        let k = sigma.len();
        let mut components: Vec<Dfa> = atom_letter_languages(b).into_iter().flatten().collect();
        components.extend(extra.iter().cloned());
        let machine = b.machine();

        // Reachable states of the product of the atom machine with every component.
        let start: Vec<u32> = vec![0; components.len() + 1];
        let mut ids: HashMap<Vec<u32>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut states = vec![start];
        let mut delta = Vec::new();
        let mut head = 0;
        while head < states.len() {
            for a in 0..k {
                let cur = &states[head];
                let mut next = Vec::with_capacity(cur.len());
                next.push(machine.next(cur[0] as usize, a) as u32);
                next.extend(
                    components
                        .iter()
                        .zip(&cur[1..])
                        .map(|(l, &s)| l.next(s as usize, a) as u32),
                );
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= limits.max_states {
                            return Err(Error::resource("joint automaton too large"));
                        }
                        ids.insert(next.clone(), states.len());
                        states.push(next);
                        states.len() - 1
                    }
                };
                delta.push(id);
            }
            head += 1;
        }
        let n = states.len();
        let gens: Vec<Vec<u32>> = (0..k)
            .map(|a| (0..n).map(|s| delta[s * k + a] as u32).collect())
            .collect();
        let unit: Vec<u32> = (0..n as u32).collect();
        let compose = |f: &Vec<u32>, g: &Vec<u32>| -> Vec<u32> { f.iter().map(|&s| g[s as usize]).collect() };
        // Each element stores a transformation of all n states.
        let mut bounded = *limits;
        bounded.max_closure = limits.max_closure.min(limits.max_states.saturating_mul(4) / n);
        let gen = closure(&gens, Some(unit), compose, &bounded)?.into_generated();
        let atom_of: Vec<usize> = gen
            .elements
            .iter()
            .map(|t| machine.output(states[t[0] as usize][0] as usize).expect("Σ* universe"))
            .collect();
        let representatives: Vec<Word> = gen.representatives.iter().map(|r| Word::from(r.clone())).collect();
        let eta = MonoidMorphism::new(sigma, Arc::new(gen.monoid), gen.generator_images)?;
        Ok(JointQuotient::assemble(b, eta, atom_of, representatives))
    }

    /// Uses a given morphism, which must recognise every member of `B`.
    pub fn from_morphism(b: &LanguageAlgebra, eta: MonoidMorphism, limits: &Limits) -> Result<JointQuotient> {
        if b.universe() != Universe::Star || eta.target().identity().is_none() {
            return Err(Error::precondition("equations for B ⊞ 2 are stated over Σ*"));
        }
        if eta.alphabet() != b.alphabet() {
            return Err(Error::input("alphabet mismatch"));
        }
        let (image, _) = eta.image_monoid(limits)?;
        let mut atom_of = vec![usize::MAX; eta.target().size()];
        let mut representatives = vec![Word::empty(); eta.target().size()];
        for (x, rep) in image.elements.iter().zip(&image.representatives) {
            representatives[*x] = Word::from(rep.clone());
            atom_of[*x] = b.atom_of(&representatives[*x]).expect("Σ* universe");
        }
        if atom_of.contains(&usize::MAX) {
            return Err(Error::precondition("the morphism must be onto"));
        }
        for atom in b.atoms() {
            if !eta.recognises(&atom)? {
                return Err(Error::precondition("the morphism does not recognise every atom"));
            }
        }
        Ok(JointQuotient::assemble(b, eta, atom_of, representatives))
    }

    fn assemble(b: &LanguageAlgebra, eta: MonoidMorphism, atom_of: Vec<usize>, representatives: Vec<Word>) -> JointQuotient {
        let monoid = eta.target().clone();
        let k = eta.alphabet().len();
        let m = monoid.size();
        let mut prefixes = vec![vec![Vec::new(); m]; k];
        for (a, by_target) in prefixes.iter_mut().enumerate() {
            let mut seen: HashSet<(usize, usize)> = HashSet::new();
            for p in 0..m {
                let pa = monoid.mul(p, eta.image(a));
                for q in 0..m {
                    let x = monoid.mul(pa, q);
                    if seen.insert((x, p)) {
                        by_target[x].push(p);
                    }
                }
            }
            for list in by_target.iter_mut() {
                list.sort_unstable();
            }
        }
        JointQuotient {
            algebra: b.clone(),
            eta,
            atom_of,
            representatives,
            prefixes,
        }
    }

    pub fn algebra(&self) -> &LanguageAlgebra {
        &self.algebra
    }

    pub fn eta(&self) -> &MonoidMorphism {
        &self.eta
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        self.eta.target()
    }

    pub fn size(&self) -> usize {
        self.monoid().size()
    }

    pub fn point(&self, w: &Word) -> Result<UltrafilterApprox> {
        Ok(UltrafilterApprox {
            point: self.eta.evaluate(w)?,
        })
    }

    /// `π_B`.
    pub fn atom_of(&self, x: usize) -> usize {
        self.atom_of[x]
    }

    /// A shortest word in the class `x`.
    pub fn representative(&self, x: usize) -> &Word {
        &self.representatives[x]
    }

    /// `{ p : ∃ q, p·η(a)·q = x }`.
    pub fn prefix_classes(&self, mu: UltrafilterApprox, a: usize) -> &[usize] {
        &self.prefixes[a][mu.point]
    }

    /// Every factorisation `x = p·η(a)·q`.
    pub fn factorizations(&self, mu: UltrafilterApprox, a: usize) -> Vec<FactorizationClass> {
        let m = self.monoid();
        let mut out = Vec::new();
        for &p in self.prefix_classes(mu, a) {
            let pa = m.mul(p, self.eta.image(a));
            for q in 0..m.size() {
                if m.mul(pa, q) == mu.point {
                    out.push(FactorizationClass {
                        letter: a,
                        prefix_class: p,
                        suffix_class: q,
                    });
                }
            }
        }
        out
    }

    /// The atoms of `B` met by the prefix classes.
    pub fn prefix_atoms(&self, mu: UltrafilterApprox, a: usize) -> Vec<bool> {
        let mut atoms = vec![false; self.algebra.atom_count()];
        for &p in self.prefix_classes(mu, a) {
            atoms[self.atom_of[p]] = true;
        }
        atoms
    }

    /// The three conditions of the equation set: the same `B`-atom, and for
    /// every letter the prefix classes of both sides meet the same atoms.
    pub fn in_equation_set(&self, e: &EquationInstance) -> bool {
        self.atom_of[e.mu.point] == self.atom_of[e.nu.point]
            && (0..self.eta.alphabet().len())
                .all(|a| self.prefix_atoms(e.mu, a) == self.prefix_atoms(e.nu, a))
    }

    /// `L ∈ μ ⟺ L ∈ ν`; fails when `η` does not recognise `L`.
    pub fn satisfies(&self, l: &Dfa, e: &EquationInstance) -> Result<bool> {
        let sat = self.eta.saturation(l)?.ok_or_else(|| {
            Error::precondition("the language is not recognised by the quotient")
        })?;
        Ok(sat[e.mu.point] == sat[e.nu.point])
    }

    /// Classes of the equivalence generated by the equation set, each
    /// point labelled by its class.
    pub fn equation_classes(&self) -> Vec<usize> {
        let k = self.eta.alphabet().len();
        let mut ids: HashMap<(usize, Vec<Vec<bool>>), usize> = HashMap::new();
        (0..self.size())
            .map(|x| {
                let mu = UltrafilterApprox { point: x };
                let key = (self.atom_of[x], (0..k).map(|a| self.prefix_atoms(mu, a)).collect());
                let fresh = ids.len();
                *ids.entry(key).or_insert(fresh)
            })
            .collect()
    }

    /// The first equation of the set (in point order) violated by `l`.
    pub fn violated_equation(&self, l: &Dfa) -> Result<Option<EquationInstance>> {
        let sat = self.eta.saturation(l)?.ok_or_else(|| {
            Error::precondition("the language is not recognised by the quotient")
        })?;
        let classes = self.equation_classes();
        let mut first: HashMap<usize, usize> = HashMap::new();
        for x in 0..self.size() {
            let y = *first.entry(classes[x]).or_insert(x);
            if sat[x] != sat[y] {
                return Ok(Some(EquationInstance {
                    mu: UltrafilterApprox { point: y },
                    nu: UltrafilterApprox { point: x },
                }));
            }
        }
        Ok(None)
    }
}

/// Outcome of deciding `K ∈ B ⊞ 2` through equations.
#[derive(Debug, Clone)]
pub struct EquationVerdict {
    pub member: bool,
    pub quotient_size: usize,
    /// A violated equation, with representative words of both sides.
    pub violated: Option<(Word, Word)>,
}

pub fn bsum2_membership_by_equations(k: &Dfa, b: &LanguageAlgebra, limits: &Limits) -> Result<EquationVerdict> {
    let q = JointQuotient::new(b, std::slice::from_ref(k), limits)?;
    let violated = q.violated_equation(k)?.map(|e| {
        (
            q.representative(e.mu.point).clone(),
            q.representative(e.nu.point).clone(),
        )
    });
    Ok(EquationVerdict {
        member: violated.is_none(),
        quotient_size: q.size(),
        violated,
    })
}

/// Direct membership of `K` in `B ⊞ 2`.
pub fn bsum2_membership(k: &Dfa, b: &LanguageAlgebra, limits: &Limits) -> Result<bool> {
    let sum = schutz_sum(b, &LanguageAlgebra::trivial(b.alphabet(), b.universe()), limits)?;
    sum.contains(k)
}

/// Two shortest words in a common atom of `B ⊞ 2`, the first in `K` and
/// the second outside it; `None` exactly when `K ∈ B ⊞ 2`.
pub fn separation_witness(k: &Dfa, b: &LanguageAlgebra, limits: &Limits) -> Result<Option<(Word, Word)>> {
    let sum = schutz_sum(b, &LanguageAlgebra::trivial(b.alphabet(), b.universe()), limits)?;
    Ok(witness_in(sum.machine(), k))
}

fn witness_in(m: &AtomMachine, k: &Dfa) -> Option<(Word, Word)> {
    let sigma = m.alphabet();
    let mut inside: Vec<Option<Word>> = vec![None; m.atom_count()];
    let mut outside: Vec<Option<Word>> = vec![None; m.atom_count()];
    let mut seen: HashSet<(usize, usize)> = HashSet::from([(0, 0)]);
    let mut queue = VecDeque::from([(0usize, 0usize, Word::empty())]);
    while let Some((s, q, w)) = queue.pop_front() {
        if let Some(x) = m.output(s) {
            let slot = if k.is_accepting(q) { &mut inside[x] } else { &mut outside[x] };
            if slot.is_none() {
                *slot = Some(w.clone());
                if let (Some(u), Some(v)) = (&inside[x], &outside[x]) {
                    return Some((u.clone(), v.clone()));
                }
            }
        }
        for a in 0..sigma.len() {
            let t = (m.next(s, a), k.next(q, a));
            if seen.insert(t) {
                queue.push_back((t.0, t.1, w.pushed(a)));
            }
        }
    }
    None
}

/// A counterexample to the principal form of the factorisation lemma:
/// `f_r(w,i) ∈ L` but `f_a((w,i),a) ∉ LaΣ*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma3Violation {
    pub marked: MarkedWord,
    pub letter: usize,
    pub language: usize,
}

/// Checks every marked word of length at most `max_len`, every letter and
/// every language.
pub fn lemma3_check(alphabet: &Alphabet, languages: &[Dfa], max_len: usize) -> Result<Vec<Lemma3Violation>> {
    let all = Dfa::universal(alphabet);
    let mut violations = Vec::new();
    for (li, l) in languages.iter().enumerate() {
        if l.alphabet() != alphabet {
            return Err(Error::input("alphabet mismatch"));
        }
        for a in 0..alphabet.len() {
            let lasigma = l.marked_concat(a, &all);
            for w in alphabet.words_up_to(max_len) {
                for mw in MarkedWord::all_of(&w) {
                    if l.accepts(&mw.f_r()) && !lasigma.accepts(&mw.f_a(a)) {
                        violations.push(Lemma3Violation {
                            marked: mw,
                            letter: a,
                            language: li,
                        });
                    }
                }
            }
        }
    }
    Ok(violations)
}

/// The finite form of the quasi-inverse lemma for the principal filter of
/// an atom `A`: when `AaΣ*` contains the class of `μ`, some factorisation
/// of `μ` at `a` has its prefix class inside `A`. The factorisation is
/// returned together with a marked word realising it.
#[derive(Debug, Clone)]
pub struct Lemma4Witness {
    pub factorization: FactorizationClass,
    pub marked: MarkedWord,
}

pub fn lemma4_witness(
    q: &JointQuotient,
    mu: UltrafilterApprox,
    a: usize,
    atom: usize,
) -> Option<Lemma4Witness> {
    q.factorizations(mu, a)
        .into_iter()
        .find(|f| q.atom_of(f.prefix_class) == atom)
        .map(|f| {
            let u = q.representative(f.prefix_class);
            let v = q.representative(f.suffix_class);
            let word = u.pushed(a).concat(v);
            let marked = MarkedWord::new(word, u.len()).expect("the mark is inside the word");
            Lemma4Witness {
                factorization: f,
                marked,
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generate_algebra;
    use crate::regex::Regex;

    fn ab() -> Alphabet {
        Alphabet::parse_list("a,b").unwrap()
    }

    fn re(s: &str, sigma: &Alphabet) -> Dfa {
        Regex::parse(s).unwrap().to_dfa(sigma).unwrap()
    }

    #[test]
    fn prefix_classes_of_contains_a() {
        let sigma = ab();
        let lim = Limits::default();
        let l = re("Σ* a Σ*", &sigma);
        let b = generate_algebra(&sigma, Universe::Star, &[l.clone()], &lim).unwrap();
        let syn = crate::monoid::syntactic_monoid(&l);
        let q = JointQuotient::from_morphism(&b, syn.morphism, &lim).unwrap();
        assert_eq!(q.size(), 2);
        assert!(JointQuotient::new(&b, &[], &lim).unwrap().size() > 2);
        let z = q.point(&sigma.parse_word("a").unwrap()).unwrap();
        let one = q.point(&Word::empty()).unwrap();
        assert_eq!(q.prefix_classes(z, 0).len(), 2);
        assert!(q.prefix_classes(one, 0).is_empty());

        let eb = EquationInstance { mu: q.point(&sigma.parse_word("b").unwrap()).unwrap(), nu: q.point(&sigma.parse_word("bb").unwrap()).unwrap() };
        assert!(q.satisfies(&l, &eb).unwrap());
        let ea = EquationInstance { mu: z, nu: eb.mu };
        assert!(!q.satisfies(&l, &ea).unwrap());
        assert!(matches!(q.satisfies(&re("a Σ*", &sigma), &ea), Err(Error::Precondition(_))));
    }

    #[test]
    fn trivial_base_examples() {
        let sigma = ab();
        let lim = Limits::default();
        let t = LanguageAlgebra::trivial(&sigma, Universe::Star);
        let k = re("Σ* a Σ*", &sigma);
        assert!(bsum2_membership_by_equations(&k, &t, &lim).unwrap().member);
        assert!(bsum2_membership(&k, &t, &lim).unwrap());
        let ends = re("Σ* a", &sigma);
        let v = bsum2_membership_by_equations(&ends, &t, &lim).unwrap();
        assert_eq!(v.member, bsum2_membership(&ends, &t, &lim).unwrap());
        assert!(!v.member);
    }

    #[test]
    fn even_length_witness() {
        let a = Alphabet::parse_list("a").unwrap();
        let lim = Limits::default();
        let t = LanguageAlgebra::trivial(&a, Universe::Star);
        let k = re("(a a)*", &a);
        let (u, v) = separation_witness(&k, &t, &lim).unwrap().unwrap();
        assert!(k.accepts(&u) && !k.accepts(&v));
        assert!(!u.is_empty() && !v.is_empty());
        assert_eq!(separation_witness(&Dfa::epsilon(&a), &t, &lim).unwrap(), None);
    }
}
