//! Finite quotient-closed Boolean algebras of regular languages.
//!
//! An algebra is stored through the canonical minimal Moore machine that
//! maps every word to the index of its atom. Atoms are numbered by their
//! shortlex-least word, so two algebras are equal exactly when their
//! machines are.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::alphabet::{Alphabet, Word};
use crate::dfa::{canonical_moore, Dfa};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::monoid::{closure, Closure, FiniteMonoid, MonoidMorphism};
use crate::regex::Regex;

/// Whether an algebra lives in `P(Σ*)` or, in semigroup mode, `P(Σ⁺)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Universe {
    Star,
    Plus,
}

impl Universe {
    pub fn dfa(self, alphabet: &Alphabet) -> Dfa {
        match self {
            Universe::Star => Dfa::universal(alphabet),
            Universe::Plus => Dfa::plus(alphabet),
        }
    }
}

/// Minimal complete Moore machine whose output on a word is its atom.
/// The output is `None` only on the empty word in a `Plus` universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomMachine {
    alphabet: Alphabet,
    universe: Universe,
    delta: Vec<usize>,
    outputs: Vec<Option<usize>>,
    atom_count: usize,
}

impl AtomMachine {
    /// Canonicalises an arbitrary complete machine started at `initial`.
    pub(crate) fn new<O: Clone + Eq + Hash>(
        alphabet: &Alphabet,
        universe: Universe,
        initial: usize,
        delta: &[usize],
        outputs: &[Option<O>],
    ) -> AtomMachine {
        let (delta, outputs) = canonical_moore(alphabet.len(), initial, delta, outputs);
        let mut ids: HashMap<O, usize> = HashMap::new();
        let outputs: Vec<Option<usize>> = outputs
            .into_iter()
            .map(|o| {
                o.map(|o| {
                    let fresh = ids.len();
                    *ids.entry(o).or_insert(fresh)
                })
            })
            .collect();
        AtomMachine {
            alphabet: alphabet.clone(),
            universe,
            delta,
            outputs,
            atom_count: ids.len(),
        }
    }

    /// Machine of the partition of words by their element in a generated
    /// monoid (generated semigroup for `Plus`).
    pub(crate) fn from_cayley<E>(alphabet: &Alphabet, universe: Universe, cayley: &Closure<E>) -> AtomMachine {
        let k = alphabet.len();
        let n = cayley.len();
        match universe {
            Universe::Star => {
                let outputs: Vec<Option<usize>> = (0..n).map(Some).collect();
                AtomMachine::new(alphabet, universe, 0, &cayley.right, &outputs)
            }
            Universe::Plus => {
                let mut delta: Vec<usize> = cayley.generator_images.iter().map(|&g| g + 1).collect();
                delta.extend(cayley.right.iter().map(|&e| e + 1));
                let mut outputs = vec![None];
                outputs.extend((0..n).map(Some));
                debug_assert_eq!(delta.len(), (n + 1) * k);
                AtomMachine::new(alphabet, universe, 0, &delta, &outputs)
            }
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn state_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn next(&self, state: usize, letter: usize) -> usize {
        self.delta[state * self.alphabet.len() + letter]
    }

    pub fn run(&self, state: usize, word: &[usize]) -> usize {
        word.iter().fold(state, |s, &a| self.next(s, a))
    }

    pub fn output(&self, state: usize) -> Option<usize> {
        self.outputs[state]
    }

    pub fn atom_of(&self, word: &[usize]) -> Option<usize> {
        self.outputs[self.run(0, word)]
    }

    fn dfa_where(&self, accept: impl Fn(Option<usize>) -> bool) -> Dfa {
        let accepting: Vec<bool> = self.outputs.iter().map(|&o| accept(o)).collect();
        Dfa::from_raw(self.alphabet.clone(), 0, &self.delta, &accepting)
    }

    /// Shortlex-least word of every atom.
    pub fn representatives(&self) -> Vec<Word> {
        let k = self.alphabet.len();
        let mut reps: Vec<Option<Word>> = vec![None; self.atom_count];
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([(0usize, Word::empty())]);
        seen[0] = true;
        while let Some((s, w)) = queue.pop_front() {
            if let Some(x) = self.outputs[s] {
                if reps[x].is_none() {
                    reps[x] = Some(w.clone());
                }
            }
            for a in 0..k {
                let t = self.next(s, a);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back((t, w.pushed(a)));
                }
            }
        }
        reps.into_iter().map(|w| w.expect("every atom is reachable")).collect()
    }

    /// Reads `l` alongside the machine. Returns the set of atoms meeting
    /// `l` when `l` is a union of atoms, `None` otherwise.
    pub fn saturation(&self, l: &Dfa) -> Result<Option<Vec<bool>>> {
        if l.alphabet() != &self.alphabet {
            return Err(Error::input("alphabet mismatch"));
        }
        let k = self.alphabet.len();
        let mut mark: Vec<Option<bool>> = vec![None; self.atom_count];
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut stack = vec![(0usize, 0usize)];
        seen.insert((0, 0));
        while let Some((s, q)) = stack.pop() {
            let inside = l.is_accepting(q);
            match self.outputs[s] {
                None => {
                    if inside {
                        return Ok(None);
                    }
                }
                Some(x) => match mark[x] {
                    None => mark[x] = Some(inside),
                    Some(b) if b != inside => return Ok(None),
                    _ => {}
                },
            }
            for a in 0..k {
                let t = (self.next(s, a), l.next(q, a));
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        Ok(Some(mark.into_iter().map(|b| b == Some(true)).collect()))
    }

    /// For each atom of `self`, the atom of `coarser` containing it, if
    /// `coarser`'s partition is refined by this one.
    pub fn refinement_map(&self, coarser: &AtomMachine) -> Result<Option<Vec<usize>>> {
        if self.alphabet != coarser.alphabet || self.universe != coarser.universe {
            return Err(Error::input("algebras over different alphabets or universes"));
        }
        let k = self.alphabet.len();
        let mut map: Vec<Option<usize>> = vec![None; self.atom_count];
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut stack = vec![(0usize, 0usize)];
        seen.insert((0, 0));
        while let Some((s, t)) = stack.pop() {
            if let (Some(x), Some(y)) = (self.outputs[s], coarser.outputs[t]) {
                match map[x] {
                    None => map[x] = Some(y),
                    Some(z) if z != y => return Ok(None),
                    _ => {}
                }
            }
            for a in 0..k {
                let p = (self.next(s, a), coarser.next(t, a));
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        Ok(Some(map.into_iter().map(|x| x.expect("every atom is reachable")).collect()))
    }
}

/// A finite quotient-closed Boolean subalgebra of `P(Σ*)` (or `P(Σ⁺)`).
#[derive(Debug, Clone)]
pub struct LanguageAlgebra {
    generators: Vec<Dfa>,
    machine: AtomMachine,
}

impl PartialEq for LanguageAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.machine == other.machine
    }
}

impl Eq for LanguageAlgebra {}

impl LanguageAlgebra {
    pub(crate) fn from_machine(generators: Vec<Dfa>, machine: AtomMachine) -> LanguageAlgebra {
        LanguageAlgebra { generators, machine }
    }

    /// `{∅, U}` for the universe `U`.
    pub fn trivial(alphabet: &Alphabet, universe: Universe) -> LanguageAlgebra {
        let k = alphabet.len();
        let machine = match universe {
            Universe::Star => AtomMachine::new(alphabet, universe, 0, &vec![0; k], &[Some(0)]),
            Universe::Plus => {
                AtomMachine::new(alphabet, universe, 0, &vec![1; 2 * k], &[None, Some(0)])
            }
        };
        LanguageAlgebra {
            generators: Vec::new(),
            machine,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.machine.alphabet
    }

    pub fn universe(&self) -> Universe {
        self.machine.universe
    }

    pub fn generators(&self) -> &[Dfa] {
        &self.generators
    }

    pub fn machine(&self) -> &AtomMachine {
        &self.machine
    }

    pub fn atom_count(&self) -> usize {
        self.machine.atom_count
    }

    pub fn atom_of(&self, word: &Word) -> Option<usize> {
        self.machine.atom_of(word)
    }

    pub fn atom(&self, index: usize) -> Dfa {
        self.machine.dfa_where(|o| o == Some(index))
    }

    /// Atoms in canonical order (by shortlex-least member).
    pub fn atoms(&self) -> Vec<Dfa> {
        (0..self.atom_count()).map(|i| self.atom(i)).collect()
    }

    pub fn representatives(&self) -> Vec<Word> {
        self.machine.representatives()
    }

    pub fn union_of_atoms(&self, atoms: &[bool]) -> Dfa {
        self.machine.dfa_where(|o| o.is_some_and(|x| atoms[x]))
    }

    /// Whether `l` is a member, i.e. a union of atoms.
    pub fn contains(&self, l: &Dfa) -> Result<bool> {
        Ok(self.machine.saturation(l)?.is_some())
    }

    /// The atoms whose union is `l`, when `l` is a member.
    pub fn atoms_of(&self, l: &Dfa) -> Result<Option<Vec<bool>>> {
        self.machine.saturation(l)
    }

    /// Every member, in the order of the atom bitmasks.
    pub fn members(&self, limits: &Limits) -> Result<Vec<Dfa>> {
        let n = self.atom_count();
        if n > limits.max_member_atoms {
            return Err(Error::resource(format!(
                "{n} atoms exceed the member materialisation bound {}",
                limits.max_member_atoms
            )));
        }
        Ok((0u64..1 << n)
            .map(|mask| {
                let atoms: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                self.union_of_atoms(&atoms)
            })
            .collect())
    }

    pub fn is_subalgebra_of(&self, other: &LanguageAlgebra) -> Result<bool> {
        Ok(other.machine.refinement_map(&self.machine)?.is_some())
    }

    /// Atoms rendered as regular expressions (informational).
    pub fn atom_regexes(&self) -> Vec<String> {
        self.atoms().iter().map(|a| Regex::from_dfa(a).to_string()).collect()
    }
}

/// The smallest quotient-closed Boolean subalgebra of `P(U)` containing
/// every generator (intersected with `U`).
///
/// Letter quotients are iterated to a fixpoint; the atoms are then read off
/// the synchronous product of all quotients.
pub fn generate_algebra(
    alphabet: &Alphabet,
    universe: Universe,
    generators: &[Dfa],
    limits: &Limits,
) -> Result<LanguageAlgebra> {
    for g in generators {
        if g.alphabet() != alphabet {
            return Err(Error::input(format!(
                "generator over {} in an algebra over {}",
                g.alphabet(),
                alphabet
            )));
        }
    }
    let k = alphabet.len();
    let u = universe.dfa(alphabet);
    let mut languages: Vec<Dfa> = vec![u.clone()];
    let mut known: HashSet<Dfa> = HashSet::from([u.clone()]);
    for g in generators {
        let g = g.intersection(&u)?;
        if known.insert(g.clone()) {
            languages.push(g);
        }
    }
    let mut head = 0;
    while head < languages.len() {
        for a in 0..k {
            let letter = Word::from(vec![a]);
            for q in [
                languages[head].left_quotient(&letter)?,
                languages[head].right_quotient(&letter)?,
            ] {
                let q = q.intersection(&u)?;
                if known.insert(q.clone()) {
                    if languages.len() >= limits.max_quotients {
                        return Err(Error::resource(format!(
                            "quotient closure exceeds {} languages",
                            limits.max_quotients
                        )));
                    }
                    languages.push(q);
                }
            }
        }
        head += 1;
    }
    languages.retain(|l| !l.is_empty());

    let start: Vec<u32> = vec![0; languages.len()];
    let mut ids: HashMap<Vec<u32>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut head = 0;
    while head < states.len() {
        for a in 0..k {
            let next: Vec<u32> = states[head]
                .iter()
                .zip(&languages)
                .map(|(&s, l)| l.next(s as usize, a) as u32)
                .collect();
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    if states.len() >= limits.max_states {
                        return Err(Error::resource(format!(
                            "atom product exceeds {} states",
                            limits.max_states
                        )));
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
    let outputs: Vec<Option<Vec<bool>>> = states
        .iter()
        .map(|st| {
            let bits: Vec<bool> = st
                .iter()
                .zip(&languages)
                .map(|(&s, l)| l.is_accepting(s as usize))
                .collect();
            // Only ε outside a Σ⁺ universe belongs to no member at all.
            bits.iter().any(|&b| b).then_some(bits)
        })
        .collect();
    let machine = AtomMachine::new(alphabet, universe, 0, &delta, &outputs);
    Ok(LanguageAlgebra::from_machine(generators.to_vec(), machine))
}

/// The same algebra as [`generate_algebra`], computed instead as the
/// languages recognised by the joint syntactic morphism of the generators.
pub fn generate_algebra_by_monoid(
    alphabet: &Alphabet,
    universe: Universe,
    generators: &[Dfa],
    limits: &Limits,
) -> Result<LanguageAlgebra> {
    let u = universe.dfa(alphabet);
    let mut gens = Vec::with_capacity(generators.len());
    for g in generators {
        gens.push(g.intersection(&u)?);
    }
    let k = alphabet.len();
    let letter_maps: Vec<Vec<Vec<usize>>> = (0..k)
        .map(|a| {
            gens.iter()
                .map(|g| (0..g.state_count()).map(|q| g.next(q, a)).collect())
                .collect()
        })
        .collect();
    let unit: Vec<Vec<usize>> = gens.iter().map(|g| (0..g.state_count()).collect()).collect();
    let compose = |f: &Vec<Vec<usize>>, h: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        f.iter()
            .zip(h)
            .map(|(fi, hi)| fi.iter().map(|&q| hi[q]).collect())
            .collect()
    };
    let cayley = match universe {
        Universe::Star => closure(&letter_maps, Some(unit), compose, limits)?,
        Universe::Plus => closure(&letter_maps, None, compose, limits)?,
    };
    let machine = AtomMachine::from_cayley(alphabet, universe, &cayley);
    Ok(LanguageAlgebra::from_machine(generators.to_vec(), machine))
}

/// The algebra generated by `B₁`, `B₂` and every `L₁aL₂` with `Lᵢ ∈ Bᵢ`.
/// Since marked concatenation distributes over unions, atoms suffice.
pub fn schutz_sum(b1: &LanguageAlgebra, b2: &LanguageAlgebra, limits: &Limits) -> Result<LanguageAlgebra> {
    if b1.alphabet() != b2.alphabet() || b1.universe() != b2.universe() {
        return Err(Error::input("algebras over different alphabets or universes"));
    }
    let sigma = b1.alphabet();
    let atoms1 = b1.atoms();
    let atoms2 = b2.atoms();
    let mut gens: Vec<Dfa> = atoms1.iter().chain(&atoms2).cloned().collect();
    for l1 in &atoms1 {
        for a in 0..sigma.len() {
            for l2 in &atoms2 {
                gens.push(l1.marked_concat(a, l2));
            }
        }
    }
    let mut seen = HashSet::new();
    gens.retain(|g| seen.insert(g.clone()));
    generate_algebra(sigma, b1.universe(), &gens, limits)
}

/// `⟨h⁻¹(L) : L ∈ B⟩` for the morphism `h: source* → Σ*` given by letter
/// images. The inverse image of the atom machine already describes it.
pub fn transport(source: &Alphabet, images: &[Word], b: &LanguageAlgebra) -> Result<LanguageAlgebra> {
    if images.len() != source.len() {
        return Err(Error::input("one image per source letter is required"));
    }
    for w in images {
        w.check(b.alphabet())?;
    }
    if b.universe() == Universe::Plus && images.iter().any(|w| w.is_empty()) {
        return Err(Error::precondition(
            "an erasing morphism does not map Σ⁺ into Σ⁺",
        ));
    }
    let m = b.machine();
    let n = m.state_count();
    let mut delta = Vec::with_capacity(n * source.len());
    for s in 0..n {
        for w in images {
            delta.push(m.run(s, w));
        }
    }
    let machine = AtomMachine::new(source, b.universe(), 0, &delta, &m.outputs);
    let mut generators = Vec::with_capacity(b.generators().len());
    for g in b.generators() {
        generators.push(g.inverse_image(source, images)?);
    }
    Ok(LanguageAlgebra::from_machine(generators, machine))
}

/// The atoms of a finite quotient-closed algebra with the monoid structure
/// `m·m' = λ_{w_m}(m')`, and the morphism sending a word to its atom.
#[derive(Debug, Clone)]
pub struct DualRecogniser {
    pub algebra: LanguageAlgebra,
    pub monoid: Arc<FiniteMonoid>,
    pub tau: MonoidMorphism,
    /// Shortlex-least word of each atom.
    pub representatives: Vec<Word>,
}

pub fn dual_recogniser(b: &LanguageAlgebra, limits: &Limits) -> Result<DualRecogniser> {
    let m = b.machine();
    let sigma = b.alphabet();
    let n = m.state_count();
    let k = sigma.len();
    // One transformation of the state set per atom.
    if b.atom_count().saturating_mul(n) > limits.max_states {
        return Err(Error::Resource(format!(
            "dual recogniser needs {} atoms x {} states, above max_states = {}",
            b.atom_count(),
            n,
            limits.max_states
        )));
    }
    let gens: Vec<Vec<usize>> = (0..k).map(|a| (0..n).map(|q| m.next(q, a)).collect()).collect();
    let unit: Option<Vec<usize>> = match b.universe() {
        Universe::Star => Some((0..n).collect()),
        Universe::Plus => None,
    };
    let compose = |f: &Vec<usize>, g: &Vec<usize>| -> Vec<usize> { f.iter().map(|&q| g[q]).collect() };
    let gen = closure(&gens, unit, compose, limits)?.into_generated();
    let atoms = b.atom_count();
    // Each transformation must be determined by its atom and vice versa.
    let atom_of_element: Vec<usize> = gen
        .elements
        .iter()
        .map(|t| m.output(t[0]).ok_or_else(|| Error::Internal("transformation lands on ε".into())))
        .collect::<Result<_>>()?;
    let mut element_of_atom = vec![usize::MAX; atoms];
    for (e, &x) in atom_of_element.iter().enumerate() {
        if element_of_atom[x] != usize::MAX {
            return Err(Error::Internal(format!(
                "atom {x} carries two distinct transformations; the algebra is not quotient-closed"
            )));
        }
        element_of_atom[x] = e;
    }
    if element_of_atom.contains(&usize::MAX) {
        return Err(Error::Internal("an atom carries no transformation".into()));
    }
    let representatives = b.representatives();
    let mut table = Vec::with_capacity(atoms * atoms);
    for x in 0..atoms {
        for y in 0..atoms {
            let composed = atom_of_element[gen.monoid.mul(element_of_atom[x], element_of_atom[y])];
            let state = m.run(m.run(0, &representatives[x]), &representatives[y]);
            let by_reps = m.output(state).expect("non-empty product");
            if composed != by_reps {
                return Err(Error::Internal(format!(
                    "λ_w of atom {x} depends on the representative"
                )));
            }
            table.push(composed);
        }
    }
    let identity = match b.universe() {
        Universe::Star => m.output(0),
        Universe::Plus => None,
    };
    let labels = representatives
        .iter()
        .map(|w| if w.is_empty() { "1".to_string() } else { sigma.render(w) })
        .collect();
    let monoid = Arc::new(FiniteMonoid::from_trusted(atoms, table, identity, Some(labels)));
    let images = (0..k)
        .map(|a| m.output(m.next(0, a)).expect("letters are non-empty"))
        .collect();
    let tau = MonoidMorphism::new(sigma.clone(), monoid.clone(), images)?;
    Ok(DualRecogniser {
        algebra: b.clone(),
        monoid,
        tau,
        representatives,
    })
}
