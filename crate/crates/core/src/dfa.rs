//! Canonical minimal complete DFAs.
//!
//! Every [`Dfa`] value is minimal, complete, restricted to reachable states
//! and numbered breadth-first from the initial state (which is always `0`),
//! exploring letters in alphabet order. Two values therefore denote the same
//! language exactly when they compare equal.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<usize>,
    accepting: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
    Complement,
}

/// Reachability restriction, Moore-style partition refinement with respect
/// to `outputs`, and breadth-first renumbering. State `0` of the result is
/// the class of `initial`.
pub(crate) fn canonical_moore<O: Clone + Eq + Hash>(
    k: usize,
    initial: usize,
    delta: &[usize],
    outputs: &[O],
) -> (Vec<usize>, Vec<O>) {
    let n = outputs.len();
    let mut index = vec![usize::MAX; n];
    let mut order = vec![initial];
    index[initial] = 0;
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for a in 0..k {
            let t = delta[s * k + a];
            if index[t] == usize::MAX {
                index[t] = order.len();
                order.push(t);
            }
        }
    }
    let m = order.len();
    let mut rdelta = Vec::with_capacity(m * k);
    for &s in &order {
        for a in 0..k {
            rdelta.push(index[delta[s * k + a]]);
        }
    }

    let mut class = vec![0u32; m];
    let mut count = {
        let mut ids: HashMap<&O, u32> = HashMap::new();
        for (i, &s) in order.iter().enumerate() {
            let next = ids.len() as u32;
            class[i] = *ids.entry(&outputs[s]).or_insert(next);
        }
        ids.len()
    };
    loop {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
        let mut next_class = vec![0u32; m];
        let mut sig = Vec::with_capacity(k + 1);
        for s in 0..m {
            sig.clear();
            sig.push(class[s]);
            sig.extend((0..k).map(|a| class[rdelta[s * k + a]]));
            let fresh = ids.len() as u32;
            next_class[s] = *ids.entry(sig.clone()).or_insert(fresh);
        }
        let new_count = ids.len();
        class = next_class;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // Renumber classes breadth-first from the initial class.
    let mut rep = vec![usize::MAX; count];
    for s in (0..m).rev() {
        rep[class[s] as usize] = s;
    }
    let mut number = vec![usize::MAX; count];
    let mut queue = VecDeque::from([class[0] as usize]);
    number[class[0] as usize] = 0;
    let mut blocks = vec![class[0] as usize];
    while let Some(c) = queue.pop_front() {
        let s = rep[c];
        for a in 0..k {
            let d = class[rdelta[s * k + a]] as usize;
            if number[d] == usize::MAX {
                number[d] = blocks.len();
                blocks.push(d);
                queue.push_back(d);
            }
        }
    }
    let mut out_delta = Vec::with_capacity(count * k);
    let mut out_outputs = Vec::with_capacity(count);
    for &c in &blocks {
        let s = rep[c];
        for a in 0..k {
            out_delta.push(number[class[rdelta[s * k + a]] as usize]);
        }
        out_outputs.push(outputs[order[s]].clone());
    }
    (out_delta, out_outputs)
}

impl Dfa {
    /// Builds the canonical automaton of an arbitrary complete DFA.
    pub fn from_parts(
        alphabet: Alphabet,
        initial: usize,
        transitions: &[Vec<usize>],
        accepting: &[bool],
    ) -> Result<Dfa> {
        let n = accepting.len();
        let k = alphabet.len();
        if n == 0 {
            return Err(Error::input("an automaton needs at least one state"));
        }
        if transitions.len() != n {
            return Err(Error::input(format!(
                "expected {n} transition rows, found {}",
                transitions.len()
            )));
        }
        if initial >= n {
            return Err(Error::input(format!("initial state {initial} out of range")));
        }
        let mut delta = Vec::with_capacity(n * k);
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != k {
                return Err(Error::input(format!(
                    "state {s} has {} transitions, alphabet has {k} letters",
                    row.len()
                )));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::input(format!("transition target {t} out of range")));
            }
            delta.extend_from_slice(row);
        }
        Ok(Dfa::from_raw(alphabet, initial, &delta, accepting))
    }

    pub(crate) fn from_raw(
        alphabet: Alphabet,
        initial: usize,
        delta: &[usize],
        accepting: &[bool],
    ) -> Dfa {
        let (delta, accepting) = canonical_moore(alphabet.len(), initial, delta, accepting);
        Dfa {
            alphabet,
            delta,
            accepting,
        }
    }

    pub fn empty(alphabet: &Alphabet) -> Dfa {
        Dfa {
            delta: vec![0; alphabet.len()],
            accepting: vec![false],
            alphabet: alphabet.clone(),
        }
    }

    /// `Σ*`.
    pub fn universal(alphabet: &Alphabet) -> Dfa {
        Dfa::empty(alphabet).complement()
    }

    /// `{ε}`.
    pub fn epsilon(alphabet: &Alphabet) -> Dfa {
        let k = alphabet.len();
        let delta = vec![1; 2 * k];
        Dfa::from_raw(alphabet.clone(), 0, &delta, &[true, false])
    }

    /// `Σ⁺`.
    pub fn plus(alphabet: &Alphabet) -> Dfa {
        Dfa::epsilon(alphabet).complement()
    }

    /// The single-word language `{w}`.
    pub fn word(alphabet: &Alphabet, w: &Word) -> Dfa {
        let k = alphabet.len();
        let n = w.len() + 2;
        let sink = n - 1;
        let mut delta = vec![sink; n * k];
        for (i, &a) in w.iter().enumerate() {
            delta[i * k + a] = i + 1;
        }
        let mut accepting = vec![false; n];
        accepting[w.len()] = true;
        Dfa::from_raw(alphabet.clone(), 0, &delta, &accepting)
    }

    /// All words containing at least one occurrence of `letter`: `Σ*aΣ*`.
    pub fn contains_letter(alphabet: &Alphabet, letter: usize) -> Dfa {
        Dfa::universal(alphabet).marked_concat(letter, &Dfa::universal(alphabet))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn next(&self, state: usize, letter: usize) -> usize {
        self.delta[state * self.alphabet.len() + letter]
    }

    pub fn run(&self, state: usize, word: &[usize]) -> usize {
        word.iter().fold(state, |s, &a| self.next(s, a))
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.state_count()).filter(|&s| self.accepting[s]).collect()
    }

    pub fn transitions(&self) -> Vec<Vec<usize>> {
        self.delta
            .chunks(self.alphabet.len())
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run(0, word)]
    }

    pub fn is_empty(&self) -> bool {
        !self.accepting.iter().any(|&b| b)
    }

    pub fn is_universal(&self) -> bool {
        self.accepting.iter().all(|&b| b)
    }

    pub fn contains_epsilon(&self) -> bool {
        self.accepting[0]
    }

    fn same_alphabet(&self, other: &Dfa) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::input(format!(
                "alphabet mismatch: {} vs {}",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            alphabet: self.alphabet.clone(),
            delta: self.delta.clone(),
            accepting: self.accepting.iter().map(|b| !b).collect(),
        }
    }

    /// Synchronous product with an arbitrary acceptance combinator.
    pub fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        self.same_alphabet(other)?;
        let k = self.alphabet.len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(0usize, 0usize)];
        ids.insert((0, 0), 0);
        let mut delta = Vec::new();
        let mut head = 0;
        while head < pairs.len() {
            let (p, q) = pairs[head];
            head += 1;
            for a in 0..k {
                let t = (self.next(p, a), other.next(q, a));
                let next = pairs.len();
                let id = *ids.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    next
                });
                delta.push(id);
            }
        }
        let accepting: Vec<bool> = pairs
            .iter()
            .map(|&(p, q)| accept(self.accepting[p], other.accepting[q]))
            .collect();
        Ok(Dfa::from_raw(self.alphabet.clone(), 0, &delta, &accepting))
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |x, y| x && !y)
    }

    /// Boolean combination; `other` is required for every operator except
    /// complement, where it is ignored.
    pub fn combine(&self, op: BoolOp, other: Option<&Dfa>) -> Result<Dfa> {
        let need = || other.ok_or_else(|| Error::input("binary operator needs two operands"));
        match op {
            BoolOp::Complement => Ok(self.complement()),
            BoolOp::Union => self.union(need()?),
            BoolOp::Intersection => self.intersection(need()?),
            BoolOp::Difference => self.difference(need()?),
        }
    }

    /// `w⁻¹L = { u | wu ∈ L }`.
    pub fn left_quotient(&self, w: &Word) -> Result<Dfa> {
        w.check(&self.alphabet)?;
        let start = self.run(0, w);
        Ok(Dfa::from_raw(
            self.alphabet.clone(),
            start,
            &self.delta,
            &self.accepting,
        ))
    }

    /// `Lw⁻¹ = { u | uw ∈ L }`.
    pub fn right_quotient(&self, w: &Word) -> Result<Dfa> {
        w.check(&self.alphabet)?;
        let accepting: Vec<bool> = (0..self.state_count())
            .map(|s| self.accepting[self.run(s, w)])
            .collect();
        Ok(Dfa::from_raw(self.alphabet.clone(), 0, &self.delta, &accepting))
    }

    /// Disjoint copy of `self` followed by `other` inside one NFA; returns
    /// the NFA and the offset of `other`'s states.
    fn sequence_nfa(&self, other: &Dfa) -> (Nfa, usize) {
        let k = self.alphabet.len();
        let n1 = self.state_count();
        let n = n1 + other.state_count();
        let mut nfa = Nfa::new(k, n);
        for s in 0..n1 {
            for a in 0..k {
                nfa.add(s, a, self.next(s, a));
            }
        }
        for s in 0..other.state_count() {
            for a in 0..k {
                nfa.add(n1 + s, a, n1 + other.next(s, a));
            }
            nfa.accepting[n1 + s] = other.accepting[s];
        }
        nfa.initial = vec![0];
        (nfa, n1)
    }

    /// `L₁L₂` by the classical ε-NFA construction.
    pub fn concat(&self, other: &Dfa) -> Result<Dfa> {
        self.same_alphabet(other)?;
        let (mut nfa, off) = self.sequence_nfa(other);
        for s in self.accepting_states() {
            nfa.eps[s].push(off);
        }
        Ok(nfa.determinize(&self.alphabet))
    }

    /// `{ u a v | u ∈ L₁, v ∈ L₂ }`.
    pub fn marked_concat(&self, letter: usize, other: &Dfa) -> Dfa {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        assert!(letter < self.alphabet.len(), "letter out of range");
        let (mut nfa, off) = self.sequence_nfa(other);
        for s in self.accepting_states() {
            nfa.add(s, letter, off);
        }
        nfa.determinize(&self.alphabet)
    }

    pub fn star(&self) -> Dfa {
        let k = self.alphabet.len();
        let n = self.state_count();
        let mut nfa = Nfa::new(k, n + 1);
        for s in 0..n {
            for a in 0..k {
                nfa.add(s, a, self.next(s, a));
            }
            if self.accepting[s] {
                nfa.eps[s].push(0);
                nfa.accepting[s] = true;
            }
        }
        nfa.eps[n].push(0);
        nfa.accepting[n] = true;
        nfa.initial = vec![n];
        nfa.determinize(&self.alphabet)
    }

    /// `h⁻¹(L)` for the monoid morphism `h: source* → alphabet*` given by
    /// the image of each source letter.
    pub fn inverse_image(&self, source: &Alphabet, images: &[Word]) -> Result<Dfa> {
        if images.len() != source.len() {
            return Err(Error::input("one image per source letter is required"));
        }
        for w in images {
            w.check(&self.alphabet)?;
        }
        let k = source.len();
        let mut delta = Vec::with_capacity(self.state_count() * k);
        for s in 0..self.state_count() {
            for w in images {
                delta.push(self.run(s, w));
            }
        }
        Ok(Dfa::from_raw(source.clone(), 0, &delta, &self.accepting))
    }

    /// Letter-to-letter relabelling into `target`, where each source letter
    /// may map to several (or no) target letters. The result accepts every
    /// image of an accepted word.
    pub fn relabel(&self, target: &Alphabet, map: &[Vec<usize>]) -> Result<Dfa> {
        if map.len() != self.alphabet.len() {
            return Err(Error::input("relabelling must cover every source letter"));
        }
        let n = self.state_count();
        let mut nfa = Nfa::new(target.len(), n);
        for s in 0..n {
            for (a, images) in map.iter().enumerate() {
                for &b in images {
                    if b >= target.len() {
                        return Err(Error::input("relabelling target out of range"));
                    }
                    nfa.add(s, b, self.next(s, a));
                }
            }
            nfa.accepting[s] = self.accepting[s];
        }
        nfa.initial = vec![0];
        Ok(nfa.determinize(target))
    }

    /// Decides language equality by a product search, without relying on
    /// canonical form. Returns a shortest distinguishing word if any.
    pub fn distinguishing_word(&self, other: &Dfa) -> Result<Option<Word>> {
        self.same_alphabet(other)?;
        let k = self.alphabet.len();
        let mut parent: HashMap<(usize, usize), Option<((usize, usize), usize)>> = HashMap::new();
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        parent.insert((0, 0), None);
        while let Some((p, q)) = queue.pop_front() {
            if self.accepting[p] != other.accepting[q] {
                let mut letters = Vec::new();
                let mut cur = (p, q);
                while let Some(Some((prev, a))) = parent.get(&cur) {
                    letters.push(*a);
                    cur = *prev;
                }
                letters.reverse();
                return Ok(Some(Word::from(letters)));
            }
            for a in 0..k {
                let t = (self.next(p, a), other.next(q, a));
                if !parent.contains_key(&t) {
                    parent.insert(t, Some(((p, q), a)));
                    queue.push_back(t);
                }
            }
        }
        Ok(None)
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.distinguishing_word(other)?.is_none())
    }

    /// Shortlex-least accepted word, if any.
    pub fn shortest_word(&self) -> Option<Word> {
        let k = self.alphabet.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.state_count()];
        let mut seen = vec![false; self.state_count()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            if self.accepting[s] {
                let mut letters = Vec::new();
                let mut cur = s;
                while let Some((prev, a)) = parent[cur] {
                    letters.push(a);
                    cur = prev;
                }
                letters.reverse();
                return Some(Word::from(letters));
            }
            for a in 0..k {
                let t = self.next(s, a);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Accepted words of length at most `max_len`, shortlex ordered.
    pub fn accepted_up_to(&self, max_len: usize) -> Vec<Word> {
        self.alphabet
            .words_up_to(max_len)
            .into_iter()
            .filter(|w| self.accepts(w))
            .collect()
    }

    /// `L₁L₂` computed as `⋃_a L₁a(a⁻¹L₂)`, plus the correction term `L₁`
    /// when `ε ∈ L₂` unless `verbatim` is set.
    pub fn concat_decompose(&self, other: &Dfa, verbatim: bool) -> Result<Dfa> {
        self.same_alphabet(other)?;
        let mut acc = Dfa::empty(&self.alphabet);
        for a in 0..self.alphabet.len() {
            let tail = other.left_quotient(&Word::from(vec![a]))?;
            acc = acc.union(&self.marked_concat(a, &tail))?;
        }
        if !verbatim && other.contains_epsilon() {
            acc = acc.union(self)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for Dfa {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dfa")
            .field("alphabet", &self.alphabet)
            .field("states", &self.state_count())
            .field("accepting", &self.accepting_states())
            .field("transitions", &self.transitions())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct DfaFile {
    alphabet: Alphabet,
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<Vec<usize>>,
}

impl Serialize for Dfa {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DfaFile {
            alphabet: self.alphabet.clone(),
            states: self.state_count(),
            initial: 0,
            accepting: self.accepting_states(),
            transitions: self.transitions(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dfa {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = DfaFile::deserialize(d)?;
        let mut accepting = vec![false; file.states];
        for s in file.accepting {
            if s >= file.states {
                return Err(serde::de::Error::custom(format!(
                    "accepting state {s} out of range"
                )));
            }
            accepting[s] = true;
        }
        Dfa::from_parts(file.alphabet, file.initial, &file.transitions, &accepting)
            .map_err(serde::de::Error::custom)
    }
}

/// ε-NFA used internally for concatenation, star and relabelling.
pub(crate) struct Nfa {
    k: usize,
    trans: Vec<Vec<Vec<usize>>>,
    pub(crate) eps: Vec<Vec<usize>>,
    pub(crate) initial: Vec<usize>,
    pub(crate) accepting: Vec<bool>,
}

impl Nfa {
    pub(crate) fn new(k: usize, n: usize) -> Nfa {
        Nfa {
            k,
            trans: vec![vec![Vec::new(); k]; n],
            eps: vec![Vec::new(); n],
            initial: Vec::new(),
            accepting: vec![false; n],
        }
    }

    pub(crate) fn add(&mut self, from: usize, letter: usize, to: usize) {
        self.trans[from][letter].push(to);
    }

    fn closure(&self, states: &mut Vec<usize>) {
        let mut seen = vec![false; self.accepting.len()];
        let mut stack = Vec::new();
        for &s in states.iter() {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        states.clear();
        states.extend((0..seen.len()).filter(|&s| seen[s]));
    }

    /// Subset construction followed by canonicalisation.
    pub(crate) fn determinize(&self, alphabet: &Alphabet) -> Dfa {
        debug_assert_eq!(alphabet.len(), self.k);
        let mut start = self.initial.clone();
        self.closure(&mut start);
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut sets = vec![start];
        let mut delta = Vec::new();
        let mut head = 0;
        while head < sets.len() {
            for a in 0..self.k {
                let mut next: Vec<usize> = sets[head]
                    .iter()
                    .flat_map(|&s| self.trans[s][a].iter().copied())
                    .collect();
                self.closure(&mut next);
                let fresh = sets.len();
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    fresh
                });
                delta.push(id);
            }
            head += 1;
        }
        let accepting: Vec<bool> = sets
            .iter()
            .map(|set| set.iter().any(|&s| self.accepting[s]))
            .collect();
        Dfa::from_raw(alphabet.clone(), 0, &delta, &accepting)
    }
}
