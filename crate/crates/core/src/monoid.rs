//! Finite monoids and semigroups, morphisms from free monoids, syntactic
//! monoids and recognition.
//!
//! A finite monoid with the discrete topology is its own Boolean space with
//! an internal monoid, so every recogniser in this module is simultaneously
//! the algebraic and the topological object.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{AtomMachine, LanguageAlgebra, Universe};
use crate::alphabet::{Alphabet, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Monoid,
    Semigroup,
}

/// A multiplication table on `0..size`, with an optional two-sided
/// identity. Without an identity the value is used in semigroup mode.
#[derive(Clone)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<usize>,
    identity: Option<usize>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.table == other.table && self.identity == other.identity
    }
}

impl Eq for FiniteMonoid {}

impl std::fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteMonoid")
            .field("size", &self.size)
            .field("identity", &self.identity)
            .field("table", &self.rows())
            .finish()
    }
}

impl FiniteMonoid {
    /// Validates ranges, associativity (exhaustively) and the identity.
    pub fn new(
        table: Vec<Vec<usize>>,
        identity: Option<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<FiniteMonoid> {
        let size = table.len();
        if size == 0 {
            return Err(Error::input("a monoid needs at least one element"));
        }
        if table.iter().any(|row| row.len() != size) {
            return Err(Error::input("multiplication table must be square"));
        }
        if table.iter().flatten().any(|&x| x >= size) {
            return Err(Error::input("table entry out of range"));
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(Error::input("one label per element is required"));
            }
        }
        let m = FiniteMonoid {
            size,
            table: table.concat(),
            identity,
            labels,
        };
        if let Some((a, b, c)) = m.associativity_failure() {
            return Err(Error::input(format!(
                "table is not associative: ({a}{b}){c} != {a}({b}{c})"
            )));
        }
        if let Some(e) = identity {
            if e >= size || (0..size).any(|x| m.mul(e, x) != x || m.mul(x, e) != x) {
                return Err(Error::input(format!("{e} is not a two-sided identity")));
            }
        }
        Ok(m)
    }

    /// For tables produced by closing a generating set inside an
    /// associative structure.
    pub(crate) fn from_trusted(
        size: usize,
        table: Vec<usize>,
        identity: Option<usize>,
        labels: Option<Vec<String>>,
    ) -> FiniteMonoid {
        debug_assert_eq!(table.len(), size * size);
        FiniteMonoid {
            size,
            table,
            identity,
            labels,
        }
    }

    pub fn trivial() -> FiniteMonoid {
        FiniteMonoid::from_trusted(1, vec![0], Some(0), None)
    }

    /// `Z_n` written additively; `0` is the identity.
    pub fn cyclic_group(n: usize) -> FiniteMonoid {
        assert!(n > 0);
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        FiniteMonoid::from_trusted(n, table, Some(0), None)
    }

    /// `{1, z}` with `zz = z`.
    pub fn two_element_semilattice() -> FiniteMonoid {
        FiniteMonoid::from_trusted(2, vec![0, 1, 1, 1], Some(0), Some(vec!["1".into(), "z".into()]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn mode(&self) -> Mode {
        if self.identity.is_some() {
            Mode::Monoid
        } else {
            Mode::Semigroup
        }
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.size).map(|x| self.label(x)).collect()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> FiniteMonoid {
        assert_eq!(labels.len(), self.size);
        self.labels = Some(labels);
        self
    }

    /// The same table in semigroup mode.
    pub fn as_semigroup(&self) -> FiniteMonoid {
        FiniteMonoid {
            identity: None,
            ..self.clone()
        }
    }

    /// Product of a sequence; `None` for the empty sequence in semigroup mode.
    pub fn product(&self, elems: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut it = elems.into_iter();
        match it.next() {
            None => self.identity,
            Some(first) => Some(it.fold(first, |acc, x| self.mul(acc, x))),
        }
    }

    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Every associative table of the given size. In monoid mode element
    /// `0` is the identity, so isomorphic copies differing only in the
    /// placement of the identity are not repeated.
    pub fn enumerate(size: usize, mode: Mode) -> Result<Vec<FiniteMonoid>> {
        let free_cells: Vec<usize> = (0..size * size)
            .filter(|&i| mode == Mode::Semigroup || (i / size != 0 && i % size != 0))
            .collect();
        let count = (size as f64).powi(free_cells.len() as i32);
        if count > 1e7 {
            return Err(Error::resource(format!(
                "{count} candidate tables of size {size}"
            )));
        }
        let mut table = vec![0; size * size];
        if mode == Mode::Monoid {
            for x in 0..size {
                table[x] = x;
                table[x * size] = x;
            }
        }
        let mut out = Vec::new();
        let mut digits = vec![0usize; free_cells.len()];
        loop {
            for (d, &cell) in digits.iter().zip(&free_cells) {
                table[cell] = *d;
            }
            let candidate = FiniteMonoid::from_trusted(
                size,
                table.clone(),
                (mode == Mode::Monoid).then_some(0),
                None,
            );
            if candidate.associativity_failure().is_none() {
                out.push(candidate);
            }
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return Ok(out);
                }
                digits[i] += 1;
                if digits[i] < size {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    /// All congruences, each as a class label per element. Intended for
    /// small monoids (set partitions are enumerated exhaustively).
    pub fn congruences(&self) -> Vec<Vec<usize>> {
        let n = self.size;
        let mut out = Vec::new();
        let mut labels = vec![0usize; n];
        fn rec(m: &FiniteMonoid, i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let n = m.size;
            if i == n {
                let ok = (0..n).all(|x| {
                    (0..n).all(|y| {
                        labels[x] != labels[y]
                            || (0..n).all(|z| {
                                labels[m.mul(x, z)] == labels[m.mul(y, z)]
                                    && labels[m.mul(z, x)] == labels[m.mul(z, y)]
                            })
                    })
                });
                if ok {
                    out.push(labels.clone());
                }
                return;
            }
            for c in 0..=max {
                labels[i] = c;
                rec(m, i + 1, max.max(c + 1), labels, out);
            }
        }
        if n > 0 {
            labels[0] = 0;
            rec(self, 1, 1, &mut labels, &mut out);
        }
        out
    }

    /// The monoid acting on itself by left and right multiplication.
    pub fn regular_biaction(&self) -> Biaction {
        Biaction::from_fns(
            self.size,
            self.size,
            |m, x| self.mul(m, x),
            |m, x| self.mul(x, m),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct MonoidFile {
    size: usize,
    identity: Option<usize>,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl Serialize for FiniteMonoid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonoidFile {
            size: self.size,
            identity: self.identity,
            table: self.rows(),
            labels: Some(self.labels()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMonoid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = MonoidFile::deserialize(d)?;
        if file.table.len() != file.size {
            return Err(serde::de::Error::custom("size does not match the table"));
        }
        FiniteMonoid::new(file.table, file.identity, file.labels).map_err(serde::de::Error::custom)
    }
}

/// Left and right actions of a finite monoid on a finite carrier, stored
/// as the components `λ_m` and `ρ_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biaction {
    monoid_size: usize,
    carrier_size: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Biaction {
    /// `left(m, x) = λ_m(x)`, `right(m, x) = ρ_m(x)`.
    pub fn from_fns(
        monoid_size: usize,
        carrier_size: usize,
        left: impl Fn(usize, usize) -> usize,
        right: impl Fn(usize, usize) -> usize,
    ) -> Biaction {
        let mut l = Vec::with_capacity(monoid_size * carrier_size);
        let mut r = Vec::with_capacity(monoid_size * carrier_size);
        for m in 0..monoid_size {
            for x in 0..carrier_size {
                l.push(left(m, x));
                r.push(right(m, x));
            }
        }
        Biaction {
            monoid_size,
            carrier_size,
            left: l,
            right: r,
        }
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn left(&self, m: usize, x: usize) -> usize {
        self.left[m * self.carrier_size + x]
    }

    pub fn right(&self, m: usize, x: usize) -> usize {
        self.right[m * self.carrier_size + x]
    }

    /// Checks unit, composition and compatibility laws; returns a
    /// description of the first violation.
    pub fn check_laws(&self, monoid: &FiniteMonoid) -> std::result::Result<(), String> {
        if monoid.size() != self.monoid_size {
            return Err("monoid size does not match the biaction".into());
        }
        let xs = 0..self.carrier_size;
        if let Some(e) = monoid.identity() {
            for x in xs.clone() {
                if self.left(e, x) != x || self.right(e, x) != x {
                    return Err(format!("identity does not act trivially on {x}"));
                }
            }
        }
        for m in 0..self.monoid_size {
            for n in 0..self.monoid_size {
                let mn = monoid.mul(m, n);
                for x in xs.clone() {
                    if self.left(mn, x) != self.left(m, self.left(n, x)) {
                        return Err(format!("λ_{{{m}·{n}}} != λ_{m}∘λ_{n} at {x}"));
                    }
                    if self.right(mn, x) != self.right(n, self.right(m, x)) {
                        return Err(format!("ρ_{{{m}·{n}}} != ρ_{n}∘ρ_{m} at {x}"));
                    }
                    if self.left(m, self.right(n, x)) != self.right(n, self.left(m, x)) {
                        return Err(format!("λ_{m}∘ρ_{n} != ρ_{n}∘λ_{m} at {x}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Checks `f∘λ_m = λ_{f(m)}∘f` and `f∘ρ_m = ρ_{f(m)}∘f` for every element
/// `m` of the source monoid and every carrier point.
pub fn preserves_actions(
    source: &Biaction,
    target: &Biaction,
    monoid_map: &[usize],
    carrier_map: &[usize],
) -> bool {
    (0..source.monoid_size).all(|m| {
        (0..source.carrier_size).all(|x| {
            carrier_map[source.left(m, x)] == target.left(monoid_map[m], carrier_map[x])
                && carrier_map[source.right(m, x)] == target.right(monoid_map[m], carrier_map[x])
        })
    })
}

/// A map between the elements of two finite monoids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidHom {
    pub source: Arc<FiniteMonoid>,
    pub target: Arc<FiniteMonoid>,
    pub map: Vec<usize>,
}

impl MonoidHom {
    pub fn new(source: Arc<FiniteMonoid>, target: Arc<FiniteMonoid>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() || map.iter().any(|&y| y >= target.size()) {
            return Err(Error::input("map does not fit the monoids"));
        }
        Ok(MonoidHom { source, target, map })
    }

    pub fn identity_on(m: Arc<FiniteMonoid>) -> MonoidHom {
        let map = (0..m.size()).collect();
        MonoidHom {
            source: m.clone(),
            target: m,
            map,
        }
    }

    pub fn is_morphism(&self) -> bool {
        let n = self.source.size();
        let mult = (0..n).all(|a| {
            (0..n).all(|b| self.map[self.source.mul(a, b)] == self.target.mul(self.map[a], self.map[b]))
        });
        let unit = match (self.source.identity(), self.target.identity()) {
            (Some(e), Some(f)) => self.map[e] == f,
            (Some(_), None) => false,
            _ => true,
        };
        mult && unit
    }

    /// Action preservation for the regular biactions, where the carrier of
    /// a finite recogniser is the monoid itself.
    pub fn preserves_actions(&self) -> bool {
        preserves_actions(
            &self.source.regular_biaction(),
            &self.target.regular_biaction(),
            &self.map,
            &self.map,
        )
    }
}

/// A morphism from the free monoid (or free semigroup, in semigroup mode)
/// determined by one image per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMorphism {
    alphabet: Alphabet,
    target: Arc<FiniteMonoid>,
    images: Vec<usize>,
}

impl MonoidMorphism {
    pub fn new(alphabet: Alphabet, target: Arc<FiniteMonoid>, images: Vec<usize>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::input("one image per letter is required"));
        }
        if images.iter().any(|&m| m >= target.size()) {
            return Err(Error::input("letter image out of range"));
        }
        Ok(MonoidMorphism {
            alphabet,
            target,
            images,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn target(&self) -> &Arc<FiniteMonoid> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, letter: usize) -> usize {
        self.images[letter]
    }

    pub fn mode(&self) -> Mode {
        self.target.mode()
    }

    pub fn evaluate(&self, w: &Word) -> Result<usize> {
        w.check(&self.alphabet)?;
        self.target
            .product(w.iter().map(|&a| self.images[a]))
            .ok_or_else(|| Error::Domain("the empty word has no image in semigroup mode".into()))
    }

    /// `h⁻¹(V)` for the element set given by the predicate.
    pub fn recognised_language_by(&self, accept: impl Fn(usize) -> bool) -> Dfa {
        let k = self.alphabet.len();
        let n = self.target.size();
        // State 0 reads ε, state 1 + m the words with image m.
        let mut delta = Vec::with_capacity((n + 1) * k);
        delta.extend(self.images.iter().map(|&m| 1 + m));
        for m in 0..n {
            delta.extend(self.images.iter().map(|&g| 1 + self.target.mul(m, g)));
        }
        let mut accepting = vec![self.target.identity().is_some_and(&accept)];
        accepting.extend((0..n).map(&accept));
        Dfa::from_raw(self.alphabet.clone(), 0, &delta, &accepting)
    }

    /// `h⁻¹(V)`.
    pub fn recognised_language(&self, v: &[usize]) -> Result<Dfa> {
        if let Some(&x) = v.iter().find(|&&x| x >= self.target.size()) {
            return Err(Error::input(format!("element {x} out of range")));
        }
        let mut mask = vec![false; self.target.size()];
        for &x in v {
            mask[x] = true;
        }
        Ok(self.recognised_language_by(|m| mask[m]))
    }

    /// Whether `L = h⁻¹(h(L))`; on success returns `h(L)`'s indicator.
    pub fn saturation(&self, l: &Dfa) -> Result<Option<Vec<bool>>> {
        if l.alphabet() != &self.alphabet {
            return Err(Error::input("alphabet mismatch"));
        }
        let k = self.alphabet.len();
        let n = self.target.size();
        // Product of the Cayley automaton (0 = ε, 1 + m) with L.
        let mut mark: Vec<Option<bool>> = vec![None; n];
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        let mut stack = vec![(0usize, 0usize)];
        seen.insert((0, 0), ());
        let mut eps_ok = true;
        while let Some((c, q)) = stack.pop() {
            let accepted = l.is_accepting(q);
            let elem = if c == 0 { self.target.identity() } else { Some(c - 1) };
            match elem {
                Some(m) => match mark[m] {
                    None => mark[m] = Some(accepted),
                    Some(b) if b != accepted => return Ok(None),
                    _ => {}
                },
                None => eps_ok = !accepted,
            }
            if !eps_ok {
                return Ok(None);
            }
            for a in 0..k {
                let next_c = if c == 0 {
                    1 + self.images[a]
                } else {
                    1 + self.target.mul(c - 1, self.images[a])
                };
                let t = (next_c, l.next(q, a));
                if seen.insert(t, ()).is_none() {
                    stack.push(t);
                }
            }
        }
        Ok(Some(mark.into_iter().map(|b| b.unwrap_or(false)).collect()))
    }

    pub fn recognises(&self, l: &Dfa) -> Result<bool> {
        Ok(self.saturation(l)?.is_some())
    }

    /// The submonoid (subsemigroup in semigroup mode) generated by the
    /// letter images, with this morphism corestricted onto it.
    pub fn image_monoid(&self, limits: &Limits) -> Result<(Generated<usize>, MonoidMorphism)> {
        let gens = self.images.clone();
        let target = self.target.clone();
        let generated = generate(&gens, self.target.identity(), |&a, &b| target.mul(a, b), limits)?;
        let onto = MonoidMorphism {
            alphabet: self.alphabet.clone(),
            target: Arc::new(generated.monoid.clone()),
            images: generated.generator_images.clone(),
        };
        Ok((generated, onto))
    }
}

/// Every letter assignment `Σ → M`, in lexicographic order of images.
pub fn all_morphisms(
    alphabet: &Alphabet,
    target: &Arc<FiniteMonoid>,
    limits: &Limits,
) -> Result<Vec<MonoidMorphism>> {
    let n = target.size();
    let k = alphabet.len();
    let count = (n as f64).powi(k as i32);
    if count > limits.max_morphisms as f64 {
        return Err(Error::resource(format!(
            "|M|^|Σ| = {n}^{k} exceeds the enumeration bound {}",
            limits.max_morphisms
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut images = vec![0usize; k];
    loop {
        out.push(MonoidMorphism {
            alphabet: alphabet.clone(),
            target: target.clone(),
            images: images.clone(),
        });
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            images[i] += 1;
            if images[i] < n {
                break;
            }
            images[i] = 0;
        }
    }
}

/// The Boolean algebra of all languages recognised by `M` over `alphabet`
/// (subsets of `Σ⁺` in semigroup mode). The atom of a word is the vector of
/// its images under every letter assignment.
pub fn recognised_algebra(
    target: &Arc<FiniteMonoid>,
    alphabet: &Alphabet,
    limits: &Limits,
) -> Result<LanguageAlgebra> {
    let morphisms = all_morphisms(alphabet, target, limits)?;
    let k = alphabet.len();
    let gens: Vec<Vec<usize>> = (0..k)
        .map(|a| morphisms.iter().map(|h| h.image(a)).collect())
        .collect();
    let unit = target.identity().map(|e| vec![e; morphisms.len()]);
    let mul = |x: &Vec<usize>, y: &Vec<usize>| -> Vec<usize> {
        x.iter().zip(y).map(|(&p, &q)| target.mul(p, q)).collect()
    };
    let closure = closure(&gens, unit, mul, limits)?;
    let universe = match target.mode() {
        Mode::Monoid => Universe::Star,
        Mode::Semigroup => Universe::Plus,
    };
    let machine = AtomMachine::from_cayley(alphabet, universe, &closure);
    Ok(LanguageAlgebra::from_machine(Vec::new(), machine))
}

/// Right Cayley graph of the monoid generated by `generators`.
#[derive(Debug, Clone)]
pub struct Closure<E> {
    pub elements: Vec<E>,
    /// `right[e * k + j]` is `e · generators[j]`.
    pub right: Vec<usize>,
    pub generator_count: usize,
    /// Index of the unit, in monoid mode (always `0`).
    pub unit: Option<usize>,
    /// Shortlex-least generator word reaching each element.
    pub representatives: Vec<Vec<usize>>,
    /// Index of each generator.
    pub generator_images: Vec<usize>,
}

/// Closes `generators` under `mul`, breadth-first in generator order.
/// Without a unit the closure is the generated semigroup.
pub fn closure<E, F>(generators: &[E], unit: Option<E>, mul: F, limits: &Limits) -> Result<Closure<E>>
where
    E: Clone + Eq + Hash,
    F: Fn(&E, &E) -> E,
{
    let k = generators.len();
    let mut ids: HashMap<E, usize> = HashMap::new();
    let mut elements = Vec::new();
    let mut representatives: Vec<Vec<usize>> = Vec::new();
    let has_unit = unit.is_some();
    if let Some(u) = unit {
        ids.insert(u.clone(), 0);
        elements.push(u);
        representatives.push(Vec::new());
    }
    let mut generator_images = Vec::with_capacity(k);
    if !has_unit {
        for (j, g) in generators.iter().enumerate() {
            let fresh = elements.len();
            let id = *ids.entry(g.clone()).or_insert_with(|| {
                elements.push(g.clone());
                representatives.push(vec![j]);
                fresh
            });
            generator_images.push(id);
        }
    }
    let mut right = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        for (j, g) in generators.iter().enumerate() {
            let prod = mul(&elements[head], g);
            let id = match ids.get(&prod) {
                Some(&id) => id,
                None => {
                    if elements.len() >= limits.max_closure {
                        return Err(Error::resource(format!(
                            "generated monoid exceeds {} elements",
                            limits.max_closure
                        )));
                    }
                    let id = elements.len();
                    let mut rep = representatives[head].clone();
                    rep.push(j);
                    ids.insert(prod.clone(), id);
                    elements.push(prod);
                    representatives.push(rep);
                    id
                }
            };
            right.push(id);
        }
        head += 1;
    }
    if has_unit {
        generator_images = (0..k).map(|j| right[j]).collect();
    }
    Ok(Closure {
        elements,
        right,
        generator_count: k,
        unit: has_unit.then_some(0),
        representatives,
        generator_images,
    })
}

/// A generated monoid together with its elements in the ambient structure.
#[derive(Debug, Clone)]
pub struct Generated<E> {
    pub elements: Vec<E>,
    pub monoid: FiniteMonoid,
    pub generator_images: Vec<usize>,
    pub representatives: Vec<Vec<usize>>,
}

impl<E> Closure<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn step(&self, e: usize, generator: usize) -> usize {
        self.right[e * self.generator_count + generator]
    }

    /// The elements met by `l`, when `l` is a union of classes of the
    /// generated monoid; `None` otherwise (or when `l` contains the empty
    /// word but there is no unit).
    pub fn saturation(&self, l: &Dfa) -> Option<Vec<bool>> {
        let k = self.generator_count;
        let mut mark: Vec<Option<bool>> = vec![None; self.elements.len()];
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        // Elements are shifted by one; 0 stands for the empty word.
        let mut stack = vec![(0usize, 0usize)];
        seen.insert((0, 0), ());
        while let Some((c, q)) = stack.pop() {
            let inside = l.is_accepting(q);
            let elem = if c == 0 { self.unit } else { Some(c - 1) };
            match elem {
                Some(e) => match mark[e] {
                    None => mark[e] = Some(inside),
                    Some(b) if b != inside => return None,
                    _ => {}
                },
                None if inside => return None,
                None => {}
            }
            for a in 0..k {
                let next = if c == 0 { self.generator_images[a] } else { self.step(c - 1, a) };
                let t = (next + 1, l.next(q, a));
                if seen.insert(t, ()).is_none() {
                    stack.push(t);
                }
            }
        }
        Some(mark.into_iter().map(|b| b == Some(true)).collect())
    }

    /// Words whose element satisfies `accept`, generators read as letters.
    /// Without a unit the empty word is rejected.
    pub fn language(&self, alphabet: &Alphabet, accept: impl Fn(usize) -> bool) -> Dfa {
        assert_eq!(alphabet.len(), self.generator_count);
        let n = self.elements.len();
        match self.unit {
            Some(_) => {
                let accepting: Vec<bool> = (0..n).map(accept).collect();
                Dfa::from_raw(alphabet.clone(), 0, &self.right, &accepting)
            }
            None => {
                let mut delta: Vec<usize> = self.generator_images.iter().map(|&g| g + 1).collect();
                delta.extend(self.right.iter().map(|&e| e + 1));
                let mut accepting = vec![false];
                accepting.extend((0..n).map(accept));
                Dfa::from_raw(alphabet.clone(), 0, &delta, &accepting)
            }
        }
    }

    /// Multiplication table obtained by walking the Cayley graph along the
    /// representative of the right factor.
    pub fn into_generated(self) -> Generated<E> {
        let n = self.elements.len();
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(
                    self.representatives[y]
                        .iter()
                        .fold(x, |acc, &j| self.step(acc, j)),
                );
            }
        }
        let monoid = FiniteMonoid::from_trusted(n, table, self.unit, None);
        Generated {
            elements: self.elements,
            monoid,
            generator_images: self.generator_images,
            representatives: self.representatives,
        }
    }
}

/// [`closure`] followed by [`Closure::into_generated`].
pub fn generate<E, F>(generators: &[E], unit: Option<E>, mul: F, limits: &Limits) -> Result<Generated<E>>
where
    E: Clone + Eq + Hash,
    F: Fn(&E, &E) -> E,
{
    Ok(closure(generators, unit, mul, limits)?.into_generated())
}

/// The syntactic monoid of a language, with its evaluation morphism and
/// the accepting subset.
#[derive(Debug, Clone)]
pub struct Syntactic {
    pub monoid: Arc<FiniteMonoid>,
    pub morphism: MonoidMorphism,
    pub accepting: Vec<usize>,
}

/// Transition monoid of the minimal automaton. Elements are numbered
/// breadth-first from the identity; labels are shortest representatives.
pub fn syntactic_monoid(l: &Dfa) -> Syntactic {
    let sigma = l.alphabet();
    let n = l.state_count();
    let gens: Vec<Vec<usize>> = (0..sigma.len())
        .map(|a| (0..n).map(|q| l.next(q, a)).collect())
        .collect();
    let unit: Vec<usize> = (0..n).collect();
    let compose = |f: &Vec<usize>, g: &Vec<usize>| -> Vec<usize> { f.iter().map(|&q| g[q]).collect() };
    let limits = Limits {
        max_closure: usize::MAX,
        ..Limits::default()
    };
    let gen = generate(&gens, Some(unit), compose, &limits).expect("unbounded closure");
    let accepting = (0..gen.elements.len())
        .filter(|&e| l.is_accepting(gen.elements[e][0]))
        .collect();
    let labels = gen
        .representatives
        .iter()
        .map(|rep| {
            if rep.is_empty() {
                "1".to_string()
            } else {
                sigma.render(&Word::from(rep.clone()))
            }
        })
        .collect();
    let monoid = Arc::new(gen.monoid.with_labels(labels));
    let morphism = MonoidMorphism {
        alphabet: sigma.clone(),
        target: monoid.clone(),
        images: gen.generator_images,
    };
    Syntactic {
        monoid,
        morphism,
        accepting,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse_list("a,b").unwrap()
    }

    #[test]
    fn rejects_non_associative_and_fake_identity() {
        // x·y = 1 - x: (0·0)·0 = 0 but 0·(0·0) = 1.
        let bad = vec![vec![1, 1], vec![0, 0]];
        assert!(matches!(FiniteMonoid::new(bad, None, None), Err(Error::Input(_))));
        let z2 = FiniteMonoid::cyclic_group(2).rows();
        assert!(FiniteMonoid::new(z2.clone(), Some(1), None).is_err());
        assert!(FiniteMonoid::new(z2, Some(0), None).is_ok());
    }

    #[test]
    fn enumeration_counts() {
        // Associative binary operations on a 2-element set: 8; on 3: 113.
        assert_eq!(FiniteMonoid::enumerate(2, Mode::Semigroup).unwrap().len(), 8);
        assert_eq!(FiniteMonoid::enumerate(3, Mode::Semigroup).unwrap().len(), 113);
        assert_eq!(FiniteMonoid::enumerate(1, Mode::Semigroup).unwrap().len(), 1);
        // Monoids with identity 0: Z2 and {1,z}.
        assert_eq!(FiniteMonoid::enumerate(2, Mode::Monoid).unwrap().len(), 2);
    }

    #[test]
    fn all_morphisms_counts() {
        let lim = Limits::default();
        let m2 = Arc::new(FiniteMonoid::two_element_semilattice());
        assert_eq!(all_morphisms(&ab(), &m2, &lim).unwrap().len(), 4);
        let a = Alphabet::parse_list("a").unwrap();
        let z2 = Arc::new(FiniteMonoid::cyclic_group(2));
        assert_eq!(all_morphisms(&a, &z2, &lim).unwrap().len(), 2);
        let m3 = Arc::new(FiniteMonoid::cyclic_group(3));
        assert_eq!(all_morphisms(&ab(), &m3, &lim).unwrap().len(), 9);
        let tight = Limits {
            max_morphisms: 8,
            ..lim
        };
        assert!(matches!(all_morphisms(&ab(), &m3, &tight), Err(Error::Resource(_))));
    }

    #[test]
    fn evaluate_empty_word() {
        let m = Arc::new(FiniteMonoid::two_element_semilattice());
        let h = MonoidMorphism::new(ab(), m.clone(), vec![1, 0]).unwrap();
        assert_eq!(h.evaluate(&Word::empty()).unwrap(), 0);
        assert_eq!(h.evaluate(&ab().parse_word("bab").unwrap()).unwrap(), 1);
        let s = MonoidMorphism::new(ab(), Arc::new(m.as_semigroup()), vec![1, 0]).unwrap();
        assert!(matches!(s.evaluate(&Word::empty()), Err(Error::Domain(_))));
    }

    #[test]
    fn recognised_language_extremes() {
        let m = Arc::new(FiniteMonoid::two_element_semilattice());
        let h = MonoidMorphism::new(ab(), m.clone(), vec![1, 0]).unwrap();
        assert!(h.recognised_language(&[]).unwrap().is_empty());
        assert!(h.recognised_language(&[0, 1]).unwrap().is_universal());
        let s = MonoidMorphism::new(ab(), Arc::new(m.as_semigroup()), vec![1, 0]).unwrap();
        assert_eq!(s.recognised_language(&[0, 1]).unwrap(), Dfa::plus(&ab()));
    }

    #[test]
    fn congruences_of_z2() {
        let z2 = FiniteMonoid::cyclic_group(2);
        assert_eq!(z2.congruences(), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn regular_biaction_laws() {
        for m in FiniteMonoid::enumerate(3, Mode::Monoid).unwrap() {
            assert_eq!(m.regular_biaction().check_laws(&m), Ok(()));
        }
    }

    #[test]
    fn json_round_trip() {
        let m = FiniteMonoid::two_element_semilattice();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"size":2,"identity":0,"table":[[0,1],[1,1]],"labels":["1","z"]}"#);
        let back: FiniteMonoid = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<FiniteMonoid>(r#"{"size":2,"identity":1,"table":[[0,1],[1,1]]}"#).is_err());
    }
}
