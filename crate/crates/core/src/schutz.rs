//! Unary and binary Schützenberger products of finite monoids, the maps
//! `ξ` and `ζ_a` into them, and their biactions.
//!
//! For a finite discrete space the Vietoris space is the power set, so the
//! space forms `◇X` and `◇(X,Y)` coincide with the monoids themselves.

use std::sync::Arc;

use crate::alphabet::{Alphabet, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::marking::{ExtendedAlphabet, MarkedWord};
use crate::monoid::{closure, Biaction, Closure, FiniteMonoid, Mode, MonoidMorphism};
use crate::subset::Subset;

/// `◇V` (hit) or `□V` (miss) on a power set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HitMode {
    Hit,
    Miss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HitClopen {
    pub mode: HitMode,
    pub witness: Subset,
}

impl HitClopen {
    pub fn hit(witness: Subset) -> HitClopen {
        HitClopen {
            mode: HitMode::Hit,
            witness,
        }
    }

    pub fn miss(witness: Subset) -> HitClopen {
        HitClopen {
            mode: HitMode::Miss,
            witness,
        }
    }

    pub fn contains(&self, s: Subset) -> bool {
        match self.mode {
            HitMode::Hit => s.intersects(self.witness),
            HitMode::Miss => s.is_subset_of(self.witness),
        }
    }

    /// The complementary clopen over a carrier of size `n`:
    /// `□V = (◇Vᶜ)ᶜ` and `◇V = (□Vᶜ)ᶜ`.
    pub fn complement(&self, n: usize) -> HitClopen {
        let witness = self.witness.complement(n);
        match self.mode {
            HitMode::Hit => HitClopen::miss(witness),
            HitMode::Miss => HitClopen::hit(witness),
        }
    }
}

fn set_label(s: Subset, label: impl Fn(usize) -> String) -> String {
    let items: Vec<String> = s.iter().map(label).collect();
    format!("{{{}}}", items.join(","))
}

/// An element `(S, m)` of `◇M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnaryElem {
    pub set: Subset,
    pub m: usize,
}

/// `◇M = P(M) * M`, or `P⁺(S) * S` for a semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnarySchutz {
    base: Arc<FiniteMonoid>,
}

impl UnarySchutz {
    pub fn new(base: Arc<FiniteMonoid>) -> Result<UnarySchutz> {
        if base.size() > Subset::CAPACITY {
            return Err(Error::resource(format!(
                "base of size {} exceeds the subset capacity {}",
                base.size(),
                Subset::CAPACITY
            )));
        }
        Ok(UnarySchutz { base })
    }

    pub fn base(&self) -> &Arc<FiniteMonoid> {
        &self.base
    }

    pub fn mode(&self) -> Mode {
        self.base.mode()
    }

    /// `(∅, 1)` in monoid mode.
    pub fn unit(&self) -> Option<UnaryElem> {
        self.base.identity().map(|e| UnaryElem {
            set: Subset::empty(),
            m: e,
        })
    }

    pub fn left_mul_set(&self, m: usize, s: Subset) -> Subset {
        s.map(|x| self.base.mul(m, x))
    }

    pub fn right_mul_set(&self, s: Subset, n: usize) -> Subset {
        s.map(|x| self.base.mul(x, n))
    }

    /// `(S,m)*(T,n) = (S·n ∪ m·T, mn)`.
    pub fn mul(&self, p: &UnaryElem, q: &UnaryElem) -> UnaryElem {
        UnaryElem {
            set: self.right_mul_set(p.set, q.m).union(self.left_mul_set(p.m, q.set)),
            m: self.base.mul(p.m, q.m),
        }
    }

    /// `l_(S,m)(T,x) = ({λ_s(x) | s ∈ S} ∪ λ_m[T], λ_m(x))` on `◇X = ◇M`.
    pub fn left_action(&self, p: &UnaryElem, point: &UnaryElem) -> UnaryElem {
        let from_s = p.set.map(|s| self.base.mul(s, point.m));
        UnaryElem {
            set: from_s.union(self.left_mul_set(p.m, point.set)),
            m: self.base.mul(p.m, point.m),
        }
    }

    /// `r_(S,m)(T,x) = ({ρ_s(x) | s ∈ S} ∪ ρ_m[T], ρ_m(x))`.
    pub fn right_action(&self, p: &UnaryElem, point: &UnaryElem) -> UnaryElem {
        let from_s = p.set.map(|s| self.base.mul(point.m, s));
        UnaryElem {
            set: from_s.union(self.right_mul_set(point.set, p.m)),
            m: self.base.mul(point.m, p.m),
        }
    }

    /// `π₂`.
    pub fn pi2(&self, p: &UnaryElem) -> usize {
        p.m
    }

    /// `2^|M|·|M|`, or `(2^|M| - 1)·|M|` in semigroup mode.
    pub fn carrier_size(&self) -> u128 {
        let n = self.base.size() as u32;
        let sets = 2u128.checked_pow(n).unwrap_or(u128::MAX);
        match self.mode() {
            Mode::Monoid => sets.saturating_mul(n as u128),
            Mode::Semigroup => (sets - 1).saturating_mul(n as u128),
        }
    }

    fn check_eager(&self, limits: &Limits) -> Result<()> {
        if self.base.size() > limits.max_eager_base {
            return Err(Error::resource(format!(
                "carrier of ◇M for |M| = {} is only materialised up to |M| = {}",
                self.base.size(),
                limits.max_eager_base
            )));
        }
        Ok(())
    }

    /// Every element, ordered by subset bits and then by `m`.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<UnaryElem>> {
        self.check_eager(limits)?;
        let n = self.base.size();
        let first = match self.mode() {
            Mode::Monoid => 0,
            Mode::Semigroup => 1,
        };
        Ok((first..1u128 << n)
            .flat_map(|bits| {
                (0..n).map(move |m| UnaryElem {
                    set: Subset::from_bits(bits),
                    m,
                })
            })
            .collect())
    }

    /// Position of an element in [`UnarySchutz::elements`].
    pub fn index_of(&self, p: &UnaryElem) -> usize {
        let first = match self.mode() {
            Mode::Monoid => 0,
            Mode::Semigroup => 1,
        };
        (p.set.bits() - first) as usize * self.base.size() + p.m
    }

    pub fn label(&self, p: &UnaryElem) -> String {
        format!("({},{})", set_label(p.set, |x| self.base.label(x)), self.base.label(p.m))
    }

    /// The multiplication table, with labels `(S,m)`.
    pub fn materialize(&self, limits: &Limits) -> Result<FiniteMonoid> {
        let elems = self.elements(limits)?;
        let mut table = Vec::with_capacity(elems.len() * elems.len());
        for p in &elems {
            for q in &elems {
                table.push(self.index_of(&self.mul(p, q)));
            }
        }
        let identity = self.unit().map(|u| self.index_of(&u));
        let labels = elems.iter().map(|p| self.label(p)).collect();
        Ok(FiniteMonoid::from_trusted(elems.len(), table, identity, Some(labels)))
    }

    /// The actions `l` and `r` of `◇M` on the materialised carrier.
    pub fn biaction(&self, limits: &Limits) -> Result<Biaction> {
        let elems = self.elements(limits)?;
        Ok(Biaction::from_fns(
            elems.len(),
            elems.len(),
            |p, x| self.index_of(&self.left_action(&elems[p], &elems[x])),
            |p, x| self.index_of(&self.right_action(&elems[p], &elems[x])),
        ))
    }
}

/// `ξ: Σ* → ◇M`, `w ↦ ({τ(w^(i)) | i < |w|}, τ(w⁰))`, for a morphism `τ`
/// on the extended alphabet.
#[derive(Debug, Clone)]
pub struct Xi {
    ext: ExtendedAlphabet,
    tau: MonoidMorphism,
    schutz: UnarySchutz,
}

impl Xi {
    pub fn new(tau: MonoidMorphism) -> Result<Xi> {
        let ext = ExtendedAlphabet::from_extended(tau.alphabet())?;
        let schutz = UnarySchutz::new(tau.target().clone())?;
        Ok(Xi { ext, tau, schutz })
    }

    pub fn extended(&self) -> &ExtendedAlphabet {
        &self.ext
    }

    pub fn base_alphabet(&self) -> &Alphabet {
        self.ext.base()
    }

    pub fn tau(&self) -> &MonoidMorphism {
        &self.tau
    }

    pub fn schutz(&self) -> &UnarySchutz {
        &self.schutz
    }

    /// `ξ(a) = ({τ(a#1)}, τ(a#0))`.
    pub fn letter_image(&self, a: usize) -> UnaryElem {
        UnaryElem {
            set: Subset::singleton(self.tau.image(self.ext.letter(a, true))),
            m: self.tau.image(self.ext.letter(a, false)),
        }
    }

    /// Product of letter images.
    pub fn evaluate(&self, w: &Word) -> Result<UnaryElem> {
        w.check(self.ext.base())?;
        let mut it = w.iter().map(|&a| self.letter_image(a));
        let first = match it.next() {
            Some(p) => p,
            None => {
                return self.schutz.unit().ok_or_else(|| {
                    Error::Domain("the empty word has no image in semigroup mode".into())
                })
            }
        };
        Ok(it.fold(first, |acc, p| self.schutz.mul(&acc, &p)))
    }

    /// The defining formula, marking each position in turn.
    pub fn evaluate_direct(&self, w: &Word) -> Result<UnaryElem> {
        w.check(self.ext.base())?;
        let m = self.tau.evaluate(&self.ext.gamma0(w))?;
        let set = MarkedWord::all_of(w)
            .map(|mw| self.tau.evaluate(&self.ext.gamma1(&mw)))
            .collect::<Result<Subset>>()?;
        Ok(UnaryElem { set, m })
    }

    /// Whether `ξ(w) ∈ ◇V × M`.
    pub fn recognises_exists(&self, v: Subset, w: &Word) -> Result<bool> {
        if w.is_empty() {
            w.check(self.ext.base())?;
            return Ok(false);
        }
        Ok(self.evaluate(w)?.set.intersects(v))
    }

    /// The submonoid of `◇M` generated by the letter images.
    pub fn closure(&self, limits: &Limits) -> Result<Closure<UnaryElem>> {
        let gens: Vec<UnaryElem> = (0..self.ext.base().len()).map(|a| self.letter_image(a)).collect();
        closure(&gens, self.schutz.unit(), |p, q| self.schutz.mul(p, q), limits)
    }

    /// `ξ⁻¹(C × M)` for a hit/miss clopen `C`.
    pub fn recognised_language(&self, clopen: HitClopen, limits: &Limits) -> Result<Dfa> {
        let c = self.closure(limits)?;
        Ok(c.language(self.ext.base(), |e| clopen.contains(c.elements[e].set)))
    }

    /// `ξ⁻¹(P)` for an arbitrary predicate on `◇M`.
    pub fn language_where(&self, accept: impl Fn(&UnaryElem) -> bool, limits: &Limits) -> Result<Dfa> {
        let c = self.closure(limits)?;
        Ok(c.language(self.ext.base(), |e| accept(&c.elements[e])))
    }
}

/// An element `(S, m, n)` of `◇(M,N)`; pairs `(x, y)` are encoded as
/// `x·|N| + y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryElem {
    pub set: Subset,
    pub m: usize,
    pub n: usize,
}

/// `◇(M,N) = P(M×N) × M × N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySchutz {
    left: Arc<FiniteMonoid>,
    right: Arc<FiniteMonoid>,
}

impl BinarySchutz {
    pub fn new(left: Arc<FiniteMonoid>, right: Arc<FiniteMonoid>) -> Result<BinarySchutz> {
        if left.size() * right.size() > Subset::CAPACITY {
            return Err(Error::resource(format!(
                "|M×N| = {} exceeds the subset capacity {}",
                left.size() * right.size(),
                Subset::CAPACITY
            )));
        }
        if left.mode() != right.mode() {
            return Err(Error::precondition("both factors must be monoids or both semigroups"));
        }
        Ok(BinarySchutz { left, right })
    }

    pub fn left(&self) -> &Arc<FiniteMonoid> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteMonoid> {
        &self.right
    }

    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.right.size() + y
    }

    pub fn unpair(&self, p: usize) -> (usize, usize) {
        (p / self.right.size(), p % self.right.size())
    }

    /// `(∅, 1, 1)` in monoid mode.
    pub fn unit(&self) -> Option<BinaryElem> {
        Some(BinaryElem {
            set: Subset::empty(),
            m: self.left.identity()?,
            n: self.right.identity()?,
        })
    }

    /// `m·Z = {(mx, y) | (x,y) ∈ Z}`.
    pub fn left_mul_set(&self, m: usize, z: Subset) -> Subset {
        z.map(|p| {
            let (x, y) = self.unpair(p);
            self.pair(self.left.mul(m, x), y)
        })
    }

    /// `Z·n = {(x, yn) | (x,y) ∈ Z}`.
    pub fn right_mul_set(&self, z: Subset, n: usize) -> Subset {
        z.map(|p| {
            let (x, y) = self.unpair(p);
            self.pair(x, self.right.mul(y, n))
        })
    }

    /// `(S,m₁,n₁)·(T,m₂,n₂) = (m₁T ∪ Sn₂, m₁m₂, n₁n₂)`.
    pub fn mul(&self, p: &BinaryElem, q: &BinaryElem) -> BinaryElem {
        BinaryElem {
            set: self.left_mul_set(p.m, q.set).union(self.right_mul_set(p.set, q.n)),
            m: self.left.mul(p.m, q.m),
            n: self.right.mul(p.n, q.n),
        }
    }

    /// `λ_(S,m₁,n₁)(Z,x,y) = (m₁Z ∪ Sy, λ_m₁(x), λ_n₁(y))`.
    pub fn left_action(&self, p: &BinaryElem, point: &BinaryElem) -> BinaryElem {
        BinaryElem {
            set: self
                .left_mul_set(p.m, point.set)
                .union(self.right_mul_set(p.set, point.n)),
            m: self.left.mul(p.m, point.m),
            n: self.right.mul(p.n, point.n),
        }
    }

    /// `ρ_(S,m₁,n₁)(Z,x,y) = (Zn₁ ∪ xS, ρ_m₁(x), ρ_n₁(y))`.
    pub fn right_action(&self, p: &BinaryElem, point: &BinaryElem) -> BinaryElem {
        BinaryElem {
            set: self
                .right_mul_set(point.set, p.n)
                .union(self.left_mul_set(point.m, p.set)),
            m: self.left.mul(point.m, p.m),
            n: self.right.mul(point.n, p.n),
        }
    }

    pub fn carrier_size(&self) -> u128 {
        let pairs = (self.left.size() * self.right.size()) as u32;
        2u128
            .checked_pow(pairs)
            .unwrap_or(u128::MAX)
            .saturating_mul(pairs as u128)
    }

    /// Every element, ordered by subset bits, then `m`, then `n`.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<BinaryElem>> {
        let size = self.carrier_size();
        if size > limits.max_closure as u128 {
            return Err(Error::resource(format!(
                "◇(M,N) has {size} elements, above the bound {}",
                limits.max_closure
            )));
        }
        let (a, b) = (self.left.size(), self.right.size());
        let mut out = Vec::with_capacity(size as usize);
        for bits in 0..1u128 << (a * b) {
            for m in 0..a {
                for n in 0..b {
                    out.push(BinaryElem {
                        set: Subset::from_bits(bits),
                        m,
                        n,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn index_of(&self, p: &BinaryElem) -> usize {
        let pairs = self.left.size() * self.right.size();
        p.set.bits() as usize * pairs + self.pair(p.m, p.n)
    }

    pub fn label(&self, p: &BinaryElem) -> String {
        let s = set_label(p.set, |q| {
            let (x, y) = self.unpair(q);
            format!("({},{})", self.left.label(x), self.right.label(y))
        });
        format!("({},{},{})", s, self.left.label(p.m), self.right.label(p.n))
    }

    /// The multiplication table, with labels `(S,m,n)`.
    pub fn materialize(&self, limits: &Limits) -> Result<FiniteMonoid> {
        let elems = self.elements(limits)?;
        let mut table = Vec::with_capacity(elems.len() * elems.len());
        for p in &elems {
            for q in &elems {
                table.push(self.index_of(&self.mul(p, q)));
            }
        }
        let identity = self.unit().map(|u| self.index_of(&u));
        let labels = elems.iter().map(|p| self.label(p)).collect();
        Ok(FiniteMonoid::from_trusted(elems.len(), table, identity, Some(labels)))
    }

    pub fn biaction(&self, limits: &Limits) -> Result<Biaction> {
        let elems = self.elements(limits)?;
        Ok(Biaction::from_fns(
            elems.len(),
            elems.len(),
            |p, x| self.index_of(&self.left_action(&elems[p], &elems[x])),
            |p, x| self.index_of(&self.right_action(&elems[p], &elems[x])),
        ))
    }

    /// Closes the letter images of a morphism `Σ* → ◇(M,N)`.
    pub fn closure(&self, images: &[BinaryElem], limits: &Limits) -> Result<Closure<BinaryElem>> {
        closure(images, self.unit(), |p, q| self.mul(p, q), limits)
    }

    /// The morphism `w ↦ ({(φ₁(u), φ₂(v)) | w = uv, v ≠ ε}, φ₁(w), φ₂(w))`,
    /// given by its letter images `({(1, φ₂(b))}, φ₁(b), φ₂(b))`.
    pub fn concat_images(&self, phi1: &MonoidMorphism, phi2: &MonoidMorphism) -> Result<Vec<BinaryElem>> {
        check_pair(phi1, phi2)?;
        let one = self
            .left
            .identity()
            .ok_or_else(|| Error::precondition("concatenation needs monoid mode"))?;
        Ok((0..phi1.alphabet().len())
            .map(|b| BinaryElem {
                set: Subset::singleton(self.pair(one, phi2.image(b))),
                m: phi1.image(b),
                n: phi2.image(b),
            })
            .collect())
    }

    /// `L₁L₂` for `Lᵢ = φᵢ⁻¹(Vᵢ)`, read off the morphism of
    /// [`BinarySchutz::concat_images`]: some split with non-empty right part
    /// lands in `V₁×V₂`, or the whole word is in `L₁` and `ε ∈ L₂`.
    pub fn concatenation(
        &self,
        phi1: &MonoidMorphism,
        v1: Subset,
        phi2: &MonoidMorphism,
        v2: Subset,
        limits: &Limits,
    ) -> Result<Dfa> {
        let images = self.concat_images(phi1, phi2)?;
        let c = self.closure(&images, limits)?;
        let one = self.right.identity().expect("monoid mode");
        let target: Subset = v1
            .iter()
            .flat_map(|x| v2.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.pair(x, y))
            .collect();
        Ok(c.language(phi1.alphabet(), |e| {
            let p = &c.elements[e];
            p.set.intersects(target) || (v1.contains(p.m) && v2.contains(one))
        }))
    }
}

fn check_pair(phi1: &MonoidMorphism, phi2: &MonoidMorphism) -> Result<()> {
    if phi1.alphabet() != phi2.alphabet() {
        return Err(Error::input("morphisms over different alphabets"));
    }
    if phi1.mode() != Mode::Monoid || phi2.mode() != Mode::Monoid {
        return Err(Error::precondition("ζ_a is defined for monoid morphisms"));
    }
    Ok(())
}

/// `ζ_a(w) = {(φ₁(u), φ₂(v)) | w = uav}` as a set of encoded pairs.
pub fn zeta_a(phi1: &MonoidMorphism, phi2: &MonoidMorphism, a: usize, w: &Word) -> Result<Subset> {
    check_pair(phi1, phi2)?;
    let d = BinarySchutz::new(phi1.target().clone(), phi2.target().clone())?;
    let mut out = Subset::empty();
    for i in 0..w.len() {
        if w[i] == a {
            let u = phi1.evaluate(&w.prefix(i))?;
            let v = phi2.evaluate(&w.suffix_from(i + 1))?;
            out.insert(d.pair(u, v));
        }
    }
    Ok(out)
}

/// An element `((S_a)_a, m, n)` of `◇(M,N)^Σ` sharing the `M` and `N`
/// components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalElem {
    pub sets: Vec<Subset>,
    pub m: usize,
    pub n: usize,
}

/// The morphism `⟨⟨ζ_a⟩_a, φ₁, φ₂⟩`.
#[derive(Debug, Clone)]
pub struct LocalReutenauer {
    phi1: MonoidMorphism,
    phi2: MonoidMorphism,
    schutz: BinarySchutz,
}

impl LocalReutenauer {
    pub fn new(phi1: MonoidMorphism, phi2: MonoidMorphism) -> Result<LocalReutenauer> {
        check_pair(&phi1, &phi2)?;
        let schutz = BinarySchutz::new(phi1.target().clone(), phi2.target().clone())?;
        Ok(LocalReutenauer { phi1, phi2, schutz })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.phi1.alphabet()
    }

    pub fn schutz(&self) -> &BinarySchutz {
        &self.schutz
    }

    pub fn phi1(&self) -> &MonoidMorphism {
        &self.phi1
    }

    pub fn phi2(&self) -> &MonoidMorphism {
        &self.phi2
    }

    pub fn unit(&self) -> LocalElem {
        let u = self.schutz.unit().expect("monoid mode");
        LocalElem {
            sets: vec![Subset::empty(); self.alphabet().len()],
            m: u.m,
            n: u.n,
        }
    }

    /// Componentwise product in `◇(M,N)`.
    pub fn mul(&self, p: &LocalElem, q: &LocalElem) -> LocalElem {
        let sets = p
            .sets
            .iter()
            .zip(&q.sets)
            .map(|(&s, &t)| {
                self.schutz
                    .left_mul_set(p.m, t)
                    .union(self.schutz.right_mul_set(s, q.n))
            })
            .collect();
        LocalElem {
            sets,
            m: self.schutz.left().mul(p.m, q.m),
            n: self.schutz.right().mul(p.n, q.n),
        }
    }

    /// `ζ_a(b) = {(1,1)}` when `a = b`, `∅` otherwise.
    pub fn letter_image(&self, b: usize) -> LocalElem {
        let u = self.unit();
        let one = self.schutz.pair(u.m, u.n);
        LocalElem {
            sets: (0..self.alphabet().len())
                .map(|a| if a == b { Subset::singleton(one) } else { Subset::empty() })
                .collect(),
            m: self.phi1.image(b),
            n: self.phi2.image(b),
        }
    }

    pub fn evaluate(&self, w: &Word) -> Result<LocalElem> {
        w.check(self.alphabet())?;
        Ok(w.iter()
            .fold(self.unit(), |acc, &b| self.mul(&acc, &self.letter_image(b))))
    }

    /// The defining formula through [`zeta_a`].
    pub fn evaluate_direct(&self, w: &Word) -> Result<LocalElem> {
        let sets = (0..self.alphabet().len())
            .map(|a| zeta_a(&self.phi1, &self.phi2, a, w))
            .collect::<Result<_>>()?;
        Ok(LocalElem {
            sets,
            m: self.phi1.evaluate(w)?,
            n: self.phi2.evaluate(w)?,
        })
    }

    pub fn closure(&self, limits: &Limits) -> Result<Closure<LocalElem>> {
        let gens: Vec<LocalElem> = (0..self.alphabet().len()).map(|b| self.letter_image(b)).collect();
        closure(&gens, Some(self.unit()), |p, q| self.mul(p, q), limits)
    }

    /// Preimage of a predicate on the image.
    pub fn language_where(&self, accept: impl Fn(&LocalElem) -> bool, limits: &Limits) -> Result<Dfa> {
        let c = self.closure(limits)?;
        Ok(c.language(self.alphabet(), |e| accept(&c.elements[e])))
    }

    /// `L₁aL₂` through `hit(V₁×V₂)` on the `a` component.
    pub fn marked_concat(&self, v1: Subset, a: usize, v2: Subset, limits: &Limits) -> Result<Dfa> {
        let target: Subset = v1
            .iter()
            .flat_map(|x| v2.iter().map(move |y| (x, y)))
            .map(|(x, y)| self.schutz.pair(x, y))
            .collect();
        self.language_where(|p| p.sets[a].intersects(target), limits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::cyclic_group(2))
    }

    fn u1() -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::two_element_semilattice())
    }

    #[test]
    fn unary_mul_examples() {
        let d = UnarySchutz::new(z2()).unwrap();
        let p = UnaryElem { set: Subset::singleton(0), m: 1 };
        let q = UnaryElem { set: Subset::singleton(1), m: 0 };
        assert_eq!(d.mul(&p, &q), UnaryElem { set: Subset::singleton(0), m: 1 });
        assert_eq!(d.mul(&d.unit().unwrap(), &q), q);
        let d = UnarySchutz::new(u1()).unwrap();
        let p = UnaryElem { set: Subset::singleton(1), m: 0 };
        let q = UnaryElem { set: Subset::singleton(0), m: 1 };
        // S·n = {zz} = {z} and m·T = {1·1} = {1}.
        let both: Subset = [0usize, 1].into_iter().collect();
        assert_eq!(d.mul(&p, &q), UnaryElem { set: both, m: 1 });
    }

    #[test]
    fn unary_sizes() {
        let lim = Limits::default();
        let d = UnarySchutz::new(u1()).unwrap();
        assert_eq!(d.materialize(&lim).unwrap().size(), 8);
        let s = UnarySchutz::new(Arc::new(u1().as_semigroup())).unwrap();
        assert_eq!(s.materialize(&lim).unwrap().size(), 6);
        assert_eq!(s.carrier_size(), 6);
    }

    #[test]
    fn binary_mul_example() {
        let d = BinarySchutz::new(u1(), u1()).unwrap();
        let p = BinaryElem { set: Subset::singleton(d.pair(0, 0)), m: 1, n: 0 };
        let q = BinaryElem { set: Subset::empty(), m: 0, n: 1 };
        let r = BinaryElem { set: Subset::singleton(d.pair(0, 1)), m: 1, n: 1 };
        assert_eq!(d.mul(&p, &q), r);
        assert_eq!(d.materialize(&Limits::default()).unwrap().size(), 64);
    }

    #[test]
    fn xi_on_aa() {
        let a = Alphabet::parse_list("a").unwrap();
        let ext = ExtendedAlphabet::new(&a);
        // τ(a#0) = 0, τ(a#1) = 1.
        let tau = MonoidMorphism::new(ext.extended().clone(), z2(), vec![0, 1]).unwrap();
        let xi = Xi::new(tau).unwrap();
        let aa = a.parse_word("aa").unwrap();
        let expected = UnaryElem { set: Subset::singleton(1), m: 0 };
        assert_eq!(xi.evaluate(&aa).unwrap(), expected);
        assert_eq!(xi.evaluate_direct(&aa).unwrap(), expected);
        assert_eq!(xi.evaluate(&Word::empty()).unwrap(), xi.schutz().unit().unwrap());
    }

    #[test]
    fn zeta_on_aba() {
        let sigma = Alphabet::parse_list("a,b").unwrap();
        let phi = MonoidMorphism::new(sigma.clone(), z2(), vec![1, 0]).unwrap();
        let w = sigma.parse_word("aba").unwrap();
        let z = zeta_a(&phi, &phi, 0, &w).unwrap();
        // Splits ε·a·ba and ab·a·ε: pairs (0, 1) and (1, 0).
        assert_eq!(z, [1usize, 2].into_iter().collect());
        assert!(zeta_a(&phi, &phi, 1, &sigma.parse_word("aa").unwrap()).unwrap().is_empty());
        let one = zeta_a(&phi, &phi, 0, &sigma.parse_word("a").unwrap()).unwrap();
        assert_eq!(one, Subset::singleton(0));
    }

    #[test]
    fn hit_miss_duality() {
        let v = Subset::singleton(1);
        let miss = HitClopen::miss(v);
        for bits in 0..8u128 {
            let s = Subset::from_bits(bits);
            assert_eq!(miss.contains(s), !miss.complement(3).contains(s));
        }
    }
}
