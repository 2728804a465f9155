//! Marked words, the extended alphabet `Σ×2` and existential projection.

use std::fmt;

use crate::alphabet::{Alphabet, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};

/// `Σ×2`, with letters rendered `<name>#0` and `<name>#1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedAlphabet {
    base: Alphabet,
    extended: Alphabet,
    /// For each extended letter, its base letter and mark bit.
    split: Vec<(usize, bool)>,
    /// Inverse of `split`, indexed by `2 * base + bit`.
    join: Vec<usize>,
}

impl ExtendedAlphabet {
    /// Extended letters ordered `a#0, a#1, b#0, b#1, ...`.
    pub fn new(base: &Alphabet) -> ExtendedAlphabet {
        let names = base
            .letters()
            .iter()
            .flat_map(|n| [format!("{n}#0"), format!("{n}#1")]);
        let extended = Alphabet::new(names).expect("tagged names are distinct");
        let split = (0..2 * base.len()).map(|x| (x / 2, x % 2 == 1)).collect();
        ExtendedAlphabet {
            base: base.clone(),
            extended,
            join: (0..2 * base.len()).collect(),
            split,
        }
    }

    /// Recognises an alphabet of tagged letters in any order. The base
    /// letters are ordered by first appearance.
    pub fn from_extended(extended: &Alphabet) -> Result<ExtendedAlphabet> {
        let mut base_names: Vec<String> = Vec::new();
        let mut tagged = Vec::with_capacity(extended.len());
        for name in extended.letters() {
            let (stem, bit) = match name.rsplit_once('#') {
                Some((stem, "0")) if !stem.is_empty() => (stem, false),
                Some((stem, "1")) if !stem.is_empty() => (stem, true),
                _ => {
                    return Err(Error::input(format!(
                        "{name} is not a letter of the form <name>#0 or <name>#1"
                    )))
                }
            };
            let b = match base_names.iter().position(|n| n == stem) {
                Some(b) => b,
                None => {
                    base_names.push(stem.to_string());
                    base_names.len() - 1
                }
            };
            tagged.push((b, bit));
        }
        let base = Alphabet::new(base_names)?;
        let mut join = vec![usize::MAX; 2 * base.len()];
        for (x, &(b, bit)) in tagged.iter().enumerate() {
            join[2 * b + bit as usize] = x;
        }
        if join.contains(&usize::MAX) || extended.len() != 2 * base.len() {
            return Err(Error::input(format!(
                "{extended} does not contain both tags of every base letter"
            )));
        }
        Ok(ExtendedAlphabet {
            base,
            extended: extended.clone(),
            split: tagged,
            join,
        })
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn extended(&self) -> &Alphabet {
        &self.extended
    }

    pub fn letter(&self, base: usize, marked: bool) -> usize {
        self.join[2 * base + marked as usize]
    }

    pub fn split(&self, letter: usize) -> (usize, bool) {
        self.split[letter]
    }

    /// `w⁰`: every letter tagged 0.
    pub fn gamma0(&self, w: &Word) -> Word {
        w.iter().map(|&a| self.letter(a, false)).collect()
    }

    /// `w^(i)`: the marked position tagged 1, every other position 0.
    pub fn gamma1(&self, mw: &MarkedWord) -> Word {
        mw.word
            .iter()
            .enumerate()
            .map(|(j, &a)| self.letter(a, j == mw.position))
            .collect()
    }

    /// Images of the base letters under `γ₀`, as a letter-to-word morphism.
    pub fn gamma0_images(&self) -> Vec<Word> {
        (0..self.base.len())
            .map(|a| Word::from(vec![self.letter(a, false)]))
            .collect()
    }

    /// Erases tags, on arbitrary words over `Σ×2`.
    pub fn erase(&self, w: &Word) -> Word {
        w.iter().map(|&x| self.split(x).0).collect()
    }

    /// Inverse of `γ₁` on words with exactly one mark.
    pub fn unmark(&self, w: &Word) -> Option<MarkedWord> {
        let marks: Vec<usize> = (0..w.len()).filter(|&j| self.split(w[j]).1).collect();
        match marks[..] {
            [i] => Some(MarkedWord {
                word: self.erase(w),
                position: i,
            }),
            _ => None,
        }
    }

    /// `(Σ×{0})*(Σ×{1})(Σ×{0})*`, the range of `γ₁`.
    pub fn one_mark(&self) -> Dfa {
        let k = self.extended.len();
        // 0: no mark yet, 1: one mark, 2: more than one.
        let mut delta = Vec::with_capacity(3 * k);
        for s in 0..3 {
            for x in 0..k {
                let marked = self.split(x).1;
                delta.push(match (s, marked) {
                    (s, false) => s,
                    (0, true) => 1,
                    _ => 2,
                });
            }
        }
        Dfa::from_raw(self.extended.clone(), 0, &delta, &[false, true, false])
    }

    /// `L_∃ = π[γ₁⁻¹(L)]`: restrict to one-mark words, forget tags
    /// nondeterministically, determinise.
    pub fn exists_projection(&self, l: &Dfa) -> Result<Dfa> {
        if l.alphabet() != &self.extended {
            return Err(Error::input(format!(
                "language over {} is not over the extended alphabet {}",
                l.alphabet(),
                self.extended
            )));
        }
        let restricted = l.intersection(&self.one_mark())?;
        let map: Vec<Vec<usize>> = (0..self.extended.len()).map(|x| vec![self.split(x).0]).collect();
        restricted.relabel(&self.base, &map)
    }
}

/// A word with a marked position, `0 ≤ position < |word|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedWord {
    word: Word,
    position: usize,
}

impl MarkedWord {
    pub fn new(word: Word, position: usize) -> Result<MarkedWord> {
        if position >= word.len() {
            return Err(Error::Domain(format!(
                "position {position} is not inside a word of length {}",
                word.len()
            )));
        }
        Ok(MarkedWord { word, position })
    }

    /// Parses `w@i`, e.g. `bab@0`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<MarkedWord> {
        let (w, i) = text
            .rsplit_once('@')
            .ok_or_else(|| Error::input(format!("expected <word>@<position>, found {text:?}")))?;
        let position = i
            .trim()
            .parse()
            .map_err(|_| Error::input(format!("bad position {i:?}")))?;
        MarkedWord::new(alphabet.parse_word(w)?, position).map_err(|e| Error::Input(e.to_string()))
    }

    /// Every marking of `w`.
    pub fn all_of(w: &Word) -> impl Iterator<Item = MarkedWord> + '_ {
        (0..w.len()).map(move |i| MarkedWord {
            word: w.clone(),
            position: i,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn marked_letter(&self) -> usize {
        self.word[self.position]
    }

    /// `π`: forgets the mark.
    pub fn project(&self) -> Word {
        self.word.clone()
    }

    /// `λ_v(w,i) = (vw, i+|v|)`.
    pub fn left_act(&self, v: &Word) -> MarkedWord {
        MarkedWord {
            word: v.concat(&self.word),
            position: self.position + v.len(),
        }
    }

    /// `ρ_v(w,i) = (wv, i)`.
    pub fn right_act(&self, v: &Word) -> MarkedWord {
        MarkedWord {
            word: self.word.concat(v),
            position: self.position,
        }
    }

    /// `f_a`: the marked letter replaced by `a`.
    pub fn f_a(&self, a: usize) -> Word {
        let mut letters = self.word.letters().to_vec();
        letters[self.position] = a;
        Word::from(letters)
    }

    /// `f_r`: the prefix strictly before the mark.
    pub fn f_r(&self) -> Word {
        self.word.prefix(self.position)
    }

    /// The suffix strictly after the mark.
    pub fn suffix(&self) -> Word {
        self.word.suffix_from(self.position + 1)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        struct D<'a>(&'a MarkedWord, &'a Alphabet);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}@{}", self.1.render(&self.0.word), self.0.position)
            }
        }
        D(self, alphabet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::Regex;

    fn ab() -> Alphabet {
        Alphabet::parse_list("a,b").unwrap()
    }

    #[test]
    fn gamma_maps() {
        let x = ExtendedAlphabet::new(&ab());
        let w = ab().parse_word("ab").unwrap();
        assert_eq!(x.extended().render(&x.gamma0(&w)), "a#0 b#0");
        let mw = MarkedWord::new(w, 0).unwrap();
        assert_eq!(x.extended().render(&x.gamma1(&mw)), "a#1 b#0");
        assert_eq!(x.gamma0(&Word::empty()), Word::empty());
        assert_eq!(x.unmark(&x.gamma1(&mw)), Some(mw));
    }

    #[test]
    fn marked_word_maps() {
        let sigma = ab();
        let mw = MarkedWord::parse("bab@0", &sigma).unwrap();
        assert_eq!(sigma.render(&mw.f_a(0)), "aab");
        let mw = MarkedWord::parse("bab@2", &sigma).unwrap();
        assert_eq!(sigma.render(&mw.f_r()), "ba");
        assert!(MarkedWord::parse("ab@2", &sigma).is_err());
        assert!(MarkedWord::new(Word::empty(), 0).is_err());
        let v = sigma.parse_word("ba").unwrap();
        let moved = mw.left_act(&v);
        assert_eq!((sigma.render(moved.word()), moved.position()), ("babab".into(), 4));
        assert_eq!(mw.right_act(&v).position(), 2);
    }

    #[test]
    fn exists_projection_examples() {
        let sigma = ab();
        let x = ExtendedAlphabet::new(&sigma);
        let ext = x.extended();
        let l = Regex::parse("(a#0|b#0)* a#1 (a#0|b#0)*").unwrap().to_dfa(ext).unwrap();
        let expected = Regex::parse("Σ* a Σ*").unwrap().to_dfa(&sigma).unwrap();
        assert_eq!(x.exists_projection(&l).unwrap(), expected);
        assert_eq!(x.exists_projection(&Dfa::empty(ext)).unwrap(), Dfa::empty(&sigma));
        assert_eq!(x.exists_projection(&Dfa::universal(ext)).unwrap(), Dfa::plus(&sigma));
        assert!(matches!(x.exists_projection(&expected), Err(Error::Input(_))));
    }

    #[test]
    fn recognises_permuted_extension() {
        let ext = Alphabet::parse_list("b#1,a#0,a#1,b#0").unwrap();
        let x = ExtendedAlphabet::from_extended(&ext).unwrap();
        assert_eq!(x.base().letters(), ["b", "a"]);
        assert_eq!(x.letter(1, true), 2);
        assert!(ExtendedAlphabet::from_extended(&Alphabet::parse_list("a#0,b#1").unwrap()).is_err());
    }
}
