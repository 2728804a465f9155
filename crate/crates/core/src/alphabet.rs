use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite, ordered alphabet of named letters.
///
/// The order of the letters is significant: it fixes letter indices and
/// the breadth-first numbering of canonical automata.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::input("alphabet must contain at least one letter"));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::input("letter names must be non-empty"));
            }
            if letters[..i].contains(l) {
                return Err(Error::input(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet(letters.into()))
    }

    /// Parses a comma separated list such as `a,b`.
    pub fn parse_list(spec: &str) -> Result<Self> {
        Alphabet::new(spec.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, letter: usize) -> &str {
        &self.0[letter]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|l| l == name)
    }

    pub fn letter(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::input(format!("unknown letter `{name}`")))
    }

    fn single_char_names(&self) -> bool {
        self.0.iter().all(|l| l.chars().count() == 1)
    }

    /// Renders a word; letters are juxtaposed when every name is a single
    /// character and space separated otherwise. The empty word prints as `ε`.
    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.single_char_names() { "" } else { " " };
        word.iter()
            .map(|&l| self.name(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses a word. Whitespace separated tokens are looked up one by one;
    /// otherwise the text is split greedily by longest matching letter name.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        if text.contains(char::is_whitespace) {
            return text
                .split_whitespace()
                .map(|tok| self.letter(tok))
                .collect::<Result<Vec<_>>>()
                .map(Word::from);
        }
        let mut letters = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .0
                .iter()
                .enumerate()
                .filter(|(_, l)| rest.starts_with(l.as_str()))
                .max_by_key(|(_, l)| l.len())
                .ok_or_else(|| Error::input(format!("cannot read a letter at `{rest}`")))?;
            letters.push(best.0);
            rest = &rest[best.1.len()..];
        }
        Ok(Word(letters))
    }

    /// All words of length at most `max_len`, in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for a in 0..self.len() {
                    next.push(w.pushed(a));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<String>::deserialize(d)?;
        Alphabet::new(letters).map_err(serde::de::Error::custom)
    }
}

/// A finite word, stored as letter indices into some [`Alphabet`].
///
/// A word doubles as its principal ultrafilter in every finite-quotient
/// computation of the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<usize> {
        self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, letter: usize) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }

    /// Checks every letter index against an alphabet size.
    pub fn check(&self, alphabet: &Alphabet) -> Result<()> {
        match self.0.iter().find(|&&l| l >= alphabet.len()) {
            Some(l) => Err(Error::input(format!(
                "letter index {l} out of range for alphabet {alphabet}"
            ))),
            None => Ok(()),
        }
    }
}

impl std::ops::Deref for Word {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl From<&[usize]> for Word {
    fn from(v: &[usize]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<usize> for Word {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}
