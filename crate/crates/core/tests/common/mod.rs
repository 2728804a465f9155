//! Oracles that share no code with the library's automata: regex matching
//! by span tables, and brute-force language comparisons on bounded words.
#![allow(dead_code)]

use std::collections::BTreeSet;

use schutz_core::{Alphabet, Dfa, Regex, Word};

/// Set of spans `(i, j)` of `w` matched by `r`, as a `(n+1)×(n+1)` table.
fn spans(r: &Regex, alphabet: &Alphabet, w: &[usize]) -> Vec<Vec<bool>> {
    let n = w.len();
    let mut t = vec![vec![false; n + 1]; n + 1];
    match r {
        Regex::Empty => {}
        Regex::Epsilon => (0..=n).for_each(|i| t[i][i] = true),
        Regex::Any => (0..n).for_each(|i| t[i][i + 1] = true),
        Regex::Letter(name) => {
            let x = alphabet.index_of(name).expect("letter in alphabet");
            (0..n).filter(|&i| w[i] == x).for_each(|i| t[i][i + 1] = true);
        }
        Regex::Concat(a, b) => {
            let (sa, sb) = (spans(a, alphabet, w), spans(b, alphabet, w));
            for i in 0..=n {
                for k in i..=n {
                    if sa[i][k] {
                        for j in k..=n {
                            t[i][j] |= sb[k][j];
                        }
                    }
                }
            }
        }
        Regex::Union(a, b) | Regex::Intersection(a, b) => {
            let (sa, sb) = (spans(a, alphabet, w), spans(b, alphabet, w));
            let both = matches!(r, Regex::Intersection(..));
            for i in 0..=n {
                for j in i..=n {
                    t[i][j] = if both { sa[i][j] && sb[i][j] } else { sa[i][j] || sb[i][j] };
                }
            }
        }
        Regex::Complement(a) => {
            let sa = spans(a, alphabet, w);
            for i in 0..=n {
                for j in i..=n {
                    t[i][j] = !sa[i][j];
                }
            }
        }
        Regex::Star(a) => {
            let sa = spans(a, alphabet, w);
            for i in 0..=n {
                t[i][i] = true;
            }
            for len in 1..=n {
                for i in 0..=n - len {
                    let j = i + len;
                    t[i][j] = (i + 1..=j).any(|k| sa[i][k] && t[k][j]);
                }
            }
        }
    }
    t
}

pub fn regex_matches(r: &Regex, alphabet: &Alphabet, w: &[usize]) -> bool {
    spans(r, alphabet, w)[0][w.len()]
}

/// All words of length at most `max_len`, built here rather than by the library.
pub fn words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut v: Vec<usize> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.into_iter().map(Word::from).collect()
}

pub fn accepted(d: &Dfa, max_len: usize) -> BTreeSet<Word> {
    words(d.alphabet().len(), max_len).into_iter().filter(|w| d.accepts(w)).collect()
}

pub fn same_on_words(d: &Dfa, pred: impl Fn(&[usize]) -> bool, max_len: usize) -> Option<Word> {
    words(d.alphabet().len(), max_len)
        .into_iter()
        .find(|w| d.accepts(w) != pred(w))
}

pub fn dfa(text: &str, alphabet: &Alphabet) -> Dfa {
    Regex::parse(text).unwrap().to_dfa(alphabet).unwrap()
}

pub fn ab() -> Alphabet {
    Alphabet::parse_list("a,b").unwrap()
}

pub fn w(alphabet: &Alphabet, text: &str) -> Word {
    alphabet.parse_word(text).unwrap()
}
