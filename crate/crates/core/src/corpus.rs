//! Seeded generators for test and verification instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::error::Result;
use crate::monoid::{FiniteMonoid, Mode};
use crate::regex::Regex;
use crate::subset::Subset;

/// The generator for instance `index` of a campaign seeded with `seed`.
/// Instances are independent of each other and of evaluation order.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A random expression with roughly `size` internal nodes. Complement and
/// intersection are rare so that languages stay varied.
pub fn random_regex<R: Rng>(rng: &mut R, alphabet: &Alphabet, size: usize) -> Regex {
    if size == 0 {
        return match rng.gen_range(0..10) {
            0 => Regex::Epsilon,
            1 => Regex::Empty,
            _ => Regex::letter(alphabet.name(rng.gen_range(0..alphabet.len()))),
        };
    }
    match rng.gen_range(0..12) {
        0..=3 => {
            let left = rng.gen_range(0..size);
            random_regex(rng, alphabet, left).concat(random_regex(rng, alphabet, size - 1 - left))
        }
        4..=6 => {
            let left = rng.gen_range(0..size);
            random_regex(rng, alphabet, left).union(random_regex(rng, alphabet, size - 1 - left))
        }
        7..=9 => random_regex(rng, alphabet, size - 1).star(),
        10 => random_regex(rng, alphabet, size - 1).complement(),
        _ => {
            let left = rng.gen_range(0..size);
            random_regex(rng, alphabet, left).intersection(random_regex(rng, alphabet, size - 1 - left))
        }
    }
}

/// A uniformly random complete automaton with `states` states, canonicalised.
pub fn random_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Dfa {
    let transitions: Vec<Vec<usize>> = (0..states)
        .map(|_| (0..alphabet.len()).map(|_| rng.gen_range(0..states)).collect())
        .collect();
    let accepting: Vec<bool> = (0..states).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::from_parts(alphabet.clone(), 0, &transitions, &accepting).expect("well-formed by construction")
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Subset {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Every associative table of each size up to `max_size`.
pub fn small_monoids(max_size: usize, mode: Mode) -> Result<Vec<FiniteMonoid>> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(FiniteMonoid::enumerate(size, mode)?);
    }
    Ok(out)
}

pub fn pick<'a, T, R: Rng>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("non-empty choice")
}

/// Twenty fixed languages over `{a, b}` used by property checks.
pub fn standard_corpus() -> (Alphabet, Vec<Dfa>) {
    let sigma = Alphabet::parse_list("a,b").expect("valid alphabet");
    let sources = [
        "∅",
        "ε",
        "Σ*",
        "Σ* a Σ*",
        "Σ* b Σ*",
        "a Σ*",
        "Σ* a",
        "(a b)*",
        "(a a)*",
        "a* b*",
        "b* a b*",
        "Σ* a b Σ*",
        "Σ* a a Σ*",
        "(Σ Σ)*",
        "a* | b*",
        "~(Σ* b b Σ*)",
        "Σ* a Σ Σ",
        "(a | b a)*",
        "b (a b)* a",
        "(Σ* a Σ* a)* b*",
    ];
    let dfas = sources
        .iter()
        .map(|s| {
            Regex::parse(s)
                .and_then(|r| r.to_dfa(&sigma))
                .expect("corpus expressions are valid")
        })
        .collect();
    (sigma, dfas)
}
