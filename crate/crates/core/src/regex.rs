//! Regular expression syntax over named letters.
//!
//! ```text
//! ∅ or 0          empty language
//! ε or 1          empty word
//! Σ               any single letter
//! a  a#1  "ab"    letters (quote names that are not a single character
//!                 optionally followed by `#<digits>` tags)
//! r s  or  r.s    concatenation
//! r|s   r&s   ~r  r*   union, intersection, complement, star
//! ```
//!
//! Precedence, loosest first: `|`, `&`, concatenation, `~`, `*`.

use std::fmt;

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    /// Any single letter of the governing alphabet.
    Any,
    Letter(String),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Intersection(Box<Regex>, Box<Regex>),
    Complement(Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn letter(name: impl Into<String>) -> Regex {
        Regex::Letter(name.into())
    }

    pub fn concat(self, other: Regex) -> Regex {
        Regex::Concat(Box::new(self), Box::new(other))
    }

    pub fn union(self, other: Regex) -> Regex {
        Regex::Union(Box::new(self), Box::new(other))
    }

    pub fn intersection(self, other: Regex) -> Regex {
        Regex::Intersection(Box::new(self), Box::new(other))
    }

    pub fn complement(self) -> Regex {
        Regex::Complement(Box::new(self))
    }

    pub fn star(self) -> Regex {
        Regex::Star(Box::new(self))
    }

    pub fn parse(text: &str) -> Result<Regex> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let r = p.union()?;
        if p.pos != p.tokens.len() {
            return Err(Error::input(format!(
                "unexpected `{}` in regex `{text}`",
                p.tokens[p.pos]
            )));
        }
        Ok(r)
    }

    /// Checks that every letter occurs in `alphabet`.
    pub fn check(&self, alphabet: &Alphabet) -> Result<()> {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Any => Ok(()),
            Regex::Letter(l) => alphabet.letter(l).map(|_| ()),
            Regex::Concat(x, y) | Regex::Union(x, y) | Regex::Intersection(x, y) => {
                x.check(alphabet)?;
                y.check(alphabet)
            }
            Regex::Complement(x) | Regex::Star(x) => x.check(alphabet),
        }
    }

    /// Compiles to the canonical automaton of the denoted language.
    pub fn to_dfa(&self, alphabet: &Alphabet) -> Result<Dfa> {
        self.check(alphabet)?;
        Ok(self.compile(alphabet))
    }

    fn compile(&self, sigma: &Alphabet) -> Dfa {
        let binary = "operands share the alphabet";
        match self {
            Regex::Empty => Dfa::empty(sigma),
            Regex::Epsilon => Dfa::epsilon(sigma),
            Regex::Any => (0..sigma.len()).fold(Dfa::empty(sigma), |acc, a| {
                acc.union(&Dfa::epsilon(sigma).marked_concat(a, &Dfa::epsilon(sigma)))
                    .expect(binary)
            }),
            Regex::Letter(l) => {
                let a = sigma.index_of(l).expect("checked letter");
                Dfa::epsilon(sigma).marked_concat(a, &Dfa::epsilon(sigma))
            }
            Regex::Concat(x, y) => x.compile(sigma).concat(&y.compile(sigma)).expect(binary),
            Regex::Union(x, y) => x.compile(sigma).union(&y.compile(sigma)).expect(binary),
            Regex::Intersection(x, y) => {
                x.compile(sigma).intersection(&y.compile(sigma)).expect(binary)
            }
            Regex::Complement(x) => x.compile(sigma).complement(),
            Regex::Star(x) => x.compile(sigma).star(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Intersection(..) => 1,
            Regex::Concat(..) => 2,
            Regex::Complement(..) => 3,
            Regex::Star(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Regex::Empty => write!(f, "∅"),
            Regex::Epsilon => write!(f, "ε"),
            Regex::Any => write!(f, "Σ"),
            Regex::Letter(l) => {
                if is_bare_letter(l) {
                    write!(f, "{l}")
                } else {
                    write!(f, "\"{l}\"")
                }
            }
            Regex::Union(x, y) => {
                x.fmt_prec(f, 0)?;
                write!(f, "|")?;
                y.fmt_prec(f, 1)
            }
            Regex::Intersection(x, y) => {
                x.fmt_prec(f, 1)?;
                write!(f, "&")?;
                y.fmt_prec(f, 2)
            }
            Regex::Concat(x, y) => {
                x.fmt_prec(f, 2)?;
                write!(f, " ")?;
                y.fmt_prec(f, 3)
            }
            Regex::Complement(x) => {
                write!(f, "~")?;
                x.fmt_prec(f, 3)
            }
            Regex::Star(x) => {
                x.fmt_prec(f, 5)?;
                write!(f, "*")
            }
        }
    }

    /// Recovers a regular expression from an automaton by state
    /// elimination. The result is informational; it is not canonical.
    pub fn from_dfa(dfa: &Dfa) -> Regex {
        let n = dfa.state_count();
        let (start, fin) = (n, n + 1);
        let size = n + 2;
        let mut edge: Vec<Vec<Regex>> = vec![vec![Regex::Empty; size]; size];
        let sigma = dfa.alphabet();
        for s in 0..n {
            for a in 0..sigma.len() {
                let t = dfa.next(s, a);
                let cur = std::mem::replace(&mut edge[s][t], Regex::Empty);
                edge[s][t] = smart_union(cur, Regex::letter(sigma.name(a)));
            }
            if dfa.is_accepting(s) {
                edge[s][fin] = Regex::Epsilon;
            }
        }
        edge[start][0] = Regex::Epsilon;
        for k in 0..n {
            let loop_k = smart_star(edge[k][k].clone());
            for i in (0..size).filter(|&i| i != k) {
                if edge[i][k] == Regex::Empty {
                    continue;
                }
                for j in (0..size).filter(|&j| j != k) {
                    if edge[k][j] == Regex::Empty {
                        continue;
                    }
                    let through = smart_concat(
                        smart_concat(edge[i][k].clone(), loop_k.clone()),
                        edge[k][j].clone(),
                    );
                    let cur = std::mem::replace(&mut edge[i][j], Regex::Empty);
                    edge[i][j] = smart_union(cur, through);
                }
            }
            for i in 0..size {
                edge[i][k] = Regex::Empty;
                edge[k][i] = Regex::Empty;
            }
        }
        edge[start][fin].clone()
    }
}

fn smart_union(x: Regex, y: Regex) -> Regex {
    match (x, y) {
        (Regex::Empty, r) | (r, Regex::Empty) => r,
        (x, y) if x == y => x,
        (x, y) => x.union(y),
    }
}

fn smart_concat(x: Regex, y: Regex) -> Regex {
    match (x, y) {
        (Regex::Empty, _) | (_, Regex::Empty) => Regex::Empty,
        (Regex::Epsilon, r) | (r, Regex::Epsilon) => r,
        (x, y) => x.concat(y),
    }
}

fn smart_star(x: Regex) -> Regex {
    match x {
        Regex::Empty | Regex::Epsilon => Regex::Epsilon,
        r @ Regex::Star(_) => r,
        r => r.star(),
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl std::str::FromStr for Regex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Regex> {
        Regex::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Empty,
    Epsilon,
    Any,
    Letter(String),
    Op(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Empty => write!(f, "∅"),
            Token::Epsilon => write!(f, "ε"),
            Token::Any => write!(f, "Σ"),
            Token::Letter(l) => write!(f, "{l}"),
            Token::Op(c) => write!(f, "{c}"),
        }
    }
}

fn is_letter_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_bare_letter(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !is_letter_char(first) || matches!(first, '0' | '1' | 'ε' | 'Σ' | '∅') {
        return false;
    }
    let rest: String = chars.collect();
    if rest.is_empty() {
        return true;
    }
    rest.split('#').skip(1).all(|tag| !tag.is_empty() && tag.chars().all(|c| c.is_ascii_digit()))
        && rest.starts_with('#')
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '∅' | '0' => {
                out.push(Token::Empty);
                i += 1;
            }
            'ε' | '1' => {
                out.push(Token::Epsilon);
                i += 1;
            }
            'Σ' => {
                out.push(Token::Any);
                i += 1;
            }
            '|' | '&' | '~' | '*' | '(' | ')' | '.' => {
                out.push(Token::Op(c));
                i += 1;
            }
            '"' | '\'' => {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&d| d == c)
                    .ok_or_else(|| Error::input("unterminated quoted letter"))?;
                let name: String = chars[i + 1..i + 1 + end].iter().collect();
                if name.is_empty() {
                    return Err(Error::input("empty quoted letter"));
                }
                out.push(Token::Letter(name));
                i += end + 2;
            }
            _ if is_letter_char(c) => {
                let mut name = c.to_string();
                i += 1;
                while i + 1 < chars.len() && chars[i] == '#' && chars[i + 1].is_ascii_digit() {
                    name.push('#');
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        name.push(chars[i]);
                        i += 1;
                    }
                }
                out.push(Token::Letter(name));
            }
            _ => return Err(Error::input(format!("unexpected character `{c}` in regex"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn union(&mut self) -> Result<Regex> {
        let mut r = self.inter()?;
        while self.eat('|') {
            r = r.union(self.inter()?);
        }
        Ok(r)
    }

    fn inter(&mut self) -> Result<Regex> {
        let mut r = self.concat()?;
        while self.eat('&') {
            r = r.intersection(self.concat()?);
        }
        Ok(r)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token::Empty | Token::Epsilon | Token::Any | Token::Letter(_))
                | Some(Token::Op('(' | '~'))
        )
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut r = self.unary()?;
        loop {
            if self.eat('.') {
                r = r.concat(self.unary()?);
            } else if self.starts_atom() {
                r = r.concat(self.unary()?);
            } else {
                return Ok(r);
            }
        }
    }

    fn unary(&mut self) -> Result<Regex> {
        if self.eat('~') {
            return Ok(self.unary()?.complement());
        }
        let mut r = self.atom()?;
        while self.eat('*') {
            r = r.star();
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::input("unexpected end of regex"))?;
        self.pos += 1;
        match tok {
            Token::Empty => Ok(Regex::Empty),
            Token::Epsilon => Ok(Regex::Epsilon),
            Token::Any => Ok(Regex::Any),
            Token::Letter(l) => Ok(Regex::Letter(l)),
            Token::Op('(') => {
                let r = self.union()?;
                if !self.eat(')') {
                    return Err(Error::input("missing `)`"));
                }
                Ok(r)
            }
            other => Err(Error::input(format!("unexpected `{other}` in regex"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse_list("a,b").unwrap()
    }

    #[test]
    fn parses_precedence() {
        let r = Regex::parse("a b*|~a&b").unwrap();
        let expected = Regex::letter("a")
            .concat(Regex::letter("b").star())
            .union(Regex::letter("a").complement().intersection(Regex::letter("b")));
        assert_eq!(r, expected);
        assert_eq!(Regex::parse("a.b").unwrap(), Regex::parse("ab").unwrap());
    }

    #[test]
    fn parses_extended_letters() {
        let r = Regex::parse("a#0* b#1 (a#0|b#0)*").unwrap();
        let ext = Alphabet::new(["a#0", "a#1", "b#0", "b#1"]).unwrap();
        let d = r.to_dfa(&ext).unwrap();
        assert!(d.accepts(&[0, 3, 2, 0]));
        assert!(!d.accepts(&[1, 3]));
        assert_eq!(Regex::parse("\"ab\"").unwrap(), Regex::letter("ab"));
    }

    #[test]
    fn unknown_letter_is_input_error() {
        let err = Regex::parse("c").unwrap().to_dfa(&ab()).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        assert!(Regex::parse("(a").is_err());
        assert!(Regex::parse("a|").is_err());
    }

    #[test]
    fn constants() {
        let sigma = ab();
        let empty = Regex::parse("∅").unwrap().to_dfa(&sigma).unwrap();
        assert_eq!(empty.state_count(), 1);
        assert!(empty.is_empty());
        assert_eq!(
            Regex::parse("~(∅)").unwrap().to_dfa(&sigma).unwrap(),
            Dfa::universal(&sigma)
        );
        assert_eq!(Regex::parse("0").unwrap(), Regex::Empty);
        assert_eq!(Regex::parse("1").unwrap(), Regex::Epsilon);
    }

    #[test]
    fn display_round_trips() {
        for text in ["a (b|a)*", "~(a b)&b*", "\"x y\" a#1", "(a|b)*", "a|b&a"] {
            let r = Regex::parse(text).unwrap();
            assert_eq!(Regex::parse(&r.to_string()).unwrap(), r, "{text}");
        }
    }

    #[test]
    fn state_elimination_preserves_language() {
        let sigma = ab();
        for text in ["a(a|b)*", "(ab)*", "~(Σ*aaΣ*)", "∅", "ε", "b*a b*"] {
            let d = Regex::parse(text).unwrap().to_dfa(&sigma).unwrap();
            let back = Regex::from_dfa(&d).to_dfa(&sigma).unwrap();
            assert_eq!(back, d, "{text}");
        }
    }
}
