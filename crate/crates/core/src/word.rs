//! Finite words over a small alphabet.
//!
//! Symbols are `u8` values `0..p-1` and render as the digits `'0'..'9'`, so
//! alphabets are capped at ten symbols. Every textual interface of the crate
//! (config files, CLI output, test fixtures) uses this digit form.

use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

pub type Symbol = u8;

/// Alphabet `{0, .., size-1}` with `2 <= size <= 10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    size: u8,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=10).contains(&size) {
            return Err(Error::domain(format!(
                "alphabet size must be between 2 and 10, got {size}"
            )));
        }
        Ok(Alphabet { size: size as u8 })
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.size
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s < self.size
    }

    /// Number of words of the given length, saturating at `u128::MAX`.
    pub fn word_count(&self, len: usize) -> u128 {
        u32::try_from(len)
            .ok()
            .and_then(|e| (self.size as u128).checked_pow(e))
            .unwrap_or(u128::MAX)
    }
}

/// A finite word; the empty word is valid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// Checks that every symbol lies in `alphabet`.
    pub fn check_alphabet(&self, alphabet: Alphabet) -> Result<()> {
        match self.0.iter().find(|&&s| !alphabet.contains(s)) {
            None => Ok(()),
            Some(&s) => Err(Error::domain(format!(
                "symbol {s} outside alphabet of size {}",
                alphabet.size()
            ))),
        }
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            // the empty word needs a visible spelling in reports
            return write!(f, "(empty)");
        }
        for &s in &self.0 {
            write!(f, "{}", (b'0' + s) as char)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "(empty)" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut v = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c.to_digit(10) {
                Some(d) => v.push(d as Symbol),
                None => {
                    return Err(Error::Parse(format!(
                        "word may only contain digits 0-9, got {c:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(Word(v))
    }
}

/// Outcome of comparing `u` against `v` symbol by symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexOrder {
    Less,
    /// One word is a prefix of the other (including equality).
    EqualPrefix,
    Greater,
}

/// Lexicographic comparison where running out of symbols counts as equality
/// on the shared prefix.
pub fn lex_compare(u: &Word, v: &Word) -> LexOrder {
    for (a, b) in u.symbols().iter().zip(v.symbols()) {
        if a < b {
            return LexOrder::Less;
        }
        if a > b {
            return LexOrder::Greater;
        }
    }
    LexOrder::EqualPrefix
}

/// Base-`p` packing of a symbol window, most significant symbol first.
pub(crate) fn pack(p: usize, symbols: &[Symbol]) -> usize {
    symbols.iter().fold(0usize, |acc, &c| acc * p + c as usize)
}

/// Inverse of [`pack`] at a fixed length.
pub(crate) fn unpack(p: usize, len: usize, mut index: usize) -> Vec<Symbol> {
    let mut out = vec![0 as Symbol; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % p) as Symbol;
        index /= p;
    }
    out
}

/// Length of the longest common prefix of `u` and `v`.
pub fn common_prefix_len(u: &Word, v: &Word) -> usize {
    u.symbols()
        .iter()
        .zip(v.symbols())
        .take_while(|(a, b)| a == b)
        .count()
}
