//! Letters, words of the tensor algebra and bar-words of the double tensor
//! algebra.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A generator of the alphabet, stored as its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u8);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A word `a_1 ... a_n`. The empty word is representable and stands for the
/// tensor-algebra unit; it never appears as a factor of a [`BarWord`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw letter indices.
    pub fn from_indices(indices: &[u8]) -> Self {
        Word(indices.iter().map(|&i| Letter(i)).collect())
    }

    /// The word `a^n` on letter 0.
    pub fn power(n: usize) -> Self {
        Word(vec![Letter(0); n])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letters at the positions of `set`, in increasing order. The empty set
    /// yields the empty word.
    pub fn subword(&self, set: PositionSet) -> Result<Word> {
        set.check(self.degree())?;
        Ok(self.subword_unchecked(set))
    }

    pub(crate) fn subword_unchecked(&self, set: PositionSet) -> Word {
        Word(set.iter().map(|p| self.0[p]).collect())
    }

    /// Letters at the given positions; the positions must be in range.
    pub(crate) fn pick(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&p| self.0[p]).collect())
    }

    /// The maximal intervals of the complement of `set`, as a bar-word.
    /// Returns the unit when `set` covers every position.
    pub fn complement_components(&self, set: PositionSet) -> Result<BarWord> {
        set.check(self.degree())?;
        Ok(self.complement_components_unchecked(set))
    }

    pub(crate) fn complement_components_unchecked(&self, set: PositionSet) -> BarWord {
        let mut factors = Vec::new();
        let mut current = Vec::new();
        for (p, &letter) in self.0.iter().enumerate() {
            if set.contains(p) {
                if !current.is_empty() {
                    factors.push(Word(std::mem::take(&mut current)));
                }
            } else {
                current.push(letter);
            }
        }
        if !current.is_empty() {
            factors.push(Word(current));
        }
        BarWord(factors)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl From<Word> for BarWord {
    fn from(w: Word) -> Self {
        if w.is_empty() {
            BarWord::unit()
        } else {
            BarWord(vec![w])
        }
    }
}

/// A bar-word `w_1 | ... | w_k` of non-empty words; the empty sequence is the
/// unit `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarWord(Vec<Word>);

impl BarWord {
    pub fn unit() -> Self {
        BarWord(Vec::new())
    }

    /// Rejects empty factors.
    pub fn new(factors: Vec<Word>) -> Result<Self> {
        if factors.iter().any(Word::is_empty) {
            return Err(Error::EmptyFactor);
        }
        Ok(BarWord(factors))
    }

    /// Builds a bar-word, dropping empty factors (`w1|1|w2 = w1|w2`).
    pub fn from_factors_collapsing(factors: Vec<Word>) -> Self {
        BarWord(factors.into_iter().filter(|w| !w.is_empty()).collect())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Word] {
        &self.0
    }

    pub fn factor_count(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(Word::degree).sum()
    }

    /// The single word when this bar-word has exactly one factor.
    pub fn as_word(&self) -> Option<&Word> {
        match self.0.as_slice() {
            [w] => Some(w),
            _ => None,
        }
    }

    /// Concatenation `a | b`.
    pub fn concat(&self, other: &BarWord) -> BarWord {
        let mut factors = Vec::with_capacity(self.0.len() + other.0.len());
        factors.extend_from_slice(&self.0);
        factors.extend_from_slice(&other.0);
        BarWord(factors)
    }

    /// Splits off the first factor: `w_1` and `w_2 | ... | w_k`.
    pub fn split_first(&self) -> Option<(&Word, BarWord)> {
        self.0
            .split_first()
            .map(|(first, rest)| (first, BarWord(rest.to_vec())))
    }
}

pub fn bar_concat(a: &BarWord, b: &BarWord) -> BarWord {
    a.concat(b)
}

/// A set of 0-based word positions, stored as a bitmask (words of degree at
/// most 64).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionSet(pub u64);

impl PositionSet {
    pub const MAX_DEGREE: usize = 64;

    pub fn empty() -> Self {
        PositionSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            PositionSet(u64::MAX)
        } else {
            PositionSet((1u64 << n) - 1)
        }
    }

    pub fn from_positions(positions: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &p in positions {
            if p >= Self::MAX_DEGREE {
                return Err(Error::PositionOutOfRange {
                    position: p,
                    degree: Self::MAX_DEGREE,
                });
            }
            bits |= 1 << p;
        }
        Ok(PositionSet(bits))
    }

    pub fn contains(self, p: usize) -> bool {
        p < 64 && self.0 & (1 << p) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |p| bits & (1 << p) != 0)
    }

    fn check(self, degree: usize) -> Result<()> {
        match self.iter().find(|&p| p >= degree) {
            Some(position) => Err(Error::PositionOutOfRange { position, degree }),
            None => Ok(()),
        }
    }

    /// All subsets of `{0..n}`, in increasing bitmask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = PositionSet> {
        assert!(n < 64, "subset enumeration limited to degree < 64");
        (0..(1u64 << n)).map(PositionSet)
    }
}

/// The named generators of a computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Arc<[String]>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::OutOfRange("alphabet must have at least one generator".into()));
        }
        if names.len() > u8::MAX as usize {
            return Err(Error::OutOfRange("at most 255 generators".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains('.') || n.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid generator name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate generator name {n:?}")));
            }
        }
        Ok(Alphabet { names: names.into() })
    }

    /// Generators named `a`, `b`, `c`, ... (up to 26).
    pub fn standard(size: usize) -> Result<Self> {
        if size == 0 || size > 26 {
            return Err(Error::OutOfRange(format!("standard alphabet size {size} not in 1..=26")));
        }
        Alphabet::new((0..size).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn uses_separator(&self) -> bool {
        self.names.iter().any(|n| n.chars().count() > 1)
    }

    pub fn letter(&self, index: usize) -> Result<Letter> {
        if index < self.size() {
            Ok(Letter(index as u8))
        } else {
            Err(Error::LetterOutOfRange { index, size: self.size() })
        }
    }

    /// Parses a word string. Single-character names are concatenated
    /// (`"aab"`); when any name is longer, letters are separated by `.`
    /// (`"x1.x1.y"`).
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let lookup = |name: &str| {
            self.names
                .iter()
                .position(|n| n == name)
                .map(|i| Letter(i as u8))
                .ok_or_else(|| Error::Parse(format!("unknown generator {name:?} in word {s:?}")))
        };
        if s.is_empty() {
            return Err(Error::Parse("empty word string".into()));
        }
        let letters = if self.uses_separator() {
            s.split('.').map(lookup).collect::<Result<Vec<_>>>()?
        } else {
            let mut buf = [0u8; 4];
            s.chars()
                .map(|c| lookup(c.encode_utf8(&mut buf)))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(letters))
    }

    pub fn format_word(&self, w: &Word) -> String {
        let names = w.letters().iter().map(|l| {
            self.names
                .get(l.index())
                .map(String::as_str)
                .unwrap_or("?")
        });
        if self.uses_separator() {
            names.collect::<Vec<_>>().join(".")
        } else {
            names.collect()
        }
    }

    pub fn format_bar_word(&self, u: &BarWord) -> String {
        if u.is_unit() {
            return "1".into();
        }
        u.factors()
            .iter()
            .map(|w| self.format_word(w))
            .collect::<Vec<_>>()
            .join("|")
    }

    /// All words of exactly degree `n`, lexicographic in letter index.
    pub fn words_of_degree(&self, n: usize) -> Vec<Word> {
        words_of_degree(self.size(), n)
    }

    /// All words of degree `1..=max_degree`, ordered by degree then
    /// lexicographically.
    pub fn words_up_to(&self, max_degree: usize) -> Vec<Word> {
        words_up_to(self.size(), max_degree)
    }
}

pub fn words_of_degree(generators: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..generators).map(move |g| {
                    let mut letters = w.0.clone();
                    letters.push(Letter(g as u8));
                    Word(letters)
                })
            })
            .collect();
    }
    out
}

pub fn words_up_to(generators: usize, max_degree: usize) -> Vec<Word> {
    (1..=max_degree)
        .flat_map(|n| words_of_degree(generators, n))
        .collect()
}

/// All bar-words of exactly degree `n` (including, for `n = 0`, the unit).
pub fn bar_words_of_degree(generators: usize, n: usize) -> Vec<BarWord> {
    if n == 0 {
        return vec![BarWord::unit()];
    }
    // a bar-word of degree n is a word of degree n cut at a subset of its
    // n - 1 inner gaps
    let mut out = Vec::new();
    for w in words_of_degree(generators, n) {
        for cuts in 0..(1u64 << (n - 1)) {
            let mut factors = Vec::new();
            let mut start = 0;
            for gap in 0..n - 1 {
                if cuts & (1 << gap) != 0 {
                    factors.push(w.slice(start, gap + 1));
                    start = gap + 1;
                }
            }
            factors.push(w.slice(start, n));
            out.push(BarWord(factors));
        }
    }
    out.sort();
    out
}

pub fn bar_words_up_to(generators: usize, max_degree: usize) -> Vec<BarWord> {
    (0..=max_degree)
        .flat_map(|n| bar_words_of_degree(generators, n))
        .collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "a{}", l.0)?;
        }
        Ok(())
    }
}

impl fmt::Display for BarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}
