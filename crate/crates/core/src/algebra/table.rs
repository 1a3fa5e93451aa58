use std::collections::BTreeMap;

use num_traits::Zero;

use super::scalar::Scalar;
use super::word::{words_up_to, Word};
use crate::error::{Error, Result};

/// Values on the words of degree `1..=max_degree` over `generators` letters.
///
/// A table may be partial while being filled; [`WordTable::get`] reports a
/// missing entry as an error rather than reading it as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordTable {
    generators: usize,
    max_degree: usize,
    values: BTreeMap<Word, Scalar>,
}

impl WordTable {
    pub fn new(generators: usize, max_degree: usize) -> Self {
        WordTable { generators, max_degree, values: BTreeMap::new() }
    }

    /// A total table with `f(w)` on every word.
    pub fn from_fn(generators: usize, max_degree: usize, mut f: impl FnMut(&Word) -> Scalar) -> Self {
        let values = words_up_to(generators, max_degree)
            .into_iter()
            .map(|w| {
                let v = f(&w);
                (w, v)
            })
            .collect();
        WordTable { generators, max_degree, values }
    }

    pub fn try_from_fn(
        generators: usize,
        max_degree: usize,
        mut f: impl FnMut(&Word) -> Result<Scalar>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for w in words_up_to(generators, max_degree) {
            let v = f(&w)?;
            values.insert(w, v);
        }
        Ok(WordTable { generators, max_degree, values })
    }

    pub fn zero(generators: usize, max_degree: usize) -> Self {
        Self::from_fn(generators, max_degree, |_| Scalar::zero())
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn insert(&mut self, w: Word, value: Scalar) -> Result<()> {
        if w.is_empty() || w.degree() > self.max_degree {
            return Err(Error::OutOfRange(format!(
                "word {w} outside degrees 1..={}",
                self.max_degree
            )));
        }
        if let Some(l) = w.letters().iter().find(|l| l.index() >= self.generators) {
            return Err(Error::LetterOutOfRange { index: l.index(), size: self.generators });
        }
        self.values.insert(w, value);
        Ok(())
    }

    pub fn get(&self, w: &Word) -> Result<&Scalar> {
        self.values.get(w).ok_or_else(|| Error::MissingValue {
            word: w.to_string(),
            max_degree: self.max_degree,
        })
    }

    /// The first word (degree-then-lexicographic) lacking a value.
    pub fn first_missing(&self) -> Option<Word> {
        words_up_to(self.generators, self.max_degree)
            .into_iter()
            .find(|w| !self.values.contains_key(w))
    }

    pub fn is_total(&self) -> bool {
        self.first_missing().is_none()
    }

    /// Entries in degree-then-lexicographic order.
    pub fn iter_canonical(&self) -> impl Iterator<Item = (Word, &Scalar)> + '_ {
        words_up_to(self.generators, self.max_degree)
            .into_iter()
            .filter_map(move |w| self.values.get(&w).map(|v| (w, v)))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Restriction to degrees `<= max_degree`.
    pub fn truncate(&self, max_degree: usize) -> WordTable {
        WordTable {
            generators: self.generators,
            max_degree: max_degree.min(self.max_degree),
            values: self
                .values
                .iter()
                .filter(|(w, _)| w.degree() <= max_degree)
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
        }
    }

    /// Pointwise `self + c * other` over the words of `self`.
    pub fn add_scaled(&self, c: &Scalar, other: &WordTable) -> Result<WordTable> {
        let mut values = BTreeMap::new();
        for (w, v) in &self.values {
            values.insert(w.clone(), v + c * other.get(w)?);
        }
        Ok(WordTable { generators: self.generators, max_degree: self.max_degree, values })
    }

    pub fn scale(&self, c: &Scalar) -> WordTable {
        WordTable {
            generators: self.generators,
            max_degree: self.max_degree,
            values: self.values.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// First word where the two tables differ, with both values.
    pub fn first_difference(&self, other: &WordTable) -> Option<(Word, Scalar, Scalar)> {
        let degree = self.max_degree.max(other.max_degree);
        let generators = self.generators.max(other.generators);
        words_up_to(generators, degree).into_iter().find_map(|w| {
            let a = self.values.get(&w).cloned().unwrap_or_else(Scalar::zero);
            let b = other.values.get(&w).cloned().unwrap_or_else(Scalar::zero);
            (a != b).then_some((w, a, b))
        })
    }
}
