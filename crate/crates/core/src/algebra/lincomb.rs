use std::collections::btree_map::{self, BTreeMap};

use num_traits::Zero;

use super::scalar::Scalar;

/// A sparse linear combination over an ordered basis. Zero coefficients are
/// never stored, so two combinations are equal iff their maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<B: Ord> {
    terms: BTreeMap<B, Scalar>,
}

impl<B: Ord> Default for LinComb<B> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> LinComb<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(basis: B, coeff: Scalar) -> Self {
        let mut out = Self::new();
        out.add_term(basis, coeff);
        out
    }

    pub fn add_term(&mut self, basis: B, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(basis) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<B>) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &LinComb<B>) -> LinComb<B> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &LinComb<B>) -> LinComb<B> {
        self.add(&other.scale(&-Scalar::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Scalar) -> LinComb<B> {
        if c.is_zero() {
            return Self::new();
        }
        LinComb {
            terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect(),
        }
    }

    pub fn coeff(&self, basis: &B) -> Scalar {
        self.terms.get(basis).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Scalar)> {
        self.terms.iter()
    }

    /// Sum of all coefficients (the number of terms counted with
    /// multiplicity when every coefficient is a positive integer).
    pub fn total_coefficient(&self) -> Scalar {
        self.terms.values().fold(Scalar::zero(), |acc, c| acc + c)
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> LinComb<C>) -> LinComb<C> {
        let mut out = LinComb::new();
        for (b, c) in &self.terms {
            for (img, d) in f(b).terms {
                out.add_term(img, d * c);
            }
        }
        out
    }

    /// Tensor product `self ⊗ other` on pairs of basis elements.
    pub fn tensor<C: Ord + Clone>(&self, other: &LinComb<C>) -> LinComb<(B, C)> {
        let mut out = LinComb::new();
        for (b, x) in &self.terms {
            for (c, y) in &other.terms {
                out.add_term((b.clone(), c.clone()), x * y);
            }
        }
        out
    }
}

impl<B: Ord + Clone> FromIterator<(B, Scalar)> for LinComb<B> {
    fn from_iter<I: IntoIterator<Item = (B, Scalar)>>(iter: I) -> Self {
        let mut out = LinComb::new();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord> IntoIterator for LinComb<B> {
    type Item = (B, Scalar);
    type IntoIter = btree_map::IntoIter<B, Scalar>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}
