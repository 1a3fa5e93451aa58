//! The pre-Lie product `a ▷ b = a ≻ b - b ≺ a` on infinitesimal characters,
//! the pre-Lie Magnus expansion `Ω'` and its inverse `W`.
//!
//! ```text
//! W(a)  = Σ_{k≥0} 1/(k+1)! · L_{a▷}^k (a)      = a + ½ a▷a + ⅙ a▷(a▷a) + ...
//! Ω'(a) = Σ_{m≥0} B_m/m! · L_{Ω'(a)▷}^m (a)    = a - ½ a▷a + ...
//! ```
//!
//! Each `▷` raises the lowest degree of its result by one, so both series
//! are finite on tables truncated at degree `N`.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::scalar::{binomial, factorial, int, one};
use crate::algebra::{Scalar, Word, WordTable};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::hopf::Coalgebra;

/// An infinitesimal character, materialized as its values on words up to a
/// degree bound. It vanishes on the unit and on every bar-word with two or
/// more factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfChar(WordTable);

impl InfChar {
    pub fn new(table: WordTable) -> Self {
        InfChar(table)
    }

    pub fn zero(generators: usize, max_degree: usize) -> Self {
        InfChar(WordTable::zero(generators, max_degree))
    }

    pub fn table(&self) -> &WordTable {
        &self.0
    }

    pub fn into_table(self) -> WordTable {
        self.0
    }

    pub fn generators(&self) -> usize {
        self.0.generators()
    }

    pub fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    pub fn value(&self, w: &Word) -> Result<&Scalar> {
        self.0.get(w)
    }

    pub fn to_form(&self, ctx: &Arc<Coalgebra>) -> Form {
        Form::infinitesimal(ctx, self.0.clone())
    }

    fn check_compatible(&self, other: &InfChar) -> Result<()> {
        if self.generators() != other.generators() || self.max_degree() != other.max_degree() {
            return Err(Error::OutOfRange(format!(
                "degree bounds differ: ({} generators, degree {}) vs ({}, {})",
                self.generators(),
                self.max_degree(),
                other.generators(),
                other.max_degree()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &InfChar) -> Result<InfChar> {
        self.check_compatible(other)?;
        Ok(InfChar(self.0.add_scaled(&one(), &other.0)?))
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: &Scalar, other: &InfChar) -> Result<InfChar> {
        self.check_compatible(other)?;
        Ok(InfChar(self.0.add_scaled(c, &other.0)?))
    }

    pub fn scale(&self, c: &Scalar) -> InfChar {
        InfChar(self.0.scale(c))
    }

    pub fn neg(&self) -> InfChar {
        self.scale(&int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter_canonical().all(|(_, v)| v.is_zero())
    }
}

/// Signature of a binary product on infinitesimal characters; the verification
/// harness swaps in alternatives to exercise its failure reporting.
pub type ProductFn = fn(&Arc<Coalgebra>, &InfChar, &InfChar) -> Result<InfChar>;

/// `a ▷ b`, evaluated as the form `a ≻ b - b ≺ a` on every word.
pub fn triangle_in(ctx: &Arc<Coalgebra>, a: &InfChar, b: &InfChar) -> Result<InfChar> {
    a.check_compatible(b)?;
    let (fa, fb) = (a.to_form(ctx), b.to_form(ctx));
    let product = fa.half_right(&fb).sub(&fb.half_left(&fa));
    Ok(InfChar(product.word_table(a.generators(), a.max_degree())?))
}

pub fn triangle(a: &InfChar, b: &InfChar) -> Result<InfChar> {
    triangle_in(&Coalgebra::new(), a, b)
}

/// Bernoulli numbers `B_0..=B_M` with `B_1 = -1/2`, from
/// `Σ_{j=0}^{m} C(m+1, j) B_j = 0`.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<Scalar>,
}

impl BernoulliCache {
    pub fn new(max: usize) -> Self {
        let mut values: Vec<Scalar> = vec![one()];
        for m in 1..=max {
            let sum = (0..m).fold(Scalar::zero(), |acc, j| acc + binomial(m + 1, j) * &values[j]);
            values.push(-sum / int(m as i64 + 1));
        }
        BernoulliCache { values }
    }

    pub fn get(&self, m: usize) -> Option<&Scalar> {
        self.values.get(m)
    }

    pub fn max(&self) -> usize {
        self.values.len() - 1
    }
}

pub fn bernoulli(m: usize) -> Scalar {
    BernoulliCache::new(m).values.pop().expect("non-empty")
}

/// The pre-Lie calculus with a chosen product (`▷` by default).
#[derive(Clone)]
pub struct PreLie {
    ctx: Arc<Coalgebra>,
    product: ProductFn,
}

impl PreLie {
    pub fn new(ctx: Arc<Coalgebra>) -> Self {
        PreLie { ctx, product: triangle_in }
    }

    pub fn with_product(ctx: Arc<Coalgebra>, product: ProductFn) -> Self {
        PreLie { ctx, product }
    }

    pub fn context(&self) -> &Arc<Coalgebra> {
        &self.ctx
    }

    pub fn triangle(&self, a: &InfChar, b: &InfChar) -> Result<InfChar> {
        (self.product)(&self.ctx, a, b)
    }

    /// `W(a) = Σ_{k≥0} L_{a▷}^k(a) / (k+1)!`.
    pub fn w_map(&self, a: &InfChar) -> Result<InfChar> {
        let mut sum = a.clone();
        let mut term = a.clone();
        for k in 1..a.max_degree() {
            term = self.triangle(a, &term)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add_scaled(&(one() / factorial(k + 1)), &term)?;
        }
        Ok(sum)
    }

    /// `Ω'(a)` by graded fixed-point iteration: starting from `a`, re-evaluate
    /// the Bernoulli series with the current `Ω'`. The degree-`n` slice is
    /// final after `n` rounds.
    pub fn magnus(&self, a: &InfChar) -> Result<InfChar> {
        let n = a.max_degree();
        let bernoulli = BernoulliCache::new(n);
        let mut omega = a.clone();
        for _ in 0..=n {
            let mut next = a.clone();
            let mut term = a.clone();
            for m in 1..n {
                term = self.triangle(&omega, &term)?;
                if term.is_zero() {
                    break;
                }
                let b = bernoulli.get(m).expect("cache covers N");
                if !b.is_zero() {
                    next = next.add_scaled(&(b / factorial(m)), &term)?;
                }
            }
            if next == omega {
                return Ok(omega);
            }
            omega = next;
        }
        Ok(omega)
    }
}

pub fn w_map(a: &InfChar) -> Result<InfChar> {
    PreLie::new(Coalgebra::new()).w_map(a)
}

pub fn magnus(a: &InfChar) -> Result<InfChar> {
    PreLie::new(Coalgebra::new()).magnus(a)
}
