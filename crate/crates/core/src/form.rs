//! Linear forms on `H = T(T(A))` and their shuffle-algebra calculus.
//!
//! A [`Form`] is an immutable expression DAG evaluated lazily on bar-words,
//! with a memo table per node. Leaves are the counit, characters and
//! infinitesimal characters extended from word tables, and general forms
//! given by a bar-word table. Inner nodes are sums, scalings, the
//! convolution `*`, the half-shuffles `≺`/`≻`, and the series nodes (the
//! three exponentials, `log*`, and the character inverse).
//!
//! Half-shuffles evaluate on `u ≠ 1` by pairing over `Δ⁺≺(u)` resp.
//! `Δ⁺≻(u)`. Writing `f = f(1)ε + f̄`, this is exactly
//! `g(1)·f̄ + f̄ ≺ ḡ` resp. `f(1)·ḡ + f̄ ≻ ḡ`, i.e. the unit conventions
//! `f≺ε = f = ε≻f`, `ε≺f = 0 = f≻ε` applied termwise. At `u = 1` both
//! half-shuffles evaluate to 0; only their sum `*` sees `f(1)g(1)`.
//!
//! Series nodes sum at most `deg(u)` convolution powers, so every
//! evaluation is an exact finite sum.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::scalar::factorial;
use crate::algebra::{BarWord, LinComb, Scalar, Word, WordTable};
use crate::error::{Error, Result};
use crate::hopf::{self, Coalgebra, SplitTensor};
use crate::memo::Memo;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvKind {
    Full,
    Left,
    Right,
}

/// Values of a general linear form on bar-words up to a degree.
#[derive(Clone, Debug)]
pub struct BarTable {
    max_degree: usize,
    values: HashMap<BarWord, Scalar>,
}

impl BarTable {
    pub fn new(max_degree: usize, values: HashMap<BarWord, Scalar>) -> Self {
        BarTable { max_degree, values }
    }

    fn get(&self, u: &BarWord) -> Result<Scalar> {
        self.values.get(u).cloned().ok_or_else(|| Error::MissingValue {
            word: u.to_string(),
            max_degree: self.max_degree,
        })
    }
}

enum NodeKind {
    Counit,
    Character(Arc<WordTable>),
    Infinitesimal(Arc<WordTable>),
    Linear(Arc<BarTable>),
    Add(Form, Form),
    Scale(Scalar, Form),
    Conv(ConvKind, Form, Form),
    ComposeP(Form),
    /// `Σ (-1)^i γ^{*i}` with `γ = Φ∘P` stored.
    CharInverse(Form),
    ExpStar(Form),
    /// `Σ (-1)^{l-1}/l γ^{*l}` with `γ = Φ∘P` stored.
    LogStar(Form),
    ExpLeft(Form),
    ExpRight(Form),
}

struct Node {
    kind: NodeKind,
    ctx: Arc<Coalgebra>,
    memo: Memo<BarWord, Scalar>,
    powers: Memo<(usize, BarWord), Scalar>,
}

/// A lazily evaluated linear form on the Hopf algebra.
#[derive(Clone)]
pub struct Form(Arc<Node>);

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.0.kind {
            NodeKind::Counit => "Counit",
            NodeKind::Character(_) => "Character",
            NodeKind::Infinitesimal(_) => "Infinitesimal",
            NodeKind::Linear(_) => "Linear",
            NodeKind::Add(..) => "Add",
            NodeKind::Scale(..) => "Scale",
            NodeKind::Conv(..) => "Conv",
            NodeKind::ComposeP(_) => "ComposeP",
            NodeKind::CharInverse(_) => "CharInverse",
            NodeKind::ExpStar(_) => "ExpStar",
            NodeKind::LogStar(_) => "LogStar",
            NodeKind::ExpLeft(_) => "ExpLeft",
            NodeKind::ExpRight(_) => "ExpRight",
        };
        write!(f, "Form::{name}")
    }
}

fn is_leaf(kind: &NodeKind) -> bool {
    matches!(
        kind,
        NodeKind::Counit | NodeKind::Character(_) | NodeKind::Infinitesimal(_) | NodeKind::Linear(_)
    )
}

impl Form {
    fn node(ctx: &Arc<Coalgebra>, kind: NodeKind) -> Form {
        let cap = ctx.memo_cap();
        Form(Arc::new(Node {
            kind,
            ctx: ctx.clone(),
            memo: Memo::new(cap),
            powers: Memo::new(cap),
        }))
    }

    fn derive(&self, kind: NodeKind) -> Form {
        Form::node(&self.0.ctx, kind)
    }

    pub fn context(&self) -> &Arc<Coalgebra> {
        &self.0.ctx
    }

    /// The counit `ε`, the unit of every product here.
    pub fn counit(ctx: &Arc<Coalgebra>) -> Form {
        Form::node(ctx, NodeKind::Counit)
    }

    /// The character with the given word values: `Φ(1) = 1`,
    /// `Φ(w_1|...|w_k) = Π Φ(w_i)`.
    pub fn character(ctx: &Arc<Coalgebra>, table: WordTable) -> Form {
        Form::node(ctx, NodeKind::Character(Arc::new(table)))
    }

    /// The infinitesimal character with the given word values, zero on the
    /// unit and on bar-words with two or more factors.
    pub fn infinitesimal(ctx: &Arc<Coalgebra>, table: WordTable) -> Form {
        Form::node(ctx, NodeKind::Infinitesimal(Arc::new(table)))
    }

    /// A general linear form given on bar-words.
    pub fn linear(ctx: &Arc<Coalgebra>, table: BarTable) -> Form {
        Form::node(ctx, NodeKind::Linear(Arc::new(table)))
    }

    pub fn add(&self, other: &Form) -> Form {
        self.derive(NodeKind::Add(self.clone(), other.clone()))
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Scalar) -> Form {
        self.derive(NodeKind::Scale(c, self.clone()))
    }

    pub fn neg(&self) -> Form {
        self.scale(-Scalar::one())
    }

    /// Convolution `f * g = m ∘ (f ⊗ g) ∘ Δ`.
    pub fn conv(&self, other: &Form) -> Form {
        self.derive(NodeKind::Conv(ConvKind::Full, self.clone(), other.clone()))
    }

    /// Left half-shuffle `f ≺ g`.
    pub fn half_left(&self, other: &Form) -> Form {
        self.derive(NodeKind::Conv(ConvKind::Left, self.clone(), other.clone()))
    }

    /// Right half-shuffle `f ≻ g`.
    pub fn half_right(&self, other: &Form) -> Form {
        self.derive(NodeKind::Conv(ConvKind::Right, self.clone(), other.clone()))
    }

    /// `f ∘ P = f - f(1) ε`.
    pub fn compose_p(&self) -> Form {
        self.derive(NodeKind::ComposeP(self.clone()))
    }

    pub fn eval(&self, u: &BarWord) -> Result<Scalar> {
        self.eval_impl(u, true)
    }

    /// Evaluation bypassing every memo table.
    pub fn eval_uncached(&self, u: &BarWord) -> Result<Scalar> {
        self.eval_impl(u, false)
    }

    pub fn eval_word(&self, w: &Word) -> Result<Scalar> {
        self.eval(&BarWord::from(w.clone()))
    }

    pub fn eval_lincomb(&self, x: &LinComb<BarWord>) -> Result<Scalar> {
        x.iter().try_fold(Scalar::zero(), |acc, (u, c)| Ok(acc + c * self.eval(u)?))
    }

    /// Word values on all words of degree `1..=max_degree`.
    pub fn word_table(&self, generators: usize, max_degree: usize) -> Result<WordTable> {
        WordTable::try_from_fn(generators, max_degree, |w| self.eval_word(w))
    }

    fn eval_impl(&self, u: &BarWord, memo: bool) -> Result<Scalar> {
        let node = &self.0;
        if is_leaf(&node.kind) {
            return self.eval_leaf(u);
        }
        if memo {
            if let Some(v) = node.memo.get(u) {
                return Ok(v);
            }
        }
        let value = self.eval_inner(u, memo)?;
        if memo {
            node.memo.insert(u.clone(), value.clone());
        }
        Ok(value)
    }

    fn eval_leaf(&self, u: &BarWord) -> Result<Scalar> {
        match &self.0.kind {
            NodeKind::Counit => Ok(if u.is_unit() { Scalar::one() } else { Scalar::zero() }),
            NodeKind::Character(t) => u
                .factors()
                .iter()
                .try_fold(Scalar::one(), |acc, w| Ok(acc * t.get(w)?)),
            NodeKind::Infinitesimal(t) => match u.as_word() {
                Some(w) => t.get(w).cloned(),
                None => Ok(Scalar::zero()),
            },
            NodeKind::Linear(t) => t.get(u),
            _ => unreachable!("not a leaf"),
        }
    }

    fn coproduct(&self, kind: ConvKind, u: &BarWord, memo: bool) -> Result<Arc<SplitTensor>> {
        let ctx = &self.0.ctx;
        match (kind, memo) {
            (ConvKind::Full, true) => Ok(ctx.coproduct(u)),
            (ConvKind::Left, true) => ctx.coproduct_left(u),
            (ConvKind::Right, true) => ctx.coproduct_right(u),
            (ConvKind::Full, false) => Ok(Arc::new(hopf::coproduct(u))),
            (ConvKind::Left, false) => hopf::coproduct_left(u).map(Arc::new),
            (ConvKind::Right, false) => hopf::coproduct_right(u).map(Arc::new),
        }
    }

    /// `Σ c · f(L) · g(R)` over the chosen coproduct of `u`.
    fn pair_over(
        &self,
        kind: ConvKind,
        f: &Form,
        g: &Form,
        u: &BarWord,
        memo: bool,
    ) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for ((l, r), c) in self.coproduct(kind, u, memo)?.iter() {
            let fl = f.eval_impl(l, memo)?;
            if fl.is_zero() {
                continue;
            }
            acc += c * fl * g.eval_impl(r, memo)?;
        }
        Ok(acc)
    }

    /// `γ^{*j}(u)` for a form with `γ(1) = 0`, memoized on this node.
    fn power(&self, base: &Form, j: usize, u: &BarWord, memo: bool) -> Result<Scalar> {
        if j == 0 {
            return Ok(if u.is_unit() { Scalar::one() } else { Scalar::zero() });
        }
        if j > u.degree() {
            return Ok(Scalar::zero());
        }
        let key = (j, u.clone());
        if memo {
            if let Some(v) = self.0.powers.get(&key) {
                return Ok(v);
            }
        }
        let mut acc = Scalar::zero();
        for ((l, r), c) in self.coproduct(ConvKind::Full, u, memo)?.iter() {
            if l.is_unit() {
                continue;
            }
            let bl = base.eval_impl(l, memo)?;
            if bl.is_zero() {
                continue;
            }
            acc += c * bl * self.power(base, j - 1, r, memo)?;
        }
        if memo {
            self.0.powers.insert(key, acc.clone());
        }
        Ok(acc)
    }

    fn eval_inner(&self, u: &BarWord, memo: bool) -> Result<Scalar> {
        match &self.0.kind {
            NodeKind::Add(f, g) => Ok(f.eval_impl(u, memo)? + g.eval_impl(u, memo)?),
            NodeKind::Scale(c, f) => {
                if c.is_zero() {
                    Ok(Scalar::zero())
                } else {
                    Ok(c * f.eval_impl(u, memo)?)
                }
            }
            NodeKind::Conv(ConvKind::Full, f, g) => self.pair_over(ConvKind::Full, f, g, u, memo),
            NodeKind::Conv(kind, f, g) => {
                if u.is_unit() {
                    Ok(Scalar::zero())
                } else {
                    self.pair_over(*kind, f, g, u, memo)
                }
            }
            NodeKind::ComposeP(f) => {
                if u.is_unit() {
                    Ok(Scalar::zero())
                } else {
                    f.eval_impl(u, memo)
                }
            }
            NodeKind::CharInverse(gamma) => {
                let mut acc = Scalar::zero();
                for i in 0..=u.degree() {
                    let p = self.power(gamma, i, u, memo)?;
                    if i % 2 == 0 {
                        acc += p;
                    } else {
                        acc -= p;
                    }
                }
                Ok(acc)
            }
            NodeKind::ExpStar(alpha) => {
                let mut acc = Scalar::zero();
                for j in 0..=u.degree() {
                    acc += self.power(alpha, j, u, memo)? / factorial(j);
                }
                Ok(acc)
            }
            NodeKind::LogStar(gamma) => {
                let mut acc = Scalar::zero();
                for l in 1..=u.degree() {
                    let term = self.power(gamma, l, u, memo)? / Scalar::from_integer((l as i64).into());
                    if l % 2 == 1 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                Ok(acc)
            }
            NodeKind::ExpLeft(alpha) => {
                if u.is_unit() {
                    return Ok(Scalar::one());
                }
                // X = ε + α ≺ X; α(1) = 0 so every surviving right leg is
                // of lower degree
                let mut acc = Scalar::zero();
                for ((l, r), c) in self.coproduct(ConvKind::Left, u, memo)?.iter() {
                    let al = alpha.eval_impl(l, memo)?;
                    if al.is_zero() {
                        continue;
                    }
                    acc += c * al * self.eval_impl(r, memo)?;
                }
                Ok(acc)
            }
            NodeKind::ExpRight(alpha) => {
                if u.is_unit() {
                    return Ok(Scalar::one());
                }
                // Z = ε + Z ≻ α
                let mut acc = Scalar::zero();
                for ((l, r), c) in self.coproduct(ConvKind::Right, u, memo)?.iter() {
                    if r.is_unit() {
                        continue;
                    }
                    let ar = alpha.eval_impl(r, memo)?;
                    if ar.is_zero() {
                        continue;
                    }
                    acc += c * self.eval_impl(l, memo)? * ar;
                }
                Ok(acc)
            }
            NodeKind::Counit
            | NodeKind::Character(_)
            | NodeKind::Infinitesimal(_)
            | NodeKind::Linear(_) => self.eval_leaf(u),
        }
    }
}

fn require_unit_value(f: &Form, expected: i64, what: &str) -> Result<()> {
    let v = f.eval(&BarWord::unit())?;
    if v != Scalar::from_integer(expected.into()) {
        return Err(Error::InvalidForm(format!("{what}: value at the unit is {v}, expected {expected}")));
    }
    Ok(())
}

/// `exp*(α) = Σ α^{*j}/j!`; requires `α(1) = 0`.
pub fn exp_star(alpha: &Form) -> Result<Form> {
    require_unit_value(alpha, 0, "exp_star")?;
    Ok(alpha.derive(NodeKind::ExpStar(alpha.clone())))
}

/// `log*(Φ) = Σ_{l≥1} (-1)^{l-1}/l (Φ∘P)^{*l}`; requires `Φ(1) = 1`.
pub fn log_star(phi: &Form) -> Result<Form> {
    require_unit_value(phi, 1, "log_star")?;
    Ok(phi.derive(NodeKind::LogStar(phi.compose_p())))
}

/// `exp^≺(α)`, the solution of `X = ε + α ≺ X`; requires `α(1) = 0`.
pub fn exp_left(alpha: &Form) -> Result<Form> {
    require_unit_value(alpha, 0, "exp_left")?;
    Ok(alpha.derive(NodeKind::ExpLeft(alpha.clone())))
}

/// `exp^≻(α)`, the solution of `Z = ε + Z ≻ α`; requires `α(1) = 0`.
pub fn exp_right(alpha: &Form) -> Result<Form> {
    require_unit_value(alpha, 0, "exp_right")?;
    Ok(alpha.derive(NodeKind::ExpRight(alpha.clone())))
}

/// The convolution inverse `Σ (-1)^i (Φ∘P)^{*i}`, equal to `Φ∘S` for a
/// character; requires `Φ(1) = 1`.
pub fn char_inverse(phi: &Form) -> Result<Form> {
    require_unit_value(phi, 1, "char_inverse")?;
    Ok(phi.derive(NodeKind::CharInverse(phi.compose_p())))
}

/// Left half-shuffle logarithm `(Φ - ε) ≺ Φ^{-1}`.
pub fn log_left(phi: &Form) -> Result<Form> {
    let inv = char_inverse(phi)?;
    Ok(phi.compose_p().half_left(&inv))
}

/// Right half-shuffle logarithm `Φ^{-1} ≻ (Φ - ε)`.
pub fn log_right(phi: &Form) -> Result<Form> {
    let inv = char_inverse(phi)?;
    Ok(inv.half_right(&phi.compose_p()))
}

/// The first bar-word where `f` and `g` differ, with both values.
pub fn first_disagreement<'a>(
    f: &Form,
    g: &Form,
    items: impl IntoIterator<Item = &'a BarWord>,
) -> Result<Option<(BarWord, Scalar, Scalar)>> {
    for u in items {
        let a = f.eval(u)?;
        let b = g.eval(u)?;
        if a != b {
            return Ok(Some((u.clone(), a, b)));
        }
    }
    Ok(None)
}
