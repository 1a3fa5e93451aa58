//! The coproduct of `H = T(T(A))`, its splitting into half-unshuffle
//! coproducts, and the reduced linearised coproduct.
//!
//! On a word `a_1 ... a_n`,
//!
//! ```text
//! Δ(a_1...a_n) = Σ_{S ⊆ [n]} a_S ⊗ a_{J_1} | ... | a_{J_k}
//! ```
//!
//! where `J_1 < ... < J_k` are the maximal intervals of `[n] - S`. `Δ` is
//! extended multiplicatively to bar-words. The left half `Δ⁺≺` keeps the
//! subsets containing the first position, the right half `Δ⁺≻` the others;
//! on bar-words only the first factor is split, the remaining factors take
//! the full coproduct.
//!
//! Tensor legs are always bar-words; for a word input the left leg is a
//! single word or the unit.

use std::sync::Arc;

use crate::algebra::{BarWord, LinComb, PositionSet, Scalar, Word};
use crate::error::{Error, Result};
use crate::memo::{cap_from_env, Memo};

pub type SplitTensor = LinComb<(BarWord, BarWord)>;

fn one() -> Scalar {
    Scalar::from_integer(1.into())
}

fn word_terms(w: &Word, mut keep: impl FnMut(PositionSet) -> bool) -> SplitTensor {
    let n = w.degree();
    let mut out = SplitTensor::new();
    for s in PositionSet::all_subsets(n) {
        if keep(s) {
            let left = BarWord::from(w.subword_unchecked(s));
            let right = w.complement_components_unchecked(s);
            out.add_term((left, right), one());
        }
    }
    out
}

/// `Δ` on a single word (`2^n` terms before collecting equal pairs). The
/// empty word gives `1 ⊗ 1`.
pub fn coproduct_word(w: &Word) -> SplitTensor {
    word_terms(w, |_| true)
}

fn left_word(w: &Word) -> SplitTensor {
    word_terms(w, |s| s.contains(0))
}

fn right_word(w: &Word) -> SplitTensor {
    word_terms(w, |s| !s.contains(0))
}

/// Componentwise product `(a ⊗ b)(c ⊗ d) = a|c ⊗ b|d`.
pub fn multiply(x: &SplitTensor, y: &SplitTensor) -> SplitTensor {
    let mut out = SplitTensor::new();
    for ((l1, r1), c1) in x.iter() {
        for ((l2, r2), c2) in y.iter() {
            out.add_term((l1.concat(l2), r1.concat(r2)), c1 * c2);
        }
    }
    out
}

fn unit_tensor() -> SplitTensor {
    SplitTensor::singleton((BarWord::unit(), BarWord::unit()), one())
}

fn fold_factors<'a>(init: SplitTensor, factors: impl Iterator<Item = &'a Word>) -> SplitTensor {
    factors.fold(init, |acc, w| multiply(&acc, &coproduct_word(w)))
}

/// `Δ` on a bar-word, factor by factor; `Δ(1) = 1 ⊗ 1`.
pub fn coproduct(u: &BarWord) -> SplitTensor {
    fold_factors(unit_tensor(), u.factors().iter())
}

/// `Δ⁺≺`: on a word, the terms with the first position in `S`; on
/// `w_1 | rest`, `Δ⁺≺(w_1) · Δ(rest)`.
pub fn coproduct_left(u: &BarWord) -> Result<SplitTensor> {
    let (first, _) = u.split_first().ok_or(Error::HalfCoproductOfUnit)?;
    Ok(fold_factors(left_word(first), u.factors()[1..].iter()))
}

/// `Δ⁺≻`: on a word, the terms with the first position outside `S`
/// (including `S = ∅`); on `w_1 | rest`, `Δ⁺≻(w_1) · Δ(rest)`.
pub fn coproduct_right(u: &BarWord) -> Result<SplitTensor> {
    let (first, _) = u.split_first().ok_or(Error::HalfCoproductOfUnit)?;
    Ok(fold_factors(right_word(first), u.factors()[1..].iter()))
}

/// Pairs `(I_1 ∪ I_3, I_2)` of position lists over all splittings of the
/// given positions into three consecutive runs with `I_2` non-empty and
/// `I_1 ∪ I_3` non-empty.
fn reduced_split_positions(positions: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let m = positions.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..=m {
            if j - i == m {
                continue;
            }
            let mut outer = positions[..i].to_vec();
            outer.extend_from_slice(&positions[j..]);
            out.push((outer, positions[i..j].to_vec()));
        }
    }
    out
}

/// The reduced linearised coproduct `Δ̄(w) = Σ a_{I_1 I_3} ⊗ a_{I_2}`, the
/// projection of `Δ` onto single-word legs. Zero on words of degree `<= 1`.
pub fn reduced_linearised_coproduct(w: &Word) -> LinComb<(Word, Word)> {
    let positions: Vec<usize> = (0..w.degree()).collect();
    reduced_split_positions(&positions)
        .into_iter()
        .map(|(outer, inner)| ((w.pick(&outer), w.pick(&inner)), one()))
        .collect()
}

/// The left-iterated reduced coproduct `Δ̄^[q-1]` on positions `0..n`,
/// term by term (every term has coefficient one at the level of
/// positions). Each tuple lists `q` blocks; the last block is the one
/// extracted first.
pub fn iterated_reduced_left_positions(n: usize, q: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    if q == 0 || q > n {
        return Err(Error::OutOfRange(format!("q = {q} not in 1..={n}")));
    }
    fn go(positions: &[usize], q: usize, out: &mut Vec<Vec<Vec<usize>>>, suffix: &mut Vec<Vec<usize>>) {
        if q == 1 {
            let mut tuple = vec![positions.to_vec()];
            tuple.extend(suffix.iter().rev().cloned());
            out.push(tuple);
            return;
        }
        for (outer, inner) in reduced_split_positions(positions) {
            if outer.len() < q - 1 {
                continue;
            }
            suffix.push(inner);
            go(&outer, q - 1, out, suffix);
            suffix.pop();
        }
    }
    let positions: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(&positions, q, &mut out, &mut Vec::new());
    Ok(out)
}

/// `Δ̄^[q-1](w)` as a combination of `q`-tuples of words.
pub fn iterated_reduced_left(w: &Word, q: usize) -> Result<LinComb<Vec<Word>>> {
    Ok(iterated_reduced_left_positions(w.degree(), q)?
        .into_iter()
        .map(|blocks| (blocks.iter().map(|b| w.pick(b)).collect(), one()))
        .collect())
}

/// Memoized coproducts, shared by every form built in one computation.
#[derive(Debug)]
pub struct Coalgebra {
    full: Memo<BarWord, Arc<SplitTensor>>,
    left: Memo<BarWord, Arc<SplitTensor>>,
    right: Memo<BarWord, Arc<SplitTensor>>,
    memo_cap: Option<usize>,
}

impl Coalgebra {
    /// A fresh context; the memo cap is read from
    /// [`MEMO_CAP_VAR`](crate::memo::MEMO_CAP_VAR) when set.
    pub fn new() -> Arc<Self> {
        Self::with_cap(cap_from_env())
    }

    pub fn with_cap(cap: Option<usize>) -> Arc<Self> {
        Arc::new(Coalgebra {
            full: Memo::new(cap),
            left: Memo::new(cap),
            right: Memo::new(cap),
            memo_cap: cap,
        })
    }

    pub fn memo_cap(&self) -> Option<usize> {
        self.memo_cap
    }

    fn cached(
        memo: &Memo<BarWord, Arc<SplitTensor>>,
        u: &BarWord,
        compute: impl FnOnce() -> Result<SplitTensor>,
    ) -> Result<Arc<SplitTensor>> {
        if let Some(hit) = memo.get(u) {
            return Ok(hit);
        }
        let value = Arc::new(compute()?);
        memo.insert(u.clone(), value.clone());
        Ok(value)
    }

    pub fn coproduct(&self, u: &BarWord) -> Arc<SplitTensor> {
        Self::cached(&self.full, u, || Ok(coproduct(u))).expect("full coproduct is total")
    }

    pub fn coproduct_left(&self, u: &BarWord) -> Result<Arc<SplitTensor>> {
        Self::cached(&self.left, u, || coproduct_left(u))
    }

    pub fn coproduct_right(&self, u: &BarWord) -> Result<Arc<SplitTensor>> {
        Self::cached(&self.right, u, || coproduct_right(u))
    }
}

/// `Δ̄(u) = Δ(u) - u ⊗ 1 - 1 ⊗ u`, zero on the unit.
pub fn reduced_coproduct(u: &BarWord) -> SplitTensor {
    if u.is_unit() {
        return SplitTensor::new();
    }
    let mut out = coproduct(u);
    out.add_term((u.clone(), BarWord::unit()), -one());
    out.add_term((BarWord::unit(), u.clone()), -one());
    out
}

/// Reduced left half `Δ≺(u) = Δ⁺≺(u) - u ⊗ 1`.
pub fn reduced_left(u: &BarWord) -> Result<SplitTensor> {
    let mut out = coproduct_left(u)?;
    out.add_term((u.clone(), BarWord::unit()), -one());
    Ok(out)
}

/// Reduced right half `Δ≻(u) = Δ⁺≻(u) - 1 ⊗ u`.
pub fn reduced_right(u: &BarWord) -> Result<SplitTensor> {
    let mut out = coproduct_right(u)?;
    out.add_term((BarWord::unit(), u.clone()), -one());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::algebra::{bar_words_up_to, words_up_to};

    fn w(ix: &[u8]) -> Word {
        Word::from_indices(ix)
    }

    fn b(parts: &[&[u8]]) -> BarWord {
        BarWord::new(parts.iter().map(|p| w(p)).collect()).unwrap()
    }

    fn pair(l: &[&[u8]], r: &[&[u8]]) -> (BarWord, BarWord) {
        (b(l), b(r))
    }

    fn tensor(terms: &[((BarWord, BarWord), i64)]) -> SplitTensor {
        terms.iter().map(|(p, c)| (p.clone(), int(*c))).collect()
    }

    #[test]
    fn coproduct_of_letter_and_unit() {
        assert_eq!(
            coproduct_word(&w(&[1])),
            tensor(&[(pair(&[&[1]], &[]), 1), (pair(&[], &[&[1]]), 1)])
        );
        assert_eq!(coproduct(&BarWord::unit()), tensor(&[(pair(&[], &[]), 1)]));
    }

    #[test]
    fn coproduct_of_two_letters() {
        let expected = tensor(&[
            (pair(&[&[1, 2]], &[]), 1),
            (pair(&[], &[&[1, 2]]), 1),
            (pair(&[&[1]], &[&[2]]), 1),
            (pair(&[&[2]], &[&[1]]), 1),
        ]);
        assert_eq!(coproduct_word(&w(&[1, 2])), expected);
    }

    #[test]
    fn coproduct_contains_split_term() {
        let d = coproduct_word(&w(&[1, 2, 3]));
        assert_eq!(d.coeff(&pair(&[&[2]], &[&[1], &[3]])), int(1));
        assert_eq!(d.len(), 8);
    }

    #[test]
    fn coproduct_of_bar_word() {
        let expected = tensor(&[
            (pair(&[&[1], &[2]], &[]), 1),
            (pair(&[&[1]], &[&[2]]), 1),
            (pair(&[&[2]], &[&[1]]), 1),
            (pair(&[], &[&[1], &[2]]), 1),
        ]);
        assert_eq!(coproduct(&b(&[&[1], &[2]])), expected);
        for ((l, r), _) in coproduct(&b(&[&[1, 2], &[3]])).iter() {
            assert_eq!(l.degree() + r.degree(), 3);
        }
    }

    #[test]
    fn half_coproduct_examples() {
        assert_eq!(
            coproduct_left(&b(&[&[1, 2]])).unwrap(),
            tensor(&[(pair(&[&[1, 2]], &[]), 1), (pair(&[&[1]], &[&[2]]), 1)])
        );
        assert_eq!(coproduct_left(&b(&[&[1]])).unwrap(), tensor(&[(pair(&[&[1]], &[]), 1)]));
        assert_eq!(
            coproduct_right(&b(&[&[1, 2]])).unwrap(),
            tensor(&[(pair(&[], &[&[1, 2]]), 1), (pair(&[&[2]], &[&[1]]), 1)])
        );
        assert_eq!(coproduct_right(&b(&[&[1]])).unwrap(), tensor(&[(pair(&[], &[&[1]]), 1)]));
        assert_eq!(
            coproduct_right(&b(&[&[1, 2, 3]])).unwrap(),
            tensor(&[
                (pair(&[], &[&[1, 2, 3]]), 1),
                (pair(&[&[2]], &[&[1], &[3]]), 1),
                (pair(&[&[3]], &[&[1, 2]]), 1),
                (pair(&[&[2, 3]], &[&[1]]), 1),
            ])
        );
        let u = b(&[&[1, 2, 3]]);
        let sum = coproduct_left(&u).unwrap().add(&coproduct_right(&u).unwrap());
        assert_eq!(sum, coproduct(&u));
        assert_eq!(sum.total_coefficient(), int(8));
    }

    #[test]
    fn half_coproducts_reject_unit() {
        assert_eq!(coproduct_left(&BarWord::unit()), Err(Error::HalfCoproductOfUnit));
        assert_eq!(coproduct_right(&BarWord::unit()), Err(Error::HalfCoproductOfUnit));
    }

    #[test]
    fn splitting_on_all_bar_words() {
        for u in bar_words_up_to(2, 5).into_iter().filter(|u| !u.is_unit()) {
            let sum = coproduct_left(&u).unwrap().add(&coproduct_right(&u).unwrap());
            assert_eq!(sum, coproduct(&u), "splitting fails on {u}");
        }
    }

    #[test]
    fn reduced_linearised_examples() {
        assert!(reduced_linearised_coproduct(&Word::power(1)).is_empty());
        assert!(reduced_linearised_coproduct(&Word::empty()).is_empty());
        let a = Word::power(1);
        let aa = Word::power(2);
        assert_eq!(
            reduced_linearised_coproduct(&aa),
            LinComb::singleton((a.clone(), a.clone()), int(2))
        );
        // (k+1) a^k ⊗ a^(l-k): 2 a⊗a² + 3 a²⊗a
        let d3 = reduced_linearised_coproduct(&Word::power(3));
        assert_eq!(d3.len(), 2);
        assert_eq!(d3.coeff(&(a.clone(), aa.clone())), int(2));
        assert_eq!(d3.coeff(&(aa, a)), int(3));
    }

    #[test]
    fn reduced_linearised_is_single_word_projection_of_coproduct() {
        for word in words_up_to(2, 5) {
            let projected: LinComb<(Word, Word)> = coproduct_word(&word)
                .into_iter()
                .filter_map(|((l, r), c)| match (l.as_word(), r.as_word()) {
                    (Some(l), Some(r)) => Some(((l.clone(), r.clone()), c)),
                    _ => None,
                })
                .collect();
            assert_eq!(projected, reduced_linearised_coproduct(&word), "on {word}");
        }
    }

    #[test]
    fn iterated_reduced_examples() {
        for n in 1..=6 {
            let top = iterated_reduced_left(&Word::power(n), n).unwrap();
            let factorial: i64 = (1..=n as i64).product();
            assert_eq!(top, LinComb::singleton(vec![Word::power(1); n], int(factorial)));
        }
        let w3 = w(&[1, 2, 3]);
        assert_eq!(iterated_reduced_left(&w3, 1).unwrap(), LinComb::singleton(vec![w3.clone()], int(1)));
        let two = iterated_reduced_left(&w3, 2).unwrap();
        let expected: LinComb<Vec<Word>> = [
            vec![w(&[1, 2]), w(&[3])],
            vec![w(&[1, 3]), w(&[2])],
            vec![w(&[2, 3]), w(&[1])],
            vec![w(&[1]), w(&[2, 3])],
            vec![w(&[3]), w(&[1, 2])],
        ]
        .into_iter()
        .map(|t| (t, int(1)))
        .collect();
        assert_eq!(two, expected);
        assert!(iterated_reduced_left(&w3, 0).is_err());
        assert!(iterated_reduced_left(&w3, 4).is_err());
    }

    #[test]
    fn iterated_reduced_matches_left_iteration_of_linearised_coproduct() {
        // (Δ̄^[q-2] ⊗ id) Δ̄ computed on words directly
        fn iterate(w: &Word, q: usize) -> LinComb<Vec<Word>> {
            if q == 1 {
                return LinComb::singleton(vec![w.clone()], int(1));
            }
            reduced_linearised_coproduct(w).map_linear(|(outer, inner)| {
                iterate(outer, q - 1).map_linear(|tuple| {
                    let mut t = tuple.clone();
                    t.push(inner.clone());
                    LinComb::singleton(t, int(1))
                })
            })
        }
        for word in words_up_to(2, 5) {
            for q in 1..=word.degree() {
                assert_eq!(iterate(&word, q), iterated_reduced_left(&word, q).unwrap());
            }
        }
    }

    #[test]
    fn cache_agrees_with_direct() {
        let ctx = Coalgebra::with_cap(Some(3));
        for u in bar_words_up_to(2, 3) {
            assert_eq!(*ctx.coproduct(&u), coproduct(&u));
            if !u.is_unit() {
                assert_eq!(*ctx.coproduct_left(&u).unwrap(), coproduct_left(&u).unwrap());
                assert_eq!(*ctx.coproduct_right(&u).unwrap(), coproduct_right(&u).unwrap());
            }
        }
        assert!(ctx.full.len() <= 3);
    }
}
