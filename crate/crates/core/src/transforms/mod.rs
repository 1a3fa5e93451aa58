//! Moment ↔ cumulant and cumulant ↔ cumulant conversions.
//!
//! Every conversion runs a primary route and an independent oracle route and
//! fails with [`Error::RouteDisagreement`] if they differ on any word.
//!
//! | conversion            | primary                          | oracle                          |
//! |-----------------------|----------------------------------|---------------------------------|
//! | moments → free        | fixed point `Φ = ε + κ ≺ Φ`      | `(Φ - ε) ≺ Φ∘S`                 |
//! | moments → boolean     | fixed point `Φ = ε + Φ ≻ β`      | `Φ∘S ≻ (Φ - ε)`                 |
//! | moments → monotone    | `log*(Φ)`                        | inverted `Σ_NC h_γ / τ(γ)!`     |
//! | cumulants → moments   | `exp^≺`, `exp^≻`, `exp*`         | NC, interval, NC with `1/τ!`    |
//! | cumulant → cumulant   | `Ω'` and `W`                     | irreducible NC sums or moments  |

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{Alphabet, PositionSet, Scalar, Word, WordTable};
use crate::error::{Error, Result};
use crate::form::{self, Form};
use crate::hopf::Coalgebra;
use crate::partitions::{Family, PartitionSums, Weight};
use crate::prelie::{InfChar, PreLie};

pub mod verify;

pub use verify::{verify_suite, Check, VerifyConfig, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Moment,
    Free,
    Boolean,
    Monotone,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Moment, Kind::Free, Kind::Boolean, Kind::Monotone];
    pub const CUMULANTS: [Kind; 3] = [Kind::Free, Kind::Boolean, Kind::Monotone];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Moment => "moment",
            Kind::Free => "free",
            Kind::Boolean => "boolean",
            Kind::Monotone => "monotone",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "moment" | "moments" => Ok(Kind::Moment),
            "free" => Ok(Kind::Free),
            "boolean" => Ok(Kind::Boolean),
            "monotone" => Ok(Kind::Monotone),
            _ => Err(Error::Parse(format!("unknown kind {s:?}"))),
        }
    }
}

/// Degree used when none is requested: 6, 5, 4 for one, two, three
/// generators and 3 beyond.
pub fn default_max_degree(generators: usize) -> usize {
    match generators {
        0 | 1 => 6,
        2 => 5,
        3 => 4,
        _ => 3,
    }
}

/// Largest degree any conversion accepts.
pub fn hard_max_degree(generators: usize) -> usize {
    match generators {
        0 | 1 => 10,
        2 => 7,
        3 => 6,
        _ => 5,
    }
}

fn check_degree(generators: usize, max_degree: usize) -> Result<()> {
    let cap = hard_max_degree(generators);
    if max_degree > cap {
        return Err(Error::OutOfRange(format!(
            "degree {max_degree} exceeds the cap {cap} for {generators} generator(s)"
        )));
    }
    Ok(())
}

/// A total table of moments or cumulants of one kind on every word of
/// degree `1..=N`. Moment tables carry `m(1) = 1` implicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantTable {
    kind: Kind,
    alphabet: Alphabet,
    table: WordTable,
}

impl CumulantTable {
    pub fn new(kind: Kind, alphabet: Alphabet, table: WordTable) -> Result<Self> {
        if table.generators() != alphabet.size() {
            return Err(Error::OutOfRange(format!(
                "table has {} generators, alphabet has {}",
                table.generators(),
                alphabet.size()
            )));
        }
        if let Some(w) = table.first_missing() {
            return Err(Error::Incomplete(alphabet.format_word(&w)));
        }
        Ok(CumulantTable { kind, alphabet, table })
    }

    /// One generator `a` with `values[n-1]` on `aⁿ`.
    pub fn univariate(kind: Kind, values: &[Scalar]) -> Result<Self> {
        let table = WordTable::from_fn(1, values.len(), |w| values[w.degree() - 1].clone());
        Self::new(kind, Alphabet::standard(1)?, table)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn table(&self) -> &WordTable {
        &self.table
    }

    pub fn into_table(self) -> WordTable {
        self.table
    }

    pub fn generators(&self) -> usize {
        self.table.generators()
    }

    pub fn max_degree(&self) -> usize {
        self.table.max_degree()
    }

    pub fn value(&self, w: &Word) -> Result<&Scalar> {
        self.table.get(w)
    }

    /// The restriction to degrees `<= max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Result<Self> {
        if max_degree > self.max_degree() {
            return Err(Error::Incomplete(format!(
                "table stops at degree {}, {max_degree} requested",
                self.max_degree()
            )));
        }
        Ok(CumulantTable { table: self.table.truncate(max_degree), ..self.clone() })
    }

    fn with(&self, kind: Kind, table: WordTable) -> Self {
        CumulantTable { kind, alphabet: self.alphabet.clone(), table }
    }

    fn check(&self) -> Result<()> {
        check_degree(self.generators(), self.max_degree())
    }
}

/// Fails on the first word where the two routes differ.
pub(crate) fn cross_check(alphabet: &Alphabet, primary: &WordTable, oracle: &WordTable) -> Result<()> {
    match primary.first_difference(oracle) {
        None => Ok(()),
        Some((w, p, o)) => Err(Error::RouteDisagreement {
            word: alphabet.format_word(&w),
            primary: p.to_string(),
            oracle: o.to_string(),
        }),
    }
}

fn require_kind(table: &CumulantTable, moment: bool) -> Result<()> {
    if (table.kind == Kind::Moment) != moment {
        let want = if moment { "a moment table" } else { "a cumulant table" };
        return Err(Error::InvalidForm(format!("expected {want}, got {}", table.kind)));
    }
    Ok(())
}

/// `Φ(a_S)` for bar-words given as a list of factors: a product of moments.
fn moment_product(m: &WordTable, factors: &[Word]) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for f in factors {
        acc *= m.get(f)?;
    }
    Ok(acc)
}

/// Free cumulants by solving `Φ = ε + κ ≺ Φ` one degree at a time:
/// `m(w) = Σ_{0 ∈ S} κ(a_S) Φ(w \ S)`, where the `S = all` term is `κ(w)`.
pub(crate) fn solve_free(m: &WordTable) -> Result<WordTable> {
    let mut k = WordTable::new(m.generators(), m.max_degree());
    for w in crate::algebra::words_up_to(m.generators(), m.max_degree()) {
        let n = w.degree();
        let full = PositionSet::full(n);
        let mut value = m.get(&w)?.clone();
        for rest in 0..(1u64 << (n - 1)) {
            let s = PositionSet(1 | (rest << 1));
            if s == full {
                continue;
            }
            let rest = w.complement_components_unchecked(s);
            let kv = k.get(&w.subword_unchecked(s))?;
            if !kv.is_zero() {
                value -= kv * moment_product(m, rest.factors())?;
            }
        }
        k.insert(w, value)?;
    }
    Ok(k)
}

/// Boolean cumulants from `Φ = ε + Φ ≻ β`:
/// `m(w) = β(w) + Σ_{0<j<n} β(a_1⋯a_j) m(a_{j+1}⋯a_n)`.
pub(crate) fn solve_boolean(m: &WordTable) -> Result<WordTable> {
    let mut b = WordTable::new(m.generators(), m.max_degree());
    for w in crate::algebra::words_up_to(m.generators(), m.max_degree()) {
        let n = w.degree();
        let mut value = m.get(&w)?.clone();
        for j in 1..n {
            value -= b.get(&w.slice(0, j))? * m.get(&w.slice(j, n))?;
        }
        b.insert(w, value)?;
    }
    Ok(b)
}

/// Inverts `m(w) = Σ_{π} weight(π) c_π` for a family containing the
/// one-block partition with weight 1.
pub(crate) fn solve_by_partitions(
    sums: &mut PartitionSums,
    m: &WordTable,
    family: Family,
    weight: Weight,
) -> Result<WordTable> {
    let mut c = WordTable::new(m.generators(), m.max_degree());
    for w in crate::algebra::words_up_to(m.generators(), m.max_degree()) {
        let n = w.degree();
        let rest = sums.sum_with(&w, family, weight, |b| {
            if b.degree() == n {
                Ok(Scalar::zero())
            } else {
                c.get(b).cloned()
            }
        })?;
        let value = m.get(&w)? - rest;
        c.insert(w, value)?;
    }
    Ok(c)
}

fn moment_form(ctx: &Arc<Coalgebra>, m: &WordTable) -> Form {
    Form::character(ctx, m.clone())
}

/// Cumulants of kind `target` from a moment table.
pub fn moments_to_cumulants(m: &CumulantTable, target: Kind) -> Result<CumulantTable> {
    require_kind(m, true)?;
    m.check()?;
    let (g, n) = (m.generators(), m.max_degree());
    let ctx = Coalgebra::new();
    let phi = moment_form(&ctx, &m.table);
    let (primary, oracle) = match target {
        Kind::Moment => return Err(Error::InvalidForm("target must be a cumulant kind".into())),
        Kind::Free => (solve_free(&m.table)?, form::log_left(&phi)?.word_table(g, n)?),
        Kind::Boolean => (solve_boolean(&m.table)?, form::log_right(&phi)?.word_table(g, n)?),
        Kind::Monotone => (
            form::log_star(&phi)?.word_table(g, n)?,
            solve_by_partitions(&mut PartitionSums::new(), &m.table, Family::Nc, Weight::InverseTreeFactorial)?,
        ),
    };
    cross_check(&m.alphabet, &primary, &oracle)?;
    Ok(m.with(target, primary))
}

/// The partition route `Σ_π weight(π) c_π` matching each cumulant kind.
pub(crate) fn moment_partition_family(kind: Kind) -> (Family, Weight) {
    match kind {
        Kind::Free => (Family::Nc, Weight::One),
        Kind::Boolean => (Family::Interval, Weight::One),
        _ => (Family::Nc, Weight::InverseTreeFactorial),
    }
}

/// The exponential matching each cumulant kind, as a form.
pub(crate) fn moment_exponential(ctx: &Arc<Coalgebra>, kind: Kind, c: &WordTable) -> Result<Form> {
    let alpha = Form::infinitesimal(ctx, c.clone());
    match kind {
        Kind::Free => form::exp_left(&alpha),
        Kind::Boolean => form::exp_right(&alpha),
        Kind::Monotone => form::exp_star(&alpha),
        Kind::Moment => Err(Error::InvalidForm("moments have no exponential".into())),
    }
}

/// Moments from a cumulant table of any kind.
pub fn cumulants_to_moments(c: &CumulantTable) -> Result<CumulantTable> {
    require_kind(c, false)?;
    c.check()?;
    let (g, n) = (c.generators(), c.max_degree());
    let ctx = Coalgebra::new();
    let primary = moment_exponential(&ctx, c.kind, &c.table)?.word_table(g, n)?;
    let (family, weight) = moment_partition_family(c.kind);
    let mut sums = PartitionSums::new();
    let oracle = WordTable::try_from_fn(g, n, |w| sums.sum(&c.table, w, family, weight))?;
    cross_check(&c.alphabet, &primary, &oracle)?;
    Ok(c.with(Kind::Moment, primary))
}

/// The Magnus-route conversion between cumulant kinds.
pub(crate) fn magnus_route(pl: &PreLie, from: Kind, to: Kind, c: &InfChar) -> Result<InfChar> {
    use Kind::*;
    let neg_w_neg = |x: &InfChar| -> Result<InfChar> { Ok(pl.w_map(&x.neg())?.neg()) };
    let neg_omega_neg = |x: &InfChar| -> Result<InfChar> { Ok(pl.magnus(&x.neg())?.neg()) };
    match (from, to) {
        (Free, Monotone) => pl.magnus(c),
        (Free, Boolean) => neg_w_neg(&pl.magnus(c)?),
        (Monotone, Free) => pl.w_map(c),
        (Monotone, Boolean) => neg_w_neg(c),
        (Boolean, Monotone) => neg_omega_neg(c),
        (Boolean, Free) => pl.w_map(&neg_omega_neg(c)?),
        _ => Err(Error::InvalidForm(format!("no cumulant conversion {from} -> {to}"))),
    }
}

/// Irreducible non-crossing sums relating two cumulant kinds, where one
/// exists: `target(w) = Σ_{π ∈ NCirr} weight(π) source_π`.
pub(crate) fn irreducible_weight(from: Kind, to: Kind) -> Option<Weight> {
    use Kind::*;
    match (from, to) {
        (Free, Boolean) => Some(Weight::One),
        (Boolean, Free) => Some(Weight::Alternating),
        (Monotone, Boolean) => Some(Weight::InverseTreeFactorial),
        (Monotone, Free) => Some(Weight::AlternatingInverseTreeFactorial),
        _ => None,
    }
}

/// Converts `c` to kind `to`. Conversions involving moments delegate to
/// [`moments_to_cumulants`] and [`cumulants_to_moments`].
pub fn convert(c: &CumulantTable, to: Kind) -> Result<CumulantTable> {
    if c.kind == to {
        return Err(Error::InvalidForm(format!("source and target are both {to}")));
    }
    if c.kind == Kind::Moment {
        return moments_to_cumulants(c, to);
    }
    if to == Kind::Moment {
        return cumulants_to_moments(c);
    }
    c.check()?;
    let (g, n) = (c.generators(), c.max_degree());
    let pl = PreLie::new(Coalgebra::new());
    let primary = magnus_route(&pl, c.kind, to, &InfChar::new(c.table.clone()))?.into_table();
    let oracle = match irreducible_weight(c.kind, to) {
        Some(weight) => {
            let mut sums = PartitionSums::new();
            WordTable::try_from_fn(g, n, |w| sums.sum(&c.table, w, Family::IrreducibleNc, weight))?
        }
        None => moments_to_cumulants(&cumulants_to_moments(c)?, to)?.into_table(),
    };
    cross_check(&c.alphabet, &primary, &oracle)?;
    Ok(c.with(to, primary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{frac, int};

    fn catalan_moments(n: usize) -> CumulantTable {
        let cat = [1, 1, 2, 5, 14];
        let values: Vec<Scalar> = (1..=n).map(|d| if d % 2 == 1 { int(0) } else { int(cat[d / 2]) }).collect();
        CumulantTable::univariate(Kind::Moment, &values).unwrap()
    }

    fn a(n: usize) -> Word {
        Word::power(n)
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("moments".parse::<Kind>().unwrap(), Kind::Moment);
        assert_eq!("free".parse::<Kind>().unwrap(), Kind::Free);
        assert!("classical".parse::<Kind>().is_err());
        assert_eq!(Kind::Boolean.to_string(), "boolean");
    }

    #[test]
    fn semicircle_cumulants() {
        let m = catalan_moments(6);
        let k = moments_to_cumulants(&m, Kind::Free).unwrap();
        for d in 1..=6 {
            assert_eq!(k.value(&a(d)).unwrap(), &int(if d == 2 { 1 } else { 0 }));
        }
        let r = moments_to_cumulants(&m, Kind::Boolean).unwrap();
        assert_eq!(r.value(&a(2)).unwrap(), &int(1));
        assert_eq!(r.value(&a(4)).unwrap(), &int(1));
        assert_eq!(r.value(&a(6)).unwrap(), &int(2));
        let h = moments_to_cumulants(&m, Kind::Monotone).unwrap();
        assert_eq!(h.value(&a(2)).unwrap(), &int(1));
        assert_eq!(h.value(&a(4)).unwrap(), &frac(1, 2));
        assert_eq!(h.value(&a(3)).unwrap(), &int(0));
    }

    #[test]
    fn moments_from_cumulants() {
        let (k1, k2, k3) = (frac(2, 3), frac(-5, 7), frac(1, 4));
        let k = CumulantTable::univariate(Kind::Free, &[k1.clone(), k2.clone(), k3.clone()]).unwrap();
        let m = cumulants_to_moments(&k).unwrap();
        assert_eq!(m.value(&a(3)).unwrap(), &(&k3 + int(3) * &k1 * &k2 + &k1 * &k1 * &k1));

        let r = CumulantTable::univariate(Kind::Boolean, &[int(1), int(0), int(0), int(0), int(0)]).unwrap();
        let m = cumulants_to_moments(&r).unwrap();
        for d in 1..=5 {
            assert_eq!(m.value(&a(d)).unwrap(), &int(1));
        }
    }

    #[test]
    fn cumulant_conversions_at_degree_three() {
        let (x1, x2, x3) = (frac(3, 2), frac(-2, 5), frac(7, 3));
        let vals = [x1.clone(), x2.clone(), x3.clone()];
        let k = CumulantTable::univariate(Kind::Free, &vals).unwrap();
        assert_eq!(convert(&k, Kind::Boolean).unwrap().value(&a(3)).unwrap(), &(&x3 + &x1 * &x2));
        let r = CumulantTable::univariate(Kind::Boolean, &vals).unwrap();
        assert_eq!(convert(&r, Kind::Free).unwrap().value(&a(3)).unwrap(), &(&x3 - &x1 * &x2));
        let h = CumulantTable::univariate(Kind::Monotone, &vals).unwrap();
        assert_eq!(
            convert(&h, Kind::Free).unwrap().value(&a(3)).unwrap(),
            &(&x3 - frac(1, 2) * &x1 * &x2)
        );
    }

    #[test]
    fn argument_errors() {
        let m = catalan_moments(4);
        assert!(matches!(convert(&m, Kind::Moment), Err(Error::InvalidForm(_))));
        assert!(matches!(cumulants_to_moments(&m), Err(Error::InvalidForm(_))));
        let mut partial = WordTable::new(1, 2);
        partial.insert(a(1), int(0)).unwrap();
        let err = CumulantTable::new(Kind::Moment, Alphabet::standard(1).unwrap(), partial).unwrap_err();
        assert_eq!(err, Error::Incomplete("aa".into()));
        let big = CumulantTable::univariate(Kind::Free, &vec![int(0); 11]).unwrap();
        assert!(matches!(cumulants_to_moments(&big), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn solvers_agree_with_partition_inversion() {
        let m = WordTable::from_fn(2, 4, |w| {
            let s: i64 = w.letters().iter().map(|l| l.index() as i64 * 2 - 1).sum();
            frac(s + 3, w.degree() as i64)
        });
        let mut sums = PartitionSums::new();
        assert_eq!(solve_free(&m).unwrap(), solve_by_partitions(&mut sums, &m, Family::Nc, Weight::One).unwrap());
        assert_eq!(
            solve_boolean(&m).unwrap(),
            solve_by_partitions(&mut sums, &m, Family::Interval, Weight::One).unwrap()
        );
    }
}
