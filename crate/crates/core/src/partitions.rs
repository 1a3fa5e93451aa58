//! Set partitions of `{0..n}`: non-crossing, irreducible non-crossing,
//! interval and monotone partitions, nesting forests, tree factorials and
//! monotone labelling counts, plus the generic partition-sum evaluator.
//!
//! Positions are 0-based in the API and printed 1-based (`{1,4}{2,3}`).

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::scalar::{factorial, int};
use crate::algebra::{Scalar, Word, WordTable};
use crate::error::{Error, Result};

/// Largest `n` accepted by the enumerators.
pub const MAX_N: usize = 12;

/// A partition of `{0..n}` with sorted blocks ordered by their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::OutOfRange("empty block".into()));
            }
            for &p in block {
                if p >= n || seen[p] {
                    return Err(Error::OutOfRange(format!("blocks do not partition 0..{n}")));
                }
                seen[p] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::OutOfRange(format!("blocks do not cover 0..{n}")));
        }
        Ok(Self::canonical(n, blocks))
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition { n, blocks }
    }

    /// Parses 1-based block notation such as `"{1,4}{2,3}"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad partition notation {s:?}"));
        let mut blocks = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('{').ok_or_else(bad)?;
            let close = inner.find('}').ok_or_else(bad)?;
            let block = inner[..close]
                .split(',')
                .map(|t| t.trim().parse::<usize>().ok().filter(|&p| p >= 1).map(|p| p - 1))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(bad)?;
            blocks.push(block);
            rest = inner[close + 1..].trim_start();
        }
        let n = blocks.iter().map(Vec::len).sum();
        Self::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_noncrossing(&self) -> bool {
        // blocks B, C cross iff some i < j < l < m with i, l ∈ B and j, m ∈ C
        let mut owner = vec![0usize; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &p in block {
                owner[p] = b;
            }
        }
        for (b, block) in self.blocks.iter().enumerate() {
            for pair in block.windows(2) {
                let (lo, hi) = (pair[0], pair[1]);
                // an element strictly between two consecutive elements of b
                // whose block also has an element outside [lo, hi]
                for &c in &owner[lo + 1..hi] {
                    if c != b {
                        let other = &self.blocks[c];
                        if other[0] < lo || *other.last().unwrap() > hi {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Non-crossing with the first and last position in one block.
    pub fn is_irreducible(&self) -> bool {
        self.n > 0 && self.blocks[0].last() == Some(&(self.n - 1)) && self.is_noncrossing()
    }

    pub fn is_interval(&self) -> bool {
        self.blocks.iter().all(|b| b.last().unwrap() - b[0] + 1 == b.len())
    }

    pub fn nesting_forest(&self) -> Result<NestingForest> {
        if !self.is_noncrossing() {
            return Err(Error::OutOfRange(format!("{self} is crossing")));
        }
        let span = |b: &Vec<usize>| (b[0], *b.last().unwrap());
        let parent = self
            .blocks
            .iter()
            .map(|v| {
                let (vmin, vmax) = span(v);
                // the innermost enclosing block has the largest minimum
                self.blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| {
                        let (wmin, wmax) = span(w);
                        wmin < vmin && vmax < wmax
                    })
                    .max_by_key(|(_, w)| w[0])
                    .map(|(i, _)| i)
            })
            .collect();
        Ok(NestingForest { parent })
    }

    /// `τ(π)!`: product over blocks of the size of the nesting subtree they
    /// root.
    pub fn tree_factorial(&self) -> Result<u64> {
        let forest = self.nesting_forest()?;
        Ok(forest.subtree_sizes().iter().map(|&s| s as u64).product())
    }

    /// `m(π)`: the number of block orders in which every block comes after
    /// the blocks enclosing it, counted by dynamic programming over the sets
    /// of already-placed blocks.
    pub fn monotone_labelling_count(&self) -> Result<u64> {
        let forest = self.nesting_forest()?;
        let s = self.block_count();
        let full = (1usize << s) - 1;
        let mut ways = vec![0u64; 1 << s];
        ways[0] = 1;
        for placed in 0..full {
            if ways[placed] == 0 {
                continue;
            }
            for b in 0..s {
                let free = placed & (1 << b) == 0;
                let ready = forest.parent[b].is_none_or(|p| placed & (1 << p) != 0);
                if free && ready {
                    ways[placed | (1 << b)] += ways[placed];
                }
            }
        }
        Ok(ways[full])
    }

    /// All monotone labellings, as block indices in label order.
    pub fn monotone_labellings(&self) -> Result<Vec<Vec<usize>>> {
        let forest = self.nesting_forest()?;
        let s = self.block_count();
        let mut out = Vec::new();
        fn go(forest: &NestingForest, s: usize, order: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if order.len() == s {
                out.push(order.clone());
                return;
            }
            for b in 0..s {
                if !used[b] && forest.parent[b].is_none_or(|p| used[p]) {
                    used[b] = true;
                    order.push(b);
                    go(forest, s, order, used, out);
                    order.pop();
                    used[b] = false;
                }
            }
        }
        go(&forest, s, &mut Vec::new(), &mut vec![false; s], &mut out);
        Ok(out)
    }

    /// The product `Π_B value(a_B)` over blocks.
    pub fn block_product(&self, w: &Word, value: &mut impl FnMut(&Word) -> Result<Scalar>) -> Result<Scalar> {
        let mut acc = Scalar::one();
        for b in &self.blocks {
            let v = value(&w.pick(b))?;
            if v.is_zero() {
                return Ok(v);
            }
            acc *= v;
        }
        Ok(acc)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{}", format_block(b))?;
        }
        Ok(())
    }
}

pub fn format_block(block: &[usize]) -> String {
    let items: Vec<String> = block.iter().map(|p| (p + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Parent links between the blocks of a non-crossing partition: `V` is a
/// child of the innermost block `W` with `min W < min V` and `max V < max W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestingForest {
    parent: Vec<Option<usize>>,
}

impl NestingForest {
    pub fn parent(&self, block: usize) -> Option<usize> {
        self.parent[block]
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&b| self.parent[b].is_none()).collect()
    }

    pub fn children(&self, block: usize) -> Vec<usize> {
        (0..self.parent.len()).filter(|&b| self.parent[b] == Some(block)).collect()
    }

    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1usize; self.parent.len()];
        for b in 0..self.parent.len() {
            let mut p = self.parent[b];
            while let Some(q) = p {
                sizes[q] += 1;
                p = self.parent[q];
            }
        }
        sizes
    }

    /// Nested notation, e.g. `{1,4}({2,3}) {5}`.
    pub fn render(&self, partition: &SetPartition) -> String {
        fn tree(f: &NestingForest, p: &SetPartition, b: usize) -> String {
            let kids = f.children(b);
            let mut s = format_block(&p.blocks[b]);
            if !kids.is_empty() {
                let inner: Vec<String> = kids.iter().map(|&k| tree(f, p, k)).collect();
                s.push_str(&format!("({})", inner.join(" ")));
            }
            s
        }
        self.roots().iter().map(|&r| tree(self, partition, r)).collect::<Vec<_>>().join(" ")
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::OutOfRange(format!("n = {n} not in 1..={MAX_N}")));
    }
    Ok(())
}

/// Every set partition of `{0..n}` (restricted growth strings). Bell(n)
/// many; used as the brute-force reference for the filtered families.
pub fn enumerate_all(n: usize) -> Result<Vec<SetPartition>> {
    check_n(n)?;
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        let n = rgs.len();
        if i == n {
            let mut blocks = vec![Vec::new(); max + 1];
            for (p, &b) in rgs.iter().enumerate() {
                blocks[b].push(p);
            }
            out.push(SetPartition::canonical(n, blocks));
            return;
        }
        for b in 0..=max + 1 {
            rgs[i] = b;
            go(i + 1, max.max(b), rgs, out);
        }
    }
    go(1, 0, &mut rgs, &mut out);
    Ok(out)
}

/// Non-crossing partitions of the given sorted positions, generated by
/// choosing the block of the first position and recursing into the gaps it
/// leaves.
fn nc_on(positions: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = positions.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for mask in 0..(1u64 << rest.len()) {
        let mut block = vec![first];
        let mut gaps: Vec<Vec<usize>> = vec![Vec::new()];
        for (i, &p) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(p);
                gaps.push(Vec::new());
            } else {
                gaps.last_mut().unwrap().push(p);
            }
        }
        let mut partials: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for gap in gaps.iter().filter(|g| !g.is_empty()) {
            let sub = nc_on(gap);
            partials = partials
                .into_iter()
                .flat_map(|base| {
                    sub.iter().map(move |s| {
                        let mut b = base.clone();
                        b.extend(s.iter().cloned());
                        b
                    })
                })
                .collect();
        }
        out.extend(partials);
    }
    out
}

pub fn enumerate_nc(n: usize) -> Result<Vec<SetPartition>> {
    check_n(n)?;
    let positions: Vec<usize> = (0..n).collect();
    let mut out: Vec<SetPartition> = nc_on(&positions)
        .into_iter()
        .map(|blocks| SetPartition::canonical(n, blocks))
        .collect();
    out.sort();
    Ok(out)
}

pub fn enumerate_irreducible_nc(n: usize) -> Result<Vec<SetPartition>> {
    check_n(n)?;
    if n == 1 {
        return enumerate_nc(1);
    }
    // the outer block contains 0 and n-1; the inner positions form an
    // arbitrary non-crossing arrangement around it
    let inner: Vec<usize> = (1..n - 1).collect();
    let mut out = Vec::new();
    for mask in 0..(1u64 << inner.len()) {
        let mut block = vec![0];
        let mut gaps: Vec<Vec<usize>> = vec![Vec::new()];
        for (i, &p) in inner.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(p);
                gaps.push(Vec::new());
            } else {
                gaps.last_mut().unwrap().push(p);
            }
        }
        block.push(n - 1);
        let mut partials: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for gap in gaps.iter().filter(|g| !g.is_empty()) {
            let sub = nc_on(gap);
            partials = partials
                .into_iter()
                .flat_map(|base| {
                    sub.iter().map(move |s| {
                        let mut b = base.clone();
                        b.extend(s.iter().cloned());
                        b
                    })
                })
                .collect();
        }
        out.extend(partials.into_iter().map(|b| SetPartition::canonical(n, b)));
    }
    out.sort();
    Ok(out)
}

/// Interval partitions, one per composition of `n`.
pub fn enumerate_interval(n: usize) -> Result<Vec<SetPartition>> {
    check_n(n)?;
    let mut out: Vec<SetPartition> = (0..(1u64 << (n - 1)))
        .map(|cuts| {
            let mut blocks = vec![vec![0]];
            for p in 1..n {
                if cuts & (1 << (p - 1)) != 0 {
                    blocks.push(Vec::new());
                }
                blocks.last_mut().unwrap().push(p);
            }
            SetPartition::canonical(n, blocks)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A non-crossing partition together with a monotone labelling of its
/// blocks: `order[i]` is the block carrying label `i + 1`. Enclosing blocks
/// get smaller labels than the blocks nested inside them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonePartition {
    pub partition: SetPartition,
    pub order: Vec<usize>,
}

impl MonotonePartition {
    /// Blocks listed in label order.
    pub fn labelled_blocks(&self) -> Vec<Vec<usize>> {
        self.order.iter().map(|&b| self.partition.blocks[b].clone()).collect()
    }
}

impl fmt::Display for MonotonePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.labelled_blocks().iter().map(|b| format_block(b)).collect();
        write!(f, "{}", blocks.join("<"))
    }
}

pub fn enumerate_monotone(n: usize, q: usize) -> Result<Vec<MonotonePartition>> {
    check_n(n)?;
    if q == 0 || q > n {
        return Err(Error::OutOfRange(format!("q = {q} not in 1..={n}")));
    }
    let mut out = Vec::new();
    for partition in enumerate_nc(n)?.into_iter().filter(|p| p.block_count() == q) {
        for order in partition.monotone_labellings()? {
            out.push(MonotonePartition { partition: partition.clone(), order });
        }
    }
    Ok(out)
}

/// The partitions summed over by [`partition_sum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Nc,
    IrreducibleNc,
    Interval,
    /// Non-crossing partitions with `m(γ)/s!` (monotone labellings over the
    /// number of orders of `s` blocks).
    Monotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    One,
    InverseTreeFactorial,
    /// `(-1)^{|π|-1}`
    Alternating,
    /// `(-1)^{|π|-1} / τ(π)!`
    AlternatingInverseTreeFactorial,
}

fn family_members(family: Family, n: usize) -> Result<Vec<SetPartition>> {
    match family {
        Family::Nc | Family::Monotone => enumerate_nc(n),
        Family::IrreducibleNc => enumerate_irreducible_nc(n),
        Family::Interval => enumerate_interval(n),
    }
}

fn weight_of(p: &SetPartition, family: Family, weight: Weight) -> Result<Scalar> {
    let sign = if p.block_count() % 2 == 1 { int(1) } else { int(-1) };
    let mut w = match weight {
        Weight::One => int(1),
        Weight::InverseTreeFactorial => Scalar::one() / int(p.tree_factorial()? as i64),
        Weight::Alternating => sign,
        Weight::AlternatingInverseTreeFactorial => sign / int(p.tree_factorial()? as i64),
    };
    if family == Family::Monotone {
        w = w * int(p.monotone_labelling_count()? as i64) / factorial(p.block_count());
    }
    Ok(w)
}

/// Weighted partition lists per `(family, weight, n)`, built once.
#[derive(Default)]
pub struct PartitionSums {
    cache: HashMap<(Family, Weight, usize), Vec<(SetPartition, Scalar)>>,
}

impl PartitionSums {
    pub fn new() -> Self {
        Self::default()
    }

    fn members(&mut self, family: Family, weight: Weight, n: usize) -> Result<&[(SetPartition, Scalar)]> {
        match self.cache.entry((family, weight, n)) {
            Entry::Occupied(e) => Ok(e.into_mut()),
            Entry::Vacant(e) => {
                let list = family_members(family, n)?
                    .into_iter()
                    .map(|p| {
                        let w = weight_of(&p, family, weight)?;
                        Ok((p, w))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(e.insert(list))
            }
        }
    }

    /// `Σ_{π ∈ family(n)} weight(π) · Π_{B ∈ π} value(a_B)` with `n = deg(w)`.
    pub fn sum_with(
        &mut self,
        w: &Word,
        family: Family,
        weight: Weight,
        mut value: impl FnMut(&Word) -> Result<Scalar>,
    ) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (p, c) in self.members(family, weight, w.degree())? {
            acc += c * p.block_product(w, &mut value)?;
        }
        Ok(acc)
    }

    pub fn sum(&mut self, table: &WordTable, w: &Word, family: Family, weight: Weight) -> Result<Scalar> {
        self.sum_with(w, family, weight, |b| table.get(b).cloned())
    }
}

/// One-off partition sum over `table`; see [`PartitionSums`] for repeated use.
pub fn partition_sum(table: &WordTable, w: &Word, family: Family, weight: Weight) -> Result<Scalar> {
    PartitionSums::new().sum(table, w, family, weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::frac;

    fn p(s: &str) -> SetPartition {
        SetPartition::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let x = p("{2,3}{1,4}");
        assert_eq!(x.to_string(), "{1,4}{2,3}");
        assert_eq!(x.blocks(), &[vec![0, 3], vec![1, 2]]);
        assert!(SetPartition::parse("{1,2}{2}").is_err());
        assert!(SetPartition::parse("{1}{3}").is_err());
        assert!(SetPartition::parse("{0}").is_err());
    }

    #[test]
    fn crossing_examples() {
        assert!(p("{1,3}{2}").is_noncrossing());
        assert!(!p("{1,3}{2,4}").is_noncrossing());
        assert!(p("{1,2,3,4}").is_noncrossing());
        assert!(!p("{1,4}{2,5}{3}").is_noncrossing());
        assert!(p("{1,5}{2,4}{3}").is_noncrossing());
    }

    #[test]
    fn family_examples() {
        assert_eq!(enumerate_nc(3).unwrap().len(), 5);
        assert_eq!(enumerate_nc(4).unwrap().len(), 14);
        assert_eq!(enumerate_interval(3).unwrap().len(), 4);
        let irr: Vec<String> = enumerate_irreducible_nc(3).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(irr, vec!["{1,2,3}", "{1,3}{2}"]);
        assert!(enumerate_nc(0).is_err());
        assert!(enumerate_nc(MAX_N + 1).is_err());
    }

    #[test]
    fn tree_factorial_examples() {
        assert_eq!(p("{1,2,3}").tree_factorial().unwrap(), 1);
        assert_eq!(p("{1,3}{2}").tree_factorial().unwrap(), 2);
        assert_eq!(p("{1}{2}{3}").tree_factorial().unwrap(), 1);
        assert_eq!(p("{1}{2}{3}").monotone_labelling_count().unwrap(), 6);
        assert_eq!(p("{1,3}{2}").monotone_labelling_count().unwrap(), 1);
        assert_eq!(p("{1,4}{2,3}").monotone_labelling_count().unwrap(), 1);
        assert_eq!(p("{1,2}{3,4}").monotone_labelling_count().unwrap(), 2);
        assert!(p("{1,3}{2,4}").tree_factorial().is_err());
        assert!(p("{1,3}{2,4}").monotone_labelling_count().is_err());
    }

    #[test]
    fn nesting_forest_shape() {
        let x = p("{1,6}{2,3}{4,5}{7}");
        let f = x.nesting_forest().unwrap();
        assert_eq!(f.roots(), vec![0, 3]);
        assert_eq!(f.children(0), vec![1, 2]);
        assert_eq!(f.render(&x), "{1,6}({2,3} {4,5}) {7}");
        assert_eq!(x.tree_factorial().unwrap(), 3);
        let deep = p("{1,6}{2,5}{3,4}");
        assert_eq!(deep.nesting_forest().unwrap().parent(2), Some(1));
        assert_eq!(deep.tree_factorial().unwrap(), 6);
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(enumerate_monotone(2, 2).unwrap().len(), 2);
        assert_eq!(enumerate_monotone(3, 2).unwrap().len(), 5);
        let nested = p("{1,3}{2}");
        let labels = nested.monotone_labellings().unwrap();
        assert_eq!(labels, vec![vec![0, 1]]);
        let m = MonotonePartition { partition: nested, order: vec![0, 1] };
        assert_eq!(m.to_string(), "{1,3}<{2}");
        assert!(enumerate_monotone(3, 4).is_err());
    }

    #[test]
    fn partition_sum_examples() {
        let v = [frac(2, 3), frac(-1, 4), frac(5, 2)];
        let table = WordTable::from_fn(1, 3, |w| v[w.degree() - 1].clone());
        let a3 = Word::power(3);
        let c1 = &v[0] * &v[0] * &v[0];
        assert_eq!(
            partition_sum(&table, &a3, Family::Nc, Weight::One).unwrap(),
            &v[2] + int(3) * &v[0] * &v[1] + &c1
        );
        assert_eq!(
            partition_sum(&table, &a3, Family::Interval, Weight::One).unwrap(),
            &v[2] + int(2) * &v[0] * &v[1] + &c1
        );
        assert_eq!(
            partition_sum(&table, &a3, Family::IrreducibleNc, Weight::AlternatingInverseTreeFactorial).unwrap(),
            &v[2] - frac(1, 2) * &v[0] * &v[1]
        );
        assert!(partition_sum(&table, &Word::power(4), Family::Nc, Weight::One).is_err());
    }
}
