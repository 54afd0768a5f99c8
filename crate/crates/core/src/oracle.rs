// SPDX-License-Identifier: Apache-2.0

//! Brute-force ground truth for small inputs: an explicit map model of
//! valued sum-of-products expressions and a depth-first path enumerator.
//!
//! Nothing here touches decision diagrams, so the symbolic engine can be
//! checked against it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::Dag;
use crate::pathdb::Mode;
use crate::vsop::{CmpOp, Term};
use crate::zbdd::VarId;

/// Largest number of paths [`enumerate_paths`] will list.
pub const PATH_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("path explosion: more than {PATH_GUARD} paths")]
    PathExplosion,
}

/// Combination → nonzero value. Combinations are kept as sorted,
/// duplicate-free variable lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplicitVsop {
    terms: BTreeMap<Vec<VarId>, i128>,
}

fn canonical(combo: &[VarId]) -> Vec<VarId> {
    let set: BTreeSet<VarId> = combo.iter().copied().collect();
    set.into_iter().collect()
}

fn is_subset(small: &[VarId], large: &[VarId]) -> bool {
    small.iter().all(|v| large.binary_search(v).is_ok())
}

/// Order in which a 1-edge-first depth-first walk meets two combinations:
/// at the first position where they differ, the one holding the smaller
/// variable comes first, and a combination precedes its own prefix.
pub fn dfs_order(a: &[VarId], b: &[VarId]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp(y);
        }
    }
    b.len().cmp(&a.len())
}

impl ExplicitVsop {
    pub fn term(value: i128, combo: &[VarId]) -> Self {
        let mut m = Self::default();
        m.accumulate(canonical(combo), value);
        m
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut m = Self::default();
        for t in terms {
            m.accumulate(canonical(&t.combo), t.value);
        }
        m
    }

    fn accumulate(&mut self, combo: Vec<VarId>, value: i128) {
        let slot = self.terms.entry(combo).or_insert(0);
        *slot += value;
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn get(&self, combo: &[VarId]) -> i128 {
        self.terms.get(&canonical(combo)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<VarId>, &i128)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn support(&self) -> BTreeSet<Vec<VarId>> {
        self.terms.keys().cloned().collect()
    }

    fn unit(combos: impl IntoIterator<Item = Vec<VarId>>) -> Self {
        ExplicitVsop {
            terms: combos.into_iter().map(|c| (c, 1)).collect(),
        }
    }

    fn keep(&self, pred: impl Fn(&[VarId], i128) -> bool) -> Self {
        ExplicitVsop {
            terms: self
                .terms
                .iter()
                .filter(|(c, v)| pred(c, **v))
                .map(|(c, v)| (c.clone(), *v))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.accumulate(c.clone(), *v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        ExplicitVsop {
            terms: self.terms.iter().map(|(c, v)| (c.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (c1, v1) in &self.terms {
            for (c2, v2) in &other.terms {
                let mut c: Vec<VarId> = c1.iter().chain(c2).copied().collect();
                c.sort_unstable();
                c.dedup();
                out.accumulate(c, v1 * v2);
            }
        }
        out
    }

    /// Unit-valued combinations (present on either side) where
    /// `self(c) op other(c)`.
    pub fn compare(&self, op: CmpOp, other: &Self) -> Self {
        let universe: BTreeSet<Vec<VarId>> = self.support().union(&other.support()).cloned().collect();
        Self::unit(
            universe
                .into_iter()
                .filter(|c| op.holds(self.get(c), other.get(c))),
        )
    }

    pub fn filter_const(&self, op: CmpOp, k: i128) -> Self {
        Self::unit(
            self.terms
                .iter()
                .filter(|(_, v)| op.holds(**v, k))
                .map(|(c, _)| c.clone()),
        )
    }

    pub fn terms_op(&self, op: CmpOp, k: i128) -> Self {
        self.keep(|_, v| op.holds(v, k))
    }

    pub fn filter_then(&self, selector: &Self) -> Self {
        self.keep(|c, _| selector.terms.contains_key(c))
    }

    pub fn permit(&self, other: &Self) -> Self {
        self.keep(|c, _| other.terms.keys().any(|d| is_subset(c, d)))
    }

    pub fn restrict(&self, other: &Self) -> Self {
        self.keep(|c, _| other.terms.keys().any(|d| is_subset(d, c)))
    }

    pub fn count_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_val(&self) -> i128 {
        self.terms.values().sum()
    }

    pub fn max_val(&self) -> Option<i128> {
        self.terms.values().copied().max()
    }

    pub fn min_val(&self) -> Option<i128> {
        self.terms.values().copied().min()
    }

    fn cover(&self, value: Option<i128>) -> Option<Term> {
        let value = value?;
        self.terms
            .iter()
            .filter(|(_, v)| **v == value)
            .map(|(c, _)| c)
            .min_by(|a, b| dfs_order(a, b))
            .map(|c| Term {
                combo: c.clone(),
                value,
            })
    }

    pub fn max_cover(&self) -> Option<Term> {
        self.cover(self.max_val())
    }

    pub fn min_cover(&self) -> Option<Term> {
        self.cover(self.min_val())
    }
}

/// One source-to-sink path found by [`enumerate_paths`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExplicitPath {
    pub vertices: Vec<usize>,
    pub length: i128,
}

/// Every source-to-sink path of `dag`, by plain depth-first search.
pub fn enumerate_paths(dag: &Dag) -> Result<Vec<ExplicitPath>, OracleError> {
    let mut out = Vec::new();
    for s in dag.sources() {
        if dag.is_sink(s) {
            continue;
        }
        let mut stack = vec![(vec![s], 0i128)];
        while let Some((path, length)) = stack.pop() {
            let last = *path.last().expect("paths are never empty");
            if dag.is_sink(last) {
                if out.len() == PATH_GUARD {
                    return Err(OracleError::PathExplosion);
                }
                out.push(ExplicitPath {
                    vertices: path,
                    length,
                });
                continue;
            }
            for &(next, w) in dag.successors(last) {
                let mut extended = path.clone();
                extended.push(next);
                stack.push((extended, length + w as i128));
            }
        }
    }
    Ok(out)
}

/// Tie-inclusive top-`k` by sorting: every path at least as good as the
/// `k`-th best.
pub fn reference_top_k(paths: &[ExplicitPath], k: usize, mode: Mode) -> Vec<ExplicitPath> {
    let mut sorted = paths.to_vec();
    match mode {
        Mode::Longest => sorted.sort_by_key(|p| std::cmp::Reverse(p.length)),
        Mode::Shortest => sorted.sort_by_key(|p| p.length),
    }
    if k == 0 || sorted.is_empty() {
        return Vec::new();
    }
    let cut = sorted[k.min(sorted.len()) - 1].length;
    sorted
        .into_iter()
        .filter(|p| match mode {
            Mode::Longest => p.length >= cut,
            Mode::Shortest => p.length <= cut,
        })
        .collect()
}

/// Length of the `k`-th best path, counting ties separately.
pub fn reference_kth_length(paths: &[ExplicitPath], k: usize, mode: Mode) -> Option<i128> {
    let mut lengths: Vec<i128> = paths.iter().map(|p| p.length).collect();
    lengths.sort_unstable();
    if mode == Mode::Longest {
        lengths.reverse();
    }
    lengths.get(k.checked_sub(1)?).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse;

    const A: VarId = VarId(0);
    const B: VarId = VarId(1);
    const C: VarId = VarId(2);

    fn lengths(paths: &[ExplicitPath]) -> Vec<i128> {
        let mut l: Vec<i128> = paths.iter().map(|p| p.length).collect();
        l.sort_unstable();
        l
    }

    fn with_lengths(ls: &[i128]) -> Vec<ExplicitPath> {
        ls.iter()
            .enumerate()
            .map(|(i, &length)| ExplicitPath {
                vertices: vec![i],
                length,
            })
            .collect()
    }

    #[test]
    fn example_graph_paths() {
        let dag = parse("v2 v7 4\nv3 v7 4\nv4 v8 4\nv7 v8 2\n").unwrap();
        let paths = enumerate_paths(&dag).unwrap();
        assert_eq!(lengths(&paths), [4, 6, 6]);
        assert_eq!(enumerate_paths(&parse("a b 3").unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn layered_count() {
        let dag = crate::generate::layered(5, 3, 1, 1, 0).unwrap();
        let paths = enumerate_paths(&dag).unwrap();
        assert_eq!(paths.len(), 81);
        assert!(paths.iter().all(|p| p.length == 4));
    }

    #[test]
    fn guard_trips() {
        // 2^21 paths through a ladder of 21 diamonds.
        let mut text = String::new();
        for i in 0..21 {
            text += &format!("n{i} a{i} 1\nn{i} b{i} 1\na{i} n{} 1\nb{i} n{} 1\n", i + 1, i + 1);
        }
        let dag = parse(&text).unwrap();
        assert_eq!(enumerate_paths(&dag), Err(OracleError::PathExplosion));
    }

    #[test]
    fn top_k_reference_hand_cases() {
        let paths = with_lengths(&[5, 3, 3, 1]);
        assert_eq!(lengths(&reference_top_k(&paths, 2, Mode::Longest)), [3, 3, 5]);
        assert_eq!(reference_top_k(&paths, 9, Mode::Longest).len(), 4);
        assert_eq!(lengths(&reference_top_k(&paths, 1, Mode::Longest)), [5]);
        assert_eq!(lengths(&reference_top_k(&paths, 2, Mode::Shortest)), [1, 3, 3]);
        assert_eq!(lengths(&reference_top_k(&paths, 1, Mode::Shortest)), [1]);
        assert!(reference_top_k(&paths, 0, Mode::Longest).is_empty());
        assert_eq!(reference_kth_length(&paths, 2, Mode::Longest), Some(3));
        assert_eq!(reference_kth_length(&paths, 4, Mode::Longest), Some(1));
        assert_eq!(reference_kth_length(&paths, 5, Mode::Longest), None);
        assert_eq!(reference_kth_length(&paths, 1, Mode::Shortest), Some(1));
    }

    #[test]
    fn explicit_reference_arithmetic() {
        let f = ExplicitVsop::term(4, &[A, B, C])
            .add(&ExplicitVsop::term(5, &[A, B]))
            .add(&ExplicitVsop::term(3, &[B, C]))
            .add(&ExplicitVsop::term(1, &[A]));
        let g = ExplicitVsop::term(5, &[A, B]).add(&ExplicitVsop::term(-3, &[B, C]));
        let want = ExplicitVsop::term(4, &[A, B, C])
            .add(&ExplicitVsop::term(10, &[A, B]))
            .add(&ExplicitVsop::term(1, &[A]));
        assert_eq!(f.add(&g), want);
        assert_eq!(f.mul(&ExplicitVsop::term(1, &[])), f);
        assert_eq!(f.max_cover().unwrap().combo, [A, B]);
        assert_eq!(f.min_cover().unwrap().combo, [A]);
        assert!(f.add(&f.neg()).is_zero());
    }

    #[test]
    fn dfs_order_matches_enumeration_order() {
        // [abc, ab, bc] is the 1-edge-first order for a < b < c.
        let mut combos = vec![vec![B, C], vec![A, B], vec![A, B, C]];
        combos.sort_by(|a, b| dfs_order(a, b));
        assert_eq!(combos, [vec![A, B, C], vec![A, B], vec![B, C]]);
    }
}
