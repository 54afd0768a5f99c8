// SPDX-License-Identifier: Apache-2.0

//! Valued sum-of-products expressions.
//!
//! A [`Vsop`] maps combinations to nonzero integers. Values are stored in
//! base −2: digit `i` is the ZBDD of every combination whose value has a 1 in
//! position `i`, so `value(c) = Σ d_i(c)·(−2)^i`. Negative values need no sign
//! digit, and every operation works digit-wise through set operations on the
//! underlying [`NodeStore`] without listing terms.
//!
//! Addition is the ordinary one (`a + a = 2a`); multiplication is idempotent
//! on variables (`a × a = a`).
//!
//! ```
//! use kpaths::vsop::Vsop;
//! use kpaths::zbdd::{NodeStore, VarId};
//!
//! let mut store = NodeStore::new();
//! let (a, b) = (VarId(0), VarId(1));
//! let x = Vsop::from_term(&mut store, 3, &[a, b]);
//! let y = Vsop::from_term(&mut store, -5, &[a]);
//! let sum = x.add(&mut store, &y);
//!
//! assert_eq!(sum.max_val(&mut store).unwrap(), 3);
//! assert_eq!(sum.min_val(&mut store).unwrap(), -5);
//! assert_eq!(sum.count_terms(&mut store), 2u32.into());
//! ```

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

use crate::zbdd::{NodeRef, NodeStore, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VsopError {
    #[error("empty expression")]
    EmptyExpression,
    #[error("not a constant expression")]
    NotConstant,
    #[error("value does not fit in a 128-bit integer")]
    Overflow,
}

/// Relational operator used by comparisons and filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];

    pub fn holds<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

/// One (combination, value) pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub combo: Vec<VarId>,
    pub value: i128,
}

/// Base −2 digits of `value`, least significant first.
pub fn negabinary_digits(mut value: i128) -> Vec<bool> {
    let mut digits = Vec::new();
    while value != 0 {
        let bit = value.rem_euclid(2);
        digits.push(bit == 1);
        value = (value - bit) / -2;
    }
    digits
}

/// Inverse of [`negabinary_digits`].
pub fn negabinary_value(digits: &[bool]) -> Option<i128> {
    let mut value: i128 = 0;
    for &d in digits.iter().rev() {
        value = value.checked_mul(-2)?.checked_add(d as i128)?;
    }
    Some(value)
}

/// An integer-valued family of combinations, stored as base −2 digit ZBDDs.
///
/// The highest digit is never empty, so two equal expressions in the same
/// store have identical digit vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Vsop {
    digits: Vec<NodeRef>,
}

impl Vsop {
    pub fn zero() -> Self {
        Vsop { digits: Vec::new() }
    }

    fn normalized(mut digits: Vec<NodeRef>) -> Self {
        while digits.last() == Some(&NodeRef::EMPTY) {
            digits.pop();
        }
        Vsop { digits }
    }

    /// Digit sets `F_0, F_1, …`, least significant first.
    pub fn digits(&self) -> &[NodeRef] {
        &self.digits
    }

    pub fn from_digits(digits: Vec<NodeRef>) -> Self {
        Self::normalized(digits)
    }

    fn digit(&self, i: usize) -> NodeRef {
        self.digits.get(i).copied().unwrap_or(NodeRef::EMPTY)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Every combination of `set` with value `value`.
    pub fn scaled_set(set: NodeRef, value: i128) -> Self {
        if set == NodeRef::EMPTY {
            return Self::zero();
        }
        let digits = negabinary_digits(value)
            .into_iter()
            .map(|d| if d { set } else { NodeRef::EMPTY })
            .collect();
        Self::normalized(digits)
    }

    /// Every combination of `set` with value 1.
    pub fn from_set(set: NodeRef) -> Self {
        Self::scaled_set(set, 1)
    }

    pub fn constant(value: i128) -> Self {
        Self::scaled_set(NodeRef::UNIT, value)
    }

    pub fn from_term(store: &mut NodeStore, value: i128, combo: &[VarId]) -> Self {
        let set = store.combination(combo);
        Self::scaled_set(set, value)
    }

    /// The set of combinations with a nonzero value.
    pub fn support(&self, store: &mut NodeStore) -> NodeRef {
        self.digits
            .iter()
            .fold(NodeRef::EMPTY, |acc, &d| store.union(acc, d))
    }

    /// Multiplies every value by −2.
    pub fn shifted(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.push(NodeRef::EMPTY);
        digits.extend_from_slice(&self.digits);
        Vsop { digits }
    }

    pub fn add(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let width = self.digits.len().max(other.digits.len());
        let mut out = Vec::with_capacity(width + 2);
        // Per-combination carry into the current position: +1 or −1.
        let mut carry_pos = NodeRef::EMPTY;
        let mut carry_neg = NodeRef::EMPTY;
        let mut i = 0;
        while i < width || carry_pos != NodeRef::EMPTY || carry_neg != NodeRef::EMPTY {
            let (a, b) = (self.digit(i), other.digit(i));
            // t = a + b + carry_pos − carry_neg, in −1..=3.
            let both = store.intersect(a, b);
            let either = store.union(a, b);
            let one_of = store.diff(either, both);
            let odd_ones = store.xor(one_of, carry_pos);
            let pair_with_carry = store.intersect(one_of, carry_pos);
            let two_or_more = store.union(both, pair_with_carry);
            let three = store.intersect(both, carry_pos);
            let any_one = store.union(either, carry_pos);

            out.push(store.xor(odd_ones, carry_neg));
            // t = −1 carries +1; t ∈ {2, 3} carries −1.
            let next_pos = store.diff(carry_neg, any_one);
            let two_plain = store.diff(two_or_more, carry_neg);
            let three_minus = store.intersect(three, carry_neg);
            carry_neg = store.union(two_plain, three_minus);
            carry_pos = next_pos;
            i += 1;
        }
        Self::normalized(out)
    }

    pub fn neg(&self, store: &mut NodeStore) -> Vsop {
        // (−2)·x + x = −x
        self.shifted().add(store, self)
    }

    pub fn sub(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        let negated = other.neg(store);
        self.add(store, &negated)
    }

    /// Value of a constant expression; `None` when some combination is not
    /// the empty one.
    fn constant_digits(&self) -> Option<Vec<bool>> {
        self.digits
            .iter()
            .map(|&d| match d {
                NodeRef::EMPTY => Some(false),
                NodeRef::UNIT => Some(true),
                _ => None,
            })
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.constant_digits().is_some()
    }

    /// Multiplies every value by the constant whose digits are given.
    fn scale_by_digits(&self, store: &mut NodeStore, digits: &[bool]) -> Vsop {
        let mut acc = Vsop::zero();
        let mut shifted = self.clone();
        for &d in digits {
            if d {
                acc = acc.add(store, &shifted);
            }
            shifted = shifted.shifted();
        }
        acc
    }

    pub fn scale(&self, store: &mut NodeStore, factor: i128) -> Vsop {
        self.scale_by_digits(store, &negabinary_digits(factor))
    }

    fn top_var(&self, store: &NodeStore) -> Option<VarId> {
        self.digits.iter().filter_map(|&d| store.top_var(d)).min()
    }

    fn cofactors(&self, store: &mut NodeStore, v: VarId) -> (Vsop, Vsop) {
        let without = self.digits.iter().map(|&d| store.subset0(d, v)).collect();
        let with = self.digits.iter().map(|&d| store.subset1(d, v)).collect();
        (Self::normalized(without), Self::normalized(with))
    }

    /// Adds `v` to every combination, assuming no combination contains it.
    fn attach_fresh(&self, store: &mut NodeStore, v: VarId) -> Vsop {
        Self::normalized(self.digits.iter().map(|&d| store.attach(d, v)).collect())
    }

    /// `self × v`: adds `v` to every combination, merging values of
    /// combinations that collapse together.
    pub fn mul_var(&self, store: &mut NodeStore, v: VarId) -> Vsop {
        let (without, with) = self.cofactors(store, v);
        let lifted = without.attach_fresh(store, v);
        if with.is_zero() {
            return lifted;
        }
        let kept = with.attach_fresh(store, v);
        lifted.add(store, &kept)
    }

    pub fn mul(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        let mut memo = HashMap::new();
        self.mul_rec(store, other, &mut memo)
    }

    fn mul_rec(
        &self,
        store: &mut NodeStore,
        other: &Vsop,
        memo: &mut HashMap<(Vsop, Vsop), Vsop>,
    ) -> Vsop {
        if self.is_zero() || other.is_zero() {
            return Vsop::zero();
        }
        if let Some(k) = self.constant_digits() {
            return other.scale_by_digits(store, &k);
        }
        if let Some(k) = other.constant_digits() {
            return self.scale_by_digits(store, &k);
        }
        let key = if self.digits <= other.digits {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let v = match (self.top_var(store), other.top_var(store)) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!("non-constant expressions have a top variable"),
        };
        // (f0 + v·f1)(g0 + v·g1) = f0·g0 + v·(f0·g1 + f1·g0 + f1·g1)
        let (f0, f1) = self.cofactors(store, v);
        let (g0, g1) = other.cofactors(store, v);
        let low = f0.mul_rec(store, &g0, memo);
        let p = f0.mul_rec(store, &g1, memo);
        let q = f1.mul_rec(store, &g0, memo);
        let r = f1.mul_rec(store, &g1, memo);
        let high = p.add(store, &q).add(store, &r).attach_fresh(store, v);
        let result = low.add(store, &high);
        memo.insert(key, result.clone());
        result
    }

    /// Combinations with positive and with negative value.
    fn sign_sets(&self, store: &mut NodeStore) -> (NodeRef, NodeRef) {
        let (mut pos, mut neg, mut seen) = (NodeRef::EMPTY, NodeRef::EMPTY, NodeRef::EMPTY);
        // The highest nonzero digit fixes the sign: even positions are
        // positive, odd ones negative.
        for (i, &d) in self.digits.iter().enumerate().rev() {
            let fresh = store.diff(d, seen);
            if i % 2 == 0 {
                pos = store.union(pos, fresh);
            } else {
                neg = store.union(neg, fresh);
            }
            seen = store.union(seen, d);
        }
        (pos, neg)
    }

    /// Combinations of `universe` where `diff` (lhs − rhs) satisfies `op`
    /// against zero. `diff` must be supported inside `universe`.
    fn select(store: &mut NodeStore, universe: NodeRef, diff: &Vsop, op: CmpOp) -> NodeRef {
        let nonzero = diff.support(store);
        let (pos, neg) = diff.sign_sets(store);
        match op {
            CmpOp::Ne => nonzero,
            CmpOp::Gt => pos,
            CmpOp::Lt => neg,
            CmpOp::Eq => store.diff(universe, nonzero),
            CmpOp::Ge => {
                let eq = store.diff(universe, nonzero);
                store.union(eq, pos)
            }
            CmpOp::Le => {
                let eq = store.diff(universe, nonzero);
                store.union(eq, neg)
            }
        }
    }

    /// Unit-valued set of combinations `c` (appearing on either side) with
    /// `self(c) op other(c)`; a missing term counts as 0.
    pub fn compare(&self, store: &mut NodeStore, op: CmpOp, other: &Vsop) -> Vsop {
        let (lhs, rhs) = (self.support(store), other.support(store));
        let universe = store.union(lhs, rhs);
        let diff = self.sub(store, other);
        Self::from_set(Self::select(store, universe, &diff, op))
    }

    pub fn cmp_eq(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        self.compare(store, CmpOp::Eq, other)
    }

    pub fn cmp_ne(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        self.compare(store, CmpOp::Ne, other)
    }

    pub fn cmp_lt(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        self.compare(store, CmpOp::Lt, other)
    }

    pub fn cmp_le(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        self.compare(store, CmpOp::Le, other)
    }

    pub fn cmp_gt(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        self.compare(store, CmpOp::Gt, other)
    }

    pub fn cmp_ge(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        self.compare(store, CmpOp::Ge, other)
    }

    /// Combinations of `self` whose value satisfies `op` against `k`, as a
    /// set.
    pub fn select_const(&self, store: &mut NodeStore, op: CmpOp, k: i128) -> NodeRef {
        let universe = self.support(store);
        let shifted = self.shift_by_const(store, universe, k);
        Self::select(store, universe, &shifted, op)
    }

    /// Splits the terms into those below, equal to and above `k`, as sets.
    pub fn partition_const(&self, store: &mut NodeStore, k: i128) -> (NodeRef, NodeRef, NodeRef) {
        let universe = self.support(store);
        let shifted = self.shift_by_const(store, universe, k);
        let nonzero = shifted.support(store);
        let (above, below) = shifted.sign_sets(store);
        let equal = store.diff(universe, nonzero);
        (below, equal, above)
    }

    /// `self − k` on every term of `universe`.
    fn shift_by_const(&self, store: &mut NodeStore, universe: NodeRef, k: i128) -> Vsop {
        match k.checked_neg() {
            Some(minus_k) => {
                let offset = Self::scaled_set(universe, minus_k);
                self.add(store, &offset)
            }
            None => {
                let offset = Self::scaled_set(universe, k);
                self.sub(store, &offset)
            }
        }
    }

    /// Unit-valued selector of the terms whose value satisfies `op` against
    /// `k`.
    pub fn filter_const(&self, store: &mut NodeStore, op: CmpOp, k: i128) -> Vsop {
        Self::from_set(self.select_const(store, op, k))
    }

    /// Keeps the terms whose value satisfies `op` against the constant
    /// expression `k`, values preserved.
    pub fn terms_op(&self, store: &mut NodeStore, op: CmpOp, k: &Vsop) -> Result<Vsop, VsopError> {
        let k = k.get_int()?;
        let set = self.select_const(store, op, k);
        Ok(self.restrict_to(store, set))
    }

    /// Keeps the terms whose combination belongs to `set`.
    pub fn restrict_to(&self, store: &mut NodeStore, set: NodeRef) -> Vsop {
        Self::normalized(self.digits.iter().map(|&d| store.intersect(d, set)).collect())
    }

    /// Drops the terms whose combination belongs to `set`.
    pub fn remove(&self, store: &mut NodeStore, set: NodeRef) -> Vsop {
        Self::normalized(self.digits.iter().map(|&d| store.diff(d, set)).collect())
    }

    /// Terms of `self` whose combination appears in `selector`, with the
    /// values of `self`.
    pub fn filter_then(&self, store: &mut NodeStore, selector: &Vsop) -> Vsop {
        let set = selector.support(store);
        self.restrict_to(store, set)
    }

    /// Terms whose combination is a subset of some combination of `other`.
    pub fn permit(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        let set = other.support(store);
        Self::normalized(self.digits.iter().map(|&d| store.permit(d, set)).collect())
    }

    /// Terms whose combination is a superset of some combination of `other`.
    pub fn restrict(&self, store: &mut NodeStore, other: &Vsop) -> Vsop {
        let set = other.support(store);
        Self::normalized(self.digits.iter().map(|&d| store.restrict(d, set)).collect())
    }

    pub fn count_terms(&self, store: &mut NodeStore) -> BigUint {
        let s = self.support(store);
        store.count(s)
    }

    /// Sum of all term values.
    pub fn total_val(&self, store: &mut NodeStore) -> BigInt {
        let mut total = BigInt::zero();
        let mut weight = BigInt::from(1);
        for &d in &self.digits {
            total += &weight * BigInt::from(store.count(d));
            weight *= -2;
        }
        total
    }

    /// The extremal value and the set of combinations attaining it.
    ///
    /// Scanning from the top digit down, a digit of weight `(−2)^i` outweighs
    /// every combination of lower digits, so greedily keeping the
    /// combinations with the better digit is exact.
    pub fn extreme(&self, store: &mut NodeStore, maximum: bool) -> Result<(i128, NodeRef), VsopError> {
        if self.is_zero() {
            return Err(VsopError::EmptyExpression);
        }
        let mut candidates = self.support(store);
        let mut chosen = vec![false; self.digits.len()];
        for i in (0..self.digits.len()).rev() {
            let positive_weight = i % 2 == 0;
            let want_one = positive_weight == maximum;
            let with = store.intersect(candidates, self.digits[i]);
            let without = store.diff(candidates, self.digits[i]);
            let (preferred, other) = if want_one { (with, without) } else { (without, with) };
            if preferred != NodeRef::EMPTY {
                candidates = preferred;
                chosen[i] = want_one;
            } else {
                candidates = other;
                chosen[i] = !want_one;
            }
        }
        let value = negabinary_value(&chosen).ok_or(VsopError::Overflow)?;
        Ok((value, candidates))
    }

    pub fn max_val(&self, store: &mut NodeStore) -> Result<i128, VsopError> {
        self.extreme(store, true).map(|(v, _)| v)
    }

    pub fn min_val(&self, store: &mut NodeStore) -> Result<i128, VsopError> {
        self.extreme(store, false).map(|(v, _)| v)
    }

    /// A maximum-valued term; ties go to the first combination in
    /// 1-edge-first depth-first order.
    pub fn max_cover(&self, store: &mut NodeStore) -> Result<Term, VsopError> {
        let (value, set) = self.extreme(store, true)?;
        Ok(Self::first_term(store, set, value))
    }

    /// A minimum-valued term, with the same tie-break as [`Vsop::max_cover`].
    pub fn min_cover(&self, store: &mut NodeStore) -> Result<Term, VsopError> {
        let (value, set) = self.extreme(store, false)?;
        Ok(Self::first_term(store, set, value))
    }

    fn first_term(store: &NodeStore, set: NodeRef, value: i128) -> Term {
        let combo = store
            .enumerate(set, 1)
            .pop()
            .expect("extremal set is never empty");
        Term { combo, value }
    }

    /// Value of a constant expression.
    pub fn get_int(&self) -> Result<i128, VsopError> {
        let digits = self.constant_digits().ok_or(VsopError::NotConstant)?;
        negabinary_value(&digits).ok_or(VsopError::Overflow)
    }

    /// Value of `combo`, 0 when it is not a term.
    pub fn value_of(&self, store: &NodeStore, combo: &[VarId]) -> Result<i128, VsopError> {
        let digits: Vec<bool> = self.digits.iter().map(|&d| store.contains(d, combo)).collect();
        negabinary_value(&digits).ok_or(VsopError::Overflow)
    }

    /// Up to `limit` terms in 1-edge-first depth-first order of the support.
    pub fn terms(&self, store: &mut NodeStore, limit: usize) -> Result<Vec<Term>, VsopError> {
        let support = self.support(store);
        store
            .enumerate(support, limit)
            .into_iter()
            .map(|combo| {
                let value = self.value_of(store, &combo)?;
                Ok(Term { combo, value })
            })
            .collect()
    }
}
