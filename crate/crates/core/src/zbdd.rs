// SPDX-License-Identifier: Apache-2.0

//! Zero-suppressed binary decision diagrams.
//!
//! A [`NodeStore`] owns every node. Nodes are hash-consed through a unique
//! table, so two [`NodeRef`]s are equal exactly when they denote the same
//! family of combinations. Every combination is a set of [`VarId`]s; a
//! variable with a smaller ordinal sits nearer the root.
//!
//! ```
//! use kpaths::zbdd::{NodeStore, VarId};
//!
//! let mut store = NodeStore::new();
//! let (a, b, c) = (VarId(0), VarId(1), VarId(2));
//! let ab = store.combination(&[a, b]);
//! let bc = store.combination(&[b, c]);
//! let abc = store.combination(&[a, b, c]);
//! let tail = store.union(bc, abc);
//! let f = store.union(ab, tail);
//!
//! assert_eq!(store.count(f), 3u32.into());
//! assert_eq!(store.enumerate(f, 10), vec![vec![a, b, c], vec![a, b], vec![b, c]]);
//! ```

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

/// Position of an item in the global variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Handle to a node (or terminal) inside a [`NodeStore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef(u32);

impl NodeRef {
    /// The empty family.
    pub const EMPTY: NodeRef = NodeRef(0);
    /// The family holding only the empty combination.
    pub const UNIT: NodeRef = NodeRef(1);

    pub fn is_terminal(self) -> bool {
        self.0 < 2
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

/// An internal node. `lo` holds the combinations without `var`, `hi` those
/// with it (with `var` removed).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZbddNode {
    pub var: VarId,
    pub lo: NodeRef,
    pub hi: NodeRef,
}

/// Panic payload raised when a store configured with
/// [`NodeStore::with_node_limit`] would exceed its limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeLimitExceeded {
    pub limit: usize,
}

impl fmt::Display for NodeLimitExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZBDD node limit of {} exceeded", self.limit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Union,
    Intersect,
    Diff,
    Attach,
    Subset0,
    Subset1,
    Permit,
    Restrict,
}

const TERMINAL_LEVEL: u32 = u32::MAX;
const DEFAULT_CACHE_CAPACITY: usize = 1 << 22;

/// Owner of all diagram nodes, the unique table and the operation cache.
pub struct NodeStore {
    nodes: Vec<ZbddNode>,
    unique: FxHashMap<(u32, u32, u32), NodeRef>,
    cache: FxHashMap<(Op, u32, u32), NodeRef>,
    cache_capacity: usize,
    counts: FxHashMap<NodeRef, BigUint>,
    node_limit: Option<usize>,
}

impl Default for NodeStore {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for NodeStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NodeStore")
            .field("nodes", &self.node_count())
            .field("cached", &self.cache.len())
            .finish()
    }
}

impl NodeStore {
    pub fn new() -> Self {
        // Slots 0 and 1 are the terminals; their fields are never read.
        let terminal = ZbddNode {
            var: VarId(TERMINAL_LEVEL),
            lo: NodeRef::EMPTY,
            hi: NodeRef::EMPTY,
        };
        NodeStore {
            nodes: vec![terminal, terminal],
            unique: FxHashMap::default(),
            cache: FxHashMap::default(),
            cache_capacity: DEFAULT_CACHE_CAPACITY,
            counts: FxHashMap::default(),
            node_limit: None,
        }
    }

    /// A store that panics with [`NodeLimitExceeded`] once more than `limit`
    /// internal nodes would be allocated.
    pub fn with_node_limit(limit: usize) -> Self {
        NodeStore {
            node_limit: Some(limit),
            ..Self::new()
        }
    }

    /// Caps the number of memoized operation results. The cache is flushed
    /// when it fills up.
    pub fn set_cache_capacity(&mut self, capacity: usize) {
        self.cache_capacity = capacity;
        self.cache.clear();
    }

    /// Number of internal nodes allocated so far.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn node(&self, r: NodeRef) -> Option<ZbddNode> {
        if r.is_terminal() {
            None
        } else {
            Some(self.nodes[r.0 as usize])
        }
    }

    pub fn top_var(&self, r: NodeRef) -> Option<VarId> {
        self.node(r).map(|n| n.var)
    }

    #[inline]
    fn level(&self, r: NodeRef) -> u32 {
        self.nodes[r.0 as usize].var.0
    }

    #[inline]
    fn get(&self, r: NodeRef) -> ZbddNode {
        self.nodes[r.0 as usize]
    }

    /// Returns the canonical node for `(var, lo, hi)`, applying the
    /// zero-suppression rule.
    pub fn mk_node(&mut self, var: VarId, lo: NodeRef, hi: NodeRef) -> NodeRef {
        if hi == NodeRef::EMPTY {
            return lo;
        }
        debug_assert!(var.0 < self.level(lo) && var.0 < self.level(hi));
        let key = (var.0, lo.0, hi.0);
        if let Some(&r) = self.unique.get(&key) {
            return r;
        }
        if let Some(limit) = self.node_limit {
            if self.node_count() >= limit {
                std::panic::panic_any(NodeLimitExceeded { limit });
            }
        }
        let r = NodeRef(u32::try_from(self.nodes.len()).expect("node index overflow"));
        self.nodes.push(ZbddNode { var, lo, hi });
        self.unique.insert(key, r);
        r
    }

    fn cached(&self, op: Op, x: NodeRef, y: u32) -> Option<NodeRef> {
        self.cache.get(&(op, x.0, y)).copied()
    }

    fn remember(&mut self, op: Op, x: NodeRef, y: u32, r: NodeRef) -> NodeRef {
        if self.cache.len() >= self.cache_capacity {
            self.cache.clear();
        }
        self.cache.insert((op, x.0, y), r);
        r
    }

    /// `{ {v} }`
    pub fn single(&mut self, v: VarId) -> NodeRef {
        self.mk_node(v, NodeRef::EMPTY, NodeRef::UNIT)
    }

    /// The family holding exactly one combination.
    pub fn combination(&mut self, vars: &[VarId]) -> NodeRef {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
            .iter()
            .rev()
            .fold(NodeRef::UNIT, |acc, &v| self.mk_node(v, NodeRef::EMPTY, acc))
    }

    /// Builds the family holding each of the given combinations.
    pub fn family<I, C>(&mut self, combos: I) -> NodeRef
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[VarId]>,
    {
        combos.into_iter().fold(NodeRef::EMPTY, |acc, c| {
            let one = self.combination(c.as_ref());
            self.union(acc, one)
        })
    }

    pub fn union(&mut self, x: NodeRef, y: NodeRef) -> NodeRef {
        if x == NodeRef::EMPTY || x == y {
            return y;
        }
        if y == NodeRef::EMPTY {
            return x;
        }
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        if let Some(r) = self.cached(Op::Union, x, y.0) {
            return r;
        }
        let (lx, ly) = (self.level(x), self.level(y));
        let r = if lx < ly {
            let n = self.get(x);
            let lo = self.union(n.lo, y);
            self.mk_node(n.var, lo, n.hi)
        } else if ly < lx {
            let n = self.get(y);
            let lo = self.union(x, n.lo);
            self.mk_node(n.var, lo, n.hi)
        } else {
            let (nx, ny) = (self.get(x), self.get(y));
            let lo = self.union(nx.lo, ny.lo);
            let hi = self.union(nx.hi, ny.hi);
            self.mk_node(nx.var, lo, hi)
        };
        self.remember(Op::Union, x, y.0, r)
    }

    pub fn intersect(&mut self, x: NodeRef, y: NodeRef) -> NodeRef {
        if x == NodeRef::EMPTY || y == NodeRef::EMPTY {
            return NodeRef::EMPTY;
        }
        if x == y {
            return x;
        }
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        if let Some(r) = self.cached(Op::Intersect, x, y.0) {
            return r;
        }
        let (lx, ly) = (self.level(x), self.level(y));
        let r = if lx < ly {
            let lo = self.get(x).lo;
            self.intersect(lo, y)
        } else if ly < lx {
            let lo = self.get(y).lo;
            self.intersect(x, lo)
        } else {
            let (nx, ny) = (self.get(x), self.get(y));
            let lo = self.intersect(nx.lo, ny.lo);
            let hi = self.intersect(nx.hi, ny.hi);
            self.mk_node(nx.var, lo, hi)
        };
        self.remember(Op::Intersect, x, y.0, r)
    }

    /// `x \ y`
    pub fn diff(&mut self, x: NodeRef, y: NodeRef) -> NodeRef {
        if x == NodeRef::EMPTY || x == y {
            return NodeRef::EMPTY;
        }
        if y == NodeRef::EMPTY {
            return x;
        }
        if let Some(r) = self.cached(Op::Diff, x, y.0) {
            return r;
        }
        let (lx, ly) = (self.level(x), self.level(y));
        let r = if lx < ly {
            let n = self.get(x);
            let lo = self.diff(n.lo, y);
            self.mk_node(n.var, lo, n.hi)
        } else if ly < lx {
            let lo = self.get(y).lo;
            self.diff(x, lo)
        } else {
            let (nx, ny) = (self.get(x), self.get(y));
            let lo = self.diff(nx.lo, ny.lo);
            let hi = self.diff(nx.hi, ny.hi);
            self.mk_node(nx.var, lo, hi)
        };
        self.remember(Op::Diff, x, y.0, r)
    }

    /// Symmetric difference.
    pub fn xor(&mut self, x: NodeRef, y: NodeRef) -> NodeRef {
        let both = self.intersect(x, y);
        let either = self.union(x, y);
        self.diff(either, both)
    }

    /// `{ c ∪ {v} : c ∈ x }`. Combinations that only differ in `v` merge.
    pub fn attach(&mut self, x: NodeRef, v: VarId) -> NodeRef {
        if x == NodeRef::EMPTY {
            return NodeRef::EMPTY;
        }
        if let Some(r) = self.cached(Op::Attach, x, v.0) {
            return r;
        }
        let lx = self.level(x);
        let r = if v.0 < lx {
            self.mk_node(v, NodeRef::EMPTY, x)
        } else if v.0 == lx {
            let n = self.get(x);
            let hi = self.union(n.lo, n.hi);
            self.mk_node(v, NodeRef::EMPTY, hi)
        } else {
            let n = self.get(x);
            let lo = self.attach(n.lo, v);
            let hi = self.attach(n.hi, v);
            self.mk_node(n.var, lo, hi)
        };
        self.remember(Op::Attach, x, v.0, r)
    }

    /// Combinations of `x` that do not contain `v`.
    pub fn subset0(&mut self, x: NodeRef, v: VarId) -> NodeRef {
        let lx = self.level(x);
        if v.0 < lx {
            return x;
        }
        if v.0 == lx {
            return self.get(x).lo;
        }
        if let Some(r) = self.cached(Op::Subset0, x, v.0) {
            return r;
        }
        let n = self.get(x);
        let lo = self.subset0(n.lo, v);
        let hi = self.subset0(n.hi, v);
        let r = self.mk_node(n.var, lo, hi);
        self.remember(Op::Subset0, x, v.0, r)
    }

    /// Combinations of `x` that contain `v`, with `v` removed.
    pub fn subset1(&mut self, x: NodeRef, v: VarId) -> NodeRef {
        let lx = self.level(x);
        if v.0 < lx {
            return NodeRef::EMPTY;
        }
        if v.0 == lx {
            return self.get(x).hi;
        }
        if let Some(r) = self.cached(Op::Subset1, x, v.0) {
            return r;
        }
        let n = self.get(x);
        let lo = self.subset1(n.lo, v);
        let hi = self.subset1(n.hi, v);
        let r = self.mk_node(n.var, lo, hi);
        self.remember(Op::Subset1, x, v.0, r)
    }

    /// Combinations of `x` contained in at least one combination of `y`.
    pub fn permit(&mut self, x: NodeRef, y: NodeRef) -> NodeRef {
        if x == NodeRef::EMPTY || y == NodeRef::EMPTY {
            return NodeRef::EMPTY;
        }
        if x == NodeRef::UNIT {
            return NodeRef::UNIT;
        }
        if let Some(r) = self.cached(Op::Permit, x, y.0) {
            return r;
        }
        let (lx, ly) = (self.level(x), self.level(y));
        let r = if lx < ly {
            let lo = self.get(x).lo;
            self.permit(lo, y)
        } else if ly < lx {
            let n = self.get(y);
            let flat = self.union(n.lo, n.hi);
            self.permit(x, flat)
        } else {
            let (nx, ny) = (self.get(x), self.get(y));
            let flat = self.union(ny.lo, ny.hi);
            let lo = self.permit(nx.lo, flat);
            let hi = self.permit(nx.hi, ny.hi);
            self.mk_node(nx.var, lo, hi)
        };
        self.remember(Op::Permit, x, y.0, r)
    }

    /// Combinations of `x` containing at least one combination of `y`.
    pub fn restrict(&mut self, x: NodeRef, y: NodeRef) -> NodeRef {
        if x == NodeRef::EMPTY || y == NodeRef::EMPTY {
            return NodeRef::EMPTY;
        }
        if self.has_empty(y) {
            return x;
        }
        if x == NodeRef::UNIT {
            return NodeRef::EMPTY;
        }
        if let Some(r) = self.cached(Op::Restrict, x, y.0) {
            return r;
        }
        let (lx, ly) = (self.level(x), self.level(y));
        let r = if lx < ly {
            let n = self.get(x);
            let lo = self.restrict(n.lo, y);
            let hi = self.restrict(n.hi, y);
            self.mk_node(n.var, lo, hi)
        } else if ly < lx {
            let lo = self.get(y).lo;
            self.restrict(x, lo)
        } else {
            let (nx, ny) = (self.get(x), self.get(y));
            let lo = self.restrict(nx.lo, ny.lo);
            let flat = self.union(ny.lo, ny.hi);
            let hi = self.restrict(nx.hi, flat);
            self.mk_node(nx.var, lo, hi)
        };
        self.remember(Op::Restrict, x, y.0, r)
    }

    /// Whether the empty combination belongs to `x`.
    pub fn has_empty(&self, mut x: NodeRef) -> bool {
        while !x.is_terminal() {
            x = self.get(x).lo;
        }
        x == NodeRef::UNIT
    }

    /// Membership test for one combination.
    pub fn contains(&self, mut x: NodeRef, combo: &[VarId]) -> bool {
        let mut vars = combo.to_vec();
        vars.sort_unstable();
        vars.dedup();
        let mut rest = vars.as_slice();
        loop {
            if x.is_terminal() {
                return x == NodeRef::UNIT && rest.is_empty();
            }
            let n = self.get(x);
            match rest.first() {
                Some(&v) if v == n.var => {
                    x = n.hi;
                    rest = &rest[1..];
                }
                Some(&v) if v < n.var => return false,
                _ => x = n.lo,
            }
        }
    }

    /// Exact number of combinations in `x`.
    pub fn count(&mut self, x: NodeRef) -> BigUint {
        match x {
            NodeRef::EMPTY => return BigUint::zero(),
            NodeRef::UNIT => return BigUint::one(),
            _ => {}
        }
        if let Some(c) = self.counts.get(&x) {
            return c.clone();
        }
        // Post-order walk; deep diagrams must not overflow the call stack.
        let mut stack = vec![(x, false)];
        while let Some((r, expanded)) = stack.pop() {
            if r.is_terminal() || self.counts.contains_key(&r) {
                continue;
            }
            let n = self.get(r);
            if expanded {
                let c = self.count_of(n.lo) + self.count_of(n.hi);
                self.counts.insert(r, c);
            } else {
                stack.push((r, true));
                stack.push((n.lo, false));
                stack.push((n.hi, false));
            }
        }
        self.counts[&x].clone()
    }

    fn count_of(&self, r: NodeRef) -> BigUint {
        match r {
            NodeRef::EMPTY => BigUint::zero(),
            NodeRef::UNIT => BigUint::one(),
            _ => self.counts[&r].clone(),
        }
    }

    /// Up to `limit` combinations, in depth-first order taking 1-edges
    /// before 0-edges. Each combination lists its variables in order.
    pub fn enumerate(&self, x: NodeRef, limit: usize) -> Vec<Vec<VarId>> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        // (node, prefix length to restore, variable taken on the way in)
        let mut stack: Vec<(NodeRef, usize, Option<VarId>)> = vec![(x, 0, None)];
        let mut prefix: Vec<VarId> = Vec::new();
        while let Some((r, depth, via)) = stack.pop() {
            prefix.truncate(depth);
            prefix.extend(via);
            match r {
                NodeRef::EMPTY => {}
                NodeRef::UNIT => {
                    out.push(prefix.clone());
                    if out.len() == limit {
                        break;
                    }
                }
                _ => {
                    let n = self.get(r);
                    let depth = prefix.len();
                    stack.push((n.lo, depth, None));
                    stack.push((n.hi, depth, Some(n.var)));
                }
            }
        }
        out
    }

    /// Number of distinct internal nodes reachable from `x`.
    pub fn size(&self, x: NodeRef) -> usize {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![x];
        while let Some(r) = stack.pop() {
            if r.is_terminal() || !seen.insert(r) {
                continue;
            }
            let n = self.get(r);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        seen.len()
    }

    /// Checks the structural invariants of every stored node.
    pub fn audit(&self) -> Result<(), String> {
        for (i, n) in self.nodes.iter().enumerate().skip(2) {
            if n.hi == NodeRef::EMPTY {
                return Err(format!("node {i} has an empty 1-edge"));
            }
            for child in [n.lo, n.hi] {
                if n.var.0 >= self.level(child) {
                    return Err(format!("node {i} is out of variable order"));
                }
            }
            if self.unique.get(&(n.var.0, n.lo.0, n.hi.0)) != Some(&NodeRef(i as u32)) {
                return Err(format!("node {i} is not registered in the unique table"));
            }
        }
        if self.unique.len() != self.node_count() {
            return Err("unique table holds duplicate entries".into());
        }
        Ok(())
    }
}
