// SPDX-License-Identifier: Apache-2.0

//! Symbolic path databases.
//!
//! [`PathDb::build`] walks the DAG in topological order and keeps, for each
//! vertex, a [`Vsop`] whose terms are the vertex sets of the partial paths
//! ending there, valued by their lengths. Summing the sinks gives every
//! source-to-sink path at once. Top-K, k-th path and counting queries then
//! run on that single expression without listing paths.
//!
//! A term whose value reaches 0 vanishes from a [`Vsop`], so each source
//! contributes an extra offset `B` (at least `1 + Σ|negative weights|`).
//! Every path contains exactly one source, so every internal value is
//! `length + B ≥ 1`; reported lengths subtract `B` again.
//!
//! ```
//! use kpaths::graph::parse;
//! use kpaths::pathdb::{BuildOptions, Mode, PathDb};
//! use kpaths::zbdd::NodeStore;
//!
//! let dag = parse("v2 v7 4\nv3 v7 4\nv4 v8 4\nv7 v8 2\n").unwrap();
//! let mut store = NodeStore::new();
//! let db = PathDb::build(&mut store, &dag, &BuildOptions::default()).unwrap();
//!
//! assert_eq!(db.count_paths(&mut store), 3u32.into());
//! let top = db.top_k(&mut store, 1, Mode::Longest).unwrap();
//! assert_eq!(top.threshold, Some(6));
//! assert_eq!(top.count, 2u32.into()); // both length-6 paths tie
//! ```

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::Dag;
use crate::vsop::{CmpOp, Vsop, VsopError};
use crate::zbdd::{NodeStore, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Longest,
    Shortest,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Longest => "longest",
            Mode::Shortest => "shortest",
        }
    }

    /// Filter selecting everything at least as good as a threshold.
    fn at_least_as_good(self) -> CmpOp {
        match self {
            Mode::Longest => CmpOp::Ge,
            Mode::Shortest => CmpOp::Le,
        }
    }
}

/// How vertices map onto diagram variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarOrder {
    /// Variable ordinal = position in topological order.
    #[default]
    Topo,
    /// The reverse: sinks nearest the root.
    Reverse,
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Keep only the tie-inclusive top-K partial paths at every vertex.
    pub prune: Option<(u64, Mode)>,
    pub var_order: VarOrder,
    /// Overrides the default length offset; must not be below it.
    pub offset: Option<i128>,
    /// Keep every vertex's partial-path expression for inspection.
    pub retain_partials: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathDbError {
    #[error("K must be positive")]
    ZeroK,
    #[error("the path database is empty")]
    EmptyDatabase,
    #[error("offset {offset} is below the minimum {minimum}")]
    InvalidOffset { offset: i128, minimum: i128 },
    #[error("term does not induce a path: {0}")]
    NotAPath(String),
    #[error("top-K threshold contract violated: {0}")]
    Contract(String),
    #[error(transparent)]
    Vsop(#[from] VsopError),
}

/// Outcome of the data-driven binary search on one expression. The
/// threshold is an internal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopK {
    pub paths: Vsop,
    pub threshold: Option<i128>,
    pub count: BigUint,
    pub iterations: usize,
}

/// Floor of the midpoint, without overflow.
fn floor_mid(lo: i128, hi: i128) -> i128 {
    (lo >> 1) + (hi >> 1) + (lo & hi & 1)
}

/// Tie-inclusive top-`k` of `expr`: every term at least as good as the
/// `k`-th best value. Returns everything when `expr` has at most `k` terms.
///
/// The threshold is found by binary search between the minimum and maximum
/// values, steered only by counts of terms equal to and strictly better than
/// the probe value.
pub fn top_k(store: &mut NodeStore, expr: &Vsop, k: u64, mode: Mode) -> Result<TopK, PathDbError> {
    if k == 0 {
        return Err(PathDbError::ZeroK);
    }
    if expr.is_zero() {
        return Ok(TopK {
            paths: Vsop::zero(),
            threshold: None,
            count: BigUint::default(),
            iterations: 0,
        });
    }
    let total = expr.count_terms(store);
    let k_big = BigUint::from(k);
    let worst = |store: &mut NodeStore, e: &Vsop| match mode {
        Mode::Longest => e.min_val(store),
        Mode::Shortest => e.max_val(store),
    };
    if total <= k_big {
        let threshold = worst(store, expr)?;
        return Ok(TopK {
            paths: expr.clone(),
            threshold: Some(threshold),
            count: total,
            iterations: 0,
        });
    }

    let mut lo = expr.min_val(store)?;
    let mut hi = expr.max_val(store)?;
    // No probe has been made yet; any value outside [lo, hi] works.
    let mut prev: Option<i128> = None;
    let mut iterations = 0;
    let mut mid;
    loop {
        iterations += 1;
        mid = floor_mid(lo, hi);
        if prev == Some(mid) {
            // The interval stopped shrinking: the answer is one above.
            mid += 1;
            break;
        }
        prev = Some(mid);
        let (worse, equal, better) = expr.partition_const(store, mid);
        let better = match mode {
            Mode::Longest => better,
            Mode::Shortest => worse,
        };
        let c1 = store.count(equal);
        let c2 = store.count(better);
        let c3 = &c1 + &c2;
        if c3 == k_big || (c3 > k_big && c2 < k_big) {
            break;
        }
        // Too few at or beyond mid: the threshold is on the worse side.
        let move_toward_worse = c3 < k_big;
        match (mode, move_toward_worse) {
            (Mode::Longest, true) | (Mode::Shortest, false) => hi = mid,
            (Mode::Longest, false) | (Mode::Shortest, true) => lo = mid,
        }
    }

    let selected = expr.select_const(store, mode.at_least_as_good(), mid);
    let paths = expr.restrict_to(store, selected);
    let threshold = worst(store, &paths)?;
    let count = paths.count_terms(store);

    // N(T*) ≥ K > N(T* + 1), mirrored for the shortest variant.
    let strictly_better = match mode {
        Mode::Longest => CmpOp::Gt,
        Mode::Shortest => CmpOp::Lt,
    };
    let beyond = expr.select_const(store, strictly_better, threshold);
    let beyond = store.count(beyond);
    if count < k_big || beyond >= k_big {
        return Err(PathDbError::Contract(format!(
            "threshold {threshold} keeps {count} terms, {beyond} strictly better, K = {k}"
        )));
    }
    Ok(TopK {
        paths,
        threshold: Some(threshold),
        count,
        iterations,
    })
}

/// A tie-inclusive top-K answer over a [`PathDb`]; the threshold is a true
/// path length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    /// Selected paths, valued by internal (offset) lengths.
    pub paths: Vsop,
    pub threshold: Option<i128>,
    pub count: BigUint,
    pub mode: Mode,
    pub k: u64,
    pub iterations: usize,
}

/// One path: vertex indices of the source [`Dag`] in traversal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub length: i128,
}

/// Every source-to-sink path of a DAG with its length, held symbolically.
#[derive(Debug, Clone)]
pub struct PathDb<'g> {
    dag: &'g Dag,
    paths: Vsop,
    offset: i128,
    var_of: Vec<VarId>,
    vertex_of: Vec<usize>,
    partials: Option<Vec<Vsop>>,
}

/// Smallest offset keeping every partial-path value positive.
pub fn minimum_offset(dag: &Dag) -> i128 {
    1 + dag
        .edges()
        .iter()
        .filter(|e| e.weight < 0)
        .map(|e| -(e.weight as i128))
        .sum::<i128>()
}

impl<'g> PathDb<'g> {
    pub fn build(store: &mut NodeStore, dag: &'g Dag, options: &BuildOptions) -> Result<Self, PathDbError> {
        let minimum = minimum_offset(dag);
        let offset = options.offset.unwrap_or(minimum);
        if offset < minimum {
            return Err(PathDbError::InvalidOffset { offset, minimum });
        }
        if let Some((0, _)) = options.prune {
            return Err(PathDbError::ZeroK);
        }

        let n = dag.vertex_count();
        let mut var_of = vec![VarId(0); n];
        let mut vertex_of = vec![0; n];
        for (pos, &v) in dag.topo_order().iter().enumerate() {
            let ordinal = match options.var_order {
                VarOrder::Topo => pos,
                VarOrder::Reverse => n - 1 - pos,
            };
            var_of[v] = VarId(ordinal as u32);
            vertex_of[ordinal] = v;
        }

        let mut partial: Vec<Vsop> = vec![Vsop::zero(); n];
        let mut pending_succs: Vec<usize> = (0..n).map(|v| dag.successors(v).len()).collect();
        for &v in dag.topo_order() {
            if dag.is_source(v) {
                continue;
            }
            let mut acc = Vsop::zero();
            for &(u, weight) in dag.predecessors(v) {
                if dag.is_source(u) {
                    let start = store.single(var_of[u]);
                    let edge = Vsop::scaled_set(start, weight as i128 + offset);
                    acc = acc.add(store, &edge);
                } else {
                    // L_u + w·(L_u == L_u)
                    let support = partial[u].support(store);
                    let extended = partial[u].add(store, &Vsop::scaled_set(support, weight as i128));
                    acc = acc.add(store, &extended);
                }
                pending_succs[u] -= 1;
                if pending_succs[u] == 0 && !options.retain_partials {
                    partial[u] = Vsop::zero();
                }
            }
            if let Some((k, mode)) = options.prune {
                acc = top_k(store, &acc, k, mode)?.paths;
            }
            partial[v] = acc.mul_var(store, var_of[v]);
        }

        let mut paths = Vsop::zero();
        for v in dag.sinks() {
            paths = paths.add(store, &partial[v]);
        }
        Ok(PathDb {
            dag,
            paths,
            offset,
            var_of,
            vertex_of,
            partials: options.retain_partials.then_some(partial),
        })
    }

    pub fn dag(&self) -> &'g Dag {
        self.dag
    }

    /// The whole database; values are lengths plus [`PathDb::offset`].
    pub fn expression(&self) -> &Vsop {
        &self.paths
    }

    pub fn offset(&self) -> i128 {
        self.offset
    }

    pub fn var_of(&self, vertex: usize) -> VarId {
        self.var_of[vertex]
    }

    pub fn vertex_of(&self, var: VarId) -> usize {
        self.vertex_of[var.0 as usize]
    }

    /// Partial paths ending at `vertex`, when built with
    /// [`BuildOptions::retain_partials`].
    pub fn partial(&self, vertex: usize) -> Option<&Vsop> {
        self.partials.as_ref().map(|p| &p[vertex])
    }

    pub fn count_paths(&self, store: &mut NodeStore) -> BigUint {
        self.paths.count_terms(store)
    }

    pub fn longest_length(&self, store: &mut NodeStore) -> Result<i128, PathDbError> {
        if self.paths.is_zero() {
            return Err(PathDbError::EmptyDatabase);
        }
        Ok(self.paths.max_val(store)? - self.offset)
    }

    pub fn shortest_length(&self, store: &mut NodeStore) -> Result<i128, PathDbError> {
        if self.paths.is_zero() {
            return Err(PathDbError::EmptyDatabase);
        }
        Ok(self.paths.min_val(store)? - self.offset)
    }

    pub fn top_k(&self, store: &mut NodeStore, k: u64, mode: Mode) -> Result<QueryResult, PathDbError> {
        let found = top_k(store, &self.paths, k, mode)?;
        Ok(QueryResult {
            paths: found.paths,
            threshold: found.threshold.map(|t| t - self.offset),
            count: found.count,
            mode,
            k,
            iterations: found.iterations,
        })
    }

    pub fn top_k_longest(&self, store: &mut NodeStore, k: u64) -> Result<QueryResult, PathDbError> {
        self.top_k(store, k, Mode::Longest)
    }

    pub fn top_k_shortest(&self, store: &mut NodeStore, k: u64) -> Result<QueryResult, PathDbError> {
        self.top_k(store, k, Mode::Shortest)
    }

    /// The worst path of the top-`k` set: a `k`-th best path. Several paths
    /// may qualify when lengths tie; the choice follows the 1-edge-first
    /// diagram order.
    pub fn kth(&self, store: &mut NodeStore, k: u64, mode: Mode) -> Result<Path, PathDbError> {
        if k == 0 {
            return Err(PathDbError::ZeroK);
        }
        if self.paths.is_zero() {
            return Err(PathDbError::EmptyDatabase);
        }
        let result = self.top_k(store, k, mode)?;
        let term = match mode {
            Mode::Longest => result.paths.min_cover(store)?,
            Mode::Shortest => result.paths.max_cover(store)?,
        };
        self.path_from_combo(&term.combo, term.value)
    }

    pub fn kth_longest(&self, store: &mut NodeStore, k: u64) -> Result<Path, PathDbError> {
        self.kth(store, k, Mode::Longest)
    }

    pub fn kth_shortest(&self, store: &mut NodeStore, k: u64) -> Result<Path, PathDbError> {
        self.kth(store, k, Mode::Shortest)
    }

    /// Number of paths whose true length is at least (longest mode) or at
    /// most (shortest mode) `length`, via a constant filter and a term count.
    pub fn count_within(&self, store: &mut NodeStore, length: i128, mode: Mode) -> BigUint {
        let selector = self
            .paths
            .filter_const(store, mode.at_least_as_good(), length + self.offset);
        selector.count_terms(store)
    }

    /// Lists up to `limit` paths of `result`, best first. Each length is
    /// recomputed from the edge weights and checked against the stored value.
    pub fn materialize(
        &self,
        store: &mut NodeStore,
        result: &QueryResult,
        limit: usize,
    ) -> Result<Vec<Path>, PathDbError> {
        let mut out = Vec::new();
        let mut remaining = result.paths.clone();
        while out.len() < limit && !remaining.is_zero() {
            let (value, set) = remaining.extreme(store, result.mode == Mode::Longest)?;
            for combo in store.enumerate(set, limit - out.len()) {
                out.push(self.path_from_combo(&combo, value)?);
            }
            remaining = remaining.remove(store, set);
        }
        Ok(out)
    }

    fn path_from_combo(&self, combo: &[VarId], value: i128) -> Result<Path, PathDbError> {
        let mut vertices: Vec<usize> = combo.iter().map(|&v| self.vertex_of(v)).collect();
        vertices.sort_by_key(|&v| self.dag.topo_position(v));
        let describe = |vs: &[usize]| {
            vs.iter()
                .map(|&v| self.dag.name(v))
                .collect::<Vec<_>>()
                .join("->")
        };
        let (Some(&first), Some(&last)) = (vertices.first(), vertices.last()) else {
            return Err(PathDbError::NotAPath("empty combination".into()));
        };
        if vertices.len() < 2 || !self.dag.is_source(first) || !self.dag.is_sink(last) {
            return Err(PathDbError::NotAPath(describe(&vertices)));
        }
        let mut length: i128 = 0;
        for pair in vertices.windows(2) {
            let w = self
                .dag
                .weight(pair[0], pair[1])
                .ok_or_else(|| PathDbError::NotAPath(describe(&vertices)))?;
            length += w as i128;
        }
        if length != value - self.offset {
            return Err(PathDbError::NotAPath(format!(
                "{} has length {length} but is stored as {}",
                describe(&vertices),
                value - self.offset
            )));
        }
        Ok(Path { vertices, length })
    }

    /// Vertex names of a path.
    pub fn names(&self, path: &Path) -> Vec<String> {
        path.vertices
            .iter()
            .map(|&v| self.dag.name(v).to_string())
            .collect()
    }
}
