// SPDX-License-Identifier: Apache-2.0

//! Weighted DAG ingestion and topological preparation.
//!
//! The text format is one edge per line, `FROM TO WEIGHT`, whitespace
//! separated. `#` starts a comment. Names match `[A-Za-z0-9_.-]+` and weights
//! are signed 64-bit decimals.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("parallel edge {from} -> {to}")]
    ParallelEdge { from: String, to: String },
    #[error("cycle detected: {}", .cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: i64,
}

/// An immutable, validated DAG. Vertices are numbered in order of first
/// appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    weights: HashMap<(usize, usize), i64>,
    preds: Vec<Vec<(usize, i64)>>,
    succs: Vec<Vec<(usize, i64)>>,
    topo: Vec<usize>,
    topo_pos: Vec<usize>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

/// Parses the edge-list format into a validated [`Dag`].
pub fn parse(text: &str) -> Result<Dag, GraphError> {
    let mut builder = DagBuilder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let malformed = |reason: &str| GraphError::Malformed {
            line,
            reason: reason.to_string(),
        };
        let [from, to, weight] = fields[..] else {
            return Err(malformed("expected FROM TO WEIGHT"));
        };
        if !valid_name(from) || !valid_name(to) {
            return Err(malformed("vertex names must match [A-Za-z0-9_.-]+"));
        }
        let weight: i64 = weight
            .parse()
            .map_err(|_| malformed("weight is not a signed 64-bit integer"))?;
        builder.edge(from, to, weight)?;
    }
    builder.finish()
}

/// Incremental construction of a [`Dag`]; validation happens in
/// [`DagBuilder::finish`] and on each added edge.
#[derive(Debug, Default, Clone)]
pub struct DagBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    weights: HashMap<(usize, usize), i64>,
}

impl DagBuilder {
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn edge(&mut self, from: &str, to: &str, weight: i64) -> Result<(), GraphError> {
        let (u, v) = (self.vertex(from), self.vertex(to));
        if self.weights.insert((u, v), weight).is_some() {
            return Err(GraphError::ParallelEdge {
                from: from.to_string(),
                to: to.to_string(),
            });
        }
        self.edges.push(Edge { from: u, to: v, weight });
        Ok(())
    }

    pub fn finish(self) -> Result<Dag, GraphError> {
        let n = self.names.len();
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for e in &self.edges {
            succs[e.from].push((e.to, e.weight));
            preds[e.to].push((e.from, e.weight));
        }
        let topo = topo_order(&self.names, &preds, &succs)?;
        let mut topo_pos = vec![0; n];
        for (pos, &v) in topo.iter().enumerate() {
            topo_pos[v] = pos;
        }
        Ok(Dag {
            names: self.names,
            index: self.index,
            edges: self.edges,
            weights: self.weights,
            preds,
            succs,
            topo,
            topo_pos,
        })
    }
}

/// Kahn's algorithm, releasing ready vertices in lexicographic name order.
fn topo_order(
    names: &[String],
    preds: &[Vec<(usize, i64)>],
    succs: &[Vec<(usize, i64)>],
) -> Result<Vec<usize>, GraphError> {
    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut ready: BTreeSet<(&str, usize)> = (0..names.len())
        .filter(|&v| indeg[v] == 0)
        .map(|v| (names[v].as_str(), v))
        .collect();
    let mut order = Vec::with_capacity(names.len());
    while let Some((_, v)) = ready.pop_first() {
        order.push(v);
        for &(w, _) in &succs[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert((names[w].as_str(), w));
            }
        }
    }
    if order.len() == names.len() {
        return Ok(order);
    }
    Err(GraphError::Cycle {
        cycle: find_cycle(names, preds, &indeg),
    })
}

/// Every vertex left after Kahn's algorithm has an unreleased predecessor,
/// so walking predecessors must revisit a vertex.
fn find_cycle(names: &[String], preds: &[Vec<(usize, i64)>], indeg: &[usize]) -> Vec<String> {
    let start = (0..names.len())
        .find(|&v| indeg[v] > 0)
        .expect("a cycle leaves vertices with positive in-degree");
    let mut seen = HashMap::new();
    let mut walk = Vec::new();
    let mut v = start;
    loop {
        if let Some(&at) = seen.get(&v) {
            let mut cycle: Vec<String> = walk[at..].iter().rev().map(|&u: &usize| names[u].clone()).collect();
            cycle.insert(0, names[v].clone());
            return cycle;
        }
        seen.insert(v, walk.len());
        walk.push(v);
        v = preds[v]
            .iter()
            .map(|&(u, _)| u)
            .find(|&u| indeg[u] > 0)
            .expect("an unreleased vertex has an unreleased predecessor");
    }
}

impl Dag {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<i64> {
        self.weights.get(&(from, to)).copied()
    }

    /// Incoming `(predecessor, weight)` pairs in input order.
    pub fn predecessors(&self, v: usize) -> &[(usize, i64)] {
        &self.preds[v]
    }

    pub fn successors(&self, v: usize) -> &[(usize, i64)] {
        &self.succs[v]
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.preds[v].is_empty()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.succs[v].is_empty()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_source(v)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_sink(v)).collect()
    }

    /// Vertices in topological order; ties go to the lexicographically
    /// smallest name.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn topo_position(&self, v: usize) -> usize {
        self.topo_pos[v]
    }

    /// Renders the graph back into the edge-list format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            writeln!(out, "{} {} {}", self.names[e.from], self.names[e.to], e.weight)
                .expect("writing to a String cannot fail");
        }
        out
    }
}
