// SPDX-License-Identifier: Apache-2.0

//! Seeded benchmark graphs.
//!
//! Randomness comes from ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! so the same parameters and seed give the same graph on every platform.
//! Draws happen in a fixed order:
//!
//! * weights: `wmin + (next_u64 mod (wmax − wmin + 1))`;
//! * edge coins: `(next_u64 >> 11) · 2^−53 < p`, one per ordered pair
//!   `i < j`, followed by that edge's weight draw when the coin lands.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Dag, DagBuilder};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

struct Weights {
    rng: ChaCha8Rng,
    min: i64,
    span: u128,
}

impl Weights {
    fn new(seed: u64, min: i64, max: i64) -> Result<Self, GenError> {
        if min > max {
            return Err(GenError::InvalidParameter(format!(
                "wmin {min} exceeds wmax {max}"
            )));
        }
        Ok(Weights {
            rng: ChaCha8Rng::seed_from_u64(seed),
            min,
            span: (max as i128 - min as i128 + 1) as u128,
        })
    }

    fn weight(&mut self) -> i64 {
        let draw = self.rng.next_u64() as u128 % self.span;
        (self.min as i128 + draw as i128) as i64
    }

    fn coin(&mut self, p: f64) -> bool {
        let unit = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        unit < p
    }
}

fn padded(prefix: &str, i: usize, width: usize) -> String {
    format!("{prefix}{i:0width$}")
}

fn digits(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Random DAG on `vertices` vertices `v0…`, each forward pair `i < j`
/// joined with probability `edge_prob`. Vertices without edges are omitted.
pub fn random(vertices: usize, edge_prob: f64, wmin: i64, wmax: i64, seed: u64) -> Result<Dag, GenError> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(GenError::InvalidParameter(format!(
            "edge probability {edge_prob} is outside [0, 1]"
        )));
    }
    let mut w = Weights::new(seed, wmin, wmax)?;
    let width = digits(vertices);
    let mut b = DagBuilder::default();
    for i in 0..vertices {
        for j in i + 1..vertices {
            if w.coin(edge_prob) {
                let weight = w.weight();
                b.edge(&padded("v", i, width), &padded("v", j, width), weight)
                    .expect("forward pairs are unique");
            }
        }
    }
    Ok(b.finish().expect("forward edges cannot form a cycle"))
}

/// Complete layered DAG: a single source in layer 0, then `layers − 1`
/// layers of `width` vertices, every vertex joined to every vertex of the
/// next layer. It has `width^(layers − 1)` source-to-sink paths, each with
/// `layers − 1` edges.
pub fn layered(layers: usize, width: usize, wmin: i64, wmax: i64, seed: u64) -> Result<Dag, GenError> {
    if layers < 2 || width == 0 {
        return Err(GenError::InvalidParameter(format!(
            "layered graphs need at least 2 layers and width 1, got {layers} x {width}"
        )));
    }
    let mut w = Weights::new(seed, wmin, wmax)?;
    let (lw, ww) = (digits(layers), digits(width));
    let name = |layer: usize, i: usize| format!("l{layer:0lw$}_{i:0ww$}");
    let mut b = DagBuilder::default();
    for layer in 0..layers - 1 {
        let here = if layer == 0 { 1 } else { width };
        for i in 0..here {
            for j in 0..width {
                let weight = w.weight();
                b.edge(&name(layer, i), &name(layer + 1, j), weight)
                    .expect("layer pairs are unique");
            }
        }
    }
    Ok(b.finish().expect("layered graphs are acyclic"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse;
    use crate::oracle::enumerate_paths;

    #[test]
    fn layered_path_count() {
        let dag = layered(3, 2, 1, 1, 0).unwrap();
        assert_eq!(enumerate_paths(&dag).unwrap().len(), 4);
        assert_eq!(dag.vertex_count(), 5);
        assert_eq!(dag.sources().len(), 1);
        assert!(dag.edges().iter().all(|e| e.weight == 1));
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = random(30, 0.3, 1, 10, 99).unwrap().render();
        let b = random(30, 0.3, 1, 10, 99).unwrap().render();
        assert_eq!(a, b);
        assert_ne!(a, random(30, 0.3, 1, 10, 100).unwrap().render());
        let l1 = layered(4, 3, 1, 10, 5).unwrap().render();
        assert_eq!(l1, layered(4, 3, 1, 10, 5).unwrap().render());
    }

    #[test]
    fn zero_probability_has_no_edges() {
        let dag = random(10, 0.0, 1, 10, 1).unwrap();
        assert!(dag.edges().is_empty());
        let full = random(6, 1.0, 1, 10, 1).unwrap();
        assert_eq!(full.edges().len(), 15);
    }

    #[test]
    fn weights_stay_in_range() {
        let dag = random(40, 0.5, -3, 4, 11).unwrap();
        assert!(dag.edges().iter().all(|e| (-3..=4).contains(&e.weight)));
        let seen: std::collections::BTreeSet<i64> = dag.edges().iter().map(|e| e.weight).collect();
        assert_eq!(seen.len(), 8);
        let extreme = random(5, 1.0, i64::MIN, i64::MAX, 3).unwrap();
        assert_eq!(extreme.edges().len(), 10);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(random(5, 1.5, 1, 10, 0).is_err());
        assert!(random(5, f64::NAN, 1, 10, 0).is_err());
        assert!(random(5, 0.5, 10, 1, 0).is_err());
        assert!(layered(1, 3, 1, 10, 0).is_err());
        assert!(layered(3, 0, 1, 10, 0).is_err());
    }

    #[test]
    fn generated_graphs_round_trip_through_text() {
        let dag = random(15, 0.4, -10, 10, 4).unwrap();
        assert_eq!(parse(&dag.render()).unwrap(), dag);
    }
}
