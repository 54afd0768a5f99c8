// SPDX-License-Identifier: Apache-2.0

//! Nonenumerative k longest / k shortest paths in weighted DAGs.
//!
//! Every source-to-sink path of a DAG is stored at once as a valued
//! sum-of-products expression ([`vsop::Vsop`]) over zero-suppressed decision
//! diagrams ([`zbdd::NodeStore`]). Each term is the vertex set of one path,
//! valued by its length. Top-K sets, k-th paths and exact path counts come
//! from symbolic filters and counts on that expression, so a graph with
//! 10^19 paths is as easy to query as one with ten.
//!
//! * [`zbdd`]: canonical ZBDD kernel.
//! * [`vsop`]: base −2 valued expressions on top of it.
//! * [`graph`]: edge-list parsing and topological order.
//! * [`pathdb`]: building the path database and querying it.
//! * [`oracle`]: brute-force reference models for testing.
//! * [`generate`]: seeded benchmark graphs.
//! * [`selfcheck`]: golden checks on small reference expressions.

pub mod generate;
pub mod graph;
pub mod oracle;
pub mod pathdb;
pub mod selfcheck;
pub mod vsop;
pub mod zbdd;

pub use graph::{parse, Dag};
pub use pathdb::{BuildOptions, Mode, Path, PathDb, QueryResult, VarOrder};
pub use vsop::{CmpOp, Term, Vsop};
pub use zbdd::{NodeRef, NodeStore, VarId};

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/zbdd.md")]
    mod zbdd {}
    #[doc = include_str!("../../../book/src/vsop.md")]
    mod vsop {}
    #[doc = include_str!("../../../book/src/path-database.md")]
    mod path_database {}
    #[doc = include_str!("../../../book/src/top-k.md")]
    mod top_k {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
