// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p kpaths --test acceptance`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kpaths::generate::{layered, random};
use kpaths::oracle::{enumerate_paths, reference_kth_length, reference_top_k, ExplicitVsop};
use kpaths::pathdb::{minimum_offset, QueryResult};
use kpaths::selfcheck;
use kpaths::{BuildOptions, CmpOp, Dag, Mode, NodeStore, PathDb, Term, VarId, VarOrder, Vsop};

type Outcome = Result<String, String>;

const MODES: [Mode; 2] = [Mode::Longest, Mode::Shortest];
const CORPUS_SIZE: usize = 1000;
const CORPUS_MAX_VERTICES: usize = 14;
const CORPUS_WEIGHTS: (i64, i64) = (-10, 10);
const CORPUS_EDGE_PROBS: [f64; 5] = [0.15, 0.25, 0.35, 0.5, 0.65];
const BIG_COUNT: &str = "10000000000000000000";
const SCALE_MIN_PATHS: u64 = 1_000_000_000_000_000;
const SCALE_K: u64 = 1_000_000;
const OFFSET_SHIFT: i128 = 7;
const ALGEBRA_CASES: usize = 1000;
const ALGEBRA_VARS: u32 = 5;
const ALGEBRA_VALUES: (i128, i128) = (-9, 9);

fn golden(checks: Vec<selfcheck::Check>) -> Outcome {
    let total = checks.len();
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.actual))
        .collect();
    if failed.is_empty() {
        Ok(format!("{total}/{total} exact"))
    } else {
        Err(failed.join("; "))
    }
}

/// The random-DAG corpus: `CORPUS_SIZE` graphs with at least one path.
fn corpus() -> Vec<Dag> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b70_6174_6873);
    let mut out = Vec::with_capacity(CORPUS_SIZE);
    while out.len() < CORPUS_SIZE {
        let n = rng.gen_range(2..=CORPUS_MAX_VERTICES);
        let p = CORPUS_EDGE_PROBS[rng.gen_range(0..CORPUS_EDGE_PROBS.len())];
        let seed = rng.gen();
        let dag = random(n, p, CORPUS_WEIGHTS.0, CORPUS_WEIGHTS.1, seed).expect("valid parameters");
        if !dag.edges().is_empty() {
            out.push(dag);
        }
    }
    out
}

fn as_set<I: IntoIterator<Item = (Vec<usize>, i128)>>(paths: I) -> BTreeSet<(Vec<usize>, i128)> {
    paths.into_iter().collect()
}

fn result_set(db: &PathDb, store: &mut NodeStore, r: &QueryResult) -> Result<BTreeSet<(Vec<usize>, i128)>, String> {
    let listed = db.materialize(store, r, usize::MAX).map_err(|e| e.to_string())?;
    Ok(as_set(listed.into_iter().map(|p| (p.vertices, p.length))))
}

fn iteration_bound(db: &PathDb, store: &mut NodeStore) -> usize {
    let span = (db.longest_length(store).unwrap() - db.shortest_length(store).unwrap() + 1) as u128;
    let log = 128 - (span - 1).leading_zeros() as usize;
    log + 2
}

fn oracle_equivalence(dags: &[Dag]) -> Outcome {
    let mut queries = 0usize;
    let mut max_paths = 0usize;
    for (g, dag) in dags.iter().enumerate() {
        let paths = enumerate_paths(dag).map_err(|e| e.to_string())?;
        max_paths = max_paths.max(paths.len());
        let mut store = NodeStore::new();
        let db = PathDb::build(&mut store, dag, &BuildOptions::default()).map_err(|e| e.to_string())?;
        if db.count_paths(&mut store) != BigUint::from(paths.len()) {
            return Err(format!("graph {g}: count_paths disagrees with enumeration"));
        }
        let bound = iteration_bound(&db, &mut store);
        for mode in MODES {
            for k in 1..=paths.len() {
                let r = db.top_k(&mut store, k as u64, mode).map_err(|e| format!("graph {g}: {e}"))?;
                let got = result_set(&db, &mut store, &r)?;
                let want = as_set(reference_top_k(&paths, k, mode).into_iter().map(|p| (p.vertices, p.length)));
                if got != want {
                    return Err(format!("graph {g}, {} K={k}: top-K sets differ", mode.as_str()));
                }
                if r.iterations > bound {
                    return Err(format!("graph {g}, {} K={k}: {} iterations > {bound}", mode.as_str(), r.iterations));
                }
                let kth = db.kth(&mut store, k as u64, mode).map_err(|e| e.to_string())?;
                if Some(kth.length) != reference_kth_length(&paths, k, mode) {
                    return Err(format!("graph {g}, {} K={k}: k-th length differs", mode.as_str()));
                }
                queries += 1;
            }
        }
    }
    Ok(format!(
        "{} graphs, {queries} (K, mode) queries, up to {max_paths} paths per graph",
        dags.len()
    ))
}

fn pruning_soundness(dags: &[Dag]) -> Outcome {
    let mut builds = 0usize;
    for (g, dag) in dags.iter().enumerate() {
        let mut store = NodeStore::new();
        let db = PathDb::build(&mut store, dag, &BuildOptions::default()).map_err(|e| e.to_string())?;
        let total = enumerate_paths(dag).map_err(|e| e.to_string())?.len() as u64;
        for mode in MODES {
            for k in 1..=total {
                let opts = BuildOptions {
                    prune: Some((k, mode)),
                    ..Default::default()
                };
                let pruned = PathDb::build(&mut store, dag, &opts).map_err(|e| e.to_string())?;
                let a = db.top_k(&mut store, k, mode).map_err(|e| e.to_string())?;
                let b = pruned.top_k(&mut store, k, mode).map_err(|e| e.to_string())?;
                let same = a.paths == b.paths
                    && a.threshold == b.threshold
                    && a.count == b.count
                    && a.mode == b.mode
                    && a.k == b.k;
                if !same {
                    return Err(format!("graph {g}, {} K={k}: pruned result differs", mode.as_str()));
                }
                builds += 1;
            }
        }
    }
    Ok(format!("{builds} pruned builds identical to unpruned"))
}

fn big_count() -> Outcome {
    let dag = layered(20, 10, 1, 1, 0).map_err(|e| e.to_string())?;
    let mut store = NodeStore::new();
    let db = PathDb::build(&mut store, &dag, &BuildOptions::default()).map_err(|e| e.to_string())?;
    let count = db.count_paths(&mut store).to_string();
    let longest = db.longest_length(&mut store).map_err(|e| e.to_string())?;
    let shortest = db.shortest_length(&mut store).map_err(|e| e.to_string())?;
    if count != BIG_COUNT || longest != 19 || shortest != 19 {
        return Err(format!("count {count}, longest {longest}, shortest {shortest}"));
    }
    Ok(format!("count_paths = {count}, every length 19"))
}

fn scale_smoke() -> Outcome {
    let dag = layered(16, 10, 1, 10, 2024).map_err(|e| e.to_string())?;
    let mut store = NodeStore::new();
    let opts = BuildOptions {
        var_order: VarOrder::Reverse,
        ..Default::default()
    };
    let db = PathDb::build(&mut store, &dag, &opts).map_err(|e| e.to_string())?;
    let total = db.count_paths(&mut store);
    if total < BigUint::from(SCALE_MIN_PATHS) {
        return Err(format!("only {total} paths"));
    }
    let r = db.top_k_longest(&mut store, SCALE_K).map_err(|e| e.to_string())?;
    let t = r.threshold.ok_or("no threshold")?;
    let k = BigUint::from(SCALE_K);
    let at_t = db.count_within(&mut store, t, Mode::Longest);
    let above_t = db.count_within(&mut store, t + 1, Mode::Longest);
    if r.count < k || at_t != r.count || at_t < k || above_t >= k {
        return Err(format!(
            "count {}, N(T*) = {at_t}, N(T*+1) = {above_t}, T* = {t}",
            r.count
        ));
    }
    Ok(format!(
        "{total} paths, {} nodes, T* = {t}, N(T*) = {at_t} >= {SCALE_K} > N(T*+1) = {above_t}",
        store.node_count()
    ))
}

fn offset_invariance(dags: &[Dag]) -> Outcome {
    let mut compared = 0usize;
    let mut graphs: Vec<Dag> = dags.to_vec();
    graphs.push(kpaths::parse(selfcheck::EXAMPLE_GRAPH).unwrap());
    graphs.push(layered(5, 3, 1, 1, 0).unwrap());
    for (g, dag) in graphs.iter().enumerate() {
        let mut store = NodeStore::new();
        let base = PathDb::build(&mut store, dag, &BuildOptions::default()).map_err(|e| e.to_string())?;
        let shifted_opts = BuildOptions {
            offset: Some(minimum_offset(dag) + OFFSET_SHIFT),
            ..Default::default()
        };
        let shifted = PathDb::build(&mut store, dag, &shifted_opts).map_err(|e| e.to_string())?;
        let total = base.count_paths(&mut store);
        let same_summary = total == shifted.count_paths(&mut store)
            && base.longest_length(&mut store).ok() == shifted.longest_length(&mut store).ok()
            && base.shortest_length(&mut store).ok() == shifted.shortest_length(&mut store).ok();
        if !same_summary {
            return Err(format!("graph {g}: summary differs"));
        }
        let total: u64 = total.try_into().unwrap();
        for mode in MODES {
            for k in 1..=total {
                let a = base.top_k(&mut store, k, mode).map_err(|e| e.to_string())?;
                let b = shifted.top_k(&mut store, k, mode).map_err(|e| e.to_string())?;
                let listed_a = base.materialize(&mut store, &a, usize::MAX).map_err(|e| e.to_string())?;
                let listed_b = shifted.materialize(&mut store, &b, usize::MAX).map_err(|e| e.to_string())?;
                let kth_a = base.kth(&mut store, k, mode).map_err(|e| e.to_string())?;
                let kth_b = shifted.kth(&mut store, k, mode).map_err(|e| e.to_string())?;
                if a.threshold != b.threshold || a.count != b.count || listed_a != listed_b || kth_a != kth_b {
                    return Err(format!("graph {g}, {} K={k}: output changed", mode.as_str()));
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{} graphs, {compared} queries unchanged under offset +{OFFSET_SHIFT}", graphs.len()))
}

fn random_terms(rng: &mut ChaCha8Rng) -> Vec<Term> {
    let n = rng.gen_range(0..=8);
    (0..n)
        .map(|_| {
            let mask: u32 = rng.gen_range(0..1 << ALGEBRA_VARS);
            let combo = (0..ALGEBRA_VARS).filter(|i| mask >> i & 1 == 1).map(VarId).collect();
            let value = loop {
                let v = rng.gen_range(ALGEBRA_VALUES.0..=ALGEBRA_VALUES.1);
                if v != 0 {
                    break v;
                }
            };
            Term { combo, value }
        })
        .collect()
}

fn build(store: &mut NodeStore, terms: &[Term]) -> Vsop {
    terms.iter().fold(Vsop::zero(), |acc, t| {
        let x = Vsop::from_term(store, t.value, &t.combo);
        acc.add(store, &x)
    })
}

fn explicit(store: &mut NodeStore, x: &Vsop) -> ExplicitVsop {
    ExplicitVsop::from_terms(x.terms(store, usize::MAX).expect("small values"))
}

fn algebra_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (tf, tg) = (random_terms(rng), random_terms(rng));
    let mut s = NodeStore::new();
    let (f, g) = (build(&mut s, &tf), build(&mut s, &tg));
    let (ef, eg) = (ExplicitVsop::from_terms(tf.clone()), ExplicitVsop::from_terms(tg.clone()));
    if explicit(&mut s, &f) != ef {
        return Err(format!("construction of {tf:?}"));
    }
    let check = |name: &str, got: Vsop, want: ExplicitVsop, s: &mut NodeStore| {
        if explicit(s, &got) == want {
            Ok(())
        } else {
            Err(format!("{name} on {tf:?} and {tg:?}"))
        }
    };
    let x = f.add(&mut s, &g);
    check("add", x, ef.add(&eg), &mut s)?;
    let x = f.sub(&mut s, &g);
    check("sub", x, ef.sub(&eg), &mut s)?;
    let x = f.neg(&mut s);
    check("neg", x, ef.neg(), &mut s)?;
    let x = f.mul(&mut s, &g);
    check("mul", x, ef.mul(&eg), &mut s)?;
    let x = f.permit(&mut s, &g);
    check("permit", x, ef.permit(&eg), &mut s)?;
    let x = f.restrict(&mut s, &g);
    check("restrict", x, ef.restrict(&eg), &mut s)?;
    let x = f.filter_then(&mut s, &g);
    check("filter_then", x, ef.filter_then(&eg), &mut s)?;
    for op in CmpOp::ALL {
        let x = f.compare(&mut s, op, &g);
        check("compare", x, ef.compare(op, &eg), &mut s)?;
        let k = rng.gen_range(-12..=12);
        let x = f.filter_const(&mut s, op, k);
        check("filter_const", x, ef.filter_const(op, k), &mut s)?;
        let x = f.terms_op(&mut s, op, &Vsop::constant(k)).map_err(|e| e.to_string())?;
        check("terms_op", x, ef.terms_op(op, k), &mut s)?;
    }
    let scalars_match = f.count_terms(&mut s) == BigUint::from(ef.count_terms())
        && f.total_val(&mut s) == ef.total_val().into()
        && f.max_val(&mut s).ok() == ef.max_val()
        && f.min_val(&mut s).ok() == ef.min_val()
        && f.max_cover(&mut s).ok() == ef.max_cover()
        && f.min_cover(&mut s).ok() == ef.min_cover();
    if !scalars_match {
        return Err(format!("count/total/max/min/cover on {tf:?}"));
    }
    Ok(())
}

fn vsop_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7673_6f70);
    for case in 0..ALGEBRA_CASES {
        algebra_case(&mut rng).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(format!("{ALGEBRA_CASES} random expression pairs, all operations exact"))
}

fn report(index: usize, title: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let started = Instant::now();
    let outcome = run();
    let elapsed = started.elapsed();
    let (verdict, detail) = match &outcome {
        Ok(d) if elapsed <= budget => ("PASS", d.clone()),
        Ok(d) => ("FAIL", format!("{d}; over time budget {budget:?}")),
        Err(e) => ("FAIL", e.clone()),
    };
    println!("[{verdict}] {index}. {title}: {detail} ({:.2?})", elapsed);
    verdict == "PASS"
}

fn main() {
    let dags = corpus();
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let results = [
        report(1, "digit encoding", Duration::from_secs(1), || golden(selfcheck::encoding_checks())),
        report(2, "operation table", Duration::from_secs(1), || golden(selfcheck::operation_checks())),
        report(3, "example graph", Duration::from_secs(1), || golden(selfcheck::example_graph_checks())),
        report(4, "oracle equivalence", minutes(5), || oracle_equivalence(&dags)),
        report(5, "pruning soundness", minutes(10), || pruning_soundness(&dags)),
        report(6, "exact big count", minutes(2), big_count),
        report(7, "scale smoke", minutes(10), scale_smoke),
        report(8, "offset invariance", minutes(10), || offset_invariance(&dags)),
        report(9, "VSOP algebra", minutes(5), vsop_algebra),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
