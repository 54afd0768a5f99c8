// SPDX-License-Identifier: Apache-2.0

//! Golden checks on two small reference expressions and a five-vertex graph.
//!
//! `F = 4abc + 5ab + 3bc + a` and `G = 5ab − 3bc` over the order
//! `a < b < c`, plus the graph `v2→v7 (4), v3→v7 (4), v4→v8 (4), v7→v8 (2)`.

use crate::graph::parse;
use crate::pathdb::{BuildOptions, PathDb};
use crate::vsop::{CmpOp, Term, Vsop};
use crate::zbdd::{NodeRef, NodeStore, VarId};

/// One golden comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

pub const EXAMPLE_GRAPH: &str = "v2 v7 4\nv3 v7 4\nv4 v8 4\nv7 v8 2\n";

const A: VarId = VarId(0);
const B: VarId = VarId(1);
const C: VarId = VarId(2);

fn letters(combo: &[VarId]) -> String {
    combo
        .iter()
        .map(|v| char::from(b'a' + v.0 as u8))
        .collect()
}

/// Renders an expression over `a, b, c` as e.g. `4abc + 5ab - 9bc`, larger
/// combinations first, then alphabetically.
pub fn render(store: &mut NodeStore, x: &Vsop) -> String {
    let mut terms = x.terms(store, usize::MAX).expect("small values");
    terms.sort_by(|p, q| q.combo.len().cmp(&p.combo.len()).then_with(|| p.combo.cmp(&q.combo)));
    render_terms(&terms)
}

fn render_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let magnitude = t.value.unsigned_abs();
        let sign = match (i, t.value < 0) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        out.push_str(sign);
        let name = letters(&t.combo);
        if magnitude != 1 || name.is_empty() {
            out.push_str(&magnitude.to_string());
        }
        out.push_str(&name);
    }
    out
}

fn render_set(store: &NodeStore, set: NodeRef) -> String {
    let combos: Vec<String> = store.enumerate(set, usize::MAX).iter().map(|c| letters(c)).collect();
    format!("{{{}}}", combos.join(", "))
}

fn expr(store: &mut NodeStore, terms: &[(i128, &[VarId])]) -> Vsop {
    terms.iter().fold(Vsop::zero(), |acc, &(v, c)| {
        let t = Vsop::from_term(store, v, c);
        acc.add(store, &t)
    })
}

/// `F = 4abc + 5ab + 3bc + a`
pub fn reference_f(store: &mut NodeStore) -> Vsop {
    expr(store, &[(4, &[A, B, C]), (5, &[A, B]), (3, &[B, C]), (1, &[A])])
}

/// `G = 5ab − 3bc`
pub fn reference_g(store: &mut NodeStore) -> Vsop {
    expr(store, &[(5, &[A, B]), (-3, &[B, C])])
}

/// Digit sets of `F`: `F_0 = {ab, bc, a}`, `F_1 = {bc}`, `F_2 = {abc, ab, bc}`.
pub fn encoding_checks() -> Vec<Check> {
    let mut s = NodeStore::new();
    let f = reference_f(&mut s);
    let expected = [
        s.family([vec![A, B], vec![B, C], vec![A]]),
        s.combination(&[B, C]),
        s.family([vec![A, B, C], vec![A, B], vec![B, C]]),
    ];
    let mut checks: Vec<Check> = expected
        .iter()
        .enumerate()
        .map(|(i, &want)| Check {
            name: format!("F_{i}"),
            expected: render_set(&s, want),
            actual: render_set(&s, f.digits().get(i).copied().unwrap_or(NodeRef::EMPTY)),
        })
        .collect();
    checks.push(Check {
        name: "digit count".into(),
        expected: "3".into(),
        actual: f.digits().len().to_string(),
    });
    checks
}

/// The operation examples on `F` and `G`, including the `<` dual of `F > G`.
pub fn operation_checks() -> Vec<Check> {
    let mut s = NodeStore::new();
    let f = reference_f(&mut s);
    let g = reference_g(&mut s);
    let unit = |s: &mut NodeStore, combos: &[&[VarId]]| {
        let terms: Vec<(i128, &[VarId])> = combos.iter().map(|c| (1, *c)).collect();
        expr(s, &terms)
    };
    let a = unit(&mut s, &[&[A]]);
    let ab = unit(&mut s, &[&[A, B]]);
    let abc = unit(&mut s, &[&[A, B, C]]);
    let c = unit(&mut s, &[&[C]]);
    let a_plus_b = unit(&mut s, &[&[A], &[B]]);
    let three = Vsop::constant(3);

    let mut rows: Vec<(&str, &str, String)> = Vec::new();
    let mut row = |name, expected, actual: String| rows.push((name, expected, actual));

    let x = f.restrict(&mut s, &a);
    row("F.Restrict(a)", "4abc + 5ab + a", render(&mut s, &x));
    let x = f.restrict(&mut s, &ab);
    row("F.Restrict(ab)", "4abc + 5ab", render(&mut s, &x));
    let x = f.restrict(&mut s, &a_plus_b);
    row("F.Restrict(a+b)", "4abc + 5ab + 3bc + a", render(&mut s, &x));
    let x = f.permit(&mut s, &ab);
    row("F.Permit(ab)", "5ab + a", render(&mut s, &x));
    let x = f.permit(&mut s, &abc);
    row("F.Permit(abc)", "4abc + 5ab + 3bc + a", render(&mut s, &x));
    let x = f.permit(&mut s, &c);
    row("F.Permit(c)", "0", render(&mut s, &x));
    row("F.CountTerms()", "4", f.count_terms(&mut s).to_string());
    row("F.MaxVal()", "5", f.max_val(&mut s).map_or_else(|e| e.to_string(), |v| v.to_string()));
    row("F.MinVal()", "1", f.min_val(&mut s).map_or_else(|e| e.to_string(), |v| v.to_string()));
    let x = f.terms_op(&mut s, CmpOp::Ge, &three).expect("constant");
    row("F.TermsGE(3)", "4abc + 5ab + 3bc", render(&mut s, &x));
    let x = f.terms_op(&mut s, CmpOp::Lt, &three).expect("constant");
    row("F.TermsLT(3)", "a", render(&mut s, &x));
    let x = f.add(&mut s, &g);
    row("F+G", "4abc + 10ab + a", render(&mut s, &x));
    let x = f.sub(&mut s, &g);
    row("F-G", "4abc + 6bc + a", render(&mut s, &x));
    let x = f.mul(&mut s, &g);
    row("FxG", "5abc + 30ab - 9bc", render(&mut s, &x));
    let x = f.cmp_eq(&mut s, &g);
    row("F==G", "ab", render(&mut s, &x));
    let x = f.cmp_gt(&mut s, &g);
    row("F>G", "abc + bc + a", render(&mut s, &x));
    let x = g.cmp_gt(&mut s, &f);
    row("G>F", "0", render(&mut s, &x));
    let x = g.cmp_lt(&mut s, &f);
    row("G<F", "abc + bc + a", render(&mut s, &x));
    let x = f.cmp_ne(&mut s, &g);
    row("F!=G", "abc + bc + a", render(&mut s, &x));
    let x = f.min_cover(&mut s).map(|t| render_terms(&[t]));
    row("F.MinCover()", "a", x.unwrap_or_else(|e| e.to_string()));
    let x = f.max_cover(&mut s).map(|t| render_terms(&[t]));
    row("F.MaxCover()", "5ab", x.unwrap_or_else(|e| e.to_string()));

    rows.into_iter()
        .map(|(name, expected, actual)| Check {
            name: name.to_string(),
            expected: expected.to_string(),
            actual,
        })
        .collect()
}

/// Builds the five-vertex example graph and checks its path database.
pub fn example_graph_checks() -> Vec<Check> {
    let dag = parse(EXAMPLE_GRAPH).expect("valid example graph");
    let mut s = NodeStore::new();
    let opts = BuildOptions {
        retain_partials: true,
        ..Default::default()
    };
    let db = PathDb::build(&mut s, &dag, &opts).expect("example graph builds");
    let describe = |s: &mut NodeStore, x: &Vsop| {
        let mut terms: Vec<String> = x
            .terms(s, usize::MAX)
            .expect("small values")
            .into_iter()
            .map(|t| {
                let mut vs: Vec<usize> = t.combo.iter().map(|&v| db.vertex_of(v)).collect();
                vs.sort_by_key(|&v| dag.topo_position(v));
                let names: Vec<&str> = vs.iter().map(|&v| dag.name(v)).collect();
                format!("{}:{}", names.join("."), t.value - db.offset())
            })
            .collect();
        terms.sort();
        terms.join(" ")
    };
    let v7 = dag.vertex("v7").expect("v7 exists");
    let l7 = db.partial(v7).expect("partials retained").clone();
    let all = db.expression().clone();
    vec![
        Check {
            name: "L_7".into(),
            expected: "v2.v7:4 v3.v7:4".into(),
            actual: describe(&mut s, &l7),
        },
        Check {
            name: "L".into(),
            expected: "v2.v7.v8:6 v3.v7.v8:6 v4.v8:4".into(),
            actual: describe(&mut s, &all),
        },
        Check {
            name: "path count".into(),
            expected: "3".into(),
            actual: db.count_paths(&mut s).to_string(),
        },
        Check {
            name: "longest length".into(),
            expected: "6".into(),
            actual: db
                .longest_length(&mut s)
                .map_or_else(|e| e.to_string(), |v| v.to_string()),
        },
        Check {
            name: "shortest length".into(),
            expected: "4".into(),
            actual: db
                .shortest_length(&mut s)
                .map_or_else(|e| e.to_string(), |v| v.to_string()),
        },
    ]
}

/// Every golden check, grouped by section name.
pub fn run() -> Vec<(&'static str, Vec<Check>)> {
    vec![
        ("encoding", encoding_checks()),
        ("operations", operation_checks()),
        ("example graph", example_graph_checks()),
    ]
}
