// SPDX-License-Identifier: Apache-2.0

use kpaths::generate::{layered, random};
use kpaths::oracle::{enumerate_paths, reference_top_k};
use kpaths::pathdb::PathDbError;
use kpaths::{parse, BuildOptions, Mode, NodeStore, PathDb, VarOrder};

const EXAMPLE: &str = "
# five vertices, three paths
v2 v7 4
v3 v7 4
v4 v8 4
v7 v8 2
";

#[test]
fn example_graph_queries() {
    let dag = parse(EXAMPLE).unwrap();
    let mut store = NodeStore::new();
    let db = PathDb::build(&mut store, &dag, &BuildOptions::default()).unwrap();

    let top = db.top_k_longest(&mut store, 1).unwrap();
    assert_eq!(top.threshold, Some(6));
    assert_eq!(top.count, 2u32.into());
    let listed = db.materialize(&mut store, &top, 10).unwrap();
    let names: Vec<String> = listed.iter().map(|p| db.names(p).join("->")).collect();
    assert_eq!(names, ["v2->v7->v8", "v3->v7->v8"]);

    let shortest = db.kth_shortest(&mut store, 1).unwrap();
    assert_eq!((db.names(&shortest), shortest.length), (vec!["v4".into(), "v8".into()], 4));
    assert_eq!(db.kth_longest(&mut store, 3).unwrap().length, 4);
    assert_eq!(db.count_within(&mut store, 5, Mode::Longest), 2u32.into());
    assert_eq!(db.count_within(&mut store, 5, Mode::Shortest), 1u32.into());
}

#[test]
fn k_beyond_path_count_returns_everything() {
    let dag = parse(EXAMPLE).unwrap();
    let mut store = NodeStore::new();
    let db = PathDb::build(&mut store, &dag, &BuildOptions::default()).unwrap();
    let r = db.top_k_shortest(&mut store, 50).unwrap();
    assert_eq!(r.count, 3u32.into());
    assert_eq!(r.threshold, Some(6));
    assert_eq!(r.paths, *db.expression());
}

#[test]
fn errors_surface_as_values() {
    let dag = parse(EXAMPLE).unwrap();
    let mut store = NodeStore::new();
    let db = PathDb::build(&mut store, &dag, &BuildOptions::default()).unwrap();
    assert!(matches!(db.top_k_longest(&mut store, 0), Err(PathDbError::ZeroK)));
    let opts = BuildOptions {
        offset: Some(0),
        ..Default::default()
    };
    assert!(matches!(
        PathDb::build(&mut store, &dag, &opts),
        Err(PathDbError::InvalidOffset { .. })
    ));
    assert!(parse("a b 1\nb c 1\nc a 1\n").is_err());
}

#[test]
fn negative_weights_and_both_orders() {
    for seed in 0..20 {
        let dag = random(11, 0.4, -10, 10, seed).unwrap();
        let paths = enumerate_paths(&dag).unwrap();
        if paths.is_empty() {
            continue;
        }
        for order in [VarOrder::Topo, VarOrder::Reverse] {
            let mut store = NodeStore::new();
            let opts = BuildOptions {
                var_order: order,
                ..Default::default()
            };
            let db = PathDb::build(&mut store, &dag, &opts).unwrap();
            for mode in [Mode::Longest, Mode::Shortest] {
                let k = (paths.len() as u64).div_ceil(2);
                let r = db.top_k(&mut store, k, mode).unwrap();
                let mut got: Vec<_> = db
                    .materialize(&mut store, &r, usize::MAX)
                    .unwrap()
                    .into_iter()
                    .map(|p| (p.vertices, p.length))
                    .collect();
                let mut want: Vec<_> = reference_top_k(&paths, k as usize, mode)
                    .into_iter()
                    .map(|p| (p.vertices, p.length))
                    .collect();
                got.sort();
                want.sort();
                assert_eq!(got, want, "seed {seed} {order:?} {mode:?}");
            }
        }
    }
}

#[test]
fn layered_closed_form() {
    let dag = layered(5, 3, 1, 1, 0).unwrap();
    let mut store = NodeStore::new();
    let db = PathDb::build(&mut store, &dag, &BuildOptions::default()).unwrap();
    assert_eq!(db.count_paths(&mut store), 81u32.into());
    assert_eq!(db.longest_length(&mut store).unwrap(), 4);
    assert_eq!(db.shortest_length(&mut store).unwrap(), 4);
    let all = db.top_k_longest(&mut store, 1).unwrap();
    assert_eq!(all.count, 81u32.into());
}
