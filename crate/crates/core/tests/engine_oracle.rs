mod common;

use std::collections::HashSet;

use common::{floor_log2, nid, random_shaped_tree, random_tree, walk_path};
use kserver_core::oracle::naive_query;
use kserver_core::{Engine, Error, NodeId, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn path_tree(n: u32) -> Tree {
    let edges: Vec<(u32, u32)> = (2..=n).map(|i| (i - 1, i)).collect();
    Tree::build(n as usize, &edges).unwrap()
}

/// Runs `queries` through the engine and the phase simulation side by side.
fn compare(tree: &Tree, initial: &[u32], queries: &[u32]) {
    let mut engine = Engine::preprocess(tree.clone(), initial).unwrap();
    let mut naive: Vec<NodeId> = initial.iter().map(|&v| nid(v)).collect();
    let bound = 2 * (floor_log2(tree.len()) + 1);
    for (t, &q) in queries.iter().enumerate() {
        let before = engine.positions().to_vec();
        let fast = engine.process_query(q).unwrap();
        let slow = naive_query(tree, &mut naive, nid(q));
        assert_eq!(
            fast,
            slow,
            "query #{t} q={q} initial={initial:?} edges={:?}",
            tree.edges()
        );
        assert_eq!(engine.positions(), &naive[..]);
        assert!(engine.last_stats().max_paths_per_call <= bound);

        let lca = engine.lca_index();
        let mut sum = 0u64;
        for (i, (&a, &b)) in before.iter().zip(engine.positions()).enumerate() {
            let d = tree.dist(lca, a, b);
            sum += d as u64;
            // servers only move toward the query
            assert_eq!(
                tree.dist(lca, a, nid(q)),
                d + tree.dist(lca, b, nid(q)),
                "server {}",
                i + 1
            );
        }
        assert_eq!(sum, fast.cost);
    }
}

#[test]
fn two_servers_on_a_path() {
    let tree = path_tree(5);
    let mut engine = Engine::preprocess(tree, &[1, 5]).unwrap();
    let out = engine.process_query(3).unwrap();
    assert_eq!(out.cost, 4);
    assert_eq!(out.serving_server, 1);
    assert_eq!(engine.positions(), &[nid(3), nid(3)]);
}

#[test]
fn single_server_pays_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tree = random_tree(&mut rng, 60);
    let mut engine = Engine::preprocess(tree.clone(), &[7]).unwrap();
    let mut at = nid(7);
    let mut total = 0;
    for _ in 0..50 {
        let q = nid(rng.gen_range(1..=60));
        let want = engine.dist(at, q) as u64;
        let out = engine.process_query(q.get()).unwrap();
        assert_eq!(out.cost, want);
        assert_eq!(out.serving_server, 1);
        total += want;
        at = q;
    }
    assert!(total > 0);
}

#[test]
fn server_already_on_query_is_free() {
    let tree = path_tree(6);
    let mut engine = Engine::preprocess(tree, &[2, 4, 6]).unwrap();
    let out = engine.process_query(4).unwrap();
    assert_eq!(out.cost, 0);
    assert_eq!(out.serving_server, 2);
    assert!(out.moves.is_empty());
    assert_eq!(engine.positions(), &[nid(2), nid(4), nid(6)]);
}

#[test]
fn stacked_servers_only_smallest_id_moves() {
    let tree = path_tree(4);
    let mut engine = Engine::preprocess(tree, &[1, 1]).unwrap();
    let out = engine.process_query(4).unwrap();
    assert_eq!(out.serving_server, 1);
    assert_eq!(out.cost, 3);
    assert_eq!(engine.positions(), &[nid(4), nid(1)]);
}

#[test]
fn invalid_query_and_empty_servers() {
    let tree = path_tree(3);
    assert_eq!(
        Engine::preprocess(tree.clone(), &[]).unwrap_err(),
        Error::NoServers
    );
    assert!(Engine::preprocess(tree.clone(), &[4]).is_err());
    let mut engine = Engine::preprocess(tree, &[1]).unwrap();
    assert_eq!(
        engine.process_query(0).unwrap_err(),
        Error::InvalidNode { node: 0 }
    );
    assert_eq!(
        engine.process_query(9).unwrap_err(),
        Error::InvalidNode { node: 9 }
    );
}

#[test]
fn matches_phase_simulation_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE9);
    for _ in 0..1500 {
        let n = rng.gen_range(1..=60);
        let k = rng.gen_range(1..=6);
        let tree = random_shaped_tree(&mut rng, n);
        let initial: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=n as u32)).collect();
        let queries: Vec<u32> = (0..20).map(|_| rng.gen_range(1..=n as u32)).collect();
        compare(&tree, &initial, &queries);
    }
}

#[test]
fn matches_phase_simulation_with_crowded_servers() {
    // many servers on few nodes exercises ties and shared positions
    let mut rng = ChaCha8Rng::seed_from_u64(0xE10);
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let k = rng.gen_range(2..=10);
        let tree = random_shaped_tree(&mut rng, n);
        let initial: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=n as u32)).collect();
        let queries: Vec<u32> = (0..30).map(|_| rng.gen_range(1..=n as u32)).collect();
        compare(&tree, &initial, &queries);
    }
}

#[test]
fn color_path_colors_exactly_the_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let n = rng.gen_range(1..=80);
        let tree = random_shaped_tree(&mut rng, n);
        let mut engine = Engine::preprocess(tree.clone(), &[1, 1]).unwrap();
        for _ in 0..10 {
            let u = nid(rng.gen_range(1..=n as u32));
            let v = nid(rng.gen_range(1..=n as u32));
            engine.start_epoch().unwrap();
            engine.color_path(u, v, 2).unwrap();
            let on_path: HashSet<NodeId> = walk_path(&tree, u, v).into_iter().collect();
            for x in tree.nodes() {
                // closest color from x to itself reads x's own color
                let got = engine.get_closest_color(x, x);
                if on_path.contains(&x) {
                    assert_eq!(got.unwrap(), (x, 2));
                } else {
                    assert_eq!(got.unwrap_err(), Error::NoColoredNode);
                }
            }
        }
    }
}

#[test]
fn closest_color_matches_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let n = rng.gen_range(1..=60);
        let tree = random_shaped_tree(&mut rng, n);
        let mut engine = Engine::preprocess(tree.clone(), &[1, 1, 1]).unwrap();
        engine.start_epoch().unwrap();
        let mut color = vec![0u32; n + 1];
        for c in 1..=3 {
            let u = nid(rng.gen_range(1..=n as u32));
            let v = nid(rng.gen_range(1..=n as u32));
            engine.color_path(u, v, c).unwrap();
            for x in walk_path(&tree, u, v) {
                color[x.get() as usize] = c;
            }
        }
        for _ in 0..30 {
            let u = nid(rng.gen_range(1..=n as u32));
            let v = nid(rng.gen_range(1..=n as u32));
            let want = walk_path(&tree, u, v)
                .into_iter()
                .find(|x| color[x.get() as usize] > 0)
                .map(|x| (x, color[x.get() as usize]));
            match want {
                Some(w) => assert_eq!(engine.get_closest_color(u, v).unwrap(), w),
                None => assert_eq!(
                    engine.get_closest_color(u, v).unwrap_err(),
                    Error::NoColoredNode
                ),
            }
        }
    }
}

#[test]
fn fresh_epoch_erases_colors() {
    let tree = path_tree(10);
    let mut engine = Engine::preprocess(tree, &[1, 10]).unwrap();
    engine.process_query(5).unwrap();
    engine.start_epoch().unwrap();
    assert_eq!(
        engine.get_closest_color(nid(1), nid(10)).unwrap_err(),
        Error::NoColoredNode
    );
}

#[test]
fn move_along_examples() {
    let tree = path_tree(5);
    let engine = Engine::preprocess(tree, &[1]).unwrap();
    assert_eq!(engine.move_along(nid(5), nid(1), 3).unwrap(), nid(2));
    assert_eq!(engine.move_along(nid(5), nid(1), 0).unwrap(), nid(5));
    assert_eq!(engine.move_along(nid(5), nid(1), 4).unwrap(), nid(1));
    assert_eq!(engine.move_along(nid(1), nid(5), 2).unwrap(), nid(3));
    assert_eq!(
        engine.move_along(nid(5), nid(1), 5).unwrap_err(),
        Error::StepsExceedPath {
            steps: 5,
            length: 4
        }
    );
}

#[test]
fn move_along_matches_walk() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let n = rng.gen_range(1..=100);
        let tree = random_shaped_tree(&mut rng, n);
        let engine = Engine::preprocess(tree.clone(), &[1]).unwrap();
        for _ in 0..20 {
            let u = nid(rng.gen_range(1..=n as u32));
            let v = nid(rng.gen_range(1..=n as u32));
            let path = walk_path(&tree, u, v);
            for (g, &x) in path.iter().enumerate() {
                assert_eq!(engine.move_along(u, v, g as u32).unwrap(), x);
            }
        }
    }
}

#[test]
fn preprocess_shapes() {
    let engine = Engine::preprocess(path_tree(8), &[1]).unwrap();
    assert_eq!(engine.segtree_lengths().collect::<Vec<_>>(), [8]);

    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let tree = random_tree(&mut rng, 1000);
    let engine = Engine::preprocess(tree, &[1, 2, 3]).unwrap();
    let total: usize = engine.segtree_lengths().sum();
    assert_eq!(total, 1000);
    assert_eq!(engine.segtree_lengths().len(), engine.hld().path_count());
}

#[test]
fn query_counter_and_visits_accumulate() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let tree = random_tree(&mut rng, 200);
    let mut engine = Engine::preprocess(tree, &[1, 50, 100, 150]).unwrap();
    let mut visits = 0;
    for i in 0..25 {
        engine.process_query(rng.gen_range(1..=200)).unwrap();
        visits += engine.last_stats().segtree_visits;
        assert_eq!(engine.query_counter(), i + 1);
    }
    assert_eq!(engine.total_visits(), visits);
}
