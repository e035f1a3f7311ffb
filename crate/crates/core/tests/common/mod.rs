#![allow(dead_code)]

use std::collections::VecDeque;

use kserver_core::{NodeId, Tree};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn nid(v: u32) -> NodeId {
    NodeId::new(v).unwrap()
}

/// Random recursive tree with shuffled labels; node 1 is whichever vertex
/// received label 1.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> Tree {
    let mut labels: Vec<u32> = (1..=n as u32).collect();
    labels.shuffle(rng);
    let edges: Vec<(u32, u32)> = (1..n)
        .map(|i| (labels[rng.gen_range(0..i)], labels[i]))
        .collect();
    Tree::build(n, &edges).unwrap()
}

/// Mix of shapes that stress long paths and wide fan-out.
pub fn random_shaped_tree(rng: &mut impl Rng, n: usize) -> Tree {
    let mut labels: Vec<u32> = (1..=n as u32).collect();
    labels.shuffle(rng);
    let shape = rng.gen_range(0..4);
    let spine = (n / 2).max(1);
    let edges: Vec<(u32, u32)> = (1..n)
        .map(|i| {
            let parent = match shape {
                0 => rng.gen_range(0..i),
                1 => i - 1,
                2 => 0,
                _ if i < spine => i - 1,
                _ => rng.gen_range(0..spine),
            };
            (labels[parent], labels[i])
        })
        .collect();
    Tree::build(n, &edges).unwrap()
}

pub fn bfs_from(tree: &Tree, s: NodeId) -> Vec<u32> {
    let mut dist = vec![u32::MAX; tree.len() + 1];
    dist[s.get() as usize] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for w in tree.neighbors(v) {
            if dist[w.get() as usize] == u32::MAX {
                dist[w.get() as usize] = dist[v.get() as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Nodes of the `u`-`v` path in order, found by walking parents.
pub fn walk_path(tree: &Tree, u: NodeId, v: NodeId) -> Vec<NodeId> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![];
    let mut right = vec![];
    while a != b {
        if tree.dist_from_root(a) >= tree.dist_from_root(b) {
            left.push(a);
            a = tree.parent(a).unwrap();
        } else {
            right.push(b);
            b = tree.parent(b).unwrap();
        }
    }
    left.push(a);
    left.extend(right.into_iter().rev());
    left
}

pub fn walk_lca(tree: &Tree, u: NodeId, v: NodeId) -> NodeId {
    let (mut a, mut b) = (u, v);
    while a != b {
        if tree.dist_from_root(a) >= tree.dist_from_root(b) {
            a = tree.parent(a).unwrap();
        } else {
            b = tree.parent(b).unwrap();
        }
    }
    a
}

pub fn floor_log2(n: usize) -> u32 {
    usize::BITS - 1 - n.leading_zeros()
}
