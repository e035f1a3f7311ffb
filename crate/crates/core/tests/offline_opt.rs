mod common;

use common::{nid, random_shaped_tree};
use kserver_core::oracle::{naive_query, offline_opt, offline_opt_unrestricted};
use kserver_core::NodeId;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn lazy_optimum_equals_unrestricted_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=3);
        let tree = random_shaped_tree(&mut rng, n);
        let initial: Vec<NodeId> = (0..k).map(|_| nid(rng.gen_range(1..=n as u32))).collect();
        let queries: Vec<NodeId> = (0..rng.gen_range(0..=6))
            .map(|_| nid(rng.gen_range(1..=n as u32)))
            .collect();
        assert_eq!(
            offline_opt(&tree, &initial, &queries).unwrap(),
            offline_opt_unrestricted(&tree, &initial, &queries).unwrap()
        );
    }
}

#[test]
fn optimum_never_exceeds_online_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let k = rng.gen_range(1..=3);
        let tree = random_shaped_tree(&mut rng, n);
        let initial: Vec<NodeId> = (0..k).map(|_| nid(rng.gen_range(1..=n as u32))).collect();
        let queries: Vec<NodeId> = (0..8).map(|_| nid(rng.gen_range(1..=n as u32))).collect();
        let opt = offline_opt(&tree, &initial, &queries).unwrap();
        let mut pos = initial.clone();
        let online: u64 = queries
            .iter()
            .map(|&q| naive_query(&tree, &mut pos, q).cost)
            .sum();
        assert!(opt <= online, "opt {opt} > online {online}");
    }
}

#[test]
fn empty_request_sequence_costs_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let tree = random_shaped_tree(&mut rng, 5);
    assert_eq!(offline_opt(&tree, &[nid(1)], &[]).unwrap(), 0);
}
