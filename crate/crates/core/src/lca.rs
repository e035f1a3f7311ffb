//! Constant-time lowest common ancestor via Euler tour and a sparse table.
//!
//! Preprocessing is `O(n log n)`. Table cells hold BFS ranks rather than
//! node ids: depth never decreases along BFS order, so the shallowest node
//! of a tour range is the one with the smallest rank and a range minimum
//! is a plain integer minimum. A query reads two first-occurrence slots,
//! two table cells and one rank-to-node slot.

use alloc::vec;
use alloc::vec::Vec;

use crate::tree::{NodeId, Tree};

/// Upper bound on table reads performed by one [`LcaIndex::lca`] call.
pub const LCA_READS_PER_QUERY: u32 = 5;

#[derive(Debug, Clone)]
pub struct LcaIndex {
    euler_tour: Vec<NodeId>,
    depths: Vec<u32>,
    first_occurrence: Vec<u32>,
    node_of_rank: Vec<NodeId>,
    // level j occupies sparse[row_start[j]..]; entry i is the minimum rank
    // over euler_tour[i .. i + 2^j]
    sparse: Vec<u32>,
    row_start: Vec<usize>,
}

impl LcaIndex {
    pub fn new(tree: &Tree) -> LcaIndex {
        let n = tree.len();
        let mut euler_tour = Vec::with_capacity(2 * n - 1);
        let mut depths = Vec::with_capacity(2 * n - 1);
        let mut first_occurrence = vec![u32::MAX; n + 1];

        // (node, index of the next child to descend into)
        let mut stack: Vec<(NodeId, usize)> = Vec::with_capacity(64);
        stack.push((NodeId::ROOT, 0));
        first_occurrence[NodeId::ROOT.idx()] = 0;
        euler_tour.push(NodeId::ROOT);
        depths.push(0);
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            let children = tree.children(v);
            if next < children.len() {
                top.1 += 1;
                let c = children[next];
                first_occurrence[c.idx()] = euler_tour.len() as u32;
                euler_tour.push(c);
                depths.push(stack.len() as u32);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    euler_tour.push(p);
                    depths.push(stack.len() as u32 - 1);
                }
            }
        }
        debug_assert_eq!(euler_tour.len(), 2 * n - 1);

        let node_of_rank = tree.bfs_order().to_vec();
        let mut rank = vec![0u32; n + 1];
        for (r, v) in node_of_rank.iter().enumerate() {
            rank[v.idx()] = r as u32;
        }

        let m = euler_tour.len();
        let levels = floor_log2(m) as usize + 1;
        let mut row_start = Vec::with_capacity(levels);
        let mut total = 0;
        for j in 0..levels {
            row_start.push(total);
            total += m + 1 - (1usize << j);
        }
        let mut sparse = vec![0u32; total];
        for (cell, v) in sparse.iter_mut().zip(&euler_tour) {
            *cell = rank[v.idx()];
        }
        for j in 1..levels {
            let half = 1usize << (j - 1);
            let (done, rest) = sparse.split_at_mut(row_start[j]);
            let prev = &done[row_start[j - 1]..];
            let len = m + 1 - (1usize << j);
            for ((cell, &a), &b) in rest[..len]
                .iter_mut()
                .zip(&prev[..len])
                .zip(&prev[half..half + len])
            {
                *cell = a.min(b);
            }
        }

        LcaIndex {
            euler_tour,
            depths,
            first_occurrence,
            node_of_rank,
            sparse,
            row_start,
        }
    }

    #[inline]
    pub fn lca(&self, u: NodeId, v: NodeId) -> NodeId {
        self.lca_counted(u, v).0
    }

    /// LCA together with the number of table reads it took.
    #[inline]
    pub fn lca_counted(&self, u: NodeId, v: NodeId) -> (NodeId, u32) {
        let mut reads = 0;
        let mut read = |x: u32| {
            reads += 1;
            x as usize
        };
        let mut l = read(self.first_occurrence[u.idx()]);
        let mut r = read(self.first_occurrence[v.idx()]);
        if l > r {
            core::mem::swap(&mut l, &mut r);
        }
        let j = floor_log2(r - l + 1) as usize;
        let row = &self.sparse[self.row_start[j]..];
        let a = read(row[l]);
        let b = read(row[r + 1 - (1 << j)]);
        reads += 1;
        (self.node_of_rank[a.min(b)], reads)
    }

    pub fn euler_tour(&self) -> &[NodeId] {
        &self.euler_tour
    }

    pub fn depths(&self) -> &[u32] {
        &self.depths
    }

    pub fn first_occurrence(&self, v: NodeId) -> usize {
        self.first_occurrence[v.idx()] as usize
    }
}

#[inline]
fn floor_log2(x: usize) -> u32 {
    usize::BITS - 1 - x.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nid(v: u32) -> NodeId {
        NodeId::new(v).unwrap()
    }

    #[test]
    fn single_node_tour() {
        let t = Tree::build(1, &[]).unwrap();
        let idx = LcaIndex::new(&t);
        assert_eq!(idx.euler_tour(), &[NodeId::ROOT]);
        assert_eq!(idx.lca(NodeId::ROOT, NodeId::ROOT), NodeId::ROOT);
    }

    #[test]
    fn chain_tour_and_queries() {
        let t = Tree::build(3, &[(1, 2), (2, 3)]).unwrap();
        let idx = LcaIndex::new(&t);
        let tour: std::vec::Vec<u32> = idx.euler_tour().iter().map(|v| v.get()).collect();
        assert_eq!(tour, [1, 2, 3, 2, 1]);
        assert_eq!(idx.depths(), &[0, 1, 2, 1, 0]);
        assert_eq!(idx.lca(nid(2), nid(3)), nid(2));
        assert_eq!(idx.lca(nid(3), nid(3)), nid(3));
    }

    #[test]
    fn star_siblings() {
        let t = Tree::build(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let idx = LcaIndex::new(&t);
        assert_eq!(idx.lca(nid(2), nid(3)), nid(1));
        assert_eq!(idx.lca(nid(4), nid(2)), nid(1));
        assert_eq!(idx.lca_counted(nid(4), nid(2)).1, LCA_READS_PER_QUERY);
    }

    #[test]
    fn tour_steps_are_adjacent() {
        let t = Tree::build(7, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (6, 7)]).unwrap();
        let idx = LcaIndex::new(&t);
        assert_eq!(idx.euler_tour().len(), 13);
        for w in idx.depths().windows(2) {
            assert_eq!(w[0].abs_diff(w[1]), 1);
        }
        for v in t.nodes() {
            assert_eq!(idx.euler_tour()[idx.first_occurrence(v)], v);
        }
    }
}
