//! Rooted tree representation with root distances.
//!
//! Nodes are 1-indexed and node 1 is always the root. Per-node arrays are
//! sized `n + 1` and slot 0 is unused.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, LcaIndex, Result};

/// A node of the tree, `1 <= id <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(1);

    /// Returns `None` for 0.
    pub const fn new(id: u32) -> Option<NodeId> {
        if id == 0 {
            None
        } else {
            Some(NodeId(id))
        }
    }

    #[inline]
    pub const fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) const fn idx(self) -> usize {
        self.0 as usize
    }

    /// Builds an id without the zero check; only for values already known
    /// to lie in `[1, n]`.
    #[inline]
    pub(crate) const fn from_raw(id: u32) -> NodeId {
        NodeId(id)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

const NO_PARENT: u32 = 0;

/// Immutable rooted tree, oriented away from node 1.
#[derive(Debug, Clone)]
pub struct Tree {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    parent: Vec<u32>,
    child_span: Vec<(u32, u32)>,
    children: Vec<NodeId>,
    dist_from_root: Vec<u32>,
    bfs_order: Vec<NodeId>,
}

impl Tree {
    /// Validates `edges` and orients them away from node 1.
    ///
    /// Children lists come out sorted ascending by id.
    pub fn build(n: usize, edges: &[(u32, u32)]) -> Result<Tree> {
        if n == 0 {
            return Err(Error::EmptyTree);
        }
        if n > u32::MAX as usize - 1 {
            return Err(Error::NodeOutOfRange {
                node: n as u64,
                n: u32::MAX as usize - 1,
            });
        }
        for &(u, v) in edges {
            for x in [u, v] {
                if x == 0 || x as usize > n {
                    return Err(Error::NodeOutOfRange { node: x as u64, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
        }
        // Sorted CSR adjacency in linear time: bucket the edge ends by one
        // endpoint, then replay the buckets in id order so every neighbor
        // slice fills in ascending order. Duplicates become adjacent.
        let mut degree = vec![0u32; n + 2];
        for &(u, v) in edges {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 1..degree.len() {
            degree[i] += degree[i - 1];
        }
        let mut fill = degree.clone();
        let mut buckets = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            buckets[fill[u as usize] as usize] = v;
            fill[u as usize] += 1;
            buckets[fill[v as usize] as usize] = u;
            fill[v as usize] += 1;
        }
        fill.copy_from_slice(&degree);
        let mut adjacency = vec![0u32; 2 * edges.len()];
        for y in 1..=n {
            for &x in &buckets[degree[y] as usize..degree[y + 1] as usize] {
                adjacency[fill[x as usize] as usize] = y as u32;
                fill[x as usize] += 1;
            }
        }
        drop(buckets);
        for u in 1..=n {
            let slice = &adjacency[degree[u] as usize..degree[u + 1] as usize];
            if let Some(w) = slice.windows(2).find(|w| w[0] == w[1] && u < w[0] as usize) {
                return Err(Error::DuplicateEdge {
                    u: u as u32,
                    v: w[0],
                });
            }
        }
        if edges.len() != n - 1 {
            return Err(Error::EdgeCountMismatch {
                expected: n - 1,
                found: edges.len(),
            });
        }

        let mut parent = vec![NO_PARENT; n + 1];
        let mut child_span = vec![(0u32, 0u32); n + 1];
        let mut children = Vec::with_capacity(n.saturating_sub(1));
        let mut bfs_order = Vec::with_capacity(n);
        let mut seen = vec![false; n + 1];
        seen[1] = true;
        bfs_order.push(NodeId::ROOT);
        let mut head = 0;
        while head < bfs_order.len() {
            let v = bfs_order[head];
            head += 1;
            let start = children.len() as u32;
            for &w in &adjacency[degree[v.idx()] as usize..degree[v.idx() + 1] as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = v.get();
                    children.push(NodeId(w));
                    bfs_order.push(NodeId(w));
                }
            }
            child_span[v.idx()] = (start, children.len() as u32);
        }
        if bfs_order.len() != n {
            return Err(Error::NotConnected);
        }

        let mut tree = Tree {
            n,
            edges: edges.iter().map(|&(u, v)| (NodeId(u), NodeId(v))).collect(),
            parent,
            child_span,
            children,
            dist_from_root: vec![0; n + 1],
            bfs_order,
        };
        tree.compute_distances();
        Ok(tree)
    }

    /// Fills root distances with an explicit queue: 0 at the root and
    /// `dist(parent) + 1` everywhere else.
    pub fn compute_distances(&mut self) {
        let mut queue = VecDeque::with_capacity(self.n);
        self.dist_from_root[1] = 0;
        queue.push_back(NodeId::ROOT);
        while let Some(v) = queue.pop_front() {
            let next = self.dist_from_root[v.idx()] + 1;
            let (s, e) = self.child_span[v.idx()];
            for &c in &self.children[s as usize..e as usize] {
                self.dist_from_root[c.idx()] = next;
                queue.push_back(c);
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Checks that `id` names a node of this tree.
    pub fn node(&self, id: u32) -> Result<NodeId> {
        if id == 0 || id as usize > self.n {
            Err(Error::NodeOutOfRange {
                node: id as u64,
                n: self.n,
            })
        } else {
            Ok(NodeId(id))
        }
    }

    pub fn nodes(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (1..self.n as u32 + 1).map(NodeId)
    }

    #[inline]
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        NodeId::new(self.parent[v.idx()])
    }

    #[inline]
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        let (s, e) = self.child_span[v.idx()];
        &self.children[s as usize..e as usize]
    }

    /// Parent (if any) followed by children.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.parent(v)
            .into_iter()
            .chain(self.children(v).iter().copied())
    }

    /// Number of edges between the root and `v`.
    #[inline]
    pub fn dist_from_root(&self, v: NodeId) -> u32 {
        self.dist_from_root[v.idx()]
    }

    /// Path length between `u` and `v` from root distances and their LCA.
    #[inline]
    pub fn dist(&self, lca: &LcaIndex, u: NodeId, v: NodeId) -> u32 {
        let l = lca.lca(u, v);
        self.dist_from_root(u) + self.dist_from_root(v) - 2 * self.dist_from_root(l)
    }

    /// Nodes in breadth-first order from the root; every parent precedes
    /// its children.
    pub fn bfs_order(&self) -> &[NodeId] {
        &self.bfs_order
    }
}
