//! Heavy-light decomposition.
//!
//! Positions inside a path are 1-based and grow from the head (the
//! shallowest node) downward. The heavy child of a node is its child with
//! the largest subtree; ties go to the smallest id.

use alloc::vec;
use alloc::vec::Vec;

use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathId(pub u32);

impl PathId {
    #[inline]
    pub const fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Borrowed view of one heavy path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeavyPath<'a> {
    pub id: PathId,
    pub head: NodeId,
    /// Head first, then downward.
    pub nodes: &'a [NodeId],
}

#[derive(Debug, Clone)]
pub struct HldDecomposition {
    path_of: Vec<u32>,
    index_of: Vec<u32>,
    path_start: Vec<u32>,
    path_nodes: Vec<NodeId>,
    // parent of each path's head, 0 for the root path
    head_parent: Vec<u32>,
}

impl HldDecomposition {
    /// Two linear passes: subtree sizes bottom-up, then path assembly in
    /// breadth-first order.
    pub fn new(tree: &Tree) -> HldDecomposition {
        let n = tree.len();
        let order = tree.bfs_order();

        let mut size = vec![1u32; n + 1];
        let mut heavy = vec![0u32; n + 1];
        for &v in order.iter().rev() {
            let mut best = 0u32;
            for &c in tree.children(v) {
                size[v.idx()] += size[c.idx()];
                if size[c.idx()] > best {
                    best = size[c.idx()];
                    heavy[v.idx()] = c.get();
                }
            }
        }

        let mut path_of = vec![0u32; n + 1];
        let mut index_of = vec![0u32; n + 1];
        let mut path_start = Vec::new();
        let mut path_nodes = Vec::with_capacity(n);
        let mut head_parent = Vec::new();
        for &v in order {
            let starts_path = match tree.parent(v) {
                None => true,
                Some(p) => heavy[p.idx()] != v.get(),
            };
            if !starts_path {
                continue;
            }
            let id = path_start.len() as u32;
            path_start.push(path_nodes.len() as u32);
            head_parent.push(tree.parent(v).map_or(0, NodeId::get));
            let mut w = v.get();
            let mut i = 1;
            while w != 0 {
                path_of[w as usize] = id;
                index_of[w as usize] = i;
                path_nodes.push(NodeId::from_raw(w));
                i += 1;
                w = heavy[w as usize];
            }
        }
        path_start.push(path_nodes.len() as u32);

        HldDecomposition {
            path_of,
            index_of,
            path_start,
            path_nodes,
            head_parent,
        }
    }

    pub fn path_count(&self) -> usize {
        self.head_parent.len()
    }

    pub fn paths(&self) -> impl ExactSizeIterator<Item = HeavyPath<'_>> + '_ {
        (0..self.path_count() as u32).map(move |p| self.path(PathId(p)))
    }

    pub fn path(&self, p: PathId) -> HeavyPath<'_> {
        let nodes = self.nodes_of(p);
        HeavyPath {
            id: p,
            head: nodes[0],
            nodes,
        }
    }

    #[inline]
    pub fn nodes_of(&self, p: PathId) -> &[NodeId] {
        &self.path_nodes[self.path_start[p.idx()] as usize..self.path_start[p.idx() + 1] as usize]
    }

    #[inline]
    pub fn path_len(&self, p: PathId) -> usize {
        (self.path_start[p.idx() + 1] - self.path_start[p.idx()]) as usize
    }

    #[inline]
    pub fn path_of(&self, v: NodeId) -> PathId {
        PathId(self.path_of[v.idx()])
    }

    /// 1-based position of `v` in its path; the head has index 1.
    #[inline]
    pub fn index_of(&self, v: NodeId) -> usize {
        self.index_of[v.idx()] as usize
    }

    /// Node at 1-based position `i` of path `p`.
    #[inline]
    pub fn node_at(&self, p: PathId, i: usize) -> NodeId {
        self.path_nodes[self.path_start[p.idx()] as usize + i - 1]
    }

    #[inline]
    pub fn head(&self, p: PathId) -> NodeId {
        self.path_nodes[self.path_start[p.idx()] as usize]
    }

    /// Head of the path containing `v`.
    #[inline]
    pub fn path_head(&self, v: NodeId) -> NodeId {
        self.head(self.path_of(v))
    }

    /// Parent of the head of `p`, `None` for the path through the root.
    #[inline]
    pub fn head_parent(&self, p: PathId) -> Option<NodeId> {
        NodeId::new(self.head_parent[p.idx()])
    }

    /// The ancestor `steps` edges above `v`, found by jumping whole paths.
    /// Returns `None` when `steps` exceeds the depth of `v`.
    pub fn ancestor(&self, mut v: NodeId, mut steps: u32) -> Option<NodeId> {
        loop {
            let p = self.path_of(v);
            let i = self.index_of(v) as u32;
            if steps < i {
                return Some(self.node_at(p, (i - steps) as usize));
            }
            steps -= i;
            v = self.head_parent(p)?;
        }
    }

    /// Number of distinct heavy paths met on the walk from `v` to the root.
    pub fn paths_to_root(&self, mut v: NodeId) -> u32 {
        let mut count = 1;
        while let Some(p) = self.head_parent(self.path_of(v)) {
            v = p;
            count += 1;
        }
        count
    }
}
