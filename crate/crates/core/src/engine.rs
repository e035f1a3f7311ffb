//! Query processing for the online k-server strategy on a tree.
//!
//! Per query `q`:
//!
//! 1. servers are ranked by `(dist(v, q), server id)`;
//! 2. the rank-1 server walks to `q` and its path gets color 1;
//! 3. for rank `i = 2..k`, the colored node `w` nearest to `v_i` on the
//!    path `v_i -> q` tells which server `j` (its color) cut `i` off; `j`
//!    reached `w` after `z = dist(v_j, w)` steps, so server `i` advances
//!    exactly `z` steps toward `q` and its traversed path gets color `i`.
//!
//! `v_j` always means the pre-query position of the rank-`j` server.
//! Colors live in one [`ColorSegTree`] per heavy path. The trees share a
//! single node pool and a single epoch, so erasing all colors between
//! queries is one counter bump.

use alloc::vec;
use alloc::vec::Vec;

use crate::color_segtree::{slots_for, ColorSegTree, Node};
use crate::hld::{HldDecomposition, PathId};
use crate::lca::LcaIndex;
use crate::tree::{NodeId, Tree};
use crate::{Error, Result};

/// Displacement of one server during a query. Server ids are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub server: usize,
    pub from: NodeId,
    pub to: NodeId,
    pub steps: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOutcome {
    pub query: NodeId,
    /// 1-based id of the server that ends on the query node.
    pub serving_server: usize,
    /// Servers that moved, ordered by server id.
    pub moves: Vec<Move>,
    pub cost: u64,
}

/// Instrumentation for the most recent query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub segtree_visits: u64,
    pub color_updates: u32,
    pub nearest_queries: u32,
    pub color_requests: u32,
    /// Largest number of heavy paths touched by one path coloring or one
    /// closest-color search.
    pub max_paths_per_call: u32,
}

/// What happened to one ranked server; fed to the trace callback of
/// [`Engine::process_query_traced`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankStep {
    pub rank: usize,
    pub server: usize,
    pub from: NodeId,
    pub to: NodeId,
    /// Colored node met on the way to the query and the server that colored it.
    pub blocked_at: Option<(NodeId, usize)>,
    pub steps: u32,
}

#[derive(Debug, Clone)]
pub struct Engine {
    tree: Tree,
    lca: LcaIndex,
    hld: HldDecomposition,
    pool: Vec<Node>,
    // per heavy path: first pool slot and logical length
    layout: Vec<(usize, usize)>,
    positions: Vec<NodeId>,
    epoch: u64,
    query_counter: u64,
    total_visits: u64,
    stats: QueryStats,
    ranking: Vec<(u32, u32)>,
    snapshot: Vec<NodeId>,
    segments: Vec<(PathId, usize, usize)>,
}

impl Engine {
    /// Builds the heavy-light decomposition, the LCA index and one segment
    /// tree per heavy path. `initial` lists node ids, one per server.
    pub fn preprocess(tree: Tree, initial: &[u32]) -> Result<Engine> {
        if initial.is_empty() {
            return Err(Error::NoServers);
        }
        let positions = initial
            .iter()
            .map(|&v| tree.node(v))
            .collect::<Result<Vec<_>>>()?;
        let hld = HldDecomposition::new(&tree);
        let lca = LcaIndex::new(&tree);
        let mut layout = Vec::with_capacity(hld.path_count());
        let mut slots = 0;
        for p in hld.paths() {
            layout.push((slots, p.nodes.len()));
            slots += slots_for(p.nodes.len());
        }
        Ok(Engine {
            tree,
            lca,
            hld,
            pool: vec![Node::STALE; slots],
            layout,
            snapshot: Vec::with_capacity(positions.len()),
            ranking: Vec::with_capacity(positions.len()),
            positions,
            // pool cells carry epoch 0, so everything starts blank
            epoch: 1,
            query_counter: 0,
            total_visits: 0,
            stats: QueryStats::default(),
            segments: Vec::new(),
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn lca_index(&self) -> &LcaIndex {
        &self.lca
    }

    pub fn hld(&self) -> &HldDecomposition {
        &self.hld
    }

    /// Logical length of the segment tree of each heavy path, in path order.
    pub fn segtree_lengths(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.layout.iter().map(|&(_, d)| d)
    }

    fn segtree(&mut self, p: PathId) -> ColorSegTree<&mut [Node]> {
        let (start, d) = self.layout[p.idx()];
        let nodes = &mut self.pool[start..start + slots_for(d)];
        ColorSegTree::in_pool(nodes, d, self.positions.len() as u32, self.epoch)
    }

    pub fn k(&self) -> usize {
        self.positions.len()
    }

    /// Current server positions; entry `i` belongs to server `i + 1`.
    pub fn positions(&self) -> &[NodeId] {
        &self.positions
    }

    pub fn query_counter(&self) -> u64 {
        self.query_counter
    }

    pub fn last_stats(&self) -> QueryStats {
        self.stats
    }

    /// Segment-tree node visits over all queries so far.
    pub fn total_visits(&self) -> u64 {
        self.total_visits
    }

    #[inline]
    pub fn dist(&self, u: NodeId, v: NodeId) -> u32 {
        self.tree.dist(&self.lca, u, v)
    }

    pub fn process_query(&mut self, q: u32) -> Result<QueryOutcome> {
        self.process_query_traced(q, |_| {})
    }

    /// Like [`Engine::process_query`], reporting every ranked server to `trace`.
    pub fn process_query_traced(
        &mut self,
        q: u32,
        mut trace: impl FnMut(&RankStep),
    ) -> Result<QueryOutcome> {
        let q = self
            .tree
            .node(q)
            .map_err(|_| Error::InvalidNode { node: q })?;
        self.start_epoch()?;
        self.stats = QueryStats::default();

        let mut ranking = core::mem::take(&mut self.ranking);
        ranking.clear();
        for (s, &v) in self.positions.iter().enumerate() {
            ranking.push((self.dist(v, q), s as u32));
        }
        ranking.sort_unstable();
        let mut snapshot = core::mem::take(&mut self.snapshot);
        snapshot.clear();
        snapshot.extend_from_slice(&self.positions);

        let mut moves = Vec::new();
        let mut cost = 0u64;
        for (rank0, &(d, s)) in ranking.iter().enumerate() {
            let rank = rank0 + 1;
            let s = s as usize;
            let from = snapshot[s];
            let (to, blocked_at, steps) = if rank == 1 {
                (q, None, d)
            } else {
                let (w, color) = self.get_closest_color(from, q)?;
                let blocker = ranking[color as usize - 1].1 as usize;
                let z = self.dist(snapshot[blocker], w);
                (self.move_along(from, q, z)?, Some((w, blocker + 1)), z)
            };
            self.color_path(from, to, rank as u32)?;
            self.positions[s] = to;
            trace(&RankStep {
                rank,
                server: s + 1,
                from,
                to,
                blocked_at,
                steps,
            });
            if steps > 0 {
                moves.push(Move {
                    server: s + 1,
                    from,
                    to,
                    steps,
                });
                cost += steps as u64;
            }
        }
        moves.sort_unstable_by_key(|m| m.server);
        let serving_server = ranking[0].1 as usize + 1;

        self.ranking = ranking;
        self.snapshot = snapshot;
        self.query_counter += 1;
        self.total_visits += self.stats.segtree_visits;
        Ok(QueryOutcome {
            query: q,
            serving_server,
            moves,
            cost,
        })
    }

    /// Erases all colors by moving the shared epoch forward.
    pub fn start_epoch(&mut self) -> Result<()> {
        self.epoch = self.epoch.checked_add(1).ok_or(Error::EpochOverflow)?;
        Ok(())
    }

    /// Colors every node of the `v`-`u` path with `c`, one range update per
    /// heavy path touched.
    pub fn color_path(&mut self, v: NodeId, u: NodeId, c: u32) -> Result<()> {
        if c == 0 || c as usize > self.k() {
            return Err(Error::ColorOutOfRange {
                color: c,
                max: self.k() as u32,
            });
        }
        let l = self.lca.lca(v, u);
        let lp = self.hld.path_of(l);
        let li = self.hld.index_of(l);
        let mut touched = 0;

        let mut w = v;
        loop {
            let p = self.hld.path_of(w);
            touched += 1;
            if p == lp {
                self.update(p, li, self.hld.index_of(w), c)?;
                break;
            }
            self.update(p, 1, self.hld.index_of(w), c)?;
            w = self
                .hld
                .head_parent(p)
                .expect("LCA lies above every path head");
        }

        // l itself was colored above
        let mut w = u;
        while w != l {
            let p = self.hld.path_of(w);
            touched += 1;
            if p == lp {
                self.update(p, li + 1, self.hld.index_of(w), c)?;
                break;
            }
            self.update(p, 1, self.hld.index_of(w), c)?;
            w = self
                .hld
                .head_parent(p)
                .expect("LCA lies above every path head");
        }
        self.stats.max_paths_per_call = self.stats.max_paths_per_call.max(touched);
        Ok(())
    }

    /// The colored node nearest to `v` on the `v`-`u` path, with its color.
    ///
    /// Paths on the `v`-LCA side are scanned bottom-up taking the deepest
    /// colored index; the LCA-`u` side is scanned top-down taking the
    /// shallowest.
    pub fn get_closest_color(&mut self, v: NodeId, u: NodeId) -> Result<(NodeId, u32)> {
        let l = self.lca.lca(v, u);
        let lp = self.hld.path_of(l);
        let li = self.hld.index_of(l);
        let mut touched = 0;

        let mut found = None;
        let mut w = v;
        loop {
            let p = self.hld.path_of(w);
            touched += 1;
            let lo = if p == lp { li } else { 1 };
            if let Some(i) = self.nearest(p, lo, self.hld.index_of(w), true)? {
                found = Some((p, i));
                break;
            }
            if p == lp {
                break;
            }
            w = self
                .hld
                .head_parent(p)
                .expect("LCA lies above every path head");
        }

        if found.is_none() {
            let mut segments = core::mem::take(&mut self.segments);
            segments.clear();
            let mut w = u;
            while w != l {
                let p = self.hld.path_of(w);
                if p == lp {
                    segments.push((p, li + 1, self.hld.index_of(w)));
                    break;
                }
                segments.push((p, 1, self.hld.index_of(w)));
                w = self
                    .hld
                    .head_parent(p)
                    .expect("LCA lies above every path head");
            }
            for &(p, lo, hi) in segments.iter().rev() {
                touched += 1;
                if let Some(i) = self.nearest(p, lo, hi, false)? {
                    found = Some((p, i));
                    break;
                }
            }
            self.segments = segments;
        }
        self.stats.max_paths_per_call = self.stats.max_paths_per_call.max(touched);

        let (p, i) = found.ok_or(Error::NoColoredNode)?;
        let st = self.segtree(p);
        let color = st.color_request(i)?;
        let visits = st.last_visits();
        self.stats.color_requests += 1;
        self.stats.segtree_visits += visits;
        Ok((self.hld.node_at(p, i), color))
    }

    /// Node `g` edges away from `v` along the `v`-`u` path.
    pub fn move_along(&self, v: NodeId, u: NodeId, g: u32) -> Result<NodeId> {
        let l = self.lca.lca(v, u);
        let dl = self.tree.dist_from_root(l);
        let up = self.tree.dist_from_root(v) - dl;
        let total = up + self.tree.dist_from_root(u) - dl;
        if g > total {
            return Err(Error::StepsExceedPath {
                steps: g,
                length: total,
            });
        }
        let node = if g <= up {
            self.hld.ancestor(v, g)
        } else {
            self.hld.ancestor(u, total - g)
        };
        Ok(node.expect("step count bounded by depth"))
    }

    fn update(&mut self, p: PathId, lo: usize, hi: usize, c: u32) -> Result<()> {
        let mut st = self.segtree(p);
        st.color_update(lo, hi, c)?;
        let visits = st.last_visits();
        self.stats.color_updates += 1;
        self.stats.segtree_visits += visits;
        Ok(())
    }

    fn nearest(&mut self, p: PathId, lo: usize, hi: usize, deepest: bool) -> Result<Option<usize>> {
        let st = self.segtree(p);
        let found = if deepest {
            st.nearest_colored_high(lo, hi)?
        } else {
            st.nearest_colored_low(lo, hi)?
        };
        let visits = st.last_visits();
        self.stats.nearest_queries += 1;
        self.stats.segtree_visits += visits;
        Ok(found)
    }
}
