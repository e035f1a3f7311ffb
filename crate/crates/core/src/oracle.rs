//! Slow reference implementations used to check the engine.
//!
//! Nothing here shares code with the fast path beyond the [`Tree`] type:
//! the phase simulation re-roots the tree at the query with its own DFS,
//! and the offline solvers compute distances by breadth-first search.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::color_segtree::{ColorAnswer, ColorOp};
use crate::engine::{Move, QueryOutcome};
use crate::tree::{NodeId, Tree};
use crate::{Error, Result};

/// Largest instance accepted by [`offline_opt`].
pub const OPT_MAX_NODES: usize = 10;
pub const OPT_MAX_SERVERS: usize = 3;
pub const OPT_MAX_QUERIES: usize = 8;

/// Largest instance accepted by [`offline_opt_unrestricted`].
pub const UNRESTRICTED_MAX_NODES: usize = 8;

/// State of the phase simulation after one phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSimState {
    pub positions: Vec<NodeId>,
    pub active_flags: Vec<bool>,
    pub phase: u32,
}

/// Parent pointers toward `q` plus DFS entry/exit times of the tree
/// re-rooted at `q`.
struct Rooted {
    toward: Vec<u32>,
    tin: Vec<u32>,
    tout: Vec<u32>,
}

impl Rooted {
    fn new(tree: &Tree, q: NodeId) -> Rooted {
        let n = tree.len();
        let mut toward = vec![0u32; n + 1];
        let mut tin = vec![0u32; n + 1];
        let mut tout = vec![0u32; n + 1];
        let mut clock = 0;
        // (node, came_from, expanded)
        let mut stack = vec![(q, 0u32, false)];
        while let Some((v, from, expanded)) = stack.pop() {
            if expanded {
                tout[v.get() as usize] = clock;
                clock += 1;
                continue;
            }
            tin[v.get() as usize] = clock;
            clock += 1;
            toward[v.get() as usize] = from;
            stack.push((v, from, true));
            for w in tree.neighbors(v) {
                if w.get() != from {
                    stack.push((w, v.get(), false));
                }
            }
        }
        Rooted { toward, tin, tout }
    }

    /// Whether `x` lies on the path from `a` to the root `q`.
    fn on_path_to_root(&self, x: NodeId, a: NodeId) -> bool {
        let (x, a) = (x.get() as usize, a.get() as usize);
        self.tin[x] <= self.tin[a] && self.tout[a] <= self.tout[x]
    }

    fn step(&self, v: NodeId) -> NodeId {
        NodeId::new(self.toward[v.get() as usize]).expect("only the root has no parent")
    }
}

/// Runs the phase-by-phase simulation for query `q`, updating `positions`
/// in place.
///
/// Each phase moves every active server one edge toward `q`; a server is
/// active when no other server sits on its path to `q`, and among servers
/// sharing a node only the smallest id is active. The query is served once
/// some server stands on `q`.
pub fn naive_query(tree: &Tree, positions: &mut [NodeId], q: NodeId) -> QueryOutcome {
    naive_query_traced(tree, positions, q, |_| {})
}

pub fn naive_query_traced(
    tree: &Tree,
    positions: &mut [NodeId],
    q: NodeId,
    mut trace: impl FnMut(&PhaseSimState),
) -> QueryOutcome {
    let k = positions.len();
    let rooted = Rooted::new(tree, q);
    let start: Vec<NodeId> = positions.to_vec();
    let mut moved = vec![0u32; k];
    let mut active = vec![false; k];
    let mut phase = 0;
    while !positions.contains(&q) {
        for i in 0..k {
            active[i] = (0..k).all(|j| {
                if j == i {
                    true
                } else if positions[j] == positions[i] {
                    j > i
                } else {
                    !rooted.on_path_to_root(positions[j], positions[i])
                }
            });
        }
        for i in 0..k {
            if active[i] {
                positions[i] = rooted.step(positions[i]);
                moved[i] += 1;
            }
        }
        phase += 1;
        trace(&PhaseSimState {
            positions: positions.to_vec(),
            active_flags: active.clone(),
            phase,
        });
    }

    let serving_server = positions.iter().position(|&p| p == q).unwrap() + 1;
    let moves: Vec<Move> = (0..k)
        .filter(|&i| moved[i] > 0)
        .map(|i| Move {
            server: i + 1,
            from: start[i],
            to: positions[i],
            steps: moved[i],
        })
        .collect();
    let cost = moves.iter().map(|m| m.steps as u64).sum();
    QueryOutcome {
        query: q,
        serving_server,
        moves,
        cost,
    }
}

/// All-pairs hop distances by breadth-first search; `dist[u][v]`, 1-based.
pub fn bfs_distances(tree: &Tree) -> Vec<Vec<u32>> {
    let n = tree.len();
    let mut all = vec![Vec::new(); n + 1];
    for s in tree.nodes() {
        let mut dist = vec![u32::MAX; n + 1];
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
        all[s.get() as usize] = dist;
    }
    all
}

/// Exact offline optimum for tiny instances.
///
/// Dynamic programming over (query index, multiset of server positions)
/// where serving a request moves exactly one server onto it. This relies on
/// the classical laziness property of metric k-server: some optimal
/// schedule only ever moves the server that serves the current request.
/// [`offline_opt_unrestricted`] checks that assumption on smaller trees.
pub fn offline_opt(tree: &Tree, initial: &[NodeId], queries: &[NodeId]) -> Result<u64> {
    let (n, k) = (tree.len(), initial.len());
    if n > OPT_MAX_NODES || k > OPT_MAX_SERVERS || queries.len() > OPT_MAX_QUERIES {
        return Err(Error::InstanceTooLarge {
            n,
            k,
            queries: queries.len(),
        });
    }
    if k == 0 {
        return Err(Error::NoServers);
    }
    let dist = bfs_distances(tree);
    let mut start: Vec<u32> = initial.iter().map(|v| v.get()).collect();
    start.sort_unstable();
    let mut states = BTreeMap::from([(start, 0u64)]);
    for &q in queries {
        let q = q.get();
        let mut next: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (state, cost) in &states {
            if state.contains(&q) {
                relax(&mut next, state.clone(), *cost);
                continue;
            }
            for i in 0..state.len() {
                if i > 0 && state[i] == state[i - 1] {
                    continue;
                }
                let mut moved = state.clone();
                moved[i] = q;
                moved.sort_unstable();
                relax(
                    &mut next,
                    moved,
                    cost + dist[state[i] as usize][q as usize] as u64,
                );
            }
        }
        states = next;
    }
    Ok(states.into_values().min().expect("at least one state"))
}

/// Exact offline optimum without the one-move-per-request restriction:
/// after each request the servers may take any configuration that covers
/// it, paying the summed distance of every server.
pub fn offline_opt_unrestricted(
    tree: &Tree,
    initial: &[NodeId],
    queries: &[NodeId],
) -> Result<u64> {
    let (n, k) = (tree.len(), initial.len());
    if n > UNRESTRICTED_MAX_NODES || k > OPT_MAX_SERVERS || queries.len() > OPT_MAX_QUERIES {
        return Err(Error::InstanceTooLarge {
            n,
            k,
            queries: queries.len(),
        });
    }
    if k == 0 {
        return Err(Error::NoServers);
    }
    let dist = bfs_distances(tree);
    let configs = n.pow(k as u32);
    let decode = |mut code: usize| -> Vec<u32> {
        let mut out = vec![0; k];
        for slot in out.iter_mut() {
            *slot = (code % n) as u32 + 1;
            code /= n;
        }
        out
    };
    let all: Vec<Vec<u32>> = (0..configs).map(decode).collect();
    let start_code = initial
        .iter()
        .rev()
        .fold(0usize, |acc, v| acc * n + (v.get() as usize - 1));

    let mut best = vec![u64::MAX; configs];
    best[start_code] = 0;
    for &q in queries {
        let mut next = vec![u64::MAX; configs];
        for (to_code, to) in all.iter().enumerate() {
            if !to.contains(&q.get()) {
                continue;
            }
            for (from_code, from) in all.iter().enumerate() {
                if best[from_code] == u64::MAX {
                    continue;
                }
                let step: u64 = from
                    .iter()
                    .zip(to)
                    .map(|(&a, &b)| dist[a as usize][b as usize] as u64)
                    .sum();
                next[to_code] = next[to_code].min(best[from_code] + step);
            }
        }
        best = next;
    }
    Ok(best.into_iter().min().expect("at least one configuration"))
}

fn relax(map: &mut BTreeMap<Vec<u32>, u64>, state: Vec<u32>, cost: u64) {
    map.entry(state)
        .and_modify(|c| *c = (*c).min(cost))
        .or_insert(cost);
}

/// Plain-array ground truth for [`crate::ColorSegTree`].
///
/// Panics on an out-of-range operation; scripts fed to it are expected to
/// be valid.
pub fn array_color_oracle(d: usize, ops: &[ColorOp]) -> Vec<ColorAnswer> {
    let mut colors = vec![0u32; d + 1];
    ops.iter()
        .map(|op| match *op {
            ColorOp::Update { l, r, c } => {
                assert!(1 <= l && l <= r && r <= d && c >= 1);
                colors[l..=r].iter_mut().for_each(|x| *x = c);
                ColorAnswer::Done
            }
            ColorOp::Request { x } => ColorAnswer::Color(colors[x]),
            ColorOp::NearestLow { l, r } => ColorAnswer::Index((l..=r).find(|&i| colors[i] > 0)),
            ColorOp::NearestHigh { l, r } => {
                ColorAnswer::Index((l..=r).rev().find(|&i| colors[i] > 0))
            }
            ColorOp::NewEpoch => {
                colors.iter_mut().for_each(|x| *x = 0);
                ColorAnswer::Done
            }
        })
        .collect()
}
