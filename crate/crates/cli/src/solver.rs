use std::fmt;
use std::time::{Duration, Instant};

use kserver_core::oracle::{naive_query, naive_query_traced};
use kserver_core::{Engine, NodeId, QueryOutcome, Tree};

use crate::instance::{Instance, InstanceError};

/// Anything that serves queries online and exposes its server positions.
pub trait Solver {
    fn tag(&self) -> &'static str;
    fn serve(&mut self, q: u32) -> Result<QueryOutcome, kserver_core::Error>;
    /// Entry `i` belongs to server `i + 1`.
    fn positions(&self) -> &[NodeId];
    /// Segment-tree visits spent on the last query, 0 if not instrumented.
    fn last_visits(&self) -> u64 {
        0
    }
}

pub struct FastSolver {
    engine: Engine,
    trace: bool,
}

impl FastSolver {
    pub fn new(inst: &Instance, trace: bool) -> Result<FastSolver, InstanceError> {
        let tree = inst.validate()?;
        Ok(FastSolver {
            engine: Engine::preprocess(tree, &inst.initial)?,
            trace,
        })
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }
}

impl Solver for FastSolver {
    fn tag(&self) -> &'static str {
        "fast"
    }

    fn serve(&mut self, q: u32) -> Result<QueryOutcome, kserver_core::Error> {
        if !self.trace {
            return self.engine.process_query(q);
        }
        let out = self.engine.process_query_traced(q, |s| {
            let blocked = match s.blocked_at {
                Some((w, j)) => format!(" blocked_at={w} by={j}"),
                None => String::new(),
            };
            eprintln!(
                "trace fast q={q} rank={} server={} from={} to={} steps={}{blocked}",
                s.rank, s.server, s.from, s.to, s.steps
            );
        })?;
        eprintln!(
            "trace fast q={q} visits={}",
            self.engine.last_stats().segtree_visits
        );
        Ok(out)
    }

    fn positions(&self) -> &[NodeId] {
        self.engine.positions()
    }

    fn last_visits(&self) -> u64 {
        self.engine.last_stats().segtree_visits
    }
}

/// Phase-by-phase simulation; slow but obviously faithful.
pub struct NaiveSolver {
    tree: Tree,
    positions: Vec<NodeId>,
    trace: bool,
}

impl NaiveSolver {
    pub fn new(inst: &Instance, trace: bool) -> Result<NaiveSolver, InstanceError> {
        let tree = inst.validate()?;
        let positions = inst
            .initial
            .iter()
            .map(|&v| tree.node(v))
            .collect::<Result<_, _>>()?;
        Ok(NaiveSolver {
            tree,
            positions,
            trace,
        })
    }
}

impl Solver for NaiveSolver {
    fn tag(&self) -> &'static str {
        "naive"
    }

    fn serve(&mut self, q: u32) -> Result<QueryOutcome, kserver_core::Error> {
        let node = self
            .tree
            .node(q)
            .map_err(|_| kserver_core::Error::InvalidNode { node: q })?;
        if !self.trace {
            return Ok(naive_query(&self.tree, &mut self.positions, node));
        }
        Ok(naive_query_traced(
            &self.tree,
            &mut self.positions,
            node,
            |st| {
                let pos: Vec<String> = st.positions.iter().map(|p| p.to_string()).collect();
                let active: Vec<String> = st
                    .active_flags
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(i, _)| (i + 1).to_string())
                    .collect();
                eprintln!(
                    "trace naive q={q} phase={} active=[{}] positions=[{}]",
                    st.phase,
                    active.join(","),
                    pos.join(",")
                );
            },
        ))
    }

    fn positions(&self) -> &[NodeId] {
        &self.positions
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub tag: &'static str,
    pub outcomes: Vec<QueryOutcome>,
    pub total_cost: u64,
    /// Segment-tree visits per query.
    pub visits: Vec<u64>,
    pub wall_time: Duration,
}

pub fn run(solver: &mut dyn Solver, queries: &[u32]) -> Result<RunReport, kserver_core::Error> {
    let start = Instant::now();
    let mut outcomes = Vec::with_capacity(queries.len());
    let mut visits = Vec::with_capacity(queries.len());
    for &q in queries {
        outcomes.push(solver.serve(q)?);
        visits.push(solver.last_visits());
    }
    let total_cost = outcomes.iter().map(|o| o.cost).sum();
    Ok(RunReport {
        tag: solver.tag(),
        outcomes,
        total_cost,
        visits,
        wall_time: start.elapsed(),
    })
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(
                f,
                "q={} serve={} cost={}",
                o.query, o.serving_server, o.cost
            )?;
        }
        writeln!(f, "total={}", self.total_cost)
    }
}

/// First query on which two solvers disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    /// 0-based position in the query list.
    pub index: usize,
    pub query: u32,
    pub left: (&'static str, QueryOutcome, Vec<NodeId>),
    pub right: (&'static str, QueryOutcome, Vec<NodeId>),
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "divergence at query #{} (q={})",
            self.index + 1,
            self.query
        )?;
        for (tag, o, pos) in [&self.left, &self.right] {
            let pos: Vec<String> = pos.iter().map(|p| p.to_string()).collect();
            writeln!(
                f,
                "  {tag}: serve={} cost={} positions=[{}]",
                o.serving_server,
                o.cost,
                pos.join(" ")
            )?;
        }
        Ok(())
    }
}

/// Replays `queries` on both solvers and compares serving server, cost and
/// every server position after each query.
pub fn compare_solvers(
    left: &mut dyn Solver,
    right: &mut dyn Solver,
    queries: &[u32],
) -> Result<Option<Divergence>, kserver_core::Error> {
    for (index, &q) in queries.iter().enumerate() {
        let a = left.serve(q)?;
        let b = right.serve(q)?;
        if a.serving_server != b.serving_server
            || a.cost != b.cost
            || left.positions() != right.positions()
        {
            return Ok(Some(Divergence {
                index,
                query: q,
                left: (left.tag(), a, left.positions().to_vec()),
                right: (right.tag(), b, right.positions().to_vec()),
            }));
        }
    }
    Ok(None)
}

pub fn verify_instance(inst: &Instance) -> Result<Option<Divergence>, InstanceError> {
    let mut fast = FastSolver::new(inst, false)?;
    let mut naive = NaiveSolver::new(inst, false)?;
    Ok(compare_solvers(&mut fast, &mut naive, &inst.queries)?)
}
