use std::io;
use std::time::Instant;

use crate::instance::{Instance, InstanceError};
use crate::solver::{run, FastSolver};

/// One CSV row of `bench`. `preprocess_s` covers tree validation plus
/// engine preprocessing; `wall_time_s` covers the query phase only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub total_visits: u64,
    pub visits_per_query: f64,
    pub preprocess_s: f64,
    pub wall_time_s: f64,
}

pub const CSV_HEADER: [&str; 7] = [
    "n",
    "k",
    "q",
    "total_visits",
    "visits_per_query",
    "preprocess_s",
    "wall_time_s",
];

pub fn bench(inst: &Instance) -> Result<BenchRow, InstanceError> {
    bench_repeated(inst, 1)
}

/// Like [`bench`], preprocessing `repeats` times and reporting the fastest.
pub fn bench_repeated(inst: &Instance, repeats: usize) -> Result<BenchRow, InstanceError> {
    let mut preprocess_s = f64::INFINITY;
    let mut solver = None;
    for _ in 0..repeats.max(1) {
        drop(solver.take());
        let start = Instant::now();
        let fresh = FastSolver::new(inst, false)?;
        preprocess_s = preprocess_s.min(start.elapsed().as_secs_f64());
        solver = Some(fresh);
    }
    let mut solver = solver.expect("at least one run");
    let report = run(&mut solver, &inst.queries)?;
    let total_visits: u64 = report.visits.iter().sum();
    Ok(BenchRow {
        n: inst.n,
        k: inst.k,
        q: inst.queries.len(),
        total_visits,
        visits_per_query: total_visits as f64 / inst.queries.len().max(1) as f64,
        preprocess_s,
        wall_time_s: report.wall_time.as_secs_f64(),
    })
}

pub fn write_csv(rows: &[BenchRow], out: impl io::Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.q.to_string(),
            r.total_visits.to_string(),
            format!("{:.3}", r.visits_per_query),
            format!("{:.6}", r.preprocess_s),
            format!("{:.6}", r.wall_time_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}
