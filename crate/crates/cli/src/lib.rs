//! Instance files, random generation and the solve/verify/bench drivers
//! behind the `kserver` binary.

pub mod bench;
pub mod generate;
pub mod instance;
pub mod solver;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bench::{bench, bench_repeated, write_csv, BenchRow};
pub use generate::{generate_instance, Shape};
pub use instance::{emit_instance, parse_instance, Instance, InstanceError};
pub use solver::{
    compare_solvers, run, verify_instance, Divergence, FastSolver, NaiveSolver, RunReport, Solver,
};

/// Parameters of the `i`-th instance of a seeded verify run: n in
/// [1, max_n], k in [1, max_k], shapes cycling through [`Shape::ALL`].
pub fn random_instances(
    max_n: usize,
    max_k: usize,
    q: usize,
    count: usize,
    seed: u64,
) -> impl Iterator<Item = Result<Instance, InstanceError>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |i| {
        if max_n == 0 || max_k == 0 {
            return Err(InstanceError::BadParams(
                "N and K must be at least 1".into(),
            ));
        }
        let n = rng.gen_range(1..=max_n);
        let k = rng.gen_range(1..=max_k);
        generate_instance(n, k, q, rng.gen(), Shape::ALL[i % Shape::ALL.len()])
    })
}

/// Reads `KSERVER_LOG`; unset means off.
pub fn trace_from_env() -> Result<bool, InstanceError> {
    match std::env::var("KSERVER_LOG").as_deref() {
        Err(_) | Ok("off") | Ok("") => Ok(false),
        Ok("trace") => Ok(true),
        Ok(other) => Err(InstanceError::BadParams(format!(
            "KSERVER_LOG must be off or trace, got {other:?}"
        ))),
    }
}
