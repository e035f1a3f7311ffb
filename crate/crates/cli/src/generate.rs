use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, InstanceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Shape {
    /// Node i attaches to a uniform parent in [1, i-1].
    Random,
    Path,
    Star,
    /// A spine of ceil(n/2) nodes with the rest hung on uniform spine nodes.
    Caterpillar,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::Random, Shape::Path, Shape::Star, Shape::Caterpillar];
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Random => "random",
            Shape::Path => "path",
            Shape::Star => "star",
            Shape::Caterpillar => "caterpillar",
        })
    }
}

impl FromStr for Shape {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Shape, InstanceError> {
        Shape::ALL
            .into_iter()
            .find(|shape| shape.to_string() == s)
            .ok_or_else(|| InstanceError::BadParams(format!("unknown shape {s:?}")))
    }
}

/// Deterministic random instance: positions and queries are uniform nodes.
pub fn generate_instance(
    n: usize,
    k: usize,
    q: usize,
    seed: u64,
    shape: Shape,
) -> Result<Instance, InstanceError> {
    if n == 0 || k == 0 {
        return Err(InstanceError::BadParams(format!(
            "need n >= 1 and k >= 1, got n={n} k={k}"
        )));
    }
    if n > u32::MAX as usize {
        return Err(InstanceError::BadParams(format!(
            "n={n} exceeds the 32-bit node range"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n32 = n as u32;
    let spine = n32.div_ceil(2);
    let edges = (2..=n32)
        .map(|i| {
            let parent = match shape {
                Shape::Random => rng.gen_range(1..i),
                Shape::Path => i - 1,
                Shape::Star => 1,
                Shape::Caterpillar if i <= spine => i - 1,
                Shape::Caterpillar => rng.gen_range(1..=spine),
            };
            (parent, i)
        })
        .collect();
    let initial = (0..k).map(|_| rng.gen_range(1..=n32)).collect();
    let queries = (0..q).map(|_| rng.gen_range(1..=n32)).collect();
    Ok(Instance {
        n,
        k,
        edges,
        initial,
        queries,
    })
}
