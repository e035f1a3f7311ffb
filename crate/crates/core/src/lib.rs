//! Fast online k-server algorithm on trees.
//!
//! The crate implements the classic k-competitive tree strategy (every
//! server with a clear path to the request walks toward it) for the
//! k-server problem on a rooted tree with `O(n log n)` preprocessing and
//! `O(k (log n)^2)` work per query. The pieces are:
//!
//! * [`tree`]: validated rooted tree with root distances,
//! * [`lca`]: Euler tour + sparse table answering LCA in constant time,
//! * [`hld`]: heavy-light decomposition with per-node path coordinates,
//! * [`color_segtree`]: per-path segment tree with range color assignment,
//!   point color lookup and nearest-colored-index queries,
//! * [`engine`]: the query processor built on the above,
//! * [`oracle`]: slow reference implementations used for verification.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod color_segtree;
pub mod engine;
mod error;
pub mod hld;
pub mod lca;
pub mod oracle;
pub mod tree;

pub use color_segtree::{ColorAnswer, ColorOp, ColorSegTree};
pub use engine::{Engine, Move, QueryOutcome, QueryStats};
pub use error::Error;
pub use hld::{HeavyPath, HldDecomposition, PathId};
pub use lca::LcaIndex;
pub use tree::{NodeId, Tree};

pub type Result<T, E = Error> = core::result::Result<T, E>;
