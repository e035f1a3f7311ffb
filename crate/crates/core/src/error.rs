use core::fmt;

/// Errors reported by tree construction, the color segment tree, the engine
/// and the oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A tree needs at least one node.
    EmptyTree,
    EdgeCountMismatch {
        expected: usize,
        found: usize,
    },
    NotConnected,
    SelfLoop {
        node: u32,
    },
    DuplicateEdge {
        u: u32,
        v: u32,
    },
    NodeOutOfRange {
        node: u64,
        n: usize,
    },
    /// Segment-tree index outside `[1, len]` or an empty/reversed range.
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    ColorOutOfRange {
        color: u32,
        max: u32,
    },
    EpochOverflow,
    InvalidNode {
        node: u32,
    },
    NoServers,
    NoColoredNode,
    StepsExceedPath {
        steps: u32,
        length: u32,
    },
    InstanceTooLarge {
        n: usize,
        k: usize,
        queries: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyTree => write!(f, "tree must contain at least one node"),
            Error::EdgeCountMismatch { expected, found } => {
                write!(f, "expected {expected} edges, found {found}")
            }
            Error::NotConnected => write!(f, "edges do not connect all nodes"),
            Error::SelfLoop { node } => write!(f, "self loop at node {node}"),
            Error::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u}, {v})"),
            Error::NodeOutOfRange { node, n } => {
                write!(f, "node {node} is outside [1, {n}]")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} is outside [1, {len}]")
            }
            Error::ColorOutOfRange { color, max } => {
                write!(f, "color {color} is outside [1, {max}]")
            }
            Error::EpochOverflow => write!(f, "epoch counter overflow"),
            Error::InvalidNode { node } => write!(f, "invalid node {node}"),
            Error::NoServers => write!(f, "at least one server is required"),
            Error::NoColoredNode => write!(f, "no colored node on the path"),
            Error::StepsExceedPath { steps, length } => {
                write!(
                    f,
                    "cannot move {steps} steps along a path of length {length}"
                )
            }
            Error::InstanceTooLarge { n, k, queries } => write!(
                f,
                "instance too large for the exact offline solver (n={n}, k={k}, queries={queries})"
            ),
        }
    }
}

impl core::error::Error for Error {}
