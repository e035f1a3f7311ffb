//! Plain-text instance format.
//!
//! ```text
//! n k
//! u v            (n - 1 edge lines)
//! p1 p2 ... pk   (initial server positions)
//! q              (query count)
//! x              (q lines, one node each)
//! ```

use std::fmt;
use std::fmt::Write as _;

use kserver_core::Tree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<(u32, u32)>,
    pub initial: Vec<u32>,
    pub queries: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    Parse {
        line: usize,
        message: String,
    },
    /// Tree or position validation failed.
    Invalid(kserver_core::Error),
    BadParams(String),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::Parse { line, message } => write!(f, "line {line}: {message}"),
            InstanceError::Invalid(e) => write!(f, "invalid instance: {e}"),
            InstanceError::BadParams(m) => write!(f, "bad parameters: {m}"),
        }
    }
}

impl std::error::Error for InstanceError {}

impl From<kserver_core::Error> for InstanceError {
    fn from(e: kserver_core::Error) -> Self {
        InstanceError::Invalid(e)
    }
}

struct Line<'a> {
    number: usize,
    fields: Vec<&'a str>,
}

impl Line<'_> {
    fn error(&self, message: impl Into<String>) -> InstanceError {
        InstanceError::Parse {
            line: self.number,
            message: message.into(),
        }
    }

    fn numbers(&self, expected: Option<usize>, what: &str) -> Result<Vec<u64>, InstanceError> {
        if let Some(e) = expected {
            if self.fields.len() != e {
                return Err(self.error(format!(
                    "{what}: expected {e} values, found {}",
                    self.fields.len()
                )));
            }
        }
        self.fields
            .iter()
            .map(|f| {
                f.parse::<u64>()
                    .map_err(|_| self.error(format!("{what}: not a non-negative integer: {f:?}")))
            })
            .collect()
    }
}

fn to_u32(v: u64, line: &Line) -> Result<u32, InstanceError> {
    u32::try_from(v).map_err(|_| line.error(format!("value {v} does not fit in 32 bits")))
}

/// Whether `lines` has the shape of an instance with exactly `m` edge lines.
fn fits(lines: &[Line], k: usize, m: usize) -> bool {
    let Some(count) = lines.get(1 + m) else {
        return false;
    };
    let Some(pos) = lines.get(m) else {
        return false;
    };
    pos.fields.len() == k
        && lines[..m].iter().all(|l| l.fields.len() == 2)
        && count.fields.len() == 1
        && count.fields[0]
            .parse::<usize>()
            .is_ok_and(|q| lines.len() == m + 2 + q)
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            fields: l.split_whitespace().collect(),
        })
        .filter(|l| !l.fields.is_empty())
        .collect();
    let Some((header, body)) = lines.split_first() else {
        return Err(InstanceError::Parse {
            line: 1,
            message: "empty input".into(),
        });
    };
    let hk = header.numbers(Some(2), "header \"n k\"")?;
    let n = usize::try_from(hk[0]).map_err(|_| header.error("n too large"))?;
    let k = usize::try_from(hk[1]).map_err(|_| header.error("k too large"))?;
    if n == 0 {
        return Err(kserver_core::Error::EmptyTree.into());
    }
    if k == 0 {
        return Err(kserver_core::Error::NoServers.into());
    }

    // a file with the wrong number of edge lines still has a recognisable
    // shape; report it as such rather than as a confusing parse error
    let expected = n - 1;
    if !fits(body, k, expected) {
        if let Some(found) = (0..body.len()).find(|&m| fits(body, k, m)) {
            return Err(kserver_core::Error::EdgeCountMismatch { expected, found }.into());
        }
    }

    let mut it = body.iter();
    let mut next = |what: &str| {
        it.next().ok_or_else(|| InstanceError::Parse {
            line: lines.last().map_or(1, |l| l.number) + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    };
    let mut edges = Vec::with_capacity(expected);
    for _ in 0..expected {
        let line = next("an edge line")?;
        let uv = line.numbers(Some(2), "edge")?;
        edges.push((to_u32(uv[0], line)?, to_u32(uv[1], line)?));
    }
    let line = next("the initial positions line")?;
    let initial = line
        .numbers(Some(k), "initial positions")?
        .into_iter()
        .map(|v| to_u32(v, line))
        .collect::<Result<Vec<_>, _>>()?;
    let line = next("the query count")?;
    let q = line.numbers(Some(1), "query count")?[0] as usize;
    let mut queries = Vec::with_capacity(q.min(1 << 20));
    for _ in 0..q {
        let line = next("a query line")?;
        let x = line.numbers(Some(1), "query")?[0];
        queries.push(to_u32(x, line)?);
    }
    if let Some(extra) = it.next() {
        return Err(extra.error("unexpected trailing content"));
    }

    let inst = Instance {
        n,
        k,
        edges,
        initial,
        queries,
    };
    inst.validate()?;
    Ok(inst)
}

impl Instance {
    /// Builds the tree and checks every position and query id.
    pub fn validate(&self) -> Result<Tree, InstanceError> {
        if self.initial.len() != self.k {
            return Err(InstanceError::BadParams(format!(
                "{} initial positions for k={}",
                self.initial.len(),
                self.k
            )));
        }
        let tree = Tree::build(self.n, &self.edges)?;
        for &v in self.initial.iter().chain(&self.queries) {
            tree.node(v)?;
        }
        Ok(tree)
    }
}

/// Canonical text form; [`parse_instance`] reads it back unchanged.
pub fn emit_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", inst.n, inst.k).unwrap();
    for (u, v) in &inst.edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    let pos: Vec<String> = inst.initial.iter().map(u32::to_string).collect();
    writeln!(out, "{}", pos.join(" ")).unwrap();
    writeln!(out, "{}", inst.queries.len()).unwrap();
    for q in &inst.queries {
        writeln!(out, "{q}").unwrap();
    }
    out
}
