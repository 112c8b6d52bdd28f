//! Loop-free directed graphs, the input of the Sullivan-algebra functor.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DigraphJson", into = "DigraphJson")]
pub struct Digraph {
    name: String,
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = Error;

    fn try_from(j: DigraphJson) -> Result<Self> {
        let g = Digraph::new(j.vertices, &j.edges)?;
        Ok(match j.name {
            Some(name) => g.with_name(name),
            None => g,
        })
    }
}

impl From<Digraph> for DigraphJson {
    fn from(g: Digraph) -> Self {
        DigraphJson { vertices: g.n, edges: g.edges.into_iter().collect(), name: Some(g.name) }
    }
}

impl Digraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::HasLoop(u));
            }
            if !set.insert((u, v)) {
                return Err(Error::InvalidGraph(format!("repeated edge ({u}, {v})")));
            }
        }
        Ok(Self { name: format!("digraph{n}"), n, edges: set })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Presets: `cycle:k`, `complete:k`, `bowtie` (two 2-cycles sharing a
    /// vertex) and `chorded:k` (a k-cycle plus the reverse of its first
    /// edge).
    pub fn preset(spec: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown digraph preset {spec:?}"));
        let (kind, arg) = match spec.split_once(':') {
            Some((k, a)) => (k, Some(a.parse::<usize>().map_err(|_| bad())?)),
            None => (spec, None),
        };
        let g = match (kind, arg) {
            ("cycle", Some(k)) => Self::new(k, &(0..k).map(|i| (i, (i + 1) % k)).collect::<Vec<_>>())?,
            ("complete", Some(k)) => {
                let e: Vec<_> = (0..k).flat_map(|u| (0..k).filter(move |&v| v != u).map(move |v| (u, v))).collect();
                Self::new(k, &e)?
            }
            ("bowtie", None) => Self::new(3, &[(0, 1), (1, 0), (1, 2), (2, 1)])?,
            ("chorded", Some(k)) if k >= 3 => {
                let mut e: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
                e.push((1, 0));
                Self::new(k, &e)?
            }
            _ => return Err(bad()),
        };
        Ok(g.with_name(spec))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn is_strongly_connected(&self) -> bool {
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for &(a, b) in &self.edges {
                    let (from, to) = if forward { (a, b) } else { (b, a) };
                    if from == u && !std::mem::replace(&mut seen[to], true) {
                        stack.push(to);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        self.n == 0 || (reach(true) && reach(false))
    }

    /// The standing hypothesis of the algebra construction: strongly
    /// connected with more than one vertex.
    pub fn check_standing_hypothesis(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::FewerThanTwoVertices);
        }
        if !self.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        Ok(())
    }

    /// Checks that `sigma` maps every edge of `self` onto an edge of `other`.
    pub fn check_homomorphism(&self, other: &Digraph, sigma: &[usize]) -> Result<()> {
        if sigma.len() != self.n || sigma.iter().any(|&y| y >= other.n) {
            return Err(Error::InvalidGraph("vertex map has the wrong shape".into()));
        }
        for &(u, v) in &self.edges {
            if !other.has_edge(sigma[u], sigma[v]) {
                return Err(Error::NotAHomomorphism((u, v)));
            }
        }
        Ok(())
    }
}
