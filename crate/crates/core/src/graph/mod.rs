//! Simple undirected graphs, Frucht-tree gadgets and the replacement of
//! relational systems by graphs.

mod frucht;
mod hom;
mod replace;

pub use frucht::{frucht_tree, tree_family, FruchtTree};
pub use hom::{enumerate_digraph_homomorphisms, enumerate_graph_homomorphisms};
pub use replace::{arrow_automorphism_group_graph, lift_morphism, replace, Gadget, GraphMorphism, ReplacementMap};

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::budget::SearchBudget;
use crate::error::{Error, Result};
use crate::refine::{automorphisms, check_closed, isomorphisms, Structure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(n.clone()));
            }
        }
        let adj = vec![Vec::new(); names.len()];
        Ok(Self { names, index, adj })
    }

    /// Graph on `0..n` named by index.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new((0..n).map(|i| i.to_string()).collect())?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: String) -> Result<usize> {
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVertex(name));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        self.adj.push(Vec::new());
        Ok(i)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.names.len();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at {}", self.names[u])));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(Error::InvalidGraph(format!("repeated edge {} -- {}", self.names[u], self.names[v]))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn neighbours(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !std::mem::replace(&mut seen[v], true) {
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn structure(&self) -> Structure {
        Structure::new(vec![0; self.len()], self.edges().flat_map(|(u, v)| [(u, v, 1), (v, u, 1)]))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{name}\" {{\n");
        for n in &self.names {
            let _ = writeln!(out, "  \"{n}\";");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.names[u], self.names[v]);
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self.names.clone(),
            edges: self.edges().map(|(u, v)| (self.names[u].clone(), self.names[v].clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = GraphJson::deserialize(d)?;
        let build = || -> Result<SimpleGraph> {
            let mut g = SimpleGraph::new(json.vertices)?;
            for (a, b) in &json.edges {
                let (u, v) = (g.index_of(a)?, g.index_of(b)?);
                g.add_edge(u, v)?;
            }
            Ok(g)
        };
        build().map_err(D::Error::custom)
    }
}

/// All adjacency-preserving bijections, sorted; the list is checked to be
/// closed under composition.
pub fn enumerate_graph_automorphisms(g: &SimpleGraph, budget: &SearchBudget) -> Result<Vec<Vec<usize>>> {
    let auts = automorphisms(&g.structure(), budget)?;
    check_closed(&auts)?;
    Ok(auts)
}

pub fn graph_isomorphism(a: &SimpleGraph, b: &SimpleGraph, budget: &SearchBudget) -> Result<Option<Vec<usize>>> {
    Ok(isomorphisms(&a.structure(), &b.structure(), false, budget)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_square() {
        let b = SearchBudget::default();
        let p3 = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(enumerate_graph_automorphisms(&p3, &b).unwrap().len(), 2);
        let c4 = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        // Brute force over all 24 bijections.
        let mut count = 0;
        let perms = permutations(4);
        for p in &perms {
            if c4.edges().all(|(u, v)| c4.has_edge(p[u], p[v])) {
                count += 1;
            }
        }
        assert_eq!(count, 8);
        assert_eq!(enumerate_graph_automorphisms(&c4, &b).unwrap().len(), count);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn rejects_loops_and_repeats() {
        let mut g = SimpleGraph::from_edges(2, &[]).unwrap();
        assert!(g.add_edge(0, 0).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"vertices":["0","1","2"],"edges":[["0","1"],["1","2"]]}"#);
        assert_eq!(serde_json::from_str::<SimpleGraph>(&text).unwrap(), g);
        assert!(g.to_dot("p").contains("\"0\" -- \"1\""));
    }
}
