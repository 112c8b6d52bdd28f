//! Binary relational systems: a vertex set with one edge relation per label.

mod build;
mod search;

pub use build::{
    build_arrow, build_aux_system, build_source_system, build_target_system, cayley_diagram,
    induced_target_automorphism, RelPipeline,
};
pub use search::{
    arrow_automorphism_group, arrow_group_from_automorphisms, automorphism_group, enumerate_rel_automorphisms,
    rel_structure, ArrowAutGroup,
};

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex of the auxiliary system: a class `[g]` (named by its
/// representative) or the extra vertex `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AuxVertex {
    Class(usize),
    Sink,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Elem(usize),
    Aux(AuxVertex),
    Copy(usize, AuxVertex),
    Named(String),
}

impl fmt::Display for AuxVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxVertex::Class(g) => write!(f, "[{g}]"),
            AuxVertex::Sink => f.write_str("s"),
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Elem(g) => write!(f, "{g}"),
            VertexId::Aux(a) => write!(f, "{a}"),
            VertexId::Copy(j, a) => write!(f, "({j},{a})"),
            VertexId::Named(s) => f.write_str(s),
        }
    }
}

fn parse_aux(s: &str) -> Option<AuxVertex> {
    if s == "s" {
        return Some(AuxVertex::Sink);
    }
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    inner.parse().ok().map(AuxVertex::Class)
}

impl FromStr for VertexId {
    type Err = Error;

    /// Structured forms are recognised first; anything else is a named vertex.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(g) = s.parse() {
            return Ok(VertexId::Elem(g));
        }
        if let Some(a) = parse_aux(s) {
            return Ok(VertexId::Aux(a));
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            if let Some((j, a)) = inner.split_once(',') {
                if let (Ok(j), Some(a)) = (j.trim().parse(), parse_aux(a.trim())) {
                    return Ok(VertexId::Copy(j, a));
                }
            }
        }
        if s.is_empty() {
            return Err(Error::Parse("empty vertex name".into()));
        }
        Ok(VertexId::Named(s.to_string()))
    }
}

/// A finite binary relational system. Vertices and labels keep their
/// insertion order; edges are stored per label as index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelSystem {
    vertices: Vec<VertexId>,
    vertex_index: HashMap<VertexId, usize>,
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    edges: Vec<BTreeSet<(usize, usize)>>,
}

impl RelSystem {
    pub fn new(vertices: Vec<VertexId>, labels: Vec<String>) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.to_string()));
            }
        }
        let mut label_index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let edges = vec![BTreeSet::new(); labels.len()];
        Ok(Self { vertices, vertex_index, labels, label_index, edges })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, v: &VertexId) -> Result<usize> {
        self.vertex_index.get(v).copied().ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn label_index(&self, l: &str) -> Result<usize> {
        self.label_index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.to_string()))
    }

    pub fn add_edge(&mut self, label: &str, from: &VertexId, to: &VertexId) -> Result<()> {
        let l = self.label_index(label)?;
        let (u, v) = (self.vertex_index(from)?, self.vertex_index(to)?);
        self.add_edge_idx(l, u, v)
    }

    pub fn add_edge_idx(&mut self, l: usize, u: usize, v: usize) -> Result<()> {
        if !self.edges[l].insert((u, v)) {
            return Err(Error::DuplicateEdge {
                label: self.labels[l].clone(),
                from: self.vertices[u].to_string(),
                to: self.vertices[v].to_string(),
            });
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, label: &str, from: &VertexId, to: &VertexId) -> Result<bool> {
        let l = self.label_index(label)?;
        let (u, v) = (self.vertex_index(from)?, self.vertex_index(to)?);
        Ok(self.edges[l].remove(&(u, v)))
    }

    pub fn edges(&self, l: usize) -> &BTreeSet<(usize, usize)> {
        &self.edges[l]
    }

    pub fn has_edge(&self, l: usize, u: usize, v: usize) -> bool {
        self.edges[l].contains(&(u, v))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(BTreeSet::len).sum()
    }

    /// Iterates `(label, from, to)` over all edges, by label then pair.
    pub fn all_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges.iter().enumerate().flat_map(|(l, set)| set.iter().map(move |&(u, v)| (l, u, v)))
    }

    /// Same system over a larger label set; the new labels have no edges.
    pub fn with_labels(&self, labels: &[String]) -> Result<Self> {
        let mut all = self.labels.clone();
        all.extend(labels.iter().filter(|l| !self.label_index.contains_key(*l)).cloned());
        let mut s = Self::new(self.vertices.clone(), all)?;
        for (l, u, v) in self.all_edges() {
            s.add_edge_idx(l, u, v)?;
        }
        Ok(s)
    }

    pub fn to_dot(&self, name: &str) -> String {
        const PALETTE: [&str; 10] =
            ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan4", "gold3", "gray40"];
        let mut out = format!("digraph \"{name}\" {{\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for (l, u, v) in self.all_edges() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\", color={}];",
                self.vertices[u],
                self.vertices[v],
                self.labels[l],
                PALETTE[l % PALETTE.len()]
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Per-vertex degrees. A loop adds one to each of `indegree` and
/// `outdegree`, hence two to `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub vertex: String,
    pub indegree: usize,
    pub outdegree: usize,
    pub degree: usize,
}

pub fn degree_report(s: &RelSystem) -> Vec<DegreeEntry> {
    let mut indeg = vec![0; s.num_vertices()];
    let mut outdeg = vec![0; s.num_vertices()];
    for (_, u, v) in s.all_edges() {
        outdeg[u] += 1;
        indeg[v] += 1;
    }
    s.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| DegreeEntry {
            vertex: v.to_string(),
            indegree: indeg[i],
            outdegree: outdeg[i],
            degree: indeg[i] + outdeg[i],
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    label: String,
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct RelSystemJson {
    vertices: Vec<String>,
    labels: Vec<String>,
    edges: Vec<EdgeJson>,
}

impl Serialize for RelSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RelSystemJson {
            vertices: self.vertices.iter().map(ToString::to_string).collect(),
            labels: self.labels.clone(),
            edges: self
                .all_edges()
                .map(|(l, u, v)| EdgeJson {
                    label: self.labels[l].clone(),
                    from: self.vertices[u].to_string(),
                    to: self.vertices[v].to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RelSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = RelSystemJson::deserialize(d)?;
        let build = || -> Result<RelSystem> {
            let vertices = json.vertices.iter().map(|v| v.parse()).collect::<Result<Vec<VertexId>>>()?;
            let mut s = RelSystem::new(vertices, json.labels.clone())?;
            for e in &json.edges {
                s.add_edge(&e.label, &e.from.parse()?, &e.to.parse()?)?;
            }
            Ok(s)
        };
        build().map_err(D::Error::custom)
    }
}

/// A verified morphism of relational systems. Labels are matched by name;
/// every source label must exist in the target.
#[derive(Clone, Debug)]
pub struct RelMorphism {
    source: Arc<RelSystem>,
    target: Arc<RelSystem>,
    map: Vec<usize>,
}

impl RelMorphism {
    pub fn new(source: Arc<RelSystem>, target: Arc<RelSystem>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.num_vertices() || map.iter().any(|&y| y >= target.num_vertices()) {
            return Err(Error::MorphismCheckFailed("vertex map has the wrong shape".into()));
        }
        for (l, name) in source.labels().iter().enumerate() {
            let tl = target.label_index(name)?;
            for &(u, v) in source.edges(l) {
                if !target.has_edge(tl, map[u], map[v]) {
                    return Err(Error::MorphismCheckFailed(format!(
                        "edge {name}: {} -> {} maps to a non-edge {} -> {}",
                        source.vertices()[u],
                        source.vertices()[v],
                        target.vertices()[map[u]],
                        target.vertices()[map[v]]
                    )));
                }
            }
        }
        Ok(Self { source, target, map })
    }

    /// Builds the map from a function on vertex ids.
    pub fn from_fn(source: Arc<RelSystem>, target: Arc<RelSystem>, f: impl Fn(&VertexId) -> VertexId) -> Result<Self> {
        let map = source.vertices().iter().map(|v| target.vertex_index(&f(v))).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, map)
    }

    pub fn identity(s: Arc<RelSystem>) -> Self {
        let map = (0..s.num_vertices()).collect();
        Self { source: s.clone(), target: s, map }
    }

    pub fn source(&self) -> &Arc<RelSystem> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RelSystem> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, v: &VertexId) -> Result<&VertexId> {
        let i = self.source.vertex_index(v)?;
        Ok(&self.target.vertices()[self.map[i]])
    }

    /// `(source id, target id)` pairs in source order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.source
            .vertices()
            .iter()
            .zip(&self.map)
            .map(|(v, &w)| (v.to_string(), self.target.vertices()[w].to_string()))
            .collect()
    }

    /// Rebuilds a morphism from `(source id, target id)` pairs.
    pub fn from_pairs(source: Arc<RelSystem>, target: Arc<RelSystem>, pairs: &[(String, String)]) -> Result<Self> {
        let mut map = vec![None; source.num_vertices()];
        for (a, b) in pairs {
            let u = source.vertex_index(&a.parse()?)?;
            map[u] = Some(target.vertex_index(&b.parse()?)?);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(u, m)| m.ok_or_else(|| Error::UnknownVertex(source.vertices()[u].to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_ids_round_trip() {
        let ids = [
            VertexId::Elem(3),
            VertexId::Aux(AuxVertex::Class(2)),
            VertexId::Aux(AuxVertex::Sink),
            VertexId::Copy(1, AuxVertex::Class(2)),
            VertexId::Copy(0, AuxVertex::Sink),
            VertexId::Named("v7x".into()),
        ];
        let shown: Vec<String> = ids.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["3", "[2]", "s", "(1,[2])", "(0,s)", "v7x"]);
        for id in ids {
            assert_eq!(id.to_string().parse::<VertexId>().unwrap(), id);
        }
    }

    #[test]
    fn duplicate_edges_are_rejected() {
        let mut s = RelSystem::new(vec![VertexId::Elem(0), VertexId::Elem(1)], vec!["a".into()]).unwrap();
        s.add_edge("a", &VertexId::Elem(0), &VertexId::Elem(1)).unwrap();
        assert!(matches!(s.add_edge("a", &VertexId::Elem(0), &VertexId::Elem(1)), Err(Error::DuplicateEdge { .. })));
        assert!(matches!(s.add_edge("b", &VertexId::Elem(0), &VertexId::Elem(1)), Err(Error::UnknownLabel(_))));
        assert!(matches!(s.add_edge("a", &VertexId::Elem(0), &VertexId::Elem(5)), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut s = RelSystem::new(
            vec![VertexId::Elem(0), VertexId::Copy(0, AuxVertex::Sink)],
            vec!["R.g0".into(), "theta".into()],
        )
        .unwrap();
        s.add_edge("theta", &VertexId::Elem(0), &VertexId::Copy(0, AuxVertex::Sink)).unwrap();
        s.add_edge("R.g0", &VertexId::Elem(0), &VertexId::Elem(0)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: RelSystem = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(s.to_dot("x").contains("label=\"theta\""));
    }

    #[test]
    fn degree_of_isolated_vertex_and_loops() {
        let mut s = RelSystem::new(vec![VertexId::Elem(0), VertexId::Elem(1)], vec!["a".into()]).unwrap();
        s.add_edge("a", &VertexId::Elem(1), &VertexId::Elem(1)).unwrap();
        let r = degree_report(&s);
        assert_eq!((r[0].indegree, r[0].outdegree, r[0].degree), (0, 0, 0));
        assert_eq!((r[1].indegree, r[1].outdegree, r[1].degree), (1, 1, 2));
    }

    #[test]
    fn morphism_check_rejects_non_edges() {
        let mut s = RelSystem::new(vec![VertexId::Elem(0), VertexId::Elem(1)], vec!["a".into()]).unwrap();
        s.add_edge("a", &VertexId::Elem(0), &VertexId::Elem(1)).unwrap();
        let s = Arc::new(s);
        assert!(RelMorphism::new(s.clone(), s.clone(), vec![0, 1]).is_ok());
        assert!(matches!(RelMorphism::new(s.clone(), s.clone(), vec![1, 0]), Err(Error::MorphismCheckFailed(_))));
    }
}
