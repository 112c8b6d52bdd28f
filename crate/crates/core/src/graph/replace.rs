use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{enumerate_graph_automorphisms, FruchtTree, SimpleGraph};
use crate::budget::SearchBudget;
use crate::error::{Error, Result};
use crate::relsys::{arrow_group_from_automorphisms, degree_report, ArrowAutGroup, RelMorphism, RelSystem};

/// The vertices standing in for one labelled edge `(from, to)`: the
/// connector `r` next to `from`, the connector `p` next to `to`, and a copy
/// of the label's tree hanging off `p` at its leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gadget {
    pub label: usize,
    pub from: usize,
    pub to: usize,
    pub r: usize,
    pub p: usize,
    pub tree: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ReplacementMap {
    pub system: Arc<RelSystem>,
    pub graph: Arc<SimpleGraph>,
    /// Graph vertex → system vertex, for original vertices.
    pub original_of: Vec<Option<usize>>,
    pub gadgets: Vec<Gadget>,
    gadget_index: HashMap<(usize, usize, usize), usize>,
    tree_sizes: Vec<usize>,
}

impl ReplacementMap {
    /// System vertex `v` sits at graph vertex `v`.
    pub fn graph_vertex(&self, v: usize) -> usize {
        v
    }

    pub fn gadget(&self, label: usize, from: usize, to: usize) -> Option<&Gadget> {
        self.gadget_index.get(&(label, from, to)).map(|&i| &self.gadgets[i])
    }
}

#[derive(Serialize)]
struct GadgetJson<'a> {
    label: &'a str,
    from: String,
    to: String,
    vertices: Vec<&'a str>,
}

impl Serialize for ReplacementMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names = self.graph.names();
        let gadgets: Vec<GadgetJson> = self
            .gadgets
            .iter()
            .map(|g| GadgetJson {
                label: &self.system.labels()[g.label],
                from: self.system.vertices()[g.from].to_string(),
                to: self.system.vertices()[g.to].to_string(),
                vertices: [g.r, g.p].iter().chain(&g.tree).map(|&v| names[v].as_str()).collect(),
            })
            .collect();
        gadgets.serialize(s)
    }
}

/// Replaces every labelled edge `(v, w)` by `v — r — p — w` with the label's
/// tree attached to `p` at its leaf. Loops get the same gadget with both
/// connectors on `v`.
pub fn replace(system: Arc<RelSystem>, family: &[(String, FruchtTree)]) -> Result<ReplacementMap> {
    let trees: HashMap<&str, &FruchtTree> = family.iter().map(|(l, t)| (l.as_str(), t)).collect();
    let mut label_tree = Vec::with_capacity(system.labels().len());
    for (l, name) in system.labels().iter().enumerate() {
        match trees.get(name.as_str()) {
            Some(t) => label_tree.push(Some(*t)),
            None if system.edges(l).is_empty() => label_tree.push(None),
            None => return Err(Error::MissingTree(name.clone())),
        }
    }
    for e in degree_report(&system) {
        if e.degree < 4 {
            return Err(Error::DegreeSeparationViolated { vertex: e.vertex, degree: e.degree });
        }
    }

    let mut graph = SimpleGraph::new(system.vertices().iter().map(ToString::to_string).collect())?;
    let original_of = (0..system.num_vertices()).map(Some).collect::<Vec<_>>();
    let mut gadgets = Vec::new();
    let mut gadget_index = HashMap::new();
    for (l, u, v) in system.all_edges() {
        let tree = label_tree[l].expect("checked above");
        let tag = format!("{}:{}>{}", system.labels()[l], system.vertices()[u], system.vertices()[v]);
        let r = graph.add_vertex(format!("{tag}:r"))?;
        let p = graph.add_vertex(format!("{tag}:p"))?;
        let base = graph.len();
        for name in tree.graph.names() {
            graph.add_vertex(format!("{tag}:{name}"))?;
        }
        for (a, b) in tree.graph.edges() {
            graph.add_edge(base + a, base + b)?;
        }
        graph.add_edge(u, r)?;
        graph.add_edge(r, p)?;
        graph.add_edge(p, v)?;
        graph.add_edge(p, base + tree.leaf)?;
        gadget_index.insert((l, u, v), gadgets.len());
        gadgets.push(Gadget { label: l, from: u, to: v, r, p, tree: (base..base + tree.graph.len()).collect() });
    }
    let tree_sizes = label_tree.iter().map(|t| t.map_or(0, |t| t.graph.len())).collect();
    let mut original_of = original_of;
    original_of.resize(graph.len(), None);
    Ok(ReplacementMap { system, graph: Arc::new(graph), original_of, gadgets, gadget_index, tree_sizes })
}

/// A verified adjacency-preserving map of simple graphs.
#[derive(Clone, Debug)]
pub struct GraphMorphism {
    source: Arc<SimpleGraph>,
    target: Arc<SimpleGraph>,
    map: Vec<usize>,
}

impl GraphMorphism {
    pub fn new(source: Arc<SimpleGraph>, target: Arc<SimpleGraph>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::MorphismCheckFailed("vertex map has the wrong shape".into()));
        }
        for (u, v) in source.edges() {
            if !target.has_edge(map[u], map[v]) {
                return Err(Error::MorphismCheckFailed(format!(
                    "edge {} -- {} is not preserved",
                    source.names()[u],
                    source.names()[v]
                )));
            }
        }
        Ok(Self { source, target, map })
    }

    pub fn identity(g: Arc<SimpleGraph>) -> Self {
        let map = (0..g.len()).collect();
        Self { source: g.clone(), target: g, map }
    }

    pub fn source(&self) -> &Arc<SimpleGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimpleGraph> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// Lifts a relational morphism to the replaced graphs: originals map by
/// `φ`, and the gadget of `(i, v, w)` maps onto the gadget of
/// `(i, φv, φw)` vertex by vertex.
pub fn lift_morphism(phi: &RelMorphism, src: &ReplacementMap, dst: &ReplacementMap) -> Result<GraphMorphism> {
    if !Arc::ptr_eq(phi.source(), &src.system) && **phi.source() != *src.system
        || !Arc::ptr_eq(phi.target(), &dst.system) && **phi.target() != *dst.system
    {
        return Err(Error::MorphismCheckFailed("replacements were built from other systems".into()));
    }
    let mut map = vec![usize::MAX; src.graph.len()];
    for v in 0..src.system.num_vertices() {
        map[src.graph_vertex(v)] = dst.graph_vertex(phi.map()[v]);
    }
    for g in &src.gadgets {
        let name = &src.system.labels()[g.label];
        let tl = dst.system.label_index(name)?;
        let (fu, fv) = (phi.map()[g.from], phi.map()[g.to]);
        let h = dst
            .gadget(tl, fu, fv)
            .ok_or_else(|| Error::MorphismCheckFailed(format!("no gadget for {name} at the image of an edge")))?;
        if src.tree_sizes[g.label] != dst.tree_sizes[tl] {
            return Err(Error::MorphismCheckFailed(format!("tree families differ at label {name}")));
        }
        map[g.r] = h.r;
        map[g.p] = h.p;
        for (&a, &b) in g.tree.iter().zip(&h.tree) {
            map[a] = b;
        }
    }
    GraphMorphism::new(src.graph.clone(), dst.graph.clone(), map)
}

pub fn arrow_automorphism_group_graph(f: &GraphMorphism, budget: &SearchBudget) -> Result<ArrowAutGroup> {
    let src = enumerate_graph_automorphisms(f.source(), budget)?;
    let tgt = if Arc::ptr_eq(f.source(), f.target()) {
        src.clone()
    } else {
        enumerate_graph_automorphisms(f.target(), budget)?
    };
    arrow_group_from_automorphisms(&src, &tgt, f.map())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goursat::GeneratingData;
    use crate::graph::tree_family;
    use crate::group::cyclic;
    use crate::relsys::{enumerate_rel_automorphisms, RelPipeline, VertexId};

    fn sec5() -> RelPipeline {
        let gd = GeneratingData::from_pairs(&cyclic(8).unwrap(), &cyclic(4).unwrap(), &[(2, 2)]).unwrap();
        RelPipeline::new(gd).unwrap()
    }

    #[test]
    fn sec5_source_replacement_degrees() {
        let p = sec5();
        let fam = tree_family(p.source.labels()).unwrap();
        let rm = replace(p.source.clone(), &fam).unwrap();
        assert_eq!(rm.gadgets.len(), 32);
        for v in 0..8 {
            assert_eq!(rm.graph.degree(v), 8);
        }
        for g in &rm.gadgets {
            assert_eq!(rm.graph.degree(g.r), 2);
            assert_eq!(rm.graph.degree(g.p), 3);
            // Direction recovery.
            assert!(rm.graph.has_edge(g.r, g.from));
            assert!(rm.graph.has_edge(g.p, g.to));
            assert!(g.tree.iter().all(|&t| rm.graph.degree(t) <= 3));
        }
        assert!(rm.graph.is_connected());
    }

    #[test]
    fn low_degree_is_rejected() {
        let mut s = RelSystem::new(vec![VertexId::Elem(0), VertexId::Elem(1)], vec!["a".into()]).unwrap();
        s.add_edge("a", &VertexId::Elem(0), &VertexId::Elem(1)).unwrap();
        let fam = tree_family(&["a".into()]).unwrap();
        assert!(matches!(replace(Arc::new(s), &fam), Err(Error::DegreeSeparationViolated { degree: 1, .. })));
    }

    #[test]
    fn missing_tree_is_rejected() {
        let p = sec5();
        assert!(matches!(replace(p.source.clone(), &[]), Err(Error::MissingTree(_))));
    }

    #[test]
    fn sec5_graph_level_counts() {
        let p = sec5();
        let fam = tree_family(p.target.labels()).unwrap();
        let src = replace(p.source.clone(), &fam).unwrap();
        let dst = replace(p.target.clone(), &fam).unwrap();
        let b = SearchBudget::default();
        let a1 = enumerate_graph_automorphisms(&src.graph, &b).unwrap();
        let a2 = enumerate_graph_automorphisms(&dst.graph, &b).unwrap();
        assert_eq!((a1.len(), a2.len()), (8, 4));
        // Restriction to originals agrees with the relational automorphisms.
        let restrict = |auts: &[Vec<usize>], n: usize| -> Vec<Vec<usize>> {
            let mut r: Vec<Vec<usize>> = auts.iter().map(|a| a[..n].to_vec()).collect();
            r.sort();
            r
        };
        assert_eq!(restrict(&a1, 8), enumerate_rel_automorphisms(&p.source, &b).unwrap());
        assert_eq!(restrict(&a2, 10), enumerate_rel_automorphisms(&p.target, &b).unwrap());
        let f = lift_morphism(&p.phi, &src, &dst).unwrap();
        assert_eq!(arrow_automorphism_group_graph(&f, &b).unwrap().order(), 4);
    }

    #[test]
    fn lifted_fibres_match_edge_fibres() {
        let p = sec5();
        let fam = tree_family(p.target.labels()).unwrap();
        let src = replace(p.source.clone(), &fam).unwrap();
        let dst = replace(p.target.clone(), &fam).unwrap();
        let f = lift_morphism(&p.phi, &src, &dst).unwrap();
        for h in &dst.gadgets {
            let edge_fibre = p
                .source
                .all_edges()
                .filter(|&(l, u, v)| {
                    p.source.labels()[l] == p.target.labels()[h.label]
                        && p.phi.map()[u] == h.from
                        && p.phi.map()[v] == h.to
                })
                .count();
            assert_eq!(f.map().iter().filter(|&&y| y == h.r).count(), edge_fibre);
        }
    }

    #[test]
    fn identity_lifts_to_identity() {
        let p = sec5();
        let fam = tree_family(p.source.labels()).unwrap();
        let src = replace(p.source.clone(), &fam).unwrap();
        let id = RelMorphism::identity(p.source.clone());
        let f = lift_morphism(&id, &src, &src).unwrap();
        assert!(f.map().iter().enumerate().all(|(i, &j)| i == j));
        let g = arrow_automorphism_group_graph(&GraphMorphism::identity(src.graph.clone()), &SearchBudget::default())
            .unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.pairs.iter().all(|(a, b)| a == b));
    }
}
