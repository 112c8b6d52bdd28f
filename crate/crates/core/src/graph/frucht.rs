use super::{enumerate_graph_automorphisms, graph_isomorphism, SimpleGraph};
use crate::budget::SearchBudget;
use crate::error::{Error, Result};

/// A starlike tree: a degree-3 root with three pendant paths of distinct
/// lengths. `leaf` is the end of the longest arm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FruchtTree {
    pub arms: (usize, usize, usize),
    pub graph: SimpleGraph,
    pub root: usize,
    pub leaf: usize,
}

pub fn frucht_tree(arms: (usize, usize, usize)) -> Result<FruchtTree> {
    let (a, b, c) = arms;
    if a == 0 || b == 0 || c == 0 || a == b || b == c || a == c {
        return Err(Error::ArmsNotDistinct(arms));
    }
    let mut g = SimpleGraph::new(vec!["root".into()])?;
    let mut ends = Vec::new();
    for (k, len) in [a, b, c].into_iter().enumerate() {
        let mut prev = 0;
        for i in 1..=len {
            let v = g.add_vertex(format!("arm{k}.{i}"))?;
            g.add_edge(prev, v)?;
            prev = v;
        }
        ends.push((len, prev));
    }
    let leaf = ends.iter().max().expect("three arms").1;
    if enumerate_graph_automorphisms(&g, &SearchBudget::default())?.len() != 1 {
        return Err(Error::InternalInconsistency(format!("tree {arms:?} is not asymmetric")));
    }
    Ok(FruchtTree { arms, graph: g, root: 0, leaf })
}

/// Arm triples `a < b < c` by increasing sum, then lexicographically.
fn triples() -> impl Iterator<Item = (usize, usize, usize)> {
    (6usize..).flat_map(|s| {
        (1..s).flat_map(move |a| {
            ((a + 1)..s).filter_map(move |b| {
                let c = s.checked_sub(a + b)?;
                (c > b).then_some((a, b, c))
            })
        })
    })
}

/// One tree per label, in label order, pairwise non-isomorphic (checked).
pub fn tree_family(labels: &[String]) -> Result<Vec<(String, FruchtTree)>> {
    let family: Vec<(String, FruchtTree)> =
        labels.iter().cloned().zip(triples()).map(|(l, t)| Ok((l, frucht_tree(t)?))).collect::<Result<_>>()?;
    for (i, (_, a)) in family.iter().enumerate() {
        for (_, b) in &family[i + 1..] {
            if graph_isomorphism(&a.graph, &b.graph, &SearchBudget::default())?.is_some() {
                return Err(Error::InternalInconsistency(format!(
                    "trees {:?} and {:?} are isomorphic",
                    a.arms, b.arms
                )));
            }
        }
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_trees() {
        let t = frucht_tree((1, 2, 3)).unwrap();
        assert_eq!(t.graph.len(), 7);
        assert_eq!(t.graph.num_edges(), 6);
        assert_eq!(t.graph.degree(t.root), 3);
        assert_eq!(t.graph.degree(t.leaf), 1);
        assert_eq!(t.graph.names()[t.leaf], "arm2.3");
        let u = frucht_tree((1, 2, 4)).unwrap();
        assert_eq!(u.graph.len(), 8);
        assert!(graph_isomorphism(&t.graph, &u.graph, &SearchBudget::default()).unwrap().is_none());
    }

    #[test]
    fn equal_arms_are_rejected() {
        assert_eq!(frucht_tree((1, 1, 2)).unwrap_err(), Error::ArmsNotDistinct((1, 1, 2)));
        assert!(frucht_tree((0, 1, 2)).is_err());
    }

    #[test]
    fn family_order() {
        let first: Vec<_> = triples().take(7).collect();
        assert_eq!(first, vec![(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 2, 6), (1, 3, 5), (2, 3, 4)]);
        assert!(tree_family(&[]).unwrap().is_empty());
        let one = tree_family(&["a".into()]).unwrap();
        assert_eq!(one[0].1.arms, (1, 2, 3));
        let two = tree_family(&["a".into(), "b".into()]).unwrap();
        assert_eq!((two[0].1.graph.len(), two[1].1.graph.len()), (7, 8));
    }

    #[test]
    fn twelve_trees_are_asymmetric_and_distinct() {
        let labels: Vec<String> = (0..12).map(|i| format!("l{i}")).collect();
        let fam = tree_family(&labels).unwrap();
        for (_, t) in &fam {
            assert_eq!(enumerate_graph_automorphisms(&t.graph, &SearchBudget::default()).unwrap().len(), 1);
            assert!(t.graph.is_connected() && t.graph.num_edges() + 1 == t.graph.len());
            assert!((0..t.graph.len()).all(|v| t.graph.degree(v) <= 3));
        }
    }
}
