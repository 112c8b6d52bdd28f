use std::collections::HashMap;

use super::{RelMorphism, RelSystem};
use crate::budget::SearchBudget;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::refine::{automorphisms, check_closed, compose, Structure};

/// Encodes a relational system for the refinement search. Each ordered pair
/// of distinct vertices gets a code for its (forward labels, backward
/// labels) pattern; loop labels become the initial vertex colour.
pub fn rel_structure(s: &RelSystem) -> Structure {
    let mut between: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    let mut loops: Vec<Vec<u32>> = vec![Vec::new(); s.num_vertices()];
    for (l, u, v) in s.all_edges() {
        if u == v {
            loops[u].push(l as u32);
        } else {
            between.entry((u, v)).or_default().push(l as u32);
        }
    }
    let mut loop_codes: HashMap<Vec<u32>, u32> = HashMap::new();
    let colour = loops
        .into_iter()
        .map(|ls| {
            let next = loop_codes.len() as u32;
            *loop_codes.entry(ls).or_insert(next)
        })
        .collect();
    let mut pair_codes: HashMap<(Vec<u32>, Vec<u32>), u32> = HashMap::new();
    let mut keys: Vec<(usize, usize)> = between.keys().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
    keys.sort_unstable();
    keys.dedup();
    let arcs: Vec<(usize, usize, u32)> = keys
        .into_iter()
        .map(|(u, v)| {
            let fw = between.get(&(u, v)).cloned().unwrap_or_default();
            let bw = between.get(&(v, u)).cloned().unwrap_or_default();
            let next = pair_codes.len() as u32 + 1;
            (u, v, *pair_codes.entry((fw, bw)).or_insert(next))
        })
        .collect();
    Structure::new(colour, arcs)
}

/// All label-preserving bijections `ψ` with `(v,w) ∈ R_i ⇔ (ψv,ψw) ∈ R_i`,
/// sorted. The result is checked to be closed under composition.
pub fn enumerate_rel_automorphisms(s: &RelSystem, budget: &SearchBudget) -> Result<Vec<Vec<usize>>> {
    let auts = automorphisms(&rel_structure(s), budget)?;
    for a in &auts {
        if !s.all_edges().all(|(l, u, v)| s.has_edge(l, a[u], a[v])) {
            return Err(Error::InternalInconsistency("enumerated map is not an automorphism".into()));
        }
    }
    check_closed(&auts)?;
    Ok(auts)
}

/// The group formed by a closed, sorted list of permutations.
pub fn automorphism_group(perms: &[Vec<usize>]) -> Result<FiniteGroup> {
    FiniteGroup::from_permutations(perms)
}

/// Pairs `(a, b)` of source and target automorphisms with `b∘φ = φ∘a`,
/// together with the group they form under componentwise composition.
#[derive(Clone, Debug)]
pub struct ArrowAutGroup {
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
    pub group: FiniteGroup,
}

impl ArrowAutGroup {
    pub fn order(&self) -> usize {
        self.pairs.len()
    }
}

pub fn arrow_group_from_automorphisms(
    source_auts: &[Vec<usize>],
    target_auts: &[Vec<usize>],
    phi: &[usize],
) -> Result<ArrowAutGroup> {
    let mut by_image: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, b) in target_auts.iter().enumerate() {
        by_image.entry(compose(b, phi)).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for a in source_auts {
        if let Some(bs) = by_image.get(&compose(phi, a)) {
            pairs.extend(bs.iter().map(|&i| (a.clone(), target_auts[i].clone())));
        }
    }
    pairs.sort();
    let index: HashMap<&(Vec<usize>, Vec<usize>), usize> = pairs.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut table = vec![vec![0; pairs.len()]; pairs.len()];
    for (i, (a1, b1)) in pairs.iter().enumerate() {
        for (j, (a2, b2)) in pairs.iter().enumerate() {
            let prod = (compose(a1, a2), compose(b1, b2));
            table[i][j] = *index
                .get(&prod)
                .ok_or_else(|| Error::InternalInconsistency("arrow automorphisms are not closed".into()))?;
        }
    }
    let group = FiniteGroup::from_table(table)?.with_name("Aut(phi)");
    Ok(ArrowAutGroup { pairs, group })
}

pub fn arrow_automorphism_group(phi: &RelMorphism, budget: &SearchBudget) -> Result<ArrowAutGroup> {
    let src = enumerate_rel_automorphisms(phi.source(), budget)?;
    let tgt = if std::sync::Arc::ptr_eq(phi.source(), phi.target()) {
        src.clone()
    } else {
        enumerate_rel_automorphisms(phi.target(), budget)?
    };
    arrow_group_from_automorphisms(&src, &tgt, phi.map())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::goursat::GeneratingData;
    use crate::group::{cyclic, dihedral, klein4, symmetric, DirectProduct};
    use crate::iso::isomorphism_search;
    use crate::relsys::{build_aux_system, cayley_diagram, induced_target_automorphism, RelPipeline, VertexId};

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn sec5() -> RelPipeline {
        let gd = GeneratingData::from_pairs(&cyclic(8).unwrap(), &cyclic(4).unwrap(), &[(2, 2)]).unwrap();
        RelPipeline::new(gd).unwrap()
    }

    fn isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        isomorphism_search(a, b, &budget()).unwrap().is_some()
    }

    #[test]
    fn sec5_counts() {
        let p = sec5();
        let a1 = enumerate_rel_automorphisms(&p.source, &budget()).unwrap();
        let a2 = enumerate_rel_automorphisms(&p.target, &budget()).unwrap();
        assert_eq!(a1.len(), 8);
        assert_eq!(a2.len(), 4);
        assert!(isomorphic(&automorphism_group(&a1).unwrap(), &cyclic(8).unwrap()));
        assert!(isomorphic(&automorphism_group(&a2).unwrap(), &cyclic(4).unwrap()));
        let arrow = arrow_automorphism_group(&p.phi, &budget()).unwrap();
        assert_eq!(arrow.order(), 4);
        let d = p.data.decomposition();
        let (h, _) = d.product().group().subgroup_as_group(d.h()).unwrap();
        assert!(isomorphic(&arrow.group, &h));
    }

    #[test]
    fn induced_automorphisms_are_all_automorphisms_of_sec5_target() {
        let p = sec5();
        let mut induced: Vec<Vec<usize>> =
            (0..4).map(|g| induced_target_automorphism(&p.data, p.target.clone(), g).unwrap().map().to_vec()).collect();
        induced.sort();
        assert_eq!(induced, enumerate_rel_automorphisms(&p.target, &budget()).unwrap());
    }

    #[test]
    fn single_vertex_has_one_automorphism() {
        let s = RelSystem::new(vec![VertexId::Elem(0)], vec![]).unwrap();
        assert_eq!(enumerate_rel_automorphisms(&s, &budget()).unwrap().len(), 1);
    }

    #[test]
    fn cayley_diagrams_are_regular_and_rigid_up_to_translation() {
        let groups = [cyclic(6).unwrap(), klein4(), symmetric(3).unwrap(), dihedral(4).unwrap()];
        for g in &groups {
            let gens: Vec<(String, usize)> = crate::group::greedy_generators(g, &g.whole())
                .into_iter()
                .enumerate()
                .map(|(i, s)| (format!("g{i}"), s))
                .collect();
            let s = cayley_diagram(g, &gens).unwrap();
            let auts = enumerate_rel_automorphisms(&s, &budget()).unwrap();
            assert_eq!(auts.len(), g.order());
            for a in &auts {
                // Every automorphism is x ↦ x·h with h = a(e).
                let h = a[g.identity()];
                assert!(g.elements().all(|x| a[x] == g.mul(x, h)));
                let fixes_a_vertex = (0..a.len()).any(|x| a[x] == x);
                let is_identity = a.iter().enumerate().all(|(i, &y)| i == y);
                assert_eq!(fixes_a_vertex, is_identity);
            }
        }
    }

    #[test]
    fn identity_arrow_gives_the_diagonal() {
        let p = sec5();
        let id = RelMorphism::identity(p.source.clone());
        let arrow = arrow_automorphism_group(&id, &budget()).unwrap();
        assert_eq!(arrow.order(), 8);
        assert!(arrow.pairs.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn full_product_arrow_group_by_pair_filtering() {
        let (g1, g2) = (cyclic(2).unwrap(), cyclic(3).unwrap());
        let p = DirectProduct::new(&g1, &g2).unwrap();
        let gens: Vec<(usize, usize)> = vec![(1, 0), (0, 1)];
        let gd = GeneratingData::from_pairs(&g1, &g2, &gens).unwrap();
        assert_eq!(gd.decomposition().h().len(), p.group().order());
        let rp = RelPipeline::new(gd).unwrap();
        let src = enumerate_rel_automorphisms(&rp.source, &budget()).unwrap();
        let tgt = enumerate_rel_automorphisms(&rp.target, &budget()).unwrap();
        let phi = rp.phi.map();
        let brute = src
            .iter()
            .flat_map(|a| tgt.iter().map(move |b| (a, b)))
            .filter(|(a, b)| (0..a.len()).all(|x| b[phi[x]] == phi[a[x]]))
            .count();
        assert_eq!(brute, 6);
        assert_eq!(arrow_automorphism_group(&rp.phi, &budget()).unwrap().order(), 6);
    }

    #[test]
    fn aux_system_rigidity() {
        let groups = [cyclic(4).unwrap(), klein4(), symmetric(3).unwrap()];
        for g1 in &groups {
            for g2 in &groups {
                let p = DirectProduct::new(g1, g2).unwrap();
                for h in crate::group::subgroups_two_generated(p.group()) {
                    let gd = GeneratingData::new(crate::goursat::GoursatDecomposition::new(&p, &h).unwrap()).unwrap();
                    let aux = Arc::new(build_aux_system(&gd).unwrap());
                    let auts = enumerate_rel_automorphisms(&aux, &budget()).unwrap();
                    let e = aux.vertex_index(&VertexId::Aux(crate::relsys::AuxVertex::Class(g1.identity()))).unwrap();
                    let q1 = gd.decomposition().q1();
                    for c in 0..q1.len() {
                        let target =
                            aux.vertex_index(&VertexId::Aux(crate::relsys::AuxVertex::Class(q1.reps()[c]))).unwrap();
                        assert_eq!(auts.iter().filter(|a| a[e] == target).count(), 1);
                    }
                }
            }
        }
    }
}
