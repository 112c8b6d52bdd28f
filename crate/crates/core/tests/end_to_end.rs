use std::sync::Arc;

use arrowaut_core::cdga::{
    coeff, default_coefficients, enumerate_morphisms_constrained, induced_algebra_morphism, AlgebraMorphism,
    SullivanPresentation,
};
use arrowaut_core::digraph::Digraph;
use arrowaut_core::goursat::GeneratingData;
use arrowaut_core::graph::{arrow_automorphism_group_graph, lift_morphism, replace, tree_family};
use arrowaut_core::group::{cyclic, dihedral, klein4, FiniteGroup};
use arrowaut_core::iso::isomorphism_search;
use arrowaut_core::relsys::{arrow_automorphism_group, automorphism_group, enumerate_rel_automorphisms, RelPipeline};
use arrowaut_core::SearchBudget;
use proptest::prelude::*;

fn h_as_group(gd: &GeneratingData) -> FiniteGroup {
    let d = gd.decomposition();
    d.product().group().subgroup_as_group(d.h()).unwrap().0
}

fn isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.order() == b.order() && isomorphism_search(a, b, &SearchBudget::default()).unwrap().is_some()
}

fn check_relational(gd: GeneratingData) {
    let budget = SearchBudget::default();
    let p = RelPipeline::new(gd.clone()).unwrap();
    let src = automorphism_group(&enumerate_rel_automorphisms(&p.source, &budget).unwrap()).unwrap();
    let tgt = automorphism_group(&enumerate_rel_automorphisms(&p.target, &budget).unwrap()).unwrap();
    assert!(isomorphic(&src, gd.g1()));
    assert!(isomorphic(&tgt, gd.g2()));
    let arrow = arrow_automorphism_group(&p.phi, &budget).unwrap();
    assert!(isomorphic(&arrow.group, &h_as_group(&gd)));
}

#[test]
fn nonabelian_factor_at_graph_level() {
    // D4 with H the graph of the quotient D4 -> D4/<r> = Z2.
    let d4 = dihedral(4).unwrap();
    let z2 = cyclic(2).unwrap();
    let gd = GeneratingData::from_pairs(&d4, &z2, &[(1, 0), (4, 1)]).unwrap();
    let budget = SearchBudget::default();
    let p = RelPipeline::new(gd.clone()).unwrap();
    let family = tree_family(p.target.labels()).unwrap();
    let (rs, rt) = (replace(p.source.clone(), &family).unwrap(), replace(p.target.clone(), &family).unwrap());
    let f = lift_morphism(&p.phi, &rs, &rt).unwrap();
    let arrow = arrow_automorphism_group_graph(&f, &budget).unwrap();
    assert_eq!(arrow.order(), 8);
    assert!(isomorphic(&arrow.group, &h_as_group(&gd)));
}

#[test]
fn trivial_and_full_subgroups() {
    let (k4, z3) = (klein4(), cyclic(3).unwrap());
    check_relational(GeneratingData::from_pairs(&k4, &z3, &[]).unwrap());
    check_relational(GeneratingData::from_pairs(&k4, &z3, &[(1, 0), (2, 0), (0, 1)]).unwrap());
}

#[test]
fn coefficient_set_with_two_admits_no_extra_morphisms_on_two_cycle() {
    let p = Arc::new(SullivanPresentation::new(&Digraph::preset("cycle:2").unwrap(), 1).unwrap());
    let coeffs = [coeff(-2), coeff(-1), coeff(0), coeff(1), coeff(2)];
    let found = enumerate_morphisms_constrained(p.clone(), p.clone(), &coeffs, &SearchBudget::default()).unwrap();
    let small =
        enumerate_morphisms_constrained(p.clone(), p, &default_coefficients(), &SearchBudget::default()).unwrap();
    assert_eq!(found, small);
}

#[test]
fn composition_of_induced_morphisms_across_graphs() {
    let c2 = Arc::new(SullivanPresentation::new(&Digraph::preset("cycle:2").unwrap(), 2).unwrap());
    let bow = Arc::new(SullivanPresentation::new(&Digraph::preset("bowtie").unwrap(), 2).unwrap());
    // Fold the bowtie onto the 2-cycle, then include the 2-cycle as its left half.
    let fold = induced_algebra_morphism(&[0, 1, 0], bow.clone(), c2.clone()).unwrap();
    let include = induced_algebra_morphism(&[0, 1], c2, bow.clone()).unwrap();
    let round = include.compose(&fold).unwrap();
    assert_eq!(round, induced_algebra_morphism(&[0, 1, 0], bow.clone(), bow.clone()).unwrap());
    assert_ne!(round, AlgebraMorphism::identity(bow));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arrow_group_matches_random_subgroups(
        n1 in 1usize..7,
        n2 in 1usize..5,
        gens in proptest::collection::vec((0usize..6, 0usize..4), 0..3),
    ) {
        let (g1, g2) = (cyclic(n1).unwrap(), cyclic(n2).unwrap());
        let gens: Vec<_> = gens.into_iter().map(|(a, b)| (a % n1, b % n2)).collect();
        check_relational(GeneratingData::from_pairs(&g1, &g2, &gens).unwrap());
    }
}
