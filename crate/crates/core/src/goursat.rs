//! Subgroups of a direct product through their projections, kernels and the
//! isomorphism of subquotients, plus the generating data that the relational
//! constructions are built from.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{cosets_within, greedy_generators, right_cosets, subgroup_closure};
use crate::group::{CosetDecomposition, DirectProduct, ElementSubset, FiniteGroup};

#[derive(Clone, Debug)]
pub struct GoursatDecomposition {
    product: DirectProduct,
    h: ElementSubset,
    pi1: ElementSubset,
    pi2: ElementSubset,
    iota1: ElementSubset,
    iota2: ElementSubset,
    q1: CosetDecomposition,
    q2: CosetDecomposition,
    theta: Vec<usize>,
}

impl GoursatDecomposition {
    /// Decomposes `h ≤ G₁×G₂`, then checks that θ is a well-defined
    /// isomorphism of the quotients and that it reconstructs `h`.
    pub fn new(product: &DirectProduct, h: &ElementSubset) -> Result<Self> {
        let (g1, g2) = (product.left(), product.right());
        let pg = product.group();
        if h.parent_order() != pg.order() || !pg.is_subgroup(h.members()) {
            return Err(Error::NotASubgroup);
        }
        let pairs: Vec<(usize, usize)> = h.members().iter().map(|&x| product.unpair(x)).collect();
        let pi1 = g1.subgroup(pairs.iter().map(|p| p.0))?;
        let pi2 = g2.subgroup(pairs.iter().map(|p| p.1))?;
        let iota1 = g1.subgroup(pairs.iter().filter(|p| p.1 == g2.identity()).map(|p| p.0))?;
        let iota2 = g2.subgroup(pairs.iter().filter(|p| p.0 == g1.identity()).map(|p| p.1))?;
        let q1 = cosets_within(g1, &iota1, &pi1)?;
        let q2 = cosets_within(g2, &iota2, &pi2)?;

        let mut theta = vec![None; q1.len()];
        for &(a, b) in &pairs {
            let (c1, c2) = (q1.class(a).expect("a ∈ π₁(H)"), q2.class(b).expect("b ∈ π₂(H)"));
            match theta[c1] {
                None => theta[c1] = Some(c2),
                Some(prev) if prev != c2 => {
                    return Err(Error::InternalInconsistency(format!("θ is not well defined on class {c1}")))
                }
                Some(_) => {}
            }
        }
        let theta: Vec<usize> = theta.into_iter().map(|t| t.expect("every class is hit")).collect();

        let d = Self { product: product.clone(), h: h.clone(), pi1, pi2, iota1, iota2, q1, q2, theta };
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InternalInconsistency(m.to_string()));
        if self.q1.len() != self.q2.len() {
            return fail("quotients have different orders");
        }
        let mut hit = vec![false; self.q2.len()];
        for &t in &self.theta {
            if std::mem::replace(&mut hit[t], true) {
                return fail("θ is not injective");
            }
        }
        for a in 0..self.q1.len() {
            for b in 0..self.q1.len() {
                let ab = self.quotient_mul(1, a, b);
                if self.theta[ab] != self.quotient_mul(2, self.theta[a], self.theta[b]) {
                    return fail("θ does not preserve multiplication");
                }
            }
        }
        for a in self.g1().elements() {
            for b in self.g2().elements() {
                if self.h.contains(self.product.pair(a, b)) != self.reconstructs(a, b) {
                    return fail("reconstruction from θ disagrees with H");
                }
            }
        }
        Ok(())
    }

    /// Membership test `g₁ ∈ π₁(H) ∧ g₂ ∈ π₂(H) ∧ θ[g₁] = [g₂]`.
    pub fn reconstructs(&self, a: usize, b: usize) -> bool {
        match (self.q1.class(a), self.q2.class(b)) {
            (Some(c1), Some(c2)) => self.theta[c1] == c2,
            _ => false,
        }
    }

    /// Product of two classes in `π₁(H)/ι₁⁻¹(H)` (side 1) or
    /// `π₂(H)/ι₂⁻¹(H)` (side 2).
    pub fn quotient_mul(&self, side: u8, a: usize, b: usize) -> usize {
        let (g, q) = if side == 1 { (self.g1(), &self.q1) } else { (self.g2(), &self.q2) };
        q.class(g.mul(q.reps()[a], q.reps()[b])).expect("quotient is closed")
    }

    pub fn theta_inverse(&self, c2: usize) -> usize {
        self.theta.iter().position(|&t| t == c2).expect("θ is a bijection")
    }

    pub fn product(&self) -> &DirectProduct {
        &self.product
    }

    pub fn g1(&self) -> &FiniteGroup {
        self.product.left()
    }

    pub fn g2(&self) -> &FiniteGroup {
        self.product.right()
    }

    pub fn h(&self) -> &ElementSubset {
        &self.h
    }

    pub fn pi1(&self) -> &ElementSubset {
        &self.pi1
    }

    pub fn pi2(&self) -> &ElementSubset {
        &self.pi2
    }

    pub fn iota1(&self) -> &ElementSubset {
        &self.iota1
    }

    pub fn iota2(&self) -> &ElementSubset {
        &self.iota2
    }

    pub fn q1(&self) -> &CosetDecomposition {
        &self.q1
    }

    pub fn q2(&self) -> &CosetDecomposition {
        &self.q2
    }

    pub fn theta(&self) -> &[usize] {
        &self.theta
    }

    pub fn h_pairs(&self) -> Vec<(usize, usize)> {
        self.h.members().iter().map(|&x| self.product.unpair(x)).collect()
    }
}

#[derive(Serialize)]
struct DecompositionJson<'a> {
    g1: &'a str,
    g2: &'a str,
    h: Vec<(usize, usize)>,
    pi1_h: &'a [usize],
    pi2_h: &'a [usize],
    iota1_h: &'a [usize],
    iota2_h: &'a [usize],
    q1_reps: &'a [usize],
    q2_reps: &'a [usize],
    theta: &'a [usize],
}

impl Serialize for GoursatDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionJson {
            g1: self.g1().name(),
            g2: self.g2().name(),
            h: self.h_pairs(),
            pi1_h: self.pi1.members(),
            pi2_h: self.pi2.members(),
            iota1_h: self.iota1.members(),
            iota2_h: self.iota2.members(),
            q1_reps: self.q1.reps(),
            q2_reps: self.q2.reps(),
            theta: &self.theta,
        }
        .serialize(s)
    }
}

/// Edge labels of the relational systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// k-th generator of ι₁⁻¹(H) (including identity padding).
    Iota1(usize),
    /// Non-trivial coset representative r_j of ι₁⁻¹(H) in G₁.
    Coset1(usize),
    /// k-th generator of π₂(H) (including identity padding).
    Pi2(usize),
    /// Non-trivial coset representative s_j of π₂(H) in G₂.
    Coset2(usize),
    Theta,
}

impl Label {
    pub fn in_i1(self) -> bool {
        matches!(self, Label::Iota1(_) | Label::Coset1(_))
    }

    pub fn in_i2(self) -> bool {
        matches!(self, Label::Pi2(_) | Label::Coset2(_))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::UnknownLabel(s.to_string());
        if s == "theta" {
            return Ok(Label::Theta);
        }
        let (side, rest) = s.split_once('.').ok_or_else(bad)?;
        let (kind, num) = rest.split_at(1.min(rest.len()));
        let k: usize = num.parse().map_err(|_| bad())?;
        match (side, kind) {
            ("R", "g") => Ok(Label::Iota1(k)),
            ("R", "j") => Ok(Label::Coset1(k)),
            ("S", "g") => Ok(Label::Pi2(k)),
            ("S", "j") => Ok(Label::Coset2(k)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Iota1(k) => write!(f, "R.g{k}"),
            Label::Coset1(j) => write!(f, "R.j{j}"),
            Label::Pi2(k) => write!(f, "S.g{k}"),
            Label::Coset2(j) => write!(f, "S.j{j}"),
            Label::Theta => f.write_str("theta"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    One,
    Two,
}

/// `g = k·r_j` (side one) or `g = k·s_j` (side two).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub k: usize,
    pub j: usize,
}

#[derive(Clone, Debug)]
pub struct GeneratingData {
    decomposition: GoursatDecomposition,
    j1: CosetDecomposition,
    j2: CosetDecomposition,
    iota1_gens: Vec<usize>,
    pi2_gens: Vec<usize>,
    j_pi1: Vec<usize>,
}

impl GeneratingData {
    pub fn new(decomposition: GoursatDecomposition) -> Result<Self> {
        let d = &decomposition;
        let j1 = right_cosets(d.g1(), d.iota1())?;
        let j2 = right_cosets(d.g2(), d.pi2())?;
        let mut iota1_gens = greedy_generators(d.g1(), d.iota1());
        while iota1_gens.len() + j1.len() - 1 < 2 {
            iota1_gens.push(d.g1().identity());
        }
        let mut pi2_gens = greedy_generators(d.g2(), d.pi2());
        while pi2_gens.len() + j2.len() - 1 < 2 {
            pi2_gens.push(d.g2().identity());
        }
        let j_pi1 = (0..j1.len()).filter(|&j| d.pi1().contains(j1.reps()[j])).collect();
        let gd = Self { decomposition, j1, j2, iota1_gens, pi2_gens, j_pi1 };

        for (g, labels) in [(gd.g1(), gd.i1()), (gd.g2(), gd.i2())] {
            let gens: Vec<usize> = labels.iter().map(|&l| gd.element_of(l)).collect();
            if subgroup_closure(g, &gens)?.len() != g.order() {
                return Err(Error::InternalInconsistency("generating labels do not generate".into()));
            }
        }
        Ok(gd)
    }

    pub fn from_pairs(g1: &FiniteGroup, g2: &FiniteGroup, h_gens: &[(usize, usize)]) -> Result<Self> {
        let p = DirectProduct::new(g1, g2)?;
        let h = p.subgroup_from_pairs(h_gens)?;
        Self::new(GoursatDecomposition::new(&p, &h)?)
    }

    pub fn decomposition(&self) -> &GoursatDecomposition {
        &self.decomposition
    }

    pub fn g1(&self) -> &FiniteGroup {
        self.decomposition.g1()
    }

    pub fn g2(&self) -> &FiniteGroup {
        self.decomposition.g2()
    }

    /// Right cosets of ι₁⁻¹(H) in G₁; `reps()[j]` is r_j.
    pub fn j1(&self) -> &CosetDecomposition {
        &self.j1
    }

    /// Right cosets of π₂(H) in G₂; `reps()[j]` is s_j.
    pub fn j2(&self) -> &CosetDecomposition {
        &self.j2
    }

    pub fn iota1_generators(&self) -> &[usize] {
        &self.iota1_gens
    }

    pub fn pi2_generators(&self) -> &[usize] {
        &self.pi2_gens
    }

    /// Indices j with r_j ∈ π₁(H).
    pub fn j_pi1(&self) -> &[usize] {
        &self.j_pi1
    }

    pub fn i1(&self) -> Vec<Label> {
        (0..self.iota1_gens.len()).map(Label::Iota1).chain((1..self.j1.len()).map(Label::Coset1)).collect()
    }

    pub fn i2(&self) -> Vec<Label> {
        (0..self.pi2_gens.len()).map(Label::Pi2).chain((1..self.j2.len()).map(Label::Coset2)).collect()
    }

    /// All labels: I₁, then I₂, then θ.
    pub fn labels(&self) -> Vec<Label> {
        let mut all = self.i1();
        all.extend(self.i2());
        all.push(Label::Theta);
        all
    }

    /// Group element attached to a label (r_i or s_i); θ has none and maps to
    /// the identity of G₂.
    pub fn element_of(&self, label: Label) -> usize {
        match label {
            Label::Iota1(k) => self.iota1_gens[k],
            Label::Coset1(j) => self.j1.reps()[j],
            Label::Pi2(k) => self.pi2_gens[k],
            Label::Coset2(j) => self.j2.reps()[j],
            Label::Theta => self.g2().identity(),
        }
    }

    /// R as an element list in label order.
    pub fn r_elements(&self) -> Vec<usize> {
        self.i1().into_iter().map(|l| self.element_of(l)).collect()
    }

    pub fn s_elements(&self) -> Vec<usize> {
        self.i2().into_iter().map(|l| self.element_of(l)).collect()
    }

    /// Pairs `(a, b)` where membership in H disagrees with the θ test.
    pub fn reconstruction_violations(&self) -> Vec<(usize, usize)> {
        let d = &self.decomposition;
        let mut bad = Vec::new();
        for a in d.g1().elements() {
            for b in d.g2().elements() {
                if d.h().contains(d.product().pair(a, b)) != d.reconstructs(a, b) {
                    bad.push((a, b));
                }
            }
        }
        bad
    }

    /// Checks `g = k(g)·rep_{j(g)}`, `j(ab) = j(rep_{j(a)}·b)` and
    /// `k(ab) = k(a)·k(rep_{j(a)}·b)` on both sides; returns a message per
    /// failure.
    pub fn factorisation_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for (side, g, reps) in [(Side::One, self.g1(), self.j1.reps()), (Side::Two, self.g2(), self.j2.reps())] {
            for a in g.elements() {
                let fa = self.factor(side, a);
                if g.mul(fa.k, reps[fa.j]) != a {
                    bad.push(format!("{side:?}: {a} != k·rep"));
                }
                for b in g.elements() {
                    let fab = self.factor(side, g.mul(a, b));
                    let fr = self.factor(side, g.mul(reps[fa.j], b));
                    if fab.j != fr.j || fab.k != g.mul(fa.k, fr.k) {
                        bad.push(format!("{side:?}: identities fail at ({a}, {b})"));
                    }
                }
            }
        }
        bad
    }

    pub fn factor(&self, side: Side, g: usize) -> Factorization {
        let (grp, cosets) = match side {
            Side::One => (self.g1(), &self.j1),
            Side::Two => (self.g2(), &self.j2),
        };
        let j = cosets.class(g).expect("cosets cover the group");
        let k = grp.mul(g, grp.inv(cosets.reps()[j]));
        Factorization { k, j }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, klein4, subgroups_two_generated, symmetric};
    use proptest::prelude::*;

    fn sec5() -> GeneratingData {
        GeneratingData::from_pairs(&cyclic(8).unwrap(), &cyclic(4).unwrap(), &[(2, 2)]).unwrap()
    }

    #[test]
    fn sec5_decomposition() {
        let gd = sec5();
        let d = gd.decomposition();
        assert_eq!(d.pi1().members(), &[0, 2, 4, 6]);
        assert_eq!(d.iota1().members(), &[0, 4]);
        assert_eq!(d.pi2().members(), &[0, 2]);
        assert_eq!(d.iota2().members(), &[0]);
        assert_eq!(d.q1().reps(), &[0, 2]);
        assert_eq!(d.q2().reps(), &[0, 2]);
        assert_eq!(d.theta(), &[0, 1]);
    }

    #[test]
    fn sec5_generating_data() {
        let gd = sec5();
        assert_eq!(gd.j1().reps(), &[0, 1, 2, 3]);
        assert_eq!(gd.iota1_generators(), &[4]);
        assert_eq!(gd.i1().len(), 4);
        let mut r = gd.r_elements();
        r.sort();
        assert_eq!(r, vec![1, 2, 3, 4]);
        assert_eq!(gd.j_pi1(), &[0, 2]);
        assert_eq!(gd.j2().reps(), &[0, 1]);
        assert_eq!(gd.pi2_generators(), &[2]);
        assert_eq!(gd.i2().len(), 2);
        let mut s = gd.s_elements();
        s.sort();
        assert_eq!(s, vec![1, 2]);
    }

    #[test]
    fn factor_examples() {
        let gd = sec5();
        assert_eq!(gd.factor(Side::Two, 3), Factorization { k: 2, j: 1 });
        assert_eq!(gd.factor(Side::One, 0), Factorization { k: 0, j: 0 });
        assert_eq!(gd.factor(Side::One, 7), Factorization { k: 4, j: 3 });
        // Exhaustive: the factorisation is the unique (k, j) with g = k·r_j.
        let g1 = gd.g1();
        for g in g1.elements() {
            let hits: Vec<_> = gd
                .decomposition()
                .iota1()
                .members()
                .iter()
                .flat_map(|&k| (0..gd.j1().len()).map(move |j| (k, j)))
                .filter(|&(k, j)| g1.mul(k, gd.j1().reps()[j]) == g)
                .collect();
            let f = gd.factor(Side::One, g);
            assert_eq!(hits, vec![(f.k, f.j)]);
        }
    }

    #[test]
    fn full_product_has_trivial_quotients() {
        let z2 = cyclic(2).unwrap();
        let z3 = cyclic(3).unwrap();
        let p = DirectProduct::new(&z2, &z3).unwrap();
        let d = GoursatDecomposition::new(&p, &p.group().whole()).unwrap();
        assert_eq!(d.q1().len(), 1);
        assert_eq!(d.theta(), &[0]);
    }

    #[test]
    fn diagonal_of_z2_squared() {
        let z2 = cyclic(2).unwrap();
        let p = DirectProduct::new(&z2, &z2).unwrap();
        let h = p.subgroup_from_pairs(&[(1, 1)]).unwrap();
        // Brute-force images: the pairs in H.
        let pairs: Vec<_> = h.members().iter().map(|&x| p.unpair(x)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
        let d = GoursatDecomposition::new(&p, &h).unwrap();
        assert_eq!(d.pi1().members(), &[0, 1]);
        assert_eq!(d.iota1().members(), &[0]);
        assert_eq!(d.theta(), &[0, 1]);
    }

    #[test]
    fn trivial_h_in_klein_square() {
        let z2 = cyclic(2).unwrap();
        let gd = GeneratingData::from_pairs(&z2, &z2, &[]).unwrap();
        // ι₁⁻¹(H) is trivial: R = {1} plus identity padding.
        assert_eq!(gd.j1().reps(), &[0, 1]);
        assert_eq!(gd.iota1_generators(), &[0]);
        assert_eq!(gd.i1().len(), 2);
        assert_eq!(subgroup_closure(gd.g1(), &gd.r_elements()).unwrap().len(), 2);
    }

    #[test]
    fn whole_kernel_pads_with_identities() {
        let z2 = cyclic(2).unwrap();
        let gd = GeneratingData::from_pairs(&z2, &z2, &[(1, 0)]).unwrap();
        assert_eq!(gd.decomposition().iota1().members(), &[0, 1]);
        assert_eq!(gd.j1().reps(), &[0]);
        assert_eq!(gd.iota1_generators(), &[1, 0]);
        assert_eq!(subgroup_closure(gd.g1(), &gd.r_elements()).unwrap().len(), 2);
    }

    #[test]
    fn label_names_round_trip() {
        for l in [Label::Iota1(0), Label::Coset1(3), Label::Pi2(1), Label::Coset2(2), Label::Theta] {
            assert_eq!(Label::parse(&l.to_string()).unwrap(), l);
        }
        assert!(Label::parse("R.x1").is_err());
        assert!(Label::parse("nope").is_err());
    }

    #[test]
    fn rejects_non_subgroup() {
        let z2 = cyclic(2).unwrap();
        let p = DirectProduct::new(&z2, &z2).unwrap();
        let bad = p.group().subset([0, 1]).unwrap();
        let bad2 = p.group().subset([1]).unwrap();
        assert!(GoursatDecomposition::new(&p, &bad).is_ok());
        assert_eq!(GoursatDecomposition::new(&p, &bad2).unwrap_err(), Error::NotASubgroup);
    }

    fn check_factorisation_identities(gd: &GeneratingData) {
        assert!(gd.factorisation_violations().is_empty());
        assert!(gd.reconstruction_violations().is_empty());
        // Direct restatement, independent of the checker above.
        for (side, g) in [(Side::One, gd.g1()), (Side::Two, gd.g2())] {
            let reps = match side {
                Side::One => gd.j1().reps(),
                Side::Two => gd.j2().reps(),
            };
            for a in g.elements() {
                let fa = gd.factor(side, a);
                assert_eq!(g.mul(fa.k, reps[fa.j]), a);
                for b in g.elements() {
                    let fab = gd.factor(side, g.mul(a, b));
                    let fr = gd.factor(side, g.mul(reps[fa.j], b));
                    assert_eq!(fab.j, fr.j);
                    assert_eq!(fab.k, g.mul(fa.k, fr.k));
                }
            }
        }
    }

    #[test]
    fn factorisation_identities_on_all_subgroups_of_small_products() {
        let groups = [cyclic(2).unwrap(), cyclic(4).unwrap(), klein4(), symmetric(3).unwrap()];
        for g1 in &groups {
            for g2 in &groups {
                if g1.order() * g2.order() > 16 {
                    continue;
                }
                let p = DirectProduct::new(g1, g2).unwrap();
                for h in subgroups_two_generated(p.group()) {
                    let gd = GeneratingData::new(GoursatDecomposition::new(&p, &h).unwrap()).unwrap();
                    check_factorisation_identities(&gd);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn theta_reconstructs_random_subgroups(
            n1 in 1usize..7, n2 in 1usize..7,
            gens in proptest::collection::vec((0usize..6, 0usize..6), 0..3),
        ) {
            let (g1, g2) = (cyclic(n1).unwrap(), cyclic(n2).unwrap());
            let gens: Vec<_> = gens.into_iter().map(|(a, b)| (a % n1, b % n2)).collect();
            let gd = GeneratingData::from_pairs(&g1, &g2, &gens).unwrap();
            let d = gd.decomposition();
            for a in g1.elements() {
                for b in g2.elements() {
                    prop_assert_eq!(d.h().contains(d.product().pair(a, b)), d.reconstructs(a, b));
                }
            }
            prop_assert!(gd.i1().len() >= 2 && gd.i2().len() >= 2);
            prop_assert_eq!(subgroup_closure(&g1, &gd.r_elements()).unwrap().len(), n1);
            prop_assert_eq!(subgroup_closure(&g2, &gd.s_elements()).unwrap().len(), n2);
        }
    }
}
