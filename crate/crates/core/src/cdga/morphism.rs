use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{Map, Value};

use super::poly::{coeff, Coeff, GradedPoly, Monomial};
use super::presentation::{SullivanPresentation, X1, X2, Y1, Y2, Y3, Z};
use crate::budget::SearchBudget;
use crate::error::{Error, Result};

/// An algebra map determined by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    source: Arc<SullivanPresentation>,
    target: Arc<SullivanPresentation>,
    images: Vec<GradedPoly>,
}

/// Substitutes generator images into `p`, extending multiplicatively.
fn substitute(target: &SullivanPresentation, images: &[Option<GradedPoly>], p: &GradedPoly) -> Result<GradedPoly> {
    let space = target.space();
    let image = |g: u32| -> Result<&GradedPoly> {
        images[g as usize]
            .as_ref()
            .ok_or_else(|| Error::InternalInconsistency(format!("generator {g} has no image yet")))
    };
    let mut out = GradedPoly::zero(space);
    for (m, c) in p.terms() {
        let mut acc = GradedPoly::one(space);
        for &(g, k) in m.even() {
            acc = acc.mul(&image(g)?.pow(k)?)?;
        }
        for &g in m.odd() {
            acc = acc.mul(image(g)?)?;
        }
        out = out.add(&acc.scale(c))?;
    }
    Ok(out)
}

impl AlgebraMorphism {
    /// Wraps images without checking; see [`AlgebraMorphism::verify`].
    pub fn new(
        source: Arc<SullivanPresentation>,
        target: Arc<SullivanPresentation>,
        images: Vec<GradedPoly>,
    ) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::InvalidPresentation("one image per source generator is required".into()));
        }
        if images.iter().any(|p| p.space() != target.space()) {
            return Err(Error::MixedPresentation);
        }
        Ok(Self { source, target, images })
    }

    pub fn identity(p: Arc<SullivanPresentation>) -> Self {
        let images = (0..p.generators().len() as u32).map(|g| p.gen(g)).collect();
        Self { source: p.clone(), target: p, images }
    }

    /// Every generator goes to 0.
    pub fn zero(source: Arc<SullivanPresentation>, target: Arc<SullivanPresentation>) -> Self {
        let images = vec![GradedPoly::zero(target.space()); source.generators().len()];
        Self { source, target, images }
    }

    pub fn source(&self) -> &Arc<SullivanPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SullivanPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[GradedPoly] {
        &self.images
    }

    pub fn image(&self, g: u32) -> &GradedPoly {
        &self.images[g as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(GradedPoly::is_zero)
    }

    pub fn apply(&self, p: &GradedPoly) -> Result<GradedPoly> {
        if p.space() != self.source.space() {
            return Err(Error::MixedPresentation);
        }
        let images: Vec<Option<GradedPoly>> = self.images.iter().cloned().map(Some).collect();
        substitute(&self.target, &images, p)
    }

    /// Checks that images preserve degree and that `f∘d = d∘f` on every
    /// generator.
    pub fn verify(&self) -> Result<()> {
        let degrees = self.target.degrees();
        for (i, g) in self.source.generators().iter().enumerate() {
            let img = &self.images[i];
            match img.homogeneous_degree(&degrees)? {
                None => {}
                Some(d) if d == g.degree => {}
                Some(d) => {
                    return Err(Error::CommutationFailed(format!(
                        "image of {} has degree {d}, not {}",
                        g.name, g.degree
                    )))
                }
            }
            let lhs = self.apply(self.source.differential(i as u32))?;
            let rhs = self.target.apply_derivation(img)?;
            if lhs != rhs {
                return Err(Error::CommutationFailed(g.name.clone()));
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if first.target.space() != self.source.space() {
            return Err(Error::MixedPresentation);
        }
        let images = first.images.iter().map(|p| self.apply(p)).collect::<Result<_>>()?;
        Ok(Self { source: first.source.clone(), target: self.target.clone(), images })
    }

    /// Coefficients of single target generators in each image; one row per
    /// source generator.
    pub fn linear_part(&self) -> Vec<Vec<Coeff>> {
        let targets: Vec<Monomial> = (0..self.target.generators().len() as u32)
            .map(|t| self.target.gen(t).terms().keys().next().expect("generator monomial").clone())
            .collect();
        self.images.iter().map(|img| targets.iter().map(|m| img.coefficient(m)).collect()).collect()
    }

    /// Images keyed by generator name, each in the polynomial JSON format.
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        for (g, img) in self.source.generators().iter().zip(&self.images) {
            out.insert(g.name.clone(), self.target.poly_to_json(img));
        }
        Value::Object(out)
    }

    pub fn render(&self) -> String {
        let names = self.target.names();
        let mut out = String::new();
        for (g, img) in self.source.generators().iter().zip(&self.images) {
            out.push_str(&format!("{} -> {}\n", g.name, img.render(&names)));
        }
        out
    }

    fn sort_key(&self) -> Vec<Vec<(Monomial, Coeff)>> {
        self.images.iter().map(|p| p.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect()).collect()
    }
}

/// The morphism induced by a digraph homomorphism `sigma`: base generators
/// are fixed, `x_v ↦ x_{σv}` and `z_(v,w) ↦ z_(σv,σw)`.
pub fn induced_algebra_morphism(
    sigma: &[usize],
    source: Arc<SullivanPresentation>,
    target: Arc<SullivanPresentation>,
) -> Result<AlgebraMorphism> {
    if source.n() != target.n() {
        return Err(Error::ParameterMismatch(source.n(), target.n()));
    }
    source.digraph().check_homomorphism(target.digraph(), sigma)?;
    let mut images: Vec<GradedPoly> = (0..6).map(|g| target.gen(g)).collect();
    for &s in sigma {
        images.push(target.gen(target.vertex_generator(s)));
    }
    for &(v, w) in source.digraph().edges() {
        let e = target.edge_generator(sigma[v], sigma[w]).expect("homomorphism maps edges to edges");
        images.push(target.gen(e));
    }
    let f = AlgebraMorphism { source, target, images };
    f.verify()?;
    Ok(f)
}

/// A monomial with its nonzero entries `(column, coefficient)`.
type Row<'a> = (&'a Monomial, &'a Vec<(usize, &'a Coeff)>);

/// Solutions `c ∈ coeffs^k` of `Σ cᵢ·colᵢ = rhs`, found column by column;
/// each monomial row is checked as soon as its last column is fixed.
fn solve_over_set(
    cols: &[GradedPoly],
    rhs: &GradedPoly,
    coeffs: &[Coeff],
    budget: &SearchBudget,
) -> Result<Vec<Vec<Coeff>>> {
    let mut rows: BTreeMap<&Monomial, Vec<(usize, &Coeff)>> = BTreeMap::new();
    for (i, col) in cols.iter().enumerate() {
        for (m, c) in col.terms() {
            rows.entry(m).or_default().push((i, c));
        }
    }
    for m in rhs.terms().keys() {
        if !rows.contains_key(m) {
            return Ok(Vec::new());
        }
    }
    let mut due: Vec<Vec<Row>> = vec![Vec::new(); cols.len()];
    for (m, entries) in &rows {
        let last = entries.iter().map(|&(i, _)| i).max().expect("nonempty row");
        due[last].push((m, entries));
    }
    let mut out = Vec::new();
    let mut chosen: Vec<Coeff> = Vec::with_capacity(cols.len());
    fn go(
        at: usize,
        due: &[Vec<Row>],
        rhs: &GradedPoly,
        coeffs: &[Coeff],
        chosen: &mut Vec<Coeff>,
        out: &mut Vec<Vec<Coeff>>,
        budget: &SearchBudget,
    ) -> Result<()> {
        if at == due.len() {
            out.push(chosen.clone());
            return Ok(());
        }
        for c in coeffs {
            budget.tick()?;
            chosen.push(c.clone());
            let ok = due[at].iter().all(|(m, entries)| {
                let lhs = entries.iter().fold(Coeff::zero(), |acc, &(i, d)| acc + &chosen[i] * d);
                lhs == rhs.coefficient(m)
            });
            if ok {
                go(at + 1, due, rhs, coeffs, chosen, out, budget)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    go(0, &due, rhs, coeffs, &mut chosen, &mut out, budget)?;
    Ok(out)
}

/// Every morphism whose generator images are combinations of the target's
/// degree basis with coefficients from `coeffs`. Survivors are re-verified
/// and returned in a canonical order.
pub fn enumerate_morphisms_constrained(
    source: Arc<SullivanPresentation>,
    target: Arc<SullivanPresentation>,
    coeffs: &[Coeff],
    budget: &SearchBudget,
) -> Result<Vec<AlgebraMorphism>> {
    if source.n() != target.n() {
        return Err(Error::ParameterMismatch(source.n(), target.n()));
    }
    let mut coeffs = coeffs.to_vec();
    coeffs.sort();
    coeffs.dedup();

    // Generators in an order where each differential only involves
    // generators already placed.
    let mut order: Vec<u32> = vec![X1, X2, Y1, Y2, Y3, Z];
    let g = source.digraph();
    for v in 0..g.num_vertices() {
        order.push(source.vertex_generator(v));
        for &(a, b) in g.edges() {
            if a.max(b) == v {
                order.push(source.edge_generator(a, b).expect("edge generator"));
            }
        }
    }

    // Candidate columns per distinct degree.
    let mut columns: BTreeMap<u64, (Vec<GradedPoly>, Vec<GradedPoly>)> = BTreeMap::new();
    for gen in source.generators() {
        if columns.contains_key(&gen.degree) {
            continue;
        }
        let basis: Vec<GradedPoly> = target
            .basis_at_degree(gen.degree)?
            .into_iter()
            .map(|m| GradedPoly::monomial(target.space(), m, coeff(1)))
            .collect();
        let ds = basis.iter().map(|b| target.apply_derivation(b)).collect::<Result<Vec<_>>>()?;
        columns.insert(gen.degree, (basis, ds));
    }

    let mut images: Vec<Option<GradedPoly>> = vec![None; source.generators().len()];
    let mut found = Vec::new();
    struct Ctx<'a> {
        source: &'a SullivanPresentation,
        target: &'a SullivanPresentation,
        order: &'a [u32],
        columns: &'a BTreeMap<u64, (Vec<GradedPoly>, Vec<GradedPoly>)>,
        coeffs: &'a [Coeff],
        budget: &'a SearchBudget,
    }
    fn go(at: usize, cx: &Ctx, images: &mut Vec<Option<GradedPoly>>, found: &mut Vec<Vec<GradedPoly>>) -> Result<()> {
        cx.budget.tick()?;
        let Some(&g) = cx.order.get(at) else {
            found.push(images.iter().map(|p| p.clone().expect("all assigned")).collect());
            return Ok(());
        };
        let (basis, ds) = &cx.columns[&cx.source.generators()[g as usize].degree];
        let rhs = substitute(cx.target, images, cx.source.differential(g))?;
        for sol in solve_over_set(ds, &rhs, cx.coeffs, cx.budget)? {
            let mut img = GradedPoly::zero(cx.target.space());
            for (c, b) in sol.iter().zip(basis) {
                if !c.is_zero() {
                    img = img.add(&b.scale(c))?;
                }
            }
            images[g as usize] = Some(img);
            go(at + 1, cx, images, found)?;
            images[g as usize] = None;
        }
        Ok(())
    }
    let cx = Ctx { source: &source, target: &target, order: &order, columns: &columns, coeffs: &coeffs, budget };
    go(0, &cx, &mut images, &mut found)?;

    let mut out = Vec::with_capacity(found.len());
    for images in found {
        let f = AlgebraMorphism { source: source.clone(), target: target.clone(), images };
        f.verify()?;
        out.push(f);
    }
    out.sort_by_cached_key(AlgebraMorphism::sort_key);
    Ok(out)
}

/// The default coefficient set `{−1, 0, 1}`.
pub fn default_coefficients() -> Vec<Coeff> {
    vec![coeff(-1), coeff(0), coeff(1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::graph::enumerate_digraph_homomorphisms;

    fn pres(name: &str, n: u64) -> Arc<SullivanPresentation> {
        Arc::new(SullivanPresentation::new(&Digraph::preset(name).unwrap(), n).unwrap())
    }

    #[test]
    fn identity_and_swap_on_two_cycle() {
        let p = pres("cycle:2", 1);
        let id = induced_algebra_morphism(&[0, 1], p.clone(), p.clone()).unwrap();
        assert_eq!(id, AlgebraMorphism::identity(p.clone()));
        let swap = induced_algebra_morphism(&[1, 0], p.clone(), p.clone()).unwrap();
        assert_eq!(swap.image(6), &p.gen(7));
        assert_eq!(swap.image(7), &p.gen(6));
        assert_eq!(swap.image(8), &p.gen(9));
        let lp = swap.linear_part();
        assert_eq!(lp[6][7], coeff(1));
        assert_eq!(lp[6][6], coeff(0));
        assert_eq!(swap.compose(&swap).unwrap(), id);
    }

    #[test]
    fn broken_images_fail_verification() {
        let p = pres("cycle:2", 1);
        let mut images: Vec<GradedPoly> = (0..p.generators().len() as u32).map(|g| p.gen(g)).collect();
        images[Y1 as usize] = images[Y1 as usize].scale(&coeff(2));
        let f = AlgebraMorphism::new(p.clone(), p.clone(), images).unwrap();
        assert_eq!(f.verify(), Err(Error::CommutationFailed("y1".into())));
        assert!(AlgebraMorphism::zero(p.clone(), p).verify().is_ok());
    }

    #[test]
    fn parameter_and_homomorphism_checks() {
        let (a, b) = (pres("cycle:2", 1), pres("cycle:2", 2));
        assert_eq!(induced_algebra_morphism(&[0, 1], a.clone(), b).unwrap_err(), Error::ParameterMismatch(1, 2));
        let c3 = pres("cycle:3", 1);
        // A 3-cycle cannot fold onto an edge pattern missing (1,2).
        assert!(matches!(induced_algebra_morphism(&[0, 1, 1], c3, a).unwrap_err(), Error::NotAHomomorphism(_)));
    }

    #[test]
    fn constrained_enumeration_small_cases() {
        let budget = SearchBudget::default();
        let c2 = pres("cycle:2", 1);
        let found = enumerate_morphisms_constrained(c2.clone(), c2.clone(), &default_coefficients(), &budget).unwrap();
        assert_eq!(found.len(), 3);
        assert!(found.iter().any(AlgebraMorphism::is_zero));
        assert!(found.contains(&AlgebraMorphism::identity(c2.clone())));

        let c3 = pres("cycle:3", 1);
        let found = enumerate_morphisms_constrained(c3.clone(), c3.clone(), &default_coefficients(), &budget).unwrap();
        assert_eq!(found.len(), 4);
    }

    #[test]
    fn correspondence_matches_homomorphism_oracle() {
        let budget = SearchBudget::default();
        for (a, b) in [("cycle:2", "bowtie"), ("cycle:3", "cycle:2"), ("bowtie", "cycle:2")] {
            let (pa, pb) = (pres(a, 1), pres(b, 1));
            let homs = enumerate_digraph_homomorphisms(pa.digraph(), pb.digraph(), &budget).unwrap();
            let mut expected: Vec<AlgebraMorphism> = homs
                .iter()
                .map(|s| induced_algebra_morphism(s, pa.clone(), pb.clone()).unwrap())
                .chain([AlgebraMorphism::zero(pa.clone(), pb.clone())])
                .collect();
            expected.sort_by_cached_key(AlgebraMorphism::sort_key);
            let found = enumerate_morphisms_constrained(pa, pb, &default_coefficients(), &budget).unwrap();
            assert_eq!(found, expected, "{a} -> {b}");
        }
    }

    #[test]
    fn json_names_generators() {
        let p = pres("cycle:2", 1);
        let f = induced_algebra_morphism(&[1, 0], p.clone(), p).unwrap();
        let j = f.to_json();
        assert_eq!(j["x_0"][0]["mono"]["x_1"], 1);
        assert_eq!(j["z_(0,1)"][0]["mono"]["z_(1,0)"], 1);
    }
}
