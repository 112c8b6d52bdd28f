//! Structural and correspondence checks for the Sullivan algebras of
//! digraphs.

use std::sync::Arc;

use arrowaut_core::cdga::{
    check_d_squared, check_witnesses, ellipticity_witnesses, enumerate_morphisms_constrained, generator_degrees,
    induced_algebra_morphism, AlgebraMorphism, Coeff, Monomial, SullivanPresentation,
};
use arrowaut_core::digraph::Digraph;
use arrowaut_core::graph::enumerate_digraph_homomorphisms;
use arrowaut_core::{Result, SearchBudget};
use serde_json::{json, Value};

use crate::report::Report;

/// Degree bookkeeping, d∘d = 0, the degree bases at |x_v| and |z|, and the
/// ellipticity witnesses.
pub fn structure_checks(p: &SullivanPresentation, report: &mut Report) -> Result<()> {
    let tag = format!("{} n={}", p.digraph().name(), p.n());
    let problems = p.check_degrees()?;
    report.check(
        format!("cdga.degrees[{tag}]"),
        problems.is_empty(),
        problems.first().cloned().unwrap_or_else(|| "parity and degree +1 hold".into()),
    );

    let residues = check_d_squared(p)?;
    let names = p.names();
    report.check(
        format!("cdga.d_squared[{tag}]"),
        residues.is_empty(),
        residues
            .first()
            .map_or("dd vanishes on every generator".into(), |(g, r)| format!("dd{g} = {}", r.render(&names))),
    );

    let [.., dxv, dz] = generator_degrees(p.n())?;
    let n = p.digraph().num_vertices();
    let x2_power = u32::try_from(5 * p.n() + 3).expect("small exponent");
    let mut want: Vec<Monomial> = (0..n).map(|v| Monomial::even_power(p.vertex_generator(v), 1)).collect();
    want.push(Monomial::even_power(1, x2_power));
    want.sort();
    let got = p.basis_at_degree(dxv)?;
    report.check(format!("cdga.basis_xv[{tag}]"), got == want, format!("{} monomials in degree {dxv}", got.len()));

    let mut want: Vec<Monomial> = vec![Monomial::odd_generator(5)];
    want.extend(
        p.digraph().edges().iter().map(|&(v, w)| Monomial::odd_generator(p.edge_generator(v, w).expect("edge"))),
    );
    want.sort();
    let got = p.basis_at_degree(dz)?;
    report.check(format!("cdga.basis_z[{tag}]"), got == want, format!("{} monomials in degree {dz}", got.len()));

    let witnesses = ellipticity_witnesses(p)?;
    for (name, residue) in check_witnesses(p, &witnesses)? {
        report.check(
            format!("cdga.witness[{tag}] {name}"),
            residue.is_zero(),
            if residue.is_zero() { "identity holds".into() } else { format!("residue {}", residue.render(&names)) },
        );
    }
    Ok(())
}

/// Compares constrained enumeration with {zero} ∪ {ℳₙ(σ)} for σ from the
/// homomorphism search, and checks that linear parts are pairwise distinct.
/// Returns the enumerated morphisms.
pub fn correspondence_checks(
    a: &Digraph,
    b: &Digraph,
    n: u64,
    coeffs: &[Coeff],
    budget: &SearchBudget,
    report: &mut Report,
) -> Result<Vec<AlgebraMorphism>> {
    let tag = format!("{}->{} n={n}", a.name(), b.name());
    let pa = Arc::new(SullivanPresentation::new(a, n)?);
    let pb = Arc::new(SullivanPresentation::new(b, n)?);
    let homs = enumerate_digraph_homomorphisms(a, b, budget)?;
    let mut expected: Vec<AlgebraMorphism> =
        homs.iter().map(|s| induced_algebra_morphism(s, pa.clone(), pb.clone())).collect::<Result<_>>()?;
    expected.push(AlgebraMorphism::zero(pa.clone(), pb.clone()));
    let found = enumerate_morphisms_constrained(pa, pb, coeffs, budget)?;
    let same = found.len() == expected.len() && expected.iter().all(|f| found.contains(f));
    report.check(
        format!("cdga.correspondence[{tag}]"),
        same,
        format!("{} morphisms found, {} homomorphisms plus zero expected", found.len(), homs.len()),
    );
    let mut linear: Vec<_> = found.iter().map(AlgebraMorphism::linear_part).collect();
    linear.sort();
    linear.dedup();
    report.check(
        format!("cdga.linear_parts[{tag}]"),
        linear.len() == found.len(),
        format!("{} distinct linear parts among {} morphisms", linear.len(), found.len()),
    );
    Ok(found)
}

/// ℳₙ(τ∘σ) = ℳₙ(τ)∘ℳₙ(σ), ℳₙ(id) = id, and σ ↦ ℳₙ(σ) injective, over all
/// composable pairs of homomorphisms among `graphs`.
pub fn functoriality_checks(graphs: &[Digraph], n: u64, budget: &SearchBudget, report: &mut Report) -> Result<()> {
    let pres: Vec<Arc<SullivanPresentation>> =
        graphs.iter().map(|g| SullivanPresentation::new(g, n).map(Arc::new)).collect::<Result<_>>()?;
    let mut homs = vec![vec![Vec::new(); graphs.len()]; graphs.len()];
    for (i, a) in graphs.iter().enumerate() {
        for (j, b) in graphs.iter().enumerate() {
            homs[i][j] = enumerate_digraph_homomorphisms(a, b, budget)?;
        }
    }
    let (mut compositions, mut failures) = (0usize, Vec::new());
    for i in 0..graphs.len() {
        let id: Vec<usize> = (0..graphs[i].num_vertices()).collect();
        if induced_algebra_morphism(&id, pres[i].clone(), pres[i].clone())?
            != AlgebraMorphism::identity(pres[i].clone())
        {
            failures.push(format!("identity of {}", graphs[i].name()));
        }
        for j in 0..graphs.len() {
            let induced: Vec<AlgebraMorphism> = homs[i][j]
                .iter()
                .map(|s| induced_algebra_morphism(s, pres[i].clone(), pres[j].clone()))
                .collect::<Result<_>>()?;
            for x in 0..induced.len() {
                for y in x + 1..induced.len() {
                    if induced[x] == induced[y] {
                        failures.push(format!("{:?} and {:?} induce the same morphism", homs[i][j][x], homs[i][j][y]));
                    }
                }
            }
            for k in 0..graphs.len() {
                for (s, fs) in homs[i][j].iter().zip(&induced) {
                    for t in &homs[j][k] {
                        let ts: Vec<usize> = s.iter().map(|&v| t[v]).collect();
                        let direct = induced_algebra_morphism(&ts, pres[i].clone(), pres[k].clone())?;
                        let ft = induced_algebra_morphism(t, pres[j].clone(), pres[k].clone())?;
                        compositions += 1;
                        if ft.compose(fs)? != direct {
                            failures.push(format!(
                                "{} -> {} -> {}",
                                graphs[i].name(),
                                graphs[j].name(),
                                graphs[k].name()
                            ));
                        }
                    }
                }
            }
        }
    }
    report.check(
        format!("cdga.functoriality n={n}"),
        failures.is_empty(),
        failures
            .first()
            .cloned()
            .unwrap_or_else(|| format!("{compositions} compositions, identities and injectivity hold")),
    );
    Ok(())
}

/// Morphisms with the coefficient set used, as written by `cdga homs`.
pub fn morphisms_json(found: &[AlgebraMorphism], coeffs: &[Coeff]) -> Value {
    json!({
        "coefficient_set": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "morphisms": found.iter().map(AlgebraMorphism::to_json).collect::<Vec<_>>(),
    })
}
