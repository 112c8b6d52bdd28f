use std::sync::Arc;

use super::{AuxVertex, RelMorphism, RelSystem, VertexId};
use crate::error::{Error, Result};
use crate::goursat::{GeneratingData, Label, Side};
use crate::group::{subgroup_closure, FiniteGroup};

/// `Cay(G, S)`: an `i`-edge `g → s_i·g` for every element `g`.
pub fn cayley_diagram(g: &FiniteGroup, labelled_gens: &[(String, usize)]) -> Result<RelSystem> {
    let gens: Vec<usize> = labelled_gens.iter().map(|&(_, s)| s).collect();
    if subgroup_closure(g, &gens)?.len() != g.order() {
        return Err(Error::NotGenerating);
    }
    let vertices = g.elements().map(VertexId::Elem).collect();
    let labels = labelled_gens.iter().map(|(l, _)| l.clone()).collect();
    let mut s = RelSystem::new(vertices, labels)?;
    for (l, &(_, gen)) in labelled_gens.iter().enumerate() {
        for x in g.elements() {
            s.add_edge_idx(l, x, g.mul(gen, x))?;
        }
    }
    Ok(s)
}

fn label_names(gd: &GeneratingData) -> Vec<String> {
    gd.labels().iter().map(ToString::to_string).collect()
}

fn class_vertex(gd: &GeneratingData, class: usize) -> AuxVertex {
    AuxVertex::Class(gd.decomposition().q1().reps()[class])
}

fn has_sink(gd: &GeneratingData) -> bool {
    gd.decomposition().pi1().len() != gd.g1().order()
}

fn aux_vertices(gd: &GeneratingData) -> Vec<AuxVertex> {
    let mut v: Vec<AuxVertex> = (0..gd.decomposition().q1().len()).map(|c| class_vertex(gd, c)).collect();
    if has_sink(gd) {
        v.push(AuxVertex::Sink);
    }
    v
}

/// The I₁-labelled edges of the auxiliary system on the classes of
/// `π₁(H)/ι₁⁻¹(H)` and the extra vertex `s`.
fn aux_edges(gd: &GeneratingData) -> Vec<(Label, AuxVertex, AuxVertex)> {
    let d = gd.decomposition();
    let q1 = d.q1();
    let classes: Vec<usize> = (0..q1.len()).collect();
    let sink = has_sink(gd);
    let mut out = Vec::new();
    for label in gd.i1() {
        match label {
            Label::Iota1(_) => {
                out.extend(classes.iter().map(|&c| (label, class_vertex(gd, c), class_vertex(gd, c))));
            }
            Label::Coset1(j) if gd.j_pi1().contains(&j) => {
                let r = gd.j1().reps()[j];
                for &c in &classes {
                    let to = q1.class(gd.g1().mul(r, q1.reps()[c])).expect("r_j ∈ π₁(H)");
                    out.push((label, class_vertex(gd, c), class_vertex(gd, to)));
                }
            }
            Label::Coset1(_) => {
                for &c in &classes {
                    out.push((label, class_vertex(gd, c), AuxVertex::Sink));
                    out.push((label, AuxVertex::Sink, class_vertex(gd, c)));
                }
            }
            _ => unreachable!("I₁ holds only side-one labels"),
        }
        if sink {
            out.push((label, AuxVertex::Sink, AuxVertex::Sink));
        }
    }
    out
}

/// The auxiliary system; it carries the full label set, with I₂ and θ
/// empty.
pub fn build_aux_system(gd: &GeneratingData) -> Result<RelSystem> {
    let vertices = aux_vertices(gd).into_iter().map(VertexId::Aux).collect();
    let mut s = RelSystem::new(vertices, label_names(gd))?;
    for (l, a, b) in aux_edges(gd) {
        s.add_edge(&l.to_string(), &VertexId::Aux(a), &VertexId::Aux(b))?;
    }
    Ok(s)
}

/// `Cay(G₁, R)` over the full label set.
pub fn build_source_system(gd: &GeneratingData) -> Result<RelSystem> {
    let gens: Vec<(String, usize)> = gd.i1().into_iter().map(|l| (l.to_string(), gd.element_of(l))).collect();
    cayley_diagram(gd.g1(), &gens)?.with_labels(&label_names(gd))
}

/// `Cay(G₂, S)` joined by θ-edges to one copy of the auxiliary system per
/// coset of π₂(H).
pub fn build_target_system(gd: &GeneratingData) -> Result<RelSystem> {
    let g2 = gd.g2();
    let d = gd.decomposition();
    let aux = aux_vertices(gd);
    let mut vertices: Vec<VertexId> = g2.elements().map(VertexId::Elem).collect();
    for j in 0..gd.j2().len() {
        vertices.extend(aux.iter().map(|&a| VertexId::Copy(j, a)));
    }
    let mut s = RelSystem::new(vertices, label_names(gd))?;
    for label in gd.i2() {
        let gen = gd.element_of(label);
        for g in g2.elements() {
            s.add_edge(&label.to_string(), &VertexId::Elem(g), &VertexId::Elem(g2.mul(gen, g)))?;
        }
    }
    for g in g2.elements() {
        let f = gd.factor(Side::Two, g);
        let class = d.theta_inverse(d.q2().class(f.k).expect("k₂(g) ∈ π₂(H)"));
        s.add_edge("theta", &VertexId::Elem(g), &VertexId::Copy(f.j, class_vertex(gd, class)))?;
    }
    let edges = aux_edges(gd);
    for j in 0..gd.j2().len() {
        for &(l, a, b) in &edges {
            s.add_edge(&l.to_string(), &VertexId::Copy(j, a), &VertexId::Copy(j, b))?;
        }
    }
    Ok(s)
}

/// `φ(g) = (0, [g])` for `g ∈ π₁(H)`, otherwise `(0, s)`.
pub fn build_arrow(gd: &GeneratingData, source: Arc<RelSystem>, target: Arc<RelSystem>) -> Result<RelMorphism> {
    let q1 = gd.decomposition().q1();
    RelMorphism::from_fn(source, target, |v| match *v {
        VertexId::Elem(g) => match q1.class(g) {
            Some(c) => VertexId::Copy(0, class_vertex(gd, c)),
            None => VertexId::Copy(0, AuxVertex::Sink),
        },
        _ => v.clone(),
    })
}

/// The automorphism of the target system induced by `g̃ ∈ G₂`.
pub fn induced_target_automorphism(gd: &GeneratingData, target: Arc<RelSystem>, gt: usize) -> Result<RelMorphism> {
    let g2 = gd.g2();
    g2.check_element(gt)?;
    let d = gd.decomposition();
    let q1 = d.q1();
    let ginv = g2.inv(gt);
    let f = |v: &VertexId| -> VertexId {
        match *v {
            VertexId::Elem(g) => VertexId::Elem(g2.mul(g, ginv)),
            VertexId::Copy(j, a) => {
                let fac = gd.factor(Side::Two, g2.mul(gd.j2().reps()[j], ginv));
                let a = match a {
                    AuxVertex::Class(rep) => {
                        let t = d.theta_inverse(d.q2().class(fac.k).expect("k₂ ∈ π₂(H)"));
                        let c = d.quotient_mul(1, q1.class(rep).expect("class rep"), t);
                        class_vertex(gd, c)
                    }
                    AuxVertex::Sink => AuxVertex::Sink,
                };
                VertexId::Copy(fac.j, a)
            }
            _ => v.clone(),
        }
    };
    let m = RelMorphism::from_fn(target.clone(), target, f)?;
    let mut seen = vec![false; m.map().len()];
    if m.map().iter().any(|&y| std::mem::replace(&mut seen[y], true)) {
        return Err(Error::MorphismCheckFailed(format!("Φ_{gt} is not bijective")));
    }
    Ok(m)
}

/// Everything the relational construction produces for one subgroup.
#[derive(Clone, Debug)]
pub struct RelPipeline {
    pub data: GeneratingData,
    pub aux: Arc<RelSystem>,
    pub source: Arc<RelSystem>,
    pub target: Arc<RelSystem>,
    pub phi: RelMorphism,
}

impl RelPipeline {
    pub fn new(data: GeneratingData) -> Result<Self> {
        let aux = Arc::new(build_aux_system(&data)?);
        let source = Arc::new(build_source_system(&data)?);
        let target = Arc::new(build_target_system(&data)?);
        let phi = build_arrow(&data, source.clone(), target.clone())?;
        Ok(Self { data, aux, source, target, phi })
    }
}
