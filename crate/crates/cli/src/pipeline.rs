//! Building the arrow for (G₁, G₂, H), saving and loading its artifacts,
//! and verifying every claim about it by enumeration.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use arrowaut_core::goursat::GeneratingData;
use arrowaut_core::graph::{
    arrow_automorphism_group_graph, enumerate_graph_automorphisms, lift_morphism, replace, tree_family, GraphMorphism,
    SimpleGraph,
};
use arrowaut_core::group::{greedy_generators, FiniteGroup};
use arrowaut_core::iso::{is_isomorphism, isomorphism_search};
use arrowaut_core::relsys::{
    arrow_automorphism_group, automorphism_group, degree_report, enumerate_rel_automorphisms, AuxVertex, RelMorphism,
    RelPipeline, RelSystem, VertexId,
};
use arrowaut_core::{Error, Result, SearchBudget};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::{OrderClaim, Report};

/// The three groups and generating pairs of H, as written to `input.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Input {
    pub g1: FiniteGroup,
    pub g2: FiniteGroup,
    pub h_generators: Vec<(usize, usize)>,
}

impl Input {
    pub fn generating_data(&self) -> Result<GeneratingData> {
        GeneratingData::from_pairs(&self.g1, &self.g2, &self.h_generators)
    }

    /// Summary used as the `input` field of reports.
    pub fn summary(&self, gd: &GeneratingData) -> Value {
        json!({
            "g1": self.g1.name(),
            "g1_order": self.g1.order(),
            "g2": self.g2.name(),
            "g2_order": self.g2.order(),
            "h_generators": self.h_generators,
            "h_order": gd.decomposition().h().len(),
        })
    }
}

/// Relational artifacts, either freshly built or read back from disk.
#[derive(Clone, Debug)]
pub struct RelArtifacts {
    pub aux: Arc<RelSystem>,
    pub source: Arc<RelSystem>,
    pub target: Arc<RelSystem>,
    pub phi_pairs: Vec<(String, String)>,
}

impl RelArtifacts {
    pub fn from_pipeline(p: &RelPipeline) -> Self {
        Self { aux: p.aux.clone(), source: p.source.clone(), target: p.target.clone(), phi_pairs: p.phi.pairs() }
    }
}

/// Graph-level artifacts.
#[derive(Clone, Debug)]
pub struct GraphArtifacts {
    pub source: Arc<SimpleGraph>,
    pub target: Arc<SimpleGraph>,
    pub phi_pairs: Vec<(String, String)>,
}

/// Replaces both systems using one tree family over the full label set
/// and lifts the arrow.
pub fn build_graphs(p: &RelPipeline) -> Result<(GraphArtifacts, Value)> {
    let family = tree_family(p.target.labels())?;
    let rs = replace(p.source.clone(), &family)?;
    let rt = replace(p.target.clone(), &family)?;
    let lifted = lift_morphism(&p.phi, &rs, &rt)?;
    let pairs = name_pairs(&lifted);
    let gadgets = json!({ "source": rs, "target": rt });
    Ok((GraphArtifacts { source: rs.graph.clone(), target: rt.graph.clone(), phi_pairs: pairs }, gadgets))
}

fn name_pairs(f: &GraphMorphism) -> Vec<(String, String)> {
    let (s, t) = (f.source().names(), f.target().names());
    f.map().iter().enumerate().map(|(u, &v)| (s[u].clone(), t[v].clone())).collect()
}

fn graph_morphism_from_pairs(
    source: Arc<SimpleGraph>,
    target: Arc<SimpleGraph>,
    pairs: &[(String, String)],
) -> Result<GraphMorphism> {
    let mut map = vec![None; source.len()];
    for (a, b) in pairs {
        map[source.index_of(a)?] = Some(target.index_of(b)?);
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(u, m)| m.ok_or_else(|| Error::UnknownVertex(source.names()[u].clone())))
        .collect::<Result<Vec<_>>>()?;
    GraphMorphism::new(source, target, map)
}

fn write_json(dir: &Path, name: &str, v: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(dir.join(name), text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", dir.join(name).display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(dir: &Path, name: &str) -> Result<T> {
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Writes `input.json`, `goursat.json`, `aux.json`, `source.json`,
/// `target.json`, `phi.json`, and DOT renderings when asked.
pub fn save_relational(dir: &Path, input: &Input, p: &RelPipeline, dot: bool) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    write_json(dir, "input.json", input)?;
    write_json(dir, "goursat.json", p.data.decomposition())?;
    write_json(dir, "aux.json", &*p.aux)?;
    write_json(dir, "source.json", &*p.source)?;
    write_json(dir, "target.json", &*p.target)?;
    write_json(dir, "phi.json", &p.phi.pairs())?;
    if dot {
        for (name, s) in [("aux", &p.aux), ("source", &p.source), ("target", &p.target)] {
            std::fs::write(dir.join(format!("{name}.dot")), s.to_dot(name)).map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    Ok(())
}

/// Writes `source_graph.json`, `target_graph.json`, `graph_phi.json` and
/// `gadgets.json`, plus DOT files when asked.
pub fn save_graphs(dir: &Path, g: &GraphArtifacts, gadgets: &Value, dot: bool) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    write_json(dir, "source_graph.json", &*g.source)?;
    write_json(dir, "target_graph.json", &*g.target)?;
    write_json(dir, "graph_phi.json", &g.phi_pairs)?;
    write_json(dir, "gadgets.json", gadgets)?;
    if dot {
        for (name, s) in [("source_graph", &g.source), ("target_graph", &g.target)] {
            std::fs::write(dir.join(format!("{name}.dot")), s.to_dot(name)).map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    Ok(())
}

pub fn load_input(dir: &Path) -> Result<Input> {
    read_json(dir, "input.json")
}

pub fn load_relational(dir: &Path) -> Result<RelArtifacts> {
    Ok(RelArtifacts {
        aux: Arc::new(read_json(dir, "aux.json")?),
        source: Arc::new(read_json(dir, "source.json")?),
        target: Arc::new(read_json(dir, "target.json")?),
        phi_pairs: read_json(dir, "phi.json")?,
    })
}

/// `None` when no graph artifacts were saved.
pub fn load_graphs(dir: &Path) -> Result<Option<GraphArtifacts>> {
    if !dir.join("source_graph.json").exists() {
        return Ok(None);
    }
    Ok(Some(GraphArtifacts {
        source: Arc::new(read_json(dir, "source_graph.json")?),
        target: Arc::new(read_json(dir, "target_graph.json")?),
        phi_pairs: read_json(dir, "graph_phi.json")?,
    }))
}

fn claim(
    report: &mut Report,
    check: &str,
    object: &str,
    claimed: &FiniteGroup,
    found: &FiniteGroup,
    automorphisms: Value,
    budget: &SearchBudget,
) -> Result<()> {
    let iso = if claimed.order() == found.order() { isomorphism_search(claimed, found, budget)? } else { None };
    let ok = iso.as_ref().is_some_and(|m| is_isomorphism(claimed, found, m));
    report.check(
        check,
        ok,
        format!("{object}: {} automorphisms, claimed {} of order {}", found.order(), claimed.name(), claimed.order()),
    );
    report.claims.push(OrderClaim {
        object: object.into(),
        claimed_group: claimed.name().into(),
        claimed_order: claimed.order(),
        verified_order: found.order(),
        isomorphism: iso,
        automorphisms,
    });
    Ok(())
}

/// Goursat reconstruction and coset factorisation identities.
pub fn check_goursat(gd: &GeneratingData, report: &mut Report) {
    let bad = gd.reconstruction_violations();
    report.check(
        "goursat.reconstruction",
        bad.is_empty(),
        format!("{} pairs disagree with the theta membership test", bad.len()),
    );
    let bad = gd.factorisation_violations();
    report.check(
        "goursat.factorisation",
        bad.is_empty(),
        bad.first().cloned().unwrap_or_else(|| "k/j identities hold on both sides".into()),
    );
}

/// The closed-form vertex degrees of the source and target systems.
pub fn check_degrees(gd: &GeneratingData, art: &RelArtifacts, report: &mut Report) {
    let (i1, i2) = (gd.i1().len(), gd.i2().len());
    let iota2 = gd.decomposition().iota2().len();
    let src = degree_report(&art.source);
    let bad: Vec<String> =
        src.iter().filter(|e| e.degree != 2 * i1).map(|e| format!("{} has {}", e.vertex, e.degree)).collect();
    report.check(
        "degree.source",
        bad.is_empty(),
        detail(&bad, format!("all {} vertices have degree {}", src.len(), 2 * i1)),
    );

    let sink_degree =
        art.aux.vertex_index(&VertexId::Aux(AuxVertex::Sink)).ok().map(|s| degree_report(&art.aux)[s].degree);
    let (mut g2_bad, mut class_bad, mut sink_bad) = (Vec::new(), Vec::new(), Vec::new());
    for (v, e) in art.target.vertices().iter().zip(degree_report(&art.target)) {
        match v {
            VertexId::Elem(_) if e.degree != 2 * i2 + 1 => g2_bad.push(format!("{v} has {}", e.degree)),
            VertexId::Copy(_, AuxVertex::Class(_)) if e.degree != 2 * i1 + iota2 => {
                class_bad.push(format!("{v} has {}", e.degree))
            }
            VertexId::Copy(_, AuxVertex::Sink) if Some(e.degree) != sink_degree || e.degree < 2 * i1 => {
                sink_bad.push(format!("{v} has {}", e.degree))
            }
            VertexId::Aux(_) | VertexId::Named(_) => g2_bad.push(format!("unexpected vertex {v}")),
            _ => {}
        }
    }
    report.check(
        "degree.target.g2",
        g2_bad.is_empty(),
        detail(&g2_bad, format!("G2 vertices have degree {}", 2 * i2 + 1)),
    );
    report.check(
        "degree.target.cosets",
        class_bad.is_empty(),
        detail(&class_bad, format!("coset copies have degree {}", 2 * i1 + iota2)),
    );
    report.check(
        "degree.target.sink",
        sink_bad.is_empty(),
        detail(&sink_bad, "sink copies match the auxiliary sink".into()),
    );
}

fn detail(bad: &[String], ok: String) -> String {
    match bad.first() {
        Some(first) => format!("{first} ({} violations)", bad.len()),
        None => ok,
    }
}

fn h_group(gd: &GeneratingData) -> Result<FiniteGroup> {
    let d = gd.decomposition();
    let (h, embedding) = d.product().group().subgroup_as_group(d.h())?;
    let name = embedding.iter().map(|&p| format!("{:?}", d.product().unpair(p))).collect::<Vec<_>>().join(",");
    Ok(h.with_name(format!("H={{{name}}}")))
}

/// Relational claims: Aut(𝒢₁) ≅ G₁, Aut(𝒢₂) ≅ G₂, Aut(φ) ≅ H, plus the
/// Goursat and degree checks.
pub fn verify_relational(
    gd: &GeneratingData,
    art: &RelArtifacts,
    budget: &SearchBudget,
    report: &mut Report,
) -> Result<()> {
    let t = Instant::now();
    check_goursat(gd, report);
    check_degrees(gd, art, report);
    report.time("relational.checks", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let src = enumerate_rel_automorphisms(&art.source, budget)?;
    claim(report, "relational.aut_source", "source system", gd.g1(), &automorphism_group(&src)?, json!(src), budget)?;
    let tgt = enumerate_rel_automorphisms(&art.target, budget)?;
    claim(report, "relational.aut_target", "target system", gd.g2(), &automorphism_group(&tgt)?, json!(tgt), budget)?;
    match RelMorphism::from_pairs(art.source.clone(), art.target.clone(), &art.phi_pairs) {
        Ok(phi) => {
            report.check("relational.phi_is_morphism", true, "every labelled edge maps to an edge");
            let arrow = arrow_automorphism_group(&phi, budget)?;
            claim(report, "relational.aut_arrow", "arrow", &h_group(gd)?, &arrow.group, json!(arrow.pairs), budget)?;
        }
        Err(e) => report.check("relational.phi_is_morphism", false, e.to_string()),
    }
    report.time("relational.automorphisms", t.elapsed().as_secs_f64());
    Ok(())
}

/// Graph-level claims, plus the check that restricting graph automorphisms
/// to the original vertices gives exactly the relational ones.
pub fn verify_graphs(
    gd: &GeneratingData,
    rel: &RelArtifacts,
    g: &GraphArtifacts,
    budget: &SearchBudget,
    report: &mut Report,
) -> Result<()> {
    let t = Instant::now();
    for (name, sys, graph) in
        [("graph.originals.source", &rel.source, &g.source), ("graph.originals.target", &rel.target, &g.target)]
    {
        let n = sys.num_vertices();
        let names_ok =
            graph.len() >= n && sys.vertices().iter().enumerate().all(|(i, v)| graph.names()[i] == v.to_string());
        let deg_ok = (0..graph.len()).all(|v| (v < n) == (graph.degree(v) >= 4));
        report.check(
            name,
            names_ok && deg_ok,
            "originals come first and are exactly the vertices of degree at least 4",
        );
    }
    let src = enumerate_graph_automorphisms(&g.source, budget)?;
    claim(report, "graph.aut_source", "source graph", gd.g1(), &automorphism_group(&src)?, json!(src), budget)?;
    let tgt = enumerate_graph_automorphisms(&g.target, budget)?;
    claim(report, "graph.aut_target", "target graph", gd.g2(), &automorphism_group(&tgt)?, json!(tgt), budget)?;
    for (name, sys, auts) in
        [("graph.restriction.source", &rel.source, &src), ("graph.restriction.target", &rel.target, &tgt)]
    {
        let n = sys.num_vertices();
        let mut restricted: Vec<Vec<usize>> = auts.iter().map(|a| a[..n].to_vec()).collect();
        restricted.sort();
        restricted.dedup();
        let rel_auts = enumerate_rel_automorphisms(sys, budget)?;
        report.check(
            name,
            restricted == rel_auts && restricted.len() == auts.len(),
            format!("{} graph automorphisms restrict to {} relational ones", auts.len(), rel_auts.len()),
        );
    }
    match graph_morphism_from_pairs(g.source.clone(), g.target.clone(), &g.phi_pairs) {
        Ok(f) => {
            report.check("graph.phi_is_morphism", true, "every edge maps to an edge");
            let arrow = arrow_automorphism_group_graph(&f, budget)?;
            claim(report, "graph.aut_arrow", "graph arrow", &h_group(gd)?, &arrow.group, json!(arrow.pairs), budget)?;
        }
        Err(e) => report.check("graph.phi_is_morphism", false, e.to_string()),
    }
    report.time("graph.automorphisms", t.elapsed().as_secs_f64());
    Ok(())
}

/// Builds and verifies everything for one input.
pub fn run_pipeline(input: &Input, graphs: bool, budget: &SearchBudget, timings: bool) -> Result<Report> {
    let gd = input.generating_data()?;
    let mut report = Report::new(input.summary(&gd));
    if timings {
        report.timings = Some(Default::default());
    }
    let t = Instant::now();
    let p = RelPipeline::new(gd.clone())?;
    report.time("relational.build", t.elapsed().as_secs_f64());
    let rel = RelArtifacts::from_pipeline(&p);
    verify_relational(&gd, &rel, budget, &mut report)?;
    if graphs {
        let t = Instant::now();
        let (g, _) = build_graphs(&p)?;
        report.time("graph.build", t.elapsed().as_secs_f64());
        verify_graphs(&gd, &rel, &g, budget, &mut report)?;
    }
    Ok(report)
}

/// Re-verifies saved artifacts; the claims come from `input.json`.
pub fn verify_dir(dir: &Path, budget: &SearchBudget, timings: bool) -> Result<Report> {
    let input = load_input(dir)?;
    let gd = input.generating_data()?;
    let mut report = Report::new(input.summary(&gd));
    if timings {
        report.timings = Some(Default::default());
    }
    let rel = load_relational(dir)?;
    verify_relational(&gd, &rel, budget, &mut report)?;
    if let Some(g) = load_graphs(dir)? {
        verify_graphs(&gd, &rel, &g, budget, &mut report)?;
    }
    Ok(report)
}

/// Generators of H written as pairs, for reports and saved inputs.
pub fn h_generator_pairs(gd: &GeneratingData) -> Vec<(usize, usize)> {
    let d = gd.decomposition();
    greedy_generators(d.product().group(), d.h()).into_iter().map(|p| d.product().unpair(p)).collect()
}
