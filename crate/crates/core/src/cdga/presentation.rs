use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::poly::{coeff, Coeff, GradedPoly, Monomial};
use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Base,
    Vertex(usize),
    Edge(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u64,
    pub parity: Parity,
    pub origin: Origin,
}

/// A free graded-commutative algebra with a differential given on
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanPresentation {
    n: u64,
    digraph: Digraph,
    generators: Vec<Generator>,
    differential: Vec<GradedPoly>,
    space: u64,
}

pub const X1: u32 = 0;
pub const X2: u32 = 1;
pub const Y1: u32 = 2;
pub const Y2: u32 = 3;
pub const Y3: u32 = 4;
pub const Z: u32 = 5;

/// Generator degrees `(x₁, x₂, y₁, y₂, y₃, x_v, z)` for parameter `n`.
pub fn generator_degrees(n: u64) -> Result<[u64; 7]> {
    let f = |a: u64, b: u64, c: u64| -> Option<u64> {
        a.checked_mul(n)?.checked_mul(n)?.checked_add(b.checked_mul(n)?)?.checked_add(c)
    };
    let all =
        [f(0, 30, 18), f(0, 36, 22), f(0, 126, 75), f(0, 132, 79), f(0, 138, 83), f(180, 218, 66), f(540, 654, 197)];
    let mut out = [0; 7];
    for (o, d) in out.iter_mut().zip(all) {
        *o = d.ok_or_else(|| Error::DegreeOverflow(format!("generator degrees for n = {n}")))?;
    }
    Ok(out)
}

fn exp(n: u64, a: u64, b: u64) -> Result<u32> {
    a.checked_mul(n)
        .and_then(|x| x.checked_add(b))
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::DegreeOverflow(format!("exponent {a}n+{b} for n = {n}")))
}

impl SullivanPresentation {
    /// The algebra attached to a strongly connected digraph with more than
    /// one vertex.
    pub fn new(g: &Digraph, n: u64) -> Result<Self> {
        g.check_standing_hypothesis()?;
        if n == 0 {
            return Err(Error::InvalidPresentation("the parameter n must be positive".into()));
        }
        let [dx1, dx2, dy1, dy2, dy3, dxv, dz] = generator_degrees(n)?;
        // Differentials reach degree |z| + 1; products in checks go a few times higher.
        dz.checked_mul(8).ok_or_else(|| Error::DegreeOverflow(format!("n = {n}")))?;
        let base = |name: &str, degree: u64| Generator {
            name: name.into(),
            degree,
            parity: if degree.is_multiple_of(2) { Parity::Even } else { Parity::Odd },
            origin: Origin::Base,
        };
        let mut generators =
            vec![base("x1", dx1), base("x2", dx2), base("y1", dy1), base("y2", dy2), base("y3", dy3), base("z", dz)];
        for v in 0..g.num_vertices() {
            generators.push(Generator {
                name: format!("x_{v}"),
                degree: dxv,
                parity: Parity::Even,
                origin: Origin::Vertex(v),
            });
        }
        for &(v, w) in g.edges() {
            generators.push(Generator {
                name: format!("z_({v},{w})"),
                degree: dz,
                parity: Parity::Odd,
                origin: Origin::Edge(v, w),
            });
        }
        let space = fingerprint(n, &generators);
        let mono = |even: &[(u32, u32)], odd: &[u32], c: i64| -> GradedPoly {
            let (m, neg) = Monomial::from_parts(even, odd).expect("distinct odd factors");
            GradedPoly::monomial(space, m, coeff(if neg { -c } else { c }))
        };
        let sum = |parts: Vec<GradedPoly>| -> GradedPoly {
            parts.into_iter().fold(GradedPoly::zero(space), |acc, p| acc.add(&p).expect("same space"))
        };
        let x1_top = exp(n, 18, 11)?;
        let x1_lead = exp(n, 18, 0)?;
        let mut differential = vec![
            GradedPoly::zero(space),
            GradedPoly::zero(space),
            mono(&[(X1, 3), (X2, 1)], &[], 1),
            mono(&[(X1, 2), (X2, 2)], &[], 1),
            mono(&[(X1, 1), (X2, 3)], &[], 1),
            sum(vec![
                mono(&[(X1, x1_lead), (X2, 2)], &[Y1, Y2], 1),
                mono(&[(X1, x1_lead + 1), (X2, 1)], &[Y1, Y3], -1),
                mono(&[(X1, x1_lead + 2)], &[Y2, Y3], 1),
                mono(&[(X1, x1_top)], &[], 1),
                mono(&[(X2, exp(n, 15, 9)?)], &[], 1),
            ]),
        ];
        let xv = |v: usize| (6 + v) as u32;
        differential.extend((0..g.num_vertices()).map(|_| GradedPoly::zero(space)));
        let x2_link = exp(n, 5, 3)?;
        for &(v, w) in g.edges() {
            differential.push(sum(vec![
                mono(&[(xv(v), 3)], &[], 1),
                mono(&[(xv(v), 1), (xv(w), 1), (X2, x2_link)], &[], 1),
                mono(&[(X1, x1_top)], &[], 1),
            ]));
        }
        let p = Self { n, digraph: g.clone(), generators, differential, space };
        let problems = p.check_degrees()?;
        if let Some(first) = problems.first() {
            return Err(Error::InvalidPresentation(first.clone()));
        }
        Ok(p)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn space(&self) -> u64 {
        self.space
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn generator_index(&self, name: &str) -> Result<u32> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::InvalidPresentation(format!("unknown generator {name}")))
    }

    pub fn vertex_generator(&self, v: usize) -> u32 {
        (6 + v) as u32
    }

    pub fn edge_generator(&self, v: usize, w: usize) -> Option<u32> {
        self.generators.iter().position(|g| g.origin == Origin::Edge(v, w)).map(|i| i as u32)
    }

    pub fn differential(&self, g: u32) -> &GradedPoly {
        &self.differential[g as usize]
    }

    /// The generator as a polynomial.
    pub fn gen(&self, g: u32) -> GradedPoly {
        let m = match self.generators[g as usize].parity {
            Parity::Even => Monomial::even_power(g, 1),
            Parity::Odd => Monomial::odd_generator(g),
        };
        GradedPoly::monomial(self.space, m, coeff(1))
    }

    /// Builds `c · Π even^k · Π odd` with odd factors taken in the given order.
    pub fn monomial(&self, c: i64, even: &[(u32, u32)], odd: &[u32]) -> GradedPoly {
        match Monomial::from_parts(even, odd) {
            Some((m, neg)) => GradedPoly::monomial(self.space, m, coeff(if neg { -c } else { c })),
            None => GradedPoly::zero(self.space),
        }
    }

    /// Replaces one generator's differential; used to build deliberately
    /// broken presentations.
    pub fn with_differential(&self, g: u32, d: GradedPoly) -> Result<Self> {
        if d.space() != self.space {
            return Err(Error::MixedPresentation);
        }
        let mut p = self.clone();
        p.differential[g as usize] = d;
        Ok(p)
    }

    /// Parity, degree and even-generator checks; returns one message per
    /// violation.
    pub fn check_degrees(&self) -> Result<Vec<String>> {
        let degrees = self.degrees();
        let mut problems = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let want = if g.degree.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
            if g.parity != want {
                problems.push(format!("{} has degree {} but parity {:?}", g.name, g.degree, g.parity));
            }
            if g.degree == 0 {
                problems.push(format!("{} has degree 0", g.name));
            }
            let d = &self.differential[i];
            if g.parity == Parity::Even && !d.is_zero() {
                problems.push(format!("even generator {} has nonzero differential", g.name));
            }
            match d.homogeneous_degree(&degrees)? {
                None if d.is_zero() => {}
                Some(k) if k == g.degree + 1 => {}
                other => problems.push(format!("d{} has degree {:?}, expected {}", g.name, other, g.degree + 1)),
            }
        }
        Ok(problems)
    }

    /// Extends the differential by the graded Leibniz rule.
    pub fn apply_derivation(&self, p: &GradedPoly) -> Result<GradedPoly> {
        if p.space() != self.space {
            return Err(Error::MixedPresentation);
        }
        let mut out = GradedPoly::zero(self.space);
        for (m, c) in p.terms() {
            // d(e · o₁⋯o_r) = d(e)·o + e·Σ (−1)^i o₁⋯d(o_i)⋯o_r, with e even.
            let odd = m.odd();
            let r = odd.len();
            let odd_poly = |range: std::ops::Range<usize>| self.monomial(1, &[], &odd[range]);
            let even_poly = |drop_one: Option<u32>| -> GradedPoly {
                let even: Vec<(u32, u32)> =
                    m.even().iter().map(|&(g, k)| if Some(g) == drop_one { (g, k - 1) } else { (g, k) }).collect();
                self.monomial(1, &even, &[])
            };
            let mut local = GradedPoly::zero(self.space);
            let all_odd = odd_poly(0..r);
            for &(g, k) in m.even() {
                let dg = &self.differential[g as usize];
                if !dg.is_zero() {
                    let term = even_poly(Some(g)).mul(dg)?.mul(&all_odd)?.scale(&coeff(k as i64));
                    local = local.add(&term)?;
                }
            }
            let e = even_poly(None);
            for (i, &o) in odd.iter().enumerate() {
                let dg = &self.differential[o as usize];
                if dg.is_zero() {
                    continue;
                }
                let mut term = e.mul(&odd_poly(0..i))?.mul(dg)?.mul(&odd_poly(i + 1..r))?;
                if i % 2 == 1 {
                    term = term.scale(&coeff(-1));
                }
                local = local.add(&term)?;
            }
            out = out.add(&local.scale(c))?;
        }
        Ok(out)
    }

    /// Same generators with only the pure part of each differential.
    pub fn pure_differential(&self) -> Self {
        let mut p = self.clone();
        for d in &mut p.differential {
            *d = d.pure_part();
        }
        p
    }

    /// All monomials of total degree `d`, sorted.
    pub fn basis_at_degree(&self, d: u64) -> Result<Vec<Monomial>> {
        let degrees = self.degrees();
        if degrees.contains(&0) {
            return Err(Error::InvalidPresentation("generator of degree 0".into()));
        }
        let odd: Vec<u32> = (0..self.generators.len() as u32).filter(|&g| degrees[g as usize] % 2 == 1).collect();
        let even: Vec<u32> =
            (0..self.generators.len() as u32).filter(|&g| degrees[g as usize].is_multiple_of(2)).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        odd_subsets(&odd, &degrees, 0, d, &mut chosen, &mut |rest, odds| {
            let mut exps = Vec::new();
            even_vectors(&even, &degrees, 0, rest, &mut exps, &mut |e| {
                let (m, _) = Monomial::from_parts(e, odds).expect("distinct");
                out.push(m);
            });
        });
        out.sort();
        Ok(out)
    }
}

fn odd_subsets(
    odd: &[u32],
    degrees: &[u64],
    from: usize,
    rest: u64,
    chosen: &mut Vec<u32>,
    f: &mut dyn FnMut(u64, &[u32]),
) {
    f(rest, chosen);
    for i in from..odd.len() {
        let dg = degrees[odd[i] as usize];
        if dg <= rest {
            chosen.push(odd[i]);
            odd_subsets(odd, degrees, i + 1, rest - dg, chosen, f);
            chosen.pop();
        }
    }
}

fn even_vectors(
    even: &[u32],
    degrees: &[u64],
    at: usize,
    rest: u64,
    exps: &mut Vec<(u32, u32)>,
    f: &mut dyn FnMut(&[Exponents]),
) {
    if rest == 0 {
        f(exps);
        return;
    }
    if at == even.len() {
        return;
    }
    let g = even[at];
    let dg = degrees[g as usize];
    for k in 0..=rest / dg {
        if k > 0 {
            exps.push((g, k as u32));
        }
        even_vectors(even, degrees, at + 1, rest - k * dg, exps, f);
        if k > 0 {
            exps.pop();
        }
    }
}

/// An even generator with its exponent.
type Exponents = (u32, u32);

fn fingerprint(n: u64, generators: &[Generator]) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    n.hash(&mut h);
    generators.hash(&mut h);
    h.finish()
}

/// Nonzero `d(d(g))` residues, by generator name.
pub fn check_d_squared(p: &SullivanPresentation) -> Result<Vec<(String, GradedPoly)>> {
    let mut residues = Vec::new();
    for (i, g) in p.generators().iter().enumerate() {
        let dd = p.apply_derivation(p.differential(i as u32))?;
        if !dd.is_zero() {
            residues.push((g.name.clone(), dd));
        }
    }
    Ok(residues)
}

/// A claimed identity `d_σ(primitive) = expected` in the pure algebra.
#[derive(Clone, Debug)]
pub struct Witness {
    pub name: String,
    pub primitive: GradedPoly,
    pub expected: GradedPoly,
}

/// The identities showing that the pure algebra has finite-dimensional
/// cohomology: powers of x₁ and x₂ are exact, and so is the image of each
/// edge generator.
pub fn ellipticity_witnesses(p: &SullivanPresentation) -> Result<Vec<Witness>> {
    let n = p.n();
    let mut out = vec![
        Witness {
            name: format!("z x1 - y3 x2^{}", exp(n, 15, 6)?),
            primitive: p.gen(Z).mul(&p.gen(X1))?.sub(&p.monomial(1, &[(X2, exp(n, 15, 6)?)], &[Y3]))?,
            expected: p.monomial(1, &[(X1, exp(n, 18, 12)?)], &[]),
        },
        Witness {
            name: format!("z x2 - y1 x1^{}", exp(n, 18, 8)?),
            primitive: p.gen(Z).mul(&p.gen(X2))?.sub(&p.monomial(1, &[(X1, exp(n, 18, 8)?)], &[Y1]))?,
            expected: p.monomial(1, &[(X2, exp(n, 15, 10)?)], &[]),
        },
    ];
    for &(v, w) in p.digraph().edges() {
        let (xv, xw) = (p.vertex_generator(v), p.vertex_generator(w));
        let expected = p
            .monomial(1, &[(xv, 3)], &[])
            .add(&p.monomial(1, &[(xv, 1), (xw, 1), (X2, exp(n, 5, 3)?)], &[]))?
            .add(&p.monomial(1, &[(X1, exp(n, 18, 11)?)], &[]))?;
        let e = p.edge_generator(v, w).expect("edge generator");
        out.push(Witness { name: format!("z_({v},{w})"), primitive: p.gen(e), expected });
    }
    Ok(out)
}

/// `d_σ(primitive) − expected` for each witness, computed in the pure
/// algebra of `p`.
pub fn check_witnesses(p: &SullivanPresentation, witnesses: &[Witness]) -> Result<Vec<(String, GradedPoly)>> {
    let pure = p.pure_differential();
    witnesses.iter().map(|w| Ok((w.name.clone(), pure.apply_derivation(&w.primitive)?.sub(&w.expected)?))).collect()
}

fn poly_json(p: &SullivanPresentation, poly: &GradedPoly) -> Value {
    let names = p.names();
    Value::Array(
        poly.terms()
            .iter()
            .map(|(m, c)| {
                let mut mono = Map::new();
                for (g, k) in m.factors() {
                    mono.insert(names[g as usize].clone(), Value::from(k));
                }
                serde_json::json!({ "coeff": c.to_string(), "mono": mono })
            })
            .collect(),
    )
}

impl SullivanPresentation {
    pub fn poly_to_json(&self, poly: &GradedPoly) -> Value {
        poly_json(self, poly)
    }

    /// Reads a polynomial in the JSON term format. Odd factors are taken
    /// in generator order.
    pub fn poly_from_json(&self, v: &Value) -> Result<GradedPoly> {
        let bad = |m: &str| Error::Parse(format!("polynomial: {m}"));
        let terms = v.as_array().ok_or_else(|| bad("expected an array of terms"))?;
        let mut out = GradedPoly::zero(self.space);
        for t in terms {
            let c: Coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing coeff"))?
                .parse()
                .map_err(|_| bad("bad coeff"))?;
            let mono = t.get("mono").and_then(Value::as_object).ok_or_else(|| bad("missing mono"))?;
            let mut factors: Vec<(u32, u32)> = Vec::new();
            for (name, k) in mono {
                let k = k.as_u64().and_then(|k| u32::try_from(k).ok()).ok_or_else(|| bad("bad exponent"))?;
                factors.push((self.generator_index(name)?, k));
            }
            factors.sort_unstable();
            let mut even = Vec::new();
            let mut odd = Vec::new();
            for (g, k) in factors {
                match self.generators[g as usize].parity {
                    Parity::Even => even.push((g, k)),
                    Parity::Odd if k == 1 => odd.push(g),
                    Parity::Odd if k == 0 => {}
                    Parity::Odd => return Err(bad("odd generator with exponent above 1")),
                }
            }
            let (m, neg) = Monomial::from_parts(&even, &odd).expect("sorted distinct");
            out.add_term(m, if neg { -c } else { c });
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let generators: Vec<Value> = self
            .generators
            .iter()
            .map(|g| {
                let origin = match g.origin {
                    Origin::Base => "base".to_string(),
                    Origin::Vertex(v) => format!("vertex:{v}"),
                    Origin::Edge(v, w) => format!("edge:{v},{w}"),
                };
                serde_json::json!({ "name": g.name, "degree": g.degree, "parity": g.parity, "origin": origin })
            })
            .collect();
        let mut differential = Map::new();
        for (g, d) in self.generators.iter().zip(&self.differential) {
            if !d.is_zero() {
                differential.insert(g.name.clone(), poly_json(self, d));
            }
        }
        serde_json::json!({
            "n": self.n,
            "digraph": self.digraph,
            "generators": generators,
            "differential": differential,
        })
    }

    /// Rebuilds the presentation of the recorded digraph and `n`, then
    /// takes the generator list and differentials from the JSON, so edited
    /// files can be re-checked.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("presentation: {m}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))?;
        let digraph: Digraph = serde_json::from_value(v.get("digraph").cloned().ok_or_else(|| bad("missing digraph"))?)
            .map_err(|e| bad(&e.to_string()))?;
        let mut p = Self::new(&digraph, n)?;
        let gens = v.get("generators").and_then(Value::as_array).ok_or_else(|| bad("missing generators"))?;
        if gens.len() != p.generators.len() {
            return Err(bad("generator list does not match the digraph"));
        }
        for (g, j) in p.generators.iter_mut().zip(gens) {
            let name = j.get("name").and_then(Value::as_str).ok_or_else(|| bad("generator name"))?;
            if name != g.name {
                return Err(bad(&format!("expected generator {}, found {name}", g.name)));
            }
            g.degree = j.get("degree").and_then(Value::as_u64).ok_or_else(|| bad("generator degree"))?;
            g.parity = serde_json::from_value(j.get("parity").cloned().ok_or_else(|| bad("generator parity"))?)
                .map_err(|e| bad(&e.to_string()))?;
        }
        let diff = v.get("differential").and_then(Value::as_object).ok_or_else(|| bad("missing differential"))?;
        let mut differential = vec![GradedPoly::zero(p.space); p.generators.len()];
        for (name, poly) in diff {
            let g = p.generator_index(name)?;
            differential[g as usize] = p.poly_from_json(poly)?;
        }
        p.differential = differential;
        Ok(p)
    }

    /// Differentials in human-readable form, one line per generator with a
    /// nonzero differential.
    pub fn render(&self) -> String {
        let names = self.names();
        let mut out = format!("n = {}\n", self.n);
        for (g, d) in self.generators.iter().zip(&self.differential) {
            if !d.is_zero() {
                out.push_str(&format!("d {} = {}\n", g.name, d.render(&names)));
            }
        }
        out
    }
}
