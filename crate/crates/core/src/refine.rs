//! Isomorphism and automorphism search for coloured structures by colour
//! refinement and individualisation.
//!
//! A [`Structure`] is a vertex-coloured complete "pair code" matrix: every
//! ordered pair of distinct vertices carries a code, 0 meaning unrelated.
//! Relational systems and simple graphs are both encoded this way.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::budget::SearchBudget;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Structure {
    n: usize,
    colour: Vec<u32>,
    adj: Vec<Vec<(usize, u32)>>,
    pair: Vec<u32>,
}

impl Structure {
    /// `arcs` lists `(u, v, code)` for ordered pairs with a nonzero code.
    /// Callers must give `(v, u)` a nonzero code whenever `(u, v)` has one.
    pub fn new(colour: Vec<u32>, arcs: impl IntoIterator<Item = (usize, usize, u32)>) -> Self {
        let n = colour.len();
        let mut pair = vec![0u32; n * n];
        let mut adj = vec![Vec::new(); n];
        for (u, v, code) in arcs {
            debug_assert!(u != v && code != 0);
            if pair[u * n + v] == 0 {
                adj[u].push((v, code));
            }
            pair[u * n + v] = code;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        debug_assert!((0..n).all(|u| adj[u].iter().all(|&(v, _)| pair[v * n + u] != 0)));
        Self { n, colour, adj, pair }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn code(&self, u: usize, v: usize) -> u32 {
        self.pair[u * self.n + v]
    }

    /// True when `map` is an isomorphism `self → other`.
    pub fn is_isomorphism(&self, other: &Structure, map: &[usize]) -> bool {
        if self.n != other.n || map.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &y in map {
            if y >= self.n || std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        (0..self.n).all(|u| {
            self.colour[u] == other.colour[map[u]]
                && self.adj[u].len() == other.adj[map[u]].len()
                && self.adj[u].iter().all(|&(v, c)| other.code(map[u], map[v]) == c)
        })
    }
}

/// All isomorphisms `a → b`, or just the first one found when `all` is
/// false. Results are sorted.
pub fn isomorphisms(a: &Structure, b: &Structure, all: bool, budget: &SearchBudget) -> Result<Vec<Vec<usize>>> {
    if a.n != b.n {
        return Ok(Vec::new());
    }
    let search = Search { a, b, all, budget };
    let mut colours: Vec<u32> = a.colour.iter().chain(&b.colour).copied().collect();
    if !search.refine(&mut colours) {
        return Ok(Vec::new());
    }
    let mut found = search.descend(colours, true)?;
    found.sort();
    if !all {
        found.truncate(1);
    }
    Ok(found)
}

pub fn automorphisms(s: &Structure, budget: &SearchBudget) -> Result<Vec<Vec<usize>>> {
    isomorphisms(s, s, true, budget)
}

struct Search<'a> {
    a: &'a Structure,
    b: &'a Structure,
    all: bool,
    budget: &'a SearchBudget,
}

impl Search<'_> {
    fn neighbours(&self, x: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let n = self.a.n;
        let (s, off) = if x < n { (self.a, 0) } else { (self.b, n) };
        s.adj[x - off].iter().map(move |&(v, c)| (v + off, c))
    }

    /// Refines the colouring of the disjoint union to a stable one. Colour
    /// ids are renumbered canonically from the sorted signatures, so both
    /// halves stay comparable. Returns false when the halves disagree.
    fn refine(&self, colours: &mut [u32]) -> bool {
        let n = self.a.n;
        let mut classes = count_classes(colours);
        loop {
            if !halves_match(colours, n) {
                return false;
            }
            let keys: Vec<Vec<u32>> = (0..2 * n)
                .map(|x| {
                    let mut nb: Vec<(u32, u32)> = self.neighbours(x).map(|(v, c)| (c, colours[v])).collect();
                    nb.sort_unstable();
                    let mut key = Vec::with_capacity(1 + 2 * nb.len());
                    key.push(colours[x]);
                    key.extend(nb.into_iter().flat_map(|(c, k)| [c, k]));
                    key
                })
                .collect();
            let ids: BTreeMap<&Vec<u32>, u32> = {
                let mut m: BTreeMap<&Vec<u32>, u32> = keys.iter().map(|k| (k, 0)).collect();
                for (i, v) in m.values_mut().enumerate() {
                    *v = i as u32;
                }
                m
            };
            for (x, key) in keys.iter().enumerate() {
                colours[x] = ids[key];
            }
            let now = ids.len();
            if now == classes {
                return halves_match(colours, n);
            }
            classes = now;
        }
    }

    fn descend(&self, colours: Vec<u32>, top: bool) -> Result<Vec<Vec<usize>>> {
        self.budget.tick()?;
        let n = self.a.n;
        let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (x, &c) in colours[..n].iter().enumerate() {
            cells.entry(c).or_default().push(x);
        }
        let target = cells.values().filter(|c| c.len() > 1).min_by_key(|c| (c.len(), c[0]));
        let Some(cell) = target else {
            let mut by_colour = vec![usize::MAX; colours.len()];
            for y in 0..n {
                by_colour[colours[n + y] as usize] = y;
            }
            let map: Vec<usize> = (0..n).map(|x| by_colour[colours[x] as usize]).collect();
            return if self.a.is_isomorphism(self.b, &map) { Ok(vec![map]) } else { Ok(Vec::new()) };
        };
        let x = cell[0];
        let colour = colours[x];
        let fresh = *colours.iter().max().expect("nonempty") + 1;
        let candidates: Vec<usize> = (0..n).filter(|&y| colours[n + y] == colour).collect();

        let branch = |y: usize| -> Result<Vec<Vec<usize>>> {
            let mut next = colours.clone();
            next[x] = fresh;
            next[n + y] = fresh;
            if self.refine(&mut next) {
                self.descend(next, false)
            } else {
                Ok(Vec::new())
            }
        };

        if top && self.all {
            let parts: Vec<Result<Vec<Vec<usize>>>> = candidates.par_iter().map(|&y| branch(y)).collect();
            let mut out = Vec::new();
            for p in parts {
                out.extend(p?);
            }
            return Ok(out);
        }
        let mut out = Vec::new();
        for y in candidates {
            out.extend(branch(y)?);
            if !self.all && !out.is_empty() {
                break;
            }
        }
        Ok(out)
    }
}

fn count_classes(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn halves_match(colours: &[u32], n: usize) -> bool {
    let mut a = colours[..n].to_vec();
    let mut b = colours[n..].to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Composition `(p∘q)(x) = p(q(x))`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Checks that a set of permutations is closed under composition and
/// contains the identity.
pub fn check_closed(perms: &[Vec<usize>]) -> Result<()> {
    let set: std::collections::HashSet<&[usize]> = perms.iter().map(Vec::as_slice).collect();
    let Some(first) = perms.first() else {
        return Err(Error::InternalInconsistency("empty automorphism list".into()));
    };
    let id: Vec<usize> = (0..first.len()).collect();
    if !set.contains(id.as_slice()) {
        return Err(Error::InternalInconsistency("automorphisms miss the identity".into()));
    }
    for p in perms {
        for q in perms {
            if !set.contains(compose(p, q).as_slice()) {
                return Err(Error::InternalInconsistency("automorphisms are not closed under composition".into()));
            }
        }
    }
    Ok(())
}
