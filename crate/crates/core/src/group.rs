//! Finite groups stored as full multiplication tables.
//!
//! Elements are the indices `0..order`. Every operation here is a pure
//! function of immutable tables, so all values can be shared freely
//! between threads.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated finite group.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = Error;

    fn try_from(json: GroupJson) -> Result<Self> {
        if json.table.len() != json.order {
            return Err(Error::NotAGroup(format!(
                "declared order {} but the table has {} rows",
                json.order,
                json.table.len()
            )));
        }
        let g = FiniteGroup::from_table(json.table)?;
        Ok(match json.name {
            Some(name) => g.with_name(name),
            None => g,
        })
    }
}

impl From<FiniteGroup> for GroupJson {
    fn from(g: FiniteGroup) -> Self {
        let table = g.rows();
        GroupJson { order: g.order, table, name: Some(g.name) }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validates a square multiplication table: row `g`, column `h` holds `g·h`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {g} has length {} (expected {n})", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::NotAGroup(format!("entry {x} in row {g} is out of range")));
                }
            }
            flat.extend_from_slice(row);
        }

        let mut seen = vec![false; n];
        for g in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..n {
                let x = flat[g * n + h];
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotAGroup(format!("row {g} repeats element {x}")));
                }
            }
        }
        for h in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for g in 0..n {
                let x = flat[g * n + h];
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotAGroup(format!("column {h} repeats element {x}")));
                }
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|g| flat[e * n + g] == g && flat[g * n + e] == g))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;

        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(Error::NotAGroup(format!("associativity fails for the triple ({a}, {b}, {c})")));
                    }
                }
            }
        }

        // Latin rows guarantee a unique right inverse.
        let inverse = (0..n).map(|g| (0..n).find(|&h| flat[g * n + h] == identity).expect("latin row")).collect();

        Ok(Self { name: format!("G{n}"), order: n, table: flat, identity, inverse })
    }

    /// Builds the group generated by composition of the given permutations,
    /// which must already be closed. `(p·q)(x) = p(q(x))`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self> {
        let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        if index.len() != perms.len() {
            return Err(Error::NotAGroup("repeated permutation".into()));
        }
        let mut table = vec![vec![0; perms.len()]; perms.len()];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                table[i][j] = *index
                    .get(pq.as_slice())
                    .ok_or_else(|| Error::NotAGroup("permutations are not closed under composition".into()))?;
            }
        }
        Self::from_table(table)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: g, order: self.order })
        }
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders; an isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.elements().map(|g| self.element_order(g)).collect();
        p.sort_unstable();
        p
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> ElementSubset {
        ElementSubset { parent_order: self.order, members: self.elements().collect(), subgroup: true }
    }

    pub fn trivial_subgroup(&self) -> ElementSubset {
        ElementSubset { parent_order: self.order, members: vec![self.identity], subgroup: true }
    }

    /// Checks closure under products and inverses plus presence of the identity.
    pub fn is_subgroup(&self, members: &[usize]) -> bool {
        let mut mask = vec![false; self.order];
        for &m in members {
            if m >= self.order {
                return false;
            }
            mask[m] = true;
        }
        mask[self.identity]
            && members.iter().all(|&a| mask[self.inv(a)] && members.iter().all(|&b| mask[self.mul(a, b)]))
    }

    /// Wraps an explicit element list, flagging it as a subgroup when it is one.
    pub fn subset(&self, members: impl IntoIterator<Item = usize>) -> Result<ElementSubset> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        for &m in &members {
            self.check_element(m)?;
        }
        let members: Vec<usize> = members.into_iter().collect();
        let subgroup = self.is_subgroup(&members);
        Ok(ElementSubset { parent_order: self.order, members, subgroup })
    }

    pub fn subgroup(&self, members: impl IntoIterator<Item = usize>) -> Result<ElementSubset> {
        let s = self.subset(members)?;
        if s.subgroup {
            Ok(s)
        } else {
            Err(Error::NotASubgroup)
        }
    }

    /// Restricts the table to a subgroup. Returns the subgroup as a group in
    /// its own right together with the embedding (position ↦ parent element).
    pub fn subgroup_as_group(&self, sub: &ElementSubset) -> Result<(FiniteGroup, Vec<usize>)> {
        if !sub.is_subgroup() || sub.parent_order != self.order {
            return Err(Error::NotASubgroup);
        }
        let pos: HashMap<usize, usize> = sub.members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = sub.members.iter().map(|&a| sub.members.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        Ok((FiniteGroup::from_table(table)?.with_name(format!("sub({})", self.name)), sub.members.clone()))
    }
}

/// Subset of a group's elements, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementSubset {
    parent_order: usize,
    members: Vec<usize>,
    subgroup: bool,
}

impl ElementSubset {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subgroup(&self) -> bool {
        self.subgroup
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &ElementSubset) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }
}

/// Smallest subgroup containing `generators`, by breadth-first closure.
pub fn subgroup_closure(g: &FiniteGroup, generators: &[usize]) -> Result<ElementSubset> {
    for &s in generators {
        g.check_element(s)?;
    }
    let mut mask = vec![false; g.order()];
    mask[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in generators {
            let y = g.mul(x, s);
            if !mask[y] {
                mask[y] = true;
                queue.push_back(y);
            }
        }
    }
    let members = g.elements().filter(|&x| mask[x]).collect();
    Ok(ElementSubset { parent_order: g.order(), members, subgroup: true })
}

/// Deterministic generating set of a subgroup: repeatedly adds the smallest
/// element not yet in the closure.
pub fn greedy_generators(g: &FiniteGroup, sub: &ElementSubset) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut closure = g.trivial_subgroup();
    for &x in sub.members() {
        if !closure.contains(x) {
            gens.push(x);
            closure = subgroup_closure(g, &gens).expect("members are valid elements");
        }
    }
    gens
}

/// Right cosets `sub·r` of a subgroup inside an ambient subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDecomposition {
    subgroup: ElementSubset,
    reps: Vec<usize>,
    class_of: Vec<Option<usize>>,
}

impl CosetDecomposition {
    pub fn subgroup(&self) -> &ElementSubset {
        &self.subgroup
    }

    /// Representatives; `reps()[0]` is the identity.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class index of `g`, or `None` when `g` lies outside the ambient group.
    pub fn class(&self, g: usize) -> Option<usize> {
        self.class_of.get(g).copied().flatten()
    }

    pub fn rep_of(&self, g: usize) -> Option<usize> {
        self.class(g).map(|c| self.reps[c])
    }

    pub fn members_of(&self, class: usize) -> Vec<usize> {
        (0..self.class_of.len()).filter(|&g| self.class_of[g] == Some(class)).collect()
    }
}

/// Right cosets of `sub` in the whole group.
pub fn right_cosets(g: &FiniteGroup, sub: &ElementSubset) -> Result<CosetDecomposition> {
    cosets_within(g, sub, &g.whole())
}

/// Right cosets of `sub` in `ambient` (both subgroups, `sub ≤ ambient`).
/// The class of the subgroup itself is represented by the identity; every
/// other class by its smallest element.
pub fn cosets_within(g: &FiniteGroup, sub: &ElementSubset, ambient: &ElementSubset) -> Result<CosetDecomposition> {
    for s in [sub, ambient] {
        if s.parent_order() != g.order() || !g.is_subgroup(s.members()) {
            return Err(Error::NotASubgroup);
        }
    }
    if !sub.is_subset_of(ambient) {
        return Err(Error::NotASubgroup);
    }
    let mut class_of = vec![None; g.order()];
    let mut reps = Vec::new();
    let order = std::iter::once(g.identity()).chain(ambient.members().iter().copied());
    for r in order {
        if class_of[r].is_some() {
            continue;
        }
        let c = reps.len();
        reps.push(r);
        for &h in sub.members() {
            class_of[g.mul(h, r)] = Some(c);
        }
    }
    Ok(CosetDecomposition { subgroup: sub.clone(), reps, class_of })
}

/// All subgroups generated by at most two elements, ordered by size then
/// members.
pub fn subgroups_two_generated(g: &FiniteGroup) -> Vec<ElementSubset> {
    let mut found = BTreeSet::new();
    found.insert((1, g.trivial_subgroup()));
    for a in g.elements() {
        for b in a..g.order() {
            let s = subgroup_closure(g, &[a, b]).expect("valid elements");
            found.insert((s.len(), s));
        }
    }
    found.into_iter().map(|(_, s)| s).collect()
}

/// `G₁ × G₂` with the pairing `(a, b) ↦ a·|G₂| + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectProduct {
    left: FiniteGroup,
    right: FiniteGroup,
    group: FiniteGroup,
}

impl DirectProduct {
    pub fn new(left: &FiniteGroup, right: &FiniteGroup) -> Result<Self> {
        let (n1, n2) = (left.order(), right.order());
        let overflow = Error::IndexOverflow { left: n1, right: n2 };
        let n = n1.checked_mul(n2).ok_or(overflow.clone())?;
        // The flat table has n² entries.
        n.checked_mul(n).ok_or(overflow)?;
        let table = (0..n)
            .map(|p| {
                let (a, b) = (p / n2, p % n2);
                (0..n).map(|q| left.mul(a, q / n2) * n2 + right.mul(b, q % n2)).collect()
            })
            .collect();
        let group = FiniteGroup::from_table(table)?.with_name(format!("{}x{}", left.name(), right.name()));
        Ok(Self { left: left.clone(), right: right.clone(), group })
    }

    pub fn left(&self) -> &FiniteGroup {
        &self.left
    }

    pub fn right(&self) -> &FiniteGroup {
        &self.right
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.right.order() + b
    }

    pub fn unpair(&self, p: usize) -> (usize, usize) {
        (p / self.right.order(), p % self.right.order())
    }

    pub fn subgroup_from_pairs(&self, pairs: &[(usize, usize)]) -> Result<ElementSubset> {
        let gens = self.elements_from_pairs(pairs)?;
        subgroup_closure(&self.group, &gens)
    }

    pub fn elements_from_pairs(&self, pairs: &[(usize, usize)]) -> Result<Vec<usize>> {
        pairs
            .iter()
            .map(|&(a, b)| {
                self.left.check_element(a)?;
                self.right.check_element(b)?;
                Ok(self.pair(a, b))
            })
            .collect()
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::NotAGroup("cyclic group of order 0".into()));
    }
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    Ok(FiniteGroup::from_table(table)?.with_name(format!("Z{n}")))
}

pub fn klein4() -> FiniteGroup {
    let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    FiniteGroup::from_table(table).expect("klein four table").with_name("K4")
}

/// Dihedral group of order `2n`: `r^k ↦ k`, `s·r^k ↦ n + k`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::NotAGroup("dihedral group with n = 0".into()));
    }
    let mul = |x: usize, y: usize| -> usize {
        let (xs, xa) = (x >= n, x % n);
        let (ys, yb) = (y >= n, y % n);
        match (xs, ys) {
            (false, false) => (xa + yb) % n,
            (false, true) => n + (yb + n - xa) % n,
            (true, false) => n + (xa + yb) % n,
            (true, true) => (yb + n - xa) % n,
        }
    };
    let table = (0..2 * n).map(|x| (0..2 * n).map(|y| mul(x, y)).collect()).collect();
    Ok(FiniteGroup::from_table(table)?.with_name(format!("D{n}")))
}

/// Symmetric group on `k ≤ 5` points; permutations in lexicographic order,
/// so index 0 is the identity.
pub fn symmetric(k: usize) -> Result<FiniteGroup> {
    if k == 0 || k > 5 {
        return Err(Error::NotAGroup(format!("symmetric group on {k} points is not supported")));
    }
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    permutations(&mut current, 0, &mut perms);
    perms.sort();
    Ok(FiniteGroup::from_permutations(&perms)?.with_name(format!("S{k}")))
}

fn permutations(v: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == v.len() {
        out.push(v.clone());
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        permutations(v, start + 1, out);
        v.swap(start, i);
    }
}
