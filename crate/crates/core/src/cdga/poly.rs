//! Graded-commutative polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Coeff = BigRational;

pub fn coeff(v: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(v))
}

/// A monomial in canonical form: even generators with positive exponents
/// sorted by index, then distinct odd generators in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    even: Vec<(u32, u32)>,
    odd: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn even_power(g: u32, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        Self { even: vec![(g, exp)], odd: Vec::new() }
    }

    pub fn odd_generator(g: u32) -> Self {
        Self { even: Vec::new(), odd: vec![g] }
    }

    /// Builds a canonical monomial from parts; the sign is that of sorting
    /// the odd factors from the given order. `None` when an odd generator
    /// repeats.
    pub fn from_parts(even: &[(u32, u32)], odd: &[u32]) -> Option<(Self, bool)> {
        let mut e: BTreeMap<u32, u32> = BTreeMap::new();
        for &(g, k) in even {
            *e.entry(g).or_default() += k;
        }
        let even = e.into_iter().filter(|&(_, k)| k > 0).collect();
        let (odd, negative) = sort_odd(odd.to_vec())?;
        Some((Self { even, odd }, negative))
    }

    pub fn even(&self) -> &[(u32, u32)] {
        &self.even
    }

    pub fn odd(&self) -> &[u32] {
        &self.odd
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.odd.is_empty()
    }

    /// The generator when this monomial is a single generator to the first power.
    pub fn as_generator(&self) -> Option<u32> {
        match (self.even.as_slice(), self.odd.as_slice()) {
            ([(g, 1)], []) => Some(*g),
            ([], [g]) => Some(*g),
            _ => None,
        }
    }

    /// Product with its Koszul sign (`true` = negative); `None` when an odd
    /// generator would repeat.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut even = Vec::with_capacity(self.even.len() + other.even.len());
        let (mut i, mut j) = (0, 0);
        while i < self.even.len() || j < other.even.len() {
            match (self.even.get(i), other.even.get(j)) {
                (Some(&(a, x)), Some(&(b, y))) if a == b => {
                    even.push((a, x + y));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, x)), Some(&(b, _))) if a < b => {
                    even.push((a, x));
                    i += 1;
                }
                (Some(&p), None) => {
                    even.push(p);
                    i += 1;
                }
                (_, Some(&q)) => {
                    even.push(q);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        // Inversions of the concatenation self.odd ++ other.odd.
        let mut inversions = 0usize;
        for &b in &other.odd {
            if self.odd.binary_search(&b).is_ok() {
                return None;
            }
            inversions += self.odd.iter().filter(|&&a| a > b).count();
        }
        let mut odd = self.odd.clone();
        odd.extend_from_slice(&other.odd);
        odd.sort_unstable();
        Some((Monomial { even, odd }, inversions % 2 == 1))
    }

    /// Total degree under the given generator degrees, with overflow checks.
    pub fn degree(&self, degrees: &[u64]) -> Result<u64> {
        let overflow = || Error::DegreeOverflow("monomial degree".into());
        let mut d: u64 = 0;
        for &(g, k) in &self.even {
            d = degrees[g as usize].checked_mul(k as u64).and_then(|x| d.checked_add(x)).ok_or_else(overflow)?;
        }
        for &g in &self.odd {
            d = d.checked_add(degrees[g as usize]).ok_or_else(overflow)?;
        }
        Ok(d)
    }

    fn exponent_vector(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for (g, k) in self.factors() {
            if v.len() <= g as usize {
                v.resize(g as usize + 1, 0);
            }
            v[g as usize] = k;
        }
        v
    }

    /// Factors in canonical order as `(generator, exponent)`.
    pub fn factors(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.even.iter().copied().chain(self.odd.iter().map(|&g| (g, 1)))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut out = String::new();
        for (g, k) in self.factors() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&names[g as usize]);
            if k > 1 {
                let _ = write!(out, "^{k}");
            }
        }
        out
    }
}

fn sort_odd(mut odd: Vec<u32>) -> Option<(Vec<u32>, bool)> {
    let mut negative = false;
    // Insertion sort, tracking the parity of swaps.
    for i in 1..odd.len() {
        let mut j = i;
        while j > 0 && odd[j - 1] > odd[j] {
            odd.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if odd.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((odd, negative))
}

/// A polynomial in the free graded-commutative algebra of one presentation,
/// identified by `space`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedPoly {
    space: u64,
    terms: BTreeMap<Monomial, Coeff>,
}

impl GradedPoly {
    pub fn zero(space: u64) -> Self {
        Self { space, terms: BTreeMap::new() }
    }

    pub fn one(space: u64) -> Self {
        Self::monomial(space, Monomial::one(), coeff(1))
    }

    pub fn monomial(space: u64, m: Monomial, c: Coeff) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn space(&self) -> u64 {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    fn same_space(&self, other: &GradedPoly) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::MixedPresentation)
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.add(&other.scale(&-coeff(1)))
    }

    pub fn scale(&self, c: &Coeff) -> GradedPoly {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Self { space: self.space, terms }
    }

    pub fn mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.same_space(other)?;
        let mut out = Self::zero(self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, neg)) = m1.mul(m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<GradedPoly> {
        let mut out = Self::one(self.space);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(out)
    }

    /// Keeps only terms without odd factors.
    pub fn pure_part(&self) -> GradedPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.is_pure()).map(|(m, c)| (m.clone(), c.clone())).collect();
        Self { space: self.space, terms }
    }

    /// The common degree of all terms, `None` for zero or a
    /// non-homogeneous polynomial.
    pub fn homogeneous_degree(&self, degrees: &[u64]) -> Result<Option<u64>> {
        let mut d = None;
        for m in self.terms.keys() {
            let md = m.degree(degrees)?;
            match d {
                None => d = Some(md),
                Some(x) if x != md => return Ok(None),
                _ => {}
            }
        }
        Ok(d)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        // Leading powers of low-index generators first.
        let mut terms: Vec<(&Monomial, &Coeff)> = self.terms.iter().collect();
        terms.sort_by_cached_key(|(m, _)| std::cmp::Reverse(m.exponent_vector()));
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                let _ = write!(out, "{abs}");
                if !m.is_one() {
                    out.push(' ');
                }
                if m.is_one() {
                    continue;
                }
            }
            out.push_str(&m.render(names));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S: u64 = 7;

    fn gen(g: u32, odd: bool) -> GradedPoly {
        let m = if odd { Monomial::odd_generator(g) } else { Monomial::even_power(g, 1) };
        GradedPoly::monomial(S, m, coeff(1))
    }

    #[test]
    fn odd_generators_anticommute() {
        let (y1, y2) = (gen(2, true), gen(3, true));
        let a = y1.mul(&y2).unwrap();
        let b = y2.mul(&y1).unwrap();
        assert_eq!(a, b.scale(&coeff(-1)));
        assert!(!a.is_zero());
    }

    #[test]
    fn odd_square_vanishes() {
        let z = gen(5, true);
        assert!(z.mul(&z).unwrap().is_zero());
    }

    #[test]
    fn mixed_spaces_are_rejected() {
        let a = GradedPoly::one(1);
        let b = GradedPoly::one(2);
        assert_eq!(a.add(&b), Err(Error::MixedPresentation));
        assert_eq!(a.mul(&b), Err(Error::MixedPresentation));
    }

    #[test]
    fn powers_and_rendering() {
        let x = gen(0, false);
        let names: Vec<String> = ["x1", "x2", "y1"].iter().map(|s| s.to_string()).collect();
        let p = x.add(&gen(1, false)).unwrap().pow(2).unwrap();
        assert_eq!(p.render(&names), "x1^2 + 2 x1 x2 + x2^2");
        let q = gen(2, true).scale(&coeff(-3));
        assert_eq!(q.render(&names), "-3 y1");
        assert_eq!(GradedPoly::zero(S).render(&names), "0");
    }

    #[test]
    fn from_parts_sign() {
        let (m, neg) = Monomial::from_parts(&[(0, 2)], &[4, 2, 3]).unwrap();
        assert_eq!(m.odd(), &[2, 3, 4]);
        // (4 2 3) → (2 3 4) takes two swaps.
        assert!(!neg);
        let (_, neg) = Monomial::from_parts(&[], &[3, 2]).unwrap();
        assert!(neg);
        assert!(Monomial::from_parts(&[], &[2, 2]).is_none());
    }

    // Generators 0..3 even, 3..6 odd, with degrees matching their parity.
    const DEGREES: [u64; 6] = [2, 4, 6, 3, 5, 7];

    fn arb_homogeneous() -> impl Strategy<Value = GradedPoly> {
        let mono = (proptest::collection::vec(0u32..3, 0..3), proptest::collection::vec(3u32..6, 0..3));
        proptest::collection::vec((mono, -3i64..4), 1..4).prop_map(|terms| {
            let mut p = GradedPoly::zero(S);
            for ((evens, odds), c) in terms {
                let even: Vec<(u32, u32)> = evens.iter().map(|&g| (g, 1)).collect();
                if let Some((m, neg)) = Monomial::from_parts(&even, &odds) {
                    p.add_term(m, coeff(if neg { -c } else { c }));
                }
            }
            // Keep only the terms of the leading degree to make it homogeneous.
            let Some(d) = p.terms().keys().map(|m| m.degree(&DEGREES).unwrap()).max() else { return p };
            let mut h = GradedPoly::zero(S);
            for (m, c) in p.terms() {
                if m.degree(&DEGREES).unwrap() == d {
                    h.add_term(m.clone(), c.clone());
                }
            }
            h
        })
    }

    proptest! {
        #[test]
        fn graded_commutativity(p in arb_homogeneous(), q in arb_homogeneous()) {
            let dp = p.homogeneous_degree(&DEGREES).unwrap().unwrap_or(0);
            let dq = q.homogeneous_degree(&DEGREES).unwrap().unwrap_or(0);
            let sign = if dp % 2 == 1 && dq % 2 == 1 { coeff(-1) } else { coeff(1) };
            prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap().scale(&sign));
        }

        #[test]
        fn multiplication_is_associative(p in arb_homogeneous(), q in arb_homogeneous(), r in arb_homogeneous()) {
            prop_assert_eq!(p.mul(&q).unwrap().mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        }
    }
}
