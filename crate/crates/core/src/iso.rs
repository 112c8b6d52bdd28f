//! Group isomorphism testing by backtracking over generator images.

use crate::budget::SearchBudget;
use crate::error::Result;
use crate::group::{greedy_generators, FiniteGroup};

/// True when `map` is a multiplication-preserving bijection `a → b`.
pub fn is_isomorphism(a: &FiniteGroup, b: &FiniteGroup, map: &[usize]) -> bool {
    if a.order() != b.order() || map.len() != a.order() {
        return false;
    }
    let mut seen = vec![false; b.order()];
    for &y in map {
        if y >= b.order() || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    a.elements().all(|x| a.elements().all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])))
}

/// Finds an isomorphism `a → b` (as an element map), or `None` when the
/// groups are not isomorphic.
pub fn isomorphism_search(a: &FiniteGroup, b: &FiniteGroup, budget: &SearchBudget) -> Result<Option<Vec<usize>>> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() {
        return Ok(None);
    }
    let gens = greedy_generators(a, &a.whole());
    let orders_b: Vec<usize> = b.elements().map(|y| b.element_order(y)).collect();
    let mut images = Vec::with_capacity(gens.len());
    let found = extend(a, b, &gens, &orders_b, &mut images, budget)?;
    Ok(found.inspect(|map| debug_assert!(is_isomorphism(a, b, map))))
}

fn extend(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    orders_b: &[usize],
    images: &mut Vec<usize>,
    budget: &SearchBudget,
) -> Result<Option<Vec<usize>>> {
    budget.tick()?;
    let Some(map) = propagate(a, b, &gens[..images.len()], images) else {
        return Ok(None);
    };
    if images.len() == gens.len() {
        return Ok(Some(map.into_iter().map(|y| y.expect("generators cover the group")).collect()));
    }
    let g = gens[images.len()];
    let want = a.element_order(g);
    for y in b.elements() {
        if orders_b[y] != want {
            continue;
        }
        images.push(y);
        let found = extend(a, b, gens, orders_b, images, budget)?;
        images.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Extends the generator assignment to the subgroup it generates, returning
/// `None` on a conflict or a collision.
fn propagate(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let mut map = vec![None; a.order()];
    let mut used = vec![false; b.order()];
    map[a.identity()] = Some(b.identity());
    used[b.identity()] = true;
    let mut stack = vec![a.identity()];
    while let Some(x) = stack.pop() {
        let fx = map[x].expect("visited");
        for (&s, &t) in gens.iter().zip(images) {
            let xs = a.mul(x, s);
            let want = b.mul(fx, t);
            match map[xs] {
                Some(v) if v != want => return None,
                Some(_) => {}
                None => {
                    if std::mem::replace(&mut used[want], true) {
                        return None;
                    }
                    map[xs] = Some(want);
                    stack.push(xs);
                }
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, klein4, symmetric, DirectProduct};

    fn quaternion() -> FiniteGroup {
        // Elements ±1, ±i, ±j, ±k encoded as sign·unit with unit ∈ {1,i,j,k}.
        let unit_mul = |u: usize, v: usize| -> (bool, usize) {
            match (u, v) {
                (0, w) | (w, 0) => (false, w),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|x: usize| {
                (0..8)
                    .map(|y: usize| {
                        let (neg, w) = unit_mul(x % 4, y % 4);
                        let sign = (x / 4 + y / 4 + neg as usize) % 2;
                        sign * 4 + w
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table).unwrap()
    }

    fn product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup {
        DirectProduct::new(&a, &b).unwrap().group().clone()
    }

    /// Tries every bijection; usable up to order 8.
    fn brute_force_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        fn go(a: &FiniteGroup, b: &FiniteGroup, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let x = map.len();
            if x == a.order() {
                return is_isomorphism(a, b, map);
            }
            for y in b.elements() {
                if used[y] {
                    continue;
                }
                used[y] = true;
                map.push(y);
                // Check products among already assigned elements.
                let ok = (0..=x).all(|p| {
                    (0..=x).all(|q| {
                        let pq = a.mul(p, q);
                        pq > x || map[pq] == b.mul(map[p], map[q])
                    })
                });
                if ok && go(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[y] = false;
            }
            false
        }
        a.order() == b.order() && go(a, b, &mut Vec::new(), &mut vec![false; b.order()])
    }

    #[test]
    fn z4_with_itself() {
        let z4 = cyclic(4).unwrap();
        let m = isomorphism_search(&z4, &z4, &SearchBudget::default()).unwrap().unwrap();
        assert!(is_isomorphism(&z4, &z4, &m));
    }

    #[test]
    fn z4_and_klein_are_not_isomorphic() {
        let r = isomorphism_search(&cyclic(4).unwrap(), &klein4(), &SearchBudget::default()).unwrap();
        assert_eq!(r, None);
        assert!(!brute_force_isomorphic(&cyclic(4).unwrap(), &klein4()));
    }

    #[test]
    fn cyclic_subgroup_of_z8_x_z4_is_z4() {
        let p = DirectProduct::new(&cyclic(8).unwrap(), &cyclic(4).unwrap()).unwrap();
        let h = p.subgroup_from_pairs(&[(2, 2)]).unwrap();
        let (hg, _) = p.group().subgroup_as_group(&h).unwrap();
        let z4 = cyclic(4).unwrap();
        assert!(brute_force_isomorphic(&hg, &z4));
        let m = isomorphism_search(&hg, &z4, &SearchBudget::default()).unwrap().unwrap();
        assert!(is_isomorphism(&hg, &z4, &m));
    }

    #[test]
    fn budget_is_enforced() {
        let g = symmetric(4).unwrap();
        let r = isomorphism_search(&g, &g, &SearchBudget::new(1));
        assert!(r.is_err());
    }

    #[test]
    fn agrees_with_all_bijections_up_to_order_eight() {
        let groups = vec![
            cyclic(1).unwrap(),
            cyclic(2).unwrap(),
            cyclic(3).unwrap(),
            cyclic(4).unwrap(),
            klein4(),
            cyclic(5).unwrap(),
            cyclic(6).unwrap(),
            symmetric(3).unwrap(),
            dihedral(3).unwrap(),
            product(cyclic(2).unwrap(), cyclic(3).unwrap()),
            cyclic(7).unwrap(),
            cyclic(8).unwrap(),
            product(cyclic(4).unwrap(), cyclic(2).unwrap()),
            product(klein4(), cyclic(2).unwrap()),
            dihedral(4).unwrap(),
            quaternion(),
        ];
        for a in &groups {
            for b in &groups {
                if a.order() != b.order() {
                    continue;
                }
                let fast = isomorphism_search(a, b, &SearchBudget::default()).unwrap();
                let slow = brute_force_isomorphic(a, b);
                assert_eq!(fast.is_some(), slow, "{a:?} vs {b:?}");
                if let Some(m) = fast {
                    assert!(is_isomorphism(a, b, &m));
                }
            }
        }
    }
}
