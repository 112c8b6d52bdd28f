use super::SimpleGraph;
use crate::budget::SearchBudget;
use crate::digraph::Digraph;
use crate::error::Result;

/// Source vertices in depth-first order over the underlying undirected
/// graph, so each vertex after the first of a component has an assigned
/// neighbour.
fn dfs_order(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            order.push(u);
            for v in (0..n).rev() {
                if !seen[v] && adjacent(u, v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    order
}

/// Whether source vertex `v` may map to `y` given the partial map.
type Feasible<'a> = dyn Fn(usize, usize, &[Option<usize>]) -> bool + 'a;

fn backtrack(
    order: &[usize],
    targets: usize,
    ok: &Feasible,
    map: &mut Vec<Option<usize>>,
    out: &mut Vec<Vec<usize>>,
    budget: &SearchBudget,
) -> Result<()> {
    budget.tick()?;
    let Some((&v, rest)) = order.split_first() else {
        out.push(map.iter().map(|m| m.expect("all assigned")).collect());
        return Ok(());
    };
    for y in 0..targets {
        if ok(v, y, map) {
            map[v] = Some(y);
            backtrack(rest, targets, ok, map, out, budget)?;
            map[v] = None;
        }
    }
    Ok(())
}

/// All edge-preserving vertex maps between digraphs satisfying the
/// standing hypothesis (strongly connected, more than one vertex).
pub fn enumerate_digraph_homomorphisms(a: &Digraph, b: &Digraph, budget: &SearchBudget) -> Result<Vec<Vec<usize>>> {
    a.check_standing_hypothesis()?;
    b.check_standing_hypothesis()?;
    let order = dfs_order(a.num_vertices(), |u, v| a.has_edge(u, v) || a.has_edge(v, u));
    let ok = |v: usize, y: usize, map: &[Option<usize>]| {
        map.iter().enumerate().all(|(u, &m)| match m {
            None => true,
            Some(x) => (!a.has_edge(u, v) || b.has_edge(x, y)) && (!a.has_edge(v, u) || b.has_edge(y, x)),
        })
    };
    let mut out = Vec::new();
    backtrack(&order, b.num_vertices(), &ok, &mut vec![None; a.num_vertices()], &mut out, budget)?;
    out.sort();
    Ok(out)
}

/// All adjacency-preserving vertex maps between simple graphs.
pub fn enumerate_graph_homomorphisms(
    a: &SimpleGraph,
    b: &SimpleGraph,
    budget: &SearchBudget,
) -> Result<Vec<Vec<usize>>> {
    let order = dfs_order(a.len(), |u, v| a.has_edge(u, v));
    let ok = |v: usize, y: usize, map: &[Option<usize>]| {
        a.neighbours(v).iter().all(|&u| map[u].is_none_or(|x| b.has_edge(x, y)))
    };
    let mut out = Vec::new();
    backtrack(&order, b.len(), &ok, &mut vec![None; a.len()], &mut out, budget)?;
    out.sort();
    Ok(out)
}
