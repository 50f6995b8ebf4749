//! Random hosts with a prescribed minimum degree and random trees.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::Tree;

/// Uniform labelled tree on `n` vertices via a random Prüfer sequence.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Tree {
    assert!(n >= 1);
    if n <= 2 {
        let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
        return Tree::from_edges(n, &edges).expect("tiny tree");
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    for &s in &seq {
        let leaf = leaves.pop_first().expect("a leaf remains");
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    Tree::from_edges(n, &edges).expect("Prüfer decoding yields a tree")
}

/// Random tree on `n` vertices with leaf-degree at most `max_ld ≥ 1`.
///
/// For `max_ld ≥ 2` the tree grows one leaf at a time under a vertex that keeps the bound
/// (a current leaf always does). For `max_ld = 1` a random core gets one pendant per core
/// leaf and optionally one per inner core vertex; no such tree has 3 vertices.
pub fn random_tree_with_leaf_degree(n: usize, max_ld: usize, rng: &mut impl Rng) -> Tree {
    assert!(n >= 1 && max_ld >= 1);
    assert!(
        max_ld >= 2 || n != 3,
        "every tree on 3 vertices has leaf-degree 2"
    );
    if n <= 2 || max_ld >= 2 {
        return grow_with_leaf_degree(n, max_ld, rng);
    }
    loop {
        let m = rng.gen_range(n.div_ceil(2)..=n - 2);
        let core = if rng.gen_bool(0.1) {
            Tree::path(m)
        } else {
            random_tree(m, rng)
        };
        let leaves = core.leaves();
        if m + leaves.len() > n {
            continue;
        }
        let mut edges = core.edges().to_vec();
        let mut next = m;
        for &l in &leaves {
            edges.push((l, next));
            next += 1;
        }
        let mut inner: Vec<usize> = (0..m).filter(|&v| !core.is_leaf(v)).collect();
        inner.shuffle(rng);
        for &v in inner.iter().take(n - next) {
            edges.push((v, next));
            next += 1;
        }
        return Tree::from_edges(n, &edges).expect("core plus pendants");
    }
}

fn grow_with_leaf_degree(n: usize, max_ld: usize, rng: &mut impl Rng) -> Tree {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let leaf_nbrs =
        |adj: &Vec<Vec<usize>>, x: usize| adj[x].iter().filter(|&&y| adj[y].len() == 1).count();
    for v in 1..n {
        let mut order: Vec<usize> = (0..v).collect();
        order.shuffle(rng);
        let x = order
            .into_iter()
            .find(|&x| {
                adj[x].push(v);
                adj[v].push(x);
                let fine = std::iter::once(x)
                    .chain(adj[x].clone())
                    .all(|y| leaf_nbrs(&adj, y) <= max_ld);
                adj[x].pop();
                adj[v].pop();
                fine
            })
            .expect("attaching below a leaf keeps the bound");
        adj[x].push(v);
        adj[v].push(x);
        edges.push((x, v));
    }
    Tree::from_edges(n, &edges).expect("grown tree")
}

fn connected_after_removal(adj: &[Vec<usize>], u: usize, v: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![u];
    seen[u] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if (x == u && y == v) || (x == v && y == u) || seen[y] {
                continue;
            }
            if y == v {
                return true;
            }
            seen[y] = true;
            stack.push(y);
        }
    }
    false
}

fn remove(adj: &mut [Vec<usize>], u: usize, v: usize) {
    adj[u].retain(|&w| w != v);
    adj[v].retain(|&w| w != u);
}

/// Random connected graph on `n` vertices with minimum degree exactly `min_deg`.
///
/// Dense targets delete random edges from `K_n`; sparse ones grow a random tree and add edges
/// at deficient vertices. Either way a final pass trims a minimum-degree vertex down to the
/// target, and the result is audited; a failed audit retries.
pub fn random_graph(n: usize, min_deg: usize, rng: &mut impl Rng) -> Result<Graph> {
    if n == 0 || min_deg >= n || (n > 1 && min_deg == 0) {
        return Err(Error::PreconditionViolated(format!(
            "no connected graph on {n} vertices has minimum degree {min_deg}"
        )));
    }
    let mut last = None;
    for _ in 0..64 {
        match attempt(n, min_deg, rng) {
            Ok(g) => return Ok(g),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn attempt(n: usize, min_deg: usize, rng: &mut impl Rng) -> Result<Graph> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    if 2 * min_deg >= n {
        for (u, list) in adj.iter_mut().enumerate() {
            list.extend((0..n).filter(|&v| v != u));
        }
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        pairs.shuffle(rng);
        let keep_prob: f64 = rng.gen_range(0.0..1.0);
        for (u, v) in pairs {
            if adj[u].len() > min_deg
                && adj[v].len() > min_deg
                && rng.gen_bool(1.0 - keep_prob * 0.5)
            {
                remove(&mut adj, u, v);
            }
        }
    } else {
        let t = random_tree(n, rng);
        for &(u, v) in t.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let extra = rng.gen_range(0..=n);
        for _ in 0..extra {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        loop {
            let deficient: Vec<usize> = (0..n).filter(|&v| adj[v].len() < min_deg).collect();
            let Some(&v) = deficient.choose(rng) else {
                break;
            };
            let mut candidates: Vec<usize> =
                (0..n).filter(|&u| u != v && !adj[v].contains(&u)).collect();
            candidates.shuffle(rng);
            candidates.sort_by_key(|&u| adj[u].len() >= min_deg);
            let u = candidates[0];
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    // Trim so that some vertex has degree exactly `min_deg`.
    if adj.iter().all(|l| l.len() > min_deg) {
        let v = (0..n).min_by_key(|&v| adj[v].len()).expect("n ≥ 1");
        let mut nbrs = adj[v].clone();
        nbrs.shuffle(rng);
        for u in nbrs {
            if adj[v].len() == min_deg {
                break;
            }
            if adj[u].len() > min_deg && connected_after_removal(&adj, u, v) {
                remove(&mut adj, u, v);
            }
        }
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    let g = Graph::from_edges(n, &edges)?;
    if g.delta() != min_deg || !g.is_connected() {
        return Err(Error::Stuck(format!(
            "generated graph has δ={} (target {min_deg})",
            g.delta()
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    #[test]
    fn graphs_hit_target_degree() {
        let mut r = rng(1);
        for (n, d) in [(54, 48), (12, 3), (10, 9), (9, 1), (30, 14), (8, 4)] {
            for _ in 0..10 {
                let g = random_graph(n, d, &mut r).unwrap();
                assert_eq!((g.n(), g.delta()), (n, d));
                assert!(g.is_connected());
            }
        }
        assert!(random_graph(5, 5, &mut r).is_err());
    }

    #[test]
    fn trees_respect_leaf_degree() {
        let mut r = rng(2);
        for n in [1, 2, 4, 5, 20, 50] {
            let t = random_tree(n, &mut r);
            assert_eq!(t.n(), n);
            let t = random_tree_with_leaf_degree(n, 1, &mut r);
            assert_eq!(t.n(), n);
            if n > 2 {
                assert_eq!(t.leaf_degree().unwrap().0, 1);
            }
            if n > 1 {
                assert!(
                    random_tree_with_leaf_degree(n, 2, &mut r)
                        .leaf_degree()
                        .unwrap()
                        .0
                        <= 2
                );
            }
        }
    }
}
