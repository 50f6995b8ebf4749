//! Hosts with few vertices beyond their minimum degree: every tree with small leaf-degree
//! embeds, built one leaf at a time with local rewiring.

use crate::embedding::{greedy_extend, verify, verify_full, PartialEmbedding};
use crate::error::{pre, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::tree::Tree;

/// Lower bound on any hitting set of the family `{N_T(v)}`.
pub fn hitting_set_lower_bound(t: &Tree) -> usize {
    let n = t.n() as i64;
    let l = t.leaves().len() as i64;
    let num = n - 3 * l + 6;
    if num <= 0 {
        0
    } else {
        ((num + 1) / 2) as usize
    }
}

/// Maximum number of leaf neighbors inside the subtree induced by `alive`.
fn leaf_degree_within(t: &Tree, alive: &VertexSet) -> usize {
    let deg = |x: usize| {
        t.neighbors(x)
            .iter()
            .filter(|&&y| alive.contains(y))
            .count()
    };
    alive
        .ones()
        .map(|x| {
            t.neighbors(x)
                .iter()
                .filter(|&&y| alive.contains(y) && deg(y) == 1)
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Leaves removed from `t` until `keep` vertices remain, each the lowest-index leaf whose
/// removal does not raise the leaf-degree. Returns the removal order and the final vertex set.
pub fn leaf_removal_order(t: &Tree, keep: usize) -> (Vec<usize>, VertexSet) {
    let mut alive = VertexSet::with_capacity(t.n());
    alive.insert_range(..);
    let mut order = Vec::new();
    while alive.count_ones(..) > keep.max(1) {
        let size = alive.count_ones(..);
        let ld = leaf_degree_within(t, &alive);
        let leaves: Vec<usize> = alive
            .ones()
            .filter(|&x| {
                t.neighbors(x)
                    .iter()
                    .filter(|&&y| alive.contains(y))
                    .count()
                    == 1
            })
            .collect();
        let good = leaves.iter().copied().find(|&u| {
            alive.set(u, false);
            let ok = leaf_degree_within(t, &alive) <= ld;
            alive.insert(u);
            ok
        });
        // Every tree other than P_4 (and trees on at most 3 vertices) has such a leaf.
        assert!(
            good.is_some() || size <= 4,
            "no leaf keeps the leaf-degree on a tree with {size} vertices"
        );
        let u = good.unwrap_or(leaves[0]);
        alive.set(u, false);
        order.push(u);
    }
    (order, alive)
}

fn neighbor_in(t: &Tree, alive: &VertexSet, u: usize) -> usize {
    *t.neighbors(u)
        .iter()
        .find(|&&y| alive.contains(y))
        .expect("leaf has a neighbor in the current tree")
}

fn is_leaf_within(t: &Tree, alive: &VertexSet, x: usize) -> bool {
    t.neighbors(x)
        .iter()
        .filter(|&&y| alive.contains(y))
        .count()
        == 1
}

/// Maps `u` onto the old image of a leaf `ℓ` adjacent to `v`'s image, and moves `ℓ` to a free
/// vertex adjacent to the image of `ℓ`'s anchor.
fn try_leaf_swap(
    g: &Graph,
    t: &Tree,
    alive: &VertexSet,
    e: &mut PartialEmbedding,
    u: usize,
    v: usize,
) -> bool {
    let gv = e.at(v);
    for x in alive.ones() {
        if x == v || x == u {
            continue;
        }
        let gx = e.at(x);
        let Some(w) = g.neighbors(gx).iter().copied().find(|&w| !e.is_used(w)) else {
            continue;
        };
        let leaf = t.neighbors(x).iter().copied().find(|&l| {
            l != v && alive.contains(l) && is_leaf_within(t, alive, l) && g.has_edge(gv, e.at(l))
        });
        if let Some(l) = leaf {
            let old = e.at(l);
            e.set(l, w);
            e.set(u, old);
            return true;
        }
    }
    false
}

/// Moves a tree vertex `x` with image adjacent to `v`'s to a free vertex adjacent to the images
/// of all of `x`'s neighbors, then maps `u` to `x`'s old image.
fn try_relocation(
    g: &Graph,
    t: &Tree,
    alive: &VertexSet,
    e: &mut PartialEmbedding,
    u: usize,
    v: usize,
) -> bool {
    let gv = e.at(v);
    let outside: Vec<(usize, VertexSet)> = (0..g.n())
        .filter(|&w| !e.is_used(w))
        .map(|w| (w, g.neighbor_set(w)))
        .collect();
    for x in alive.ones() {
        if x == v || x == u || !g.has_edge(gv, e.at(x)) {
            continue;
        }
        let images = crate::graph::vertex_set(
            g.n(),
            t.neighbors(x)
                .iter()
                .filter(|&&y| alive.contains(y))
                .map(|&y| e.at(y)),
        );
        if let Some((w, _)) = outside.iter().find(|(_, nw)| images.is_subset(nw)) {
            let old = e.at(x);
            e.set(x, *w);
            e.set(u, old);
            return true;
        }
    }
    false
}

/// How each added leaf was placed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RewireStats {
    pub free: usize,
    pub swaps: usize,
    pub relocations: usize,
}

fn embed_dense_inner(
    g: &Graph,
    t: &Tree,
    k: usize,
    strict: bool,
) -> Result<(PartialEmbedding, RewireStats)> {
    let mut stats = RewireStats::default();
    let delta = g.delta();
    let (order, mut alive) = leaf_removal_order(t, delta + 1);
    let mut e = PartialEmbedding::new(t.n(), g.n());
    greedy_extend(g, t, &mut e, Some(&alive), None)
        .expect("a tree on at most δ+1 vertices always extends greedily");
    let slack = g.n() - delta;
    for &u in order.iter().rev() {
        let v = neighbor_in(t, &alive, u);
        alive.insert(u);
        let gv = e.at(v);
        if let Some(w) = g.neighbors(gv).iter().copied().find(|&w| !e.is_used(w)) {
            e.set(u, w);
            stats.free += 1;
        } else {
            let leafcount = alive
                .ones()
                .filter(|&x| is_leaf_within(t, &alive, x))
                .count();
            let many_leaves = leafcount >= (slack + k) * k.saturating_sub(1);
            if many_leaves && try_leaf_swap(g, t, &alive, &mut e, u, v) {
                stats.swaps += 1;
            } else if try_relocation(g, t, &alive, &mut e, u, v) {
                stats.relocations += 1;
            } else if !many_leaves && try_leaf_swap(g, t, &alive, &mut e, u, v) {
                stats.swaps += 1;
            } else {
                assert!(!strict, "no rewiring applies when adding tree vertex {u}");
                return Err(Error::Stuck(format!(
                    "no rewiring applies when adding tree vertex {u}"
                )));
            }
        }
        debug_assert!(verify(&e, g, t), "rewiring broke the embedding");
    }
    assert!(
        verify_full(&e, g, t),
        "dense construction produced an invalid embedding"
    );
    Ok((e, stats))
}

/// Embeds `t` when `δ+k ≤ |V(G)| ≤ (1 + 1/(4k))·δ`, `δ ≥ 12k²`, `|V(T)| ≤ δ+k` and `ld(T) < k`.
pub fn embed_dense(g: &Graph, t: &Tree, k: usize) -> Result<PartialEmbedding> {
    embed_dense_with_stats(g, t, k).map(|(e, _)| e)
}

/// As [`embed_dense`], also reporting which placement rule fired at each step.
pub fn embed_dense_with_stats(
    g: &Graph,
    t: &Tree,
    k: usize,
) -> Result<(PartialEmbedding, RewireStats)> {
    pre(k >= 1 && g.n() > 0, || {
        "k must be positive and G non-empty".into()
    })?;
    let delta = g.delta();
    pre(delta + k <= g.n(), || {
        format!("|V(G)|={} below δ+k={}", g.n(), delta + k)
    })?;
    pre(4 * k * g.n() <= (4 * k + 1) * delta, || {
        format!("|V(G)|={} exceeds (1+1/(4k))δ", g.n())
    })?;
    pre(delta >= 12 * k * k, || {
        format!("δ={delta} below 12k²={}", 12 * k * k)
    })?;
    pre(t.n() <= delta + k, || {
        format!("|V(T)|={} exceeds δ+k={}", t.n(), delta + k)
    })?;
    let (ld, _) = t.leaf_degree()?;
    pre(ld < k, || format!("ld(T)={ld} is not below k={k}"))?;
    embed_dense_inner(g, t, k, true)
}

/// Runs the same construction without the size and degree thresholds; fails with `Stuck`
/// when no rewiring applies.
pub fn embed_dense_relaxed(g: &Graph, t: &Tree) -> Result<PartialEmbedding> {
    pre(g.n() > 0 && t.n() <= g.n(), || {
        format!("|V(T)|={} exceeds |V(G)|={}", t.n(), g.n())
    })?;
    let k = t.n().saturating_sub(g.delta()).max(1);
    embed_dense_inner(g, t, k, false).map(|(e, _)| e)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::seq::SliceRandom;

    /// `K_n` minus random edges while every degree stays at least `min_deg`.
    pub fn dense_host(n: usize, min_deg: usize, seed: u64) -> Graph {
        let mut rng = crate::seed::rng(seed);
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        pairs.shuffle(&mut rng);
        let mut deg = vec![n - 1; n];
        let mut kept = Vec::new();
        for (u, v) in pairs {
            if deg[u] > min_deg && deg[v] > min_deg {
                deg[u] -= 1;
                deg[v] -= 1;
            } else {
                kept.push((u, v));
            }
        }
        Graph::from_edges(n, &kept).unwrap()
    }

    #[test]
    fn bound_examples() {
        assert_eq!(hitting_set_lower_bound(&Tree::path(6)), 3);
        assert_eq!(hitting_set_lower_bound(&Tree::star(5)), 0);
        assert_eq!(hitting_set_lower_bound(&Tree::path(7)), 4);
    }

    #[test]
    fn removal_keeps_leaf_degree() {
        let t = Tree::caterpillar(&[1, 0, 1, 0, 1, 0, 1]);
        let (ld, _) = t.leaf_degree().unwrap();
        let (order, alive) = leaf_removal_order(&t, 5);
        assert_eq!(alive.count_ones(..), 5);
        assert_eq!(order.len(), t.n() - 5);
        assert!(leaf_degree_within(&t, &alive) <= ld);
    }

    #[test]
    fn dense_path_and_caterpillar() {
        let g = dense_host(52, 48, 11);
        assert_eq!(g.delta(), 48);
        let e = embed_dense(&g, &Tree::path(50), 2).unwrap();
        assert!(verify_full(&e, &g, &Tree::path(50)));
        let cat = Tree::caterpillar(&[1; 25]);
        assert_eq!(cat.n(), 50);
        assert_eq!(cat.leaf_degree().unwrap().0, 1);
        let e = embed_dense(&g, &cat, 2).unwrap();
        assert!(verify_full(&e, &g, &cat));
    }

    #[test]
    fn rewiring_branches_fire() {
        let mut total = RewireStats::default();
        for seed in 0..20 {
            let g = dense_host(50, 48, seed);
            for t in [
                Tree::path(50),
                Tree::caterpillar(&[1; 25]),
                Tree::spider(7, 7),
            ] {
                if t.leaf_degree().unwrap().0 >= 2 || t.n() > 50 {
                    continue;
                }
                let (e, s) = embed_dense_with_stats(&g, &t, 2).unwrap();
                assert!(verify_full(&e, &g, &t));
                total.free += s.free;
                total.swaps += s.swaps;
                total.relocations += s.relocations;
            }
        }
        assert!(total.swaps + total.relocations > 0, "{total:?}");
    }

    #[test]
    fn dense_rejects_large_host() {
        let g = dense_host(60, 48, 3);
        assert!(matches!(
            embed_dense(&g, &Tree::path(50), 2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn relaxed_on_small_hosts() {
        let g = dense_host(12, 9, 5);
        let t = Tree::path(11);
        let e = embed_dense_relaxed(&g, &t).unwrap();
        assert!(verify_full(&e, &g, &t));
    }
}
