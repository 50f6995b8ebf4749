//! Preserving sets and paths: vertex sets that leave every outside vertex enough
//! non-neighbors, and how a long tree is routed through one.

use num_rational::Ratio;

use crate::embedding::{greedy_extend, verify_full, PartialEmbedding};
use crate::error::{pre, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::tree::Tree;

/// Path in `G` whose vertex set is `k`-preserving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservingPath {
    pub vertices: Vec<usize>,
    pub k: usize,
}

impl PreservingPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        crate::graph::vertex_set(n, self.vertices.iter().copied())
    }

    /// Simple, consecutive vertices adjacent, and `k`-preserving.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let set = self.vertex_set(g.n());
        !self.vertices.is_empty()
            && set.count_ones(..) == self.vertices.len()
            && self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
            && preserving_violator(g, &set, self.k).is_none()
    }
}

/// First vertex outside `s` with fewer than `ndef(v)` non-neighbors in `s`.
pub fn preserving_violator(g: &Graph, s: &VertexSet, k: usize) -> Option<usize> {
    (0..g.n()).find(|&v| !s.contains(v) && g.non_neighbors_in(v, s) < g.neighbor_deficiency(v, k))
}

pub fn is_k_preserving(g: &Graph, s: &VertexSet, k: usize) -> bool {
    preserving_violator(g, s, k).is_none()
}

fn checked(g: &Graph, vertices: Vec<usize>, k: usize) -> Result<PreservingPath> {
    let p = PreservingPath { vertices, k };
    if let Some(v) = preserving_violator(g, &p.vertex_set(g.n()), k) {
        return Err(Error::NotPreserving(v));
    }
    assert!(p.is_valid(g), "constructed path is not a simple path");
    Ok(p)
}

/// Embeds `t` by laying a short end-segment of a long path of `t` along `path`.
pub fn embed_via_preserving_path(
    g: &Graph,
    t: &Tree,
    path: &PreservingPath,
    k: usize,
) -> Result<PartialEmbedding> {
    let delta = g.delta();
    pre(g.n() > 0 && delta >= k, || {
        format!("δ(G)={delta} below k={k}")
    })?;
    pre(t.n() == delta + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), delta + k)
    })?;
    pre(path.k == k && path.is_valid(g), || {
        "path is not k-preserving".into()
    })?;
    let m = path.len();
    let (diam, (a, b)) = t.diameter();
    pre(diam + 1 >= 2 * m, || {
        format!("diam(T)={diam} below {}", 2 * m - 1)
    })?;
    let q: Vec<usize> = t.path_between(a, b).into_iter().take(2 * m).collect();
    // Keep the half of q whose side of the middle edge is small.
    let near = t.side_of_edge(q[m], q[m - 1]);
    let r: Vec<usize> = if 2 * near.count_ones(..) <= t.n() {
        q[..m].iter().rev().copied().collect()
    } else {
        q[m..].to_vec()
    };
    let mut e = PartialEmbedding::new(t.n(), g.n());
    for (&x, &v) in r.iter().zip(&path.vertices) {
        e.set(x, v);
    }
    for &x in &r {
        let gx = e.at(x);
        for &y in t.neighbors(x) {
            if e.is_mapped(y) {
                continue;
            }
            let v = g
                .neighbors(gx)
                .iter()
                .copied()
                .find(|&v| !e.is_used(v))
                .expect("the closed neighborhood of the segment has at most δ+1 vertices");
            e.set(y, v);
        }
    }
    greedy_extend(g, t, &mut e, None, None)
        .expect("preserving path leaves every image a free neighbor");
    assert!(
        verify_full(&e, g, t),
        "preserving-path embedding failed to verify"
    );
    Ok(e)
}

/// Puts vertices of `s` between two consecutive path neighbors until none fits.
fn insert_modulator(g: &Graph, path: &mut Vec<usize>, s: &VertexSet) {
    loop {
        let mut changed = false;
        for u in s.ones() {
            if path.contains(&u) {
                continue;
            }
            if let Some(i) = (0..path.len().saturating_sub(1))
                .find(|&i| g.has_edge(u, path[i]) && g.has_edge(u, path[i + 1]))
            {
                path.insert(i + 1, u);
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Path of `len` vertices from `start` inside `inside`, lowest free neighbor first.
fn greedy_path(g: &Graph, start: usize, inside: &VertexSet, len: usize) -> Option<Vec<usize>> {
    let mut p = vec![start];
    while p.len() < len {
        let c = *p.last().expect("nonempty");
        p.push(
            g.neighbors(c)
                .iter()
                .copied()
                .find(|&w| inside.contains(w) && !p.contains(&w))?,
        );
    }
    Some(p)
}

fn shortest_path_of_length(g: &Graph, forbidden: &VertexSet, len: usize) -> Option<Vec<usize>> {
    (0..g.n())
        .filter(|&u| !forbidden.contains(u))
        .find_map(|u| {
            let dist = g.bfs_distances_avoiding(u, forbidden);
            let v = (0..g.n()).find(|&v| dist[v] == len)?;
            g.shortest_path_avoiding(u, v, forbidden)
        })
}

/// Preserving path from a set whose removal leaves diameter at least `2k`.
pub fn modulator_to_preserving_path(g: &Graph, s: &VertexSet, k: usize) -> Result<PreservingPath> {
    pre(g.n() > 0 && g.is_connected(), || {
        "graph must be connected".into()
    })?;
    pre(k >= 1, || "k must be positive".into())?;
    let size = s.count_ones(..);
    pre(g.delta() + 1 >= size + k, || {
        format!("δ(G)={} below |S|+k−1={}", g.delta(), size + k - 1)
    })?;
    let rest_diam = g.diameter_avoiding(s);
    pre(rest_diam.map_or(true, |d| d >= 2 * k), || {
        format!("diam(G−S) below {}", 2 * k)
    })?;
    let connected = rest_diam.is_some();
    let (diam_g, _) = g.diameter()?;
    let (mut path, modulator) = if connected || diam_g >= 2 * k {
        let m = if connected { s.clone() } else { g.empty_set() };
        let p = shortest_path_of_length(g, &m, 2 * k).expect("diameter reaches 2k");
        if cfg!(debug_assertions) {
            let on = crate::graph::vertex_set(g.n(), p.iter().copied());
            for v in (0..g.n()).filter(|&v| !m.contains(v)) {
                debug_assert!(
                    g.neighbors_in(v, &on) <= 3,
                    "shortest path seen thrice by {v}"
                );
            }
        }
        (p, m)
    } else {
        let comps = g.components_avoiding(s);
        let c1 = crate::graph::vertex_set(g.n(), comps[0].iter().copied());
        let c2 = crate::graph::vertex_set(g.n(), comps[1].iter().copied());
        let q = g
            .shortest_path_between_sets(&c1, &c2, &g.empty_set())
            .expect("connected graph");
        let (v1, v2) = (q[0], *q.last().expect("nonempty"));
        let r1 = greedy_path(g, v1, &c1, k)
            .ok_or_else(|| Error::Stuck("component too sparse for R1".into()))?;
        let r2 = greedy_path(g, v2, &c2, k)
            .ok_or_else(|| Error::Stuck("component too sparse for R2".into()))?;
        let mut p: Vec<usize> = r1.into_iter().rev().collect();
        p.extend_from_slice(&q[1..q.len() - 1]);
        p.extend(r2);
        (p, s.clone())
    };
    insert_modulator(g, &mut path, &modulator);
    let bound = 4 * k - 1 + size;
    let out = checked(g, path, k)?;
    debug_assert!(out.len() <= bound.max(2 * k + 1 + size));
    Ok(out)
}

/// Joins a preserving set into a path by short hops in ascending vertex order.
pub fn set_to_preserving_path(g: &Graph, s: &VertexSet, k: usize) -> Result<PreservingPath> {
    pre(g.n() > 0 && g.is_connected(), || {
        "graph must be connected".into()
    })?;
    pre(k >= 1, || "k must be positive".into())?;
    let size = s.count_ones(..);
    pre(size > 0, || "set must be nonempty".into())?;
    pre(is_k_preserving(g, s, k), || {
        "set is not k-preserving".into()
    })?;
    pre(g.delta() >= (2 * k - 1) * size, || {
        format!("δ(G)={} below (2k−1)|S|", g.delta())
    })?;
    let order: Vec<usize> = s.ones().collect();
    let mut path = vec![order[0]];
    for &target in &order[1..] {
        if path.contains(&target) {
            continue;
        }
        let last = *path.last().expect("nonempty");
        let mut forbidden = crate::graph::vertex_set(g.n(), path.iter().copied());
        forbidden.set(last, false);
        match g.diameter_avoiding(&forbidden) {
            Some(d) if d < 2 * k => {
                let hop = g
                    .shortest_path_avoiding(last, target, &forbidden)
                    .expect("remainder is connected");
                path.extend_from_slice(&hop[1..]);
            }
            _ => return modulator_to_preserving_path(g, &forbidden, k),
        }
    }
    checked(g, path, k)
}

/// Vertices of degree below `(1 + ε)·δ(G)`.
pub fn low_degree_vertices(g: &Graph, epsilon: Ratio<u64>) -> VertexSet {
    let delta = g.delta() as u64;
    let (num, den) = (*epsilon.numer(), *epsilon.denom());
    let mut a = g.empty_set();
    for v in 0..g.n() {
        if (g.degree(v) as u64) * den < (den + num) * delta {
            a.insert(v);
        }
    }
    a
}

/// Greedy choice from `alive` until each target has a non-neighbor in the chosen set
/// (a chosen vertex counts as its own non-neighbor).
pub fn anti_dominating_within(g: &Graph, alive: &VertexSet, targets: &VertexSet) -> VertexSet {
    let mut left = targets.clone();
    let mut chosen = g.empty_set();
    while left.count_ones(..) > 0 {
        let best = alive
            .ones()
            .filter(|&u| !chosen.contains(u))
            .max_by_key(|&u| {
                (
                    g.non_neighbors_in(u, &left) + usize::from(left.contains(u)),
                    std::cmp::Reverse(u),
                )
            })
            .expect("some live vertex remains");
        chosen.insert(best);
        let mut nb = g.neighbor_set(best);
        nb.intersect_with(&left);
        left = nb;
    }
    chosen
}

pub fn anti_dominating_bound(delta: usize, epsilon: Ratio<u64>) -> f64 {
    let eps = *epsilon.numer() as f64 / *epsilon.denom() as f64;
    4.0 * (delta as f64).log2() / (1.0 + eps).log2() + 1.0
}

/// Small set with a non-neighbor for every vertex of degree below `(1 + ε)·δ(G)`.
pub fn anti_dominating_set(g: &Graph, epsilon: Ratio<u64>) -> Result<VertexSet> {
    let delta = g.delta();
    pre(g.n() > 0 && delta >= 2, || "δ(G) must be at least 2".into())?;
    let one_eps = Ratio::from_integer(1) + epsilon;
    pre(
        Ratio::from_integer(g.n() as u64) >= one_eps * one_eps * Ratio::from_integer(delta as u64),
        || "graph has too few vertices for ε".into(),
    )?;
    Ok(anti_dominating_within(
        g,
        &g.full_set(),
        &low_degree_vertices(g, epsilon),
    ))
}

/// `4k^p·log₂ δ(G)`, the per-round size budget.
pub fn preserving_round_size(g: &Graph, k: usize, p: u32) -> f64 {
    4.0 * (k as f64).powi(p as i32) * (g.delta().max(1) as f64).log2()
}

/// `k − 1` rounds of anti-domination, each on `G` minus what earlier rounds took, then
/// verified.
pub fn build_preserving_set(g: &Graph, k: usize, p: u32) -> Result<VertexSet> {
    pre(g.n() > 0 && k >= 1, || {
        "need a nonempty graph and k ≥ 1".into()
    })?;
    let q = preserving_round_size(g, k, p);
    let kp = (k as f64).powi(p as i32);
    let delta = g.delta() as f64;
    pre(
        (g.n() as f64) >= (1.0 + 3.0 / kp) * delta + q * k as f64,
        || "too few vertices".into(),
    )?;
    pre(delta >= q * k as f64 * (kp + 1.0), || {
        "minimum degree too small".into()
    })?;
    build_preserving_set_relaxed(g, k)
}

pub fn build_preserving_set_relaxed(g: &Graph, k: usize) -> Result<VertexSet> {
    let mut acc = g.empty_set();
    for _ in 1..k {
        let mut alive = acc.clone();
        alive.toggle_range(..);
        let mut targets = g.empty_set();
        for v in alive.ones().filter(|&v| g.neighbor_deficiency(v, k) > 0) {
            targets.insert(v);
        }
        acc.union_with(&anti_dominating_within(g, &alive, &targets));
    }
    match preserving_violator(g, &acc, k) {
        Some(v) => Err(Error::NotPreserving(v)),
        None => Ok(acc),
    }
}

pub fn large_diameter_threshold(g: &Graph, k: usize) -> f64 {
    8.0 * (k as f64).powi(6) * (g.delta().max(1) as f64).log2()
}

/// Embedding of a long tree through a preserving path built from scratch.
pub fn solve_large_diameter(g: &Graph, t: &Tree, k: usize) -> Result<PartialEmbedding> {
    pre(k >= 3, || "k must be at least 3".into())?;
    pre(g.n() > 0 && g.is_connected(), || {
        "graph must be connected".into()
    })?;
    let delta = g.delta();
    let k4 = (k as f64).powi(4);
    pre((g.n() as f64) >= (1.0 + 4.0 / k4) * delta as f64, || {
        "too few vertices".into()
    })?;
    pre((delta as f64) > (k as f64).powi(16), || {
        format!("δ(G)={delta} not above k^16")
    })?;
    pre(t.n() <= delta + k, || "tree too large".into())?;
    pre(
        t.diameter().0 as f64 >= large_diameter_threshold(g, k),
        || "tree diameter too small".into(),
    )?;
    solve_large_diameter_relaxed(g, t)
}

/// Same pipeline without the numeric thresholds; stages still verify their outputs.
pub fn solve_large_diameter_relaxed(g: &Graph, t: &Tree) -> Result<PartialEmbedding> {
    pre(g.n() > 0 && g.is_connected(), || {
        "graph must be connected".into()
    })?;
    let delta = g.delta();
    pre(t.n() <= g.n(), || "tree larger than host".into())?;
    if t.n() <= delta + 1 {
        return crate::embedding::chvatal_extend(g, t, &PartialEmbedding::new(t.n(), g.n()));
    }
    let k = t.n() - delta;
    let set = build_preserving_set_relaxed(g, k)?;
    let path = if set.count_ones(..) == 0 {
        PreservingPath {
            vertices: vec![0],
            k,
        }
    } else {
        set_to_preserving_path(g, &set, k)?
    };
    embed_via_preserving_path(g, t, &path, k)
}
