//! Trees with a vertex carrying at least `k − 1` leaves.

use rand::RngCore;

use crate::color_coding::{
    contains_tree_by_size_with, solve_ahsc_with, AhscInstance, AhscOutcome, Budget,
};
use crate::embedding::{complete_leaves, verify_full, PartialEmbedding};
use crate::error::{pre, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::outcome::{Branch, ExactReason, NotFoundReason, SolveOutcome};
use crate::tree::Tree;

/// Minimum degree from which the constructive ladder is guaranteed to succeed.
pub fn ladder_min_delta(k: usize) -> usize {
    11 * k * k
}

/// Neighbors of `v` with at least `k − 1` neighbors outside `N[v]`.
pub fn expanding_neighbors(g: &Graph, v: usize, k: usize) -> Vec<usize> {
    let closed = g.closed_neighbor_set(v);
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&x| g.degree(x) - g.neighbors_in(x, &closed) >= k.saturating_sub(1))
        .collect()
}

/// Walk from `v` alternating into and out of `N(v)` so that at least `k − 1` of its
/// vertices land outside `N[v]`.
pub fn build_expanding_walk(g: &Graph, v: usize, length: usize, k: usize) -> Result<Vec<usize>> {
    let expanding = expanding_neighbors(g, v, k);
    if expanding.len() < 3 * k {
        return Err(Error::NotEnoughExpanding(v));
    }
    let open = g.neighbor_set(v);
    let mut is_exp = VertexSet::with_capacity(g.n());
    for &x in &expanding {
        is_exp.insert(x);
    }
    let mut used = VertexSet::with_capacity(g.n());
    used.insert(v);
    let mut walk = vec![v];
    while walk.len() <= length {
        let c = *walk.last().expect("nonempty");
        let next = g.neighbors(c).iter().copied().find(|&w| {
            !used.contains(w)
                && if !open.contains(c) {
                    true
                } else if !is_exp.contains(c) {
                    is_exp.contains(w)
                } else {
                    !open.contains(w)
                }
        });
        match next {
            Some(w) => {
                used.insert(w);
                walk.push(w);
            }
            None => break,
        }
    }
    let outside = walk
        .iter()
        .filter(|&&w| w != v && !open.contains(w))
        .count();
    if outside + 1 < k {
        return Err(Error::Stuck(format!(
            "walk from {v} leaves N[v] only {outside} times"
        )));
    }
    Ok(walk)
}

fn anchor_leaves(t: &Tree, s: usize, k: usize) -> Vec<usize> {
    t.neighbors(s)
        .iter()
        .copied()
        .filter(|&l| t.is_leaf(l))
        .take(k - 1)
        .collect()
}

fn check_ladder_pre(
    g: &Graph,
    t: &Tree,
    s: usize,
    k: usize,
    min_delta: usize,
) -> Result<Vec<usize>> {
    pre(k >= 1 && s < t.n(), || "need k ≥ 1 and s in T".into())?;
    pre(g.n() > 0 && t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })?;
    pre(anchor_leaves(t, s, k).len() == k - 1, || {
        format!("{s} has fewer than {} leaf neighbors", k - 1)
    })?;
    pre(g.n() >= t.n(), || "host smaller than tree".into())?;
    pre(g.delta() >= min_delta, || {
        format!("δ(G)={} below {min_delta}", g.delta())
    })?;
    t.path_from(s, 3 * k).ok_or_else(|| {
        Error::PreconditionViolated(format!("no path with {} edges from {s}", 3 * k))
    })
}

/// Embedding of `t` guaranteed when `δ(G) ≥ 11k²` and a long path leaves `s`.
pub fn embed_high_leaf_degree_unconditional(
    g: &Graph,
    t: &Tree,
    s: usize,
    k: usize,
) -> Result<PartialEmbedding> {
    let path = check_ladder_pre(g, t, s, k, ladder_min_delta(k))?;
    Ok(ladder(g, t, s, k, &path).unwrap_or_else(|m| panic!("high leaf-degree ladder failed: {m}")))
}

/// Same construction with an explicit degree threshold; failure is reported, not fatal.
pub fn embed_high_leaf_degree_relaxed(
    g: &Graph,
    t: &Tree,
    s: usize,
    k: usize,
    min_delta: usize,
) -> Result<PartialEmbedding> {
    let path = check_ladder_pre(g, t, s, k, min_delta)?;
    ladder(g, t, s, k, &path).map_err(Error::Stuck)
}

fn finish(
    g: &Graph,
    t: &Tree,
    leaves: &[usize],
    pairs: &[(usize, usize)],
) -> Option<PartialEmbedding> {
    let partial = PartialEmbedding::from_pairs(t.n(), g.n(), pairs).ok()?;
    complete_leaves(g, t, leaves, &partial).ok()
}

/// Extends `seq` greedily by unused neighbors inside `inside` until it has `len` vertices.
fn grow_inside(g: &Graph, seq: &mut Vec<usize>, inside: &VertexSet, len: usize) -> bool {
    while seq.len() < len {
        let c = *seq.last().expect("nonempty");
        match g
            .neighbors(c)
            .iter()
            .copied()
            .find(|&w| inside.contains(w) && !seq.contains(&w))
        {
            Some(w) => seq.push(w),
            None => return false,
        }
    }
    true
}

fn ladder(
    g: &Graph,
    t: &Tree,
    s: usize,
    k: usize,
    path: &[usize],
) -> std::result::Result<PartialEmbedding, String> {
    let leaves = anchor_leaves(t, s, k);
    let delta = g.delta();
    let n = g.n();

    // A vertex with no deficiency takes s on its own.
    if let Some(v) = (0..n).find(|&v| g.degree(v) + 1 >= delta + k) {
        if let Some(e) = finish(g, t, &leaves, &[(s, v)]) {
            return Ok(e);
        }
    }

    for v in 0..n {
        if let Ok(walk) = build_expanding_walk(g, v, 3 * k, k) {
            let pairs: Vec<(usize, usize)> = path.iter().copied().zip(walk).collect();
            if let Some(e) = finish(g, t, &leaves, &pairs) {
                return Ok(e);
            }
        }
    }

    let non_expanding = |v: usize| -> VertexSet {
        let mut b = g.neighbor_set(v);
        for x in expanding_neighbors(g, v, k) {
            b.set(x, false);
        }
        b
    };
    let prefix = k + 1;
    let (diam, _) = g.diameter().map_err(|e| e.to_string())?;
    if diam >= 3 {
        for u in 0..n {
            let dist = g.bfs_distances(u);
            for v in (0..n).filter(|&v| dist[v] == 3) {
                let inside = non_expanding(v);
                for &a in g.neighbors(u) {
                    for &b in g.neighbors(a).iter().filter(|&&b| g.has_edge(b, v)) {
                        let mut seq = vec![u, a, b];
                        seq.truncate(prefix);
                        if !grow_inside(g, &mut seq, &inside, prefix) {
                            continue;
                        }
                        let pairs: Vec<_> = path.iter().copied().zip(seq).collect();
                        if let Some(e) = finish(g, t, &leaves, &pairs) {
                            return Ok(e);
                        }
                    }
                }
            }
        }
    } else {
        for u in 0..n {
            let mut inside = non_expanding(u);
            for v in (0..n).filter(|&v| v != u && !g.has_edge(u, v)) {
                let common: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&c| g.has_edge(c, v))
                    .collect();
                if common.len() >= 6 * k {
                    continue;
                }
                let saved = inside.clone();
                inside.difference_with(&g.neighbor_set(v));
                for &c in &common {
                    let mut seq = vec![v, c, u];
                    seq.truncate(prefix);
                    if grow_inside(g, &mut seq, &inside, prefix) {
                        let pairs: Vec<_> = path.iter().copied().zip(seq).collect();
                        if let Some(e) = finish(g, t, &leaves, &pairs) {
                            return Ok(e);
                        }
                    }
                }
                inside = saved;
            }
        }
    }
    Err(format!(
        "no constructive case applies (δ={delta}, k={k}, diam={diam})"
    ))
}

/// Decides containment when some vertex of `t` has at least `k − 1` leaf neighbors.
pub fn solve_high_leaf_degree(
    g: &Graph,
    t: &Tree,
    k: usize,
    failure_exponent: u32,
    rng: &mut impl RngCore,
) -> Result<SolveOutcome> {
    solve_high_leaf_degree_with(
        g,
        t,
        k,
        &Budget::new(failure_exponent, rng.next_u64()),
        ladder_min_delta(k),
    )
}

/// `min_delta` replaces the `11k²` threshold; below the literal threshold a failed ladder
/// falls back to whole-tree color coding.
pub fn solve_high_leaf_degree_with(
    g: &Graph,
    t: &Tree,
    k: usize,
    budget: &Budget,
    min_delta: usize,
) -> Result<SolveOutcome> {
    pre(g.n() > 0, || "empty graph".into())?;
    let (ld, s) = t.leaf_degree()?;
    pre(k >= 1 && ld + 1 >= k, || {
        format!("ld(T)={ld} < k−1={}", k.saturating_sub(1))
    })?;
    pre(t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })?;
    if t.n() > g.n() {
        return Ok(SolveOutcome::NotContained {
            reason: ExactReason::Size,
        });
    }
    if g.delta() < min_delta {
        return Ok(contains_tree_by_size_with(g, t, budget));
    }
    if t.path_from(s, 3 * k).is_none() {
        return Ok(short_tree_branch(g, t, s, k, budget));
    }
    if min_delta >= ladder_min_delta(k) {
        let e = embed_high_leaf_degree_unconditional(g, t, s, k)?;
        return Ok(SolveOutcome::Contains {
            embedding: e,
            branch: Branch::HighLeafDegree,
        });
    }
    match embed_high_leaf_degree_relaxed(g, t, s, k, min_delta) {
        Ok(e) => Ok(SolveOutcome::Contains {
            embedding: e,
            branch: Branch::HighLeafDegree,
        }),
        Err(Error::Stuck(_)) => Ok(contains_tree_by_size_with(g, t, budget)),
        Err(e) => Err(e),
    }
}

/// Guess the image of `s` and solve the hitting-subtree instance that forces `ndef`
/// vertices outside its closed neighborhood.
fn short_tree_branch(g: &Graph, t: &Tree, s: usize, k: usize, budget: &Budget) -> SolveOutcome {
    let leaves = anchor_leaves(t, s, k);
    let mut exhaustive = true;
    let mut rounds = 0u64;
    for v in 0..g.n() {
        let mut far = g.closed_neighbor_set(v);
        far.toggle_range(..);
        let need = g.neighbor_deficiency(v, k);
        if need > far.count_ones(..) {
            continue;
        }
        let inst = AhscInstance {
            g,
            t,
            kappa: vec![(s, v)],
            families: vec![(far, need)],
        };
        match solve_ahsc_with(&inst, &budget.child(v as u64)).expect("instance is valid") {
            AhscOutcome::Found {
                mut subtree,
                embedding,
            } => {
                for l in t.neighbors(s).iter().copied().filter(|&l| t.is_leaf(l)) {
                    subtree.set(l, false);
                }
                let partial = embedding.restrict(&subtree);
                let e = complete_leaves(g, t, &leaves, &partial)
                    .expect("hitting subtree satisfies leaf completion");
                debug_assert!(verify_full(&e, g, t));
                return SolveOutcome::Contains {
                    embedding: e,
                    branch: Branch::Ahsc,
                };
            }
            AhscOutcome::NotFound {
                exhaustive: ex,
                rounds: r,
            } => {
                exhaustive &= ex;
                rounds = rounds.saturating_add(r);
            }
        }
    }
    if exhaustive {
        SolveOutcome::NotContained {
            reason: ExactReason::Exhaustive,
        }
    } else {
        SolveOutcome::NotFound {
            rounds,
            seed: budget.seed,
            failure_exponent: budget.failure_exponent,
            reason: if budget.node_cap.is_some() {
                NotFoundReason::BudgetExceeded
            } else {
                NotFoundReason::Exhausted
            },
        }
    }
}
