//! Trees of moderate diameter: long trivial paths, escape vertices, and small separators.

use crate::embedding::{complete_leaves, greedy_extend, verify, verify_full, PartialEmbedding};
use crate::error::{pre, Error, Result};
use crate::graph::{vertex_set, Graph, VertexSet};
use crate::preserving::{embed_via_preserving_path, modulator_to_preserving_path};
use crate::tree::Tree;

fn pow(k: usize, e: u32) -> u64 {
    (k as u64).checked_pow(e).unwrap_or(u64::MAX)
}

/// `k − 1` leaves: the diametral pair first when given, then lowest-index leaves.
fn choose_leaves(t: &Tree, k: usize, diametral: Option<(usize, usize)>) -> Vec<usize> {
    let want = k.saturating_sub(1);
    let mut out: Vec<usize> = Vec::with_capacity(want);
    if let Some((a, b)) = diametral {
        out.extend([a, b].into_iter().take(want));
    }
    for l in t.leaves() {
        if out.len() >= want {
            break;
        }
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

fn anchors(t: &Tree, leaves: &[usize]) -> Vec<usize> {
    let mut w: Vec<usize> = leaves.iter().map(|&l| t.neighbors(l)[0]).collect();
    w.sort_unstable();
    w.dedup();
    w
}

/// First free vertex at distance one, else two, from `from` in `G − used`, accepted by `ok`.
fn reach_within_two(
    g: &Graph,
    from: usize,
    used: &VertexSet,
    ok: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    if let Some(&v) = g
        .neighbors(from)
        .iter()
        .find(|&&v| !used.contains(v) && ok(v))
    {
        return Some(vec![from, v]);
    }
    for &m in g.neighbors(from).iter().filter(|&&m| !used.contains(m)) {
        if let Some(&v) = g
            .neighbors(m)
            .iter()
            .find(|&&v| v != from && !used.contains(v) && ok(v))
        {
            return Some(vec![from, m, v]);
        }
    }
    None
}

fn unsatisfied(g: &Graph, e: &PartialEmbedding, w: &[usize], k: usize) -> Vec<usize> {
    w.iter()
        .copied()
        .filter(|&x| {
            let gx = e.at(x);
            g.non_neighbors_in(gx, e.image()) < g.neighbor_deficiency(gx, k)
        })
        .collect()
}

// ---------------------------------------------------------------------------------------------
// Trivial paths

/// Which construction finished the trivial-path embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialRoute {
    /// Demand vertices threaded into a contracted path, then re-expanded.
    Stitched,
    /// A hop was too long; a preserving path around the used set carried the tree.
    PreservingPath,
    /// Re-expansion stalled; a stalled subpath served as a preserving path.
    Subpath,
}

struct Segment {
    orig: Vec<usize>,
    img: Vec<usize>,
}

/// Paths of the subtree `within` whose inner vertices have degree two there and are not in `breaks`.
fn segments(t: &Tree, within: &VertexSet, breaks: &VertexSet) -> Vec<Vec<usize>> {
    let deg = |x: usize| {
        t.neighbors(x)
            .iter()
            .filter(|&&y| within.contains(y))
            .count()
    };
    let is_node = |x: usize| deg(x) != 2 || breaks.contains(x);
    let mut out = Vec::new();
    for s in within.ones().filter(|&x| is_node(x)) {
        for &first in t.neighbors(s).iter().filter(|&&y| within.contains(y)) {
            let mut path = vec![s, first];
            while !is_node(*path.last().unwrap()) {
                let len = path.len();
                let (prev, cur) = (path[len - 2], path[len - 1]);
                let next = *t
                    .neighbors(cur)
                    .iter()
                    .find(|&&y| y != prev && within.contains(y))
                    .expect("inner vertex has degree two");
                path.push(next);
            }
            if s < *path.last().unwrap() {
                out.push(path);
            }
        }
    }
    out
}

/// Free vertex adjacent to two consecutive vertices of `img`, lowest position then lowest index.
fn find_insertion(g: &Graph, used: &VertexSet, img: &[usize]) -> Option<(usize, usize)> {
    img.windows(2).enumerate().find_map(|(j, w)| {
        g.neighbors(w[0])
            .iter()
            .copied()
            .find(|&z| !used.contains(z) && g.has_edge(z, w[1]))
            .map(|z| (j, z))
    })
}

fn check_trivial_pre(g: &Graph, t: &Tree, k: usize) -> Result<()> {
    pre(g.n() > 0 && g.is_connected(), || {
        "G must be connected".into()
    })?;
    pre(k >= 2 && t.n() >= 3, || {
        "needs k ≥ 2 and at least three tree vertices".into()
    })?;
    pre(t.leaves().len() + 1 >= k, || {
        format!("T has fewer than k−1={} leaves", k - 1)
    })?;
    pre(t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })
}

/// Embeds `t` when `ld(T) < k`, `δ ≥ 2k·diam(T)`, `diam(T) ≥ 2k⁴` and `k ≥ 3`.
pub fn embed_via_trivial_paths(g: &Graph, t: &Tree, k: usize) -> Result<PartialEmbedding> {
    check_trivial_pre(g, t, k)?;
    pre(k >= 3, || "needs k ≥ 3".into())?;
    let (ld, _) = t.leaf_degree()?;
    pre(ld < k, || format!("ld(T)={ld} is not below k={k}"))?;
    let diam = t.diameter().0 as u64;
    pre(g.delta() as u64 >= 2 * k as u64 * diam, || {
        "δ below 2k·diam(T)".into()
    })?;
    pre(diam >= 2 * pow(k, 4), || {
        format!("diam(T)={diam} below 2k⁴")
    })?;
    embed_via_trivial_paths_relaxed(g, t, k).map(|(e, _)| e)
}

/// Same construction without the size thresholds; `Stuck` when a step has no room.
pub fn embed_via_trivial_paths_relaxed(
    g: &Graph,
    t: &Tree,
    k: usize,
) -> Result<(PartialEmbedding, TrivialRoute)> {
    check_trivial_pre(g, t, k)?;
    let (_, (a, b)) = t.diameter();
    let leaves = choose_leaves(t, k, Some((a, b)));
    let w = anchors(t, &leaves);
    let w_set = vertex_set(t.n(), w.iter().copied());
    let mut span = w.clone();
    span.extend([t.neighbors(a)[0], t.neighbors(b)[0]]);
    let tw = t.minimal_spanning_subtree(&span);
    debug_assert!(long_path_bound_holds(t, &tw));

    let cap = 2 * k;
    let mut segs: Vec<Segment> = segments(t, &tw, &w_set)
        .into_iter()
        .map(|orig| {
            let len = orig.len() - 1;
            let img = if len > cap {
                orig[..cap].iter().copied().chain([orig[len]]).collect()
            } else {
                orig.clone()
            };
            Segment { orig, img }
        })
        .collect();

    // Chvátal-embed the contracted tree, whose vertices are the kept tree vertices.
    let mut kept = vertex_set(
        t.n(),
        tw.ones()
            .filter(|&x| segs.iter().all(|s| !s.orig.contains(&x))),
    );
    for s in &segs {
        kept.extend(s.img.iter().copied());
    }
    let members: Vec<usize> = kept.ones().collect();
    let mut index = vec![usize::MAX; t.n()];
    for (i, &x) in members.iter().enumerate() {
        index[x] = i;
    }
    let edges: Vec<(usize, usize)> = segs
        .iter()
        .flat_map(|s| {
            s.img
                .windows(2)
                .map(|p| (index[p[0]], index[p[1]]))
                .collect::<Vec<_>>()
        })
        .collect();
    let ct = Tree::from_edges(members.len(), &edges).expect("contraction keeps a tree");
    let mut ce = PartialEmbedding::new(ct.n(), g.n());
    greedy_extend(g, &ct, &mut ce, None, None).map_err(|_| {
        Error::Stuck(format!(
            "contracted tree on {} vertices does not fit",
            ct.n()
        ))
    })?;
    let node_img = |x: usize, ce: &PartialEmbedding| ce.at(index[x]);
    for s in &mut segs {
        s.img = s.img.iter().map(|&x| node_img(x, &ce)).collect();
    }
    let mut used = ce.image().clone();
    let w_img: Vec<usize> = w.iter().map(|&x| node_img(x, &ce)).collect();

    // Demand set: enough fresh non-neighbors for every anchor image.
    let mut demand = g.empty_set();
    for &gw in &w_img {
        let mut have = used.clone();
        have.union_with(&demand);
        let mut need = g
            .neighbor_deficiency(gw, k)
            .saturating_sub(g.non_neighbors_in(gw, &have));
        for z in 0..g.n() {
            if need == 0 {
                break;
            }
            if z != gw && !have.contains(z) && !g.has_edge(gw, z) {
                demand.insert(z);
                need -= 1;
            }
        }
        if need > 0 {
            return Err(Error::Stuck(format!("vertex {gw} lacks non-neighbors")));
        }
    }

    if demand.count_ones(..) > 0 {
        let Some(si) = (0..segs.len())
            .filter(|&i| segs[i].orig.len() > segs[i].img.len())
            .max_by_key(|&i| (segs[i].orig.len() - segs[i].img.len(), std::cmp::Reverse(i)))
        else {
            return via_preserving_path(g, t, k, &used);
        };
        let (s1, sq) = (segs[si].img[0], segs[si].img[1]);
        let owed = segs[si].orig.len() - segs[si].img.len();
        let seq: Vec<usize> = std::iter::once(s1)
            .chain(demand.ones())
            .chain([sq])
            .collect();
        let mut forbidden = used.clone();
        forbidden.union_with(&demand);
        let mut q = vec![s1];
        let mut failed = None;
        for pair in seq.windows(2) {
            let (from, to) = (pair[0], pair[1]);
            forbidden.set(from, false);
            forbidden.set(to, false);
            match g.shortest_path_avoiding(from, to, &forbidden) {
                Some(p) if p.len() - 1 <= 2 * k + 1 => {
                    forbidden.extend(p.iter().copied());
                    q.extend_from_slice(&p[1..]);
                }
                _ => {
                    forbidden.insert(from);
                    forbidden.set(to, false);
                    failed = Some(forbidden.clone());
                    break;
                }
            }
        }
        if failed.is_none() && q.len() - 2 > owed {
            failed = Some(forbidden.clone());
        }
        if let Some(modulator) = failed {
            return via_preserving_path(g, t, k, &modulator);
        }
        used.extend(q.iter().copied());
        let rest = segs[si].img[2..].to_vec();
        segs[si].img = q;
        segs[si].img.extend(rest);
    }

    loop {
        let deficient: Vec<usize> = (0..segs.len())
            .filter(|&i| segs[i].img.len() < segs[i].orig.len())
            .collect();
        if deficient.is_empty() {
            break;
        }
        let step = deficient
            .iter()
            .find_map(|&i| find_insertion(g, &used, &segs[i].img).map(|(j, z)| (i, j, z)));
        match step {
            Some((i, j, z)) => {
                segs[i].img.insert(j + 1, z);
                used.insert(z);
            }
            None => {
                let r: Vec<usize> = segs[deficient[0]].img[..cap].to_vec();
                let e = reembed_through_subpath(g, t, &tw, &w_set, &segs, &used, &r, &leaves)?;
                return Ok((e, TrivialRoute::Subpath));
            }
        }
    }

    let mut e = PartialEmbedding::new(t.n(), g.n());
    for x in tw
        .ones()
        .filter(|&x| segs.iter().all(|s| !s.orig.contains(&x)))
    {
        e.set(x, node_img(x, &ce));
    }
    for s in &segs {
        for (&x, &v) in s.orig.iter().zip(&s.img) {
            if !e.is_mapped(x) {
                e.set(x, v);
            }
        }
    }
    debug_assert!(verify(&e, g, t));
    let e = complete_leaves(g, t, &leaves, &e)
        .map_err(|e| Error::Stuck(format!("leaf completion failed: {e}")))?;
    Ok((e, TrivialRoute::Stitched))
}

fn via_preserving_path(
    g: &Graph,
    t: &Tree,
    k: usize,
    modulator: &VertexSet,
) -> Result<(PartialEmbedding, TrivialRoute)> {
    let path = modulator_to_preserving_path(g, modulator, k)
        .map_err(|e| Error::Stuck(format!("hop failed and no preserving path: {e}")))?;
    let e = embed_via_preserving_path(g, t, &path, k)
        .map_err(|e| Error::Stuck(format!("preserving path does not carry the tree: {e}")))?;
    Ok((e, TrivialRoute::PreservingPath))
}

/// Maps a `2k`-vertex path of `T_W` avoiding `W` onto `r`, then grows `T_W` away from the rest
/// of the stalled image.
#[allow(clippy::too_many_arguments)]
fn reembed_through_subpath(
    g: &Graph,
    t: &Tree,
    tw: &VertexSet,
    w_set: &VertexSet,
    segs: &[Segment],
    used: &VertexSet,
    r: &[usize],
    leaves: &[usize],
) -> Result<PartialEmbedding> {
    let m = r.len();
    let d = segs
        .iter()
        .find_map(|s| {
            s.orig
                .windows(m)
                .find(|win| win.iter().all(|&x| !w_set.contains(x)))
                .map(|win| win.to_vec())
        })
        .ok_or_else(|| Error::Stuck("no trivial path avoiding the anchors".into()))?;
    let mut allowed = g.full_set();
    allowed.difference_with(used);
    allowed.extend(r.iter().copied());
    let mut e = PartialEmbedding::new(t.n(), g.n());
    for (&x, &v) in d.iter().zip(r) {
        e.set(x, v);
    }
    greedy_extend(g, t, &mut e, Some(tw), Some(&allowed))
        .map_err(|e| Error::Stuck(format!("re-embedding T_W: {e}")))?;
    complete_leaves(g, t, leaves, &e)
        .map_err(|e| Error::Stuck(format!("leaf completion failed: {e}")))
}

/// The longest maximal trivial path of the spanning subtree has at least `⌈diam/(ℓ − 1)⌉` edges.
fn long_path_bound_holds(t: &Tree, tw: &VertexSet) -> bool {
    let (sub, _) = t.induced(tw);
    if sub.n() < 2 {
        return true;
    }
    let leaves = sub.leaves().len();
    let diam = sub.diameter().0;
    let longest = sub
        .maximal_trivial_paths()
        .iter()
        .map(|p| p.len() - 1)
        .max()
        .unwrap_or(0);
    longest * (leaves.max(2) - 1) >= diam
}

// ---------------------------------------------------------------------------------------------
// Escape vertex

fn check_escape_pre(g: &Graph, t: &Tree, k: usize) -> Result<()> {
    pre(g.n() > 0 && k >= 2, || {
        "needs k ≥ 2 and a non-empty G".into()
    })?;
    pre(t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })
}

/// Embeds `t` through a `q`-escape vertex, with `q ≥ 2k²·diam(T)`, `δ ≥ q`, `Δ(T) ≥ k²`, `ld(T) < k`.
pub fn embed_via_escape(g: &Graph, t: &Tree, k: usize, q: usize) -> Result<PartialEmbedding> {
    check_escape_pre(g, t, k)?;
    let diam = t.diameter().0;
    pre(q >= 2 * k * k * diam, || format!("q={q} below 2k²·diam(T)"))?;
    pre(g.delta() >= q, || format!("δ={} below q={q}", g.delta()))?;
    pre(t.max_degree().0 >= k * k, || "Δ(T) below k²".into())?;
    let (ld, _) = t.leaf_degree()?;
    pre(ld < k, || format!("ld(T)={ld} is not below k={k}"))?;
    let u = g
        .find_q_escape(q)
        .ok_or_else(|| Error::PreconditionViolated(format!("no {q}-escape vertex")))?;
    let e = embed_via_escape_at(g, t, k, u);
    if let Err(Error::Stuck(msg)) = &e {
        panic!("escape expansion stuck under its hypotheses: {msg}");
    }
    e
}

/// Maps a maximum-degree tree vertex to `u` and grows fresh branches of it toward non-neighbors
/// of the anchor images. `Stuck` when no branch or no target remains.
pub fn embed_via_escape_at(g: &Graph, t: &Tree, k: usize, u: usize) -> Result<PartialEmbedding> {
    check_escape_pre(g, t, k)?;
    pre(u < g.n(), || format!("vertex {u} out of range"))?;
    let (_, hub) = t.max_degree();
    let leaves = choose_leaves(t, k, None);
    let w = anchors(t, &leaves);
    let mut span = w.clone();
    span.push(hub);
    let mut targets = t.minimal_spanning_subtree(&span);
    let mut e = PartialEmbedding::new(t.n(), g.n());
    e.set(hub, u);
    greedy_extend(g, t, &mut e, Some(&targets), None)
        .map_err(|e| Error::Stuck(format!("spanning subtree: {e}")))?;
    let in_l = vertex_set(t.n(), leaves.iter().copied());
    loop {
        let open = unsatisfied(g, &e, &w, k);
        let Some(&x0) = open.first() else {
            break;
        };
        let gw = e.at(x0);
        let mut blocked = e.image().clone();
        blocked.set(u, false);
        let path = reach_within_two(g, u, &blocked, |v| v != gw && !g.has_edge(gw, v)).ok_or_else(
            || Error::Stuck(format!("nothing near the escape vertex avoids N({gw})")),
        )?;
        let x = t
            .neighbors(hub)
            .iter()
            .copied()
            .find(|&x| !targets.contains(x) && !t.is_leaf(x) && !in_l.contains(x))
            .ok_or_else(|| Error::Stuck("no fresh branch at the hub".into()))?;
        e.set(x, path[1]);
        targets.insert(x);
        if path.len() == 3 {
            let y = *t
                .neighbors(x)
                .iter()
                .find(|&&y| y != hub)
                .expect("x is not a leaf");
            e.set(y, path[2]);
            targets.insert(y);
        }
        debug_assert!(verify(&e, g, t));
    }
    complete_leaves(g, t, &leaves, &e)
        .map_err(|e| Error::Stuck(format!("leaf completion failed: {e}")))
}

// ---------------------------------------------------------------------------------------------
// Escape or separator

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbedOrSeparator {
    Embedded(PartialEmbedding),
    Separator(VertexSet),
}

/// Roots of `(k−1)²` height-two subtrees and `k−1` height-one subtrees, pairwise disjoint,
/// rooted at vertex 0.
pub fn burn_and_anchor_sets(t: &Tree, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let view = t.rooted(0);
    let want_u = (k - 1) * (k - 1);
    let want_w = k - 1;
    let height2: Vec<usize> = (0..t.n()).filter(|&x| view.height[x] == 2).collect();
    if height2.len() < want_u + want_w {
        return None;
    }
    let u: Vec<usize> = height2[..want_u].to_vec();
    let w: Vec<usize> = height2[want_u..want_u + want_w]
        .iter()
        .map(|&r| {
            *view.children[r]
                .iter()
                .find(|&&c| view.height[c] == 1)
                .expect("height-two root has a height-one child")
        })
        .collect();
    Some((u, w))
}

fn check_sep_pre(g: &Graph, t: &Tree, k: usize) -> Result<()> {
    pre(g.n() > 0 && k >= 2, || {
        "needs k ≥ 2 and a non-empty G".into()
    })?;
    pre(t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })
}

/// Embeds `t` or returns a small separator of `G`, when `ld(T) < k`, `Δ(T) < k²`, `δ ≥ k⁵·diam(T)`.
pub fn embed_or_separator(g: &Graph, t: &Tree, k: usize) -> Result<EmbedOrSeparator> {
    check_sep_pre(g, t, k)?;
    let (ld, _) = t.leaf_degree()?;
    pre(ld < k, || format!("ld(T)={ld} is not below k={k}"))?;
    pre(t.max_degree().0 < k * k, || "Δ(T) is not below k²".into())?;
    let diam = t.diameter().0;
    pre(
        g.delta() as u64 >= pow(k, 5).saturating_mul(diam as u64),
        || "δ below k⁵·diam(T)".into(),
    )?;
    let (u, w) =
        burn_and_anchor_sets(t, k).expect("enough height-two subtrees under the degree bounds");
    let out = embed_or_separator_with(g, t, k, &u, &w)?;
    if let EmbedOrSeparator::Separator(s) = &out {
        assert!(
            s.count_ones(..) <= 2 * k * (k - 1) * (diam + 2),
            "separator larger than the bound"
        );
    }
    Ok(out)
}

/// Same procedure without the size thresholds.
pub fn embed_or_separator_relaxed(g: &Graph, t: &Tree, k: usize) -> Result<EmbedOrSeparator> {
    check_sep_pre(g, t, k)?;
    let (u, w) = burn_and_anchor_sets(t, k)
        .ok_or_else(|| Error::Stuck("too few height-two subtrees".into()))?;
    embed_or_separator_with(g, t, k, &u, &w)
}

fn embed_or_separator_with(
    g: &Graph,
    t: &Tree,
    k: usize,
    u: &[usize],
    w: &[usize],
) -> Result<EmbedOrSeparator> {
    let view = t.rooted(0);
    let leaves: Vec<usize> = w.iter().map(|&x| view.children[x][0]).collect();
    let mut span: Vec<usize> = u.to_vec();
    span.extend_from_slice(w);
    let mut targets = t.minimal_spanning_subtree(&span);
    let mut e = PartialEmbedding::new(t.n(), g.n());
    greedy_extend(g, t, &mut e, Some(&targets), None)
        .map_err(|e| Error::Stuck(format!("spanning subtree: {e}")))?;
    let mut fresh: Vec<usize> = u.to_vec();
    loop {
        let open = unsatisfied(g, &e, w, k);
        if open.is_empty() {
            break;
        }
        let mut step = None;
        'search: for &x in &open {
            let gw = e.at(x);
            for (i, &s) in fresh.iter().enumerate() {
                let gs = e.at(s);
                let mut blocked = e.image().clone();
                blocked.set(gs, false);
                if let Some(p) =
                    reach_within_two(g, gs, &blocked, |v| v != gw && !g.has_edge(gw, v))
                {
                    step = Some((i, p));
                    break 'search;
                }
            }
        }
        let Some((i, p)) = step else {
            let s = stall_separator(g, &e, &fresh, &open);
            if !g.is_separator(&s) {
                return Err(Error::Stuck("expansion stalled without a separator".into()));
            }
            return Ok(EmbedOrSeparator::Separator(s));
        };
        let s = fresh.remove(i);
        let c = *view.children[s]
            .iter()
            .find(|&&c| view.height[c] == 1)
            .expect("height-two root");
        e.set(c, p[1]);
        targets.insert(c);
        if p.len() == 3 {
            let gc = view.children[c][0];
            e.set(gc, p[2]);
            targets.insert(gc);
        }
        debug_assert!(verify(&e, g, t));
    }
    let e = complete_leaves(g, t, &leaves, &e)
        .map_err(|e| Error::Stuck(format!("leaf completion failed: {e}")))?;
    Ok(EmbedOrSeparator::Embedded(e))
}

/// `Im σ ∪ (B ∖ A)`, with `A` the free neighbors of unused burn images and `B` the common
/// neighborhood of the unsatisfied anchors.
fn stall_separator(g: &Graph, e: &PartialEmbedding, fresh: &[usize], open: &[usize]) -> VertexSet {
    let mut a = g.empty_set();
    for &s in fresh {
        a.extend(
            g.neighbors(e.at(s))
                .iter()
                .copied()
                .filter(|&v| !e.is_used(v)),
        );
    }
    let mut b = g.full_set();
    for &x in open {
        b.intersect_with(&g.neighbor_set(e.at(x)));
    }
    b.difference_with(&a);
    let mut s = e.image().clone();
    s.union_with(&b);
    s
}

// ---------------------------------------------------------------------------------------------
// Separator exploitation

fn minimalize(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut s = s.clone();
    for x in s.clone().ones() {
        s.set(x, false);
        if !g.is_separator(&s) {
            s.insert(x);
        }
    }
    s
}

/// `x ↦ s` with `T_x` inside `A ∪ {s}`, `y` on a neighbor of `s` in `B` with `T_y` inside `B`.
fn split_embed(
    g: &Graph,
    t: &Tree,
    s: usize,
    side_a: &VertexSet,
    side_b: &VertexSet,
    x: usize,
    y: usize,
) -> Option<PartialEmbedding> {
    let ty = t.side_of_edge(x, y);
    let tx = t.side_of_edge(y, x);
    let mut a_s = side_a.clone();
    a_s.insert(s);
    for &nb in g.neighbors(s).iter().filter(|&&v| side_b.contains(v)) {
        let mut e = PartialEmbedding::new(t.n(), g.n());
        e.set(x, s);
        e.set(y, nb);
        if greedy_extend(g, t, &mut e, Some(&ty), Some(side_b)).is_err() {
            continue;
        }
        if greedy_extend(g, t, &mut e, Some(&tx), Some(&a_s)).is_err() {
            continue;
        }
        if verify_full(&e, g, t) {
            return Some(e);
        }
    }
    None
}

fn sides(g: &Graph, s: &VertexSet, a_index: usize) -> Option<(VertexSet, VertexSet)> {
    let comps = g.components_avoiding(s);
    let a = comps.get(a_index)?;
    let side_a = vertex_set(g.n(), a.iter().copied());
    let mut side_b = g.full_set();
    side_b.difference_with(s);
    side_b.difference_with(&side_a);
    Some((side_a, side_b))
}

/// Embeds `t` across a separator `s` with `δ ≥ 3|S|`, `δ ≥ 15k`, `ld(T) < k`, `T` `(|S|+k)`-separable.
pub fn embed_with_separator(
    g: &Graph,
    t: &Tree,
    k: usize,
    s: &VertexSet,
) -> Result<PartialEmbedding> {
    pre(g.n() > 0 && t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })?;
    pre(g.is_separator(s), || "set is not a separator".into())?;
    let delta = g.delta();
    pre(delta >= 3 * s.count_ones(..), || "δ below 3|S|".into())?;
    pre(delta >= 15 * k, || "δ below 15k".into())?;
    let (ld, _) = t.leaf_degree()?;
    pre(ld < k, || format!("ld(T)={ld} is not below k={k}"))?;
    let s = minimalize(g, s);
    let size = s.count_ones(..);
    let (p, q) = t
        .find_separable_edge(size + k)
        .ok_or_else(|| Error::PreconditionViolated("T is not separable enough".into()))?;
    let (x, y) = if t.degree(p) <= t.degree(q) {
        (p, q)
    } else {
        (q, p)
    };
    let comps = g.components_avoiding(&s).len();
    for a_index in 0..comps {
        let (side_a, side_b) = sides(g, &s, a_index).expect("component exists");
        for sv in s.ones() {
            if 2 * g.neighbors_in(sv, &side_a) < delta - size {
                continue;
            }
            let e = split_embed(g, t, sv, &side_a, &side_b, x, y)
                .expect("separator split always embeds under its hypotheses");
            return Ok(e);
        }
    }
    unreachable!("some separator vertex sends half its remaining degree into one side");
}

/// Tries every side, separator vertex and edge orientation; `Stuck` if none embeds.
pub fn embed_with_separator_relaxed(
    g: &Graph,
    t: &Tree,
    s: &VertexSet,
) -> Result<PartialEmbedding> {
    pre(g.n() > 0 && t.n() <= g.n(), || {
        "tree larger than graph".into()
    })?;
    pre(g.is_separator(s), || "set is not a separator".into())?;
    let s = minimalize(g, s);
    let comps = g.components_avoiding(&s).len();
    (0..comps)
        .find_map(|side| embed_with_separator_on_side(g, t, &s, side).ok())
        .ok_or_else(|| Error::Stuck("no split of the tree fits the separator".into()))
}

/// Uses component `side` of `G − s` as the side that receives the smaller-degree half.
pub fn embed_with_separator_on_side(
    g: &Graph,
    t: &Tree,
    s: &VertexSet,
    side: usize,
) -> Result<PartialEmbedding> {
    pre(g.is_separator(s), || "set is not a separator".into())?;
    let k = t.n().saturating_sub(g.delta()).max(1);
    let size = s.count_ones(..);
    let (p, q) = t
        .find_separable_edge(size + k)
        .ok_or_else(|| Error::PreconditionViolated("T is not separable enough".into()))?;
    let (side_a, side_b) = sides(g, s, side)
        .ok_or_else(|| Error::PreconditionViolated(format!("no component {side}")))?;
    for (x, y) in [(p, q), (q, p)] {
        for sv in s.ones() {
            if let Some(e) = split_embed(g, t, sv, &side_a, &side_b, x, y) {
                return Ok(e);
            }
        }
    }
    Err(Error::Stuck(format!(
        "component {side} does not host a split"
    )))
}

// ---------------------------------------------------------------------------------------------
// Dispatcher

/// Thresholds of the medium-diameter dispatcher.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MediumThresholds {
    pub large_diameter: u64,
    pub small_degree: u64,
    pub escape_q: u64,
    pub separable_q: u64,
}

impl MediumThresholds {
    pub fn literal(k: usize) -> MediumThresholds {
        MediumThresholds {
            large_diameter: 2u64.saturating_mul(pow(k, 11)),
            small_degree: pow(k, 2),
            escape_q: 4u64.saturating_mul(pow(k, 13)),
            separable_q: 2u64.saturating_mul(pow(k, 14)),
        }
    }
}

/// Which case of the dispatcher produced the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MediumBranch {
    TrivialPaths,
    EscapeOrSeparator,
    SmallDegreeSeparator,
    Escape,
    Separable,
}

/// Embeds `t` under the literal hypotheses: `k ≥ 3`, `|V(G)| ≥ δ+2k¹⁴`, `ld(T) < k`, `δ ≥ k¹⁷`,
/// `diam(T) ≤ 8k⁶·log δ`, and one of the three cases.
pub fn solve_medium(g: &Graph, t: &Tree, k: usize) -> Result<PartialEmbedding> {
    pre(g.n() > 0 && g.is_connected(), || {
        "G must be connected".into()
    })?;
    pre(k >= 3, || "needs k ≥ 3".into())?;
    let delta = g.delta() as u64;
    let th = MediumThresholds::literal(k);
    pre(delta >= pow(k, 17), || format!("δ={delta} below k¹⁷"))?;
    pre(g.n() as u64 >= delta.saturating_add(th.separable_q), || {
        "|V(G)| below δ+2k¹⁴".into()
    })?;
    let diam = t.diameter().0 as f64;
    pre(
        diam <= 8.0 * pow(k, 6) as f64 * (delta as f64).log2(),
        || "diam(T) above 8k⁶·log δ".into(),
    )?;
    solve_medium_with(g, t, k, &th).map(|(e, _)| e)
}

/// Runs the dispatcher with explicit thresholds.
pub fn solve_medium_with(
    g: &Graph,
    t: &Tree,
    k: usize,
    th: &MediumThresholds,
) -> Result<(PartialEmbedding, MediumBranch)> {
    pre(g.n() > 0 && t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })?;
    let (ld, _) = t.leaf_degree()?;
    pre(ld < k, || format!("ld(T)={ld} is not below k={k}"))?;
    if t.diameter().0 as u64 >= th.large_diameter {
        let (e, _) = embed_via_trivial_paths_relaxed(g, t, k)?;
        return Ok((e, MediumBranch::TrivialPaths));
    }
    if (t.max_degree().0 as u64) < th.small_degree {
        return match embed_or_separator_relaxed(g, t, k)? {
            EmbedOrSeparator::Embedded(e) => Ok((e, MediumBranch::EscapeOrSeparator)),
            EmbedOrSeparator::Separator(s) => Ok((
                embed_with_separator_relaxed(g, t, &s)?,
                MediumBranch::SmallDegreeSeparator,
            )),
        };
    }
    let q = usize::try_from(th.escape_q).unwrap_or(usize::MAX);
    if let Some(u) = g.find_q_escape(q) {
        return Ok((embed_via_escape_at(g, t, k, u)?, MediumBranch::Escape));
    }
    let sq = usize::try_from(th.separable_q).unwrap_or(usize::MAX);
    if t.is_separable(sq) {
        let v = (0..g.n())
            .min_by_key(|&v| (g.degree(v), v))
            .expect("non-empty");
        let s = g.nonescape_separator(v, q)?;
        return Ok((
            embed_with_separator_relaxed(g, t, &s)?,
            MediumBranch::Separable,
        ));
    }
    Err(Error::PreconditionViolated(
        "no medium-diameter case applies".into(),
    ))
}


#[cfg(test)]
mod route_tests {
    use super::*;

    fn ring_of_cliques(count: usize, size: usize) -> Graph {
        let n = count * size;
        let mut edges = Vec::new();
        for c in 0..count {
            for i in 0..size {
                for j in i + 1..size {
                    edges.push((c * size + i, c * size + j));
                }
                let d = (c + 1) % count;
                for j in 0..size {
                    edges.push((c * size + i, d * size + j));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn relabeled_ring(count: usize, size: usize) -> Graph {
        let g = ring_of_cliques(count, size);
        // Ring position 0 keeps labels 0..size, the opposite position takes the next block.
        let mut pos_order: Vec<usize> = vec![0, count / 2];
        pos_order.extend((1..count).filter(|&p| p != count / 2));
        let mut perm = vec![0; g.n()];
        for (rank, &p) in pos_order.iter().enumerate() {
            for i in 0..size {
                perm[p * size + i] = rank * size + i;
            }
        }
        let edges: Vec<_> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(g.n(), &edges).unwrap()
    }

    fn hypercube(d: usize) -> Graph {
        let n = 1 << d;
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (0..d).map(move |b| (u, u ^ (1 << b))))
            .filter(|&(u, v)| u < v)
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn kaa(a: usize) -> Graph {
        let edges: Vec<_> = (0..a)
            .flat_map(|u| (a..2 * a).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(2 * a, &edges).unwrap()
    }

    fn check(g: &Graph, t: &Tree, k: usize, want: TrivialRoute) {
        let (e, route) = embed_via_trivial_paths_relaxed(g, t, k).unwrap();
        assert_eq!(route, want);
        assert!(verify_full(&e, g, t));
    }

    #[test]
    fn stitched_on_dense_host() {
        let g = crate::dense::tests::dense_host(40, 20, 1);
        check(&g, &Tree::path(22), 2, TrivialRoute::Stitched);
        check(&g, &Tree::path(23), 3, TrivialRoute::Stitched);
    }

    #[test]
    fn far_demand_diverts_to_preserving_path() {
        let g = relabeled_ring(12, 11);
        check(
            &g,
            &Tree::path(g.delta() + 2),
            2,
            TrivialRoute::PreservingPath,
        );
    }

    #[test]
    fn triangle_free_host_stalls_into_subpath() {
        let g = hypercube(8);
        check(&g, &Tree::path(10), 2, TrivialRoute::Subpath);
        check(&g, &Tree::path(11), 3, TrivialRoute::Subpath);
        check(&kaa(16), &Tree::path(18), 2, TrivialRoute::Subpath);
    }

    #[test]
    fn strict_trivial_paths_pre() {
        let g = hypercube(8);
        assert!(matches!(
            embed_via_trivial_paths(&g, &Tree::path(11), 3),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            embed_via_trivial_paths_relaxed(&g, &Tree::path(12), 4),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
