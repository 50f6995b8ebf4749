//! Partial embeddings, their verifier, and greedy extension.

use std::collections::VecDeque;

use crate::error::{pre, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::outcome::{Branch, ExactReason, SolveOutcome};
use crate::tree::Tree;

/// Injective, edge-preserving map from a connected subtree of `T` into `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialEmbedding {
    map: Vec<Option<usize>>,
    image: VertexSet,
}

impl PartialEmbedding {
    pub fn new(t_n: usize, g_n: usize) -> PartialEmbedding {
        PartialEmbedding {
            map: vec![None; t_n],
            image: VertexSet::with_capacity(g_n),
        }
    }

    /// Builds a map from pairs, rejecting out-of-range or non-injective input.
    pub fn from_pairs(
        t_n: usize,
        g_n: usize,
        pairs: &[(usize, usize)],
    ) -> Result<PartialEmbedding> {
        let mut e = PartialEmbedding::new(t_n, g_n);
        for &(x, v) in pairs {
            if x >= t_n || v >= g_n {
                return Err(Error::PreconditionViolated(format!(
                    "pair {x} {v} out of range"
                )));
            }
            if e.map[x].is_some() || e.image.contains(v) {
                return Err(Error::PreconditionViolated(format!(
                    "pair {x} {v} not injective"
                )));
            }
            e.set(x, v);
        }
        Ok(e)
    }

    pub fn t_len(&self) -> usize {
        self.map.len()
    }

    pub fn g_len(&self) -> usize {
        self.image.len()
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    /// Image of a mapped vertex; panics when unmapped.
    pub fn at(&self, x: usize) -> usize {
        self.map[x].expect("tree vertex is mapped")
    }

    pub fn set(&mut self, x: usize, v: usize) {
        debug_assert!(!self.image.contains(v), "graph vertex {v} already used");
        if let Some(old) = self.map[x] {
            self.image.set(old, false);
        }
        self.map[x] = Some(v);
        self.image.insert(v);
    }

    pub fn unset(&mut self, x: usize) {
        if let Some(old) = self.map[x].take() {
            self.image.set(old, false);
        }
    }

    pub fn is_mapped(&self, x: usize) -> bool {
        self.map[x].is_some()
    }

    pub fn is_used(&self, v: usize) -> bool {
        self.image.contains(v)
    }

    pub fn image(&self) -> &VertexSet {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.map.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    pub fn is_full(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(x, m)| m.map(|_| x))
    }

    pub fn domain_set(&self) -> VertexSet {
        let mut s = VertexSet::with_capacity(self.map.len());
        for x in self.domain() {
            s.insert(x);
        }
        s
    }

    /// Tree vertex mapped onto `v`, if any.
    pub fn preimage(&self, v: usize) -> Option<usize> {
        if !self.image.contains(v) {
            return None;
        }
        self.map.iter().position(|&m| m == Some(v))
    }

    /// Mapped pairs sorted by tree vertex.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(x, m)| m.map(|v| (x, v)))
            .collect()
    }

    /// Restriction to the tree vertices in `keep`.
    pub fn restrict(&self, keep: &VertexSet) -> PartialEmbedding {
        let mut e = PartialEmbedding::new(self.t_len(), self.g_len());
        for (x, v) in self.pairs() {
            if keep.contains(x) {
                e.set(x, v);
            }
        }
        e
    }
}

/// Whether `e` is an injective, edge-preserving map of a connected subtree of `t` into `g`.
pub fn verify(e: &PartialEmbedding, g: &Graph, t: &Tree) -> bool {
    if e.map.len() != t.n() || e.image.len() != g.n() {
        return false;
    }
    let mut seen = VertexSet::with_capacity(g.n());
    for v in e.map.iter().flatten() {
        if *v >= g.n() || seen.contains(*v) {
            return false;
        }
        seen.insert(*v);
    }
    if seen != e.image {
        return false;
    }
    for &(a, b) in t.edges() {
        if let (Some(u), Some(v)) = (e.map[a], e.map[b]) {
            if !g.has_edge(u, v) {
                return false;
            }
        }
    }
    t.is_connected_subset(&e.domain_set())
}

/// `verify` plus every tree vertex mapped.
pub fn verify_full(e: &PartialEmbedding, g: &Graph, t: &Tree) -> bool {
    e.map.len() == t.n() && e.is_full() && verify(e, g, t)
}

/// Extends `e` over `targets` in BFS order from its domain, placing each new vertex on the
/// lowest unused neighbor (inside `allowed`) of its parent's image.
pub(crate) fn greedy_extend(
    g: &Graph,
    t: &Tree,
    e: &mut PartialEmbedding,
    targets: Option<&VertexSet>,
    allowed: Option<&VertexSet>,
) -> Result<()> {
    let in_targets = |x: usize| targets.map_or(true, |s| s.contains(x));
    let in_allowed = |v: usize| allowed.map_or(true, |s| s.contains(v));
    let mut queue: VecDeque<usize> = e.domain().collect();
    if queue.is_empty() {
        let Some(root) = (0..t.n()).find(|&x| in_targets(x)) else {
            return Ok(());
        };
        let v = (0..g.n())
            .find(|&v| in_allowed(v) && !e.is_used(v))
            .ok_or_else(|| Error::Stuck("no host vertex for the root".into()))?;
        e.set(root, v);
        queue.push_back(root);
    }
    while let Some(x) = queue.pop_front() {
        let gx = e.at(x);
        for &y in t.neighbors(x) {
            if e.is_mapped(y) || !in_targets(y) {
                continue;
            }
            let v = g
                .neighbors(gx)
                .iter()
                .copied()
                .find(|&v| !e.is_used(v) && in_allowed(v))
                .ok_or_else(|| {
                    Error::Stuck(format!("image of tree vertex {x} has no free neighbor"))
                })?;
            e.set(y, v);
            queue.push_back(y);
        }
    }
    Ok(())
}

/// Extends a partial embedding to all of `t` when `|V(T)| ≤ δ(G) + 1`.
pub fn chvatal_extend(g: &Graph, t: &Tree, partial: &PartialEmbedding) -> Result<PartialEmbedding> {
    pre(g.n() > 0 && t.n() <= g.delta() + 1, || {
        format!("|V(T)|={} exceeds δ(G)+1={}", t.n(), g.delta() + 1)
    })?;
    pre(verify(partial, g, t), || {
        "seed embedding does not verify".into()
    })?;
    let mut e = partial.clone();
    greedy_extend(g, t, &mut e, None, None)
        .expect("a tree on at most δ+1 vertices always extends greedily");
    debug_assert!(verify_full(&e, g, t));
    Ok(e)
}

/// Decides containment for `|V(T)| ≤ min{|V(G)|, δ(G) + 2}` on connected `G`.
pub fn solve_delta_plus_two(g: &Graph, t: &Tree) -> Result<SolveOutcome> {
    pre(g.n() > 0 && g.is_connected(), || {
        "graph must be connected".into()
    })?;
    let delta = g.delta();
    pre(t.n() <= g.n().min(delta + 2), || {
        format!("|V(T)|={} exceeds min(n, δ+2)", t.n())
    })?;
    let contains = |e: PartialEmbedding| {
        debug_assert!(verify_full(&e, g, t));
        SolveOutcome::Contains {
            embedding: e,
            branch: Branch::DeltaPlusTwo,
        }
    };
    if t.n() <= delta + 1 {
        return Ok(contains(chvatal_extend(
            g,
            t,
            &PartialEmbedding::new(t.n(), g.n()),
        )?));
    }
    // |V(T)| = δ + 2 ≥ 2 from here on.
    let leaf = t.leaves()[0];
    let anchor = t.neighbors(leaf)[0];
    let mut rest = VertexSet::with_capacity(t.n());
    rest.insert_range(..);
    rest.set(leaf, false);
    let mut e = PartialEmbedding::new(t.n(), g.n());
    if let Some(u) = (0..g.n()).find(|&u| g.degree(u) > delta) {
        e.set(anchor, u);
        greedy_extend(g, t, &mut e, Some(&rest), None).expect("T − ℓ has δ+1 vertices");
        let free = g
            .neighbors(u)
            .iter()
            .copied()
            .find(|&v| !e.is_used(v))
            .expect("u has δ+1 neighbors");
        e.set(leaf, free);
        return Ok(contains(e));
    }
    // G is regular.
    if t.degree(anchor) == t.n() - 1 {
        return Ok(SolveOutcome::NotContained {
            reason: ExactReason::RegularStar,
        });
    }
    let x = *t
        .neighbors(anchor)
        .iter()
        .find(|&&x| !t.is_leaf(x))
        .expect("not a star");
    let y = *t
        .neighbors(x)
        .iter()
        .find(|&&y| y != anchor)
        .expect("x is not a leaf");
    let u = 0;
    let closed = g.closed_neighbor_set(u);
    let (v, w) = g
        .neighbors(u)
        .iter()
        .find_map(|&v| {
            g.neighbors(v)
                .iter()
                .find(|&&w| !closed.contains(w))
                .map(|&w| (v, w))
        })
        .expect("connected regular graph with n > δ+1 has a vertex at distance 2");
    e.set(anchor, u);
    e.set(x, v);
    e.set(y, w);
    greedy_extend(g, t, &mut e, Some(&rest), None).expect("T − ℓ has δ+1 vertices");
    let free = g
        .neighbors(u)
        .iter()
        .copied()
        .find(|&z| !e.is_used(z))
        .expect("w is outside N[u]");
    e.set(leaf, free);
    Ok(contains(e))
}

/// Chvátal-extends to `T − L`, then hangs the `k − 1` leaves of `L` on free neighbors of their anchors.
pub fn complete_leaves(
    g: &Graph,
    t: &Tree,
    leaves: &[usize],
    partial: &PartialEmbedding,
) -> Result<PartialEmbedding> {
    let k = leaves.len() + 1;
    pre(g.n() > 0 && t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })?;
    pre(verify(partial, g, t), || {
        "seed embedding does not verify".into()
    })?;
    let mut in_l = VertexSet::with_capacity(t.n());
    for &l in leaves {
        pre(t.is_leaf(l) && !in_l.contains(l), || {
            format!("{l} is not a distinct leaf")
        })?;
        in_l.insert(l);
    }
    for &l in leaves {
        let w = t.neighbors(l)[0];
        pre(!in_l.contains(w), || format!("anchor {w} is itself in L"))?;
        pre(partial.is_mapped(w), || format!("anchor {w} is not mapped"))?;
        pre(!partial.is_mapped(l), || {
            format!("leaf {l} is already mapped")
        })?;
    }
    for &l in leaves {
        let w = t.neighbors(l)[0];
        let gw = partial.at(w);
        let saved = g.non_neighbors_in(gw, partial.image());
        let need = g.neighbor_deficiency(gw, k);
        if saved < need {
            return Err(Error::HypothesisNotMet(format!(
                "anchor {w} has {saved} saved non-neighbors, needs {need}"
            )));
        }
    }
    let mut rest = VertexSet::with_capacity(t.n());
    rest.insert_range(..);
    rest.difference_with(&in_l);
    let mut e = partial.clone();
    greedy_extend(g, t, &mut e, Some(&rest), None).expect("T − L has δ+1 vertices");
    let mut order: Vec<usize> = leaves.to_vec();
    order.sort_by_key(|&l| (g.neighbor_deficiency(e.at(t.neighbors(l)[0]), k), l));
    for l in order {
        let gw = e.at(t.neighbors(l)[0]);
        let v = g
            .neighbors(gw)
            .iter()
            .copied()
            .find(|&v| !e.is_used(v))
            .expect("saved non-neighbors leave a free neighbor for every remaining leaf");
        e.set(l, v);
    }
    assert!(
        verify_full(&e, g, t),
        "leaf completion produced an invalid embedding"
    );
    Ok(e)
}
