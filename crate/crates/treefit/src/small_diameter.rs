//! Small-diameter, non-separable trees on hosts without escape vertices: anchored
//! leaf completion over guessed parameters, and random guessing of the anchors.

use std::collections::HashSet;

use rand::{Rng, RngCore};

use crate::color_coding::{solve_ahsc_with, AhscInstance, AhscOutcome, Budget};
use crate::embedding::{greedy_extend, verify_full, PartialEmbedding};
use crate::error::{pre, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::outcome::{Branch, NotFoundReason, SolveOutcome};
use crate::seed::{child_seed, rng};
use crate::tree::Tree;

/// One guess of the counting parameters of a hypothetical solution restricted to `T − L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiLeafParams {
    /// Occupied non-neighbors of each anchor image, capped at its deficiency.
    pub a: Vec<usize>,
    /// Anchor images whose count falls short of their deficiency.
    pub b: VertexSet,
    /// Occupied neighbors of `b` that are not common to all of `b`.
    pub x: VertexSet,
    /// Occupied vertices outside `N[b]`.
    pub a_b: usize,
}

/// Leaf-adjacent tree vertices worth guessing as preimages of sampled neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WCandidates {
    pub w_set: Vec<usize>,
    pub root: usize,
    /// Chosen child roots of `root`, grouped by rooted shape.
    pub classes: Vec<Vec<usize>>,
}

/// Degree, escape and separability thresholds of the small-diameter regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallDiameterThresholds {
    pub min_delta: usize,
    pub escape_q: usize,
    pub separable_q: usize,
}

impl SmallDiameterThresholds {
    pub fn literal(k: usize, p: u32) -> SmallDiameterThresholds {
        let kp = k.saturating_pow(p);
        SmallDiameterThresholds {
            min_delta: k.saturating_pow(3 * p + 1),
            escape_q: kp,
            separable_q: kp,
        }
    }
}

fn for_each_subset(items: &[usize], r: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(
        items: &[usize],
        start: usize,
        r: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == r {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i]);
            if go(items, i + 1, r, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(items, 0, r, &mut Vec::with_capacity(r), f)
}

/// Visits every parameter guess for anchor images `us`, deficiency-saturated ones first.
/// Stops once `visit` returns `true`.
pub fn for_each_params(
    g: &Graph,
    us: &[usize],
    k: usize,
    visit: &mut dyn FnMut(&MultiLeafParams) -> bool,
) -> bool {
    let ndef: Vec<usize> = us.iter().map(|&u| g.neighbor_deficiency(u, k)).collect();
    let mut a = ndef.clone();
    loop {
        let b_idx: Vec<usize> = (0..us.len()).filter(|&i| a[i] < ndef[i]).collect();
        let mut b = g.empty_set();
        for &i in &b_idx {
            b.insert(us[i]);
        }
        if b_idx.is_empty() {
            let p = MultiLeafParams {
                a: a.clone(),
                b,
                x: g.empty_set(),
                a_b: 0,
            };
            if visit(&p) {
                return true;
            }
        } else {
            let mut common = g.full_set();
            let mut union = g.empty_set();
            for &i in &b_idx {
                let nb = g.neighbor_set(us[i]);
                common.intersect_with(&nb);
                union.union_with(&nb);
            }
            union.difference_with(&common);
            let ground: Vec<usize> = union.ones().collect();
            let nb = b_idx.len();
            if ground.len() < nb * (nb + 1) * (k - 1) {
                let min_a = b_idx.iter().map(|&i| a[i]).min().expect("nonempty");
                let xmax = (nb * (k - 1)).min(ground.len());
                for size in 0..=xmax {
                    let stop = for_each_subset(&ground, size, &mut |xs| {
                        let mut x = g.empty_set();
                        for &v in xs {
                            x.insert(v);
                        }
                        (0..=min_a).rev().any(|a_b| {
                            visit(&MultiLeafParams {
                                a: a.clone(),
                                b: b.clone(),
                                x: x.clone(),
                                a_b,
                            })
                        })
                    });
                    if stop {
                        return true;
                    }
                }
            }
        }
        // Odometer counting each a_i down from its deficiency.
        let mut i = 0;
        loop {
            if i == a.len() {
                return false;
            }
            if a[i] > 0 {
                a[i] -= 1;
                break;
            }
            a[i] = ndef[i];
            i += 1;
        }
    }
}

/// The parameters a complete solution `sigma` induces on `T − leaves`.
pub fn params_of_solution(g: &Graph, us: &[usize], k: usize, image: &VertexSet) -> MultiLeafParams {
    let a: Vec<usize> = us
        .iter()
        .map(|&u| {
            let outside = image
                .ones()
                .filter(|&v| v != u && !g.has_edge(u, v))
                .count();
            outside.min(g.neighbor_deficiency(u, k))
        })
        .collect();
    let mut b = g.empty_set();
    for (i, &u) in us.iter().enumerate() {
        if a[i] < g.neighbor_deficiency(u, k) {
            b.insert(u);
        }
    }
    let mut common = g.full_set();
    let mut union = g.empty_set();
    for u in b.ones() {
        let nb = g.neighbor_set(u);
        common.intersect_with(&nb);
        union.union_with(&nb);
    }
    let mut x = image.clone();
    x.intersect_with(&union);
    x.difference_with(&common);
    let mut closed_b = union.clone();
    closed_b.union_with(&b);
    let a_b = if b.count_ones(..) == 0 {
        0
    } else {
        image.ones().filter(|&v| !closed_b.contains(v)).count()
    };
    MultiLeafParams { a, b, x, a_b }
}

fn leaf_for_each(t: &Tree, anchors: &[usize]) -> Result<Vec<usize>> {
    let mut in_s = HashSet::new();
    for &s in anchors {
        pre(in_s.insert(s), || format!("anchor {s} repeated"))?;
    }
    anchors
        .iter()
        .map(|&s| {
            t.neighbors(s)
                .iter()
                .copied()
                .find(|&l| t.is_leaf(l) && !in_s.contains(&l))
                .ok_or_else(|| Error::PreconditionViolated(format!("{s} is not leaf-adjacent")))
        })
        .collect()
}

/// Embedding of `t` extending `kappa`, whose domain is `k − 1` leaf-adjacent vertices.
pub fn solve_with_leaf_anchor(
    g: &Graph,
    t: &Tree,
    kappa: &[(usize, usize)],
    k: usize,
    failure_exponent: u32,
    rng: &mut impl RngCore,
) -> Result<SolveOutcome> {
    solve_with_leaf_anchor_with(
        g,
        t,
        kappa,
        k,
        &Budget::new(failure_exponent, rng.next_u64()),
    )
}

pub fn solve_with_leaf_anchor_with(
    g: &Graph,
    t: &Tree,
    kappa: &[(usize, usize)],
    k: usize,
    budget: &Budget,
) -> Result<SolveOutcome> {
    pre(g.n() > 0 && k >= 1, || {
        "need a nonempty graph and k ≥ 1".into()
    })?;
    pre(t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })?;
    pre(kappa.len() == k - 1, || {
        format!("kappa has {} pairs, expected {}", kappa.len(), k - 1)
    })?;
    let anchors: Vec<usize> = kappa.iter().map(|p| p.0).collect();
    for &(x, v) in kappa {
        pre(x < t.n() && v < g.n(), || {
            format!("kappa pair ({x}, {v}) out of range")
        })?;
    }
    let us: Vec<usize> = kappa.iter().map(|p| p.1).collect();
    pre(us.iter().collect::<HashSet<_>>().len() == us.len(), || {
        "kappa is not injective".into()
    })?;
    let leaves = leaf_for_each(t, &anchors)?;
    let not_found = |rounds| SolveOutcome::NotFound {
        rounds,
        seed: budget.seed,
        failure_exponent: budget.failure_exponent,
        reason: NotFoundReason::Exhausted,
    };
    let seed_pairs = PartialEmbedding::from_pairs(t.n(), g.n(), kappa)?;
    if kappa.iter().any(|&(x, v)| g.degree(v) < t.degree(x)) {
        return Ok(not_found(0));
    }

    let mut keep = VertexSet::with_capacity(t.n());
    keep.insert_range(..);
    for &l in &leaves {
        keep.set(l, false);
    }
    let (core, map) = t.induced(&keep);
    let mut index = vec![usize::MAX; t.n()];
    for (i, &x) in map.iter().enumerate() {
        index[x] = i;
    }
    let core_kappa: Vec<(usize, usize)> = kappa.iter().map(|&(x, v)| (index[x], v)).collect();

    if k == 1 {
        let mut e = seed_pairs;
        greedy_extend(g, t, &mut e, None, None).expect("|V(T)| = δ + 1");
        return Ok(SolveOutcome::Contains {
            embedding: e,
            branch: Branch::LeafAnchor,
        });
    }

    let mut anchor_set = g.empty_set();
    for &u in &us {
        anchor_set.insert(u);
    }
    let mut rounds = 0u64;
    let mut attempt = 0u64;
    let mut result = None;
    for_each_params(g, &us, k, &mut |p| {
        let mut families: Vec<(VertexSet, usize)> = us
            .iter()
            .zip(&p.a)
            .map(|(&u, &a)| {
                let mut far = g.closed_neighbor_set(u);
                far.toggle_range(..);
                (far, a)
            })
            .collect();
        if p.b.count_ones(..) > 0 {
            families.push((p.x.clone(), p.x.count_ones(..)));
            let mut far_b = p.b.clone();
            for u in p.b.ones() {
                far_b.union_with(&g.neighbor_set(u));
            }
            far_b.toggle_range(..);
            families.push((far_b, p.a_b));
        }
        if families.iter().any(|(f, q)| *q > f.count_ones(..)) {
            return false;
        }
        attempt += 1;
        let inst = AhscInstance {
            g,
            t: &core,
            kappa: core_kappa.clone(),
            families,
        };
        let out = solve_ahsc_with(&inst, &budget.child(attempt)).expect("valid instance");
        let AhscOutcome::Found { embedding, .. } = out else {
            if let AhscOutcome::NotFound { rounds: r, .. } = out {
                rounds = rounds.saturating_add(r);
            }
            return false;
        };
        let mut xi = embedding;
        greedy_extend(g, &core, &mut xi, None, None).expect("|V(T − L)| = δ + 1");
        let mut free = xi.image().clone();
        free.toggle_range(..);
        let matching = g.max_bipartite_matching(&anchor_set, &free);
        if matching.len() < us.len() {
            return false;
        }
        let mut e = PartialEmbedding::new(t.n(), g.n());
        for x in 0..core.n() {
            e.set(map[x], xi.at(x));
        }
        for (i, &l) in leaves.iter().enumerate() {
            let (_, w) = *matching.iter().find(|m| m.0 == us[i]).expect("saturating");
            e.set(l, w);
        }
        assert!(
            verify_full(&e, g, t),
            "anchored completion produced an invalid embedding"
        );
        result = Some(e);
        true
    });
    Ok(match result {
        Some(embedding) => SolveOutcome::Contains {
            embedding,
            branch: Branch::LeafAnchor,
        },
        None => not_found(rounds),
    })
}

/// Leaf-adjacent vertices inside at most `k − 1` representatives of each shape of branch
/// hanging off the centroid.
pub fn build_w_candidates(t: &Tree, k: usize, separable_q: usize) -> Result<WCandidates> {
    if t.is_separable(separable_q) {
        return Err(Error::TreeIsSeparable);
    }
    let root = t.centroid();
    let mut codes: Vec<(Vec<u8>, Vec<usize>)> = Vec::new();
    for &c in t.neighbors(root) {
        let side = t.side_of_edge(root, c);
        let code = t.canonical_code_within(c, Some(&side));
        match codes.iter_mut().find(|(cd, _)| *cd == code) {
            Some((_, members)) => members.push(c),
            None => codes.push((code, vec![c])),
        }
    }
    let classes: Vec<Vec<usize>> = codes
        .into_iter()
        .map(|(_, m)| m.into_iter().take(k.saturating_sub(1)).collect())
        .collect();
    let mut w_set = Vec::new();
    for &c in classes.iter().flatten() {
        for x in t.side_of_edge(root, c).ones() {
            if t.neighbors(x).iter().any(|&y| t.is_leaf(y)) {
                w_set.push(x);
            }
        }
    }
    w_set.sort_unstable();
    Ok(WCandidates {
        w_set,
        root,
        classes,
    })
}

/// Rounds that drive the miss probability below `2^-failure_exponent`.
pub fn round_count(k: usize, p: u32, failure_exponent: u32) -> u64 {
    2u64.saturating_mul((k as u64).saturating_pow(p + 2))
        .saturating_mul(failure_exponent as u64)
}

pub fn check_preconditions(
    g: &Graph,
    t: &Tree,
    k: usize,
    th: &SmallDiameterThresholds,
) -> Result<()> {
    pre(g.n() > 0 && k >= 2, || {
        "need a nonempty graph and k ≥ 2".into()
    })?;
    pre(t.n() == g.delta() + k, || {
        format!("|V(T)|={} but δ+k={}", t.n(), g.delta() + k)
    })?;
    pre(g.delta() >= th.min_delta, || {
        format!("δ(G)={} below {}", g.delta(), th.min_delta)
    })?;
    if let Some(v) = g.find_q_escape(th.escape_q) {
        return Err(Error::PreconditionViolated(format!(
            "vertex {v} is a {}-escape vertex",
            th.escape_q
        )));
    }
    let (ld, _) = t.leaf_degree()?;
    pre(ld < k, || format!("ld(T)={ld} is not below k={k}"))?;
    pre(!t.is_separable(th.separable_q), || {
        format!("T is {}-separable", th.separable_q)
    })?;
    Ok(())
}

pub fn solve_small_diameter(
    g: &Graph,
    t: &Tree,
    k: usize,
    p: u32,
    failure_exponent: u32,
    rng: &mut impl RngCore,
) -> Result<SolveOutcome> {
    let budget = Budget::new(failure_exponent, rng.next_u64());
    solve_small_diameter_with(g, t, k, p, &SmallDiameterThresholds::literal(k, p), &budget)
}

pub fn solve_small_diameter_with(
    g: &Graph,
    t: &Tree,
    k: usize,
    p: u32,
    th: &SmallDiameterThresholds,
    budget: &Budget,
) -> Result<SolveOutcome> {
    check_preconditions(g, t, k, th)?;
    let w = build_w_candidates(t, k, th.separable_q)?;
    let rounds = round_count(k, p, budget.failure_exponent);
    let not_found = SolveOutcome::NotFound {
        rounds,
        seed: budget.seed,
        failure_exponent: budget.failure_exponent,
        reason: NotFoundReason::Exhausted,
    };
    if w.w_set.len() < k - 1 {
        return Ok(not_found);
    }
    let mut refuted: HashSet<Vec<(usize, usize)>> = HashSet::new();
    for round in 0..rounds {
        let u = (round % g.n() as u64) as usize;
        let mut pool = g.neighbors(u).to_vec();
        if pool.len() < k - 1 {
            continue;
        }
        let mut r = rng(child_seed(budget.seed, round));
        for i in 0..k - 1 {
            let j = r.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let sample = &pool[..k - 1];
        let mut chosen = Vec::with_capacity(k - 1);
        let mut found = None;
        injections(&w.w_set, sample, &mut chosen, &mut |kappa| {
            let mut key = kappa.to_vec();
            key.sort_unstable();
            if refuted.contains(&key) {
                return false;
            }
            let b = budget.child(round.wrapping_mul(1 << 20) ^ refuted.len() as u64);
            match solve_with_leaf_anchor_with(g, t, kappa, k, &b) {
                Ok(SolveOutcome::Contains { embedding, .. }) => {
                    found = Some(embedding);
                    true
                }
                _ => {
                    refuted.insert(key);
                    false
                }
            }
        });
        if let Some(embedding) = found {
            return Ok(SolveOutcome::Contains {
                embedding,
                branch: Branch::SmallDiameter,
            });
        }
    }
    Ok(not_found)
}

/// Assigns each sampled host vertex a distinct candidate preimage, in every possible way.
fn injections(
    w: &[usize],
    sample: &[usize],
    chosen: &mut Vec<(usize, usize)>,
    f: &mut dyn FnMut(&[(usize, usize)]) -> bool,
) -> bool {
    if chosen.len() == sample.len() {
        return f(chosen);
    }
    let target = sample[chosen.len()];
    for &x in w {
        if chosen.iter().any(|p| p.0 == x) {
            continue;
        }
        chosen.push((x, target));
        if injections(w, sample, chosen, f) {
            return true;
        }
        chosen.pop();
    }
    false
}
