//! Color-coding engines: plain containment, the colorful full-tree DP with hitting
//! quotas, and the annotated hitting subtree solver built on top of them.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::BuildHasherDefault;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::embedding::{verify, PartialEmbedding};
use crate::error::{pre, Result};
use crate::graph::{Graph, VertexSet};
use crate::outcome::{Branch, ExactReason, NotFoundReason, SolveOutcome};
use crate::search::{Search, SearchResult};
use crate::seed::child_seed;
use crate::tree::{CanonicalCode, Tree};

type DetMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

/// Sizes up to this are always decided by exhaustive search.
pub const EXACT_SIZE: usize = 6;

/// Largest palette a single DP run supports.
pub const MAX_PALETTE: usize = 64;

/// Color value for vertices no tree vertex may use.
const BLOCKED: u8 = u8::MAX;

/// Independent trials that push the miss probability for a size-`s` witness below
/// `2^-failure_exponent`.
pub fn trial_count(s: usize, failure_exponent: u32) -> u64 {
    let t = ((s as f64).exp() * failure_exponent as f64 * std::f64::consts::LN_2).ceil();
    if t >= 1e18 {
        u64::MAX
    } else {
        (t as u64).max(1)
    }
}

/// Knobs shared by every randomized engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub failure_exponent: u32,
    pub seed: u64,
    /// Caps backtracking nodes and, in units of DP work, randomized trials. `None` is unlimited.
    pub node_cap: Option<u64>,
}

impl Budget {
    pub fn new(failure_exponent: u32, seed: u64) -> Budget {
        Budget {
            failure_exponent,
            seed,
            node_cap: None,
        }
    }

    pub(crate) fn child(&self, index: u64) -> Budget {
        Budget {
            seed: child_seed(self.seed, index),
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<u8>,
    pub palette: usize,
    pub seed: u64,
}

impl Coloring {
    /// `reserved[j]` gets color `j`; every other vertex draws uniformly from the rest.
    pub fn random(n: usize, palette: usize, reserved: &[usize], seed: u64) -> Coloring {
        assert!(palette <= MAX_PALETTE && reserved.len() <= palette);
        let mut rng = crate::seed::rng(seed);
        let r = reserved.len();
        let mut colors: Vec<u8> = (0..n)
            .map(|_| {
                if palette > r {
                    rng.gen_range(r..palette) as u8
                } else {
                    BLOCKED
                }
            })
            .collect();
        for (j, &v) in reserved.iter().enumerate() {
            colors[v] = j as u8;
        }
        Coloring {
            colors,
            palette,
            seed,
        }
    }

    pub fn from_colors(colors: Vec<u8>, palette: usize) -> Coloring {
        assert!(palette <= MAX_PALETTE);
        assert!(colors
            .iter()
            .all(|&c| (c as usize) < palette || c == BLOCKED));
        Coloring {
            colors,
            palette,
            seed: 0,
        }
    }
}

/// Mixed-radix counter of quota hits, each digit capped at its quota.
struct Composition {
    caps: Vec<usize>,
    strides: Vec<usize>,
    full: usize,
}

impl Composition {
    fn new(families: &[(VertexSet, usize)]) -> Composition {
        let mut strides = Vec::with_capacity(families.len());
        let mut s = 1usize;
        let mut full = 0;
        for (_, k) in families {
            strides.push(s);
            full += k * s;
            s = s.checked_mul(k + 1).expect("composition space too large");
        }
        Composition {
            caps: families.iter().map(|f| f.1).collect(),
            strides,
            full,
        }
    }

    fn of_vertex(&self, v: usize, families: &[(VertexSet, usize)]) -> usize {
        families
            .iter()
            .zip(&self.strides)
            .filter(|((f, k), _)| *k > 0 && f.contains(v))
            .map(|(_, s)| s)
            .sum()
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&k, &s) in self.caps.iter().zip(&self.strides) {
            let da = (a / s) % (k + 1);
            let db = (b / s) % (k + 1);
            out += (da + db).min(k) * s;
        }
        out
    }
}

#[derive(Clone, Copy)]
struct State {
    v: u32,
    mask: u64,
    comp: usize,
    /// Index into the previous stage and into the child's final stage.
    back: (u32, u32),
}

/// Colorful embedding of all of `t` respecting `kappa` and meeting every quota, if one
/// exists under `coloring`.
pub fn colorful_full_tree_dp(
    g: &Graph,
    t: &Tree,
    coloring: &Coloring,
    kappa: &[(usize, usize)],
    families: &[(VertexSet, usize)],
) -> Option<PartialEmbedding> {
    if t.n() > coloring.palette || t.n() > g.n() {
        return None;
    }
    let mut fixed = vec![None; t.n()];
    for &(x, v) in kappa {
        fixed[x] = Some(v);
    }
    let root = kappa.first().map_or(0, |p| p.0);
    let view = t.rooted(root);
    let comp = Composition::new(families);
    let hit: Vec<usize> = (0..g.n()).map(|v| comp.of_vertex(v, families)).collect();
    let color = |v: usize| coloring.colors[v];

    let mut stages: Vec<Vec<Vec<State>>> = vec![Vec::new(); t.n()];
    let mut by_vertex: Vec<Vec<Vec<u32>>> = vec![Vec::new(); t.n()];
    for &x in view.order.iter().rev() {
        let start: Vec<State> = match fixed[x] {
            Some(v) if color(v) != BLOCKED => vec![State {
                v: v as u32,
                mask: 1 << color(v),
                comp: hit[v],
                back: (0, 0),
            }],
            Some(_) => Vec::new(),
            None => (0..g.n())
                .filter(|&v| color(v) != BLOCKED && g.degree(v) >= t.degree(x))
                .map(|v| State {
                    v: v as u32,
                    mask: 1 << color(v),
                    comp: hit[v],
                    back: (0, 0),
                })
                .collect(),
        };
        let mut list = vec![start];
        for &c in &view.children[x] {
            let cur = list.last().expect("stage");
            let child_final = stages[c].last().expect("child done");
            let mut next: Vec<State> = Vec::new();
            let mut seen: DetMap<(u32, u64, usize), ()> = DetMap::default();
            for (i, s) in cur.iter().enumerate() {
                for &w in g.neighbors(s.v as usize) {
                    for &j in &by_vertex[c][w] {
                        let cs = &child_final[j as usize];
                        if s.mask & cs.mask != 0 {
                            continue;
                        }
                        let key = (s.v, s.mask | cs.mask, comp.add(s.comp, cs.comp));
                        if seen.insert(key, ()).is_none() {
                            next.push(State {
                                v: key.0,
                                mask: key.1,
                                comp: key.2,
                                back: (i as u32, j),
                            });
                        }
                    }
                }
            }
            list.push(next);
        }
        let mut grouped = vec![Vec::new(); g.n()];
        for (i, s) in list.last().expect("stage").iter().enumerate() {
            grouped[s.v as usize].push(i as u32);
        }
        by_vertex[x] = grouped;
        stages[x] = list;
        for &c in &view.children[x] {
            by_vertex[c] = Vec::new();
        }
    }

    let top = stages[root].last().expect("root stage");
    let idx = top.iter().position(|s| s.comp == comp.full)?;
    let mut e = PartialEmbedding::new(t.n(), g.n());
    let mut work = vec![(root, idx)];
    while let Some((x, mut i)) = work.pop() {
        let list = &stages[x];
        for (k, &c) in view.children[x].iter().enumerate().rev() {
            let s = list[k + 1][i];
            work.push((c, s.back.1 as usize));
            i = s.back.0 as usize;
        }
        e.set(x, list[0][i].v as usize);
    }
    debug_assert!(verify(&e, g, t));
    Some(e)
}

enum Attempt {
    Found(PartialEmbedding, Branch),
    Infeasible,
    Failed { rounds: u64, reason: NotFoundReason },
}

fn dp_work(g: &Graph, s: usize, families: &[(VertexSet, usize)]) -> u64 {
    let comps: u64 = families.iter().map(|f| f.1 as u64 + 1).product();
    (1u64 << s.min(62))
        .saturating_mul(s as u64)
        .saturating_mul(2 * g.m() as u64 + g.n() as u64)
        .saturating_mul(comps)
}

/// Embeds the subtree on `targets` (all of `t` when `None`): exact search first, colorful
/// trials once the search exceeds the cost of the randomized schedule.
fn solve_subtree(
    g: &Graph,
    t: &Tree,
    targets: Option<&VertexSet>,
    kappa: &[(usize, usize)],
    families: &[(VertexSet, usize)],
    budget: &Budget,
) -> Attempt {
    let s = targets.map_or(t.n(), |set| set.count_ones(..));
    let trials = trial_count(s, budget.failure_exponent);
    let work = dp_work(g, s, families);
    let user_cap = budget.node_cap.unwrap_or(u64::MAX);
    let cap = if s <= EXACT_SIZE {
        user_cap
    } else {
        trials.saturating_mul(work).min(user_cap)
    };
    let search = Search {
        targets,
        fixed: kappa,
        families,
        node_cap: cap,
        ..Search::new(g, t)
    };
    match search.run() {
        SearchResult::Found(e) => return Attempt::Found(e, Branch::Exact),
        SearchResult::Infeasible => return Attempt::Infeasible,
        SearchResult::BudgetExceeded => {}
    }
    if s <= EXACT_SIZE || s > MAX_PALETTE {
        return Attempt::Failed {
            rounds: 0,
            reason: NotFoundReason::BudgetExceeded,
        };
    }
    let affordable = match budget.node_cap {
        Some(c) => (c / work.max(1)).max(1),
        None => u64::MAX,
    };
    let rounds = trials.min(affordable);
    let reason = if rounds < trials {
        NotFoundReason::BudgetExceeded
    } else {
        NotFoundReason::Exhausted
    };

    let (sub, map) = match targets {
        Some(set) => t.induced(set),
        None => (t.clone(), (0..t.n()).collect()),
    };
    let mut index = vec![usize::MAX; t.n()];
    for (i, &x) in map.iter().enumerate() {
        index[x] = i;
    }
    let sub_kappa: Vec<(usize, usize)> = kappa
        .iter()
        .filter(|p| index[p.0] != usize::MAX)
        .map(|&(x, v)| (index[x], v))
        .collect();
    let reserved: Vec<usize> = sub_kappa.iter().map(|p| p.1).collect();
    let found = (0..rounds).into_par_iter().find_map_first(|i| {
        let coloring = Coloring::random(g.n(), s, &reserved, child_seed(budget.seed, i));
        colorful_full_tree_dp(g, &sub, &coloring, &sub_kappa, families)
    });
    match found {
        Some(se) => {
            let mut e = PartialEmbedding::new(t.n(), g.n());
            for (i, &x) in map.iter().enumerate() {
                e.set(x, se.at(i));
            }
            Attempt::Found(e, Branch::ColorCoding)
        }
        None => Attempt::Failed { rounds, reason },
    }
}

/// Containment of all of `t`, seeded from `rng`.
pub fn contains_tree_by_size(
    g: &Graph,
    t: &Tree,
    failure_exponent: u32,
    rng: &mut impl RngCore,
) -> SolveOutcome {
    contains_tree_by_size_with(g, t, &Budget::new(failure_exponent, rng.next_u64()))
}

pub fn contains_tree_by_size_with(g: &Graph, t: &Tree, budget: &Budget) -> SolveOutcome {
    if t.n() > g.n() {
        return SolveOutcome::NotContained {
            reason: ExactReason::Size,
        };
    }
    match solve_subtree(g, t, None, &[], &[], budget) {
        Attempt::Found(embedding, branch) => SolveOutcome::Contains { embedding, branch },
        Attempt::Infeasible => SolveOutcome::NotContained {
            reason: ExactReason::Exhaustive,
        },
        Attempt::Failed { rounds, reason } => SolveOutcome::NotFound {
            rounds,
            seed: budget.seed,
            failure_exponent: budget.failure_exponent,
            reason,
        },
    }
}

/// Whether the tree rooted at `proot` embeds into the tree rooted at `hroot` with roots
/// matched and parent/child relations preserved.
pub fn is_rooted_subtree(pattern: &Tree, proot: usize, host: &Tree, hroot: usize) -> bool {
    let pv = pattern.rooted(proot);
    let hv = host.rooted(hroot);
    let mut memo: Vec<Vec<Option<bool>>> = vec![vec![None; host.n()]; pattern.n()];
    fn fits(
        p: usize,
        h: usize,
        pv: &crate::tree::RootedView,
        hv: &crate::tree::RootedView,
        memo: &mut Vec<Vec<Option<bool>>>,
    ) -> bool {
        if let Some(r) = memo[p][h] {
            return r;
        }
        let pk = &pv.children[p];
        let hk = &hv.children[h];
        let ok = pk.len() <= hk.len() && pv.size[p] <= hv.size[h] && {
            let adj: Vec<Vec<usize>> = pk
                .iter()
                .map(|&a| {
                    (0..hk.len())
                        .filter(|&j| fits(a, hk[j], pv, hv, memo))
                        .collect()
                })
                .collect();
            let mut owner = vec![usize::MAX; hk.len()];
            (0..pk.len()).all(|i| {
                let mut seen = vec![false; hk.len()];
                augment(i, &adj, &mut owner, &mut seen)
            })
        };
        memo[p][h] = Some(ok);
        ok
    }
    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j] == usize::MAX || augment(owner[j], adj, owner, seen) {
                    owner[j] = i;
                    return true;
                }
            }
        }
        false
    }
    fits(proot, hroot, &pv, &hv, &mut memo)
}

/// Input of the annotated hitting subtree problem: a connected subtree of `t` containing
/// the domain of `kappa`, embedded consistently with it, with at least `k_i` images in `F_i`.
#[derive(Clone, Debug)]
pub struct AhscInstance<'a> {
    pub g: &'a Graph,
    pub t: &'a Tree,
    pub kappa: Vec<(usize, usize)>,
    pub families: Vec<(VertexSet, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AhscOutcome {
    Found {
        subtree: VertexSet,
        embedding: PartialEmbedding,
    },
    /// `exhaustive` when every candidate subtree was refuted exactly.
    NotFound { exhaustive: bool, rounds: u64 },
}

impl AhscOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, AhscOutcome::Found { .. })
    }
}

impl<'a> AhscInstance<'a> {
    pub fn validate(&self) -> Result<()> {
        let mut domain = HashSet::new();
        let mut image = HashSet::new();
        for &(x, v) in &self.kappa {
            pre(x < self.t.n() && v < self.g.n(), || {
                format!("kappa pair ({x}, {v}) out of range")
            })?;
            pre(domain.insert(x) && image.insert(v), || {
                "kappa is not an injective function".into()
            })?;
        }
        for (i, (f, k)) in self.families.iter().enumerate() {
            pre(f.len() == self.g.n(), || {
                format!("family {i} has the wrong universe")
            })?;
            pre(*k <= f.count_ones(..), || {
                format!("family {i} quota exceeds its size")
            })?;
        }
        Ok(())
    }

    fn quota_total(&self) -> usize {
        self.families.iter().map(|f| f.1).sum()
    }
}

pub fn solve_ahsc(
    inst: &AhscInstance<'_>,
    failure_exponent: u32,
    rng: &mut impl RngCore,
) -> Result<AhscOutcome> {
    solve_ahsc_with(inst, &Budget::new(failure_exponent, rng.next_u64()))
}

pub fn solve_ahsc_with(inst: &AhscInstance<'_>, budget: &Budget) -> Result<AhscOutcome> {
    inst.validate()?;
    if inst.kappa.is_empty() {
        let mut exhaustive = true;
        let mut rounds = 0u64;
        let mut branch = 0u64;
        for a in 0..inst.t.n() {
            for v in 0..inst.g.n() {
                let sub = AhscInstance {
                    kappa: vec![(a, v)],
                    ..inst.clone()
                };
                branch += 1;
                match anchored(&sub, &budget.child(branch)) {
                    found @ AhscOutcome::Found { .. } => return Ok(found),
                    AhscOutcome::NotFound {
                        exhaustive: ex,
                        rounds: r,
                    } => {
                        exhaustive &= ex;
                        rounds = rounds.saturating_add(r);
                    }
                }
            }
        }
        return Ok(AhscOutcome::NotFound { exhaustive, rounds });
    }
    Ok(anchored(inst, budget))
}

fn anchored(inst: &AhscInstance<'_>, budget: &Budget) -> AhscOutcome {
    let t = inst.t;
    let anchors: Vec<usize> = inst.kappa.iter().map(|p| p.0).collect();
    let core = t.minimal_spanning_subtree(&anchors);
    let core_list: Vec<usize> = core.ones().collect();
    let k = inst.quota_total();
    let shapes: Vec<Vec<Vec<VertexSet>>> = core_list
        .iter()
        .map(|&w| {
            let mut blocked = core.clone();
            blocked.set(w, false);
            hanging_shapes(t, w, &blocked, k)
        })
        .collect();

    let mut tried: HashSet<VertexSet> = HashSet::new();
    let mut exhaustive = true;
    let mut rounds = 0u64;
    let mut found = None;
    let mut parts = vec![0usize; core_list.len()];
    for total in 0..=k {
        let stop = compositions(&mut parts, 0, total, &shapes, &mut |parts: &[usize]| {
            let mut pick = vec![0usize; parts.len()];
            loop {
                let mut sub = core.clone();
                for (i, &a) in parts.iter().enumerate() {
                    sub.union_with(&shapes[i][a][pick[i]]);
                }
                if tried.insert(sub.clone()) {
                    let b = budget.child(tried.len() as u64);
                    match solve_subtree(inst.g, t, Some(&sub), &inst.kappa, &inst.families, &b) {
                        Attempt::Found(e, _) => {
                            found = Some((sub, e));
                            return true;
                        }
                        Attempt::Infeasible => {}
                        Attempt::Failed { rounds: r, .. } => {
                            exhaustive = false;
                            rounds = rounds.saturating_add(r);
                        }
                    }
                }
                // Odometer over the shape choices.
                let mut i = 0;
                loop {
                    if i == parts.len() {
                        return false;
                    }
                    pick[i] += 1;
                    if pick[i] < shapes[i][parts[i]].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
            }
        });
        if stop {
            break;
        }
    }
    match found {
        Some((subtree, embedding)) => {
            debug_assert!(verify(&embedding, inst.g, t));
            AhscOutcome::Found { subtree, embedding }
        }
        None => AhscOutcome::NotFound { exhaustive, rounds },
    }
}

/// Calls `visit` on each composition of `total` into `parts.len()` terms (lexicographic,
/// skipping terms with no shape); returns `true` once `visit` does.
fn compositions(
    parts: &mut Vec<usize>,
    i: usize,
    total: usize,
    shapes: &[Vec<Vec<VertexSet>>],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == parts.len() {
        return total == 0 && visit(parts);
    }
    if i + 1 == parts.len() {
        if shapes[i].get(total).map_or(true, |s| s.is_empty()) {
            return false;
        }
        parts[i] = total;
        return visit(parts);
    }
    for a in 0..=total {
        if shapes[i].get(a).map_or(true, |s| s.is_empty()) {
            continue;
        }
        parts[i] = a;
        if compositions(parts, i + 1, total - a, shapes, visit) {
            return true;
        }
    }
    false
}

/// For each `a ≤ max_leaves`, one realization per isomorphism class of rooted subtree of
/// the branch at `root` (avoiding `blocked`) with exactly `a` leaves other than the root.
pub(crate) fn hanging_shapes(
    t: &Tree,
    root: usize,
    blocked: &VertexSet,
    max_leaves: usize,
) -> Vec<Vec<VertexSet>> {
    let n = t.n();
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in t.neighbors(u) {
            if parent[w] == usize::MAX && !blocked.contains(w) {
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let mut branch = VertexSet::with_capacity(n);
    for &v in &order {
        branch.insert(v);
    }
    // shapes[v][a]: (code, realization) rooted at v with `a` leaves strictly below v.
    let mut table: Vec<Vec<Vec<(CanonicalCode, VertexSet)>>> = vec![Vec::new(); n];
    for &v in order.iter().rev() {
        let mut acc: Vec<BTreeMap<Vec<CanonicalCode>, VertexSet>> =
            vec![BTreeMap::new(); max_leaves + 1];
        let mut only = VertexSet::with_capacity(n);
        only.insert(v);
        acc[0].insert(Vec::new(), only);
        for &c in t
            .neighbors(v)
            .iter()
            .filter(|&&c| c != parent[v] && parent[c] == v)
        {
            let mut next = acc.clone();
            for (a1, entries) in acc.iter().enumerate() {
                for (codes, set) in entries {
                    for (ac, child_shapes) in table[c].iter().enumerate() {
                        let sum = a1 + ac.max(1);
                        if sum > max_leaves {
                            break;
                        }
                        for (code, cset) in child_shapes {
                            let mut key = codes.clone();
                            let at = key.binary_search(code).unwrap_or_else(|e| e);
                            key.insert(at, code.clone());
                            next[sum].entry(key).or_insert_with(|| {
                                let mut u = set.clone();
                                u.union_with(cset);
                                u
                            });
                        }
                    }
                }
            }
            acc = next;
        }
        table[v] = acc
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|(codes, set)| {
                        let mut code = vec![b'('];
                        for c in codes {
                            code.extend_from_slice(&c);
                        }
                        code.push(b')');
                        (code, set)
                    })
                    .collect()
            })
            .collect();
        for &c in t.neighbors(v) {
            if parent[c] == v && c != v {
                table[c] = Vec::new();
            }
        }
    }
    let out: Vec<Vec<VertexSet>> = std::mem::take(&mut table[root])
        .into_iter()
        .map(|l| l.into_iter().map(|p| p.1).collect())
        .collect();
    if cfg!(debug_assertions) {
        let (host, hmap) = t.induced(&branch);
        let hroot = hmap
            .iter()
            .position(|&x| x == root)
            .expect("root in branch");
        for set in out.iter().flatten() {
            let (pat, pmap) = t.induced(set);
            let proot = pmap.iter().position(|&x| x == root).expect("root in shape");
            debug_assert!(is_rooted_subtree(&pat, proot, &host, hroot));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vertex_set;
    use crate::seed::rng;

    #[test]
    fn trial_schedule() {
        assert_eq!(trial_count(1, 1), 2);
        assert_eq!(
            trial_count(5, 20),
            ((5f64).exp() * 20.0 * std::f64::consts::LN_2).ceil() as u64
        );
        assert_eq!(trial_count(200, 20), u64::MAX);
    }

    #[test]
    fn by_size_examples() {
        let mut r = rng(1);
        assert!(
            contains_tree_by_size(&Graph::complete(3), &Tree::path(3), 20, &mut r).is_contains()
        );
        assert_eq!(
            contains_tree_by_size(&Graph::cycle(4), &Tree::star(3), 20, &mut r),
            SolveOutcome::NotContained {
                reason: ExactReason::Exhaustive
            }
        );
        assert_eq!(
            contains_tree_by_size(&Graph::cycle(4), &Tree::path(5), 20, &mut r),
            SolveOutcome::NotContained {
                reason: ExactReason::Size
            }
        );
    }

    #[test]
    fn dp_examples() {
        let k3 = Graph::complete(3);
        let p3 = Tree::path(3);
        let rainbow = Coloring::from_colors(vec![0, 1, 2], 3);
        assert!(colorful_full_tree_dp(&k3, &p3, &rainbow, &[], &[]).is_some());
        let mono = Coloring::from_colors(vec![0, 0, 0], 3);
        assert!(colorful_full_tree_dp(&k3, &p3, &mono, &[], &[]).is_none());

        let c5 = Graph::cycle(5);
        let fam = [(vertex_set(5, [2, 3]), 1)];
        let mut hits = 0;
        for seed in 0..200 {
            let col = Coloring::random(5, 3, &[0], seed);
            if let Some(e) = colorful_full_tree_dp(&c5, &p3, &col, &[(1, 0)], &fam) {
                assert_eq!(e.at(1), 0);
                assert!([e.at(0), e.at(2)].iter().any(|v| [2, 3].contains(v)));
                hits += 1;
            }
        }
        // The mid vertex sits on 0, whose neighbours are 1 and 4: quota cannot be met.
        assert_eq!(hits, 0);
        let fam = [(vertex_set(5, [1, 3]), 1)];
        let col = Coloring::from_colors(vec![0, 1, 0, 0, 2], 3);
        let e = colorful_full_tree_dp(&c5, &p3, &col, &[(1, 0)], &fam).expect("found");
        assert_eq!(e.at(1), 0);
    }

    #[test]
    fn dp_finds_paths_with_rainbow() {
        let g = Graph::cycle(8);
        let t = Tree::path(7);
        let col = Coloring::from_colors((0..8).map(|v| (v % 7) as u8).collect(), 7);
        let e = colorful_full_tree_dp(&g, &t, &col, &[], &[]).expect("rainbow path exists");
        assert!(verify(&e, &g, &t) && e.is_full());
    }

    #[test]
    fn ahsc_examples() {
        let c6 = Graph::cycle(6);
        let p5 = Tree::path(5);
        let far = vertex_set(6, [2, 3, 4]);
        let inst = AhscInstance {
            g: &c6,
            t: &p5,
            kappa: vec![(2, 0)],
            families: vec![(far.clone(), 1)],
        };
        let AhscOutcome::Found { subtree, embedding } = solve_ahsc(&inst, 20, &mut rng(3)).unwrap()
        else {
            panic!("should find")
        };
        assert!(embedding.domain().all(|x| subtree.contains(x)));
        assert!(embedding.domain().any(|x| far.contains(embedding.at(x))));
        assert_eq!(embedding.at(2), 0);

        let empty = AhscInstance {
            g: &c6,
            t: &p5,
            kappa: vec![(2, 0)],
            families: vec![(c6.empty_set(), 1)],
        };
        assert!(empty.validate().is_err());

        let total: Vec<(usize, usize)> = (0..5).map(|x| (x, x)).collect();
        let inst = AhscInstance {
            g: &c6,
            t: &p5,
            kappa: total,
            families: vec![],
        };
        assert!(solve_ahsc(&inst, 20, &mut rng(0)).unwrap().is_found());
        let bad = vec![(0, 0), (1, 2), (2, 3), (3, 4), (4, 5)];
        let inst = AhscInstance {
            g: &c6,
            t: &p5,
            kappa: bad,
            families: vec![],
        };
        assert_eq!(
            solve_ahsc(&inst, 20, &mut rng(0)).unwrap(),
            AhscOutcome::NotFound {
                exhaustive: true,
                rounds: 0
            }
        );
    }

    #[test]
    fn ahsc_unanchored() {
        let g = Graph::cycle(5);
        let t = Tree::star(3);
        let fam = vertex_set(5, [0, 1, 2]);
        let inst = AhscInstance {
            g: &g,
            t: &t,
            kappa: vec![],
            families: vec![(fam, 3)],
        };
        let out = solve_ahsc(&inst, 20, &mut rng(0)).unwrap();
        let AhscOutcome::Found { embedding, .. } = out else {
            panic!()
        };
        assert_eq!(embedding.len(), 3);
    }

    #[test]
    fn shapes_dedupe() {
        let t = Tree::star(5);
        let none = VertexSet::with_capacity(6);
        let s = hanging_shapes(&t, 0, &none, 3);
        assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        let p = Tree::path(4);
        let s = hanging_shapes(&p, 1, &none, 2);
        // One leaf: 1-0, 1-2, 1-2-3 (1-0 and 1-2 coincide up to shape). Two leaves: 0-1-2, 0-1-2-3.
        assert_eq!(s[1].len(), 2);
        assert_eq!(s[2].len(), 2);
    }

    #[test]
    fn rooted_subtree_basics() {
        let p3 = Tree::path(3);
        let star = Tree::star(3);
        assert!(is_rooted_subtree(&p3, 1, &star, 0));
        assert!(!is_rooted_subtree(&star, 0, &p3, 0));
        assert!(!is_rooted_subtree(&p3, 0, &star, 0));
        assert!(is_rooted_subtree(&p3, 0, &Tree::path(4), 0));
    }
}
