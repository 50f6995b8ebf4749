//! Naive reference implementations, written without the library's search code.

use treefit::{Graph, PartialEmbedding, Tree};

/// Plain backtracking: tree vertices in BFS order from a maximum-degree vertex, each mapped to
/// an unused neighbour of its parent's image with enough degree.
pub fn embedding(g: &Graph, t: &Tree) -> Option<Vec<usize>> {
    let (n, m) = (t.n(), g.n());
    if n > m {
        return None;
    }
    let root = (0..n).max_by_key(|&v| t.degree(v)).unwrap();
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in t.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; m];
    fn go(
        g: &Graph,
        t: &Tree,
        order: &[usize],
        parent: &[usize],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let x = order[i];
        let candidates: Vec<usize> = if i == 0 {
            (0..g.n()).collect()
        } else {
            g.neighbors(map[parent[x]]).to_vec()
        };
        for v in candidates {
            if used[v] || g.degree(v) < t.degree(x) {
                continue;
            }
            used[v] = true;
            map[x] = v;
            if go(g, t, order, parent, i + 1, map, used) {
                return true;
            }
            used[v] = false;
        }
        false
    }
    go(g, t, &order, &parent, 0, &mut map, &mut used).then_some(map)
}

pub fn contains(g: &Graph, t: &Tree) -> bool {
    embedding(g, t).is_some()
}

/// Full-domain check: every tree vertex mapped, injective, edges preserved.
pub fn certificate_ok(g: &Graph, t: &Tree, e: &PartialEmbedding) -> bool {
    if e.t_len() != t.n() || e.g_len() != g.n() {
        return false;
    }
    let mut map = Vec::with_capacity(t.n());
    for x in 0..t.n() {
        match e.get(x) {
            Some(v) if v < g.n() => map.push(v),
            _ => return false,
        }
    }
    let mut sorted = map.clone();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == map.len() && t.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b]))
}

pub fn min_degree(g: &Graph) -> usize {
    (0..g.n()).map(|v| g.neighbors(v).len()).min().unwrap_or(0)
}

pub fn is_regular(g: &Graph) -> bool {
    (0..g.n()).all(|v| g.neighbors(v).len() == min_degree(g))
}

pub fn is_star(t: &Tree) -> bool {
    t.n() >= 2 && (0..t.n()).any(|v| t.neighbors(v).len() == t.n() - 1)
}

fn distances(t: &Tree, s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; t.n()];
    d[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &y in t.neighbors(x) {
            if d[y] == usize::MAX {
                d[y] = d[x] + 1;
                queue.push_back(y);
            }
        }
    }
    d
}

/// Diameter by all-pairs BFS.
pub fn tree_diameter(t: &Tree) -> usize {
    (0..t.n())
        .map(|s| distances(t, s).into_iter().max().unwrap())
        .max()
        .unwrap()
}

pub fn leaf_count(t: &Tree) -> usize {
    (0..t.n()).filter(|&v| t.neighbors(v).len() == 1).count()
}

/// Smallest set meeting every open neighbourhood `N_T(v)`, by subset enumeration; `None` when
/// some neighbourhood is empty.
pub fn min_hitting_set(t: &Tree) -> Option<usize> {
    let n = t.n();
    let masks: Vec<u32> = (0..n)
        .map(|v| t.neighbors(v).iter().fold(0, |m, &w| m | 1 << w))
        .collect();
    (0u32..1 << n)
        .filter(|&s| masks.iter().all(|&m| m & s != 0))
        .map(|s| s.count_ones() as usize)
        .min()
}
