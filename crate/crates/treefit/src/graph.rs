//! Host graphs and the graph-side primitives.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Membership set over `0..n`.
pub type VertexSet = FixedBitSet;

pub fn vertex_set(n: usize, members: impl IntoIterator<Item = usize>) -> VertexSet {
    let mut s = FixedBitSet::with_capacity(n);
    for v in members {
        s.insert(v);
    }
    s
}

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    min_deg: usize,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {u} {v} out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(Error::InvalidGraph(format!("duplicate edge {a} {b}")));
            }
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Graph {
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let min_deg = adj.iter().map(Vec::len).min().unwrap_or(0);
        Graph {
            adj,
            edge_count,
            min_deg,
        }
    }

    pub fn complete(n: usize) -> Graph {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self::from_sorted_adjacency(adj)
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle needs n >= 3")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> Result<usize> {
        if self.adj.is_empty() {
            Err(Error::EmptyGraph)
        } else {
            Ok(self.min_deg)
        }
    }

    /// Minimum degree, 0 for the empty graph.
    pub fn delta(&self) -> usize {
        self.min_deg
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `max{(δ + k − 1) − deg(v), 0}`.
    pub fn neighbor_deficiency(&self, v: usize, k: usize) -> usize {
        (self.min_deg + k)
            .saturating_sub(1)
            .saturating_sub(self.degree(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        vertex_set(self.n(), self.adj[v].iter().copied())
    }

    pub fn closed_neighbor_set(&self, v: usize) -> VertexSet {
        let mut s = self.neighbor_set(v);
        s.insert(v);
        s
    }

    pub fn empty_set(&self) -> VertexSet {
        FixedBitSet::with_capacity(self.n())
    }

    pub fn full_set(&self) -> VertexSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn neighbors_in(&self, v: usize, set: &VertexSet) -> usize {
        self.adj[v].iter().filter(|&&u| set.contains(u)).count()
    }

    /// Members of `set` other than `v` that are not adjacent to `v`.
    pub fn non_neighbors_in(&self, v: usize, set: &VertexSet) -> usize {
        set.count_ones(..) - self.neighbors_in(v, set) - usize::from(set.contains(v))
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.bfs_distances(0).iter().all(|&d| d < self.n())
    }

    /// Distances from `source`; unreachable vertices get `n`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        self.bfs_distances_avoiding(source, &self.empty_set())
    }

    /// Distances from `source` in `G − forbidden`; unreachable vertices get `n`.
    pub fn bfs_distances_avoiding(&self, source: usize, forbidden: &VertexSet) -> Vec<usize> {
        let n = self.n();
        let mut dist = vec![n; n];
        if forbidden.contains(source) {
            return dist;
        }
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == n && !forbidden.contains(w) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// A shortest `s`–`t` path in `G − forbidden`, lowest-index parents first.
    pub fn shortest_path_avoiding(
        &self,
        s: usize,
        t: usize,
        forbidden: &VertexSet,
    ) -> Option<Vec<usize>> {
        let n = self.n();
        if forbidden.contains(s) || forbidden.contains(t) {
            return None;
        }
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX && !forbidden.contains(w) {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == usize::MAX {
            return None;
        }
        let mut path = vec![t];
        let mut cur = t;
        while cur != s {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Shortest path from any vertex of `from` to any vertex of `to` in `G − forbidden`.
    pub fn shortest_path_between_sets(
        &self,
        from: &VertexSet,
        to: &VertexSet,
        forbidden: &VertexSet,
    ) -> Option<Vec<usize>> {
        let n = self.n();
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for s in from.ones().filter(|&s| !forbidden.contains(s)) {
            parent[s] = s;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            if to.contains(u) {
                let mut path = vec![u];
                let mut cur = u;
                while parent[cur] != cur {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX && !forbidden.contains(w) {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Exact diameter with the lexicographically smallest diametral pair.
    pub fn diameter(&self) -> Result<(usize, (usize, usize))> {
        if self.n() == 0 {
            return Err(Error::EmptyGraph);
        }
        let n = self.n();
        let mut best = (0, (0, 0));
        for u in 0..n {
            let dist = self.bfs_distances(u);
            for v in u + 1..n {
                if dist[v] == n {
                    return Err(Error::Disconnected);
                }
                if dist[v] > best.0 {
                    best = (dist[v], (u, v));
                }
            }
        }
        Ok(best)
    }

    /// Diameter of `G − forbidden`; `None` when the remainder is empty or disconnected.
    pub fn diameter_avoiding(&self, forbidden: &VertexSet) -> Option<usize> {
        let n = self.n();
        let alive: Vec<usize> = (0..n).filter(|&v| !forbidden.contains(v)).collect();
        if alive.is_empty() {
            return None;
        }
        let mut best = 0;
        for &u in &alive {
            let dist = self.bfs_distances_avoiding(u, forbidden);
            for &v in &alive {
                if dist[v] == n {
                    return None;
                }
                best = best.max(dist[v]);
            }
        }
        Some(best)
    }

    /// Connected components of `G − forbidden`, each sorted, ordered by smallest member.
    pub fn components_avoiding(&self, forbidden: &VertexSet) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = forbidden.clone();
        let mut comps = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen.contains(w) {
                        seen.insert(w);
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Maximum matching between two disjoint vertex sets.
    pub fn max_bipartite_matching(
        &self,
        left: &VertexSet,
        right: &VertexSet,
    ) -> Vec<(usize, usize)> {
        let mut bm = Bipartite::new(self, left, right);
        bm.solve(usize::MAX);
        bm.pairs()
    }

    /// Minimum vertex cover of the edges between two disjoint sets.
    pub fn min_vertex_cover_between(&self, left: &VertexSet, right: &VertexSet) -> VertexSet {
        let mut bm = Bipartite::new(self, left, right);
        bm.solve(usize::MAX);
        bm.konig_cover(self.n())
    }

    fn escape_cut(&self, v: usize) -> (VertexSet, VertexSet) {
        let closed = self.closed_neighbor_set(v);
        let mut outside = self.full_set();
        outside.difference_with(&closed);
        (closed, outside)
    }

    /// `deg(v) ≥ δ + q` or a matching of size `q` leaves `N[v]`.
    pub fn is_q_escape(&self, v: usize, q: usize) -> bool {
        if self.degree(v) >= self.min_deg.saturating_add(q) {
            return true;
        }
        let (closed, outside) = self.escape_cut(v);
        if q > closed.count_ones(..).min(outside.count_ones(..)) {
            return false;
        }
        let mut bm = Bipartite::new(self, &closed, &outside);
        bm.solve(q) >= q
    }

    /// Lowest-index q-escape vertex, if any.
    pub fn find_q_escape(&self, q: usize) -> Option<usize> {
        (0..self.n()).find(|&v| self.is_q_escape(v, q))
    }

    /// Separator of size `< q` cutting `N[v]` from the rest, for a non-escape `v`.
    pub fn nonescape_separator(&self, v: usize, q: usize) -> Result<VertexSet> {
        if self.is_q_escape(v, q) {
            return Err(Error::IsEscapeVertex(v));
        }
        let (closed, outside) = self.escape_cut(v);
        let cover = self.min_vertex_cover_between(&closed, &outside);
        let mut inner = closed;
        inner.difference_with(&cover);
        let mut outer = outside;
        outer.difference_with(&cover);
        if inner.count_ones(..) == 0 || outer.count_ones(..) == 0 {
            return Err(Error::TooSmall);
        }
        Ok(cover)
    }

    /// Whether removing `s` leaves at least two components.
    pub fn is_separator(&self, s: &VertexSet) -> bool {
        self.components_avoiding(s).len() >= 2
    }

    /// Subgraph induced by `vertices` (in the given order) and the map back to `G`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut l: Vec<usize> = self.adj[v]
                    .iter()
                    .map(|&w| index[w])
                    .filter(|&w| w != usize::MAX)
                    .collect();
                l.sort_unstable();
                l
            })
            .collect();
        (Self::from_sorted_adjacency(adj), vertices.to_vec())
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n(), &edges).expect("permutation preserves simplicity")
    }
}

/// Augmenting-path matching on the cut graph between two vertex sets.
struct Bipartite {
    left: Vec<usize>,
    right: Vec<usize>,
    adj: Vec<Vec<usize>>,
    match_l: Vec<Option<usize>>,
    match_r: Vec<Option<usize>>,
}

impl Bipartite {
    fn new(g: &Graph, left: &VertexSet, right: &VertexSet) -> Bipartite {
        let left_v: Vec<usize> = left.ones().collect();
        let right_v: Vec<usize> = right.ones().collect();
        let mut index = vec![usize::MAX; g.n()];
        for (i, &r) in right_v.iter().enumerate() {
            index[r] = i;
        }
        let adj = left_v
            .iter()
            .map(|&l| {
                g.neighbors(l)
                    .iter()
                    .map(|&w| index[w])
                    .filter(|&i| i != usize::MAX)
                    .collect()
            })
            .collect();
        Bipartite {
            match_l: vec![None; left_v.len()],
            match_r: vec![None; right_v.len()],
            left: left_v,
            right: right_v,
            adj,
        }
    }

    /// Grows the matching until it is maximum or reaches `cap`; returns its size.
    fn solve(&mut self, cap: usize) -> usize {
        let mut size = 0;
        for u in 0..self.left.len() {
            if size >= cap {
                return size;
            }
            if let Some(&r) = self.adj[u].iter().find(|&&r| self.match_r[r].is_none()) {
                self.match_l[u] = Some(r);
                self.match_r[r] = Some(u);
                size += 1;
            }
        }
        let mut stamp = vec![0usize; self.right.len()];
        let mut round = 0;
        loop {
            let mut grew = false;
            round += 1;
            for u in 0..self.left.len() {
                if size >= cap {
                    return size;
                }
                if self.match_l[u].is_none() && self.augment(u, &mut stamp, round) {
                    size += 1;
                    grew = true;
                }
            }
            if !grew {
                return size;
            }
        }
    }

    fn augment(&mut self, start: usize, stamp: &mut [usize], round: usize) -> bool {
        let mut stack = vec![(start, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (u, i) = *top;
            if i == self.adj[u].len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let r = self.adj[u][i];
            if stamp[r] == round {
                continue;
            }
            stamp[r] = round;
            match self.match_r[r] {
                None => {
                    let mut r = r;
                    for &(u, _) in stack.iter().rev() {
                        let prev = self.match_l[u];
                        self.match_l[u] = Some(r);
                        self.match_r[r] = Some(u);
                        match prev {
                            Some(p) => r = p,
                            None => break,
                        }
                    }
                    return true;
                }
                Some(w) => stack.push((w, 0)),
            }
        }
        false
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.match_l
            .iter()
            .enumerate()
            .filter_map(|(u, r)| r.map(|r| (self.left[u], self.right[r])))
            .collect()
    }

    fn konig_cover(&self, n: usize) -> VertexSet {
        let mut seen_l = vec![false; self.left.len()];
        let mut seen_r = vec![false; self.right.len()];
        let mut queue: VecDeque<usize> = (0..self.left.len())
            .filter(|&u| self.match_l[u].is_none())
            .collect();
        for &u in &queue {
            seen_l[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &r in &self.adj[u] {
                if !seen_r[r] {
                    seen_r[r] = true;
                    if let Some(w) = self.match_r[r] {
                        if !seen_l[w] {
                            seen_l[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let mut cover = FixedBitSet::with_capacity(n);
        for (u, &s) in seen_l.iter().enumerate() {
            if !s {
                cover.insert(self.left[u]);
            }
        }
        for (r, &s) in seen_r.iter().enumerate() {
            if s {
                cover.insert(self.right[r]);
            }
        }
        cover
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_minus_edge() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    fn set(n: usize, v: &[usize]) -> VertexSet {
        vertex_set(n, v.iter().copied())
    }

    fn two_k5_sharing() -> Graph {
        // cliques {0,1,2,3,4} and {4,5,6,7,8}
        let mut edges = Vec::new();
        for c in [[0, 1, 2, 3, 4], [4, 5, 6, 7, 8]] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((c[i], c[j]));
                }
            }
        }
        Graph::from_edges(9, &edges).unwrap()
    }

    fn barbell6() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 6] {
            for i in 0..6 {
                for j in i + 1..6 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((5, 6));
        Graph::from_edges(12, &edges).unwrap()
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(Graph::cycle(6).min_degree(), Ok(2));
        assert_eq!(Graph::petersen().min_degree(), Ok(3));
        assert_eq!(k4_minus_edge().min_degree(), Ok(2));
        assert_eq!(
            Graph::from_edges(0, &[]).unwrap().min_degree(),
            Err(Error::EmptyGraph)
        );
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn deficiency_examples() {
        let k4 = Graph::complete(4);
        assert!((0..4).all(|v| k4.neighbor_deficiency(v, 2) == 1));
        let pet = Graph::petersen();
        assert!((0..10).all(|v| pet.neighbor_deficiency(v, 1) == 0));
        let chorded =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
                .unwrap();
        assert_eq!(chorded.neighbor_deficiency(0, 2), 0);
        assert_eq!(chorded.neighbor_deficiency(1, 2), 1);
    }

    #[test]
    fn matching_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(
            k4.max_bipartite_matching(&set(4, &[0]), &set(4, &[1, 2, 3]))
                .len(),
            1
        );
        let c6 = Graph::cycle(6);
        let m = c6.max_bipartite_matching(&set(6, &[0, 1, 2]), &set(6, &[3, 4, 5]));
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|&(u, v)| c6.has_edge(u, v)));
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(split
            .max_bipartite_matching(&set(4, &[0, 1]), &set(4, &[2, 3]))
            .is_empty());
    }

    #[test]
    fn escape_examples() {
        let k5 = Graph::complete(5);
        assert!(!k5.is_q_escape(0, 1));
        let pet = Graph::petersen();
        assert!((0..10).all(|v| pet.is_q_escape(v, 3)));
        assert!(!pet.is_q_escape(0, 4));
        assert!((0..10).all(|v| pet.is_q_escape(v, 0)));
    }

    #[test]
    fn separator_examples() {
        let g = two_k5_sharing();
        assert_eq!(g.nonescape_separator(0, 2).unwrap(), set(9, &[4]));
        assert_eq!(
            Graph::complete(5).nonescape_separator(0, 1),
            Err(Error::TooSmall)
        );
        let b = barbell6();
        let s = b.nonescape_separator(0, 2).unwrap();
        assert_eq!(s.count_ones(..), 1);
        assert!(s.contains(5) || s.contains(6));
        assert!(b.is_separator(&s));
        assert_eq!(
            Graph::petersen().nonescape_separator(0, 3),
            Err(Error::IsEscapeVertex(0))
        );
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(Graph::path(4).bfs_distances(0), vec![0, 1, 2, 3]);
        assert_eq!(Graph::cycle(6).bfs_distances(0), vec![0, 1, 2, 3, 2, 1]);
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(split.bfs_distances(0), vec![0, 1, 4, 4]);
    }

    #[test]
    fn shortest_path_examples() {
        let c6 = Graph::cycle(6);
        assert_eq!(
            c6.shortest_path_avoiding(0, 3, &set(6, &[1, 2])),
            Some(vec![0, 5, 4, 3])
        );
        assert_eq!(c6.shortest_path_avoiding(0, 3, &set(6, &[1, 4])), None);
        assert_eq!(
            Graph::complete(4).shortest_path_avoiding(0, 3, &set(4, &[])),
            Some(vec![0, 3])
        );
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(Graph::cycle(6).diameter().unwrap(), (3, (0, 3)));
        assert_eq!(Graph::complete(5).diameter().unwrap().0, 1);
        assert_eq!(Graph::path(5).diameter().unwrap(), (4, (0, 4)));
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(split.diameter(), Err(Error::Disconnected));
    }
}
