//! Guest trees and the structural queries the case analysis dispatches on.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{vertex_set, VertexSet};

/// Tree on `0..n`, validated connected and acyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

/// AHU code: `(` children-codes-sorted `)` as bytes.
pub type CanonicalCode = Vec<u8>;

/// A tree seen from a root.
#[derive(Clone, Debug)]
pub struct RootedView {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub size: Vec<usize>,
    pub depth: Vec<usize>,
    /// Length of the longest downward path.
    pub height: Vec<usize>,
    /// BFS order from the root.
    pub order: Vec<usize>,
}

/// One maximal trivial path after contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedPath {
    /// Full vertex sequence in the original tree.
    pub original: Vec<usize>,
    /// Edges removed by contraction.
    pub owed: usize,
}

#[derive(Clone, Debug)]
pub struct Contracted {
    pub tree: Tree,
    /// Contracted-tree vertex to original vertex.
    pub to_original: Vec<usize>,
    pub paths: Vec<ContractedPath>,
}

impl Tree {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges for {} vertices",
                edges.len(),
                n
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidTree(format!("bad edge {u} {v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        let t = Tree {
            adj,
            edges: edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect(),
        };
        if t.bfs_distances(0).iter().any(|&d| d == n) {
            return Err(Error::InvalidTree("cycle or disconnected".into()));
        }
        Ok(t)
    }

    pub fn path(n: usize) -> Tree {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::from_edges(n, &edges).expect("path")
    }

    /// `K_{1,leaves}` centred at 0.
    pub fn star(leaves: usize) -> Tree {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Tree::from_edges(leaves + 1, &edges).expect("star")
    }

    /// Centre 0 with `legs` paths of `len` edges each.
    pub fn spider(legs: usize, len: usize) -> Tree {
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::from_edges(next, &edges).expect("spider")
    }

    /// Path `0..spine` with `legs[i]` pendant leaves on spine vertex `i`.
    pub fn caterpillar(legs: &[usize]) -> Tree {
        let spine = legs.len();
        let mut edges: Vec<_> = (1..spine).map(|i| (i - 1, i)).collect();
        let mut next = spine;
        for (i, &c) in legs.iter().enumerate() {
            for _ in 0..c {
                edges.push((i, next));
                next += 1;
            }
        }
        Tree::from_edges(next, &edges).expect("caterpillar")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() == 1
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_neighbors(&self, v: usize) -> Vec<usize> {
        self.adj[v]
            .iter()
            .copied()
            .filter(|&u| self.is_leaf(u))
            .collect()
    }

    pub fn max_degree(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for v in 0..self.n() {
            if self.degree(v) > best.0 {
                best = (self.degree(v), v);
            }
        }
        best
    }

    /// `ld(T)` and the lowest-index vertex attaining it.
    pub fn leaf_degree(&self) -> Result<(usize, usize)> {
        if self.n() < 2 {
            return Err(Error::PreconditionViolated(
                "leaf degree needs two vertices".into(),
            ));
        }
        let mut best = (0, 0);
        for v in 0..self.n() {
            let c = self.adj[v].iter().filter(|&&u| self.is_leaf(u)).count();
            if c > best.0 {
                best = (c, v);
            }
        }
        Ok(best)
    }

    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let n = self.n();
        let mut dist = vec![n; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == n {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Diameter with the lexicographically smallest diametral pair.
    pub fn diameter(&self) -> (usize, (usize, usize)) {
        let n = self.n();
        let mut best = (0, (0, 0));
        for u in 0..n {
            let dist = self.bfs_distances(u);
            for (v, &d) in dist.iter().enumerate().skip(u + 1) {
                if d > best.0 {
                    best = (d, (u, v));
                }
            }
        }
        best
    }

    /// Vertex sequence of the unique `a`–`b` path.
    pub fn path_between(&self, a: usize, b: usize) -> Vec<usize> {
        let view = self.rooted(a);
        let mut path = vec![b];
        let mut cur = b;
        while let Some(p) = view.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// A path with `len` edges starting at `s`, if one exists.
    pub fn path_from(&self, s: usize, len: usize) -> Option<Vec<usize>> {
        let dist = self.bfs_distances(s);
        let far = (0..self.n()).find(|&v| dist[v] == len)?;
        Some(self.path_between(s, far))
    }

    /// Executable form of the leaves-versus-diameter bound.
    pub fn leaf_count_lower_bound_holds(&self, q: usize) -> Result<bool> {
        let (diam, _) = self.diameter();
        if diam == 0 || self.n() < q * diam {
            return Err(Error::HypothesisNotMet(format!(
                "n={} q={} diam={}",
                self.n(),
                q,
                diam
            )));
        }
        Ok(self.leaves().len() >= q)
    }

    pub fn rooted(&self, root: usize) -> RootedView {
        let n = self.n();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        order.push(root);
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    children[u].push(w);
                    order.push(w);
                }
            }
        }
        let mut size = vec![1; n];
        let mut height = vec![0; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
                height[p] = height[p].max(height[v] + 1);
            }
        }
        RootedView {
            root,
            parent,
            children,
            size,
            depth,
            height,
            order,
        }
    }

    /// Lowest-index child edge whose removal leaves two sides of at least `q` vertices.
    pub fn find_separable_edge(&self, q: usize) -> Option<(usize, usize)> {
        let view = self.rooted(0);
        let n = self.n();
        (1..n)
            .find(|&v| view.size[v] >= q && n - view.size[v] >= q)
            .map(|v| (view.parent[v].expect("non-root"), v))
    }

    pub fn is_separable(&self, q: usize) -> bool {
        self.find_separable_edge(q).is_some()
    }

    /// Sizes of the components of `T − v`, keyed by the neighbor of `v` in each.
    pub fn branch_sizes(&self, v: usize) -> Vec<(usize, usize)> {
        let view = self.rooted(v);
        self.adj[v].iter().map(|&c| (c, view.size[c])).collect()
    }

    /// Vertex minimizing the largest component of `T − v`; smaller index on ties.
    pub fn centroid(&self) -> usize {
        let view = self.rooted(0);
        let n = self.n();
        let mut best = (usize::MAX, 0);
        for v in 0..n {
            let mut worst = n - view.size[v];
            for &c in &view.children[v] {
                worst = worst.max(view.size[c]);
            }
            if worst < best.0 {
                best = (worst, v);
            }
        }
        best.1
    }

    /// Edge from the centroid to its largest component.
    pub fn find_balanced_edge(&self) -> (usize, usize) {
        let c = self.centroid();
        let mut best = (0, c);
        for (w, size) in self.branch_sizes(c) {
            if size > best.0 {
                best = (size, w);
            }
        }
        (c, best.1)
    }

    /// Decomposition of the edges into maximal paths with degree-2 inner vertices.
    pub fn maximal_trivial_paths(&self) -> Vec<Vec<usize>> {
        let mut paths = Vec::new();
        for e in 0..self.n() {
            if self.degree(e) == 2 {
                continue;
            }
            for &first in &self.adj[e] {
                let mut path = vec![e, first];
                while self.degree(*path.last().unwrap()) == 2 {
                    let len = path.len();
                    let (prev, cur) = (path[len - 2], path[len - 1]);
                    let next = if self.adj[cur][0] == prev {
                        self.adj[cur][1]
                    } else {
                        self.adj[cur][0]
                    };
                    path.push(next);
                }
                if e < *path.last().unwrap() {
                    paths.push(path);
                }
            }
        }
        paths
    }

    /// The minimal subtree containing every vertex of `w`.
    pub fn minimal_spanning_subtree(&self, w: &[usize]) -> VertexSet {
        let n = self.n();
        let Some(&root) = w.first() else {
            return vertex_set(n, []);
        };
        let view = self.rooted(root);
        let mut keep = vertex_set(n, w.iter().copied());
        let mut marked = vec![0usize; n];
        for &v in w {
            marked[v] += 1;
        }
        // A vertex belongs iff its subtree holds a member of `w` (the root always does).
        for &v in view.order.iter().rev() {
            if marked[v] > 0 {
                keep.insert(v);
                if let Some(p) = view.parent[v] {
                    marked[p] += 1;
                }
            }
        }
        keep
    }

    /// Shortens every maximal trivial path longer than `cap` to exactly `cap` edges.
    pub fn contract_trivial_paths(&self, cap: usize) -> Contracted {
        assert!(cap >= 1, "cap must be positive");
        let n = self.n();
        if n == 1 {
            return Contracted {
                tree: self.clone(),
                to_original: vec![0],
                paths: Vec::new(),
            };
        }
        let mut dropped = vec![false; n];
        let mut paths = Vec::new();
        let mut new_edges = Vec::new();
        for p in self.maximal_trivial_paths() {
            let len = p.len() - 1;
            let owed = len.saturating_sub(cap);
            let kept: Vec<usize> = if owed > 0 {
                for &v in &p[cap..len] {
                    dropped[v] = true;
                }
                p[..cap].iter().copied().chain([p[len]]).collect()
            } else {
                p.clone()
            };
            for w in kept.windows(2) {
                new_edges.push((w[0], w[1]));
            }
            paths.push(ContractedPath { original: p, owed });
        }
        let to_original: Vec<usize> = (0..n).filter(|&v| !dropped[v]).collect();
        let mut index = vec![usize::MAX; n];
        for (i, &v) in to_original.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = new_edges
            .iter()
            .map(|&(a, b)| (index[a], index[b]))
            .collect();
        let tree = Tree::from_edges(to_original.len(), &edges).expect("contraction keeps a tree");
        Contracted {
            tree,
            to_original,
            paths,
        }
    }

    pub fn canonical_code(&self, root: usize) -> CanonicalCode {
        self.canonical_code_within(root, None)
    }

    /// Code of the subtree induced by `within` (which must be connected and hold `root`).
    pub fn canonical_code_within(&self, root: usize, within: Option<&VertexSet>) -> CanonicalCode {
        let n = self.n();
        let inside = |v: usize| within.map_or(true, |s| s.contains(v));
        let mut order = vec![root];
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX && inside(w) {
                    parent[w] = u;
                    order.push(w);
                }
            }
        }
        let mut codes: Vec<Vec<CanonicalCode>> = vec![Vec::new(); n];
        let mut result = Vec::new();
        for &v in order.iter().rev() {
            let mut kids = std::mem::take(&mut codes[v]);
            kids.sort_unstable();
            let mut code = Vec::with_capacity(2 + kids.iter().map(Vec::len).sum::<usize>());
            code.push(b'(');
            for k in kids {
                code.extend_from_slice(&k);
            }
            code.push(b')');
            if v == root {
                result = code;
            } else {
                codes[parent[v]].push(code);
            }
        }
        result
    }

    /// Vertices of minimum eccentricity (one or two).
    pub fn centers(&self) -> Vec<usize> {
        let (d, (a, b)) = self.diameter();
        let path = self.path_between(a, b);
        if d % 2 == 0 {
            vec![path[d / 2]]
        } else {
            let mut c = vec![path[d / 2], path[d / 2 + 1]];
            c.sort_unstable();
            c
        }
    }

    /// Isomorphism-invariant code of the unrooted tree.
    pub fn unrooted_code(&self) -> CanonicalCode {
        self.centers()
            .into_iter()
            .map(|c| self.canonical_code(c))
            .min()
            .expect("nonempty")
    }

    /// Subtree induced by a connected vertex subset, re-indexed, with the map back.
    pub fn induced(&self, vertices: &VertexSet) -> (Tree, Vec<usize>) {
        let members: Vec<usize> = vertices.ones().collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in members.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| vertices.contains(u) && vertices.contains(v))
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        (
            Tree::from_edges(members.len(), &edges).expect("connected subset"),
            members,
        )
    }

    /// Same tree with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Tree {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Tree::from_edges(self.n(), &edges).expect("relabel")
    }

    /// Whether `set` induces a connected subgraph (the empty set counts as connected).
    pub fn is_connected_subset(&self, set: &VertexSet) -> bool {
        let Some(start) = set.ones().next() else {
            return true;
        };
        let mut seen = vertex_set(self.n(), [start]);
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if set.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == set.count_ones(..)
    }

    /// Vertex set of the component of `T − (a b)` that contains `b`.
    pub fn side_of_edge(&self, a: usize, b: usize) -> VertexSet {
        let mut set = vertex_set(self.n(), [b]);
        let mut stack = vec![b];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !(u == b && w == a) && !set.contains(w) {
                    set.insert(w);
                    stack.push(w);
                }
            }
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_shape(bridge: usize) -> Tree {
        // branch vertices 0 and 1 joined by a path of `bridge` edges, two pendants each
        let mut edges = vec![(0, 2), (0, 3), (1, 4), (1, 5)];
        let mut prev = 0;
        let mut next = 6;
        for _ in 0..bridge - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
        Tree::from_edges(next, &edges).unwrap()
    }

    #[test]
    fn rejects_non_trees() {
        assert!(Tree::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Tree::from_edges(4, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Tree::from_edges(3, &[(0, 1)]).is_err());
        assert!(Tree::from_edges(1, &[]).is_ok());
    }

    #[test]
    fn leaf_degree_examples() {
        assert_eq!(Tree::star(5).leaf_degree().unwrap(), (5, 0));
        let (ld, w) = Tree::path(6).leaf_degree().unwrap();
        assert_eq!(ld, 1);
        assert!(w == 1 || w == 4);
        let (ld, w) = Tree::spider(3, 2).leaf_degree().unwrap();
        assert_eq!(ld, 1);
        assert_eq!(Tree::spider(3, 2).degree(w), 2);
        assert!(Tree::path(1).leaf_degree().is_err());
    }

    #[test]
    fn leaf_bound_examples() {
        assert_eq!(Tree::star(6).leaf_count_lower_bound_holds(3), Ok(true));
        assert_eq!(Tree::path(8).leaf_count_lower_bound_holds(1), Ok(true));
        assert!(Tree::path(8).leaf_count_lower_bound_holds(2).is_err());
    }

    #[test]
    fn separable_examples() {
        let (u, v) = Tree::path(10).find_separable_edge(5).unwrap();
        assert_eq!((u.min(v), u.max(v)), (4, 5));
        assert_eq!(Tree::star(5).find_separable_edge(2), None);
    }

    #[test]
    fn balanced_edge_examples() {
        let (a, b) = Tree::path(4).find_balanced_edge();
        assert_eq!((a.min(b), a.max(b)), (1, 2));
        let (a, b) = Tree::star(3).find_balanced_edge();
        assert!(Tree::star(3).has_edge(a, b));
    }

    #[test]
    fn trivial_path_examples() {
        let p7 = Tree::path(7).maximal_trivial_paths();
        assert_eq!(p7, vec![vec![0, 1, 2, 3, 4, 5, 6]]);
        let star = Tree::star(3).maximal_trivial_paths();
        assert_eq!(star.len(), 3);
        assert!(star.iter().all(|p| p.len() == 2));
        let h = h_shape(4).maximal_trivial_paths();
        assert_eq!(h.len(), 5);
        let mut lengths: Vec<usize> = h.iter().map(|p| p.len() - 1).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, vec![1, 1, 1, 1, 4]);
    }

    #[test]
    fn spanning_subtree_examples() {
        assert_eq!(
            Tree::path(6)
                .minimal_spanning_subtree(&[0, 5])
                .count_ones(..),
            6
        );
        let s = Tree::star(4).minimal_spanning_subtree(&[2, 3]);
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![0, 2, 3]);
    }

    #[test]
    fn contraction_examples() {
        let c = Tree::path(20).contract_trivial_paths(4);
        assert_eq!(c.tree.n(), 5);
        assert_eq!(c.paths.len(), 1);
        assert_eq!(c.paths[0].owed, 15);
        let c = Tree::star(3).contract_trivial_paths(4);
        assert_eq!(c.tree.n(), 4);
        assert!(c.paths.iter().all(|p| p.owed == 0));
        let h = h_shape(10);
        let c = h.contract_trivial_paths(4);
        assert_eq!(c.tree.n() - 1, 8);
        assert_eq!(c.paths.iter().map(|p| p.owed).sum::<usize>(), 6);
    }

    #[test]
    fn canonical_code_examples() {
        let p3 = Tree::path(3);
        assert_ne!(p3.canonical_code(0), p3.canonical_code(1));
        assert_eq!(p3.canonical_code(0), p3.canonical_code(2));
        let a = Tree::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let b = Tree::from_edges(4, &[(3, 2), (2, 0), (2, 1)]).unwrap();
        assert_eq!(a.canonical_code(0), b.canonical_code(3));
    }

    #[test]
    fn side_of_edge_splits() {
        let p = Tree::path(5);
        assert_eq!(
            p.side_of_edge(1, 2).ones().collect::<Vec<_>>(),
            vec![2, 3, 4]
        );
    }
}
