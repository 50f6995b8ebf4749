//! Exact backtracking for (constrained) tree embeddings.

use crate::embedding::PartialEmbedding;
use crate::graph::{Graph, VertexSet};
use crate::tree::Tree;

/// Exact search for an embedding of the subtree on `targets`, respecting fixed images,
/// a host restriction, and hitting quotas.
#[derive(Clone)]
pub struct Search<'a> {
    pub g: &'a Graph,
    pub t: &'a Tree,
    /// Tree vertices to embed (must induce a connected subtree); all when `None`.
    pub targets: Option<&'a VertexSet>,
    /// Tree vertex → prescribed graph vertex.
    pub fixed: &'a [(usize, usize)],
    /// Host vertices available to non-fixed tree vertices; all when `None`.
    pub allowed: Option<&'a VertexSet>,
    /// `(F, q)`: at least `q` images must lie in `F`.
    pub families: &'a [(VertexSet, usize)],
    pub node_cap: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Found(PartialEmbedding),
    Infeasible,
    BudgetExceeded,
}

impl<'a> Search<'a> {
    pub fn new(g: &'a Graph, t: &'a Tree) -> Search<'a> {
        Search {
            g,
            t,
            targets: None,
            fixed: &[],
            allowed: None,
            families: &[],
            node_cap: u64::MAX,
        }
    }

    pub fn run(&self) -> SearchResult {
        match Runner::prepare(self) {
            None => SearchResult::Infeasible,
            Some(mut r) => match r.dfs(0) {
                Some(true) => SearchResult::Found(r.e),
                Some(false) => SearchResult::Infeasible,
                None => SearchResult::BudgetExceeded,
            },
        }
    }
}

struct Runner<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    parent: Vec<usize>,
    tdeg: Vec<usize>,
    fixed_of: Vec<Option<usize>>,
    reserved: VertexSet,
    usable: VertexSet,
    prev_leaf: Vec<Option<usize>>,
    pending: Vec<usize>,
    free: Vec<usize>,
    inverse: Vec<usize>,
    comp_size: Vec<usize>,
    families: Vec<usize>,
    member_of: Vec<Vec<usize>>,
    hits: Vec<usize>,
    e: PartialEmbedding,
    nodes: u64,
    cap: u64,
}

const NONE: usize = usize::MAX;

impl<'a> Runner<'a> {
    fn prepare(s: &Search<'a>) -> Option<Runner<'a>> {
        let (g, t) = (s.g, s.t);
        let in_targets = |x: usize| s.targets.map_or(true, |set| set.contains(x));
        let total = (0..t.n()).filter(|&x| in_targets(x)).count();
        let mut fixed_of = vec![None; t.n()];
        let mut reserved = VertexSet::with_capacity(g.n());
        for &(x, v) in s.fixed {
            if !in_targets(x) {
                continue;
            }
            if reserved.contains(v) {
                return None;
            }
            fixed_of[x] = Some(v);
            reserved.insert(v);
        }
        if s.families
            .iter()
            .any(|(f, q)| *q > total.min(f.count_ones(..)))
            || total > g.n()
        {
            return None;
        }
        let tdeg: Vec<usize> = (0..t.n())
            .map(|x| t.neighbors(x).iter().filter(|&&y| in_targets(y)).count())
            .collect();
        let root = match (0..t.n()).find(|&x| fixed_of[x].is_some()) {
            Some(r) => r,
            None => {
                let mut best = NONE;
                for x in (0..t.n()).filter(|&x| in_targets(x)) {
                    if best == NONE || tdeg[x] > tdeg[best] {
                        best = x;
                    }
                }
                if best == NONE {
                    return None;
                }
                best
            }
        };
        // Subtree sizes from `root` within the targets.
        let mut bfs = vec![root];
        let mut par = vec![NONE; t.n()];
        par[root] = root;
        let mut i = 0;
        while i < bfs.len() {
            let u = bfs[i];
            i += 1;
            for &w in t.neighbors(u) {
                if par[w] == NONE && in_targets(w) {
                    par[w] = u;
                    bfs.push(w);
                }
            }
        }
        assert_eq!(bfs.len(), total, "targets must induce a connected subtree");
        let mut size = vec![1usize; t.n()];
        for &v in bfs.iter().rev().take(total - 1) {
            size[par[v]] += size[v];
        }
        let mut order = Vec::with_capacity(total);
        let mut parent = vec![NONE; t.n()];
        let mut prev_leaf = vec![None; t.n()];
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            order.push(u);
            let mut kids: Vec<usize> = t
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&w| par[w] == u && w != u)
                .collect();
            kids.sort_by_key(|&w| (std::cmp::Reverse(size[w]), w));
            let mut last: Option<usize> = None;
            for &w in &kids {
                parent[w] = u;
                if tdeg[w] == 1 && fixed_of[w].is_none() {
                    prev_leaf[w] = last;
                    last = Some(w);
                }
            }
            for &w in kids.iter().rev() {
                stack.push(w);
            }
        }
        let mut usable = match s.allowed {
            Some(a) => a.clone(),
            None => {
                let mut all = VertexSet::with_capacity(g.n());
                all.insert_range(..);
                all
            }
        };
        usable.union_with(&reserved);
        let free: Vec<usize> = (0..g.n()).map(|v| g.neighbors_in(v, &usable)).collect();
        let mut comp_size = vec![0; g.n()];
        let mut blocked = usable.clone();
        blocked.toggle_range(..);
        for comp in g.components_avoiding(&blocked) {
            for &v in &comp {
                comp_size[v] = comp.len();
            }
        }
        let families: Vec<usize> = s.families.iter().map(|(_, q)| *q).collect();
        let mut member_of = vec![Vec::new(); if families.is_empty() { 0 } else { g.n() }];
        for (j, (f, _)) in s.families.iter().enumerate() {
            for v in f.ones() {
                member_of[v].push(j);
            }
        }
        Some(Runner {
            g,
            pending: tdeg.clone(),
            order,
            parent,
            tdeg,
            fixed_of,
            reserved,
            usable,
            prev_leaf,
            free,
            inverse: vec![NONE; g.n()],
            comp_size,
            hits: vec![0; families.len()],
            families,
            member_of,
            e: PartialEmbedding::new(t.n(), g.n()),
            nodes: 0,
            cap: s.node_cap,
        })
    }

    fn candidates(&self, x: usize) -> Vec<usize> {
        let g = self.g;
        let need = self.tdeg[x];
        if let Some(v) = self.fixed_of[x] {
            let p = self.parent[x];
            let ok = g.degree(v) >= need && (p == NONE || g.has_edge(self.e.at(p), v));
            return if ok { vec![v] } else { Vec::new() };
        }
        let ok = |v: usize| {
            !self.e.is_used(v)
                && self.usable.contains(v)
                && !self.reserved.contains(v)
                && g.degree(v) >= need
        };
        let p = self.parent[x];
        if p == NONE {
            let total = self.order.len();
            return (0..g.n())
                .filter(|&v| ok(v) && self.comp_size[v] >= total)
                .collect();
        }
        let floor = self.prev_leaf[x].map_or(0, |l| self.e.at(l) + 1);
        g.neighbors(self.e.at(p))
            .iter()
            .copied()
            .filter(|&v| v >= floor && ok(v))
            .collect()
    }

    fn place(&mut self, x: usize, v: usize) -> bool {
        self.e.set(x, v);
        self.inverse[v] = x;
        let p = self.parent[x];
        if p != NONE {
            self.pending[p] -= 1;
        }
        self.pending[x] -= usize::from(p != NONE);
        let mut ok = true;
        for &h in self.g.neighbors(v) {
            self.free[h] -= 1;
            let y = self.inverse[h];
            if y != NONE && self.free[h] < self.pending[y] {
                ok = false;
            }
        }
        if self.free[v] < self.pending[x] {
            ok = false;
        }
        if !self.families.is_empty() {
            for &j in &self.member_of[v] {
                self.hits[j] += 1;
            }
            let remaining = self.order.len() - self.e.len();
            if self
                .families
                .iter()
                .zip(&self.hits)
                .any(|(&q, &h)| q.saturating_sub(h) > remaining)
            {
                ok = false;
            }
        }
        ok
    }

    fn unplace(&mut self, x: usize, v: usize) {
        if !self.families.is_empty() {
            for &j in &self.member_of[v] {
                self.hits[j] -= 1;
            }
        }
        for &h in self.g.neighbors(v) {
            self.free[h] += 1;
        }
        let p = self.parent[x];
        self.pending[x] += usize::from(p != NONE);
        if p != NONE {
            self.pending[p] += 1;
        }
        self.inverse[v] = NONE;
        self.e.unset(x);
    }

    fn dfs(&mut self, i: usize) -> Option<bool> {
        if i == self.order.len() {
            return Some(true);
        }
        let x = self.order[i];
        for v in self.candidates(x) {
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            if self.place(x, v) {
                match self.dfs(i + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.unplace(x, v);
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::verify;
    use crate::graph::vertex_set;

    #[test]
    fn finds_and_refutes() {
        let c6 = Graph::cycle(6);
        assert!(matches!(
            Search::new(&c6, &Tree::path(6)).run(),
            SearchResult::Found(_)
        ));
        assert_eq!(
            Search::new(&Graph::petersen(), &Tree::star(4)).run(),
            SearchResult::Infeasible
        );
        assert_eq!(
            Search::new(&Graph::cycle(4), &Tree::path(5)).run(),
            SearchResult::Infeasible
        );
    }

    #[test]
    fn respects_constraints() {
        let c5 = Graph::cycle(5);
        let p3 = Tree::path(3);
        let fam = [(vertex_set(5, [2, 3]), 1)];
        let s = Search {
            fixed: &[(1, 0)],
            families: &fam,
            ..Search::new(&c5, &p3)
        };
        assert_eq!(s.run(), SearchResult::Infeasible);
        let fam = [(vertex_set(5, [1, 3]), 1)];
        let s = Search {
            fixed: &[(1, 0)],
            families: &fam,
            ..Search::new(&c5, &p3)
        };
        let SearchResult::Found(e) = s.run() else {
            panic!()
        };
        assert_eq!(e.get(1), Some(0));
        assert!(verify(&e, &c5, &p3));
    }

    #[test]
    fn node_cap_trips() {
        let k = Graph::complete(9);
        let p9 = Tree::path(9);
        let s = Search {
            node_cap: 3,
            ..Search::new(&k, &p9)
        };
        assert_eq!(s.run(), SearchResult::BudgetExceeded);
    }
}
