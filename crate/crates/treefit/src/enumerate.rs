//! Exhaustive generation of small trees and connected graphs, one per isomorphism class.

use std::collections::HashSet;

use crate::graph::Graph;
use crate::tree::Tree;

/// All trees on `n` vertices up to isomorphism, by leaf extension with code deduplication.
pub fn free_trees(n: usize) -> Vec<Tree> {
    assert!(n >= 1);
    let mut level = vec![Tree::from_edges(1, &[]).expect("single vertex")];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.n() {
                let mut edges = t.edges().to_vec();
                edges.push((v, size - 1));
                let grown = Tree::from_edges(size, &edges).expect("leaf extension stays a tree");
                if seen.insert(grown.unrooted_code()) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}

/// All trees on at most `n` vertices.
pub fn free_trees_up_to(n: usize) -> Vec<Tree> {
    (1..=n).flat_map(free_trees).collect()
}

type Adjacency = Vec<u16>;

fn adjacency(g: &Graph) -> Adjacency {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u16, |m, &w| m | 1 << w))
        .collect()
}

/// Stable colour refinement: repeatedly recolour by (colour, sorted neighbour colours),
/// renumbering classes in signature order so the result does not depend on labels.
fn refine(adj: &Adjacency, colors: &mut [usize]) {
    let n = adj.len();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&w| adj[v] >> w & 1 == 1)
                    .map(|w| colors[w])
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let classes_before = colors.iter().collect::<HashSet<_>>().len();
        for v in 0..n {
            colors[v] = distinct.binary_search(&&sigs[v]).expect("present");
        }
        if distinct.len() == classes_before {
            return;
        }
    }
}

fn code_of(adj: &Adjacency, order: &[usize]) -> u64 {
    let mut code = 0u64;
    let mut bit = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if adj[order[i]] >> order[j] & 1 == 1 {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

fn search(adj: &Adjacency, colors: Vec<usize>, best: &mut Option<u64>) {
    let n = adj.len();
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c] += 1;
    }
    match (0..n).find(|&c| counts[c] > 1) {
        None => {
            let mut order = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c] = v;
            }
            let code = code_of(adj, &order);
            if best.map_or(true, |b| code < b) {
                *best = Some(code);
            }
        }
        Some(cell) => {
            for v in (0..n).filter(|&v| colors[v] == cell) {
                // Individualise v ahead of its cell, then refine.
                let mut c: Vec<usize> = colors.iter().map(|&x| 2 * x + 1).collect();
                c[v] = 2 * cell;
                refine(adj, &mut c);
                search(adj, c, best);
            }
        }
    }
}

/// Isomorphism-invariant code of a graph on at most 11 vertices.
pub fn graph_canonical_code(g: &Graph) -> u64 {
    assert!(g.n() <= 11, "canonical codes are packed into 64 bits");
    let adj = adjacency(g);
    let mut colors = vec![0; g.n()];
    refine(&adj, &mut colors);
    let mut best = None;
    search(&adj, colors, &mut best);
    best.unwrap_or(0)
}

/// All connected graphs on `n ≤ 9` vertices up to isomorphism. Every connected graph has a
/// vertex whose removal keeps it connected, so extending the classes on `n − 1` vertices by a
/// vertex with a non-empty neighbourhood reaches every class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=9).contains(&n));
    let mut level = vec![Graph::complete(1)];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let base: Vec<(usize, usize)> = g.edges().collect();
            for mask in 1u32..1 << (size - 1) {
                let mut edges = base.clone();
                edges.extend(
                    (0..size - 1)
                        .filter(|&v| mask >> v & 1 == 1)
                        .map(|v| (v, size - 1)),
                );
                let h = Graph::from_edges(size, &edges).expect("simple by construction");
                if seen.insert(graph_canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}
