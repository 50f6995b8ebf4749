//! Hard instances with `|V(T)| ≤ (1+ε)·δ(G)` built from 3-Partition, and the embedding that
//! a valid partition induces.

use num_rational::Ratio;
use serde::Serialize;

use crate::embedding::{verify_full, PartialEmbedding};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::Tree;

/// Sizes `s(a_1..a_m)` with `m = 3n`, a target `B`, `Σ s = nB` and `B/4 < s(a) < B/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    pub b: u64,
    pub sizes: Vec<u64>,
}

impl ThreePartitionInstance {
    pub fn new(b: u64, sizes: Vec<u64>) -> Result<ThreePartitionInstance> {
        let inst = ThreePartitionInstance { b, sizes };
        inst.validate(true)?;
        Ok(inst)
    }

    /// Only the counting conditions; sizes may leave `(B/4, B/2)`.
    pub fn new_micro(b: u64, sizes: Vec<u64>) -> Result<ThreePartitionInstance> {
        let inst = ThreePartitionInstance { b, sizes };
        inst.validate(false)?;
        Ok(inst)
    }

    fn validate(&self, bounds: bool) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidThreePartition(m));
        let m = self.sizes.len();
        if m == 0 || m % 3 != 0 {
            return bad(format!("{m} sizes is not a positive multiple of 3"));
        }
        if self.b == 0 {
            return bad("B must be positive".into());
        }
        if self.sizes.iter().any(|&s| s == 0) {
            return bad("sizes must be positive".into());
        }
        let total: u64 = self.sizes.iter().sum();
        if total != self.n() as u64 * self.b {
            return bad(format!(
                "sizes sum to {total}, expected {}",
                self.n() as u64 * self.b
            ));
        }
        if bounds {
            if let Some(s) = self
                .sizes
                .iter()
                .find(|&&s| 4 * s <= self.b || 2 * s >= self.b)
            {
                return bad(format!("size {s} outside (B/4, B/2) for B={}", self.b));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.sizes.len() / 3
    }

    pub fn m(&self) -> usize {
        self.sizes.len()
    }

    /// `ℓ = Σ s(a)`.
    pub fn total(&self) -> usize {
        self.sizes.iter().sum::<u64>() as usize
    }

    /// Brute-force decision, for small instances only.
    pub fn solve_brute(&self) -> Option<Vec<[usize; 3]>> {
        fn go(inst: &ThreePartitionInstance, used: &mut [bool], acc: &mut Vec<[usize; 3]>) -> bool {
            let Some(a) = used.iter().position(|&u| !u) else {
                return true;
            };
            used[a] = true;
            for b in a + 1..used.len() {
                if used[b] {
                    continue;
                }
                used[b] = true;
                for c in b + 1..used.len() {
                    if used[c] || inst.sizes[a] + inst.sizes[b] + inst.sizes[c] != inst.b {
                        continue;
                    }
                    used[c] = true;
                    acc.push([a, b, c]);
                    if go(inst, used, acc) {
                        return true;
                    }
                    acc.pop();
                    used[c] = false;
                }
                used[b] = false;
            }
            used[a] = false;
            false
        }
        let mut used = vec![false; self.m()];
        let mut acc = Vec::new();
        go(self, &mut used, &mut acc).then_some(acc)
    }
}

/// Named vertices of the generated tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeLandmarks {
    pub r: usize,
    pub v: Vec<usize>,
    pub r_sets: Vec<Vec<usize>>,
    pub u: Vec<usize>,
}

/// One pendant copy of `K_{δ+1}` hanging off an inner clique vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PendantClique {
    pub owner: usize,
    pub copy: usize,
    pub first: usize,
    pub size: usize,
}

/// Named vertices of the generated host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphLandmarks {
    pub l_sets: Vec<Vec<usize>>,
    /// `y[i][h]`; these are the first three vertices of `l_sets[i]`.
    pub y: Vec<[usize; 3]>,
    pub x: usize,
    pub z: Vec<usize>,
    /// `z_sets[i][h]` lists positions into `z`.
    pub z_sets: Vec<[Vec<usize>; 3]>,
    pub pendants: Vec<PendantClique>,
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub instance: ThreePartitionInstance,
    pub g: Graph,
    pub t: Tree,
    pub epsilon: Ratio<u64>,
    pub delta: usize,
    pub big_delta: usize,
    pub tree_marks: TreeLandmarks,
    pub graph_marks: GraphLandmarks,
    /// Pendant cliques omitted, so degree claims about inner clique vertices do not hold.
    pub micro: bool,
}

/// `δ = max{⌈(ℓ+3)/ε⌉, 3ℓ + 6n − 2}`.
pub fn reduction_delta(inst: &ThreePartitionInstance, epsilon: Ratio<u64>) -> usize {
    let l = inst.total() as u64;
    let by_eps = ((l + 3) * epsilon.denom()).div_ceil(*epsilon.numer());
    by_eps.max(3 * l + 6 * inst.n() as u64 - 2) as usize
}

/// Builds `(G, T)` such that `G ⊇ T` iff the instance has a valid 3-partition.
pub fn generate_hardness_instance(
    inst: &ThreePartitionInstance,
    epsilon: Ratio<u64>,
) -> Result<ReductionOutput> {
    inst.validate(true)?;
    build(inst, epsilon, false)
}

/// Same reduction without the pendant cliques and without the `(B/4, B/2)` bounds, so that
/// `|V(G)| = |V(T)|` stays small enough for exhaustive checks.
pub fn generate_micro_instance(
    inst: &ThreePartitionInstance,
    epsilon: Ratio<u64>,
) -> Result<ReductionOutput> {
    inst.validate(false)?;
    build(inst, epsilon, true)
}

fn build(
    inst: &ThreePartitionInstance,
    epsilon: Ratio<u64>,
    micro: bool,
) -> Result<ReductionOutput> {
    if *epsilon.numer() == 0 {
        return Err(Error::InvalidThreePartition("ε must be positive".into()));
    }
    let (n, m, b) = (inst.n(), inst.m(), inst.b as usize);
    let delta = reduction_delta(inst, epsilon);
    let big_delta = delta + 2;
    let zc = big_delta - m;

    // Tree: r, then v_1..v_m, then the R_i, then u_1..u_{Δ−m}.
    let mut t_edges = Vec::new();
    let r = 0;
    let v: Vec<usize> = (1..=m).collect();
    let mut next = m + 1;
    let mut r_sets = Vec::with_capacity(m);
    for (i, &s) in inst.sizes.iter().enumerate() {
        t_edges.push((r, v[i]));
        let set: Vec<usize> = (next..next + s as usize).collect();
        next += s as usize;
        t_edges.extend(set.iter().map(|&w| (v[i], w)));
        r_sets.push(set);
    }
    let u: Vec<usize> = (next..next + zc).collect();
    t_edges.extend(u.iter().map(|&w| (r, w)));
    let t = Tree::from_edges(next + zc, &t_edges)?;

    // Host: the L_i, then x, then z_1..z_{Δ−m}, then pendant cliques.
    let mut edges = Vec::new();
    let l_sets: Vec<Vec<usize>> = (0..n)
        .map(|i| (i * (b + 3)..(i + 1) * (b + 3)).collect())
        .collect();
    for l in &l_sets {
        for (a, &p) in l.iter().enumerate() {
            edges.extend(l[a + 1..].iter().map(|&q| (p, q)));
        }
    }
    let y: Vec<[usize; 3]> = l_sets.iter().map(|l| [l[0], l[1], l[2]]).collect();
    for i in 0..n {
        for j in i + 1..n {
            for &a in &y[i] {
                edges.extend(y[j].iter().map(|&c| (a, c)));
            }
        }
    }
    let x = n * (b + 3);
    edges.extend(y.iter().flatten().map(|&a| (a, x)));
    let z: Vec<usize> = (x + 1..x + 1 + zc).collect();
    for (a, &p) in z.iter().enumerate() {
        edges.push((x, p));
        edges.extend(z[a + 1..].iter().map(|&q| (p, q)));
    }
    let z_sets: Vec<[Vec<usize>; 3]> = (0..n)
        .map(|i| {
            std::array::from_fn(|h| ((3 * i + h) * (b + 1)..(3 * i + h + 1) * (b + 1)).collect())
        })
        .collect();
    for i in 0..n {
        for h in 0..3 {
            let skip = &z_sets[i][h];
            edges.extend(
                (0..zc)
                    .filter(|j| !skip.contains(j))
                    .map(|j| (y[i][h], z[j])),
            );
        }
    }
    let mut pendants = Vec::new();
    let mut gn = x + 1 + zc;
    if !micro {
        let size = delta + 1;
        for l in &l_sets {
            for &w in &l[3..] {
                for copy in 0..delta - b - 2 {
                    let first = gn;
                    for p in first..first + size {
                        edges.extend((p + 1..first + size).map(|q| (p, q)));
                    }
                    edges.push((w, first));
                    pendants.push(PendantClique {
                        owner: w,
                        copy,
                        first,
                        size,
                    });
                    gn += size;
                }
            }
        }
    }
    let g = Graph::from_edges(gn, &edges)?;
    let out = ReductionOutput {
        instance: inst.clone(),
        g,
        t,
        epsilon,
        delta,
        big_delta,
        tree_marks: TreeLandmarks { r, v, r_sets, u },
        graph_marks: GraphLandmarks {
            l_sets,
            y,
            x,
            z,
            z_sets,
            pendants,
        },
        micro,
    };
    out.audit()?;
    Ok(out)
}

impl ReductionOutput {
    /// Checks the size bound and the degree spectrum the correctness argument relies on.
    pub fn audit(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidThreePartition(format!("audit: {m}")));
        let (g, t) = (&self.g, &self.t);
        let gm = &self.graph_marks;
        let l = self.instance.total();
        if t.n() != self.delta + 3 + l {
            return fail(format!("|V(T)|={} but δ+3+ℓ={}", t.n(), self.delta + 3 + l));
        }
        let (p, q) = (*self.epsilon.numer() as u128, *self.epsilon.denom() as u128);
        if t.n() as u128 * q > (q + p) * self.delta as u128 {
            return fail("|V(T)| exceeds (1+ε)δ".into());
        }
        if t.degree(self.tree_marks.r) != self.big_delta {
            return fail("root degree is not Δ".into());
        }
        if g.degree(gm.x) != self.big_delta {
            return fail("deg(x) is not Δ".into());
        }
        if gm
            .y
            .iter()
            .flatten()
            .any(|&a| g.degree(a) != self.delta + 1)
        {
            return fail("some y has degree other than δ+1".into());
        }
        let mut member = vec![0usize; gm.z.len()];
        for j in gm.z_sets.iter().flatten().flatten() {
            member[*j] += 1;
        }
        if member.iter().any(|&c| c > 1) {
            return fail("Z-sets overlap".into());
        }
        if gm
            .z
            .iter()
            .any(|&zv| g.degree(zv) + 1 < self.big_delta || g.degree(zv) > self.big_delta)
        {
            return fail("some z has degree outside [Δ−1, Δ]".into());
        }
        if self.micro {
            return Ok(());
        }
        if gm
            .l_sets
            .iter()
            .flat_map(|s| &s[3..])
            .any(|&w| g.degree(w) != self.delta)
        {
            return fail("inner clique vertex with degree other than δ".into());
        }
        if g.delta() != self.delta || g.max_degree() != self.big_delta {
            return fail(format!("δ(G)={} Δ(G)={}", g.delta(), g.max_degree()));
        }
        Ok(())
    }

    /// The embedding induced by a partition into triples, given as indices into `sizes`.
    pub fn forward_certificate(&self, partition: &[[usize; 3]]) -> Result<PartialEmbedding> {
        let inst = &self.instance;
        let bad = |m: String| Err(Error::InvalidPartition(m));
        if partition.len() != inst.n() {
            return bad(format!("{} triples for n={}", partition.len(), inst.n()));
        }
        let mut seen = vec![false; inst.m()];
        for triple in partition {
            for &a in triple {
                if a >= inst.m() || std::mem::replace(&mut seen[a], true) {
                    return bad(format!("element {a} missing or repeated"));
                }
            }
            let sum: u64 = triple.iter().map(|&a| inst.sizes[a]).sum();
            if sum != inst.b {
                return bad(format!("triple {triple:?} sums to {sum}, not {}", inst.b));
            }
        }
        let (tm, gm) = (&self.tree_marks, &self.graph_marks);
        let mut pairs = vec![(tm.r, gm.x)];
        pairs.extend(tm.u.iter().zip(&gm.z).map(|(&a, &c)| (a, c)));
        for (h, triple) in partition.iter().enumerate() {
            let mut inner = gm.l_sets[h][3..].iter();
            for (slot, &a) in triple.iter().enumerate() {
                pairs.push((tm.v[a], gm.y[h][slot]));
                pairs.extend(
                    tm.r_sets[a]
                        .iter()
                        .map(|&w| (w, *inner.next().expect("triple sums to B"))),
                );
            }
        }
        let e = PartialEmbedding::from_pairs(self.t.n(), self.g.n(), &pairs)?;
        if !verify_full(&e, &self.g, &self.t) {
            return bad("induced map is not an embedding".into());
        }
        Ok(e)
    }

    /// One record per named vertex (and one per pendant clique).
    pub fn landmark_records(&self) -> Vec<LandmarkRecord> {
        let (tm, gm) = (&self.tree_marks, &self.graph_marks);
        let rec = |side, role, vertex| LandmarkRecord {
            side,
            role,
            vertex,
            group: None,
            slot: None,
            size: None,
        };
        let mut out = vec![rec("tree", "r", tm.r)];
        for (i, &vi) in tm.v.iter().enumerate() {
            out.push(LandmarkRecord {
                group: Some(i),
                ..rec("tree", "v", vi)
            });
            out.extend(tm.r_sets[i].iter().map(|&w| LandmarkRecord {
                group: Some(i),
                ..rec("tree", "R", w)
            }));
        }
        out.extend(tm.u.iter().enumerate().map(|(j, &w)| LandmarkRecord {
            slot: Some(j),
            ..rec("tree", "u", w)
        }));
        for (i, l) in gm.l_sets.iter().enumerate() {
            for (p, &w) in l.iter().enumerate() {
                let role = if p < 3 { "y" } else { "L" };
                out.push(LandmarkRecord {
                    group: Some(i),
                    slot: (p < 3).then_some(p),
                    ..rec("graph", role, w)
                });
            }
        }
        out.push(rec("graph", "x", gm.x));
        for (j, &w) in gm.z.iter().enumerate() {
            let owner = gm
                .z_sets
                .iter()
                .enumerate()
                .find_map(|(i, hs)| hs.iter().position(|s| s.contains(&j)).map(|h| 3 * i + h));
            out.push(LandmarkRecord {
                group: owner,
                slot: Some(j),
                ..rec("graph", "z", w)
            });
        }
        out.extend(gm.pendants.iter().map(|pc| LandmarkRecord {
            group: Some(pc.owner),
            slot: Some(pc.copy),
            size: Some(pc.size),
            ..rec("graph", "W", pc.first)
        }));
        out
    }

    /// The landmark table as JSON lines.
    pub fn sidecar_jsonl(&self) -> String {
        let mut s = String::new();
        for r in self.landmark_records() {
            s.push_str(&serde_json::to_string(&r).expect("plain record serializes"));
            s.push('\n');
        }
        s
    }
}

/// A vertex role for the audit sidecar. For `W` records `vertex` is the attachment vertex
/// of the clique, `group` its owner and `size` its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LandmarkRecord {
    pub side: &'static str,
    pub role: &'static str,
    pub vertex: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
}
