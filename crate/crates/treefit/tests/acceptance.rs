//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any criterion fails.

mod common;

use std::cell::Cell;
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::oracle;
use treefit::color_coding::{colorful_full_tree_dp, Coloring};
use treefit::dense::{embed_dense, hitting_set_lower_bound};
use treefit::embedding::{chvatal_extend, solve_delta_plus_two};
use treefit::enumerate::{connected_graphs, free_trees, free_trees_up_to};
use treefit::generate::{random_graph, random_tree, random_tree_with_leaf_degree};
use treefit::hardness::{generate_hardness_instance, ThreePartitionInstance};
use treefit::pipeline::{brute_force_contains, solve, Config, Thresholds};
use treefit::preserving::{
    anti_dominating_bound, anti_dominating_set, build_preserving_set, build_preserving_set_relaxed,
    is_k_preserving, low_degree_vertices, modulator_to_preserving_path, preserving_round_size,
    set_to_preserving_path, PreservingPath,
};
use treefit::seed::{child_seed, rng};
use treefit::{vertex_set, ExactReason, Graph, PartialEmbedding, SolveOutcome, Tree, VertexSet};

const MASTER_SEED: u64 = 0x7EE5_F17;

thread_local! {
    static CERTIFICATES: Cell<(u64, u64)> = const { Cell::new((0, 0)) };
}

/// Records a certificate for the global no-false-positive tally.
fn audit(g: &Graph, t: &Tree, e: &PartialEmbedding) -> bool {
    let ok = oracle::certificate_ok(g, t, e);
    CERTIFICATES.with(|c| {
        let (total, bad) = c.get();
        c.set((total + 1, bad + u64::from(!ok)));
    });
    ok
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, pass: bool, detail: String, started: Instant) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2}: {verdict} {name} ({detail}; {:.1}s)",
            started.elapsed().as_secs_f64()
        );
        if !pass {
            self.failures += 1;
        }
    }
}

fn stream(label: u64) -> ChaCha8Rng {
    rng(child_seed(MASTER_SEED, label))
}

fn gnp(n: usize, p: f64, r: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| r.gen_bool(p))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// `P(X ≥ k)` for `X ~ Bin(n, p)`.
fn binomial_upper_tail(n: u64, p: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut term = (1.0 - p).powf(n as f64);
    let mut below = 0.0;
    for i in 0..k {
        below += term;
        term *= (n - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
    }
    (1.0 - below).max(0.0)
}

/// `P(X ≤ k)` for `X ~ Bin(n, p)`.
fn binomial_lower_tail(n: u64, p: f64, k: u64) -> f64 {
    let mut term = (1.0 - p).powf(n as f64);
    let mut sum = 0.0;
    for i in 0..=k.min(n) {
        sum += term;
        if i < n {
            term *= (n - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
        }
    }
    sum.min(1.0)
}

fn random_instance(r: &mut ChaCha8Rng) -> (Graph, Tree) {
    let n = r.gen_range(1..=12);
    let g = if n > 1 && r.gen_bool(0.6) {
        let d = r.gen_range(1..n);
        random_graph(n, d, r).unwrap()
    } else {
        let p = r.gen_range(0.2..0.95);
        gnp(n, p, r)
    };
    let delta = oracle::min_degree(&g);
    let lo = (delta + 2).min(n);
    let size = if r.gen_bool(0.8) {
        r.gen_range(lo..=n)
    } else {
        r.gen_range(1..=n)
    };
    (g, random_tree(size, r))
}

fn criterion_oracle(rep: &mut Report) {
    let started = Instant::now();
    let mut r = stream(1);
    let (mut disagreements, mut not_found, mut missed, mut positives) = (0u64, 0u64, 0u64, 0u64);
    let mut bad_certs = 0u64;
    for i in 0..2000u64 {
        let (g, t) = random_instance(&mut r);
        let thresholds = if i % 2 == 0 {
            Thresholds::Literal
        } else {
            Thresholds::Relaxed
        };
        let config = Config {
            seed: child_seed(MASTER_SEED, 1000 + i),
            failure_exponent: 10,
            thresholds,
            ..Config::default()
        };
        let truth = oracle::contains(&g, &t);
        positives += u64::from(truth);
        match solve(&g, &t, &config) {
            SolveOutcome::Contains { embedding, .. } => {
                if !audit(&g, &t, &embedding) {
                    bad_certs += 1;
                }
                disagreements += u64::from(!truth);
            }
            SolveOutcome::NotContained { .. } => disagreements += u64::from(truth),
            SolveOutcome::NotFound { .. } => {
                not_found += 1;
                missed += u64::from(truth);
            }
        }
        if let Ok(out) = brute_force_contains(&g, &t, 1 << 24) {
            disagreements += u64::from(out.decided() != Some(truth));
        }
    }
    let p_value = binomial_upper_tail(positives.max(1), 2f64.powi(-10), missed);
    let pass = disagreements == 0
        && bad_certs == 0
        && p_value >= 0.05
        && started.elapsed().as_secs() <= 300;
    rep.line(
        1,
        "oracle equivalence",
        pass,
        format!("2000 instances, {disagreements} disagreements, {not_found} not-found, {missed} missed of {positives} positives, p={p_value:.3}"),
        started,
    );
}

/// Random connected partial embedding of a random connected part of `t`.
fn random_partial(g: &Graph, t: &Tree, r: &mut ChaCha8Rng) -> PartialEmbedding {
    let mut e = PartialEmbedding::new(t.n(), g.n());
    let target = r.gen_range(0..=t.n());
    if target == 0 {
        return e;
    }
    let x0 = r.gen_range(0..t.n());
    e.set(x0, r.gen_range(0..g.n()));
    let mut frontier: Vec<(usize, usize)> = t.neighbors(x0).iter().map(|&y| (x0, y)).collect();
    while e.len() < target && !frontier.is_empty() {
        let (p, y) = frontier.swap_remove(r.gen_range(0..frontier.len()));
        let free: Vec<usize> = g
            .neighbors(e.at(p))
            .iter()
            .copied()
            .filter(|&v| !e.is_used(v))
            .collect();
        let Some(&v) = free.choose(r) else { continue };
        e.set(y, v);
        frontier.extend(
            t.neighbors(y)
                .iter()
                .filter(|&&z| !e.is_mapped(z))
                .map(|&z| (y, z)),
        );
    }
    e
}

fn criterion_chvatal(rep: &mut Report) {
    let started = Instant::now();
    let mut r = stream(2);
    let mut failures = 0;
    for _ in 0..500 {
        let n = r.gen_range(2..=40);
        let d = r.gen_range(1..n);
        let g = random_graph(n, d, &mut r).unwrap();
        let t = random_tree(r.gen_range(1..=d + 1), &mut r);
        let partial = random_partial(&g, &t, &mut r);
        let ok = match chvatal_extend(&g, &t, &partial) {
            Ok(e) => audit(&g, &t, &e) && partial.pairs().iter().all(|&(x, v)| e.get(x) == Some(v)),
            Err(_) => false,
        };
        failures += usize::from(!ok);
    }
    let pass = failures == 0 && started.elapsed().as_secs() <= 60;
    rep.line(
        2,
        "Chvátal extension",
        pass,
        format!("500 instances, {failures} failures"),
        started,
    );
}

fn criterion_delta_plus_two(rep: &mut Report) {
    let started = Instant::now();
    let trees: Vec<Vec<Tree>> = (0..=8)
        .map(|s| if s == 0 { Vec::new() } else { free_trees(s) })
        .collect();
    let (mut checked, mut wrong, mut graphs) = (0u64, 0u64, 0u64);
    for n in 1..=8 {
        for g in connected_graphs(n) {
            graphs += 1;
            let delta = oracle::min_degree(&g);
            for t in trees.iter().take(n.min(delta + 2) + 1).flatten() {
                checked += 1;
                let truth = oracle::contains(&g, &t);
                let ok = match solve_delta_plus_two(&g, t) {
                    Ok(SolveOutcome::Contains { embedding, .. }) => {
                        truth && audit(&g, t, &embedding)
                    }
                    Ok(SolveOutcome::NotContained { reason }) => {
                        !truth
                            && reason == ExactReason::RegularStar
                            && oracle::is_regular(&g)
                            && oracle::is_star(t)
                            && t.n() == delta + 2
                    }
                    _ => false,
                };
                wrong += u64::from(!ok);
            }
        }
    }
    let pass = wrong == 0 && started.elapsed().as_secs() <= 600;
    rep.line(
        3,
        "δ+2 characterization",
        pass,
        format!("{graphs} graphs, {checked} pairs, {wrong} mismatches"),
        started,
    );
}

fn criterion_dense(rep: &mut Report) {
    let started = Instant::now();
    let mut r = stream(4);
    let mut successes = 0;
    for _ in 0..50 {
        let n = r.gen_range(50..=54);
        let g = random_graph(n, 48, &mut r).unwrap();
        let mut size = r.gen_range(4..=50);
        if r.gen_bool(0.5) {
            size = 50;
        }
        let t = random_tree_with_leaf_degree(size, 1, &mut r);
        if let Ok(e) = embed_dense(&g, &t, 2) {
            successes += usize::from(audit(&g, &t, &e));
        }
    }
    let pass = successes == 50 && started.elapsed().as_secs() <= 600;
    rep.line(
        4,
        "dense regime at literal constants",
        pass,
        format!("{successes}/50 embedded"),
        started,
    );
}

/// Blocks of `width` vertices in a row; each block is a clique joined completely to the next.
fn block_path(blocks: usize, width: usize) -> Graph {
    let mut edges = Vec::new();
    for b in 0..blocks {
        for i in 0..width {
            let u = b * width + i;
            edges.extend((i + 1..width).map(|j| (u, b * width + j)));
            if b + 1 < blocks {
                edges.extend((0..width).map(|j| (u, (b + 1) * width + j)));
            }
        }
    }
    Graph::from_edges(blocks * width, &edges).unwrap()
}

fn relabel_randomly(g: &Graph, r: &mut ChaCha8Rng) -> Graph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(r);
    g.relabel(&perm)
}

/// Degree-`2h` circulant on `n` vertices with random extra chords.
fn circulant(n: usize, h: usize, extra: usize, r: &mut ChaCha8Rng) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (1..=h).map(move |d| (u.min((u + d) % n), u.max((u + d) % n))))
        .collect();
    for _ in 0..extra {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v {
            edges.push((u.min(v), u.max(v)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::from_edges(n, &edges).unwrap()
}

fn is_path(g: &Graph, p: &PreservingPath) -> bool {
    let set: VertexSet = vertex_set(g.n(), p.vertices.iter().copied());
    set.count_ones(..) == p.vertices.len() && p.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

fn criterion_preserving(rep: &mut Report) {
    let started = Instant::now();
    let mut r = stream(5);
    let mut violations = Vec::new();
    let mut note = |what: &str, ok: bool| {
        if !ok {
            violations.push(what.to_string());
        }
    };

    // Modulators: a few vertices of a long block path, or a whole middle block.
    let mut modulator_calls = 0;
    while modulator_calls < 500 {
        let k = r.gen_range(1..=3);
        let width = r.gen_range(k + 2..=k + 5);
        let blocks = r.gen_range(2 * k + 3..=2 * k + 8);
        let base = block_path(blocks, width);
        let delta = base.delta();
        let members: Vec<usize> = if modulator_calls % 4 == 0 {
            let b = r.gen_range(1..blocks - 1);
            (b * width..(b + 1) * width).collect()
        } else {
            let size = r.gen_range(0..=(delta + 1 - k).min(3));
            let mut all: Vec<usize> = (0..base.n()).collect();
            all.shuffle(&mut r);
            all.truncate(size);
            all
        };
        let mut perm: Vec<usize> = (0..base.n()).collect();
        perm.shuffle(&mut r);
        let g = base.relabel(&perm);
        let s = vertex_set(g.n(), members.iter().map(|&v| perm[v]));
        let size = s.count_ones(..);
        if size + k > delta + 1 || g.diameter_avoiding(&s).is_some_and(|d| d < 2 * k) {
            continue;
        }
        modulator_calls += 1;
        match modulator_to_preserving_path(&g, &s, k) {
            Ok(p) => {
                let on = vertex_set(g.n(), p.vertices.iter().copied());
                note("modulator preserving", is_k_preserving(&g, &on, k));
                note("modulator path", is_path(&g, &p));
                note("modulator length", p.vertices.len() - 1 <= 4 * k - 2 + size);
            }
            Err(e) => note(&format!("modulator error {e}"), false),
        }
    }

    // Preserving sets on perturbed circulants, joined into paths.
    let mut set_calls = 0;
    while set_calls < 500 {
        let k = r.gen_range(1..=3);
        let h = r.gen_range(6..=14);
        let n = r.gen_range(4 * h + 2..=6 * h + 10);
        let g = relabel_randomly(&circulant(n, h, r.gen_range(0..n), &mut r), &mut r);
        let Ok(s) = build_preserving_set_relaxed(&g, k) else {
            continue;
        };
        let size = s.count_ones(..);
        if size == 0 || g.delta() < (2 * k - 1) * size {
            continue;
        }
        set_calls += 1;
        match set_to_preserving_path(&g, &s, k) {
            Ok(p) => {
                let on = vertex_set(g.n(), p.vertices.iter().copied());
                note("set path preserving", is_k_preserving(&g, &on, k));
                note("set path", is_path(&g, &p));
                note(
                    "set path length",
                    p.vertices.len() - 1 <= (2 * k - 1) * size,
                );
            }
            Err(e) => note(&format!("set path error {e}"), false),
        }
    }

    // Anti-dominating sets.
    for _ in 0..500 {
        let eps = Ratio::new(r.gen_range(1..=4u64), r.gen_range(2..=8u64));
        let d = r.gen_range(2..=30);
        let lo =
            ((1.0 + *eps.numer() as f64 / *eps.denom() as f64).powi(2) * d as f64).ceil() as usize;
        let n = r.gen_range(lo.max(d + 1)..=lo.max(d + 1) + 30);
        let g = random_graph(n, d, &mut r).unwrap();
        match anti_dominating_set(&g, eps) {
            Ok(a) => {
                let low = low_degree_vertices(&g, eps);
                let dominated = low
                    .ones()
                    .all(|v| a.contains(v) || g.non_neighbors_in(v, &a) > 0);
                note("anti-dominating", dominated);
                note(
                    "anti-dominating size",
                    (a.count_ones(..) as f64) < anti_dominating_bound(g.delta(), eps),
                );
            }
            Err(e) => note(&format!("anti-dominating error {e}"), false),
        }
    }

    // Preserving sets at their stated thresholds (k = 2, p = 1 needs δ ≥ 48·log₂δ).
    for _ in 0..500 {
        let n = r.gen_range(1430..=1520);
        let extra = r.gen_range(0..=2 * n);
        let g = &circulant(n, 256, extra, &mut r);
        let (k, p) = (2, 1);
        match build_preserving_set(g, k, p) {
            Ok(s) => {
                note("preserving set", is_k_preserving(g, &s, k));
                note(
                    "preserving set size",
                    s.count_ones(..) as f64 <= preserving_round_size(g, k, p) * k as f64,
                );
            }
            Err(e) => note(&format!("preserving set error {e}"), false),
        }
    }

    violations.sort();
    violations.dedup();
    let pass = violations.is_empty();
    let detail = if pass {
        "4 × 500 calls, 0 violations".into()
    } else {
        format!("violations: {}", violations.join(", "))
    };
    rep.line(5, "preserving-path constructions", pass, detail, started);
}

fn criterion_hitting_set(rep: &mut Report) {
    let started = Instant::now();
    let trees = free_trees_up_to(9);
    // A single vertex has an empty neighbourhood, so no hitting set exists and the bound is vacuous.
    let violations = trees
        .iter()
        .filter(|t| oracle::min_hitting_set(t).is_some_and(|h| h < hitting_set_lower_bound(t)))
        .count();
    rep.line(
        6,
        "hitting-set bound",
        violations == 0,
        format!("{} trees, {violations} violations", trees.len()),
        started,
    );
}

fn criterion_leaves_diameter(rep: &mut Report) {
    let started = Instant::now();
    let (mut checks, mut violations) = (0, 0);
    for t in free_trees_up_to(10).iter().filter(|t| t.n() >= 2) {
        let diam = oracle::tree_diameter(t);
        for q in (1..=t.n()).filter(|&q| t.n() >= q * diam) {
            checks += 1;
            violations += usize::from(oracle::leaf_count(t) < q);
            violations += usize::from(t.leaf_count_lower_bound_holds(q) != Ok(true));
        }
    }
    rep.line(
        7,
        "leaves versus diameter",
        violations == 0,
        format!("{checks} (tree, q) pairs, {violations} violations"),
        started,
    );
}

fn criterion_color_coding(rep: &mut Report) {
    let started = Instant::now();
    let t = Tree::spider(2, 2);
    let g = Graph::from_edges(t.n(), t.edges()).unwrap();
    let trials = 10_000u64;
    let mut hits = 0u64;
    for i in 0..trials {
        let c = Coloring::random(g.n(), t.n(), &[], child_seed(MASTER_SEED, 8_000_000 + i));
        if let Some(e) = colorful_full_tree_dp(&g, &t, &c, &[], &[]) {
            hits += u64::from(audit(&g, &t, &e));
        }
    }
    let floor = 0.7 * 120.0 / 3125.0;
    let rate = hits as f64 / trials as f64;
    // Reject "true rate below the floor" only if the observed count is implausibly low.
    let p_value = binomial_lower_tail(trials, floor, hits);
    let pass = rate >= floor && p_value > 0.01;
    rep.line(
        8,
        "color-coding success rate",
        pass,
        format!("{hits}/{trials} = {rate:.4} vs floor {floor:.4}"),
        started,
    );
}

fn random_three_partition(r: &mut ChaCha8Rng) -> ThreePartitionInstance {
    loop {
        let n = r.gen_range(1..=2);
        let b = r.gen_range(9..=13u64);
        let (lo, hi) = (b / 4 + 1, (b - 1) / 2);
        let mut sizes = Vec::new();
        let yes = r.gen_bool(0.7);
        for _ in 0..n {
            let a = r.gen_range(lo..=hi);
            let c = r.gen_range(lo..=hi);
            let last = if yes {
                b as i64 - a as i64 - c as i64
            } else {
                r.gen_range(lo..=hi) as i64
            };
            sizes.extend([a as i64, c as i64, last]);
        }
        if !yes {
            let sum: i64 = sizes.iter().sum();
            let fix = n as i64 * b as i64 - (sum - sizes[0]);
            sizes[0] = fix;
        }
        sizes.shuffle(r);
        let sizes: Vec<u64> = match sizes.iter().map(|&s| u64::try_from(s)).collect() {
            Ok(v) => v,
            Err(_) => continue,
        };
        if let Ok(inst) = ThreePartitionInstance::new(b, sizes) {
            return inst;
        }
    }
}

fn criterion_hardness(rep: &mut Report) {
    let started = Instant::now();
    let mut r = stream(9);
    let mut problems = Vec::new();
    let (mut yes, mut bounded) = (0, 0);
    for _ in 0..20 {
        let inst = random_three_partition(&mut r);
        let eps = [
            Ratio::new(1, 1),
            Ratio::new(1, 2),
            Ratio::new(2, 3),
            Ratio::new(1, 4),
        ][r.gen_range(0..4)];
        let out = match generate_hardness_instance(&inst, eps) {
            Ok(o) => o,
            Err(e) => {
                problems.push(format!("generation failed: {e}"));
                continue;
            }
        };
        let size_ok = (out.t.n() as u64) * eps.denom()
            <= (eps.denom() + eps.numer()) * oracle::min_degree(&out.g) as u64;
        bounded += usize::from(size_ok);
        if out.audit().is_err() || !size_ok || oracle::min_degree(&out.g) != out.delta {
            problems.push("audit".into());
        }
        if let Some(partition) = inst.solve_brute() {
            yes += 1;
            match out.forward_certificate(&partition) {
                Ok(e) if audit(&out.g, &out.t, &e) => {}
                _ => problems.push("forward certificate".into()),
            }
        }
    }
    let inst = ThreePartitionInstance::new(9, vec![3, 3, 3]).unwrap();
    let out = generate_hardness_instance(&inst, Ratio::new(1, 1)).unwrap();
    let sizes = (out.delta, out.big_delta, out.t.n(), out.g.n());
    if sizes != (31, 33, 43, 5803) {
        problems.push(format!("reference sizes {sizes:?}"));
    }
    let pass = problems.is_empty();
    rep.line(
        9,
        "hardness generator audit",
        pass,
        format!("20 instances ({yes} yes, {bounded} within (1+ε)δ), reference {sizes:?}, problems {problems:?}"),
        started,
    );
}

fn criterion_no_false_positives(rep: &mut Report) {
    let started = Instant::now();
    let (total, bad) = CERTIFICATES.with(Cell::get);
    rep.line(
        10,
        "no false positives",
        bad == 0 && total > 0,
        format!("{total} certificates, {bad} invalid"),
        started,
    );
}

fn main() {
    let mut rep = Report { failures: 0 };
    criterion_oracle(&mut rep);
    criterion_chvatal(&mut rep);
    criterion_delta_plus_two(&mut rep);
    criterion_dense(&mut rep);
    criterion_preserving(&mut rep);
    criterion_hitting_set(&mut rep);
    criterion_leaves_diameter(&mut rep);
    criterion_color_coding(&mut rep);
    criterion_hardness(&mut rep);
    criterion_no_false_positives(&mut rep);
    if rep.failures > 0 {
        println!("{} criteria failed", rep.failures);
        std::process::exit(1);
    }
}
