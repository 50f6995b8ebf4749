//! The full case ladder, the exact oracle and certificate checks.

use crate::color_coding::{contains_tree_by_size_with, Budget};
use crate::dense::{embed_dense, embed_dense_relaxed};
use crate::embedding::{chvatal_extend, solve_delta_plus_two, verify_full, PartialEmbedding};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::high_leaf::{ladder_min_delta, solve_high_leaf_degree_with};
use crate::medium::{solve_medium, solve_medium_with, MediumThresholds};
use crate::outcome::{Branch, ExactReason, SolveOutcome};
use crate::preserving::{solve_large_diameter, solve_large_diameter_relaxed};
use crate::search::{Search, SearchResult};
use crate::seed::{child_seed, stream};
use crate::small_diameter::{solve_small_diameter_with, SmallDiameterThresholds};
use crate::tree::Tree;

/// Exponent of the small-diameter analysis.
pub const P: u32 = 15;

/// Stream label for per-component seeds of a disconnected host.
const COMPONENT_STREAM: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// No node cap: randomized engines run their full trial count.
    Strict,
    /// Engines stop at `node_cap` and report `NotFound(BudgetExceeded)`.
    #[default]
    Budgeted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Thresholds {
    /// Literal constants; constructive cases are unconditional and failing in one is a bug.
    #[default]
    Literal,
    /// Small constants so constructive cases fire on desk-scale inputs; a failed
    /// construction falls back to color coding.
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub failure_exponent: u32,
    pub node_cap: u64,
    pub mode: Mode,
    pub thresholds: Thresholds,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            seed: 0,
            failure_exponent: 20,
            node_cap: 20_000_000,
            mode: Mode::Budgeted,
            thresholds: Thresholds::Literal,
        }
    }
}

impl Config {
    fn budget(&self, label: u64) -> Budget {
        let cap = match self.mode {
            Mode::Strict => None,
            Mode::Budgeted => Some(self.node_cap),
        };
        Budget {
            failure_exponent: self.failure_exponent,
            seed: child_seed(self.seed, label),
            node_cap: cap,
        }
    }
}

/// Which rung of the ladder handles an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    Chvatal,
    Size,
    Components,
    DeltaPlusTwo,
    SmallDegree,
    HighLeafDegree,
    Dense,
    LargeDiameter,
    Medium,
    SmallDiameter,
}

/// Numeric cut-offs of the ladder for a given `k` and `δ`.
#[derive(Clone, Copy, Debug)]
pub struct LadderThresholds {
    pub small_delta: u64,
    pub high_leaf_min_delta: usize,
    pub large_diameter: f64,
    pub escape_q: usize,
    pub separable_q: usize,
    pub medium: MediumThresholds,
    pub small: SmallDiameterThresholds,
    pub p: u32,
}

fn pow(k: usize, e: u32) -> u64 {
    (k as u64).saturating_pow(e)
}

impl LadderThresholds {
    pub fn new(kind: Thresholds, k: usize, delta: usize) -> LadderThresholds {
        let log_delta = (delta.max(2) as f64).log2();
        match kind {
            Thresholds::Literal => {
                let kp = usize::try_from(pow(k, P)).unwrap_or(usize::MAX);
                LadderThresholds {
                    small_delta: pow(k, 3 * P + 1),
                    high_leaf_min_delta: ladder_min_delta(k),
                    large_diameter: 8.0 * pow(k, 6) as f64 * log_delta,
                    escape_q: kp,
                    separable_q: kp,
                    medium: MediumThresholds::literal(k),
                    small: SmallDiameterThresholds::literal(k, P),
                    p: P,
                }
            }
            Thresholds::Relaxed => {
                let q = 2 * k * k;
                LadderThresholds {
                    small_delta: 3 * k as u64,
                    high_leaf_min_delta: 0,
                    large_diameter: 2.0 * k as f64 * log_delta,
                    escape_q: q,
                    separable_q: q,
                    medium: MediumThresholds {
                        large_diameter: q as u64,
                        small_degree: (k * k) as u64,
                        escape_q: q as u64,
                        separable_q: q as u64,
                    },
                    small: SmallDiameterThresholds {
                        min_delta: 0,
                        escape_q: q,
                        separable_q: q,
                    },
                    p: 2,
                }
            }
        }
    }
}

/// The rung that [`solve`] takes on `(g, t)`.
pub fn dispatch_case(g: &Graph, t: &Tree, config: &Config) -> Case {
    let delta = g.delta();
    if t.n() <= delta + 1 && t.n() <= g.n() {
        return Case::Chvatal;
    }
    if g.n() < t.n() {
        return Case::Size;
    }
    if !g.is_connected() {
        return Case::Components;
    }
    let k = t.n() - delta;
    if k == 2 {
        return Case::DeltaPlusTwo;
    }
    let th = LadderThresholds::new(config.thresholds, k, delta);
    if (delta as u64) < th.small_delta {
        return Case::SmallDegree;
    }
    let (ld, _) = t.leaf_degree().expect("tree has at least two vertices");
    if ld + 1 >= k {
        return Case::HighLeafDegree;
    }
    if 4 * k * g.n() <= (4 * k + 1) * delta {
        return Case::Dense;
    }
    if t.diameter().0 as f64 >= th.large_diameter {
        return Case::LargeDiameter;
    }
    if g.find_q_escape(th.escape_q).is_some() || t.is_separable(th.separable_q) {
        return Case::Medium;
    }
    Case::SmallDiameter
}

/// Decides whether `g` contains `t`. Positive answers carry a verified certificate;
/// negative answers are exact; everything else is `NotFound` with its round metadata.
pub fn solve(g: &Graph, t: &Tree, config: &Config) -> SolveOutcome {
    assert!(g.n() > 0 && t.n() > 0, "graph and tree must be non-empty");
    let out = solve_inner(g, t, config);
    if let SolveOutcome::Contains { embedding, .. } = &out {
        assert!(
            verify_full(embedding, g, t),
            "solver produced an invalid certificate"
        );
    }
    out
}

fn contains(e: PartialEmbedding, branch: Branch) -> SolveOutcome {
    SolveOutcome::Contains {
        embedding: e,
        branch,
    }
}

fn solve_inner(g: &Graph, t: &Tree, config: &Config) -> SolveOutcome {
    let case = dispatch_case(g, t, config);
    let delta = g.delta();
    let k = t.n().saturating_sub(delta);
    let literal = config.thresholds == Thresholds::Literal;
    let fallback = || contains_tree_by_size_with(g, t, &config.budget(stream::COLOR_CODING));
    // Constructive rungs: a failure under literal thresholds is a bug.
    let constructive = |r: Result<PartialEmbedding>, branch: Branch| match r {
        Ok(e) => contains(e, branch),
        Err(err) if literal => panic!("{branch} construction failed under its hypotheses: {err}"),
        Err(_) => fallback(),
    };
    match case {
        Case::Chvatal => {
            let e = chvatal_extend(g, t, &PartialEmbedding::new(t.n(), g.n()))
                .expect("tree fits under δ+1");
            contains(e, Branch::Chvatal)
        }
        Case::Size => SolveOutcome::NotContained {
            reason: ExactReason::Size,
        },
        Case::Components => solve_by_component(g, t, config),
        Case::DeltaPlusTwo => {
            solve_delta_plus_two(g, t).expect("connected host with |T| = δ+2 ≤ n")
        }
        Case::SmallDegree => fallback(),
        Case::HighLeafDegree => {
            let th = LadderThresholds::new(config.thresholds, k, delta);
            let budget = config.budget(stream::HIGH_LEAF);
            match solve_high_leaf_degree_with(g, t, k, &budget, th.high_leaf_min_delta) {
                Ok(out) => out,
                Err(err) if literal => {
                    panic!("high-leaf-degree rung failed under its hypotheses: {err}")
                }
                Err(_) => fallback(),
            }
        }
        Case::Dense => {
            let r = if literal {
                embed_dense(g, t, k)
            } else {
                embed_dense_relaxed(g, t)
            };
            constructive(r, Branch::Dense)
        }
        Case::LargeDiameter => {
            let r = if literal {
                solve_large_diameter(g, t, k)
            } else {
                solve_large_diameter_relaxed(g, t)
            };
            constructive(r, Branch::LargeDiameter)
        }
        Case::Medium => {
            let th = LadderThresholds::new(config.thresholds, k, delta);
            let r = if literal {
                solve_medium(g, t, k)
            } else {
                solve_medium_with(g, t, k, &th.medium).map(|(e, _)| e)
            };
            let branch = if g.find_q_escape(th.escape_q).is_some() {
                Branch::Escape
            } else {
                Branch::Separator
            };
            constructive(r, branch)
        }
        Case::SmallDiameter => {
            let th = LadderThresholds::new(config.thresholds, k, delta);
            let budget = config.budget(stream::SMALL_DIAMETER);
            match solve_small_diameter_with(g, t, k, th.p, &th.small, &budget) {
                Ok(out @ SolveOutcome::Contains { .. }) => out,
                Ok(out) if literal => out,
                Err(err) if literal => {
                    panic!("small-diameter rung failed under its hypotheses: {err}")
                }
                _ => fallback(),
            }
        }
    }
}

/// Solves on each component large enough to hold `t` and maps a certificate back.
fn solve_by_component(g: &Graph, t: &Tree, config: &Config) -> SolveOutcome {
    let comps = g.components_avoiding(&g.empty_set());
    let mut pending = None;
    for (i, comp) in comps.iter().enumerate() {
        if comp.len() < t.n() {
            continue;
        }
        let (h, back) = g.induced_subgraph(comp);
        let sub = Config {
            seed: child_seed(child_seed(config.seed, COMPONENT_STREAM), i as u64),
            ..*config
        };
        match solve_inner(&h, t, &sub) {
            SolveOutcome::Contains { embedding, branch } => {
                let pairs: Vec<(usize, usize)> = embedding
                    .pairs()
                    .into_iter()
                    .map(|(x, v)| (x, back[v]))
                    .collect();
                let e = PartialEmbedding::from_pairs(t.n(), g.n(), &pairs)
                    .expect("component map is injective");
                return contains(e, branch);
            }
            SolveOutcome::NotContained { .. } => {}
            nf @ SolveOutcome::NotFound { .. } => pending = pending.or(Some(nf)),
        }
    }
    pending.unwrap_or(SolveOutcome::NotContained {
        reason: ExactReason::Exhaustive,
    })
}

/// Exact backtracking with a node cap; `Err(BudgetExceeded)` when the cap is hit.
pub fn brute_force_contains(g: &Graph, t: &Tree, node_cap: u64) -> Result<SolveOutcome> {
    if t.n() > g.n() {
        return Ok(SolveOutcome::NotContained {
            reason: ExactReason::Size,
        });
    }
    let search = Search {
        node_cap,
        ..Search::new(g, t)
    };
    match search.run() {
        SearchResult::Found(e) => Ok(contains(e, Branch::Exact)),
        SearchResult::Infeasible => Ok(SolveOutcome::NotContained {
            reason: ExactReason::Exhaustive,
        }),
        SearchResult::BudgetExceeded => Err(Error::BudgetExceeded),
    }
}

/// Whether `e` maps every vertex of `t` injectively onto a subgraph of `g`.
pub fn verify_certificate(g: &Graph, t: &Tree, e: &PartialEmbedding) -> bool {
    verify_full(e, g, t)
}
