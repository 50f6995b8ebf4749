use std::fmt;

use crate::embedding::PartialEmbedding;

/// Which procedure produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Chvatal,
    DeltaPlusTwo,
    Exact,
    ColorCoding,
    HighLeafDegree,
    Ahsc,
    ExpandingWalk,
    LeafAnchor,
    SmallDiameter,
    Dense,
    LargeDiameter,
    TrivialPaths,
    Escape,
    Separator,
    Hardness,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::Chvatal => "chvatal",
            Branch::DeltaPlusTwo => "delta-plus-two",
            Branch::Exact => "exact",
            Branch::ColorCoding => "color-coding",
            Branch::HighLeafDegree => "high-leaf-degree",
            Branch::Ahsc => "ahsc",
            Branch::ExpandingWalk => "expanding-walk",
            Branch::LeafAnchor => "leaf-anchor",
            Branch::SmallDiameter => "small-diameter",
            Branch::Dense => "dense",
            Branch::LargeDiameter => "large-diameter",
            Branch::TrivialPaths => "trivial-paths",
            Branch::Escape => "escape",
            Branch::Separator => "separator",
            Branch::Hardness => "hardness",
        };
        f.write_str(s)
    }
}

/// Why a negative answer is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactReason {
    /// `|V(G)| < |V(T)|`.
    Size,
    /// Regular host and the star on `δ + 2` vertices.
    RegularStar,
    /// Exhaustive backtracking found nothing.
    Exhaustive,
}

impl fmt::Display for ExactReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExactReason::Size => "size",
            ExactReason::RegularStar => "regular-star",
            ExactReason::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotFoundReason {
    /// Every randomized round failed.
    Exhausted,
    /// The configured node or trial budget ran out first.
    BudgetExceeded,
}

impl fmt::Display for NotFoundReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotFoundReason::Exhausted => "exhausted",
            NotFoundReason::BudgetExceeded => "BudgetExceeded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Contains {
        embedding: PartialEmbedding,
        branch: Branch,
    },
    NotContained {
        reason: ExactReason,
    },
    NotFound {
        rounds: u64,
        seed: u64,
        failure_exponent: u32,
        reason: NotFoundReason,
    },
}

impl SolveOutcome {
    pub fn is_contains(&self) -> bool {
        matches!(self, SolveOutcome::Contains { .. })
    }

    pub fn embedding(&self) -> Option<&PartialEmbedding> {
        match self {
            SolveOutcome::Contains { embedding, .. } => Some(embedding),
            _ => None,
        }
    }

    pub fn branch(&self) -> Option<Branch> {
        match self {
            SolveOutcome::Contains { branch, .. } => Some(*branch),
            _ => None,
        }
    }

    /// `true` / `false` for definite answers, `None` for NotFound.
    pub fn decided(&self) -> Option<bool> {
        match self {
            SolveOutcome::Contains { .. } => Some(true),
            SolveOutcome::NotContained { .. } => Some(false),
            SolveOutcome::NotFound { .. } => None,
        }
    }
}
