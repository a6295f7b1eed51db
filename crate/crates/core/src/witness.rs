use serde::{Deserialize, Serialize};

use crate::patterns::PatternKind;

/// A concrete counterexample to a claimed property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two distinct admissible item subsets with the same signature.
    SeparabilityCollision { first: Vec<usize>, second: Vec<usize> },
    /// `item` is not in `cover` and every test containing `item` meets `cover`.
    DisjunctCover { item: usize, cover: Vec<usize> },
    /// A pattern occurrence, listed point by point.
    Pattern {
        pattern: PatternKind,
        points: Vec<Vec<i64>>,
    },
}

/// Outcome of a property check that ran to completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Refuted(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Refuted(w) => Some(w),
        }
    }

    pub(crate) fn from_option(found: Option<Witness>) -> Self {
        found.map_or(Verdict::Holds, Verdict::Refuted)
    }
}
