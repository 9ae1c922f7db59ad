//! Cumulative and average levels of the s-th max-turn and min-turn of k-Dyck paths.
//!
//! A k-Dyck path uses up-steps `(1, k)` and down-steps `(1, -1)`, never dips
//! below the axis, and ends on it. The s-th *max-turn* is the level at the top
//! of the s-th up-step; the s-th *min-turn* is the level reached by the run of
//! down-steps that follows it. Every quantity is computed three independent
//! ways so the results can be cross-checked:
//!
//! * [`closedform`]: explicit binomial-sum formulas in exact integers,
//! * [`series`]: truncated bivariate generating functions solved from the
//!   kernel equation `u = z + z w u^(k+1)`,
//! * [`oracle`]: exhaustive backtracking over all paths.
//!
//! [`verify`] runs the full cross-check suite and [`cli`] exposes everything as
//! the `kdyck` command.

pub mod cli;
pub mod closedform;
pub mod error;
pub mod oracle;
mod par;
pub mod report;
pub mod series;
pub mod verify;

pub use closedform::StatRequest;
pub use error::{Error, Result};
pub use oracle::{DyckPath, Step, TurnProfile};
pub use series::{SeriesZW, UPolySeries};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which turn statistic a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnKind {
    Min,
    Max,
    /// Max-turn minus min-turn: the length of the down-run after the s-th up-step.
    Osc,
}

impl TurnKind {
    pub const ALL: [TurnKind; 3] = [TurnKind::Min, TurnKind::Max, TurnKind::Osc];

    pub fn as_str(self) -> &'static str {
        match self {
            TurnKind::Min => "min",
            TurnKind::Max => "max",
            TurnKind::Osc => "osc",
        }
    }
}

impl fmt::Display for TurnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TurnKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(TurnKind::Min),
            "max" => Ok(TurnKind::Max),
            "osc" => Ok(TurnKind::Osc),
            other => Err(Error::InvalidParameter(format!(
                "unknown turn kind `{other}`"
            ))),
        }
    }
}
