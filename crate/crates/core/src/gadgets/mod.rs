//! Proof gadgets as checkable certificates: hubs, units, expansions,
//! adjusters and octopuses, each with a validator and (except octopuses) a
//! greedy builder.
//!
//! Builders are sound but incomplete: whatever they return passes the matching
//! validator, while `None` only means the greedy search found nothing.

mod adjuster;
mod expansion;
mod hub;
mod octopus;
mod unit;

use serde::{Deserialize, Serialize};

pub use adjuster::{
    build_adjuster, build_adjuster_with, build_simple_adjuster, build_simple_adjuster_with, merge_adjusters, validate_adjuster,
    Adjuster, AdjusterReport, ClauseStatus, CyclePolicy, A4_EXACT_LIMIT,
};
pub use expansion::{trim_expansion, validate_expansion, Expansion};
pub use hub::{build_hub, validate_hub, Hub};
pub use octopus::{validate_octopus, Octopus};
pub use unit::{build_unit, validate_unit, Unit};

/// Outcome of a validator: valid, or the first clause that failed or could
/// not be decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Valid,
    Invalid { clause: String, detail: String },
    Unverified { clause: String, detail: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn clause(&self) -> Option<&str> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid { clause, .. } | Verdict::Unverified { clause, .. } => Some(clause),
        }
    }

    pub(crate) fn invalid(clause: &str, detail: impl Into<String>) -> Self {
        Verdict::Invalid {
            clause: clause.into(),
            detail: detail.into(),
        }
    }
}

/// Turns `Err(verdict)` early returns into a verdict.
pub(crate) fn collapse(r: Result<(), Verdict>) -> Verdict {
    r.err().unwrap_or(Verdict::Valid)
}

pub(crate) fn ensure(cond: bool, clause: &str, detail: impl FnOnce() -> String) -> Result<(), Verdict> {
    if cond {
        Ok(())
    } else {
        Err(Verdict::invalid(clause, detail()))
    }
}
