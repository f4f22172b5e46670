//! Bounded searches for structure witnesses.
//!
//! Thickness and (piecewise) syndeticity quantify over infinitely many
//! elements, so each search here is a semi-decision procedure: a returned
//! witness is a fact about the set, an absent one is only a fact about the
//! bound.

use std::collections::BTreeSet;

use super::SetDescription;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Thick,
    Syndetic,
    PiecewiseSyndetic,
}

impl StructureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::Thick => "thick",
            StructureKind::Syndetic => "syndetic",
            StructureKind::PiecewiseSyndetic => "pws",
        }
    }
}

/// A finite fact about a set that can be re-checked with membership queries.
///
/// * thick: `finite + translation ⊆ A`
/// * syndetic: every `y ≤ bound` has some `t ∈ translates` with `y + t ∈ A`
/// * pws: every `f ∈ finite` has some `t ∈ translates` with `f + translation + t ∈ A`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureWitness {
    pub kind: StructureKind,
    pub translation: Option<u64>,
    pub translates: Vec<u64>,
    pub finite: Vec<u64>,
    pub bound: u64,
}

impl StructureWitness {
    /// Re-derives the witnessed fact from membership queries alone.
    pub fn recheck(&self, set: &SetDescription) -> bool {
        let member = |a: u64, b: u64, c: u64| {
            a.checked_add(b)
                .and_then(|s| s.checked_add(c))
                .is_some_and(|s| set.contains(s))
        };
        match self.kind {
            StructureKind::Thick => match self.translation {
                Some(x) => !self.finite.is_empty() && self.finite.iter().all(|&f| member(f, x, 0)),
                None => false,
            },
            StructureKind::Syndetic => {
                let mut y = 1;
                while y <= self.bound {
                    if !self.translates.iter().any(|&t| member(y, t, 0)) {
                        return false;
                    }
                    y += 1;
                }
                !self.translates.is_empty()
            }
            StructureKind::PiecewiseSyndetic => match self.translation {
                Some(x) => {
                    !self.finite.is_empty()
                        && self
                            .finite
                            .iter()
                            .all(|&f| self.translates.iter().any(|&t| member(f, x, t)))
                }
                None => false,
            },
        }
    }
}

fn shifted_member(set: &SetDescription, a: u64, b: u64) -> bool {
    a.checked_add(b).is_some_and(|s| set.contains(s))
}

fn nonempty(name: &str, items: &BTreeSet<u64>) -> Result<Vec<u64>> {
    if items.is_empty() {
        Err(Error::InvalidArgument(format!("{name} must be nonempty")))
    } else {
        Ok(items.iter().copied().collect())
    }
}

/// Least `x ∈ [1, bound]` with `F + x ⊆ A`.
pub fn thick_witness(
    set: &SetDescription,
    finite: &BTreeSet<u64>,
    bound: u64,
) -> Result<Option<StructureWitness>> {
    let finite = nonempty("F", finite)?;
    let found = (1..=bound).find(|&x| finite.iter().all(|&f| shifted_member(set, f, x)));
    Ok(found.map(|x| StructureWitness {
        kind: StructureKind::Thick,
        translation: Some(x),
        translates: Vec::new(),
        finite,
        bound,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyndeticOutcome {
    /// Every `y` in `[1, window]` is covered.
    Covered(StructureWitness),
    /// The least `y` with no `t ∈ G` putting `y + t` in the set.
    Uncovered { y: u64 },
}

impl SyndeticOutcome {
    pub fn is_covered(&self) -> bool {
        matches!(self, SyndeticOutcome::Covered(_))
    }
}

/// Checks `[1, window] ⊆ ⋃_{t ∈ G} (A - t)`. A pass is necessary, not
/// sufficient, for `A` to be syndetic with translation set `G`.
pub fn syndetic_check(
    set: &SetDescription,
    translates: &BTreeSet<u64>,
    window: u64,
) -> Result<SyndeticOutcome> {
    let translates = nonempty("G", translates)?;
    let uncovered =
        (1..=window).find(|&y| !translates.iter().any(|&t| shifted_member(set, y, t)));
    Ok(match uncovered {
        Some(y) => SyndeticOutcome::Uncovered { y },
        None => SyndeticOutcome::Covered(StructureWitness {
            kind: StructureKind::Syndetic,
            translation: None,
            translates,
            finite: Vec::new(),
            bound: window,
        }),
    })
}

/// Least `x ∈ [1, bound]` such that every `f ∈ F` has some `t ∈ G` with
/// `f + x + t ∈ A`.
pub fn pws_witness(
    set: &SetDescription,
    translates: &BTreeSet<u64>,
    finite: &BTreeSet<u64>,
    bound: u64,
) -> Result<Option<StructureWitness>> {
    let translates = nonempty("G", translates)?;
    let finite = nonempty("F", finite)?;
    let found = (1..=bound).find(|&x| {
        finite.iter().all(|&f| {
            f.checked_add(x)
                .is_some_and(|fx| translates.iter().any(|&t| shifted_member(set, fx, t)))
        })
    });
    Ok(found.map(|x| StructureWitness {
        kind: StructureKind::PiecewiseSyndetic,
        translation: Some(x),
        translates,
        finite,
        bound,
    }))
}
