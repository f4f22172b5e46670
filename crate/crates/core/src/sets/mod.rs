//! Symbolic subsets of the positive integers and finite-window analyzers
//! for thickness, syndeticity and piecewise syndeticity in `(N, +)`.

mod analyze;
mod dsl;

use std::collections::BTreeSet;

pub use analyze::{
    pws_witness, syndetic_check, thick_witness, StructureKind, StructureWitness, SyndeticOutcome,
};
pub use dsl::parse_set;

use crate::error::{Error, Result};

/// A subset of `N = {1, 2, 3, ...}` with decidable membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetDescription {
    /// `{x : x mod modulus ∈ residues}`.
    Modular {
        modulus: u64,
        residues: BTreeSet<u64>,
    },
    /// `⋃_{k ≥ 1} [base^k, base^k + k]`.
    IntervalFamily { base: u64 },
    Explicit(BTreeSet<u64>),
    /// Empty union is the empty set.
    Union(Vec<SetDescription>),
    /// Empty intersection is all of `N`.
    Intersection(Vec<SetDescription>),
    Complement(Box<SetDescription>),
}

impl SetDescription {
    pub fn modular(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if residues.is_empty() {
            return Err(Error::InvalidArgument("residue set must be nonempty".into()));
        }
        if let Some(&r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(Error::InvalidArgument(format!(
                "residue {r} is not below modulus {modulus}"
            )));
        }
        Ok(SetDescription::Modular { modulus, residues })
    }

    pub fn interval_family(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!(
                "interval family base must be at least 2, got {base}"
            )));
        }
        Ok(SetDescription::IntervalFamily { base })
    }

    pub fn explicit(members: impl IntoIterator<Item = u64>) -> Self {
        SetDescription::Explicit(members.into_iter().collect())
    }

    /// Membership of `x`. Zero is not a natural number here and is never a
    /// member, complements included.
    pub fn contains(&self, x: u64) -> bool {
        x != 0 && self.eval(x)
    }

    fn eval(&self, x: u64) -> bool {
        match self {
            SetDescription::Modular { modulus, residues } => residues.contains(&(x % modulus)),
            SetDescription::IntervalFamily { base } => in_interval_family(*base, x),
            SetDescription::Explicit(members) => members.contains(&x),
            SetDescription::Union(parts) => parts.iter().any(|p| p.eval(x)),
            SetDescription::Intersection(parts) => parts.iter().all(|p| p.eval(x)),
            SetDescription::Complement(inner) => !inner.eval(x),
        }
    }
}

fn in_interval_family(base: u64, x: u64) -> bool {
    if base < 2 {
        return base == 1 && x >= 1;
    }
    let mut start = base;
    let mut k = 1u64;
    while start <= x {
        if x - start <= k {
            return true;
        }
        match start.checked_mul(base) {
            Some(next) => start = next,
            None => break,
        }
        k += 1;
    }
    false
}

/// Membership query `x ∈ A`.
pub fn membership(set: &SetDescription, x: u64) -> bool {
    set.contains(x)
}
