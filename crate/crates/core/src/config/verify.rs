//! Certificate checking. Nothing here calls into the builder: chains are
//! enumerated one by one, and every congruence is recomputed from scratch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use super::cert::{ConfigCertificate, SequenceFingerprint};
use crate::domain::{Budget, InputSequence};
use crate::error::{Error, Result};

/// A broken per-block clause.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    ShapeMismatch { detail: String },
    MissingBlock { level: usize, seq: usize },
    UnexpectedBlock { level: usize, seq: usize },
    DuplicateBlock { level: usize, seq: usize },
    WrongSize { level: usize, seq: usize, size: usize },
    ValueCountMismatch { level: usize, seq: usize },
    IndexOutOfRange { level: usize, seq: usize, index: usize },
    DuplicateIndex { level: usize, seq: usize, index: usize },
    ValueMismatch { level: usize, seq: usize, index: usize, stored: u64, actual: u64 },
    NonZeroSum { level: usize, seq: usize, residue: u64 },
    SharedIndex { seq: usize, index: usize, first_level: usize, second_level: usize },
}

impl Violation {
    /// Short name of the violated clause.
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::ShapeMismatch { .. }
            | Violation::MissingBlock { .. }
            | Violation::UnexpectedBlock { .. }
            | Violation::DuplicateBlock { .. } => "shape",
            Violation::WrongSize { .. } | Violation::ValueCountMismatch { .. } => "size",
            Violation::IndexOutOfRange { .. } | Violation::ValueMismatch { .. } => "terms",
            Violation::DuplicateIndex { .. } | Violation::SharedIndex { .. } => "disjointness",
            Violation::NonZeroSum { .. } => "zero-sum mod n",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ShapeMismatch { detail } => write!(f, "shape: {detail}"),
            Violation::MissingBlock { level, seq } => write!(f, "shape: block ({level},{seq}) missing"),
            Violation::UnexpectedBlock { level, seq } => {
                write!(f, "shape: block ({level},{seq}) outside 1..=L x 1..=m")
            }
            Violation::DuplicateBlock { level, seq } => write!(f, "shape: block ({level},{seq}) repeated"),
            Violation::WrongSize { level, seq, size } => {
                write!(f, "size: block ({level},{seq}) has {size} indices")
            }
            Violation::ValueCountMismatch { level, seq } => {
                write!(f, "size: block ({level},{seq}) lists a different number of values and indices")
            }
            Violation::IndexOutOfRange { level, seq, index } => {
                write!(f, "terms: block ({level},{seq}) index {index} beyond sequence end")
            }
            Violation::DuplicateIndex { level, seq, index } => {
                write!(f, "disjointness: block ({level},{seq}) repeats index {index}")
            }
            Violation::ValueMismatch { level, seq, index, stored, actual } => write!(
                f,
                "terms: block ({level},{seq}) stores {stored} at index {index}, sequence has {actual}"
            ),
            Violation::NonZeroSum { level, seq, residue } => {
                write!(f, "zero-sum mod n: block ({level},{seq}) sums to {residue} mod n")
            }
            Violation::SharedIndex { seq, index, first_level, second_level } => write!(
                f,
                "disjointness: sequence {seq} index {index} used at levels {first_level} and {second_level}"
            ),
        }
    }
}

/// A chain `(i_1, j_1) < ... < (i_k, j_k)` whose Minkowski sum leaves `B`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChainFailure {
    /// `(level, seq)` pairs, levels strictly increasing.
    pub chain: Vec<(usize, usize)>,
    /// Least element of the sum outside `B`.
    pub sum: u128,
}

impl fmt::Display for ChainFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("chain-sum membership: ")?;
        for (k, (i, j)) in self.chain.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "(F{i},{j} + z)")?;
        }
        write!(f, " contains {} outside B", self.sum)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSumReport {
    pub chains_visited: u64,
    pub chains_expected: u64,
    pub violations: Vec<Violation>,
    pub failures: Vec<ChainFailure>,
}

impl ChainSumReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
            && self.failures.is_empty()
            && self.chains_visited == self.chains_expected
    }

    /// Names of every violated clause, deduplicated.
    pub fn violated_clauses(&self) -> BTreeSet<&'static str> {
        let mut out: BTreeSet<&'static str> = self.violations.iter().map(Violation::clause).collect();
        if !self.failures.is_empty() {
            out.insert("chain-sum membership");
        }
        out
    }
}

fn fingerprint_check(sequences: &[InputSequence], cert: &ConfigCertificate) -> Result<()> {
    if sequences.len() != cert.sequences.len() {
        return Err(Error::FingerprintMismatch {
            seq: 0,
            detail: format!(
                "certificate records {} sequences, {} supplied",
                cert.sequences.len(),
                sequences.len()
            ),
        });
    }
    for (seq, recorded) in sequences.iter().zip(&cert.sequences) {
        let actual = SequenceFingerprint::of(seq);
        if actual != *recorded {
            return Err(Error::FingerprintMismatch {
                seq: recorded.id,
                detail: format!(
                    "recorded id {} length {} hash {}, supplied id {} length {} hash {}",
                    recorded.id, recorded.length, recorded.hash, actual.id, actual.length, actual.hash
                ),
            });
        }
    }
    Ok(())
}

/// Checks a certificate against its input sequences and a membership
/// predicate for `B`:
///
/// * every `(level, seq)` block is present exactly once,
/// * `|F_{i,j}| = n` with distinct in-range indices whose stored values match
///   the sequence,
/// * the untranslated values of each block sum to `0 mod n`,
/// * blocks of one sequence never share an index across levels,
/// * every element of every chain sum `(F_{i_1,j_1} + z) + ... + (F_{i_k,j_k} + z)`
///   with `i_1 < ... < i_k` lies in `B`.
///
/// The chain phase only runs on a well-shaped certificate; the budget caps the
/// total number of chain-sum elements `(1 + mn)^L - 1`.
pub fn verify_certificate<B>(
    sequences: &[InputSequence],
    cert: &ConfigCertificate,
    base: B,
    budget: Budget,
) -> Result<ChainSumReport>
where
    B: Fn(u64) -> bool + Sync,
{
    fingerprint_check(sequences, cert)?;

    let m = cert.m;
    let levels = cert.levels;
    let n = cert.n.get();
    let mut violations = Vec::new();

    if m != sequences.len() {
        violations.push(Violation::ShapeMismatch {
            detail: format!("m = {m} but {} sequences recorded", sequences.len()),
        });
    }
    if levels == 0 {
        violations.push(Violation::ShapeMismatch {
            detail: "certificate has no levels".into(),
        });
    }

    let mut grid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (k, b) in cert.blocks.iter().enumerate() {
        let key = (b.level, b.seq);
        if b.level == 0 || b.level > levels || b.seq == 0 || b.seq > m {
            violations.push(Violation::UnexpectedBlock { level: b.level, seq: b.seq });
        } else if grid.insert(key, k).is_some() {
            violations.push(Violation::DuplicateBlock { level: b.level, seq: b.seq });
        }
    }
    for level in 1..=levels {
        for seq in 1..=m {
            if !grid.contains_key(&(level, seq)) {
                violations.push(Violation::MissingBlock { level, seq });
            }
        }
    }

    // Per-block clauses.
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &k in grid.values() {
        let b = &cert.blocks[k];
        let (level, seq) = (b.level, b.seq);
        if b.indices.len() as u128 != u128::from(n) {
            violations.push(Violation::WrongSize { level, seq, size: b.indices.len() });
        }
        if b.values.len() != b.indices.len() {
            violations.push(Violation::ValueCountMismatch { level, seq });
        }
        let terms = sequences.get(seq - 1).map(|s| s.terms.as_slice()).unwrap_or(&[]);
        let mut seen = BTreeSet::new();
        for (pos, &index) in b.indices.iter().enumerate() {
            if !seen.insert(index) {
                violations.push(Violation::DuplicateIndex { level, seq, index });
            }
            match terms.get(index) {
                None => violations.push(Violation::IndexOutOfRange { level, seq, index }),
                Some(&actual) => {
                    if let Some(&stored) = b.values.get(pos) {
                        if stored != actual {
                            violations.push(Violation::ValueMismatch { level, seq, index, stored, actual });
                        }
                    }
                }
            }
            if let Some(first_level) = owner.get(&(seq, index)).copied() {
                if first_level != level {
                    violations.push(Violation::SharedIndex {
                        seq,
                        index,
                        first_level,
                        second_level: level,
                    });
                }
            } else {
                owner.insert((seq, index), level);
            }
        }
        let residue = b
            .values
            .iter()
            .fold(0u128, |acc, &v| (acc + u128::from(v)) % u128::from(n));
        if residue != 0 {
            violations.push(Violation::NonZeroSum { level, seq, residue: residue as u64 });
        }
    }
    violations.sort();
    violations.dedup();

    let chains_expected = (m as u128 + 1)
        .checked_pow(u32::try_from(levels).unwrap_or(u32::MAX))
        .map(|c| c - 1)
        .and_then(|c| u64::try_from(c).ok())
        .unwrap_or(u64::MAX);

    let well_shaped = !violations.iter().any(|v| v.clause() == "shape");
    if !well_shaped {
        return Ok(ChainSumReport {
            chains_visited: 0,
            chains_expected,
            violations,
            failures: Vec::new(),
        });
    }

    let mut elements: u128 = 1;
    for level in 1..=levels {
        let width: u128 = (1..=m)
            .map(|seq| cert.blocks[grid[&(level, seq)]].values.len() as u128)
            .sum();
        elements = elements.saturating_mul(1 + width);
    }
    budget.check("chain-sum verification", elements - 1)?;

    // translated[level-1][seq-1] = F_{level,seq} + z, as exact integers.
    let translated: Vec<Vec<Vec<u128>>> = (1..=levels)
        .map(|level| {
            (1..=m)
                .map(|seq| {
                    let b = &cert.blocks[grid[&(level, seq)]];
                    b.values.iter().map(|&v| u128::from(v) + u128::from(b.z)).collect()
                })
                .collect()
        })
        .collect();

    // Chain code c in 1..(m+1)^L: base-(m+1) digit at each level is 0 for
    // "skip" or the sequence id.
    let radix = m as u64 + 1;
    let mut failures: Vec<ChainFailure> = (1..=chains_expected)
        .into_par_iter()
        .filter_map(|code| {
            let mut chain = Vec::new();
            let mut rest = code;
            for level in 1..=levels {
                let digit = (rest % radix) as usize;
                rest /= radix;
                if digit != 0 {
                    chain.push((level, digit));
                }
            }
            let mut sums: Vec<u128> = vec![0];
            for &(level, seq) in &chain {
                let block = &translated[level - 1][seq - 1];
                let mut next = Vec::with_capacity(sums.len() * block.len());
                for &s in &sums {
                    for &e in block {
                        next.push(s + e);
                    }
                }
                next.sort_unstable();
                next.dedup();
                sums = next;
            }
            sums.into_iter()
                .find(|&s| u64::try_from(s).map_or(true, |s| !base(s)))
                .map(|sum| ChainFailure { chain, sum })
        })
        .collect();
    failures.sort();

    Ok(ChainSumReport {
        chains_visited: chains_expected,
        chains_expected,
        violations,
        failures,
    })
}
