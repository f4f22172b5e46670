use std::collections::BTreeSet;

use rayon::prelude::*;

use super::cert::{Block, ConfigCertificate, SequenceFingerprint};
use crate::central::{CentralSurrogate, CorePredicate};
use crate::domain::{Budget, InputSequence, Modulus};
use crate::error::{Error, Result};
use crate::zerosum::egz_solve;

/// Limits for [`build_configuration`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Largest shift `x` tried when translating fresh terms into the core.
    pub translation_bound: u64,
    /// Caps chain-sum enumeration and the EGZ dynamic program.
    pub budget: Budget,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            translation_bound: 1 << 20,
            budget: Budget::DEFAULT,
        }
    }
}

/// Terms consumed per level from each sequence: `(2n - 1) |G|`.
pub fn panel_width(n: Modulus, surrogate: &CentralSurrogate) -> Option<usize> {
    n.egz_pool().checked_mul(surrogate.translation_count())
}

/// Builds `levels` levels of blocks `F_{i,j}` and translates `z_{i,j}`.
///
/// Level `i` reads the next unused panel of each sequence, shrinks the core
/// to `C = B* ∩ ⋂ (B* - z)` over all chain sums `z` of earlier levels,
/// translates the panel into `⋃_{t ∈ G} (C - t)`, keeps the first `2n - 1`
/// terms of the least `t` whose class is that large, and extracts a zero-sum
/// block of size `n` from them with `z = x + t`.
pub fn build_configuration(
    sequences: &[InputSequence],
    n: Modulus,
    surrogate: &CentralSurrogate,
    levels: usize,
    options: BuildOptions,
) -> Result<ConfigCertificate> {
    if levels == 0 {
        return Err(Error::InvalidArgument("level count must be at least 1".into()));
    }
    if sequences.is_empty() {
        return Err(Error::InvalidArgument("need at least one sequence".into()));
    }
    for (pos, seq) in sequences.iter().enumerate() {
        if seq.id != pos + 1 {
            return Err(Error::InvalidArgument(format!(
                "sequence at position {pos} has id {}, expected {}",
                seq.id,
                pos + 1
            )));
        }
    }
    let width = panel_width(n, surrogate).ok_or(Error::Overflow("sizing panels"))?;
    let needed = width
        .checked_mul(levels)
        .ok_or(Error::Overflow("sizing panels"))?;
    for seq in sequences {
        if seq.len() < needed {
            return Err(Error::InsufficientSequenceLength {
                seq: seq.id,
                needed,
                got: seq.len(),
            });
        }
    }

    let m = sequences.len();
    let mut by_level: Vec<Vec<Block>> = Vec::with_capacity(levels);
    for level in 1..=levels {
        chain_count_guard(m, n, level - 1, options.budget)?;
        let shifts = chain_sums(&by_level)?;
        let core = surrogate.core_after_shifts(&shifts)?;
        let blocks = sequences
            .par_iter()
            .map(|seq| build_block(seq, level, width, n, surrogate, &core, options))
            .collect::<Result<Vec<_>>>()?;
        by_level.push(blocks);
    }

    Ok(ConfigCertificate {
        n,
        m,
        levels,
        surrogate: surrogate.clone(),
        sequences: sequences.iter().map(SequenceFingerprint::of).collect(),
        blocks: by_level.into_iter().flatten().collect(),
    })
}

fn build_block(
    seq: &InputSequence,
    level: usize,
    width: usize,
    n: Modulus,
    surrogate: &CentralSurrogate,
    core: &CorePredicate,
    options: BuildOptions,
) -> Result<Block> {
    let start = (level - 1) * width;
    let fresh = &seq.terms[start..start + width];
    let translation = surrogate.translate_into_core(fresh, core, options.translation_bound)?;

    let pool_size = n.egz_pool();
    let mut largest = 0;
    let mut chosen = None;
    for t in surrogate.translations() {
        let class: Vec<usize> = (0..width)
            .filter(|&k| translation.assignment[k] == t)
            .collect();
        largest = largest.max(class.len());
        if class.len() >= pool_size {
            chosen = Some((t, class));
            break;
        }
    }
    let (t, class) = chosen.ok_or(Error::PoolTooSmall {
        level,
        seq: seq.id,
        largest,
        needed: pool_size,
    })?;

    let pool: Vec<usize> = class[..pool_size].iter().map(|&k| start + k).collect();
    let pool_values: Vec<u64> = pool.iter().map(|&p| seq.terms[p]).collect();
    let local = egz_solve(&pool_values, n, options.budget)?;
    let indices: Vec<usize> = local.indices.iter().map(|&k| pool[k]).collect();
    let values: Vec<u64> = indices.iter().map(|&p| seq.terms[p]).collect();
    let z = translation
        .x
        .checked_add(t)
        .ok_or(Error::Overflow("computing a translate"))?;
    debug_assert!(values
        .iter()
        .all(|v| v.checked_add(z).is_some_and(|s| core.contains(s))));
    Ok(Block {
        level,
        seq: seq.id,
        indices,
        values,
        z,
    })
}

/// Number of chain-sum elements before deduplication over `levels` levels:
/// `(1 + m n)^levels - 1`.
fn chain_count_guard(m: usize, n: Modulus, levels: usize, budget: Budget) -> Result<()> {
    let per_level = 1u128 + m as u128 * u128::from(n.get());
    let mut count: u128 = 1;
    for _ in 0..levels {
        count = count.saturating_mul(per_level);
    }
    let count = count - 1;
    if count > u128::from(budget.0) {
        return Err(Error::CombinatorialBlowup {
            count,
            budget: budget.0,
        });
    }
    Ok(())
}

/// All elements of all Minkowski sums of translated blocks along strictly
/// increasing level chains, one sequence per level.
fn chain_sums(by_level: &[Vec<Block>]) -> Result<BTreeSet<u64>> {
    let mut acc: BTreeSet<u64> = BTreeSet::new();
    for blocks in by_level {
        let mut level_elems = BTreeSet::new();
        for b in blocks {
            level_elems.extend(b.translated().ok_or(Error::Overflow("translating a block"))?);
        }
        let mut next = acc.clone();
        next.extend(level_elems.iter().copied());
        for &a in &acc {
            for &e in &level_elems {
                next.insert(a.checked_add(e).ok_or(Error::Overflow("summing a chain"))?);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Chain sums over levels `1..=upto` of a certificate.
pub fn enumerate_chain_sums(
    cert: &ConfigCertificate,
    upto: usize,
    budget: Budget,
) -> Result<BTreeSet<u64>> {
    if upto > cert.levels {
        return Err(Error::InvalidArgument(format!(
            "level {upto} exceeds certificate depth {}",
            cert.levels
        )));
    }
    chain_count_guard(cert.m, cert.n, upto, budget)?;
    let by_level: Vec<Vec<Block>> = (1..=upto)
        .map(|i| cert.blocks.iter().filter(|b| b.level == i).cloned().collect())
        .collect();
    chain_sums(&by_level)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn build(seqs: &[InputSequence], n: u64, s: &str, levels: usize) -> Result<ConfigCertificate> {
        build_configuration(seqs, m(n), &s.parse().unwrap(), levels, BuildOptions::default())
    }

    #[test]
    fn first_level_matches_worked_translation() {
        let seqs = [InputSequence::new(1, (1..=30).collect())];
        let cert = build(&seqs, 2, "mod:3", 2).unwrap();
        // Panel 1..9 shifted by x = 1: terms 1, 4, 7 take t = 1; EGZ picks 1 and 7.
        let b = cert.block(1, 1).unwrap();
        assert_eq!((b.indices.clone(), b.values.clone(), b.z), (vec![0, 6], vec![1, 7], 2));
        let b2 = cert.block(2, 1).unwrap();
        assert_eq!((b2.indices.clone(), b2.values.clone(), b2.z), (vec![9, 15], vec![10, 16], 2));
        for b in &cert.blocks {
            assert_eq!(b.values.iter().sum::<u64>() % 2, 0);
            assert!(b.translated().unwrap().iter().all(|v| v % 3 == 0));
        }
    }

    #[test]
    fn constant_sequence_modulus_one() {
        let seqs = [InputSequence::new(1, vec![3; 5])];
        let cert = build(&seqs, 3, "mod:1", 1).unwrap();
        let b = cert.block(1, 1).unwrap();
        assert_eq!(b.indices, vec![0, 1, 2]);
        assert_eq!(b.values, vec![3, 3, 3]);
        assert_eq!(b.z, 2);
    }

    #[test]
    fn chain_sums_small() {
        let seqs = [InputSequence::new(1, (1..=30).collect())];
        let cert = build(&seqs, 2, "mod:3", 2).unwrap();
        let one = enumerate_chain_sums(&cert, 1, Budget::DEFAULT).unwrap();
        assert_eq!(one.into_iter().collect::<Vec<_>>(), vec![3, 9]);
        let two = enumerate_chain_sums(&cert, 2, Budget::DEFAULT).unwrap();
        // {3, 9} ∪ {12, 18} ∪ ({3, 9} + {12, 18}), deduplicated.
        assert_eq!(two.into_iter().collect::<Vec<_>>(), vec![3, 9, 12, 15, 18, 21, 27]);
        assert!(enumerate_chain_sums(&cert, 3, Budget::DEFAULT).is_err());
        assert!(matches!(
            enumerate_chain_sums(&cert, 2, Budget(7)),
            Err(Error::CombinatorialBlowup { count: 8, budget: 7 })
        ));
    }

    #[test]
    fn two_sequences_three_levels_even() {
        let seqs = [
            InputSequence::new(1, (1..=40).collect()),
            InputSequence::new(2, (1..=40).map(|i| 2 * i).collect()),
        ];
        let cert = build(&seqs, 2, "mod:2", 3).unwrap();
        assert_eq!(cert.blocks.len(), 6);
        let z = enumerate_chain_sums(&cert, 3, Budget::DEFAULT).unwrap();
        assert!(z.iter().all(|v| v % 2 == 0));
    }

    #[test]
    fn ip_surrogate_two_levels() {
        let surrogate: CentralSurrogate = "ip:1,2,4,8,16,32,64,128,256,512,1024".parse().unwrap();
        let seqs = [InputSequence::new(1, (1..=48).collect())];
        let cert = build_configuration(&seqs, m(2), &surrogate, 2, BuildOptions::default()).unwrap();
        let b1 = cert.block(1, 1).unwrap();
        let b2 = cert.block(2, 1).unwrap();
        assert_eq!((b1.values.clone(), b1.z), (vec![1, 3], 2));
        // Level 2 must avoid the binary digits of 3, 5 and 8.
        let used = 3 | 5;
        for v in b2.translated().unwrap() {
            assert!(surrogate.star_contains(v));
            assert_eq!(v & used, 0);
        }
        let report = crate::config::verify_certificate(
            &seqs,
            &cert,
            |x| surrogate.base_contains(x),
            Budget::DEFAULT,
        )
        .unwrap();
        assert!(report.is_valid());
        assert_eq!(report.chains_visited, 3);
    }

    #[test]
    fn errors() {
        let short = [InputSequence::new(1, (1..=8).collect())];
        assert!(matches!(
            build(&short, 2, "mod:3", 1),
            Err(Error::InsufficientSequenceLength { seq: 1, needed: 9, got: 8 })
        ));
        let seqs = [InputSequence::new(1, (1..=30).collect())];
        assert!(build(&seqs, 2, "mod:3", 0).is_err());
        let misnumbered = [InputSequence::new(2, (1..=30).collect())];
        assert!(build(&misnumbered, 2, "mod:3", 1).is_err());
        let ip_narrow = [InputSequence::new(1, (1..=30).collect())];
        assert!(matches!(
            build(&ip_narrow, 2, "ip:1,2;g=1", 1),
            Err(Error::TranslationNotFound { .. })
        ));
    }
}
