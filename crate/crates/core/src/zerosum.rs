//! Zero-sum subset solvers over `Z/nZ`: exhaustive and dynamic-programming
//! searches for the lexicographically smallest zero-sum `n`-subset, the
//! Erdős–Ginzburg–Ziv solver and its multiplicative composition, the
//! colored-partition corollary, and the Davenport constant of a cyclic group.

use std::fmt;

use crate::domain::{Budget, Coloring, Modulus, ZeroSumWitness};
use crate::error::{Error, Result};

/// Color class picked by [`partition_zero_sum`] together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    pub color: usize,
    /// Positions into the full input list, all carrying `color`.
    pub witness: ZeroSumWitness,
}

/// Size precondition used by [`partition_zero_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// `(2n - 1) r` values.
    Linear,
    /// `r n^2` values.
    Quadratic,
}

impl Threshold {
    pub fn required(self, n: Modulus, r: usize) -> Option<usize> {
        match self {
            Threshold::Linear => n.egz_pool().checked_mul(r),
            Threshold::Quadratic => n.size().checked_mul(n.size())?.checked_mul(r),
        }
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exhaustive search over all `C(len, n)` index sets in lexicographic order.
///
/// Refuses to start if the number of subsets exceeds `budget`.
pub fn find_zero_sum_subset_bruteforce(
    values: &[u64],
    n: Modulus,
    budget: Budget,
) -> Result<Option<ZeroSumWitness>> {
    let k = n.size();
    if k > values.len() {
        return Ok(None);
    }
    budget.check("brute-force subset enumeration", binomial(values.len(), k))?;

    let residues: Vec<u64> = values.iter().map(|&v| n.reduce(v)).collect();
    let add = |a: u64, b: u64| ((a as u128 + b as u128) % n.get() as u128) as u64;

    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let sum = combo.iter().fold(0, |acc, &i| add(acc, residues[i]));
        if sum == 0 {
            return Ok(Some(ZeroSumWitness::new(combo, n)));
        }
        // Advance to the next combination in lexicographic order.
        let len = values.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            if combo[pos] < len - k + pos {
                break;
            }
        }
        combo[pos] += 1;
        for q in pos + 1..k {
            combo[q] = combo[q - 1] + 1;
        }
    }
}

/// Per-suffix reachability table: `reach(i, c)` is the set of residues
/// attainable as the sum of exactly `c` values chosen from positions `i..`.
struct SuffixReach {
    counts: usize,
    words: usize,
    data: Vec<u64>,
}

impl SuffixReach {
    fn new(len: usize, counts: usize, residues: usize) -> Self {
        let words = residues.div_ceil(64);
        SuffixReach {
            counts,
            words,
            data: vec![0; (len + 1) * counts * words],
        }
    }

    #[inline]
    fn row(&self, i: usize, c: usize) -> usize {
        (i * self.counts + c) * self.words
    }

    #[inline]
    fn contains(&self, i: usize, c: usize, r: u64) -> bool {
        let base = self.row(i, c);
        self.data[base + (r / 64) as usize] >> (r % 64) & 1 == 1
    }

    #[inline]
    fn insert(&mut self, i: usize, c: usize, r: u64) {
        let base = self.row(i, c);
        self.data[base + (r / 64) as usize] |= 1 << (r % 64);
    }
}

/// Dynamic program over `(position, count chosen, residue)` that returns the
/// same witness as [`find_zero_sum_subset_bruteforce`] in `O(len * n^2)` time.
///
/// The table has `(len + 1) (n + 1) n` bits; the search refuses to allocate
/// more than `budget` of them.
pub fn find_zero_sum_subset_dp(
    values: &[u64],
    n: Modulus,
    budget: Budget,
) -> Result<Option<ZeroSumWitness>> {
    let k = n.size();
    let len = values.len();
    if k > len {
        return Ok(None);
    }
    let modulus = n.get();
    let cells = (len as u128 + 1) * (k as u128 + 1) * k as u128;
    budget.check("zero-sum dynamic program", cells)?;

    let residues: Vec<u64> = values.iter().map(|&v| n.reduce(v)).collect();
    let shift = |r: u64, v: u64| ((r as u128 + v as u128) % modulus as u128) as u64;

    let mut reach = SuffixReach::new(len, k + 1, k);
    reach.insert(len, 0, 0);
    for i in (0..len).rev() {
        let v = residues[i];
        // Skipping position i.
        let (lo, hi) = (reach.row(i, 0), reach.row(i + 1, 0));
        let span = reach.counts * reach.words;
        reach.data.copy_within(hi..hi + span, lo);
        // Taking position i: never need more than len - i values from here.
        for c in 1..=k.min(len - i) {
            for word in 0..reach.words {
                let mut bits = reach.data[reach.row(i + 1, c - 1) + word];
                while bits != 0 {
                    let r = word as u64 * 64 + bits.trailing_zeros() as u64;
                    bits &= bits - 1;
                    reach.insert(i, c, shift(r, v));
                }
            }
        }
    }

    if !reach.contains(0, k, 0) {
        return Ok(None);
    }
    // Greedy reconstruction: take the earliest position that keeps the
    // remaining target attainable, which yields the lexicographic minimum.
    let mut picked = Vec::with_capacity(k);
    let mut need = k;
    let mut target = 0u64;
    for (i, &v) in residues.iter().enumerate() {
        if need == 0 {
            break;
        }
        let rest = ((target as u128 + modulus as u128 - v as u128) % modulus as u128) as u64;
        if reach.contains(i + 1, need - 1, rest) {
            picked.push(i);
            need -= 1;
            target = rest;
        }
    }
    debug_assert_eq!(need, 0);
    Ok(Some(ZeroSumWitness::new(picked, n)))
}

/// Returns a zero-sum `n`-subset of any `2n - 1` or more values.
pub fn egz_solve(values: &[u64], n: Modulus, budget: Budget) -> Result<ZeroSumWitness> {
    let needed = n.egz_pool();
    if values.len() < needed {
        return Err(Error::InsufficientElements {
            needed,
            got: values.len(),
        });
    }
    Ok(find_zero_sum_subset_dp(values, n, budget)?
        .expect("every 2n-1 integers contain n summing to 0 mod n"))
}

/// Builds a zero-sum `mn`-subset out of `2mn - 1` values from solutions for
/// the two factors.
///
/// Groups of `m` with group-sum divisible by `m` are peeled off the lowest
/// unused `2m - 1` positions, `2n - 1` times; `egz_solve` modulo `n` on the
/// group-sum quotients then picks `n` of the groups.
pub fn egz_compose(
    values: &[u64],
    m: Modulus,
    n: Modulus,
    budget: Budget,
) -> Result<ZeroSumWitness> {
    let mn = m
        .get()
        .checked_mul(n.get())
        .ok_or(Error::Overflow("multiplying moduli"))?;
    let product = Modulus::new(mn)?;
    let needed = product.egz_pool();
    if values.len() < needed {
        return Err(Error::InsufficientElements {
            needed,
            got: values.len(),
        });
    }

    let mut unused: Vec<usize> = (0..values.len()).collect();
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(n.egz_pool());
    let mut quotients = Vec::with_capacity(n.egz_pool());
    for _ in 0..n.egz_pool() {
        let window = &unused[..m.egz_pool()];
        let pool: Vec<u64> = window.iter().map(|&i| values[i]).collect();
        let local = egz_solve(&pool, m, budget)?;
        let group: Vec<usize> = local.indices.iter().map(|&p| window[p]).collect();
        let sum = group
            .iter()
            .fold(0u128, |acc, &i| (acc + u128::from(values[i])) % u128::from(mn));
        quotients.push((sum / u128::from(m.get())) as u64);
        unused.retain(|i| !group.contains(i));
        groups.push(group);
    }

    let chosen = egz_solve(&quotients, n, budget)?;
    let mut indices: Vec<usize> = chosen
        .indices
        .iter()
        .flat_map(|&g| groups[g].iter().copied())
        .collect();
    indices.sort_unstable();
    Ok(ZeroSumWitness::new(indices, product))
}

/// Pigeonholes a color class of at least `2n - 1` values and solves EGZ
/// inside it. The lowest such color wins.
pub fn partition_zero_sum(
    values: &[u64],
    coloring: &Coloring,
    n: Modulus,
    threshold: Threshold,
    budget: Budget,
) -> Result<PartitionResult> {
    if coloring.len() != values.len() {
        return Err(Error::ColoringLength {
            colored: coloring.len(),
            values: values.len(),
        });
    }
    let needed = threshold.required(n, coloring.r()).unwrap_or(usize::MAX);
    if values.len() < needed {
        return Err(Error::InsufficientElements {
            needed,
            got: values.len(),
        });
    }

    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); coloring.r() + 1];
    for (pos, &c) in coloring.colors().iter().enumerate() {
        classes[c].push(pos);
    }
    let (color, class) = classes
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, class)| class.len() >= n.egz_pool())
        .expect("pigeonhole: some color class holds 2n-1 values");

    let pool: Vec<u64> = class.iter().map(|&p| values[p]).collect();
    let local = egz_solve(&pool, n, budget)?;
    let indices = local.indices.iter().map(|&p| class[p]).collect();
    Ok(PartitionResult {
        color,
        witness: ZeroSumWitness::new(indices, n),
    })
}

/// Least `d` such that every length-`d` multiset of residues modulo `n`
/// has a nonempty zero-sum sub-multiset.
///
/// Computed as one more than the longest zero-sum-free multiset, found by
/// depth-first search over nondecreasing residue sequences. `budget` bounds
/// the number of search nodes.
pub fn davenport_constant(n: Modulus, budget: Budget) -> Result<u64> {
    let size = n.size();
    let mut visited: u64 = 0;
    let sums = vec![false; size];
    let longest = zero_sum_free_depth(n, 1, &sums, &mut visited, budget)?;
    Ok(longest as u64 + 1)
}

fn zero_sum_free_depth(
    n: Modulus,
    start: u64,
    sums: &[bool],
    visited: &mut u64,
    budget: Budget,
) -> Result<usize> {
    let modulus = n.get();
    let mut best = 0;
    for a in start..modulus {
        *visited += 1;
        budget.check("davenport search", u128::from(*visited))?;
        if sums[(modulus - a) as usize] {
            continue; // a completes an existing subset sum to zero
        }
        let mut next = sums.to_vec();
        next[a as usize] = true;
        for (r, &hit) in sums.iter().enumerate() {
            if hit {
                next[((r as u64 + a) % modulus) as usize] = true;
            }
        }
        let depth = 1 + zero_sum_free_depth(n, a, &next, visited, budget)?;
        best = best.max(depth);
    }
    Ok(best)
}

/// First clause of a witness that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessViolation {
    ModulusMismatch { witness: u64, expected: u64 },
    IndexOutOfRange { index: usize, len: usize },
    DuplicateIndex { index: usize },
    WrongSize { expected: usize, actual: usize },
    NonZeroSum { residue: u64 },
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessViolation::ModulusMismatch { witness, expected } => {
                write!(f, "witness modulus {witness} differs from {expected}")
            }
            WitnessViolation::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for {len} values")
            }
            WitnessViolation::DuplicateIndex { index } => write!(f, "duplicate index {index}"),
            WitnessViolation::WrongSize { expected, actual } => {
                write!(f, "witness has {actual} indices, expected {expected}")
            }
            WitnessViolation::NonZeroSum { residue } => {
                write!(f, "sum is {residue} modulo n, not 0")
            }
        }
    }
}

/// Checks a witness clause by clause: modulus, index range, distinctness,
/// size, and the zero-sum congruence.
pub fn verify_witness(
    values: &[u64],
    witness: &ZeroSumWitness,
    n: Modulus,
) -> Result<(), WitnessViolation> {
    if witness.modulus != n {
        return Err(WitnessViolation::ModulusMismatch {
            witness: witness.modulus.get(),
            expected: n.get(),
        });
    }
    let mut seen = std::collections::HashSet::with_capacity(witness.indices.len());
    for &index in &witness.indices {
        if index >= values.len() {
            return Err(WitnessViolation::IndexOutOfRange {
                index,
                len: values.len(),
            });
        }
        if !seen.insert(index) {
            return Err(WitnessViolation::DuplicateIndex { index });
        }
    }
    if witness.indices.len() as u128 != u128::from(n.get()) {
        return Err(WitnessViolation::WrongSize {
            expected: n.size(),
            actual: witness.indices.len(),
        });
    }
    let residue = witness
        .indices
        .iter()
        .fold(0u128, |acc, &i| (acc + u128::from(values[i])) % u128::from(n.get()));
    if residue != 0 {
        return Err(WitnessViolation::NonZeroSum {
            residue: residue as u64,
        });
    }
    Ok(())
}
