//! Shared domain types: moduli, input sequences, witnesses, colorings and
//! search budgets.

use std::fmt;

use crate::error::{Error, Result};

/// Modulus of a zero-sum condition. Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            Err(Error::ZeroModulus)
        } else {
            Ok(Modulus(n))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// The modulus as a count of elements. Saturates on 32-bit targets.
    #[inline]
    pub fn size(self) -> usize {
        usize::try_from(self.0).unwrap_or(usize::MAX)
    }

    /// `2n - 1`, the EGZ pool size, saturating.
    pub fn egz_pool(self) -> usize {
        self.size().saturating_mul(2).saturating_sub(1)
    }

    #[inline]
    pub fn reduce(self, value: u64) -> u64 {
        value % self.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Upper bound on the number of elementary steps an exhaustive search may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(100_000_000);

    pub fn check(self, what: &'static str, needed: u128) -> Result<()> {
        if needed > u128::from(self.0) {
            Err(Error::BudgetExceeded {
                what,
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// One of the `m` input sequences, identified by its 1-based index `id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSequence {
    pub id: usize,
    pub terms: Vec<u64>,
}

impl InputSequence {
    pub fn new(id: usize, terms: Vec<u64>) -> Self {
        InputSequence { id, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Positions into an input list whose values sum to zero modulo `modulus`.
///
/// Positions are kept in the order given; solvers always produce them sorted
/// ascending. A witness built by hand may be malformed (duplicates, wrong
/// size) and is only trusted after [`crate::zerosum::verify_witness`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZeroSumWitness {
    pub indices: Vec<usize>,
    pub modulus: Modulus,
}

impl ZeroSumWitness {
    pub fn new(indices: Vec<usize>, modulus: Modulus) -> Self {
        ZeroSumWitness { indices, modulus }
    }

    pub fn values(&self, values: &[u64]) -> Vec<u64> {
        self.indices.iter().map(|&i| values[i]).collect()
    }
}

/// An `r`-coloring of the positions of an input list, colors in `1..=r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    r: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, r: usize) -> Result<Self> {
        if let Some((position, &color)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > r)
        {
            return Err(Error::ColorOutOfRange { position, color, r });
        }
        Ok(Coloring { colors, r })
    }

    /// Colors positions `0, 1, 2, ...` with `1, 2, ..., r, 1, 2, ...`.
    pub fn round_robin(len: usize, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("coloring needs at least one color".into()));
        }
        Ok(Coloring {
            colors: (0..len).map(|i| i % r + 1).collect(),
            r,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, position: usize) -> usize {
        self.colors[position]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }
}

/// Reduces every value to its least nonnegative residue modulo `n`.
pub fn normalize_residues<T>(values: &[T], n: Modulus) -> Vec<u64>
where
    T: Copy + Into<i128>,
{
    let n = i128::from(n.get());
    values
        .iter()
        .map(|&v| v.into().rem_euclid(n) as u64)
        .collect()
}

/// Maximum number of terms accepted by [`parse_values`].
pub const MAX_TERMS: usize = 1_000_000;

/// Parses a list of nonnegative integers separated by commas and/or
/// whitespace. Negative numbers are rejected rather than reduced.
pub fn parse_values(input: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    let mut expect_value = false;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b == b',' {
            if expect_value || out.is_empty() {
                return Err(Error::parse(i, "empty entry in value list"));
            }
            expect_value = true;
            i += 1;
        } else if b.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let value: u64 = input[start..i]
                .parse()
                .map_err(|_| Error::parse(start, "value exceeds 64-bit range"))?;
            if out.len() == MAX_TERMS {
                return Err(Error::parse(start, format!("more than {MAX_TERMS} terms")));
            }
            out.push(value);
            expect_value = false;
        } else if b == b'-' {
            return Err(Error::parse(i, "negative values are not allowed"));
        } else {
            let ch = input[i..].chars().next().unwrap_or('?');
            return Err(Error::parse(i, format!("unexpected character {ch:?}")));
        }
    }
    if expect_value {
        return Err(Error::parse(input.len(), "trailing comma in value list"));
    }
    Ok(out)
}
