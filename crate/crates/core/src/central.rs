//! Computable stand-ins for a central set `B` and its star set `B*`.
//!
//! Two surrogates are provided. `mod:d` is the subsemigroup `dN`, which is
//! closed under addition and absorbs shifts by its own elements, so every
//! step of the block-and-translate construction is total. `ip:a1,...,ak` is
//! the finite-sums set of generators with pairwise disjoint binary supports;
//! sums stay inside it only while supports stay disjoint.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default width of the translation set `G = {1, ..., g}` for `ip:` surrogates.
pub const DEFAULT_IP_SPAN: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CentralSurrogate {
    /// `B = B* = dN`, translation set `{1, ..., d}`.
    Modulus { d: u64 },
    /// `B = B* =` nonempty subset sums of `generators`, translation set
    /// `{1, ..., span}`.
    Ip { generators: Vec<u64>, span: u64 },
}

impl CentralSurrogate {
    pub fn modulus(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSurrogate("mod: modulus must be at least 1".into()));
        }
        Ok(CentralSurrogate::Modulus { d })
    }

    pub fn ip(generators: Vec<u64>, span: u64) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidSurrogate("ip: needs at least one generator".into()));
        }
        if span == 0 {
            return Err(Error::InvalidSurrogate("ip: translation span must be at least 1".into()));
        }
        let mut seen = 0u64;
        for pair in generators.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::InvalidSurrogate(
                    "ip: generators must be strictly increasing".into(),
                ));
            }
        }
        for &g in &generators {
            if g == 0 {
                return Err(Error::InvalidSurrogate("ip: generators must be positive".into()));
            }
            if seen & g != 0 {
                return Err(Error::InvalidSurrogate(format!(
                    "ip: generator {g} shares binary digits with an earlier generator"
                )));
            }
            seen |= g;
        }
        Ok(CentralSurrogate::Ip { generators, span })
    }

    /// The syndeticity translation set `G`, ascending.
    pub fn translations(&self) -> Vec<u64> {
        match self {
            CentralSurrogate::Modulus { d } => (1..=*d).collect(),
            CentralSurrogate::Ip { span, .. } => (1..=*span).collect(),
        }
    }

    pub fn translation_count(&self) -> usize {
        let g = match self {
            CentralSurrogate::Modulus { d } => *d,
            CentralSurrogate::Ip { span, .. } => *span,
        };
        usize::try_from(g).unwrap_or(usize::MAX)
    }

    /// Membership in `B`. Both surrogates use `B = B*`.
    pub fn base_contains(&self, x: u64) -> bool {
        self.star_contains(x)
    }

    /// Membership in the star set `B*`.
    pub fn star_contains(&self, x: u64) -> bool {
        if x == 0 {
            return false;
        }
        match self {
            CentralSurrogate::Modulus { d } => x.is_multiple_of(*d),
            CentralSurrogate::Ip { generators, .. } => is_generator_sum(generators, x),
        }
    }

    /// Membership predicate for `B* ∩ ⋂_{z ∈ Z} (B* - z)`.
    ///
    /// For `dN` this is `dN` itself. For an IP surrogate it is the set of
    /// generator sums whose support avoids every generator used by some
    /// `z ∈ Z`, which is contained in the literal intersection.
    pub fn core_after_shifts<'a>(
        &self,
        shifts: impl IntoIterator<Item = &'a u64>,
    ) -> Result<CorePredicate> {
        let mut forbidden = 0u64;
        for &z in shifts {
            if !self.star_contains(z) {
                return Err(Error::ShiftOutsideStar { z });
            }
            forbidden |= z;
        }
        Ok(match self {
            CentralSurrogate::Modulus { d } => CorePredicate::Multiples { d: *d },
            CentralSurrogate::Ip { generators, .. } => CorePredicate::FreshSupport {
                generators: generators.clone(),
                forbidden,
            },
        })
    }

    /// Least `x ∈ [1, bound]` such that every `e ∈ E` has a `t ∈ G` with
    /// `e + x + t` satisfying `core`; `t` is the least such translation.
    pub fn translate_into_core(
        &self,
        terms: &[u64],
        core: &CorePredicate,
        bound: u64,
    ) -> Result<Translation> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("cannot translate an empty set".into()));
        }
        let translations = self.translations();
        let pick = |x: u64| -> Option<Vec<u64>> {
            terms
                .iter()
                .map(|&e| {
                    let ex = e.checked_add(x)?;
                    if let CorePredicate::Multiples { d } = core {
                        if translations.len() as u64 == *d {
                            let t = d - ex % d;
                            return ex.checked_add(t).map(|_| t);
                        }
                    }
                    translations
                        .iter()
                        .copied()
                        .find(|&t| ex.checked_add(t).is_some_and(|s| core.contains(s)))
                })
                .collect()
        };
        (1..=bound)
            .find_map(|x| pick(x).map(|assignment| Translation { x, assignment }))
            .ok_or(Error::TranslationNotFound { bound })
    }
}

fn is_generator_sum(generators: &[u64], x: u64) -> bool {
    let mut covered = 0u64;
    for &g in generators {
        let part = x & g;
        if part == g {
            covered |= g;
        } else if part != 0 {
            return false;
        }
    }
    covered == x
}

/// Result of [`CentralSurrogate::translate_into_core`]: the shift `x` and,
/// for each input term in order, its translation `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub x: u64,
    pub assignment: Vec<u64>,
}

/// Membership predicate for the shrunken core `C` used at each level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorePredicate {
    Multiples { d: u64 },
    FreshSupport { generators: Vec<u64>, forbidden: u64 },
}

impl CorePredicate {
    pub fn contains(&self, x: u64) -> bool {
        if x == 0 {
            return false;
        }
        match self {
            CorePredicate::Multiples { d } => x.is_multiple_of(*d),
            CorePredicate::FreshSupport {
                generators,
                forbidden,
            } => x & forbidden == 0 && is_generator_sum(generators, x),
        }
    }
}

/// Parses `mod:d` or `ip:a1,a2,...` with an optional `;g=span` suffix.
impl FromStr for CentralSurrogate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidSurrogate(format!("{msg} in {s:?}"));
        let num = |t: &str| -> Result<u64> {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("expected a nonnegative integer"));
            }
            t.parse().map_err(|_| bad("integer exceeds 64-bit range"))
        };
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("mod:") {
            CentralSurrogate::modulus(num(rest)?)
        } else if let Some(rest) = s.strip_prefix("ip:") {
            let (gens, span) = match rest.split_once(';') {
                Some((gens, opt)) => {
                    let span = opt
                        .trim()
                        .strip_prefix("g=")
                        .ok_or_else(|| bad("expected ';g=<span>'"))?;
                    (gens, num(span)?)
                }
                None => (rest, DEFAULT_IP_SPAN),
            };
            let generators = gens.split(',').map(num).collect::<Result<Vec<_>>>()?;
            CentralSurrogate::ip(generators, span)
        } else {
            Err(bad("expected 'mod:' or 'ip:' prefix"))
        }
    }
}

impl fmt::Display for CentralSurrogate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CentralSurrogate::Modulus { d } => write!(f, "mod:{d}"),
            CentralSurrogate::Ip { generators, span } => {
                f.write_str("ip:")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{g}")?;
                }
                if *span != DEFAULT_IP_SPAN {
                    write!(f, ";g={span}")?;
                }
                Ok(())
            }
        }
    }
}

/// Convenience for callers holding a set of shifts.
pub fn core_after_shifts(
    surrogate: &CentralSurrogate,
    shifts: &BTreeSet<u64>,
) -> Result<CorePredicate> {
    surrogate.core_after_shifts(shifts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(spec: &str) -> CentralSurrogate {
        spec.parse().unwrap()
    }

    #[test]
    fn star_membership_examples() {
        assert!(s("mod:3").star_contains(9));
        assert!(!s("mod:3").star_contains(10));
        assert!(s("ip:1,2,4,8").star_contains(13));
        assert!(!s("ip:1,2,4,8").star_contains(16));
        assert!(!s("ip:3,12").star_contains(1));
        assert!(s("ip:3,12").star_contains(15));
        assert!(!s("mod:1").star_contains(0));
    }

    #[test]
    fn modulus_closed_under_addition() {
        for d in 1..=5u64 {
            let b = CentralSurrogate::modulus(d).unwrap();
            let members: Vec<u64> = (1..=10_000).filter(|&x| b.star_contains(x)).collect();
            for &x in members.iter().take(200) {
                for &y in &members {
                    if x + y > 10_000 {
                        break;
                    }
                    assert!(b.star_contains(x + y));
                }
            }
        }
    }

    #[test]
    fn core_examples() {
        let three = s("mod:3");
        let core = three.core_after_shifts(&[3, 6]).unwrap();
        let empty = s("mod:2").core_after_shifts(&[]).unwrap();
        for x in 1..=10_000 {
            assert_eq!(core.contains(x), three.star_contains(x));
            assert_eq!(empty.contains(x), x % 2 == 0);
        }
        assert_eq!(
            three.core_after_shifts(&[4]),
            Err(Error::ShiftOutsideStar { z: 4 })
        );

        let ip = s("ip:1,2,4,8");
        let core = ip.core_after_shifts(&[3]).unwrap();
        // Subset sums of {4, 8}: enumerated by hand.
        let hits: Vec<u64> = (1..=15).filter(|&x| core.contains(x)).collect();
        assert_eq!(hits, vec![4, 8, 12]);
        // Every hit is in the literal intersection B* ∩ (B* - 3).
        assert!(hits.iter().all(|&x| ip.star_contains(x) && ip.star_contains(x + 3)));
    }

    #[test]
    fn core_with_empty_and_absorbed_shifts_for_modulus() {
        for d in 1..=4u64 {
            let b = CentralSurrogate::modulus(d).unwrap();
            let zs: Vec<u64> = (1..=5).map(|k| k * d).collect();
            let core = b.core_after_shifts(&zs).unwrap();
            let bare = b.core_after_shifts(&[]).unwrap();
            for x in 1..=10_000 {
                assert_eq!(core.contains(x), b.star_contains(x));
                assert_eq!(bare.contains(x), b.star_contains(x));
            }
        }
    }

    #[test]
    fn translate_examples() {
        let three = s("mod:3");
        let core = three.core_after_shifts(&[]).unwrap();
        let tr = three.translate_into_core(&[1, 2, 3], &core, 10).unwrap();
        assert_eq!(tr, Translation { x: 1, assignment: vec![1, 3, 2] });

        let one = s("mod:1");
        let core = one.core_after_shifts(&[]).unwrap();
        assert_eq!(
            one.translate_into_core(&[5], &core, 1).unwrap(),
            Translation { x: 1, assignment: vec![1] }
        );

        let ip = s("ip:1,2,4,8,16");
        let core = ip.core_after_shifts(&[]).unwrap();
        let tr = ip.translate_into_core(&[3], &core, 16).unwrap();
        assert!(ip.star_contains(3 + tr.x + tr.assignment[0]));
    }

    #[test]
    fn translate_generic_matches_closed_form() {
        // The closed-form path for dN must agree with a plain scan over G.
        for d in 1..=6u64 {
            let b = CentralSurrogate::modulus(d).unwrap();
            let core = b.core_after_shifts(&[]).unwrap();
            let terms: Vec<u64> = (1..=20).collect();
            let tr = b.translate_into_core(&terms, &core, 5).unwrap();
            assert_eq!(tr.x, 1);
            for (&e, &t) in terms.iter().zip(&tr.assignment) {
                let scanned = (1..=d).find(|&t| (e + 1 + t) % d == 0).unwrap();
                assert_eq!(t, scanned);
            }
        }
    }

    #[test]
    fn translate_not_found() {
        let ip = s("ip:1,2;g=1");
        let core = ip.core_after_shifts(&[]).unwrap();
        assert_eq!(
            ip.translate_into_core(&[1, 2, 3], &core, 4),
            Err(Error::TranslationNotFound { bound: 4 })
        );
    }

    #[test]
    fn spec_strings() {
        assert_eq!(s("mod:3"), CentralSurrogate::Modulus { d: 3 });
        assert_eq!(
            s("ip:1,2,4"),
            CentralSurrogate::Ip { generators: vec![1, 2, 4], span: DEFAULT_IP_SPAN }
        );
        assert_eq!(s("ip:1,2,4;g=16").translation_count(), 16);
        for text in ["mod:3", "ip:1,2,4", "ip:1,6;g=5"] {
            assert_eq!(s(text).to_string(), text);
        }
        for bad in ["mod:0", "mod:", "mod:-1", "ip:", "ip:1,1", "ip:2,1", "ip:1,3", "ip:0",
                    "ip:1;g=0", "ip:1;x=2", "foo:1", "mod:99999999999999999999"] {
            assert!(bad.parse::<CentralSurrogate>().is_err(), "accepted {bad}");
        }
    }
}
