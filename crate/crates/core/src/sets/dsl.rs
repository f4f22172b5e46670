//! Surface syntax for [`SetDescription`].
//!
//! ```text
//! expr    := term ('|' term)*
//! term    := factor ('&' factor)*
//! factor  := '!' factor | '(' expr ')' | atom
//! atom    := INT 'N' ('+' (INT | '{' ints '}'))?     residue classes, "2N+1"
//!          | 'N'                                     all naturals
//!          | 'I' INT                                 interval family, "I2"
//!          | '{' ints? '}'                           explicit finite set
//! ints    := INT (',' INT)*
//! ```
//!
//! Whitespace is insignificant. `Display` prints a form that parses back to
//! the same description.

use std::fmt;

use super::SetDescription;
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 64;

pub fn parse_set(input: &str) -> Result<SetDescription> {
    let mut parser = Parser {
        src: input.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let desc = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(desc)
}

impl std::str::FromStr for SetDescription {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_set(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::parse(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn nest(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(self.error("expression nested too deeply"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<SetDescription> {
        let mut parts = vec![self.term()?];
        while self.eat(b'|') {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            SetDescription::Union(parts)
        })
    }

    fn term(&mut self) -> Result<SetDescription> {
        let mut parts = vec![self.factor()?];
        while self.eat(b'&') {
            parts.push(self.factor()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            SetDescription::Intersection(parts)
        })
    }

    fn factor(&mut self) -> Result<SetDescription> {
        self.nest()?;
        let out = match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                SetDescription::Complement(Box::new(self.factor()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                inner
            }
            _ => self.atom()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn atom(&mut self) -> Result<SetDescription> {
        let start = self.pos;
        match self.peek() {
            Some(b'{') => Ok(SetDescription::explicit(self.braced_ints()?)),
            Some(b'N') => {
                self.pos += 1;
                SetDescription::modular(1, [0])
            }
            Some(b'I') => {
                self.pos += 1;
                let base = self.int()?;
                SetDescription::interval_family(base).map_err(|e| relocate(e, start))
            }
            Some(c) if c.is_ascii_digit() => {
                let modulus = self.int()?;
                self.expect(b'N')?;
                let residues = if self.eat(b'+') {
                    if self.peek() == Some(b'{') {
                        self.braced_ints()?
                    } else {
                        vec![self.int()?]
                    }
                } else {
                    vec![0]
                };
                SetDescription::modular(modulus, residues).map_err(|e| relocate(e, start))
            }
            Some(_) => Err(self.error("expected a set atom")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn braced_ints(&mut self) -> Result<Vec<u64>> {
        self.expect(b'{')?;
        let mut out = Vec::new();
        if self.eat(b'}') {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat(b'}') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        // Only ASCII digits were consumed, so the slice is valid UTF-8.
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, "integer exceeds 64-bit range"))
    }
}

fn relocate(err: Error, offset: usize) -> Error {
    match err {
        Error::Parse { .. } => err,
        other => Error::parse(offset, other.to_string()),
    }
}

fn write_ints(f: &mut fmt::Formatter<'_>, ints: impl Iterator<Item = u64>) -> fmt::Result {
    f.write_str("{")?;
    for (i, v) in ints.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("}")
}

fn write_joined(f: &mut fmt::Formatter<'_>, parts: &[SetDescription], op: &str) -> fmt::Result {
    f.write_str("(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str(")")
}

impl fmt::Display for SetDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetDescription::Modular { modulus, residues } => {
                write!(f, "{modulus}N+")?;
                if residues.len() == 1 {
                    write!(f, "{}", residues.iter().next().unwrap())
                } else {
                    write_ints(f, residues.iter().copied())
                }
            }
            SetDescription::IntervalFamily { base } => write!(f, "I{base}"),
            SetDescription::Explicit(members) => write_ints(f, members.iter().copied()),
            SetDescription::Union(parts) => write_joined(f, parts, "|"),
            SetDescription::Intersection(parts) => write_joined(f, parts, "&"),
            SetDescription::Complement(inner) => write!(f, "!{inner}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn example_descriptions() {
        assert_eq!(parse_set("2N+0").unwrap(), SetDescription::modular(2, [0]).unwrap());
        assert_eq!(parse_set("2N+1").unwrap(), SetDescription::modular(2, [1]).unwrap());
        assert_eq!(parse_set("I2").unwrap(), SetDescription::interval_family(2).unwrap());
        assert_eq!(
            parse_set("{10, 11,12}").unwrap(),
            SetDescription::explicit([10, 11, 12])
        );
        assert_eq!(
            parse_set("2N+0 & I2").unwrap(),
            SetDescription::Intersection(vec![
                SetDescription::modular(2, [0]).unwrap(),
                SetDescription::interval_family(2).unwrap(),
            ])
        );
    }

    #[test]
    fn precedence() {
        // '!' binds tighter than '&', which binds tighter than '|'.
        let d = parse_set("!2N+0 & 3N | {5}").unwrap();
        let expected = SetDescription::Union(vec![
            SetDescription::Intersection(vec![
                SetDescription::Complement(Box::new(SetDescription::modular(2, [0]).unwrap())),
                SetDescription::modular(3, [0]).unwrap(),
            ]),
            SetDescription::explicit([5]),
        ]);
        assert_eq!(d, expected);
        assert_eq!(parse_set("5N+{1,4}").unwrap(), SetDescription::modular(5, [1, 4]).unwrap());
        assert_eq!(parse_set("N").unwrap(), SetDescription::modular(1, [0]).unwrap());
        assert_eq!(parse_set("{}").unwrap(), SetDescription::explicit([]));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "", "2N+2", "0N", "I1", "I", "2N+", "{1,}", "{1", "(2N", "2N+0 &", "x", "2N+0)",
            "99999999999999999999N", "2N+{}", "&", "!",
        ] {
            assert!(parse_set(bad).is_err(), "accepted {bad:?}");
        }
        let deep = "(".repeat(500) + "N" + &")".repeat(500);
        assert!(parse_set(&deep).is_err());
        let bangs = "!".repeat(500) + "N";
        assert!(parse_set(&bangs).is_err());
    }

    fn arb_desc() -> impl Strategy<Value = SetDescription> {
        let leaf = prop_oneof![
            (1u64..12, proptest::collection::btree_set(0u64..12, 1..4)).prop_filter_map(
                "residues below modulus",
                |(d, r)| SetDescription::modular(d, r).ok()
            ),
            (2u64..5).prop_map(|b| SetDescription::interval_family(b).unwrap()),
            proptest::collection::btree_set(1u64..60, 0..5).prop_map(SetDescription::Explicit),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 2..4).prop_map(SetDescription::Union),
                proptest::collection::vec(inner.clone(), 2..4).prop_map(SetDescription::Intersection),
                inner.prop_map(|d| SetDescription::Complement(Box::new(d))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(desc in arb_desc()) {
            let printed = desc.to_string();
            prop_assert_eq!(parse_set(&printed).unwrap(), desc);
        }

        #[test]
        fn parser_never_panics(s in "[0-9NI{}(),&|! +]{0,40}") {
            let _ = parse_set(&s);
        }
    }
}
