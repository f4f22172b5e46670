use serde::{Deserialize, Serialize};

use crate::central::CentralSurrogate;
use crate::domain::{InputSequence, Modulus};
use crate::error::{Error, Result};

pub const CERTIFICATE_VERSION: u64 = 1;

/// One block `F_{i,j}` with its translate `z_{i,j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// 1-based level `i`.
    pub level: usize,
    /// 1-based sequence id `j`.
    pub seq: usize,
    /// Positions into sequence `j`, ascending.
    pub indices: Vec<usize>,
    /// The terms at `indices`.
    pub values: Vec<u64>,
    pub z: u64,
}

impl Block {
    /// `F + z`, or `None` on overflow.
    pub fn translated(&self) -> Option<Vec<u64>> {
        self.values.iter().map(|v| v.checked_add(self.z)).collect()
    }
}

/// Length and 64-bit FNV-1a content hash of an input sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceFingerprint {
    pub id: usize,
    pub length: usize,
    pub hash: u64,
}

impl SequenceFingerprint {
    pub fn of(seq: &InputSequence) -> Self {
        SequenceFingerprint {
            id: seq.id,
            length: seq.terms.len(),
            hash: fnv1a(&seq.terms),
        }
    }
}

fn fnv1a(terms: &[u64]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    terms
        .iter()
        .flat_map(|t| t.to_le_bytes())
        .fold(OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Levels of blocks and translates realizing the zero-sum configuration.
///
/// `blocks` holds exactly one block per `(level, seq)` for a well-formed
/// certificate, ordered by level then sequence. Hand-edited or decoded
/// certificates may violate this; [`super::verify_certificate`] reports it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigCertificate {
    pub n: Modulus,
    pub m: usize,
    pub levels: usize,
    pub surrogate: CentralSurrogate,
    pub sequences: Vec<SequenceFingerprint>,
    pub blocks: Vec<Block>,
}

impl ConfigCertificate {
    pub fn block(&self, level: usize, seq: usize) -> Option<&Block> {
        self.blocks
            .iter()
            .find(|b| b.level == level && b.seq == seq)
    }

    /// Drops every level above `levels`.
    pub fn truncated(&self, levels: usize) -> ConfigCertificate {
        let levels = levels.min(self.levels);
        ConfigCertificate {
            levels,
            blocks: self
                .blocks
                .iter()
                .filter(|b| b.level <= levels)
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&CertificateJson::from(self))
            .expect("certificate serialization is infallible");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CertificateJson =
            serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))?;
        raw.try_into()
    }
}

// Wire format. Integers travel as decimal strings; fields are declared in
// sorted order so the serialized key order is canonical.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    #[serde(rename = "L")]
    levels: String,
    blocks: Vec<BlockJson>,
    m: String,
    n: String,
    sequences: Vec<SequenceJson>,
    surrogate: String,
    version: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockJson {
    indices: Vec<String>,
    level: String,
    seq: String,
    values: Vec<String>,
    z: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceJson {
    hash: String,
    id: String,
    length: String,
}

fn dec(v: impl ToString) -> String {
    v.to_string()
}

/// Strict decimal: ASCII digits only, no sign, no leading zeros.
pub(crate) fn parse_decimal(field: &str, s: &str) -> Result<u64> {
    let canonical = !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_digit())
        && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(Error::Certificate(format!(
            "field {field}: {s:?} is not a canonical decimal integer"
        )));
    }
    s.parse()
        .map_err(|_| Error::Certificate(format!("field {field}: {s} exceeds 64 bits")))
}

fn parse_usize(field: &str, s: &str) -> Result<usize> {
    usize::try_from(parse_decimal(field, s)?)
        .map_err(|_| Error::Certificate(format!("field {field}: {s} exceeds usize")))
}

impl From<&ConfigCertificate> for CertificateJson {
    fn from(c: &ConfigCertificate) -> Self {
        CertificateJson {
            levels: dec(c.levels),
            blocks: c
                .blocks
                .iter()
                .map(|b| BlockJson {
                    indices: b.indices.iter().map(dec).collect(),
                    level: dec(b.level),
                    seq: dec(b.seq),
                    values: b.values.iter().map(dec).collect(),
                    z: dec(b.z),
                })
                .collect(),
            m: dec(c.m),
            n: dec(c.n),
            sequences: c
                .sequences
                .iter()
                .map(|s| SequenceJson {
                    hash: dec(s.hash),
                    id: dec(s.id),
                    length: dec(s.length),
                })
                .collect(),
            surrogate: c.surrogate.to_string(),
            version: dec(CERTIFICATE_VERSION),
        }
    }
}

impl TryFrom<CertificateJson> for ConfigCertificate {
    type Error = Error;

    fn try_from(raw: CertificateJson) -> Result<Self> {
        let version = parse_decimal("version", &raw.version)?;
        if version != CERTIFICATE_VERSION {
            return Err(Error::Certificate(format!("unsupported version {version}")));
        }
        let n = Modulus::new(parse_decimal("n", &raw.n)?)
            .map_err(|_| Error::Certificate("n must be at least 1".into()))?;
        let blocks = raw
            .blocks
            .iter()
            .map(|b| {
                Ok(Block {
                    level: parse_usize("level", &b.level)?,
                    seq: parse_usize("seq", &b.seq)?,
                    indices: b
                        .indices
                        .iter()
                        .map(|s| parse_usize("indices", s))
                        .collect::<Result<_>>()?,
                    values: b
                        .values
                        .iter()
                        .map(|s| parse_decimal("values", s))
                        .collect::<Result<_>>()?,
                    z: parse_decimal("z", &b.z)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let sequences = raw
            .sequences
            .iter()
            .map(|s| {
                Ok(SequenceFingerprint {
                    id: parse_usize("id", &s.id)?,
                    length: parse_usize("length", &s.length)?,
                    hash: parse_decimal("hash", &s.hash)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConfigCertificate {
            n,
            m: parse_usize("m", &raw.m)?,
            levels: parse_usize("L", &raw.levels)?,
            surrogate: raw
                .surrogate
                .parse()
                .map_err(|e: Error| Error::Certificate(e.to_string()))?,
            sequences,
            blocks,
        })
    }
}
