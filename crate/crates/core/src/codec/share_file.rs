//! The on-disk share format.
//!
//! UTF-8 text, LF line endings, every line terminated. Decimals are ASCII
//! without signs or leading zeros.
//!
//! ```text
//! RSS1
//! scheme=recursive
//! p=<dec>
//! k=<dec>
//! n=<dec>
//! x=<dec>
//! chunks=<dec>
//! msglen=<dec>
//! auxlen=<dec>
//! digest=<none|sha256>
//! ---
//! <y>            (exactly `chunks` lines)
//! ```
//!
//! The xor2 variant carries `levels=<dec>` and `index=<1|2>` after the scheme
//! line, then `---` and one lowercase hex line holding the share bits.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{is_prime, PrimeModulus};
use crate::recursive::DealingParams;
use crate::xor2::BitString;

use super::chunking::{chunk_count, CHUNK_BYTES};
use super::hidden::channel_capacity;

pub const MAGIC: &str = "RSS1";
const SEPARATOR: &str = "---";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("not a share file (bad magic line)")]
    BadMagic,
    #[error("unsupported share format version {0:?}")]
    UnknownVersion(String),
    #[error("share file is not valid UTF-8")]
    Encoding,
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("line {line}: expected {expected}")]
    UnexpectedLine { line: usize, expected: String },
    #[error("line {line}: {value:?} is not a canonical decimal")]
    NonCanonicalDecimal { line: usize, value: String },
    #[error("expected {expected} lines, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("inconsistent header: {0}")]
    InconsistentHeader(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigestAlgorithm {
    None,
    Sha256,
}

impl DigestAlgorithm {
    /// Bytes the digest occupies at the front of the hidden channel.
    pub fn output_len(self) -> usize {
        match self {
            DigestAlgorithm::None => 0,
            DigestAlgorithm::Sha256 => 32,
        }
    }

    pub fn digest(self, data: &[u8]) -> Vec<u8> {
        use sha2::{Digest, Sha256};
        match self {
            DigestAlgorithm::None => Vec::new(),
            DigestAlgorithm::Sha256 => Sha256::digest(data).to_vec(),
        }
    }
}

impl fmt::Display for DigestAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DigestAlgorithm::None => "none",
            DigestAlgorithm::Sha256 => "sha256",
        })
    }
}

impl FromStr for DigestAlgorithm {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "none" => Ok(DigestAlgorithm::None),
            "sha256" => Ok(DigestAlgorithm::Sha256),
            _ => Err(()),
        }
    }
}

/// One share of a chunked message under the recursive scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursiveShareFile {
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub x: u64,
    pub msglen: u64,
    pub auxlen: u64,
    pub digest: DigestAlgorithm,
    /// One y-value per chunk.
    pub ys: Vec<u64>,
}

impl RecursiveShareFile {
    pub fn chunks(&self) -> usize {
        self.ys.len()
    }

    /// The header with the y-values dropped, for cross-file comparison.
    pub fn header_key(&self) -> (u64, usize, usize, usize, u64, u64, DigestAlgorithm) {
        (
            self.p,
            self.k,
            self.n,
            self.ys.len(),
            self.msglen,
            self.auxlen,
            self.digest,
        )
    }

    pub fn params(&self) -> Result<DealingParams, ParseError> {
        let modulus =
            PrimeModulus::new(self.p).map_err(|e| ParseError::InconsistentHeader(e.to_string()))?;
        DealingParams::new(modulus, self.k, self.n)
            .map_err(|e| ParseError::InconsistentHeader(e.to_string()))
    }

    /// Checks every cross-field constraint of the header and body.
    pub fn validate(&self) -> Result<(), ParseError> {
        let bad = |msg: String| Err(ParseError::InconsistentHeader(msg));
        if !is_prime(self.p) {
            return bad(format!("p = {} is not prime", self.p));
        }
        let params = self.params()?;
        if !params.share_abscissae().contains(&self.x) {
            return bad(format!(
                "x = {} outside {}..={}",
                self.x,
                self.k,
                self.k + self.n - 1
            ));
        }
        let expected_chunks = usize::try_from(self.msglen)
            .ok()
            .map(chunk_count)
            .filter(|&c| c == self.ys.len());
        if expected_chunks.is_none() {
            return bad(format!(
                "msglen = {} needs {} chunks of {CHUNK_BYTES} bytes, header has {}",
                self.msglen,
                self.msglen.div_ceil(CHUNK_BYTES as u64),
                self.ys.len()
            ));
        }
        let channel = self.auxlen as u128 + self.digest.output_len() as u128;
        if channel > 0 && channel > channel_capacity(self.ys.len(), self.k) as u128 {
            return bad(format!(
                "auxlen = {} (+{} digest bytes) exceeds the hidden channel capacity of {} bytes",
                self.auxlen,
                self.digest.output_len(),
                channel_capacity(self.ys.len(), self.k)
            ));
        }
        if let Some(&y) = self.ys.iter().find(|&&y| y >= self.p) {
            return bad(format!("y-value {y} is not below p = {}", self.p));
        }
        Ok(())
    }
}

/// One of the two shares of the XOR scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Xor2ShareFile {
    pub levels: usize,
    pub index: u8,
    pub share: BitString,
}

impl Xor2ShareFile {
    pub fn validate(&self) -> Result<(), ParseError> {
        if self.levels == 0 || self.levels >= 64 {
            return Err(ParseError::InconsistentHeader(format!(
                "levels = {} out of range",
                self.levels
            )));
        }
        if self.index != 1 && self.index != 2 {
            return Err(ParseError::InconsistentHeader(format!(
                "index = {} must be 1 or 2",
                self.index
            )));
        }
        if self.share.len() != 1 << (self.levels - 1) {
            return Err(ParseError::InconsistentHeader(format!(
                "share of {} bits does not match {} levels",
                self.share.len(),
                self.levels
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShareFile {
    Recursive(RecursiveShareFile),
    Xor2(Xor2ShareFile),
}

pub fn serialize_share(file: &ShareFile) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    match file {
        ShareFile::Recursive(f) => {
            let _ = write!(
                out,
                "scheme=recursive\np={}\nk={}\nn={}\nx={}\nchunks={}\nmsglen={}\nauxlen={}\ndigest={}\n{SEPARATOR}\n",
                f.p,
                f.k,
                f.n,
                f.x,
                f.ys.len(),
                f.msglen,
                f.auxlen,
                f.digest
            );
            for y in &f.ys {
                let _ = writeln!(out, "{y}");
            }
        }
        ShareFile::Xor2(f) => {
            let _ = write!(
                out,
                "scheme=xor2\nlevels={}\nindex={}\n{SEPARATOR}\n{}\n",
                f.levels,
                f.index,
                f.share.to_hex()
            );
        }
    }
    out
}

fn parse_decimal(value: &str, line: usize) -> Result<u64, ParseError> {
    let canonical = !value.is_empty()
        && value.bytes().all(|b| b.is_ascii_digit())
        && (value == "0" || !value.starts_with('0'));
    canonical
        .then(|| value.parse::<u64>().ok())
        .flatten()
        .ok_or_else(|| ParseError::NonCanonicalDecimal {
            line,
            value: value.to_string(),
        })
}

fn to_usize(v: u64, line: usize) -> Result<usize, ParseError> {
    usize::try_from(v).map_err(|_| ParseError::NonCanonicalDecimal {
        line,
        value: v.to_string(),
    })
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn take(&mut self, expected_total: usize) -> Result<(usize, &'a str), ParseError> {
        let idx = self.next;
        let line = self
            .lines
            .get(idx)
            .copied()
            .ok_or(ParseError::CountMismatch {
                expected: expected_total,
                found: self.lines.len(),
            })?;
        self.next += 1;
        Ok((idx + 1, line))
    }

    fn field(&mut self, key: &str, expected_total: usize) -> Result<(usize, &'a str), ParseError> {
        let (no, line) = self.take(expected_total)?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .map(|v| (no, v))
            .ok_or_else(|| ParseError::UnexpectedLine {
                line: no,
                expected: format!("{key}=<value>"),
            })
    }

    fn decimal(&mut self, key: &str, expected_total: usize) -> Result<u64, ParseError> {
        let (no, v) = self.field(key, expected_total)?;
        parse_decimal(v, no)
    }

    fn separator(&mut self, expected_total: usize) -> Result<(), ParseError> {
        let (no, line) = self.take(expected_total)?;
        if line != SEPARATOR {
            return Err(ParseError::UnexpectedLine {
                line: no,
                expected: SEPARATOR.into(),
            });
        }
        Ok(())
    }
}

const RECURSIVE_HEADER_LINES: usize = 11;
const XOR2_LINES: usize = 6;

pub fn parse_share(bytes: &[u8]) -> Result<ShareFile, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError::Encoding)?;
    // Only LF-terminated lines count; a trailing fragment means truncation.
    let mut lines: Vec<&str> = text.split('\n').collect();
    let fragment = lines.pop().unwrap_or("");

    let magic = lines.first().copied().unwrap_or(fragment);
    if magic != MAGIC {
        if let Some(version) = magic.strip_prefix("RSS") {
            if !version.is_empty() && version.bytes().all(|b| b.is_ascii_digit()) {
                return Err(ParseError::UnknownVersion(version.to_string()));
            }
        }
        return Err(ParseError::BadMagic);
    }
    let mut cursor = Lines { lines, next: 1 };

    let (_, scheme) = cursor.field("scheme", XOR2_LINES)?;
    let parsed = match scheme {
        "recursive" => {
            let h = RECURSIVE_HEADER_LINES;
            let p = cursor.decimal("p", h)?;
            let k = to_usize(cursor.decimal("k", h)?, 4)?;
            let n = to_usize(cursor.decimal("n", h)?, 5)?;
            let x = cursor.decimal("x", h)?;
            let chunks = to_usize(cursor.decimal("chunks", h)?, 7)?;
            let msglen = cursor.decimal("msglen", h)?;
            let auxlen = cursor.decimal("auxlen", h)?;
            let (dno, dv) = cursor.field("digest", h)?;
            let digest = dv.parse().map_err(|_| ParseError::UnexpectedLine {
                line: dno,
                expected: "digest=none or digest=sha256".into(),
            })?;
            cursor.separator(h)?;
            let total = h.saturating_add(chunks);
            let available = cursor.lines.len() - cursor.next;
            if available != chunks || !fragment.is_empty() {
                return Err(ParseError::CountMismatch {
                    expected: total,
                    found: cursor.lines.len(),
                });
            }
            let mut ys = Vec::with_capacity(chunks);
            for _ in 0..chunks {
                let (no, line) = cursor.take(total)?;
                ys.push(parse_decimal(line, no)?);
            }
            let file = RecursiveShareFile {
                p,
                k,
                n,
                x,
                msglen,
                auxlen,
                digest,
                ys,
            };
            file.validate()?;
            ShareFile::Recursive(file)
        }
        "xor2" => {
            let t = XOR2_LINES;
            let levels = to_usize(cursor.decimal("levels", t)?, 3)?;
            let (ino, iv) = cursor.field("index", t)?;
            let index = match iv {
                "1" => 1,
                "2" => 2,
                _ => {
                    return Err(ParseError::UnexpectedLine {
                        line: ino,
                        expected: "index=1 or index=2".into(),
                    })
                }
            };
            cursor.separator(t)?;
            if cursor.lines.len() != t || !fragment.is_empty() {
                return Err(ParseError::CountMismatch {
                    expected: t,
                    found: cursor.lines.len(),
                });
            }
            let (hno, hex) = cursor.take(t)?;
            if levels == 0 || levels >= 64 {
                return Err(ParseError::InconsistentHeader(format!(
                    "levels = {levels} out of range"
                )));
            }
            let share = BitString::from_hex(hex, 1 << (levels - 1)).map_err(|_| {
                ParseError::UnexpectedLine {
                    line: hno,
                    expected: format!("lowercase hex for {} bits", 1u64 << (levels - 1)),
                }
            })?;
            let file = Xor2ShareFile {
                levels,
                index,
                share,
            };
            file.validate()?;
            ShareFile::Xor2(file)
        }
        other => return Err(ParseError::UnknownScheme(other.to_string())),
    };
    Ok(parsed)
}
