//! Recursive 2-of-2 XOR sharing of secrets that double in size.
//!
//! Secret `m` has `2^(m−1)` bits. The two shares of one level become the
//! inner halves of the next level's shares: share 1 grows to the right and
//! share 2 to the left, with the new halves forced by the XOR constraint.
//! Two shares of `2^(m−1)` bits thus carry `2^m − 1` secret bits.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

use crate::error::{Error, Result};

/// Bits in most-significant-first order, as they are written.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn xor(&self, other: &[bool]) -> Vec<bool> {
        self.0.iter().zip(other).map(|(a, b)| a ^ b).collect()
    }

    /// Hex digits of the bit-string read as a big-endian integer, using
    /// `ceil(len / 4)` digits. The leading pad bits are zero.
    pub fn to_hex(&self) -> String {
        let digits = self.0.len().div_ceil(4);
        let pad = digits * 4 - self.0.len();
        let mut padded = vec![false; pad];
        padded.extend_from_slice(&self.0);
        padded
            .chunks(4)
            .map(|nibble| {
                let v = nibble.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                char::from_digit(v, 16).expect("nibble below 16")
            })
            .collect()
    }

    /// Inverse of [`BitString::to_hex`] for a known bit length. Rejects
    /// uppercase digits, a wrong digit count, and nonzero pad bits.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let digits = len.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::Parameter(format!(
                "expected {digits} hex digits for {len} bits, got {}",
                hex.len()
            )));
        }
        let mut bits = Vec::with_capacity(digits * 4);
        for c in hex.chars() {
            let v = match c {
                '0'..='9' | 'a'..='f' => c.to_digit(16).expect("hex digit"),
                _ => return Err(Error::Parameter(format!("invalid hex digit {c:?}"))),
            };
            bits.extend((0..4).rev().map(|shift| (v >> shift) & 1 == 1));
        }
        let pad = digits * 4 - len;
        if bits[..pad].iter().any(|&b| b) {
            return Err(Error::Parameter(
                "nonzero padding bits in hex bit-string".into(),
            ));
        }
        Ok(BitString(bits.split_off(pad)))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parameter(format!("invalid bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

/// Secrets `s_1..s_m` where `s_i` has exactly `2^(i−1)` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorSecretSequence(Vec<BitString>);

impl XorSecretSequence {
    pub fn new(secrets: Vec<BitString>) -> Result<Self> {
        if secrets.is_empty() {
            return Err(Error::Parameter("at least one secret is required".into()));
        }
        for (i, s) in secrets.iter().enumerate() {
            let want = 1usize
                .checked_shl(i as u32)
                .filter(|_| i < usize::BITS as usize - 1)
                .ok_or_else(|| Error::Parameter("too many levels".into()))?;
            if s.len() != want {
                return Err(Error::Parameter(format!(
                    "secret {} has {} bits, expected {want}",
                    i + 1,
                    s.len()
                )));
            }
        }
        Ok(XorSecretSequence(secrets))
    }

    pub fn secrets(&self) -> &[BitString] {
        &self.0
    }

    pub fn levels(&self) -> usize {
        self.0.len()
    }

    pub fn total_bits(&self) -> usize {
        self.0.iter().map(BitString::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorSharePair {
    pub share1: BitString,
    pub share2: BitString,
}

/// Splits with a random base bit.
pub fn xor2_split<R: RngCore + ?Sized>(secrets: &XorSecretSequence, rng: &mut R) -> XorSharePair {
    xor2_split_with(secrets, rng.next_u32() & 1 == 1)
}

/// Splits with an injected base bit (share 1 of `s_1`).
pub fn xor2_split_with(secrets: &XorSecretSequence, base_bit: bool) -> XorSharePair {
    let first = &secrets.0[0];
    let mut share1 = vec![base_bit];
    let mut share2 = vec![base_bit ^ first.0[0]];
    for secret in &secrets.0[1..] {
        let half = secret.len() / 2;
        let (left, right) = secret.0.split_at(half);
        let pad_left: Vec<bool> = BitString(share1.clone()).xor(left);
        let pad_right: Vec<bool> = BitString(share2.clone()).xor(right);
        share1.extend(pad_right);
        let mut next2 = pad_left;
        next2.extend(share2);
        share2 = next2;
        debug_assert_eq!(BitString(share1.clone()).xor(&share2), secret.0);
    }
    XorSharePair {
        share1: BitString(share1),
        share2: BitString(share2),
    }
}

/// Recovers all `levels` secrets from a share pair.
pub fn xor2_reconstruct(pair: &XorSharePair, levels: usize) -> Result<XorSecretSequence> {
    if levels == 0 || levels >= usize::BITS as usize {
        return Err(Error::Parameter(format!("invalid level count {levels}")));
    }
    let want = 1usize << (levels - 1);
    if pair.share1.len() != want || pair.share2.len() != want {
        return Err(Error::Parameter(format!(
            "shares of {} and {} bits do not match {levels} levels ({want} bits each)",
            pair.share1.len(),
            pair.share2.len()
        )));
    }
    let mut s1 = pair.share1.0.as_slice();
    let mut s2 = pair.share2.0.as_slice();
    let mut secrets = Vec::with_capacity(levels);
    loop {
        secrets.push(BitString(s1.iter().zip(s2).map(|(a, b)| a ^ b).collect()));
        if s1.len() == 1 {
            break;
        }
        let half = s1.len() / 2;
        s1 = &s1[..half];
        s2 = &s2[half..];
    }
    secrets.reverse();
    XorSecretSequence::new(secrets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(items: &[&str]) -> XorSecretSequence {
        XorSecretSequence::new(items.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn worked_example() {
        let secrets = seq(&["1", "01", "1011"]);
        let pair = xor2_split_with(&secrets, false);
        assert_eq!(pair.share1.to_string(), "0010");
        assert_eq!(pair.share2.to_string(), "1001");
        assert_eq!(xor2_reconstruct(&pair, 3).unwrap(), secrets);
    }

    #[test]
    fn single_zero_secret() {
        let pair = xor2_split_with(&seq(&["0"]), false);
        assert_eq!(
            (pair.share1.to_string(), pair.share2.to_string()),
            ("0".into(), "0".into())
        );
        for b in [false, true] {
            let pair = XorSharePair {
                share1: BitString::new(vec![b]),
                share2: BitString::new(vec![b]),
            };
            assert_eq!(xor2_reconstruct(&pair, 1).unwrap(), seq(&["0"]));
        }
    }

    #[test]
    fn exhaustive_two_level_pairs() {
        for a in 0..4u8 {
            for b in 0..4u8 {
                let bits = |v: u8| BitString::new(vec![v & 2 != 0, v & 1 != 0]);
                let pair = XorSharePair {
                    share1: bits(a),
                    share2: bits(b),
                };
                let secrets = xor2_reconstruct(&pair, 2).unwrap();
                let base = pair.share1.bits()[0];
                assert_eq!(xor2_split_with(&secrets, base), pair);
            }
        }
    }

    #[test]
    fn size_validation() {
        assert!(XorSecretSequence::new(vec![]).is_err());
        assert!(
            XorSecretSequence::new(vec!["1".parse().unwrap(), "011".parse().unwrap()]).is_err()
        );
        assert!(XorSecretSequence::new(vec!["10".parse().unwrap()]).is_err());
        let pair = xor2_split_with(&seq(&["1", "01"]), true);
        assert!(xor2_reconstruct(&pair, 3).is_err());
        assert!(xor2_reconstruct(&pair, 0).is_err());
        let ragged = XorSharePair {
            share1: "01".parse().unwrap(),
            share2: "0".parse().unwrap(),
        };
        assert!(xor2_reconstruct(&ragged, 2).is_err());
        assert!("012".parse::<BitString>().is_err());
    }

    #[test]
    fn hex_encoding() {
        let b: BitString = "0010".parse().unwrap();
        assert_eq!(b.to_hex(), "2");
        let one: BitString = "1".parse().unwrap();
        assert_eq!(one.to_hex(), "1");
        assert_eq!(BitString::from_hex("1", 1).unwrap(), one);
        assert!(BitString::from_hex("2", 1).is_err());
        assert!(BitString::from_hex("A", 4).is_err());
        assert!(BitString::from_hex("0a", 4).is_err());
        let long: BitString = "10110000111100001010010111000011".parse().unwrap();
        assert_eq!(long.to_hex(), "b0f0a5c3");
    }

    #[test]
    fn capacity_law() {
        for m in 1..=10usize {
            let secrets = XorSecretSequence::new(
                (0..m).map(|i| BitString::new(vec![true; 1 << i])).collect(),
            )
            .unwrap();
            let pair = xor2_split_with(&secrets, false);
            assert_eq!(pair.share1.len(), 1 << (m - 1));
            assert_eq!(pair.share2.len(), 1 << (m - 1));
            assert_eq!(secrets.total_bits(), (1 << m) - 1);
        }
    }

    fn sequence_strategy() -> impl Strategy<Value = XorSecretSequence> {
        (1usize..=12).prop_flat_map(|m| {
            proptest::collection::vec(any::<bool>(), (1 << m) - 1).prop_map(move |flat| {
                let mut rest = flat.as_slice();
                let mut out = Vec::new();
                for i in 0..m {
                    let (head, tail) = rest.split_at(1 << i);
                    out.push(BitString::new(head.to_vec()));
                    rest = tail;
                }
                XorSecretSequence::new(out).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(secrets in sequence_strategy(), base in any::<bool>()) {
            let pair = xor2_split_with(&secrets, base);
            prop_assert_eq!(xor2_reconstruct(&pair, secrets.levels()).unwrap(), secrets);
        }

        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..70)) {
            let b = BitString::new(bits);
            prop_assert_eq!(BitString::from_hex(&b.to_hex(), b.len()).unwrap(), b);
        }
    }
}
