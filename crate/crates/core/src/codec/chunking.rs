//! Byte streams as sequences of 7-byte big-endian field elements.

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

pub const CHUNK_BYTES: usize = 7;

/// Every 7-byte value is below this bound.
pub(crate) const CHUNK_LIMIT: u64 = 1 << 56;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkedMessage {
    pub elements: Vec<FieldElement>,
    pub original_length: usize,
}

pub fn chunk_count(byte_len: usize) -> usize {
    byte_len.div_ceil(CHUNK_BYTES)
}

pub(crate) fn check_chunk_modulus(modulus: PrimeModulus) -> Result<()> {
    if modulus.value() <= CHUNK_LIMIT {
        return Err(Error::UnsupportedModulus(modulus.value()));
    }
    Ok(())
}

/// Big-endian value of up to seven bytes, zero-padded on the right.
pub(crate) fn pack_chunk(bytes: &[u8]) -> u64 {
    debug_assert!(bytes.len() <= CHUNK_BYTES);
    let mut buf = [0u8; 8];
    buf[1..1 + bytes.len()].copy_from_slice(bytes);
    u64::from_be_bytes(buf)
}

pub(crate) fn unpack_chunk(value: u64) -> Result<[u8; CHUNK_BYTES]> {
    if value >= CHUNK_LIMIT {
        return Err(Error::Corrupted(format!(
            "element {value} does not encode seven bytes"
        )));
    }
    let bytes = value.to_be_bytes();
    let mut out = [0u8; CHUNK_BYTES];
    out.copy_from_slice(&bytes[1..]);
    Ok(out)
}

pub(crate) fn bytes_to_values(bytes: &[u8]) -> Vec<u64> {
    bytes.chunks(CHUNK_BYTES).map(pack_chunk).collect()
}

/// Inverse of [`bytes_to_values`]; padding beyond `len` must be zero.
pub(crate) fn values_to_bytes(values: &[u64], len: usize) -> Result<Vec<u8>> {
    if len > values.len().saturating_mul(CHUNK_BYTES) || chunk_count(len) != values.len() {
        return Err(Error::Corrupted(format!(
            "length {len} is inconsistent with {} elements",
            values.len()
        )));
    }
    let mut out = Vec::with_capacity(values.len() * CHUNK_BYTES);
    for &v in values {
        out.extend_from_slice(&unpack_chunk(v)?);
    }
    if out[len..].iter().any(|&b| b != 0) {
        return Err(Error::Corrupted(
            "nonzero padding after the final byte".into(),
        ));
    }
    out.truncate(len);
    Ok(out)
}

/// Splits `bytes` into 7-byte big-endian elements; needs `p > 2^56`.
pub fn encode_message(bytes: &[u8], modulus: PrimeModulus) -> Result<ChunkedMessage> {
    check_chunk_modulus(modulus)?;
    Ok(ChunkedMessage {
        elements: bytes_to_values(bytes)
            .into_iter()
            .map(|v| modulus.reduce(v))
            .collect(),
        original_length: bytes.len(),
    })
}

pub fn decode_message(chunked: &ChunkedMessage) -> Result<Vec<u8>> {
    let values: Vec<u64> = chunked.elements.iter().map(|e| e.value()).collect();
    values_to_bytes(&values, chunked.original_length)
}
