//! The auxiliary channel carried in the hidden secrets of every chunk.
//!
//! Layout: one length element (the byte count), then the bytes in 7-byte
//! big-endian elements, then zero elements up to capacity. Global element
//! `e` is placed in chunk `e % chunk_count` at slot `e / chunk_count`.

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::recursive::HiddenPayload;

use super::chunking::{
    bytes_to_values, check_chunk_modulus, chunk_count as chunks_for, values_to_bytes, CHUNK_BYTES,
    CHUNK_LIMIT,
};

/// Bytes the channel can carry, excluding the length element.
pub fn channel_capacity(chunk_count: usize, k: usize) -> usize {
    (chunk_count * k.saturating_sub(2)).saturating_sub(1) * CHUNK_BYTES
}

pub fn pack_hidden_channel(
    aux: &[u8],
    chunk_count: usize,
    k: usize,
    modulus: PrimeModulus,
) -> Result<Vec<HiddenPayload>> {
    check_chunk_modulus(modulus)?;
    let per_chunk = k.saturating_sub(2);
    let total = chunk_count * per_chunk;
    if total == 0 {
        if !aux.is_empty() {
            return Err(Error::Capacity {
                required: aux.len() + CHUNK_BYTES,
                available: 0,
            });
        }
        return Ok(vec![HiddenPayload::default(); chunk_count]);
    }
    let available = total * CHUNK_BYTES;
    if aux.len() + CHUNK_BYTES > available {
        return Err(Error::Capacity {
            required: aux.len() + CHUNK_BYTES,
            available,
        });
    }
    let mut elements = Vec::with_capacity(total);
    elements.push(aux.len() as u64);
    elements.extend(bytes_to_values(aux));
    elements.resize(total, 0);

    let mut payloads = vec![Vec::with_capacity(per_chunk); chunk_count];
    for (e, v) in elements.into_iter().enumerate() {
        payloads[e % chunk_count].push(modulus.reduce(v));
    }
    Ok(payloads.into_iter().map(HiddenPayload::new).collect())
}

pub fn unpack_hidden_channel(payloads: &[HiddenPayload]) -> Result<Vec<u8>> {
    let chunk_count = payloads.len();
    let per_chunk = payloads.first().map_or(0, HiddenPayload::len);
    if payloads.iter().any(|p| p.len() != per_chunk) {
        return Err(Error::Corrupted("hidden payloads differ in length".into()));
    }
    let total = chunk_count * per_chunk;
    if total == 0 {
        return Ok(Vec::new());
    }
    let elements: Vec<u64> = (0..total)
        .map(|e| payloads[e % chunk_count].secrets()[e / chunk_count].value())
        .collect();
    let len = elements[0];
    let max = ((total - 1) * CHUNK_BYTES) as u64;
    if len >= CHUNK_LIMIT || len > max {
        return Err(Error::Corrupted(format!(
            "hidden length header {len} exceeds the channel capacity of {max} bytes"
        )));
    }
    let len = len as usize;
    let used = chunks_for(len);
    if elements[1 + used..].iter().any(|&v| v != 0) {
        return Err(Error::Corrupted(
            "nonzero padding in the hidden channel".into(),
        ));
    }
    values_to_bytes(&elements[1..1 + used], len)
}
