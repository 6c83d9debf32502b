//! Whole-message dealing: chunk, pack the hidden channel, deal every chunk,
//! and the inverse.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::recursive::{Dealer, DealingParams, HiddenPayload, Reconstructor};

use super::chunking::{bytes_to_values, check_chunk_modulus, values_to_bytes};
use super::hidden::{pack_hidden_channel, unpack_hidden_channel};
use super::share_file::{DigestAlgorithm, RecursiveShareFile};

/// Splits `message` into `n` share files. The hidden channel carries the
/// digest of `message` (if any) followed by `aux`.
pub fn split_message<R: RngCore + ?Sized>(
    message: &[u8],
    aux: &[u8],
    digest: DigestAlgorithm,
    params: &DealingParams,
    rng: &mut R,
) -> Result<Vec<RecursiveShareFile>> {
    let modulus = params.modulus();
    check_chunk_modulus(modulus)?;
    let secrets = bytes_to_values(message);
    let chunks = secrets.len();

    let mut channel = digest.digest(message);
    channel.extend_from_slice(aux);
    let payloads = pack_hidden_channel(&channel, chunks, params.k(), modulus)?;

    let dealer = Dealer::new(*params)?;
    let n = params.n();
    let mut columns = vec![Vec::with_capacity(chunks); n];
    let mut row = vec![0u64; n];
    for (secret, payload) in secrets.iter().zip(&payloads) {
        dealer.deal_values_random(*secret, &payload.values(), rng, &mut row)?;
        for (col, &y) in columns.iter_mut().zip(&row) {
            col.push(y);
        }
    }
    Ok(params
        .share_abscissae()
        .zip(columns)
        .map(|(x, ys)| RecursiveShareFile {
            p: modulus.value(),
            k: params.k(),
            n,
            x,
            msglen: message.len() as u64,
            auxlen: aux.len() as u64,
            digest,
            ys,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredMessage {
    pub message: Vec<u8>,
    pub aux: Vec<u8>,
    pub digest_algorithm: DigestAlgorithm,
    pub embedded_digest: Vec<u8>,
}

impl RecoveredMessage {
    /// Recomputes the message digest and compares it with the embedded one.
    pub fn verify_digest(&self) -> Result<()> {
        if self.digest_algorithm == DigestAlgorithm::None {
            return Err(Error::Parameter(
                "shares carry no embedded digest to check".into(),
            ));
        }
        if self.digest_algorithm.digest(&self.message) != self.embedded_digest {
            return Err(Error::DigestMismatch);
        }
        Ok(())
    }
}

/// Reconstructs a message (and its hidden channel) from at least `k` share
/// files with identical headers. Surplus shares are verified chunk by chunk.
pub fn join_shares(files: &[RecursiveShareFile]) -> Result<RecoveredMessage> {
    let first = files
        .first()
        .ok_or(Error::InsufficientShares { needed: 2, got: 0 })?;
    for f in files {
        f.validate()?;
        if f.header_key() != first.header_key() {
            return Err(Error::Parameter(format!(
                "share x = {} has a header that differs from share x = {}",
                f.x, first.x
            )));
        }
    }
    let params = DealingParams::new(PrimeModulus::new(first.p)?, first.k, first.n)?;
    let xs: Vec<u64> = files.iter().map(|f| f.x).collect();
    let reconstructor = Reconstructor::new(params, &xs)?;

    let chunks = first.chunks();
    let modulus = params.modulus();
    let mut secrets = Vec::with_capacity(chunks);
    let mut payloads = Vec::with_capacity(chunks);
    let mut column = vec![0u64; files.len()];
    let mut hidden = vec![0u64; params.hidden_count()];
    for c in 0..chunks {
        for (slot, f) in column.iter_mut().zip(files) {
            *slot = f.ys[c];
        }
        secrets.push(reconstructor.reconstruct_values(&column, &mut hidden)?);
        payloads.push(HiddenPayload::from_values(&hidden, modulus)?);
    }

    let message = values_to_bytes(&secrets, first.msglen as usize)?;
    let mut channel = unpack_hidden_channel(&payloads)?;
    let digest_len = first.digest.output_len();
    if channel.len() as u64 != first.auxlen + digest_len as u64 {
        return Err(Error::Corrupted(format!(
            "hidden channel holds {} bytes, header declares {} + {} digest bytes",
            channel.len(),
            first.auxlen,
            digest_len
        )));
    }
    let aux = channel.split_off(digest_len);
    Ok(RecoveredMessage {
        message,
        aux,
        digest_algorithm: first.digest,
        embedded_digest: channel,
    })
}
