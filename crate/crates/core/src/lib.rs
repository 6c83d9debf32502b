//! Recursive multi-secret sharing.
//!
//! A (k, n) threshold scheme over Z_p that hides k−2 auxiliary secrets in the
//! shares of a primary secret, the 2-of-2 XOR recursive scheme, and the
//! chunking and file format used to apply both to byte streams.
//!
//! ```
//! use rss_core::field::PrimeModulus;
//! use rss_core::recursive::{deal_with, reconstruct, DealingParams, HiddenPayload};
//!
//! let p = PrimeModulus::new(131).unwrap();
//! let params = DealingParams::new(p, 5, 7).unwrap();
//! let hidden = HiddenPayload::from_values(&[46, 69, 72], p).unwrap();
//! let shares = deal_with(p.reduce(65), &hidden, &params, p.reduce(102)).unwrap();
//! let (secret, recovered) = reconstruct(&shares[2..], &params).unwrap();
//! assert_eq!(secret.value(), 65);
//! assert_eq!(recovered, hidden);
//! ```

pub mod codec;
pub mod error;
pub mod field;
pub mod poly;
pub mod recursive;
pub mod shamir;
pub mod xor2;

pub use error::{Error, Result};
