//! Chunking, the hidden channel, share files, and message-level dealing.

mod chunking;
mod hidden;
mod message;
mod share_file;

pub use chunking::{chunk_count, decode_message, encode_message, ChunkedMessage, CHUNK_BYTES};
pub use hidden::{channel_capacity, pack_hidden_channel, unpack_hidden_channel};
pub use message::{join_shares, split_message, RecoveredMessage};
pub use share_file::{
    parse_share, serialize_share, DigestAlgorithm, ParseError, RecursiveShareFile, ShareFile,
    Xor2ShareFile, MAGIC,
};
