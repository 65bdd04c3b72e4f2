//! Cryptographic building blocks: cycle-encoded key pairs, identifiers,
//! pseudonyms, signatures, and the authenticated symmetric envelope.

pub mod cycle;
pub mod envelope;
pub mod hashing;
pub mod keys;

pub use cycle::{decode_cycle, decode_edges, encode_cycle, CycleEncoding, CycleError};
pub use envelope::{open, seal, Envelope, EnvelopeError, SealKey};
pub use hashing::{id_digest, node_id, pseudonym_of_ids, IdDigest, NodeId, Pseudonym};
pub use keys::{
    generate_keypair, generate_keypair_with_budget, IdentityKeyPair, KeyGenError, NodeIdentity,
    PublicKey, DEFAULT_KEYGEN_ATTEMPTS,
};
