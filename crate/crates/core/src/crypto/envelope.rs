//! Authenticated symmetric envelope for the key-exchange phase.
//!
//! Key stores and public keys travel inside these envelopes, so tampering
//! must be detectable, not just unreadable. The construction is a
//! deterministic SIV built from the fixed hash: the tag authenticates the
//! plaintext and doubles as the keystream nonce. Like the rest of the
//! cryptography here it is illustrative, not hardened.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::hashing::{tagged_hash, DIGEST_LEN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("authentication failed: wrong key or tampered envelope")]
    AuthFailure,
}

/// Symmetric key material, always a hash of its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SealKey([u8; DIGEST_LEN]);

impl SealKey {
    /// Derives a key from an integer's canonical 16-byte big-endian form.
    pub fn from_int(value: u128) -> Self {
        Self::from_bytes(&value.to_be_bytes())
    }

    pub fn from_bytes(material: &[u8]) -> Self {
        Self(tagged_hash("vanet.seal-key", material))
    }
}

/// Tag plus ciphertext; opening with the wrong key fails detectably.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    tag: String,
    ciphertext: String,
}

impl Envelope {
    pub fn len(&self) -> usize {
        self.ciphertext.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.ciphertext.is_empty()
    }
}

fn keystream_block(key: &SealKey, tag: &[u8; DIGEST_LEN], counter: u64) -> [u8; DIGEST_LEN] {
    let mut input = Vec::with_capacity(DIGEST_LEN * 2 + 8);
    input.extend_from_slice(&key.0);
    input.extend_from_slice(tag);
    input.extend_from_slice(&counter.to_be_bytes());
    tagged_hash("vanet.env-stream", &input)
}

fn apply_keystream(key: &SealKey, tag: &[u8; DIGEST_LEN], data: &mut [u8]) {
    for (block_index, chunk) in data.chunks_mut(DIGEST_LEN).enumerate() {
        let block = keystream_block(key, tag, block_index as u64);
        for (byte, pad) in chunk.iter_mut().zip(block.iter()) {
            *byte ^= pad;
        }
    }
}

fn compute_tag(key: &SealKey, plaintext: &[u8]) -> [u8; DIGEST_LEN] {
    let mut input = Vec::with_capacity(DIGEST_LEN + plaintext.len());
    input.extend_from_slice(&key.0);
    input.extend_from_slice(plaintext);
    tagged_hash("vanet.env-tag", &input)
}

/// Seals `plaintext` under `key`. Deterministic: equal inputs give equal
/// envelopes.
pub fn seal(key: &SealKey, plaintext: &[u8]) -> Envelope {
    let tag = compute_tag(key, plaintext);
    let mut ciphertext = plaintext.to_vec();
    apply_keystream(key, &tag, &mut ciphertext);
    Envelope {
        tag: hex::encode(tag),
        ciphertext: hex::encode(ciphertext),
    }
}

/// Opens an envelope, verifying the tag against the recovered plaintext.
pub fn open(key: &SealKey, envelope: &Envelope) -> Result<Vec<u8>, EnvelopeError> {
    let tag_bytes: [u8; DIGEST_LEN] = hex::decode(&envelope.tag)
        .ok()
        .and_then(|raw| raw.try_into().ok())
        .ok_or(EnvelopeError::AuthFailure)?;
    let mut plaintext = hex::decode(&envelope.ciphertext).map_err(|_| EnvelopeError::AuthFailure)?;
    apply_keystream(key, &tag_bytes, &mut plaintext);
    if compute_tag(key, &plaintext) != tag_bytes {
        return Err(EnvelopeError::AuthFailure);
    }
    Ok(plaintext)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let key = SealKey::from_int(7);
        let envelope = seal(&key, b"certificate payload");
        assert_eq!(open(&key, &envelope).unwrap(), b"certificate payload");
    }

    #[test]
    fn wrong_key_fails() {
        let envelope = seal(&SealKey::from_int(7), b"payload");
        assert_eq!(
            open(&SealKey::from_int(8), &envelope),
            Err(EnvelopeError::AuthFailure)
        );
    }

    #[test]
    fn tampered_ciphertext_fails() {
        let key = SealKey::from_int(13);
        let mut envelope = seal(&key, b"payload");
        let mut raw = hex::decode(&envelope.ciphertext).unwrap();
        raw[0] ^= 1;
        envelope.ciphertext = hex::encode(raw);
        assert_eq!(open(&key, &envelope), Err(EnvelopeError::AuthFailure));
    }

    #[test]
    fn empty_plaintext_roundtrips() {
        let key = SealKey::from_int(0);
        let envelope = seal(&key, b"");
        assert_eq!(open(&key, &envelope).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn byte_key_material_supported() {
        let key = SealKey::from_bytes(b"derived record key");
        let envelope = seal(&key, b"hello");
        assert_eq!(open(&key, &envelope).unwrap(), b"hello");
    }
}
