//! Identifiers, pseudonyms, and the one fixed hash behind both.
//!
//! Everything that needs hashing (identifiers, pseudonyms, message digests,
//! key derivation) uses SHA-256 with a short ASCII domain tag so the
//! different uses can never collide with each other.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

/// Output width of the fixed hash.
pub const DIGEST_LEN: usize = 32;

pub(crate) fn tagged_hash(tag: &str, data: &[u8]) -> [u8; DIGEST_LEN] {
    let mut hasher = Sha256::new();
    hasher.update(tag.as_bytes());
    hasher.update(data);
    hasher.finalize().into()
}

macro_rules! digest_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name([u8; DIGEST_LEN]);

        impl $name {
            pub fn from_bytes(bytes: [u8; DIGEST_LEN]) -> Self {
                Self(bytes)
            }

            pub fn as_bytes(&self) -> &[u8; DIGEST_LEN] {
                &self.0
            }

            pub fn to_hex(&self) -> String {
                hex::encode(self.0)
            }

            pub fn from_hex(text: &str) -> Option<Self> {
                let raw = hex::decode(text).ok()?;
                let bytes: [u8; DIGEST_LEN] = raw.try_into().ok()?;
                Some(Self(bytes))
            }

            /// First bytes in hex, for logs.
            pub fn short(&self) -> String {
                hex::encode(&self.0[..4])
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.to_hex())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!(stringify!($name), "({})"), self.short())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(&self.to_hex())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let text = String::deserialize(deserializer)?;
                Self::from_hex(&text)
                    .ok_or_else(|| D::Error::custom(concat!("invalid hex ", stringify!($name))))
            }
        }
    };
}

digest_newtype! {
    /// Fixed identifier of a node: the hash of a seed value such as a phone
    /// number or e-mail address.
    NodeId
}

digest_newtype! {
    /// Rotating temporal identifier: the hash of the identifiers currently
    /// held in the owner's key store.
    Pseudonym
}

digest_newtype! {
    /// Hash of a [`NodeId`], as broadcast during discovery.
    IdDigest
}

/// Derives the fixed identifier from a seed value.
pub fn node_id(seed: &[u8]) -> NodeId {
    NodeId(tagged_hash("vanet.id", seed))
}

/// Hash of an identifier, suitable for discovery offers.
pub fn id_digest(id: &NodeId) -> IdDigest {
    IdDigest(tagged_hash("vanet.id-digest", id.as_bytes()))
}

/// Pseudonym over a set of identifiers. Input order is irrelevant; the ids
/// are sorted canonically before hashing.
pub fn pseudonym_of_ids<'a, I: IntoIterator<Item = &'a NodeId>>(ids: I) -> Pseudonym {
    let mut sorted: Vec<&NodeId> = ids.into_iter().collect();
    sorted.sort();
    sorted.dedup();
    let mut data = Vec::with_capacity(sorted.len() * DIGEST_LEN);
    for id in sorted {
        data.extend_from_slice(id.as_bytes());
    }
    Pseudonym(tagged_hash("vanet.pseu", &data))
}

/// Digest of a message, reduced to an integer for the signature primitive.
pub fn message_digest_int(message: &[u8]) -> u128 {
    let digest = tagged_hash("vanet.msg", message);
    u128::from_be_bytes(digest[..16].try_into().expect("16-byte slice"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_deterministic() {
        assert_eq!(node_id(b"+34 600 000 001"), node_id(b"+34 600 000 001"));
        assert_ne!(node_id(b"+34 600 000 001"), node_id(b"+34 600 000 002"));
    }

    #[test]
    fn pseudonym_ignores_enumeration_order() {
        let a = node_id(b"a");
        let b = node_id(b"b");
        assert_eq!(pseudonym_of_ids([&a, &b]), pseudonym_of_ids([&b, &a]));
    }

    #[test]
    fn pseudonym_changes_with_membership() {
        let a = node_id(b"a");
        let b = node_id(b"b");
        let c = node_id(b"c");
        assert_ne!(pseudonym_of_ids([&a, &b]), pseudonym_of_ids([&a, &b, &c]));
    }

    #[test]
    fn hex_roundtrip() {
        let id = node_id(b"hex");
        assert_eq!(NodeId::from_hex(&id.to_hex()), Some(id));
        assert_eq!(NodeId::from_hex("zz"), None);
    }

    #[test]
    fn json_roundtrip() {
        let id = node_id(b"json");
        let text = serde_json::to_string(&id).unwrap();
        let back: NodeId = serde_json::from_str(&text).unwrap();
        assert_eq!(back, id);
    }
}
