//! Identity key pairs whose public exponent encodes a Hamiltonian cycle.
//!
//! Keys follow the textbook RSA construction over small primes: the public
//! exponent is drawn from random cycle encodings until one is coprime with
//! and smaller than `(p-1)(q-1)`. Sizes here are illustrative; the scheme is
//! demonstrated with toy primes so every number stays hand-checkable, and
//! nothing in this module is hardened for production use.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::cycle::{self, CycleEncoding, CycleError};
use super::hashing::{message_digest_int, NodeId};

/// Attempt budget for drawing a usable cycle encoding.
pub const DEFAULT_KEYGEN_ATTEMPTS: u32 = 1000;

/// Primes must fit 32 bits so that all modular products fit a `u128`.
pub const MAX_PRIME: u128 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeyGenError {
    #[error("{0} is not prime")]
    NotPrime(u128),
    #[error("p and q must differ")]
    EqualPrimes,
    #[error("prime {0} exceeds the supported {MAX_PRIME} bound")]
    PrimeTooLarge(u128),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("no cycle encoding below phi found within {attempts} attempts")]
    ExhaustedRetries { attempts: u32 },
}

/// Public half of an identity key: `(exponent, modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PublicKey {
    pub modulus: u128,
    pub exponent: u128,
}

impl PublicKey {
    /// Checks `signature^e mod n` against the digest of `message`.
    /// Malformed inputs simply fail verification.
    pub fn verify(&self, message: &[u8], signature: u128) -> bool {
        if self.modulus < 2 || signature >= self.modulus {
            return false;
        }
        let expected = message_digest_int(message) % self.modulus;
        mod_pow(signature, self.exponent, self.modulus) == expected
    }

    /// Textbook public-key operation on a bare integer (`m^e mod n`).
    pub fn encrypt_int(&self, value: u128) -> u128 {
        mod_pow(value % self.modulus, self.exponent, self.modulus)
    }
}

/// A node's fixed identity key pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityKeyPair {
    public: PublicKey,
    private_exponent: u128,
}

impl IdentityKeyPair {
    /// Rebuilds a key pair from stored components without re-deriving them.
    pub fn from_parts(modulus: u128, exponent: u128, private_exponent: u128) -> Self {
        Self {
            public: PublicKey { modulus, exponent },
            private_exponent,
        }
    }

    pub fn public(&self) -> PublicKey {
        self.public
    }

    pub fn private_exponent(&self) -> u128 {
        self.private_exponent
    }

    /// The Hamiltonian cycle embedded in the public exponent.
    pub fn cycle(&self, vertex_count: u8) -> Result<Vec<u8>, CycleError> {
        cycle::decode_cycle(self.public.exponent, vertex_count)
    }

    /// Signs the digest of `message` with the private exponent.
    pub fn sign(&self, message: &[u8]) -> u128 {
        let digest = message_digest_int(message) % self.public.modulus;
        mod_pow(digest, self.private_exponent, self.public.modulus)
    }

    /// Textbook private-key operation on a bare integer (`c^d mod n`).
    pub fn decrypt_int(&self, value: u128) -> u128 {
        mod_pow(value % self.public.modulus, self.private_exponent, self.public.modulus)
    }
}

/// An identity: the hashed identifier plus the key pair it speaks for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeIdentity {
    pub id: NodeId,
    pub keypair: IdentityKeyPair,
}

/// Generates a key pair whose public exponent encodes a random Hamiltonian
/// cycle on `n_vertices` vertices, using the default attempt budget.
pub fn generate_keypair(
    p: u128,
    q: u128,
    n_vertices: u8,
    rng: &mut impl Rng,
) -> Result<(IdentityKeyPair, CycleEncoding), KeyGenError> {
    generate_keypair_with_budget(p, q, n_vertices, DEFAULT_KEYGEN_ATTEMPTS, rng)
}

/// As [`generate_keypair`] with an explicit retry budget.
pub fn generate_keypair_with_budget(
    p: u128,
    q: u128,
    n_vertices: u8,
    attempts: u32,
    rng: &mut impl Rng,
) -> Result<(IdentityKeyPair, CycleEncoding), KeyGenError> {
    for prime in [p, q] {
        if prime >= MAX_PRIME {
            return Err(KeyGenError::PrimeTooLarge(prime));
        }
        if !is_prime(prime) {
            return Err(KeyGenError::NotPrime(prime));
        }
    }
    if p == q {
        return Err(KeyGenError::EqualPrimes);
    }
    if !(cycle::MIN_VERTICES..=cycle::MAX_VERTICES).contains(&n_vertices) {
        return Err(KeyGenError::Cycle(CycleError::BadVertexCount(n_vertices)));
    }
    let modulus = p * q;
    let phi = (p - 1) * (q - 1);
    for _ in 0..attempts {
        let order = random_vertex_order(n_vertices, rng);
        let encoding = cycle::encode_cycle(&order).expect("orders are permutations");
        let e = encoding.value();
        if e >= phi || gcd(e, phi) != 1 {
            continue;
        }
        let d = mod_inverse(e, phi).expect("coprime exponents invert");
        return Ok((
            IdentityKeyPair {
                public: PublicKey {
                    modulus,
                    exponent: e,
                },
                private_exponent: d,
            },
            encoding,
        ));
    }
    Err(KeyGenError::ExhaustedRetries { attempts })
}

/// Uniform random permutation of `1..=n` (Fisher-Yates).
pub fn random_vertex_order(n: u8, rng: &mut impl Rng) -> Vec<u8> {
    let mut order: Vec<u8> = (1..=n).collect();
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    order
}

/// Modular exponentiation by squaring. The modulus must fit 64 bits so the
/// intermediate products cannot overflow a `u128`.
pub fn mod_pow(mut base: u128, mut exponent: u128, modulus: u128) -> u128 {
    assert!(modulus != 0 && modulus < 1 << 64, "modulus must fit 64 bits");
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u128;
    base %= modulus;
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = result * base % modulus;
        }
        exponent >>= 1;
        base = base * base % modulus;
    }
    result
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Multiplicative inverse of `a` modulo `m` via the extended Euclidean
/// algorithm; `None` when `gcd(a, m) != 1`.
pub fn mod_inverse(a: u128, m: u128) -> Option<u128> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u128)
}

/// Deterministic primality by trial division; fine for 32-bit inputs.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u128;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
