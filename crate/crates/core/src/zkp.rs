//! Interactive proof of knowledge of a Hamiltonian cycle.
//!
//! Two nodes that share a secret key both derive the same cycle from it and
//! hide it inside their own decoy-padded witness graphs. Per round the
//! prover publishes a freshly permuted copy of its graph and the verifier
//! asks for exactly one of two things: the permutation (showing the copy is
//! faithful) or a Hamiltonian cycle in the copy (showing the prover knows
//! one). Each answer alone reveals nothing about the hidden cycle; a prover
//! without the cycle survives a round only by guessing the challenge, so
//! `r` rounds leave a cheating chance of `2^-r`.
//!
//! The permuted copy is published in the clear rather than inside a bit
//! commitment; this mirrors the protocol as deployed and is documented
//! rather than "fixed" here.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crypto::cycle::{bit_width, decode_cycle, encode_cycle, CycleError};
use crate::crypto::hashing::tagged_hash;
use crate::crypto::keys::random_vertex_order;

/// Default ZKP rounds; a cheater passes all with probability `2^-20`.
pub const DEFAULT_ROUNDS: u32 = 20;

/// Default witness-graph size.
pub const DEFAULT_WITNESS_VERTICES: u8 = 12;

/// Default fraction of non-cycle vertex pairs added as decoys.
pub const DEFAULT_DECOY_DENSITY: f64 = 0.5;

/// Unordered vertex pair, stored smaller-first. Vertices are 1-based.
pub type Edge = (u8, u8);

pub fn edge(u: u8, v: u8) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZkpError {
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("decoy density {0} is not within 0..=1")]
    BadDensity(f64),
}

/// A graph together with the Hamiltonian cycle hidden inside it. The cycle
/// is the prover's witness and never leaves this structure unpermuted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessGraph {
    vertex_count: u8,
    edges: BTreeSet<Edge>,
    cycle: Vec<u8>,
}

impl WitnessGraph {
    pub fn vertex_count(&self) -> u8 {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// The embedded witness. Exposed for inspection and tests; the protocol
    /// only ever sends it through a fresh permutation.
    pub fn embedded_cycle(&self) -> &[u8] {
        &self.cycle
    }

    /// A graph whose only edges are the cycle itself makes the witness
    /// trivially readable; callers should treat such graphs as degenerate.
    pub fn has_decoys(&self) -> bool {
        self.edges.len() > self.vertex_count as usize
    }

    /// Publishes a permuted copy, keeping the permutation private.
    pub fn commit(&self, rng: &mut impl Rng) -> RoundCommitment {
        self.commit_with_permutation(random_vertex_order(self.vertex_count, rng))
    }

    /// Test hook: commit under a chosen permutation.
    pub fn commit_with_permutation(&self, permutation: Vec<u8>) -> RoundCommitment {
        debug_assert_eq!(permutation.len(), self.vertex_count as usize);
        let iso_edges = apply_permutation(&self.edges, &permutation);
        RoundCommitment {
            iso_edges,
            permutation,
        }
    }

    /// Answers a challenge: the permutation for `false`, the permuted image
    /// of the embedded cycle for `true`. Never both for one commitment.
    pub fn respond(&self, commitment: &RoundCommitment, challenge: bool) -> RoundResponse {
        if challenge {
            let image = self
                .cycle
                .iter()
                .map(|&v| commitment.permutation[(v - 1) as usize])
                .collect();
            RoundResponse::CycleInIso(image)
        } else {
            RoundResponse::Isomorphism(commitment.permutation.clone())
        }
    }
}

/// One round's published copy plus its private permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundCommitment {
    iso_edges: BTreeSet<Edge>,
    permutation: Vec<u8>,
}

impl RoundCommitment {
    pub fn iso_edges(&self) -> &BTreeSet<Edge> {
        &self.iso_edges
    }
}

/// What the prover reveals for one round: one of the two, never both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoundResponse {
    Isomorphism(Vec<u8>),
    CycleInIso(Vec<u8>),
}

/// Applies `permutation` (1-based image table) to an edge set.
pub fn apply_permutation(edges: &BTreeSet<Edge>, permutation: &[u8]) -> BTreeSet<Edge> {
    edges
        .iter()
        .map(|&(u, v)| {
            edge(
                permutation[(u - 1) as usize],
                permutation[(v - 1) as usize],
            )
        })
        .collect()
}

fn is_permutation(seq: &[u8], vertex_count: u8) -> bool {
    if seq.len() != vertex_count as usize {
        return false;
    }
    let mut sorted: Vec<u8> = seq.to_vec();
    sorted.sort_unstable();
    sorted.iter().copied().eq(1..=vertex_count)
}

/// True when `seq` visits every vertex once and each consecutive pair
/// (wrapping around) is an edge.
pub fn is_hamiltonian_cycle(seq: &[u8], vertex_count: u8, edges: &BTreeSet<Edge>) -> bool {
    if !is_permutation(seq, vertex_count) {
        return false;
    }
    (0..seq.len()).all(|i| edges.contains(&edge(seq[i], seq[(i + 1) % seq.len()])))
}

/// Derives the cycle both parties hide in their graphs from the shared key.
///
/// The key is reduced to the adjacency width of `n`; if its bits happen to
/// form a cycle that cycle is used directly, otherwise the cycle is drawn
/// from a hash-seeded shuffle of the vertices, bumping a counter until the
/// draw is valid. Both sides know the key, so both land on the same cycle.
pub fn shared_cycle_from_key(x: u128, vertex_count: u8) -> Result<Vec<u8>, CycleError> {
    let width = bit_width(vertex_count);
    let residue = if width >= 128 {
        x
    } else {
        x & ((1u128 << width) - 1)
    };
    if let Ok(cycle) = decode_cycle(residue, vertex_count) {
        return Ok(cycle);
    }
    // Force the vertex-count check even when the residue path was the one
    // to reject.
    if let Err(err @ CycleError::BadVertexCount(_)) = decode_cycle(0, vertex_count) {
        return Err(err);
    }
    let mut counter: u64 = 0;
    loop {
        let mut material = Vec::with_capacity(24);
        material.extend_from_slice(&x.to_be_bytes());
        material.extend_from_slice(&counter.to_be_bytes());
        let seed = tagged_hash("vanet.cycle-derive", &material);
        let mut derive_rng = ChaCha20Rng::from_seed(seed);
        let order = random_vertex_order(vertex_count, &mut derive_rng);
        if let Ok(encoding) = encode_cycle(&order) {
            return decode_cycle(encoding.value(), vertex_count);
        }
        counter += 1;
    }
}

/// Builds a witness graph for the shared key: the derived cycle plus decoy
/// edges sampled independently at `decoy_density` over the non-cycle pairs.
pub fn build_witness_graph(
    x: u128,
    vertex_count: u8,
    decoy_density: f64,
    rng: &mut impl Rng,
) -> Result<WitnessGraph, ZkpError> {
    if !(0.0..=1.0).contains(&decoy_density) {
        return Err(ZkpError::BadDensity(decoy_density));
    }
    let cycle = shared_cycle_from_key(x, vertex_count)?;
    let mut edges: BTreeSet<Edge> = (0..cycle.len())
        .map(|i| edge(cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect();
    for u in 1..vertex_count {
        for v in (u + 1)..=vertex_count {
            if !edges.contains(&edge(u, v)) && rng.gen_bool(decoy_density) {
                edges.insert(edge(u, v));
            }
        }
    }
    Ok(WitnessGraph {
        vertex_count,
        edges,
        cycle,
    })
}

/// Uniform challenge bit.
pub fn verifier_challenge(rng: &mut impl Rng) -> bool {
    rng.gen_bool(0.5)
}

/// Verifier side of one round.
///
/// For a `false` challenge the response must be a bijection carrying the
/// public graph exactly onto the published copy; for `true` it must be a
/// Hamiltonian cycle of the published copy. A response of the wrong kind
/// is rejected outright.
pub fn verifier_check(
    public_edges: &BTreeSet<Edge>,
    vertex_count: u8,
    iso_edges: &BTreeSet<Edge>,
    challenge: bool,
    response: &RoundResponse,
) -> bool {
    match (challenge, response) {
        (false, RoundResponse::Isomorphism(permutation)) => {
            is_permutation(permutation, vertex_count)
                && apply_permutation(public_edges, permutation) == *iso_edges
        }
        (true, RoundResponse::CycleInIso(seq)) => {
            is_hamiltonian_cycle(seq, vertex_count, iso_edges)
        }
        _ => false,
    }
}

/// Transcript of one round; structurally it can hold only one response.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub iso_edges: BTreeSet<Edge>,
    pub challenge: bool,
    pub response: RoundResponse,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct ProofOutcome {
    pub accepted: bool,
    pub rounds: Vec<RoundRecord>,
}

/// Runs `rounds` rounds locally between an honest prover and a verifier
/// that saw only `verifier_view`. Stops at the first rejected round.
pub fn run_proof(
    prover: &WitnessGraph,
    verifier_view: &BTreeSet<Edge>,
    rounds: u32,
    rng: &mut impl Rng,
) -> ProofOutcome {
    let mut records = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        let commitment = prover.commit(rng);
        let challenge = verifier_challenge(rng);
        let response = prover.respond(&commitment, challenge);
        let accepted = verifier_check(
            verifier_view,
            prover.vertex_count,
            &commitment.iso_edges,
            challenge,
            &response,
        );
        records.push(RoundRecord {
            iso_edges: commitment.iso_edges.clone(),
            challenge,
            response,
            accepted,
        });
        if !accepted {
            return ProofOutcome {
                accepted: false,
                rounds: records,
            };
        }
    }
    ProofOutcome {
        accepted: true,
        rounds: records,
    }
}

/// Adversary that knows the public graph but no Hamiltonian cycle in it.
///
/// Its only strategy is to guess the upcoming challenge: guessing `false`
/// it publishes a genuine permuted copy (and can show the permutation);
/// guessing `true` it publishes a fabricated graph around a cycle it chose
/// itself (and can show that cycle). A wrong guess leaves it with nothing
/// that verifies, so each round succeeds with probability one half.
#[derive(Debug, Clone)]
pub struct CheatingProver {
    vertex_count: u8,
    public_edges: BTreeSet<Edge>,
}

/// The cheater's prepared state for one round.
pub struct CheatRound {
    pub iso_edges: BTreeSet<Edge>,
    guessed_challenge: bool,
    prepared: Vec<u8>,
}

impl CheatingProver {
    pub fn new(vertex_count: u8, public_edges: BTreeSet<Edge>) -> Self {
        Self {
            vertex_count,
            public_edges,
        }
    }

    pub fn commit(&self, rng: &mut impl Rng) -> CheatRound {
        let guessed_challenge = rng.gen_bool(0.5);
        if guessed_challenge {
            // Fabricate a graph containing a cycle of our own choosing.
            let fake_cycle = random_vertex_order(self.vertex_count, rng);
            let mut iso_edges: BTreeSet<Edge> = (0..fake_cycle.len())
                .map(|i| edge(fake_cycle[i], fake_cycle[(i + 1) % fake_cycle.len()]))
                .collect();
            // Pad to roughly the public graph's size so the copy is not
            // rejectable on sight.
            let want = self.public_edges.len();
            for u in 1..self.vertex_count {
                for v in (u + 1)..=self.vertex_count {
                    if iso_edges.len() >= want {
                        break;
                    }
                    if !iso_edges.contains(&edge(u, v)) && rng.gen_bool(0.5) {
                        iso_edges.insert(edge(u, v));
                    }
                }
            }
            CheatRound {
                iso_edges,
                guessed_challenge,
                prepared: fake_cycle,
            }
        } else {
            let permutation = random_vertex_order(self.vertex_count, rng);
            CheatRound {
                iso_edges: apply_permutation(&self.public_edges, &permutation),
                guessed_challenge,
                prepared: permutation,
            }
        }
    }

    pub fn respond(&self, round: &CheatRound, challenge: bool, rng: &mut impl Rng) -> RoundResponse {
        match (challenge, round.guessed_challenge) {
            (false, false) => RoundResponse::Isomorphism(round.prepared.clone()),
            (true, true) => RoundResponse::CycleInIso(round.prepared.clone()),
            // Guessed wrong; nothing valid to show, send noise.
            (false, true) => RoundResponse::Isomorphism(random_vertex_order(self.vertex_count, rng)),
            (true, false) => RoundResponse::CycleInIso(random_vertex_order(self.vertex_count, rng)),
        }
    }
}

/// Runs the challenge-guessing adversary through `rounds` rounds.
pub fn run_cheating_proof(
    cheater: &CheatingProver,
    rounds: u32,
    rng: &mut impl Rng,
) -> ProofOutcome {
    let mut records = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        let round = cheater.commit(rng);
        let challenge = verifier_challenge(rng);
        let response = cheater.respond(&round, challenge, rng);
        let accepted = verifier_check(
            &cheater.public_edges,
            cheater.vertex_count,
            &round.iso_edges,
            challenge,
            &response,
        );
        records.push(RoundRecord {
            iso_edges: round.iso_edges,
            challenge,
            response,
            accepted,
        });
        if !accepted {
            return ProofOutcome {
                accepted: false,
                rounds: records,
            };
        }
    }
    ProofOutcome {
        accepted: true,
        rounds: records,
    }
}
