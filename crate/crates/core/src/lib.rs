//! Self-organized mutual authentication for vehicular ad-hoc networks.
//!
//! No certification authority and no roadside infrastructure: nodes certify
//! each other's public keys directly, carry bounded local views of the
//! resulting certificate graph, and authenticate peers by proving knowledge
//! of a shared key through an interactive zero-knowledge proof over
//! Hamiltonian cycles. Discovery runs over beacons carrying rotating
//! pseudonyms so that nodes cannot be tracked between encounters.
//!
//! The crate is organized around the pieces of that scheme:
//!
//! - [`crypto`]: cycle-encoded key pairs, identifiers, pseudonyms,
//!   signatures, and the authenticated envelope.
//! - [`certgraph`]: certificate graphs, chain discovery and verification,
//!   bounded key stores, and the degree-greedy store update.
//! - [`zkp`]: the interactive Hamiltonian-cycle proof.
//! - [`protocol`]: beacons, discovery, and the three-phase handshake state
//!   machine.
//! - [`sim`]: a deterministic mobility simulation that measures how key
//!   stores grow as nodes meet.
//! - [`store`]: the delimited text persistence format for node state.
//!
//! All cryptography here runs on deliberately small, hand-checkable
//! numbers. The point is the protocol structure, not key strength; do not
//! reuse the primitives for anything that needs real security.

pub mod certgraph;
pub mod crypto;
pub mod protocol;
pub mod sim;
pub mod store;
pub mod zkp;
