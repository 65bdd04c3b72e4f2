//! Certificate graphs, bounded key stores, and node admission.
//!
//! Trust is recorded as an undirected graph: each vertex is a node together
//! with its public key, and each edge stands for the two directed
//! certificates the endpoints issued to each other. A node carries around a
//! bounded subgraph of it, its key store, and keeps that store useful with
//! the degree-greedy update in [`update_keystore`].

mod chain;
mod update;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crypto::{NodeId, NodeIdentity, Pseudonym, PublicKey};

pub use chain::{verify_chain, ChainFlaw, ChainVerification};
pub use update::{select_bounded_subgraph, update_keystore};

/// Seconds since an arbitrary epoch; the simulator uses ticks directly.
pub type Timestamp = u64;

/// Certificates default to a 30-day lifetime when none is configured.
pub const DEFAULT_CERT_LIFETIME: u64 = 30 * 24 * 60 * 60;

/// Signatures required before a newcomer joins the graph.
pub const DEFAULT_ADMISSION_THRESHOLD: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {0} is not a vertex of the graph")]
    UnknownNode(NodeId),
    #[error("chain endpoints must differ")]
    SameEndpoints,
    #[error("certificate pair endpoints do not mirror each other")]
    MismatchedPair,
    #[error("certificates must bind two distinct nodes")]
    SelfLoop,
    #[error("certificate signature does not verify")]
    BadSignature,
    #[error("certificate expires before it is issued")]
    InvertedValidity,
    #[error("vertex {0} already holds a different key")]
    KeyMismatch(NodeId),
    #[error("key store limit {limit} reached")]
    StoreFull { limit: usize },
    #[error("admission threshold must be at least 2, got {0}")]
    ThresholdTooLow(usize),
    #[error("{have} sponsors signed but {need} are required")]
    InsufficientSponsors { have: usize, need: usize },
}

/// One directed public-key certificate: `issuer` vouches for `subject`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub issuer: NodeId,
    pub subject: NodeId,
    pub subject_key: PublicKey,
    pub signature: u128,
    pub issued_at: Timestamp,
    pub expires_at: Timestamp,
}

fn certificate_payload(subject: &NodeId, key: &PublicKey, issued_at: Timestamp) -> Vec<u8> {
    let mut payload = Vec::with_capacity(32 + 16 + 16 + 8);
    payload.extend_from_slice(subject.as_bytes());
    payload.extend_from_slice(&key.modulus.to_be_bytes());
    payload.extend_from_slice(&key.exponent.to_be_bytes());
    payload.extend_from_slice(&issued_at.to_be_bytes());
    payload
}

impl Certificate {
    /// Issues and signs a certificate binding `subject` to `subject_key`.
    pub fn issue(
        issuer: &NodeIdentity,
        subject: NodeId,
        subject_key: PublicKey,
        issued_at: Timestamp,
        expires_at: Timestamp,
    ) -> Self {
        let payload = certificate_payload(&subject, &subject_key, issued_at);
        Certificate {
            issuer: issuer.id,
            subject,
            subject_key,
            signature: issuer.keypair.sign(&payload),
            issued_at,
            expires_at,
        }
    }

    /// Checks the signature under the issuer's public key.
    pub fn verify(&self, issuer_key: &PublicKey) -> bool {
        let payload = certificate_payload(&self.subject, &self.subject_key, self.issued_at);
        issuer_key.verify(&payload, self.signature)
    }

    pub fn is_expired(&self, now: Timestamp) -> bool {
        self.expires_at <= now
    }
}

/// Per-vertex data: the key, plus the last pseudonym observed for the node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexInfo {
    pub key: PublicKey,
    pub pseudonym: Option<Pseudonym>,
}

/// The two directed certificates backing one undirected edge, keyed with the
/// smaller node id first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCerts {
    pub low_to_high: Certificate,
    pub high_to_low: Certificate,
}

impl EdgeCerts {
    pub fn from_issuer(&self, issuer: &NodeId) -> Option<&Certificate> {
        if self.low_to_high.issuer == *issuer {
            Some(&self.low_to_high)
        } else if self.high_to_low.issuer == *issuer {
            Some(&self.high_to_low)
        } else {
            None
        }
    }
}

pub(crate) fn edge_key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undirected trust graph over certified public keys.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CertificateGraph {
    vertices: BTreeMap<NodeId, VertexInfo>,
    edges: BTreeMap<(NodeId, NodeId), EdgeCerts>,
}

impl CertificateGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: NodeId, key: PublicKey) -> Result<(), GraphError> {
        match self.vertices.get(&id) {
            Some(info) if info.key != key => Err(GraphError::KeyMismatch(id)),
            Some(_) => Ok(()),
            None => {
                self.vertices.insert(
                    id,
                    VertexInfo {
                        key,
                        pseudonym: None,
                    },
                );
                Ok(())
            }
        }
    }

    pub fn set_pseudonym(&mut self, id: &NodeId, pseudonym: Pseudonym) {
        if let Some(info) = self.vertices.get_mut(id) {
            info.pseudonym = Some(pseudonym);
        }
    }

    /// Inserts (or renews) the edge backed by a mirrored certificate pair.
    ///
    /// Both signatures must verify, each under the key the opposite
    /// certificate binds. Missing endpoints are added as vertices; an
    /// existing direction is replaced only by a more recent certificate.
    pub fn insert_edge(&mut self, a_to_b: Certificate, b_to_a: Certificate) -> Result<(), GraphError> {
        if a_to_b.issuer == a_to_b.subject || b_to_a.issuer == b_to_a.subject {
            return Err(GraphError::SelfLoop);
        }
        if a_to_b.issuer != b_to_a.subject || a_to_b.subject != b_to_a.issuer {
            return Err(GraphError::MismatchedPair);
        }
        if a_to_b.expires_at <= a_to_b.issued_at || b_to_a.expires_at <= b_to_a.issued_at {
            return Err(GraphError::InvertedValidity);
        }
        // Each certificate's issuer key is bound by the mirror certificate.
        if !a_to_b.verify(&b_to_a.subject_key) || !b_to_a.verify(&a_to_b.subject_key) {
            return Err(GraphError::BadSignature);
        }
        self.add_vertex(a_to_b.issuer, b_to_a.subject_key)?;
        self.add_vertex(a_to_b.subject, a_to_b.subject_key)?;
        let key = edge_key(a_to_b.issuer, a_to_b.subject);
        let (low_to_high, high_to_low) = if a_to_b.issuer == key.0 {
            (a_to_b, b_to_a)
        } else {
            (b_to_a, a_to_b)
        };
        match self.edges.get_mut(&key) {
            Some(existing) => {
                if low_to_high.issued_at >= existing.low_to_high.issued_at {
                    existing.low_to_high = low_to_high;
                }
                if high_to_low.issued_at >= existing.high_to_low.issued_at {
                    existing.high_to_low = high_to_low;
                }
            }
            None => {
                self.edges.insert(
                    key,
                    EdgeCerts {
                        low_to_high,
                        high_to_low,
                    },
                );
            }
        }
        Ok(())
    }

    pub fn contains_vertex(&self, id: &NodeId) -> bool {
        self.vertices.contains_key(id)
    }

    pub fn vertex(&self, id: &NodeId) -> Option<&VertexInfo> {
        self.vertices.get(id)
    }

    pub fn key_of(&self, id: &NodeId) -> Option<PublicKey> {
        self.vertices.get(id).map(|info| info.key)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.vertices.keys()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&NodeId, &VertexInfo)> {
        self.vertices.iter()
    }

    pub fn edge(&self, a: &NodeId, b: &NodeId) -> Option<&EdgeCerts> {
        self.edges.get(&edge_key(*a, *b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &EdgeCerts)> {
        self.edges.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v`, in canonical id order.
    pub fn neighbors<'a>(&'a self, v: &'a NodeId) -> impl Iterator<Item = NodeId> + 'a {
        self.edges.keys().filter_map(move |(a, b)| {
            if a == v {
                Some(*b)
            } else if b == v {
                Some(*a)
            } else {
                None
            }
        })
    }

    /// Number of incident edges.
    pub fn degree(&self, v: &NodeId) -> Result<usize, GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownNode(*v));
        }
        Ok(self.neighbors(v).count())
    }

    /// Union of two graphs. Certificates present on both sides are
    /// de-duplicated per direction, keeping the most recent `issued_at`;
    /// vertex annotations from `self` win over `other`'s.
    pub fn merge(&self, other: &CertificateGraph) -> CertificateGraph {
        let mut merged = self.clone();
        for (id, info) in &other.vertices {
            match merged.vertices.get_mut(id) {
                Some(existing) => {
                    if existing.pseudonym.is_none() {
                        existing.pseudonym = info.pseudonym;
                    }
                }
                None => {
                    merged.vertices.insert(*id, info.clone());
                }
            }
        }
        for (key, certs) in &other.edges {
            match merged.edges.get_mut(key) {
                Some(existing) => {
                    if certs.low_to_high.issued_at > existing.low_to_high.issued_at {
                        existing.low_to_high = certs.low_to_high.clone();
                    }
                    if certs.high_to_low.issued_at > existing.high_to_low.issued_at {
                        existing.high_to_low = certs.high_to_low.clone();
                    }
                }
                None => {
                    merged.edges.insert(*key, certs.clone());
                }
            }
        }
        merged
    }

    /// Drops every edge with an expired certificate, then drops vertices
    /// that lost all of their edges. Vertices that never had an edge stay.
    pub fn expire_unrenewed(&self, now: Timestamp) -> CertificateGraph {
        let mut pruned = self.clone();
        pruned
            .edges
            .retain(|_, certs| !certs.low_to_high.is_expired(now) && !certs.high_to_low.is_expired(now));
        let kept_incident: std::collections::BTreeSet<NodeId> = pruned
            .edges
            .keys()
            .flat_map(|(a, b)| [*a, *b])
            .collect();
        let had_edge: std::collections::BTreeSet<NodeId> = self
            .edges
            .keys()
            .flat_map(|(a, b)| [*a, *b])
            .collect();
        pruned
            .vertices
            .retain(|id, _| kept_incident.contains(id) || !had_edge.contains(id));
        pruned
    }

    /// Shortest certificate chain (fewest edges) between two vertices, or
    /// `None` when they sit in different components.
    pub fn find_chain(&self, from: &NodeId, to: &NodeId) -> Result<Option<Vec<NodeId>>, GraphError> {
        chain::find_chain(self, from, to)
    }
}

/// A node's bounded local view of the certificate graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyStore {
    owner: NodeId,
    graph: CertificateGraph,
    limit: usize,
    /// Temporal secret keys agreed with directly authenticated peers.
    temporal_keys: BTreeMap<NodeId, u128>,
}

impl KeyStore {
    pub fn new(owner: NodeId, owner_key: PublicKey, limit: usize) -> Self {
        let mut graph = CertificateGraph::new();
        graph
            .add_vertex(owner, owner_key)
            .expect("fresh graph accepts the owner");
        KeyStore {
            owner,
            graph,
            limit,
            temporal_keys: BTreeMap::new(),
        }
    }

    /// Rebuilds a store from parts, re-rooting at the owner if missing.
    pub fn from_graph(owner: NodeId, owner_key: PublicKey, graph: CertificateGraph, limit: usize) -> Self {
        let mut store = KeyStore {
            owner,
            graph,
            limit,
            temporal_keys: BTreeMap::new(),
        };
        store
            .graph
            .add_vertex(owner, owner_key)
            .expect("owner key is authoritative for the owner vertex");
        store
    }

    pub fn owner(&self) -> NodeId {
        self.owner
    }

    pub fn owner_key(&self) -> PublicKey {
        self.graph.key_of(&self.owner).expect("owner vertex always present")
    }

    pub fn graph(&self) -> &CertificateGraph {
        &self.graph
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Vertices including the owner.
    pub fn cardinality(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Stored vertices other than the owner.
    pub fn foreign_count(&self) -> usize {
        self.cardinality() - 1
    }

    /// The rotating identifier derived from the stored ids.
    pub fn pseudonym(&self) -> Pseudonym {
        crate::crypto::pseudonym_of_ids(self.graph.vertex_ids())
    }

    /// Adds a certified edge, refusing growth past the store limit.
    pub fn insert_edge(&mut self, a_to_b: Certificate, b_to_a: Certificate) -> Result<(), GraphError> {
        let mut new_vertices = 0;
        for id in [&a_to_b.issuer, &a_to_b.subject] {
            if !self.graph.contains_vertex(id) {
                new_vertices += 1;
            }
        }
        if self.foreign_count() + new_vertices > self.limit {
            return Err(GraphError::StoreFull { limit: self.limit });
        }
        self.graph.insert_edge(a_to_b, b_to_a)
    }

    /// Absorbs another store's contents under this store's limit.
    pub fn update_from(&self, other: &KeyStore) -> KeyStore {
        update_keystore(self, other, self.limit)
    }

    /// Applies certificate expiry to the local subgraph, keeping the owner.
    pub fn expire_unrenewed(&self, now: Timestamp) -> KeyStore {
        let owner_key = self.owner_key();
        let mut pruned = KeyStore::from_graph(self.owner, owner_key, self.graph.expire_unrenewed(now), self.limit);
        pruned.temporal_keys = self
            .temporal_keys
            .iter()
            .filter(|(id, _)| pruned.graph.contains_vertex(id))
            .map(|(id, k)| (*id, *k))
            .collect();
        pruned
    }

    pub fn set_temporal_key(&mut self, peer: NodeId, key: u128) {
        self.temporal_keys.insert(peer, key);
    }

    pub fn temporal_key(&self, peer: &NodeId) -> Option<u128> {
        self.temporal_keys.get(peer).copied()
    }

    pub fn temporal_keys(&self) -> impl Iterator<Item = (&NodeId, &u128)> {
        self.temporal_keys.iter()
    }

    pub fn note_pseudonym(&mut self, peer: &NodeId, pseudonym: Pseudonym) {
        self.graph.set_pseudonym(peer, pseudonym);
    }
}

/// Sponsors vouch for a newcomer; admission needs at least `threshold`
/// distinct signatures. Returns the grown graph and the sponsor-issued
/// certificates.
pub fn admit_node(
    graph: &CertificateGraph,
    newcomer: &NodeIdentity,
    sponsors: &[&NodeIdentity],
    threshold: usize,
    now: Timestamp,
    lifetime: u64,
) -> Result<(CertificateGraph, Vec<Certificate>), GraphError> {
    if threshold < DEFAULT_ADMISSION_THRESHOLD {
        return Err(GraphError::ThresholdTooLow(threshold));
    }
    let mut distinct: Vec<&NodeIdentity> = Vec::new();
    for sponsor in sponsors {
        if !graph.contains_vertex(&sponsor.id) {
            return Err(GraphError::UnknownNode(sponsor.id));
        }
        if !distinct.iter().any(|s| s.id == sponsor.id) {
            distinct.push(sponsor);
        }
    }
    if distinct.len() < threshold {
        return Err(GraphError::InsufficientSponsors {
            have: distinct.len(),
            need: threshold,
        });
    }
    let mut grown = graph.clone();
    let mut issued = Vec::with_capacity(distinct.len());
    let newcomer_key = newcomer.keypair.public();
    for sponsor in distinct {
        let sponsor_key = graph.key_of(&sponsor.id).expect("membership checked");
        let sponsor_cert = Certificate::issue(sponsor, newcomer.id, newcomer_key, now, now + lifetime);
        let return_cert = Certificate::issue(newcomer, sponsor.id, sponsor_key, now, now + lifetime);
        grown.insert_edge(sponsor_cert.clone(), return_cert)?;
        issued.push(sponsor_cert);
    }
    Ok((grown, issued))
}

#[cfg(test)]
mod tests;
