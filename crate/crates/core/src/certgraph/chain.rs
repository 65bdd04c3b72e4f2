//! Certificate-chain discovery and hop-by-hop verification.

use std::collections::{BTreeMap, VecDeque};

use crate::crypto::NodeId;

use super::{CertificateGraph, GraphError, Timestamp};

/// Why a chain failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainFlaw {
    TooShort,
    UnknownVertex(NodeId),
    MissingEdge(NodeId, NodeId),
    BadSignature { hop: usize },
    Expired { hop: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainVerification {
    Valid,
    Invalid(ChainFlaw),
}

impl ChainVerification {
    pub fn is_valid(&self) -> bool {
        matches!(self, ChainVerification::Valid)
    }
}

/// Breadth-first shortest path; neighbor expansion follows canonical id
/// order so equal-length chains resolve deterministically.
pub(super) fn find_chain(
    graph: &CertificateGraph,
    from: &NodeId,
    to: &NodeId,
) -> Result<Option<Vec<NodeId>>, GraphError> {
    if from == to {
        return Err(GraphError::SameEndpoints);
    }
    for endpoint in [from, to] {
        if !graph.contains_vertex(endpoint) {
            return Err(GraphError::UnknownNode(*endpoint));
        }
    }
    let mut predecessor: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut queue = VecDeque::from([*from]);
    predecessor.insert(*from, *from);
    while let Some(current) = queue.pop_front() {
        for neighbor in graph.neighbors(&current) {
            if predecessor.contains_key(&neighbor) {
                continue;
            }
            predecessor.insert(neighbor, current);
            if neighbor == *to {
                let mut path = vec![neighbor];
                let mut step = current;
                while step != *from {
                    path.push(step);
                    step = predecessor[&step];
                }
                path.push(*from);
                path.reverse();
                return Ok(Some(path));
            }
            queue.push_back(neighbor);
        }
    }
    Ok(None)
}

/// Walks a chain the way the verifying node would: the first certificate is
/// trusted because the node issued it itself, every later one is checked
/// under the key established by the previous hop, and nothing may be
/// expired at `now`.
pub fn verify_chain(chain: &[NodeId], graph: &CertificateGraph, now: Timestamp) -> ChainVerification {
    if chain.len() < 2 {
        return ChainVerification::Invalid(ChainFlaw::TooShort);
    }
    for id in chain {
        if !graph.contains_vertex(id) {
            return ChainVerification::Invalid(ChainFlaw::UnknownVertex(*id));
        }
    }
    // The verifier knows its own key directly.
    let mut established_key = match graph.key_of(&chain[0]) {
        Some(key) => key,
        None => return ChainVerification::Invalid(ChainFlaw::UnknownVertex(chain[0])),
    };
    for (hop, window) in chain.windows(2).enumerate() {
        let (issuer, subject) = (window[0], window[1]);
        let certs = match graph.edge(&issuer, &subject) {
            Some(certs) => certs,
            None => return ChainVerification::Invalid(ChainFlaw::MissingEdge(issuer, subject)),
        };
        let cert = match certs.from_issuer(&issuer) {
            Some(cert) if cert.subject == subject => cert,
            _ => return ChainVerification::Invalid(ChainFlaw::MissingEdge(issuer, subject)),
        };
        if cert.is_expired(now) {
            return ChainVerification::Invalid(ChainFlaw::Expired { hop });
        }
        if !cert.verify(&established_key) {
            return ChainVerification::Invalid(ChainFlaw::BadSignature { hop });
        }
        established_key = cert.subject_key;
    }
    ChainVerification::Valid
}
