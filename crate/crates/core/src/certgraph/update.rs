//! Degree-greedy key store update.
//!
//! After two stores are merged, the owner rebuilds its store from scratch:
//! starting from itself, it repeatedly scans its current members and admits
//! the not-yet-admitted union-neighbor of highest union degree, together
//! with the connecting edge, while the store stays below `lim` vertices.
//! Preferring high-degree vertices keeps the store biased toward hubs,
//! which is what makes two random stores likely to intersect.

use crate::crypto::NodeId;

use super::{CertificateGraph, KeyStore};

/// Rebuilds `own` from the union of both stores, bounded by `lim` total
/// vertices (owner included).
///
/// Ties on degree are broken by canonical id order. Scanning repeats until
/// a full pass admits nothing, so with a generous `lim` every vertex of the
/// owner's union component is picked up.
pub fn update_keystore(own: &KeyStore, other: &KeyStore, lim: usize) -> KeyStore {
    let union = own.graph().merge(other.graph());
    let selected = select_bounded_subgraph(&union, own.owner(), lim);
    let mut updated = KeyStore::from_graph(own.owner(), own.owner_key(), selected, lim);
    for (peer, key) in own.temporal_keys() {
        if updated.graph.contains_vertex(peer) {
            updated.temporal_keys.insert(*peer, *key);
        }
    }
    updated
}

/// The greedy selection itself, as a pure function of the union graph.
pub fn select_bounded_subgraph(union: &CertificateGraph, owner: NodeId, lim: usize) -> CertificateGraph {
    let mut selected = CertificateGraph::new();
    let owner_key = match union.key_of(&owner) {
        Some(key) => key,
        None => return selected,
    };
    selected
        .add_vertex(owner, owner_key)
        .expect("empty graph accepts the owner");
    if let Some(info) = union.vertex(&owner) {
        if let Some(pseu) = info.pseudonym {
            selected.set_pseudonym(&owner, pseu);
        }
    }
    let mut members: Vec<NodeId> = vec![owner];
    loop {
        let mut admitted_any = false;
        let mut index = 0;
        while index < members.len() {
            let member = members[index];
            index += 1;
            if selected.vertex_count() >= lim {
                return selected;
            }
            // Candidates: union neighbors not yet in the store, best
            // degree first, canonical id order within a degree tie.
            let mut candidates: Vec<(usize, NodeId)> = union
                .neighbors(&member)
                .filter(|n| !selected.contains_vertex(n))
                .map(|n| (union.degree(&n).expect("union neighbor exists"), n))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let best = candidates.iter().map(|(d, _)| *d).max().expect("non-empty");
            candidates.retain(|(d, _)| *d == best);
            candidates.sort_by_key(|(_, id)| *id);
            for (_, candidate) in candidates {
                if selected.vertex_count() >= lim {
                    return selected;
                }
                let certs = union
                    .edge(&member, &candidate)
                    .expect("candidate is a union neighbor")
                    .clone();
                selected
                    .insert_edge(certs.low_to_high, certs.high_to_low)
                    .expect("union edges are valid");
                if let Some(info) = union.vertex(&candidate) {
                    if let Some(pseu) = info.pseudonym {
                        selected.set_pseudonym(&candidate, pseu);
                    }
                }
                members.push(candidate);
                admitted_any = true;
            }
        }
        if !admitted_any {
            return selected;
        }
    }
}
