use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::crypto::{generate_keypair, node_id, NodeIdentity};

// Pairs chosen so that 7 (the only 3-vertex cycle encoding) stays coprime
// with (p-1)(q-1).
const PRIME_PAIRS: &[(u128, u128)] = &[
    (61, 53),
    (67, 73),
    (79, 83),
    (89, 97),
    (101, 103),
    (107, 109),
    (131, 137),
    (139, 149),
];

pub(crate) fn identity(tag: &str, index: usize) -> NodeIdentity {
    let (p, q) = PRIME_PAIRS[index % PRIME_PAIRS.len()];
    let mut rng = ChaCha20Rng::seed_from_u64(index as u64 + 1);
    let (keypair, _) = generate_keypair(p, q, 3, &mut rng).expect("toy primes admit e=7");
    NodeIdentity {
        id: node_id(tag.as_bytes()),
        keypair,
    }
}

pub(crate) fn certify(
    a: &NodeIdentity,
    b: &NodeIdentity,
    issued_at: Timestamp,
    lifetime: u64,
) -> (Certificate, Certificate) {
    (
        Certificate::issue(a, b.id, b.keypair.public(), issued_at, issued_at + lifetime),
        Certificate::issue(b, a.id, a.keypair.public(), issued_at, issued_at + lifetime),
    )
}

fn graph_of(identities: &[&NodeIdentity], edges: &[(usize, usize)], issued_at: Timestamp) -> CertificateGraph {
    let mut graph = CertificateGraph::new();
    for ident in identities {
        graph.add_vertex(ident.id, ident.keypair.public()).unwrap();
    }
    for &(i, j) in edges {
        let (ab, ba) = certify(identities[i], identities[j], issued_at, DEFAULT_CERT_LIFETIME);
        graph.insert_edge(ab, ba).unwrap();
    }
    graph
}

#[cfg(test)]
impl CertificateGraph {
    fn tamper_edge_signature(&mut self, a: &NodeId, b: &NodeId) {
        let certs = self.edges.get_mut(&edge_key(*a, *b)).expect("edge exists");
        if certs.low_to_high.issuer == *a {
            certs.low_to_high.signature ^= 1;
        } else {
            certs.high_to_low.signature ^= 1;
        }
    }
}

#[test]
fn insert_edge_validates_pair() {
    let a = identity("a", 0);
    let b = identity("b", 1);
    let c = identity("c", 2);
    let mut graph = CertificateGraph::new();
    let (ab, ba) = certify(&a, &b, 10, 100);
    graph.insert_edge(ab.clone(), ba.clone()).unwrap();
    assert_eq!(graph.edge_count(), 1);
    assert!(graph.contains_vertex(&a.id));

    // Mirror mismatch.
    let (ac, ca) = certify(&a, &c, 10, 100);
    assert_eq!(graph.insert_edge(ac, ba.clone()).unwrap_err(), GraphError::MismatchedPair);
    // Tampered signature.
    let mut forged = ab.clone();
    forged.signature ^= 1;
    assert_eq!(graph.insert_edge(forged, ba.clone()).unwrap_err(), GraphError::BadSignature);
    // Expiry before issue.
    let bad = Certificate::issue(&a, b.id, b.keypair.public(), 10, 10);
    assert_eq!(graph.insert_edge(bad, ba).unwrap_err(), GraphError::InvertedValidity);
    let _ = ca;
}

#[test]
fn merge_is_idempotent() {
    let idents: Vec<_> = (0..3).map(|i| identity(&format!("m{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    let graph = graph_of(&refs, &[(0, 1), (1, 2)], 5);
    assert_eq!(graph.merge(&graph), graph);
}

#[test]
fn merge_disjoint_adds_counts() {
    let idents: Vec<_> = (0..4).map(|i| identity(&format!("d{i}"), i)).collect();
    let left = graph_of(&[&idents[0], &idents[1]], &[(0, 1)], 5);
    let right = graph_of(&[&idents[2], &idents[3]], &[(0, 1)], 5);
    let merged = left.merge(&right);
    assert_eq!(merged.vertex_count(), 4);
    assert_eq!(merged.edge_count(), 2);
}

#[test]
fn merge_keeps_newer_certificate() {
    let a = identity("n0", 0);
    let b = identity("n1", 1);
    let old = graph_of(&[&a, &b], &[(0, 1)], 5);
    let new = graph_of(&[&a, &b], &[(0, 1)], 9);
    let merged = old.merge(&new);
    let certs = merged.edge(&a.id, &b.id).unwrap();
    assert_eq!(certs.low_to_high.issued_at, 9);
    assert_eq!(certs.high_to_low.issued_at, 9);
    assert_eq!(merged.vertex_count(), 2);
}

#[test]
fn chain_direct_and_two_hop() {
    let idents: Vec<_> = (0..3).map(|i| identity(&format!("c{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    let graph = graph_of(&refs, &[(0, 2), (2, 1)], 5);
    let direct = graph_of(&refs[..2], &[(0, 1)], 5);
    assert_eq!(
        direct.find_chain(&idents[0].id, &idents[1].id).unwrap().unwrap(),
        vec![idents[0].id, idents[1].id]
    );
    assert_eq!(
        graph.find_chain(&idents[0].id, &idents[1].id).unwrap().unwrap(),
        vec![idents[0].id, idents[2].id, idents[1].id]
    );
}

#[test]
fn chain_absent_across_components() {
    let idents: Vec<_> = (0..4).map(|i| identity(&format!("s{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    let graph = graph_of(&refs, &[(0, 1), (2, 3)], 5);
    assert_eq!(graph.find_chain(&idents[0].id, &idents[2].id).unwrap(), None);
}

#[test]
fn chain_endpoint_errors() {
    let a = identity("e0", 0);
    let b = identity("e1", 1);
    let graph = graph_of(&[&a, &b], &[(0, 1)], 5);
    let stranger = node_id(b"stranger");
    assert_eq!(
        graph.find_chain(&a.id, &stranger).unwrap_err(),
        GraphError::UnknownNode(stranger)
    );
    assert_eq!(graph.find_chain(&a.id, &a.id).unwrap_err(), GraphError::SameEndpoints);
}

#[test]
fn verify_chain_happy_and_flawed() {
    let idents: Vec<_> = (0..4).map(|i| identity(&format!("v{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    let mut graph = graph_of(&refs, &[(0, 1), (1, 2), (2, 3)], 100);
    let chain: Vec<NodeId> = idents.iter().map(|ident| ident.id).collect();

    assert!(verify_chain(&chain, &graph, 200).is_valid());
    // Expired mid-chain certificate.
    assert_eq!(
        verify_chain(&chain, &graph, 100 + DEFAULT_CERT_LIFETIME),
        ChainVerification::Invalid(ChainFlaw::Expired { hop: 0 })
    );
    // Forged signature on the middle hop.
    graph.tamper_edge_signature(&idents[1].id, &idents[2].id);
    assert_eq!(
        verify_chain(&chain, &graph, 200),
        ChainVerification::Invalid(ChainFlaw::BadSignature { hop: 1 })
    );
    assert_eq!(
        verify_chain(&chain[..1], &graph, 200),
        ChainVerification::Invalid(ChainFlaw::TooShort)
    );
}

#[test]
fn degree_counts_incident_edges() {
    let idents: Vec<_> = (0..5).map(|i| identity(&format!("g{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    // Triangle 0-1-2 plus isolated 3; star center 4 handled below.
    let mut graph = graph_of(&refs[..4], &[(0, 1), (1, 2), (0, 2)], 5);
    assert_eq!(graph.degree(&idents[3].id).unwrap(), 0);
    assert_eq!(graph.degree(&idents[0].id).unwrap(), 2);
    let stranger = node_id(b"nobody");
    assert_eq!(graph.degree(&stranger).unwrap_err(), GraphError::UnknownNode(stranger));

    // Star: center 4 with three leaves.
    graph = graph_of(&refs, &[(4, 0), (4, 1), (4, 2)], 5);
    assert_eq!(graph.degree(&idents[4].id).unwrap(), 3);
}

#[test]
fn expire_identity_and_sweep() {
    let idents: Vec<_> = (0..3).map(|i| identity(&format!("x{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    let graph = graph_of(&refs, &[(0, 1), (1, 2), (0, 2)], 100);

    // No expiries: identity.
    assert_eq!(graph.expire_unrenewed(150), graph);
    // All expired: nothing left.
    let swept = graph.expire_unrenewed(100 + DEFAULT_CERT_LIFETIME);
    assert_eq!(swept.edge_count(), 0);
    assert_eq!(swept.vertex_count(), 0);
    // Idempotent at fixed now.
    assert_eq!(swept.expire_unrenewed(100 + DEFAULT_CERT_LIFETIME), swept);
}

#[test]
fn expire_one_triangle_edge_leaves_path() {
    let idents: Vec<_> = (0..3).map(|i| identity(&format!("t{i}"), i)).collect();
    let mut graph = CertificateGraph::new();
    let short = 50u64;
    let long = 5000u64;
    let pairs = [(0, 1, long), (1, 2, long), (0, 2, short)];
    for &(i, j, lifetime) in &pairs {
        let (ab, ba) = certify(&idents[i], &idents[j], 10, lifetime);
        graph.insert_edge(ab, ba).unwrap();
    }
    let pruned = graph.expire_unrenewed(10 + short);
    assert_eq!(pruned.edge_count(), 2);
    assert_eq!(pruned.vertex_count(), 3);
    assert!(pruned.edge(&idents[0].id, &idents[2].id).is_none());
}

#[test]
fn update_keystore_worked_example() {
    // Four nodes relabeled so canonical id order matches roles B < C < D < E.
    let mut idents: Vec<_> = (0..4).map(|i| identity(&format!("u{i}"), i)).collect();
    idents.sort_by_key(|ident| ident.id);
    let (b, c, d, e) = (&idents[0], &idents[1], &idents[2], &idents[3]);

    // Union edges: BC, BD, CD, CE, DE -> degrees B=2, C=3, D=3, E=2.
    let refs = [b, c, d, e];
    let union_edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];
    let union = graph_of(&refs, &union_edges, 5);

    let selected = select_bounded_subgraph(&union, b.id, 3);
    let ids: Vec<NodeId> = selected.vertex_ids().copied().collect();
    assert_eq!(ids, vec![b.id, c.id, d.id]);
    assert_eq!(selected.edge_count(), 2);
    assert!(selected.edge(&b.id, &c.id).is_some());
    assert!(selected.edge(&b.id, &d.id).is_some());

    // With lim 2 only the canonically smaller of the degree-3 tie fits.
    let tight = select_bounded_subgraph(&union, b.id, 2);
    let ids: Vec<NodeId> = tight.vertex_ids().copied().collect();
    assert_eq!(ids, vec![b.id, c.id]);
}

#[test]
fn update_keystore_unbounded_takes_component() {
    let idents: Vec<_> = (0..5).map(|i| identity(&format!("w{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    // Path 0-1-2-3 plus vertex 4 off-component.
    let union = graph_of(&refs, &[(0, 1), (1, 2), (2, 3)], 5);
    let selected = select_bounded_subgraph(&union, idents[0].id, 100);
    assert_eq!(selected.vertex_count(), 4);
    assert!(!selected.contains_vertex(&idents[4].id));
}

#[test]
fn update_from_empty_other_rebuilds_own_tree() {
    let idents: Vec<_> = (0..4).map(|i| identity(&format!("r{i}"), i)).collect();
    let owner = &idents[0];
    let mut own = KeyStore::new(owner.id, owner.keypair.public(), 8);
    for other in &idents[1..] {
        let (ab, ba) = certify(owner, other, 5, DEFAULT_CERT_LIFETIME);
        own.insert_edge(ab, ba).unwrap();
    }
    let empty = KeyStore::new(idents[1].id, idents[1].keypair.public(), 8);
    let updated = own.update_from(&empty);
    assert_eq!(updated.graph(), own.graph());
    assert_eq!(updated.owner(), owner.id);
}

#[test]
fn keystore_enforces_limit() {
    let idents: Vec<_> = (0..4).map(|i| identity(&format!("l{i}"), i)).collect();
    let owner = &idents[0];
    let mut store = KeyStore::new(owner.id, owner.keypair.public(), 2);
    for other in &idents[1..3] {
        let (ab, ba) = certify(owner, other, 5, 100);
        store.insert_edge(ab, ba).unwrap();
    }
    let (ab, ba) = certify(owner, &idents[3], 5, 100);
    assert_eq!(store.insert_edge(ab, ba).unwrap_err(), GraphError::StoreFull { limit: 2 });
    assert_eq!(store.foreign_count(), 2);
}

#[test]
fn keystore_pseudonym_tracks_membership() {
    let idents: Vec<_> = (0..3).map(|i| identity(&format!("p{i}"), i)).collect();
    let owner = &idents[0];
    let mut store = KeyStore::new(owner.id, owner.keypair.public(), 4);
    let before = store.pseudonym();
    let (ab, ba) = certify(owner, &idents[1], 5, 100);
    store.insert_edge(ab, ba).unwrap();
    assert_ne!(store.pseudonym(), before);
}

#[test]
fn admission_thresholds() {
    let idents: Vec<_> = (0..4).map(|i| identity(&format!("a{i}"), i)).collect();
    let refs: Vec<&NodeIdentity> = idents.iter().collect();
    let graph = graph_of(&refs[..3], &[(0, 1), (1, 2)], 5);
    let newcomer = identity("newcomer", 7);

    let (grown, certs) = admit_node(&graph, &newcomer, &[refs[0], refs[1]], 2, 10, 100).unwrap();
    assert_eq!(certs.len(), 2);
    assert!(grown.contains_vertex(&newcomer.id));
    assert_eq!(grown.degree(&newcomer.id).unwrap(), 2);

    assert_eq!(
        admit_node(&graph, &newcomer, &[refs[0]], 2, 10, 100).unwrap_err(),
        GraphError::InsufficientSponsors { have: 1, need: 2 }
    );
    let (_, certs) = admit_node(&graph, &newcomer, &[refs[0], refs[1], refs[2]], 2, 10, 100).unwrap();
    assert_eq!(certs.len(), 3);
    // Duplicate sponsors collapse.
    assert_eq!(
        admit_node(&graph, &newcomer, &[refs[0], refs[0]], 2, 10, 100).unwrap_err(),
        GraphError::InsufficientSponsors { have: 1, need: 2 }
    );
    assert_eq!(
        admit_node(&graph, &newcomer, &[refs[0], refs[1]], 1, 10, 100).unwrap_err(),
        GraphError::ThresholdTooLow(1)
    );
    let outsider = identity("outsider", 6);
    assert_eq!(
        admit_node(&graph, &newcomer, &[refs[0], &outsider], 2, 10, 100).unwrap_err(),
        GraphError::UnknownNode(outsider.id)
    );
}
