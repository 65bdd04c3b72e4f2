//! Encoding of Hamiltonian cycles as integers.
//!
//! A cycle on `n` vertices (labeled `1..=n`) is written into the upper
//! triangle of its adjacency matrix, read in row-major order
//! `(1,2),(1,3),...,(1,n),(2,3),...,(n-1,n)`, most significant bit first.
//! The resulting integer doubles as a public-key exponent and as the
//! witness for the Hamiltonian-cycle proof.

use thiserror::Error;

/// Largest supported vertex count; `16 * 15 / 2 = 120` bits fit in a `u128`.
pub const MAX_VERTICES: u8 = 16;

/// Smallest graph that has a Hamiltonian cycle at all.
pub const MIN_VERTICES: u8 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("vertex count {0} out of range {MIN_VERTICES}..={MAX_VERTICES}")]
    BadVertexCount(u8),
    #[error("sequence is not a permutation of 1..=n (repeated or missing vertices)")]
    NotAPermutation,
    #[error("value does not fit in {width} bits for {vertex_count} vertices")]
    ValueOutOfRange { vertex_count: u8, width: u32 },
    #[error("bit pattern is not a single spanning cycle: {0}")]
    NotACycle(&'static str),
}

/// An integer whose set bits are exactly the edges of one Hamiltonian cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleEncoding {
    vertex_count: u8,
    value: u128,
}

impl CycleEncoding {
    pub fn vertex_count(&self) -> u8 {
        self.vertex_count
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    /// Decodes back into the canonical vertex sequence.
    pub fn cycle(&self) -> Vec<u8> {
        // Invariant: constructed values always decode.
        decode_cycle(self.value, self.vertex_count).expect("encoding holds a valid cycle")
    }
}

/// Number of upper-triangular adjacency entries for `n` vertices.
pub fn bit_width(vertex_count: u8) -> u32 {
    let n = vertex_count as u32;
    n * (n - 1) / 2
}

/// Row-major position of the pair `(u, v)` (1-based, `u < v`) in the upper
/// triangle. Position 0 is `(1,2)` and maps to the most significant bit.
fn pair_position(vertex_count: u8, u: u8, v: u8) -> u32 {
    debug_assert!(1 <= u && u < v && v <= vertex_count);
    let n = vertex_count as u32;
    let (u, v) = (u as u32, v as u32);
    // Entries of rows 1..u occupy (n-1) + (n-2) + ... + (n-u+1) positions.
    (u - 1) * n - u * (u - 1) / 2 + (v - u - 1)
}

/// Bit mask for the unordered pair `(u, v)` under MSB-first ordering.
pub(crate) fn pair_bit(vertex_count: u8, u: u8, v: u8) -> u128 {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    1u128 << (bit_width(vertex_count) - 1 - pair_position(vertex_count, u, v))
}

fn check_vertex_count(vertex_count: u8) -> Result<(), CycleError> {
    if !(MIN_VERTICES..=MAX_VERTICES).contains(&vertex_count) {
        return Err(CycleError::BadVertexCount(vertex_count));
    }
    Ok(())
}

/// Encodes an ordered vertex sequence as its adjacency-bit integer.
///
/// The sequence must be a permutation of `1..=n`; the closing edge back to
/// the first vertex is implied.
pub fn encode_cycle(cycle: &[u8]) -> Result<CycleEncoding, CycleError> {
    let vertex_count = cycle.len() as u8;
    check_vertex_count(vertex_count)?;
    let mut seen = vec![false; cycle.len() + 1];
    for &v in cycle {
        if v == 0 || v > vertex_count || seen[v as usize] {
            return Err(CycleError::NotAPermutation);
        }
        seen[v as usize] = true;
    }
    let mut value = 0u128;
    for i in 0..cycle.len() {
        let u = cycle[i];
        let v = cycle[(i + 1) % cycle.len()];
        value |= pair_bit(vertex_count, u, v);
    }
    Ok(CycleEncoding {
        vertex_count,
        value,
    })
}

/// Returns the edges encoded by `value`, as 1-based pairs with `u < v`.
pub fn decode_edges(value: u128, vertex_count: u8) -> Result<Vec<(u8, u8)>, CycleError> {
    check_vertex_count(vertex_count)?;
    let width = bit_width(vertex_count);
    if width < 128 && value >> width != 0 {
        return Err(CycleError::ValueOutOfRange {
            vertex_count,
            width,
        });
    }
    let mut edges = Vec::new();
    for u in 1..vertex_count {
        for v in (u + 1)..=vertex_count {
            if value & pair_bit(vertex_count, u, v) != 0 {
                edges.push((u, v));
            }
        }
    }
    Ok(edges)
}

/// Reads a Hamiltonian cycle out of an adjacency-bit integer.
///
/// The returned sequence is canonical: it starts at vertex 1 and proceeds
/// toward the smaller-labeled of vertex 1's two neighbors, so decoding is
/// deterministic for either traversal direction of the same cycle.
pub fn decode_cycle(value: u128, vertex_count: u8) -> Result<Vec<u8>, CycleError> {
    let edges = decode_edges(value, vertex_count)?;
    if edges.len() != vertex_count as usize {
        return Err(CycleError::NotACycle("edge count differs from vertex count"));
    }
    let n = vertex_count as usize;
    let mut adjacency: Vec<Vec<u8>> = vec![Vec::new(); n + 1];
    for &(u, v) in &edges {
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
    }
    if adjacency[1..].iter().any(|nbrs| nbrs.len() != 2) {
        return Err(CycleError::NotACycle("a vertex has degree other than two"));
    }
    // Walk from vertex 1 in the direction of its smaller neighbor.
    let mut sequence = Vec::with_capacity(n);
    let mut prev = 1u8;
    let mut current = *adjacency[1].iter().min().expect("degree checked");
    sequence.push(1);
    while current != 1 {
        sequence.push(current);
        let nbrs = &adjacency[current as usize];
        let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = current;
        current = next;
    }
    if sequence.len() != n {
        return Err(CycleError::NotACycle("edges form disjoint subcycles"));
    }
    Ok(sequence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_encodes_to_seven() {
        // On 3 vertices the only cycle is the complete triangle: 111 = 7.
        assert_eq!(encode_cycle(&[1, 2, 3]).unwrap().value(), 7);
        assert_eq!(encode_cycle(&[3, 1, 2]).unwrap().value(), 7);
        assert_eq!(encode_cycle(&[2, 1, 3]).unwrap().value(), 7);
    }

    #[test]
    fn four_vertex_encodings() {
        // Positions (1,2)(1,3)(1,4)(2,3)(2,4)(3,4), hand-enumerated.
        assert_eq!(encode_cycle(&[1, 2, 3, 4]).unwrap().value(), 0b101101);
        assert_eq!(encode_cycle(&[1, 3, 2, 4]).unwrap().value(), 0b011110);
    }

    #[test]
    fn rejects_bad_sequences() {
        assert_eq!(encode_cycle(&[1, 2]), Err(CycleError::BadVertexCount(2)));
        assert_eq!(encode_cycle(&[1, 2, 2]), Err(CycleError::NotAPermutation));
        assert_eq!(encode_cycle(&[1, 2, 4]), Err(CycleError::NotAPermutation));
        assert_eq!(encode_cycle(&[0, 1, 2]), Err(CycleError::NotAPermutation));
    }

    #[test]
    fn decodes_canonical_rotation() {
        assert_eq!(decode_cycle(7, 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(decode_cycle(45, 4).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn decode_rejects_degree_three() {
        // 101110 gives vertex 2 degree 3.
        assert!(matches!(
            decode_cycle(46, 4),
            Err(CycleError::NotACycle(_))
        ));
    }

    #[test]
    fn decode_rejects_out_of_range_value() {
        assert!(matches!(
            decode_cycle(1 << 6, 4),
            Err(CycleError::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn decode_rejects_disjoint_subcycles() {
        // Two triangles on 6 vertices: (1,2,3) and (4,5,6).
        let mut value = 0u128;
        for &(u, v) in &[(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)] {
            value |= pair_bit(6, u, v);
        }
        assert_eq!(
            decode_cycle(value, 6),
            Err(CycleError::NotACycle("edges form disjoint subcycles"))
        );
    }

    #[test]
    fn roundtrip_is_identity_on_small_n() {
        for n in MIN_VERTICES..=6 {
            let mut order: Vec<u8> = (1..=n).collect();
            // A few fixed shuffles; the exhaustive sweep lives in the
            // acceptance suite.
            for rot in 0..n as usize {
                order.rotate_left(1);
                let enc = encode_cycle(&order).unwrap();
                let decoded = decode_cycle(enc.value(), n).unwrap();
                let again = encode_cycle(&decoded).unwrap();
                assert_eq!(enc.value(), again.value(), "rotation {rot} n {n}");
            }
        }
    }
}
