//! graph6 short-form codec.
//!
//! Layout: one length byte `n + 63` (n <= 62), then the upper triangle of the
//! adjacency matrix as a bit stream — columns j = 1..n, rows i = 0..j — packed
//! into 6-bit groups, each offset by 63, zero-padded to a whole group.

use super::{Frame, FrameError};

/// The short form stops at 62 vertices; the multi-byte long form is out of scope.
pub const GRAPH6_MAX_VERTICES: usize = 62;

pub fn decode_graph6(text: &str) -> Result<Frame, FrameError> {
    let bytes = text.trim_end_matches(['\r', '\n']).as_bytes();
    if bytes.is_empty() {
        return Err(FrameError::Graph6Empty);
    }
    if bytes.starts_with(b">>") {
        return Err(FrameError::Graph6Header);
    }
    for (pos, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(FrameError::Graph6IllegalByte { pos, byte: b });
        }
    }
    if bytes[0] == 126 {
        return Err(FrameError::Graph6LongForm);
    }
    let n = (bytes[0] - 63) as usize;
    if n == 0 || n > GRAPH6_MAX_VERTICES {
        // n = 0 is legal graph6 but not a legal frame here.
        return Err(FrameError::BadVertexCount(n));
    }
    let bit_count = n * (n - 1) / 2;
    let expected = bit_count.div_ceil(6);
    let payload = &bytes[1..];
    if payload.len() != expected {
        return Err(FrameError::Graph6PayloadLength { n, expected, got: payload.len() });
    }
    let mut frame = Frame::empty(n)?;
    let mut k = 0usize; // index into the bit stream
    for j in 1..n {
        for i in 0..j {
            let group = (payload[k / 6] - 63) as u32;
            if group >> (5 - k % 6) & 1 == 1 {
                frame.adj[i] |= 1u128 << j;
                frame.adj[j] |= 1u128 << i;
            }
            k += 1;
        }
    }
    // Padding bits beyond the triangle must be zero.
    while k < expected * 6 {
        let group = (payload[k / 6] - 63) as u32;
        if group >> (5 - k % 6) & 1 == 1 {
            return Err(FrameError::Graph6Padding);
        }
        k += 1;
    }
    Ok(frame)
}

pub fn encode_graph6(frame: &Frame) -> Result<String, FrameError> {
    let n = frame.n();
    if n > GRAPH6_MAX_VERTICES {
        return Err(FrameError::Graph6TooLarge(n));
    }
    let mut out = vec![63 + n as u8];
    let mut group = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            group = group << 1 | u8::from(frame.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(63 + group);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (group << (6 - filled)));
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::Frame;

    // Frozen hand encodings:
    //   K1 -> "@"     (n byte only)
    //   K2 -> "A_"    bit (0,1)=1, padded: 100000 -> 32+63 = '_'
    //   K4 -> "C~"    all six bits set: 111111 -> 63+63 = '~'
    //   P4 -> "Ch"    bits 1,0,1,0,0,1 -> 101001 = 41 -> 'h'
    //   C4 -> "Cl"    bits 1,0,1,1,0,1 -> 101101 = 45 -> 'l'
    //   K13 (star) -> "Cs"  bits 1,1,0,1,0,0 -> 110100 = 52 -> 's'
    //   C6 -> "EhEG"  bits 101001 000110 001000
    const K1: &str = "@";
    const K2: &str = "A_";
    const K4: &str = "C~";
    const P4: &str = "Ch";
    const C4: &str = "Cl";
    const STAR4: &str = "Cs";
    const C6: &str = "EhEG";

    fn complete(n: usize) -> Frame {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Frame::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn decodes_known_strings() {
        let k1 = decode_graph6(K1).unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));

        let k2 = decode_graph6(K2).unwrap();
        assert_eq!((k2.n(), k2.edge_count()), (2, 1));
        assert!(k2.has_edge(0, 1));

        let k4 = decode_graph6(K4).unwrap();
        assert_eq!(k4, complete(4));

        let p4 = decode_graph6(P4).unwrap();
        assert_eq!(p4.edges(), vec![(0, 1), (1, 2), (2, 3)]);

        let c4 = decode_graph6(C4).unwrap();
        assert_eq!(c4.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);

        let star = decode_graph6(STAR4).unwrap();
        assert_eq!(star.edges(), vec![(0, 1), (0, 2), (0, 3)]);

        let c6 = decode_graph6(C6).unwrap();
        assert_eq!(c6.edges(), vec![(0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5)]);
    }

    #[test]
    fn encodes_known_graphs() {
        assert_eq!(encode_graph6(&complete(1)).unwrap(), K1);
        assert_eq!(encode_graph6(&complete(2)).unwrap(), K2);
        assert_eq!(encode_graph6(&complete(4)).unwrap(), K4);
        let p4 = Frame::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(encode_graph6(&p4).unwrap(), P4);
        let c6 =
            Frame::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(encode_graph6(&c6).unwrap(), C6);
    }

    #[test]
    fn round_trips_are_bit_exact() {
        for s in [K1, K2, K4, P4, C4, STAR4, C6] {
            let f = decode_graph6(s).unwrap();
            assert_eq!(encode_graph6(&f).unwrap(), s);
        }
    }

    #[test]
    fn trailing_newline_is_tolerated() {
        assert_eq!(decode_graph6("Ch\n").unwrap().n(), 4);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert_eq!(decode_graph6("").unwrap_err(), FrameError::Graph6Empty);
        assert_eq!(decode_graph6(">>graph6<<A_").unwrap_err(), FrameError::Graph6Header);
        assert!(matches!(
            decode_graph6("A ").unwrap_err(),
            FrameError::Graph6IllegalByte { pos: 1, byte: 32 }
        ));
        assert_eq!(decode_graph6("~??").unwrap_err(), FrameError::Graph6LongForm);
        assert_eq!(decode_graph6("?").unwrap_err(), FrameError::BadVertexCount(0));
        assert!(matches!(
            decode_graph6("A").unwrap_err(),
            FrameError::Graph6PayloadLength { n: 2, expected: 1, got: 0 }
        ));
        assert!(matches!(
            decode_graph6("A__").unwrap_err(),
            FrameError::Graph6PayloadLength { n: 2, expected: 1, got: 2 }
        ));
        // K2 with a stray padding bit: 100001 -> 33+63 = '`'
        assert_eq!(decode_graph6("A`").unwrap_err(), FrameError::Graph6Padding);
    }

    #[test]
    fn encode_rejects_oversized_frames() {
        let f = Frame::empty(63).unwrap();
        assert_eq!(encode_graph6(&f).unwrap_err(), FrameError::Graph6TooLarge(63));
    }
}
