//! Binary snapshot of a [`HypercubeSubgraph`].
//!
//! Layout, all integers little-endian:
//!
//! | offset | size      | field                              |
//! |--------|-----------|------------------------------------|
//! | 0      | 4         | magic `b"QPRC"`                    |
//! | 4      | 2         | format version (`1`)               |
//! | 6      | 2         | dimension `d`                      |
//! | 8      | 8         | seed                               |
//! | 16     | 4 · 2^d   | open mask of vertex 0, 1, …, 2^d−1 |

use std::io::{Read, Write};

use crate::hypercube::HypercubeSubgraph;
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"QPRC";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 16;

pub fn write_snapshot<W: Write>(g: &HypercubeSubgraph, mut out: W) -> Result<()> {
    let mut header = [0u8; HEADER_LEN];
    header[0..4].copy_from_slice(MAGIC);
    header[4..6].copy_from_slice(&VERSION.to_le_bytes());
    header[6..8].copy_from_slice(&(g.d() as u16).to_le_bytes());
    header[8..16].copy_from_slice(&g.seed().to_le_bytes());
    out.write_all(&header)?;
    let mut body = Vec::with_capacity(4 * g.vertex_count());
    for m in g.masks() {
        body.extend_from_slice(&m.to_le_bytes());
    }
    out.write_all(&body)?;
    Ok(())
}

pub fn read_snapshot<R: Read>(mut input: R) -> Result<HypercubeSubgraph> {
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|e| Error::Snapshot(format!("header: {e}")))?;
    if &header[0..4] != MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let d = u16::from_le_bytes([header[6], header[7]]) as u32;
    let seed = u64::from_le_bytes(header[8..16].try_into().unwrap());
    if !(crate::hypercube::MIN_DIMENSION..=crate::hypercube::MAX_DIMENSION).contains(&d) {
        return Err(Error::DimensionOutOfRange(d));
    }
    let mut body = vec![0u8; 4usize << d];
    input
        .read_exact(&mut body)
        .map_err(|e| Error::Snapshot(format!("body: {e}")))?;
    let masks = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    HypercubeSubgraph::from_masks(d, masks, seed).map_err(|e| Error::Snapshot(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{generate, GenerationParams};

    #[test]
    fn byte_layout() {
        let g = HypercubeSubgraph::full(2).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&g, &mut buf).unwrap();
        assert_eq!(
            buf,
            [
                b'Q', b'P', b'R', b'C', 1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, //
                3, 0, 0, 0, 3, 0, 0, 0, 3, 0, 0, 0, 3, 0, 0, 0
            ]
        );
    }

    #[test]
    fn roundtrip_and_rejects_corruption() {
        let g = generate(&GenerationParams::new(9, 0.3, 0xABCD)).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&g, &mut buf).unwrap();
        assert_eq!(buf.len(), HEADER_LEN + 4 * 512);
        let back = read_snapshot(&buf[..]).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.seed(), 0xABCD);

        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_snapshot(&bad[..]).is_err());
        let mut asym = buf.clone();
        asym[HEADER_LEN] ^= 1;
        assert!(read_snapshot(&asym[..]).is_err());
        assert!(read_snapshot(&buf[..buf.len() - 1]).is_err());
    }
}
