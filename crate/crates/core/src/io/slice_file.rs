//! Binary value-function slices.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8 | magic `HJVISLC1` |
//! | 4 | `u32` dimension count `n` |
//! | 21 × n | per dimension: `f64` lower, `f64` upper, `u32` node count, `u8` periodic flag |
//! | 8 | `f64` time |
//! | 8 × nodes | `f64` values, row-major, dimension 0 slowest |

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Axis, Grid, ScalarField};

pub const SLICE_MAGIC: &[u8; 8] = b"HJVISLC1";

/// Serializes a field. A field without a time stamp is written with time 0.
pub fn encode_slice(field: &ScalarField) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(8 + 4 + 21 * grid.ndim() + 8 + 8 * grid.len());
    out.extend_from_slice(SLICE_MAGIC);
    out.extend_from_slice(&(grid.ndim() as u32).to_le_bytes());
    for a in grid.axes() {
        out.extend_from_slice(&a.lower.to_le_bytes());
        out.extend_from_slice(&a.upper.to_le_bytes());
        out.extend_from_slice(&(a.count as u32).to_le_bytes());
        out.push(a.periodic as u8);
    }
    out.extend_from_slice(&field.time().unwrap_or(0.0).to_le_bytes());
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|e| *e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::SliceFormat(format!("truncated while reading {what}")))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().expect("8 bytes")))
    }
}

/// Parses a slice, checking the header and that the payload holds exactly
/// one value per node.
pub fn decode_slice(bytes: &[u8]) -> Result<ScalarField> {
    let mut c = Cursor { bytes, pos: 0 };
    if c.take(8, "magic")? != SLICE_MAGIC {
        return Err(Error::SliceFormat("bad magic".into()));
    }
    let n = c.u32("dimension count")? as usize;
    if n == 0 || n > crate::geom::MAX_DIMS {
        return Err(Error::SliceFormat(format!("unsupported dimension count {n}")));
    }
    let mut axes = Vec::with_capacity(n);
    for d in 0..n {
        let lower = c.f64("axis bounds")?;
        let upper = c.f64("axis bounds")?;
        let count = c.u32("axis node count")? as usize;
        let periodic = match c.take(1, "periodic flag")?[0] {
            0 => false,
            1 => true,
            b => return Err(Error::SliceFormat(format!("periodic flag {b} in dimension {d}"))),
        };
        axes.push(Axis::new(lower, upper, count, periodic));
    }
    let grid = Grid::new(axes).map_err(|e| Error::SliceFormat(e.to_string()))?;
    let time = c.f64("time")?;
    let payload = &bytes[c.pos..];
    let expected = grid.len().checked_mul(8).ok_or_else(|| Error::SliceFormat("node count overflows".into()))?;
    if payload.len() != expected {
        return Err(Error::SliceFormat(format!(
            "payload is {} bytes; header declares {} nodes ({} bytes)",
            payload.len(),
            grid.len(),
            expected
        )));
    }
    let values = payload.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes"))).collect();
    Ok(ScalarField::from_raw(Arc::new(grid), values).with_time(time))
}

pub fn write_slice(path: impl AsRef<Path>, field: &ScalarField) -> Result<()> {
    let path = path.as_ref();
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&encode_slice(field)).map_err(|e| Error::io(path, e))
}

pub fn read_slice(path: impl AsRef<Path>) -> Result<ScalarField> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| Error::io(path, e))?;
    decode_slice(&bytes)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::geom::make_grid;

    fn sample_field() -> ScalarField {
        let g = Arc::new(make_grid(&[(-1.0, 1.0, 5, false), (0.0, 6.0, 4, true)]).unwrap());
        ScalarField::from_fn(g, |x| x[0] * 3.0 - x[1]).with_time(-0.25)
    }

    #[test]
    fn header_layout() {
        let bytes = encode_slice(&sample_field());
        assert_eq!(&bytes[..8], b"HJVISLC1");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 2);
        assert_eq!(bytes.len(), 8 + 4 + 2 * 21 + 8 + 20 * 8);
        // periodic flag of dimension 1
        assert_eq!(bytes[12 + 21 + 20], 1);
    }

    #[test]
    fn length_mismatch_rejected() {
        let mut bytes = encode_slice(&sample_field());
        bytes.pop();
        assert!(matches!(decode_slice(&bytes), Err(Error::SliceFormat(_))));
        bytes.extend_from_slice(&[0; 9]);
        assert!(matches!(decode_slice(&bytes), Err(Error::SliceFormat(_))));
        assert!(decode_slice(b"HJVISLC2").is_err());
        assert!(decode_slice(b"HJV").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.bin");
        let f = sample_field();
        write_slice(&p, &f).unwrap();
        let back = read_slice(&p).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.time(), Some(-0.25));
        assert!(read_slice(dir.path().join("missing")).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_identical(
            dims in prop::collection::vec((-10.0f64..10.0, 0.1f64..5.0, 3usize..6, any::<bool>()), 1..4),
            time in any::<f64>(),
            seed in any::<u64>(),
        ) {
            let spec: Vec<_> = dims.iter().map(|(lo, w, n, p)| (*lo, lo + w, *n, *p)).collect();
            let grid = Arc::new(make_grid(&spec).unwrap());
            let mut s = seed;
            let values: Vec<f64> = (0..grid.len()).map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                f64::from_bits(s >> 2)
            }).collect();
            let field = ScalarField::from_raw(grid.clone(), values).with_time(time);
            let back = decode_slice(&encode_slice(&field)).unwrap();
            prop_assert_eq!(back.grid().axes(), grid.axes());
            prop_assert_eq!(back.time().map(f64::to_bits), Some(time.to_bits()));
            let a: Vec<u64> = back.values().iter().map(|v| v.to_bits()).collect();
            let b: Vec<u64> = field.values().iter().map(|v| v.to_bits()).collect();
            prop_assert_eq!(a, b);
        }
    }
}
