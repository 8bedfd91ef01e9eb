//! Bit-level message encoding. Every field that crosses an edge goes through
//! [`BitWriter`] so that the engine can meter exact sizes.

use bitvec::prelude::*;

use crate::error::{Error, Result};

pub type Bits = BitVec<u8, Msb0>;
pub type BitsRef = BitSlice<u8, Msb0>;

/// Field widths derived from the word size `wb = max(2, ceil(log2 n))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Widths {
    pub wb: usize,
}

impl Widths {
    pub fn for_n(n: usize) -> Self {
        Widths { wb: word_bits(n) }
    }

    /// Vertex ids and tree levels.
    pub fn id(&self) -> usize {
        self.wb
    }

    /// Cut sizes and other counts bounded by m < n^2.
    pub fn count(&self) -> usize {
        2 * self.wb
    }
}

/// `max(2, ceil(log2 n))`. The floor lets a two-bit message tag plus one id
/// fit the two-word budget on the smallest graphs.
pub fn word_bits(n: usize) -> usize {
    ((usize::BITS - n.saturating_sub(1).leading_zeros()) as usize).max(2)
}

/// Appends fixed-width unsigned fields. Overflow is latched and surfaces in
/// [`BitWriter::finish`] so call sites stay linear.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bits: Bits,
    overflow: Option<(u64, usize)>,
}

impl BitWriter {
    pub fn new() -> Self {
        BitWriter::default()
    }

    pub fn put(&mut self, value: u64, width: usize) -> &mut Self {
        if width < 64 && value >> width != 0 {
            self.overflow.get_or_insert((value, width));
        }
        let start = self.bits.len();
        self.bits.resize(start + width, false);
        if width > 0 {
            let w = width.min(64);
            let v = if w < 64 { value & ((1u64 << w) - 1) } else { value };
            self.bits[start + width - w..].store_be(v);
        }
        self
    }

    pub fn put_usize(&mut self, value: usize, width: usize) -> &mut Self {
        self.put(value as u64, width)
    }

    pub fn put_bool(&mut self, b: bool) -> &mut Self {
        self.bits.push(b);
        self
    }

    pub fn put_bits(&mut self, bits: &BitsRef) -> &mut Self {
        self.bits.extend_from_bitslice(bits);
        self
    }

    /// Self-delimiting length: groups of `g` bits, each preceded by a
    /// continuation flag.
    pub fn put_varint(&mut self, value: u64, g: usize) -> &mut Self {
        let mut groups = Vec::new();
        let mut v = value;
        loop {
            groups.push(v & ((1u64 << g) - 1));
            v >>= g;
            if v == 0 {
                break;
            }
        }
        for (i, grp) in groups.iter().enumerate().rev() {
            self.put_bool(i != 0);
            self.put(*grp, g);
        }
        self
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn finish(self) -> Result<Bits> {
        match self.overflow {
            Some((v, w)) => Err(Error::Protocol(format!("value {v} does not fit in a {w}-bit field"))),
            None => Ok(self.bits),
        }
    }
}

/// Sequential reader over a bit slice.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a BitsRef,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitsRef) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn read(&mut self, width: usize) -> Result<u64> {
        if width > 64 {
            return Err(Error::Protocol(format!("field of {width} bits is wider than 64")));
        }
        if self.remaining() < width {
            return Err(Error::Protocol(format!(
                "truncated message: wanted {width} bits, {} left",
                self.remaining()
            )));
        }
        let v = if width == 0 { 0 } else { self.bits[self.pos..self.pos + width].load_be::<u64>() };
        self.pos += width;
        Ok(v)
    }

    pub fn read_usize(&mut self, width: usize) -> Result<usize> {
        Ok(self.read(width)? as usize)
    }

    pub fn read_bool(&mut self) -> Result<bool> {
        Ok(self.read(1)? == 1)
    }

    pub fn read_bits(&mut self, len: usize) -> Result<&'a BitsRef> {
        if self.remaining() < len {
            return Err(Error::Protocol("truncated message".into()));
        }
        let s = &self.bits[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    /// Reads a varint written by [`BitWriter::put_varint`]. Returns `None`
    /// when the slice ends before the value is complete.
    pub fn try_varint(&mut self, g: usize) -> Option<u64> {
        let start = self.pos;
        let mut v = 0u64;
        loop {
            if self.remaining() < 1 + g {
                self.pos = start;
                return None;
            }
            let more = self.read_bool().ok()?;
            v = (v << g) | self.read(g).ok()?;
            if !more {
                return Some(v);
            }
        }
    }
}

/// Packs equal-width values into one record.
pub fn pack(values: &[u64], width: usize) -> Result<Bits> {
    let mut w = BitWriter::new();
    for &x in values {
        w.put(x, width);
    }
    w.finish()
}

/// Inverse of [`pack`].
pub fn unpack(bits: &BitsRef, width: usize) -> Result<Vec<u64>> {
    if width == 0 || bits.len() % width != 0 {
        return Err(Error::Protocol(format!("record of {} bits is not a list of {width}-bit values", bits.len())));
    }
    let mut r = BitReader::new(bits);
    (0..bits.len() / width).map(|_| r.read(width)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_bits_values() {
        assert_eq!(word_bits(1), 2);
        assert_eq!(word_bits(2), 2);
        assert_eq!(word_bits(3), 2);
        assert_eq!(word_bits(4), 2);
        assert_eq!(word_bits(5), 3);
        assert_eq!(word_bits(256), 8);
        assert_eq!(word_bits(257), 9);
    }

    #[test]
    fn roundtrip_fields() {
        let mut w = BitWriter::new();
        w.put(5, 3).put_bool(true).put(0, 0).put(1023, 10).put_varint(300, 4);
        let bits = w.finish().unwrap();
        let mut r = BitReader::new(&bits);
        assert_eq!(r.read(3).unwrap(), 5);
        assert!(r.read_bool().unwrap());
        assert_eq!(r.read(10).unwrap(), 1023);
        assert_eq!(r.try_varint(4), Some(300));
        assert_eq!(r.remaining(), 0);
        assert!(r.read(1).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let mut w = BitWriter::new();
        w.put(8, 3);
        assert!(w.finish().is_err());
    }

    #[test]
    fn partial_varint() {
        let mut w = BitWriter::new();
        w.put_varint(1 << 20, 4);
        let bits = w.finish().unwrap();
        let mut r = BitReader::new(&bits[..7]);
        assert_eq!(r.try_varint(4), None);
        assert_eq!(r.position(), 0);
    }
}
