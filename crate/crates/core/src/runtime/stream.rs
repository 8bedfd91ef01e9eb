//! Framed bit streams over a single edge direction.
//!
//! Records are either fixed-size (both ends know the width) or variable-size
//! with a self-delimiting length prefix (ancestor lists, sketches, tables).
//! Either way the stream is cut into chunks of at most one round's budget.

use std::collections::VecDeque;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::runtime::bits::{BitReader, BitWriter, Bits};

/// How record boundaries are recovered from the bit stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framing {
    /// Every record has exactly this many bits.
    Fixed(usize),
    /// Length prefix written in groups of this many bits.
    Varint(usize),
}

impl Framing {
    /// Variable framing with groups of one word.
    pub fn words(wb: usize) -> Self {
        Framing::Varint(wb.max(2))
    }

    /// Bits a record occupies on the wire, header included.
    pub fn framed_len(&self, record_bits: usize) -> usize {
        match *self {
            Framing::Fixed(_) => record_bits,
            Framing::Varint(g) => {
                let mut groups = 1;
                let mut v = record_bits >> g;
                while v != 0 {
                    groups += 1;
                    v >>= g;
                }
                groups * (g + 1) + record_bits
            }
        }
    }
}

/// Outgoing side: queue records, drain one chunk per round.
#[derive(Debug, Clone)]
pub struct OutStream {
    framing: Framing,
    buf: Bits,
    head: usize,
}

impl OutStream {
    pub fn new(framing: Framing) -> Self {
        OutStream { framing, buf: Bits::new(), head: 0 }
    }

    pub fn push_record(&mut self, record: &BitSlice<u8, Msb0>) -> Result<()> {
        match self.framing {
            Framing::Fixed(w) => {
                if record.len() != w {
                    return Err(Error::Protocol(format!(
                        "record of {} bits on a stream of fixed {w}-bit records",
                        record.len()
                    )));
                }
            }
            Framing::Varint(g) => {
                let mut w = BitWriter::new();
                w.put_varint(record.len() as u64, g);
                let header = w.finish()?;
                self.buf.extend_from_bitslice(&header);
            }
        }
        self.buf.extend_from_bitslice(record);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.head == self.buf.len()
    }

    pub fn pending_bits(&self) -> usize {
        self.buf.len() - self.head
    }

    /// Takes up to `budget` bits off the front.
    pub fn next_chunk(&mut self, budget: usize) -> Option<Bits> {
        if self.is_empty() {
            return None;
        }
        let end = (self.head + budget).min(self.buf.len());
        let chunk = self.buf[self.head..end].to_bitvec();
        self.head = end;
        if self.head == self.buf.len() {
            self.buf.clear();
            self.head = 0;
        } else if self.head > 1 << 16 {
            self.buf = self.buf[self.head..].to_bitvec();
            self.head = 0;
        }
        Some(chunk)
    }
}

/// Incoming side: accumulate chunks, pop complete records.
#[derive(Debug, Clone)]
pub struct InStream {
    framing: Framing,
    buf: Bits,
    records: VecDeque<Bits>,
}

impl InStream {
    pub fn new(framing: Framing) -> Self {
        InStream { framing, buf: Bits::new(), records: VecDeque::new() }
    }

    pub fn feed(&mut self, chunk: &BitSlice<u8, Msb0>) {
        self.buf.extend_from_bitslice(chunk);
        loop {
            let (start, len) = match self.framing {
                Framing::Fixed(w) => (0, w),
                Framing::Varint(g) => {
                    let mut r = BitReader::new(&self.buf);
                    let Some(len) = r.try_varint(g) else { break };
                    (r.position(), len as usize)
                }
            };
            if len == 0 && matches!(self.framing, Framing::Fixed(_)) {
                break;
            }
            let end = start + len;
            if self.buf.len() < end {
                break;
            }
            self.records.push_back(self.buf[start..end].to_bitvec());
            self.buf = self.buf[end..].to_bitvec();
        }
    }

    pub fn pop(&mut self) -> Option<Bits> {
        self.records.pop_front()
    }

    pub fn has_record(&self) -> bool {
        !self.records.is_empty()
    }

    /// True when no partial record is buffered.
    pub fn is_idle(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn expect_idle(&self, what: &str) -> Result<()> {
        if self.is_idle() {
            Ok(())
        } else {
            Err(Error::Protocol(format!("{what}: {} stray bits left in stream", self.buf.len())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(len: usize, seed: u8) -> Bits {
        (0..len).map(|i| (i as u8 ^ seed) % 3 == 0).collect()
    }

    #[test]
    fn chunks_roundtrip() {
        let framing = Framing::Varint(3);
        let mut out = OutStream::new(framing);
        let records = vec![rec(0, 1), rec(5, 2), rec(200, 3), rec(64, 4)];
        for r in &records {
            out.push_record(r).unwrap();
        }
        let total = out.pending_bits();
        assert_eq!(total, records.iter().map(|r| framing.framed_len(r.len())).sum::<usize>());
        let mut inp = InStream::new(framing);
        let mut got = Vec::new();
        while let Some(chunk) = out.next_chunk(7) {
            assert!(chunk.len() <= 7);
            inp.feed(&chunk);
            while let Some(r) = inp.pop() {
                got.push(r);
            }
        }
        assert_eq!(got, records);
        assert!(inp.is_idle());
    }

    #[test]
    fn fixed_records() {
        let mut out = OutStream::new(Framing::Fixed(5));
        assert!(out.push_record(&rec(4, 0)).is_err());
        out.push_record(&rec(5, 1)).unwrap();
        out.push_record(&rec(5, 2)).unwrap();
        let mut inp = InStream::new(Framing::Fixed(5));
        let first = out.next_chunk(6).unwrap();
        inp.feed(&first);
        assert_eq!(inp.pop(), Some(rec(5, 1)));
        assert!(!inp.is_idle());
        inp.feed(&out.next_chunk(6).unwrap());
        assert_eq!(inp.pop(), Some(rec(5, 2)));
        assert!(out.is_empty());
    }
}
