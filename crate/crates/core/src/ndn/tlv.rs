//! Fixed-width TLV framing: type (1 byte), length (4 bytes big-endian), value.

use thiserror::Error;

pub const NAME: u8 = 0x01;
pub const COMPONENT: u8 = 0x02;
pub const INTEREST: u8 = 0x05;
pub const DATA: u8 = 0x06;
pub const NONCE: u8 = 0x0A;
pub const CONTENT_TYPE: u8 = 0x14;
pub const PAYLOAD: u8 = 0x15;

pub const HEADER_LEN: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TlvError {
    #[error("input ends inside a TLV header at offset {0}")]
    TruncatedHeader(usize),
    #[error("block {typ:#04x} declares {declared} bytes, only {available} remain")]
    LengthOverrun {
        typ: u8,
        declared: usize,
        available: usize,
    },
    #[error("expected block {expected:#04x}, found {found:#04x}")]
    UnexpectedType { expected: u8, found: u8 },
    #[error("missing mandatory block {0:#04x}")]
    Missing(u8),
    #[error("{0} trailing bytes after the last block")]
    TrailingBytes(usize),
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

pub fn put_block(buf: &mut Vec<u8>, typ: u8, value: &[u8]) {
    buf.push(typ);
    buf.extend_from_slice(&block_len(value.len()).to_be_bytes());
    buf.extend_from_slice(value);
}

/// Opens a block whose length is patched by [`end_block`].
pub fn begin_block(buf: &mut Vec<u8>, typ: u8) -> usize {
    buf.push(typ);
    let mark = buf.len();
    buf.extend_from_slice(&[0u8; 4]);
    mark
}

pub fn end_block(buf: &mut [u8], mark: usize) {
    let len = block_len(buf.len() - mark - 4);
    buf[mark..mark + 4].copy_from_slice(&len.to_be_bytes());
}

fn block_len(len: usize) -> u32 {
    u32::try_from(len).expect("TLV value exceeds 4 GiB")
}

/// Sequential reader over a byte slice holding consecutive blocks.
#[derive(Debug, Clone)]
pub struct TlvReader<'a> {
    buf: &'a [u8],
    offset: usize,
}

impl<'a> TlvReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        TlvReader { buf, offset: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.offset == self.buf.len()
    }

    pub fn peek_type(&self) -> Option<u8> {
        self.buf.get(self.offset).copied()
    }

    pub fn read_block(&mut self) -> Result<(u8, &'a [u8]), TlvError> {
        let rest = &self.buf[self.offset..];
        if rest.len() < HEADER_LEN {
            return Err(TlvError::TruncatedHeader(self.offset));
        }
        let typ = rest[0];
        let declared = u32::from_be_bytes([rest[1], rest[2], rest[3], rest[4]]) as usize;
        let available = rest.len() - HEADER_LEN;
        if declared > available {
            return Err(TlvError::LengthOverrun {
                typ,
                declared,
                available,
            });
        }
        self.offset += HEADER_LEN + declared;
        Ok((typ, &rest[HEADER_LEN..HEADER_LEN + declared]))
    }

    /// Reads the next block, which must have type `typ`.
    pub fn expect(&mut self, typ: u8) -> Result<&'a [u8], TlvError> {
        match self.peek_type() {
            None => Err(TlvError::Missing(typ)),
            Some(found) if found != typ => Err(TlvError::UnexpectedType {
                expected: typ,
                found,
            }),
            Some(_) => self.read_block().map(|(_, value)| value),
        }
    }

    /// Reads the next block only if it has type `typ`.
    pub fn optional(&mut self, typ: u8) -> Result<Option<&'a [u8]>, TlvError> {
        if self.peek_type() == Some(typ) {
            self.read_block().map(|(_, value)| Some(value))
        } else {
            Ok(None)
        }
    }

    pub fn finish(self) -> Result<(), TlvError> {
        match self.buf.len() - self.offset {
            0 => Ok(()),
            n => Err(TlvError::TrailingBytes(n)),
        }
    }
}

pub fn expect_fixed<const N: usize>(
    value: &[u8],
    field: &'static str,
) -> Result<[u8; N], TlvError> {
    value.try_into().map_err(|_| TlvError::Invalid {
        field,
        reason: format!("expected {N} bytes, got {}", value.len()),
    })
}
