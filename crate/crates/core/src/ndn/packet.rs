//! Interest and Data packets and their wire codec.

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};
use thiserror::Error;

use super::name::{Digest, Name, NameError};
use super::tlv::{self, TlvError, TlvReader};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed packet: {0}")]
pub struct MalformedPacket(#[from] pub TlvError);

/// SHA-256 over `bytes`.
pub fn compute_implicit_digest(bytes: &[u8]) -> Digest {
    Digest(Sha256::digest(bytes).into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentType {
    TorrentSegment,
    FileManifest,
    DataPacket,
}

impl ContentType {
    pub fn code(self) -> u8 {
        match self {
            ContentType::TorrentSegment => 0,
            ContentType::FileManifest => 1,
            ContentType::DataPacket => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<ContentType> {
        match code {
            0 => Some(ContentType::TorrentSegment),
            1 => Some(ContentType::FileManifest),
            2 => Some(ContentType::DataPacket),
            _ => None,
        }
    }
}

/// A request for one Data packet, always addressed by full name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interest {
    name: Name,
    nonce: u32,
}

impl Interest {
    pub fn new(name: Name, nonce: u32) -> Result<Interest, NameError> {
        if !name.is_full() {
            return Err(NameError::NotFull(name.to_string()));
        }
        Ok(Interest { name, nonce })
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn nonce(&self) -> u32 {
        self.nonce
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        let mark = tlv::begin_block(&mut buf, tlv::INTEREST);
        self.name.encode_into(&mut buf);
        tlv::put_block(&mut buf, tlv::NONCE, &self.nonce.to_be_bytes());
        tlv::end_block(&mut buf, mark);
        buf
    }

    fn decode_value(value: &[u8]) -> Result<Interest, TlvError> {
        let mut r = TlvReader::new(value);
        let name = Name::decode_block(&mut r)?;
        let nonce = u32::from_be_bytes(tlv::expect_fixed(r.expect(tlv::NONCE)?, "nonce")?);
        r.finish()?;
        Interest::new(name, nonce).map_err(|e| TlvError::Invalid {
            field: "interest name",
            reason: e.to_string(),
        })
    }
}

/// A named, immutable piece of content.
///
/// The Data carries only its wire name; the full name appends the
/// implicit digest of the encoded packet, so it is never self-contained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Data {
    wire_name: Name,
    content_type: ContentType,
    payload: Vec<u8>,
}

impl Data {
    pub fn new(
        wire_name: Name,
        content_type: ContentType,
        payload: Vec<u8>,
    ) -> Result<Data, NameError> {
        if wire_name.is_full() {
            return Err(NameError::UnexpectedDigest(wire_name.to_string()));
        }
        Ok(Data {
            wire_name,
            content_type,
            payload,
        })
    }

    pub fn wire_name(&self) -> &Name {
        &self.wire_name
    }

    pub fn content_type(&self) -> ContentType {
        self.content_type
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.payload.len() + 64);
        let mark = tlv::begin_block(&mut buf, tlv::DATA);
        self.wire_name.encode_into(&mut buf);
        tlv::put_block(&mut buf, tlv::CONTENT_TYPE, &[self.content_type.code()]);
        tlv::put_block(&mut buf, tlv::PAYLOAD, &self.payload);
        tlv::end_block(&mut buf, mark);
        buf
    }

    pub fn implicit_digest(&self) -> Digest {
        compute_implicit_digest(&self.encode())
    }

    pub fn full_name(&self) -> Name {
        self.wire_name
            .with_digest(&self.implicit_digest())
            .expect("Data wire names never carry a digest")
    }

    fn decode_value(value: &[u8]) -> Result<Data, TlvError> {
        let mut r = TlvReader::new(value);
        let wire_name = Name::decode_block(&mut r)?;
        let [code] = tlv::expect_fixed::<1>(r.expect(tlv::CONTENT_TYPE)?, "content type")?;
        let content_type = ContentType::from_code(code).ok_or_else(|| TlvError::Invalid {
            field: "content type",
            reason: format!("unknown code {code}"),
        })?;
        let payload = r.expect(tlv::PAYLOAD)?.to_vec();
        r.finish()?;
        Data::new(wire_name, content_type, payload).map_err(|e| TlvError::Invalid {
            field: "data name",
            reason: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Packet {
    Interest(Interest),
    Data(Data),
}

impl Packet {
    pub fn encode(&self) -> Vec<u8> {
        match self {
            Packet::Interest(i) => i.encode(),
            Packet::Data(d) => d.encode(),
        }
    }
}

impl From<Interest> for Packet {
    fn from(i: Interest) -> Packet {
        Packet::Interest(i)
    }
}

impl From<Data> for Packet {
    fn from(d: Data) -> Packet {
        Packet::Data(d)
    }
}

pub fn encode_packet(packet: &Packet) -> Vec<u8> {
    packet.encode()
}

/// Decodes exactly one Interest or Data block; anything else is rejected.
pub fn decode_packet(bytes: &[u8]) -> Result<Packet, MalformedPacket> {
    let mut r = TlvReader::new(bytes);
    let (typ, value) = r.read_block()?;
    r.finish()?;
    let packet = match typ {
        tlv::INTEREST => Packet::Interest(Interest::decode_value(value)?),
        tlv::DATA => Packet::Data(Data::decode_value(value)?),
        found => {
            return Err(MalformedPacket(TlvError::Invalid {
                field: "packet type",
                reason: format!("unknown type code {found:#04x}"),
            }))
        }
    };
    Ok(packet)
}
