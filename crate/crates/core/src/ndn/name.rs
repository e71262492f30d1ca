//! Hierarchical NDN names and implicit-digest components.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::tlv::{self, TlvError, TlvReader};

/// Textual tag that opens every implicit-digest component.
pub const DIGEST_TAG: &str = "sha256digest=";

const DIGEST_COMPONENT_LEN: usize = DIGEST_TAG.len() + 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("a name needs at least one component")]
    Empty,
    #[error("component {0} is empty")]
    EmptyComponent(usize),
    #[error("invalid percent escape in {0:?}")]
    BadEscape(String),
    #[error("name {0} must end in a digest component")]
    NotFull(String),
    #[error("name {0} must not end in a digest component")]
    UnexpectedDigest(String),
}

/// A SHA-256 implicit digest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 32]);

impl Digest {
    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// Parses exactly 64 lowercase hex characters.
    pub fn from_hex(text: &str) -> Option<Digest> {
        if text.len() != 64 || !text.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return None;
        }
        let mut out = [0u8; 32];
        hex::decode_to_slice(text, &mut out).ok()?;
        Some(Digest(out))
    }

    /// The name component carrying this digest, `sha256digest=<hex>`.
    pub fn to_component(&self) -> Vec<u8> {
        let mut comp = Vec::with_capacity(DIGEST_COMPONENT_LEN);
        comp.extend_from_slice(DIGEST_TAG.as_bytes());
        comp.extend_from_slice(self.to_hex().as_bytes());
        comp
    }

    pub fn from_component(comp: &[u8]) -> Option<Digest> {
        if comp.len() != DIGEST_COMPONENT_LEN || !comp.starts_with(DIGEST_TAG.as_bytes()) {
            return None;
        }
        let hex = std::str::from_utf8(&comp[DIGEST_TAG.len()..]).ok()?;
        Digest::from_hex(hex)
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", self.to_hex())
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// An ordered, non-empty list of non-empty byte-string components.
///
/// A *full* name has at least two components and ends in a digest
/// component; everything before that digest is the *wire* name of the
/// Data packet it addresses.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    components: Vec<Vec<u8>>,
}

impl Name {
    pub fn new<I, C>(components: I) -> Result<Name, NameError>
    where
        I: IntoIterator<Item = C>,
        C: Into<Vec<u8>>,
    {
        let components: Vec<Vec<u8>> = components.into_iter().map(Into::into).collect();
        if components.is_empty() {
            return Err(NameError::Empty);
        }
        if let Some(idx) = components.iter().position(|c| c.is_empty()) {
            return Err(NameError::EmptyComponent(idx));
        }
        Ok(Name { components })
    }

    /// Returns a new name with `component` appended.
    pub fn append(&self, component: impl Into<Vec<u8>>) -> Result<Name, NameError> {
        let component = component.into();
        if component.is_empty() {
            return Err(NameError::EmptyComponent(self.components.len()));
        }
        let mut components = self.components.clone();
        components.push(component);
        Ok(Name { components })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn components(&self) -> &[Vec<u8>] {
        &self.components
    }

    pub fn component(&self, idx: usize) -> Option<&[u8]> {
        self.components.get(idx).map(Vec::as_slice)
    }

    /// The component at `idx` when it is valid UTF-8.
    pub fn component_str(&self, idx: usize) -> Option<&str> {
        self.component(idx)
            .and_then(|c| std::str::from_utf8(c).ok())
    }

    /// The trailing implicit digest, if this is a full name.
    pub fn digest(&self) -> Option<Digest> {
        if self.components.len() < 2 {
            return None;
        }
        Digest::from_component(self.components.last()?)
    }

    pub fn is_full(&self) -> bool {
        self.digest().is_some()
    }

    /// Splits a full name into its wire name and digest.
    pub fn split_digest(&self) -> Option<(Name, Digest)> {
        let digest = self.digest()?;
        let components = self.components[..self.components.len() - 1].to_vec();
        Some((Name { components }, digest))
    }

    /// The name without its digest component; a clone for wire names.
    pub fn wire_name(&self) -> Name {
        match self.split_digest() {
            Some((wire, _)) => wire,
            None => self.clone(),
        }
    }

    /// Appends the digest component. `self` must be a wire name.
    pub fn with_digest(&self, digest: &Digest) -> Result<Name, NameError> {
        if self.is_full() {
            return Err(NameError::UnexpectedDigest(self.to_string()));
        }
        self.append(digest.to_component())
    }

    /// The first `len` components. `len` is clamped to `1..=self.len()`.
    pub fn prefix(&self, len: usize) -> Name {
        let len = len.clamp(1, self.components.len());
        Name {
            components: self.components[..len].to_vec(),
        }
    }

    /// True when every component of `self` matches the leading components of `other`.
    pub fn is_prefix_of(&self, other: &Name) -> bool {
        self.components.len() <= other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a == b)
    }

    /// Writes the Name block (type 0x01) into `buf`.
    pub fn encode_into(&self, buf: &mut Vec<u8>) {
        let mark = tlv::begin_block(buf, tlv::NAME);
        for comp in &self.components {
            tlv::put_block(buf, tlv::COMPONENT, comp);
        }
        tlv::end_block(buf, mark);
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.encode_into(&mut buf);
        buf
    }

    /// Parses the value of a Name block: a sequence of Component blocks.
    pub fn decode_value(value: &[u8]) -> Result<Name, TlvError> {
        let mut reader = TlvReader::new(value);
        let mut components = Vec::new();
        while !reader.is_empty() {
            let comp = reader.expect(tlv::COMPONENT)?;
            components.push(comp.to_vec());
        }
        Name::new(components).map_err(|e| TlvError::Invalid {
            field: "name",
            reason: e.to_string(),
        })
    }

    /// Parses one complete Name block (header included).
    pub fn decode_block(reader: &mut TlvReader<'_>) -> Result<Name, TlvError> {
        let value = reader.expect(tlv::NAME)?;
        Name::decode_value(value)
    }
}

fn is_unreserved(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~' | b'=')
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for comp in &self.components {
            f.write_str("/")?;
            for &b in comp {
                if is_unreserved(b) {
                    write!(f, "{}", b as char)?;
                } else {
                    write!(f, "%{b:02X}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Name({self})")
    }
}

impl FromStr for Name {
    type Err = NameError;

    /// Parses the URI form produced by `Display`, e.g. `/NTORRENT/demo/file0`.
    fn from_str(s: &str) -> Result<Name, NameError> {
        let trimmed = s.strip_prefix('/').unwrap_or(s);
        if trimmed.is_empty() {
            return Err(NameError::Empty);
        }
        let mut components = Vec::new();
        for part in trimmed.split('/') {
            let mut comp = Vec::with_capacity(part.len());
            let bytes = part.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                if bytes[i] == b'%' {
                    let hex = part
                        .get(i + 1..i + 3)
                        .and_then(|h| u8::from_str_radix(h, 16).ok())
                        .ok_or_else(|| NameError::BadEscape(part.to_string()))?;
                    comp.push(hex);
                    i += 3;
                } else {
                    comp.push(bytes[i]);
                    i += 1;
                }
            }
            components.push(comp);
        }
        Name::new(components)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Name, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
