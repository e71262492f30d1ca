//! Wire form of torrent-file segments and file manifests.
//!
//! ```text
//! 0x80 TorrentFileSegment
//!      0x81 SegmentNumber (8 bytes BE)
//!      0x82 CatalogEntry  (value = Name block), repeated >= 1
//!      0x83 NextSegmentPtr (value = Name block), optional
//! 0x90 FileManifest
//!      0x91 ManifestNumber (8 bytes BE)
//!      0x92 FilePath (UTF-8)
//!      0x93 SubCatalogEntry (value = Name block), repeated >= 1
//!      0x94 NextManifestPtr (value = Name block), optional
//! ```

use thiserror::Error;

use crate::ndn::tlv::{self, TlvError, TlvReader};
use crate::ndn::Name;

const SEGMENT: u8 = 0x80;
const SEGMENT_NUMBER: u8 = 0x81;
const CATALOG_ENTRY: u8 = 0x82;
const NEXT_SEGMENT: u8 = 0x83;
const MANIFEST: u8 = 0x90;
const MANIFEST_NUMBER: u8 = 0x91;
const FILE_PATH: u8 = 0x92;
const SUB_CATALOG_ENTRY: u8 = 0x93;
const NEXT_MANIFEST: u8 = 0x94;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed object: {0}")]
pub struct MalformedObject(#[from] pub TlvError);

/// One link of the torrent-file chain, cataloguing file manifests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorrentFileSegment {
    pub segment_number: u64,
    pub manifest_catalog: Vec<Name>,
    pub next_segment_ptr: Option<Name>,
}

/// One link of a file's manifest chain, cataloguing data packets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileManifest {
    pub manifest_number: u64,
    pub file_path: String,
    pub sub_manifest_catalog: Vec<Name>,
    pub next_manifest_ptr: Option<Name>,
}

fn put_name_entry(buf: &mut Vec<u8>, typ: u8, name: &Name) {
    let mark = tlv::begin_block(buf, typ);
    name.encode_into(buf);
    tlv::end_block(buf, mark);
}

fn read_name_entry(value: &[u8], field: &'static str) -> Result<Name, TlvError> {
    let mut inner = TlvReader::new(value);
    let name = Name::decode_block(&mut inner)?;
    inner.finish()?;
    if !name.is_full() {
        return Err(TlvError::Invalid {
            field,
            reason: format!("{name} lacks a digest component"),
        });
    }
    Ok(name)
}

fn read_catalog(
    r: &mut TlvReader<'_>,
    typ: u8,
    field: &'static str,
) -> Result<Vec<Name>, TlvError> {
    let mut catalog = Vec::new();
    while let Some(value) = r.optional(typ)? {
        catalog.push(read_name_entry(value, field)?);
    }
    if catalog.is_empty() {
        return Err(TlvError::Missing(typ));
    }
    Ok(catalog)
}

fn read_u64(r: &mut TlvReader<'_>, typ: u8, field: &'static str) -> Result<u64, TlvError> {
    Ok(u64::from_be_bytes(tlv::expect_fixed(
        r.expect(typ)?,
        field,
    )?))
}

/// Reads the single outer block of type `typ` spanning all of `bytes`.
fn outer_block(bytes: &[u8], typ: u8) -> Result<&[u8], TlvError> {
    let mut r = TlvReader::new(bytes);
    let value = r.expect(typ)?;
    r.finish()?;
    Ok(value)
}

impl TorrentFileSegment {
    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        let mark = tlv::begin_block(&mut buf, SEGMENT);
        tlv::put_block(&mut buf, SEGMENT_NUMBER, &self.segment_number.to_be_bytes());
        for name in &self.manifest_catalog {
            put_name_entry(&mut buf, CATALOG_ENTRY, name);
        }
        if let Some(next) = &self.next_segment_ptr {
            put_name_entry(&mut buf, NEXT_SEGMENT, next);
        }
        tlv::end_block(&mut buf, mark);
        buf
    }

    pub fn decode(bytes: &[u8]) -> Result<TorrentFileSegment, MalformedObject> {
        let mut r = TlvReader::new(outer_block(bytes, SEGMENT)?);
        let segment_number = read_u64(&mut r, SEGMENT_NUMBER, "segment number")?;
        let manifest_catalog = read_catalog(&mut r, CATALOG_ENTRY, "manifest catalog entry")?;
        let next_segment_ptr = r
            .optional(NEXT_SEGMENT)?
            .map(|v| read_name_entry(v, "next segment pointer"))
            .transpose()?;
        r.finish()?;
        Ok(TorrentFileSegment {
            segment_number,
            manifest_catalog,
            next_segment_ptr,
        })
    }
}

impl FileManifest {
    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        let mark = tlv::begin_block(&mut buf, MANIFEST);
        tlv::put_block(
            &mut buf,
            MANIFEST_NUMBER,
            &self.manifest_number.to_be_bytes(),
        );
        tlv::put_block(&mut buf, FILE_PATH, self.file_path.as_bytes());
        for name in &self.sub_manifest_catalog {
            put_name_entry(&mut buf, SUB_CATALOG_ENTRY, name);
        }
        if let Some(next) = &self.next_manifest_ptr {
            put_name_entry(&mut buf, NEXT_MANIFEST, next);
        }
        tlv::end_block(&mut buf, mark);
        buf
    }

    pub fn decode(bytes: &[u8]) -> Result<FileManifest, MalformedObject> {
        let mut r = TlvReader::new(outer_block(bytes, MANIFEST)?);
        let manifest_number = read_u64(&mut r, MANIFEST_NUMBER, "manifest number")?;
        let file_path = std::str::from_utf8(r.expect(FILE_PATH)?)
            .map_err(|e| TlvError::Invalid {
                field: "file path",
                reason: e.to_string(),
            })?
            .to_string();
        let sub_manifest_catalog =
            read_catalog(&mut r, SUB_CATALOG_ENTRY, "sub-manifest catalog entry")?;
        let next_manifest_ptr = r
            .optional(NEXT_MANIFEST)?
            .map(|v| read_name_entry(v, "next manifest pointer"))
            .transpose()?;
        r.finish()?;
        Ok(FileManifest {
            manifest_number,
            file_path,
            sub_manifest_catalog,
            next_manifest_ptr,
        })
    }
}

pub fn encode_torrent_segment(segment: &TorrentFileSegment) -> Vec<u8> {
    segment.encode()
}

pub fn decode_torrent_segment(bytes: &[u8]) -> Result<TorrentFileSegment, MalformedObject> {
    TorrentFileSegment::decode(bytes)
}

pub fn encode_manifest(manifest: &FileManifest) -> Vec<u8> {
    manifest.encode()
}

pub fn decode_manifest(bytes: &[u8]) -> Result<FileManifest, MalformedObject> {
    FileManifest::decode(bytes)
}
