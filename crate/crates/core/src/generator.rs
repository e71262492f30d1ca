//! Deterministic synthesis of a torrent: pretend files of dummy bytes,
//! their data packets, and the digest-chained manifests and torrent-file
//! segments built on top of them.
//!
//! Every object is built after the objects it names. Manifests and
//! segments are built last-first so that each next pointer can embed the
//! implicit digest of its already-encoded successor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ndn::{ContentType, Data, Name, NameError};
use crate::torrent::namespace;
use crate::torrent::{FileManifest, TorrentFileSegment};

/// Every byte of every pretend file.
pub const DUMMY_BYTE: u8 = b'A';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid torrent parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Name(#[from] NameError),
    #[error("file {0} has no packets")]
    EmptyFile(String),
    #[error("a torrent needs at least one manifest")]
    NoManifests,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorrentParams {
    pub torrent_name: String,
    pub num_files: usize,
    pub file_size: usize,
    pub packet_size: usize,
    pub names_per_manifest: usize,
    pub names_per_segment: usize,
}

impl Default for TorrentParams {
    fn default() -> Self {
        TorrentParams {
            torrent_name: "demo".into(),
            num_files: 2,
            file_size: 1024,
            packet_size: 256,
            names_per_manifest: 3,
            names_per_segment: 3,
        }
    }
}

impl TorrentParams {
    pub fn validate(&self) -> Result<(), GenerateError> {
        let counts = [
            ("num_files", self.num_files),
            ("file_size", self.file_size),
            ("packet_size", self.packet_size),
            ("names_per_manifest", self.names_per_manifest),
            ("names_per_segment", self.names_per_segment),
        ];
        if let Some((field, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(GenerateError::InvalidParams(format!(
                "{field} must be at least 1"
            )));
        }
        namespace::torrent_prefix(&self.torrent_name)?;
        Ok(())
    }

    pub fn packets_per_file(&self) -> usize {
        self.file_size.div_ceil(self.packet_size)
    }

    pub fn total_packets(&self) -> usize {
        self.num_files * self.packets_per_file()
    }

    pub fn manifests_per_file(&self) -> usize {
        self.packets_per_file().div_ceil(self.names_per_manifest)
    }

    pub fn total_manifests(&self) -> usize {
        self.num_files * self.manifests_per_file()
    }

    pub fn total_segments(&self) -> usize {
        self.total_manifests().div_ceil(self.names_per_segment)
    }
}

/// Path of the `index`-th pretend file.
pub fn file_path(index: usize) -> String {
    format!("file{index}")
}

/// The packets of one pretend file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketizedFile {
    pub path: String,
    pub packets: Vec<Data>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorrentBundle {
    pub torrent_segments: Vec<Data>,
    pub manifests: Vec<Data>,
    pub data_packets: Vec<Data>,
    /// Full name of segment 0; the identifier a consumer bootstraps from.
    pub first_segment_name: Name,
}

impl TorrentBundle {
    /// Segments, then manifests, then data packets.
    pub fn objects(&self) -> impl Iterator<Item = &Data> {
        self.torrent_segments
            .iter()
            .chain(&self.manifests)
            .chain(&self.data_packets)
    }

    pub fn len(&self) -> usize {
        self.torrent_segments.len() + self.manifests.len() + self.data_packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn generate_file_bytes(file_size: usize) -> Vec<u8> {
    vec![DUMMY_BYTE; file_size]
}

/// Splits `file` into `packet_size` chunks; the last one keeps the remainder.
pub fn packetize_file(
    file: &[u8],
    packet_size: usize,
    torrent_name: &str,
    file_path: &str,
) -> Result<Vec<Data>, GenerateError> {
    if packet_size == 0 {
        return Err(GenerateError::InvalidParams(
            "packet_size must be at least 1".into(),
        ));
    }
    file.chunks(packet_size)
        .enumerate()
        .map(|(idx, chunk)| {
            let name = namespace::packet_name(torrent_name, file_path, idx as u64)?;
            Ok(Data::new(name, ContentType::DataPacket, chunk.to_vec())?)
        })
        .collect()
}

/// Builds every file's manifest chain; output is grouped by file, in order.
pub fn build_manifests(
    files: &[PacketizedFile],
    names_per_manifest: usize,
    torrent_name: &str,
) -> Result<Vec<Data>, GenerateError> {
    if names_per_manifest == 0 {
        return Err(GenerateError::InvalidParams(
            "names_per_manifest must be at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    for file in files {
        if file.packets.is_empty() {
            return Err(GenerateError::EmptyFile(file.path.clone()));
        }
        let names: Vec<Name> = file.packets.iter().map(Data::full_name).collect();
        let catalogs: Vec<&[Name]> = names.chunks(names_per_manifest).collect();

        let mut chain = Vec::with_capacity(catalogs.len());
        let mut next: Option<Name> = None;
        for (idx, catalog) in catalogs.iter().enumerate().rev() {
            let manifest = FileManifest {
                manifest_number: idx as u64,
                file_path: file.path.clone(),
                sub_manifest_catalog: catalog.to_vec(),
                next_manifest_ptr: next.take(),
            };
            let wire = namespace::manifest_name(torrent_name, &file.path, idx as u64)?;
            let data = Data::new(wire, ContentType::FileManifest, manifest.encode())?;
            next = Some(data.full_name());
            chain.push(data);
        }
        chain.reverse();
        out.extend(chain);
    }
    Ok(out)
}

/// Builds the torrent-file chain over `manifests`, returning it with the
/// full name of segment 0.
pub fn build_torrent_segments(
    manifests: &[Data],
    names_per_segment: usize,
    torrent_name: &str,
) -> Result<(Vec<Data>, Name), GenerateError> {
    if names_per_segment == 0 {
        return Err(GenerateError::InvalidParams(
            "names_per_segment must be at least 1".into(),
        ));
    }
    if manifests.is_empty() {
        return Err(GenerateError::NoManifests);
    }
    let names: Vec<Name> = manifests.iter().map(Data::full_name).collect();
    let mut segments = Vec::new();
    let mut next: Option<Name> = None;
    for (idx, catalog) in names.chunks(names_per_segment).enumerate().rev() {
        let segment = TorrentFileSegment {
            segment_number: idx as u64,
            manifest_catalog: catalog.to_vec(),
            next_segment_ptr: next.take(),
        };
        let wire = namespace::segment_name(torrent_name, idx as u64)?;
        let data = Data::new(wire, ContentType::TorrentSegment, segment.encode())?;
        next = Some(data.full_name());
        segments.push(data);
    }
    segments.reverse();
    let first = next.expect("at least one segment was built");
    Ok((segments, first))
}

pub fn build_torrent(params: &TorrentParams) -> Result<TorrentBundle, GenerateError> {
    params.validate()?;
    let bytes = generate_file_bytes(params.file_size);
    let files = (0..params.num_files)
        .map(|idx| {
            let path = file_path(idx);
            let packets = packetize_file(&bytes, params.packet_size, &params.torrent_name, &path)?;
            Ok(PacketizedFile { path, packets })
        })
        .collect::<Result<Vec<_>, GenerateError>>()?;
    let manifests = build_manifests(&files, params.names_per_manifest, &params.torrent_name)?;
    let (torrent_segments, first_segment_name) =
        build_torrent_segments(&manifests, params.names_per_segment, &params.torrent_name)?;
    let data_packets = files.into_iter().flat_map(|f| f.packets).collect();
    Ok(TorrentBundle {
        torrent_segments,
        manifests,
        data_packets,
        first_segment_name,
    })
}
