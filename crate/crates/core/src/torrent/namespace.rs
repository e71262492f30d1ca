//! The nTorrent name layout:
//!
//! ```text
//! /NTORRENT/<torrent>/torrent-file/<segment#>/<digest>
//! /NTORRENT/<torrent>/<file>/manifest/<manifest#>/<digest>
//! /NTORRENT/<torrent>/<file>/data/<packet#>/<digest>
//! ```
//!
//! Sequence numbers are decimal text components.

use crate::ndn::{Name, NameError};

pub const ROOT: &str = "NTORRENT";
pub const TORRENT_FILE: &str = "torrent-file";
pub const MANIFEST: &str = "manifest";
pub const DATA: &str = "data";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterestType {
    TorrentSegmentReq,
    FileManifestReq,
    DataPacketReq,
    Unknown,
}

/// `/NTORRENT/<torrent>`, the prefix a producer serves.
pub fn torrent_prefix(torrent: &str) -> Result<Name, NameError> {
    Name::new([ROOT, torrent])
}

pub fn segment_name(torrent: &str, segment: u64) -> Result<Name, NameError> {
    Name::new([
        ROOT.to_string(),
        torrent.to_string(),
        TORRENT_FILE.to_string(),
        segment.to_string(),
    ])
}

pub fn manifest_name(torrent: &str, file_path: &str, manifest: u64) -> Result<Name, NameError> {
    Name::new([
        ROOT.to_string(),
        torrent.to_string(),
        file_path.to_string(),
        MANIFEST.to_string(),
        manifest.to_string(),
    ])
}

pub fn packet_name(torrent: &str, file_path: &str, packet: u64) -> Result<Name, NameError> {
    Name::new([
        ROOT.to_string(),
        torrent.to_string(),
        file_path.to_string(),
        DATA.to_string(),
        packet.to_string(),
    ])
}

/// Classifies any name by its marker components. Never fails.
pub fn classify_name(name: &Name) -> InterestType {
    let is = |idx: usize, marker: &str| name.component(idx) == Some(marker.as_bytes());
    if is(2, TORRENT_FILE) {
        InterestType::TorrentSegmentReq
    } else if is(3, MANIFEST) {
        InterestType::FileManifestReq
    } else if is(3, DATA) {
        InterestType::DataPacketReq
    } else {
        InterestType::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndn::Digest;

    fn full(s: &str) -> Name {
        s.parse::<Name>()
            .unwrap()
            .with_digest(&Digest([3; 32]))
            .unwrap()
    }

    #[test]
    fn classifies_the_three_object_kinds() {
        assert_eq!(
            classify_name(&full("/NTORRENT/t1/torrent-file/0")),
            InterestType::TorrentSegmentReq
        );
        assert_eq!(
            classify_name(&full("/NTORRENT/t1/file0/manifest/1")),
            InterestType::FileManifestReq
        );
        assert_eq!(
            classify_name(&full("/NTORRENT/t1/file0/data/7")),
            InterestType::DataPacketReq
        );
    }

    #[test]
    fn everything_else_is_unknown() {
        assert_eq!(classify_name(&"/x".parse().unwrap()), InterestType::Unknown);
        assert_eq!(
            classify_name(&full("/NTORRENT/t1/file0/other/7")),
            InterestType::Unknown
        );
        assert_eq!(
            classify_name(&full("/NTORRENT/t1/file0")),
            InterestType::Unknown
        );
    }

    #[test]
    fn builders_follow_layout() {
        assert_eq!(
            segment_name("demo", 3).unwrap().to_string(),
            "/NTORRENT/demo/torrent-file/3"
        );
        assert_eq!(
            manifest_name("demo", "file1", 0).unwrap().to_string(),
            "/NTORRENT/demo/file1/manifest/0"
        );
        assert_eq!(
            packet_name("demo", "file0", 12).unwrap().to_string(),
            "/NTORRENT/demo/file0/data/12"
        );
        assert!(torrent_prefix("").is_err());
    }
}
