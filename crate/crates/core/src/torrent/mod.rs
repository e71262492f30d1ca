//! nTorrent metadata objects and the namespace they live in.

pub mod namespace;
mod objects;

pub use namespace::{classify_name, InterestType};
pub use objects::{
    decode_manifest, decode_torrent_segment, encode_manifest, encode_torrent_segment, FileManifest,
    MalformedObject, TorrentFileSegment,
};
