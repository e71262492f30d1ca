//! The consumer: bootstraps from a locally built copy of the torrent and
//! fetches in three phases. Every torrent-file segment comes first (chained
//! by next pointers), then every manifest named in the segment catalogs,
//! then every data packet named in the manifest catalogs. Phases two and
//! three issue all their interests at once when the previous phase ends.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::{build_torrent, GenerateError, TorrentParams};
use crate::ndn::{ContentType, Data, Interest, Name, NameError};
use crate::torrent::{
    classify_name, decode_manifest, decode_torrent_segment, InterestType, MalformedObject,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Idle,
    FetchingTorrentFile,
    FetchingManifests,
    FetchingData,
    Done,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Idle => "idle",
            Phase::FetchingTorrentFile => "fetching_torrent_file",
            Phase::FetchingManifests => "fetching_manifests",
            Phase::FetchingData => "fetching_data",
            Phase::Done => "done",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AppAction {
    ExpressInterest(Name),
    Completed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConsumerError {
    #[error("consumer already started")]
    AlreadyStarted,
    #[error("{0} was already requested")]
    AlreadyRequested(Name),
    #[error("cannot request {0}")]
    InvalidName(#[from] NameError),
    #[error("unsolicited data {0}")]
    UnsolicitedData(Name),
    #[error("digest mismatch: requested {expected}, received {actual}")]
    DigestMismatch { expected: Name, actual: Name },
    #[error("{name} carries {actual:?} content, expected {expected:?}")]
    UnexpectedContent {
        name: Name,
        expected: InterestType,
        actual: ContentType,
    },
    #[error("{name}: {source}")]
    Malformed { name: Name, source: MalformedObject },
    #[error("manifest {from} points to {to}, which no torrent-file segment catalogues")]
    BrokenManifestChain { from: Name, to: Name },
    #[error(transparent)]
    Generate(#[from] GenerateError),
}

#[derive(Debug, Clone)]
pub struct Consumer {
    params: TorrentParams,
    print_payloads: bool,
    first_segment_name: Option<Name>,
    phase: Phase,
    /// Pending full names keyed by wire name, so a corrupted reply can be
    /// matched to its request and rejected.
    pending: HashMap<Name, Name>,
    requested: HashSet<Name>,
    received_segments: Vec<Data>,
    received_manifests: Vec<Data>,
    received_packets: Vec<Data>,
    manifest_queue: Vec<Name>,
    queued_manifests: HashSet<Name>,
    data_queue: Vec<Name>,
    queued_packets: HashSet<Name>,
    outstanding_manifests: usize,
    expected_packets: usize,
}

impl Consumer {
    pub fn new(params: TorrentParams) -> Self {
        let expected_packets = params.total_packets();
        Consumer {
            params,
            print_payloads: false,
            first_segment_name: None,
            phase: Phase::Idle,
            pending: HashMap::new(),
            requested: HashSet::new(),
            received_segments: Vec::new(),
            received_manifests: Vec::new(),
            received_packets: Vec::new(),
            manifest_queue: Vec::new(),
            queued_manifests: HashSet::new(),
            data_queue: Vec::new(),
            queued_packets: HashSet::new(),
            outstanding_manifests: 0,
            expected_packets,
        }
    }

    /// Echo each data packet payload to stderr as it arrives.
    pub fn with_print_payloads(mut self, print: bool) -> Self {
        self.print_payloads = print;
        self
    }

    pub fn params(&self) -> &TorrentParams {
        &self.params
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn first_segment_name(&self) -> Option<&Name> {
        self.first_segment_name.as_ref()
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    /// Pending names, sorted.
    pub fn pending(&self) -> Vec<Name> {
        let mut names: Vec<Name> = self.pending.values().cloned().collect();
        names.sort();
        names
    }

    pub fn requested_count(&self) -> usize {
        self.requested.len()
    }

    pub fn received_segments(&self) -> &[Data] {
        &self.received_segments
    }

    pub fn received_manifests(&self) -> &[Data] {
        &self.received_manifests
    }

    pub fn received_packets(&self) -> &[Data] {
        &self.received_packets
    }

    pub fn manifest_queue(&self) -> &[Name] {
        &self.manifest_queue
    }

    pub fn data_queue(&self) -> &[Name] {
        &self.data_queue
    }

    /// Learns the first segment name from a local copy of the torrent and
    /// asks for it.
    pub fn start(&mut self) -> Result<Vec<AppAction>, ConsumerError> {
        if self.phase != Phase::Idle {
            return Err(ConsumerError::AlreadyStarted);
        }
        let local_copy = build_torrent(&self.params)?;
        let first = local_copy.first_segment_name;
        self.first_segment_name = Some(first.clone());
        self.phase = Phase::FetchingTorrentFile;
        Ok(vec![AppAction::ExpressInterest(first)])
    }

    /// Builds the Interest for `name` and marks it requested and pending.
    pub fn make_interest<R: RngCore + ?Sized>(
        &mut self,
        name: Name,
        rng: &mut R,
    ) -> Result<Interest, ConsumerError> {
        if self.requested.contains(&name) {
            return Err(ConsumerError::AlreadyRequested(name));
        }
        let interest = Interest::new(name.clone(), rng.next_u32())?;
        self.pending.insert(name.wire_name(), name.clone());
        self.requested.insert(name);
        Ok(interest)
    }

    pub fn on_data(&mut self, data: Data) -> Result<Vec<AppAction>, ConsumerError> {
        let Some(expected) = self.pending.get(data.wire_name()).cloned() else {
            return Err(ConsumerError::UnsolicitedData(data.full_name()));
        };
        let actual = data.full_name();
        self.pending.remove(data.wire_name());
        if actual != expected {
            // Forget the request so a retry would be accounted as fresh.
            self.requested.remove(&expected);
            if classify_name(&expected) == InterestType::FileManifestReq {
                self.outstanding_manifests -= 1;
            }
            return Err(ConsumerError::DigestMismatch { expected, actual });
        }

        let class = classify_name(&expected);
        let consistent = matches!(
            (class, data.content_type()),
            (InterestType::TorrentSegmentReq, ContentType::TorrentSegment)
                | (InterestType::FileManifestReq, ContentType::FileManifest)
                | (InterestType::DataPacketReq, ContentType::DataPacket)
        );
        if !consistent {
            return Err(ConsumerError::UnexpectedContent {
                name: expected,
                expected: class,
                actual: data.content_type(),
            });
        }

        match data.content_type() {
            ContentType::TorrentSegment => self.on_segment(expected, data),
            ContentType::FileManifest => self.on_manifest(expected, data),
            ContentType::DataPacket => Ok(self.on_packet(expected, data)),
        }
    }

    fn on_segment(&mut self, name: Name, data: Data) -> Result<Vec<AppAction>, ConsumerError> {
        let segment = decode_torrent_segment(data.payload())
            .map_err(|source| ConsumerError::Malformed { name, source })?;
        self.received_segments.push(data);
        for manifest in segment.manifest_catalog {
            if self.queued_manifests.insert(manifest.clone()) {
                self.manifest_queue.push(manifest);
            }
        }
        if let Some(next) = segment.next_segment_ptr {
            return Ok(self.unrequested([next]));
        }
        self.phase = Phase::FetchingManifests;
        let burst = self.unrequested(self.manifest_queue.clone());
        self.outstanding_manifests += burst.len();
        Ok(burst)
    }

    fn on_manifest(&mut self, name: Name, data: Data) -> Result<Vec<AppAction>, ConsumerError> {
        let manifest =
            decode_manifest(data.payload()).map_err(|source| ConsumerError::Malformed {
                name: name.clone(),
                source,
            })?;
        self.received_manifests.push(data);
        self.outstanding_manifests -= 1;
        for packet in manifest.sub_manifest_catalog {
            if self.queued_packets.insert(packet.clone()) {
                self.data_queue.push(packet);
            }
        }
        // The chain pointer is only cross-checked; catalogs drive fetching.
        if let Some(next) = manifest.next_manifest_ptr {
            if !self.queued_manifests.contains(&next) {
                return Err(ConsumerError::BrokenManifestChain {
                    from: name,
                    to: next,
                });
            }
        }
        if self.outstanding_manifests > 0 || self.phase != Phase::FetchingManifests {
            return Ok(Vec::new());
        }
        self.phase = Phase::FetchingData;
        Ok(self.unrequested(self.data_queue.clone()))
    }

    fn on_packet(&mut self, name: Name, data: Data) -> Vec<AppAction> {
        if self.print_payloads {
            eprintln!("{name}: {}", String::from_utf8_lossy(data.payload()));
        }
        self.received_packets.push(data);
        if self.phase == Phase::FetchingData && self.received_packets.len() == self.expected_packets
        {
            self.phase = Phase::Done;
            return vec![AppAction::Completed];
        }
        Vec::new()
    }

    fn unrequested(&self, names: impl IntoIterator<Item = Name>) -> Vec<AppAction> {
        names
            .into_iter()
            .filter(|n| !self.requested.contains(n))
            .map(AppAction::ExpressInterest)
            .collect()
    }
}
