use std::collections::{HashMap, HashSet};

use ntorrent_core::apps::Producer;
use ntorrent_core::generator::{build_torrent, TorrentParams, DUMMY_BYTE};
use ntorrent_core::ndn::{compute_implicit_digest, ContentType, Data, Interest, Name};
use ntorrent_core::torrent::{
    classify_name, decode_manifest, decode_torrent_segment, InterestType,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = TorrentParams> {
    (
        1usize..=4,
        1usize..=4096,
        prop_oneof![Just(64usize), Just(256usize)],
        1usize..=4,
        1usize..=4,
    )
        .prop_map(
            |(num_files, file_size, packet_size, npm, nps)| TorrentParams {
                num_files,
                file_size,
                packet_size,
                names_per_manifest: npm,
                names_per_segment: nps,
                ..TorrentParams::default()
            },
        )
}

/// Counts by repeated subtraction instead of ceiling division.
fn chunks(mut total: usize, size: usize) -> usize {
    let mut n = 0;
    while total > 0 {
        total = total.saturating_sub(size);
        n += 1;
    }
    n
}

fn expected_counts(p: &TorrentParams) -> (usize, usize, usize) {
    let packets = chunks(p.file_size, p.packet_size);
    let manifests = p.num_files * chunks(packets, p.names_per_manifest);
    (
        p.num_files * packets,
        manifests,
        chunks(manifests, p.names_per_segment),
    )
}

/// Full name recomputed from the encoded bytes.
fn full_name_of(d: &Data) -> Name {
    let digest = compute_implicit_digest(&d.encode());
    let text = format!("{}/sha256digest={}", d.wire_name(), digest.to_hex());
    text.parse().unwrap()
}

struct Walk {
    segments: usize,
    manifests: Vec<Name>,
    packets: Vec<Name>,
}

/// Follows the chains from the first segment, resolving every name against
/// the bundle and checking the fetched object's digest.
fn walk(first: &Name, store: &HashMap<Name, Data>) -> Result<Walk, String> {
    let fetch = |n: &Name| {
        store
            .get(n)
            .cloned()
            .ok_or_else(|| format!("{n} not in bundle"))
    };
    let mut walk = Walk {
        segments: 0,
        manifests: vec![],
        packets: vec![],
    };
    let mut heads = vec![];
    let mut next = Some(first.clone());
    while let Some(name) = next {
        let d = fetch(&name)?;
        if full_name_of(&d) != name || d.content_type() != ContentType::TorrentSegment {
            return Err(format!("bad segment {name}"));
        }
        let seg = decode_torrent_segment(d.payload()).map_err(|e| e.to_string())?;
        if seg.segment_number as usize != walk.segments {
            return Err("segment numbering".into());
        }
        walk.segments += 1;
        heads.extend(seg.manifest_catalog);
        next = seg.next_segment_ptr;
    }
    let catalogued: HashSet<Name> = heads.iter().cloned().collect();
    for name in &heads {
        let d = fetch(name)?;
        if full_name_of(&d) != *name || d.content_type() != ContentType::FileManifest {
            return Err(format!("bad manifest {name}"));
        }
        let m = decode_manifest(d.payload()).map_err(|e| e.to_string())?;
        if let Some(ptr) = &m.next_manifest_ptr {
            if !catalogued.contains(ptr) {
                return Err(format!("dangling manifest pointer {ptr}"));
            }
        }
        walk.manifests.push(name.clone());
        for p in m.sub_manifest_catalog {
            let pd = fetch(&p)?;
            if full_name_of(&pd) != p || pd.content_type() != ContentType::DataPacket {
                return Err(format!("bad packet {p}"));
            }
            walk.packets.push(p);
        }
    }
    Ok(walk)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn counts_match_the_oracle(p in params()) {
        let b = build_torrent(&p).unwrap();
        let (packets, manifests, segments) = expected_counts(&p);
        prop_assert_eq!(b.data_packets.len(), packets);
        prop_assert_eq!(b.manifests.len(), manifests);
        prop_assert_eq!(b.torrent_segments.len(), segments);
        prop_assert_eq!((p.total_packets(), p.total_manifests(), p.total_segments()), (packets, manifests, segments));
    }

    #[test]
    fn chains_resolve_and_cover_everything(p in params()) {
        let b = build_torrent(&p).unwrap();
        let store: HashMap<Name, Data> = b.objects().map(|d| (full_name_of(d), d.clone())).collect();
        prop_assert_eq!(store.len(), b.len());
        let w = walk(&b.first_segment_name, &store).map_err(TestCaseError::fail)?;
        prop_assert_eq!(w.segments, b.torrent_segments.len());
        prop_assert_eq!(w.manifests.len(), b.manifests.len());
        let expected: Vec<Name> = b.data_packets.iter().map(full_name_of).collect();
        prop_assert_eq!(&w.packets, &expected);
    }

    #[test]
    fn payloads_reassemble_the_files(p in params()) {
        let b = build_torrent(&p).unwrap();
        let total: usize = b.data_packets.iter().map(|d| d.payload().len()).sum();
        prop_assert_eq!(total, p.num_files * p.file_size);
        prop_assert!(b.data_packets.iter().all(|d| d.payload().iter().all(|&x| x == DUMMY_BYTE)));
        prop_assert!(b.data_packets.iter().all(|d| d.payload().len() <= p.packet_size && !d.payload().is_empty()));
    }

    #[test]
    fn generation_is_deterministic(p in params()) {
        prop_assert_eq!(build_torrent(&p).unwrap(), build_torrent(&p).unwrap());
    }

    #[test]
    fn names_classify_by_role(p in params()) {
        let b = build_torrent(&p).unwrap();
        for d in &b.torrent_segments {
            prop_assert_eq!(classify_name(&d.full_name()), InterestType::TorrentSegmentReq);
        }
        for d in &b.manifests {
            prop_assert_eq!(classify_name(&d.full_name()), InterestType::FileManifestReq);
        }
        for d in &b.data_packets {
            prop_assert_eq!(classify_name(&d.full_name()), InterestType::DataPacketReq);
        }
    }

    #[test]
    fn producer_answers_exactly_its_bundle(p in params(), nonce in any::<u32>()) {
        let producer = Producer::from_params(&p).unwrap();
        for d in producer.bundle().objects() {
            let reply = producer.on_interest(&Interest::new(d.full_name(), nonce).unwrap());
            prop_assert_eq!(reply.as_ref(), Some(d));
        }
        let mut foreign = b"/NTORRENT/other/file0/data/0/sha256digest=".to_vec();
        foreign.extend(std::iter::repeat_n(b'0', 64));
        let foreign: Name = String::from_utf8(foreign).unwrap().parse().unwrap();
        prop_assert!(producer.on_interest(&Interest::new(foreign, nonce).unwrap()).is_none());
    }
}

#[test]
fn default_counts() {
    let b = build_torrent(&TorrentParams::default()).unwrap();
    assert_eq!(
        (
            b.data_packets.len(),
            b.manifests.len(),
            b.torrent_segments.len()
        ),
        (8, 4, 2)
    );
    assert_eq!(b.first_segment_name.component_str(2), Some("torrent-file"));
}
