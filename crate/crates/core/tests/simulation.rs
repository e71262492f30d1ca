use std::collections::BTreeSet;

use ntorrent_core::apps::{ConsumerError, Phase};
use ntorrent_core::generator::TorrentParams;
use ntorrent_core::ndn::Name;
use ntorrent_core::sim::{
    Failure, LinkSpec, NodeId, PacketKind, Role, RunOutcome, SimOptions, Simulation, Topology,
    TraceDir,
};

const RATE: f64 = 1e6;
const LATENCY: f64 = 0.010;

fn two_node() -> Simulation {
    let t = Topology::two_node(RATE, LATENCY).unwrap();
    Simulation::with_routes(&t, &TorrentParams::default(), SimOptions::default()).unwrap()
}

fn line(roles: &[Role], options: SimOptions) -> Simulation {
    let t = Topology::line(roles, RATE, LATENCY).unwrap();
    Simulation::with_routes(&t, &TorrentParams::default(), options).unwrap()
}

#[test]
fn default_run_completes() {
    let mut sim = two_node();
    assert_eq!(sim.run(60.0), RunOutcome::Completed);
    let c = sim.consumer(NodeId(1)).unwrap();
    assert_eq!(c.phase(), Phase::Done);
    assert_eq!(
        (
            c.received_segments().len(),
            c.received_manifests().len(),
            c.received_packets().len()
        ),
        (2, 4, 8)
    );
    assert_eq!(sim.snapshot(NodeId(1)).unwrap().counters.interests_out, 14);
    assert!(sim.completion_time().unwrap() > 0.0);
    let phases: Vec<Phase> = sim
        .phase_history(NodeId(1))
        .unwrap()
        .iter()
        .map(|p| p.phase)
        .collect();
    assert_eq!(
        phases,
        [
            Phase::FetchingTorrentFile,
            Phase::FetchingManifests,
            Phase::FetchingData,
            Phase::Done
        ]
    );
}

#[test]
fn missing_routes_leave_consumer_idle() {
    let t = Topology::two_node(RATE, LATENCY).unwrap();
    let mut sim = Simulation::new(&t, &TorrentParams::default(), SimOptions::default()).unwrap();
    assert_eq!(sim.run(60.0), RunOutcome::Idle);
    let c = sim.consumer(NodeId(1)).unwrap();
    assert_eq!(c.pending().len(), 1);
    assert!(sim.trace().is_empty());
}

#[test]
fn tiny_time_limit_times_out() {
    let mut sim = two_node();
    assert_eq!(sim.run(1e-6), RunOutcome::TimedOut);
    assert!(sim.completion_time().is_none());
}

#[test]
fn runs_are_deterministic_per_seed() {
    let run = |seed| {
        let t = Topology::two_node(RATE, LATENCY).unwrap();
        let opts = SimOptions {
            seed,
            ..SimOptions::default()
        };
        let mut sim = Simulation::with_routes(&t, &TorrentParams::default(), opts).unwrap();
        sim.run(60.0);
        let rows: Vec<String> = sim.trace().iter().map(|r| r.to_string()).collect();
        let nonces: Vec<u32> = sim
            .node_state(NodeId(1))
            .unwrap()
            .pit
            .iter()
            .flat_map(|(_, e)| e.nonces.clone())
            .collect();
        (rows, nonces, sim.completion_time())
    };
    assert_eq!(run(7), run(7));
    assert_eq!(run(7).0, run(8).0);
}

#[test]
fn trace_is_causal_and_conserved() {
    let mut sim = line(
        &[Role::Producer, Role::Router, Role::Consumer],
        SimOptions::default(),
    );
    assert_eq!(sim.run(60.0), RunOutcome::Completed);
    let trace = sim.trace();
    assert!(trace.windows(2).all(|w| w[0].time <= w[1].time));

    let sends = trace.iter().filter(|r| r.dir == TraceDir::Send).count();
    let recvs = trace.iter().filter(|r| r.dir == TraceDir::Recv).count();
    assert_eq!(sends, recvs);

    // Data only arrives at a node after that node sent an Interest for it.
    let mut asked: BTreeSet<(NodeId, Name)> = BTreeSet::new();
    for r in trace {
        match (r.dir, r.kind) {
            (TraceDir::Send, PacketKind::Interest) => {
                asked.insert((r.node, r.name.clone()));
            }
            (TraceDir::Recv, PacketKind::Data) => {
                assert!(
                    asked.contains(&(r.node, r.name.clone())),
                    "unsolicited {} at {}",
                    r.name,
                    r.node
                );
            }
            _ => {}
        }
    }
}

#[test]
fn completion_leaves_no_live_state() {
    let mut sim = line(
        &[Role::Producer, Role::Router, Role::Consumer],
        SimOptions::default(),
    );
    assert_eq!(sim.run(60.0), RunOutcome::Completed);
    assert_eq!(sim.pending_events(), 0);
    for id in [0, 1, 2] {
        assert!(
            sim.snapshot(NodeId(id)).unwrap().pit.is_empty(),
            "node {id}"
        );
    }
    assert!(sim.consumer(NodeId(2)).unwrap().pending().is_empty());
}

#[test]
fn warm_router_serves_a_second_consumer() {
    let mut sim = line(
        &[Role::Producer, Role::Router, Role::Consumer],
        SimOptions::default(),
    );
    assert_eq!(sim.run(60.0), RunOutcome::Completed);
    let bundle: Vec<Name> = sim
        .producer(NodeId(0))
        .unwrap()
        .bundle()
        .objects()
        .map(|d| d.full_name())
        .collect();
    let router = sim.snapshot(NodeId(1)).unwrap();
    assert!(bundle.iter().all(|n| router.cs.contains(n)));
    let before = sim.snapshot(NodeId(0)).unwrap().counters.data_out;

    sim.node_state_mut(NodeId(2)).unwrap().cs.clear();
    sim.add_consumer(NodeId(2)).unwrap();
    assert_eq!(sim.run(120.0), RunOutcome::Completed);
    assert_eq!(sim.snapshot(NodeId(0)).unwrap().counters.data_out, before);
    assert_eq!(
        sim.snapshot(NodeId(2)).unwrap().counters.data_in,
        2 * bundle.len() as u64
    );
}

#[test]
fn two_consumers_share_one_producer_fetch() {
    let mut t = Topology::new();
    for id in 0..4 {
        t.add_node(NodeId(id)).unwrap();
    }
    t.set_role(NodeId(0), Role::Producer).unwrap();
    t.set_role(NodeId(2), Role::Consumer).unwrap();
    t.set_role(NodeId(3), Role::Consumer).unwrap();
    for (a, b) in [(0, 1), (1, 2), (1, 3)] {
        t.add_link(LinkSpec {
            a: NodeId(a),
            b: NodeId(b),
            data_rate_bps: RATE,
            latency_s: LATENCY,
        })
        .unwrap();
    }
    let mut sim =
        Simulation::with_routes(&t, &TorrentParams::default(), SimOptions::default()).unwrap();
    assert_eq!(sim.run(60.0), RunOutcome::Completed);
    assert_eq!(sim.snapshot(NodeId(0)).unwrap().counters.data_out, 14);
    assert_eq!(sim.snapshot(NodeId(0)).unwrap().counters.interests_in, 14);
    for c in [2, 3] {
        assert_eq!(sim.snapshot(NodeId(c)).unwrap().counters.data_in, 14);
    }
}

#[test]
fn corruption_is_caught_by_the_consumer() {
    let t = Topology::two_node(RATE, LATENCY).unwrap();
    let opts = SimOptions {
        corrupt_data_transmission: Some(3),
        ..SimOptions::default()
    };
    let mut sim = Simulation::with_routes(&t, &TorrentParams::default(), opts).unwrap();
    match sim.run(60.0) {
        RunOutcome::Aborted(
            f @ Failure::Consumer {
                error: ConsumerError::DigestMismatch { .. },
                ..
            },
        ) => {
            assert!(f.is_digest_mismatch())
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn corruption_is_caught_by_a_router() {
    let opts = SimOptions {
        corrupt_data_transmission: Some(0),
        ..SimOptions::default()
    };
    let mut sim = line(&[Role::Producer, Role::Router, Role::Consumer], opts);
    match sim.run(60.0) {
        RunOutcome::Aborted(Failure::DigestMismatch { node, .. }) => assert_eq!(node, NodeId(1)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unreachable_consumer_is_a_route_error() {
    let mut t = Topology::new();
    t.add_node(NodeId(0)).unwrap();
    t.add_node(NodeId(1)).unwrap();
    t.set_role(NodeId(0), Role::Producer).unwrap();
    t.set_role(NodeId(1), Role::Consumer).unwrap();
    assert!(Simulation::with_routes(&t, &TorrentParams::default(), SimOptions::default()).is_err());
}

#[test]
fn runs_can_move_between_threads() {
    fn assert_send<T: Send + 'static>() {}
    assert_send::<Simulation>();
    let handles: Vec<_> = (0..4)
        .map(|seed| {
            std::thread::spawn(move || {
                let t = Topology::two_node(RATE, LATENCY).unwrap();
                let opts = SimOptions { seed, ..SimOptions::default() };
                let mut sim = Simulation::with_routes(&t, &TorrentParams::default(), opts).unwrap();
                sim.run(60.0);
                sim.completion_time()
            })
        })
        .collect();
    let times: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert!(times.iter().all(|t| *t == times[0] && t.is_some()));
}
