//! Runs the default two-node scenario and prints the trace.

use ntorrent_core::generator::TorrentParams;
use ntorrent_core::sim::{write_csv, NodeId, SimOptions, Simulation, Topology};

fn main() {
    let topology = Topology::two_node(1e6, 0.010).expect("valid topology");
    let mut sim =
        Simulation::with_routes(&topology, &TorrentParams::default(), SimOptions::default())
            .expect("routable");
    let outcome = sim.run(60.0);
    write_csv(sim.trace(), std::io::stdout().lock()).expect("stdout");
    eprintln!("{outcome:?} at {:?}", sim.completion_time());
    eprintln!(
        "{:#?}",
        sim.snapshot(NodeId(1))
            .map(|s| (s.cs.len(), s.pit.len(), s.counters))
    );
}
