//! Deterministic discrete-event simulation of an NDN network running
//! nTorrent producers and consumers.

mod engine;
mod event;
mod link;
mod topology;
mod trace;

pub use engine::{
    Failure, NodeSnapshot, PhaseChange, PitSnapshot, RunOutcome, SimError, SimOptions, Simulation,
};
pub use event::{Event, EventKind, EventQueue};
pub use link::{link_delay, Direction, Link};
pub use topology::{compute_routes, LinkSpec, NodeId, Role, RouteError, Topology, TopologyError};
pub use trace::{write_csv, PacketKind, TraceDir, TraceRecord, CSV_HEADER};
