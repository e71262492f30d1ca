//! The event loop tying nodes, links, and applications together.
//!
//! Nodes process packets in zero simulated time; only links consume time.
//! Every packet crosses a link as its encoded bytes, and the receiving node
//! decodes them again.

use std::collections::{BTreeMap, VecDeque};

use log::{debug, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::apps::{AppAction, Consumer, ConsumerError, Phase, Producer};
use crate::generator::{build_torrent, GenerateError, TorrentParams};
use crate::ndn::{
    decode_packet, DropReason, FaceCounters, FaceId, Name, NodeAction, NodeState, Packet, APP_FACE,
    DEFAULT_PIT_LIFETIME,
};
use crate::torrent::namespace;
use crate::SimSeconds;

use super::event::{EventKind, EventQueue};
use super::link::{Direction, Link};
use super::topology::{compute_routes, NodeId, Role, RouteError, Topology};
use super::trace::{PacketKind, TraceDir, TraceRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub seed: u64,
    pub pit_lifetime: SimSeconds,
    pub print_payloads: bool,
    /// Flip the last byte of the n-th Data packet put on any link (0-based).
    pub corrupt_data_transmission: Option<u64>,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            seed: 0,
            pit_lifetime: DEFAULT_PIT_LIFETIME,
            print_payloads: false,
            corrupt_data_transmission: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Consumer {
        node: NodeId,
        error: ConsumerError,
    },
    /// A forwarder received Data whose digest does not match the pending name.
    DigestMismatch {
        node: NodeId,
        expected: Name,
        actual: Name,
    },
}

impl Failure {
    pub fn is_digest_mismatch(&self) -> bool {
        matches!(
            self,
            Failure::DigestMismatch { .. }
                | Failure::Consumer {
                    error: ConsumerError::DigestMismatch { .. },
                    ..
                }
        )
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Consumer { node, error } => write!(f, "consumer on node {node}: {error}"),
            Failure::DigestMismatch {
                node,
                expected,
                actual,
            } => {
                write!(
                    f,
                    "node {node}: digest mismatch, requested {expected}, received {actual}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// Every consumer emitted Completed.
    Completed,
    /// The queue drained with at least one consumer unfinished.
    Idle,
    /// Events remained past the time limit.
    TimedOut,
    Aborted(Failure),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} hosts a producer")]
    ProducerNode(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseChange {
    pub phase: Phase,
    pub enter_time_s: SimSeconds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PitSnapshot {
    pub name: Name,
    pub faces: Vec<FaceId>,
    pub nonces: Vec<u32>,
    pub expiry: SimSeconds,
}

/// Read-only view of one node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeSnapshot {
    pub id: NodeId,
    pub role: Role,
    pub time: SimSeconds,
    pub cs: Vec<Name>,
    pub pit: Vec<PitSnapshot>,
    /// Totals over link faces.
    pub counters: FaceCounters,
    pub faces: BTreeMap<FaceId, FaceCounters>,
}

#[derive(Debug, Clone)]
struct ConsumerSlot {
    consumer: Consumer,
    phases: Vec<PhaseChange>,
    completed_at: Option<SimSeconds>,
}

#[derive(Debug, Clone)]
enum App {
    Producer(Producer),
    Consumer(Box<ConsumerSlot>),
}

#[derive(Debug, Clone)]
struct SimNode {
    id: NodeId,
    role: Role,
    state: NodeState,
    app: Option<App>,
    faces: BTreeMap<FaceId, (usize, Direction)>,
}

impl SimNode {
    fn attach(&mut self, link: usize, dir: Direction) -> FaceId {
        let face = FaceId(self.faces.len() as u32 + 1);
        self.faces.insert(face, (link, dir));
        face
    }

    fn consumer_slot(&mut self) -> Option<&mut ConsumerSlot> {
        match &mut self.app {
            Some(App::Consumer(slot)) => Some(slot),
            _ => None,
        }
    }
}

pub struct Simulation {
    now: SimSeconds,
    queue: EventQueue,
    nodes: Vec<SimNode>,
    index: BTreeMap<NodeId, usize>,
    links: Vec<Link>,
    trace: Vec<TraceRecord>,
    rng: ChaCha8Rng,
    options: SimOptions,
    params: TorrentParams,
    served_prefix: Name,
    data_transmissions: u64,
    failure: Option<Failure>,
}

impl Simulation {
    /// Builds nodes, links and applications without any FIB routes.
    /// Consumers are scheduled to start at time zero.
    pub fn new(
        topology: &Topology,
        params: &TorrentParams,
        options: SimOptions,
    ) -> Result<Simulation, SimError> {
        let served_prefix =
            namespace::torrent_prefix(&params.torrent_name).map_err(GenerateError::from)?;
        let producer = if topology.nodes_with(Role::Producer).is_empty() {
            None
        } else {
            Some(Producer::new(build_torrent(params)?, served_prefix.clone()))
        };

        let mut sim = Simulation {
            now: 0.0,
            queue: EventQueue::new(),
            nodes: Vec::new(),
            index: BTreeMap::new(),
            links: Vec::new(),
            trace: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(options.seed),
            params: params.clone(),
            served_prefix,
            data_transmissions: 0,
            failure: None,
            options,
        };

        for (id, role) in topology.nodes() {
            let mut state = NodeState::new(sim.options.pit_lifetime);
            let app = match role {
                Role::Producer => {
                    state.register_app_prefix(sim.served_prefix.clone());
                    producer.clone().map(App::Producer)
                }
                Role::Consumer => Some(App::Consumer(Box::new(sim.new_consumer_slot()))),
                Role::Router => None,
            };
            sim.index.insert(id, sim.nodes.len());
            sim.nodes.push(SimNode {
                id,
                role,
                state,
                app,
                faces: BTreeMap::new(),
            });
        }

        for spec in topology.links() {
            let link_idx = sim.links.len();
            let face_a = sim.node_mut(spec.a).attach(link_idx, Direction::AToB);
            let face_b = sim.node_mut(spec.b).attach(link_idx, Direction::BToA);
            sim.links.push(Link::new(
                (spec.a, face_a),
                (spec.b, face_b),
                spec.data_rate_bps,
                spec.latency_s,
            ));
        }

        for id in topology.nodes_with(Role::Consumer) {
            sim.queue.schedule(0.0, EventKind::AppTimer { node: id });
        }
        Ok(sim)
    }

    /// [`Simulation::new`] plus shortest-path FIB routes toward the producers.
    pub fn with_routes(
        topology: &Topology,
        params: &TorrentParams,
        options: SimOptions,
    ) -> Result<Simulation, SimError> {
        let routes = compute_routes(topology)?;
        let mut sim = Simulation::new(topology, params, options)?;
        sim.install_routes(&routes);
        Ok(sim)
    }

    /// Points each node's FIB entry for the served prefix at the lowest
    /// face leading to its next hop.
    pub fn install_routes(&mut self, routes: &BTreeMap<NodeId, NodeId>) {
        for (node, next_hop) in routes {
            let idx = self.index[node];
            let face = self.nodes[idx]
                .faces
                .iter()
                .find(|(_, (link, dir))| self.links[*link].far_end(*dir).0 == *next_hop)
                .map(|(face, _)| *face);
            if let Some(face) = face {
                self.nodes[idx]
                    .state
                    .fib
                    .add_next_hop(self.served_prefix.clone(), face);
            }
        }
    }

    /// Puts a fresh consumer on `node`, starting at the current time.
    pub fn add_consumer(&mut self, node: NodeId) -> Result<(), SimError> {
        let slot = self.new_consumer_slot();
        let idx = *self.index.get(&node).ok_or(SimError::UnknownNode(node))?;
        let target = &mut self.nodes[idx];
        if target.role == Role::Producer {
            return Err(SimError::ProducerNode(node));
        }
        target.role = Role::Consumer;
        target.app = Some(App::Consumer(Box::new(slot)));
        self.queue.schedule(self.now, EventKind::AppTimer { node });
        Ok(())
    }

    fn new_consumer_slot(&self) -> ConsumerSlot {
        ConsumerSlot {
            consumer: Consumer::new(self.params.clone())
                .with_print_payloads(self.options.print_payloads),
            phases: Vec::new(),
            completed_at: None,
        }
    }

    fn node_mut(&mut self, id: NodeId) -> &mut SimNode {
        let idx = self.index[&id];
        &mut self.nodes[idx]
    }

    fn node(&self, id: NodeId) -> Option<&SimNode> {
        self.index.get(&id).map(|idx| &self.nodes[*idx])
    }

    pub fn now(&self) -> SimSeconds {
        self.now
    }

    pub fn params(&self) -> &TorrentParams {
        &self.params
    }

    pub fn options(&self) -> &SimOptions {
        &self.options
    }

    pub fn served_prefix(&self) -> &Name {
        &self.served_prefix
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn pending_events(&self) -> usize {
        self.queue.len()
    }

    pub fn failure(&self) -> Option<&Failure> {
        self.failure.as_ref()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    pub fn role(&self, id: NodeId) -> Option<Role> {
        self.node(id).map(|n| n.role)
    }

    pub fn node_state(&self, id: NodeId) -> Option<&NodeState> {
        self.node(id).map(|n| &n.state)
    }

    pub fn node_state_mut(&mut self, id: NodeId) -> Option<&mut NodeState> {
        let idx = *self.index.get(&id)?;
        Some(&mut self.nodes[idx].state)
    }

    pub fn producer(&self, id: NodeId) -> Option<&Producer> {
        match &self.node(id)?.app {
            Some(App::Producer(p)) => Some(p),
            _ => None,
        }
    }

    pub fn consumer(&self, id: NodeId) -> Option<&Consumer> {
        match &self.node(id)?.app {
            Some(App::Consumer(slot)) => Some(&slot.consumer),
            _ => None,
        }
    }

    pub fn consumer_ids(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| matches!(n.app, Some(App::Consumer(_))))
            .map(|n| n.id)
            .collect()
    }

    pub fn phase_history(&self, id: NodeId) -> Option<&[PhaseChange]> {
        match &self.node(id)?.app {
            Some(App::Consumer(slot)) => Some(&slot.phases),
            _ => None,
        }
    }

    pub fn consumer_completed_at(&self, id: NodeId) -> Option<SimSeconds> {
        match &self.node(id)?.app {
            Some(App::Consumer(slot)) => slot.completed_at,
            _ => None,
        }
    }

    /// Time the last consumer completed, once all have.
    pub fn completion_time(&self) -> Option<SimSeconds> {
        if !self.all_consumers_done() {
            return None;
        }
        self.consumer_ids()
            .into_iter()
            .filter_map(|id| self.consumer_completed_at(id))
            .reduce(f64::max)
    }

    fn all_consumers_done(&self) -> bool {
        let mut consumers = self.nodes.iter().filter_map(|n| match &n.app {
            Some(App::Consumer(slot)) => Some(slot.consumer.is_done()),
            _ => None,
        });
        let first = consumers.next();
        first == Some(true) && consumers.all(|done| done)
    }

    pub fn snapshot(&self, id: NodeId) -> Option<NodeSnapshot> {
        let node = self.node(id)?;
        let pit = node
            .state
            .pit
            .iter()
            .filter(|(_, e)| e.expiry > self.now)
            .map(|(name, e)| PitSnapshot {
                name: name.clone(),
                faces: e.faces.iter().copied().collect(),
                nonces: e.nonces.iter().copied().collect(),
                expiry: e.expiry,
            })
            .collect();
        Some(NodeSnapshot {
            id,
            role: node.role,
            time: self.now,
            cs: node.state.cs.names().cloned().collect(),
            pit,
            counters: node.state.network_counters(),
            faces: node.state.face_counters().clone(),
        })
    }

    pub fn run(&mut self, max_time: SimSeconds) -> RunOutcome {
        while let Some(next) = self.queue.peek_time() {
            if let Some(failure) = &self.failure {
                return RunOutcome::Aborted(failure.clone());
            }
            if next > max_time {
                return if self.all_consumers_done() {
                    RunOutcome::Completed
                } else {
                    RunOutcome::TimedOut
                };
            }
            let event = self.queue.pop().expect("peeked");
            self.now = event.time;
            match event.kind {
                EventKind::PacketArrival { node, face, bytes } => {
                    self.on_arrival(node, face, &bytes)
                }
                EventKind::AppTimer { node } => self.on_app_timer(node),
            }
        }
        if let Some(failure) = &self.failure {
            return RunOutcome::Aborted(failure.clone());
        }
        if self.all_consumers_done() {
            RunOutcome::Completed
        } else {
            RunOutcome::Idle
        }
    }

    fn on_app_timer(&mut self, node: NodeId) {
        let idx = self.index[&node];
        let Some(slot) = self.nodes[idx].consumer_slot() else {
            return;
        };
        let result = slot.consumer.start();
        let actions = self.after_consumer_callback(idx, result);
        self.execute(idx, actions);
    }

    fn on_arrival(&mut self, node: NodeId, face: FaceId, bytes: &[u8]) {
        let packet = match decode_packet(bytes) {
            Ok(p) => p,
            Err(e) => {
                warn!("node {node}: dropping undecodable packet on {face}: {e}");
                return;
            }
        };
        let idx = self.index[&node];
        let (kind, name) = describe(&packet);
        self.trace.push(TraceRecord {
            time: self.now,
            node,
            dir: TraceDir::Recv,
            kind,
            name,
            bytes: bytes.len(),
        });
        let now = self.now;
        let state = &mut self.nodes[idx].state;
        let actions = match packet {
            Packet::Interest(i) => state.on_interest(i, face, now),
            Packet::Data(d) => state.on_data(d, face, now),
        };
        self.execute(idx, actions);
    }

    /// Runs node actions to a fixed point; app callbacks feed more actions.
    fn execute(&mut self, idx: usize, actions: Vec<NodeAction>) {
        let mut work: VecDeque<NodeAction> = actions.into();
        while let Some(action) = work.pop_front() {
            if self.failure.is_some() {
                return;
            }
            match action {
                NodeAction::SendInterest { interest, face } => {
                    self.transmit(idx, face, Packet::Interest(interest))
                }
                NodeAction::SendData { data, face } => self.transmit(idx, face, Packet::Data(data)),
                NodeAction::InterestToApp(interest) => {
                    let reply = match &self.nodes[idx].app {
                        Some(App::Producer(p)) => p.on_interest(&interest),
                        _ => None,
                    };
                    if let Some(data) = reply {
                        let now = self.now;
                        work.extend(self.nodes[idx].state.on_data(data, APP_FACE, now));
                    }
                }
                NodeAction::DataToApp(data) => {
                    let Some(slot) = self.nodes[idx].consumer_slot() else {
                        continue;
                    };
                    let result = slot.consumer.on_data(data);
                    work.extend(self.after_consumer_callback(idx, result));
                }
                NodeAction::Drop { name, reason } => {
                    let node = self.nodes[idx].id;
                    debug!("node {node}: dropped {name}: {reason:?}");
                    if let DropReason::DigestMismatch { expected } = reason {
                        self.failure = Some(Failure::DigestMismatch {
                            node,
                            expected,
                            actual: name,
                        });
                    }
                }
            }
        }
    }

    /// Turns app actions into interests entering the node on its app face.
    fn after_consumer_callback(
        &mut self,
        idx: usize,
        result: Result<Vec<AppAction>, ConsumerError>,
    ) -> Vec<NodeAction> {
        let node = self.nodes[idx].id;
        let actions = match result {
            Ok(actions) => actions,
            Err(error) => {
                self.failure = Some(Failure::Consumer { node, error });
                return Vec::new();
            }
        };
        let now = self.now;
        let mut node_actions = Vec::new();
        for action in actions {
            match action {
                AppAction::ExpressInterest(name) => {
                    let sim_node = &mut self.nodes[idx];
                    let Some(App::Consumer(slot)) = &mut sim_node.app else {
                        unreachable!()
                    };
                    match slot.consumer.make_interest(name, &mut self.rng) {
                        Ok(interest) => {
                            node_actions.extend(sim_node.state.on_interest(interest, APP_FACE, now))
                        }
                        Err(error) => {
                            self.failure = Some(Failure::Consumer { node, error });
                            break;
                        }
                    }
                }
                AppAction::Completed => {
                    if let Some(slot) = self.nodes[idx].consumer_slot() {
                        slot.completed_at = Some(now);
                    }
                }
            }
        }
        if let Some(slot) = self.nodes[idx].consumer_slot() {
            let phase = slot.consumer.phase();
            if slot.phases.last().map(|p| p.phase) != Some(phase) {
                slot.phases.push(PhaseChange {
                    phase,
                    enter_time_s: now,
                });
            }
        }
        node_actions
    }

    fn transmit(&mut self, idx: usize, face: FaceId, packet: Packet) {
        let node = self.nodes[idx].id;
        let Some(&(link_idx, dir)) = self.nodes[idx].faces.get(&face) else {
            warn!("node {node}: no link behind {face}");
            return;
        };
        let (kind, name) = describe(&packet);
        let mut bytes = packet.encode();
        if kind == PacketKind::Data {
            if self.options.corrupt_data_transmission == Some(self.data_transmissions) {
                // The payload is the last field, so this flips a payload byte.
                *bytes.last_mut().expect("encoded packets are non-empty") ^= 0x01;
            }
            self.data_transmissions += 1;
        }
        let link = &mut self.links[link_idx];
        let (_, arrival) = link.delay(bytes.len(), dir, self.now);
        let (far_node, far_face) = link.far_end(dir);
        self.trace.push(TraceRecord {
            time: self.now,
            node,
            dir: TraceDir::Send,
            kind,
            name,
            bytes: bytes.len(),
        });
        self.queue.schedule(
            arrival,
            EventKind::PacketArrival {
                node: far_node,
                face: far_face,
                bytes,
            },
        );
    }
}

fn describe(packet: &Packet) -> (PacketKind, Name) {
    match packet {
        Packet::Interest(i) => (PacketKind::Interest, i.name().clone()),
        Packet::Data(d) => (PacketKind::Data, d.full_name()),
    }
}
