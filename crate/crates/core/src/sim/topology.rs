//! Nodes, roles, links, and static shortest-path routing.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::SimSeconds;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Producer,
    Consumer,
    Router,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSpec {
    pub a: NodeId,
    pub b: NodeId,
    pub data_rate_bps: f64,
    pub latency_s: SimSeconds,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("node {0} declared twice")]
    DuplicateNode(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {node} is already a {existing:?}")]
    RoleConflict { node: NodeId, existing: Role },
    #[error("link from node {0} to itself")]
    SelfLoop(NodeId),
    #[error("link {a}-{b}: data rate must be positive, got {rate}")]
    BadRate { a: NodeId, b: NodeId, rate: f64 },
    #[error("link {a}-{b}: latency must be non-negative, got {latency}")]
    BadLatency { a: NodeId, b: NodeId, latency: f64 },
    #[error("topology has no producer")]
    NoProducer,
    #[error("topology has no consumer")]
    NoConsumer,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("consumer {0} has no path to a producer")]
    UnreachableProducer(NodeId),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Topology {
    nodes: BTreeMap<NodeId, Role>,
    links: Vec<LinkSpec>,
}

impl Topology {
    pub fn new() -> Self {
        Self::default()
    }

    /// Producer 0 and consumer 1 joined by one link.
    pub fn two_node(data_rate_bps: f64, latency_s: SimSeconds) -> Result<Self, TopologyError> {
        Topology::line(&[Role::Producer, Role::Consumer], data_rate_bps, latency_s)
    }

    /// Nodes `0..roles.len()` chained in order by identical links.
    pub fn line(
        roles: &[Role],
        data_rate_bps: f64,
        latency_s: SimSeconds,
    ) -> Result<Self, TopologyError> {
        let mut t = Topology::new();
        for (idx, role) in roles.iter().enumerate() {
            let id = NodeId(idx as u32);
            t.add_node(id)?;
            t.set_role(id, *role)?;
        }
        for idx in 1..roles.len() as u32 {
            t.add_link(LinkSpec {
                a: NodeId(idx - 1),
                b: NodeId(idx),
                data_rate_bps,
                latency_s,
            })?;
        }
        Ok(t)
    }

    pub fn add_node(&mut self, id: NodeId) -> Result<(), TopologyError> {
        if self.nodes.insert(id, Role::Router).is_some() {
            return Err(TopologyError::DuplicateNode(id));
        }
        Ok(())
    }

    /// Assigns a role to a declared router. A node holds at most one role.
    pub fn set_role(&mut self, id: NodeId, role: Role) -> Result<(), TopologyError> {
        let slot = self
            .nodes
            .get_mut(&id)
            .ok_or(TopologyError::UnknownNode(id))?;
        match *slot {
            Role::Router => {
                *slot = role;
                Ok(())
            }
            existing if existing == role => Ok(()),
            existing => Err(TopologyError::RoleConflict { node: id, existing }),
        }
    }

    pub fn add_link(&mut self, spec: LinkSpec) -> Result<(), TopologyError> {
        for end in [spec.a, spec.b] {
            if !self.nodes.contains_key(&end) {
                return Err(TopologyError::UnknownNode(end));
            }
        }
        if spec.a == spec.b {
            return Err(TopologyError::SelfLoop(spec.a));
        }
        if !(spec.data_rate_bps > 0.0 && spec.data_rate_bps.is_finite()) {
            return Err(TopologyError::BadRate {
                a: spec.a,
                b: spec.b,
                rate: spec.data_rate_bps,
            });
        }
        if !(spec.latency_s >= 0.0 && spec.latency_s.is_finite()) {
            return Err(TopologyError::BadLatency {
                a: spec.a,
                b: spec.b,
                latency: spec.latency_s,
            });
        }
        self.links.push(spec);
        Ok(())
    }

    /// Checks that the scenario has something to fetch and someone to fetch it.
    pub fn validate_runnable(&self) -> Result<(), TopologyError> {
        if self.nodes_with(Role::Producer).is_empty() {
            return Err(TopologyError::NoProducer);
        }
        if self.nodes_with(Role::Consumer).is_empty() {
            return Err(TopologyError::NoConsumer);
        }
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, Role)> + '_ {
        self.nodes.iter().map(|(id, role)| (*id, *role))
    }

    pub fn role(&self, id: NodeId) -> Option<Role> {
        self.nodes.get(&id).copied()
    }

    pub fn links(&self) -> &[LinkSpec] {
        &self.links
    }

    pub fn nodes_with(&self, role: Role) -> Vec<NodeId> {
        self.nodes()
            .filter(|(_, r)| *r == role)
            .map(|(id, _)| id)
            .collect()
    }

    fn adjacency(&self) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
        let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> =
            self.nodes.keys().map(|id| (*id, BTreeSet::new())).collect();
        for link in &self.links {
            adj.entry(link.a).or_default().insert(link.b);
            adj.entry(link.b).or_default().insert(link.a);
        }
        adj
    }
}

/// Next-hop node toward the nearest producer, for every node that has a
/// path and is not itself a producer. Paths minimise hop count; ties go to
/// the neighbour with the lowest id.
pub fn compute_routes(topology: &Topology) -> Result<BTreeMap<NodeId, NodeId>, RouteError> {
    let adj = topology.adjacency();
    let mut hops: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut frontier = VecDeque::new();
    for producer in topology.nodes_with(Role::Producer) {
        hops.insert(producer, 0);
        frontier.push_back(producer);
    }
    while let Some(node) = frontier.pop_front() {
        let next = hops[&node] + 1;
        for neighbour in &adj[&node] {
            if !hops.contains_key(neighbour) {
                hops.insert(*neighbour, next);
                frontier.push_back(*neighbour);
            }
        }
    }

    for consumer in topology.nodes_with(Role::Consumer) {
        if !hops.contains_key(&consumer) {
            return Err(RouteError::UnreachableProducer(consumer));
        }
    }

    let mut routes = BTreeMap::new();
    for (node, &distance) in &hops {
        if distance == 0 {
            continue;
        }
        let next_hop = adj[node]
            .iter()
            .find(|n| hops.get(n) == Some(&(distance - 1)))
            .expect("BFS parent exists");
        routes.insert(*node, *next_hop);
    }
    Ok(routes)
}
