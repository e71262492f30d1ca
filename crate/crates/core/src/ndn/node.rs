//! Per-node forwarding: CS short-circuit, PIT aggregation, FIB lookup and
//! the symmetric Data return path.

use std::collections::BTreeMap;

use super::cs::ContentStore;
use super::face::{FaceCounters, FaceId, APP_FACE};
use super::fib::Fib;
use super::name::Name;
use super::packet::{Data, Interest};
use super::pit::{Pit, PitInsert};
use crate::SimSeconds;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DropReason {
    DuplicateNonce,
    NoRoute,
    Unsolicited,
    /// Data answered a pending wire name but its digest differs from `expected`.
    DigestMismatch {
        expected: Name,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeAction {
    SendInterest { interest: Interest, face: FaceId },
    SendData { data: Data, face: FaceId },
    InterestToApp(Interest),
    DataToApp(Data),
    Drop { name: Name, reason: DropReason },
}

#[derive(Debug, Clone, Default)]
pub struct NodeState {
    pub cs: ContentStore,
    pub pit: Pit,
    pub fib: Fib,
    app_prefixes: Vec<Name>,
    counters: BTreeMap<FaceId, FaceCounters>,
}

impl NodeState {
    pub fn new(pit_lifetime: SimSeconds) -> Self {
        NodeState {
            pit: Pit::new(pit_lifetime),
            ..Default::default()
        }
    }

    /// Registers the local application as the source for `prefix`.
    pub fn register_app_prefix(&mut self, prefix: Name) {
        if !self.app_prefixes.contains(&prefix) {
            self.app_prefixes.push(prefix);
        }
    }

    pub fn app_prefixes(&self) -> &[Name] {
        &self.app_prefixes
    }

    pub fn face_counters(&self) -> &BTreeMap<FaceId, FaceCounters> {
        &self.counters
    }

    /// Totals over every face except the application face.
    pub fn network_counters(&self) -> FaceCounters {
        let mut total = FaceCounters::default();
        for (_, c) in self.counters.iter().filter(|(f, _)| **f != APP_FACE) {
            total += *c;
        }
        total
    }

    fn counter(&mut self, face: FaceId) -> &mut FaceCounters {
        self.counters.entry(face).or_default()
    }

    pub fn on_interest(
        &mut self,
        interest: Interest,
        in_face: FaceId,
        now: SimSeconds,
    ) -> Vec<NodeAction> {
        self.counter(in_face)
            .record_interest_in(interest.encode().len());

        if let Some(hit) = self.cs.lookup(interest.name()).cloned() {
            return vec![self.emit_data(hit, in_face)];
        }

        match self.pit.on_interest(&interest, in_face, now) {
            PitInsert::DuplicateNonce => vec![NodeAction::Drop {
                name: interest.name().clone(),
                reason: DropReason::DuplicateNonce,
            }],
            PitInsert::Aggregated => Vec::new(),
            PitInsert::NewEntry => {
                let served_locally = in_face != APP_FACE
                    && self
                        .app_prefixes
                        .iter()
                        .any(|p| p.is_prefix_of(interest.name()));
                if served_locally {
                    let bytes = interest.encode().len();
                    self.counter(APP_FACE).record_interest_out(bytes);
                    return vec![NodeAction::InterestToApp(interest)];
                }
                match self.fib.lpm(interest.name()) {
                    Some(face) if face != in_face => {
                        let bytes = interest.encode().len();
                        self.counter(face).record_interest_out(bytes);
                        vec![NodeAction::SendInterest { interest, face }]
                    }
                    _ => vec![NodeAction::Drop {
                        name: interest.name().clone(),
                        reason: DropReason::NoRoute,
                    }],
                }
            }
        }
    }

    pub fn on_data(&mut self, data: Data, in_face: FaceId, now: SimSeconds) -> Vec<NodeAction> {
        let bytes = data.encode().len();
        self.counter(in_face).record_data_in(bytes);

        let full_name = data.full_name();
        let faces = self.pit.on_data(&full_name, now);
        if faces.is_empty() {
            return match self.pit.find_by_wire_name(data.wire_name(), now) {
                // Let the requesting application see and reject the bad object.
                Some((_, entry)) if entry.faces.contains(&APP_FACE) => {
                    self.counter(APP_FACE).record_data_out(bytes);
                    vec![NodeAction::DataToApp(data)]
                }
                Some((expected, _)) => vec![NodeAction::Drop {
                    name: full_name,
                    reason: DropReason::DigestMismatch {
                        expected: expected.clone(),
                    },
                }],
                None => vec![NodeAction::Drop {
                    name: full_name,
                    reason: DropReason::Unsolicited,
                }],
            };
        }

        self.cs.insert(data.clone());
        faces
            .into_iter()
            .map(|face| self.emit_data(data.clone(), face))
            .collect()
    }

    fn emit_data(&mut self, data: Data, face: FaceId) -> NodeAction {
        self.counter(face).record_data_out(data.encode().len());
        if face == APP_FACE {
            NodeAction::DataToApp(data)
        } else {
            NodeAction::SendData { data, face }
        }
    }
}
