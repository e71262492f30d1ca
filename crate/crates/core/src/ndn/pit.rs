//! Pending Interest Table.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use serde::Serialize;

use super::face::FaceId;
use super::name::Name;
use super::packet::Interest;
use crate::SimSeconds;

/// Default lifetime of a PIT entry in simulated seconds.
pub const DEFAULT_PIT_LIFETIME: SimSeconds = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PitInsert {
    /// No live entry existed; the interest should travel upstream.
    NewEntry,
    /// Joined a live entry under a fresh nonce; nothing goes upstream.
    Aggregated,
    /// The nonce was already seen for this name; drop the interest.
    DuplicateNonce,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PitEntry {
    pub faces: BTreeSet<FaceId>,
    pub nonces: BTreeSet<u32>,
    pub expiry: SimSeconds,
}

impl PitEntry {
    fn is_live(&self, now: SimSeconds) -> bool {
        now < self.expiry
    }
}

#[derive(Debug, Clone)]
pub struct Pit {
    entries: IndexMap<Name, PitEntry>,
    lifetime: SimSeconds,
}

impl Default for Pit {
    fn default() -> Self {
        Pit::new(DEFAULT_PIT_LIFETIME)
    }
}

impl Pit {
    pub fn new(lifetime: SimSeconds) -> Self {
        Pit {
            entries: IndexMap::new(),
            lifetime,
        }
    }

    pub fn lifetime(&self) -> SimSeconds {
        self.lifetime
    }

    pub fn on_interest(&mut self, interest: &Interest, face: FaceId, now: SimSeconds) -> PitInsert {
        let expiry = now + self.lifetime;
        match self.entries.get_mut(interest.name()) {
            Some(entry) if entry.is_live(now) => {
                if !entry.nonces.insert(interest.nonce()) {
                    return PitInsert::DuplicateNonce;
                }
                entry.faces.insert(face);
                entry.expiry = entry.expiry.max(expiry);
                PitInsert::Aggregated
            }
            _ => {
                let entry = PitEntry {
                    faces: BTreeSet::from([face]),
                    nonces: BTreeSet::from([interest.nonce()]),
                    expiry,
                };
                self.entries.insert(interest.name().clone(), entry);
                PitInsert::NewEntry
            }
        }
    }

    /// Consumes the entry for `full_name`, returning its downstream faces.
    ///
    /// Returns an empty set when there is no live entry (unsolicited data).
    pub fn on_data(&mut self, full_name: &Name, now: SimSeconds) -> BTreeSet<FaceId> {
        match self.entries.shift_remove(full_name) {
            Some(entry) if entry.is_live(now) => entry.faces,
            _ => BTreeSet::new(),
        }
    }

    /// A live entry whose name shares `wire_name` but carries another digest.
    pub fn find_by_wire_name(
        &self,
        wire_name: &Name,
        now: SimSeconds,
    ) -> Option<(&Name, &PitEntry)> {
        self.entries.iter().find(|(name, entry)| {
            entry.is_live(now) && name.len() == wire_name.len() + 1 && wire_name.is_prefix_of(name)
        })
    }

    pub fn get(&self, name: &Name) -> Option<&PitEntry> {
        self.entries.get(name)
    }

    pub fn purge_expired(&mut self, now: SimSeconds) -> usize {
        let before = self.entries.len();
        self.entries.retain(|_, entry| entry.is_live(now));
        before - self.entries.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &PitEntry)> {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndn::Digest;

    fn interest(wire: &str, nonce: u32) -> Interest {
        let name = wire
            .parse::<Name>()
            .unwrap()
            .with_digest(&Digest([1; 32]))
            .unwrap();
        Interest::new(name, nonce).unwrap()
    }

    #[test]
    fn first_interest_creates_entry_with_expiry() {
        let mut pit = Pit::default();
        assert_eq!(
            pit.on_interest(&interest("/x", 1), FaceId(1), 2.0),
            PitInsert::NewEntry
        );
        let entry = pit.get(interest("/x", 1).name()).unwrap();
        assert_eq!(entry.expiry, 6.0);
        assert_eq!(entry.faces, BTreeSet::from([FaceId(1)]));
    }

    #[test]
    fn fresh_nonce_aggregates_faces() {
        let mut pit = Pit::default();
        pit.on_interest(&interest("/x", 1), FaceId(1), 0.0);
        assert_eq!(
            pit.on_interest(&interest("/x", 2), FaceId(3), 0.1),
            PitInsert::Aggregated
        );
        assert_eq!(pit.len(), 1);
        assert_eq!(pit.get(interest("/x", 1).name()).unwrap().faces.len(), 2);
    }

    #[test]
    fn replayed_nonce_is_duplicate() {
        let mut pit = Pit::default();
        pit.on_interest(&interest("/x", 9), FaceId(1), 0.0);
        assert_eq!(
            pit.on_interest(&interest("/x", 9), FaceId(2), 0.5),
            PitInsert::DuplicateNonce
        );
        assert_eq!(pit.get(interest("/x", 9).name()).unwrap().faces.len(), 1);
    }

    #[test]
    fn data_consumes_entry_once() {
        let mut pit = Pit::default();
        let name = interest("/x", 1).name().clone();
        pit.on_interest(&interest("/x", 1), FaceId(1), 0.0);
        pit.on_interest(&interest("/x", 2), FaceId(3), 0.0);
        assert_eq!(
            pit.on_data(&name, 1.0),
            BTreeSet::from([FaceId(1), FaceId(3)])
        );
        assert!(pit.on_data(&name, 1.0).is_empty());
        assert!(pit.is_empty());
    }

    #[test]
    fn unsolicited_data_yields_no_faces() {
        let mut pit = Pit::default();
        assert!(pit.on_data(interest("/y", 1).name(), 0.0).is_empty());
    }

    #[test]
    fn expired_entries_are_replaced_and_not_satisfied() {
        let mut pit = Pit::new(1.0);
        let name = interest("/x", 1).name().clone();
        pit.on_interest(&interest("/x", 1), FaceId(1), 0.0);
        assert!(pit.on_data(&name, 1.5).is_empty());
        pit.on_interest(&interest("/x", 1), FaceId(1), 0.0);
        assert_eq!(
            pit.on_interest(&interest("/x", 1), FaceId(2), 2.0),
            PitInsert::NewEntry
        );
        assert_eq!(pit.purge_expired(3.5), 1);
    }

    #[test]
    fn wire_name_search_ignores_digest() {
        let mut pit = Pit::default();
        pit.on_interest(&interest("/x/y", 1), FaceId(1), 0.0);
        assert!(pit
            .find_by_wire_name(&"/x/y".parse().unwrap(), 0.0)
            .is_some());
        assert!(pit.find_by_wire_name(&"/x".parse().unwrap(), 0.0).is_none());
    }
}
