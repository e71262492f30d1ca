//! Content Store: an unbounded, insertion-ordered cache keyed by full name.

use indexmap::IndexMap;

use super::name::Name;
use super::packet::Data;

#[derive(Debug, Clone, Default)]
pub struct ContentStore {
    entries: IndexMap<Name, Data>,
}

impl ContentStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `data` under its full name. Returns false when it was already cached.
    pub fn insert(&mut self, data: Data) -> bool {
        let full = data.full_name();
        if self.entries.contains_key(&full) {
            return false;
        }
        self.entries.insert(full, data);
        true
    }

    /// Exact-match lookup by full name.
    pub fn lookup(&self, name: &Name) -> Option<&Data> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.entries.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cached full names in insertion order.
    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Data)> {
        self.entries.iter()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Re-derives every key from its Data.
    pub fn is_sound(&self) -> bool {
        self.entries
            .iter()
            .all(|(name, data)| *name == data.full_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ndn::ContentType;

    fn data(wire: &str, payload: &[u8]) -> Data {
        Data::new(
            wire.parse().unwrap(),
            ContentType::DataPacket,
            payload.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn empty_store_misses() {
        let cs = ContentStore::new();
        assert!(cs.lookup(&data("/a", b"A").full_name()).is_none());
        assert!(cs.is_empty());
    }

    #[test]
    fn insert_then_lookup_and_idempotence() {
        let mut cs = ContentStore::new();
        let d = data("/a", b"A");
        assert!(cs.insert(d.clone()));
        assert!(!cs.insert(d.clone()));
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.lookup(&d.full_name()), Some(&d));
    }

    #[test]
    fn distinct_names_coexist_in_insertion_order() {
        let mut cs = ContentStore::new();
        let (d1, d2) = (data("/b", b"A"), data("/a", b"A"));
        cs.insert(d1.clone());
        cs.insert(d2.clone());
        assert_eq!(cs.len(), 2);
        let names: Vec<_> = cs.names().cloned().collect();
        assert_eq!(names, vec![d1.full_name(), d2.full_name()]);
        assert!(cs.is_sound());
    }

    #[test]
    fn lookup_is_exact_on_digest() {
        let mut cs = ContentStore::new();
        let d = data("/a", b"A");
        cs.insert(d.clone());
        let other_digest = data("/a", b"B").full_name();
        assert_eq!(other_digest.wire_name(), d.full_name().wire_name());
        assert!(cs.lookup(&other_digest).is_none());
    }
}
