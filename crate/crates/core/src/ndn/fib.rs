//! Forwarding Information Base with longest-prefix match on name components.

use std::collections::HashMap;

use thiserror::Error;

use super::face::FaceId;
use super::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("route for {0} has no next hop")]
pub struct EmptyRoute(pub Name);

#[derive(Debug, Clone, Default)]
pub struct Fib {
    routes: HashMap<Name, Vec<FaceId>>,
    longest: usize,
}

impl Fib {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces the next-hop list for `prefix`.
    pub fn set_route(&mut self, prefix: Name, faces: Vec<FaceId>) -> Result<(), EmptyRoute> {
        if faces.is_empty() {
            return Err(EmptyRoute(prefix));
        }
        self.longest = self.longest.max(prefix.len());
        self.routes.insert(prefix, faces);
        Ok(())
    }

    /// Appends `face` to the next hops of `prefix` unless already present.
    pub fn add_next_hop(&mut self, prefix: Name, face: FaceId) {
        self.longest = self.longest.max(prefix.len());
        let faces = self.routes.entry(prefix).or_default();
        if !faces.contains(&face) {
            faces.push(face);
        }
    }

    pub fn next_hops(&self, prefix: &Name) -> Option<&[FaceId]> {
        self.routes.get(prefix).map(Vec::as_slice)
    }

    /// First next hop of the longest registered prefix of `name`.
    pub fn lpm(&self, name: &Name) -> Option<FaceId> {
        let start = name.len().min(self.longest);
        (1..=start)
            .rev()
            .find_map(|len| self.routes.get(&name.prefix(len)))
            .and_then(|faces| faces.first().copied())
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    /// Routes sorted by prefix, for stable output.
    pub fn routes(&self) -> Vec<(&Name, &[FaceId])> {
        let mut out: Vec<_> = self.routes.iter().map(|(n, f)| (n, f.as_slice())).collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        out
    }
}
