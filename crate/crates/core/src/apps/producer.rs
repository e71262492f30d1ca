use std::collections::HashMap;

use log::debug;

use crate::generator::{build_torrent, GenerateError, TorrentBundle, TorrentParams};
use crate::ndn::{Data, Interest, Name};
use crate::torrent::{classify_name, namespace};

/// Serves every object of one torrent bundle by exact full-name match.
#[derive(Debug, Clone)]
pub struct Producer {
    bundle: TorrentBundle,
    served_prefix: Name,
    lookup: HashMap<Name, Data>,
}

impl Producer {
    pub fn new(bundle: TorrentBundle, served_prefix: Name) -> Self {
        let lookup = bundle
            .objects()
            .map(|d| (d.full_name(), d.clone()))
            .collect();
        Producer {
            bundle,
            served_prefix,
            lookup,
        }
    }

    pub fn from_params(params: &TorrentParams) -> Result<Self, GenerateError> {
        let bundle = build_torrent(params)?;
        let prefix = namespace::torrent_prefix(&params.torrent_name)?;
        Ok(Producer::new(bundle, prefix))
    }

    pub fn bundle(&self) -> &TorrentBundle {
        &self.bundle
    }

    pub fn served_prefix(&self) -> &Name {
        &self.served_prefix
    }

    pub fn on_interest(&self, interest: &Interest) -> Option<Data> {
        let kind = classify_name(interest.name());
        let hit = self.lookup.get(interest.name()).cloned();
        debug!(
            "producer: {kind:?} interest for {} ({})",
            interest.name(),
            if hit.is_some() { "hit" } else { "miss" }
        );
        hit
    }
}
