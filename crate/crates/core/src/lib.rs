//! nTorrent over Named Data Networking.
//!
//! A producer publishes a torrent as three kinds of digest-named objects:
//! torrent-file segments cataloguing file manifests, file manifests
//! cataloguing data packets, and the data packets themselves. A consumer
//! fetches them phase by phase over a simulated NDN forwarding plane.
//!
//! - [`ndn`]: names, Interest/Data wire codec, Content Store, PIT, FIB.
//! - [`torrent`]: the torrent-file segment and file manifest objects.
//! - [`generator`]: deterministic synthesis of a complete torrent bundle.
//! - [`apps`]: producer and consumer applications.
//! - [`sim`]: discrete-event engine, links, routing and traces.

pub mod apps;
pub mod generator;
pub mod ndn;
pub mod sim;
pub mod torrent;

/// Simulated time in seconds.
pub type SimSeconds = f64;
