//! Named Data Networking primitives: names, packets, and the per-node
//! forwarding tables (Content Store, PIT, FIB).

mod cs;
mod face;
mod fib;
mod name;
mod node;
mod packet;
mod pit;
pub mod tlv;

pub use cs::ContentStore;
pub use face::{FaceCounters, FaceId, APP_FACE};
pub use fib::{EmptyRoute, Fib};
pub use name::{Digest, Name, NameError, DIGEST_TAG};
pub use node::{DropReason, NodeAction, NodeState};
pub use packet::{
    compute_implicit_digest, decode_packet, encode_packet, ContentType, Data, Interest,
    MalformedPacket, Packet,
};
pub use pit::{Pit, PitEntry, PitInsert, DEFAULT_PIT_LIFETIME};
