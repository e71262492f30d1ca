//! Send/receive records and their CSV form.

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;

use crate::ndn::Name;
use crate::SimSeconds;

use super::topology::NodeId;

pub const CSV_HEADER: &str = "time,node,dir,kind,name,bytes";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceDir {
    Send,
    Recv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PacketKind {
    Interest,
    Data,
}

impl fmt::Display for TraceDir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceDir::Send => "send",
            TraceDir::Recv => "recv",
        })
    }
}

impl fmt::Display for PacketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PacketKind::Interest => "interest",
            PacketKind::Data => "data",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub time: SimSeconds,
    pub node: NodeId,
    pub dir: TraceDir,
    pub kind: PacketKind,
    pub name: Name,
    pub bytes: usize,
}

impl fmt::Display for TraceRecord {
    /// One CSV row, time with nine decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.9},{},{},{},{},{}",
            self.time, self.node, self.dir, self.kind, self.name, self.bytes
        )
    }
}

pub fn write_csv<W: Write>(records: &[TraceRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for record in records {
        writeln!(out, "{record}")?;
    }
    out.flush()
}
