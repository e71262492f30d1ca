use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifies a communication endpoint of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceId(pub u32);

/// The face connecting a node to its local application.
pub const APP_FACE: FaceId = FaceId(0);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "face{}", self.0)
    }
}

/// Per-face packet and byte statistics. Counters only ever grow.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCounters {
    pub interests_in: u64,
    pub interests_out: u64,
    pub data_in: u64,
    pub data_out: u64,
    pub bytes_in: u64,
    pub bytes_out: u64,
}

impl FaceCounters {
    pub fn record_interest_in(&mut self, bytes: usize) {
        self.interests_in += 1;
        self.bytes_in += bytes as u64;
    }

    pub fn record_interest_out(&mut self, bytes: usize) {
        self.interests_out += 1;
        self.bytes_out += bytes as u64;
    }

    pub fn record_data_in(&mut self, bytes: usize) {
        self.data_in += 1;
        self.bytes_in += bytes as u64;
    }

    pub fn record_data_out(&mut self, bytes: usize) {
        self.data_out += 1;
        self.bytes_out += bytes as u64;
    }
}

impl std::ops::AddAssign for FaceCounters {
    fn add_assign(&mut self, rhs: FaceCounters) {
        self.interests_in += rhs.interests_in;
        self.interests_out += rhs.interests_out;
        self.data_in += rhs.data_in;
        self.data_out += rhs.data_out;
        self.bytes_in += rhs.bytes_in;
        self.bytes_out += rhs.bytes_out;
    }
}
